"""Linked Data front door over a published snapshot.

Requests hit permanent URLs; resources answer by content negotiation
(HTML browsers get a 303 to the documentation page, RDF clients get the
resource's metadata graph), everything else resolves through the redirect
table. The snapshot is immutable; publishing means swapping in a new one.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import urlsplit

from .errors import NotFoundError, SnapshotFormatError
from .purl import RedirectRule, RedirectTable, resolve_purl
from .rdf import (
    RDF_TYPE,
    BlankNode,
    Iri,
    Literal,
    Quad,
    RdfDataset,
    RdfFormat,
    serialize_document,
)
from .sitegen import report_slug
from .vocab import VOCAB, Vocab

__all__ = [
    "BIND_ENV_VAR",
    "RedirectRule",
    "RedirectTable",
    "Representation",
    "Resource",
    "Snapshot",
    "SnapshotHolder",
    "load_snapshot",
    "negotiate",
    "resolve_purl",
    "route",
    "serve",
]

BIND_ENV_VAR = "BENCHCAT_BIND"
DEFAULT_BIND = "127.0.0.1:8080"

_RDF_OFFERS = (
    RdfFormat.TURTLE,
    RdfFormat.NQUADS,
    RdfFormat.TRIG,
    RdfFormat.NTRIPLES,
)
_HTML = "text/html"
# Preference order on q-ties; HTML first mirrors the no-header default.
_OFFERS = (_HTML,) + tuple(f.media_type for f in _RDF_OFFERS)

_FILE_TYPES = {
    ".md": "text/markdown; charset=utf-8",
    ".html": "text/html; charset=utf-8",
    ".conf": "text/plain; charset=utf-8",
    ".txt": "text/plain; charset=utf-8",
}


@dataclass(frozen=True)
class Representation:
    media_type: str
    body: bytes
    status: int
    location: Optional[str] = None

    def __post_init__(self) -> None:
        if self.status not in (200, 303, 404, 406):
            raise ValueError(f"unsupported status {self.status}")
        if self.status == 303 and (self.location is None or self.body):
            raise ValueError("a 303 carries a Location and an empty body")


@dataclass(frozen=True)
class Resource:
    iri: Iri
    kind: str
    path: str
    page_path: str
    graph: RdfDataset


@dataclass(frozen=True)
class Snapshot:
    version: str
    table: RedirectTable
    files: "dict[str, bytes]"
    resources: "dict[str, Resource]" = field(default_factory=dict)

    @property
    def resources_by_path(self) -> "dict[str, Resource]":
        return {r.path: r for r in self.resources.values()}


def _cbd(graph: RdfDataset, subject: Iri) -> RdfDataset:
    """Subject's triples plus everything reachable through blank nodes."""
    by_subject: dict[object, list[Quad]] = {}
    for q in graph.quads:
        by_subject.setdefault(q.subject, []).append(q)
    quads: list[Quad] = []
    frontier: list[object] = [subject]
    seen = {subject}
    while frontier:
        node = frontier.pop()
        for q in by_subject.get(node, ()):
            quads.append(q)
            if isinstance(q.object, BlankNode) and q.object not in seen:
                seen.add(q.object)
                frontier.append(q.object)
    return RdfDataset(quads)


def _id_of(graph: RdfDataset, subject: Iri, vocab: Vocab) -> "str | None":
    for q in graph.quads:
        if q.subject == subject and q.predicate == vocab.id and isinstance(q.object, Literal):
            return q.object.lexical
    return None


def _extract_resources(dump: RdfDataset, vocab: Vocab) -> dict[str, Resource]:
    kinds = {
        vocab.Dataset: ("dataset", "datasets"),
        vocab.Task: ("task", "tasks"),
        vocab.Profile: ("profile", "profiles"),
    }
    resources: dict[str, Resource] = {}

    def add(subject: Iri, kind: str, path: str, page_path: str) -> None:
        resources[subject.value] = Resource(
            iri=subject,
            kind=kind,
            path=path,
            page_path=page_path,
            graph=_cbd(dump, subject),
        )

    for q in sorted(dump.quads, key=lambda q: q.subject.value if isinstance(q.subject, Iri) else ""):
        if q.predicate != RDF_TYPE or not isinstance(q.subject, Iri):
            continue
        if q.object in kinds:
            kind, prefix = kinds[q.object]
            rid = _id_of(dump, q.subject, vocab)
            if rid is None:
                raise SnapshotFormatError(f"{kind} {q.subject.value} has no identifier")
            add(q.subject, kind, f"/{prefix}/{rid}", f"site/{prefix}/{rid}/index.md")
        elif q.object == vocab.RunReport:
            slug = report_slug(q.subject)
            add(q.subject, "report", f"/results/{slug}", f"site/results/{slug}.md")
    return resources


def load_snapshot(directory: "str | Path", vocab: Vocab = VOCAB) -> Snapshot:
    """Read a generated tree into an immutable, fully in-memory snapshot."""
    root = Path(directory)
    if not root.is_dir():
        raise SnapshotFormatError(f"{root} is not a directory")
    files: dict[str, bytes] = {}
    for path in sorted(root.rglob("*")):
        if path.is_file():
            files[path.relative_to(root).as_posix()] = path.read_bytes()
    for mandatory in ("redirects.conf", "VERSION", "dumps/catalog.nq", "dumps/catalog.ttl"):
        if mandatory not in files:
            raise SnapshotFormatError(f"snapshot is missing {mandatory}")
    if not any(name.startswith("site/") for name in files):
        raise SnapshotFormatError("snapshot has no site pages")
    version = files["VERSION"].decode("utf-8").strip()
    table = RedirectTable.from_text(
        files["redirects.conf"].decode("utf-8"), default_version=version
    )
    from .rdf import parse_document

    dump = parse_document(files["dumps/catalog.nq"], RdfFormat.NQUADS)
    resources = _extract_resources(dump, vocab)
    for resource in resources.values():
        if resource.page_path not in files:
            raise SnapshotFormatError(
                f"{resource.kind} {resource.iri.value} has no page {resource.page_path}"
            )
    return Snapshot(version=version, table=table, files=files, resources=resources)


# ---------------------------------------------------------------------------
# Content negotiation.
# ---------------------------------------------------------------------------


def _parse_accept(header: "str | None") -> "list[tuple[str, float]]":
    if header is None or not header.strip():
        return [("*/*", 1.0)]
    ranges = []
    for item in header.split(","):
        parts = [p.strip() for p in item.split(";") if p.strip()]
        if not parts or "/" not in parts[0]:
            continue
        media = parts[0].lower()
        q = 1.0
        for param in parts[1:]:
            name, _, value = param.partition("=")
            if name.strip().lower() == "q":
                try:
                    q = float(value.strip())
                except ValueError:
                    q = 1.0
                q = min(max(q, 0.0), 1.0)
        ranges.append((media, q))
    return ranges or [("*/*", 1.0)]


def _range_specificity(media_range: str, offer: str) -> int:
    if media_range == offer:
        return 3
    if media_range.endswith("/*") and offer.split("/")[0] == media_range.split("/")[0]:
        return 2
    if media_range == "*/*":
        return 1
    return 0


def _choose(header: "str | None") -> "str | None":
    """Best offer by q-value, then range specificity, then offer order."""
    ranges = _parse_accept(header)
    best = None
    for index, offer in enumerate(_OFFERS):
        top: "tuple[float, int] | None" = None
        for media_range, q in ranges:
            spec = _range_specificity(media_range, offer)
            if spec == 0:
                continue
            if top is None or (spec, q) > (top[1], top[0]):
                top = (q, spec)
        if top is None or top[0] <= 0.0:
            continue
        key = (top[0], -index)
        if best is None or key > best[0]:
            best = (key, offer)
    return best[1] if best else None


def negotiate(accept_header: "str | None", resource: Resource) -> Representation:
    chosen = _choose(accept_header)
    if chosen is None:
        alternatives = ", ".join(_OFFERS)
        return Representation(
            media_type="text/plain; charset=utf-8",
            body=f"no acceptable representation; supported: {alternatives}\n".encode(),
            status=406,
        )
    if chosen == _HTML:
        return Representation(
            media_type=_HTML, body=b"", status=303, location="/" + resource.page_path
        )
    fmt = RdfFormat.from_media_type(chosen)
    return Representation(
        media_type=chosen, body=serialize_document(resource.graph, fmt), status=200
    )


# ---------------------------------------------------------------------------
# Routing.
# ---------------------------------------------------------------------------


def _file_media_type(file_key: str) -> str:
    if "." not in file_key.rsplit("/", 1)[-1]:
        return "text/plain; charset=utf-8"
    extension = file_key.rsplit(".", 1)[-1]
    known = _FILE_TYPES.get("." + extension)
    if known is not None:
        return known
    try:
        return RdfFormat.from_extension(extension).media_type
    except ValueError:
        return "application/octet-stream"


def _not_found(path: str) -> Representation:
    return Representation(
        media_type="text/plain; charset=utf-8",
        body=f"no such path: {path}\n".encode(),
        status=404,
    )


def _strip_version(path: str, snapshot: Snapshot) -> "str | None":
    parts = path.split("/")
    if len(parts) >= 3 and parts[1] == "v" and parts[2] in ("dev", snapshot.version):
        rest = "/".join(parts[3:])
        return "/" + rest if rest else "/"
    return None


def route(snapshot: Snapshot, path: str, accept_header: "str | None") -> Representation:
    """One GET against one snapshot: files, then resources, then redirects."""
    path = urlsplit(path).path or "/"
    if path != "/" and path.endswith("/"):
        path = path.rstrip("/")
    file_key = path.lstrip("/")
    if file_key in snapshot.files:
        return Representation(
            media_type=_file_media_type(file_key), body=snapshot.files[file_key], status=200
        )
    by_path = snapshot.resources_by_path
    resource = by_path.get(path)
    if resource is None:
        unversioned = _strip_version(path, snapshot)
        if unversioned is not None:
            resource = by_path.get(unversioned)
    if resource is not None:
        return negotiate(accept_header, resource)
    try:
        target = resolve_purl(snapshot.table, path)
    except NotFoundError:
        return _not_found(path)
    if target.lstrip("/") not in snapshot.files:
        return _not_found(path)
    return Representation(media_type=_HTML, body=b"", status=303, location="/" + target.lstrip("/"))


# ---------------------------------------------------------------------------
# HTTP plumbing.
# ---------------------------------------------------------------------------


class SnapshotHolder:
    """Atomic handle: each request reads the snapshot reference exactly once."""

    def __init__(self, snapshot: Snapshot):
        self._snapshot = snapshot
        self._lock = threading.Lock()

    @property
    def current(self) -> Snapshot:
        return self._snapshot

    def swap(self, snapshot: Snapshot) -> None:
        with self._lock:
            self._snapshot = snapshot


class _Handler(BaseHTTPRequestHandler):
    holder: SnapshotHolder
    protocol_version = "HTTP/1.1"

    def _respond(self, include_body: bool) -> None:
        snapshot = self.holder.current
        rep = route(snapshot, self.path, self.headers.get("Accept"))
        self.send_response(rep.status)
        self.send_header("Content-Type", rep.media_type)
        self.send_header("Content-Length", str(len(rep.body)))
        if rep.location is not None:
            self.send_header("Location", rep.location)
        self.end_headers()
        if include_body and rep.body:
            self.wfile.write(rep.body)

    def do_GET(self) -> None:
        self._respond(include_body=True)

    def do_HEAD(self) -> None:
        self._respond(include_body=False)

    def log_message(self, format: str, *args) -> None:
        pass


def parse_bind(bind: str) -> "tuple[str, int]":
    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"bind address must be HOST:PORT, got {bind!r}")
    return host, int(port)


def serve(holder: SnapshotHolder, bind: str = DEFAULT_BIND) -> ThreadingHTTPServer:
    """Start serving in background threads; caller owns shutdown."""
    host, port = parse_bind(bind)
    handler = type("BoundHandler", (_Handler,), {"holder": holder})
    server = ThreadingHTTPServer((host, port), handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server
