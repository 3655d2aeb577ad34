"""Nanopublication structure checks, report extraction, and discovery.

A nanopublication is four named graphs: a head that links assertion,
provenance, and publication info. Benchmark run reports live in the
assertion graph; attribution and date live in publication info. Discovery
walks a pluggable index source and never lets one broken nanopub abort
the batch.
"""

from __future__ import annotations

import datetime
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Protocol

from .errors import (
    BenchcatError,
    MissingFieldError,
    SourceUnavailableError,
    StructureError,
    TypeMismatchError,
)
from .metadata import ORCID_IRI_PREFIX, _iri, _one, _optional, _string, orcid_checksum_ok
from .rdf import (
    DEFAULT_GRAPH,
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    XSD_DATE,
    BlankNode,
    Iri,
    Literal,
    Quad,
    RdfDataset,
    RdfFormat,
    parse_document,
    serialize_document,
)
from .vocab import (
    NP_HAS_ASSERTION,
    NP_HAS_PROVENANCE,
    NP_HAS_PUBINFO,
    NP_NANOPUBLICATION,
    VOCAB,
    Vocab,
)


@dataclass(frozen=True)
class Nanopublication:
    uri: Iri
    head: RdfDataset
    assertion: RdfDataset
    provenance: RdfDataset
    pubinfo: RdfDataset
    head_iri: Iri
    assertion_iri: Iri
    provenance_iri: Iri
    pubinfo_iri: Iri

    def to_dataset(self) -> RdfDataset:
        quads = []
        for part, graph_iri in (
            (self.head, self.head_iri),
            (self.assertion, self.assertion_iri),
            (self.provenance, self.provenance_iri),
            (self.pubinfo, self.pubinfo_iri),
        ):
            for q in part.quads:
                quads.append(Quad(q.subject, q.predicate, q.object, graph_iri))
        return RdfDataset(quads)


@dataclass(frozen=True)
class SystemUnderTest:
    name: str
    version: str


@dataclass(frozen=True)
class BenchmarkRunReport:
    report_iri: Iri
    task: Iri
    profile: Iri
    profile_version: str
    benchmark_code: Iri
    systems: tuple[SystemUnderTest, ...]
    author_orcid: str
    date: datetime.date
    results_link: Optional[Iri] = None


class ReportIndexSource(Protocol):
    """Where report nanopublications come from; snapshot semantics per run."""

    def list(self) -> "list[Iri]": ...

    def fetch(self, iri: Iri) -> "tuple[bytes, RdfFormat]": ...


# ---------------------------------------------------------------------------
# Structural validation.
# ---------------------------------------------------------------------------


def _mentions(graph: RdfDataset, iri: Iri) -> bool:
    for q in graph.quads:
        if q.subject == iri or q.object == iri:
            return True
    return False


def parse_nanopub(doc: RdfDataset) -> Nanopublication:
    """Identify the four graphs and check every structural invariant.

    The check order is chosen so the reported rule names the actual defect:
    a missing provenance graph is "missing-provenance", not a byproduct
    "graph-count".
    """
    if any(q.in_default_graph for q in doc.quads):
        raise StructureError("graph-count", "statements outside named graphs")
    graphs: dict[Iri, list[Quad]] = {}
    for q in doc.quads:
        if not isinstance(q.graph, Iri):
            raise StructureError("graph-count", "graph labels must be IRIs")
        graphs.setdefault(q.graph, []).append(q)

    head_candidates = sorted(
        {q.graph.value for q in doc.quads if q.predicate == NP_HAS_ASSERTION}
    )
    if not head_candidates:
        raise StructureError("head-links", "no head graph declares an assertion")
    if len(head_candidates) > 1:
        raise StructureError("head-links", "more than one head graph")
    head_iri = Iri(head_candidates[0])
    head_quads = graphs[head_iri]

    def head_link(predicate: Iri, what: str) -> tuple[Iri, Iri]:
        links = [q for q in head_quads if q.predicate == predicate]
        if len(links) != 1:
            raise StructureError("head-links", f"expected exactly one {what} link")
        link = links[0]
        if not isinstance(link.subject, Iri) or not isinstance(link.object, Iri):
            raise StructureError("head-links", f"{what} link must connect IRIs")
        return link.subject, link.object

    np_uri, assertion_iri = head_link(NP_HAS_ASSERTION, "assertion")
    prov_subject, provenance_iri = head_link(NP_HAS_PROVENANCE, "provenance")
    info_subject, pubinfo_iri = head_link(NP_HAS_PUBINFO, "publication info")
    if prov_subject != np_uri or info_subject != np_uri:
        raise StructureError("head-links", "head links name different nanopublications")
    typed = any(
        q.subject == np_uri and q.predicate == RDF_TYPE and q.object == NP_NANOPUBLICATION
        for q in head_quads
    )
    if not typed:
        raise StructureError("head-links", "nanopublication type declaration missing")

    if assertion_iri not in graphs or not graphs[assertion_iri]:
        raise StructureError("empty-assertion", "assertion graph is empty or missing")
    if provenance_iri not in graphs or not graphs[provenance_iri]:
        raise StructureError("missing-provenance", "provenance graph is empty or missing")
    if pubinfo_iri not in graphs or not graphs[pubinfo_iri]:
        raise StructureError("graph-count", "publication info graph is empty or missing")

    expected = {head_iri, assertion_iri, provenance_iri, pubinfo_iri}
    if len(expected) != 4:
        raise StructureError("graph-count", "head, assertion, provenance, info must be distinct")
    if set(graphs) != expected:
        raise StructureError(
            "graph-count", f"expected exactly 4 graphs, found {len(graphs)}"
        )

    def rehome(quads) -> RdfDataset:
        return RdfDataset(Quad(q.subject, q.predicate, q.object) for q in quads)

    provenance = rehome(graphs[provenance_iri])
    if not _mentions(provenance, assertion_iri):
        raise StructureError("missing-provenance", "provenance does not mention the assertion")
    pubinfo = rehome(graphs[pubinfo_iri])
    if not _mentions(pubinfo, np_uri):
        raise StructureError("head-links", "publication info does not mention the nanopub")

    return Nanopublication(
        uri=np_uri,
        head=rehome(head_quads),
        assertion=rehome(graphs[assertion_iri]),
        provenance=provenance,
        pubinfo=pubinfo,
        head_iri=head_iri,
        assertion_iri=assertion_iri,
        provenance_iri=provenance_iri,
        pubinfo_iri=pubinfo_iri,
    )


# ---------------------------------------------------------------------------
# Report extraction.
# ---------------------------------------------------------------------------


def _read_systems(assertion: RdfDataset, report: Iri, vocab: Vocab) -> tuple[SystemUnderTest, ...]:
    head = _one(assertion, report, vocab.systems, "systems")
    systems = []
    seen = set()
    cell = head
    while cell != RDF_NIL:
        if not isinstance(cell, (BlankNode, Iri)):
            raise TypeMismatchError("systems", "malformed system list")
        key = cell.label if isinstance(cell, BlankNode) else cell.value
        if key in seen:
            raise TypeMismatchError("systems", "cyclic system list")
        seen.add(key)
        node = _one(assertion, cell, RDF_FIRST, "systems")
        systems.append(
            SystemUnderTest(
                name=_string(_one(assertion, node, vocab.name, "systems"), "systems"),
                version=_string(_one(assertion, node, vocab.version, "systems"), "systems"),
            )
        )
        cell = _one(assertion, cell, RDF_REST, "systems")
    if not systems:
        raise MissingFieldError("systems")
    return tuple(systems)


def extract_report(np: Nanopublication, vocab: Vocab = VOCAB) -> BenchmarkRunReport:
    assertion = np.assertion
    subjects = sorted(
        {
            q.subject.value
            for q in assertion.quads
            if q.predicate == RDF_TYPE and q.object == vocab.RunReport and isinstance(q.subject, Iri)
        }
    )
    if not subjects:
        raise MissingFieldError("report", "assertion declares no run report")
    if len(subjects) > 1:
        raise TypeMismatchError("report", "assertion declares more than one run report")
    report = Iri(subjects[0])

    author_term = _one(np.pubinfo, np.uri, vocab.author, "authorOrcid")
    if not isinstance(author_term, Iri) or not author_term.value.startswith(ORCID_IRI_PREFIX):
        raise TypeMismatchError("authorOrcid", "expected an ORCID IRI")
    orcid = author_term.value[len(ORCID_IRI_PREFIX) :]
    if not orcid_checksum_ok(orcid):
        raise TypeMismatchError("authorOrcid", f"ORCID {orcid!r} fails its checksum")

    date_term = _one(np.pubinfo, np.uri, vocab.created, "date")
    if not isinstance(date_term, Literal) or date_term.datatype != XSD_DATE:
        raise TypeMismatchError("date", "expected an xsd:date literal")
    try:
        date = datetime.date.fromisoformat(date_term.lexical)
    except ValueError:
        raise TypeMismatchError("date", f"not a calendar date: {date_term.lexical!r}") from None

    results_term = _optional(assertion, report, vocab.resultsLink, "resultsLink")
    return BenchmarkRunReport(
        report_iri=report,
        task=_iri(_one(assertion, report, vocab.task, "task"), "task"),
        profile=_iri(_one(assertion, report, vocab.profile, "profile"), "profile"),
        profile_version=_string(
            _one(assertion, report, vocab.profileVersion, "profileVersion"), "profileVersion"
        ),
        benchmark_code=_iri(
            _one(assertion, report, vocab.benchmarkCode, "benchmarkCode"), "benchmarkCode"
        ),
        systems=_read_systems(assertion, report, vocab),
        author_orcid=orcid,
        date=date,
        results_link=_iri(results_term, "resultsLink") if results_term is not None else None,
    )


# ---------------------------------------------------------------------------
# Report construction (the CLI stand-in for a web form).
# ---------------------------------------------------------------------------


def build_report_nanopub(
    report: BenchmarkRunReport, base: Iri, vocab: Vocab = VOCAB
) -> Nanopublication:
    """A structurally valid nanopublication whose extraction round-trips."""
    if not report.systems:
        raise MissingFieldError("systems")
    if not report.profile_version:
        raise MissingFieldError("profileVersion")
    if report.date is None:
        raise MissingFieldError("date")
    if not orcid_checksum_ok(report.author_orcid):
        raise TypeMismatchError("authorOrcid", f"ORCID {report.author_orcid!r} fails its checksum")
    np_uri = base
    head_iri = Iri(base.value + "#head")
    assertion_iri = Iri(base.value + "#assertion")
    provenance_iri = Iri(base.value + "#provenance")
    pubinfo_iri = Iri(base.value + "#pubinfo")

    head = RdfDataset(
        [
            Quad(np_uri, RDF_TYPE, NP_NANOPUBLICATION),
            Quad(np_uri, NP_HAS_ASSERTION, assertion_iri),
            Quad(np_uri, NP_HAS_PROVENANCE, provenance_iri),
            Quad(np_uri, NP_HAS_PUBINFO, pubinfo_iri),
        ]
    )
    quads = [
        Quad(report.report_iri, RDF_TYPE, vocab.RunReport),
        Quad(report.report_iri, vocab.task, report.task),
        Quad(report.report_iri, vocab.profile, report.profile),
        Quad(report.report_iri, vocab.profileVersion, Literal(report.profile_version)),
        Quad(report.report_iri, vocab.benchmarkCode, report.benchmark_code),
    ]
    if report.results_link is not None:
        quads.append(Quad(report.report_iri, vocab.resultsLink, report.results_link))
    cells = [BlankNode(f"cell{i}") for i in range(len(report.systems))]
    quads.append(Quad(report.report_iri, vocab.systems, cells[0]))
    for i, system in enumerate(report.systems):
        node = BlankNode(f"sys{i}")
        rest = cells[i + 1] if i + 1 < len(cells) else RDF_NIL
        quads.append(Quad(cells[i], RDF_FIRST, node))
        quads.append(Quad(cells[i], RDF_REST, rest))
        quads.append(Quad(node, vocab.name, Literal(system.name)))
        quads.append(Quad(node, vocab.version, Literal(system.version)))
    assertion = RdfDataset(quads)

    provenance = RdfDataset([Quad(assertion_iri, vocab.generatedWith, report.benchmark_code)])
    pubinfo = RdfDataset(
        [
            Quad(np_uri, vocab.author, Iri(ORCID_IRI_PREFIX + report.author_orcid)),
            Quad(np_uri, vocab.created, Literal(report.date.isoformat(), XSD_DATE)),
        ]
    )
    return Nanopublication(
        uri=np_uri,
        head=head,
        assertion=assertion,
        provenance=provenance,
        pubinfo=pubinfo,
        head_iri=head_iri,
        assertion_iri=assertion_iri,
        provenance_iri=provenance_iri,
        pubinfo_iri=pubinfo_iri,
    )


def nanopub_to_trig(np: Nanopublication) -> bytes:
    return serialize_document(np.to_dataset(), RdfFormat.TRIG)


# ---------------------------------------------------------------------------
# Discovery.
# ---------------------------------------------------------------------------


def discover_reports(
    source: ReportIndexSource, vocab: Vocab = VOCAB
) -> tuple[list[BenchmarkRunReport], list[tuple[Iri, Exception]]]:
    """Fetch, parse, validate, and extract every listed nanopublication.

    Per-item failures become diagnostics; only a failing index listing
    raises. Reports come back ordered by date descending, then IRI.
    """
    listed = source.list()
    reports = []
    diagnostics = []
    for iri in sorted(set(listed), key=lambda i: i.value):
        try:
            data, fmt = source.fetch(iri)
            doc = parse_document(data, fmt, base=iri)
            reports.append(extract_report(parse_nanopub(doc), vocab))
        except (BenchcatError, OSError) as exc:
            diagnostics.append((iri, exc))
    reports.sort(key=lambda r: r.report_iri.value)
    reports.sort(key=lambda r: r.date, reverse=True)
    return reports, diagnostics


class DirectoryIndexSource:
    """Index over a directory of .trig files; IRIs are file:// URLs."""

    def __init__(self, directory: "str | Path"):
        self.directory = Path(directory)

    def list(self) -> list[Iri]:
        if not self.directory.is_dir():
            raise SourceUnavailableError(f"{self.directory} is not a directory")
        return [
            Iri(p.resolve().as_uri())
            for p in sorted(self.directory.iterdir())
            if p.is_file() and p.suffix == ".trig"
        ]

    def fetch(self, iri: Iri) -> tuple[bytes, RdfFormat]:
        parsed = urllib.parse.urlparse(iri.value)
        if parsed.scheme != "file":
            raise SourceUnavailableError(f"not a file IRI: {iri.value}")
        path = Path(urllib.parse.unquote(parsed.path))
        return path.read_bytes(), RdfFormat.TRIG


class HttpIndexSource:
    """Index endpoint returning a newline-delimited IRI list; nanopubs are
    fetched one GET each with Accept: application/trig."""

    def __init__(self, index_url: str, timeout: float = 10.0):
        self.index_url = index_url
        self.timeout = timeout

    def list(self) -> list[Iri]:
        request = urllib.request.Request(self.index_url, headers={"Accept": "text/plain"})
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                text = response.read().decode("utf-8")
        except (urllib.error.URLError, OSError, UnicodeDecodeError) as exc:
            raise SourceUnavailableError(f"index {self.index_url} unreachable: {exc}") from None
        iris = []
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                iris.append(Iri(line))
        return iris

    def fetch(self, iri: Iri) -> tuple[bytes, RdfFormat]:
        request = urllib.request.Request(iri.value, headers={"Accept": "application/trig"})
        with urllib.request.urlopen(request, timeout=self.timeout) as response:
            data = response.read()
            content_type = response.headers.get("Content-Type", "application/trig")
        try:
            fmt = RdfFormat.from_media_type(content_type)
        except ValueError:
            fmt = RdfFormat.TRIG
        return data, fmt
