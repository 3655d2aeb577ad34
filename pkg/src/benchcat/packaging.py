"""Dataset packaging: content validation, statistics, deterministic builds.

A source dataset is an ordered sequence of stream elements, one per input
file in lexicographic order. Distributions come in two kinds: flat (one
serialized document holding the first N elements) and stream (a tar
archive with one file per element). Every artifact is bit-identical
across runs and machines: fixed ordering, canonical per-element blank
node labels, epoch timestamps in archives.
"""

from __future__ import annotations

import hashlib
import io
import tarfile
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

from .errors import EmptySourceError, TypeMismatchError
from .metadata import (
    DatasetMetadata,
    Severity,
    StreamElementType,
    ValidationReport,
    Violation,
    _integer,
    _one,
)
from .rdf import (
    XSD_BOOLEAN,
    XSD_INTEGER,
    BlankNode,
    Iri,
    Literal,
    Quad,
    RdfDataset,
    RdfFormat,
    canonical_blank_node_labels,
    parse_document,
    serialize_document,
)
from .vocab import VOCAB, Vocab

DEFAULT_CAP_LADDER = (10, 100, 1000)
_RDF_SUFFIXES = (".ttl", ".trig", ".nt", ".nq")


class DistributionKind(Enum):
    FLAT = "Flat"
    STREAM = "Stream"


@dataclass(frozen=True)
class SourceDataset:
    """Ordered stream elements plus where they came from."""

    elements: tuple[RdfDataset, ...]
    origin: str


@dataclass(frozen=True)
class StatisticsReport:
    element_count: int
    total_statements: int
    distinct_subjects: int
    distinct_predicates: int
    distinct_objects: int
    uses_named_graphs: bool


@dataclass(frozen=True)
class Distribution:
    kind: DistributionKind
    format: RdfFormat
    size_cap: Optional[int]  # None means the full stream
    byte_size: int
    sha256: str
    file_name: str


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# ---------------------------------------------------------------------------
# Loading.
# ---------------------------------------------------------------------------


def _parse_element(name: str, data: bytes) -> RdfDataset:
    fmt = RdfFormat.from_extension(Path(name).suffix)
    # synthetic per-element base keeps relative IRIs legal yet machine-independent
    return parse_document(data, fmt, base=f"urn:element:{Path(name).name}", source=name)


def load_source(origin: "str | Path") -> SourceDataset:
    """Read a directory or .tar of RDF files, one stream element per file."""
    origin = Path(origin)
    elements = []
    if origin.is_dir():
        names = sorted(
            p.name for p in origin.iterdir() if p.is_file() and p.suffix in _RDF_SUFFIXES
        )
        for name in names:
            elements.append(_parse_element(name, (origin / name).read_bytes()))
    elif origin.is_file() and origin.suffix == ".tar":
        with tarfile.open(origin, mode="r:") as archive:
            members = sorted(
                (m for m in archive.getmembers() if m.isfile() and m.name.endswith(_RDF_SUFFIXES)),
                key=lambda m: m.name,
            )
            for member in members:
                handle = archive.extractfile(member)
                assert handle is not None
                elements.append(_parse_element(member.name, handle.read()))
    else:
        raise EmptySourceError(f"{origin} is neither a directory nor a .tar archive")
    if not elements:
        raise EmptySourceError(f"no RDF files found in {origin}")
    return SourceDataset(elements=tuple(elements), origin=str(origin))


# ---------------------------------------------------------------------------
# Content validation and statistics.
# ---------------------------------------------------------------------------


def validate_contents(src: SourceDataset, md: DatasetMetadata) -> ValidationReport:
    violations = []
    if len(src.elements) != md.declared_element_count:
        violations.append(
            Violation(
                "elements",
                Severity.ERROR,
                f"metadata declares {md.declared_element_count} elements, "
                f"source has {len(src.elements)}",
                "element-count-mismatch",
            )
        )
    for i, element in enumerate(src.elements):
        if md.stream_element_type is StreamElementType.TRIPLES and not element.default_graph_only():
            violations.append(
                Violation(
                    f"element[{i}]",
                    Severity.ERROR,
                    "named graph used in a dataset declared as triples-only",
                    "element-type",
                )
            )
        if not element.quads:
            violations.append(
                Violation(f"element[{i}]", Severity.WARNING, "element is empty", "empty-element")
            )
    return ValidationReport(tuple(violations))


def compute_statistics(src: SourceDataset) -> StatisticsReport:
    """Exact stream-wide counts; blank nodes count as distinct per element."""

    def key(term, element_index: int):
        if isinstance(term, BlankNode):
            return ("b", element_index, term.label)
        return ("g", str(term))

    subjects = set()
    predicates = set()
    objects = set()
    total = 0
    uses_named = False
    for i, element in enumerate(src.elements):
        total += len(element.quads)
        if not element.default_graph_only():
            uses_named = True
        for quad in element.quads:
            subjects.add(key(quad.subject, i))
            predicates.add(key(quad.predicate, i))
            objects.add(key(quad.object, i))
    return StatisticsReport(
        element_count=len(src.elements),
        total_statements=total,
        distinct_subjects=len(subjects),
        distinct_predicates=len(predicates),
        distinct_objects=len(objects),
        uses_named_graphs=uses_named,
    )


# ---------------------------------------------------------------------------
# Distribution building.
# ---------------------------------------------------------------------------


def _scoped_elements(elements) -> list[RdfDataset]:
    """Canonical per-element labels, then an element-index prefix, so merged
    flat dumps keep elements' blank nodes disjoint without a global search."""
    scoped = []
    for i, element in enumerate(elements):
        canonical = canonical_blank_node_labels(element)
        scoped.append(
            element.relabel_blank_nodes(
                {old: f"e{i}_{new}" for old, new in canonical.items()}
            )
        )
    return scoped


def _flat_bytes(scoped, cap: Optional[int], fmt: RdfFormat) -> bytes:
    take = scoped if cap is None else scoped[:cap]
    union = RdfDataset([q for element in take for q in element.quads])
    return serialize_document(union, fmt, canonical_labels=False)


def _stream_bytes(elements, cap: Optional[int], fmt: RdfFormat) -> bytes:
    take = list(elements) if cap is None else list(elements)[:cap]
    width = max(1, len(str(max(len(elements) - 1, 0))))
    buffer = io.BytesIO()
    with tarfile.open(fileobj=buffer, mode="w", format=tarfile.USTAR_FORMAT) as archive:
        for i, element in enumerate(take):
            data = serialize_document(element, fmt)
            info = tarfile.TarInfo(name=f"{i:0{width}d}.{fmt.extension}")
            info.size = len(data)
            info.mtime = 0
            info.uid = 0
            info.gid = 0
            info.uname = ""
            info.gname = ""
            info.mode = 0o644
            archive.addfile(info, io.BytesIO(data))
    return buffer.getvalue()


def build_distributions(
    src: SourceDataset,
    ladder: "tuple[int, ...] | list[int]" = DEFAULT_CAP_LADDER,
    formats: "tuple[RdfFormat, ...] | list[RdfFormat]" = (RdfFormat.NQUADS,),
) -> list[tuple[Distribution, bytes]]:
    """All (kind, cap, format) artifacts with their bytes.

    Caps at or above the element count are skipped (the full distribution
    already covers them). Raises :class:`FormatCapabilityError` if a
    triples-only format meets named graphs.
    """
    caps: list[Optional[int]] = [c for c in sorted(ladder) if c < len(src.elements)]
    caps.append(None)
    scoped = _scoped_elements(src.elements)
    out = []
    for fmt in formats:
        for cap in caps:
            cap_name = "full" if cap is None else str(cap)
            flat = _flat_bytes(scoped, cap, fmt)
            out.append(
                (
                    Distribution(
                        kind=DistributionKind.FLAT,
                        format=fmt,
                        size_cap=cap,
                        byte_size=len(flat),
                        sha256=sha256_hex(flat),
                        file_name=f"flat_{cap_name}.{fmt.extension}",
                    ),
                    flat,
                )
            )
            stream = _stream_bytes(src.elements, cap, fmt)
            out.append(
                (
                    Distribution(
                        kind=DistributionKind.STREAM,
                        format=fmt,
                        size_cap=cap,
                        byte_size=len(stream),
                        sha256=sha256_hex(stream),
                        file_name=f"stream_{cap_name}.{fmt.extension}.tar",
                    ),
                    stream,
                )
            )
    out.sort(key=lambda pair: pair[0].file_name)
    return out


def distribution_from_file(file_name: str, data: bytes) -> Distribution:
    """Rebuild a Distribution record from an emitted file (catalog loading)."""
    name = file_name
    if name.endswith(".tar"):
        kind = DistributionKind.STREAM
        name = name[: -len(".tar")]
    else:
        kind = DistributionKind.FLAT
    stem, _, ext = name.rpartition(".")
    fmt = RdfFormat.from_extension(ext)
    prefix = "flat_" if kind is DistributionKind.FLAT else "stream_"
    if not stem.startswith(prefix):
        raise ValueError(f"unrecognized distribution file name: {file_name!r}")
    cap_token = stem[len(prefix) :]
    cap = None if cap_token == "full" else int(cap_token)
    return Distribution(
        kind=kind,
        format=fmt,
        size_cap=cap,
        byte_size=len(data),
        sha256=sha256_hex(data),
        file_name=file_name,
    )


# ---------------------------------------------------------------------------
# Statistics as RDF.
# ---------------------------------------------------------------------------


def statistics_to_rdf(stats: StatisticsReport, subject: Iri, vocab: Vocab = VOCAB) -> RdfDataset:
    def lit(n: int) -> Literal:
        return Literal(str(n), XSD_INTEGER)

    return RdfDataset(
        [
            Quad(subject, vocab.elementCount, lit(stats.element_count)),
            Quad(subject, vocab.totalStatements, lit(stats.total_statements)),
            Quad(subject, vocab.distinctSubjects, lit(stats.distinct_subjects)),
            Quad(subject, vocab.distinctPredicates, lit(stats.distinct_predicates)),
            Quad(subject, vocab.distinctObjects, lit(stats.distinct_objects)),
            Quad(
                subject,
                vocab.usesNamedGraphs,
                Literal("true" if stats.uses_named_graphs else "false", XSD_BOOLEAN),
            ),
        ]
    )


def extract_statistics(graph: RdfDataset, subject: Iri, vocab: Vocab = VOCAB) -> StatisticsReport:
    def count(pred: Iri, fieldname: str) -> int:
        value = _integer(_one(graph, subject, pred, fieldname), fieldname)
        if value < 0:
            raise TypeMismatchError(fieldname, "must be non-negative")
        return value

    flag_term = _one(graph, subject, vocab.usesNamedGraphs, "usesNamedGraphs")
    if not isinstance(flag_term, Literal) or flag_term.datatype != XSD_BOOLEAN:
        raise TypeMismatchError("usesNamedGraphs", "expected a boolean literal")
    if flag_term.lexical not in ("true", "false", "0", "1"):
        raise TypeMismatchError("usesNamedGraphs", f"not a boolean: {flag_term.lexical!r}")
    return StatisticsReport(
        element_count=count(vocab.elementCount, "elementCount"),
        total_statements=count(vocab.totalStatements, "totalStatements"),
        distinct_subjects=count(vocab.distinctSubjects, "distinctSubjects"),
        distinct_predicates=count(vocab.distinctPredicates, "distinctPredicates"),
        distinct_objects=count(vocab.distinctObjects, "distinctObjects"),
        uses_named_graphs=flag_term.lexical in ("true", "1"),
    )
