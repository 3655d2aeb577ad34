"""Typed metadata views, curator validation rules, and RDF emitters.

Extraction projects a parsed Turtle graph onto a frozen dataclass and is
strict about term kinds but lenient about curator-criteria content: a
missing creator list or a zero element count extracts fine and is reported
by validation, so one bad field yields one finding rather than a crash.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Optional

from .errors import ConflictError, MissingFieldError, TypeMismatchError
from .rdf import (
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_INTEGER,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Quad,
    RdfDataset,
    term_sort_key,
)
from .vocab import VOCAB, Vocab

if TYPE_CHECKING:
    from .packaging import Distribution, StatisticsReport

_ID_PATTERN = re.compile(r"[a-z0-9][a-z0-9-]*")
_ORCID_PATTERN = re.compile(r"\d{4}-\d{4}-\d{4}-\d{3}[\dX]")
ORCID_IRI_PREFIX = "https://orcid.org/"

# defaults for the curator rules; the config module re-exports these
DEFAULT_LICENSE_ALLOW_LIST = (
    Iri("https://creativecommons.org/publicdomain/zero/1.0/"),
    Iri("https://creativecommons.org/licenses/by/4.0/"),
    Iri("https://creativecommons.org/licenses/by-sa/4.0/"),
    Iri("https://opendatacommons.org/licenses/odbl/1-0/"),
)
DEFAULT_MIN_ELEMENT_COUNT = 1000


# ---------------------------------------------------------------------------
# Types.
# ---------------------------------------------------------------------------


class StreamElementType(Enum):
    TRIPLES = "Triples"
    QUADS = "Quads"
    GRAPHS = "Graphs"


class Severity(Enum):
    ERROR = "Error"
    WARNING = "Warning"


class ConstraintKind(Enum):
    ELEMENT_TYPE_IS = "ElementTypeIs"
    MIN_ELEMENT_COUNT = "MinElementCount"
    MAX_ELEMENT_COUNT = "MaxElementCount"


class MetricDirection(Enum):
    HIGHER_BETTER = "HigherBetter"
    LOWER_BETTER = "LowerBetter"


@dataclass(frozen=True)
class Agent:
    name: str
    orcid: Optional[str] = None


@dataclass(frozen=True)
class DatasetMetadata:
    id: str
    title: str
    description: str
    license: Iri
    creators: tuple[Agent, ...]
    use_case: str
    stream_element_type: StreamElementType
    declared_element_count: int
    source_url: Optional[Iri] = None


@dataclass(frozen=True)
class Metric:
    name: str
    unit: str
    direction: MetricDirection


@dataclass(frozen=True)
class TaskMetadata:
    id: str
    name: str
    description: str
    required_profiles: tuple[Iri, ...]
    metrics: tuple[Metric, ...]


@dataclass(frozen=True)
class Constraint:
    kind: ConstraintKind
    value: "StreamElementType | int"


@dataclass(frozen=True)
class ProfileMetadata:
    id: str
    name: str
    constraints: tuple[Constraint, ...]


@dataclass(frozen=True)
class Violation:
    path: str
    severity: Severity
    message: str
    rule_id: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    def __post_init__(self):
        ordered = tuple(
            sorted(self.violations, key=lambda v: (v.rule_id, v.path, v.message))
        )
        object.__setattr__(self, "violations", ordered)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def has_errors(self) -> bool:
        return any(v.severity is Severity.ERROR for v in self.violations)

    def to_text(self) -> str:
        if not self.violations:
            return "no violations\n"
        lines = [
            f"{v.severity.value.upper()} [{v.rule_id}] {v.path}: {v.message}"
            for v in self.violations
        ]
        return "\n".join(lines) + "\n"

    def to_rdf(self, subject: Iri, vocab: Vocab = VOCAB) -> RdfDataset:
        quads = []
        for i, v in enumerate(self.violations):
            node = BlankNode(f"violation{i}")
            severity = vocab.Error if v.severity is Severity.ERROR else vocab.Warning
            quads.append(Quad(subject, vocab.violation, node))
            quads.append(Quad(node, RDF_TYPE, vocab.Violation))
            quads.append(Quad(node, vocab.path, Literal(v.path)))
            quads.append(Quad(node, vocab.severity, severity))
            quads.append(Quad(node, vocab.message, Literal(v.message)))
            quads.append(Quad(node, vocab.ruleId, Literal(v.rule_id)))
        return RdfDataset(quads)


# ---------------------------------------------------------------------------
# ORCID checksum (ISO 7064 mod 11-2 over the first 15 digits).
# ---------------------------------------------------------------------------


def orcid_checksum_ok(orcid: str) -> bool:
    if not _ORCID_PATTERN.fullmatch(orcid):
        return False
    digits = orcid.replace("-", "")
    total = 0
    for ch in digits[:15]:
        total = (total + int(ch)) * 2
    remainder = total % 11
    result = (12 - remainder) % 11
    expected = "X" if result == 10 else str(result)
    return digits[15] == expected


# ---------------------------------------------------------------------------
# Graph reading helpers.
# ---------------------------------------------------------------------------


def _objects(graph: RdfDataset, subject, predicate: Iri) -> list:
    found = [
        q.object
        for q in graph.quads
        if q.subject == subject and q.predicate == predicate and q.in_default_graph
    ]
    return sorted(found, key=term_sort_key)


def _one(graph: RdfDataset, subject, predicate: Iri, fieldname: str):
    objs = _objects(graph, subject, predicate)
    if not objs:
        raise MissingFieldError(fieldname)
    if len(objs) > 1:
        raise TypeMismatchError(fieldname, "multiple values")
    return objs[0]


def _optional(graph: RdfDataset, subject, predicate: Iri, fieldname: str):
    objs = _objects(graph, subject, predicate)
    if not objs:
        return None
    if len(objs) > 1:
        raise TypeMismatchError(fieldname, "multiple values")
    return objs[0]


def _string(term, fieldname: str) -> str:
    if not isinstance(term, Literal) or term.datatype != XSD_STRING:
        raise TypeMismatchError(fieldname, "expected a plain string literal")
    return term.lexical


def _iri(term, fieldname: str) -> Iri:
    if not isinstance(term, Iri):
        raise TypeMismatchError(fieldname, "expected an IRI")
    return term


def _integer(term, fieldname: str) -> int:
    if not isinstance(term, Literal) or term.datatype != XSD_INTEGER:
        raise TypeMismatchError(fieldname, "expected an integer literal")
    try:
        return int(term.lexical)
    except ValueError:
        raise TypeMismatchError(fieldname, f"not an integer: {term.lexical!r}") from None


def find_typed_subject(graph: RdfDataset, class_iri: Iri, what: str) -> Iri:
    """The unique IRI subject declared to be an instance of ``class_iri``."""
    subjects = sorted(
        {
            q.subject.value
            for q in graph.quads
            if q.predicate == RDF_TYPE and q.object == class_iri and isinstance(q.subject, Iri)
        }
    )
    if not subjects:
        raise MissingFieldError(what, f"no subject typed as {class_iri.value}")
    if len(subjects) > 1:
        raise TypeMismatchError(what, "more than one typed subject")
    return Iri(subjects[0])


# ---------------------------------------------------------------------------
# Extraction.
# ---------------------------------------------------------------------------


def _extract_orcid(graph: RdfDataset, node, vocab: Vocab) -> Optional[str]:
    term = _optional(graph, node, vocab.orcid, "orcid")
    if term is None:
        return None
    if isinstance(term, Iri):
        if term.value.startswith(ORCID_IRI_PREFIX):
            return term.value[len(ORCID_IRI_PREFIX) :]
        raise TypeMismatchError("orcid", f"not an ORCID IRI: {term.value}")
    if isinstance(term, Literal) and term.datatype == XSD_STRING:
        return term.lexical
    raise TypeMismatchError("orcid", "expected a string literal or ORCID IRI")


def _extract_agents(graph: RdfDataset, subject, vocab: Vocab) -> tuple[Agent, ...]:
    agents = []
    for node in _objects(graph, subject, vocab.creator):
        if isinstance(node, Literal):
            raise TypeMismatchError("creators", "creator must be a node, not a literal")
        name_term = _optional(graph, node, vocab.name, "creators")
        name = _string(name_term, "creators") if name_term is not None else ""
        agents.append(Agent(name=name, orcid=_extract_orcid(graph, node, vocab)))
    return tuple(sorted(agents, key=lambda a: (a.name, a.orcid or "")))


_ELEMENT_TYPE_TERMS = {
    "Triples": StreamElementType.TRIPLES,
    "Quads": StreamElementType.QUADS,
    "Graphs": StreamElementType.GRAPHS,
}


def _extract_element_type(term, vocab: Vocab) -> StreamElementType:
    for name, value in _ELEMENT_TYPE_TERMS.items():
        if term == getattr(vocab, name):
            return value
    raise TypeMismatchError("streamElementType", "expected Triples, Quads, or Graphs")


def extract_dataset_metadata(
    graph: RdfDataset, subject: Iri, vocab: Vocab = VOCAB
) -> DatasetMetadata:
    """Project the dataset description rooted at ``subject`` onto a typed view.

    Unknown triples are ignored. Curator-criteria content (open license,
    authorship, size, use case) is NOT judged here; see
    :func:`validate_dataset_metadata`.
    """
    count = _integer(_one(graph, subject, vocab.elementCount, "elementCount"), "elementCount")
    if count < 0:
        raise TypeMismatchError("elementCount", "must be non-negative")
    source_url = _optional(graph, subject, vocab.sourceUrl, "sourceUrl")
    return DatasetMetadata(
        id=_string(_one(graph, subject, vocab.id, "id"), "id"),
        title=_string(_one(graph, subject, vocab.title, "title"), "title"),
        description=_string(
            _one(graph, subject, vocab.description, "description"), "description"
        ),
        license=_iri(_one(graph, subject, vocab.license, "license"), "license"),
        creators=_extract_agents(graph, subject, vocab),
        use_case=_string(_one(graph, subject, vocab.useCase, "useCase"), "useCase"),
        stream_element_type=_extract_element_type(
            _one(graph, subject, vocab.streamElementType, "streamElementType"), vocab
        ),
        declared_element_count=count,
        source_url=_iri(source_url, "sourceUrl") if source_url is not None else None,
    )


def extract_task_metadata(graph: RdfDataset, subject: Iri, vocab: Vocab = VOCAB) -> TaskMetadata:
    metrics = []
    for node in _objects(graph, subject, vocab.metric):
        if isinstance(node, Literal):
            raise TypeMismatchError("metrics", "metric must be a node, not a literal")
        name = _string(_one(graph, node, vocab.name, "metrics"), "metrics")
        unit = _string(_one(graph, node, vocab.unit, "metrics"), "metrics")
        direction_term = _one(graph, node, vocab.direction, "metrics")
        if direction_term == vocab.HigherBetter:
            direction = MetricDirection.HIGHER_BETTER
        elif direction_term == vocab.LowerBetter:
            direction = MetricDirection.LOWER_BETTER
        else:
            raise TypeMismatchError("metrics", "direction must be HigherBetter or LowerBetter")
        metrics.append(Metric(name=name, unit=unit, direction=direction))
    if not metrics:
        raise MissingFieldError("metrics")
    names = [m.name for m in metrics]
    if len(set(names)) != len(names):
        raise TypeMismatchError("metrics", "duplicate name")
    profiles = tuple(
        _iri(t, "requiredProfiles") for t in _objects(graph, subject, vocab.requiredProfile)
    )
    return TaskMetadata(
        id=_string(_one(graph, subject, vocab.id, "id"), "id"),
        name=_string(_one(graph, subject, vocab.name, "name"), "name"),
        description=_string(
            _one(graph, subject, vocab.description, "description"), "description"
        ),
        required_profiles=profiles,
        metrics=tuple(sorted(metrics, key=lambda m: m.name)),
    )


def extract_profile_metadata(
    graph: RdfDataset, subject: Iri, vocab: Vocab = VOCAB
) -> ProfileMetadata:
    constraints = []
    for node in _objects(graph, subject, vocab.constraint):
        if isinstance(node, Literal):
            raise TypeMismatchError("constraints", "constraint must be a node")
        kinds = []
        type_term = _optional(graph, node, vocab.elementTypeIs, "constraints")
        if type_term is not None:
            kinds.append(
                Constraint(ConstraintKind.ELEMENT_TYPE_IS, _extract_element_type(type_term, vocab))
            )
        min_term = _optional(graph, node, vocab.minElementCount, "constraints")
        if min_term is not None:
            kinds.append(
                Constraint(ConstraintKind.MIN_ELEMENT_COUNT, _integer(min_term, "constraints"))
            )
        max_term = _optional(graph, node, vocab.maxElementCount, "constraints")
        if max_term is not None:
            kinds.append(
                Constraint(ConstraintKind.MAX_ELEMENT_COUNT, _integer(max_term, "constraints"))
            )
        if len(kinds) != 1:
            raise TypeMismatchError("constraints", "each constraint node needs exactly one kind")
        constraints.extend(kinds)
    minimums = [c.value for c in constraints if c.kind is ConstraintKind.MIN_ELEMENT_COUNT]
    maximums = [c.value for c in constraints if c.kind is ConstraintKind.MAX_ELEMENT_COUNT]
    if minimums and maximums and min(maximums) < max(minimums):
        raise TypeMismatchError("constraints", "MinElementCount exceeds MaxElementCount")
    return ProfileMetadata(
        id=_string(_one(graph, subject, vocab.id, "id"), "id"),
        name=_string(_one(graph, subject, vocab.name, "name"), "name"),
        constraints=tuple(
            sorted(constraints, key=lambda c: (c.kind.value, str(c.value)))
        ),
    )


# ---------------------------------------------------------------------------
# Curator validation rules.
# ---------------------------------------------------------------------------


def validate_dataset_metadata(
    md: DatasetMetadata,
    *,
    license_allow_list: Iterable[Iri] = DEFAULT_LICENSE_ALLOW_LIST,
    min_element_count: int = DEFAULT_MIN_ELEMENT_COUNT,
) -> ValidationReport:
    """Apply the curator acceptance rules; findings are data, not exceptions."""
    violations = []

    def error(path: str, rule_id: str, message: str) -> None:
        violations.append(Violation(path, Severity.ERROR, message, rule_id))

    if not _ID_PATTERN.fullmatch(md.id):
        error("id", "id-format", f"identifier {md.id!r} must match [a-z0-9][a-z0-9-]*")
    if md.license not in set(license_allow_list):
        error("license", "open-license", f"license {md.license.value} is not an open license")
    if not any(agent.name.strip() for agent in md.creators):
        error("creators", "authorship", "at least one creator with a name is required")
    if md.declared_element_count < min_element_count:
        error(
            "elementCount",
            "sufficient-size",
            f"{md.declared_element_count} stream elements is below the "
            f"minimum of {min_element_count}",
        )
    if not md.use_case.strip():
        error("useCase", "clear-use-case", "a non-empty use case description is required")
    for i, agent in enumerate(md.creators):
        if agent.orcid is not None and not orcid_checksum_ok(agent.orcid):
            error(
                f"creators[{i}]",
                "orcid-checksum",
                f"ORCID {agent.orcid!r} fails its checksum",
            )
    return ValidationReport(tuple(violations))


def profile_accepts(profile: ProfileMetadata, md: DatasetMetadata) -> bool:
    """Conjunction of the profile's constraints over the dataset metadata."""
    for constraint in profile.constraints:
        if constraint.kind is ConstraintKind.ELEMENT_TYPE_IS:
            if md.stream_element_type is not constraint.value:
                return False
        elif constraint.kind is ConstraintKind.MIN_ELEMENT_COUNT:
            if md.declared_element_count < constraint.value:
                return False
        elif constraint.kind is ConstraintKind.MAX_ELEMENT_COUNT:
            if md.declared_element_count > constraint.value:
                return False
    return True


# ---------------------------------------------------------------------------
# Enrichment.
# ---------------------------------------------------------------------------

_FUNCTIONAL_TERMS = (
    "elementCount",
    "byteSize",
    "sha256",
    "totalStatements",
    "distinctSubjects",
    "distinctPredicates",
    "distinctObjects",
    "usesNamedGraphs",
)


def enrich_metadata(
    original: RdfDataset, computed: RdfDataset, vocab: Vocab = VOCAB
) -> RdfDataset:
    """Union of declared and computed metadata; computed wins on functional
    predicates. Contradictory element counts are refused outright."""
    count_pred = vocab.elementCount
    declared_counts = {
        (q.subject, q.object) for q in original.quads if q.predicate == count_pred
    }
    computed_counts = {
        (q.subject, q.object) for q in computed.quads if q.predicate == count_pred
    }
    for subject, declared in sorted(declared_counts, key=lambda p: str(p)):
        for comp_subject, comp_value in computed_counts:
            if comp_subject == subject and comp_value != declared:
                raise ConflictError(
                    f"declared element count {getattr(declared, 'lexical', declared)} "
                    f"does not match computed {getattr(comp_value, 'lexical', comp_value)}"
                )
    functional = {getattr(vocab, name) for name in _FUNCTIONAL_TERMS}
    overridden = {
        (q.subject, q.predicate) for q in computed.quads if q.predicate in functional
    }
    kept = [
        q
        for q in original.quads
        if not (q.predicate in functional and (q.subject, q.predicate) in overridden)
    ]
    merged_prefixes = dict(original.prefixes)
    merged_prefixes.update(computed.prefixes)
    return RdfDataset(list(computed.quads) + kept, merged_prefixes)


# ---------------------------------------------------------------------------
# RDF emitters (typed view -> graph). Blank node labels are prefixed with
# the resource id so merged dumps cannot collide.
# ---------------------------------------------------------------------------


def _str_lit(value: str) -> Literal:
    return Literal(value)


def _int_lit(value: int) -> Literal:
    return Literal(str(value), XSD_INTEGER)


def _bool_lit(value: bool) -> Literal:
    return Literal("true" if value else "false", XSD_BOOLEAN)


def dataset_to_rdf(
    md: DatasetMetadata,
    subject: Iri,
    vocab: Vocab = VOCAB,
    stats: "StatisticsReport | None" = None,
    distributions: "Iterable[Distribution]" = (),
) -> RdfDataset:
    quads = [
        Quad(subject, RDF_TYPE, vocab.Dataset),
        Quad(subject, vocab.id, _str_lit(md.id)),
        Quad(subject, vocab.title, _str_lit(md.title)),
        Quad(subject, vocab.description, _str_lit(md.description)),
        Quad(subject, vocab.license, md.license),
        Quad(subject, vocab.useCase, _str_lit(md.use_case)),
        Quad(
            subject,
            vocab.streamElementType,
            getattr(vocab, md.stream_element_type.value),
        ),
    ]
    if md.source_url is not None:
        quads.append(Quad(subject, vocab.sourceUrl, md.source_url))
    for i, agent in enumerate(md.creators):
        node = BlankNode(f"{md.id}:creator{i}")
        quads.append(Quad(subject, vocab.creator, node))
        quads.append(Quad(node, RDF_TYPE, vocab.Agent))
        if agent.name:
            quads.append(Quad(node, vocab.name, _str_lit(agent.name)))
        if agent.orcid is not None:
            quads.append(Quad(node, vocab.orcid, _str_lit(agent.orcid)))
    if stats is not None:
        quads.extend(
            [
                Quad(subject, vocab.elementCount, _int_lit(stats.element_count)),
                Quad(subject, vocab.totalStatements, _int_lit(stats.total_statements)),
                Quad(subject, vocab.distinctSubjects, _int_lit(stats.distinct_subjects)),
                Quad(subject, vocab.distinctPredicates, _int_lit(stats.distinct_predicates)),
                Quad(subject, vocab.distinctObjects, _int_lit(stats.distinct_objects)),
                Quad(subject, vocab.usesNamedGraphs, _bool_lit(stats.uses_named_graphs)),
            ]
        )
    else:
        quads.append(Quad(subject, vocab.elementCount, _int_lit(md.declared_element_count)))
    quads.extend(distributions_to_rdf(md.id, subject, distributions, vocab).quads)
    return RdfDataset(quads)


def distributions_to_rdf(
    dataset_id: str,
    subject: Iri,
    distributions: "Iterable[Distribution]",
    vocab: Vocab = VOCAB,
) -> RdfDataset:
    quads = []
    for i, dist in enumerate(sorted(distributions, key=lambda d: d.file_name)):
        node = BlankNode(f"{dataset_id}:dist{i}")
        kind_term = vocab.Flat if dist.kind.value == "Flat" else vocab.Stream
        quads.append(Quad(subject, vocab.distribution, node))
        quads.append(Quad(node, RDF_TYPE, vocab.Distribution))
        quads.append(Quad(node, vocab.kind, kind_term))
        quads.append(Quad(node, vocab.format, _str_lit(dist.format.media_type)))
        if dist.size_cap is not None:
            quads.append(Quad(node, vocab.sizeCap, _int_lit(dist.size_cap)))
        quads.append(Quad(node, vocab.byteSize, _int_lit(dist.byte_size)))
        quads.append(Quad(node, vocab.sha256, _str_lit(dist.sha256)))
        quads.append(Quad(node, vocab.fileName, _str_lit(dist.file_name)))
    return RdfDataset(quads)


def task_to_rdf(md: TaskMetadata, subject: Iri, vocab: Vocab = VOCAB) -> RdfDataset:
    quads = [
        Quad(subject, RDF_TYPE, vocab.Task),
        Quad(subject, vocab.id, _str_lit(md.id)),
        Quad(subject, vocab.name, _str_lit(md.name)),
        Quad(subject, vocab.description, _str_lit(md.description)),
    ]
    for profile in md.required_profiles:
        quads.append(Quad(subject, vocab.requiredProfile, profile))
    for i, metric in enumerate(md.metrics):
        node = BlankNode(f"{md.id}:metric{i}")
        direction = (
            vocab.HigherBetter
            if metric.direction is MetricDirection.HIGHER_BETTER
            else vocab.LowerBetter
        )
        quads.append(Quad(subject, vocab.metric, node))
        quads.append(Quad(node, RDF_TYPE, vocab.Metric))
        quads.append(Quad(node, vocab.name, _str_lit(metric.name)))
        quads.append(Quad(node, vocab.unit, _str_lit(metric.unit)))
        quads.append(Quad(node, vocab.direction, direction))
    return RdfDataset(quads)


def profile_to_rdf(md: ProfileMetadata, subject: Iri, vocab: Vocab = VOCAB) -> RdfDataset:
    quads = [
        Quad(subject, RDF_TYPE, vocab.Profile),
        Quad(subject, vocab.id, _str_lit(md.id)),
        Quad(subject, vocab.name, _str_lit(md.name)),
    ]
    for i, constraint in enumerate(md.constraints):
        node = BlankNode(f"{md.id}:constraint{i}")
        quads.append(Quad(subject, vocab.constraint, node))
        quads.append(Quad(node, RDF_TYPE, vocab.Constraint))
        if constraint.kind is ConstraintKind.ELEMENT_TYPE_IS:
            quads.append(
                Quad(node, vocab.elementTypeIs, getattr(vocab, constraint.value.value))
            )
        elif constraint.kind is ConstraintKind.MIN_ELEMENT_COUNT:
            quads.append(Quad(node, vocab.minElementCount, _int_lit(constraint.value)))
        else:
            quads.append(Quad(node, vocab.maxElementCount, _int_lit(constraint.value)))
    return RdfDataset(quads)
