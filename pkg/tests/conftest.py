"""Shared builders for the test suite.

Everything random is seeded by the caller so that a failing case can be
replayed by seed alone. The catalog and nanopub builders produce the same
shapes the CLI writes, which keeps the unit tests and the end-to-end
acceptance tests honest about one another.
"""

from __future__ import annotations

import random
from datetime import date
from pathlib import Path

from benchcat.metadata import (
    Agent,
    Constraint,
    ConstraintKind,
    DatasetMetadata,
    Metric,
    MetricDirection,
    ProfileMetadata,
    StreamElementType,
    TaskMetadata,
    dataset_to_rdf,
    profile_to_rdf,
    task_to_rdf,
)
from benchcat.nanopub import (
    BenchmarkRunReport,
    SystemUnderTest,
    build_report_nanopub,
    nanopub_to_trig,
)
from benchcat.packaging import StatisticsReport, statistics_to_rdf
from benchcat.rdf.terms import (
    DEFAULT_GRAPH,
    XSD_INTEGER,
    BlankNode,
    DefaultGraph,
    Iri,
    Literal,
    Quad,
    RdfDataset,
    RdfFormat,
)
from benchcat.rdf.serializer import serialize_document
from benchcat.sitegen import Catalog, DatasetEntry, ProfileEntry, TaskEntry

DATA_DIR = Path(__file__).parent / "data"

EX = "http://example.com/"

# Checksum-valid sample identifier (the ISO 7064 test vector).
ORCID_OK = "0000-0002-1825-0097"


# ---------------------------------------------------------------------------
# Random dataset generation.
# ---------------------------------------------------------------------------

_SUBJECT_IRIS = tuple(Iri(f"{EX}s{i}") for i in range(6))
_PREDICATES = tuple(Iri(f"{EX}p{i}") for i in range(4))
_GRAPH_IRIS = tuple(Iri(f"{EX}g{i}") for i in range(2))
_LANGS = ("en", "de", "pt-BR")
_WORDS = ("alpha", "beta", 'say "hi"', "line\nbreak", "tab\there", "café")


def random_literal(rng: random.Random) -> Literal:
    roll = rng.random()
    if roll < 0.4:
        return Literal(rng.choice(_WORDS))
    if roll < 0.7:
        return Literal(rng.choice(("hello", "salut", "moin")), language=rng.choice(_LANGS))
    if roll < 0.85:
        return Literal(str(rng.randint(-5, 99)), datatype=XSD_INTEGER)
    return Literal(format(rng.randrange(16**4), "04x"), datatype=Iri(EX + "hex"))


def _random_node(rng: random.Random, bnodes, *, literal_ok: bool):
    if literal_ok and rng.random() < 0.45:
        return random_literal(rng)
    if bnodes and rng.random() < 0.35:
        return rng.choice(bnodes)
    return rng.choice(_SUBJECT_IRIS)


def random_dataset(
    rng: random.Random,
    *,
    max_quads: int = 10,
    max_bnodes: int = 4,
    allow_named_graphs: bool = True,
) -> RdfDataset:
    """A small dataset with mixed literal kinds and optional named graphs."""
    bnodes = [BlankNode(f"n{i}") for i in range(rng.randint(0, max_bnodes))]
    use_named = allow_named_graphs and rng.random() < 0.5
    quads = []
    for _ in range(rng.randint(1, max_quads)):
        graph = DEFAULT_GRAPH
        if use_named and rng.random() < 0.5:
            if bnodes and rng.random() < 0.25:
                graph = rng.choice(bnodes)
            else:
                graph = rng.choice(_GRAPH_IRIS)
        quads.append(
            Quad(
                _random_node(rng, bnodes, literal_ok=False),
                rng.choice(_PREDICATES),
                _random_node(rng, bnodes, literal_ok=True),
                graph,
            )
        )
    return RdfDataset(quads)


def legal_formats(dataset: RdfDataset) -> tuple[RdfFormat, ...]:
    """Triple-only syntaxes cannot carry named graphs."""
    if all(isinstance(q.graph, DefaultGraph) for q in dataset):
        return (RdfFormat.TURTLE, RdfFormat.TRIG, RdfFormat.NTRIPLES, RdfFormat.NQUADS)
    return (RdfFormat.TRIG, RdfFormat.NQUADS)


def relabel_blank_nodes(dataset: RdfDataset, rng: random.Random) -> RdfDataset:
    """Same graph under fresh shuffled labels: the positive-pair builder."""
    labels = sorted(
        {
            term.label
            for q in dataset
            for term in (q.subject, q.object, q.graph)
            if isinstance(term, BlankNode)
        }
    )
    fresh = [f"ren{i}" for i in range(len(labels))]
    rng.shuffle(fresh)
    mapping = dict(zip(labels, fresh))

    def swap(term):
        if isinstance(term, BlankNode):
            return BlankNode(mapping[term.label])
        return term

    quads = [Quad(swap(q.subject), q.predicate, swap(q.object), swap(q.graph)) for q in dataset]
    rng.shuffle(quads)
    return RdfDataset(quads)


def mutate_dataset(dataset: RdfDataset, rng: random.Random) -> RdfDataset:
    """Perturb one quad; the result is almost never isomorphic to the input."""
    quads = list(dataset)
    roll = rng.random()
    if not quads or roll < 0.34:
        quads.append(
            Quad(Iri(f"{EX}fresh{rng.randrange(10**6)}"), rng.choice(_PREDICATES), Literal("added"))
        )
    elif roll < 0.67:
        quads.pop(rng.randrange(len(quads)))
        if not quads:
            quads.append(Quad(Iri(EX + "only"), _PREDICATES[0], Literal("left")))
    else:
        i = rng.randrange(len(quads))
        q = quads[i]
        quads[i] = Quad(q.subject, Iri(f"{EX}mut{rng.randrange(10**6)}"), q.object, q.graph)
    return RdfDataset(quads)


# ---------------------------------------------------------------------------
# Source trees (one RDF file per stream element).
# ---------------------------------------------------------------------------


def write_source_elements(directory: Path, *, count: int = 20, seed: int = 701) -> None:
    """N-Triples element files with 1 to 5 statements each."""
    rng = random.Random(seed)
    directory.mkdir(parents=True, exist_ok=True)
    for i in range(count):
        lines = [
            f'<{EX}e{i}> <{EX}p{j}> "v{i}-{j}" .'
            for j in range(rng.randint(1, 5))
        ]
        (directory / f"element-{i:04d}.nt").write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# Typed metadata builders.
# ---------------------------------------------------------------------------


def make_dataset_metadata(**overrides) -> DatasetMetadata:
    values = dict(
        id="river-flow",
        title="River Flow",
        description="Synthetic sensor readings for ingestion drills.",
        license=Iri("https://creativecommons.org/licenses/by/4.0/"),
        creators=(Agent("Ada Example", ORCID_OK),),
        use_case="Exercises streaming parsers under bursty input.",
        stream_element_type=StreamElementType.TRIPLES,
        declared_element_count=2000,
        source_url=None,
    )
    values.update(overrides)
    return DatasetMetadata(**values)


def make_task_metadata(task_id: str = "stream-load", profiles=("flat",)) -> TaskMetadata:
    return TaskMetadata(
        id=task_id,
        name=task_id.replace("-", " ").title(),
        description=f"Measures {task_id} behaviour end to end.",
        required_profiles=tuple(Iri(f"{EX}profiles/{p}") for p in profiles),
        # name order, matching the canonical order extraction imposes
        metrics=(
            Metric("latency", "ms", MetricDirection.LOWER_BETTER),
            Metric("throughput", "elements/s", MetricDirection.HIGHER_BETTER),
        ),
    )


def make_profile_metadata(profile_id: str = "flat") -> ProfileMetadata:
    return ProfileMetadata(
        id=profile_id,
        name=profile_id.title(),
        constraints=(Constraint(ConstraintKind.ELEMENT_TYPE_IS, StreamElementType.TRIPLES),),
    )


def make_statistics(**overrides) -> StatisticsReport:
    values = dict(
        element_count=2000,
        total_statements=6100,
        distinct_subjects=2000,
        distinct_predicates=5,
        distinct_objects=6100,
        uses_named_graphs=False,
    )
    values.update(overrides)
    return StatisticsReport(**values)


def make_report(i: int = 0, *, task: str | None = None, day: int | None = None) -> BenchmarkRunReport:
    return BenchmarkRunReport(
        report_iri=Iri(f"{EX}reports/run-{i}"),
        task=Iri(task or f"{EX}tasks/stream-load"),
        profile=Iri(f"{EX}profiles/flat"),
        profile_version="1.0.0",
        benchmark_code=Iri("https://github.com/example/bench-harness"),
        systems=(SystemUnderTest("engine-a", "1.2"), SystemUnderTest("engine-b", "0.9")),
        author_orcid=ORCID_OK,
        date=date(2024, 5, (day if day is not None else (i % 27) + 1)),
        results_link=None,
    )


def make_catalog(
    *,
    n_datasets: int = 1,
    n_tasks: int = 1,
    reports=(),
    version: str = "dev",
) -> Catalog:
    datasets = tuple(
        DatasetEntry(
            subject=Iri(f"{EX}datasets/ds-{i}"),
            metadata=make_dataset_metadata(id=f"ds-{i}", title=f"Dataset {i}"),
            statistics=make_statistics(),
            distributions=(),
        )
        for i in range(n_datasets)
    )
    tasks = tuple(
        TaskEntry(Iri(f"{EX}tasks/task-{i}"), make_task_metadata(f"task-{i}"))
        for i in range(n_tasks)
    )
    profiles = (ProfileEntry(Iri(f"{EX}profiles/flat"), make_profile_metadata("flat")),)
    return Catalog(
        datasets=datasets,
        tasks=tasks,
        profiles=profiles,
        reports=tuple(reports),
        version=version,
    )


# ---------------------------------------------------------------------------
# On-disk catalog trees (the layout gen-site consumes).
# ---------------------------------------------------------------------------


def write_catalog_tree(
    directory: Path,
    *,
    dataset_ids=("river-flow",),
    task_ids=("stream-load",),
    profile_ids=("flat",),
    report_trigs=(),
    version: str | None = None,
) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    if version is not None:
        (directory / "VERSION").write_text(version + "\n", encoding="utf-8")
    for ds in dataset_ids:
        ds_dir = directory / "datasets" / ds
        ds_dir.mkdir(parents=True, exist_ok=True)
        md = make_dataset_metadata(id=ds, title=ds.replace("-", " ").title())
        subject = Iri(f"{EX}datasets/{ds}")
        ds_dir.joinpath("metadata.ttl").write_bytes(
            serialize_document(dataset_to_rdf(md, subject), RdfFormat.TURTLE)
        )
        ds_dir.joinpath("stats.ttl").write_bytes(
            serialize_document(statistics_to_rdf(make_statistics(), subject), RdfFormat.TURTLE)
        )
    tasks_dir = directory / "tasks"
    tasks_dir.mkdir(exist_ok=True)
    for task_id in task_ids:
        graph = task_to_rdf(make_task_metadata(task_id, profile_ids), Iri(f"{EX}tasks/{task_id}"))
        tasks_dir.joinpath(f"{task_id}.ttl").write_bytes(
            serialize_document(graph, RdfFormat.TURTLE)
        )
    profiles_dir = directory / "profiles"
    profiles_dir.mkdir(exist_ok=True)
    for profile_id in profile_ids:
        graph = profile_to_rdf(make_profile_metadata(profile_id), Iri(f"{EX}profiles/{profile_id}"))
        profiles_dir.joinpath(f"{profile_id}.ttl").write_bytes(
            serialize_document(graph, RdfFormat.TURTLE)
        )
    reports_dir = directory / "reports"
    reports_dir.mkdir(exist_ok=True)
    for name, payload in report_trigs:
        reports_dir.joinpath(name).write_bytes(payload)


# ---------------------------------------------------------------------------
# Nanopublication corpora.
# ---------------------------------------------------------------------------


def valid_nanopub_bytes(report: BenchmarkRunReport) -> bytes:
    np = build_report_nanopub(report, Iri(report.report_iri.value + "-np"))
    return nanopub_to_trig(np)


def _without_graph(report: BenchmarkRunReport, suffix: str) -> bytes:
    np = build_report_nanopub(report, Iri(report.report_iri.value + "-np"))
    doc = np.to_dataset()
    victim = Iri(np.uri.value + suffix)
    trimmed = RdfDataset([q for q in doc if q.graph != victim], doc.prefixes)
    return serialize_document(trimmed, RdfFormat.TRIG)


def broken_nanopub_missing_provenance(i: int = 900) -> bytes:
    return _without_graph(make_report(i), "#provenance")


def broken_nanopub_no_head_link(i: int = 901) -> bytes:
    np = build_report_nanopub(make_report(i), Iri(f"{EX}reports/run-{i}-np"))
    doc = np.to_dataset()
    head = Iri(np.uri.value + "#head")
    kept = [
        q
        for q in doc
        if not (q.graph == head and "hasAssertion" in str(getattr(q.predicate, "value", "")))
    ]
    return serialize_document(RdfDataset(kept, doc.prefixes), RdfFormat.TRIG)


def write_nanopub_corpus(directory: Path, *, tasks=("alpha", "beta")) -> list[str]:
    """Eight valid reports spread over the given tasks plus two broken docs.

    Returns the expected report IRIs in discovery order (date desc, IRI asc).
    """
    directory.mkdir(parents=True, exist_ok=True)
    reports = []
    for i in range(8):
        task = f"{EX}tasks/{tasks[i % len(tasks)]}"
        reports.append(make_report(i, task=task, day=(i % 5) + 1))
    for i, report in enumerate(reports):
        directory.joinpath(f"report-{i}.trig").write_bytes(valid_nanopub_bytes(report))
    directory.joinpath("broken-x.trig").write_bytes(broken_nanopub_missing_provenance())
    directory.joinpath("broken-y.trig").write_bytes(broken_nanopub_no_head_link())
    ordered = sorted(reports, key=lambda r: r.report_iri.value)
    ordered.sort(key=lambda r: r.date, reverse=True)
    return [r.report_iri.value for r in ordered]
