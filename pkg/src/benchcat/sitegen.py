"""Documentation site and metadata dump generation.

Everything here is a pure function of the catalog: pages are Markdown,
dumps are canonical N-Quads and Turtle, and regenerating an unchanged
catalog reproduces every output byte for byte.
"""

from __future__ import annotations

import hashlib
import re
import urllib.parse
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import (
    ConfigError,
    ConflictError,
    DanglingReferenceWarning,
    InvalidPathError,
    NotFoundError,
)
from .metadata import (
    ORCID_IRI_PREFIX,
    ConstraintKind,
    DatasetMetadata,
    MetricDirection,
    ProfileMetadata,
    TaskMetadata,
    dataset_to_rdf,
    extract_dataset_metadata,
    extract_profile_metadata,
    extract_task_metadata,
    find_typed_subject,
    profile_accepts,
    profile_to_rdf,
    task_to_rdf,
)
from .nanopub import BenchmarkRunReport, DirectoryIndexSource, discover_reports
from .packaging import (
    Distribution,
    StatisticsReport,
    distribution_from_file,
    extract_statistics,
)
from .purl import RedirectRule, RedirectTable
from .rdf import (
    Iri,
    RdfDataset,
    RdfFormat,
    canonical_blank_node_labels,
    parse_document,
    serialize_document,
)
from .vocab import VOCAB, Vocab

_VERSION_RE = re.compile(r"^\d+\.\d+\.\d+$")


@dataclass(frozen=True)
class DatasetEntry:
    subject: Iri
    metadata: DatasetMetadata
    statistics: StatisticsReport
    distributions: tuple[Distribution, ...] = ()


@dataclass(frozen=True)
class TaskEntry:
    subject: Iri
    metadata: TaskMetadata


@dataclass(frozen=True)
class ProfileEntry:
    subject: Iri
    metadata: ProfileMetadata


@dataclass(frozen=True)
class Catalog:
    datasets: tuple[DatasetEntry, ...] = ()
    tasks: tuple[TaskEntry, ...] = ()
    profiles: tuple[ProfileEntry, ...] = ()
    reports: tuple[BenchmarkRunReport, ...] = ()
    version: str = "dev"

    def __post_init__(self) -> None:
        if self.version != "dev" and not _VERSION_RE.match(self.version):
            raise ConfigError(f"version must be 'dev' or MAJOR.MINOR.PATCH: {self.version!r}")
        for kind, ids in (
            ("dataset", [e.metadata.id for e in self.datasets]),
            ("task", [e.metadata.id for e in self.tasks]),
            ("profile", [e.metadata.id for e in self.profiles]),
            ("report", [r.report_iri.value for r in self.reports]),
        ):
            seen = set()
            for value in ids:
                if value in seen:
                    raise ConflictError(f"duplicate {kind} id {value!r}")
                seen.add(value)
        subjects = (
            [e.subject.value for e in self.datasets]
            + [e.subject.value for e in self.tasks]
            + [e.subject.value for e in self.profiles]
        )
        if len(subjects) != len(set(subjects)):
            raise ConflictError("resource IRIs must be unique across the catalog")


def profile_members(catalog: Catalog, profile: ProfileEntry) -> list[DatasetEntry]:
    """Datasets matching the profile's constraints; computed, never stored."""
    return [e for e in catalog.datasets if profile_accepts(profile.metadata, e.metadata)]


@dataclass(frozen=True)
class Page:
    path: str
    title: str
    body: str
    edit_url: Optional[Iri] = None


def page_href(path: str) -> str:
    """Site-absolute link target for a generated page path."""
    if path.endswith("/index.md"):
        return "/" + path[: -len("index.md")]
    if path.endswith(".md"):
        return "/" + path[: -len(".md")]
    return "/" + path


def report_slug(iri: Iri) -> str:
    """Filesystem-safe page name for a report IRI, stable and collision-resistant."""
    tail = re.split(r"[/#]", iri.value.rstrip("/#"))[-1]
    stem = re.sub(r"[^A-Za-z0-9._-]+", "-", tail).strip("-.") or "report"
    digest = hashlib.sha256(iri.value.encode("utf-8")).hexdigest()[:8]
    return f"{stem}-{digest}"


def render_edit_url(source_repo_base: Iri, source_path: str) -> Iri:
    """Edit link: repository base, the main branch, then the source file."""
    if not source_path:
        raise InvalidPathError("source path is empty")
    if source_path.startswith("/") or ".." in source_path.split("/"):
        raise InvalidPathError(f"source path must stay inside the repository: {source_path!r}")
    encoded = urllib.parse.quote(source_path, safe="/")
    return Iri(source_repo_base.value.rstrip("/") + "/edit/main/" + encoded)


# ---------------------------------------------------------------------------
# Markdown helpers. Curator text is plain prose; only table syntax needs care.
# ---------------------------------------------------------------------------


def _cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("|" + "|".join(" --- " for _ in header) + "|")
    for row in rows:
        lines.append("| " + " | ".join(_cell(c) for c in row) + " |")
    return lines


def _footer(lines: list[str], edit_url: Optional[Iri]) -> None:
    if edit_url is not None:
        lines.extend(["", f"[Edit this page]({edit_url.value})"])


def _maybe_edit(source_repo_base: Optional[Iri], source_path: str) -> Optional[Iri]:
    if source_repo_base is None:
        return None
    return render_edit_url(source_repo_base, source_path)


def render_dataset_page(
    entry: DatasetEntry, *, source_repo_base: Optional[Iri] = None
) -> Page:
    md, stats = entry.metadata, entry.statistics
    lines = [f"# {md.title}", "", md.description, "", "## Facts", ""]
    facts = [
        ("Identifier", f"`{md.id}`"),
        ("License", f"<{md.license.value}>"),
    ]
    if md.creators:
        rendered = []
        for agent in md.creators:
            if agent.orcid:
                link = f"[{agent.orcid}]({ORCID_IRI_PREFIX}{agent.orcid})"
                rendered.append(f"{agent.name} ({link})" if agent.name else link)
            else:
                rendered.append(agent.name)
        facts.append(("Creators", ", ".join(rendered)))
    facts.append(("Use case", md.use_case))
    facts.append(("Element type", md.stream_element_type.value.lower()))
    if md.source_url is not None:
        facts.append(("Source", f"<{md.source_url.value}>"))
    lines.extend(_table(("Field", "Value"), facts))
    lines.extend(["", "## Statistics", ""])
    lines.extend(
        _table(
            ("Metric", "Value"),
            [
                ("Elements", str(stats.element_count)),
                ("Statements", str(stats.total_statements)),
                ("Distinct subjects", str(stats.distinct_subjects)),
                ("Distinct predicates", str(stats.distinct_predicates)),
                ("Distinct objects", str(stats.distinct_objects)),
                ("Named graphs", "yes" if stats.uses_named_graphs else "no"),
            ],
        )
    )
    if entry.distributions:
        lines.extend(["", "## Downloads", ""])
        rows = [
            (f"`{d.file_name}`", str(d.byte_size), f"`{d.sha256}`")
            for d in sorted(entry.distributions, key=lambda d: d.file_name)
        ]
        lines.extend(_table(("File", "Bytes", "SHA-256"), rows))
    edit_url = _maybe_edit(source_repo_base, f"datasets/{md.id}/metadata.ttl")
    _footer(lines, edit_url)
    return Page(
        path=f"datasets/{md.id}/index.md",
        title=md.title,
        body="\n".join(lines) + "\n",
        edit_url=edit_url,
    )


_DIRECTION_TEXT = {
    MetricDirection.HIGHER_BETTER: "higher is better",
    MetricDirection.LOWER_BETTER: "lower is better",
}


def render_task_page(
    entry: TaskEntry,
    profiles: Sequence[ProfileEntry] = (),
    *,
    source_repo_base: Optional[Iri] = None,
) -> Page:
    md = entry.metadata
    by_subject = {p.subject: p for p in profiles}
    lines = [f"# {md.name}", "", md.description]
    if md.metrics:
        lines.extend(["", "## Metrics", ""])
        rows = [(m.name, m.unit, _DIRECTION_TEXT[m.direction]) for m in md.metrics]
        lines.extend(_table(("Metric", "Unit", "Direction"), rows))
    if md.required_profiles:
        lines.extend(["", "## Required profiles", ""])
        for iri in md.required_profiles:
            profile = by_subject.get(iri)
            if profile is None:
                lines.append(f"- `{iri.value}`")
            else:
                href = page_href(f"profiles/{profile.metadata.id}/index.md")
                lines.append(f"- [{profile.metadata.name}]({href})")
    edit_url = _maybe_edit(source_repo_base, f"tasks/{md.id}.ttl")
    _footer(lines, edit_url)
    return Page(
        path=f"tasks/{md.id}/index.md",
        title=md.name,
        body="\n".join(lines) + "\n",
        edit_url=edit_url,
    )


def _constraint_text(kind: ConstraintKind, value) -> str:
    if kind is ConstraintKind.ELEMENT_TYPE_IS:
        return f"element type is {value.value.lower()}"
    if kind is ConstraintKind.MIN_ELEMENT_COUNT:
        return f"at least {value} elements"
    return f"at most {value} elements"


def render_profile_page(
    entry: ProfileEntry,
    members: Sequence[DatasetEntry] = (),
    *,
    source_repo_base: Optional[Iri] = None,
) -> Page:
    md = entry.metadata
    lines = [f"# {md.name}", "", f"Identifier: `{md.id}`"]
    if md.constraints:
        lines.extend(["", "## Constraints", ""])
        for c in md.constraints:
            lines.append(f"- {_constraint_text(c.kind, c.value)}")
    lines.extend(["", "## Member datasets", ""])
    if members:
        for dataset in members:
            href = page_href(f"datasets/{dataset.metadata.id}/index.md")
            lines.append(f"- [{dataset.metadata.title}]({href})")
    else:
        lines.append("_No datasets currently match this profile._")
    edit_url = _maybe_edit(source_repo_base, f"profiles/{md.id}.ttl")
    _footer(lines, edit_url)
    return Page(
        path=f"profiles/{md.id}/index.md",
        title=md.name,
        body="\n".join(lines) + "\n",
        edit_url=edit_url,
    )


def _systems_summary(report: BenchmarkRunReport) -> str:
    return ", ".join(f"{s.name} {s.version}" for s in report.systems)


def render_results_index(
    reports: Sequence[BenchmarkRunReport], tasks: Sequence[TaskEntry]
) -> tuple[Page, list[DanglingReferenceWarning]]:
    """Reports grouped by task, newest first; unknown tasks warn, not fail."""
    warnings: list[DanglingReferenceWarning] = []
    by_task: dict[Iri, list[BenchmarkRunReport]] = {t.subject: [] for t in tasks}
    unknown: list[BenchmarkRunReport] = []
    for report in reports:
        if report.task in by_task:
            by_task[report.task].append(report)
        else:
            unknown.append(report)
            warnings.append(
                DanglingReferenceWarning(
                    report.report_iri.value,
                    f"cites unknown task {report.task.value}",
                )
            )
    lines = ["# Benchmark results", ""]

    def emit_group(heading: str, group: list[BenchmarkRunReport]) -> None:
        lines.extend([f"## {heading}", ""])
        if not group:
            lines.extend(["_No reports yet._", ""])
            return
        group = sorted(group, key=lambda r: r.report_iri.value)
        group.sort(key=lambda r: r.date, reverse=True)
        rows = [
            (
                r.date.isoformat(),
                _systems_summary(r),
                f"[details](/results/{report_slug(r.report_iri)})",
            )
            for r in group
        ]
        lines.extend(_table(("Date", "Systems", "Report"), rows))
        lines.append("")
    for task in tasks:
        emit_group(task.metadata.name, by_task[task.subject])
    if unknown:
        emit_group("Unknown task", unknown)
    body = "\n".join(lines).rstrip("\n") + "\n"
    return Page(path="results/index.md", title="Benchmark results", body=body), warnings


def render_report_page(
    report: BenchmarkRunReport,
    tasks: Sequence[TaskEntry] = (),
    profiles: Sequence[ProfileEntry] = (),
) -> Page:
    task_by_subject = {t.subject: t for t in tasks}
    profile_by_subject = {p.subject: p for p in profiles}

    def resource_ref(iri: Iri, entry, kind: str) -> str:
        if entry is None:
            return f"`{iri.value}`"
        return f"[{entry.metadata.name}]({page_href(f'{kind}/{entry.metadata.id}/index.md')})"

    orcid = report.author_orcid
    rows = [
        ("Task", resource_ref(report.task, task_by_subject.get(report.task), "tasks")),
        (
            "Profile",
            resource_ref(report.profile, profile_by_subject.get(report.profile), "profiles")
            + f" (version {report.profile_version})",
        ),
        ("Benchmark code", f"<{report.benchmark_code.value}>"),
        ("Author", f"[{orcid}]({ORCID_IRI_PREFIX}{orcid})"),
        ("Date", report.date.isoformat()),
    ]
    if report.results_link is not None:
        rows.append(("Results", f"<{report.results_link.value}>"))
    lines = ["# Benchmark run report", "", f"Report IRI: `{report.report_iri.value}`", ""]
    lines.extend(_table(("Field", "Value"), rows))
    lines.extend(["", "## Systems", ""])
    lines.extend(_table(("Name", "Version"), [(s.name, s.version) for s in report.systems]))
    return Page(
        path=f"results/{report_slug(report.report_iri)}.md",
        title="Benchmark run report",
        body="\n".join(lines) + "\n",
    )


# ---------------------------------------------------------------------------
# Metadata dumps.
# ---------------------------------------------------------------------------


def _scoped_union(parts: Sequence[RdfDataset]) -> RdfDataset:
    """Merge independently built graphs without blank label capture."""
    quads = []
    for i, part in enumerate(parts):
        mapping = canonical_blank_node_labels(part)
        renamed = part.relabel_blank_nodes(
            {old: f"p{i}_{new}" for old, new in mapping.items()}
        )
        quads.extend(renamed.quads)
    return RdfDataset(quads)


def catalog_to_rdf(catalog: Catalog, vocab: Vocab = VOCAB) -> RdfDataset:
    """All catalog metadata plus report assertions as one default graph."""
    from .nanopub import build_report_nanopub

    parts = []
    for entry in catalog.datasets:
        parts.append(
            dataset_to_rdf(
                entry.metadata,
                entry.subject,
                vocab,
                stats=entry.statistics,
                distributions=entry.distributions,
            )
        )
    for task in catalog.tasks:
        parts.append(task_to_rdf(task.metadata, task.subject, vocab))
    for profile in catalog.profiles:
        parts.append(profile_to_rdf(profile.metadata, profile.subject, vocab))
    for report in catalog.reports:
        np = build_report_nanopub(report, Iri(report.report_iri.value + "-np"), vocab)
        parts.append(np.assertion)
    return _scoped_union(parts)


def emit_metadata_dump(catalog: Catalog, vocab: Vocab = VOCAB) -> dict[str, bytes]:
    merged = catalog_to_rdf(catalog, vocab)
    return {
        "catalog.nq": serialize_document(merged, RdfFormat.NQUADS, canonical_labels=False),
        "catalog.ttl": serialize_document(merged, RdfFormat.TURTLE, canonical_labels=False),
    }


# ---------------------------------------------------------------------------
# Whole-site assembly.
# ---------------------------------------------------------------------------


def _redirect_table(catalog: Catalog) -> RedirectTable:
    default = catalog.version if catalog.version != "dev" else "dev"
    entries = [
        RedirectRule("/datasets/{id}", "site/datasets/{id}/index.md"),
        RedirectRule("/tasks/{id}", "site/tasks/{id}/index.md"),
        RedirectRule("/profiles/{id}", "site/profiles/{id}/index.md"),
        RedirectRule("/results", "site/results/index.md"),
        RedirectRule("/results/{report}", "site/results/{report}.md"),
        RedirectRule("/dumps/{file}", "dumps/{file}"),
        RedirectRule("/v/{version}/datasets/{id}", "site/datasets/{id}/index.md"),
        RedirectRule("/v/{version}/tasks/{id}", "site/tasks/{id}/index.md"),
        RedirectRule("/v/{version}/profiles/{id}", "site/profiles/{id}/index.md"),
        RedirectRule("/v/{version}/results", "site/results/index.md"),
        RedirectRule("/v/{version}/results/{report}", "site/results/{report}.md"),
        RedirectRule("/v/{version}/dumps/{file}", "dumps/{file}"),
    ]
    return RedirectTable(tuple(entries), default_version=default)


def render_all_pages(
    catalog: Catalog, *, source_repo_base: Optional[Iri] = None
) -> tuple[list[Page], list[DanglingReferenceWarning]]:
    pages = []
    for entry in catalog.datasets:
        pages.append(render_dataset_page(entry, source_repo_base=source_repo_base))
    for task in catalog.tasks:
        pages.append(
            render_task_page(task, catalog.profiles, source_repo_base=source_repo_base)
        )
    for profile in catalog.profiles:
        pages.append(
            render_profile_page(
                profile,
                profile_members(catalog, profile),
                source_repo_base=source_repo_base,
            )
        )
    index, warnings = render_results_index(catalog.reports, catalog.tasks)
    pages.append(index)
    for report in catalog.reports:
        pages.append(render_report_page(report, catalog.tasks, catalog.profiles))
    paths = [p.path for p in pages]
    if len(paths) != len(set(paths)):
        raise ConflictError("generated page paths collide")
    return pages, warnings


def generate_site(
    catalog: Catalog,
    out_dir: "str | Path",
    *,
    source_repo_base: Optional[Iri] = None,
    vocab: Vocab = VOCAB,
) -> tuple[list[str], list[DanglingReferenceWarning]]:
    """Write the full static tree: pages, dumps, redirect table, version.

    Returns the written paths (relative to out_dir) and any dangling
    reference warnings collected while rendering.
    """
    out = Path(out_dir)
    written = []

    def emit(rel: str, data: bytes) -> None:
        target = out / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
        written.append(rel)

    pages, warnings = render_all_pages(catalog, source_repo_base=source_repo_base)
    for page in pages:
        emit(f"site/{page.path}", page.body.encode("utf-8"))
    for name, data in sorted(emit_metadata_dump(catalog, vocab).items()):
        emit(f"dumps/{name}", data)
    emit("redirects.conf", _redirect_table(catalog).to_text().encode("utf-8"))
    emit("VERSION", (catalog.version + "\n").encode("utf-8"))
    return written, warnings


# ---------------------------------------------------------------------------
# Catalog loading. The on-disk layout is the composition contract between
# the packaging and generation commands:
#
#   VERSION                       optional, "dev" when absent
#   datasets/<id>/metadata.ttl    enriched metadata, one typed subject
#   datasets/<id>/stats.ttl       statistics graph for the same subject
#   datasets/<id>/dist/*          distribution files (optional)
#   tasks/<id>.ttl
#   profiles/<id>.ttl
#   reports/*.trig                report nanopublications (optional)
# ---------------------------------------------------------------------------


def _parse_ttl(path: Path) -> RdfDataset:
    return parse_document(path.read_bytes(), RdfFormat.TURTLE)


def load_catalog(
    directory: "str | Path",
    *,
    version: Optional[str] = None,
    vocab: Vocab = VOCAB,
) -> "tuple[Catalog, list[tuple[Iri, Exception]]]":
    """Read a catalog tree; returns it plus per-report diagnostics."""
    root = Path(directory)
    if not root.is_dir():
        raise NotFoundError(f"catalog directory {root} does not exist")
    if version is None:
        version_file = root / "VERSION"
        version = version_file.read_text("utf-8").strip() if version_file.is_file() else "dev"

    datasets = []
    datasets_root = root / "datasets"
    if datasets_root.is_dir():
        for entry_dir in sorted(p for p in datasets_root.iterdir() if p.is_dir()):
            metadata_path = entry_dir / "metadata.ttl"
            stats_path = entry_dir / "stats.ttl"
            for required in (metadata_path, stats_path):
                if not required.is_file():
                    raise NotFoundError(f"{required} is missing")
            graph = _parse_ttl(metadata_path)
            subject = find_typed_subject(graph, vocab.Dataset, "dataset")
            md = extract_dataset_metadata(graph, subject, vocab)
            if md.id != entry_dir.name:
                raise ConflictError(
                    f"dataset id {md.id!r} does not match directory {entry_dir.name!r}"
                )
            stats = extract_statistics(_parse_ttl(stats_path), subject, vocab)
            distributions = []
            dist_dir = entry_dir / "dist"
            if dist_dir.is_dir():
                for file in sorted(p for p in dist_dir.iterdir() if p.is_file()):
                    distributions.append(distribution_from_file(file.name, file.read_bytes()))
            datasets.append(DatasetEntry(subject, md, stats, tuple(distributions)))

    tasks = []
    tasks_root = root / "tasks"
    if tasks_root.is_dir():
        for file in sorted(tasks_root.glob("*.ttl")):
            graph = _parse_ttl(file)
            subject = find_typed_subject(graph, vocab.Task, "task")
            md = extract_task_metadata(graph, subject, vocab)
            if md.id != file.stem:
                raise ConflictError(f"task id {md.id!r} does not match file {file.name!r}")
            tasks.append(TaskEntry(subject, md))

    profiles = []
    profiles_root = root / "profiles"
    if profiles_root.is_dir():
        for file in sorted(profiles_root.glob("*.ttl")):
            graph = _parse_ttl(file)
            subject = find_typed_subject(graph, vocab.Profile, "profile")
            md = extract_profile_metadata(graph, subject, vocab)
            if md.id != file.stem:
                raise ConflictError(f"profile id {md.id!r} does not match file {file.name!r}")
            profiles.append(ProfileEntry(subject, md))

    reports: list[BenchmarkRunReport] = []
    diagnostics: list[tuple[Iri, Exception]] = []
    reports_root = root / "reports"
    if reports_root.is_dir():
        discovered, diagnostics = discover_reports(DirectoryIndexSource(reports_root), vocab)
        seen = set()
        for report in discovered:
            # Duplicate IRIs keep the newest publication (discovery order).
            if report.report_iri.value not in seen:
                seen.add(report.report_iri.value)
                reports.append(report)

    catalog = Catalog(
        datasets=tuple(datasets),
        tasks=tuple(tasks),
        profiles=tuple(profiles),
        reports=tuple(reports),
        version=version,
    )
    return catalog, diagnostics
