"""Pipeline commands: validate, package, fetch-reports, gen-site, serve, dump.

Exit codes are a stable contract for CI: 0 success, 1 domain violation
(bad metadata, failed validation, malformed report), 2 environment (I/O,
syntax, unreachable index, bad config). Commands stage output in a
temporary directory and publish by atomic rename, so a failure never
leaves partial results behind.
"""

from __future__ import annotations

import datetime
import json
import os
import shutil
import signal
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import click

from . import __version__
from .config import RegistryConfig, load_config
from .errors import (
    BenchcatError,
    ConfigError,
    EmptySourceError,
    EncodingError,
    MissingFieldError,
    NotFoundError,
    RdfSyntaxError,
    SnapshotFormatError,
    SourceUnavailableError,
)
from .metadata import (
    Severity,
    ValidationReport,
    Violation,
    enrich_metadata,
    extract_dataset_metadata,
    find_typed_subject,
    validate_dataset_metadata,
)
from .nanopub import (
    BenchmarkRunReport,
    DirectoryIndexSource,
    HttpIndexSource,
    SystemUnderTest,
    build_report_nanopub,
    discover_reports,
    extract_report,
    nanopub_to_trig,
    parse_nanopub,
)
from .packaging import (
    build_distributions,
    compute_statistics,
    load_source,
    statistics_to_rdf,
    validate_contents,
)
from .rdf import Iri, RdfFormat, parse_document, serialize_document
from .server import BIND_ENV_VAR, DEFAULT_BIND, SnapshotHolder, load_snapshot, serve
from .sitegen import generate_site, load_catalog, report_slug
from .vocab import VOCAB

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_ENVIRONMENT = 2

_ENVIRONMENT_ERRORS = (
    OSError,
    RdfSyntaxError,
    EncodingError,
    SourceUnavailableError,
    SnapshotFormatError,
    ConfigError,
    NotFoundError,
)


@dataclass
class CliState:
    config: RegistryConfig
    quiet: bool
    json_output: bool

    def emit(self, payload: dict, human: str) -> None:
        if self.json_output:
            click.echo(json.dumps(payload, sort_keys=True))
        elif not self.quiet and human:
            click.echo(human)

    def fail(self, payload: dict, human: str, code: int) -> "click.exceptions.Exit":
        if self.json_output:
            click.echo(json.dumps(payload, sort_keys=True))
        else:
            click.echo(human, err=True)
        return click.exceptions.Exit(code)


pass_state = click.make_pass_decorator(CliState)


@click.group()
@click.version_option(__version__)
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None,
              help="TOML config file (default: ./benchcat.toml when present).")
@click.option("--quiet", is_flag=True, help="Suppress informational output.")
@click.option("--json", "json_output", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[Path], quiet: bool, json_output: bool) -> None:
    """Benchmark dataset registry tools."""
    try:
        config = load_config(config_path)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        raise click.exceptions.Exit(EXIT_ENVIRONMENT)
    ctx.obj = CliState(config=config, quiet=quiet, json_output=json_output)


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, _ENVIRONMENT_ERRORS):
        return EXIT_ENVIRONMENT
    if isinstance(exc, BenchcatError):
        return EXIT_DOMAIN
    raise exc


def _atomic_publish(out_dir: Path, build: "Callable[[Path], object]") -> object:
    """Build into a staging sibling, then swap it in; never partial."""
    out_dir = Path(out_dir).absolute()
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(dir=out_dir.parent, prefix=f".{out_dir.name}.stage-"))
    try:
        result = build(stage)
    except BaseException:
        shutil.rmtree(stage, ignore_errors=True)
        raise
    if out_dir.exists():
        retired = out_dir.parent / f".{out_dir.name}.old-{os.getpid()}"
        if retired.exists():
            shutil.rmtree(retired)
        os.rename(out_dir, retired)
        os.rename(stage, out_dir)
        shutil.rmtree(retired)
    else:
        os.rename(stage, out_dir)
    return result


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

_FIELD_RULES = {
    "license": "open-license",
    "creator": "authorship",
    "creators": "authorship",
    "useCase": "clear-use-case",
    "elementCount": "sufficient-size",
    "id": "id-format",
    "orcid": "orcid-checksum",
}


def _report_for_malformed(exc: BenchcatError) -> ValidationReport:
    field = getattr(exc, "field", "") or ""
    rule = _FIELD_RULES.get(field, "malformed")
    return ValidationReport(
        (Violation(field or "document", Severity.ERROR, str(exc), rule),)
    )


def _validate_metadata_file(path: Path, config: RegistryConfig) -> ValidationReport:
    graph = parse_document(path.read_bytes(), RdfFormat.TURTLE)
    try:
        subject = find_typed_subject(graph, VOCAB.Dataset, "dataset")
        md = extract_dataset_metadata(graph, subject, VOCAB)
    except BenchcatError as exc:
        return _report_for_malformed(exc)
    return validate_dataset_metadata(
        md,
        license_allow_list=config.license_allow_list,
        min_element_count=config.min_element_count,
    )


def _validate_source_dir(path: Path) -> ValidationReport:
    try:
        load_source(path)
    except EmptySourceError as exc:
        return ValidationReport(
            (Violation("elements", Severity.ERROR, str(exc), "sufficient-size"),)
        )
    return ValidationReport()


def _report_sidecar(path: Path) -> Path:
    return path.parent / (path.name.removesuffix(".ttl") + ".validation.ttl")


@main.command()
@click.argument("paths", nargs=-1, required=True, type=click.Path(path_type=Path))
@pass_state
def validate(state: CliState, paths: "tuple[Path, ...]") -> None:
    """Check metadata files and source directories against curator rules."""
    results = []
    any_errors = False
    for path in paths:
        try:
            if path.is_dir():
                report = _validate_source_dir(path)
            else:
                report = _validate_metadata_file(path, state.config)
            sidecar = _report_sidecar(path)
            sidecar.write_bytes(
                serialize_document(
                    report.to_rdf(Iri("urn:validation:report")), RdfFormat.TURTLE
                )
            )
        except Exception as exc:
            raise state.fail(
                {"command": "validate", "path": str(path), "error": str(exc)},
                f"{path}: {exc}",
                _exit_code_for(exc),
            )
        any_errors = any_errors or report.has_errors
        results.append(
            {
                "path": str(path),
                "ok": not report.has_errors,
                "violations": [
                    {
                        "path": v.path,
                        "severity": v.severity.value,
                        "message": v.message,
                        "ruleId": v.rule_id,
                    }
                    for v in report.violations
                ],
                "report": str(sidecar),
            }
        )
    human = "\n".join(
        f"{r['path']}: {'ok' if r['ok'] else 'FAILED'}"
        + "".join(
            f"\n  {v['severity']} [{v['ruleId']}] {v['path']}: {v['message']}"
            for v in r["violations"]
        )
        for r in results
    )
    state.emit({"command": "validate", "results": results}, human)
    if any_errors:
        raise click.exceptions.Exit(EXIT_DOMAIN)


# ---------------------------------------------------------------------------
# package
# ---------------------------------------------------------------------------


@main.command()
@click.argument("source_dir", type=click.Path(path_type=Path))
@click.argument("metadata_file", type=click.Path(path_type=Path))
@click.argument("out_dir", type=click.Path(path_type=Path))
@pass_state
def package(state: CliState, source_dir: Path, metadata_file: Path, out_dir: Path) -> None:
    """Validate, re-package, and enrich one dataset into OUT_DIR."""
    config = state.config
    try:
        original = parse_document(metadata_file.read_bytes(), RdfFormat.TURTLE)
        subject = find_typed_subject(original, VOCAB.Dataset, "dataset")
        md = extract_dataset_metadata(original, subject, VOCAB)
        report = validate_dataset_metadata(
            md,
            license_allow_list=config.license_allow_list,
            min_element_count=config.min_element_count,
        )
        source = None
        if not report.has_errors:
            source = load_source(source_dir)
            content_report = validate_contents(source, md)
            report = ValidationReport(report.violations + content_report.violations)
    except Exception as exc:
        raise state.fail(
            {"command": "package", "error": str(exc)},
            f"package: {exc}",
            _exit_code_for(exc),
        )
    if report.has_errors:
        raise state.fail(
            {
                "command": "package",
                "ok": False,
                "violations": [
                    {
                        "path": v.path,
                        "severity": v.severity.value,
                        "message": v.message,
                        "ruleId": v.rule_id,
                    }
                    for v in report.violations
                ],
            },
            "validation failed:\n" + report.to_text().rstrip(),
            EXIT_DOMAIN,
        )

    def build(stage: Path) -> list[str]:
        stats = compute_statistics(source)
        distributions = build_distributions(source, ladder=config.cap_ladder)
        dist_dir = stage / "dist"
        dist_dir.mkdir()
        written = []
        for dist, data in distributions:
            (dist_dir / dist.file_name).write_bytes(data)
            written.append(f"dist/{dist.file_name}")
        stats_graph = statistics_to_rdf(stats, subject, VOCAB)
        (stage / "stats.ttl").write_bytes(
            serialize_document(stats_graph, RdfFormat.TURTLE)
        )
        from .metadata import distributions_to_rdf
        from .rdf import RdfDataset

        computed = RdfDataset(
            list(stats_graph.quads)
            + list(
                distributions_to_rdf(
                    md.id, subject, [d for d, _ in distributions], VOCAB
                ).quads
            )
        )
        enriched = enrich_metadata(original, computed, VOCAB)
        (stage / "metadata.ttl").write_bytes(
            serialize_document(enriched, RdfFormat.TURTLE)
        )
        (stage / "validation.ttl").write_bytes(
            serialize_document(
                report.to_rdf(Iri("urn:validation:report")), RdfFormat.TURTLE
            )
        )
        return written + ["stats.ttl", "metadata.ttl", "validation.ttl"]

    try:
        written = _atomic_publish(out_dir, build)
    except Exception as exc:
        raise state.fail(
            {"command": "package", "error": str(exc)},
            f"package: {exc}",
            _exit_code_for(exc),
        )
    state.emit(
        {"command": "package", "ok": True, "out": str(out_dir), "written": written},
        f"packaged {md.id}: {len(written)} files in {out_dir}",
    )


# ---------------------------------------------------------------------------
# fetch-reports
# ---------------------------------------------------------------------------


def _report_payload(report: BenchmarkRunReport) -> dict:
    return {
        "reportIri": report.report_iri.value,
        "task": report.task.value,
        "profile": report.profile.value,
        "profileVersion": report.profile_version,
        "benchmarkCode": report.benchmark_code.value,
        "systems": [{"name": s.name, "version": s.version} for s in report.systems],
        "authorOrcid": report.author_orcid,
        "date": report.date.isoformat(),
        "resultsLink": report.results_link.value if report.results_link else None,
    }


@main.command("fetch-reports")
@click.argument("out_dir", type=click.Path(path_type=Path))
@click.option("--index", "index_override", default=None,
              help="Index URL or directory (defaults to the configured report index).")
@pass_state
def fetch_reports(state: CliState, out_dir: Path, index_override: Optional[str]) -> None:
    """Discover report nanopublications and store the valid ones."""
    index = index_override or (
        state.config.report_index_url.value if state.config.report_index_url else None
    )
    if index is None:
        raise state.fail(
            {"command": "fetch-reports", "error": "no report index configured"},
            "fetch-reports: no report index configured (set report_index_url or --index)",
            EXIT_ENVIRONMENT,
        )
    if index.startswith(("http://", "https://")):
        source = HttpIndexSource(index)
    else:
        path = Path(index[len("file://") :] if index.startswith("file://") else index)
        source = DirectoryIndexSource(path)

    def build(stage: Path) -> "tuple[list[dict], list[tuple[str, str]]]":
        payloads = []
        diag_lines = []
        listed = source.list()
        for iri in sorted(set(listed), key=lambda i: i.value):
            try:
                data, fmt = source.fetch(iri)
                doc = parse_document(data, fmt, base=iri)
                np = parse_nanopub(doc)
                report = extract_report(np, VOCAB)
            except (BenchcatError, OSError) as exc:
                diag_lines.append((iri.value, f"{type(exc).__name__}: {exc}"))
                continue
            payloads.append(_report_payload(report))
            (stage / f"{report_slug(np.uri)}.trig").write_bytes(nanopub_to_trig(np))
        payloads.sort(key=lambda p: p["reportIri"])
        payloads.sort(key=lambda p: p["date"], reverse=True)
        (stage / "reports.json").write_text(
            json.dumps(payloads, indent=2, sort_keys=True) + "\n", "utf-8"
        )
        (stage / "diagnostics.log").write_text(
            "".join(f"{iri}\t{message}\n" for iri, message in diag_lines), "utf-8"
        )
        return payloads, diag_lines

    try:
        payloads, diag_lines = _atomic_publish(out_dir, build)
    except Exception as exc:
        raise state.fail(
            {"command": "fetch-reports", "error": str(exc)},
            f"fetch-reports: {exc}",
            _exit_code_for(exc),
        )
    state.emit(
        {
            "command": "fetch-reports",
            "ok": True,
            "reports": len(payloads),
            "diagnostics": [{"iri": iri, "error": err} for iri, err in diag_lines],
            "out": str(out_dir),
        },
        f"fetched {len(payloads)} reports ({len(diag_lines)} skipped) into {out_dir}",
    )


# ---------------------------------------------------------------------------
# gen-site and dump
# ---------------------------------------------------------------------------


@main.command("gen-site")
@click.argument("catalog_dir", type=click.Path(path_type=Path))
@click.argument("out_dir", type=click.Path(path_type=Path))
@pass_state
def gen_site(state: CliState, catalog_dir: Path, out_dir: Path) -> None:
    """Generate the documentation site, dumps, and redirect table."""
    try:
        catalog, diagnostics = load_catalog(catalog_dir)

        def build(stage: Path):
            return generate_site(
                catalog, stage, source_repo_base=state.config.source_repo_base
            )

        written, warnings = _atomic_publish(out_dir, build)
    except Exception as exc:
        raise state.fail(
            {"command": "gen-site", "error": str(exc)},
            f"gen-site: {exc}",
            _exit_code_for(exc),
        )
    notes = [f"{iri.value}: {err}" for iri, err in diagnostics] + [
        str(w) for w in warnings
    ]
    state.emit(
        {
            "command": "gen-site",
            "ok": True,
            "written": written,
            "warnings": notes,
            "out": str(out_dir),
        },
        f"generated {len(written)} files in {out_dir}"
        + "".join(f"\n  warning: {note}" for note in notes),
    )


@main.command()
@click.argument("catalog_dir", type=click.Path(path_type=Path))
@click.argument("out_dir", type=click.Path(path_type=Path))
@pass_state
def dump(state: CliState, catalog_dir: Path, out_dir: Path) -> None:
    """Emit only the machine-readable metadata dumps for a catalog."""
    from .sitegen import emit_metadata_dump

    try:
        catalog, _ = load_catalog(catalog_dir)

        def build(stage: Path) -> list[str]:
            files = emit_metadata_dump(catalog, VOCAB)
            for name, data in sorted(files.items()):
                (stage / name).write_bytes(data)
            return sorted(files)

        written = _atomic_publish(out_dir, build)
    except Exception as exc:
        raise state.fail(
            {"command": "dump", "error": str(exc)},
            f"dump: {exc}",
            _exit_code_for(exc),
        )
    state.emit(
        {"command": "dump", "ok": True, "written": written, "out": str(out_dir)},
        f"wrote {', '.join(written)} in {out_dir}",
    )


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------


@main.command("serve")
@click.argument("snapshot_dir", type=click.Path(path_type=Path))
@click.option("--bind", default=None, help=f"HOST:PORT (default ${BIND_ENV_VAR} or {DEFAULT_BIND}).")
@pass_state
def serve_cmd(state: CliState, snapshot_dir: Path, bind: Optional[str]) -> None:
    """Serve a published snapshot until interrupted."""
    bind = bind or os.environ.get(BIND_ENV_VAR) or DEFAULT_BIND
    try:
        snapshot = load_snapshot(snapshot_dir)
        holder = SnapshotHolder(snapshot)
        server = serve(holder, bind)
    except Exception as exc:
        raise state.fail(
            {"command": "serve", "error": str(exc)},
            f"serve: {exc}",
            _exit_code_for(exc) if isinstance(exc, BenchcatError) else EXIT_ENVIRONMENT,
        )
    host, port = server.server_address[:2]
    state.emit(
        {"command": "serve", "ok": True, "bind": f"{host}:{port}"},
        f"serving {snapshot_dir} on http://{host}:{port} (Ctrl-C to stop)",
    )
    stop = threading.Event()

    def shutdown(signum, frame) -> None:
        stop.set()

    signal.signal(signal.SIGINT, shutdown)
    signal.signal(signal.SIGTERM, shutdown)
    try:
        stop.wait()
    finally:
        server.shutdown()


# ---------------------------------------------------------------------------
# report-new
# ---------------------------------------------------------------------------


def _parse_system(value: str) -> SystemUnderTest:
    name, sep, version = value.partition("=")
    if not sep or not name or not version:
        raise MissingFieldError("system", f"expected NAME=VERSION, got {value!r}")
    return SystemUnderTest(name, version)


@main.command("report-new")
@click.option("--report-iri", default=None, help="IRI identifying the run report.")
@click.option("--task", default=None, help="Task IRI the run executed.")
@click.option("--profile", default=None, help="Profile IRI the run used.")
@click.option("--profile-version", default=None, help="Profile version string.")
@click.option("--benchmark-code", default=None, help="IRI of the benchmark implementation.")
@click.option("--system", "systems", multiple=True, help="NAME=VERSION; repeatable, ordered.")
@click.option("--orcid", default=None, help="Author ORCID (digits and dashes).")
@click.option("--date", "date_text", default=None, help="Run date, ISO format YYYY-MM-DD.")
@click.option("--results-link", default=None, help="Optional IRI of detailed results.")
@click.option("--out", "out_file", type=click.Path(path_type=Path), default=Path("report.trig"),
              show_default=True, help="Output TriG file.")
@pass_state
def report_new(
    state: CliState,
    report_iri: Optional[str],
    task: Optional[str],
    profile: Optional[str],
    profile_version: Optional[str],
    benchmark_code: Optional[str],
    systems: "tuple[str, ...]",
    orcid: Optional[str],
    date_text: Optional[str],
    results_link: Optional[str],
    out_file: Path,
) -> None:
    """Author a benchmark run report as a nanopublication file."""
    missing = [
        flag
        for flag, value in (
            ("--report-iri", report_iri),
            ("--task", task),
            ("--profile", profile),
            ("--profile-version", profile_version),
            ("--benchmark-code", benchmark_code),
            ("--system", systems or None),
            ("--orcid", orcid),
            ("--date", date_text),
        )
        if value is None
    ]
    if missing:
        raise state.fail(
            {"command": "report-new", "error": f"missing {', '.join(missing)}"},
            f"report-new: missing required {', '.join(missing)}",
            EXIT_DOMAIN,
        )
    try:
        report = BenchmarkRunReport(
            report_iri=Iri(report_iri),
            task=Iri(task),
            profile=Iri(profile),
            profile_version=profile_version,
            benchmark_code=Iri(benchmark_code),
            systems=tuple(_parse_system(s) for s in systems),
            author_orcid=orcid,
            date=datetime.date.fromisoformat(date_text),
            results_link=Iri(results_link) if results_link else None,
        )
        np = build_report_nanopub(report, Iri(report.report_iri.value + "-np"), VOCAB)
        # The output must survive the same checks discovery applies.
        extract_report(parse_nanopub(parse_document(nanopub_to_trig(np), RdfFormat.TRIG)), VOCAB)
    except (BenchcatError, ValueError) as exc:
        raise state.fail(
            {"command": "report-new", "error": str(exc)},
            f"report-new: {exc}",
            EXIT_DOMAIN,
        )
    try:
        out_file.parent.mkdir(parents=True, exist_ok=True)
        out_file.write_bytes(nanopub_to_trig(np))
    except OSError as exc:
        raise state.fail(
            {"command": "report-new", "error": str(exc)},
            f"report-new: {exc}",
            EXIT_ENVIRONMENT,
        )
    state.emit(
        {"command": "report-new", "ok": True, "out": str(out_file)},
        f"wrote report nanopublication to {out_file}",
    )


if __name__ == "__main__":
    main()
