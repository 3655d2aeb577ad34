"""Command-line behaviour: exit codes, outputs, and atomic publishing.

Exit code contract: 0 clean, 1 domain violation, 2 environment trouble
(I/O, syntax, unreachable sources, bad config).
"""

import json
import signal
import subprocess
import sys
import time
import urllib.request
from pathlib import Path

import pytest
from click.testing import CliRunner

from benchcat.cli import main
from benchcat.nanopub import parse_nanopub
from benchcat.rdf.parser import parse_document
from benchcat.rdf.terms import RdfFormat

from conftest import (
    DATA_DIR,
    EX,
    ORCID_OK,
    make_report,
    valid_nanopub_bytes,
    write_catalog_tree,
    write_nanopub_corpus,
    write_source_elements,
)


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)


def write_pipeline_fixtures(root: Path) -> dict:
    """Source elements, matching metadata, and a permissive config."""
    source = root / "source"
    write_source_elements(source, count=20, seed=701)
    metadata = root / "metadata.ttl"
    metadata.write_text(
        "@prefix bc: <https://benchcat.dev/vocab/v1#> .\n"
        "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
        f"<{EX}datasets/river-flow> a bc:Dataset ;\n"
        '  bc:id "river-flow" ;\n'
        '  bc:title "River Flow" ;\n'
        '  bc:description "Synthetic sensor readings." ;\n'
        "  bc:license <https://creativecommons.org/licenses/by/4.0/> ;\n"
        '  bc:useCase "Streaming parser drills." ;\n'
        "  bc:streamElementType bc:Triples ;\n"
        '  bc:elementCount "20"^^xsd:integer ;\n'
        f'  bc:creator [ a bc:Agent ; bc:name "Ada Example" ; bc:orcid "{ORCID_OK}" ] .\n'
    )
    config = root / "benchcat.toml"
    config.write_text("min_element_count = 10\ncap_ladder = [5]\n")
    return {"source": source, "metadata": metadata, "config": config}


def staged(tmp_path: Path, fixture: str) -> Path:
    """Copy a data fixture into tmp so the sidecar report lands there too."""
    target = tmp_path / fixture
    target.write_bytes((DATA_DIR / fixture).read_bytes())
    return target


class TestValidate:
    def test_clean_file_exits_zero(self, runner, tmp_path):
        result = invoke(runner, "validate", staged(tmp_path, "compliant.ttl"))
        assert result.exit_code == 0
        assert "ok" in result.output

    def test_violation_exits_one_and_names_rule(self, runner, tmp_path):
        result = invoke(runner, "validate", staged(tmp_path, "violates-license.ttl"))
        assert result.exit_code == 1
        assert "open-license" in result.output

    def test_sidecar_report_written(self, runner, tmp_path):
        target = tmp_path / "bad.ttl"
        target.write_bytes((DATA_DIR / "violates-size.ttl").read_bytes())
        result = invoke(runner, "validate", target)
        assert result.exit_code == 1
        sidecar = tmp_path / "bad.validation.ttl"
        assert sidecar.is_file()
        graph = parse_document(sidecar.read_bytes(), RdfFormat.TURTLE)
        assert any("sufficient-size" in str(q.object) for q in graph)

    def test_source_directory_checked(self, runner, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        write_source_elements(tmp_path / "src", count=3)
        result = invoke(runner, "validate", tmp_path / "src")
        assert result.exit_code == 0

    def test_syntax_error_is_environment_failure(self, runner, tmp_path):
        broken = tmp_path / "broken.ttl"
        broken.write_text("<http://e/s> <http://e/p> .")
        result = invoke(runner, "validate", broken)
        assert result.exit_code == 2

    def test_missing_file_is_environment_failure(self, runner, tmp_path):
        result = invoke(runner, "validate", tmp_path / "absent.ttl")
        assert result.exit_code == 2

    def test_json_output(self, runner, tmp_path):
        result = invoke(runner, "--json", "validate", staged(tmp_path, "violates-use-case.ttl"))
        assert result.exit_code == 1
        payload = json.loads(result.output)
        violations = payload["results"][0]["violations"]
        assert violations[0]["ruleId"] == "clear-use-case"


class TestPackage:
    def test_full_run_writes_artifacts(self, runner, tmp_path):
        fx = write_pipeline_fixtures(tmp_path)
        out = tmp_path / "out"
        result = invoke(
            runner, "--config", fx["config"], "package", fx["source"], fx["metadata"], out
        )
        assert result.exit_code == 0, result.output
        names = sorted(p.name for p in out.rglob("*") if p.is_file())
        assert "metadata.ttl" in names
        assert "stats.ttl" in names
        assert "validation.ttl" in names
        assert "flat_5.nq" in names
        assert "flat_full.nq" in names

    def test_enriched_metadata_single_creator(self, runner, tmp_path):
        fx = write_pipeline_fixtures(tmp_path)
        out = tmp_path / "out"
        invoke(runner, "--config", fx["config"], "package", fx["source"], fx["metadata"], out)
        graph = parse_document((out / "metadata.ttl").read_bytes(), RdfFormat.TURTLE)
        creators = [q for q in graph if q.predicate.value.endswith("#creator")]
        assert len(creators) == 1

    def test_rerun_byte_identical(self, runner, tmp_path):
        fx = write_pipeline_fixtures(tmp_path)
        invoke(runner, "--config", fx["config"], "package", fx["source"], fx["metadata"], tmp_path / "a")
        invoke(runner, "--config", fx["config"], "package", fx["source"], fx["metadata"], tmp_path / "b")
        for path in sorted((tmp_path / "a").rglob("*")):
            if path.is_file():
                twin = tmp_path / "b" / path.relative_to(tmp_path / "a")
                assert path.read_bytes() == twin.read_bytes(), path.name

    def test_count_mismatch_is_domain_failure(self, runner, tmp_path):
        fx = write_pipeline_fixtures(tmp_path)
        fx["metadata"].write_text(
            fx["metadata"].read_text().replace('"20"^^xsd:integer', '"21"^^xsd:integer')
        )
        out = tmp_path / "out"
        result = invoke(
            runner, "--config", fx["config"], "package", fx["source"], fx["metadata"], out
        )
        assert result.exit_code == 1
        assert "element-count-mismatch" in result.output

    def test_failed_run_leaves_no_out_dir(self, runner, tmp_path):
        fx = write_pipeline_fixtures(tmp_path)
        fx["metadata"].write_text(
            fx["metadata"].read_text().replace('"20"^^xsd:integer', '"21"^^xsd:integer')
        )
        out = tmp_path / "out"
        invoke(runner, "--config", fx["config"], "package", fx["source"], fx["metadata"], out)
        assert not out.exists()

    def test_validation_failure_reported_before_packaging(self, runner, tmp_path):
        fx = write_pipeline_fixtures(tmp_path)
        # default config: minimum is 1000, so 20 elements is a size violation
        result = invoke(runner, "package", fx["source"], fx["metadata"], tmp_path / "out")
        assert result.exit_code == 1
        assert "sufficient-size" in result.output


class TestFetchReports:
    def test_directory_index(self, runner, tmp_path):
        write_nanopub_corpus(tmp_path / "nps")
        out = tmp_path / "fetched"
        result = invoke(runner, "fetch-reports", out, "--index", tmp_path / "nps")
        assert result.exit_code == 0
        trigs = sorted(p.name for p in out.glob("*.trig"))
        assert len(trigs) == 8
        for name in trigs:
            parse_nanopub(parse_document((out / name).read_bytes(), RdfFormat.TRIG))
        listing = json.loads((out / "reports.json").read_text())
        assert len(listing) == 8
        diagnostics = (out / "diagnostics.log").read_text().strip().splitlines()
        assert len(diagnostics) == 2

    def test_no_index_configured_is_environment_failure(self, runner, tmp_path):
        result = invoke(runner, "fetch-reports", tmp_path / "out")
        assert result.exit_code == 2

    def test_missing_directory_is_environment_failure(self, runner, tmp_path):
        result = invoke(runner, "fetch-reports", tmp_path / "out", "--index", tmp_path / "nope")
        assert result.exit_code == 2


class TestGenSiteAndDump:
    def test_gen_site_tree(self, runner, tmp_path):
        write_catalog_tree(tmp_path / "cat", version="1.0.0")
        out = tmp_path / "site"
        result = invoke(runner, "gen-site", tmp_path / "cat", out)
        assert result.exit_code == 0, result.output
        assert (out / "VERSION").read_text() == "1.0.0\n"
        assert (out / "redirects.conf").is_file()
        assert (out / "site" / "datasets" / "river-flow" / "index.md").is_file()

    def test_gen_site_preserves_previous_output_on_failure(self, runner, tmp_path):
        write_catalog_tree(tmp_path / "cat", version="1.0.0")
        out = tmp_path / "site"
        invoke(runner, "gen-site", tmp_path / "cat", out)
        marker = (out / "VERSION").read_bytes()
        # break the catalog: stats file vanishes
        (tmp_path / "cat" / "datasets" / "river-flow" / "stats.ttl").unlink()
        result = invoke(runner, "gen-site", tmp_path / "cat", out)
        assert result.exit_code == 2
        assert (out / "VERSION").read_bytes() == marker

    def test_dump_writes_only_dumps(self, runner, tmp_path):
        write_catalog_tree(tmp_path / "cat")
        out = tmp_path / "dumps"
        result = invoke(runner, "dump", tmp_path / "cat", out)
        assert result.exit_code == 0
        names = sorted(p.name for p in out.rglob("*") if p.is_file())
        assert names == ["catalog.nq", "catalog.ttl"]

    def test_missing_catalog_is_environment_failure(self, runner, tmp_path):
        result = invoke(runner, "gen-site", tmp_path / "missing", tmp_path / "out")
        assert result.exit_code == 2


class TestReportNew:
    FLAGS = [
        "--report-iri", EX + "reports/run-cli",
        "--task", EX + "tasks/stream-load",
        "--profile", EX + "profiles/flat",
        "--profile-version", "1.0.0",
        "--benchmark-code", "https://github.com/example/bench",
        "--system", "engine-a=1.2",
        "--orcid", ORCID_OK,
        "--date", "2024-05-01",
    ]

    def test_authors_valid_nanopub(self, runner, tmp_path):
        out = tmp_path / "report.trig"
        result = invoke(runner, "report-new", *self.FLAGS, "--out", out)
        assert result.exit_code == 0, result.output
        np = parse_nanopub(parse_document(out.read_bytes(), RdfFormat.TRIG))
        assert np.uri.value == EX + "reports/run-cli-np"

    def test_missing_flags_listed(self, runner, tmp_path):
        result = invoke(runner, "report-new", "--out", tmp_path / "r.trig")
        assert result.exit_code == 1
        assert "--task" in result.output

    def test_bad_orcid_is_domain_failure(self, runner, tmp_path):
        flags = list(self.FLAGS)
        flags[flags.index(ORCID_OK)] = "0000-0002-1825-0098"
        result = invoke(runner, "report-new", *flags, "--out", tmp_path / "r.trig")
        assert result.exit_code == 1

    def test_bad_date_is_domain_failure(self, runner, tmp_path):
        flags = list(self.FLAGS)
        flags[flags.index("2024-05-01")] = "May 1st"
        result = invoke(runner, "report-new", *flags, "--out", tmp_path / "r.trig")
        assert result.exit_code == 1

    def test_bad_system_spec_is_domain_failure(self, runner, tmp_path):
        flags = list(self.FLAGS)
        flags[flags.index("engine-a=1.2")] = "engine-a"
        result = invoke(runner, "report-new", *flags, "--out", tmp_path / "r.trig")
        assert result.exit_code == 1


class TestServeSubprocess:
    def test_serves_until_terminated(self, tmp_path):
        from benchcat.sitegen import generate_site

        generate_site(
            __import__("conftest").make_catalog(version="1.0.0"), tmp_path / "snap"
        )
        proc = subprocess.Popen(
            [sys.executable, "-m", "benchcat.cli", "serve", str(tmp_path / "snap"),
             "--bind", "127.0.0.1:0"],
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            text=True,
        )
        try:
            line = proc.stdout.readline()
            assert "http://" in line, line
            url = line.strip().split("http://", 1)[1].split(" ")[0]
            with urllib.request.urlopen(f"http://{url}/VERSION", timeout=5) as response:
                assert response.read() == b"1.0.0\n"
        finally:
            proc.send_signal(signal.SIGTERM)
            try:
                proc.wait(timeout=10)
            except subprocess.TimeoutExpired:
                proc.kill()
                raise
