"""Snapshot loading, content negotiation, routing, and the live server."""

import urllib.error
import urllib.request

import pytest

from benchcat.errors import SnapshotFormatError
from benchcat.rdf.isomorphism import dataset_isomorphic
from benchcat.rdf.parser import parse_document
from benchcat.rdf.terms import RdfFormat
from benchcat.server import (
    Representation,
    SnapshotHolder,
    load_snapshot,
    negotiate,
    parse_bind,
    route,
    serve,
)
from benchcat.sitegen import generate_site

from conftest import EX, make_catalog, make_report


@pytest.fixture(scope="module")
def snapshot_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("snapshot")
    catalog = make_catalog(
        n_datasets=1, n_tasks=1, reports=[make_report(0, task=EX + "tasks/task-0")], version="1.0.0"
    )
    generate_site(catalog, out)
    return out


@pytest.fixture(scope="module")
def snapshot(snapshot_dir):
    return load_snapshot(snapshot_dir)


class TestParseBind:
    def test_host_and_port(self):
        assert parse_bind("0.0.0.0:8000") == ("0.0.0.0", 8000)

    @pytest.mark.parametrize("bad", ["nonsense", "host:", ":80x", "1.2.3.4"])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            parse_bind(bad)


class TestRepresentation:
    def test_redirect_requires_location(self):
        with pytest.raises(ValueError):
            Representation("text/html", b"", 303, None)

    def test_unknown_status_rejected(self):
        with pytest.raises(ValueError):
            Representation("text/plain", b"x", 500, None)


class TestLoadSnapshot:
    def test_reads_version_and_table(self, snapshot):
        assert snapshot.version == "1.0.0"
        assert snapshot.table.entries

    def test_resources_cover_catalog(self, snapshot):
        paths = set(snapshot.resources_by_path)
        assert "/datasets/ds-0" in paths
        assert "/tasks/task-0" in paths
        assert "/profiles/flat" in paths
        assert any(p.startswith("/results/") for p in paths)

    def test_missing_redirects_conf_rejected(self, snapshot_dir, tmp_path):
        import shutil

        broken = tmp_path / "broken"
        shutil.copytree(snapshot_dir, broken)
        (broken / "redirects.conf").unlink()
        with pytest.raises(SnapshotFormatError):
            load_snapshot(broken)

    def test_missing_dump_rejected(self, snapshot_dir, tmp_path):
        import shutil

        broken = tmp_path / "broken"
        shutil.copytree(snapshot_dir, broken)
        (broken / "dumps" / "catalog.nq").unlink()
        with pytest.raises(SnapshotFormatError):
            load_snapshot(broken)

    def test_empty_directory_rejected(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        with pytest.raises(SnapshotFormatError):
            load_snapshot(empty)


class TestNegotiate:
    @pytest.fixture
    def resource(self, snapshot):
        return snapshot.resources_by_path["/datasets/ds-0"]

    def test_no_header_redirects_to_page(self, resource):
        rep = negotiate(None, resource)
        assert rep.status == 303
        assert rep.location == "/site/datasets/ds-0/index.md"

    def test_html_redirects_to_page(self, resource):
        assert negotiate("text/html", resource).status == 303

    def test_exact_rdf_type(self, resource):
        rep = negotiate("text/turtle", resource)
        assert rep.status == 200
        assert rep.media_type == "text/turtle"

    def test_body_matches_resource_graph(self, resource):
        rep = negotiate("application/n-quads", resource)
        parsed = parse_document(rep.body, RdfFormat.NQUADS)
        assert dataset_isomorphic(parsed, resource.graph)

    def test_q_values_order_choice(self, resource):
        rep = negotiate("text/turtle;q=0.3, application/trig;q=0.9", resource)
        assert rep.media_type == "application/trig"

    def test_wildcard_prefers_first_offer(self, resource):
        # offer order puts text/html first, so */* lands on the page redirect
        assert negotiate("*/*", resource).status == 303

    def test_type_wildcard(self, resource):
        rep = negotiate("application/*", resource)
        assert rep.status == 200
        assert rep.media_type == "application/n-quads"

    def test_equal_q_tie_falls_back_to_offer_order(self, resource):
        # html sits first in the offer list, so an all-equal tie redirects
        rep = negotiate("*/*;q=1.0, application/trig;q=1.0", resource)
        assert rep.status == 303

    def test_specific_range_sets_q_over_wildcard(self, resource):
        # the exact ranges pin html low and trig mid; the rest ride */*
        rep = negotiate("*/*;q=0.9, text/html;q=0.1, application/trig;q=0.8", resource)
        assert rep.status == 200
        assert rep.media_type == "text/turtle"

    def test_unsupported_types_406(self, resource):
        rep = negotiate("application/json", resource)
        assert rep.status == 406
        assert b"text/turtle" in rep.body

    def test_zero_q_rules_out_offer(self, resource):
        rep = negotiate("text/html;q=0, text/turtle", resource)
        assert rep.status == 200
        assert rep.media_type == "text/turtle"

    def test_malformed_q_treated_as_1(self, resource):
        rep = negotiate("text/turtle;q=banana", resource)
        assert rep.status == 200


class TestRoute:
    def test_file_served_directly(self, snapshot):
        rep = route(snapshot, "/site/datasets/ds-0/index.md", None)
        assert rep.status == 200
        assert rep.media_type.startswith("text/markdown")

    def test_dump_file_media_type(self, snapshot):
        rep = route(snapshot, "/dumps/catalog.nq", None)
        assert rep.status == 200
        assert rep.media_type == "application/n-quads"

    def test_version_file_plain_text(self, snapshot):
        rep = route(snapshot, "/VERSION", None)
        assert rep.status == 200
        assert rep.media_type.startswith("text/plain")

    def test_resource_conneg(self, snapshot):
        rep = route(snapshot, "/datasets/ds-0", "text/turtle")
        assert rep.status == 200

    def test_trailing_slash_tolerated(self, snapshot):
        rep = route(snapshot, "/datasets/ds-0/", "text/turtle")
        assert rep.status == 200

    def test_version_prefix_stripped(self, snapshot):
        for version in ("1.0.0", "dev"):
            rep = route(snapshot, f"/v/{version}/datasets/ds-0", "text/turtle")
            assert rep.status == 200

    def test_foreign_version_resolves_via_purl(self, snapshot):
        # static hosting keeps one snapshot; other versions still redirect
        rep = route(snapshot, "/v/0.9.0/datasets/ds-0", "text/turtle")
        assert rep.status == 303

    def test_purl_redirect_for_results(self, snapshot):
        rep = route(snapshot, "/results", None)
        assert rep.status == 303
        assert rep.location == "/site/results/index.md"

    def test_unknown_path_404(self, snapshot):
        assert route(snapshot, "/nowhere/at/all", None).status == 404

    def test_query_string_ignored(self, snapshot):
        rep = route(snapshot, "/datasets/ds-0?utm=1", "text/turtle")
        assert rep.status == 200


class TestSnapshotHolder:
    def test_swap_replaces_current(self, snapshot):
        holder = SnapshotHolder(snapshot)
        assert holder.current is snapshot
        holder.swap(snapshot)
        assert holder.current is snapshot


class TestLiveServer:
    @pytest.fixture
    def base_url(self, snapshot):
        holder = SnapshotHolder(snapshot)
        httpd = serve(holder, "127.0.0.1:0")
        yield f"http://127.0.0.1:{httpd.server_address[1]}"
        httpd.shutdown()

    def test_get_rdf(self, base_url):
        request = urllib.request.Request(
            base_url + "/datasets/ds-0", headers={"Accept": "text/turtle"}
        )
        with urllib.request.urlopen(request) as response:
            assert response.status == 200
            assert response.headers["Content-Type"] == "text/turtle"
            parse_document(response.read(), RdfFormat.TURTLE)

    def test_redirect_chain_reaches_page(self, base_url):
        with urllib.request.urlopen(base_url + "/datasets/ds-0") as response:
            assert response.status == 200
            assert "ds-0" in response.read().decode()

    def test_head_has_no_body(self, base_url):
        request = urllib.request.Request(base_url + "/VERSION", method="HEAD")
        with urllib.request.urlopen(request) as response:
            assert response.read() == b""

    def test_404_surfaces(self, base_url):
        with pytest.raises(urllib.error.HTTPError) as info:
            urllib.request.urlopen(base_url + "/missing")
        assert info.value.code == 404

    def test_406_surfaces(self, base_url):
        request = urllib.request.Request(
            base_url + "/datasets/ds-0", headers={"Accept": "image/png"}
        )
        with pytest.raises(urllib.error.HTTPError) as info:
            urllib.request.urlopen(request)
        assert info.value.code == 406
