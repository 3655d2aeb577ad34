"""Serializer determinism and canonical labeling.

The central property: serialization is a pure function of the dataset's
structure, so isomorphic inputs yield byte-identical output. Everything
downstream (packaging checksums, reproducible site builds) rests on it.
"""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from benchcat.errors import ComplexityLimitError, FormatCapabilityError
from benchcat.rdf.isomorphism import dataset_isomorphic
from benchcat.rdf.parser import parse_document
from benchcat.rdf.serializer import canonical_blank_node_labels, canonicalize, serialize_document
from benchcat.rdf.terms import (
    BlankNode,
    Iri,
    Literal,
    Quad,
    RdfDataset,
    RdfFormat,
)

from conftest import legal_formats, random_dataset, relabel_blank_nodes

EX = "http://example.com/"


class TestDeterminism:
    def test_same_dataset_same_bytes(self):
        rng = random.Random(11)
        for _ in range(20):
            d = random_dataset(rng)
            for fmt in legal_formats(d):
                assert serialize_document(d, fmt) == serialize_document(d, fmt)

    def test_quad_insertion_order_irrelevant(self):
        rng = random.Random(12)
        d = random_dataset(rng, max_quads=8)
        shuffled = list(d)
        rng.shuffle(shuffled)
        other = RdfDataset(shuffled)
        for fmt in legal_formats(d):
            assert serialize_document(d, fmt) == serialize_document(other, fmt)

    def test_prefix_hints_do_not_change_output(self):
        q = Quad(Iri(EX + "s"), Iri(EX + "p"), Literal("o"))
        bare = RdfDataset([q])
        hinted = RdfDataset([q], {"ex": Iri(EX)})
        assert serialize_document(bare, RdfFormat.TURTLE) == serialize_document(hinted, RdfFormat.TURTLE)


class TestCanonicalLabels:
    def test_labels_are_b0_onward(self):
        d = RdfDataset([Quad(BlankNode("zulu"), Iri(EX + "p"), BlankNode("alpha"))])
        out = serialize_document(d, RdfFormat.NTRIPLES).decode()
        assert "_:b0" in out
        assert "_:b1" in out
        assert "zulu" not in out

    def test_relabeled_dataset_serializes_identically(self):
        rng = random.Random(13)
        for _ in range(40):
            d = random_dataset(rng, max_bnodes=4)
            twin = relabel_blank_nodes(d, rng)
            for fmt in legal_formats(d):
                assert serialize_document(d, fmt) == serialize_document(twin, fmt)

    def test_canonicalize_preserves_structure(self):
        rng = random.Random(14)
        for _ in range(20):
            d = random_dataset(rng)
            assert dataset_isomorphic(d, canonicalize(d))

    def test_label_map_covers_every_blank_node(self):
        d = RdfDataset(
            [
                Quad(BlankNode("x"), Iri(EX + "p"), BlankNode("y")),
                Quad(BlankNode("y"), Iri(EX + "p"), Literal("leaf"), BlankNode("g")),
            ]
        )
        mapping = canonical_blank_node_labels(d)
        assert set(mapping) == {"x", "y", "g"}
        assert sorted(mapping.values()) == ["b0", "b1", "b2"]

    def test_symmetric_nodes_get_distinct_labels(self):
        # two indistinguishable blank nodes force the individualization step
        d = RdfDataset(
            [
                Quad(BlankNode("l"), Iri(EX + "p"), Literal("same")),
                Quad(BlankNode("r"), Iri(EX + "p"), Literal("same")),
            ]
        )
        mapping = canonical_blank_node_labels(d)
        assert len(set(mapping.values())) == 2


class TestFormatRules:
    def test_turtle_refuses_named_graphs(self):
        d = RdfDataset([Quad(Iri(EX + "s"), Iri(EX + "p"), Literal("o"), Iri(EX + "g"))])
        with pytest.raises(FormatCapabilityError):
            serialize_document(d, RdfFormat.TURTLE)
        with pytest.raises(FormatCapabilityError):
            serialize_document(d, RdfFormat.NTRIPLES)

    def test_line_formats_end_with_newline(self):
        d = RdfDataset([Quad(Iri(EX + "s"), Iri(EX + "p"), Literal("o"))])
        for fmt in RdfFormat:
            assert serialize_document(d, fmt).endswith(b"\n")

    def test_empty_dataset_serializes(self):
        for fmt in RdfFormat:
            parse_document(serialize_document(RdfDataset([]), fmt), fmt)

    def test_blank_node_limit_enforced(self):
        quads = [Quad(BlankNode(f"x{i}"), Iri(EX + "p"), BlankNode(f"x{i+1}")) for i in range(70)]
        with pytest.raises(ComplexityLimitError):
            serialize_document(RdfDataset(quads), RdfFormat.NQUADS)

    def test_blank_node_limit_adjustable(self):
        quads = [Quad(BlankNode(f"x{i}"), Iri(EX + "p"), BlankNode(f"x{i+1}")) for i in range(70)]
        serialize_document(RdfDataset(quads), RdfFormat.NQUADS, blank_node_limit=128)

    def test_escape_hatch_keeps_caller_labels(self):
        d = RdfDataset([Quad(BlankNode("keeper"), Iri(EX + "p"), Literal("o"))])
        out = serialize_document(d, RdfFormat.NQUADS, canonical_labels=False)
        assert b"_:keeper" in out

    def test_escape_hatch_ignores_blank_node_limit(self):
        quads = [Quad(BlankNode(f"x{i}"), Iri(EX + "p"), Literal("o")) for i in range(70)]
        out = serialize_document(RdfDataset(quads), RdfFormat.NQUADS, canonical_labels=False)
        assert len(out.splitlines()) == 70


class TestRoundTrips:
    def test_seeded_corpus_round_trips(self):
        rng = random.Random(15)
        for _ in range(60):
            d = random_dataset(rng)
            for fmt in legal_formats(d):
                again = parse_document(serialize_document(d, fmt), fmt)
                assert dataset_isomorphic(d, again), fmt

    def test_awkward_literals_survive(self):
        awkward = [
            Literal(""),
            Literal('"double" and \\backslash\\'),
            Literal("line\nbreak\r\nand\ttab"),
            Literal("café \U0001F600"),
            Literal("ends with quote\""),
        ]
        quads = [Quad(Iri(EX + f"s{i}"), Iri(EX + "p"), lit) for i, lit in enumerate(awkward)]
        d = RdfDataset(quads)
        for fmt in RdfFormat:
            assert parse_document(serialize_document(d, fmt), fmt) == d


@st.composite
def _datasets(draw):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_dataset(random.Random(seed))


class TestRelabelInvarianceProperty:
    @settings(max_examples=60, deadline=None)
    @given(_datasets(), st.integers(min_value=0, max_value=2**32 - 1))
    def test_serialization_is_label_blind(self, dataset, relabel_seed):
        twin = relabel_blank_nodes(dataset, random.Random(relabel_seed))
        for fmt in legal_formats(dataset):
            assert serialize_document(dataset, fmt) == serialize_document(twin, fmt)
