"""RDF term and dataset model.

Terms are immutable values: two parses of the same document produce equal
datasets, and datasets are safe to share across threads. Blank node labels
are only meaningful within the dataset instance that carries them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Union

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
# Characters the IRIREF production forbids outside of escapes.
_FORBIDDEN_IRI_CHARS = set('<>"{}|^`\\') | {chr(c) for c in range(0x21)}


def is_absolute_iri(value: str) -> bool:
    return _SCHEME_RE.match(value) is not None


@dataclass(frozen=True, order=False)
class Iri:
    """An absolute IRI. Relative references never leave the parser."""

    value: str

    def __post_init__(self):
        if not is_absolute_iri(self.value):
            raise ValueError(f"not an absolute IRI: {self.value!r}")
        bad = _FORBIDDEN_IRI_CHARS.intersection(self.value)
        if bad:
            raise ValueError(f"forbidden character {sorted(bad)[0]!r} in IRI {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BlankNode:
    """A blank node, identified by a dataset-scoped label."""

    label: str

    def __str__(self) -> str:
        return "_:" + self.label


XSD_STRING = Iri(XSD_NS + "string")
XSD_INTEGER = Iri(XSD_NS + "integer")
XSD_DECIMAL = Iri(XSD_NS + "decimal")
XSD_DOUBLE = Iri(XSD_NS + "double")
XSD_BOOLEAN = Iri(XSD_NS + "boolean")
XSD_DATE = Iri(XSD_NS + "date")
RDF_LANG_STRING = Iri(RDF_NS + "langString")
RDF_TYPE = Iri(RDF_NS + "type")
RDF_FIRST = Iri(RDF_NS + "first")
RDF_REST = Iri(RDF_NS + "rest")
RDF_NIL = Iri(RDF_NS + "nil")


@dataclass(frozen=True)
class Literal:
    """A literal with its lexical form, datatype, and optional language tag.

    Plain literals normalize to ``xsd:string``; a language tag forces the
    ``rdf:langString`` datatype. Language tags are lowercased on construction,
    mirroring the case-insensitive comparison rules of BCP 47.
    """

    lexical: str
    datatype: Iri = XSD_STRING
    language: str | None = None

    def __post_init__(self):
        if self.language is not None:
            object.__setattr__(self, "language", self.language.lower())
            object.__setattr__(self, "datatype", RDF_LANG_STRING)
        elif self.datatype == RDF_LANG_STRING:
            raise ValueError("rdf:langString literal requires a language tag")


Term = Union[Iri, BlankNode, Literal]


@dataclass(frozen=True)
class DefaultGraph:
    """Singleton marker for the default graph of a dataset."""

    def __str__(self) -> str:
        return ""


DEFAULT_GRAPH = DefaultGraph()

GraphName = Union[Iri, BlankNode, DefaultGraph]
SubjectTerm = Union[Iri, BlankNode]


@dataclass(frozen=True)
class Quad:
    """One RDF statement, tagged with the graph it belongs to."""

    subject: SubjectTerm
    predicate: Iri
    object: Term
    graph: GraphName = DEFAULT_GRAPH

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise TypeError(f"subject must be an IRI or blank node, got {type(self.subject).__name__}")
        if not isinstance(self.predicate, Iri):
            raise TypeError(f"predicate must be an IRI, got {type(self.predicate).__name__}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise TypeError(f"object must be a term, got {type(self.object).__name__}")
        if not isinstance(self.graph, (Iri, BlankNode, DefaultGraph)):
            raise TypeError(f"graph must be an IRI, blank node, or the default graph")

    @property
    def in_default_graph(self) -> bool:
        return isinstance(self.graph, DefaultGraph)


def _escape_string(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def term_lexical(term: Term | DefaultGraph) -> str:
    """The N-Quads surface form of a term (empty for the default graph)."""
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        body = f'"{_escape_string(term.lexical)}"'
        if term.language is not None:
            return f"{body}@{term.language}"
        if term.datatype == XSD_STRING:
            return body
        return f"{body}^^<{term.datatype.value}>"
    if isinstance(term, DefaultGraph):
        return ""
    raise TypeError(f"not an RDF term: {term!r}")


_KIND_RANK = {DefaultGraph: 0, Iri: 1, BlankNode: 2, Literal: 3}


def term_sort_key(term: Term | DefaultGraph) -> tuple[int, str]:
    """Orders terms by kind (default graph < IRI < blank < literal), then code point."""
    return (_KIND_RANK[type(term)], term_lexical(term))


def quad_sort_key(quad: Quad) -> tuple:
    return (
        term_sort_key(quad.graph),
        term_sort_key(quad.subject),
        term_sort_key(quad.predicate),
        term_sort_key(quad.object),
    )


def canonical_quad_order(a: Quad, b: Quad) -> int:
    """Total order over quads: -1, 0, or 1 as ``a`` sorts before, with, or after ``b``."""
    ka, kb = quad_sort_key(a), quad_sort_key(b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


class RdfFormat(Enum):
    """The four concrete syntaxes the registry exchanges."""

    TURTLE = "turtle"
    TRIG = "trig"
    NTRIPLES = "ntriples"
    NQUADS = "nquads"

    @property
    def supports_named_graphs(self) -> bool:
        return self in (RdfFormat.TRIG, RdfFormat.NQUADS)

    @property
    def extension(self) -> str:
        return _EXTENSIONS[self]

    @property
    def media_type(self) -> str:
        return _MEDIA_TYPES[self]

    @classmethod
    def from_extension(cls, ext: str) -> "RdfFormat":
        ext = ext.lower().lstrip(".")
        for fmt, e in _EXTENSIONS.items():
            if e == ext:
                return fmt
        raise ValueError(f"unknown RDF file extension: .{ext}")

    @classmethod
    def from_media_type(cls, media_type: str) -> "RdfFormat":
        base = media_type.split(";")[0].strip().lower()
        for fmt, m in _MEDIA_TYPES.items():
            if m == base:
                return fmt
        raise ValueError(f"unknown RDF media type: {media_type}")


_EXTENSIONS = {
    RdfFormat.TURTLE: "ttl",
    RdfFormat.TRIG: "trig",
    RdfFormat.NTRIPLES: "nt",
    RdfFormat.NQUADS: "nq",
}

_MEDIA_TYPES = {
    RdfFormat.TURTLE: "text/turtle",
    RdfFormat.TRIG: "application/trig",
    RdfFormat.NTRIPLES: "application/n-triples",
    RdfFormat.NQUADS: "application/n-quads",
}


class RdfDataset:
    """An immutable set of quads plus prefix hints carried over from parsing.

    Equality and hashing consider the quad set only; prefixes are merely a
    serialization hint and never influence comparison or isomorphism.
    """

    __slots__ = ("_quads", "_prefixes")

    def __init__(self, quads: "frozenset[Quad] | set[Quad] | list[Quad] | tuple[Quad, ...]" = (),
                 prefixes: Mapping[str, str] | None = None):
        self._quads = frozenset(quads)
        self._prefixes = dict(prefixes) if prefixes else {}

    @property
    def quads(self) -> frozenset[Quad]:
        return self._quads

    @property
    def prefixes(self) -> dict[str, str]:
        return dict(self._prefixes)

    def __len__(self) -> int:
        return len(self._quads)

    def __iter__(self) -> Iterator[Quad]:
        return iter(self._quads)

    def __contains__(self, quad: Quad) -> bool:
        return quad in self._quads

    def __eq__(self, other) -> bool:
        if not isinstance(other, RdfDataset):
            return NotImplemented
        return self._quads == other._quads

    def __hash__(self) -> int:
        return hash(self._quads)

    def __repr__(self) -> str:
        return f"RdfDataset({len(self._quads)} quads)"

    def sorted_quads(self) -> list[Quad]:
        """Quads in the canonical order; the only stable way to iterate."""
        return sorted(self._quads, key=quad_sort_key)

    def graph_names(self) -> list[GraphName]:
        """Named graphs present in the dataset, canonically ordered."""
        names = {q.graph for q in self._quads if not isinstance(q.graph, DefaultGraph)}
        return sorted(names, key=term_sort_key)

    def graph(self, name: GraphName) -> "RdfDataset":
        """The quads of one graph, preserving their graph tags."""
        return RdfDataset(q for q in self._quads if q.graph == name)

    def default_graph_only(self) -> bool:
        return all(q.in_default_graph for q in self._quads)

    def blank_node_labels(self) -> set[str]:
        labels: set[str] = set()
        for q in self._quads:
            for t in (q.subject, q.object, q.graph):
                if isinstance(t, BlankNode):
                    labels.add(t.label)
        return labels

    def union(self, other: "RdfDataset") -> "RdfDataset":
        prefixes = {**self._prefixes, **other._prefixes}
        return RdfDataset(self._quads | other._quads, prefixes)

    def with_prefixes(self, prefixes: Mapping[str, str]) -> "RdfDataset":
        return RdfDataset(self._quads, prefixes)

    def relabel_blank_nodes(self, mapping: Mapping[str, str]) -> "RdfDataset":
        """A copy with blank node labels substituted through ``mapping``."""

        def sub(term):
            if isinstance(term, BlankNode) and term.label in mapping:
                return BlankNode(mapping[term.label])
            return term

        return RdfDataset(
            (Quad(sub(q.subject), q.predicate, sub(q.object), sub(q.graph)) for q in self._quads),
            self._prefixes,
        )


EMPTY_DATASET = RdfDataset()
