"""RDF data model, parsers, deterministic serializers, and isomorphism."""

from .terms import (
    DEFAULT_GRAPH,
    RDF_FIRST,
    RDF_LANG_STRING,
    RDF_NIL,
    RDF_NS,
    RDF_REST,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DATE,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_NS,
    XSD_STRING,
    BlankNode,
    DefaultGraph,
    GraphName,
    Iri,
    Literal,
    Quad,
    RdfDataset,
    RdfFormat,
    Term,
    is_absolute_iri,
    quad_sort_key,
    term_lexical,
    term_sort_key,
)
from .parser import parse_document, resolve_iri
from .serializer import (
    DEFAULT_BLANK_NODE_LIMIT,
    canonical_blank_node_labels,
    canonicalize,
    serialize_document,
)
from .isomorphism import dataset_isomorphic

__all__ = [
    "DEFAULT_GRAPH",
    "DEFAULT_BLANK_NODE_LIMIT",
    "RDF_FIRST",
    "RDF_LANG_STRING",
    "RDF_NIL",
    "RDF_NS",
    "RDF_REST",
    "RDF_TYPE",
    "XSD_BOOLEAN",
    "XSD_DATE",
    "XSD_DECIMAL",
    "XSD_DOUBLE",
    "XSD_INTEGER",
    "XSD_NS",
    "XSD_STRING",
    "BlankNode",
    "DefaultGraph",
    "GraphName",
    "Iri",
    "Literal",
    "Quad",
    "RdfDataset",
    "RdfFormat",
    "Term",
    "canonical_blank_node_labels",
    "canonicalize",
    "dataset_isomorphic",
    "is_absolute_iri",
    "parse_document",
    "quad_sort_key",
    "resolve_iri",
    "serialize_document",
    "term_lexical",
    "term_sort_key",
]
