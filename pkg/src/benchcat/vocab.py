"""The registry vocabulary: one versioned namespace of classes and predicates.

Every predicate the toolkit reads or writes lives here, so renaming a term
is a one-line change. The namespace is configurable; the default is the
project's own. Nanopublication structure terms come from the community
nanopub schema and are fixed.
"""

from __future__ import annotations

from .rdf import Iri, is_absolute_iri

DEFAULT_NAMESPACE = "https://benchcat.dev/vocab/v1#"
VOCAB_VERSION = "v1"

# nanopublication structure vocabulary (community standard, not ours to rename)
NANOPUB_NS = "http://www.nanopub.org/nschema#"
NP_NANOPUBLICATION = Iri(NANOPUB_NS + "Nanopublication")
NP_HAS_ASSERTION = Iri(NANOPUB_NS + "hasAssertion")
NP_HAS_PROVENANCE = Iri(NANOPUB_NS + "hasProvenance")
NP_HAS_PUBINFO = Iri(NANOPUB_NS + "hasPublicationInfo")

_CLASSES = [
    "Dataset",
    "Task",
    "Profile",
    "RunReport",
    "Agent",
    "Metric",
    "Constraint",
    "Distribution",
    "Violation",
]

_INDIVIDUALS = [
    "Triples",
    "Quads",
    "Graphs",
    "HigherBetter",
    "LowerBetter",
    "Error",
    "Warning",
    "Flat",
    "Stream",
]

_PREDICATES = [
    "id",
    "title",
    "description",
    "license",
    "creator",
    "name",
    "orcid",
    "useCase",
    "streamElementType",
    "elementCount",
    "sourceUrl",
    "requiredProfile",
    "metric",
    "unit",
    "direction",
    "constraint",
    "elementTypeIs",
    "minElementCount",
    "maxElementCount",
    "totalStatements",
    "distinctSubjects",
    "distinctPredicates",
    "distinctObjects",
    "usesNamedGraphs",
    "distribution",
    "kind",
    "format",
    "sizeCap",
    "byteSize",
    "sha256",
    "fileName",
    "violation",
    "path",
    "severity",
    "message",
    "ruleId",
    "task",
    "profile",
    "profileVersion",
    "benchmarkCode",
    "systems",
    "version",
    "author",
    "created",
    "resultsLink",
    "generatedWith",
]


class Vocab:
    """Term table bound to one namespace IRI.

    Attribute access returns the :class:`Iri` for that term, e.g.
    ``vocab.title`` is ``<ns>title``.
    """

    def __init__(self, namespace: str = DEFAULT_NAMESPACE):
        if not is_absolute_iri(namespace):
            raise ValueError(f"vocabulary namespace must be an absolute IRI: {namespace!r}")
        self.namespace = namespace
        for term in _CLASSES + _INDIVIDUALS + _PREDICATES:
            object.__setattr__(self, term, Iri(namespace + term))

    def __setattr__(self, key, value):
        if hasattr(self, key):
            raise AttributeError("Vocab is immutable")
        object.__setattr__(self, key, value)

    def __repr__(self) -> str:
        return f"Vocab({self.namespace!r})"


VOCAB = Vocab()
