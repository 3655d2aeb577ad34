"""Deterministic serializers for the four supported syntaxes.

The promise: two datasets that are equal after blank node relabeling
serialize to identical bytes. Blank nodes get canonical names ``b0``,
``b1``, ... in order of first appearance in the sorted output, so the
original labels never leak into the bytes.

Canonical names come from color refinement over the blank nodes followed,
when symmetry survives refinement, by an individualization search that
keeps the lexicographically least rendering. The search is exponential in
the worst case, so both the node count and the number of explored leaves
are bounded; crossing either bound raises :class:`ComplexityLimitError`.
"""

from __future__ import annotations

from ..errors import ComplexityLimitError, FormatCapabilityError
from .terms import (
    DEFAULT_GRAPH,
    BlankNode,
    DefaultGraph,
    Quad,
    RdfDataset,
    RdfFormat,
    quad_sort_key,
    term_lexical,
)

DEFAULT_BLANK_NODE_LIMIT = 64
_SEARCH_LEAF_BUDGET = 4096
_POLISH_ROUNDS = 8


# ---------------------------------------------------------------------------
# Canonical blank node labeling.
# ---------------------------------------------------------------------------


def _quad_terms(quad: Quad):
    return (quad.graph, quad.subject, quad.predicate, quad.object)


def _occurrences(quads) -> dict[str, set[Quad]]:
    occ: dict[str, set[Quad]] = {}
    for quad in quads:
        for term in _quad_terms(quad):
            if isinstance(term, BlankNode):
                occ.setdefault(term.label, set()).add(quad)
    return occ


def _term_signature(term, node_label: str, colors: dict[str, int]):
    if isinstance(term, BlankNode):
        if term.label == node_label:
            return ("S",)
        return ("B", colors[term.label])
    if isinstance(term, DefaultGraph):
        return ("D",)
    return ("G", term_lexical(term))


def _refine(labels, occ, colors: dict[str, int]) -> dict[str, int]:
    while True:
        sigs = {}
        for label in labels:
            quad_sigs = sorted(
                tuple(_term_signature(t, label, colors) for t in _quad_terms(q))
                for q in occ.get(label, ())
            )
            sigs[label] = (colors[label], tuple(quad_sigs))
        ranking = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
        refined = {label: ranking[sigs[label]] for label in labels}
        if refined == colors:
            return colors
        colors = refined


def _apply_mapping(quad: Quad, mapping: dict[str, str]) -> Quad:
    def sub(term):
        if isinstance(term, BlankNode):
            return BlankNode(mapping[term.label])
        return term

    return Quad(sub(quad.subject), quad.predicate, sub(quad.object), sub(quad.graph))


def _appearance_mapping(ordered_quads) -> dict[str, str]:
    # textual order within a line is subject, predicate, object, graph
    fresh: dict[str, str] = {}
    for quad in ordered_quads:
        for term in (quad.subject, quad.predicate, quad.object, quad.graph):
            if isinstance(term, BlankNode) and term.label not in fresh:
                fresh[term.label] = f"b{len(fresh)}"
    return fresh


def _polish(quads, mapping: dict[str, str]) -> dict[str, str]:
    """Relabel to first-appearance order, re-sort, repeat to a fixpoint."""
    for _ in range(_POLISH_ROUNDS):
        ordered = sorted(quads, key=lambda q: quad_sort_key(_apply_mapping(q, mapping)))
        fresh = _appearance_mapping(ordered)
        if fresh == mapping:
            return mapping
        mapping = fresh
    return mapping


def _render_key(quads, mapping: dict[str, str]) -> tuple:
    relabeled = sorted((_apply_mapping(q, mapping) for q in quads), key=quad_sort_key)
    return tuple(quad_sort_key(q) for q in relabeled)


def _search(quads, labels, occ, colors, budget: list[int]):
    classes: dict[int, list[str]] = {}
    for label, color in colors.items():
        classes.setdefault(color, []).append(label)
    split_targets = sorted(
        (len(members), color) for color, members in classes.items() if len(members) > 1
    )
    if not split_targets:
        budget[0] -= 1
        if budget[0] < 0:
            raise ComplexityLimitError("blank node symmetry search exceeded its budget")
        order = sorted(labels, key=lambda lab: colors[lab])
        mapping = {label: f"b{i}" for i, label in enumerate(order)}
        mapping = _polish(quads, mapping)
        return _render_key(quads, mapping), mapping
    _, target_color = split_targets[0]
    next_color = max(colors.values()) + 1
    best = None
    for label in classes[target_color]:
        trial = dict(colors)
        trial[label] = next_color
        trial = _refine(labels, occ, trial)
        candidate = _search(quads, labels, occ, trial, budget)
        if best is None or candidate[0] < best[0]:
            best = candidate
    return best


def canonical_blank_node_labels(
    dataset: RdfDataset, *, blank_node_limit: int = DEFAULT_BLANK_NODE_LIMIT
) -> dict[str, str]:
    """Map every blank node label to its canonical ``b<n>`` name."""
    labels = sorted(dataset.blank_node_labels())
    if not labels:
        return {}
    if len(labels) > blank_node_limit:
        raise ComplexityLimitError(
            f"dataset has {len(labels)} blank nodes, more than the limit of {blank_node_limit}"
        )
    quads = dataset.quads
    occ = _occurrences(quads)
    colors = _refine(labels, occ, {label: 0 for label in labels})
    budget = [_SEARCH_LEAF_BUDGET]
    _, mapping = _search(quads, labels, occ, colors, budget)
    return mapping


def canonicalize(
    dataset: RdfDataset, *, blank_node_limit: int = DEFAULT_BLANK_NODE_LIMIT
) -> RdfDataset:
    """Return the dataset with blank nodes renamed to canonical labels."""
    mapping = canonical_blank_node_labels(dataset, blank_node_limit=blank_node_limit)
    return dataset.relabel_blank_nodes(mapping)


# ---------------------------------------------------------------------------
# Rendering.
# ---------------------------------------------------------------------------


def _triple_text(quad: Quad) -> str:
    return (
        f"{term_lexical(quad.subject)} {term_lexical(quad.predicate)} "
        f"{term_lexical(quad.object)}"
    )


def _quad_line(quad: Quad) -> str:
    if quad.in_default_graph:
        return _triple_text(quad) + " ."
    return f"{_triple_text(quad)} {term_lexical(quad.graph)} ."


def serialize_document(
    dataset: RdfDataset,
    format: RdfFormat,
    *,
    blank_node_limit: int = DEFAULT_BLANK_NODE_LIMIT,
    canonical_labels: bool = True,
) -> bytes:
    """Serialize a dataset to deterministic UTF-8 bytes.

    Named graphs only fit TriG and N-Quads; handing a dataset that uses
    them to Turtle or N-Triples raises :class:`FormatCapabilityError`.
    An empty dataset serializes to zero bytes in every syntax.

    ``canonical_labels=False`` keeps the dataset's own blank node labels
    (output is then deterministic only if those labels are); callers that
    already assigned scoped labels, like flat dump assembly over thousands
    of blank nodes, use this to skip the canonical search and its limit.
    """
    if not format.supports_named_graphs and not dataset.default_graph_only():
        raise FormatCapabilityError(
            f"dataset has named graphs, which {format.value} cannot represent"
        )
    if canonical_labels:
        mapping = canonical_blank_node_labels(dataset, blank_node_limit=blank_node_limit)
    else:
        mapping = {label: label for label in dataset.blank_node_labels()}
    quads = sorted(
        (_apply_mapping(q, mapping) for q in dataset.quads), key=quad_sort_key
    )
    if not quads:
        return b""
    if format in (RdfFormat.NTRIPLES, RdfFormat.TURTLE):
        lines = [_triple_text(q) + " ." for q in quads]
    elif format is RdfFormat.NQUADS:
        lines = [_quad_line(q) for q in quads]
    else:  # TriG
        lines = []
        i = 0
        while i < len(quads) and quads[i].in_default_graph:
            lines.append(_triple_text(quads[i]) + " .")
            i += 1
        while i < len(quads):
            graph = quads[i].graph
            lines.append(f"{term_lexical(graph)} {{")
            while i < len(quads) and quads[i].graph == graph:
                lines.append(f"  {_triple_text(quads[i])} .")
                i += 1
            lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")
