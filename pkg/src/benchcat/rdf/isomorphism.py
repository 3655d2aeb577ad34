"""Dataset isomorphism: equality up to blank node renaming.

Ground quads must match exactly. Blank nodes are first partitioned by
joint color refinement over both datasets, then a backtracking search
looks for a bijection within the color classes. Kept separate from the
canonical-labeling serializer on purpose: two independent answers to the
same question make disagreement detectable.
"""

from __future__ import annotations

from ..errors import ComplexityLimitError
from .terms import BlankNode, Quad, RdfDataset
from .serializer import _occurrences, _refine

DEFAULT_BLANK_NODE_LIMIT = 64
_STEP_BUDGET = 500_000

_LEFT = "left#"
_RIGHT = "right#"


def _has_blank(quad: Quad) -> bool:
    return any(
        isinstance(term, BlankNode)
        for term in (quad.subject, quad.predicate, quad.object, quad.graph)
    )


def _substitute(quad: Quad, mapping: dict[str, str]) -> Quad:
    def sub(term):
        if isinstance(term, BlankNode):
            return BlankNode(mapping.get(term.label, term.label))
        return term

    return Quad(sub(quad.subject), quad.predicate, sub(quad.object), sub(quad.graph))


def dataset_isomorphic(
    a: RdfDataset,
    b: RdfDataset,
    *,
    blank_node_limit: int = DEFAULT_BLANK_NODE_LIMIT,
) -> bool:
    """True when some blank node bijection turns ``a`` into ``b``.

    Prefix hints are ignored, as in dataset equality. Raises
    :class:`ComplexityLimitError` when either dataset has more blank
    nodes than ``blank_node_limit`` or the matching search degenerates.
    """
    if len(a.quads) != len(b.quads):
        return False
    labels_a = a.blank_node_labels()
    labels_b = b.blank_node_labels()
    if len(labels_a) != len(labels_b):
        return False
    if not labels_a:
        return a.quads == b.quads
    if max(len(labels_a), len(labels_b)) > blank_node_limit:
        raise ComplexityLimitError(
            f"dataset has more than {blank_node_limit} blank nodes"
        )

    # disjoint label spaces so one joint refinement colors both sides
    left = a.relabel_blank_nodes({lab: _LEFT + lab for lab in labels_a})
    right = b.relabel_blank_nodes({lab: _RIGHT + lab for lab in labels_b})
    ground_left = {q for q in left.quads if not _has_blank(q)}
    ground_right = {q for q in right.quads if not _has_blank(q)}
    if ground_left != ground_right:
        return False

    all_quads = list(left.quads) + list(right.quads)
    occ = _occurrences(all_quads)
    labels = sorted(occ)
    colors = _refine(labels, occ, {lab: 0 for lab in labels})

    by_color_left: dict[int, list[str]] = {}
    by_color_right: dict[int, list[str]] = {}
    for lab in labels:
        side = by_color_left if lab.startswith(_LEFT) else by_color_right
        side.setdefault(colors[lab], []).append(lab)
    if set(by_color_left) != set(by_color_right):
        return False
    for color, members in by_color_left.items():
        if len(members) != len(by_color_right[color]):
            return False

    # smallest classes first keeps the branching factor down
    order = sorted(
        (lab for lab in labels if lab.startswith(_LEFT)),
        key=lambda lab: (len(by_color_left[colors[lab]]), colors[lab], lab),
    )
    right_quads = right.quads
    mapping: dict[str, str] = {}
    used: set[str] = set()
    budget = [_STEP_BUDGET]

    def consistent(lab: str) -> bool:
        for quad in occ[lab]:
            pending = False
            for term in (quad.subject, quad.predicate, quad.object, quad.graph):
                if isinstance(term, BlankNode) and term.label not in mapping:
                    pending = True
                    break
            if pending:
                continue
            if _substitute(quad, mapping) not in right_quads:
                return False
        return True

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        lab = order[i]
        for candidate in by_color_right[colors[lab]]:
            if candidate in used:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise ComplexityLimitError("isomorphism search exceeded its budget")
            mapping[lab] = candidate
            used.add(candidate)
            if consistent(lab) and extend(i + 1):
                return True
            del mapping[lab]
            used.discard(candidate)
        return False

    return extend(0)
