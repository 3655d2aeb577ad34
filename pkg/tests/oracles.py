"""Independent oracles used by the test suite.

These deliberately use the dumbest correct algorithm available so they stay
independent of the production code paths they check. Keep them slow and
obvious.
"""

from __future__ import annotations

import itertools

from benchcat.rdf.terms import BlankNode, Quad, RdfDataset


def _labels(dataset: RdfDataset) -> list[str]:
    found = set()
    for q in dataset:
        for t in (q.subject, q.object, q.graph):
            if isinstance(t, BlankNode):
                found.add(t.label)
    return sorted(found)


def _apply(dataset: RdfDataset, mapping: dict[str, str]) -> frozenset[Quad]:
    def sub(term):
        if isinstance(term, BlankNode):
            return BlankNode(mapping[term.label])
        return term

    return frozenset(Quad(sub(q.subject), q.predicate, sub(q.object), sub(q.graph)) for q in dataset)


def brute_force_isomorphic(a: RdfDataset, b: RdfDataset) -> bool:
    """Try every bijection between the blank nodes of ``a`` and ``b``.

    Feasible up to roughly 7 blank nodes; the acceptance suite stays at 6.
    """
    if len(a) != len(b):
        return False
    la, lb = _labels(a), _labels(b)
    if len(la) != len(lb):
        return False
    b_quads = frozenset(b.quads)
    for perm in itertools.permutations(lb):
        mapping = dict(zip(la, perm))
        if _apply(a, mapping) == b_quads:
            return True
    return False


def orcid_check_digit(base_digits: str) -> str:
    """ISO 7064 mod 11-2 check character over the first 15 ORCID digits."""
    total = 0
    for ch in base_digits:
        total = (total + int(ch)) * 2
    remainder = total % 11
    result = (12 - remainder) % 11
    return "X" if result == 10 else str(result)


def make_orcid(base_digits: str) -> str:
    """A full hyphenated ORCID from 15 digits, with a valid check digit."""
    assert len(base_digits) == 15 and base_digits.isdigit()
    full = base_digits + orcid_check_digit(base_digits)
    return "-".join(full[i : i + 4] for i in range(0, 16, 4))
