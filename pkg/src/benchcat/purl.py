"""Permanent-URL redirect rules.

A table maps stable public paths to snapshot-internal targets, so the whole
site can move hosts by swapping one file. Patterns use `{name}` placeholders
that each match exactly one path segment; `{version}` captures equal to
``dev`` resolve to the snapshot's current version.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import NotFoundError, RedirectTableError

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


def _segments(path: str) -> list[str]:
    if not path.startswith("/"):
        raise RedirectTableError(f"pattern must start with '/': {path!r}")
    body = path[1:]
    if body.endswith("/"):
        body = body[:-1]
    return body.split("/") if body else []


def _check_segment(segment: str, where: str) -> None:
    if "{" in segment or "}" in segment:
        if not _PLACEHOLDER.fullmatch(segment):
            raise RedirectTableError(
                f"placeholder must span a whole segment in {where}: {segment!r}"
            )
    elif not segment:
        raise RedirectTableError(f"empty segment in {where}")


@dataclass(frozen=True)
class RedirectRule:
    pattern: str
    target: str

    def __post_init__(self) -> None:
        names = set()
        for segment in _segments(self.pattern):
            _check_segment(segment, f"pattern {self.pattern!r}")
            m = _PLACEHOLDER.fullmatch(segment)
            if m:
                if m.group(1) in names:
                    raise RedirectTableError(
                        f"duplicate placeholder {m.group(1)!r} in {self.pattern!r}"
                    )
                names.add(m.group(1))
        for used in _PLACEHOLDER.findall(self.target):
            if used not in names:
                raise RedirectTableError(
                    f"target {self.target!r} uses {{{used}}} not bound by {self.pattern!r}"
                )

    def match(self, path_segments: list[str]) -> "dict[str, str] | None":
        pattern = _segments(self.pattern)
        if len(pattern) != len(path_segments):
            return None
        captures = {}
        for expected, actual in zip(pattern, path_segments):
            m = _PLACEHOLDER.fullmatch(expected)
            if m:
                captures[m.group(1)] = actual
            elif expected != actual:
                return None
        return captures


def _overlap(a: RedirectRule, b: RedirectRule) -> bool:
    sa, sb = _segments(a.pattern), _segments(b.pattern)
    if len(sa) != len(sb):
        return False
    for x, y in zip(sa, sb):
        if not _PLACEHOLDER.fullmatch(x) and not _PLACEHOLDER.fullmatch(y) and x != y:
            return False
    return True


@dataclass(frozen=True)
class RedirectTable:
    entries: tuple[RedirectRule, ...]
    default_version: str = "1.0.0"

    def __post_init__(self) -> None:
        # Disjointness up front: resolution order must never matter.
        for i, a in enumerate(self.entries):
            for b in self.entries[i + 1 :]:
                if _overlap(a, b):
                    raise RedirectTableError(
                        f"patterns overlap: {a.pattern!r} and {b.pattern!r}"
                    )

    @classmethod
    def from_text(cls, text: str, default_version: str = "1.0.0") -> "RedirectTable":
        rules = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "->" not in line:
                raise RedirectTableError(f"line {lineno}: expected 'pattern -> target'")
            pattern, _, target = line.partition("->")
            rules.append(RedirectRule(pattern.strip(), target.strip()))
        return cls(tuple(rules), default_version)

    def to_text(self) -> str:
        lines = [f"{rule.pattern} -> {rule.target}" for rule in self.entries]
        return "\n".join(lines) + ("\n" if lines else "")


def resolve_purl(table: RedirectTable, path: str) -> str:
    """Expand the unique matching pattern's target; `dev` versions resolve
    to the table's default."""
    try:
        segments = _segments(path)
    except RedirectTableError:
        raise NotFoundError(f"no redirect matches {path!r}") from None
    for rule in table.entries:
        captures = rule.match(segments)
        if captures is None:
            continue
        if captures.get("version") == "dev":
            captures["version"] = table.default_version

        def fill(m: "re.Match[str]") -> str:
            return captures[m.group(1)]

        return _PLACEHOLDER.sub(fill, rule.target)
    raise NotFoundError(f"no redirect matches {path!r}")
