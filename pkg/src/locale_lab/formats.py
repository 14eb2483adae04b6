"""Line-based input files for spaces and posets.

::

    space sierpinski
    points: x y
    open:
    open: y
    open: x y

    poset two_chain
    points: p q
    le: p q

Blank lines and lines starting with ``#`` are ignored. Each ``open:``
line lists one open set (an empty list is the empty set); each ``le:``
line gives one pair ``a <= b``, and the reflexive-transitive closure is
taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import IoError, NotAPartialOrder, NotATopology, ParseError
from .spaces import FiniteSpace, Poset, check_topology, make_poset, to_mask


@dataclass(frozen=True)
class ParsedInput:
    kind: str  # "space" or "poset"
    name: str
    space: Optional[FiniteSpace] = None
    poset: Optional[Poset] = None

    @property
    def points(self) -> tuple:
        return self.space.points if self.space is not None else self.poset.points


def _split(rest: str) -> list[str]:
    return rest.split()


def parse_text(text: str) -> ParsedInput:
    kind = name = None
    header_line = 0
    points = None
    points_line = 0
    opens: dict[int, int] = {}  # mask -> line
    pairs: list[tuple[str, str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if kind is None:
            head = line.split(maxsplit=1)
            if head[0] not in ("space", "poset"):
                raise ParseError(lineno, "expected 'space <name>' or 'poset <name>'")
            if len(head) < 2:
                raise ParseError(lineno, f"{head[0]} needs a name")
            kind, name, header_line = head[0], head[1].strip(), lineno
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise ParseError(lineno, f"expected 'key: values', got {line!r}")
        if key == "points":
            if points is not None:
                raise ParseError(lineno, f"points already declared on line {points_line}")
            names = _split(rest)
            dup = {p for p in names if names.count(p) > 1}
            if dup:
                raise ParseError(lineno, f"duplicate point {sorted(dup)[0]!r}")
            points, points_line = names, lineno
            index = {p: i for i, p in enumerate(points)}
            continue
        if points is None:
            raise ParseError(lineno, f"'{key}:' before 'points:'")
        values = _split(rest)
        unknown = [v for v in values if v not in index]
        if unknown:
            raise ParseError(lineno, f"undeclared point {unknown[0]!r}")
        if key == "open":
            if kind != "space":
                raise ParseError(lineno, "'open:' lines belong in a space file")
            opens.setdefault(to_mask(index[v] for v in values), lineno)
        elif key == "le":
            if kind != "poset":
                raise ParseError(lineno, "'le:' lines belong in a poset file")
            if len(values) != 2:
                raise ParseError(lineno, "'le:' takes exactly two points")
            pairs.append((values[0], values[1], lineno))
        else:
            raise ParseError(lineno, f"unknown key {key!r}")

    if kind is None:
        raise ParseError(0, "empty input")
    if points is None:
        raise ParseError(header_line, "missing 'points:' line")

    if kind == "space":
        if not points and not opens:
            opens[0] = header_line
        X = FiniteSpace(tuple(points), frozenset(opens))
        try:
            check_topology(X)
        except NotATopology as exc:
            at = header_line
            if isinstance(exc.witness, tuple):
                at = max(opens[to_mask(index[p] for p in W)] for W in exc.witness)
            raise ParseError(at, f"not a topology: {exc}") from exc
        return ParsedInput("space", name, space=X)

    try:
        P = make_poset(points, [(a, b) for a, b, _ in pairs])
    except NotAPartialOrder as exc:
        at = pairs[-1][2] if pairs else header_line
        raise ParseError(at, f"not a partial order: {exc}") from exc
    return ParsedInput("poset", name, poset=P)


def parse_input(path) -> ParsedInput:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    return parse_text(text)


def format_space(X: FiniteSpace, name: str = "X") -> str:
    lines = [f"space {name}", "points: " + " ".join(X.points)]
    for U in X.open_sets():
        members = [p for p in X.points if p in U]
        lines.append(("open: " + " ".join(members)).rstrip())
    return "\n".join(lines) + "\n"
