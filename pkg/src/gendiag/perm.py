"""Permutations of {1, ..., n} in one-line form, plus cycle decompositions.

Labels are 1-based on every public surface.  ``Permutation.images[i - 1]``
is the image of ``i``.

>>> p = parse_cycles("(1 3 2)(4 5)", 5)
>>> p.images
(3, 1, 2, 5, 4)
>>> format_cycles(p)
'(1 3 2)(4 5)'
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import (
    DegreeMismatch,
    MalformedInput,
    NotABijection,
    OutOfRange,
    RepeatedElement,
)

__all__ = [
    "Cycle",
    "CycleDecomposition",
    "Permutation",
    "all_permutations",
    "decompose",
    "format_cycles",
    "format_one_line",
    "inverse",
    "is_cycle_text",
    "is_involution",
    "max_label",
    "parse_cycles",
    "parse_one_line",
    "parse_permutation",
]


class Cycle(tuple):
    """A cycle ``(c_1, ..., c_l)`` stored with its minimum element first.

    >>> Cycle((3, 1, 2))
    Cycle(1, 2, 3)
    >>> Cycle((3, 1, 2)).reversed()
    Cycle(1, 3, 2)
    """

    def __new__(cls, elements=()):
        elems = tuple(int(e) for e in elements)
        if not elems:
            raise MalformedInput("a cycle needs at least one element")
        if len(set(elems)) != len(elems):
            raise RepeatedElement(f"repeated element in cycle {elems}")
        k = elems.index(min(elems))
        return super().__new__(cls, elems[k:] + elems[:k])

    def reversed(self) -> "Cycle":
        """The inverse cycle ``(c_1, c_l, ..., c_2)``."""
        return Cycle((self[0],) + tuple(reversed(self[1:])))

    def arcs(self) -> list[tuple[int, int]]:
        """Pairs ``(c_i, c_{i+1})`` with indices read cyclically."""
        return [(self[i], self[(i + 1) % len(self)]) for i in range(len(self))]

    def __repr__(self):
        return "Cycle(" + ", ".join(map(str, self)) + ")"

    def __str__(self):
        return "(" + " ".join(map(str, self)) + ")"


@dataclass(frozen=True)
class CycleDecomposition:
    """The sets ``C_1, ..., C_n`` of a permutation.

    ``by_length[l]`` holds the l-cycles sorted by their minima; fixed points
    are kept as singleton cycles under ``by_length[1]``.
    """

    n: int
    by_length: dict[int, tuple[Cycle, ...]]

    def cycles(self, min_length: int = 1) -> list[Cycle]:
        out = [c for length, cs in self.by_length.items() if length >= min_length for c in cs]
        return sorted(out)

    def nontrivial(self) -> frozenset[Cycle]:
        """All cycles of length at least 2, as a set."""
        return frozenset(self.cycles(2))

    def recompose(self) -> "Permutation":
        images = [0] * self.n
        for c in self.cycles():
            for a, b in c.arcs():
                images[a - 1] = b
        return Permutation(tuple(images))


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise NotABijection(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(i) = self(other(i))
        if self.n != other.n:
            raise DegreeMismatch(f"degrees {self.n} and {other.n} differ")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    @cached_property
    def decomposition(self) -> CycleDecomposition:
        seen = [False] * (self.n + 1)
        by_length: dict[int, list[Cycle]] = {k: [] for k in range(1, self.n + 1)}
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            orbit = []
            i = start
            while not seen[i]:
                seen[i] = True
                orbit.append(i)
                i = self.images[i - 1]
            # start is the smallest unseen label, so the orbit is already min-first
            by_length[len(orbit)].append(Cycle(orbit))
        return CycleDecomposition(self.n, {k: tuple(v) for k, v in by_length.items()})

    @cached_property
    def nontrivial_cycles(self) -> frozenset[Cycle]:
        return self.decomposition.nontrivial()

    @cached_property
    def arcs(self) -> frozenset[tuple[int, int]]:
        """Index pairs ``(k, p(k))`` of the matrix entries this permutation selects."""
        return frozenset((k, v) for k, v in enumerate(self.images, start=1))

    def __str__(self):
        return format_cycles(self)


def parse_one_line(text: str) -> Permutation:
    """Read whitespace-separated images, e.g. ``"3 1 2"``."""
    try:
        images = tuple(int(tok) for tok in text.split())
    except ValueError as exc:
        raise MalformedInput(f"non-integer token in {text!r}") from exc
    return Permutation(images)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Read a product of disjoint cycles over ``{1..n}``.

    Elements are separated by whitespace or commas.  For ``n <= 9`` the compact
    form ``(132)(45)`` is accepted as well.  ``""``, ``"()"`` and ``"id"`` all
    denote the identity.
    """
    if n < 0:
        raise MalformedInput("degree must be nonnegative")
    body = text.strip()
    if body in ("", "id"):
        return Permutation.identity(n)
    if _CYCLE_RE.sub("", body).strip():
        raise MalformedInput(f"cannot parse cycle notation {text!r}")
    images = list(range(1, n + 1))
    used: set[int] = set()
    for group in _CYCLE_RE.findall(body):
        tokens = _group_labels(group) if n <= 9 else [t for t in re.split(r"[\s,]+", group.strip()) if t]
        try:
            elems = [int(t) for t in tokens]
        except ValueError as exc:
            raise MalformedInput(f"non-integer element in cycle ({group})") from exc
        for e in elems:
            if not 1 <= e <= n:
                raise OutOfRange(f"element {e} outside 1..{n}")
            if e in used:
                raise RepeatedElement(f"element {e} appears in more than one cycle")
            used.add(e)
        for a, b in zip(elems, elems[1:] + elems[:1]):
            images[a - 1] = b
    return Permutation(tuple(images))


def _group_labels(group: str) -> list[str]:
    tokens = [t for t in re.split(r"[\s,]+", group.strip()) if t]
    if len(tokens) == 1 and len(tokens[0]) > 1 and tokens[0].isdigit():
        return list(tokens[0])
    return tokens


def max_label(text: str) -> int:
    """Largest element mentioned in cycle notation (0 for the identity)."""
    labels = [t for g in _CYCLE_RE.findall(text) for t in _group_labels(g)]
    try:
        return max((int(t) for t in labels), default=0)
    except ValueError as exc:
        raise MalformedInput(f"non-integer element in {text!r}") from exc


def is_cycle_text(text: str) -> bool:
    stripped = text.strip()
    return "(" in stripped or stripped in ("", "id")


def parse_permutation(text: str, n: int | None = None) -> Permutation:
    """Accept either notation; cycle form is recognised by its parentheses.

    Without ``n`` the degree of a cycle-form permutation is its largest label.
    """
    if is_cycle_text(text):
        return parse_cycles(text, max_label(text) if n is None else n)
    return parse_one_line(text)


def decompose(p: Permutation) -> CycleDecomposition:
    return p.decomposition


def inverse(p: Permutation) -> Permutation:
    images = [0] * p.n
    for i, v in enumerate(p.images, start=1):
        images[v - 1] = i
    return Permutation(tuple(images))


def is_involution(p: Permutation) -> bool:
    """True iff ``p * p`` is the identity.  The identity itself counts."""
    return all(p.images[v - 1] == i for i, v in enumerate(p.images, start=1))


def format_cycles(p: Permutation) -> str:
    """Cycle notation with fixed points omitted; the identity prints as ``()``."""
    cycles = p.decomposition.cycles(2)
    return "".join(map(str, cycles)) or "()"


def format_one_line(p: Permutation) -> str:
    return " ".join(map(str, p.images))


def all_permutations(n: int) -> Iterator[Permutation]:
    """All of S_n in lexicographic order of one-line notation."""
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)
