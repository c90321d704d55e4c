"""Orders on S_n that govern generalized diagonals of PSD matrices.

* cycle inclusion ``tau <=_c sigma``: every cycle of length >= 2 of ``tau``
  is a cycle of ``sigma``;
* cycle-reversal equivalence ``sigma ~c tau``: the cycles agree up to
  reversing individual cycles;
* the class order ``[tau] <=_[c] [sigma]`` induced on equivalence classes;
* strong Bruhat order, decided by the rank-dominance criterion.

``classify`` combines them into the verdict for a pair of generalized
diagonals in each of the three matrix settings.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .errors import DegreeMismatch
from .perm import Cycle, Permutation, is_involution

__all__ = [
    "EquivClassRep",
    "Relation",
    "RelationVerdict",
    "Setting",
    "bruhat_leq",
    "canonicalize_class",
    "class_leq",
    "class_members",
    "classify",
    "cycle_equiv",
    "cycle_leq",
]


def _check_degree(a: Permutation, b: Permutation) -> None:
    if a.n != b.n:
        raise DegreeMismatch(f"permutations of degree {a.n} and {b.n} cannot be compared")


def cycle_leq(tau: Permutation, sigma: Permutation) -> bool:
    """``tau <=_c sigma``; fixed points play no role."""
    _check_degree(tau, sigma)
    return tau.nontrivial_cycles <= sigma.nontrivial_cycles


def cycle_equiv(sigma: Permutation, tau: Permutation) -> bool:
    """Each cycle of either permutation equals a cycle of the other or its reverse."""
    _check_degree(sigma, tau)
    a, b = sigma.decomposition.cycles(), tau.decomposition.cycles()
    sa, sb = set(a), set(b)
    return all(c in sb or c.reversed() in sb for c in a) and all(
        c in sa or c.reversed() in sa for c in b
    )


def _orient(c: Cycle) -> Cycle:
    return min(c, c.reversed())


@dataclass(frozen=True)
class EquivClassRep:
    """Canonical label of a ``~c`` class.

    ``cycles`` holds the cycles of length >= 2, each in the lexicographically
    smaller of its two orientations.
    """

    n: int
    cycles: frozenset[Cycle]

    def sort_key(self) -> tuple:
        return tuple(sorted(self.cycles))

    def permutation(self) -> Permutation:
        """The member of the class whose cycles are exactly ``self.cycles``."""
        images = list(range(1, self.n + 1))
        for c in self.cycles:
            for a, b in c.arcs():
                images[a - 1] = b
        return Permutation(tuple(images))

    def __str__(self):
        return "".join(map(str, self.sort_key())) or "()"


def canonicalize_class(sigma: Permutation) -> EquivClassRep:
    return EquivClassRep(sigma.n, frozenset(_orient(c) for c in sigma.nontrivial_cycles))


def _members(rep: EquivClassRep) -> Iterator[Permutation]:
    fixed = [c for c in rep.sort_key() if len(c) == 2]
    flippable = [c for c in rep.sort_key() if len(c) >= 3]
    for flips in itertools.product((False, True), repeat=len(flippable)):
        chosen = [c.reversed() if f else c for c, f in zip(flippable, flips)]
        yield EquivClassRep(rep.n, frozenset(fixed + chosen)).permutation()


def class_members(rep: EquivClassRep) -> set[Permutation]:
    """All ``2**m`` members, m being the number of cycles of length >= 3."""
    return set(_members(rep))


def _members_from(p: Permutation) -> list[Permutation]:
    # p itself first, so witnesses prefer the caller's own orientation
    rest = [q for q in _members(canonicalize_class(p)) if q != p]
    return [p] + rest


def class_leq(
    tau: Permutation, sigma: Permutation
) -> tuple[bool, Optional[tuple[Permutation, Permutation]]]:
    """``[tau] <=_[c] [sigma]`` together with a witness ``(tau', sigma')``."""
    _check_degree(tau, sigma)
    for t in _members_from(tau):
        for s in _members_from(sigma):
            if t.nontrivial_cycles <= s.nontrivial_cycles:
                return True, (t, s)
    return False, None


@lru_cache(maxsize=None)
def _rank_table(images: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    # row i-1 holds #{k <= i : w(k) >= j} for j = 1..n
    n = len(images)
    rows = []
    counts = [0] * (n + 2)
    for v in images:
        for j in range(1, v + 1):
            counts[j] += 1
        rows.append(tuple(counts[1 : n + 1]))
    return tuple(rows)


def bruhat_leq(tau: Permutation, sigma: Permutation) -> bool:
    """Strong Bruhat order via the dominance criterion.

    ``tau <= sigma`` iff ``#{k <= i : tau(k) >= j} <= #{k <= i : sigma(k) >= j}``
    for all ``i, j``.
    """
    _check_degree(tau, sigma)
    rt, rs = _rank_table(tau.images), _rank_table(sigma.images)
    return all(a <= b for row_t, row_s in zip(rt, rs) for a, b in zip(row_t, row_s))


class Setting(enum.Enum):
    COMPLEX_ABS = "abs"  # |X_sigma| vs |X_tau|, X complex PSD
    COMPLEX_PLAIN = "complex"  # X_sigma vs X_tau, X complex PSD
    REAL_PLAIN = "real"  # X_sigma vs X_tau, X real PSD


class Relation(enum.Enum):
    ALWAYS_EQUAL = "AlwaysEqual"
    SIGMA_LEQ_TAU = "SigmaLeqTau"
    TAU_LEQ_SIGMA = "TauLeqSigma"
    INCOMPARABLE = "Incomparable"
    UNDEFINED = "Undefined"


@dataclass(frozen=True)
class RelationVerdict:
    relation: Relation
    # (lower', upper') with lower' <=_c upper', members of the respective classes
    witness: Optional[tuple[Permutation, Permutation]] = None

    @property
    def is_comparison(self) -> bool:
        return self.relation in (Relation.SIGMA_LEQ_TAU, Relation.TAU_LEQ_SIGMA)


def classify(sigma: Permutation, tau: Permutation, setting: Setting) -> RelationVerdict:
    """Decide the relation between the sigma- and tau-diagonals over a matrix class.

    ``SIGMA_LEQ_TAU`` means the sigma-side product never exceeds the tau-side
    product (in absolute value for ``COMPLEX_ABS``).
    """
    _check_degree(sigma, tau)
    if setting is Setting.COMPLEX_ABS:
        if cycle_equiv(sigma, tau):
            return RelationVerdict(Relation.ALWAYS_EQUAL)
        ok, witness = class_leq(tau, sigma)
        if ok:
            return RelationVerdict(Relation.SIGMA_LEQ_TAU, witness)
        ok, witness = class_leq(sigma, tau)
        if ok:
            return RelationVerdict(Relation.TAU_LEQ_SIGMA, witness)
        return RelationVerdict(Relation.INCOMPARABLE)

    if setting is Setting.COMPLEX_PLAIN:
        if not (is_involution(sigma) and is_involution(tau)):
            return RelationVerdict(Relation.UNDEFINED)
        if sigma == tau:  # ~c is equality on involutions
            return RelationVerdict(Relation.ALWAYS_EQUAL)
        if cycle_leq(tau, sigma):
            return RelationVerdict(Relation.SIGMA_LEQ_TAU, (tau, sigma))
        if cycle_leq(sigma, tau):
            return RelationVerdict(Relation.TAU_LEQ_SIGMA, (sigma, tau))
        return RelationVerdict(Relation.INCOMPARABLE)

    if setting is Setting.REAL_PLAIN:
        if cycle_equiv(sigma, tau):
            return RelationVerdict(Relation.ALWAYS_EQUAL)
        if is_involution(tau) and cycle_leq(tau, sigma):
            return RelationVerdict(Relation.SIGMA_LEQ_TAU, (tau, sigma))
        if is_involution(sigma) and cycle_leq(sigma, tau):
            return RelationVerdict(Relation.TAU_LEQ_SIGMA, (sigma, tau))
        return RelationVerdict(Relation.INCOMPARABLE)

    raise ValueError(f"unknown setting {setting!r}")
