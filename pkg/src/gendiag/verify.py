"""Brute-force and randomized checks of every verdict ``classify`` produces.

Three kinds of evidence are gathered:

* exhaustive enumeration of S_n for the order axioms and Bruhat containment;
* Monte-Carlo sampling of random Gram matrices for claimed (in)equalities;
* explicit epsilon Gram counterexamples for pairs declared incomparable.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .construct import (
    DEFAULT_EPSILON,
    CounterexampleSpec,
    Field,
    GeneratorSpec,
    Kind,
    epsilon_gram,
    random_gram,
)
from .errors import (
    CaseSearchFailed,
    DegreeMismatch,
    DegreeTooLarge,
    GendiagError,
    NotIncomparable,
    WitnessNotFound,
)
from .matrix import REL_TOL, ComplexMatrix, generalized_diagonal, log_magnitude_gap
from .order import (
    EquivClassRep,
    Relation,
    Setting,
    bruhat_leq,
    canonicalize_class,
    classify,
    cycle_equiv,
)
from .perm import Permutation, all_permutations, format_cycles

__all__ = [
    "AuditReport",
    "PosetReport",
    "SeparationWitness",
    "TrialReport",
    "ViolationWitness",
    "bruhat_closure",
    "choose_pq",
    "class_upsets",
    "cycle_leq_upsets",
    "exhaustive_poset",
    "find_separation",
    "find_violation",
    "full_theorem_audit",
    "monte_carlo_pair",
    "random_equivalent_pair",
]

MAX_POSET_N = 7
MAX_AUDIT_N = 5
MAX_HALVINGS = 60


# ---------------------------------------------------------------------------
# exhaustive poset checks


def bruhat_closure(tau: Permutation) -> set[Permutation]:
    """Everything reachable from ``tau`` by swapping values ``i < j`` where
    ``i`` currently sits left of ``j``; i.e. the Bruhat up-set, by search."""
    start = tau.images
    seen = {start}
    queue = deque([start])
    n = len(start)
    while queue:
        w = queue.popleft()
        for a in range(n):
            for b in range(a + 1, n):
                if w[a] < w[b]:
                    nxt = list(w)
                    nxt[a], nxt[b] = nxt[b], nxt[a]
                    nxt = tuple(nxt)
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
    return {Permutation(w) for w in seen}


@dataclass
class PosetReport:
    n: int
    permutation_count: int
    class_count: int
    relation: set[tuple[EquivClassRep, EquivClassRep]]
    cycle_leq_pairs: int
    pairs_examined: int
    axiom_failures: list[str] = field(default_factory=list)
    bruhat_containment_failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.axiom_failures and not self.bruhat_containment_failures

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "permutation_count": self.permutation_count,
            "class_count": self.class_count,
            "class_relation_size": len(self.relation),
            "cycle_leq_pairs": self.cycle_leq_pairs,
            "pairs_examined": self.pairs_examined,
            "axiom_failures": list(self.axiom_failures),
            "bruhat_containment_failures": list(self.bruhat_containment_failures),
        }


def _order_axioms(name: str, up: list[set[int]], label) -> list[str]:
    failures = []
    for i, above in enumerate(up):
        if i not in above:
            failures.append(f"{name}: not reflexive at {label(i)}")
        for j in above:
            if j != i and i in up[j]:
                failures.append(f"{name}: {label(i)} and {label(j)} violate antisymmetry")
            if not up[j] <= above:
                failures.append(f"{name}: transitivity fails through {label(i)} <= {label(j)}")
    return failures


def cycle_leq_upsets(perms: list[Permutation]) -> list[set[int]]:
    """``up[i] = {j : perms[i] <=_c perms[j]}`` by pairwise comparison."""
    cyc = [p.nontrivial_cycles for p in perms]
    return [{j for j, s in enumerate(cyc) if c <= s} for c in cyc]


def class_upsets(
    perms: list[Permutation], up: list[set[int]]
) -> tuple[list[EquivClassRep], list[int], list[set[int]]]:
    """Project ``<=_c`` onto ``~c`` classes: ``[a] <= [b]`` iff some members compare.

    Returns the sorted class reps, the class index of each permutation and
    the class up-sets.
    """
    reps = [canonicalize_class(p) for p in perms]
    classes = sorted(set(reps), key=EquivClassRep.sort_key)
    index = {r: k for k, r in enumerate(classes)}
    cls_of = [index[r] for r in reps]
    cls_up: list[set[int]] = [set() for _ in classes]
    for i, above in enumerate(up):
        for j in above:
            cls_up[cls_of[i]].add(cls_of[j])
    return classes, cls_of, cls_up


def exhaustive_poset(n: int) -> PosetReport:
    """Enumerate S_n and check the orders against their defining properties.

    * ``<=_c`` is a partial order on permutations;
    * ``~c`` is an equivalence relation agreeing with ``canonicalize_class``;
    * the induced class relation is a partial order and is realised by every
      member of the lower class;
    * ``tau <=_c sigma`` implies ``tau <= sigma`` in Bruhat order.
    """
    if not 0 <= n <= MAX_POSET_N:
        raise DegreeTooLarge(f"exhaustive enumeration supports 0 <= n <= {MAX_POSET_N}, got {n}")
    perms = list(all_permutations(n))
    N = len(perms)
    label = lambda i: format_cycles(perms[i])  # noqa: E731

    up = cycle_leq_upsets(perms)
    failures = _order_axioms("cycle_leq", up, label)

    # ~c preserves the partition of {1..n} into cycle supports; only compare within one
    buckets: dict[frozenset, list[int]] = {}
    for i, p in enumerate(perms):
        key = frozenset(frozenset(c) for c in p.decomposition.cycles())
        buckets.setdefault(key, []).append(i)
    eq: list[set[int]] = [set() for _ in range(N)]
    for members in buckets.values():
        for i in members:
            eq[i] = {j for j in members if cycle_equiv(perms[i], perms[j])}
    for i in range(N):
        if i not in eq[i]:
            failures.append(f"cycle_equiv: not reflexive at {label(i)}")
        for j in eq[i]:
            if i not in eq[j]:
                failures.append(f"cycle_equiv: not symmetric for {label(i)}, {label(j)}")
            if eq[j] != eq[i]:
                failures.append(f"cycle_equiv: not transitive through {label(i)} ~ {label(j)}")

    classes, cls_of, cls_up = class_upsets(perms, up)
    reps = [classes[k] for k in cls_of]
    by_rep: dict[EquivClassRep, set[int]] = {}
    for i, r in enumerate(reps):
        by_rep.setdefault(r, set()).add(i)
    for i in range(N):
        if by_rep[reps[i]] != eq[i]:
            failures.append(f"canonicalize_class disagrees with cycle_equiv at {label(i)}")
    cls_members: list[list[int]] = [[] for _ in classes]
    for i, k in enumerate(cls_of):
        cls_members[k].append(i)

    failures += _order_axioms("class_leq", cls_up, lambda k: str(classes[k]))
    for a, above in enumerate(cls_up):
        for b in above:
            for i in cls_members[a]:
                if not any(cls_of[j] == b for j in up[i]):
                    failures.append(
                        f"class_leq: member {label(i)} of {classes[a]} has no partner in {classes[b]}"
                    )

    bruhat_failures = [
        f"{label(i)} <=_c {label(j)} but not Bruhat-below"
        for i in range(N)
        for j in up[i]
        if not bruhat_leq(perms[i], perms[j])
    ]
    relation = {(classes[a], classes[b]) for a, above in enumerate(cls_up) for b in above}
    return PosetReport(
        n=n,
        permutation_count=N,
        class_count=len(classes),
        relation=relation,
        cycle_leq_pairs=sum(len(u) for u in up),
        pairs_examined=N * N,
        axiom_failures=failures,
        bruhat_containment_failures=bruhat_failures,
    )


# ---------------------------------------------------------------------------
# Monte-Carlo


@dataclass
class TrialReport:
    sigma: Permutation
    tau: Permutation
    setting: Setting
    trials: int
    verdict_expected: Relation
    violations: int
    max_slack_used: float
    nonreal_seen: int = 0

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "sigma": format_cycles(self.sigma),
            "tau": format_cycles(self.tau),
            "setting": self.setting.value,
            "trials": self.trials,
            "verdict_expected": self.verdict_expected.value,
            "violations": self.violations,
            "max_slack_used": self.max_slack_used,
            "nonreal_seen": self.nonreal_seen,
        }


def _field_for(setting: Setting) -> Field:
    return Field.REAL if setting is Setting.REAL_PLAIN else Field.COMPLEX


def _nonneg_real(v) -> bool:
    return v.is_zero or (v.is_real and v.sign == 1)


def _plain_leq(lo, hi, rel_tol: float) -> tuple[bool, float]:
    """Signed comparison ``lo <= hi`` of two real products, slack in the log domain."""
    if not (lo.is_real and hi.is_real):
        return False, math.inf
    if lo.is_zero or lo.sign == -1:
        if hi.is_zero or hi.sign == 1:
            return True, 0.0
        if lo.is_zero:
            return False, math.inf
        gap = log_magnitude_gap(hi, lo)  # both negative
        return gap <= rel_tol, max(gap, 0.0)
    if hi.is_zero or hi.sign == -1:
        return False, math.inf
    gap = log_magnitude_gap(lo, hi)
    return gap <= rel_tol, max(gap, 0.0)


def monte_carlo_pair(
    sigma: Permutation,
    tau: Permutation,
    setting: Setting,
    trials: int,
    seed: int,
    pair_index: int = 0,
    rel_tol: float = REL_TOL,
) -> TrialReport:
    """Sample PSD Gram matrices and count breaches of ``classify``'s verdict.

    Trial ``t`` draws from the stream ``(seed, pair_index, t)`` with rank
    ``n - t mod n``, so singular PSD matrices are sampled alongside PD ones.
    An ``Undefined`` verdict counts one violation if no non-real product
    was ever observed.
    """
    if sigma.n != tau.n:
        raise DegreeMismatch(f"degrees {sigma.n} and {tau.n} differ")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    verdict = classify(sigma, tau, setting).relation
    n = sigma.n
    violations, slack, nonreal = 0, 0.0, 0
    for t in range(trials):
        rank = n - (t % n) if n else 0
        X = random_gram(
            GeneratorSpec(n, seed, _field_for(setting), Kind.PSD, stream=(pair_index, t), rank=rank)
        )
        a, b = generalized_diagonal(X, sigma), generalized_diagonal(X, tau)
        if not (a.is_real and b.is_real):
            nonreal += 1
        ok, used = True, 0.0
        if verdict is Relation.ALWAYS_EQUAL:
            used = abs(log_magnitude_gap(a, b))
            ok = used <= rel_tol
            if setting is not Setting.COMPLEX_ABS and not (a.is_zero and b.is_zero):
                ok = ok and a.is_real and b.is_real and a.sign == b.sign
                if setting is Setting.COMPLEX_PLAIN:
                    ok = ok and _nonneg_real(a)
        elif verdict in (Relation.SIGMA_LEQ_TAU, Relation.TAU_LEQ_SIGMA):
            lo, hi = (a, b) if verdict is Relation.SIGMA_LEQ_TAU else (b, a)
            if setting is Setting.COMPLEX_ABS:
                gap = log_magnitude_gap(lo, hi)
                used, ok = max(gap, 0.0), gap <= rel_tol
            else:
                ok, used = _plain_leq(lo, hi, rel_tol)
                if setting is Setting.COMPLEX_PLAIN:
                    ok = ok and _nonneg_real(lo) and _nonneg_real(hi)
        if not ok:
            violations += 1
        slack = max(slack, used)
    if verdict is Relation.UNDEFINED and nonreal == 0:
        violations += 1
    return TrialReport(sigma, tau, setting, trials, verdict, violations, slack, nonreal)


# ---------------------------------------------------------------------------
# explicit counterexamples


def choose_pq(sigma: Permutation, tau: Permutation) -> tuple[int, tuple[int, int]]:
    """Pick the entry ``(p, q)`` whose shrinking makes ``A_sigma`` small.

    Case 1: a cycle of length >= 3 of ``sigma``, matched by no cycle of ``tau``
    up to reversal, has an arc ``(p, q)`` such that neither ``x_pq`` nor
    ``x_qp`` is a factor of ``X_tau``.
    Case 2: otherwise an unmatched 2-cycle ``(p q)`` of ``sigma``; ``X_tau``
    then holds at most one of ``x_pq``, ``x_qp``.
    """
    if sigma.n != tau.n:
        raise DegreeMismatch(f"degrees {sigma.n} and {tau.n} differ")
    theirs = tau.nontrivial_cycles
    unmatched = [
        c for c in sorted(sigma.nontrivial_cycles) if c not in theirs and c.reversed() not in theirs
    ]
    long_cycles = [c for c in unmatched if len(c) >= 3]
    for c in long_cycles:
        for p, q in c.arcs():
            if (p, q) not in tau.arcs and (q, p) not in tau.arcs:
                return 1, (p, q)
    if long_cycles:
        raise CaseSearchFailed(f"no free arc in {long_cycles[0]} against {format_cycles(tau)}")
    for c in unmatched:
        p, q = c
        if len({(p, q), (q, p)} & tau.arcs) <= 1:
            return 2, (p, q)
    raise CaseSearchFailed(
        f"every cycle of {format_cycles(sigma)} is matched in {format_cycles(tau)}"
    )


def _real_diagonal(A: ComplexMatrix, p: Permutation) -> float:
    # plain double product, compared without slack
    return math.prod(float(A.entries[k, v - 1].real) for k, v in enumerate(p.images))


def _shrink(small: Permutation, large: Permutation, pq: tuple[int, int]):
    eps = DEFAULT_EPSILON
    for _ in range(MAX_HALVINGS + 1):
        A = epsilon_gram(CounterexampleSpec(small.n, pq[0], pq[1], eps))
        lo, hi = _real_diagonal(A, small), _real_diagonal(A, large)
        if 0 < lo < hi:
            return A, lo, hi, eps
        eps /= 2
    raise WitnessNotFound(
        f"A_{format_cycles(small)} < A_{format_cycles(large)} still fails after {MAX_HALVINGS} halvings"
    )


@dataclass
class SeparationWitness:
    """A real PD matrix with ``0 < A_lower < A_upper``."""

    A: ComplexMatrix
    lower: Permutation
    upper: Permutation
    case: int
    chosen_pq: tuple[int, int]
    epsilon_used: float
    lower_value: float
    upper_value: float


def find_separation(sigma: Permutation, tau: Permutation) -> SeparationWitness:
    """Shrink a factor of ``X_sigma`` until ``0 < A_sigma < A_tau`` strictly.

    Requires ``sigma`` to have a cycle matched by no cycle of ``tau`` up to
    reversal, i.e. ``[sigma]`` not below ``[tau]``.
    """
    case, pq = choose_pq(sigma, tau)
    A, lo, hi, eps = _shrink(sigma, tau, pq)
    return SeparationWitness(A, sigma, tau, case, pq, eps, lo, hi)


@dataclass
class ViolationWitness:
    A: ComplexMatrix  # 0 < A_sigma < A_tau
    A_prime: ComplexMatrix  # 0 < A'_tau < A'_sigma
    values: dict[str, float]
    chosen_pq: tuple[int, int]
    chosen_pq_prime: tuple[int, int]
    cases: tuple[int, int]
    epsilon_used: float
    epsilon_used_prime: float

    def holds(self) -> bool:
        v = self.values
        return 0 < v["A_sigma"] < v["A_tau"] and 0 < v["A_prime_tau"] < v["A_prime_sigma"]


def find_violation(sigma: Permutation, tau: Permutation) -> ViolationWitness:
    """Real PD matrices refuting both ``|X_sigma| <= |X_tau|`` and its reverse."""
    verdict = classify(sigma, tau, Setting.COMPLEX_ABS).relation
    if verdict is not Relation.INCOMPARABLE:
        raise NotIncomparable(
            f"{format_cycles(sigma)} and {format_cycles(tau)} are {verdict.value}, not incomparable"
        )
    fwd = find_separation(sigma, tau)
    back = find_separation(tau, sigma)
    return ViolationWitness(
        A=fwd.A,
        A_prime=back.A,
        values={
            "A_sigma": fwd.lower_value,
            "A_tau": fwd.upper_value,
            "A_prime_sigma": back.upper_value,
            "A_prime_tau": back.lower_value,
        },
        chosen_pq=fwd.chosen_pq,
        chosen_pq_prime=back.chosen_pq,
        cases=(fwd.case, back.case),
        epsilon_used=fwd.epsilon_used,
        epsilon_used_prime=back.epsilon_used,
    )


# ---------------------------------------------------------------------------
# full audit


@dataclass
class AuditReport:
    n: int
    trials: int
    seed: int
    pairs: int = 0
    verdict_counts: Counter = field(default_factory=Counter)
    monte_carlo_trials: int = 0
    max_slack_used: float = 0.0
    witnesses: int = 0
    separations: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "pairs": self.pairs,
            "verdict_counts": dict(sorted(self.verdict_counts.items())),
            "monte_carlo_trials": self.monte_carlo_trials,
            "max_slack_used": self.max_slack_used,
            "witnesses": self.witnesses,
            "separations": self.separations,
            "failures": list(self.failures),
        }


def _failure(kind: str, sigma: Permutation, tau: Permutation, detail: str) -> dict:
    return {
        "kind": kind,
        "sigma": format_cycles(sigma),
        "tau": format_cycles(tau),
        "detail": detail,
    }


def audit_pair(
    sigma: Permutation, tau: Permutation, trials: int, seed: int, pair_index: int
) -> tuple[Relation, Optional[TrialReport], list[dict], int, int]:
    """One ordered pair of the audit; returns (verdict, trial report,
    failures, witnesses built, separations built)."""
    verdict = classify(sigma, tau, Setting.COMPLEX_ABS).relation
    failures: list[dict] = []
    witnesses = separations = 0
    report = None
    if verdict is Relation.INCOMPARABLE:
        try:
            w = find_violation(sigma, tau)
        except GendiagError as exc:
            failures.append(_failure("witness", sigma, tau, f"{type(exc).__name__}: {exc}"))
        else:
            if w.holds():
                witnesses += 1
            else:
                failures.append(_failure("witness", sigma, tau, f"strictness fails: {w.values}"))
        return verdict, report, failures, witnesses, separations

    report = monte_carlo_pair(sigma, tau, Setting.COMPLEX_ABS, trials, seed, pair_index)
    if not report.ok:
        failures.append(
            _failure("monte_carlo", sigma, tau, f"{report.violations} violations of {verdict.value}")
        )
    if verdict is not Relation.ALWAYS_EQUAL:
        # the equality half: a non-equivalent comparable pair must separate somewhere
        upper_side = (sigma, tau) if verdict is Relation.SIGMA_LEQ_TAU else (tau, sigma)
        try:
            s = find_separation(*upper_side)
        except GendiagError as exc:
            failures.append(_failure("separation", sigma, tau, f"{type(exc).__name__}: {exc}"))
        else:
            if 0 < s.lower_value < s.upper_value:
                separations += 1
            else:
                failures.append(_failure("separation", sigma, tau, "values not strictly ordered"))
    return verdict, report, failures, witnesses, separations


def full_theorem_audit(n: int, trials: int, seed: int) -> AuditReport:
    """Check every ordered pair of S_n against the absolute-value verdict.

    Comparable or equal pairs are sampled with ``monte_carlo_pair``; strictly
    comparable pairs additionally get a matrix where the two magnitudes
    differ; incomparable pairs get witnesses in both directions.
    """
    if not 0 <= n <= MAX_AUDIT_N:
        raise DegreeTooLarge(f"the audit supports 0 <= n <= {MAX_AUDIT_N}, got {n}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    perms = list(all_permutations(n))
    out = AuditReport(n, trials, seed)
    k = 0
    for sigma in perms:
        for tau in perms:
            verdict, rep, fails, wit, sep = audit_pair(sigma, tau, trials, seed, k)
            out.pairs += 1
            out.verdict_counts[verdict.value] += 1
            out.witnesses += wit
            out.separations += sep
            out.failures.extend(fails)
            if rep is not None:
                out.monte_carlo_trials += rep.trials
                out.max_slack_used = max(out.max_slack_used, rep.max_slack_used)
            k += 1
    return out


def random_equivalent_pair(n: int, rng: np.random.Generator) -> tuple[Permutation, Permutation]:
    """A uniform permutation and a random member of its ``~c`` class."""
    sigma = Permutation(tuple(int(v) + 1 for v in rng.permutation(n)))
    images = list(sigma.images)
    for c in sigma.nontrivial_cycles:
        if len(c) >= 3 and rng.random() < 0.5:
            for a, b in c.reversed().arcs():
                images[a - 1] = b
    return sigma, Permutation(tuple(images))
