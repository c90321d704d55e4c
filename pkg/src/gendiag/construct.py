"""Seeded PSD/PD generators and the epsilon Gram construction.

Random matrices are Gram matrices ``B B*`` with Gaussian ``B``.  Randomness
comes from numpy's PCG64 bit generator keyed by ``SeedSequence(seed,
spawn_key=stream)``, so every (seed, stream) pair is an independent,
platform-stable stream.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GenerationFailed
from .matrix import ComplexMatrix, PsdVerdict, certify

__all__ = [
    "CounterexampleSpec",
    "Field",
    "GeneratorSpec",
    "Kind",
    "epsilon_gram",
    "gram_vectors",
    "random_gram",
    "rng_for",
]

DEFAULT_EPSILON = 1e-3
MAX_PD_RETRIES = 16


class Field(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


class Kind(enum.Enum):
    PSD = "psd"
    PD = "pd"


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    seed: int
    field: Field = Field.COMPLEX
    kind: Kind = Kind.PSD
    # extra spawn key; lets callers derive one stream per (pair, trial)
    stream: tuple[int, ...] = ()
    # columns of B; None means n.  Below n the output is singular PSD.
    rank: Optional[int] = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.rank is not None and not 0 <= self.rank <= self.n:
            raise ValueError(f"rank {self.rank} outside 0..{self.n}")
        if self.kind is Kind.PD and self.rank is not None and self.rank < self.n:
            raise ValueError("a PD matrix needs full rank")


def rng_for(seed: int, stream: tuple[int, ...] = ()) -> np.random.Generator:
    ss = np.random.SeedSequence(seed % 2**64, spawn_key=tuple(stream))
    return np.random.Generator(np.random.PCG64(ss))


def _draw(rng: np.random.Generator, n: int, r: int, field: Field) -> np.ndarray:
    if field is Field.REAL:
        B = rng.standard_normal((n, r))
        G = B @ B.T
        return (G + G.T) / 2
    B = (rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))) / np.sqrt(2)
    G = B @ B.conj().T
    # BLAS does not promise an exactly Hermitian product
    return (G + G.conj().T) / 2


def random_gram(spec: GeneratorSpec) -> ComplexMatrix:
    """``B B*`` with iid standard (real or circular complex) normal ``B``.

    For ``Kind.PD`` draws are repeated from the same stream until the result
    certifies PD.
    """
    rng = rng_for(spec.seed, spec.stream)
    r = spec.n if spec.rank is None else spec.rank
    for _ in range(MAX_PD_RETRIES):
        X = ComplexMatrix(_draw(rng, spec.n, r, spec.field))
        if spec.kind is Kind.PSD or certify(X).verdict is PsdVerdict.PD:
            return X
    raise GenerationFailed(f"no PD draw for {spec} after {MAX_PD_RETRIES} attempts")


@dataclass(frozen=True)
class CounterexampleSpec:
    n: int
    p: int
    q: int
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("the construction needs n >= 2")
        if self.p == self.q or not (1 <= self.p <= self.n and 1 <= self.q <= self.n):
            raise ValueError(f"need distinct p, q in 1..{self.n}, got {self.p}, {self.q}")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


def gram_vectors(spec: CounterexampleSpec) -> np.ndarray:
    """Rows ``v_1..v_n``: ``v_p = e_p + (eps/2) e_q``, ``v_q = e_q + (eps/2) e_p``,
    and ``v_k = e_k + e_p + e_q`` for every other ``k``."""
    n, p, q, half = spec.n, spec.p - 1, spec.q - 1, spec.epsilon / 2
    V = np.eye(n)
    for k in range(n):
        if k == p:
            V[k, q] = half
        elif k == q:
            V[k, p] = half
        else:
            V[k, p] = V[k, q] = 1.0
    return V


def epsilon_gram(spec: CounterexampleSpec) -> ComplexMatrix:
    """Real PD matrix with ``a_pq = a_qp = eps`` and every other entry above 1."""
    V = gram_vectors(spec)
    return ComplexMatrix(V @ V.T)
