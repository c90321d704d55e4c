"""Dense complex matrices, PSD certification and generalized diagonals.

A generalized diagonal ``X_sigma = prod_k x[k, sigma(k)]`` is returned as a
:class:`DiagonalValue` holding ``log|X_sigma|`` and the unit phase separately,
so that long products neither underflow nor overflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegreeMismatch, MalformedInput, NotCertified, OutOfRange
from .perm import Cycle, Permutation

__all__ = [
    "ComplexMatrix",
    "DiagonalValue",
    "PsdCertificate",
    "PsdVerdict",
    "certify",
    "cycle_factor_check",
    "format_matrix",
    "generalized_diagonal",
    "hadamard_pair_check",
    "log_magnitude_gap",
    "parse_matrix",
]

CERT_TOL = 1e-10
REL_TOL = 1e-9
REAL_TOL = 1e-12


class ComplexMatrix:
    """Immutable n x n complex matrix.  Certificates are cached per tolerance."""

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.complex128)
        if arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise MalformedInput(f"matrix must be square, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise MalformedInput("matrix entries must be finite")
        arr.setflags(write=False)
        self._entries = arr
        self._certificates: dict[float, PsdCertificate] = {}

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def n(self) -> int:
        return self._entries.shape[0]

    def __getitem__(self, ij: tuple[int, int]) -> complex:
        """1-based entry access: ``X[i, j]``."""
        i, j = ij
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise OutOfRange(f"index ({i}, {j}) outside a {self.n}x{self.n} matrix")
        return complex(self._entries[i - 1, j - 1])

    @property
    def scale(self) -> float:
        m = float(np.max(np.abs(self._entries))) if self.n else 0.0
        return m if m > 0 else 1.0

    def is_real(self) -> bool:
        return bool(np.all(self._entries.imag == 0))

    def __eq__(self, other):
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    __hash__ = None

    def __repr__(self):
        return f"ComplexMatrix({self._entries.tolist()!r})"


class PsdVerdict(enum.Enum):
    PD = "PD"
    PSD = "PSD"
    NOT_PSD = "NotPSD"
    NOT_HERMITIAN = "NotHermitian"


@dataclass(frozen=True)
class PsdCertificate:
    hermitian_defect: float
    min_eigenvalue: float
    verdict: PsdVerdict

    @property
    def is_psd(self) -> bool:
        return self.verdict in (PsdVerdict.PD, PsdVerdict.PSD)


def certify(X: ComplexMatrix, tol: float = CERT_TOL) -> PsdCertificate:
    """Classify ``X`` as PD, PSD, NotPSD or NotHermitian.

    Hermitian defect and eigenvalues are judged against ``tol`` times the
    largest absolute entry.  The empty matrix is PD.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    cached = X._certificates.get(tol)
    if cached is not None:
        return cached
    if X.n == 0:
        cert = PsdCertificate(0.0, math.inf, PsdVerdict.PD)
    else:
        A = X.entries
        defect = float(np.max(np.abs(A - A.conj().T)))
        lam = float(np.linalg.eigvalsh((A + A.conj().T) / 2)[0])
        bound = tol * X.scale
        if defect > bound:
            verdict = PsdVerdict.NOT_HERMITIAN
        elif lam > bound:
            verdict = PsdVerdict.PD
        elif lam >= -bound:
            verdict = PsdVerdict.PSD
        else:
            verdict = PsdVerdict.NOT_PSD
        cert = PsdCertificate(defect, lam, verdict)
    X._certificates[tol] = cert
    return cert


@dataclass(frozen=True)
class DiagonalValue:
    log_magnitude: float  # -inf when some factor is exactly zero
    phase: Optional[complex]  # unit complex number; None for a zero product
    is_real: bool
    sign: Optional[int]  # +1/-1 when is_real and nonzero

    @property
    def magnitude(self) -> float:
        return math.exp(self.log_magnitude)

    @property
    def value(self) -> complex:
        if self.phase is None:
            return 0j
        return self.magnitude * self.phase

    @property
    def is_zero(self) -> bool:
        return self.log_magnitude == -math.inf


def generalized_diagonal(X: ComplexMatrix, sigma: Permutation) -> DiagonalValue:
    """``prod_k X[k, sigma(k)]`` accumulated in the log domain."""
    if sigma.n != X.n:
        raise DegreeMismatch(f"permutation of degree {sigma.n} on a {X.n}x{X.n} matrix")
    factors = X.entries[np.arange(X.n), np.asarray(sigma.images, dtype=int) - 1]
    mags = np.abs(factors)
    if np.any(mags == 0):
        return DiagonalValue(-math.inf, None, True, None)
    log_mag = math.fsum(np.log(mags).tolist())
    phase = complex(np.prod(factors / mags)) if X.n else 1 + 0j
    phase /= abs(phase)
    is_real = abs(phase.imag) <= REAL_TOL
    sign = (1 if phase.real > 0 else -1) if is_real else None
    return DiagonalValue(log_mag, phase, is_real, sign)


def log_magnitude_gap(a: DiagonalValue, b: DiagonalValue) -> float:
    """``log|a| - log|b|``, with two zero products comparing equal."""
    if a.is_zero and b.is_zero:
        return 0.0
    return a.log_magnitude - b.log_magnitude


def _require_psd(X: ComplexMatrix) -> PsdCertificate:
    cert = certify(X)
    if not cert.is_psd:
        raise NotCertified(f"matrix certified {cert.verdict.value}, not PSD")
    return cert


def hadamard_pair_check(X: ComplexMatrix, rel_tol: float = REL_TOL) -> bool:
    """``|x_ij|^2 <= x_ii x_jj`` for every pair, up to ``rel_tol * scale**2``."""
    _require_psd(X)
    A = X.entries
    d = A.diagonal().real
    lhs = np.abs(A) ** 2
    rhs = np.outer(d, d)
    return bool(np.all(lhs <= rhs + rel_tol * X.scale**2))


def cycle_factor_check(X: ComplexMatrix, c: Sequence[int], rel_tol: float = REL_TOL) -> bool:
    """``|x_{c1 c2} x_{c2 c3} ... x_{cl c1}| <= |x_{c1 c1}| ... |x_{cl cl}|``.

    Compared in the log domain with slack ``rel_tol``; when the right side
    vanishes the comparison falls back to an absolute slack.
    """
    _require_psd(X)
    cyc = Cycle(c)
    if any(not 1 <= e <= X.n for e in cyc):
        raise OutOfRange(f"cycle {cyc} does not fit a {X.n}x{X.n} matrix")
    A = X.entries
    with np.errstate(divide="ignore"):
        lhs = math.fsum(np.log(np.abs([A[a - 1, b - 1] for a, b in cyc.arcs()])).tolist())
        rhs = math.fsum(np.log(np.abs([A[a - 1, a - 1] for a in cyc])).tolist())
    if lhs == -math.inf or lhs <= rhs + rel_tol:
        return True
    return math.exp(lhs) <= math.exp(rhs) + rel_tol * X.scale ** len(cyc)


def _parse_entry(tok: str) -> complex:
    if tok.endswith("i"):
        tok = tok[:-1] + "j"
    try:
        z = complex(tok)
    except ValueError as exc:
        raise MalformedInput(f"bad matrix entry {tok!r}") from exc
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise MalformedInput(f"non-finite matrix entry {tok!r}")
    return z


def parse_matrix(text: str) -> ComplexMatrix:
    """Read the text format: a line with ``n`` then ``n`` rows of ``n`` entries.

    Entries are real literals or ``a+bi`` / ``a-bi``.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedInput("empty matrix document")
    try:
        n = int(lines[0].strip())
    except ValueError as exc:
        raise MalformedInput(f"first line must be the dimension, got {lines[0]!r}") from exc
    if n < 0 or len(lines) != n + 1:
        raise MalformedInput(f"expected {n} rows after the dimension line, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != n:
            raise MalformedInput(f"row has {len(toks)} entries, expected {n}")
        rows.append([_parse_entry(t) for t in toks])
    return ComplexMatrix(np.array(rows, dtype=np.complex128).reshape(n, n))


def _format_entry(z: complex) -> str:
    re_part = repr(float(z.real))
    if z.imag == 0:
        return re_part
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{re_part}{sign}{abs(float(z.imag))!r}i"


def format_matrix(X: ComplexMatrix) -> str:
    lines = [str(X.n)]
    lines.extend(" ".join(_format_entry(complex(z)) for z in row) for row in X.entries)
    return "\n".join(lines) + "\n"
