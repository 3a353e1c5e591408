"""Circulant matrices, their DFT diagonalization and fast products.

A circulant is stored by its first row ``a_1 ... a_n``; row ``r`` of the
dense matrix is the cyclic right shift of row ``r - 1``, so entry ``(r, j)``
is ``first_row[(j - r) mod n]``.

With ``w = exp(2 pi i / n)`` and the unitary DFT matrix
``F[j, k] = w**(-j k) / sqrt(n)``, every circulant factors as
``A = F* diag(lam) F`` where ``lam[k] = sum_j a_{j+1} w**(j k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DENSE_LIMIT",
    "DIRECT_EIG_LIMIT",
    "Circulant",
    "TwoParamCirculant",
    "Spectrum",
    "UnitaryFactor",
    "FactorizationResiduals",
    "make_two_param",
    "eigenvalues",
    "eigenvalues_direct",
    "two_param_spectrum",
    "matvec",
    "matvec_direct",
    "dense",
    "dft_matrix",
    "shift_matrix",
    "verify_factorization",
]

DENSE_LIMIT = 4096
DIRECT_EIG_LIMIT = 64


@dataclass(frozen=True)
class Circulant:
    """Real circulant matrix given by its first row."""

    first_row: tuple[float, ...]

    def __post_init__(self):
        row = tuple(float(v) for v in self.first_row)
        if len(row) == 0:
            raise ValueError("a circulant needs at least one entry")
        if not all(math.isfinite(v) for v in row):
            raise ValueError("first_row entries must be finite")
        object.__setattr__(self, "first_row", row)

    @property
    def n(self) -> int:
        return len(self.first_row)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.first_row, dtype=float)

    def is_symmetric(self) -> bool:
        # A^T has first row a[(-j) mod n]; symmetric iff a[1:] is a palindrome.
        tail = self.first_row[1:]
        return tail == tail[::-1]

    def to_circulant(self) -> "Circulant":
        return self


@dataclass(frozen=True)
class TwoParamCirculant:
    """``A(n, a, b)``: diagonal ``a`` (any sign), off-diagonal ``b >= 0``."""

    n: int
    a: float
    b: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError("a and b must be finite")
        if b < 0:
            raise ValueError(f"off-diagonal value b must be >= 0, got {b}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def first_row(self) -> tuple[float, ...]:
        return (self.a,) + (self.b,) * (self.n - 1)

    def to_circulant(self) -> Circulant:
        return Circulant(self.first_row)

    def is_symmetric(self) -> bool:
        return True

    def as_array(self) -> np.ndarray:
        return np.asarray(self.first_row, dtype=float)


def make_two_param(n: int, a: float, b: float) -> TwoParamCirculant:
    return TwoParamCirculant(n, a, b)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues ``lam_0 ... lam_{n-1}`` in DFT order."""

    eigenvalues: np.ndarray = field(repr=False)

    def __post_init__(self):
        ev = np.array(self.eigenvalues, dtype=complex)
        ev.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    def __len__(self):
        return len(self.eigenvalues)


def _as_circulant(c) -> Circulant:
    return c.to_circulant() if isinstance(c, TwoParamCirculant) else c


def eigenvalues_direct(c) -> Spectrum:
    """Eigenvalues by summing ``a_{j+1} w**(j k)`` term by term (O(n^2))."""
    a = _as_circulant(c).as_array()
    n = a.size
    jk = np.outer(np.arange(n), np.arange(n)) % n
    roots = np.exp(2j * np.pi * jk / n)
    return Spectrum(roots.T @ a)


def eigenvalues(c, method: str = "auto") -> Spectrum:
    """Spectrum of a circulant.

    ``method`` is ``"direct"`` (explicit root-of-unity sums), ``"fft"`` or
    ``"auto"``, which sums directly up to ``DIRECT_EIG_LIMIT`` and uses the
    FFT beyond.  For real rows ``sum_j a_j w**(jk)`` is ``conj(fft(a))[k]``.
    """
    if method == "auto":
        method = "direct" if _as_circulant(c).n <= DIRECT_EIG_LIMIT else "fft"
    if method == "direct":
        return eigenvalues_direct(c)
    if method == "fft":
        return Spectrum(np.conj(np.fft.fft(_as_circulant(c).as_array())))
    raise ValueError(f"unknown method {method!r}")


def two_param_spectrum(c: TwoParamCirculant) -> Spectrum:
    """Closed-form spectrum of ``A(n, a, b)``: ``a + (n-1) b`` then ``a - b`` repeated."""
    ev = np.full(c.n, c.a - c.b, dtype=complex)
    ev[0] = c.a + (c.n - 1) * c.b
    return Spectrum(ev)


def matvec_direct(c, x) -> np.ndarray:
    """``A @ x`` by explicit O(n^2) summation, without forming ``A``."""
    a = _as_circulant(c).as_array()
    x = _check_vector(a.size, x)
    n = a.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return (a[idx] * x[None, :]).sum(axis=1)


def matvec(c, x) -> np.ndarray:
    """Fast circulant product ``F* (lam * (F x))`` in O(n log n).

    ``x`` may also be an ``(n, m)`` block; every column is multiplied.
    numpy's FFT handles every length (including large primes) in
    O(n log n), so there is no separate fallback for awkward ``n``.
    """
    a = _as_circulant(c).as_array()
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2) or x.shape[0] != a.size:
        raise ValueError(f"expected leading dimension {a.size}, got shape {x.shape}")
    lam = np.conj(np.fft.rfft(a))
    if x.ndim == 2:
        lam = lam[:, None]
    return np.fft.irfft(lam * np.fft.rfft(x, axis=0), n=a.size, axis=0)


def _check_vector(n, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"expected a vector of length {n}, got shape {x.shape}")
    return x


def dense(c) -> np.ndarray:
    a = _as_circulant(c).as_array()
    n = a.size
    if n > DENSE_LIMIT:
        raise ValueError(f"refusing to materialize a {n}x{n} matrix (limit {DENSE_LIMIT})")
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return a[idx]


@dataclass(frozen=True)
class UnitaryFactor:
    """The unitary DFT matrix ``F``; ``adjoint`` gives ``F*``."""

    n: int
    entries: np.ndarray = field(repr=False)

    @property
    def adjoint(self) -> np.ndarray:
        return self.entries.conj().T

    def unitarity_residual(self) -> float:
        eye = np.eye(self.n)
        return float(np.max(np.abs(self.entries @ self.adjoint - eye)))


def dft_matrix(n: int) -> UnitaryFactor:
    if n < 1:
        raise ValueError("n must be >= 1")
    jk = np.outer(np.arange(n), np.arange(n)) % n
    entries = np.exp(-2j * np.pi * jk / n) / math.sqrt(n)
    entries.setflags(write=False)
    return UnitaryFactor(n, entries)


def shift_matrix(n: int) -> np.ndarray:
    """Cyclic shift ``P`` with ones on the superdiagonal and at ``(n-1, 0)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.roll(np.eye(n, dtype=np.int64), 1, axis=1)


@dataclass(frozen=True)
class FactorizationResiduals:
    shift: float
    shift_sum: float
    spectral: float

    def max(self) -> float:
        return max(self.shift, self.shift_sum, self.spectral)


def verify_factorization(c) -> FactorizationResiduals:
    """Max-entry residuals of ``P = F* W F``, ``A = sum a_{j+1} P^j`` and ``A = F* L F``.

    ``W = diag(w**k)`` and ``L`` is the diagonal of eigenvalues.  Every term is
    formed with explicit dense arithmetic.
    """
    c = _as_circulant(c)
    n = c.n
    if n > DENSE_LIMIT:
        raise ValueError(f"n = {n} exceeds dense limit {DENSE_LIMIT}")
    F = dft_matrix(n)
    Fs = F.adjoint
    A = dense(c)
    P = shift_matrix(n)
    omega = np.exp(2j * np.pi * np.arange(n) / n)

    shift_res = np.max(np.abs(P - (Fs * omega[None, :]) @ F.entries))

    power_sum = np.zeros((n, n))
    Pj = np.eye(n, dtype=np.int64)
    for coeff in c.first_row:
        power_sum += coeff * Pj
        Pj = np.roll(Pj, 1, axis=1)  # Pj @ P
    sum_res = np.max(np.abs(A - power_sum))

    lam = eigenvalues(c).eigenvalues
    spec_res = np.max(np.abs(A - (Fs * lam[None, :]) @ F.entries))
    return FactorizationResiduals(float(shift_res), float(sum_res), float(spec_res))
