"""Closed-form induced p-norms and certified bounds for ``A(n, a, b)``.

Exponents are plain floats in ``[1, inf]``; ``math.inf`` stands for the
max-norm.  A negative diagonal is stored as ``a < 0`` and its magnitude
``alpha = |a|`` is what the two-branch formulas below are written in.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .circulant import Circulant, TwoParamCirculant, matvec

__all__ = [
    "Regime",
    "Certificate",
    "NormResult",
    "vector_norm",
    "conjugate_exponent",
    "check_exponent",
    "norm_1_inf",
    "regime",
    "lambda_max_abs",
    "exact_norm_2",
    "exact_norm_p_nonneg",
    "general_nonneg_circulant_norm",
    "upper_thm4",
    "upper_thm5",
    "bounds_p",
    "witness_vector",
    "witness_ratio",
    "norm_p",
]


class Regime(enum.Enum):
    NONNEG = "NONNEG"  # a >= 0, single branch
    WIDE = "WIDE"  # 2|a| < (n-2) b
    NARROW = "NARROW"  # 2|a| > (n-2) b
    BOUNDARY = "BOUNDARY"  # 2|a| == (n-2) b


class Certificate(str, enum.Enum):
    INSPECTION = "INSPECTION"
    LEMMA1_CASE1 = "LEMMA1_CASE1"
    LEMMA1_CASE2 = "LEMMA1_CASE2"
    THM2_CASE1 = "THM2_CASE1"
    THM2_CASE2 = "THM2_CASE2"
    THM3 = "THM3"
    THM4 = "THM4"
    THM5 = "THM5"
    REMARK_NONNEG = "REMARK_NONNEG"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class NormResult:
    """Exact norm or certified interval ``[lower, upper]``.

    ``chain`` lists the steps that produced the result (e.g. a duality
    reflection followed by the bound that won).
    """

    kind: str
    lower: float
    upper: float
    certificate: Certificate
    witness: np.ndarray | None = field(default=None, repr=False, compare=False)
    chain: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("EXACT", "INTERVAL"):
            raise ValueError(f"bad kind {self.kind!r}")
        if self.kind == "EXACT" and self.lower != self.upper:
            raise ValueError("exact result needs lower == upper")
        if not 0 <= self.lower <= self.upper:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")

    @classmethod
    def exact(cls, value, certificate, witness=None, chain=()):
        value = float(value)
        return cls("EXACT", value, value, certificate, witness, tuple(chain) or (str(certificate),))

    @property
    def is_exact(self) -> bool:
        return self.kind == "EXACT"

    @property
    def value(self) -> float | None:
        return self.lower if self.is_exact else None


def check_exponent(p) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"exponent must satisfy 1 <= p <= inf, got {p}")
    return p


def vector_norm(y, p) -> float:
    y = np.abs(np.asarray(y, dtype=float))
    if y.size == 0:
        raise ValueError("norm of an empty vector")
    p = check_exponent(p)
    if math.isinf(p):
        return float(y.max())
    m = y.max()
    if m == 0:
        return 0.0
    # scale first so |y|^p cannot overflow for large p
    return float(m * np.sum((y / m) ** p) ** (1.0 / p))


def conjugate_exponent(p) -> float:
    p = check_exponent(p)
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    if p == 2:
        return 2.0
    return p / (p - 1.0)


def norm_1_inf(c: TwoParamCirculant) -> float:
    """The 1- and max-norm: largest absolute row (column) sum."""
    return abs(c.a) + (c.n - 1) * c.b


def regime(c: TwoParamCirculant) -> Regime:
    if c.a >= 0:
        return Regime.NONNEG
    lhs, rhs = 2 * -c.a, (c.n - 2) * c.b
    if lhs == rhs:
        return Regime.BOUNDARY
    return Regime.WIDE if lhs < rhs else Regime.NARROW


def lambda_max_abs(c: TwoParamCirculant) -> tuple[float, Regime]:
    """Largest eigenvalue magnitude of ``A(n, a, b)`` and the branch used."""
    reg = regime(c)
    if c.n == 1:
        return abs(c.a), reg
    if reg is Regime.NONNEG:
        return c.a + (c.n - 1) * c.b, reg
    alpha = -c.a
    if reg is Regime.NARROW:
        return alpha + c.b, reg
    return -alpha + (c.n - 1) * c.b, reg


def exact_norm_2(c: TwoParamCirculant) -> NormResult:
    value, reg = lambda_max_abs(c)
    if c.n == 1:
        return NormResult.exact(value, Certificate.INSPECTION, np.ones(1))
    cert = Certificate.THM2_CASE1 if reg is Regime.NONNEG else Certificate.THM2_CASE2
    witness = np.ones(c.n) if reg is Regime.NONNEG else witness_vector(c, 2.0)
    return NormResult.exact(value, cert, witness)


def exact_norm_p_nonneg(c: TwoParamCirculant, p) -> NormResult:
    """``a + (n-1) b`` for every ``p``; the all-ones vector attains it."""
    p = check_exponent(p)
    if c.a < 0:
        raise ValueError("exact_norm_p_nonneg needs a >= 0; use bounds_p")
    chain = ("DUALITY", "THM3") if p < 2 else ("THM3",)
    return NormResult.exact(c.a + (c.n - 1) * c.b, Certificate.THM3, np.ones(c.n), chain)


def general_nonneg_circulant_norm(c: Circulant, p) -> NormResult:
    check_exponent(p)
    row = np.asarray(c.first_row, dtype=float)
    if np.any(row < 0):
        raise ValueError("every first-row entry must be non-negative")
    return NormResult.exact(row.sum(), Certificate.REMARK_NONNEG, np.ones(row.size))


def upper_thm4(c: TwoParamCirculant, p) -> float:
    """``n**(1/2 - 1/p) * ||A||_2`` (2-norm to p-norm comparison)."""
    norm2, _ = lambda_max_abs(c)
    return c.n ** (0.5 - 1.0 / p) * norm2


def upper_thm5(c: TwoParamCirculant, p) -> float:
    """Interpolated ``||A||_2**(2/p) * ||A||_inf**(1 - 2/p)``."""
    norm2, _ = lambda_max_abs(c)
    t = 2.0 / p
    return norm2**t * norm_1_inf(c) ** (1.0 - t)


def bounds_p(c: TwoParamCirculant, p) -> NormResult:
    """Certified interval for ``a < 0`` and ``2 <= p < inf``.

    Lower end is the 2-norm (attained by :func:`witness_vector`); the upper
    end is the smaller of the two upper bounds, which also names the
    certificate.  At ``p == 2`` both collapse onto the exact 2-norm.
    """
    p = check_exponent(p)
    if c.a >= 0:
        raise ValueError("bounds_p needs a < 0; use exact_norm_p_nonneg")
    if p < 2 or math.isinf(p):
        raise ValueError(f"bounds_p needs 2 <= p < inf, got {p}")
    if p == 2:
        return exact_norm_2(c)
    lower, _ = lambda_max_abs(c)
    u4, u5 = upper_thm4(c, p), upper_thm5(c, p)
    cert = Certificate.THM5 if u5 <= u4 else Certificate.THM4
    # guards against last-ulp rounding pushing an upper bound under the attained lower one
    upper = max(min(u4, u5), lower)
    return NormResult("INTERVAL", lower, upper, cert, witness_vector(c, p), ("THM4", str(cert)))


def witness_vector(c: TwoParamCirculant, p=2.0) -> np.ndarray:
    """Vector whose ratio ``||Ax||_p / ||x||_p`` is the 2-norm for every ``p``.

    All-ones in the wide regime, ``[-1, 1, 0, ...]`` otherwise (including the
    boundary, where both give the same ratio).  The choice does not depend
    on ``p``.
    """
    if c.a >= 0:
        raise ValueError("witness_vector needs a < 0")
    if c.n == 1:
        return np.ones(1)
    if regime(c) is Regime.WIDE:
        return np.ones(c.n)
    x = np.zeros(c.n)
    x[0], x[1] = -1.0, 1.0
    return x


def witness_ratio(c, x, p) -> float:
    x = np.asarray(x, dtype=float)
    return vector_norm(matvec(c, x), p) / vector_norm(x, p)


def norm_p(c: TwoParamCirculant, p) -> NormResult:
    """Exact value where a closed form exists, otherwise a certified interval.

    For ``a < 0`` and ``p`` in ``(1, 2)`` the exponent is first reflected to
    its conjugate, since the matrix is symmetric.
    """
    p = check_exponent(p)
    if c.n == 1:
        return NormResult.exact(abs(c.a), Certificate.INSPECTION, np.ones(1))
    if p == 1 or math.isinf(p):
        if c.a >= 0:
            w = np.ones(c.n)
        elif p == 1:
            w = np.zeros(c.n)
            w[0] = 1.0
        else:
            # sign pattern of row 0
            w = np.ones(c.n)
            w[0] = -1.0
        return NormResult.exact(norm_1_inf(c), Certificate.INSPECTION, w)
    if c.a >= 0:
        return exact_norm_p_nonneg(c, p)
    if p == 2:
        return exact_norm_2(c)
    if p < 2:
        res = bounds_p(c, conjugate_exponent(p))
        return NormResult(res.kind, res.lower, res.upper, res.certificate, res.witness,
                          ("DUALITY",) + res.chain)
    return bounds_p(c, p)
