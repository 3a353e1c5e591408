"""Numerical oracles for induced p-norms of circulants.

``estimate_norm_p`` is a Boyd/Higham style dual power iteration run from
several starting vectors at once; ``brute_force_norm_p`` searches the unit
sphere directly and is only meant for n <= 4.  Both return values attained
by an explicit vector, so they are always lower bounds on the true norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .circulant import Circulant, TwoParamCirculant, dense, matvec
from .norms import conjugate_exponent, vector_norm

__all__ = [
    "EstimatorOptions",
    "EstimateReport",
    "CheckReport",
    "estimate_norm_p",
    "brute_force_norm_p",
    "check_monotonicity",
    "check_duality",
    "scale_of",
]

# below this size a dense product is cheaper than an FFT round trip
_DENSE_APPLY_MAX = 128


@dataclass(frozen=True)
class EstimatorOptions:
    restarts: int = 16
    max_iterations: int = 10000
    tolerance: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class EstimateReport:
    value: float
    witness: np.ndarray = field(repr=False)
    iterations_used: int
    converged: bool
    restarts_run: int


def scale_of(c) -> float:
    """Comparison scale ``1 + |a| + n b`` (or ``1 + sum |a_j|`` for a general row)."""
    if isinstance(c, TwoParamCirculant):
        return 1.0 + abs(c.a) + c.n * c.b
    return 1.0 + float(np.sum(np.abs(c.first_row)))


def _circulant(c) -> Circulant:
    return c.to_circulant()


def _operator(c: Circulant):
    """Return ``(apply, apply_transpose)`` acting on ``(n, m)`` blocks."""
    row = np.asarray(c.first_row)
    row_t = np.concatenate([row[:1], row[:0:-1]])
    ct = Circulant(tuple(row_t))
    if c.n <= _DENSE_APPLY_MAX:
        A = dense(c)
        return (lambda X: A @ X), (lambda X: A.T @ X)
    return (lambda X: matvec(c, X)), (lambda X: matvec(ct, X))


def _pnorm_cols(X, p):
    R = np.abs(X)
    M = R.max(axis=0)
    safe = M + (M == 0)
    R /= safe
    return M * np.sum(R**p, axis=0) ** (1.0 / p)


def _dual_map(X, p):
    """Column-wise ``sign(x) |x|^(p-1)``, scaled by the column max to avoid overflow."""
    R = np.abs(X)
    M = R.max(axis=0)
    R /= M + (M == 0)
    R **= p - 1.0
    return np.copysign(R, X)


def _block_sizes(n):
    if n <= 64:
        return list(range(1, n))
    sizes = {int(round(s)) for s in np.geomspace(1, n - 1, 48)}
    return sorted(sizes | {1, 2, 3, n // 2})


def _starts(n, p, opts):
    """Deterministic starts first (all-ones, ``[-1, 1, 0, ...]``, block
    indicators ``1_[0, k)``), then the seeded random ones."""
    cols = [np.ones(n)]
    if n >= 2:
        w = np.zeros(n)
        w[0], w[1] = -1.0, 1.0
        cols.append(w)
    for k in _block_sizes(n):
        e = np.zeros(n)
        e[:k] = 1.0
        cols.append(e)
    seeds = np.random.SeedSequence(opts.seed).spawn(opts.restarts)
    for ss in seeds:
        cols.append(np.random.default_rng(ss).uniform(-1.0, 1.0, n))
    X = np.stack(cols, axis=1)
    return X / _pnorm_cols(X, p)


def _exact_endpoint(c: Circulant, p) -> EstimateReport:
    row = np.asarray(c.first_row)
    n = row.size
    if p == 1:
        # every column holds the same entries
        x = np.zeros(n)
        x[0] = 1.0
    else:
        # sign pattern of row 0 attains the max row sum
        x = np.where(row < 0, -1.0, 1.0)
    value = vector_norm(matvec(c, x), p)
    return EstimateReport(value, x, 0, True, 1)


def estimate_norm_p(c, p, opts: EstimatorOptions | None = None) -> EstimateReport:
    """Estimate ``||A||_p`` by dual power iteration with restarts.

    Each start ``x`` (unit p-norm) is updated by
    ``x <- dual_q(A^T dual_p(A x))`` normalized back to unit p-norm, which
    never decreases ``||A x||_p``.  Starts are the all-ones vector,
    ``[-1, 1, 0, ...]``, the block indicators ``1_[0, k)`` and
    ``opts.restarts`` seeded random vectors, all iterated together as the
    columns of one block.  The best one wins, ties going to the earliest
    start.  Every start stops on its own once the relative change of
    ``||A x||_p`` drops below ``opts.tolerance``.

    ``p = 1`` and ``p = inf`` are handled exactly (column / row sums).
    """
    opts = opts or EstimatorOptions()
    c = _circulant(c)
    p = float(p)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p == 1 or math.isinf(p):
        return _exact_endpoint(c, p)

    q = conjugate_exponent(p)
    apply, apply_t = _operator(c)
    X = _starts(c.n, p, opts)
    m = X.shape[1]
    Y = apply(X)
    vals = _pnorm_cols(Y, p)
    done = np.zeros(m, dtype=bool)
    tiny = np.finfo(float).tiny
    iters = 0
    while iters < opts.max_iterations and not done.all():
        iters += 1
        Xn = _dual_map(apply_t(_dual_map(Y, p)), q)
        norms = _pnorm_cols(Xn, p)
        # a zero column means A x = 0; keep x, it cannot improve
        Xn /= np.where(norms > 0, norms, 1.0)
        Yn = apply(Xn)
        new = _pnorm_cols(Yn, p)
        # only accept non-decreasing steps; rounding can make a step worse
        step = (new >= vals) & (norms > 0) & ~done
        done |= ~step | (new - vals <= opts.tolerance * np.maximum(new, tiny))
        X = np.where(step, Xn, X)
        Y = np.where(step, Yn, Y)
        vals = np.where(step, new, vals)

    best = int(np.argmax(vals))
    x = X[:, best].copy()
    value = vector_norm(apply(x[:, None])[:, 0], p)
    return EstimateReport(value, x, iters, bool(done[best]), m)


def _ratio_rows(c: Circulant, X, p):
    """``||A x||_p / ||x||_p`` for each row ``x`` of ``X``."""
    A = dense(c)
    return _pnorm_rows(X @ A.T, p) / _pnorm_rows(X, p)


def _pnorm_rows(X, p):
    return _pnorm_cols(X.T, p)


def _sphere_point(angles, n):
    """Hyperspherical coordinates to a point of the unit 2-sphere in R^n."""
    x = np.ones(n)
    for i, t in enumerate(angles):
        x[i] *= math.cos(t)
        x[i + 1:] *= math.sin(t)
    return x


def brute_force_norm_p(c, p, resolution: int = 10_000, seed: int = 0) -> float:
    """Search the unit sphere for the largest ``||A x||_p / ||x||_p`` (n <= 4).

    n = 2 scans ``resolution`` angles on a half circle, n = 3 a
    ``sqrt(resolution)``-per-axis grid over a hemisphere, n = 4 takes
    ``resolution`` random directions.  The best few candidates are then
    polished with Nelder-Mead in angle space.  The ratio is scale
    invariant, so points need not lie on the p-sphere.
    """
    c = _circulant(c)
    n = c.n
    if n > 4:
        raise ValueError(f"brute force is limited to n <= 4, got n = {n}")
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    p = float(p)
    if n == 1:
        return abs(c.first_row[0])

    if n == 2:
        # 4k+1 points so multiples of pi/4 are on the grid
        k = max(1, (resolution - 1) // 4)
        t = np.linspace(0.0, math.pi, 4 * k + 1)
        angles = t[:, None]
    elif n == 3:
        k = max(1, (int(math.isqrt(resolution)) - 1) // 4)
        th = np.linspace(0.0, math.pi / 2, 2 * k + 1)
        ph = np.linspace(0.0, 2 * math.pi, 8 * k + 1)
        T, P = np.meshgrid(th, ph, indexing="ij")
        angles = np.column_stack([T.ravel(), P.ravel()])
    else:
        rng = np.random.default_rng(seed)
        G = rng.standard_normal((resolution, n))
        G /= np.linalg.norm(G, axis=1, keepdims=True)
        angles = _to_angles(G)

    X = np.array([_sphere_point(a, n) for a in angles]) if n > 2 else np.column_stack(
        [np.cos(angles[:, 0]), np.sin(angles[:, 0])]
    )
    ratios = _ratio_rows(c, X, p)
    best = float(ratios.max())

    def neg(a):
        x = _sphere_point(a, n)
        return -float(_ratio_rows(c, x[None, :], p)[0])

    for i in np.argsort(ratios)[::-1][:5]:
        res = optimize.minimize(neg, angles[i], method="Nelder-Mead",
                                options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
        best = max(best, -float(res.fun))
    return best


def _to_angles(X):
    """Inverse of :func:`_sphere_point` for rows of ``X`` (unit 2-norm)."""
    n = X.shape[1]
    out = np.empty((X.shape[0], n - 1))
    for i in range(n - 1):
        tail = np.linalg.norm(X[:, i + 1:], axis=1)
        out[:, i] = np.arctan2(tail, X[:, i])
    # last angle carries the sign of the final coordinate
    out[:, -1] = np.arctan2(X[:, -1], X[:, -2])
    return out


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    p_values: tuple[float, ...]
    estimates: tuple[float, ...]
    detail: str = ""


def check_monotonicity(c, p_grid, opts: EstimatorOptions | None = None,
                       slack: float = 5e-7) -> CheckReport:
    """Estimates along an ascending grid of ``p >= 2`` must not decrease
    by more than ``slack * scale``."""
    grid = [float(p) for p in p_grid]
    if any(p < 2 for p in grid) or any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("p_grid must be ascending with every p >= 2")
    ests = [estimate_norm_p(c, p, opts).value for p in grid]
    tol = slack * scale_of(c)
    drops = [(grid[i], grid[i + 1], ests[i] - ests[i + 1])
             for i in range(len(grid) - 1) if ests[i + 1] < ests[i] - tol]
    detail = "; ".join(f"p {a:g}->{b:g} dropped {d:.3e}" for a, b, d in drops)
    return CheckReport(not drops, tuple(grid), tuple(ests), detail)


def check_duality(c, p, opts: EstimatorOptions | None = None,
                  slack: float = 1e-5) -> CheckReport:
    """Estimates at ``p`` and its conjugate must agree within ``slack * scale``."""
    if not c.is_symmetric():
        raise ValueError("duality check needs a symmetric circulant")
    p = float(p)
    if not 2 < p < math.inf:
        raise ValueError("duality check needs finite p > 2")
    q = conjugate_exponent(p)
    ep, eq = estimate_norm_p(c, p, opts).value, estimate_norm_p(c, q, opts).value
    gap = abs(ep - eq)
    ok = gap <= slack * scale_of(c)
    return CheckReport(ok, (p, q), (ep, eq), "" if ok else f"gap {gap:.3e}")
