"""Randomized self-checks behind ``circnorm verify``.

Each suite draws its own cases from a seeded generator, runs one property
per case and records the parameters of every failing case so it can be
replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import circulant as circ
from . import estimator as est
from . import norms

SANDWICH_P = (2.5, 3.0, 4.0, 8.0)
EXACT_P = (2.0, 2.5, 3.0, 4.0, 8.0, 16.0)
MONOTONE_GRID = (2.0, 2.5, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0)
DUAL_P = (3.0, 4.0, 8.0)


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    passed: int = 0
    failures: list[dict] = field(default_factory=list)

    def record(self, ok: bool, **case):
        self.total += 1
        if ok:
            self.passed += 1
        else:
            self.failures.append(case)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def run(self, case_fn, items):
        """Call ``case_fn(item)`` for each item; an exception counts as a failure."""
        for item in items:
            try:
                ok, info = case_fn(item)
            except Exception as exc:  # noqa: BLE001 - reported, not raised
                ok, info = False, {"case": repr(item), "error": f"{type(exc).__name__}: {exc}"}
            self.record(bool(ok), **info)
        return self


def _rel_close(x, y, rel, scale):
    return abs(x - y) <= rel * scale


def random_two_param(rng, max_n, sign=None, max_coeff=10.0, min_n=1):
    """Random ``A(n, a, b)``; ``sign`` forces the sign of ``a`` (``-1``/``+1``).

    About one case in six with ``a < 0`` and ``n >= 3`` sits exactly on the
    regime boundary ``2|a| = (n-2) b`` (integer ``b`` keeps it exact).
    """
    n = int(rng.integers(min_n, max_n + 1))
    if sign is None:
        sign = -1 if rng.random() < 0.5 else 1
    if sign < 0 and n >= 3 and rng.random() < 1 / 6:
        b = float(rng.integers(1, 6))
        return circ.TwoParamCirculant(n, -(n - 2) * b / 2, b)
    a = float(rng.uniform(0, max_coeff))
    b = float(rng.uniform(0, max_coeff / 2))
    if sign < 0:
        a = -a if a > 0 else -1.0
    return circ.TwoParamCirculant(n, a, b)


def random_circulant(rng, max_n, low=-10.0, high=10.0):
    n = int(rng.integers(1, max_n + 1))
    return circ.Circulant(tuple(rng.uniform(low, high, n)))


def suite_eigen(rng, cases, max_n):
    def check(c):
        n, amax = c.n, max(np.max(np.abs(c.first_row)), 1e-300)
        F = circ.dft_matrix(n)
        diag = np.diag(F.entries @ circ.dense(c) @ F.adjoint)
        direct = circ.eigenvalues(c, "direct").eigenvalues
        fast = circ.eigenvalues(c, "fft").eigenvalues
        err = max(np.max(np.abs(direct - diag)), np.max(np.abs(fast - direct)))
        return err <= 1e-9 * n * amax, {"first_row": list(c.first_row), "err": float(err)}

    items = [random_circulant(rng, min(max_n, 64)) for _ in range(cases)]
    return SuiteResult("eigen").run(check, items)


def suite_factorization(rng, cases, max_n):
    def check(c):
        n = c.n
        r = circ.verify_factorization(c)
        bound = 1e-10 * (1 + np.max(np.abs(c.first_row))) * n
        P = circ.shift_matrix(n)
        cyc = np.array_equal(np.linalg.matrix_power(P, n), np.eye(n, dtype=P.dtype))
        return r.max() < bound and cyc, {"n": n, "residuals": [r.shift, r.shift_sum, r.spectral]}

    # every size up to max_n first, then random sizes
    sizes = list(range(1, max_n + 1))[:cases]
    sizes += [int(n) for n in rng.integers(1, max_n + 1, cases - len(sizes))]
    items = [circ.Circulant(tuple(rng.uniform(-10, 10, n))) for n in sizes]
    return SuiteResult("factorization").run(check, items)


def suite_spectrum(rng, cases, max_n):
    def check(c):
        closed = np.sort(np.abs(circ.two_param_spectrum(c).eigenvalues))
        numeric = np.sort(np.abs(circ.eigenvalues(c).eigenvalues))
        ok = np.all(np.abs(closed - numeric) <= 1e-10 * (abs(c.a) + c.n * c.b + 1e-300))
        n2 = norms.exact_norm_2(c).value
        ok = ok and _rel_close(n2, circ.two_param_spectrum(c).max_abs, 1e-12, max(n2, 1e-300))
        return ok, {"n": c.n, "a": c.a, "b": c.b}

    items = [random_two_param(rng, max_n) for _ in range(cases)]
    return SuiteResult("spectrum").run(check, items)


def suite_matvec(rng, cases, max_n):
    def check(item):
        c, x = item
        ref = circ.dense(c) @ x
        err = np.max(np.abs(circ.matvec(c, x) - ref))
        return err <= 1e-10 * max(np.max(np.abs(ref)), 1.0), {"first_row": list(c.first_row)}

    items = []
    for _ in range(cases):
        c = random_circulant(rng, max_n)
        items.append((c, rng.standard_normal(c.n)))
    return SuiteResult("matvec").run(check, items)


def suite_thm3(rng, cases, max_n, opts):
    def check(item):
        c, p = item
        want = c.a + (c.n - 1) * c.b
        got = est.estimate_norm_p(c, p, opts).value
        exact = norms.norm_p(c, p).value
        ok = _rel_close(got, want, 1e-6, max(want, 1e-300)) and exact == want
        return ok, {"n": c.n, "a": c.a, "b": c.b, "p": p, "estimate": got}

    items = [(random_two_param(rng, min(max_n, 16), sign=+1), float(rng.choice(EXACT_P)))
             for _ in range(cases)]
    return SuiteResult("exact_nonneg").run(check, items)


def suite_thm2(rng, cases, max_n, opts):
    def check(c):
        want = norms.exact_norm_2(c).value
        got = est.estimate_norm_p(c, 2.0, opts).value
        ok = _rel_close(got, want, 1e-7, max(want, 1e-300))
        return ok, {"n": c.n, "a": c.a, "b": c.b, "estimate": got}

    items = [random_two_param(rng, min(max_n, 32), sign=-1) for _ in range(cases)]
    return SuiteResult("exact_2norm").run(check, items)


def suite_sandwich(rng, cases, max_n, opts):
    def check(item):
        c, p = item
        r = norms.norm_p(c, p)
        u4, u5 = norms.upper_thm4(c, p), norms.upper_thm5(c, p)
        got = est.estimate_norm_p(c, p, opts).value
        scale = est.scale_of(c)
        ok = r.lower <= got + 1e-12 * scale and got <= min(u4, u5) + 1e-8 * scale and u5 <= u4 + 1e-12
        return ok, {"n": c.n, "a": c.a, "b": c.b, "p": p, "lower": r.lower,
                    "upper": min(u4, u5), "estimate": got}

    items = [(random_two_param(rng, min(max_n, 16), sign=-1), float(rng.choice(SANDWICH_P)))
             for _ in range(cases)]
    return SuiteResult("sandwich").run(check, items)


def suite_witness(rng, cases, max_n):
    def check(item):
        c, p = item
        value, _ = norms.lambda_max_abs(c)
        alpha = -c.a
        ok = True
        if c.n >= 2:
            # each vector gives its own branch value, whatever the regime
            r_ones = norms.witness_ratio(c, np.ones(c.n), p)
            e = np.zeros(c.n)
            e[:2] = (-1.0, 1.0)
            r_pair = norms.witness_ratio(c, e, p)
            s = est.scale_of(c)
            ok = (_rel_close(r_ones, abs(-alpha + (c.n - 1) * c.b), 1e-10, s)
                  and _rel_close(r_pair, alpha + c.b, 1e-10, s))
        w = norms.witness_vector(c, p)
        ok = ok and _rel_close(norms.witness_ratio(c, w, p), value, 1e-10, max(value, 1e-300))
        return ok, {"n": c.n, "a": c.a, "b": c.b, "p": p}

    items = [(random_two_param(rng, max_n, sign=-1), float(rng.choice(SANDWICH_P)))
             for _ in range(cases)]
    return SuiteResult("witness").run(check, items)


def suite_duality(rng, cases, max_n, opts):
    def check(item):
        c, p = item
        rep = est.check_duality(c, p, opts)
        return rep.passed, {"n": c.n, "a": c.a, "b": c.b, "p": p, "estimates": list(rep.estimates)}

    items = [(random_two_param(rng, min(max_n, 16), min_n=min(2, max_n)), float(rng.choice(DUAL_P)))
             for _ in range(cases)]
    return SuiteResult("duality").run(check, items)


def suite_monotonicity(rng, cases, max_n, opts):
    def check(c):
        rep = est.check_monotonicity(c, MONOTONE_GRID, opts)
        return rep.passed, {"n": c.n, "a": c.a, "b": c.b, "estimates": list(rep.estimates)}

    items = [random_two_param(rng, min(max_n, 16)) for _ in range(cases)]
    return SuiteResult("monotonicity").run(check, items)


def run_all(max_n=16, seed=0, cases=200, opts=None):
    """Run every suite; multi-estimate suites (duality, monotonicity) use a
    quarter of ``cases`` to keep the run short."""
    if not 1 <= max_n <= 256:
        raise ValueError("max_n must be in [1, 256]")
    if cases < 1:
        raise ValueError("cases must be >= 1")
    opts = opts or est.EstimatorOptions(seed=seed)
    heavy = max(1, cases // 4)
    streams = np.random.SeedSequence(seed).spawn(10)
    rngs = [np.random.default_rng(s) for s in streams]
    return [
        suite_eigen(rngs[0], cases, max_n),
        suite_factorization(rngs[1], cases, max_n),
        suite_spectrum(rngs[2], cases, max_n),
        suite_matvec(rngs[3], cases, max_n),
        suite_thm3(rngs[4], cases, max_n, opts),
        suite_thm2(rngs[5], cases, max_n, opts),
        suite_sandwich(rngs[6], cases, max_n, opts),
        suite_witness(rngs[7], cases, max_n),
        suite_duality(rngs[8], heavy, max_n, opts),
        suite_monotonicity(rngs[9], heavy, max_n, opts),
    ]
