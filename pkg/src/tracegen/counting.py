"""Exact counting and the scalar numerics built on the clique polynomial.

The alternating clique-size polynomial inverts the growth series of the
monoid, so trace counts by length satisfy a short linear recurrence with the
polynomial's coefficients.  Everything exact is integer arithmetic; the only
floating point lives in root finding and in the Boltzmann tuning equation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceFailure, NoRootFound, ParameterOutOfRange

ROOT_SCAN_STEP = 1.0 / 1024.0


@dataclass(frozen=True)
class MobiusPolynomial:
    """Exact integer coefficients, index = degree; coefficient 0 is 1."""

    coefficients: tuple

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def alphabet_size(self):
        return -self.coefficients[1]

    def __call__(self, x):
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self, x):
        acc = 0.0
        for j in range(self.degree, 0, -1):
            acc = acc * x + j * self.coefficients[j]
        return acc


def mobius_polynomial(family):
    """Alternating count of cliques by size."""
    counts = np.bincount(family.sizes, minlength=family.max_clique_size + 1)
    coeffs = tuple(int(c) if j % 2 == 0 else -int(c) for j, c in enumerate(counts))
    return MobiusPolynomial(coeffs)


@dataclass(frozen=True)
class GrowthTable:
    """Exact trace counts by length, 0..n."""

    values: tuple

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)


def growth_coefficients(mu, n):
    """Counts lam(0..n) from the recurrence lam(m) = -sum_j mu_j lam(m-j).

    Plain Python integers: the counts grow geometrically and leave 64 bits
    quickly.
    """
    if n < 0:
        raise ParameterOutOfRange("n must be non-negative")
    coeffs = mu.coefficients
    lam = [1]
    for m in range(1, n + 1):
        acc = 0
        for j in range(1, min(mu.degree, m) + 1):
            acc -= coeffs[j] * lam[m - j]
        lam.append(acc)
    return GrowthTable(tuple(lam))


@lru_cache(maxsize=None)
def _principal_root_cached(coefficients, tol):
    mu = MobiusPolynomial(coefficients)
    if mu.alphabet_size == 1:
        return 1.0
    lo = 0.0
    hi = None
    x = 0.0
    while x < 1.0:
        nxt = min(x + ROOT_SCAN_STEP, 1.0)
        if mu(nxt) <= 0.0:
            lo, hi = x, nxt
            break
        x = nxt
    if hi is None:
        raise NoRootFound("no sign change of the clique polynomial in (0, 1]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mu(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    slope = mu.derivative(root)
    assert slope < 0.0, "tangent principal root; simple-root assumption violated"
    # one guarded polish step
    cand = root - mu(root) / slope
    if lo - tol <= cand <= hi + tol:
        root = cand
    assert abs(mu(root)) <= 10.0 * tol * abs(mu.derivative(root))
    return root


def principal_root(mu, tol=1e-14):
    """Smallest positive root of the clique polynomial, in (0, 1].

    Grid scan for the first sign change (the polynomial starts at 1), then
    bisection, then one guarded Newton step.  A one-letter alphabet returns
    exactly 1.
    """
    return _principal_root_cached(mu.coefficients, tol)


def _expected(mu, p):
    return -p * mu.derivative(p) / mu(p)


def expected_size(mu, p, p0=None):
    """Mean trace length under the length-biased law of parameter ``p``."""
    if p0 is None:
        p0 = principal_root(mu)
    if not 0.0 < p < p0:
        raise ParameterOutOfRange(f"p must lie strictly inside (0, {p0}), got {p}")
    return _expected(mu, p)


def optimal_boltzmann_parameter(mu, k, tol=1e-9, max_iter=200, p0=None):
    """Parameter at which the expected sampled length equals ``k``.

    Solves k*mu(p) + p*mu'(p) = 0 by bisection on the residual
    expected_size(p) - k, which is increasing in p.  Monotonicity is probed
    on a grid first; if it ever failed, the bracket would fall back to the
    first grid sign change.
    """
    if k < 1:
        raise ParameterOutOfRange("k must be at least 1")
    if p0 is None:
        p0 = principal_root(mu)

    def residual(q):
        return _expected(mu, q) - k

    lo = p0 * 1e-12
    hi = p0 * (1.0 - 1e-9)
    grid = [p0 * i / 65.0 for i in range(1, 65)]
    vals = [_expected(mu, q) for q in grid]
    if any(b < a - 1e-9 for a, b in zip(vals, vals[1:])):
        bracket = None
        pts = [lo] + grid + [hi]
        for a, b in zip(pts, pts[1:]):
            if residual(a) <= 0.0 <= residual(b):
                bracket = (a, b)
                break
        if bracket is None:
            raise ConvergenceFailure("no bracketing interval for the size equation")
        lo, hi = bracket
    if residual(lo) > 0.0 or residual(hi) < 0.0:
        raise ConvergenceFailure("size equation not bracketed in (0, p0)")

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        r = residual(mid)
        if abs(r) <= tol * k:
            return mid
        if r < 0.0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceFailure(
        f"size equation for k={k} not solved to {tol} in {max_iter} bisection steps"
    )
