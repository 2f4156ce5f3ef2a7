"""Brute-force ground truth for small instances, plus the chi-square harness.

Everything here is deliberately naive: exhaustive walks of the clique
automaton, word-level closures under adjacent swaps, plain averages.  Fast
code elsewhere is tested against these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, InsufficientSamples
from .traces import Trace, normalize_word

DEFAULT_ENUM_BUDGET = 10 ** 7


class TraceSet:
    """All traces of one fixed length, canonically ordered and indexed."""

    __slots__ = ("pair", "k", "traces", "index")

    def __init__(self, pair, k, traces):
        self.pair = pair
        self.k = k
        self.traces = tuple(sorted(traces, key=lambda t: t.layers))
        self.index = {t: i for i, t in enumerate(self.traces)}

    def __len__(self):
        return len(self.traces)

    def __iter__(self):
        return iter(self.traces)

    def __getitem__(self, i):
        return self.traces[i]


def enumerate_Mk(family, k, budget=DEFAULT_ENUM_BUDGET):
    """Every trace of length exactly ``k``, by walking the clique automaton."""
    pair = family.pair
    adm = family.admissibility
    sizes = family.sizes
    masks = family.masks
    out = []

    def extend(prev, layers, remaining):
        if remaining == 0:
            out.append(Trace(pair, tuple(layers)))
            if len(out) > budget:
                raise BudgetExceeded(f"more than {budget} traces of length {k}")
            return
        allowed = range(1, len(masks)) if prev is None else np.flatnonzero(adm[prev])
        for idx in allowed:
            idx = int(idx)
            if idx == 0 or sizes[idx] > remaining:
                continue
            layers.append(masks[idx])
            extend(idx, layers, remaining - int(sizes[idx]))
            layers.pop()

    extend(None, [], k)
    return TraceSet(pair, k, out)


def enumerate_Mk_by_words(pair, k, budget=DEFAULT_ENUM_BUDGET):
    """Cross-check route: normalize all ``|A|^k`` words and deduplicate."""
    if pair.size ** k > budget:
        raise BudgetExceeded(f"{pair.size}^{k} words exceed the {budget} budget")
    seen = set()
    word = [0] * k

    def rec(pos):
        if pos == k:
            seen.add(normalize_word((pair.letters[i] for i in word), pair))
            return
        for i in range(pair.size):
            word[pos] = i
            rec(pos + 1)

    rec(0)
    return TraceSet(pair, k, seen)


def congruence_closure(word, pair, max_len=8):
    """All words reachable by swapping adjacent independent letters."""
    start = tuple(word)
    if len(start) > max_len:
        raise BudgetExceeded(f"word longer than the closure cap {max_len}")
    idx = [pair.letter_index(a) for a in start]
    seen = {start}
    stack = [tuple(idx)]
    visited = {tuple(idx)}
    while stack:
        w = stack.pop()
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a != b and pair.independent(a, b):
                swapped = w[:i] + (b, a) + w[i + 2:]
                if swapped not in visited:
                    visited.add(swapped)
                    stack.append(swapped)
                    seen.add(tuple(pair.letters[j] for j in swapped))
    return seen


def exact_uniform_expectation(family, k, phi, budget=DEFAULT_ENUM_BUDGET):
    """Plain average of ``phi`` over every trace of length ``k``."""
    ts = enumerate_Mk(family, k, budget=budget)
    return sum(phi(t) for t in ts) / len(ts)


# -- chi-square goodness of fit --------------------------------------------------

_GAMMA_EPS = 1e-15
_GAMMA_ITMAX = 10_000


def _gamma_p_series(a, x):
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_GAMMA_ITMAX):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a, x):
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    frac = d
    for i in range(1, _GAMMA_ITMAX):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        frac *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return frac * math.exp(-x + a * math.log(x) - math.lgamma(a))


def regularized_gamma_q(a, x):
    """Upper regularized incomplete gamma Q(a, x), series plus Lentz fraction."""
    if x < 0.0 or a <= 0.0:
        raise ValueError("need x >= 0 and a > 0")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def chi_square_survival(stat, dof):
    """P(X >= stat) for a chi-square variable with ``dof`` degrees of freedom."""
    return regularized_gamma_q(0.5 * dof, 0.5 * stat)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    pvalue: float
    passed: bool


def chi_square_uniformity(counts, significance=0.001):
    """Pearson test of the counts against the uniform law over their cells."""
    counts = np.asarray(counts, dtype=float)
    m = len(counts)
    total = float(counts.sum())
    expected = total / m
    if expected < 5.0:
        raise InsufficientSamples(
            f"expected count per cell is {expected:.2f}; need at least 5"
        )
    stat = float(((counts - expected) ** 2 / expected).sum())
    pvalue = chi_square_survival(stat, m - 1)
    return ChiSquareResult(statistic=stat, dof=m - 1, pvalue=pvalue, passed=pvalue >= significance)
