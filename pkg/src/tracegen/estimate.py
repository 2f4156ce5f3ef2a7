"""Uniform-average costs over fixed-length traces, by boundary sampling.

The average of a cost ``phi`` over all traces of length ``k`` equals, up to
the factor ``p0^k * lambda(k)``, the expectation under the uniform boundary
measure of the lifted cost: the sum of ``phi`` over all length-``k`` left
divisors of the first ``k`` layers.  Sampling boundary prefixes therefore
estimates both the average cost (as a ratio) and the count ``lambda(k)``
itself (from the lifted constant cost).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import ParameterOutOfRange
from .monoid import cf_admissible
from .sampling import topped_prefix_batch
from .traces import Trace, divides, parse_trace, remove_bottom


# -- divisor enumeration -------------------------------------------------------

def _iter_submasks(mask):
    """Non-empty submasks of ``mask``, largest first (standard walk)."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def _divisor_layers(layers, k, pair):
    """Yield the layer tuples of all length-``k`` left divisors of ``layers``.

    A divisor's first layer is a non-empty subset ``s`` of the bottom layer;
    peeling ``s`` off and recursing gives its remaining layers, kept only when
    ``s`` may legally precede them.  Each divisor appears exactly once since
    the split (first layer, rest) is its own normal form.
    """
    if k == 0:
        yield ()
        return
    if not layers:
        return
    for s in _iter_submasks(layers[0]):
        size = s.bit_count()
        if size > k:
            continue
        rest = remove_bottom(layers, s, pair)
        for tail in _divisor_layers(rest, k - size, pair):
            if not tail or cf_admissible(pair, s, tail[0]):
                yield (s,) + tail


def enumerate_length_k_divisors(x, k):
    """All traces ``y`` of length ``k`` with ``y <= x``, without duplicates."""
    return [Trace(x.pair, ls) for ls in _divisor_layers(x.layers, k, x.pair)]


def theta_k(x, k):
    """Count of length-``k`` left divisors, no trace objects materialized.

    Counts divisors of the residual whose first layer may follow the layer
    peeled below it; memoized on (residual, remaining, layer below).
    """
    pair = x.pair
    cache = {}

    def count(layers, j, below):
        if j == 0:
            return 1
        if not layers:
            return 0
        key = (layers, j, below)
        hit = cache.get(key)
        if hit is None:
            hit = 0
            for s in _iter_submasks(layers[0]):
                if s.bit_count() > j:
                    continue
                if below and not cf_admissible(pair, below, s):
                    continue
                hit += count(remove_bottom(layers, s, pair), j - s.bit_count(), s)
            cache[key] = hit
        return hit

    return count(x.layers, k, 0)


def phibar(phi, x, k):
    """Lifted cost: sum of ``phi`` over all length-``k`` divisors of ``x``."""
    return sum(phi(y) for y in enumerate_length_k_divisors(x, k))


# -- cost functions -------------------------------------------------------------

@dataclass(frozen=True)
class CostFunction:
    name: str
    fn: object

    def __call__(self, trace):
        return self.fn(trace)


def _indicator_prefix(u):
    def fn(y):
        return 1.0 if divides(u, y) else 0.0

    return fn


def builtin_cost(name, pair=None):
    """Resolve a builtin cost by name; ``prefix:<serialized trace>`` needs pair."""
    if name == "height":
        return CostFunction("height", lambda y: float(y.height))
    if name in ("first_layer_size", "first-layer"):
        return CostFunction("first_layer_size", lambda y: float(y.first_layer.bit_count()))
    if name in ("constant_one", "one"):
        return CostFunction("constant_one", lambda y: 1.0)
    if name.startswith("prefix:"):
        if pair is None:
            raise ValueError("prefix cost needs the monoid")
        u = parse_trace(pair, name[len("prefix:"):])
        return CostFunction(name, _indicator_prefix(u))
    raise ValueError(f"unknown cost function {name!r}")


# -- ratio estimator -------------------------------------------------------------

@dataclass
class Moments:
    """Mergeable per-sample sums for the ratio estimator."""

    n: int = 0
    s_phi: float = 0.0
    s_theta: float = 0.0
    s_phi2: float = 0.0
    s_theta2: float = 0.0
    s_cross: float = 0.0

    def add(self, phibar_value, theta_value):
        self.n += 1
        self.s_phi += phibar_value
        self.s_theta += theta_value
        self.s_phi2 += phibar_value * phibar_value
        self.s_theta2 += theta_value * theta_value
        self.s_cross += phibar_value * theta_value

    def merge(self, other):
        self.n += other.n
        self.s_phi += other.s_phi
        self.s_theta += other.s_theta
        self.s_phi2 += other.s_phi2
        self.s_theta2 += other.s_theta2
        self.s_cross += other.s_cross
        return self


@dataclass
class EstimateReport:
    """Ratio estimate of the uniform average cost, with delta-method error."""

    k: int
    p0: float
    sample_count: int
    estimate: float
    standard_error: float
    phibar_mean: float
    phibar_sd: float
    theta_mean: float
    theta_sd: float
    lambda_hat: float
    lambda_hat_se: float


def accumulate_moments(bundle, k, phi, n, rng, moments=None, batch=8192):
    """Draw ``n`` height-``k`` uniform prefixes and fold their lifted costs."""
    if moments is None:
        moments = Moments()
    pair = bundle.pair
    remaining = n
    while remaining > 0:
        take = min(batch, remaining)
        gm = topped_prefix_batch(bundle, k, take, rng)
        for row in gm:
            layers = tuple(int(m) for m in row)
            while layers and layers[-1] == 0:
                layers = layers[:-1]
            x = Trace(pair, layers)
            divisors = enumerate_length_k_divisors(x, k)
            moments.add(float(sum(phi(y) for y in divisors)), float(len(divisors)))
        remaining -= take
    return moments


def report_from_moments(moments, k, p0):
    n = moments.n
    if n < 2:
        raise ParameterOutOfRange("need at least 2 samples for an error estimate")
    m_phi = moments.s_phi / n
    m_theta = moments.s_theta / n
    var_phi = max(0.0, (moments.s_phi2 - n * m_phi * m_phi) / (n - 1))
    var_theta = max(0.0, (moments.s_theta2 - n * m_theta * m_theta) / (n - 1))
    cov = (moments.s_cross - n * m_phi * m_theta) / (n - 1)
    ratio = m_phi / m_theta
    var_ratio = (var_phi - 2.0 * ratio * cov + ratio * ratio * var_theta) / (n * m_theta * m_theta)
    scale = p0 ** (-k)
    return EstimateReport(
        k=k,
        p0=p0,
        sample_count=n,
        estimate=ratio,
        standard_error=math.sqrt(max(0.0, var_ratio)),
        phibar_mean=m_phi,
        phibar_sd=math.sqrt(var_phi),
        theta_mean=m_theta,
        theta_sd=math.sqrt(var_theta),
        lambda_hat=m_theta * scale,
        lambda_hat_se=math.sqrt(var_theta / n) * scale,
    )


def estimate_expectation(bundle, k, phi, n, rng, batch=8192):
    """Monte-Carlo estimate of the uniform average of ``phi`` over length ``k``.

    Self-normalized: mean lifted cost over mean divisor count.  Also reports
    the derived count estimate ``lambda_hat = mean(theta) / p0^k``.
    """
    if k < 1:
        raise ParameterOutOfRange("k must be at least 1")
    if n < 100:
        raise ParameterOutOfRange("n must be at least 100")
    if not bundle.irreducible:
        warnings.warn(
            "estimator on a reducible monoid: the bounded-divisor-count "
            "guarantee only holds for irreducible monoids; expect heavier "
            "tails in the lifted cost",
            stacklevel=2,
        )
    moments = accumulate_moments(bundle, k, phi, n, rng, batch=batch)
    return report_from_moments(moments, k, bundle.p0)
