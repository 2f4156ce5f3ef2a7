"""Random generation of traces and boundary prefixes.

Three regimes share one engine, the clique chain:

* at the principal root the chain never hits the empty clique and its first
  ``k`` states are a random boundary prefix;
* strictly below the root the empty clique absorbs in finite time and the
  non-empty states spell out a random finite trace whose law weights each
  trace ``x`` by ``p^{|x|}``;
* exactly-uniform length-``k`` traces come from rejection: draw below the
  root at the parameter whose mean length is ``k`` and keep length-``k``
  outcomes, which are equally likely by construction.

Reducible monoids sample each irreducible component independently at the same
parameter and recombine layers by union, which is exactly how the product
monoid stacks its heaps.

Randomness is counter-based (Philox, 4x64) keyed by ``(seed, stream_id)``:
identical sources replay identical streams and distinct stream ids give
independent streams for worker replication.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IterationCap,
    NotAtP0,
    ParameterOutOfRange,
    RejectBudgetExhausted,
)
from .traces import Trace

RNG_ALGORITHM = "philox4x64"
_MASK64 = (1 << 64) - 1
_STEP_BLOCK = 1 << 22   # cap walkers*states handled per vectorized CDF slice
_BATCH_CAP = 1 << 18
FINITE_STEP_CAP = 10 ** 8
DEFAULT_REJECT_BUDGET = 10 ** 7


@dataclass(frozen=True)
class RandomSource:
    """Deterministic stream handle: (seed, stream_id) keys a Philox generator."""

    seed: int
    stream_id: int = 0

    def generator(self):
        key = [self.seed & _MASK64, self.stream_id & _MASK64]
        return np.random.Generator(np.random.Philox(key=key))


@dataclass
class SampleOutcome:
    """One sampler result: a finite trace or a boundary prefix, plus metadata.

    ``prefix`` holds clique masks over the alphabet of the monoid that
    produced it (a component alphabet for product sampling).
    """

    p: float
    trace: Trace | None = None
    prefix: tuple | None = None
    rejections: int = 0
    stream_id: int = 0
    meta: dict = field(default_factory=dict)


def _draw_index(cum, rng):
    u = rng.random()
    return min(int(np.searchsorted(cum, u, side="right")), len(cum) - 1)


def _first_states(chain, u):
    idx = np.searchsorted(chain.h_cum, u, side="right")
    return np.minimum(idx, chain.n_states - 1).astype(np.int64)


def _step_states(chain, states, u):
    cum = chain.P_cum
    n_states = cum.shape[1]
    out = np.empty(len(states), dtype=np.int64)
    block = max(1, _STEP_BLOCK // n_states)
    for s in range(0, len(states), block):
        e = min(s + block, len(states))
        rows = cum[states[s:e]]
        out[s:e] = (rows <= u[s:e, None]).sum(axis=1)
    return np.minimum(out, n_states - 1)


# -- single-draw samplers ------------------------------------------------------

def sample_boundary_prefix(chain, k, rng):
    """First ``k`` cliques of a uniform infinite trace, as masks."""
    if not chain.at_p0:
        raise NotAtP0("boundary sampling needs the chain built at the principal root")
    masks = chain.family.masks
    out = []
    state = _draw_index(chain.h_cum, rng)
    for _ in range(k):
        out.append(masks[state])
        state = _draw_index(chain.P_cum[state], rng)
    return tuple(out[:k]) if k >= 0 else ()


def sample_finite_trace(chain, rng, step_cap=FINITE_STEP_CAP):
    """One finite trace below the root: run the chain until absorption."""
    if chain.at_p0:
        raise ParameterOutOfRange(
            "finite-trace sampling needs p strictly below the principal root"
        )
    masks = chain.family.masks
    layers = []
    state = _draw_index(chain.h_cum, rng)
    steps = 0
    while state != 0:
        layers.append(masks[state])
        state = _draw_index(chain.P_cum[state], rng)
        steps += 1
        if steps > step_cap:
            raise IterationCap(f"no absorption within {step_cap} steps")
    return Trace(chain.family.pair, tuple(layers))


def _at_root(component_bundle, p):
    return abs(p - component_bundle.p0) <= 1e-12 * component_bundle.p0


def sample_product(bundle, p, rng, k=None, stream_id=0):
    """Sample each irreducible component independently at parameter ``p``.

    Components whose own root equals ``p`` emit boundary prefixes (``k``
    layers, so ``k`` is required); the rest emit finite traces by absorption.
    Outcomes come back in component order, over component alphabets.
    """
    if p > bundle.p0 * (1.0 + 1e-12):
        raise ParameterOutOfRange(f"p={p} exceeds the principal root {bundle.p0}")
    meta = {"rng": RNG_ALGORITHM}
    outcomes = []
    for cb in bundle.components:
        if _at_root(cb, p):
            if k is None:
                raise ParameterOutOfRange(
                    "a component sits at its root; boundary prefixes need k"
                )
            prefix = sample_boundary_prefix(cb.boundary_chain(), k, rng)
            outcomes.append(SampleOutcome(p=p, prefix=prefix, stream_id=stream_id, meta=meta))
        else:
            trace = sample_finite_trace(cb.chain(p), rng)
            outcomes.append(SampleOutcome(p=p, trace=trace, stream_id=stream_id, meta=meta))
    return outcomes


def merge_product_trace(bundle, outcomes):
    """Recombine finite component outcomes into one global trace."""
    decomp = bundle.decomposition
    heights = [o.trace.height for o in outcomes]
    layers = []
    for t in range(max(heights, default=0)):
        mask = 0
        for ci, o in enumerate(outcomes):
            if t < o.trace.height:
                mask |= decomp.to_global_mask(ci, o.trace.layers[t])
        layers.append(mask)
    return Trace(bundle.pair, tuple(layers))


def merge_product_prefix(bundle, outcomes, k):
    """First ``k`` global layers from per-component outcomes (masks)."""
    decomp = bundle.decomposition
    layers = []
    for t in range(k):
        mask = 0
        for ci, o in enumerate(outcomes):
            local = None
            if o.prefix is not None and t < len(o.prefix):
                local = o.prefix[t]
            elif o.trace is not None and t < o.trace.height:
                local = o.trace.layers[t]
            if local:
                mask |= decomp.to_global_mask(ci, local)
        layers.append(mask)
    return tuple(layers)


def sample_subuniform_trace(bundle, p, rng):
    """One finite trace with law proportional to ``p^{length}`` (p below root)."""
    if p >= bundle.p0 * (1.0 - 1e-12):
        raise ParameterOutOfRange(
            f"subuniform finite sampling needs p strictly below {bundle.p0}"
        )
    return merge_product_trace(bundle, sample_product(bundle, p, rng))


def _propose_capped(chains, budget, rng):
    """One product proposal, aborted as soon as its length exceeds ``budget``.

    Returns (per-component layer lists, total length) or None on abort.
    Aborting early is sound for rejection: length only grows, so an overlong
    prefix already decides rejection.
    """
    total = 0
    parts = []
    for ch in chains:
        masks = ch.family.masks
        sizes = ch.family.sizes
        layers = []
        state = _draw_index(ch.h_cum, rng)
        while state != 0:
            total += int(sizes[state])
            if total > budget:
                return None, total
            layers.append(masks[state])
            state = _draw_index(ch.P_cum[state], rng)
        parts.append(layers)
    return parts, total


def sample_uniform_Mk(bundle, k, rng, max_rejects=DEFAULT_REJECT_BUDGET, stream_id=0):
    """One trace drawn exactly uniformly among all traces of length ``k``.

    Rejection against the parameter tuned so the mean proposal length is
    ``k``; any accepted length-``k`` proposal is uniform because the proposal
    law depends on a trace through its length only.
    """
    pair = bundle.pair
    meta = {"rng": RNG_ALGORITHM}
    if k == 0:
        return SampleOutcome(p=0.0, trace=Trace(pair), rejections=0,
                             stream_id=stream_id, meta=meta)
    if max_rejects < 1:
        raise ParameterOutOfRange("max_rejects must be at least 1")
    p = bundle.optimal_parameter(k)
    chains = [cb.chain(p) for cb in bundle.components]
    decomp = bundle.decomposition
    rejections = 0
    while True:
        parts, total = _propose_capped(chains, k, rng)
        if parts is not None and total == k:
            heights = [len(ls) for ls in parts]
            layers = []
            for t in range(max(heights, default=0)):
                mask = 0
                for ci, ls in enumerate(parts):
                    if t < len(ls):
                        mask |= decomp.to_global_mask(ci, ls[t])
                layers.append(mask)
            return SampleOutcome(p=p, trace=Trace(pair, tuple(layers)),
                                 rejections=rejections, stream_id=stream_id, meta=meta)
        rejections += 1
        if rejections > max_rejects:
            raise RejectBudgetExhausted(
                f"no length-{k} trace accepted within {max_rejects} rejections"
            )


# -- vectorized batches --------------------------------------------------------

def _chain_states_batch(chain, k, n, rng):
    """(n, k) chain states: initial draw plus k-1 transitions per walker."""
    states = np.empty((n, k), dtype=np.int32)
    u = rng.random((n, k))
    s = _first_states(chain, u[:, 0])
    states[:, 0] = s
    for t in range(1, k):
        s = _step_states(chain, s, u[:, t])
        states[:, t] = s
    return states


def boundary_prefix_batch(chain, k, n, rng):
    """(n, k) state indices of uniform boundary prefixes; all non-empty."""
    if not chain.at_p0:
        raise NotAtP0("boundary sampling needs the chain built at the principal root")
    return _chain_states_batch(chain, k, n, rng)


def _component_state_masks(bundle):
    """Per component: global clique mask of every component family state."""
    decomp = bundle.decomposition
    tables = []
    for ci, cb in enumerate(bundle.components):
        masks = [decomp.to_global_mask(ci, m) for m in cb.family.masks]
        tables.append(np.array(masks, dtype=np.uint64))
    return tables


def topped_prefix_batch(bundle, k, n, rng):
    """(n, k) global layer masks of the first ``k`` layers under the uniform law.

    Irreducible monoids run the boundary chain directly; products run each
    component at the global root (boundary for components at their own root,
    absorption for the rest) and union layers.
    """
    p0 = bundle.p0
    gmask = _component_state_masks(bundle)
    out = np.zeros((n, k), dtype=np.uint64)
    for ci, cb in enumerate(bundle.components):
        chain = cb.boundary_chain() if _at_root(cb, p0) else cb.chain(p0)
        states = _chain_states_batch(chain, k, n, rng)
        out |= gmask[ci][states]
    return out


def sample_uniform_traces(bundle, k, n, rng, max_rejects=DEFAULT_REJECT_BUDGET):
    """``n`` exactly-uniform length-``k`` traces, batched.

    Proposals run k+1 chain steps per component: a walker still alive after
    k+1 non-empty layers is already overlong, so that horizon decides
    acceptance.  Returns (traces, rejections before the n-th acceptance).
    """
    pair = bundle.pair
    if k == 0:
        return [Trace(pair)] * n, 0
    p = bundle.optimal_parameter(k)
    chains = [cb.chain(p) for cb in bundle.components]
    gmask = _component_state_masks(bundle)
    sizes = [cb.family.sizes for cb in bundle.components]
    accept_rate = bundle.expected_acceptance(k, p)

    traces = []
    proposals_closed = 0
    rejections = 0
    allowed = n + max_rejects  # most proposals the budget lets us scan
    while len(traces) < n:
        need = n - len(traces)
        batch = int(min(max(4096, need / max(accept_rate, 1e-9) * 1.2), _BATCH_CAP))
        batch = min(batch, allowed - proposals_closed)
        if batch <= 0:
            raise RejectBudgetExhausted(
                f"no {n} length-{k} traces within {max_rejects} rejections"
            )
        hists = []
        total_len = np.zeros(batch, dtype=np.int64)
        for ch, sz in zip(chains, sizes):
            u = rng.random((batch, k + 1))
            s = _first_states(ch, u[:, 0])
            hist = np.empty((batch, k + 1), dtype=np.int32)
            hist[:, 0] = s
            total_len += sz[s]
            for t in range(1, k + 1):
                s = _step_states(ch, s, u[:, t])
                hist[:, t] = s
                total_len += sz[s]
            hists.append(hist)
        acc_idx = np.flatnonzero(total_len == k)
        if len(acc_idx):
            gm = np.zeros((len(acc_idx), k + 1), dtype=np.uint64)
            for ci, hist in enumerate(hists):
                gm |= gmask[ci][hist[acc_idx]]
            heights = (gm != 0).sum(axis=1)
            for r in range(len(acc_idx)):
                layers = tuple(int(m) for m in gm[r, : heights[r]])
                traces.append(Trace(pair, layers))
                if len(traces) == n:
                    scanned = proposals_closed + int(acc_idx[r]) + 1
                    rejections = scanned - n
                    break
        if len(traces) < n:
            proposals_closed += batch
            rejections = proposals_closed - len(traces)
            if rejections > max_rejects:
                raise RejectBudgetExhausted(
                    f"no {n} length-{k} traces within {max_rejects} rejections"
                )
    return traces, rejections
