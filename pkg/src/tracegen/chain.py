"""The clique chain: probabilistic core of sub-uniform trace generation.

For a parameter ``p`` at most the principal root, the layer sequence of a
random trace drawn from the sub-uniform measure of parameter ``p`` is a
Markov chain on cliques.  Its initial law ``h`` is an alternating sum of
``p^{|c'|}`` over the cliques containing ``c`` (a Mobius transform over the
clique lattice), ``g`` rescales ``h`` by ``p^{|c|}``, and transitions move
mass ``h(c')/g(c)`` along admissible edges.  Below the root the empty clique
is an absorbing state reached in finite time; at the root it is unreachable
and the chain restricted to non-empty cliques shares its transition matrix
with the Parry chain of the weighted clique automaton.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .counting import mobius_polynomial, principal_root
from .errors import DegenerateState, ParameterOutOfRange, ReducibleMonoid
from .monoid import decompose_components

AT_P0_RTOL = 1e-12
_H_BLOCK = 1 << 22  # cap rows*cliques per chunk of the superset sum


def h_vector(family, p, p0=None):
    """Initial clique law: alternating superset sums of ``p``-weights.

    ``h(c) = sum over cliques c' containing c of (-1)^{|c'|-|c|} p^{|c'|}``.
    """
    if p <= 0.0:
        raise ParameterOutOfRange(f"p must be positive, got {p}")
    if p0 is not None and p > p0 * (1.0 + AT_P0_RTOL):
        raise ParameterOutOfRange(f"p={p} exceeds the principal root {p0}")
    n = len(family)
    masks = family.masks_np
    sizes = family.sizes
    w = np.where(sizes % 2 == 0, 1.0, -1.0) * p ** sizes
    sign = np.where(sizes % 2 == 0, 1.0, -1.0)
    h = np.empty(n, dtype=float)
    block = max(1, _H_BLOCK // n)
    for start in range(0, n, block):
        stop = min(start + block, n)
        sub = masks[start:stop, None]
        superset = (masks[None, :] & sub) == sub
        h[start:stop] = superset @ w
    return sign * h


def g_vector(family, p, h):
    """Rescaled law ``g(c) = h(c) / p^{|c|}``."""
    return h / p ** family.sizes


def transition_matrix(family, p, h, g, at_p0=False):
    """Row-stochastic transitions ``P[c, c'] = h(c')/g(c)`` on admissible edges.

    At the root the empty-clique row is undefined and stored as NaN; below the
    root it is the absorbing point mass on the empty clique.
    """
    n = len(family)
    adm = family.admissibility
    start = 1 if at_p0 else 0
    gs = g[start:]
    # a mathematical zero of g shows up as a float residue of arbitrary sign,
    # so the refusal uses a relative threshold, not the raw sign
    tol = 1e-12 * float(np.max(np.abs(g)))
    if np.any(gs <= tol):
        bad = int(np.argmax(gs <= tol)) + start
        raise DegenerateState(
            f"g vanishes on clique index {bad} where a transition row is required"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        P = np.where(adm, h[None, :], 0.0) / g[:, None]
    if at_p0:
        P[0, :] = np.nan
    return P


@dataclass
class CliqueChain:
    """Bundle of ``p``, ``h``, ``g``, transitions and their sampling CDFs."""

    family: object
    p: float
    p0: float
    at_p0: bool
    h: np.ndarray
    g: np.ndarray
    P: np.ndarray
    h_cum: np.ndarray
    P_cum: np.ndarray

    @property
    def n_states(self):
        return len(self.family)


def clique_chain(family, p, mu=None, p0=None):
    """Build the clique chain at parameter ``p``.

    Boundary behaviour (empty clique unreachable) engages when ``p`` matches
    the principal root within 1e-12 relative; callers wanting that regime
    should pass the computed root itself.  Reducible monoids with equal
    component roots must supply ``p0`` (their polynomial has a multiple root
    that sign scanning cannot find).
    """
    if p0 is None:
        if mu is None:
            mu = mobius_polynomial(family)
        p0 = principal_root(mu)
    if p <= 0.0 or p > p0 * (1.0 + AT_P0_RTOL):
        raise ParameterOutOfRange(f"p must lie in (0, {p0}], got {p}")
    at_p0 = abs(p - p0) <= AT_P0_RTOL * p0
    h = h_vector(family, p)
    if at_p0:
        # mu(p0) is a float residue of order 1e-16; the boundary chain sets it
        # to exact zero so the empty clique is truly unreachable
        h[0] = 0.0
    g = g_vector(family, p, h)
    P = transition_matrix(family, p, h, g, at_p0=at_p0)
    h_cum = np.cumsum(h)
    with np.errstate(invalid="ignore"):
        P_cum = np.cumsum(P, axis=1)
    return CliqueChain(family, p, p0, at_p0, h, g, P, h_cum, P_cum)


def cylinder_probability(chain, states):
    """Probability that the first ``len(states)`` layers equal ``states``.

    Closed form ``p^{letters before the last layer} * h(last)``; equals the
    telescoped product of transition entries along the path.
    """
    if not states:
        return 1.0
    sizes = chain.family.sizes
    prefix = int(sum(sizes[s] for s in states[:-1]))
    return chain.p ** prefix * float(chain.h[states[-1]])


def path_probability(chain, states):
    """Same probability as an explicit product ``h(c1) * prod P`` steps."""
    if not states:
        return 1.0
    acc = float(chain.h[states[0]])
    for a, b in zip(states, states[1:]):
        acc *= float(chain.P[a, b])
    return acc


def iter_admissible_chains(family, length, include_empty=True):
    """All admissible state chains of the given length, as index tuples."""
    adm = family.admissibility
    first = range(len(family)) if include_empty else range(1, len(family))

    def extend(prefix, remaining):
        if remaining == 0:
            yield tuple(prefix)
            return
        last = prefix[-1]
        succ = np.flatnonzero(adm[last])
        for nxt in succ:
            if not include_empty and nxt == 0:
                continue
            prefix.append(int(nxt))
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    if length <= 0:
        yield ()
        return
    for s in first:
        yield from extend([s], length - 1)


# -- Parry comparison ---------------------------------------------------------

@dataclass
class ParryPair:
    """Weighted incidence matrix of non-empty cliques and its stochastic form."""

    B: np.ndarray
    C: np.ndarray
    g: np.ndarray
    spectral_radius: float


def power_iteration(matrix, max_iter=10_000, tol=1e-12):
    """Dominant eigenvalue of a non-negative matrix via Rayleigh quotients."""
    n = matrix.shape[0]
    x = np.full(n, 1.0 / n)
    rho = 0.0
    for _ in range(max_iter):
        y = matrix @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0, x
        rho_new = float(x @ y) / float(x @ x)
        x = y / norm
        if abs(rho_new - rho) < tol:
            return rho_new, x
        rho = rho_new
    return rho, x


def parry_matrices(family, p0, h, g):
    """Weighted incidence matrix ``B`` and stochastic matrix ``C`` at the root.

    Only defined when the clique automaton is strongly connected, i.e. for
    irreducible monoids; reducible input is refused.
    """
    if not decompose_components(family.pair).irreducible:
        raise ReducibleMonoid(
            "the Parry construction needs an irreducible monoid; "
            "this one splits into several independent components"
        )
    adm = family.admissibility[1:, 1:]
    sizes = family.sizes[1:]
    gs = g[1:]
    B = np.where(adm, p0 ** sizes[None, :], 0.0)
    C = B * gs[None, :] / gs[:, None]
    rho, _ = power_iteration(B)
    return ParryPair(B=B, C=C, g=gs, spectral_radius=rho)
