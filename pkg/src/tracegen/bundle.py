"""Convenience wrapper tying one monoid's derived data together.

Everything downstream (samplers, estimators, the CLI) needs the same handful
of objects: clique family, clique polynomial, principal root, component
decomposition, chains at various parameters.  The bundle computes each lazily
and caches it, and hands out one sub-bundle per irreducible component.
"""

from __future__ import annotations

import math

from .chain import clique_chain
from .counting import (
    growth_coefficients,
    mobius_polynomial,
    optimal_boltzmann_parameter,
    principal_root,
)
from .monoid import DEFAULT_CLIQUE_CAP, decompose_components, enumerate_cliques, load_monoid


class MonoidBundle:
    def __init__(self, pair, clique_cap=DEFAULT_CLIQUE_CAP):
        self.pair = pair
        self.clique_cap = clique_cap
        self._family = None
        self._mu = None
        self._p0 = None
        self._decomposition = None
        self._components = None
        self._growth = None
        self._chains = {}
        self._optimal = {}

    @classmethod
    def from_file(cls, path, clique_cap=DEFAULT_CLIQUE_CAP):
        return cls(load_monoid(path), clique_cap=clique_cap)

    @property
    def family(self):
        if self._family is None:
            self._family = enumerate_cliques(self.pair, cap=self.clique_cap)
        return self._family

    @property
    def mu(self):
        if self._mu is None:
            self._mu = mobius_polynomial(self.family)
        return self._mu

    @property
    def p0(self):
        # reducible monoids can carry a multiple root (equal component roots),
        # which defeats sign-based scanning; component roots are always simple
        if self._p0 is None:
            if self.irreducible:
                self._p0 = principal_root(self.mu)
            else:
                self._p0 = min(cb.p0 for cb in self.components)
        return self._p0

    @property
    def decomposition(self):
        if self._decomposition is None:
            self._decomposition = decompose_components(self.pair)
        return self._decomposition

    @property
    def irreducible(self):
        return self.decomposition.irreducible

    @property
    def components(self):
        """One sub-bundle per irreducible component, in first-letter order."""
        if self._components is None:
            comps = self.decomposition.components
            if len(comps) == 1 and comps[0] == self.pair:
                self._components = [self]
            else:
                self._components = [
                    MonoidBundle(comp, clique_cap=self.clique_cap) for comp in comps
                ]
        return self._components

    def growth(self, n):
        if self._growth is None or len(self._growth) <= n:
            self._growth = growth_coefficients(self.mu, max(n, 16))
        return self._growth

    def lambda_k(self, k):
        return self.growth(k)[k]

    def chain(self, p):
        key = float(p)
        if key not in self._chains:
            self._chains[key] = clique_chain(self.family, key, mu=self.mu, p0=self.p0)
        return self._chains[key]

    def boundary_chain(self):
        return self.chain(self.p0)

    def optimal_parameter(self, k, tol=1e-9):
        key = (int(k), float(tol))
        if key not in self._optimal:
            self._optimal[key] = optimal_boltzmann_parameter(
                self.mu, k, tol=tol, p0=self.p0
            )
        return self._optimal[key]

    def expected_acceptance(self, k, p):
        """Probability that a parameter-``p`` draw has length exactly ``k``."""
        lam = self.lambda_k(k)
        return math.exp(math.log(lam) + k * math.log(p) + math.log(self.mu(p)))
