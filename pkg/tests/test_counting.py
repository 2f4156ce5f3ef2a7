import math

import pytest

from tracegen import (
    MobiusPolynomial,
    expected_size,
    optimal_boltzmann_parameter,
    principal_root,
)
from tracegen.errors import NoRootFound, ParameterOutOfRange
from tracegen.oracle import enumerate_Mk


def test_mobius_fig1(fig1):
    assert fig1.mu.coefficients == (1, -3, 1)


def test_mobius_free_monoids(free1, free2, free3):
    assert free1.mu.coefficients == (1, -1)
    assert free2.mu.coefficients == (1, -2)
    assert free3.mu.coefficients == (1, -3)


def test_mobius_other_monoids(path4, cycle5, tri4):
    assert path4.mu.coefficients == (1, -4, 3)
    assert cycle5.mu.coefficients == (1, -5, 5)
    assert tri4.mu.coefficients == (1, -4, 3, -1)


def test_mobius_product_of_components(prod32):
    assert prod32.mu.coefficients == (1, -5, 6)  # (1-3X)(1-2X)
    comps = prod32.components
    conv = [0] * 3
    for i, ci in enumerate(comps[0].mu.coefficients):
        for j, cj in enumerate(comps[1].mu.coefficients):
            conv[i + j] += ci * cj
    assert tuple(conv) == prod32.mu.coefficients


def test_growth_fig1(fig1):
    assert fig1.growth(8).values[:9] == (1, 3, 8, 21, 55, 144, 377, 987, 2584)


def test_growth_free2(free2):
    assert all(free2.growth(12)[k] == 2 ** k for k in range(13))


def test_growth_prod32_convolution(prod32):
    table = prod32.growth(6)
    assert table[2] == 19  # 9 + 6 + 4
    for n in range(7):
        assert table[n] == sum(3 ** i * 2 ** (n - i) for i in range(n + 1))


def test_growth_convolution_identity(irreducible_five, prod32):
    for bundle in list(irreducible_five) + [prod32]:
        mu = bundle.mu.coefficients
        lam = bundle.growth(12).values
        for n in range(1, 13):
            acc = sum(mu[j] * lam[n - j] for j in range(min(len(mu), n + 1)))
            assert acc == 0
        assert lam[0] == 1 and bundle.mu.coefficients[1] == -lam[1]
        assert all(v > 0 for v in lam)


def test_growth_matches_enumeration(irreducible_five, prod32):
    for bundle in list(irreducible_five) + [prod32]:
        lam = bundle.growth(6)
        for k in range(7):
            assert len(enumerate_Mk(bundle.family, k)) == lam[k]


def test_principal_root_fig1(fig1):
    assert abs(fig1.p0 - (3 - math.sqrt(5)) / 2) < 1e-14


def test_principal_root_free(free1, free2, free3):
    assert free1.p0 == 1.0
    assert abs(free2.p0 - 0.5) < 1e-14
    assert abs(free3.p0 - 1 / 3) < 1e-14


def test_principal_root_product_is_min(prod32):
    roots = [cb.p0 for cb in prod32.components]
    assert abs(prod32.p0 - min(roots)) < 1e-12
    assert abs(prod32.p0 - 1 / 3) < 1e-12


def test_root_residual_small(irreducible_five, prod32):
    for bundle in list(irreducible_five) + [prod32]:
        assert abs(bundle.mu(bundle.p0)) <= 1e-12


def test_growth_asymptotics(irreducible_five):
    # counts grow like p0^{-k}: consecutive normalized terms settle within 5%
    for bundle in irreducible_five:
        lam = bundle.growth(31)
        a = float(lam[30]) * bundle.p0 ** 30
        b = float(lam[31]) * bundle.p0 ** 31
        assert abs(a - b) / a < 0.05


def test_expected_size_examples(fig1, free2):
    assert abs(expected_size(free2.mu, 0.25) - 1.0) < 1e-14
    assert abs(expected_size(fig1.mu, 0.2) - 0.52 / 0.44) < 1e-14
    assert expected_size(fig1.mu, 1e-9) < 1e-8  # vanishes toward 0


def test_expected_size_monotone_grid(irreducible_five):
    for bundle in irreducible_five:
        grid = [bundle.p0 * i / 40 for i in range(1, 40)]
        vals = [expected_size(bundle.mu, p) for p in grid]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_expected_size_out_of_range(fig1):
    with pytest.raises(ParameterOutOfRange):
        expected_size(fig1.mu, 0.0)
    with pytest.raises(ParameterOutOfRange):
        expected_size(fig1.mu, fig1.p0)
    with pytest.raises(ParameterOutOfRange):
        expected_size(fig1.mu, 0.9)


def test_optimal_parameter_free2():
    mu = MobiusPolynomial((1, -2))
    p = optimal_boltzmann_parameter(mu, 1)
    assert abs(p - 0.25) < 1e-9


def test_optimal_parameter_fig1_k5(fig1):
    # k mu + p mu' = 0 at k=5 reads 7p^2 - 18p + 5 = 0
    closed = (18 - math.sqrt(184)) / 14
    p = fig1.optimal_parameter(5)
    assert abs(p - closed) < 1e-8
    assert abs(expected_size(fig1.mu, p) - 5) <= 5e-9
    assert 0 < p < fig1.p0


def test_optimal_parameter_approaches_root(free2):
    p = optimal_boltzmann_parameter(free2.mu, 10_000)
    assert free2.p0 * 0.999 < p < free2.p0


def test_optimal_parameter_k_zero_rejected(fig1):
    with pytest.raises(ParameterOutOfRange):
        optimal_boltzmann_parameter(fig1.mu, 0)


def test_no_root_found_guard():
    # handcrafted positive polynomial, unreachable from a real clique family
    with pytest.raises(NoRootFound):
        principal_root(MobiusPolynomial((1, 3)))


def test_horner_evaluation(fig1):
    mu = fig1.mu
    for x in (0.0, 0.1, 0.38, 1.0):
        assert abs(mu(x) - (1 - 3 * x + x * x)) < 1e-15
        assert abs(mu.derivative(x) - (-3 + 2 * x)) < 1e-15
