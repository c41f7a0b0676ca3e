import itertools
import math
import warnings

import numpy as np
import pytest

from ellg2.errors import DomainError
from ellg2.g2 import mono
from ellg2.integrand import j_product, make_balanced
from ellg2.quadrature import (
    IntegralResult,
    QuadratureWarning,
    QuadSpec,
    bc1_integral,
    bracket,
    g2_prefactor,
    gustafson_q_integral,
    gustafson_rhs,
    i_of_a,
    pairwise_sum,
    pole_scan,
    torus_integral_1d,
    torus_integral_2d,
    worker_count,
)
from ellg2.special import Nome, gamma_prod, qpoch_inf

G2_NOME = Nome(0.08, 0.22)
G2_A = (0.70, 0.72, 0.68, 0.66)
FAST = QuadSpec(n_start=32, n_max=256, rel_tol=1e-9)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


# -- specs ----------------------------------------------------------------------------------

def test_spec_validation():
    with pytest.raises(DomainError):
        QuadSpec(n_start=24)
    with pytest.raises(DomainError):
        QuadSpec(n_start=64, n_max=32)
    with pytest.raises(DomainError):
        QuadSpec(rel_tol=0)
    with pytest.raises(DomainError):
        QuadSpec(doubling=False)
    with pytest.raises(ValueError):
        IntegralResult(1.0, -1.0, 8)


def test_worker_count_sources(monkeypatch):
    monkeypatch.setenv("ELLG2_THREADS", "3")
    assert worker_count() == 3
    assert worker_count(QuadSpec(threads=2)) == 2
    monkeypatch.setenv("ELLG2_THREADS", "junk")
    assert worker_count() >= 1


def test_pairwise_sum_fixed_order():
    vals = np.arange(7, dtype=float)
    assert pairwise_sum(vals) == 21.0
    assert pairwise_sum(np.zeros((0, 2))).shape == (2,)
    # ((0.1 + 0.2) + (0.3 + 0.4)) + ((0.5 + 0) ...) tree order, not left to right
    x = np.array([1e16, 1.0, -1e16, 1.0])
    assert pairwise_sum(x) == (1e16 + 1.0) + (-1e16 + 1.0)


# -- exactness ---------------------------------------------------------------------------------

def test_constant_integrates_to_one():
    res = torus_integral_2d(lambda z: np.ones_like(z.zeta1), QuadSpec(n_start=8, n_max=16))
    assert res.value == 1
    assert torus_integral_1d(lambda t: np.ones_like(t), QuadSpec(n_start=8, n_max=16)).value == 1


def test_monomials_integrate_to_zero():
    spec = QuadSpec(n_start=8, n_max=16)
    for m, n in itertools.product(range(-7, 8), repeat=2):
        if (m, n) == (0, 0):
            continue
        res = torus_integral_2d(lambda z: mono(z, m, n), spec)
        assert abs(res.value) < 1e-15, (m, n)
    for k in range(1, 8):
        assert abs(torus_integral_1d(lambda t: np.exp(2j * np.pi * k * t), spec).value) < 1e-15


def test_monomial_example():
    res = torus_integral_2d(lambda z: mono(z, 3, -2), QuadSpec(n_start=4, n_max=8))
    assert abs(res.value) < 1e-15


def test_nonconvergence_warns():
    # a sharply peaked periodic function cannot converge on a 4x4 grid
    f = lambda z: 1 / (1.01 - np.cos(2 * np.pi * z.zeta1))  # noqa: E731
    with pytest.warns(QuadratureWarning):
        res = torus_integral_2d(f, QuadSpec(n_start=4, n_max=8))
    assert res.warnings and res.n_used == 8


def test_one_dimensional_analytic_integral():
    # mean of 1/(1 - r e^{2 pi i t}) over the circle is 1; of |.|^2 is 1/(1 - r^2)
    r = 0.6
    res = torus_integral_1d(lambda t: 1 / abs(1 - r * np.exp(2j * np.pi * t)) ** 2, QuadSpec(rel_tol=1e-14))
    assert res.value == pytest.approx(1 / (1 - r * r), rel=1e-14)


# -- convergence behaviour --------------------------------------------------------------------

@pytest.mark.slow
def test_geometric_convergence_slope():
    aset = make_balanced(*G2_A, 1, G2_NOME)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuadratureWarning)
        res = i_of_a(aset, G2_NOME, QuadSpec(n_start=32, n_max=256, rel_tol=1e-300))
    hist = res.history
    diffs = {hist[i + 1][0]: abs(hist[i + 1][1] - hist[i][1]) for i in range(len(hist) - 1)}
    assert sorted(diffs) == [64, 128, 256]
    assert diffs[128] <= 1e-2 * diffs[64]
    assert diffs[256] <= 1e-2 * diffs[128]


@pytest.mark.slow
def test_bit_identical_across_thread_counts():
    aset = make_balanced(*G2_A, -1, G2_NOME)
    spec = QuadSpec(n_start=32, n_max=128, rel_tol=1e-3)
    values = {threads: i_of_a(aset, G2_NOME, QuadSpec(spec.n_start, spec.n_max, spec.rel_tol, threads=threads))
              for threads in (1, 2, 4)}
    ref = values[1].value
    for res in values.values():
        assert res.value == ref
        assert res.history == values[1].history


# -- the G2 integral ---------------------------------------------------------------------------

@pytest.mark.slow
def test_g2_integral_matches_product_and_is_permutation_invariant():
    aset = make_balanced(*G2_A, 1, G2_NOME)
    res = i_of_a(aset, G2_NOME, FAST)
    lhs = g2_prefactor(G2_NOME) * res.value
    assert rel(lhs, j_product(aset, G2_NOME)) < 1e-6
    swapped = i_of_a(aset.permuted((4, 2, 0, 3, 1)), G2_NOME, FAST)
    assert rel(swapped.value, res.value) < 1e-9


def test_integral_requires_unit_disc_parameters():
    aset = make_balanced(1.2, 0.5, 0.5, 0.5, 1, G2_NOME)
    with pytest.raises(DomainError):
        i_of_a(aset, G2_NOME, FAST)


def test_pole_scan_flags_nearby_pole():
    # the scan grid sits at half-cell offsets, so zeta1 = 1/32 is a node for n = 16
    near = lambda z: 1 / (1 + 1e-9 - np.cos(2 * np.pi * (z.zeta1 - 1 / 32)))  # noqa: E731
    ratio, warn = pole_scan(near)
    assert warn is not None and ratio > 1e6
    ratio, warn = pole_scan(lambda z: np.ones_like(z.zeta1))
    assert warn is None and ratio == 1


@pytest.mark.slow
def test_bracket_of_constant_is_integral():
    aset = make_balanced(*G2_A, 1, G2_NOME)
    spec = QuadSpec(n_start=32, n_max=128, rel_tol=1e-4)
    one = bracket(lambda z: np.ones_like(z.zeta1), aset, G2_NOME, spec)
    assert one.value == i_of_a(aset, G2_NOME, spec).value


# -- BC1 integral -------------------------------------------------------------------------------

def bc1_params():
    nome = Nome(0.1, 0.2)
    t = [0.55, 0.5, 0.45, 0.4, 0.5]
    t.append(nome.p * nome.q / math.prod(t))
    return t, nome


def test_bc1_canonical():
    t, nome = bc1_params()
    assert abs(t[5]) == pytest.approx(0.808, abs=5e-4)
    lhs = bc1_integral(t, nome, FAST).value
    rhs = gamma_prod([ti * tj for ti, tj in itertools.combinations(t, 2)], nome)
    assert rel(lhs, rhs) < 1e-9


def test_bc1_permutation_invariant():
    t, nome = bc1_params()
    a = bc1_integral(t, nome, FAST).value
    b = bc1_integral(t[::-1], nome, FAST).value
    assert rel(a, b) < 1e-10


def test_bc1_balancing_enforced():
    t, nome = bc1_params()
    t[0] *= 1.01
    with pytest.raises(DomainError):
        bc1_integral(t, nome, FAST)


def test_bc1_small_p_recovers_askey_wilson():
    # t6 = p * t6' with t5 * t6' fixed by balancing; p -> 0 and t5 -> 0 together
    q, a = 0.2, [0.55, 0.5, 0.45, 0.4]
    big_a = math.prod(a)
    aw = qpoch_inf(big_a, q) / math.prod(qpoch_inf(ai * aj, q) for ai, aj in itertools.combinations(a, 2))
    devs = []
    for p, t5 in ((1e-2, 0.3), (1e-4, 0.03), (1e-6, 0.003)):
        nome = Nome(p, q)
        t6 = p * q / (big_a * t5)
        devs.append(rel(bc1_integral(a + [t5, t6], nome, FAST).value, aw))
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-2


# -- Gustafson's q-integral ------------------------------------------------------------------------

def test_gustafson_canonical():
    a, q = [0.5, 0.4, 0.35, 0.3], 0.3
    res = gustafson_q_integral(a, q, FAST)
    assert rel(res.value, gustafson_rhs(a, q)) < 1e-8


def test_gustafson_symmetric():
    a, q = [0.5, 0.4, 0.35, 0.3], 0.3
    assert rel(gustafson_q_integral(a, q, FAST).value, gustafson_q_integral(a[::-1], q, FAST).value) < 1e-9


def test_gustafson_degenerate_parameter():
    a, q = [0.5, 0.4, 0.35, 0.0], 0.3
    lhs = gustafson_q_integral(a, q, FAST).value
    rhs = gustafson_rhs(a, q)
    assert np.isfinite(lhs) and np.isfinite(rhs)
    assert rel(lhs, rhs) < 1e-8
