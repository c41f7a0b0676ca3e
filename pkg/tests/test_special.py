import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellg2.errors import ConvergenceError, DomainError, PoleError
from ellg2.special import (
    Nome,
    e_pair,
    elliptic_gamma,
    euler_prefactor,
    gamma_prod,
    qpoch_double_inf,
    qpoch_inf,
    theta,
    theta_prod,
)


def brute_qpoch(u, q, terms=200):
    out = 1 + 0j
    for n in range(terms):
        out *= 1 - q**n * u
    return out


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


# -- q-Pochhammer ------------------------------------------------------------------------

def test_qpoch_zero_argument_is_one():
    assert qpoch_inf(0, 0.5) == 1


def test_qpoch_first_factor_vanishes():
    assert qpoch_inf(1, 0.3) == 0


def test_qpoch_euler_function_at_half():
    assert qpoch_inf(0.5, 0.5) == pytest.approx(0.2887880951, abs=1e-10)
    assert rel(qpoch_inf(0.5, 0.5), brute_qpoch(0.5, 0.5)) < 1e-15


def test_qpoch_complex_matches_brute_force():
    u, q = 0.3 - 1.7j, 0.6 * cmath.exp(0.4j)
    assert rel(qpoch_inf(u, q), brute_qpoch(u, q, 400)) < 1e-14


def test_qpoch_rejects_unit_nome():
    with pytest.raises(DomainError):
        qpoch_inf(0.5, 1.0)


def test_qpoch_max_terms_guard():
    with pytest.raises(ConvergenceError):
        qpoch_inf(0.5, 0.999, max_terms=10)


def test_qpoch_vectorised_matches_scalar():
    us = np.array([0.1, 0.5j, -0.7 + 0.2j])
    vals = qpoch_inf(us, 0.4)
    for u, v in zip(us, vals):
        assert v == pytest.approx(qpoch_inf(u, 0.4), rel=1e-15)


def test_large_argument_still_converges():
    # the truncation scales with |u| so the tail stays negligible
    u, q = 40.0, 0.3
    assert rel(qpoch_inf(u, q), brute_qpoch(u, q, 200)) < 1e-13


# -- double Pochhammer -------------------------------------------------------------------

def test_double_qpoch_trivial_values():
    nome = Nome(0.1, 0.2)
    assert qpoch_double_inf(0, nome) == 1
    assert qpoch_double_inf(1, nome) == 0


def test_double_qpoch_matches_nested_products():
    nome = Nome(0.1, 0.2)
    nested = 1 + 0j
    for m in range(40):
        nested *= qpoch_inf(0.1**m * 0.3, 0.2)
    assert rel(qpoch_double_inf(0.3, nome), nested) < 1e-14


def test_nome_validation():
    with pytest.raises(DomainError):
        Nome(1.0, 0.2)
    with pytest.raises(DomainError):
        Nome(0.1, -1.5)
    with pytest.raises(DomainError):
        Nome(0.1, 0.2, trunc_tol=0)
    with pytest.raises(DomainError):
        Nome(0.1, 0.2, max_terms=0)


def test_nome_square_roots_are_principal():
    nome = Nome(-0.04, 0.09)
    assert nome.sqrt_p == pytest.approx(0.2j)
    assert nome.sqrt_pq == pytest.approx(0.2j * 0.3)


# -- theta ------------------------------------------------------------------------------

def test_theta_vanishes_at_p():
    assert abs(theta(0.1, 0.1)) < 1e-16


def test_theta_degenerate_nome():
    assert theta(0.4, 0) == pytest.approx(0.6, abs=1e-16)


def test_theta_quasi_periodicity_example():
    p, u = 0.1, 0.3
    assert abs(theta(p * u, p) + theta(u, p) / u) < 1e-14


def test_theta_zero_argument_rejected():
    with pytest.raises(DomainError):
        theta(0, 0.1)


def test_theta_inversion():
    p, u = 0.2 + 0.1j, 0.6 - 0.3j
    assert rel(theta(1 / u, p), -theta(u, p) / u) < 1e-13


def test_theta_prod_is_product():
    args = [0.3, 0.5j, 1.2]
    expected = theta(0.3, 0.2) * theta(0.5j, 0.2) * theta(1.2, 0.2)
    assert theta_prod(args, 0.2) == pytest.approx(expected, rel=1e-15)


# -- elliptic gamma ----------------------------------------------------------------------

def test_gamma_at_symmetric_point_is_one():
    nome = Nome(0.04, 0.09)
    assert elliptic_gamma(nome.sqrt_pq, nome) == pytest.approx(1.0, abs=1e-15)


def test_gamma_reflection_example():
    nome = Nome(0.1, 0.2)
    u = 0.5
    assert abs(elliptic_gamma(nome.p * nome.q / u, nome) * elliptic_gamma(u, nome) - 1) < 1e-13


def test_gamma_q_shift_example():
    nome = Nome(0.1, 0.2)
    u = 0.5
    ratio = elliptic_gamma(nome.q * u, nome) / elliptic_gamma(u, nome)
    assert abs(ratio - theta(u, nome.p)) < 1e-13


def test_gamma_pole_guard():
    nome = Nome(0.1, 0.2)
    with pytest.raises(PoleError):
        elliptic_gamma(1.0, nome)
    with pytest.raises(PoleError):
        elliptic_gamma(1 / 0.2, nome)
    # close to, but not at, a pole is allowed
    assert np.isfinite(elliptic_gamma(1.0 + 1e-9, nome))


def test_gamma_prod_is_product():
    nome = Nome(0.1, 0.2)
    assert gamma_prod([0.3, 0.4j], nome) == pytest.approx(
        elliptic_gamma(0.3, nome) * elliptic_gamma(0.4j, nome), rel=1e-15)


# -- e pairing -----------------------------------------------------------------------------

def test_e_pair_examples():
    p = 0.1
    assert abs(e_pair(0.5, 0.5, p)) < 1e-16
    assert abs(e_pair(0.4, 0.6, p) + e_pair(0.6, 0.4, p)) < 1e-14
    u, v = 0.4, 0.6
    assert abs(e_pair(p * u, v, p) * p * u * u - e_pair(u, v, p)) < 1e-13


def test_e_pair_zero_rejected():
    with pytest.raises(DomainError):
        e_pair(0, 0.5, 0.1)


# -- Euler prefactor ------------------------------------------------------------------------

def test_euler_prefactor_examples():
    assert euler_prefactor(Nome(0, 0)) == 1
    assert euler_prefactor(Nome(0.5, 0)) == pytest.approx(0.2887880951, abs=1e-10)
    expected = brute_qpoch(0.1, 0.1) * brute_qpoch(0.2, 0.2)
    assert rel(euler_prefactor(Nome(0.1, 0.2)), expected) < 1e-14


# -- seeded property sweeps ---------------------------------------------------------------

def _samples(seed, n=100):
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.2, 0.9, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    p = rng.uniform(0.01, 0.5, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    q = rng.uniform(0.01, 0.5, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    return zip(u, p, q)


def test_gamma_functional_equations_seeded():
    for u, p, q in _samples(7):
        nome = Nome(p, q)
        g = elliptic_gamma(u, nome)
        assert rel(elliptic_gamma(q * u, nome), theta(u, p) * g) < 1e-12
        assert rel(elliptic_gamma(p * u, nome), theta(u, q) * g) < 1e-12
        assert abs(elliptic_gamma(p * q / u, nome) * g - 1) < 1e-12
        lhs = 1 / (g * elliptic_gamma(1 / u, nome))
        assert rel(lhs, -theta(u, p) * theta(u, q) / u) < 1e-12
        assert rel(theta(p * u, p), -theta(u, p) / u) < 1e-12


def test_three_term_relation_seeded():
    rng = np.random.default_rng(11)
    for _ in range(100):
        w, x, y, z = rng.uniform(0.3, 1.5, 4) * np.exp(2j * np.pi * rng.uniform(size=4))
        p = rng.uniform(0.01, 0.5) * cmath.exp(2j * math.pi * rng.uniform())
        terms = [e_pair(w, x, p) * e_pair(y, z, p), -e_pair(w, y, p) * e_pair(x, z, p),
                 e_pair(w, z, p) * e_pair(x, y, p)]
        assert abs(sum(terms)) <= 1e-12 * max(abs(t) for t in terms)


def test_gamma_square_splitting_seeded():
    for u, p, q in _samples(3, 30):
        nome = Nome(p, q)
        sp, sq = cmath.sqrt(p), cmath.sqrt(q)
        args = [s * c * u for s in (1, -1) for c in (1, sp, sq, sp * sq)]
        assert rel(gamma_prod(args, nome), elliptic_gamma(u * u, nome)) < 1e-11


@settings(max_examples=40, deadline=None)
@given(r=st.floats(0.05, 3.0), phase=st.floats(0, 1), pr=st.floats(0.01, 0.6), pphase=st.floats(0, 1))
def test_theta_quasi_periodicity_property(r, phase, pr, pphase):
    u = r * cmath.exp(2j * math.pi * phase)
    p = pr * cmath.exp(2j * math.pi * pphase)
    lhs, rhs = theta(p * u, p), -theta(u, p) / u
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))
