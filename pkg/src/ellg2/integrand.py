"""Structured functions on the G2 torus built from theta and elliptic gamma values.

Everything here is a pointwise evaluator on LogPoint (scalar or array
coordinates).  Parameters are a ParameterSet holding a1..a5 and the sign
epsilon; two balancing conventions occur:

* ``"pq"``  -- ``(a1...a5)^2 = pq``, ``a5 = eps p^{1/2} q^{1/2} / (a1 a2 a3 a4)``,
  the setting of the integral evaluation;
* ``"p/q"`` -- ``(a1...a5)^2 q = p``, ``a5 = eps p^{1/2} q^{-1/2} / (a1 a2 a3 a4)``,
  the setting of the coboundary expansions and the two-term relations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import DegenerateParameterError, DomainError
from .g2 import LogPoint, act_log, mono, shift_log, weyl_denominator, weyl_elements
from .special import Nome, e_pair, elliptic_gamma, euler_prefactor, gamma_prod, theta, theta_prod

DEGENERACY_GUARD = 1e-12

# monomials z2, z1 z2, z1 z2^2 that pair with the parameters (short roots x2, x1, x3^-1)
_PARAM_MONOMIALS = ((0, 1), (1, 1), (1, 2))
# positive roots as (z1, z2) exponents
_POSITIVE_ROOTS = ((0, 1), (1, 1), (1, 2), (1, 0), (1, 3), (2, 3))


@dataclass(frozen=True)
class ParameterSet:
    a: tuple
    epsilon: int = 1
    balance: str | None = None

    def __post_init__(self):
        a = tuple(complex(x) for x in self.a)
        if len(a) != 5:
            raise DomainError(f"expected 5 parameters, got {len(a)}")
        if self.epsilon not in (1, -1):
            raise DomainError("epsilon must be +1 or -1")
        if self.balance not in (None, "pq", "p/q"):
            raise DomainError(f"unknown balancing {self.balance!r}")
        object.__setattr__(self, "a", a)

    @property
    def balanced(self) -> bool:
        return self.balance is not None

    @property
    def product(self) -> complex:
        return complex(np.prod(self.a))

    def __getitem__(self, k: int) -> complex:
        """1-based access, ``aset[1]`` is a1."""
        return self.a[k - 1]

    def shifted(self, factors: dict) -> "ParameterSet":
        """Multiply selected parameters (1-based keys); the balancing flag is dropped."""
        a = list(self.a)
        for k, f in factors.items():
            a[k - 1] *= f
        return replace(self, a=tuple(a), balance=None)

    def permuted(self, order) -> "ParameterSet":
        return replace(self, a=tuple(self.a[i] for i in order))

    def check_torus_safe(self) -> None:
        bad = [k + 1 for k, x in enumerate(self.a) if not abs(x) < 1]
        if bad:
            raise DomainError(f"torus integration needs |a_k| < 1; violated for k={bad}")


def make_balanced(a1, a2, a3, a4, epsilon: int, nome: Nome, target: str = "pq") -> ParameterSet:
    """Complete a1..a4 by the a5 that satisfies the requested balancing condition."""
    head = [complex(x) for x in (a1, a2, a3, a4)]
    if any(x == 0 for x in head):
        raise DomainError("parameters must be nonzero")
    if epsilon not in (1, -1):
        raise DomainError("epsilon must be +1 or -1")
    prod4 = head[0] * head[1] * head[2] * head[3]
    if target == "pq":
        a5 = epsilon * nome.sqrt_pq / prod4
    elif target == "p/q":
        a5 = epsilon * nome.sqrt_p / (nome.sqrt_q * prod4)
    else:
        raise DomainError(f"unknown balancing target {target!r}")
    return ParameterSet(tuple(head + [a5]), epsilon, target)


def balancing_residual(aset: ParameterSet, nome: Nome) -> float:
    target = nome.p * nome.q if aset.balance in (None, "pq") else nome.p / nome.q
    return abs(aset.product ** 2 - target) / abs(target)


def _guard(value, what: str):
    if abs(value) < DEGENERACY_GUARD:
        raise DegenerateParameterError(f"degenerate parameters: {what} = {value:.3g}")
    return value


# -- the integrand ------------------------------------------------------------

def _stack(values):
    return np.stack([np.asarray(v, dtype=complex) for v in values])


def gamma_numerator(aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """``prod_k Gamma(a_k z2^{+-1}, a_k (z1 z2)^{+-1}, a_k (z1 z2^2)^{+-1})``."""
    monos = [mono(zeta, l1, l2) for l1, l2 in _PARAM_MONOMIALS]
    args = []
    for ak in aset.a:
        for m in monos:
            args.append(ak * m)
            args.append(ak / m)
    return np.prod(elliptic_gamma(_stack(args), nome), axis=0)


def phi(aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """The G2 integrand, holomorphic form ``Delta(z;p) Delta(z;q) * gamma_numerator``.

    The reciprocal Gamma denominator is replaced by the product of the two
    Weyl denominators, which is entire, so the function can be sampled on the
    real torus including the nodes where z1 or z2 equals 1.
    """
    return (weyl_denominator(zeta, nome.p) * weyl_denominator(zeta, nome.q)
            * gamma_numerator(aset, zeta, nome))


def phi_plus(aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """``prod_k Gamma(a_k z2, a_k z1 z2, a_k z1 z2^2) / Gamma(z^alpha, alpha > 0)``."""
    num = [ak * mono(zeta, l1, l2) for ak in aset.a for l1, l2 in _PARAM_MONOMIALS]
    den = [mono(zeta, l1, l2) for l1, l2 in _POSITIVE_ROOTS]
    return np.prod(elliptic_gamma(_stack(num), nome), axis=0) / np.prod(
        elliptic_gamma(_stack(den), nome), axis=0)


def phi_product_form(aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """``Phi_+(z) Phi_+(z^-1)``; has removable singularities on the torus."""
    return phi_plus(aset, zeta, nome) * phi_plus(aset, -zeta, nome)


def _x_coords(zeta: LogPoint):
    return zeta.x1, zeta.x2, zeta.x3


def phi_alt(aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """Integrand in x-coordinates: short-root numerator over all ``x_i^{+-1} x_j^{+-1}``."""
    xs = _x_coords(zeta)
    num = [ak * x ** s for ak in aset.a for x in xs for s in (1, -1)]
    den = []
    for i, j in itertools.combinations(range(3), 2):
        xi, xj = xs[i], xs[j]
        den += [xi * xj, xj / xi, xi / xj, 1 / (xi * xj)]
    return np.prod(elliptic_gamma(_stack(num), nome), axis=0) / np.prod(
        elliptic_gamma(_stack(den), nome), axis=0)


def phi_short_long(aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """Integrand split into a short-root part and a long-root part."""
    xs = _x_coords(zeta)
    short = 1.0
    for x in xs:
        num = [ak * x ** s for ak in aset.a for s in (1, -1)]
        short = short * np.prod(elliptic_gamma(_stack(num), nome), axis=0) / (
            elliptic_gamma(x, nome) * elliptic_gamma(1 / x, nome))
    long_ = 1.0
    for j, k in itertools.combinations(range(3), 2):
        long_ = long_ / (elliptic_gamma(xs[j] / xs[k], nome) * elliptic_gamma(xs[k] / xs[j], nome))
    return short * long_


def reciprocal_gamma_denominator(zeta: LogPoint, nome: Nome):
    """``1 / Gamma(x_i^{+-1} x_j^{+-1}, i < j)`` evaluated directly from Gamma values."""
    xs = _x_coords(zeta)
    den = []
    for i, j in itertools.combinations(range(3), 2):
        xi, xj = xs[i], xs[j]
        den += [xi * xj, xj / xi, xi / xj, 1 / (xi * xj)]
    return 1.0 / np.prod(elliptic_gamma(_stack(den), nome), axis=0)


# -- f^+ and f^- ---------------------------------------------------------------

def f_plus(aset: ParameterSet, zeta: LogPoint, p):
    """``z1^-1 z2^-3/2 prod_k theta(a_k z1 z2, a_k z1 z2^2) / theta(z1z2, z1z2^2, z1, z1z2^3, z1^2z2^3)``."""
    u1, u2 = mono(zeta, 1, 1), mono(zeta, 1, 2)
    num = 1.0
    for ak in aset.a:
        num = num * theta(ak * u1, p) * theta(ak * u2, p)
    den = theta(u1, p) * theta(u2, p) * theta(mono(zeta, 1, 0), p) * theta(
        mono(zeta, 1, 3), p) * theta(mono(zeta, 2, 3), p)
    return mono(zeta, -1, -1.5) * num / den


def f_minus(aset: ParameterSet, zeta: LogPoint, p):
    return f_plus(aset, -zeta, p)


def delta_f_plus(aset: ParameterSet, zeta: LogPoint, p):
    """``Delta(z;p) f^+(z)`` with the common theta factors cancelled (entire)."""
    u1, u2 = mono(zeta, 1, 1), mono(zeta, 1, 2)
    num = theta(mono(zeta, 0, 1), p)
    for ak in aset.a:
        num = num * theta(ak * u1, p) * theta(ak * u2, p)
    return mono(zeta, -4, -6.5) * num


# -- the space F: F_k, G, F'_3 ---------------------------------------------------

def bigF(aset: ParameterSet, k: int, zeta: LogPoint, p):
    """``F_k(z) = e(a_k, z2) e(a_k, z1 z2) e(a_k, z1 z2^2)``."""
    ak = aset[k]
    return (e_pair(ak, mono(zeta, 0, 1), p) * e_pair(ak, mono(zeta, 1, 1), p)
            * e_pair(ak, mono(zeta, 1, 2), p))


def point_pij(aset: ParameterSet, i: int, j: int) -> LogPoint:
    """The point ``(a_i/a_j, a_j)``: z2 = a_j, z1 z2 = a_i."""
    if not i < j:
        raise DomainError(f"p_ij needs i < j, got ({i}, {j})")
    return LogPoint.from_z(aset[i] / aset[j], aset[j])


def point_pij_star(aset: ParameterSet, i: int, j: int) -> LogPoint:
    """The point ``(a_i^2/a_j, a_j/a_i)``: z1 z2 = a_i, z1 z2^2 = a_j."""
    if not i < j:
        raise DomainError(f"p*_ij needs i < j, got ({i}, {j})")
    return LogPoint.from_z(aset[i] ** 2 / aset[j], aset[j] / aset[i])


def bigF_at_pij_closed(aset: ParameterSet, k: int, i: int, j: int, p) -> complex:
    """Closed form of ``F_k(p_ij)`` as a theta product."""
    ak, ai, aj = aset[k], aset[i], aset[j]
    return theta_prod([ak * ai, ak / ai, ak * aj, ak / aj, ak * ai * aj, ak / (ai * aj)], p) / ak ** 3


def bigG(aset: ParameterSet, zeta: LogPoint, p):
    """``G`` = F_4 with its values at p23, p13, p12 interpolated away, normalised."""
    coef = []
    for k, (i, j) in zip((1, 2, 3), ((2, 3), (1, 3), (1, 2))):
        pt = point_pij(aset, i, j)
        fk = _guard(bigF(aset, k, pt, p), f"F_{k}(p_{i}{j})")
        coef.append(bigF(aset, 4, pt, p) / fk)
    norm = _guard(np.prod([e_pair(aset[4], aset[i], p) for i in (1, 2, 3)]), "prod e(a4, a_i)")
    val = bigF(aset, 4, zeta, p)
    for k, c in zip((1, 2, 3), coef):
        val = val - c * bigF(aset, k, zeta, p)
    return val / norm


def bigG_closed(aset: ParameterSet, k: int, x, p):
    """Closed form of ``G(a_k/x, x)`` for k in {1, 2, 3}; independent of a4."""
    i, j = [m for m in (1, 2, 3) if m != k]
    ak, ai, aj = aset[k], aset[i], aset[j]
    num = theta_prod([ak ** 2, ak * ai * x, ai / x, ak * aj * x, aj / x], p)
    den = theta_prod([ak, ai * aj, ai * aj * ak, ai * ak / aj, aj * ak / ai], p)
    return num / den


def bigG_at_p12_star_closed(aset: ParameterSet, p) -> complex:
    a1, a2, a3 = aset[1], aset[2], aset[3]
    return theta_prod([a1 ** 2, a2 ** 2], p) / theta_prod([a1 * a2 * a3, a1 * a2 / a3], p)


def bigF3prime(aset: ParameterSet, zeta: LogPoint, p):
    """``F'_3 = F_3 - (F_3(p*12) / G(p*12)) G``; vanishes at p*12."""
    star = point_pij_star(aset, 1, 2)
    g_star = _guard(bigG(aset, star, p), "G(p*_12)")
    ratio = bigF(aset, 3, star, p) / g_star
    return bigF(aset, 3, zeta, p) - ratio * bigG(aset, zeta, p)


# -- the space G_eps: phi_ij, phi'_ij -------------------------------------------

@dataclass(frozen=True)
class QuasiThetaFn:
    """A pointwise evaluator ``LogPoint -> complex`` with a label."""

    label: str
    fn: Callable

    def __call__(self, zeta: LogPoint):
        return self.fn(zeta)


def phi_ij(aset: ParameterSet, i: int, j: int, zeta: LogPoint, nome: Nome):
    """``z2^-1/2 theta(-z2, -eps p^1/2 z1 z2, -eps p^1/2 z1 z2^2) e(a_i, z2) e(a_j, z2)``."""
    p = nome.p
    s = aset.epsilon * nome.sqrt_p
    z2 = mono(zeta, 0, 1)
    th = theta(-z2, p) * theta(-s * mono(zeta, 1, 1), p) * theta(-s * mono(zeta, 1, 2), p)
    return mono(zeta, 0, -0.5) * th * e_pair(aset[i], z2, p) * e_pair(aset[j], z2, p)


def phi_prime_ij(aset: ParameterSet, i: int, j: int, zeta: LogPoint, nome: Nome):
    """``z1^-1 z2^-3/2 theta(-eps p^1/2 z2, -z1 z2, -z1 z2^2) e(a_i, z2) e(a_j, z2)``."""
    p = nome.p
    s = aset.epsilon * nome.sqrt_p
    z2 = mono(zeta, 0, 1)
    th = theta(-s * z2, p) * theta(-mono(zeta, 1, 1), p) * theta(-mono(zeta, 1, 2), p)
    return mono(zeta, -1, -1.5) * th * e_pair(aset[i], z2, p) * e_pair(aset[j], z2, p)


def generator(aset: ParameterSet, i: int, j: int, nome: Nome, prime: bool = False) -> QuasiThetaFn:
    """One of the six G_eps generators as a QuasiThetaFn."""
    if prime:
        return QuasiThetaFn(f"phi'_{i}{j}", lambda zeta: phi_prime_ij(aset, i, j, zeta, nome))
    return QuasiThetaFn(f"phi_{i}{j}", lambda zeta: phi_ij(aset, i, j, zeta, nome))


def all_generators(aset: ParameterSet, nome: Nome) -> list:
    return [generator(aset, i, j, nome, prime)
            for prime in (False, True) for i, j in ((1, 2), (1, 3), (2, 3))]


# -- coboundary operators ---------------------------------------------------------

def nabla(phi_fn, aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """``f^+ T_{q,z1}^{1/2} phi + f^- T_{q,z1}^{-1/2} phi``."""
    up = phi_fn(shift_log(zeta, 1, nome.q, 0.5))
    down = phi_fn(shift_log(zeta, 1, nome.q, -0.5))
    return f_plus(aset, zeta, nome.p) * up + f_minus(aset, zeta, nome.p) * down


def nabla_times_phi(phi_fn, aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """``Phi(z) * (nabla phi)(z)`` assembled without the removable singularities of f^+-."""
    up = phi_fn(shift_log(zeta, 1, nome.q, 0.5))
    down = phi_fn(shift_log(zeta, 1, nome.q, -0.5))
    inner = delta_f_plus(aset, zeta, nome.p) * up + delta_f_plus(aset, -zeta, nome.p) * down
    return weyl_denominator(zeta, nome.q) * gamma_numerator(aset, zeta, nome) * inner


def nabla_sym(phi_fn, aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """Sum of ``w.(nabla phi)`` over the 12 Weyl group elements."""
    total = 0.0
    for w in weyl_elements():
        total = total + nabla(phi_fn, aset, act_log(w, zeta), nome)
    return total


def nabla_sym_six_term(phi_fn, aset: ParameterSet, zeta: LogPoint, nome: Nome):
    """``4 sum_k f_k phi_k`` with ``f_k = (s1s2)^k.f^+`` and ``phi_k = (s1s2)^k.T^{1/2}_{q,z1} phi``."""
    total = 0.0
    for w in weyl_elements()[:6]:
        pulled = act_log(w, zeta)
        total = total + f_plus(aset, pulled, nome.p) * phi_fn(shift_log(pulled, 1, nome.q, 0.5))
    return 4 * total


# -- expansion coefficients --------------------------------------------------------

def coeffs_lemma67(aset: ParameterSet, nome: Nome) -> dict:
    """Coefficients of ``nabla_sym phi_12 / 4`` and ``nabla_sym phi'_12 / 4`` in (F1, F2, G).

    Requires the ``"p/q"`` balancing.  Keys: c1, c2, c12, c1p, c2p, c12p.
    """
    p = nome.p
    a1, a2, a3, a4, a5 = aset.a
    s = aset.epsilon * nome.sqrt_pq
    sp = aset.epsilon * nome.sqrt_p
    sq = nome.sqrt_q
    T = lambda *args: theta_prod(args, p)  # noqa: E731

    def side(x, y):
        # the part shared by c_1 (x=a2, y=a1) and c_1' ; c_2 swaps x and y
        return T(x ** 2, x * a3 * a4, x * a3 * a5) / T(x, x / y, x * a3 / y) * T(x * a3, x * a4, x * a5)

    cross = T(a1 * a2 * a3, a1 * a2 / a3, a1 * a2) / (a1 ** 2 * a2 ** 2) * np.prod(
        [T(a1 * ak, a2 * ak) for ak in (a3, a4, a5)])
    return {
        "c1": T(-a3, -s * a2, -s * a2 * a3) * side(a2, a1),
        "c2": T(-a3, -s * a1, -s * a1 * a3) * side(a1, a2),
        "c12": a2 * T(-a1 / a2, -s * a1, -s * a2) * cross,
        "c1p": T(-sp * a3, -sq * a2, -sq * a2 * a3) * side(a2, a1) / (sq * a2),
        "c2p": T(-sp * a3, -sq * a1, -sq * a1 * a3) * side(a1, a2) / (sq * a1),
        "c12p": T(-sp * a1 / a2, -sq * a1, -sq * a2) * cross / sq,
    }


def bigC(aset: ParameterSet, k: int, nome: Nome) -> complex:
    """``C_k`` with ``F_k = C_k G`` modulo the image of nabla_sym (k = 1, 2, 3)."""
    if k not in (1, 2, 3):
        raise DomainError(f"C_k is defined for k = 1, 2, 3 only, got {k}")
    p, q = nome.p, nome.q
    i, j = [m for m in (1, 2, 3) if m != k]
    ak, ai, aj, a4, a5 = aset[k], aset[i], aset[j], aset[4], aset[5]
    num = theta_prod([q * ak ** 2, ai, aj, ak * ai * aj, ak * a4 * a5,
                      ai * aj / ak, ak * aj / ai, ak * ai / aj], p)
    den = ak ** 3 * theta_prod([q * aset[1] * aset[2] * aset[3], ai ** 2, aj ** 2,
                                ai * aj * a4, ai * aj * a5, ai * aj * a4 * a5], p)
    tail = theta_prod([ak * aset[m] for m in range(1, 6) if m != k], p)
    return num / _guard(den, f"C_{k} denominator") * tail


def bigC_from_coeffs(aset: ParameterSet, nome: Nome) -> complex:
    """``C_1`` obtained by eliminating F_2 between the two expansions."""
    c = coeffs_lemma67(aset, nome)
    den = _guard(c["c1"] * c["c2p"] - c["c1p"] * c["c2"], "c1 c2' - c1' c2")
    return (c["c12p"] * c["c2"] - c["c12"] * c["c2p"]) / den


def nd_values(a1, a2, a3, epsilon: int, nome: Nome):
    """The two-term sums N, D and their factorised products.

    Returns ``(N_sum, N_factored, D_sum, D_factored)``.
    """
    p = nome.p
    sq = nome.sqrt_q
    sp = epsilon * nome.sqrt_p
    s = epsilon * nome.sqrt_pq
    T = lambda *args: theta_prod(args, p)  # noqa: E731
    n_sum = (a2 * T(-a1 / a2, -s * a2, -sp * a3, -sq * a1 * a3)
             - a1 * T(-sp * a1 / a2, -sq * a2, -a3, -s * a1 * a3))
    n_fac = a2 * T(sp, s * a2 * a3, sq * a1, a1 * a3 / a2)
    d_sum = (a2 * T(-s * a2, -s * a2 * a3, -sq * a1, -sq * a1 * a3)
             - a1 * T(-sq * a2, -sq * a2 * a3, -s * a1, -s * a1 * a3))
    d_fac = a2 * T(sp, sp * a3, a1 / a2, nome.q * a1 * a2 * a3)
    return n_sum, n_fac, d_sum, d_fac


# -- the evaluation side -------------------------------------------------------------

def j_product(aset: ParameterSet, nome: Nome) -> complex:
    """Closed-form side: Gamma(a_i^2)/Gamma(a_i) times Gamma of all 2-, 3-, 4-fold products."""
    a = aset.a
    out = 1.0 + 0j
    for ai in a:
        out *= elliptic_gamma(ai * ai, nome) / elliptic_gamma(ai, nome)
    for r in (2, 3, 4):
        for combo in itertools.combinations(a, r):
            out *= elliptic_gamma(complex(np.prod(combo)), nome)
    return out


def j_product_ratio_form(aset: ParameterSet, nome: Nome) -> complex:
    """Balanced rewrite with ``Gamma(eps sqrt(pq) a_i)`` and ``Gamma(eps sqrt(pq) a_i a_j)`` divisors."""
    s = aset.epsilon * nome.sqrt_pq
    out = 1.0 + 0j
    for ai in aset.a:
        out *= elliptic_gamma(ai * ai, nome) / (elliptic_gamma(ai, nome) * elliptic_gamma(s * ai, nome))
    for ai, aj in itertools.combinations(aset.a, 2):
        out *= elliptic_gamma(ai * aj, nome) / elliptic_gamma(s * ai * aj, nome)
    return out


def j_product_split_form(aset: ParameterSet, nome: Nome) -> complex:
    """Balanced rewrite after splitting ``Gamma(a^2)`` into eight factors."""
    sp, sq = nome.sqrt_p, nome.sqrt_q
    s = aset.epsilon * nome.sqrt_pq
    args = []
    for ai in aset.a:
        args += [-ai, sp * ai, -sp * ai, sq * ai, -sq * ai, -s * ai]
    for r in (2, 3):
        args += [complex(np.prod(c)) for c in itertools.combinations(aset.a, r)]
    return gamma_prod(args, nome)


def gamma_square_split(u, nome: Nome) -> complex:
    """``Gamma(+-u, +-p^1/2 u, +-q^1/2 u, +-p^1/2 q^1/2 u)``, equal to ``Gamma(u^2)``."""
    sp, sq = nome.sqrt_p, nome.sqrt_q
    args = [sgn * c * u for c in (1, sp, sq, sp * sq) for sgn in (1, -1)]
    return gamma_prod(args, nome)


def _shift_theta_factors(aset: ParameterSet, k: int, b5, c5_sq) -> tuple:
    # shared shape of the q-difference and two-term multipliers; b5 is the new a5
    if k not in (1, 2, 3, 4):
        raise DomainError(f"k must be in 1..4, got {k}")
    a = aset.a
    ak = a[k - 1]
    prod4 = a[0] * a[1] * a[2] * a[3]
    others = [a[i] for i in range(4) if i != k - 1]
    num = [ak ** 2, ak ** 2 * c5_sq[0], b5, prod4]
    den = [b5 ** 2, c5_sq[1], ak, prod4 * b5 / ak]
    num += [ak * ai for ai in others]
    den += [b5 * ai for ai in others]
    for ai, aj in itertools.combinations(others, 2):
        num.append(ak * ai * aj)
        den.append(b5 * ai * aj)
    return num, den


def qde_theta_factors(aset: ParameterSet, k: int, nome: Nome) -> tuple:
    """Theta arguments (numerator, denominator) of the q-difference multiplier."""
    q, a5 = nome.q, aset[5]
    return _shift_theta_factors(aset, k, a5 / q, (q, a5 ** 2 / q))


def two_term_theta_factors(aset: ParameterSet, k: int, nome: Nome) -> tuple:
    """Theta arguments of the two-term multiplier (``"p/q"`` balancing)."""
    q, a5 = nome.q, aset[5]
    return _shift_theta_factors(aset, k, a5, (q, q * a5 ** 2))


def theta_ratio(num, den, p, what: str = "theta ratio") -> complex:
    return theta_prod(num, p) / _guard(theta_prod(den, p), f"{what} denominator")


def qde_theta_ratio(aset: ParameterSet, k: int, nome: Nome) -> complex:
    """Multiplier for ``a_k -> q a_k, a5 -> a5/q`` (k = 1..4) in the q-difference system."""
    return theta_ratio(*qde_theta_factors(aset, k, nome), nome.p, "q-difference")


def two_term_ratio(aset: ParameterSet, k: int, nome: Nome) -> complex:
    """Multiplier ``I(.., q a_k, ..) = I(.., q a5) * ratio`` under the ``"p/q"`` balancing."""
    return theta_ratio(*two_term_theta_factors(aset, k, nome), nome.p, "two-term")


def f1_f2_ratio(aset: ParameterSet, nome: Nome) -> complex:
    """Ratio ``<F_1> / <F_2>`` predicted under the ``"p/q"`` balancing."""
    p, q = nome.p, nome.q
    a1, a2, a3, a4, a5 = aset.a
    num = theta_prod([a1 ** 2, q * a1 ** 2, a2, a1 * a3 * a4 * a5], p)
    den = theta_prod([a2 ** 2, q * a2 ** 2, a1, a2 * a3 * a4 * a5], p)
    for ai in (a3, a4, a5):
        num *= theta(a1 * ai, p)
        den *= theta(a2 * ai, p)
    for ai, aj in itertools.combinations((a3, a4, a5), 2):
        num *= theta(a1 * ai * aj, p)
        den *= theta(a2 * ai * aj, p)
    return a2 ** 3 / a1 ** 3 * num / _guard(den, "F1/F2 denominator")


def j_limit_closed(a2, a3, a4, epsilon: int, nome: Nome) -> complex:
    """Limit of ``(1 - a1 a2) J(a)`` as ``a1 -> 1/a2`` with a5 = eps sqrt(pq)/(a3 a4)."""
    a5 = epsilon * nome.sqrt_pq / (a3 * a4)
    rest = (a3, a4, a5)
    G = lambda *args: gamma_prod(args, nome)  # noqa: E731
    out = G(a2 ** 2, a2 ** -2) / G(a2, 1 / a2) / euler_prefactor(nome)
    for ak in rest:
        out *= G(ak ** 2, a2 * ak, ak / a2)
    for ai, aj in itertools.combinations(rest, 2):
        out *= G(ai * aj) ** 2 * G(a2 * ai * aj, ai * aj / a2)
    return out


# -- quasi-periodicity predicates ------------------------------------------------------

def _shift_multipliers(which: str, zeta: LogPoint, aset: ParameterSet, nome: Nome):
    p, sp = nome.p, nome.sqrt_p
    A = aset.product
    if which == "F":
        return (p * mono(zeta, 2, 3)) ** -2, (p ** 3 * mono(zeta, 3, 6)) ** -2
    if which == "G":
        m2 = aset.epsilon / (p ** 3 * mono(zeta, 3, 6) * p ** 2 * mono(zeta, 0, 4))
        return 1 / (p * mono(zeta, 2, 3)), m2
    if which == "f+":
        return (p / A ** 2 * (sp * mono(zeta, 1, 0)) ** -2 * mono(zeta, 0, -3),
                sp ** 3 / A ** 3 * mono(zeta, -3, 0) * (sp * mono(zeta, 0, 1)) ** -2)
    if which == "f-":
        return (A ** 2 / p * (sp * mono(zeta, 1, 0)) ** -2 * mono(zeta, 0, -3),
                A ** 3 / sp ** 3 * mono(zeta, -3, 0) * (sp * mono(zeta, 0, 1)) ** -2)
    raise DomainError(f"unknown quasi-periodicity class {which!r}")


def quasi_periodicity_residual(fn, which: str, zeta: LogPoint, aset: ParameterSet, nome: Nome) -> float:
    """Largest relative residual of the two defining p-shift relations at zeta.

    ``which`` selects the class: "F", "G" (the epsilon-twisted class), "f+" or "f-".
    """
    m1, m2 = _shift_multipliers(which, zeta, aset, nome)
    base = fn(zeta)
    worst = 0.0
    for axis, m in ((1, m1), (2, m2)):
        shifted = fn(shift_log(zeta, axis, nome.p))
        expect = m * base
        scale = max(abs(shifted), abs(expect), 1e-300)
        worst = max(worst, abs(shifted - expect) / scale)
    return float(worst)
