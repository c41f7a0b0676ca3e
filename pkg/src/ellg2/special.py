"""Truncated-product special functions: q-Pochhammer symbols, theta, elliptic gamma.

All functions accept complex scalars or numpy arrays and return the same
shape.  Products start at index 0, i.e. ``(u;q)_inf = prod_{n>=0} (1 - q^n u)``.

Truncation keeps every factor whose deviation from 1 can exceed ``tol``:
for the single product the index ``n`` runs until ``|q|^n * max(1, |u|) < tol``,
for the double product over the lattice points ``(m, n)`` with
``|p|^m |q|^n * max(1, |u|) >= tol``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

DEFAULT_TOL = 1e-17
DEFAULT_MAX_TERMS = 10_000
POLE_GUARD = 1e-13


@dataclass(frozen=True)
class Nome:
    """The pair of elliptic bases ``p`` and ``q`` plus the truncation policy."""

    p: complex
    q: complex
    trunc_tol: float = DEFAULT_TOL
    max_terms: int = DEFAULT_MAX_TERMS

    def __post_init__(self):
        object.__setattr__(self, "p", complex(self.p))
        object.__setattr__(self, "q", complex(self.q))
        if not (abs(self.p) < 1 and abs(self.q) < 1):
            raise DomainError(f"nome requires |p| < 1 and |q| < 1, got p={self.p}, q={self.q}")
        if not self.trunc_tol > 0:
            raise DomainError("trunc_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")

    @property
    def sqrt_p(self) -> complex:
        return cmath.sqrt(self.p)

    @property
    def sqrt_q(self) -> complex:
        return cmath.sqrt(self.q)

    @property
    def sqrt_pq(self) -> complex:
        """``p^{1/2} q^{1/2}`` built from the two principal roots."""
        return cmath.sqrt(self.p) * cmath.sqrt(self.q)

    def with_p(self, p: complex) -> "Nome":
        return Nome(p, self.q, self.trunc_tol, self.max_terms)


# -- truncation lattices -----------------------------------------------------

def _scale_bucket(umax: float) -> float:
    # round up to a power of two so lattices can be cached
    if umax <= 1.0:
        return 1.0
    return 2.0 ** math.ceil(math.log2(umax))


@lru_cache(maxsize=256)
def _single_lattice(q: complex, tol: float, max_terms: int) -> np.ndarray:
    powers = []
    c = 1.0 + 0j
    while abs(c) >= tol:
        powers.append(c)
        if len(powers) > max_terms:
            raise ConvergenceError(f"(u;q) needs more than {max_terms} factors for |q|={abs(q):.6g}")
        c = c * q
    return np.array(powers, dtype=complex)


@lru_cache(maxsize=256)
def _double_lattice(p: complex, q: complex, tol: float, max_terms: int) -> np.ndarray:
    points = []
    pm = 1.0 + 0j
    rows = 0
    while abs(pm) >= tol:
        rows += 1
        if rows > max_terms:
            raise ConvergenceError(f"(u;p,q) needs more than {max_terms} rows for |p|={abs(p):.6g}")
        c = pm
        cols = 0
        while abs(c) >= tol:
            points.append(c)
            cols += 1
            if cols > max_terms:
                raise ConvergenceError(f"(u;p,q) needs more than {max_terms} columns for |q|={abs(q):.6g}")
            c = c * q
        pm = pm * p
    # traverse by increasing |p^m q^n| so the small factors multiply last
    points.sort(key=lambda c: -abs(c))
    return np.array(points, dtype=complex)


def _as_complex_array(u):
    arr = np.asarray(u, dtype=complex)
    return arr, arr.ndim == 0


def _max_abs(arr: np.ndarray) -> float:
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


_OUTER_LIMIT = 1 << 16


def _lattice_product(u: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    if u.size * coeffs.size <= _OUTER_LIMIT:
        # one vectorised pass; multiply.reduce runs left to right like the loop below
        flat = u.reshape(-1)
        return np.multiply.reduce(1.0 - np.multiply.outer(flat, coeffs), axis=1).reshape(u.shape)
    acc = np.ones_like(u)
    tmp = np.empty_like(u)
    for c in coeffs:
        np.multiply(u, c, out=tmp)
        np.subtract(1.0, tmp, out=tmp)
        acc *= tmp
    return acc


def _unwrap(arr: np.ndarray, scalar: bool):
    return complex(arr) if scalar else arr


# -- public functions ----------------------------------------------------------

def qpoch_inf(u, q, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS):
    """Infinite q-Pochhammer symbol ``(u;q)_inf = prod_{n>=0} (1 - q^n u)``.

    >>> round(qpoch_inf(0.5, 0.5).real, 10)
    0.2887880951
    """
    q = complex(q)
    if not abs(q) < 1:
        raise DomainError(f"qpoch_inf requires |q| < 1, got {q}")
    arr, scalar = _as_complex_array(u)
    coeffs = _single_lattice(q, tol / _scale_bucket(_max_abs(arr)), max_terms)
    return _unwrap(_lattice_product(arr, coeffs), scalar)


def qpoch_double_inf(u, nome: Nome):
    """Double Pochhammer symbol ``(u;p,q)_inf = prod_{m,n>=0} (1 - p^m q^n u)``."""
    arr, scalar = _as_complex_array(u)
    coeffs = _double_lattice(nome.p, nome.q, nome.trunc_tol / _scale_bucket(_max_abs(arr)), nome.max_terms)
    return _unwrap(_lattice_product(arr, coeffs), scalar)


def theta(u, p, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS):
    """Theta function ``theta(u;p) = (u;p)_inf (p/u;p)_inf``."""
    p = complex(p)
    if not abs(p) < 1:
        raise DomainError(f"theta requires |p| < 1, got {p}")
    arr, scalar = _as_complex_array(u)
    if np.any(arr == 0):
        raise DomainError("theta(u;p) is undefined at u = 0")
    val = qpoch_inf(arr, p, tol, max_terms) * qpoch_inf(p / arr, p, tol, max_terms)
    return _unwrap(np.asarray(val), scalar)


def theta_prod(args, p):
    """``theta(u_1, ..., u_m; p)``, the product of theta values."""
    out = 1.0 + 0j
    for u in args:
        out = out * theta(u, p)
    return out


def elliptic_gamma(u, nome: Nome):
    """Ruijsenaars elliptic gamma ``(pq/u;p,q)_inf / (u;p,q)_inf``.

    Raises PoleError when some retained factor ``1 - p^m q^n u`` of the
    denominator has modulus below 1e-13.
    """
    arr, scalar = _as_complex_array(u)
    if np.any(arr == 0):
        raise DomainError("elliptic gamma is undefined at u = 0")
    pq = nome.p * nome.q
    w = pq / arr
    umax = max(_max_abs(arr), _max_abs(w))
    coeffs = _double_lattice(nome.p, nome.q, nome.trunc_tol / _scale_bucket(umax), nome.max_terms)
    den = _lattice_product(arr, coeffs)
    _guard_poles(arr, den, coeffs)
    num = _lattice_product(w, coeffs)
    return _unwrap(num / den, scalar)


def _guard_poles(u: np.ndarray, den: np.ndarray, coeffs: np.ndarray) -> None:
    # a factor below POLE_GUARD forces |den| < POLE_GUARD * prod(1 + |c u|)
    bound = POLE_GUARD * np.exp(np.sum(np.abs(coeffs)) * np.abs(u))
    suspects = np.flatnonzero(np.abs(den).ravel() < bound.ravel())
    for idx in suspects:
        x = u.ravel()[idx]
        if np.min(np.abs(1.0 - coeffs * x)) < POLE_GUARD:
            raise PoleError(f"elliptic gamma evaluated within {POLE_GUARD:g} of a pole at u={x}")


def gamma_prod(args, nome: Nome):
    """``Gamma(u_1, ..., u_m; p, q)``, the product of elliptic gamma values."""
    out = 1.0 + 0j
    for u in args:
        out = out * elliptic_gamma(u, nome)
    return out


def e_pair(u, v, p):
    """``e(u,v;p) = u^{-1} theta(uv;p) theta(u/v;p)``; antisymmetric in (u, v)."""
    u_arr, su = _as_complex_array(u)
    v_arr, sv = _as_complex_array(v)
    if np.any(u_arr == 0) or np.any(v_arr == 0):
        raise DomainError("e(u,v;p) requires nonzero arguments")
    val = theta(u_arr * v_arr, p) * theta(u_arr / v_arr, p) / u_arr
    return _unwrap(np.asarray(val), su and sv)


def euler_prefactor(nome: Nome) -> complex:
    """``(p;p)_inf (q;q)_inf``; callers square it where the formulas need it."""
    return qpoch_inf(nome.p, nome.p, nome.trunc_tol, nome.max_terms) * qpoch_inf(
        nome.q, nome.q, nome.trunc_tol, nome.max_terms
    )
