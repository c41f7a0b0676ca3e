"""G2 root system in simple-root coordinates.

Points of the complex torus are carried as logarithmic coordinates
``zeta = (zeta1, zeta2)`` with ``z_i = exp(2 pi i zeta_i)``.  A monomial
``z^lam = z1^lam1 z2^lam2`` with half-integer exponents is evaluated as
``exp(2 pi i (lam1 zeta1 + lam2 zeta2))``, which is single-valued in zeta and
makes the Weyl action exact integer arithmetic.

Weyl elements are stored by the integer matrix ``M`` of ``lam -> w lam`` in the
basis (alpha1, alpha2); column j holds the image of alpha_j.  Functions are
acted on by pull-back, ``(w.f)(zeta) = f(M^T zeta)``, which reproduces
``s1.f(z1, z2) = f(1/z1, z1 z2)`` and ``s2.f(z1, z2) = f(z1 z2^3, 1/z2)``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .special import theta

TWO_PI_I = 2j * np.pi

# Gram matrix of (alpha1, alpha2): alpha1 long (length^2 2), alpha2 short (2/3)
GRAM = np.array([[Fraction(2), Fraction(-1)], [Fraction(-1), Fraction(2, 3)]])

# fundamental weights and coweights in the alpha basis
VARPI1 = (2, 3)
VARPI2 = (1, 2)
OMEGA1 = VARPI1
OMEGA2 = (3 * VARPI2[0], 3 * VARPI2[1])

POSITIVE_ROOTS = ((0, 1), (1, 1), (1, 2), (1, 0), (1, 3), (2, 3))


def inner(lam, mu) -> Fraction:
    """Invariant inner product of two vectors given in the alpha basis."""
    return sum(GRAM[i, j] * lam[i] * mu[j] for i in range(2) for j in range(2))


def coroot(alpha):
    norm = inner(alpha, alpha)
    return tuple(Fraction(2) * a / norm for a in alpha)


@dataclass(frozen=True)
class LogPoint:
    """Torus point in logarithmic coordinates; fields may be scalars or arrays."""

    zeta1: complex
    zeta2: complex

    @classmethod
    def from_z(cls, z1, z2) -> "LogPoint":
        """Principal-branch logarithms of ``(z1, z2)``."""
        return cls(np.log(np.asarray(z1, dtype=complex)) / TWO_PI_I,
                   np.log(np.asarray(z2, dtype=complex)) / TWO_PI_I)._squeeze()

    def _squeeze(self) -> "LogPoint":
        z1, z2 = self.zeta1, self.zeta2
        if np.ndim(z1) == 0:
            z1 = complex(z1)
        if np.ndim(z2) == 0:
            z2 = complex(z2)
        return LogPoint(z1, z2)

    @property
    def z1(self):
        return np.exp(TWO_PI_I * self.zeta1)

    @property
    def z2(self):
        return np.exp(TWO_PI_I * self.zeta2)

    def to_z(self):
        return self.z1, self.z2

    # x-coordinates with x1 x2 x3 = 1
    @property
    def x1(self):
        return np.exp(TWO_PI_I * (self.zeta1 + self.zeta2))

    @property
    def x2(self):
        return self.z2

    @property
    def x3(self):
        return np.exp(-TWO_PI_I * (self.zeta1 + 2 * self.zeta2))

    def __neg__(self) -> "LogPoint":
        return LogPoint(-self.zeta1, -self.zeta2)


@dataclass(frozen=True)
class MonomialExp:
    """Exponent ``lam = lam1 alpha1 + lam2 alpha2`` with half-integer entries.

    Stored doubled so that arithmetic stays exact.
    """

    two_lam1: int
    two_lam2: int

    @classmethod
    def of(cls, lam1, lam2) -> "MonomialExp":
        t1, t2 = Fraction(lam1) * 2, Fraction(lam2) * 2
        if t1.denominator != 1 or t2.denominator != 1:
            raise ValueError(f"exponents must be half-integers, got ({lam1}, {lam2})")
        return cls(int(t1), int(t2))

    @property
    def lam1(self) -> Fraction:
        return Fraction(self.two_lam1, 2)

    @property
    def lam2(self) -> Fraction:
        return Fraction(self.two_lam2, 2)

    def transformed(self, w: "WeylElement") -> "MonomialExp":
        """The exponent ``w lam``."""
        v = w.matrix @ np.array([self.two_lam1, self.two_lam2])
        return MonomialExp(int(v[0]), int(v[1]))


def eval_monomial(lam, zeta: LogPoint):
    """``z^lam`` evaluated on the branch fixed by zeta.

    ``lam`` may be a MonomialExp or a pair of numbers (half-integers expected).
    """
    if isinstance(lam, MonomialExp):
        l1, l2 = lam.two_lam1 / 2, lam.two_lam2 / 2
    else:
        l1, l2 = float(lam[0]), float(lam[1])
    return np.exp(TWO_PI_I * (l1 * zeta.zeta1 + l2 * zeta.zeta2))


def mono(zeta: LogPoint, l1, l2):
    """Shorthand for ``eval_monomial((l1, l2), zeta)``."""
    return np.exp(TWO_PI_I * (l1 * zeta.zeta1 + l2 * zeta.zeta2))


@dataclass(frozen=True)
class WeylElement:
    matrix: np.ndarray
    sign: int
    word: str

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __eq__(self, other):
        return isinstance(other, WeylElement) and np.array_equal(self.matrix, other.matrix)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.matrix @ other.matrix, self.sign * other.sign, self.word + other.word)

    def __repr__(self):
        return f"WeylElement({self.word or 'e'}, {self.matrix.tolist()}, sign={self.sign:+d})"


S1 = WeylElement(np.array([[-1, 1], [0, 1]]), -1, "1")
S2 = WeylElement(np.array([[1, 0], [3, -1]]), -1, "2")
IDENTITY = WeylElement(np.eye(2, dtype=int), 1, "")


@lru_cache(maxsize=1)
def weyl_elements() -> tuple:
    """The 12 elements, ordered ``(s1 s2)^k`` for k = 0..5 then ``(s1 s2)^k s2``."""
    rot = S1 * S2
    rotations = [IDENTITY]
    for _ in range(5):
        rotations.append(rotations[-1] * rot)
    return tuple(rotations + [r * S2 for r in rotations])


def longest_element() -> WeylElement:
    return weyl_elements()[3]


def act_log(w: WeylElement, zeta: LogPoint) -> LogPoint:
    """Pull-back point for ``w``: ``(w.f)(zeta) = f(act_log(w, zeta))``.

    Composition follows ``act_log(w, act_log(v, zeta)) == act_log(v * w, zeta)``.
    """
    m = w.matrix
    return LogPoint(m[0, 0] * zeta.zeta1 + m[1, 0] * zeta.zeta2,
                    m[0, 1] * zeta.zeta1 + m[1, 1] * zeta.zeta2)


def shift_log(zeta: LogPoint, axis: int, base: complex, fraction=1) -> LogPoint:
    """Shift ``z_axis -> base^fraction z_axis`` in log coordinates (principal log of base)."""
    step = float(Fraction(fraction)) * cmath.log(complex(base)) / TWO_PI_I
    if axis == 1:
        return LogPoint(zeta.zeta1 + step, zeta.zeta2)
    if axis == 2:
        return LogPoint(zeta.zeta1, zeta.zeta2 + step)
    raise ValueError(f"axis must be 1 or 2, got {axis}")


# exponents of the theta arguments in the Weyl denominator
_DENOM_MONOMIALS = ((0, 1), (1, 1), (1, 2), (1, 0), (1, 3), (2, 3))


def weyl_denominator(zeta: LogPoint, p: complex):
    """Elliptic Weyl denominator ``z1^-3 z2^-5 prod_{alpha>0} theta(z^alpha; p)``.

    Alternating under the Weyl group: ``Delta(w.z) = sgn(w) Delta(z)``.
    """
    out = mono(zeta, -3, -5)
    for l1, l2 in _DENOM_MONOMIALS:
        out = out * theta(mono(zeta, l1, l2), p)
    return out
