"""Rectangle-rule integration over the real torus with grid doubling.

For a function analytic in a neighbourhood of the unit torus the uniform
rectangle rule converges geometrically, so the change between successive
grids is a reliable error estimate.  Doubling reuses every node of the
previous grid: the new nodes form three (2-d) or one (1-d) shifted copies of
the old grid.

Summation is a fixed-topology pairwise tree over fixed-size chunks, so the
result does not depend on how many worker threads evaluated the chunks.
"""
from __future__ import annotations

import itertools
import os
import warnings as _warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .g2 import LogPoint
from .integrand import ParameterSet, nabla_times_phi, phi
from .special import Nome, elliptic_gamma, euler_prefactor, qpoch_inf, theta

CHUNK_POINTS = 4096
POLE_SCAN_N = 16
POLE_SCAN_RATIO = 1e6


class QuadratureWarning(UserWarning):
    pass


def _is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True)
class QuadSpec:
    n_start: int = 32
    n_max: int = 512
    rel_tol: float = 1e-9
    doubling: bool = True
    threads: int | None = None

    def __post_init__(self):
        if not (_is_pow2(self.n_start) and _is_pow2(self.n_max)):
            raise DomainError("n_start and n_max must be powers of two")
        if self.n_start > self.n_max:
            raise DomainError("n_start must not exceed n_max")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if not self.doubling:
            raise DomainError("only the doubling strategy is supported")


@dataclass
class IntegralResult:
    value: complex
    est_error: float
    n_used: int
    warnings: list = field(default_factory=list)
    history: list = field(default_factory=list)

    def __post_init__(self):
        if self.est_error < 0:
            raise ValueError("est_error must be non-negative")


def worker_count(spec: QuadSpec | None = None) -> int:
    """Thread cap: QuadSpec.threads, else ELLG2_THREADS, else the CPU count."""
    if spec is not None and spec.threads:
        return max(1, int(spec.threads))
    env = os.environ.get("ELLG2_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def pairwise_sum(values: np.ndarray) -> np.ndarray:
    """Tree reduction over axis 0 in a fixed order (independent of threading)."""
    arr = np.asarray(values)
    if arr.shape[0] == 0:
        return np.zeros(arr.shape[1:], dtype=arr.dtype)
    while arr.shape[0] > 1:
        if arr.shape[0] % 2:
            arr = np.concatenate([arr, np.zeros((1,) + arr.shape[1:], dtype=arr.dtype)])
        arr = arr[0::2] + arr[1::2]
    return arr[0]


# -- grid evaluation ----------------------------------------------------------------

def _eval_chunks(f, points: list, n_workers: int) -> list:
    if n_workers <= 1 or len(points) == 1:
        return [f(pt) for pt in points]
    with ThreadPoolExecutor(max_workers=min(n_workers, len(points))) as pool:
        return list(pool.map(f, points))


def _block_sum(f, zeta1: np.ndarray, zeta2: np.ndarray | None, n_workers: int) -> np.ndarray:
    """Sum of f over the flattened node list, reduced chunk by chunk then across chunks.

    f returns an array whose trailing axis runs over the nodes; leading axes are components.
    """
    n = zeta1.size
    starts = list(range(0, n, CHUNK_POINTS))
    if zeta2 is None:
        points = [zeta1[s:s + CHUNK_POINTS] for s in starts]
    else:
        points = [LogPoint(zeta1[s:s + CHUNK_POINTS], zeta2[s:s + CHUNK_POINTS]) for s in starts]
    parts = _eval_chunks(f, points, n_workers)
    sums = [pairwise_sum(np.moveaxis(np.atleast_1d(np.asarray(v, dtype=complex)), -1, 0)) for v in parts]
    return pairwise_sum(np.stack(sums))


def _grid_2d(n: int, off1: float, off2: float):
    idx = np.arange(n, dtype=float)
    g1, g2 = np.meshgrid((idx + off1) / n, (idx + off2) / n, indexing="ij")
    return g1.ravel().astype(complex), g2.ravel().astype(complex)


def _grid_1d(n: int, off: float):
    return ((np.arange(n, dtype=float) + off) / n).astype(complex)


def _converged(prev: np.ndarray, cur: np.ndarray, rel_tol: float, mask, scale_index) -> tuple:
    diff = np.abs(cur - prev)
    scale = np.maximum(1.0, np.abs(cur))
    if scale_index is not None:
        for i, j in enumerate(scale_index):
            if j is not None:
                scale[i] = max(scale[i], abs(cur[j]))
    sel = np.ones(diff.shape, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    ok = bool(np.all(diff[sel] <= rel_tol * scale[sel]))
    return ok, diff


def _adaptive(f, spec: QuadSpec, dim: int, mask=None, scale_index=None) -> tuple:
    """Integrate a (possibly vector-valued) f; returns (values, errors, n, warnings, history)."""
    n_workers = worker_count(spec)
    n = spec.n_start
    if dim == 2:
        total = _block_sum(f, *_grid_2d(n, 0.0, 0.0), n_workers)
        value = total / (n * n)
    else:
        total = _block_sum(f, _grid_1d(n, 0.0), None, n_workers)
        value = total / n
    history = [(n, value)]
    warn = []
    diff = np.full(np.shape(value), np.inf)
    while True:
        if n >= spec.n_max:
            warn.append(f"not converged to rel_tol={spec.rel_tol:g} at N={n} (n_max reached)")
            _warnings.warn(warn[-1], QuadratureWarning, stacklevel=3)
            break
        # new nodes of the 2n grid are shifted copies of the n grid
        if dim == 2:
            extra = [_block_sum(f, *_grid_2d(n, o1, o2), n_workers)
                     for o1, o2 in ((0.5, 0.0), (0.0, 0.5), (0.5, 0.5))]
            total = pairwise_sum(np.stack([total] + extra))
            n *= 2
            new_value = total / (n * n)
        else:
            total = pairwise_sum(np.stack([total, _block_sum(f, _grid_1d(n, 0.5), None, n_workers)]))
            n *= 2
            new_value = total / n
        ok, diff = _converged(value, new_value, spec.rel_tol, mask, scale_index)
        value = new_value
        history.append((n, value))
        if ok:
            break
    return value, diff, n, warn, history


def _as_result(value, diff, n, warn, history, component=None) -> IntegralResult:
    if component is None:
        hist = [(m, complex(v)) for m, v in history]
        return IntegralResult(complex(value), float(diff), n, list(warn), hist)
    hist = [(m, complex(v[component])) for m, v in history]
    return IntegralResult(complex(value[component]), float(diff[component]), n, list(warn), hist)


def torus_integral_2d(f, spec: QuadSpec | None = None) -> IntegralResult:
    """``(2 pi i)^-2 \\iint f dz1/z1 dz2/z2`` as the mean of f over the uniform grid.

    f receives a LogPoint with real 1-d array coordinates and returns an array.
    """
    spec = spec or QuadSpec()
    return _as_result(*_adaptive(f, spec, 2))


def torus_integral_1d(f, spec: QuadSpec | None = None) -> IntegralResult:
    """One-variable analogue; f receives the array of log coordinates zeta."""
    spec = spec or QuadSpec()
    return _as_result(*_adaptive(f, spec, 1))


def torus_integral_2d_many(f, n_components: int, spec: QuadSpec | None = None,
                           mask=None, scale_index=None) -> list:
    """Several integrals on one grid; f returns an array of shape (n_components, nodes).

    ``mask`` selects the components that decide convergence (default: all).
    ``scale_index[i] = j`` lets component i measure its change against ``|I_j|``
    as well, which matters for integrals that should vanish.
    """
    spec = spec or QuadSpec()
    value, diff, n, warn, history = _adaptive(f, spec, 2, mask, scale_index)
    return [_as_result(value, diff, n, warn, history, c) for c in range(n_components)]


def pole_scan(f, n: int = POLE_SCAN_N) -> tuple:
    """Coarse scan of |f| on a half-cell-offset n x n grid; returns (ratio, warning or None)."""
    g1, g2 = _grid_2d(n, 0.5, 0.5)
    mags = np.abs(np.asarray(f(LogPoint(g1, g2)))).ravel()
    med = float(np.median(mags))
    ratio = float(np.max(mags)) / med if med > 0 else np.inf
    if ratio > POLE_SCAN_RATIO:
        return ratio, f"integrand peaks {ratio:.3g} times its median on the torus: a pole may be close"
    return ratio, None


# -- integrals of the G2 family ----------------------------------------------------------

def _prepare(aset: ParameterSet, nome: Nome, spec: QuadSpec | None):
    aset.check_torus_safe()
    return spec or QuadSpec(), (lambda zeta: phi(aset, zeta, nome))


def i_of_a(aset: ParameterSet, nome: Nome, spec: QuadSpec | None = None) -> IntegralResult:
    """The raw double integral of the G2 integrand over the torus (no prefactor)."""
    spec, f = _prepare(aset, nome, spec)
    _, scan_warn = pole_scan(f)
    res = torus_integral_2d(f, spec)
    if scan_warn:
        res.warnings.insert(0, scan_warn)
    return res


def bracket(phi_fn, aset: ParameterSet, nome: Nome, spec: QuadSpec | None = None):
    """``<phi> = \\iint phi Phi`` over the torus.

    ``phi_fn`` may be one callable or a list of callables; a list is integrated on a
    shared grid (the expensive Gamma factors are evaluated once) and a list of
    results is returned.
    """
    spec, base = _prepare(aset, nome, spec)
    fns = list(phi_fn) if isinstance(phi_fn, (list, tuple)) else [phi_fn]

    def f(zeta):
        w = base(zeta)
        return np.stack([np.broadcast_to(np.asarray(g(zeta), dtype=complex), w.shape) * w for g in fns])

    _, scan_warn = pole_scan(base)
    results = torus_integral_2d_many(f, len(fns), spec)
    if scan_warn:
        for r in results:
            r.warnings.insert(0, scan_warn)
    return results if isinstance(phi_fn, (list, tuple)) else results[0]


def nabla_bracket(phi_fns, aset: ParameterSet, nome: Nome, spec: QuadSpec | None = None) -> list:
    """``<nabla phi>`` for each phi, paired with the scale ``\\iint |Phi nabla phi|``.

    Returns a list of (signed_result, abs_result).  Only the signed integrals
    decide convergence, measured against the absolute ones (which are rough
    scales since |.| is not smooth).
    """
    aset.check_torus_safe()
    spec = spec or QuadSpec()
    fns = list(phi_fns)

    def f(zeta):
        vals = [nabla_times_phi(g, aset, zeta, nome) for g in fns]
        return np.stack(vals + [np.abs(v).astype(complex) for v in vals])

    m = len(fns)
    res = torus_integral_2d_many(f, 2 * m, spec, mask=[True] * m + [False] * m,
                                 scale_index=[m + i for i in range(m)] + [None] * m)
    return [(res[i], res[m + i]) for i in range(m)]


# -- one-dimensional and q-limit integrals ---------------------------------------------

def bc1_integrand(t, nome: Nome):
    """``prod_k Gamma(t_k x^{+-1}) / Gamma(x^{+-2})`` as a function of the log coordinate."""
    t = [complex(x) for x in t]

    def f(zeta):
        x = np.exp(2j * np.pi * np.asarray(zeta, dtype=complex))
        args = np.stack([tk * x ** s for tk in t for s in (1, -1)])
        num = np.prod(elliptic_gamma(args, nome), axis=0)
        x2 = x * x
        # 1/Gamma(u, 1/u) = -theta(u;p) theta(u;q) / u, entire in u
        return num * (-theta(x2, nome.p) * theta(x2, nome.q) / x2)
    return f


def bc1_integral(t, nome: Nome, spec: QuadSpec | None = None, bal_tol: float = 1e-12) -> IntegralResult:
    """``(p;p)(q;q)/2`` times the one-dimensional torus integral of the BC1 integrand."""
    t = [complex(x) for x in t]
    if len(t) != 6:
        raise DomainError(f"expected 6 parameters, got {len(t)}")
    bad = [k + 1 for k, x in enumerate(t) if not abs(x) < 1]
    if bad:
        raise DomainError(f"BC1 integral needs |t_k| < 1; violated for k={bad}")
    pq = nome.p * nome.q
    if abs(np.prod(t) - pq) > bal_tol * abs(pq):
        raise DomainError(f"BC1 balancing t1...t6 = pq violated: product {np.prod(t)}, pq = {pq}")
    res = torus_integral_1d(bc1_integrand(t, nome), spec or QuadSpec())
    pref = euler_prefactor(nome) / 2
    res.value *= pref
    res.est_error *= abs(pref)
    res.history = [(n, v * pref) for n, v in res.history]
    return res


_X_PAIRS = list(itertools.combinations(range(3), 2))


def gustafson_integrand(a, q):
    """Ratio of q-Pochhammer products in Gustafson's G2 q-beta integral (p = 0)."""
    a = [complex(x) for x in a]

    def f(zeta: LogPoint):
        xs = (zeta.x1, zeta.x2, zeta.x3)
        num = 1.0
        for i, j in _X_PAIRS:
            xi, xj = xs[i], xs[j]
            for u in (xi * xj, xj / xi, xi / xj, 1 / (xi * xj)):
                num = num * qpoch_inf(u, q)
        den = 1.0
        for x in xs:
            for ak in a:
                den = den * qpoch_inf(ak * x, q) * qpoch_inf(ak / x, q)
        return num / den
    return f


def gustafson_q_integral(a, q, spec: QuadSpec | None = None) -> IntegralResult:
    """``(q;q)^2/12`` times the torus integral of the Gustafson integrand."""
    a = [complex(x) for x in a]
    if len(a) != 4:
        raise DomainError(f"expected 4 parameters, got {len(a)}")
    if not abs(complex(q)) < 1:
        raise DomainError(f"need |q| < 1, got {q}")
    bad = [k + 1 for k, x in enumerate(a) if not abs(x) < 1]
    if bad:
        raise DomainError(f"Gustafson integral needs |a_k| < 1; violated for k={bad}")
    res = torus_integral_2d(gustafson_integrand(a, q), spec or QuadSpec())
    pref = qpoch_inf(q, q) ** 2 / 12
    res.value *= pref
    res.est_error *= abs(pref)
    res.history = [(n, v * pref) for n, v in res.history]
    return res


def gustafson_rhs(a, q) -> complex:
    a = [complex(x) for x in a]
    P = np.prod(a)
    out = qpoch_inf(P * P, q) / qpoch_inf(P, q)
    for ai in a:
        out *= qpoch_inf(ai, q) / qpoch_inf(ai * ai, q)
    for r in (2, 3):
        for combo in itertools.combinations(a, r):
            out /= qpoch_inf(complex(np.prod(combo)), q)
    return complex(out)


def g2_prefactor(nome: Nome) -> complex:
    """``(p;p)^2 (q;q)^2 / 12``."""
    return euler_prefactor(nome) ** 2 / 12

