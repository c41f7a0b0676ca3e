"""Named numerical checks, each producing a pass/fail Report.

Conventions for a Report:

* identities ``lhs = rhs`` use ``rel_err = |lhs - rhs| / max(|lhs|, |rhs|, 1e-300)``;
* residual-style checks (vanishing quantities, trend ratios) report the
  normalised residual as ``lhs`` with ``rhs = 0`` and pass on ``abs_err <= tol``;
* informational reports carry ``passed = None`` and never affect exit codes.
"""
from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, EllipticError
from .g2 import LogPoint
from .integrand import (
    ParameterSet,
    all_generators,
    balancing_residual,
    bigC,
    bigC_from_coeffs,
    bigF,
    bigF3prime,
    bigF_at_pij_closed,
    bigG,
    bigG_at_p12_star_closed,
    bigG_closed,
    coeffs_lemma67,
    f1_f2_ratio,
    generator,
    gamma_square_split,
    j_limit_closed,
    j_product,
    make_balanced,
    nabla_sym,
    nd_values,
    point_pij,
    point_pij_star,
    qde_theta_factors,
    theta_ratio,
    two_term_theta_factors,
    QuasiThetaFn,
)
from .quadrature import (
    QuadSpec,
    bc1_integral,
    bc1_integrand,
    bracket,
    g2_prefactor,
    gustafson_q_integral,
    gustafson_rhs,
    i_of_a,
    nabla_bracket,
    torus_integral_1d,
)
from .special import Nome, e_pair, elliptic_gamma, euler_prefactor, gamma_prod, theta

SCHEMA_VERSION = 1


def _cx(z) -> dict | None:
    if z is None:
        return None
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _jsonable(obj):
    if isinstance(obj, (complex, np.complexfloating)):
        return _cx(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


@dataclass
class Report:
    check_id: str
    params: dict
    lhs: complex | None
    rhs: complex | None
    abs_err: float
    rel_err: float
    tol: float
    passed: bool | None
    n_used: int = 0
    runtime_ms: float = 0.0
    warnings: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, check_id, params, lhs, rhs, tol, *, n_used=0, started=None,
                warnings=None, details=None, informational=False) -> "Report":
        lhs, rhs = complex(lhs), complex(rhs)
        abs_err = abs(lhs - rhs)
        rel_err = abs_err / max(abs(lhs), abs(rhs), 1e-300)
        if informational:
            ok = None
        elif rhs == 0:
            ok = bool(abs_err <= tol)
        else:
            ok = bool(rel_err <= tol)
        runtime = 0.0 if started is None else (time.perf_counter() - started) * 1e3
        return cls(check_id, params, lhs, rhs, float(abs_err), float(rel_err), float(tol), ok,
                   int(n_used), runtime, list(warnings or []), dict(details or {}))

    @classmethod
    def residual(cls, check_id, params, value, tol, **kw) -> "Report":
        """Report for a normalised residual that should be (near) zero.

        The residual is already relative, so ``rel_err`` carries it unchanged."""
        rep = cls.compare(check_id, params, value, 0.0, tol, **kw)
        rep.rel_err = rep.abs_err
        return rep

    @classmethod
    def error(cls, check_id, params, message: str) -> "Report":
        return cls(check_id, params, None, None, math.inf, math.inf, 0.0, False, 0, 0.0, [message], {})

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "check_id": self.check_id,
            "params": _jsonable(self.params),
            "lhs": _cx(self.lhs),
            "rhs": _cx(self.rhs),
            "abs_err": _jsonable(self.abs_err),
            "rel_err": _jsonable(self.rel_err),
            "tol": self.tol,
            "pass": self.passed,
            "n_used": self.n_used,
            "runtime_ms": self.runtime_ms,
            "warnings": list(self.warnings),
            "details": _jsonable(self.details),
        }

    def summary(self) -> str:
        status = {True: "PASS", False: "FAIL", None: "INFO"}[self.passed]
        return f"{status} {self.check_id}: rel_err={self.rel_err:.3e} abs_err={self.abs_err:.3e} tol={self.tol:.1e}"


def echo(nome: Nome | None = None, a=None, epsilon=None, **extra) -> dict:
    out = {}
    if nome is not None:
        out["p"], out["q"] = nome.p, nome.q
    if a is not None:
        out["a"] = [complex(x) for x in a]
    if epsilon is not None:
        out["epsilon"] = epsilon
    out.update(extra)
    return out


# -- parameter sampling ---------------------------------------------------------------

DOMAINS = ("torus-safe", "U0", "V0", "qde-safe")


@dataclass
class ParamSampler:
    """Seeded draws of a1..a4 (plus the balancing a5) from a chosen domain.

    Moduli are uniform in ``[r_min, r_max]``; phases uniform in ``[-max_phase, max_phase]``.
    ``max_modulus`` rejects draws with any |a_k| (a5 included) at or above it, which keeps
    the integrand's poles a usable distance from the torus.
    """

    seed: int = 0
    r_min: float = 0.45
    r_max: float = 0.8
    max_phase: float = 0.5
    domain: str = "U0"
    max_tries: int = 10_000
    max_modulus: float = 1.0

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise DomainError(f"unknown domain {self.domain!r}; choose from {DOMAINS}")
        if not 0 < self.r_min <= self.r_max:
            raise DomainError("need 0 < r_min <= r_max")
        self.rng = np.random.default_rng(self.seed)

    def complex_draw(self, n: int, r_min=None, r_max=None, max_phase=None) -> np.ndarray:
        lo = self.r_min if r_min is None else r_min
        hi = self.r_max if r_max is None else r_max
        ph = self.max_phase if max_phase is None else max_phase
        r = self.rng.uniform(lo, hi, n)
        t = self.rng.uniform(-ph, ph, n)
        return r * np.exp(1j * t)

    def accepts(self, aset: ParameterSet, nome: Nome) -> bool:
        a = np.abs(aset.a)
        if np.any(a >= self.max_modulus):
            return False
        prod4 = float(np.prod(a[:4]))
        if self.domain == "torus-safe":
            return bool(np.all(a < 1))
        if self.domain == "U0":
            return bool(np.all(a[:4] < 1) and prod4 > math.sqrt(abs(nome.p) * abs(nome.q)))
        in_v0 = bool(np.all(a[:4] < 1) and prod4 > math.sqrt(abs(nome.p) / abs(nome.q)))
        if self.domain == "V0":
            return in_v0
        # qde-safe: V0, |p| < |q|, |a5| < |q| and every shifted set torus-safe
        return in_v0 and abs(nome.p) < abs(nome.q) and a[4] < abs(nome.q) and bool(
            np.all(a[:4] * abs(nome.q) < 1))

    def draw(self, nome: Nome, epsilon: int = 1, target: str = "pq") -> ParameterSet:
        for _ in range(self.max_tries):
            a = self.complex_draw(4)
            aset = make_balanced(*a, epsilon, nome, target)
            if self.accepts(aset, nome):
                return aset
        raise DomainError(f"no draw in domain {self.domain} after {self.max_tries} tries")


# -- the main evaluation and its specialisations ----------------------------------------

def _require_balanced(aset: ParameterSet, nome: Nome, kind: str, tol: float = 1e-12) -> None:
    if aset.balance not in (None, kind):
        raise DomainError(f"expected {kind!r} balancing, got {aset.balance!r}")
    probe = replace(aset, balance=kind)
    if balancing_residual(probe, nome) > tol:
        raise DomainError(f"parameters violate the {kind!r} balancing condition")


def check_g2_theorem(aset: ParameterSet, nome: Nome, spec: QuadSpec | None = None,
                     tol: float = 1e-6, check_id: str = "g2") -> Report:
    """Prefactored torus integral of the G2 integrand against the Gamma product."""
    t0 = time.perf_counter()
    _require_balanced(aset, nome, "pq")
    aset.check_torus_safe()
    for ai, aj in itertools.combinations(aset.a, 2):
        if abs(1 - ai * aj) < 1e-12:
            raise DomainError("a_i a_j = 1 puts the Gamma product on a pole")
    rhs = j_product(aset, nome)
    res = i_of_a(aset, nome, spec)
    lhs = g2_prefactor(nome) * res.value
    return Report.compare(check_id, echo(nome, aset.a, aset.epsilon), lhs, rhs, tol,
                          n_used=res.n_used, started=t0, warnings=res.warnings,
                          details={"raw_integral": res.value, "est_error": res.est_error,
                                   "ratio_lhs_over_rhs": lhs / rhs})


def check_g2_sampled(nomes, epsilon: int = 1, seed: int = 0, spec: QuadSpec | None = None,
                     tol: float = 1e-6, domain: str = "U0", max_modulus: float = 0.9,
                     check_id: str = "g2_sampled") -> list:
    """The G2 evaluation at one seeded parameter draw per nome.

    Mixing nomes with |p| < |q| and |p| > |q| exercises the theorem outside the
    range used by the q-difference argument.
    """
    sampler = ParamSampler(seed=seed, domain=domain, max_modulus=max_modulus)
    out = []
    for nome in nomes:
        aset = sampler.draw(nome, epsilon)
        tag = "p<q" if abs(nome.p) < abs(nome.q) else "p>=q"
        rep = check_g2_theorem(aset, nome, spec, tol, check_id=f"{check_id}[{tag}]")
        rep.params["seed"] = seed
        out.append(rep)
    return out


def qde_outside_domain(nome: Nome, check_id: str = "qde_outside") -> Report:
    """Exploratory: can the q-difference system be tested with |p| >= |q|?

    It cannot in this setting.  |a5| < |q| with a5 = eps sqrt(pq)/(a1..a4) needs
    |a1..a4| > sqrt(|p|/|q|) >= 1, which contradicts |a_k| < 1.  The report is
    informational and records that the admissible set is empty.
    """
    t0 = time.perf_counter()
    bound = math.sqrt(abs(nome.p) / abs(nome.q))
    empty = bound >= 1
    details = {"needed_abs_product_above": bound, "admissible_set_empty": empty}
    return Report.compare(check_id, echo(nome), complex(bound), 1.0, 0.0, started=t0, details=details,
                          informational=True)


def check_bc1(t, nome: Nome, spec: QuadSpec | None = None, tol: float = 1e-9,
              check_id: str = "bc1") -> Report:
    t0 = time.perf_counter()
    t = [complex(x) for x in t]
    res = bc1_integral(t, nome, spec)
    rhs = gamma_prod([x * y for x, y in itertools.combinations(t, 2)], nome)
    return Report.compare(check_id, echo(nome, t), res.value, rhs, tol, n_used=res.n_used,
                          started=t0, warnings=res.warnings)


def check_gustafson(a, q, spec: QuadSpec | None = None, tol: float = 1e-8,
                    check_id: str = "gustafson") -> Report:
    t0 = time.perf_counter()
    res = gustafson_q_integral(a, q, spec)
    rhs = gustafson_rhs(a, q)
    return Report.compare(check_id, echo(None, a, q=complex(q)), res.value, rhs, tol,
                          n_used=res.n_used, started=t0, warnings=res.warnings)


def check_remark1_limit(a, q, p_sequence=(0.1, 0.05, 0.025, 0.0125), spec: QuadSpec | None = None,
                        epsilon: int = 1, check_id: str = "remark1", tol: float | None = None) -> Report:
    """Elliptic G2 evaluation with a5 = eps (pq)^{1/2}/(a1...a4) tends to Gustafson's as p -> 0.

    Writing a5 = p^{1/2} b5 keeps b5 = eps q^{1/2}/(a1...a4) fixed, so this is the
    substitution a5 -> p^{1/2} a5 followed by p -> 0.  With two or more p values the
    check passes iff the deviation decreases strictly; the reported residual is the
    largest ratio of consecutive deviations.  A single p is a plain comparison,
    informational unless ``tol`` is given.
    """
    t0 = time.perf_counter()
    if not abs(complex(q)) < 1:
        raise DomainError(f"need |q| < 1, got {q}")
    ps = [complex(p) for p in p_sequence]
    if not ps:
        raise DomainError("p_sequence must not be empty")
    target = gustafson_q_integral(a, q, spec)
    rows, warn, n_used = [], list(target.warnings), target.n_used
    for p in ps:
        nome = Nome(p, q)
        aset = make_balanced(*a, epsilon, nome)
        res = i_of_a(aset, nome, spec)
        val = g2_prefactor(nome) * res.value
        dev = abs(val - target.value) / abs(target.value)
        rows.append({"p": p, "a5": aset[5], "elliptic": val, "rel_deviation": dev,
                     "j_product": j_product(aset, nome)})
        warn += res.warnings
        n_used = max(n_used, res.n_used)
    details = {"gustafson": target.value, "trend": rows}
    params = echo(None, a, epsilon, q=complex(q), p_sequence=ps)
    if len(ps) == 1:
        return Report.compare(check_id, params, rows[0]["elliptic"], target.value,
                              tol if tol is not None else 0.0, n_used=n_used, started=t0,
                              warnings=warn, details=details, informational=tol is None)
    devs = [r["rel_deviation"] for r in rows]
    worst = max(d2 / d1 for d1, d2 in zip(devs, devs[1:]))
    details["worst_ratio"] = worst
    return Report.residual(check_id, params, worst, np.nextafter(1.0, 0.0), n_used=n_used,
                           started=t0, warnings=warn, details=details)


# -- q-difference structure ---------------------------------------------------------------

def _check_k(k: int, allowed=(1, 2, 3, 4)) -> None:
    if k not in allowed:
        raise DomainError(f"k must be one of {allowed}, got {k}")


def _require_qde_safe(aset: ParameterSet, nome: Nome) -> None:
    if not abs(nome.p) < abs(nome.q):
        raise DomainError("the q-difference system is stated for |p| < |q|")
    if not abs(aset[5]) < abs(nome.q):
        raise DomainError("the q-difference system needs |a5| < |q|")
    aset.check_torus_safe()
    if not all(abs(nome.q * aset[k]) < 1 for k in range(1, 5)):
        raise DomainError("shifted parameters leave the unit disc")


def _shift_report(check_id, k, aset, nome, base: complex, shifted: complex, num, den, tol, t0,
                  n_used, warnings, controls: bool) -> list:
    ratio = theta_ratio(num, den, nome.p)
    rhs = base * ratio
    params = echo(nome, aset.a, aset.epsilon, k=k)
    details = {"ratio_lhs": shifted / base, "ratio_rhs": ratio}
    out = [Report.compare(f"{check_id}[k={k}]", params, shifted, rhs, tol, n_used=n_used,
                          started=t0, warnings=warnings, details=details)]
    if controls:
        out.append(_negative_control(f"{check_id}_negative_control[k={k}]", params, shifted, base,
                                     num, den, nome.p, tol))
    return out


def _negative_control(check_id, params, shifted, base, num, den, p, tol) -> Report:
    """Every single-unit change of a theta exponent in the multiplier must break the identity."""
    t0 = time.perf_counter()
    survivors = []
    errors = []
    for which, args in (("num", num), ("den", den)):
        for idx, u in enumerate(args):
            for step in (1, -1):
                factor = theta(u, p) ** (step if which == "num" else -step)
                wrong = base * theta_ratio(num, den, p) * factor
                err = abs(shifted - wrong) / max(abs(shifted), abs(wrong), 1e-300)
                errors.append(err)
                if err <= tol:
                    survivors.append(f"{which}[{idx}]{step:+d}")
    details = {"n_variants": len(errors), "min_rel_err": min(errors), "survivors": survivors}
    # residual: number of perturbed variants that still (wrongly) pass
    return Report.residual(check_id, params, float(len(survivors)), 0.0, started=t0, details=details)


def check_qde(aset: ParameterSet, k, nome: Nome, spec: QuadSpec | None = None, tol: float = 1e-7,
              negative_control: bool = False, check_id: str = "qde") -> list:
    """``I(.., q a_k, .., a5/q)`` against ``I(a)`` times the theta multiplier.

    ``k`` may be one index or a sequence; the base integral is computed once.
    """
    ks = [k] if isinstance(k, int) else list(k)
    for kk in ks:
        _check_k(kk)
    _require_balanced(aset, nome, "pq")
    _require_qde_safe(aset, nome)
    base = i_of_a(aset, nome, spec)
    out = []
    for kk in ks:
        t0 = time.perf_counter()
        shifted = i_of_a(aset.shifted({kk: nome.q, 5: 1 / nome.q}), nome, spec)
        num, den = qde_theta_factors(aset, kk, nome)
        out += _shift_report(check_id, kk, aset, nome, base.value, shifted.value, num, den, tol, t0,
                             max(base.n_used, shifted.n_used), base.warnings + shifted.warnings,
                             negative_control)
    return out


def check_qde_j(aset: ParameterSet, k: int, nome: Nome, tol: float = 1e-10,
                check_id: str = "qde_j") -> Report:
    """The Gamma product obeys the same q-difference relation."""
    t0 = time.perf_counter()
    _check_k(k)
    _require_balanced(aset, nome, "pq")
    base = j_product(aset, nome)
    shifted = j_product(aset.shifted({k: nome.q, 5: 1 / nome.q}), nome)
    return Report.compare(f"{check_id}[k={k}]", echo(nome, aset.a, aset.epsilon, k=k), shifted,
                          base * theta_ratio(*qde_theta_factors(aset, k, nome), nome.p), tol,
                          started=t0)


def check_two_term(aset: ParameterSet, k, nome: Nome, spec: QuadSpec | None = None,
                   tol: float = 1e-7, check_id: str = "two_term") -> list:
    """``I(.., q a_k, ..)`` against ``I(.., q a5)`` times the theta multiplier (p/q balancing)."""
    ks = [k] if isinstance(k, int) else list(k)
    for kk in ks:
        _check_k(kk)
    _require_balanced(aset, nome, "p/q")
    if not abs(nome.p) < abs(nome.q):
        raise DomainError("the two-term relations are stated for |p| < |q|")
    aset.check_torus_safe()
    moved5 = aset.shifted({5: nome.q})
    moved5.check_torus_safe()
    base = i_of_a(moved5, nome, spec)
    out = []
    for kk in ks:
        t0 = time.perf_counter()
        target = aset.shifted({kk: nome.q})
        target.check_torus_safe()
        shifted = i_of_a(target, nome, spec)
        num, den = two_term_theta_factors(aset, kk, nome)
        out += _shift_report(check_id, kk, aset, nome, base.value, shifted.value, num, den, tol, t0,
                             max(base.n_used, shifted.n_used), base.warnings + shifted.warnings, False)
    return out


def _bracket_fk_g(aset: ParameterSet, nome: Nome, spec) -> list:
    p = nome.p
    fns = [lambda z, k=k: bigF(aset, k, z, p) for k in (1, 2, 3)] + [lambda z: bigG(aset, z, p)]
    return bracket(fns, aset, nome, spec)


def check_f1_f2_ratio(aset: ParameterSet, nome: Nome, spec: QuadSpec | None = None,
                      tol: float = 1e-7, consistency_tol: float = 1e-9, check_id: str = "f1f2",
                      _brackets=None) -> Report:
    """``<F1>`` against ``<F2>`` times the predicted theta ratio; also C1/C2 consistency."""
    t0 = time.perf_counter()
    _require_balanced(aset, nome, "p/q")
    br = _brackets or _bracket_fk_g(aset, nome, spec)
    ratio = f1_f2_ratio(aset, nome)
    cc = bigC(aset, 1, nome) / bigC(aset, 2, nome)
    consistency = abs(cc - ratio) / max(abs(cc), abs(ratio))
    rep = Report.compare(check_id, echo(nome, aset.a, aset.epsilon), br[0].value, br[1].value * ratio,
                         tol, n_used=br[0].n_used, started=t0, warnings=br[0].warnings,
                         details={"ratio_lhs": br[0].value / br[1].value, "ratio_rhs": ratio,
                                  "c1_over_c2_rel_err": consistency})
    if consistency > consistency_tol:
        rep.passed = False
        rep.warnings.append(f"C1/C2 disagrees with the predicted ratio: {consistency:.3e}")
    return rep


# -- coboundaries ---------------------------------------------------------------------------

GENERATOR_LABELS = ("phi_12", "phi_13", "phi_23", "phi'_12", "phi'_13", "phi'_23")


def check_nabla_vanishing(which, aset: ParameterSet, nome: Nome, spec: QuadSpec | None = None,
                          tol: float = 1e-8, check_id: str = "nabla") -> list:
    """``|<nabla phi>| <= tol * \\iint |Phi nabla phi|`` for the requested phi.

    ``which``: a generator label, ``"all"``, a list of labels, or a QuasiThetaFn.
    A QuasiThetaFn outside the generator list gives an informational report.
    """
    t0 = time.perf_counter()
    _require_balanced(aset, nome, "p/q")
    gens = {g.label: g for g in all_generators(aset, nome)}
    if isinstance(which, QuasiThetaFn):
        fns, informational = [which], which.label not in gens
    else:
        labels = list(GENERATOR_LABELS) if which == "all" else ([which] if isinstance(which, str) else list(which))
        unknown = [lab for lab in labels if lab not in gens]
        if unknown:
            raise DomainError(f"unknown generator(s) {unknown}; choose from {GENERATOR_LABELS}")
        fns, informational = [gens[lab] for lab in labels], False
    res = nabla_bracket(fns, aset, nome, spec)
    out = []
    for g, (signed, scale) in zip(fns, res):
        size = abs(scale.value)
        ratio = abs(signed.value) / size if size > 0 else math.inf
        out.append(Report.residual(f"{check_id}[{g.label}]", echo(nome, aset.a, aset.epsilon, phi=g.label),
                                   ratio, tol, n_used=signed.n_used, started=t0,
                                   warnings=signed.warnings, informational=informational,
                                   details={"integral": signed.value, "abs_integral": scale.value}))
    return out


# -- interpolation and expansions --------------------------------------------------------------

def _seeded_points(seed: int, n: int, imag: float = 0.05) -> list:
    rng = np.random.default_rng(seed)
    re = rng.uniform(0, 1, (n, 2))
    im = rng.uniform(-imag, imag, (n, 2))
    return [LogPoint(complex(re[i, 0], im[i, 0]), complex(re[i, 1], im[i, 1])) for i in range(n)]


def check_interpolation(aset: ParameterSet, nome: Nome, tol: float = 1e-11, seed: int = 0,
                        n_x: int = 20, check_id: str = "interpolation") -> Report:
    """Zero patterns, closed forms and triangularity of F_k, G, F'_3 at the interpolation points.

    The residual is the worst normalised deviation over all sub-checks.
    """
    t0 = time.perf_counter()
    p = nome.p
    parts = {}

    def record(name, value):
        parts[name] = max(parts.get(name, 0.0), float(value))

    def rel(x, y):
        return abs(x - y) / max(abs(x), abs(y), 1e-300)

    pairs = [(i, j) for i, j in itertools.combinations(range(1, 6), 2)]
    scale_f = {k: max(abs(bigF_at_pij_closed(aset, k, i, j, p)) for i, j in pairs if k not in (i, j))
               for k in range(1, 6)}
    for k in range(1, 6):
        for i, j in pairs:
            val = bigF(aset, k, point_pij(aset, i, j), p)
            if k in (i, j):
                record("F_k(p_ij) zeros", abs(val) / scale_f[k])
            else:
                record("F_k(p_ij) closed form", rel(val, bigF_at_pij_closed(aset, k, i, j, p)))

    pts = {name: point_pij(aset, *ij) for name, ij in
           (("p23", (2, 3)), ("p13", (1, 3)), ("p12", (1, 2)), ("p14", (1, 4)))}
    pts["p*12"] = point_pij_star(aset, 1, 2)
    g_vals = {name: bigG(aset, pt, p) for name, pt in pts.items()}
    g_scale = max(abs(g_vals["p14"]), abs(g_vals["p*12"]))
    for name in ("p12", "p13", "p23"):
        record("G zeros", abs(g_vals[name]) / g_scale)
    record("G(p*12) closed form", rel(g_vals["p*12"], bigG_at_p12_star_closed(aset, p)))

    rng = np.random.default_rng(seed)
    xs = 0.6 * np.exp(2j * np.pi * rng.uniform(0, 1, n_x)) * rng.uniform(0.7, 1.3, n_x)
    perturbed = aset.shifted({4: 0.9 * cmath.exp(0.2j)})
    for k in (1, 2, 3):
        for x in xs:
            pt = LogPoint.from_z(aset[k] / x, x)
            val = bigG(aset, pt, p)
            record("G(a_k/x, x) closed form", rel(val, bigG_closed(aset, k, x, p)))
            record("G(a_k/x, x) independent of a4", rel(val, bigG(perturbed, pt, p)))

    f3p = {name: bigF3prime(aset, pt, p) for name, pt in pts.items()}
    record("F'3(p12) = F3(p12)", rel(f3p["p12"], bigF(aset, 3, pts["p12"], p)))
    f3_scale = abs(f3p["p12"])
    record("F'3(p*12) = 0", abs(f3p["p*12"]) / f3_scale)

    # (F1, F2, F'3, G) at (p23, p13, p12, p*12): diagonal
    rows = [lambda z: bigF(aset, 1, z, p), lambda z: bigF(aset, 2, z, p),
            lambda z: bigF3prime(aset, z, p), lambda z: bigG(aset, z, p)]
    cols = [pts["p23"], pts["p13"], pts["p12"], pts["p*12"]]
    table = np.array([[f(c) for c in cols] for f in rows])
    for r in range(4):
        off = max(abs(table[r, c]) for c in range(4) if c != r)
        record("diagonal table off-diagonal", off / abs(table[r, r]))

    # (F1, F2, F3, G) at (p23, p13, p12, p14): upper triangular with nonzero diagonal
    rows[2] = lambda z: bigF(aset, 3, z, p)
    cols = [pts["p23"], pts["p13"], pts["p12"], pts["p14"]]
    tri = np.array([[f(c) for c in cols] for f in rows])
    for r in range(4):
        scale = max(abs(tri[r]))
        below = max([abs(tri[r, c]) for c in range(r)], default=0.0)
        record("triangular table lower part", below / scale)
    det = np.linalg.det(tri)
    det_scale = float(np.prod([max(abs(tri[r])) for r in range(4)]))
    rank_ok = abs(det) > 1e-8 * det_scale
    worst = max(parts.values())
    rep = Report.residual(check_id, echo(nome, aset.a, aset.epsilon), worst, tol, started=t0,
                          details={"parts": parts, "det": complex(det), "det_scale": det_scale})
    if not rank_ok:
        rep.passed = False
        rep.warnings.append("interpolation basis is rank deficient at these parameters")
    return rep


def check_lemma67(aset: ParameterSet, nome: Nome, n_points: int = 10, tol: float = 1e-10,
                  seed: int = 0, check_id: str = "lemma67") -> Report:
    """``nabla_sym phi_12 / 4`` and ``nabla_sym phi'_12 / 4`` against their (F1, F2, G) expansions."""
    t0 = time.perf_counter()
    if n_points < 1:
        raise DomainError("n_points must be positive")
    _require_balanced(aset, nome, "p/q")
    p = nome.p
    c = coeffs_lemma67(aset, nome)
    worst, worst_pair = 0.0, (0j, 0j)
    for zeta in _seeded_points(seed, n_points):
        f1, f2, g = bigF(aset, 1, zeta, p), bigF(aset, 2, zeta, p), bigG(aset, zeta, p)
        for prime, keys in ((False, ("c1", "c2", "c12")), (True, ("c1p", "c2p", "c12p"))):
            lhs = nabla_sym(generator(aset, 1, 2, nome, prime), aset, zeta, nome) / 4
            terms = [c[keys[0]] * f1, c[keys[1]] * f2, c[keys[2]] * g]
            rhs = sum(terms)
            scale = max([abs(lhs)] + [abs(t) for t in terms])
            r = abs(lhs - rhs) / scale
            if r >= worst:
                worst, worst_pair = r, (lhs, rhs)
    return Report.residual(check_id, echo(nome, aset.a, aset.epsilon, n_points=n_points), worst, tol,
                           started=t0, details={"worst_lhs": worst_pair[0], "worst_rhs": worst_pair[1]})


def check_ck_theta(aset: ParameterSet, nome: Nome, tol: float = 1e-10,
                   check_id: str = "ck_theta") -> Report:
    """C1 from its closed form against C1 from the expansion coefficients; C1/C2 against the F1/F2 ratio."""
    t0 = time.perf_counter()
    _require_balanced(aset, nome, "p/q")
    c1 = bigC(aset, 1, nome)
    from_coeffs = bigC_from_coeffs(aset, nome)
    ratio = f1_f2_ratio(aset, nome)
    cc = c1 / bigC(aset, 2, nome)
    ratio_err = abs(cc - ratio) / max(abs(cc), abs(ratio))
    rep = Report.compare(check_id, echo(nome, aset.a, aset.epsilon), from_coeffs, c1, tol, started=t0,
                         details={"c1_over_c2": cc, "f1_f2_ratio": ratio, "ratio_rel_err": ratio_err})
    if ratio_err > tol:
        rep.passed = False
        rep.warnings.append(f"C1/C2 vs F1/F2 ratio: {ratio_err:.3e}")
    return rep


def check_ck(aset: ParameterSet, nome: Nome, spec: QuadSpec | None = None, tol: float = 1e-7,
             ks=(1, 2, 3), check_id: str = "ck_integral", _brackets=None) -> list:
    """``<F_k> = C_k <G>`` by integration, in ratio form ``<F_k>/<G>`` against C_k."""
    for k in ks:
        _check_k(k, (1, 2, 3))
    _require_balanced(aset, nome, "p/q")
    t0 = time.perf_counter()
    br = _brackets or _bracket_fk_g(aset, nome, spec)
    out = []
    for k in ks:
        ck = bigC(aset, k, nome)
        out.append(Report.compare(f"{check_id}[k={k}]", echo(nome, aset.a, aset.epsilon, k=k),
                                  br[k - 1].value, ck * br[3].value, tol, n_used=br[3].n_used,
                                  started=t0, warnings=br[3].warnings,
                                  details={"ratio_lhs": br[k - 1].value / br[3].value, "C_k": ck}))
    return out


def check_nd(sampler: ParamSampler, nome: Nome, n_draws: int = 50, tol: float = 1e-12,
             epsilons=(1, -1), check_id: str = "nd") -> Report:
    """Two-term sums N, D against their factorised forms at seeded (a1, a2, a3)."""
    t0 = time.perf_counter()
    if n_draws < 1:
        raise DomainError("n_draws must be positive")
    worst, arg = 0.0, None
    for eps in epsilons:
        for _ in range(n_draws):
            a1, a2, a3 = sampler.complex_draw(3)
            n_sum, n_fac, d_sum, d_fac = nd_values(a1, a2, a3, eps, nome)
            for x, y in ((n_sum, n_fac), (d_sum, d_fac)):
                r = abs(x - y) / max(abs(x), abs(y), 1e-300)
                if r >= worst:
                    worst, arg = r, (x, y)
    return Report.compare(check_id, echo(nome, None, None, n_draws=n_draws, seed=sampler.seed),
                          arg[0], arg[1], tol, started=t0)


# -- limits -------------------------------------------------------------------------------------

def _richardson(deltas, values) -> complex:
    """Value at delta = 0 of the polynomial in delta through all samples (Neville tableau)."""
    xs = [float(d) for d in deltas]
    col = [complex(v) for v in values]
    for level in range(1, len(xs)):
        col = [(xs[i + level] * col[i] - xs[i] * col[i + 1]) / (xs[i + level] - xs[i])
               for i in range(len(col) - 1)]
    return col[0]


def check_limit_gamma(nome: Nome, delta_seq=(1e-3, 1e-4, 1e-5), tol: float = 1e-8,
                      check_id: str = "limit_gamma") -> Report:
    """``(1 - u) Gamma(u) -> 1/((p;p)(q;q))`` as ``u = a1 a2 = 1 - delta -> 1``."""
    t0 = time.perf_counter()
    deltas = [float(d) for d in delta_seq]
    if len(deltas) < 2:
        raise DomainError("need at least two deltas to extrapolate")
    vals = [d * elliptic_gamma(1 - d, nome) for d in deltas]
    lim = _richardson(deltas, vals)
    return Report.compare(check_id, echo(nome, None, None, delta_seq=deltas), lim,
                          1 / euler_prefactor(nome), tol, started=t0,
                          details={"sequence": list(zip(deltas, vals))})


def check_limit_j(a2, a3, a4, epsilon: int, nome: Nome, delta_seq=(1e-3, 1e-4, 1e-5),
                  tol: float = 1e-6, check_id: str = "limit_j") -> Report:
    """``(1 - a1 a2) J(a)`` at ``a1 = (1 - delta)/a2``, extrapolated to delta = 0."""
    t0 = time.perf_counter()
    deltas = [float(d) for d in delta_seq]
    if not deltas:
        raise DomainError("delta_seq must not be empty")
    if len(deltas) < 2:
        raise DomainError("need at least two deltas to extrapolate")
    a2, a3, a4 = complex(a2), complex(a3), complex(a4)
    vals = []
    for d in deltas:
        a1 = (1 - d) / a2
        vals.append(d * j_product(make_balanced(a1, a2, a3, a4, epsilon, nome), nome))
    lim = _richardson(deltas, vals)
    rhs = j_limit_closed(a2, a3, a4, epsilon, nome)
    return Report.compare(check_id, echo(nome, (a2, a3, a4), epsilon, delta_seq=deltas), lim, rhs, tol,
                          started=t0, details={"sequence": list(zip(deltas, vals))})


def bc1_reduction_params(a2, a3, a4, epsilon: int, nome: Nome) -> tuple:
    """Six BC1 parameters ``a2^{+-1/2} a_k`` (k = 3, 4, 5) with a5 = eps (pq)^{1/2}/(a3 a4)."""
    a2, a3, a4 = complex(a2), complex(a3), complex(a4)
    a5 = epsilon * nome.sqrt_pq / (a3 * a4)
    b = cmath.sqrt(a2)
    return [b * a3, a3 / b, b * a4, a4 / b, b * a5, a5 / b], a5


def bc1_reduction_closed(a2, a3, a4, a5, nome: Nome) -> complex:
    """``2 Gamma(a_k^2, a2^{+-1} a_k a_l) Gamma(a_k a_l)^2 / ((p;p)(q;q))`` over k < l in {3,4,5}."""
    rest = (a3, a4, a5)
    args = [x * x for x in rest]
    for x, y in itertools.combinations(rest, 2):
        args += [a2 * x * y, x * y / a2, x * y, x * y]
    return 2 * gamma_prod(args, nome) / euler_prefactor(nome)


def check_bc1_reduction(a2, a3, a4, epsilon: int, nome: Nome, spec: QuadSpec | None = None,
                        tol: float = 1e-8, check_id: str = "bc1_reduction") -> list:
    """The BC1 integral at the reduced parameters, raw and against its Gamma-product closed form."""
    t0 = time.perf_counter()
    t, a5 = bc1_reduction_params(a2, a3, a4, epsilon, nome)
    bad = [x for x in t if not abs(x) < 1]
    if bad:
        raise DomainError(f"reduced BC1 parameters leave the unit disc: {bad}")
    params = echo(nome, (a2, a3, a4, a5), epsilon)
    raw = torus_integral_1d(bc1_integrand(t, nome), spec or QuadSpec())
    closed = bc1_reduction_closed(complex(a2), complex(a3), complex(a4), a5, nome)
    first = Report.compare(f"{check_id}[closed_form]", params, raw.value, closed, tol,
                           n_used=raw.n_used, started=t0, warnings=raw.warnings)
    second = check_bc1(t, nome, spec, tol, check_id=f"{check_id}[bc1]")
    second.params = params
    return [first, second]


# -- special-function identities -------------------------------------------------------------

def check_theta_algebra(seed: int = 0, n_samples: int = 100, check_id: str = "theta_algebra") -> list:
    """Functional equations, reflection, three-term relation and the Gamma(u^2) splitting.

    u is drawn from the annulus 0.2 <= |u| <= 0.9 with a full phase; 0 < |p|, |q| <= 0.5.
    """
    rng = np.random.default_rng(seed)
    tests = {
        "gamma_q_shift": 1e-12, "gamma_p_shift": 1e-12, "gamma_reflection": 1e-12,
        "gamma_inversion": 1e-12, "theta_p_shift": 1e-12, "three_term": 1e-12,
        "gamma_square_split": 1e-11,
    }
    worst = {name: (0.0, 0j, 0j) for name in tests}
    t0 = time.perf_counter()

    def upd(name, lhs, rhs, residual=None):
        r = residual if residual is not None else abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        if r >= worst[name][0]:
            worst[name] = (r, lhs, rhs)

    def annulus(n=1):
        return rng.uniform(0.2, 0.9, n) * np.exp(2j * np.pi * rng.uniform(0, 1, n))

    for _ in range(n_samples):
        p, q = (rng.uniform(0.05, 0.5, 2) * np.exp(2j * np.pi * rng.uniform(0, 1, 2)))
        nome = Nome(p, q)
        u = complex(annulus()[0])
        g = elliptic_gamma(u, nome)
        upd("gamma_q_shift", elliptic_gamma(q * u, nome), theta(u, p) * g)
        upd("gamma_p_shift", elliptic_gamma(p * u, nome), theta(u, q) * g)
        upd("gamma_reflection", elliptic_gamma(p * q / u, nome) * g, 1.0)
        upd("gamma_inversion", 1 / (g * elliptic_gamma(1 / u, nome)), -theta(u, p) * theta(u, q) / u)
        upd("theta_p_shift", theta(p * u, p), -theta(u, p) / u)
        w, x, y, z = annulus(4)
        terms = [e_pair(w, x, p) * e_pair(y, z, p), -e_pair(w, y, p) * e_pair(x, z, p),
                 e_pair(w, z, p) * e_pair(x, y, p)]
        res = abs(sum(terms)) / max(abs(t) for t in terms)
        upd("three_term", res, 0.0, residual=res)
        upd("gamma_square_split", gamma_square_split(u, nome), elliptic_gamma(u * u, nome))
    out = []
    for name, tol in tests.items():
        r, lhs, rhs = worst[name]
        params = {"seed": seed, "n_samples": n_samples}
        if name == "three_term":
            out.append(Report.residual(f"{check_id}[{name}]", params, r, tol, started=t0))
        else:
            out.append(Report.compare(f"{check_id}[{name}]", params, lhs, rhs, tol, started=t0,
                                      details={"worst_rel_err": r}))
    return out


# -- suite ----------------------------------------------------------------------------------------

G2_CANON = {"p": 0.08, "q": 0.22, "a": [0.70, 0.72, 0.68, 0.66], "epsilon": 1}
PQ_CANON = {"p": 0.01, "q": 0.4, "a": [0.70, 0.72, 0.68, 0.66], "epsilon": 1}
ALG_CANON = {"p": 0.05, "q": 0.3, "a": ["0.6+0.1i", "0.55", "0.5-0.05i", "0.45"], "epsilon": 1}

CANONICAL = {
    "g2": dict(G2_CANON, tol=1e-6),
    "bc1": {"p": 0.1, "q": 0.2, "t": [0.55, 0.5, 0.45, 0.4, 0.5], "tol": 1e-9},
    "gustafson": {"q": 0.3, "a": [0.5, 0.4, 0.35, 0.3], "tol": 1e-8},
    "remark1": {"q": 0.3, "a": [0.72, 0.70, 0.68, 0.66], "epsilon": 1,
                "p_sequence": [0.1, 0.05, 0.025, 0.0125]},
    "qde": {"p": 0.01, "q": 0.4, "a": [0.7, 0.7, 0.7, 0.7], "epsilon": 1, "k": [1, 2, 3, 4],
            "tol": 1e-7, "negative_control": True},
    "qde_j": {"p": 0.01, "q": 0.4, "a": [0.7, 0.7, 0.7, 0.7], "epsilon": 1, "k": [1, 2, 3, 4], "tol": 1e-10},
    "two_term": dict(PQ_CANON, k=[1, 2, 3, 4], tol=1e-7),
    "f1f2": dict(PQ_CANON, tol=1e-7),
    "nabla": dict(PQ_CANON, which="all", tol=1e-8),
    "interpolation": dict(ALG_CANON, tol=1e-11),
    "lemma67": dict(ALG_CANON, n_points=10, tol=1e-10),
    "ck_theta": dict(ALG_CANON, tol=1e-10),
    "ck_integral": dict(PQ_CANON, tol=1e-7),
    "nd": {"p": 0.05, "q": 0.3, "n_draws": 50, "tol": 1e-12},
    "limit_gamma": {"p": 0.08, "q": 0.22, "tol": 1e-8},
    "limit_j": {"p": 0.08, "q": 0.22, "a2": 0.7, "a3": 0.6, "a4": 0.5, "epsilon": 1, "tol": 1e-6},
    "bc1_reduction": {"p": 0.08, "q": 0.22, "a2": 0.7, "a3": 0.6, "a4": 0.55, "epsilon": 1, "tol": 1e-8},
    "theta_algebra": {"n_samples": 100},
    "g2_sampled": {"nomes": [{"p": 0.08, "q": 0.22}, {"p": 0.25, "q": 0.1}], "epsilon": 1, "domain": "U0",
                   "max_modulus": 0.9, "tol": 1e-6},
    "qde_outside": {"p": 0.3, "q": 0.1},
}

DEFAULT_SUITE = [
    {"id": "theta_algebra"},
    {"id": "g2"},
    {"id": "g2", "epsilon": -1},
    {"id": "g2", "a": [0.70, {"abs": 0.72, "arg": 0.3}, 0.68, 0.66], "label": "g2_complex"},
    {"id": "g2_sampled"},
    {"id": "bc1"},
    {"id": "gustafson"},
    {"id": "remark1"},
    {"id": "qde"},
    {"id": "qde_j"},
    {"id": "qde_outside"},
    {"id": "two_term"},
    {"id": "f1f2"},
    {"id": "nabla"},
    {"id": "nabla", "epsilon": -1},
    {"id": "interpolation"},
    {"id": "lemma67"},
    {"id": "lemma67", "epsilon": -1},
    {"id": "ck_theta"},
    {"id": "ck_theta", "epsilon": -1},
    {"id": "ck_integral"},
    {"id": "nd"},
    {"id": "limit_gamma"},
    {"id": "limit_j"},
    {"id": "bc1_reduction"},
]


def parse_complex(value) -> complex:
    """Accept numbers, ``[re, im]``, ``{"re": .., "im": ..}``, ``{"abs": .., "arg": ..}``
    or strings like ``0.7+0.1i``."""
    if isinstance(value, bool):
        raise DomainError(f"not a complex number: {value!r}")
    if isinstance(value, (int, float, complex, np.number)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and value and set(value) <= {"abs", "arg"}:
        return cmath.rect(float(value.get("abs", 1.0)), float(value.get("arg", 0.0)))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        if text.endswith("i") and not text.endswith("j"):
            text = text[:-1] + "j"
        try:
            return complex(text)
        except ValueError:
            pass
    raise DomainError(f"malformed complex literal: {value!r}")


def quad_spec_from(config: dict | None) -> QuadSpec:
    cfg = dict(config or {})
    unknown = set(cfg) - {"n_start", "n_max", "rel_tol", "threads"}
    if unknown:
        raise DomainError(f"unknown quadrature fields {sorted(unknown)}")
    return QuadSpec(**cfg)


def _nome(cfg) -> Nome:
    return Nome(parse_complex(cfg["p"]), parse_complex(cfg["q"]))


def _a(cfg) -> list:
    return [parse_complex(x) for x in cfg["a"]]


def _ks(cfg):
    k = cfg["k"]
    return [int(x) for x in k] if isinstance(k, (list, tuple)) else int(k)


def run_check(entry: dict, quad: QuadSpec | None = None, seed: int = 0) -> list:
    """Run one suite entry ``{"id": ..., overrides...}``; returns a list of Reports."""
    cid = entry.get("id")
    if cid not in CANONICAL:
        return [Report.error(str(cid), dict(entry), f"unknown check id {cid!r}")]
    cfg = dict(CANONICAL[cid])
    cfg.update({k: v for k, v in entry.items() if k not in ("id", "label")})
    label = entry.get("label", cid)
    eps = int(cfg.get("epsilon", 1))
    tol = float(cfg["tol"]) if "tol" in cfg else None
    try:
        if cid == "g2":
            nome = _nome(cfg)
            aset = make_balanced(*_a(cfg), eps, nome)
            return [check_g2_theorem(aset, nome, quad, tol, check_id=label)]
        if cid == "g2_sampled":
            nomes = [_nome(pair) for pair in cfg["nomes"]]
            return check_g2_sampled(nomes, eps, seed, quad, tol, cfg.get("domain", "U0"),
                                    float(cfg.get("max_modulus", 0.9)), check_id=label)
        if cid == "qde_outside":
            return [qde_outside_domain(_nome(cfg), check_id=label)]
        if cid == "bc1":
            nome = _nome(cfg)
            t = [parse_complex(x) for x in cfg["t"]]
            if len(t) == 5:
                t.append(nome.p * nome.q / complex(np.prod(t)))
            return [check_bc1(t, nome, quad, tol, check_id=label)]
        if cid == "gustafson":
            return [check_gustafson(_a(cfg), parse_complex(cfg["q"]), quad, tol, check_id=label)]
        if cid == "remark1":
            return [check_remark1_limit(_a(cfg), parse_complex(cfg["q"]),
                                        [parse_complex(p) for p in cfg["p_sequence"]], quad, eps,
                                        check_id=label, tol=tol)]
        if cid == "qde":
            nome = _nome(cfg)
            aset = make_balanced(*_a(cfg), eps, nome)
            return check_qde(aset, _ks(cfg), nome, quad, tol, bool(cfg.get("negative_control", False)),
                             check_id=label)
        if cid == "qde_j":
            nome = _nome(cfg)
            aset = make_balanced(*_a(cfg), eps, nome)
            ks = _ks(cfg)
            return [check_qde_j(aset, k, nome, tol, check_id=label) for k in ([ks] if isinstance(ks, int) else ks)]
        nome = _nome(cfg) if "p" in cfg else None
        if cid in ("two_term", "f1f2", "nabla", "interpolation", "lemma67", "ck_theta", "ck_integral"):
            aset = make_balanced(*_a(cfg), eps, nome, "p/q")
            if cid == "two_term":
                return check_two_term(aset, _ks(cfg), nome, quad, tol, check_id=label)
            if cid == "f1f2":
                return [check_f1_f2_ratio(aset, nome, quad, tol, check_id=label)]
            if cid == "nabla":
                return check_nabla_vanishing(cfg.get("which", "all"), aset, nome, quad, tol, check_id=label)
            if cid == "interpolation":
                return [check_interpolation(aset, nome, tol, seed=seed, check_id=label)]
            if cid == "lemma67":
                return [check_lemma67(aset, nome, int(cfg.get("n_points", 10)), tol, seed=seed, check_id=label)]
            if cid == "ck_theta":
                return [check_ck_theta(aset, nome, tol, check_id=label)]
            return check_ck(aset, nome, quad, tol, check_id=label)
        if cid == "nd":
            sampler = ParamSampler(seed=seed, r_min=0.3, r_max=0.9, max_phase=math.pi)
            return [check_nd(sampler, nome, int(cfg.get("n_draws", 50)), tol, check_id=label)]
        if cid == "limit_gamma":
            return [check_limit_gamma(nome, cfg.get("delta_seq", (1e-3, 1e-4, 1e-5)), tol, check_id=label)]
        if cid == "limit_j":
            return [check_limit_j(parse_complex(cfg["a2"]), parse_complex(cfg["a3"]), parse_complex(cfg["a4"]),
                                  eps, nome, cfg.get("delta_seq", (1e-3, 1e-4, 1e-5)), tol, check_id=label)]
        if cid == "bc1_reduction":
            return check_bc1_reduction(parse_complex(cfg["a2"]), parse_complex(cfg["a3"]),
                                       parse_complex(cfg["a4"]), eps, nome, quad, tol, check_id=label)
        if cid == "theta_algebra":
            return check_theta_algebra(seed, int(cfg.get("n_samples", 100)), check_id=label)
    except (EllipticError, KeyError, TypeError, ValueError) as exc:
        return [Report.error(label, _jsonable(cfg), f"{type(exc).__name__}: {exc}")]
    return [Report.error(label, cfg, "check not dispatched")]


def run_suite(config: dict | None = None) -> list:
    """Run the configured checks in order.

    ``config`` keys: ``checks`` (list of entries or ids; default: the canonical
    suite), ``quad`` (quadrature fields), ``seed``.  Per-check errors become
    failing Reports; the suite is never aborted.
    """
    config = dict(config or {})
    seed = int(config.get("seed", 0))
    try:
        quad = quad_spec_from(config.get("quad"))
    except (EllipticError, TypeError) as exc:
        return [Report.error("config", {}, f"invalid quadrature settings: {exc}")]
    entries = config.get("checks", DEFAULT_SUITE)
    reports = []
    for entry in entries:
        if isinstance(entry, str):
            entry = {"id": entry}
        reports += run_check(entry, quad, seed)
    return reports


def suite_passed(reports) -> bool:
    """True iff no gating report failed (informational reports are ignored)."""
    return all(r.passed is not False for r in reports)
