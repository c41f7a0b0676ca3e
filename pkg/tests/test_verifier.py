import json
import math

import numpy as np
import pytest

from ellg2.errors import DomainError
from ellg2.integrand import QuasiThetaFn, make_balanced
from ellg2.quadrature import QuadSpec
from ellg2.special import Nome
from ellg2.verifier import (
    CANONICAL,
    DEFAULT_SUITE,
    ParamSampler,
    Report,
    _richardson,
    check_bc1,
    check_bc1_reduction,
    check_ck,
    check_g2_theorem,
    check_gustafson,
    check_lemma67,
    check_limit_gamma,
    check_limit_j,
    check_nabla_vanishing,
    check_nd,
    check_qde,
    check_remark1_limit,
    parse_complex,
    qde_outside_domain,
    quad_spec_from,
    run_check,
    run_suite,
    suite_passed,
)

FAST = QuadSpec(n_start=32, n_max=256)
PQ_NOME = Nome(0.01, 0.4)
ALG_NOME = Nome(0.05, 0.3)
ALG_A = (0.6 + 0.1j, 0.55, 0.5 - 0.05j, 0.45)


def only(reports):
    assert len(reports) == 1
    return reports[0]


# -- Report ---------------------------------------------------------------------------------

def test_report_pass_rule_relative():
    rep = Report.compare("x", {}, 1.0 + 1e-7, 1.0, 1e-6)
    assert rep.passed and rep.rel_err == pytest.approx(1e-7 / (1 + 1e-7))
    assert not Report.compare("x", {}, 1.1, 1.0, 1e-6).passed


def test_report_pass_rule_absolute_when_rhs_zero():
    rep = Report.residual("r", {}, 3e-13, 1e-12)
    assert rep.passed and rep.rel_err == rep.abs_err == pytest.approx(3e-13)
    assert not Report.residual("r", {}, 3e-12, 1e-12).passed


def test_report_json_schema():
    rep = Report.compare("x", {"p": 0.1 + 0j, "a": [0.5j]}, 1 + 2j, 1 + 2j, 1e-9, n_used=64)
    d = json.loads(json.dumps(rep.to_dict()))
    for key in ("schema", "check_id", "params", "lhs", "rhs", "abs_err", "rel_err", "tol", "pass",
                "n_used", "runtime_ms", "warnings"):
        assert key in d
    assert d["schema"] == 1
    assert d["lhs"] == {"re": 1.0, "im": 2.0}
    assert d["params"]["a"] == [{"re": 0.0, "im": 0.5}]
    assert d["pass"] is True


def test_informational_report_is_neither():
    rep = Report.compare("x", {}, 1.0, 2.0, 0.0, informational=True)
    assert rep.passed is None
    assert suite_passed([rep])
    assert not suite_passed([rep, Report.compare("y", {}, 1.0, 2.0, 1e-3)])


# -- parsing ---------------------------------------------------------------------------------

@pytest.mark.parametrize("text, value", [
    (0.5, 0.5), ("0.7+0.1i", 0.7 + 0.1j), ("-2i", -2j), ([0.3, -0.2], 0.3 - 0.2j),
    ({"re": 1, "im": 2}, 1 + 2j), ({"abs": 2, "arg": math.pi / 2}, 2j),
])
def test_parse_complex(text, value):
    assert parse_complex(text) == pytest.approx(value)


@pytest.mark.parametrize("bad", ["0.7+", "abc", True, [1, 2, 3], {"x": 1}])
def test_parse_complex_rejects(bad):
    with pytest.raises(DomainError):
        parse_complex(bad)


def test_quad_spec_from_config():
    assert quad_spec_from({"n_max": 128}).n_max == 128
    with pytest.raises(DomainError):
        quad_spec_from({"bogus": 1})


# -- sampler ----------------------------------------------------------------------------------

@pytest.mark.parametrize("domain", ["torus-safe", "U0", "V0", "qde-safe"])
def test_sampler_domains(domain):
    nome = Nome(0.01, 0.4)
    sampler = ParamSampler(seed=5, domain=domain, r_min=0.6, r_max=0.95)
    target = "p/q" if domain == "V0" else "pq"
    for _ in range(10):
        aset = sampler.draw(nome, 1, target)
        mods = np.abs(aset.a)
        assert np.all(mods[:4] < 1)
        prod4 = float(np.prod(mods[:4]))
        if domain == "U0":
            assert prod4 > math.sqrt(nome.p.real * nome.q.real)
        if domain in ("V0", "qde-safe"):
            assert prod4 > math.sqrt(nome.p.real / nome.q.real)
        if domain == "qde-safe":
            assert mods[4] < abs(nome.q)


def test_sampler_is_seeded():
    nome = Nome(0.08, 0.22)
    a = ParamSampler(seed=3).draw(nome)
    b = ParamSampler(seed=3).draw(nome)
    assert a == b


def test_sampler_validation():
    with pytest.raises(DomainError):
        ParamSampler(domain="nowhere")
    with pytest.raises(DomainError):
        ParamSampler(r_min=0.9, r_max=0.5)
    with pytest.raises(DomainError):
        ParamSampler(domain="qde-safe", r_min=0.1, r_max=0.12, max_tries=5).draw(PQ_NOME)


def test_sampler_max_modulus():
    sampler = ParamSampler(seed=0, max_modulus=0.85)
    for _ in range(5):
        assert np.all(np.abs(sampler.draw(Nome(0.25, 0.1)).a) < 0.85)


# -- error paths ------------------------------------------------------------------------------

def test_g2_check_rejects_bad_inputs():
    nome = Nome(0.08, 0.22)
    unbalanced = make_balanced(0.7, 0.72, 0.68, 0.66, 1, nome).shifted({1: 1.01})
    with pytest.raises(DomainError):
        check_g2_theorem(unbalanced, nome, FAST)
    outside = make_balanced(1 / 0.7, 0.7, 0.5, 0.5, 1, nome)
    with pytest.raises(DomainError):
        check_g2_theorem(outside, nome, FAST)


def test_bc1_and_gustafson_reject_bad_inputs():
    with pytest.raises(DomainError):
        check_bc1([0.5, 0.5, 0.5, 0.5, 0.5, 0.5], Nome(0.1, 0.2), FAST)
    with pytest.raises(DomainError):
        check_gustafson([1.1, 0.4, 0.3, 0.2], 0.3, FAST)
    with pytest.raises(DomainError):
        check_remark1_limit([0.7, 0.7, 0.7, 0.7], 1.2, [0.1, 0.05], FAST)


def test_qde_rejects_out_of_range_k():
    aset = make_balanced(0.7, 0.7, 0.7, 0.7, 1, PQ_NOME)
    with pytest.raises(DomainError):
        check_qde(aset, 5, PQ_NOME, FAST)


def test_lemma67_and_ck_reject_bad_arguments():
    aset = make_balanced(*ALG_A, 1, ALG_NOME, target="p/q")
    with pytest.raises(DomainError):
        check_lemma67(aset, ALG_NOME, n_points=0)
    with pytest.raises(DomainError):
        check_ck(aset, ALG_NOME, FAST, ks=(4,))
    with pytest.raises(DomainError):
        check_nd(ParamSampler(seed=0), ALG_NOME, n_draws=0)


def test_limits_reject_empty_sequence():
    with pytest.raises(DomainError):
        check_limit_j(0.7, 0.6, 0.5, 1, Nome(0.08, 0.22), delta_seq=())
    with pytest.raises(DomainError):
        check_limit_gamma(Nome(0.08, 0.22), delta_seq=())


def test_bc1_reduction_rejects_large_parameters():
    with pytest.raises(DomainError):
        check_bc1_reduction(0.2, 0.6, 0.55, 1, Nome(0.08, 0.22), FAST)


def test_richardson_exact_for_polynomials():
    deltas = [1e-1, 1e-2, 1e-3]
    vals = [3 + 2 * d - 5 * d * d for d in deltas]
    assert _richardson(deltas, vals) == pytest.approx(3, abs=1e-12)


# -- fast canonical checks ----------------------------------------------------------------------

@pytest.mark.parametrize("cid", ["interpolation", "lemma67", "ck_theta", "nd", "limit_gamma", "limit_j",
                                 "bc1", "gustafson", "qde_j", "bc1_reduction"])
def test_fast_canonical_checks_pass(cid):
    reports = run_check({"id": cid})
    assert reports and all(r.passed for r in reports), [r.summary() for r in reports]


@pytest.mark.parametrize("cid", ["lemma67", "ck_theta"])
def test_negative_epsilon_variants_pass(cid):
    assert all(r.passed for r in run_check({"id": cid, "epsilon": -1}))


def test_theta_algebra_suite_passes_and_is_deterministic():
    first = run_check({"id": "theta_algebra"}, seed=42)
    second = run_check({"id": "theta_algebra"}, seed=42)
    assert len(first) == 7 and all(r.passed for r in first)
    for a, b in zip(first, second):
        assert (a.lhs, a.rhs, a.abs_err) == (b.lhs, b.rhs, b.abs_err)


def test_limit_j_finer_steps_extrapolate_better():
    nome = Nome(0.08, 0.22)
    coarse = check_limit_j(0.7, 0.6, 0.5, -1, nome, delta_seq=(1e-2, 1e-3, 1e-4))
    fine = check_limit_j(0.7, 0.6, 0.5, -1, nome)
    assert coarse.params["delta_seq"] == [1e-2, 1e-3, 1e-4]
    assert fine.rel_err < coarse.rel_err
    assert fine.passed


def test_qde_outside_domain_is_informational():
    rep = qde_outside_domain(Nome(0.3, 0.1))
    assert rep.passed is None and rep.details["admissible_set_empty"]


# -- suite runner -----------------------------------------------------------------------------

def test_run_suite_empty_and_unknown():
    assert run_suite({"checks": []}) == []
    reps = run_suite({"checks": ["no_such_check"]})
    assert len(reps) == 1 and reps[0].passed is False and reps[0].lhs is None


def test_run_suite_reports_config_errors_without_aborting():
    reps = run_suite({"checks": [{"id": "bc1", "t": [0.5, 0.5]}, "limit_gamma"]})
    assert reps[0].passed is False and reps[0].lhs is None
    assert reps[1].passed


def test_run_suite_bad_quad_settings():
    reps = run_suite({"checks": ["nd"], "quad": {"n_max": 100}})
    assert reps[0].check_id == "config" and reps[0].passed is False


def test_default_suite_ids_are_known():
    for entry in DEFAULT_SUITE:
        assert entry["id"] in CANONICAL


# -- integral checks (slow) ---------------------------------------------------------------------

@pytest.mark.slow
def test_qde_with_negative_control():
    aset = make_balanced(0.7, 0.7, 0.7, 0.7, 1, PQ_NOME)
    reports = check_qde(aset, [1, 3], PQ_NOME, FAST, negative_control=True)
    assert [r.check_id for r in reports] == ["qde[k=1]", "qde_negative_control[k=1]",
                                                "qde[k=3]", "qde_negative_control[k=3]"]
    assert all(r.passed for r in reports)
    control = reports[1]
    assert control.details["n_variants"] > 0 and control.details["survivors"] == []


@pytest.mark.slow
def test_nabla_custom_function_is_informational():
    aset = make_balanced(0.70, 0.72, 0.68, 0.66, 1, PQ_NOME, target="p/q")
    custom = QuasiThetaFn("custom", lambda z: np.exp(2j * np.pi * z.zeta1))
    rep = only(check_nabla_vanishing(custom, aset, PQ_NOME, QuadSpec(n_start=32, n_max=128, rel_tol=1e-6)))
    assert rep.passed is None


@pytest.mark.slow
def test_nabla_single_generators():
    aset = make_balanced(0.70, 0.72, 0.68, 0.66, 1, PQ_NOME, target="p/q")
    for which in ("phi_12", "phi'_23"):
        rep = only(check_nabla_vanishing(which, aset, PQ_NOME, FAST))
        assert rep.passed, rep.summary()


@pytest.mark.slow
def test_bc1_permuted():
    t = [0.55, 0.5, 0.45, 0.4, 0.5]
    t.append(0.02 / math.prod(t))
    assert check_bc1(t[::-1], Nome(0.1, 0.2), FAST).passed


@pytest.mark.slow
def test_g2_sampled_on_both_sides_of_p_equals_q():
    reports = run_check({"id": "g2_sampled"}, seed=1)
    assert [r.check_id for r in reports] == ["g2_sampled[p<q]", "g2_sampled[p>=q]"]
    assert all(r.passed for r in reports)


@pytest.mark.slow
def test_remark1_single_p_is_plain_comparison():
    rep = check_remark1_limit([0.72, 0.70, 0.68, 0.66], 0.3, [0.0125], FAST)
    assert rep.passed is None
    # the trend deviation is measured against the Gustafson value alone
    assert rep.details["trend"][0]["rel_deviation"] == pytest.approx(rep.abs_err / abs(rep.rhs), rel=1e-12)
