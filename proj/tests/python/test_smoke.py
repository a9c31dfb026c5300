"""End-to-end smoke tests for the python bindings."""

import math

import pytest

import degseq as dq


def test_validate_and_classify():
    p = dq.validate(0.6, 0.6, 2)
    assert p.theorem_applicable
    assert dq.classify(p) == dq.RegimeLabel.Exponential
    assert dq.classify(dq.validate(0.9, 0.9, 1)) == dq.RegimeLabel.PowerLaw
    assert dq.classify(dq.validate(0.55, 0.55, 1)) == dq.RegimeLabel.Conjectured
    assert dq.classify(dq.validate_exact("3/5", "2/5", 2)) == dq.RegimeLabel.Critical
    with pytest.raises(dq.DegseqError):
        dq.validate(0.5, 0.3, 1)


def test_derived_constants():
    c = dq.derive(dq.validate(0.6, 0.6, 2))
    assert c.alpha_c == pytest.approx(0.4)
    assert c.gamma == pytest.approx(0.75)
    assert c.beta == pytest.approx(-2.0)
    assert c.A0 + c.A1 + c.A2 == pytest.approx(0.0)


def test_simulation_exact_small_t():
    p = dq.validate(1.0, 1.0, 1)
    results = dq.run_trials(p, 3, 50, seed=1, snapshots=[3])
    for r in results:
        assert list(r.histograms[0].counts) == [0, 2, 1]


def test_simulation_invariants():
    p = dq.validate(0.7, 0.5, 2)
    (r,) = dq.run_trials(p, 5000, 1, seed=9, snapshots=[5000])
    h = r.histograms[0]
    last = r.trajectory[-1]
    assert h.vertex_total() == last.vertices
    assert h.degree_mass() == 2 * last.edges


def test_theory_sequence_and_residuals():
    p = dq.validate(0.6, 0.4, 2)
    c = dq.derive(p)
    seq = dq.build_sequence(p, c, 200)
    assert seq.regime == dq.RegimeLabel.Critical
    assert seq.C == pytest.approx(seq.D)  # critical leading constant
    worst = max(abs(seq.residual(k)) for k in range(-1, 199))
    assert worst < 1e-10
    mass = dq.sequence_mass(seq)
    assert mass.vertex_mass == pytest.approx(0.4, rel=0.01)


def test_conjectured_region_raises():
    p = dq.validate(0.55, 0.55, 2)
    with pytest.raises(dq.ConjecturedRegimeError):
        dq.build_sequence(p, dq.derive(p), 100)


def test_uc_bound_and_closed_form():
    uc = dq.KernelSpec.uc(0.5)
    for k in (1, 2, 5, 10, 50):
        v = dq.eval_u(uc, k)
        assert 0 < v <= 1.0 / k
    assert dq.uc_closed_form(0.5, 5) == pytest.approx(dq.eval_u(uc, 5), rel=1e-8)
    with pytest.raises(dq.UnstableEvaluationError):
        dq.uc_closed_form(0.5, 40, 64)


def test_compare_self_is_zero():
    p = dq.validate(1.0, 1.0, 1)
    seq = dq.build_sequence(p, dq.derive(p), 100)
    results = dq.run_trials(p, 20000, 5, seed=3, snapshots=[20000])
    prof = dq.aggregate([r.histograms[0] for r in results])
    rep = dq.compare(prof, seq, 20)
    assert rep.declared == dq.RegimeLabel.PowerLaw
    assert rep.tv < 0.05
    fit = dq.fit_tail(prof, dq.TailModel.PowerLawSlope, 3, 20, 1)
    assert -3.6 < fit.value < -2.4


def test_mean_field_short_run():
    p = dq.validate(0.6, 0.6, 2)
    c = dq.derive(p)
    seq = dq.build_sequence(p, c, 120)
    t0 = 1200
    init = [t0 * seq.dk(k) for k in range(121)]
    prof = dq.evolve_mean_field(p, c, t0, 5 * t0, init)
    for k in range(30):
        assert prof[k] == pytest.approx(seq.dk(k), abs=1e-3)
