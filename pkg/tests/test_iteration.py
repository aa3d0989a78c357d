from fractions import Fraction

import pytest

from chebsylv import (
    BUILTINS,
    IterationError,
    build_recurrence,
    constant_A,
    convergence,
    fixed_point,
    hybrid_recurrence,
    iterate,
    select_terms,
)


def _recurrence(profiles, name, rho, exclude=()):
    p = profiles[name]
    lower = select_terms(p, "lower", rho, exclude=exclude)
    upper = select_terms(p, "upper", rho, exclude=exclude)
    return build_recurrence(lower, upper, constant_A(BUILTINS[name]), p.n)


def test_nu4_rho_15_exact_fixed_point(profiles):
    result = fixed_point(_recurrence(profiles, "nu4", 1.5))
    assert result.alpha == Fraction(4242, 5391)
    assert result.beta == Fraction(6380, 5391)
    assert result.converges
    lam1, lam2 = sorted(result.eigenvalues, key=lambda z: z.real)
    assert lam1.real == pytest.approx(-0.0924, abs=1e-3)
    assert lam2.real == pytest.approx(0.3591, abs=1e-3)


def test_cheb_rho_12_exact_fixed_point(profiles):
    result = fixed_point(_recurrence(profiles, "cheb", 1.2))
    assert result.alpha == Fraction(51072, 50999)
    assert result.beta == Fraction(59595, 50999)
    lam1, lam2 = sorted(result.eigenvalues, key=lambda z: z.real)
    assert lam1.real == pytest.approx(-0.0054, abs=1e-3)
    assert lam2.real == pytest.approx(0.1671, abs=1e-3)


def test_recurrence_matrix_entries_nu4_15(profiles):
    rec = _recurrence(profiles, "nu4", 1.5)
    assert rec.m11 == Fraction(1, 6)  # upper pair opens at 6
    assert rec.m12 == -(Fraction(1, 11) + Fraction(1, 5))
    assert rec.m21 == -Fraction(6, 5) * Fraction(1, 7)
    assert rec.m22 == Fraction(6, 5) * Fraction(1, 12)


def test_iterate_trace_converges_to_fixed_point(profiles):
    rec = _recurrence(profiles, "nu5", 1.2)
    result = fixed_point(rec)
    trace = iterate(rec, constant_A(BUILTINS["nu5"]), 2.0, 60)
    assert trace[0] == (0, constant_A(BUILTINS["nu5"]), 2.0)
    _, a, b = trace[-1]
    assert a == pytest.approx(result.a_limit, abs=1e-10)
    assert b == pytest.approx(result.b_limit, abs=1e-10)


def test_iterate_step_matches_affine_map(profiles):
    rec = _recurrence(profiles, "nu4", 1.3)
    trace = iterate(rec, 1.0, 1.5, 2)
    _, a1, b1 = trace[1]
    assert a1 == pytest.approx(
        rec.c1 + float(rec.m11) * 1.0 + float(rec.m12) * 1.5, abs=1e-14
    )
    assert b1 == pytest.approx(
        rec.c2 + float(rec.m21) * 1.0 + float(rec.m22) * 1.5, abs=1e-14
    )


def test_convergence_exact_jury_agrees_with_eigenvalues(profiles):
    for name in ("cheb", "nu4", "nu5", "nu6"):
        for rho in (1.2, 1.5):
            rec = _recurrence(profiles, name, rho)
            eigs, stable = convergence(rec)
            assert stable == (max(abs(z) for z in eigs) < 1)


def test_hybrid_same_scheme_reduces_to_single(profiles):
    p = profiles["nu4"]
    a_const = constant_A(BUILTINS["nu4"])
    lower = select_terms(p, "lower", 1.5)
    upper = select_terms(p, "upper", 1.5)
    single = fixed_point(build_recurrence(lower, upper, a_const, p.n))
    hybrid = fixed_point(hybrid_recurrence(upper, a_const, lower, a_const, p.n))
    assert hybrid.alpha == single.alpha
    assert hybrid.beta == single.beta


def test_true_hybrid_has_no_exact_rationals(profiles):
    up7 = select_terms(profiles["nu7"], "upper", 1.1)
    lo6 = select_terms(profiles["nu6"], "lower", 1.1)
    rec = hybrid_recurrence(
        up7,
        constant_A(BUILTINS["nu7"]),
        lo6,
        constant_A(BUILTINS["nu6"]),
        profiles["nu6"].n,
    )
    assert not rec.single_scheme
    result = fixed_point(rec)
    assert result.alpha is None and result.beta is None
    assert 0.9 < result.a_limit < result.b_limit < 1.1


def test_side_mismatch_rejected(profiles):
    p = profiles["nu4"]
    lower = select_terms(p, "lower", 1.5)
    upper = select_terms(p, "upper", 1.5)
    with pytest.raises(IterationError):
        build_recurrence(upper, lower, 1.0, p.n)
    with pytest.raises(IterationError):
        hybrid_recurrence(lower, 1.0, upper, 1.0, p.n)


def test_iterate_rejects_negative_steps(profiles):
    rec = _recurrence(profiles, "nu4", 1.5)
    with pytest.raises(ValueError):
        iterate(rec, 1.0, 1.2, -1)
