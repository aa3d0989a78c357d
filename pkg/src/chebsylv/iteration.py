"""Affine bound-refinement recurrence: exact fixed points and convergence.

The pair of term selections induces the affine map
    a'  =  c1 + m11 a + m12 b
    b'  =  c2 + m21 a + m22 b
on bound constants (a, b). Matrix entries are exact rationals; for a
single-scheme recurrence the fixed point is exact in units of the scheme's
growth constant A.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .selection import TermSelection, selection_coefficients


class IterationError(ValueError):
    """Recurrence is structurally unusable (side mismatch, singular I - M)."""


@dataclass(frozen=True)
class AffineRecurrence:
    m11: Fraction
    m12: Fraction
    m21: Fraction
    m22: Fraction
    c1: float
    c2: float
    n_lower: int
    A: float | None = None  # set for single-scheme recurrences
    provenance: str = ""

    @property
    def single_scheme(self) -> bool:
        return self.A is not None


@dataclass(frozen=True)
class IterationResult:
    alpha: Fraction | None
    beta: Fraction | None
    a_limit: float
    b_limit: float
    eigenvalues: tuple[complex, complex]
    converges: bool
    trace: list[tuple[int, float, float]] | None = None


def build_recurrence(
    lower: TermSelection, upper: TermSelection, A: float, N: int
) -> AffineRecurrence:
    """Single-scheme recurrence from one lower and one upper selection."""
    if lower.side != "lower" or upper.side != "upper":
        raise IterationError("selection sides do not match their roles")
    if N < 2:
        raise IterationError("N must be >= 2")
    up = selection_coefficients(upper)
    lo = selection_coefficients(lower)
    k = Fraction(N, N - 1)
    return AffineRecurrence(
        m11=up.coef_a,
        m12=-up.coef_b,
        m21=-k * lo.coef_a,
        m22=k * lo.coef_b,
        c1=A,
        c2=float(k) * A,
        n_lower=N,
        A=A,
        provenance=f"rho_lower={lower.rho},rho_upper={upper.rho}",
    )


def hybrid_recurrence(
    upper_sel: TermSelection,
    upper_A: float,
    lower_sel: TermSelection,
    lower_A: float,
    lower_N: int,
) -> AffineRecurrence:
    """a-update from one scheme's upper selection, b-update from another's lower."""
    if upper_sel.side != "upper" or lower_sel.side != "lower":
        raise IterationError("selection sides do not match their roles")
    if lower_N < 2:
        raise IterationError("lower-scheme N must be >= 2")
    up = selection_coefficients(upper_sel)
    lo = selection_coefficients(lower_sel)
    k = Fraction(lower_N, lower_N - 1)
    same = upper_A == lower_A
    return AffineRecurrence(
        m11=up.coef_a,
        m12=-up.coef_b,
        m21=-k * lo.coef_a,
        m22=k * lo.coef_b,
        c1=upper_A,
        c2=float(k) * lower_A,
        n_lower=lower_N,
        A=upper_A if same else None,
        provenance=f"hybrid:rho_upper={upper_sel.rho},rho_lower={lower_sel.rho}",
    )


def eigenvalues(rec: AffineRecurrence) -> tuple[complex, complex]:
    tr = float(rec.m11 + rec.m22)
    det = float(rec.m11 * rec.m22 - rec.m12 * rec.m21)
    disc = tr * tr - 4 * det
    root = math.sqrt(disc) if disc >= 0 else cmath.sqrt(disc)
    lam1 = (tr - root) / 2
    lam2 = (tr + root) / 2
    return (lam1, lam2)


def convergence(rec: AffineRecurrence) -> tuple[tuple[complex, complex], bool]:
    """Floating eigenvalues plus an exact spectral-radius-below-1 verdict.

    Real 2x2 stability criterion in exact rationals: |det M| < 1 and
    |tr M| < 1 + det M.
    """
    det = rec.m11 * rec.m22 - rec.m12 * rec.m21
    tr = rec.m11 + rec.m22
    stable = abs(det) < 1 and abs(tr) < 1 + det
    return eigenvalues(rec), stable


def fixed_point(rec: AffineRecurrence) -> IterationResult:
    """Solve (I - M)(a, b) = (c1, c2); exact in units of A when single-scheme."""
    det = (1 - rec.m11) * (1 - rec.m22) - rec.m12 * rec.m21
    if det == 0:
        raise IterationError("I - M is singular: no fixed point")
    eigs, stable = convergence(rec)
    if rec.single_scheme:
        k = Fraction(rec.n_lower, rec.n_lower - 1)
        alpha = ((1 - rec.m22) * 1 + rec.m12 * k) / det
        beta = (rec.m21 * 1 + (1 - rec.m11) * k) / det
        assert rec.A is not None
        return IterationResult(
            alpha=alpha,
            beta=beta,
            a_limit=float(alpha) * rec.A,
            b_limit=float(beta) * rec.A,
            eigenvalues=eigs,
            converges=stable,
        )
    fdet = float(det)
    a = (float(1 - rec.m22) * rec.c1 + float(rec.m12) * rec.c2) / fdet
    b = (float(rec.m21) * rec.c1 + float(1 - rec.m11) * rec.c2) / fdet
    return IterationResult(
        alpha=None,
        beta=None,
        a_limit=a,
        b_limit=b,
        eigenvalues=eigs,
        converges=stable,
    )


def iterate(
    rec: AffineRecurrence, a0: float, b0: float, steps: int
) -> list[tuple[int, float, float]]:
    """Explicit trace [(i, a_i, b_i)] for i = 0..steps."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    m11, m12 = float(rec.m11), float(rec.m12)
    m21, m22 = float(rec.m21), float(rec.m22)
    a, b = float(a0), float(b0)
    trace = [(0, a, b)]
    for i in range(1, steps + 1):
        a, b = rec.c1 + m11 * a + m12 * b, rec.c2 + m21 * a + m22 * b
        trace.append((i, a, b))
    return trace
