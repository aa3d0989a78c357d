"""Threshold sweeps: tabulate limits, eigenvalues, and term counts over rho."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .scheme import Scheme, EProfile, e_profile, constant_A
from .selection import select_terms


@dataclass(frozen=True)
class SweepRow:
    rho: float
    a_limit: float
    b_limit: float
    ratio: float
    lambda1: float
    lambda2: float
    n_lower_terms: int
    n_upper_terms: int
    converges: bool


def _evaluate_rho(
    profile: EProfile,
    A: float,
    rho: float,
    exclude: tuple[tuple[int, int], ...] = (),
) -> SweepRow:
    """One grid point, float arithmetic throughout (exact path is in iteration)."""
    lower = select_terms(profile, "lower", rho, exclude=exclude)
    upper = select_terms(profile, "upper", rho, exclude=exclude)
    n = profile.n
    k = n / (n - 1)

    m11 = sum(1.0 / m for m, _ in upper.kept_pairs)
    m12 = -(
        sum(1.0 / q for _, q in upper.kept_pairs)
        + sum(1.0 / v for v in upper.standalones)
    )
    m21 = -k * sum(1.0 / m for m, _ in lower.kept_pairs)
    m22 = k * (
        sum(1.0 / q for _, q in lower.kept_pairs)
        + sum(1.0 / u for u in lower.standalones)
    )

    det_im = (1 - m11) * (1 - m22) - m12 * m21
    if det_im != 0:
        a = ((1 - m22) * A + m12 * k * A) / det_im
        b = (m21 * A + (1 - m11) * k * A) / det_im
    else:
        a = b = math.nan

    tr = m11 + m22
    det = m11 * m22 - m12 * m21
    disc = tr * tr - 4 * det
    if disc >= 0:
        root = math.sqrt(disc)
        lam1, lam2 = (tr - root) / 2, (tr + root) / 2
    else:
        lam1 = lam2 = math.hypot(tr / 2, math.sqrt(-disc) / 2)
    converges = abs(det) < 1 and abs(tr) < 1 + det

    return SweepRow(
        rho=rho,
        a_limit=a,
        b_limit=b,
        ratio=b / a if a else math.inf,
        lambda1=lam1,
        lambda2=lam2,
        n_lower_terms=lower.n_terms,
        n_upper_terms=upper.n_terms,
        converges=converges,
    )


def sweep_rho(
    s: Scheme,
    rho_min: float = 1.02,
    rho_max: float = 2.0,
    step: float = 0.005,
    exclude: tuple[tuple[int, int], ...] = (),
    profile: EProfile | None = None,
) -> list[SweepRow]:
    """One SweepRow per grid point rho_min, rho_min+step, ..., <= rho_max."""
    if not (1 < rho_min < rho_max) or step <= 0:
        raise ValueError("require 1 < rho_min < rho_max and step > 0")
    if profile is None:
        profile = e_profile(s)
    A = constant_A(s)
    count = int(math.floor((rho_max - rho_min) / step + 1e-9)) + 1
    return [
        _evaluate_rho(profile, A, rho_min + i * step, exclude) for i in range(count)
    ]


@dataclass(frozen=True)
class OptimizeResult:
    best_a: SweepRow
    best_b: SweepRow
    best_ratio: SweepRow
    residual: float  # |rho_opt - b/a| at the ratio optimum


def optimize_rho(
    s: Scheme,
    rho_min: float = 1.02,
    rho_max: float = 2.0,
    coarse_step: float = 0.005,
    refine_rounds: int = 3,
    exclude: tuple[tuple[int, int], ...] = (),
) -> OptimizeResult:
    """Locate near-optimal rho for argmax a, argmin b, and argmin b/a."""
    profile = e_profile(s)
    A = constant_A(s)
    rows = sweep_rho(s, rho_min, rho_max, coarse_step, exclude, profile)
    usable = [r for r in rows if r.converges and r.a_limit > 0]
    if not usable:
        raise ValueError("no converging grid point in the sweep range")

    def refine(best: SweepRow, key) -> SweepRow:
        step = coarse_step
        for _ in range(refine_rounds):
            step /= 2
            lo = max(rho_min, best.rho - 2 * step)
            cands = [
                _evaluate_rho(profile, A, lo + i * step, exclude) for i in range(5)
            ]
            cands = [c for c in cands if c.converges and c.a_limit > 0]
            best = min(cands + [best], key=key)
        return best

    best_a = refine(min(usable, key=lambda r: -r.a_limit), lambda r: -r.a_limit)
    best_b = refine(min(usable, key=lambda r: r.b_limit), lambda r: r.b_limit)
    best_ratio = refine(min(usable, key=lambda r: r.ratio), lambda r: r.ratio)

    # the ratio objective is piecewise constant in rho; within the optimal
    # plateau, move rho to the self-consistent point rho = b/a
    for _ in range(8):
        target = min(max(best_ratio.ratio, rho_min), rho_max)
        if abs(target - best_ratio.rho) < 1e-12:
            break
        cand = _evaluate_rho(profile, A, target, exclude)
        if cand.converges and cand.ratio <= best_ratio.ratio + 1e-12:
            best_ratio = cand
        else:
            break
    return OptimizeResult(
        best_a=best_a,
        best_b=best_b,
        best_ratio=best_ratio,
        residual=abs(best_ratio.rho - best_ratio.ratio),
    )
