"""Threshold term selection: turn an E-profile into finite psi-term bounds.

The unit jumps of E are the coefficients of V(x) as a combination of
psi(x/n). For each side we match opposite-sign unit jumps (each closing jump
pairs with the most recent open one), keep a matched pair only when its index
ratio n/m exceeds the threshold rho, and keep unmatched closing jumps as
standalone terms. The leading block psi(x) - psi(x/N) (lower side) and the
psi(x) term (upper side) are set aside before matching.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scheme import EProfile


class SelectionError(RuntimeError):
    """Matching failed to reach steady state within the scan cap."""


class DominationError(RuntimeError):
    """A selection's step function failed to dominate E (selection bug)."""


@dataclass(frozen=True)
class UnitJump:
    position: int
    sign: int


@dataclass(frozen=True)
class TermSelection:
    """One side's kept structure: leading block, kept pairs, standalones.

    Lower side: psi(x) - psi(x/leading_n) + sum [psi(x/m) - psi(x/n)]
    - sum psi(x/u). Upper side: psi(x) + sum psi(x/v)
    - sum [psi(x/m) - psi(x/n)].
    """

    side: str
    rho: float
    leading_n: int | None
    kept_pairs: tuple[tuple[int, int], ...]
    dropped_pairs: tuple[tuple[int, int], ...]
    standalones: tuple[int, ...]
    scan_end: int
    max_index: int | None = None
    excluded: tuple[tuple[int, int], ...] = ()

    @property
    def n_terms(self) -> int:
        """psi-term count of the induced bound (leading block included)."""
        base = 2 if self.side == "lower" else 1
        return base + 2 * len(self.kept_pairs) + len(self.standalones)


def jump_stream(profile: EProfile, up_to: int) -> list[UnitJump]:
    """Unit jumps at positions 1..up_to, periodic extension, multiplicities expanded."""
    if up_to < 1:
        raise ValueError("up_to must be >= 1")
    out: list[UnitJump] = []
    p = profile.period
    base = 0
    while base < up_to:
        for pos, delta in profile.jumps:
            at = base + pos
            if at > up_to:
                break
            sign = 1 if delta > 0 else -1
            out.extend(UnitJump(at, sign) for _ in range(abs(delta)))
        base += p
    return out


class _MatchState:
    """Incremental period-by-period matcher for one (profile, side)."""

    def __init__(self, profile: EProfile, side: str):
        self.profile = profile
        self.side = side
        self.open_sign = 1 if side == "lower" else -1
        self.stack: list[int] = []
        self.pairs: list[tuple[int, int]] = []
        self.standalones: list[int] = []
        self.periods = 0
        self._pair_starts = [0]
        self._st_counts: list[int] = []
        self._max_ratios: list[float] = []
        self._sizes: list[int] = []
        self._shifted: list[bool] = []

    def advance(self) -> None:
        q = self.periods + 1
        period = self.profile.period
        base = (q - 1) * period
        start_pairs = len(self.pairs)
        st_before = len(self.standalones)
        for pos0, delta in self.profile.jumps:
            pos = base + pos0
            units = abs(delta)
            sign = 1 if delta > 0 else -1
            if q == 1:
                if pos == 1 and sign == 1:
                    units -= 1
                elif self.side == "lower" and pos == self.profile.n and sign == -1:
                    units -= 1
            if units <= 0:
                continue
            if sign == self.open_sign:
                self.stack.extend([pos] * units)
            else:
                for _ in range(units):
                    if self.stack:
                        self.pairs.append((self.stack.pop(), pos))
                    else:
                        self.standalones.append(pos)
        self.periods = q
        self._pair_starts.append(len(self.pairs))
        self._st_counts.append(len(self.standalones) - st_before)
        new_pairs = self.pairs[start_pairs:]
        self._max_ratios.append(max((n / m for m, n in new_pairs), default=0.0))
        self._sizes.append(len(self.stack))
        if q >= 2:
            prev = self.pairs[self._pair_starts[q - 2] : self._pair_starts[q - 1]]
            self._shifted.append(
                new_pairs == [(m + period, n + period) for m, n in prev]
            )
        else:
            self._shifted.append(False)

    def steady_at(self, q: int) -> bool:
        """Period q (1-based) replays q-1 which replays q-2: pattern locked."""
        if q < 3:
            return False
        i = q - 1
        return (
            self._shifted[i]
            and self._shifted[i - 1]
            and self._st_counts[i] == 0
            and self._st_counts[i - 1] == 0
            and self._sizes[i] == self._sizes[i - 1] == self._sizes[i - 2]
        )

    def pairs_up_to(self, scan_end: int) -> list[tuple[int, int]]:
        return [(m, n) for m, n in self.pairs if n <= scan_end]


def _matcher(profile: EProfile, side: str) -> _MatchState:
    return profile._cache.setdefault(("match", side), _MatchState(profile, side))


def select_terms(
    profile: EProfile,
    side: str,
    rho: float,
    max_index: int | None = None,
    exclude: tuple[tuple[int, int], ...] = (),
) -> TermSelection:
    """Match and threshold the jump stream of one side at threshold rho."""
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    if rho <= 1:
        raise ValueError("rho must exceed 1")

    state = _matcher(profile, side)
    period = profile.period
    cap_q = max(6, math.ceil((2 * period * rho / (rho - 1) + 2 * period) / period) + 1)
    scan_q = None
    for q in range(3, cap_q + 1):
        while state.periods < q:
            state.advance()
        if state.steady_at(q) and state._max_ratios[q - 1] <= rho:
            scan_q = q
            break
    if scan_q is None:
        raise SelectionError(
            f"no steady state within {cap_q} periods for side={side}, rho={rho}"
        )
    scan_end = scan_q * period

    excluded = tuple(tuple(p) for p in exclude)
    kept: list[tuple[int, int]] = []
    dropped: list[tuple[int, int]] = []
    for m, n in state.pairs_up_to(scan_end):
        # ratio exactly rho counts as kept (boundary pairs are retained)
        if n / m >= rho and (m, n) not in excluded:
            if max_index is None or m <= max_index:
                kept.append((m, n))
            else:
                dropped.append((m, n))
        else:
            dropped.append((m, n))
    standalones = [
        u
        for u in state.standalones
        if u <= scan_end and (max_index is None or u <= max_index)
    ]
    return TermSelection(
        side=side,
        rho=rho,
        leading_n=profile.n if side == "lower" else None,
        kept_pairs=tuple(sorted(kept)),
        dropped_pairs=tuple(sorted(dropped)),
        standalones=tuple(standalones),
        scan_end=scan_end,
        max_index=max_index,
        excluded=excluded,
    )


@dataclass(frozen=True)
class DominationReport:
    side: str
    ok: bool
    max_violation: int
    witness_x: int | None
    tail: int
    tail_ok: bool
    samples: np.ndarray


def selection_step_function(
    sel: TermSelection, profile: EProfile, strict: bool = True
) -> DominationReport:
    """Build the chi-step dominator of a selection and verify it against E.

    Lower side: L(x) = chi(x) - chi(x/N) + sum kept [chi(x/m) - chi(x/n)]
    - sum chi(x/u); checks L <= E pointwise on [1, 2*scan_end] and that the
    tail constant is <= e_min. Upper side symmetric with U >= E and e_max.
    Raises DominationError on failure unless strict=False.
    """
    hi = 2 * sel.scan_end
    deltas = np.zeros(hi + 2, dtype=np.int64)

    def add(pos: int, w: int) -> None:
        if pos <= hi:
            deltas[pos] += w

    add(1, 1)
    if sel.side == "lower":
        assert sel.leading_n is not None
        add(sel.leading_n, -1)
        for m, n in sel.kept_pairs:
            add(m, 1)
            add(n, -1)
        for u in sel.standalones:
            add(u, -1)
        tail = -len(sel.standalones)
        tail_ok = tail <= profile.e_min
    else:
        for v in sel.standalones:
            add(v, 1)
        for m, n in sel.kept_pairs:
            add(m, -1)
            add(n, 1)
        tail = 1 + len(sel.standalones)
        tail_ok = tail >= profile.e_max

    samples = np.cumsum(deltas[1 : hi + 1])
    xs = np.arange(1, hi + 1)
    e_vals = profile.values_at(xs)
    gap = e_vals - samples if sel.side == "lower" else samples - e_vals
    worst = int(gap.min())
    ok = worst >= 0 and tail_ok
    witness = int(xs[int(gap.argmin())]) if worst < 0 else None
    report = DominationReport(
        side=sel.side,
        ok=ok,
        max_violation=max(0, -worst),
        witness_x=witness,
        tail=tail,
        tail_ok=tail_ok,
        samples=samples,
    )
    if strict and not ok:
        raise DominationError(
            f"{sel.side} selection at rho={sel.rho} fails domination "
            f"(violation {report.max_violation} at x={witness}, tail_ok={tail_ok})"
        )
    return report


@dataclass(frozen=True)
class SelectionCoefficients:
    coef_a: Fraction
    coef_b: Fraction


def selection_coefficients(sel: TermSelection) -> SelectionCoefficients:
    """Exact rational coefficient sums feeding the affine recurrence."""
    coef_a = sum((Fraction(1, m) for m, _ in sel.kept_pairs), Fraction(0))
    coef_b = sum((Fraction(1, n) for _, n in sel.kept_pairs), Fraction(0))
    coef_b += sum((Fraction(1, u) for u in sel.standalones), Fraction(0))
    return SelectionCoefficients(coef_a=coef_a, coef_b=coef_b)


def selection_rows(sel: TermSelection) -> list[tuple[int, int, str]]:
    """(position, sign, status) rows for CSV export."""
    open_sign = 1 if sel.side == "lower" else -1
    rows: list[tuple[int, int, str]] = [(1, 1, "leading")]
    if sel.side == "lower" and sel.leading_n is not None:
        rows.append((sel.leading_n, -1, "leading"))
    for m, n in sel.kept_pairs:
        rows.append((m, open_sign, "kept"))
        rows.append((n, -open_sign, "kept"))
    for m, n in sel.dropped_pairs:
        rows.append((m, open_sign, "dropped"))
        rows.append((n, -open_sign, "dropped"))
    for u in sel.standalones:
        rows.append((u, -open_sign, "standalone"))
    return sorted(rows)
