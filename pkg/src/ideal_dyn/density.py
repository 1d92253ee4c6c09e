"""Finite-horizon density estimators.

All estimators read one prefix-count array ``c[t] = |S ∩ [0, t)|`` and share a
single prefix schedule ``T``: geometric quarter-octave points from
``t_min = round(horizon**0.75)`` to the horizon, plus every power of two in
that range and the horizon itself.  Starting late discards the short
prefixes whose ratios say nothing about the limit (squares would otherwise
read as ``t_min**-0.5``).

* upper asymptotic: ``max_{t in T} c[t]/t``; lower: ``min`` over the upper
  (log-scale) half of ``T``.
* upper logarithmic: by Abel summation ``sum_{k in S, k <= n} 1/k`` equals
  ``∫ (c(t)/t) dt/t`` up to O(1), so the logarithmic density is a
  log-weighted average of prefix densities.  We evaluate that average over
  ``T`` (weights ``log(t_{i+1}/t_i)``, compensated sums) and take the max of
  the running averages over the tail of ``T``.  Being an average of values
  the asymptotic estimator maximizes, it never exceeds it.  Running averages
  spanning fewer than ``LOG_MIN_OCTAVES`` octaves are skipped unless the
  schedule is shorter than that.
* upper Banach: the maximum window density over the family made of every
  window of length ``L = 2^floor(log2(horizon/4))`` and the prefix windows
  ``[0, t)``, ``t in T``.  Since the window maxima are nonincreasing along
  the dyadic length schedule, ``L`` is its tail value.  Lower Banach density
  is ``1 - upper(complement)``, read off the same counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._csv import csv_line
from .intset import IntSet, build

__all__ = [
    "DensityEstimate",
    "KINDS",
    "asymptotic",
    "banach",
    "logarithmic_upper",
    "estimate",
    "estimate_all",
    "prefix_schedule",
    "window_length",
    "csv_row",
    "harmonic_ratio",
]

LOG_MIN_OCTAVES = 4.0

KINDS = ("upper_asymptotic", "lower_asymptotic", "upper_banach", "lower_banach", "upper_logarithmic")


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    kind: str
    horizon: int
    window_schedule: tuple[int, ...]
    direction: str  # "over", "under" or "none" relative to the truncated set's limit
    window_min: int
    window_max: int


def window_length(horizon: int) -> int:
    """Largest power of two not exceeding ``horizon/4`` (at least 1)."""
    return 1 << max(0, (max(horizon // 4, 1)).bit_length() - 1)


def prefix_schedule(horizon: int) -> np.ndarray:
    if horizon < 2:
        raise ValueError("density estimates need horizon >= 2")
    t_min = max(1, round(horizon ** 0.75))
    octaves = math.log2(horizon / t_min)
    geo = np.round(t_min * 2.0 ** (np.arange(int(4 * octaves) + 1) / 4.0)).astype(np.int64)
    pow2 = 1 << np.arange(horizon.bit_length(), dtype=np.int64)
    pts = np.concatenate((geo, pow2[(pow2 >= t_min) & (pow2 <= horizon)], [horizon]))
    return np.unique(pts[(pts >= t_min) & (pts <= horizon)])


def _counts(s: IntSet) -> np.ndarray:
    c = np.empty(s.horizon + 1, dtype=np.int64)
    c[0] = 0
    np.cumsum(s.mask, out=c[1:])
    return c


def _tail(sched: np.ndarray) -> np.ndarray:
    mid = math.sqrt(float(sched[0]) * float(sched[-1]))
    return sched[sched >= mid]


def _log_running_max(sched: np.ndarray, ratios: np.ndarray) -> float:
    if sched.size == 1:
        return float(ratios[0])
    w = np.diff(np.log(sched.astype(np.float64)))
    wd = w * ratios[:-1]
    span = min(LOG_MIN_OCTAVES, math.log2(sched[-1] / sched[0]))
    tail_start = int(np.searchsorted(sched, sched[0] * 2.0**span - 1e-9))
    best = 0.0
    for end in range(max(tail_start, 1), sched.size):
        den = math.fsum(w[:end].tolist())
        num = math.fsum(wd[:end].tolist())
        best = max(best, num / den)
    return best


def _all_from_counts(c: np.ndarray, horizon: int) -> dict[str, float]:
    sched = prefix_schedule(horizon)
    L = window_length(horizon)
    ratios = c[sched] / sched
    tail = np.searchsorted(sched, _tail(sched)[0])
    win = c[L:] - c[:-L]
    out = {
        "upper_asymptotic": float(ratios.max()),
        "lower_asymptotic": float(ratios[tail:].min()),
        "upper_logarithmic": _log_running_max(sched, ratios),
    }
    out["upper_banach"] = max(float(win.max()) / L, out["upper_asymptotic"])
    out["lower_banach"] = min(float(win.min()) / L, float(ratios.min()))
    return out


def _make(kind: str, value: float, horizon: int) -> DensityEstimate:
    sched = prefix_schedule(horizon)
    L = window_length(horizon)
    if kind.endswith("banach"):
        return DensityEstimate(value, kind, horizon, (L,), "over" if kind.startswith("upper") else "under",
                               min(L, int(sched[0])), max(L, int(sched[-1])))
    return DensityEstimate(value, kind, horizon, tuple(sched.tolist()), "none", int(sched[0]), int(sched[-1]))


def estimate_all(s: IntSet) -> dict[str, DensityEstimate]:
    """Every kind from one pass over the prefix counts."""
    if s.horizon < 3:
        raise ValueError("density estimates need horizon >= 3")
    vals = _all_from_counts(_counts(s), s.horizon)
    return {k: _make(k, v, s.horizon) for k, v in vals.items()}


def estimate(s: IntSet, kind: str) -> DensityEstimate:
    if kind not in KINDS:
        raise ValueError(f"unknown density kind {kind!r}")
    if kind == "upper_logarithmic":
        return logarithmic_upper(s)
    side, _, family = kind.partition("_")
    return asymptotic(s, side) if family == "asymptotic" else banach(s, side)


def _side(side: str) -> str:
    if side not in ("upper", "lower"):
        raise ValueError(f"side must be upper or lower, got {side!r}")
    return side


def asymptotic(s: IntSet, side: str = "upper") -> DensityEstimate:
    kind = f"{_side(side)}_asymptotic"
    if s.horizon < 2:
        raise ValueError("density estimates need horizon >= 2")
    c = _counts(s)
    sched = prefix_schedule(s.horizon)
    ratios = c[sched] / sched
    if side == "upper":
        value = float(ratios.max())
    else:
        value = float(ratios[np.searchsorted(sched, _tail(sched)[0]):].min())
    return _make(kind, value, s.horizon)


def banach(s: IntSet, side: str = "upper") -> DensityEstimate:
    kind = f"{_side(side)}_banach"
    if s.horizon < 2:
        raise ValueError("density estimates need horizon >= 2")
    c = _counts(s)
    sched = prefix_schedule(s.horizon)
    L = window_length(s.horizon)
    win = c[L:] - c[:-L]
    ratios = c[sched] / sched
    if side == "upper":
        value = max(float(win.max()) / L, float(ratios.max()))
    else:
        value = min(float(win.min()) / L, float(ratios.min()))
    return _make(kind, value, s.horizon)


def logarithmic_upper(s: IntSet) -> DensityEstimate:
    if s.horizon < 3:
        raise ValueError("logarithmic density needs horizon >= 3")
    c = _counts(s)
    sched = prefix_schedule(s.horizon)
    return _make("upper_logarithmic", _log_running_max(sched, c[sched] / sched), s.horizon)


def harmonic_ratio(s: IntSet, n: int | None = None) -> float:
    """Plain ``sum_{k in S ∩ (0, n]} 1/k / log n`` with compensated summation.

    Kept as the textbook reference quantity; it converges to the same limit
    as ``logarithmic_upper`` but carries an O(1/log n) bias.
    """
    n = s.horizon - 1 if n is None else n
    if n < 2:
        raise ValueError("need n >= 2")
    mem = s.members()
    mem = mem[(mem > 0) & (mem <= n)]
    return math.fsum((1.0 / mem).tolist()) / math.log(n)


def csv_row(set_spec: str, est: DensityEstimate) -> str:
    return csv_line(set_spec, est.kind, est.horizon, est.value, est.window_min, est.window_max)


def quick(spec: str, horizon: int, kind: str = "upper_asymptotic") -> float:
    return estimate(build(spec, horizon), kind).value
