"""Lower semicontinuous submeasures and finite-horizon ideal membership.

A submeasure ``phi`` is evaluated exactly on truncated sets.  The exhaustive
norm ``||S|| = inf_F phi(S \\ F)`` needs no search over finite ``F``: for
any finite ``F`` with maximum ``m`` we have ``S \\ [0, m] ⊆ S \\ F``, so by
monotonicity the infimum is already reached along initial segments, and
``phi(S \\ [0, c])`` is nonincreasing in ``c``.

At a finite horizon the last initial segments carry no information, so the
cutoff schedule is ``c = 2^j - 1`` for ``2^j <= horizon / 4``: the surviving
tail always keeps at least two full dyadic octaves.  The norm is the value at
the last cutoff.

Verdicts are three-valued (member, positive, undetermined); thresholds and
stability tolerances are arguments and are echoed in every verdict.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ._csv import csv_line
from .intset import IntSet, affine_image, restrict

__all__ = [
    "Submeasure",
    "MembershipVerdict",
    "make_submeasure",
    "parse_submeasure",
    "phi_eval",
    "cutoff_schedule",
    "exh_norm",
    "membership_verdict",
    "furstenberg_level",
    "invariance_check",
    "InvarianceReport",
    "verdict_csv_row",
]

DEFAULT_THRESHOLD = 0.01


@dataclass(frozen=True)
class Submeasure:
    name: str
    kind: str  # summable | matrix | nu | custom
    evaluator: Callable[[np.ndarray, int], float] = field(repr=False, compare=False)
    params: tuple = field(default=(), repr=False, compare=False)

    def __call__(self, s: IntSet) -> float:
        return self.evaluator(s.mask, s.horizon)


@dataclass(frozen=True)
class MembershipVerdict:
    status: str  # member | positive | undetermined
    witness: float
    horizon: int
    regime: str
    threshold: float
    detail: str = ""


def _summable(weights: Callable[[int], np.ndarray] | np.ndarray, name: str, horizon_hint: int | None) -> Submeasure:
    if isinstance(weights, np.ndarray):
        table = np.asarray(weights, dtype=np.float64)
        if np.any(table < 0):
            raise ValueError("summable weights must be nonnegative")

        def weight_fn(n: int) -> np.ndarray:
            if n > table.size:
                raise ValueError(f"weight table has {table.size} entries, horizon {n} needs more")
            return table[:n]
    else:
        weight_fn = weights

    if horizon_hint:
        w = weight_fn(horizon_hint)
        if np.any(w < 0):
            raise ValueError("summable weights must be nonnegative")
        total = math.fsum(w.tolist())
        tail = math.fsum(w[horizon_hint // 2 :].tolist())
        if total == 0 or tail < 1e-3 * total:
            warnings.warn(f"weights of {name} look summable up to {horizon_hint}; Fin(phi) may be all sets",
                          RuntimeWarning, stacklevel=3)

    def evaluate(mask: np.ndarray, horizon: int) -> float:
        w = weight_fn(horizon)
        return math.fsum(w[mask].tolist())

    return Submeasure(name, "summable", evaluate, (weight_fn,))


def _nu_eval(mask: np.ndarray, horizon: int) -> float:
    best = 0.0
    lo = 1
    while lo < horizon:
        hi = min(2 * lo, horizon)
        best = max(best, int(np.count_nonzero(mask[lo:hi])) / lo)
        lo *= 2
    return best


def _matrix(rows: Sequence[np.ndarray], name: str, eps: float) -> Submeasure:
    rows = [np.asarray(r, dtype=np.float64) for r in rows]
    if not rows:
        raise ValueError("matrix submeasure needs at least one row")
    for i, r in enumerate(rows):
        if np.any(r < 0):
            raise ValueError(f"matrix row {i} has negative entries")
        total = math.fsum(r.tolist())
        if abs(total - 1.0) > eps:
            raise ValueError(f"matrix row {i} sums to {total}, outside [1-{eps}, 1+{eps}]")
    width = max(r.size for r in rows)
    dense = np.zeros((len(rows), width))
    for i, r in enumerate(rows):
        dense[i, : r.size] = r

    def evaluate(mask: np.ndarray, horizon: int) -> float:
        m = min(horizon, width)
        sub = dense[:, :m][:, mask[:m]]
        return float(sub.sum(axis=1).max()) if sub.size else 0.0

    return Submeasure(name, "matrix", evaluate, (dense,))


def make_submeasure(kind: str, params=None, *, horizon_hint: int | None = None, eps: float = 1e-9) -> Submeasure:
    """Construct a submeasure.

    ``kind``: ``counting``; ``summable`` with ``params`` a weight array or a
    function ``n -> weights[:n]``; ``harmonic`` (``a_n = 1/(n+1)``); ``nu``;
    ``matrix`` with ``params`` a list of rows; ``cesaro`` with ``params`` the
    number of rows (``a_{n,k} = 1/n`` for ``k < n``).
    """
    if kind == "counting":
        return _summable(lambda n: np.ones(n), "counting", horizon_hint)
    if kind == "harmonic":
        return _summable(lambda n: 1.0 / np.arange(1, n + 1), "summable:harmonic", horizon_hint)
    if kind == "summable":
        if params is None:
            raise ValueError("summable submeasure needs weights")
        return _summable(params if callable(params) else np.asarray(params, dtype=float), "summable", horizon_hint)
    if kind == "nu":
        return Submeasure("nu", "nu", _nu_eval)
    if kind == "matrix":
        return _matrix(params, "matrix", eps)
    if kind == "cesaro":
        R = int(params)
        return _matrix([np.full(n, 1.0 / n) for n in range(1, R + 1)], f"matrix:cesaro={R}", eps)
    raise ValueError(f"unknown submeasure kind {kind!r}")


def parse_submeasure(spec: str, horizon_hint: int | None = None) -> Submeasure:
    """``counting | summable:harmonic | summable:file=<path> | nu | matrix:file=<path> | matrix:cesaro=<R>``."""
    spec = spec.strip()
    if spec in ("counting", "nu"):
        return make_submeasure(spec, horizon_hint=horizon_hint)
    if spec == "summable:harmonic":
        return make_submeasure("harmonic", horizon_hint=horizon_hint)
    if spec.startswith("summable:file="):
        text = Path(spec.split("=", 1)[1]).read_text()
        w = np.array([float(x) for x in text.split()], dtype=float)
        return make_submeasure("summable", w, horizon_hint=horizon_hint)
    if spec.startswith("matrix:file="):
        with open(spec.split("=", 1)[1], newline="") as fh:
            rows = [np.array([float(v) for v in row if v.strip()]) for row in csv.reader(fh) if row]
        return make_submeasure("matrix", rows)
    if spec.startswith("matrix:cesaro="):
        return make_submeasure("cesaro", int(spec.split("=", 1)[1]))
    raise ValueError(f"unknown submeasure spec {spec!r}")


def phi_eval(m: Submeasure, s: IntSet) -> float:
    return m(s)


def cutoff_schedule(horizon: int) -> list[int]:
    """Cutoffs ``c`` (remove ``[0, c]``); ``-1`` means remove nothing."""
    cuts = [-1]
    j = 0
    while 4 * (1 << j) <= horizon:
        cuts.append((1 << j) - 1)
        j += 1
    return cuts


def _without_prefix(m: Submeasure, s: IntSet, c: int) -> float:
    if c < 0:
        return m.evaluator(s.mask, s.horizon)
    mask = s.mask.copy()
    mask[: c + 1] = False
    return m.evaluator(mask, s.horizon)


def _tail_values(m: Submeasure, s: IntSet) -> list[tuple[int, float]]:
    return [(c, _without_prefix(m, s, c)) for c in cutoff_schedule(s.horizon)]


def exh_norm(m: Submeasure, s: IntSet, *, with_cutoff: bool = False):
    """Finite-horizon ``||S||_phi``; optionally also the cutoff attaining it.

    The tail values are nonincreasing along the schedule, so the minimum is
    the value at the last cutoff and only that one is evaluated.
    """
    c = cutoff_schedule(s.horizon)[-1]
    v = _without_prefix(m, s, c)
    return (v, c) if with_cutoff else v


def membership_verdict(
    m: Submeasure,
    regime: str,
    s: IntSet,
    threshold: float = DEFAULT_THRESHOLD,
    *,
    stability: float = 1e-3,
) -> MembershipVerdict:
    """Three-valued finite evidence for ``S in I`` versus ``S in I+``.

    fin: the threshold caps ``phi``.  ``member`` if ``phi(S)`` is below it and
    grew by at most ``stability`` over the last quarter of the horizon;
    ``positive`` if ``phi(S)`` is at or above it and still growing by more
    than ``stability`` there; otherwise ``undetermined``.

    exh: ``member`` if the norm is below the threshold; ``positive`` if the
    tail values over the last quarter of the cutoff schedule all stay within
    a factor 2 of each other; otherwise ``undetermined``.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    N = s.horizon
    if regime == "fin":
        total = m(s)
        head = restrict(restrict(s, max(1, (3 * N) // 4)), N)
        growth = total - m(head)
        if total < threshold and growth <= stability:
            return MembershipVerdict("member", total, N, regime, threshold, f"growth {growth:.3g} over last quarter")
        if total >= threshold and growth > stability:
            return MembershipVerdict("positive", total, N, regime, threshold, f"still growing by {growth:.3g}")
        return MembershipVerdict("undetermined", total, N, regime, threshold, f"growth {growth:.3g}")
    if regime == "exh":
        vals = [v for _, v in _tail_values(m, s)]
        norm = min(vals)
        if norm < threshold:
            return MembershipVerdict("member", norm, N, regime, threshold, "norm below threshold")
        last = vals[-max(1, len(vals) // 4):]
        if max(last) <= 2 * min(last):
            return MembershipVerdict("positive", norm, N, regime, threshold, "stable tail")
        return MembershipVerdict("undetermined", norm, N, regime, threshold, "tail still decaying")
    raise ValueError(f"regime must be fin or exh, got {regime!r}")


def furstenberg_level(m: Submeasure, s: IntSet) -> int | None:
    """Least ``i`` with ``||S|| > 2^-i``, or None when the norm vanishes."""
    norm = exh_norm(m, s)
    if norm <= 0:
        return None
    i = 0
    while not norm > 2.0 ** (-i):
        i += 1
    return i


@dataclass(frozen=True)
class InvarianceReport:
    c: float
    ratios: tuple[tuple[int, int, float], ...]  # (sample index, shift, ratio)
    skipped: int


def invariance_check(m: Submeasure, samples: Sequence[IntSet], shifts: Sequence[int]) -> InvarianceReport:
    """Empirical ``c`` in ``||S - k|| >= c ||S||``.

    ``S - k`` is only known below ``horizon - k``, so both sides are compared
    at that horizon.  Pairs with ``||S|| = 0`` are skipped.
    """
    if not samples or not shifts:
        raise ValueError("need nonempty samples and shifts")
    ratios = []
    skipped = 0
    for i, s in enumerate(samples):
        for k in shifts:
            if k < 0 or k >= s.horizon - 1:
                raise ValueError(f"shift {k} out of range for horizon {s.horizon}")
            H = s.horizon - k
            base = exh_norm(m, restrict(s, H))
            if base == 0:
                skipped += 1
                continue
            shifted = exh_norm(m, restrict(affine_image(s, 1, k, "backward"), H))
            ratios.append((i, int(k), shifted / base))
    c = min((r for _, _, r in ratios), default=float("nan"))
    return InvarianceReport(c, tuple(ratios), skipped)


def verdict_csv_row(set_spec: str, submeasure: str, v: MembershipVerdict) -> str:
    return csv_line(set_spec, submeasure, v.regime, v.status, v.witness, v.horizon)
