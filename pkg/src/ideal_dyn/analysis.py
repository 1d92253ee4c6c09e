"""Return sets, cluster and limit structure of orbits, classification and the
c-parameter.

Every quantity is computed from one materialized orbit.  Neighborhoods are
open balls; a shrinking base at a target is the geometric radius schedule
``r_k = r0 * 2^-k``.  The limit value ``u`` of a target is the exhaustive norm
of its return set at the last scheduled radius (monotone evidence, no
extrapolation).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._csv import csv_line
from .density import DensityEstimate, estimate_all
from .dynsys import DynSystem, is_pseudo_universal, make_system
from .ideals import DEFAULT_THRESHOLD, Submeasure, exh_norm, membership_verdict
from .intset import GapProfile, IntSet, gap_profile

__all__ = [
    "ReturnSetReport",
    "ClusterReport",
    "ClassifyReport",
    "CParameterReport",
    "return_set",
    "return_mask",
    "hitting_set",
    "hitting_witnesses",
    "cluster_value",
    "extract_limit_subsequence",
    "classify",
    "estimate_c_parameter",
]


def _system(sys: DynSystem | str) -> DynSystem:
    return make_system(sys) if isinstance(sys, str) else sys


def return_mask(sys: DynSystem, states: np.ndarray, center, radius: float) -> np.ndarray:
    if radius <= 0:
        raise ValueError("radius must be positive")
    return np.ascontiguousarray(sys.ball_mask(states, sys.parse_point(center), radius))


@dataclass(frozen=True)
class ReturnSetReport:
    system: str
    point: str
    center: str
    radius: float
    horizon: int
    returns: IntSet
    densities: dict[str, DensityEstimate] = field(repr=False)
    gaps: GapProfile = field(repr=False)

    def csv_row(self) -> str:
        d = self.densities.get("upper_asymptotic")
        b = self.densities.get("upper_banach")
        mg = "" if self.gaps.max_gap is None else self.gaps.max_gap
        return csv_line(self.system, self.point, self.center, self.radius, self.horizon, len(self.returns),
                        "" if d is None else d.value, "" if b is None else b.value, mg)


RETURNSET_HEADER = "system,point,center,radius,horizon,card,dstar,bdstar,maxgap"
CLUSTER_HEADER = "system,point,eta,k,radius,norm"
CLASSIFY_HEADER = "system,point,ideal,property,status,witness"


def return_set(sys: DynSystem | str, x, center, radius: float, horizon: int) -> ReturnSetReport:
    """``N(x, B(center, radius))`` at the horizon, with densities and gaps."""
    sys = _system(sys)
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    x = sys.parse_point(x)
    c = sys.parse_point(center)
    s = IntSet(return_mask(sys, sys.states(x, horizon), c, radius))
    dens = estimate_all(s) if horizon >= 3 else {}
    return ReturnSetReport(sys.name, sys.label(x), sys.label(c), float(radius), horizon, s, dens, gap_profile(s))


def hitting_witnesses(sys: DynSystem | str, U: tuple, V: tuple, grid: int, horizon: int):
    """Grid under-approximation of ``N(U, V)``.

    Returns ``(set, grid points, witness)`` where ``witness[n]`` is the index
    of the first grid point ``y`` with ``T^n y`` in ``V`` (``-1`` if none).
    """
    sys = _system(sys)
    if grid < 1:
        raise ValueError("grid must be >= 1")
    uc, ur = sys.parse_point(U[0]), float(U[1])
    vc, vr = sys.parse_point(V[0]), float(V[1])
    pts = sys.ball_grid(uc, ur, grid)
    witness = np.full(horizon, -1, dtype=np.int64)
    for i, y in enumerate(pts):
        hit = sys.ball_mask(sys.states(y, horizon), vc, vr)
        witness[hit & (witness < 0)] = i
    return IntSet(witness >= 0), pts, witness


def hitting_set(sys: DynSystem | str, U: tuple, V: tuple, grid: int, horizon: int) -> IntSet:
    return hitting_witnesses(sys, U, V, grid, horizon)[0]


@dataclass
class ClusterReport:
    system: str
    point: str
    eta: str
    radii: tuple[float, ...]
    norms: tuple[float, ...]
    u_value: float
    threshold: float
    cluster_radius: float
    cluster_status: str
    horizon: int
    submeasure: Submeasure = field(repr=False)
    return_sets: tuple[IntSet, ...] = field(repr=False)
    limit_subsequence: IntSet | None = field(default=None, repr=False)
    limit_norm: float | None = None
    blocks: tuple[tuple[int, int], ...] = ()

    @property
    def is_cluster(self) -> bool:
        return self.cluster_status == "positive"

    @property
    def is_limit(self) -> bool:
        return self.u_value > self.threshold

    @property
    def limit_status(self) -> str:
        return "positive" if self.is_limit else "member"

    def csv_rows(self) -> list[str]:
        return [csv_line(self.system, self.point, self.eta, k, r, v)
                for k, (r, v) in enumerate(zip(self.radii, self.norms))]


def _cluster_from_states(sys, states, x_label, eta, r0, K, m, threshold, cluster_radius) -> ClusterReport:
    if r0 <= 0 or K < 1:
        raise ValueError("need r0 > 0 and K >= 1")
    radii = tuple(r0 * 2.0 ** -k for k in range(K))
    sets = tuple(IntSet(return_mask(sys, states, eta, r)) for r in radii)
    norms = tuple(exh_norm(m, s) for s in sets)
    cr = r0 if cluster_radius is None else cluster_radius
    cset = sets[0] if cr == r0 else IntSet(return_mask(sys, states, eta, cr))
    status = membership_verdict(m, "exh", cset, threshold).status
    return ClusterReport(sys.name, x_label, sys.label(eta), radii, norms, norms[-1], threshold, cr, status,
                         states.shape[0], m, sets)


def cluster_value(sys: DynSystem | str, x, eta, r0: float, K: int, m: Submeasure, horizon: int,
                  threshold: float = DEFAULT_THRESHOLD, cluster_radius: float | None = None) -> ClusterReport:
    """Norms ``||N(x, B(eta, r0 2^-k))||`` for ``k < K``; ``u`` is the last one."""
    sys = _system(sys)
    x = sys.parse_point(x)
    return _cluster_from_states(sys, sys.states(x, horizon), sys.label(x), sys.parse_point(eta),
                                r0, K, m, threshold, cluster_radius)


def _first_end(m: Submeasure, mask: np.ndarray, start: int, target: float) -> int | None:
    """Least ``e`` with ``phi(mask ∩ [start, e]) >= target``, by bisection."""
    n = mask.size

    def value(e: int) -> float:
        sub = np.zeros(e + 1, dtype=bool)
        sub[start : e + 1] = mask[start : e + 1]
        return m.evaluator(sub, e + 1)

    if start >= n or value(n - 1) < target:
        return None
    lo, hi = start, n - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if value(mid) >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def extract_limit_subsequence(report: ClusterReport, tol: float = 1e-9) -> IntSet:
    """Greedy block selection of an index set ``A`` along which the orbit
    converges to ``eta`` with ``||A|| >= u``.

    Block ``k`` is the shortest run ``N_k ∩ (max F_{k-1}, e]`` with
    ``phi >= u (1 - 2^-k)``; the last block keeps all of ``N_{K-1}`` beyond
    the previous one, so past block ``k`` every index lies in ``N_k``.
    """
    u = report.u_value
    if not u > report.threshold:
        raise ValueError(f"u = {u!r} is not above threshold {report.threshold}; no limit to extract")
    m = report.submeasure
    N = report.horizon
    K = len(report.return_sets)
    out = np.zeros(N, dtype=bool)
    blocks = []
    start = 0
    for k, s in enumerate(report.return_sets):
        mask = s.mask
        if k == K - 1:
            end = N - 1
        else:
            end = _first_end(m, mask, start, u * (1.0 - 2.0 ** -k))
            if end is None:
                raise ValueError(f"block {k}: horizon {N} exhausted before phi reached {u * (1 - 2.0 ** -k)!r}")
        out[start : end + 1] |= mask[start : end + 1]
        blocks.append((start, end))
        start = end + 1
    A = IntSet(out)
    norm = exh_norm(m, A)
    if norm < u - tol:
        late = next((k for k, (_, e) in enumerate(blocks[:-1]) if e >= N // 8), K - 1)
        raise ValueError(f"extracted norm {norm!r} < u {u!r}; block {late} reaches the tail window at horizon {N}")
    report.limit_subsequence = A
    report.limit_norm = norm
    report.blocks = tuple(blocks)
    return A


@dataclass(frozen=True)
class ClassifyReport:
    system: str
    point: str
    ideal: str
    radius: float
    threshold: float
    grid: tuple[str, ...]
    verdicts: dict[str, tuple[str, float]]  # property -> (status, witness)
    clusters: tuple[ClusterReport, ...] = field(repr=False)

    def csv_rows(self) -> list[str]:
        return [csv_line(self.system, self.point, self.ideal, p, st, w) for p, (st, w) in self.verdicts.items()]


def _combine(statuses: list[str]) -> str:
    if all(s == "positive" for s in statuses):
        return "positive"
    if any(s == "member" for s in statuses):
        return "member"
    return "undetermined"


def classify(sys: DynSystem | str, x, m: Submeasure, targets, radius: float, horizon: int, *,
             K: int = 9, threshold: float = DEFAULT_THRESHOLD, workers: int = 1) -> ClassifyReport:
    """Recurrent, universal and their strong variants on a target grid.

    ``targets`` is a list of points or an int (the system's standard grid).
    Universal needs a positive cluster verdict at every target; a single
    member verdict refutes it at this horizon.
    """
    sys = _system(sys)
    x = sys.parse_point(x)
    if isinstance(targets, int):
        targets = sys.grid_targets(targets)
    targets = [sys.parse_point(t) for t in targets]
    if not targets:
        raise ValueError("empty target grid")
    states = sys.states(x, horizon)
    xl = sys.label(x)

    def job(eta):
        return _cluster_from_states(sys, states, xl, eta, radius, K, m, threshold, radius)

    home = job(x)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            grid = list(pool.map(job, targets))
    else:
        grid = [job(t) for t in targets]
    verdicts = {
        "recurrent": (home.cluster_status, home.norms[0]),
        "universal": (_combine([c.cluster_status for c in grid]), min(c.norms[0] for c in grid)),
        "strong_recurrent": (home.limit_status, home.u_value),
        "strong_universal": (_combine([c.limit_status for c in grid]), min(c.u_value for c in grid)),
    }
    return ClassifyReport(sys.name, xl, m.name, float(radius), threshold, tuple(sys.label(t) for t in targets),
                          verdicts, (home, *grid))


@dataclass(frozen=True)
class CParameterReport:
    value: float
    argmin_k: int
    radii: tuple[float, ...]
    candidates: tuple[str, ...]
    norms: tuple[tuple[float, ...], ...]  # norms[k][candidate]

    def __float__(self) -> float:
        return self.value


def estimate_c_parameter(sys: DynSystem | str, eta, m: Submeasure, candidates: list, r0: float, K: int,
                         horizon: int, *, cells: int = 64) -> CParameterReport:
    """``min_k max_x ||N(x, B(eta, r0 2^-k))||`` over pseudo-universal candidates."""
    sys = _system(sys)
    if not candidates:
        raise ValueError("empty candidate list")
    pts = [sys.parse_point(c) for c in candidates]
    for p in pts:
        if not is_pseudo_universal(sys, p, horizon, cells):
            raise ValueError(f"candidate {sys.label(p)} fails the {cells}-cell density test at horizon {horizon}")
    eta = sys.parse_point(eta)
    per = [_cluster_from_states(sys, sys.states(p, horizon), sys.label(p), eta, r0, K, m, DEFAULT_THRESHOLD, None)
           for p in pts]
    table = tuple(tuple(c.norms[k] for c in per) for k in range(K))
    best = [max(row) for row in table]
    k = int(np.argmin(best))
    return CParameterReport(best[k], k, per[0].radii, tuple(sys.label(p) for p in pts), table)
