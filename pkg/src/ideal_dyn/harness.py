"""Property-check battery over return sets, plus the suite runner.

Each check expands into JSON-serializable instances that are evaluated
independently.  An instance evaluates to ``ok``, ``violation`` or
``inconclusive`` (a precondition surrogate failed or the horizon is too short
to say anything).  The first violation of a check is serialized with its
instance, so ``replay`` can re-run it in isolation.

Containments are only ever asserted in the sound direction: membership in a
hitting set ``N(U, V)`` is established by exhibiting a witness point and
checking its orbit directly, never by consulting a grid approximation.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import analysis
from .density import estimate, estimate_all, window_length
from .dynsys import CantorShift, WeightedShift, Word, detect_period, is_pseudo_universal, make_system
from .ideals import exh_norm, make_submeasure
from .intset import IntSet, affine_image, build, difference_set, gap_profile, restrict

__all__ = [
    "CheckResult",
    "CHECKS",
    "SuiteConfig",
    "ConfigError",
    "check_translation_embedding",
    "check_gap_properties",
    "check_difference_return",
    "check_ansari_decomposition",
    "check_ansari_instances",
    "ansari_instances",
    "null_orbit_instances",
    "check_null_orbit_transfer",
    "check_arithmetic_ideal",
    "difference_gap_bound",
    "planted_set",
    "replay",
    "run_suite",
    "parse_config",
]

OK, VIOLATION, INCONCLUSIVE = "ok", "violation", "inconclusive"


@dataclass(frozen=True)
class CheckResult:
    name: str
    property: str
    instances: int
    violations: int
    counterexample: str  # JSON; empty when there is none
    evidence: str  # JSON
    status: str  # pass | fail | inconclusive

    def csv_fields(self) -> list:
        return [self.name, self.property, self.status, self.instances, self.violations,
                self.counterexample, self.evidence]


CSV_HEADER = ["check", "property", "status", "instances", "violations", "counterexample", "evidence"]


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _aggregate(name: str, prop: str, instances: list[dict], evaluate: Callable[[dict], tuple[str, dict]],
               summarize: Callable[[list[dict]], dict] | None = None) -> CheckResult:
    counts = {OK: 0, VIOLATION: 0, INCONCLUSIVE: 0}
    first = ""
    evid = []
    for inst in instances:
        verdict, ev = evaluate(inst)
        counts[verdict] += 1
        evid.append(ev)
        if verdict == VIOLATION and not first:
            first = _dumps({"check": name, "instance": inst, "detail": ev})
    summary = {"ok": counts[OK], "inconclusive": counts[INCONCLUSIVE]}
    if summarize:
        summary.update(summarize([e for e in evid if e]))
    if counts[VIOLATION]:
        status = "fail"
    elif counts[OK] == 0:
        status = "inconclusive"
    else:
        status = "pass"
    return CheckResult(name, prop, len(instances), counts[VIOLATION], first, _dumps(summary), status)


def _point_json(sys, p):
    """Literal that parses back to the same point."""
    if isinstance(p, (int, np.integer)):
        return int(p)
    if isinstance(p, np.ndarray):
        return ",".join(repr(float(v)) for v in p)
    return p


# ---------------------------------------------------------------- translation embedding


def _translation_instance(p: dict) -> tuple[str, dict]:
    sys = make_system(p["system"])
    N = p["horizon"]
    if N < 1024:
        return INCONCLUSIVE, {"reason": "horizon below 1024"}
    x, y = sys.parse_point(p["x"]), sys.parse_point(p["y"])
    c = sys.parse_point(p["center"])
    r = p["radius"]
    sx, sy = sys.states(x, N), sys.states(y, N)
    # y must lie in the orbit closure of x: some T^n x within r/8 of y
    if not sys.ball_mask(sx, y, r / 8).any():
        return INCONCLUSIVE, {"reason": "y not near orb(x)"}
    nx = sys.ball_mask(sx, c, r)
    ny = np.flatnonzero(sys.ball_mask(sy, c, r)[: p["span"]])
    if ny.size == 0:
        return OK, {"k": 0, "S": []}
    rng = np.random.default_rng(p["seed"])
    if p["trial"] == 0:
        S = ny[: p["max_size"]]
    else:
        size = int(rng.integers(1, min(p["max_size"], ny.size) + 1))
        S = np.sort(rng.choice(ny, size, replace=False))
    L = N - int(S.max())
    # orbit-closure surrogate at the resolution S needs: some stretch of the
    # x-orbit shadows T^j y within r/8 for every j <= max S
    shadow = np.ones(L, dtype=bool)
    yj = y
    for j in range(int(S.max()) + 1):
        shadow &= sys.ball_mask(sx[j : j + L], yj, r / 8)
        yj = sys.step(yj)
    if not shadow.any():
        return INCONCLUSIVE, {"reason": "x does not shadow y for max(S)+1 steps", "S": S.tolist()}
    valid = np.ones(L, dtype=bool)
    for s in S.tolist():
        valid &= nx[s : s + L]
    hits = np.flatnonzero(valid)
    if hits.size == 0:
        return VIOLATION, {"S": S.tolist(), "reason": "no translate inside horizon"}
    return OK, {"k": int(hits[0]), "S": S.tolist()}


def check_translation_embedding(sys: str, x, y, U: tuple, trials: int, horizon: int, *, seed: int = 0,
                                span: int = 16, max_size: int = 8) -> CheckResult:
    """Finite ``S ⊆ N(y, U)`` embed as ``S + k ⊆ N(x, U)`` when ``y`` is in the orbit closure of ``x``."""
    s = make_system(sys)
    base = {"system": sys, "x": _point_json(s, x), "y": _point_json(s, y), "center": _point_json(s, U[0]),
            "radius": float(U[1]), "horizon": horizon, "span": span, "max_size": max_size}
    insts = [dict(base, trial=t, seed=seed * 1000 + t) for t in range(trials)]
    return _aggregate("translation_embedding", "finite subsets of N(y,U) translate into N(x,U)", insts,
                      _translation_instance,
                      lambda ev: {"max_k": max((e.get("k", 0) for e in ev), default=0)})


# ---------------------------------------------------------------- gap properties


def difference_gap_bound(delta: float) -> int:
    """Calibrated gap bound for ``S - S`` when ``bd*(S) >= delta``."""
    return math.ceil(2.0 / delta - 1e-12)


def planted_set(seed: int, horizon: int, delta: float) -> IntSet:
    """A set with a planted dense window of upper Banach density >= ``delta``.

    Family: sparse Bernoulli background plus, on a window at least a quarter
    of the horizon long, either a Bernoulli(p >= delta + 0.05) set, a
    progression of step <= 1/delta, or a periodic pattern of period at most
    ``difference_gap_bound(delta)`` and density >= delta.
    """
    rng = np.random.default_rng(seed)
    N = horizon
    mask = rng.random(N) < float(rng.choice([0.0, 0.001, 0.01]))
    w = int(rng.integers(max(1, N // 4), max(2, N // 2)))
    a = int(rng.integers(0, N - w + 1))
    kind = int(rng.integers(3))
    if kind == 0:
        p = float(rng.uniform(delta + 0.05, 0.95))
        mask[a : a + w] |= rng.random(w) < p
    elif kind == 1:
        step = int(rng.integers(1, int(1.0 / delta + 1e-9) + 1))
        mask[a : a + w : step] = True
    else:
        period = int(rng.integers(1, difference_gap_bound(delta) + 1))
        need = math.ceil(delta * period - 1e-12)
        ones = rng.choice(period, int(rng.integers(max(1, need), period + 1)), replace=False)
        pat = np.zeros(period, dtype=bool)
        pat[ones] = True
        mask[a : a + w] |= np.resize(pat, w)
    return IntSet(mask)


def _pairwise_differences(s: IntSet) -> np.ndarray:
    mem = s.members()
    d = (mem[:, None] - mem[None, :]).ravel()
    out = np.zeros(s.horizon, dtype=bool)
    out[d[d >= 0]] = True
    return out


def _diff_gap(s: IntSet) -> int | None:
    """Max gap of ``S - S`` on ``[0, L)``, ``L`` the Banach window length: the
    density hypothesis is only certified at that scale."""
    dd = difference_set(s, s)
    return gap_profile(restrict(dd, window_length(s.horizon))).max_gap


def _periodic_patterns(max_period: int, delta: float):
    for period in range(1, max_period + 1):
        for bits in range(1, 1 << period):
            if bin(bits).count("1") >= delta * period - 1e-12:
                yield period, bits


def _gap_instance(p: dict) -> tuple[str, dict]:
    part = p["part"]
    N = p["horizon"]
    if part in ("a", "b"):
        sys = make_system(p["system"])
        x = sys.parse_point(p["x"])
        if N < 4096:
            return INCONCLUSIVE, {"reason": "horizon below 4096"}
        if detect_period(sys, x, min(1000, N // 2), 0.0) is not None:
            return INCONCLUSIVE, {"reason": "x is periodic"}
        st = sys.states(x, N)
        for j in range(1, 49):
            r = 2.0 ** -j
            s = IntSet(sys.ball_mask(st, x, r))
            if part == "a":
                g = gap_profile(s)
                if len(s) < 2:
                    return VIOLATION, {"k": p["k"], "reason": "returns exhausted before min gap exceeded k"}
                if g.min_gap > p["k"]:
                    return OK, {"k": p["k"], "radius": r, "min_gap": g.min_gap}
            else:
                bd = estimate(s, "upper_banach").value
                if bd <= p["eps"]:
                    return OK, {"eps": p["eps"], "radius": r, "bd": bd}
        return VIOLATION, {"reason": "no radius found"}
    if part == "c":
        sys = make_system(p["system"])
        if N < 4096:
            return INCONCLUSIVE, {"reason": "horizon below 4096"}
        x, c, x0 = sys.parse_point(p["x"]), sys.parse_point(p["center"]), sys.parse_point(p["fixed"])
        r = p["radius"]
        if sys.metric(x0, sys.iterate(x0, 1)) != 0 or not sys.metric(x0, c) > r:
            return INCONCLUSIVE, {"reason": "fixed point inside closure(U) or not fixed"}
        st = sys.states(x, N)
        if not sys.ball_mask(st, x0, r / 8).any():
            return INCONCLUSIVE, {"reason": "fixed point not near orb(x)"}
        s = IntSet(sys.ball_mask(st, c, r))
        g = gap_profile(s)
        d = estimate_all(s)
        ev = {"max_gap": g.max_gap, "bd_upper": d["upper_banach"].value, "bd_lower": d["lower_banach"].value}
        return (OK if g.max_gap is not None and g.max_gap >= p["G"] else VIOLATION), ev
    if part == "d":
        delta = p["delta"]
        s = planted_set(p["seed"], N, delta)
        bd = estimate(s, "upper_banach").value
        if bd < delta:
            return INCONCLUSIVE, {"reason": "planted density below delta", "bd": bd}
        g = _diff_gap(s)
        bound = difference_gap_bound(delta)
        return (OK if g is not None and g <= bound else VIOLATION), {"gap": g, "bound": bound, "bd": bd}
    if part == "oracle":
        # calibration: every periodic pattern of period <= bound with density >= delta,
        # plus planted sets, against a pairwise difference oracle at a small horizon
        delta = p["delta"]
        bound = difference_gap_bound(delta)
        worst, n = 0, 0
        sets = [IntSet(np.resize(np.array([(bits >> i) & 1 for i in range(per)], dtype=bool), N))
                for per, bits in _periodic_patterns(bound, delta)]
        sets += [planted_set(p["seed"] + i, N, delta) for i in range(p["planted"])]
        for s in sets:
            oracle = _pairwise_differences(s)
            fast = difference_set(s, s).mask
            if not np.array_equal(oracle, fast):
                return VIOLATION, {"reason": "difference_set disagrees with pairwise oracle", "set": s.members()[:32].tolist()}
            if estimate(s, "upper_banach").value < delta:
                continue
            g = gap_profile(IntSet(oracle[: window_length(N)])).max_gap or 0
            n += 1
            worst = max(worst, g)
            if g > bound:
                return VIOLATION, {"reason": "bound too small", "gap": g, "bound": bound,
                                   "set": s.members()[:32].tolist()}
        return OK, {"calibrated": n, "worst_gap": worst, "bound": bound}
    raise ValueError(f"unknown gap part {part!r}")


def check_gap_properties(configs: list[dict]) -> CheckResult:
    """Parts: ``a`` small radius forces min gap > k; ``b`` small radius forces
    small upper Banach density; ``c`` return sets avoiding a fixed point have
    large gaps; ``d`` difference sets of dense sets have bounded gaps;
    ``oracle`` calibrates the bound of ``d``."""

    def summarize(ev):
        out = {}
        gaps = [e["gap"] for e in ev if "gap" in e and e.get("gap") is not None]
        if gaps:
            out["max_diff_gap"] = max(gaps)
        mg = [e["max_gap"] for e in ev if "max_gap" in e]
        if mg:
            out["return_max_gap"] = max(mg)
        cal = [e["calibrated"] for e in ev if "calibrated" in e]
        if cal:
            out["calibrated"] = sum(cal)
        return out

    return _aggregate("gap_properties", "small balls give large gaps; S-S of dense S has bounded gaps", configs,
                      _gap_instance, summarize)


# ---------------------------------------------------------------- difference return


def _difference_return_instance(p: dict) -> tuple[str, dict]:
    sys = make_system(p["system"])
    N = p["horizon"]
    if N < 1024:
        return INCONCLUSIVE, {"reason": "horizon below 1024"}
    x = sys.parse_point(p["x"])
    if not is_pseudo_universal(sys, x, N):
        return INCONCLUSIVE, {"reason": "x fails the 64-cell density test"}
    (uc, ur), (vc, vr) = p["U"], p["V"]
    U = (sys.parse_point(uc), ur)
    V = (sys.parse_point(vc), vr)
    st = sys.states(x, N)
    nu_, nv = sys.ball_mask(st, *U), sys.ball_mask(st, *V)
    hits, pts, witness = analysis.hitting_witnesses(sys, U, V, p["grid"], N)
    observed = hits.members()
    if observed.size == 0:
        return INCONCLUSIVE, {"reason": "no observed n in N(U,V)"}
    rng = np.random.default_rng(p["seed"])
    ns = np.sort(rng.choice(observed, min(p["samples"], observed.size), replace=False))
    checked = 0
    for n in ns.tolist():
        y = pts[int(witness[n])]
        ys = sys.states(y, n + 1)
        if not (sys.ball_mask(ys[:1], *U)[0] and sys.ball_mask(ys[n : n + 1], *V)[0]):
            return VIOLATION, {"n": n, "reason": "grid witness does not certify n"}
        M = N - n
        w = nu_[:M] & nv[n:]
        if not w.any():
            continue
        D = difference_set(IntSet(w), IntSet(w)).members()
        ds = np.sort(rng.choice(D, min(64, D.size), replace=False))
        for d in ds.tolist():
            t = np.flatnonzero(w[: M - d] & w[d:])
            if t.size == 0:
                return VIOLATION, {"n": n, "d": d, "reason": "difference_set claims d without a pair"}
            t0 = int(t[0])
            # witness T^t x in U with T^(d+n) (T^t x) in V
            if not (sys.ball_mask(st[t0 : t0 + 1], *U)[0] and sys.ball_mask(st[t0 + d + n : t0 + d + n + 1], *V)[0]):
                return VIOLATION, {"n": n, "d": d, "t": t0}
            checked += 1
    # k - S ⊆ N(U, V) for S ⊆ N(x', U) with 0 in S, x' = T^a x, k in N(x', V), k >= max S
    first = np.flatnonzero(nu_)
    if first.size == 0:
        return INCONCLUSIVE, {"reason": "orbit never enters U"}
    a = int(first[0])
    S = (first[first < a + p["span"]] - a)[:4]
    ks = np.flatnonzero(nv[a:])
    ks = ks[ks >= S.max()]
    if ks.size < 3:
        return VIOLATION, {"reason": "fewer than 3 k with k-S inside N(U,V)", "found": int(ks.size)}
    xa = sys.iterate(x, a)
    for k in ks[:3].tolist():
        for s in S.tolist():
            ys = sys.iterate(xa, s)
            if not (sys.ball_mask(sys.states(ys, 1), *U)[0] and
                    sys.ball_mask(sys.states(sys.iterate(ys, k - s), 1), *V)[0]):
                return VIOLATION, {"k": k, "s": s, "reason": "k-s not certified"}
    return OK, {"pairs": checked, "n_checked": int(ns.size), "k_found": int(ks.size)}


def check_difference_return(sys: str, x, U: tuple, V: tuple, horizon: int, *, seed: int = 0, samples: int = 4,
                            grid: int = 16, span: int = 64) -> CheckResult:
    s = make_system(sys)
    inst = {"system": sys, "x": _point_json(s, x), "U": [_point_json(s, U[0]), float(U[1])],
            "V": [_point_json(s, V[0]), float(V[1])], "horizon": horizon, "seed": seed, "samples": samples,
            "grid": grid, "span": span}
    return _aggregate("difference_return", "N(x,W)-N(x,W)+n and k-S lie in N(U,V)", [inst],
                      _difference_return_instance)


# ---------------------------------------------------------------- Ansari decomposition


def _ansari_instance(p: dict) -> tuple[str, dict]:
    sys = make_system(p["system"])
    k = p["k"]
    if k < 1:
        raise ValueError("k must be >= 1")
    M = (p["horizon"] // k) * k
    if M < k:
        return INCONCLUSIVE, {"reason": "horizon below k"}
    x, c, r = sys.parse_point(p["x"]), sys.parse_point(p["center"]), p["radius"]
    lhs = IntSet(sys.ball_mask(sys.states(x, M), c, r))
    P = sys.power(k)
    rhs = np.zeros(M, dtype=bool)
    for i in range(k):
        part = IntSet(P.ball_mask(P.states(sys.iterate(x, i), M // k), c, r))
        rhs |= affine_image(restrict(part, M), k, i, "forward").mask
    if not np.array_equal(lhs.mask, rhs):
        diff = np.flatnonzero(lhs.mask != rhs)
        return VIOLATION, {"first_mismatch": int(diff[0]), "mismatches": int(diff.size)}
    return OK, {"size": len(lhs)}


def check_ansari_decomposition(sys: str, x, U: tuple, k: int, horizon: int) -> CheckResult:
    s = make_system(sys)
    inst = {"system": sys, "x": _point_json(s, x), "center": _point_json(s, U[0]), "radius": float(U[1]),
            "k": k, "horizon": horizon}
    return _aggregate("ansari", "N_T(x,U) = union of k*N_{T^k}(T^i x,U)+i", [inst], _ansari_instance)


# ---------------------------------------------------------------- null-orbit transfer


def _null_instance(p: dict) -> tuple[str, dict]:
    sys = make_system(p["system"])
    N = p["horizon"]
    if N < 256:
        return INCONCLUSIVE, {"reason": "horizon below 256"}
    x, u, v = sys.parse_point(p["x"]), sys.parse_point(p["u"]), sys.parse_point(p["v"])
    ru, rv = p["ru"], p["rv"]
    if isinstance(sys, CantorShift):
        m = min(CantorShift.agree_length(rv), sys.depth)
        z = x.xor(v).truncate(m)
        s = z.support(m)
        zero = int(sys.states(z, s + 1)[s]) == 0
    elif isinstance(sys, WeightedShift):
        z = v - x
        nz = np.flatnonzero(z)
        s = int(nz[-1]) + 1 if nz.size else 0
        zero = not np.any(sys.states(z, s + 1)[s])
    else:
        raise ValueError("null-orbit transfer needs a group system with null orbits")
    if s > p["support_bound"]:
        return INCONCLUSIVE, {"reason": f"support {s} above bound"}
    if not zero:
        return VIOLATION, {"reason": "T^s z is not 0", "s": s}
    y = sys.add(x, z)
    if not sys.ball_mask(sys.states(y, 1), v, rv)[0]:
        return VIOLATION, {"reason": "y not in V", "s": s}
    a0 = sys.ball_mask(sys.states(x, N), u, ru / 2)
    b = sys.ball_mask(sys.states(y, N), u, ru)
    bad = np.flatnonzero(a0[s:] & ~b[s:])
    if bad.size:
        return VIOLATION, {"reason": "N(x,U0) minus [0,s) not inside N(y,U)", "n": int(bad[0]) + s, "s": s}
    ev = {"s": s, "returns": int(np.count_nonzero(a0))}
    k = p.get("period")
    if k:
        idx = np.arange(N)
        need = (idx % k == 0) & (idx >= s)
        miss = np.flatnonzero(need & ~b)
        if miss.size:
            return VIOLATION, {"reason": "k*omega minus [0,s) not inside N(y,U)", "n": int(miss[0]), "s": s}
        lemma = p.get("lemma_point")
        if lemma is not None:
            A = IntSet(sys.ball_mask(sys.states(sys.parse_point(lemma), N), u, ru / 2))
            B = IntSet(b)
            h0 = gap_profile(IntSet(b[s:])).max_gap or 1
            H = N - h0 - 1
            nu = make_submeasure("nu")
            An = exh_norm(nu, restrict(A, H))
            if An > 0:
                best = max(exh_norm(nu, IntSet(restrict(A, H).mask & restrict(affine_image(B, 1, h, "backward"), H).mask))
                           for h in range(h0 + 1))
                ev.update({"h0": h0, "norm_A": An, "best": best})
                if best < An / h0 - 1e-12:
                    return VIOLATION, {"reason": "no shift h <= h0 keeps norm/h0", "h0": h0, "norm_A": An,
                                       "best": best}
    return OK, ev


def _random_cantor_word(rng, depth: int) -> str:
    return "finite:" + "".join(map(str, rng.integers(0, 2, depth).tolist()))


def null_orbit_instances(system: str, trials: int, horizon: int, seed: int) -> list[dict]:
    sys = make_system(system)
    rng = np.random.default_rng([seed, 7])
    out = []
    for t in range(trials):
        if isinstance(sys, CantorShift):
            D = sys.depth
            periodic = t % 2 == 1
            inst = {"system": system, "horizon": horizon, "support_bound": D,
                    "ru": 2.0 ** -int(rng.integers(1, 6)), "rv": 2.0 ** -int(rng.integers(1, 12))}
            inst["v"] = _random_cantor_word(rng, D)
            if periodic:
                k = int(rng.integers(1, 5))
                pat = "".join(map(str, rng.integers(0, 2, k).tolist()))
                inst.update({"x": f"periodic:{pat}", "u": f"periodic:{pat}", "period": k,
                             "lemma_point": "champernowne"})
            else:
                inst["x"] = f"random:{int(rng.integers(1 << 30))}" if t % 4 else "champernowne"
                inst["u"] = _random_cantor_word(rng, D)
        else:
            d = sys.d
            vec = lambda: ",".join(repr(float(v)) for v in rng.uniform(-1, 1, d))
            inst = {"system": system, "horizon": horizon, "support_bound": d, "x": vec(), "v": vec(),
                    "ru": float(rng.uniform(0.1, 1.0)), "rv": float(rng.uniform(0.1, 1.0))}
            if t % 2:
                inst.update({"u": ",".join(["0.0"] * d), "period": 1})
            else:
                inst["u"] = vec()
        out.append(inst)
    return out


def check_null_orbit_transfer(instances: list[dict]) -> CheckResult:
    return _aggregate("null_orbit_transfer", "N(x,U0) minus F lies in N(y,U) for y = x + z, z with null orbit",
                      instances, _null_instance, lambda ev: {"max_support": max((e.get("s", 0) for e in ev), default=0)})


# ---------------------------------------------------------------- arithmetic ideal


ARITH_MIN_HORIZON = 1 << 18


def _arith_instance(p: dict) -> tuple[str, dict]:
    N, k, h = p["horizon"], p["k"], p["h"]
    if N < ARITH_MIN_HORIZON:
        # below this a sqrt-sparse set still estimates above zero_tol = 0.01
        return INCONCLUSIVE, {"reason": f"horizon below {ARITH_MIN_HORIZON}"}
    S = build(p["set"], N)
    img = affine_image(S, k, h, "forward")
    tol = 2 * k / N + 1e-3
    ev = {}
    for kind in ("upper_asymptotic", "upper_banach"):
        a, b = estimate(S, kind).value, estimate(img, kind).value
        ev[kind] = [a, b]
        if a < p["zero_tol"]:
            if b >= p["zero_tol"]:
                return VIOLATION, {"kind": kind, "S": a, "image": b, "reason": "zero density not preserved"}
        elif abs(b - a / k) > tol:
            return VIOLATION, {"kind": kind, "S": a, "image": b, "expected": a / k, "tol": tol}
    return OK, ev


def check_arithmetic_ideal(samples: list[str], k: int, h: int, horizon: int, zero_tol: float = 0.01) -> CheckResult:
    if k < 1:
        raise ValueError("k must be >= 1")
    insts = [{"set": s, "k": k, "h": h, "horizon": horizon, "zero_tol": zero_tol} for s in samples]
    return _aggregate("arithmetic_ideal", "densities scale by 1/k under S -> k*S+h", insts, _arith_instance)


# ---------------------------------------------------------------- suite

EVALUATORS = {
    "translation_embedding": _translation_instance,
    "gap_properties": _gap_instance,
    "difference_return": _difference_return_instance,
    "ansari": _ansari_instance,
    "null_orbit_transfer": _null_instance,
    "arithmetic_ideal": _arith_instance,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SuiteConfig:
    horizon: int = 1 << 18
    seed: int = 0
    threshold: float = 0.01
    workers: int = 1
    trials: int = 10
    suite: tuple[str, ...] = ()

    def echo(self) -> str:
        return (f"horizon={self.horizon}\nseed={self.seed}\nthreshold={self.threshold!r}\n"
                f"workers={self.workers}\ntrials={self.trials}\nsuite={','.join(self.suite)}\n")


def parse_config(text: str = "", **overrides) -> SuiteConfig:
    """Line-oriented ``key=value`` config; ``#`` starts a comment."""
    vals: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, val = (t.strip() for t in line.split("=", 1))
        vals[key] = val
    vals.update({k: v for k, v in overrides.items() if v is not None})
    conv = {"horizon": int, "seed": int, "threshold": float, "workers": int, "trials": int}
    out = {}
    for key, val in vals.items():
        if key == "suite":
            names = tuple(n.strip() for n in str(val).split(",") if n.strip())
            if names == ("all",) or not names:
                names = tuple(CHECKS)
            unknown = [n for n in names if n not in CHECKS]
            if unknown:
                raise ConfigError(f"unknown check(s): {', '.join(unknown)}")
            out["suite"] = names
        elif key in conv:
            try:
                out[key] = conv[key](val)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {val!r}") from exc
        else:
            raise ConfigError(f"unknown config key {key!r}")
    cfg = SuiteConfig(**out)
    if not cfg.suite:
        cfg = SuiteConfig(**{**out, "suite": tuple(CHECKS)})
    if cfg.horizon < 1 or cfg.workers < 1 or cfg.trials < 1 or cfg.threshold <= 0:
        raise ConfigError("horizon, workers and trials must be positive, threshold > 0")
    return cfg


def _suite_translation(cfg: SuiteConfig) -> CheckResult:
    H = cfg.horizon
    insts = []
    cases = [("doubling", "champernowne", "1/3", "1/3", 0.05),
             ("cantor_shift:32", "champernowne", "periodic:01", "periodic:01", 2.0 ** -3),
             ("cantor_shift:32", "champernowne", "zeros", "zeros", 2.0 ** -3),
             ("rotation:golden", 0, 0, "0.25", 0.1)]
    for ci, (sysname, x, y, c, r) in enumerate(cases):
        for t in range(cfg.trials):
            insts.append({"system": sysname, "x": x, "y": y, "center": c, "radius": r, "horizon": H, "span": 16,
                          "max_size": 8, "trial": t, "seed": cfg.seed * 100000 + ci * 1000 + t})
    return _aggregate("translation_embedding", "finite subsets of N(y,U) translate into N(x,U)", insts,
                      _translation_instance, lambda ev: {"max_k": max((e.get("k", 0) for e in ev), default=0)})


def _suite_gaps(cfg: SuiteConfig) -> CheckResult:
    H = cfg.horizon
    insts = [{"part": "a", "system": "rotation:golden", "x": 0, "k": k, "horizon": H} for k in (5, 10, 20)]
    insts.append({"part": "a", "system": "doubling", "x": "champernowne", "k": 10, "horizon": H})
    insts += [{"part": "b", "system": "rotation:golden", "x": 0, "eps": e, "horizon": H} for e in (0.1, 0.01)]
    insts.append({"part": "c", "system": "doubling", "x": "champernowne", "center": "1/3", "radius": 0.05,
                  "fixed": "0", "G": 10, "horizon": H})
    insts.append({"part": "oracle", "delta": 0.2, "horizon": 1 << 10, "seed": cfg.seed * 7919, "planted": cfg.trials})
    insts += [{"part": "d", "delta": 0.2, "horizon": H, "seed": cfg.seed * 7919 + 10000 + t} for t in range(cfg.trials)]
    return check_gap_properties(insts)


def _suite_difference(cfg: SuiteConfig) -> CheckResult:
    H = min(cfg.horizon, 1 << 16)
    insts = [
        {"system": "doubling", "x": "champernowne", "U": ["0.2", 0.1], "V": ["0.8", 0.1]},
        {"system": "cantor_shift:32", "x": "champernowne", "U": ["finite:01", 0.125], "V": ["finite:110", 0.125]},
        {"system": "doubling", "x": "champernowne", "U": ["0.5", 0.75], "V": ["0.5", 0.75]},
    ]
    for i, inst in enumerate(insts):
        inst.update({"horizon": H, "seed": cfg.seed * 31 + i, "samples": 4, "grid": 16, "span": 64})
    return _aggregate("difference_return", "N(x,W)-N(x,W)+n and k-S lie in N(U,V)", insts,
                      _difference_return_instance,
                      lambda ev: {"pairs": sum(e.get("pairs", 0) for e in ev)})


def ansari_instances(system: str, k: int, trials: int, horizon: int, seed: int) -> list[dict]:
    sys = make_system(system)
    rng = np.random.default_rng([seed, k, 11])
    out = []
    for _ in range(trials):
        if system.startswith("rotation"):
            x = int(rng.integers(0, 1 << 63)) * 2 + int(rng.integers(2))
        else:
            x = f"random:{int(rng.integers(1 << 30))}"
        c = repr(float(rng.random()))
        out.append({"system": system, "x": x, "center": c, "radius": float(rng.uniform(0.01, 0.3)), "k": k,
                    "horizon": horizon})
    del sys
    return out


def check_ansari_instances(instances: list[dict]) -> CheckResult:
    return _aggregate("ansari", "N_T(x,U) = union of k*N_{T^k}(T^i x,U)+i", instances, _ansari_instance)


def _suite_ansari(cfg: SuiteConfig) -> CheckResult:
    H = min(cfg.horizon, 1 << 15)
    insts = []
    for system in ("doubling", "rotation:golden"):
        for k in (1, 2, 3):
            insts += ansari_instances(system, k, cfg.trials, H, cfg.seed)
    return check_ansari_instances(insts)


def _suite_null(cfg: SuiteConfig) -> CheckResult:
    H = min(cfg.horizon, 1 << 16)
    insts = null_orbit_instances("cantor_shift:32", cfg.trials, H, cfg.seed)
    insts += null_orbit_instances("wshift:8,2", cfg.trials, H, cfg.seed)
    return check_null_orbit_transfer(insts)


ARITH_SAMPLES = [("ap:2,0", 3, 1), ("ap:3,1", 2, 5), ("ap:5,2", 4, 0), ("ap:1,0", 7, 3), ("squares", 5, 2),
                 ("blocks:pow4", 2, 0), ("blocks:pow4", 4, 1), ("empty", 3, 0), ("list:1,5,9", 2, 1)]


def _suite_arith(cfg: SuiteConfig) -> CheckResult:
    insts = [{"set": s, "k": k, "h": h, "horizon": cfg.horizon, "zero_tol": 0.01} for s, k, h in ARITH_SAMPLES]
    return _aggregate("arithmetic_ideal", "densities scale by 1/k under S -> k*S+h", insts, _arith_instance)


CHECKS: dict[str, Callable[[SuiteConfig], CheckResult]] = {
    "translation_embedding": _suite_translation,
    "gap_properties": _suite_gaps,
    "difference_return": _suite_difference,
    "ansari": _suite_ansari,
    "null_orbit_transfer": _suite_null,
    "arithmetic_ideal": _suite_arith,
}


def results_csv(results: list[CheckResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in results:
        w.writerow(r.csv_fields())
    return buf.getvalue()


def summary_text(cfg: SuiteConfig, results: list[CheckResult]) -> str:
    lines = ["# config", cfg.echo().rstrip(), "", "# results"]
    for r in results:
        lines.append(f"{r.status:>12}  {r.name}  instances={r.instances} violations={r.violations}")
        if r.counterexample:
            lines.append(f"              counterexample: {r.counterexample}")
    fails = sum(r.status == "fail" for r in results)
    inc = sum(r.status == "inconclusive" for r in results)
    lines.append("")
    lines.append(f"{len(results)} checks, {fails} failed, {inc} inconclusive")
    return "\n".join(lines) + "\n"


def run_suite(cfg: SuiteConfig, out: str | Path | None = None) -> tuple[list[CheckResult], int]:
    """Run the configured checks; returns results (in registry order) and the exit code."""
    names = list(cfg.suite)
    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(lambda n: CHECKS[n](cfg), names))
    else:
        results = [CHECKS[n](cfg) for n in names]
    if out is not None:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / "checks.csv").write_text(results_csv(results))
        (d / "summary.txt").write_text(summary_text(cfg, results))
    return results, (1 if any(r.status == "fail" for r in results) else 0)


def replay(counterexample: str | dict) -> tuple[str, dict]:
    """Re-run one serialized instance; returns ``(verdict, detail)``."""
    obj = json.loads(counterexample) if isinstance(counterexample, str) else counterexample
    name = obj.get("check")
    if name not in EVALUATORS:
        raise ConfigError(f"unknown check {name!r}")
    return EVALUATORS[name](obj["instance"])
