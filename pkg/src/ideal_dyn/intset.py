"""Finite-horizon subsets of the nonnegative integers.

Every set lives in ``[0, horizon)``.  Infinite sets (progressions, dyadic
blocks, random sets) are produced by generators truncated at the horizon, so
all densities and norms computed downstream are prefix statistics.

Set specifications (``build``)::

    ap:<k>,<h>                k*n + h
    list:<n1>,<n2>,...        explicit members
    intervals:<a1>-<b1>;...   closed intervals [a, b]
    blocks:pow4               union of [4^n, 2*4^n)
    random:<p>,<seed>         Bernoulli(p) membership
    file:<path>               newline-delimited decimal members
    squares | all | empty     perfect squares, [0, horizon), nothing
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

__all__ = [
    "IntSet",
    "GapProfile",
    "build",
    "from_members",
    "affine_image",
    "difference_set",
    "set_algebra",
    "gap_profile",
    "restrict",
    "dumps",
    "loads",
]

# Below this many shifts the difference set is accumulated by shifted ORs;
# above it an FFT correlation is cheaper.
_SHIFT_OR_LIMIT = 64


class IntSet:
    """Immutable subset of ``[0, horizon)`` backed by a read-only bool array.

    ``clipped`` counts elements that an affine image pushed outside the
    horizon; it is bookkeeping only and does not take part in equality.
    """

    __slots__ = ("_mask", "_horizon", "clipped")

    def __init__(self, mask: np.ndarray, clipped: int = 0):
        mask = np.asarray(mask, dtype=bool)
        if mask.ndim != 1 or mask.size < 1:
            raise ValueError("IntSet needs a 1-d mask with positive horizon")
        mask = mask.copy()
        mask.flags.writeable = False
        self._mask = mask
        self._horizon = int(mask.size)
        self.clipped = int(clipped)

    @property
    def horizon(self) -> int:
        return self._horizon

    @property
    def mask(self) -> np.ndarray:
        """Read-only membership array of length ``horizon``."""
        return self._mask

    @property
    def packed(self) -> bytes:
        """Canonical packed form; equal sets give equal bytes."""
        return np.packbits(self._mask).tobytes()

    def members(self) -> np.ndarray:
        return np.flatnonzero(self._mask)

    def intervals(self) -> list[tuple[int, int]]:
        """Run-length summary as closed intervals ``(start, end)``."""
        m = self._mask.astype(np.int8)
        edges = np.diff(np.concatenate(([0], m, [0])))
        starts = np.flatnonzero(edges == 1)
        ends = np.flatnonzero(edges == -1) - 1
        return list(zip(starts.tolist(), ends.tolist()))

    def __len__(self) -> int:
        return int(np.count_nonzero(self._mask))

    def __contains__(self, n: object) -> bool:
        return isinstance(n, (int, np.integer)) and 0 <= n < self._horizon and bool(self._mask[n])

    def __iter__(self):
        return iter(self.members().tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntSet):
            return NotImplemented
        return self._horizon == other._horizon and bool(np.array_equal(self._mask, other._mask))

    def __hash__(self) -> int:
        return hash((self._horizon, self.packed))

    def __repr__(self) -> str:
        mem = self.members()
        body = ", ".join(map(str, mem[:8].tolist()))
        if mem.size > 8:
            body += ", ..."
        return f"IntSet({{{body}}}, horizon={self._horizon})"

    def issubset(self, other: IntSet) -> bool:
        _same_horizon(self, other)
        return not bool(np.any(self._mask & ~other._mask))

    def __or__(self, other: IntSet) -> IntSet:
        return set_algebra("union", self, other)

    def __and__(self, other: IntSet) -> IntSet:
        return set_algebra("intersect", self, other)

    def __sub__(self, other: IntSet) -> IntSet:
        return set_algebra("minus", self, other)

    def __invert__(self) -> IntSet:
        return set_algebra("complement", self)


@dataclass(frozen=True)
class GapProfile:
    gaps: tuple[int, ...]
    max_gap: int | None
    min_gap: int | None
    leading_gap: int | None
    trailing_gap: int | None
    max_interval: int
    bound: int
    is_syndetic_at_horizon: bool
    empty: bool = False


def _same_horizon(a: IntSet, b: IntSet) -> None:
    if a.horizon != b.horizon:
        raise ValueError(f"horizon mismatch: {a.horizon} != {b.horizon}")


def from_members(members: Iterable[int], horizon: int) -> IntSet:
    """Build from explicit members; anything outside ``[0, horizon)`` is dropped."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    arr = np.fromiter((int(n) for n in members), dtype=np.int64)
    arr = arr[(arr >= 0) & (arr < horizon)]
    mask = np.zeros(horizon, dtype=bool)
    mask[arr] = True
    return IntSet(mask)


def _parse_int(text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ValueError(f"bad integer for {what}: {text!r}") from None


def build(spec: str | Callable[[np.ndarray], np.ndarray], horizon: int) -> IntSet:
    """Materialize a set specification up to ``horizon``.

    ``spec`` may also be a predicate closure mapping an index array to a bool
    array.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    n = np.arange(horizon, dtype=np.int64)
    if callable(spec):
        return IntSet(np.asarray(spec(n), dtype=bool))
    if not isinstance(spec, str) or not spec.strip():
        raise ValueError("empty set specification")
    spec = spec.strip()
    head, _, body = spec.partition(":")

    if head == "ap":
        parts = body.split(",")
        if len(parts) != 2:
            raise ValueError(f"ap expects k,h: {spec!r}")
        k, h = _parse_int(parts[0], "k"), _parse_int(parts[1], "h")
        if k <= 0:
            raise ValueError("arithmetic progression needs k >= 1")
        return IntSet((n >= h) & ((n - h) % k == 0))
    if head == "list":
        items = [p for p in body.split(",") if p.strip()]
        return from_members((_parse_int(p, "member") for p in items), horizon)
    if head == "intervals":
        mask = np.zeros(horizon, dtype=bool)
        for chunk in filter(str.strip, body.split(";")):
            a, sep, b = chunk.partition("-")
            if not sep:
                raise ValueError(f"interval needs a-b: {chunk!r}")
            lo, hi = _parse_int(a, "start"), _parse_int(b, "end")
            if hi < lo:
                raise ValueError(f"empty interval {chunk!r}")
            mask[max(lo, 0):max(min(hi + 1, horizon), 0)] = True
        return IntSet(mask)
    if head == "blocks":
        if body != "pow4":
            raise ValueError(f"unknown block family {body!r}")
        mask = np.zeros(horizon, dtype=bool)
        start = 1
        while start < horizon:
            mask[start:min(2 * start, horizon)] = True
            start *= 4
        return IntSet(mask)
    if head == "random":
        parts = body.split(",")
        if len(parts) != 2:
            raise ValueError(f"random expects p,seed: {spec!r}")
        p = float(parts[0])
        if not 0.0 <= p <= 1.0:
            raise ValueError("random density p must lie in [0, 1]")
        rng = np.random.default_rng(_parse_int(parts[1], "seed"))
        return IntSet(rng.random(horizon) < p)
    if head == "file":
        text = Path(body).read_text()
        members = [line for line in text.splitlines() if line.strip() and not line.startswith("horizon=")]
        return from_members((_parse_int(m, "member") for m in members), horizon)
    if spec == "squares":
        r = np.arange(int(np.sqrt(horizon)) + 2, dtype=np.int64) ** 2
        return from_members(r.tolist(), horizon)
    if spec == "all":
        return IntSet(np.ones(horizon, dtype=bool))
    if spec == "empty":
        return IntSet(np.zeros(horizon, dtype=bool))
    raise ValueError(f"unknown set specification {spec!r}")


def restrict(s: IntSet, horizon: int) -> IntSet:
    """Same set viewed at a different horizon (truncated or zero-padded)."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    mask = np.zeros(horizon, dtype=bool)
    m = min(horizon, s.horizon)
    mask[:m] = s.mask[:m]
    return IntSet(mask)


def affine_image(s: IntSet, k: int = 1, h: int = 0, direction: str = "forward") -> IntSet:
    """``k*S + h`` (forward) or ``(S - h) / k`` (backward), clipped to the horizon.

    Backward keeps only those ``a - h`` that are nonnegative multiples of ``k``.
    """
    if k <= 0:
        raise ValueError("scale k must be >= 1")
    mem = s.members()
    if direction == "forward":
        img = k * mem + h
    elif direction == "backward":
        img = mem - h
        img = img[(img >= 0) & (img % k == 0)] // k
    else:
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    inside = (img >= 0) & (img < s.horizon)
    mask = np.zeros(s.horizon, dtype=bool)
    mask[img[inside]] = True
    return IntSet(mask, clipped=int(np.count_nonzero(~inside)))


def _difference_by_shifts(a: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    n = a.size
    out = np.zeros(n, dtype=bool)
    for k in shifts.tolist():
        out[: n - k] |= a[k:]
    return out


def _difference_by_fft(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # corr[d] = #{(x, y): x in a, y in b, x - y = d}
    n = a.size
    size = 1 << int(2 * n - 1).bit_length()
    fa = np.fft.rfft(a.astype(np.float64), size)
    if b is a:
        # autocorrelation: one forward transform suffices
        corr = np.fft.irfft(fa * np.conj(fa), size)[:n]
        return corr > 0.5
    fb = np.fft.rfft(b[::-1].astype(np.float64), size)
    corr = np.fft.irfft(fa * fb, size)[n - 1 : 2 * n - 1]
    return corr > 0.5


def difference_set(a: IntSet, b: IntSet) -> IntSet:
    """``A - B = union over k in B of (A - k)``, within ``[0, horizon)``."""
    _same_horizon(a, b)
    shifts = b.members()
    if shifts.size <= _SHIFT_OR_LIMIT:
        return IntSet(_difference_by_shifts(a.mask, shifts))
    return IntSet(_difference_by_fft(a.mask, b.mask))


def set_algebra(op: str, a: IntSet, b: IntSet | None = None) -> IntSet:
    if op == "complement":
        return IntSet(~a.mask)
    if b is None:
        raise ValueError(f"{op} needs two operands")
    _same_horizon(a, b)
    if op == "union":
        return IntSet(a.mask | b.mask)
    if op == "intersect":
        return IntSet(a.mask & b.mask)
    if op == "minus":
        return IntSet(a.mask & ~b.mask)
    raise ValueError(f"unknown set operation {op!r}")


def gap_profile(s: IntSet, syndetic_bound: int | None = None) -> GapProfile:
    """Consecutive-member gaps with boundary gaps reported apart.

    The syndeticity verdict asks that both the interior gaps and the distance
    from the last member to the horizon stay within ``syndetic_bound``
    (default ``isqrt(horizon)``); the leading gap is ignored.
    """
    bound = syndetic_bound if syndetic_bound is not None else max(1, int(np.sqrt(s.horizon)))
    if bound < 1:
        raise ValueError("syndetic bound must be positive")
    mem = s.members()
    if mem.size == 0:
        return GapProfile((), None, None, None, None, 0, bound, False, empty=True)
    gaps = np.diff(mem)
    runs = [b - a + 1 for a, b in s.intervals()]
    leading = int(mem[0])
    trailing = int(s.horizon - 1 - mem[-1])
    max_gap = int(gaps.max()) if gaps.size else None
    min_gap = int(gaps.min()) if gaps.size else None
    syndetic = max_gap is not None and max_gap <= bound and trailing < bound
    return GapProfile(
        gaps=tuple(gaps.tolist()),
        max_gap=max_gap,
        min_gap=min_gap,
        leading_gap=leading,
        trailing_gap=trailing,
        max_interval=max(runs),
        bound=bound,
        is_syndetic_at_horizon=syndetic,
    )


def dumps(s: IntSet) -> str:
    lines = [f"horizon={s.horizon}"]
    lines.extend(str(n) for n in s.members().tolist())
    return "\n".join(lines) + "\n"


def loads(text: str) -> IntSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("horizon="):
        raise ValueError("serialized IntSet must start with 'horizon=<N>'")
    horizon = _parse_int(lines[0].split("=", 1)[1], "horizon")
    return from_members((_parse_int(x, "member") for x in lines[1:]), horizon)
