"""Desk-scale dynamical systems: circle rotation, doubling map, Cantor-group
shift and a truncated weighted backward shift.

Representations are chosen so orbits are exact:

* rotation: points and the angle are 64-bit fixed-point fractions of the
  circle; ``T^n x = x + n*alpha mod 2^64`` is computed in closed form with
  wrapping integer arithmetic, so any power ``T^k`` is again exact.
* doubling and cantor: points are lazily generated binary words; the state of
  ``T^n x`` is the window of the word starting at bit ``n`` (64 bits for the
  doubling map read as a binary fraction, ``D`` symbols for the Cantor group).
  Words with an unknown tail raise ``PrecisionError`` instead of inventing bits.
* weighted shift: float vectors of fixed dimension; the map is nilpotent.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "PrecisionError",
    "Word",
    "Orbit",
    "DynSystem",
    "Rotation",
    "Doubling",
    "CantorShift",
    "WeightedShift",
    "make_system",
    "step_orbit",
    "iterate",
    "detect_period",
    "ball_membership",
    "is_pseudo_universal",
    "GOLDEN",
]

SCALE = 1 << 64
MASK = SCALE - 1
U64 = np.uint64


class PrecisionError(ValueError):
    """A finite binary expansion was asked for bits it does not have."""


# ---------------------------------------------------------------- words


def _pow2_ceil(n: int) -> int:
    return 1 << max(6, (max(n, 1) - 1).bit_length())


@lru_cache(maxsize=8)
def _champernowne(size: int) -> np.ndarray:
    parts = [np.zeros(1, dtype=np.uint8)]
    total, L = 1, 1
    while total < size:
        nums = np.arange(1 << (L - 1), 1 << L, dtype=np.int64)
        shifts = np.arange(L - 1, -1, -1, dtype=np.int64)
        block = ((nums[:, None] >> shifts) & 1).astype(np.uint8).ravel()
        parts.append(block)
        total += block.size
        L += 1
    out = np.concatenate(parts)[:size]
    out.flags.writeable = False
    return out


ZERO_BLOCK_START = 4  # dyadic blocks below 2^4 stay pure Champernowne
ZERO_BLOCK_NUM, ZERO_BLOCK_DEN = 7, 16  # content share of each block


@lru_cache(maxsize=4)
def _zeroblock(size: int) -> np.ndarray:
    pos = np.arange(size, dtype=np.int64)
    lead = np.ones(size, dtype=np.int64)
    nz = pos > 0
    lead[nz] = 1 << (np.floor(np.log2(pos[nz])).astype(np.int64))
    # floor(log2) in floating point can be off by one near powers of two
    lead = np.where(lead > pos, lead >> 1, lead)
    lead = np.where((lead << 1) <= pos, lead << 1, lead)
    content = (lead < (1 << ZERO_BLOCK_START)) | ((pos - lead) * ZERO_BLOCK_DEN < lead * ZERO_BLOCK_NUM)
    out = np.zeros(size, dtype=np.uint8)
    k = int(np.count_nonzero(content))
    out[content] = _champernowne(_pow2_ceil(k))[:k]
    out.flags.writeable = False
    return out


@lru_cache(maxsize=16)
def _fraction_bits(p: int, q: int, size: int) -> np.ndarray:
    v = ((p % q) << size) // q
    pad = (-size) % 8
    raw = np.frombuffer((v << pad).to_bytes((size + pad) // 8, "big"), dtype=np.uint8)
    out = np.unpackbits(raw)[:size]
    out.flags.writeable = False
    return out


@lru_cache(maxsize=16)
def _random_bits(seed: int, size: int) -> np.ndarray:
    out = (np.random.default_rng(seed).random(size) < 0.5).astype(np.uint8)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Word:
    """A one-sided binary word; ``bits(n, start)`` returns symbols
    ``start .. start+n-1`` of the (shifted) word."""

    label: str
    source: Callable[[int], np.ndarray] = field(repr=False, compare=False)
    limit: int | None = None  # absolute length available, None if infinite
    offset: int = 0

    def bits(self, n: int, start: int = 0) -> np.ndarray:
        a = self.offset + start
        b = a + n
        if self.limit is not None and b > self.limit:
            raise PrecisionError(
                f"word {self.label} has {self.limit - self.offset} symbols, {start + n} needed"
            )
        return self.source(b)[a:b]

    def shift(self, k: int) -> Word:
        if k < 0:
            raise ValueError("shift must be nonnegative")
        if k == 0:
            return self
        return Word(self.label, self.source, self.limit, self.offset + k)

    @property
    def name(self) -> str:
        return self.label if self.offset == 0 else f"{self.label}>>{self.offset}"

    def xor(self, other: Word) -> Word:
        a, b = self, other
        lim = None
        if a.limit is not None or b.limit is not None:
            lim = min(x.limit - x.offset for x in (a, b) if x.limit is not None)
        return Word(f"({a.name}^{b.name})", lambda n: a.bits(n) ^ b.bits(n), lim)

    def truncate(self, s: int) -> Word:
        """The finitely supported word agreeing with this one on ``[0, s)``."""
        head = self.bits(s).copy()
        return Word.finite(head, label=f"{self.name}|{s}")

    def support(self, n: int) -> int:
        """One past the last 1 among the first ``n`` symbols."""
        nz = np.flatnonzero(self.bits(n))
        return int(nz[-1]) + 1 if nz.size else 0

    # constructors

    @staticmethod
    def champernowne() -> Word:
        return Word("champernowne", lambda n: _champernowne(_pow2_ceil(n)))

    @staticmethod
    def zeroblock() -> Word:
        """Champernowne content on the first 7/16 of each dyadic block
        ``[2^j, 2^(j+1))`` (``j >= 4``) and zeros on the rest."""
        return Word("zeroblock", lambda n: _zeroblock(_pow2_ceil(n)))

    @staticmethod
    def periodic(pattern: str | np.ndarray) -> Word:
        pat = _as_bits(pattern)
        if pat.size == 0:
            raise ValueError("empty period")
        label = "periodic:" + "".join(map(str, pat.tolist()))
        return Word(label, lambda n: np.resize(pat, max(n, 1)))

    @staticmethod
    def fraction(x: Fraction) -> Word:
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        return Word(f"{p}/{q}", lambda n: _fraction_bits(p, q, _pow2_ceil(n)))

    @staticmethod
    def finite(pattern: str | np.ndarray, label: str | None = None) -> Word:
        pat = _as_bits(pattern)
        label = label or "finite:" + "".join(map(str, pat.tolist()))

        def src(n: int) -> np.ndarray:
            out = np.zeros(max(n, pat.size), dtype=np.uint8)
            out[: pat.size] = pat
            return out

        return Word(label, src)

    @staticmethod
    def explicit(pattern: str | np.ndarray) -> Word:
        pat = _as_bits(pattern)
        label = "word:" + ("".join(map(str, pat.tolist())) if pat.size <= 32 else f"<{pat.size} bits>")
        return Word(label, lambda n: pat, limit=pat.size)

    @staticmethod
    def random(seed: int) -> Word:
        return Word(f"random:{seed}", lambda n: _random_bits(seed, _pow2_ceil(n)))

    @staticmethod
    def prefixed(prefix: np.ndarray, tail: Word, label: str) -> Word:
        pre = _as_bits(prefix)

        def src(n: int) -> np.ndarray:
            if n <= pre.size:
                return pre
            return np.concatenate((pre, tail.bits(n - pre.size)))

        lim = None if tail.limit is None else pre.size + tail.limit - tail.offset
        return Word(label, src, lim)


def _as_bits(pattern: str | np.ndarray) -> np.ndarray:
    if isinstance(pattern, str):
        if not set(pattern) <= {"0", "1"}:
            raise ValueError(f"not a binary word: {pattern!r}")
        return np.frombuffer(pattern.encode(), dtype=np.uint8) - ord("0")
    arr = np.asarray(pattern, dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("binary word entries must be 0 or 1")
    return arr


def _int_bits(v: int, width: int) -> np.ndarray:
    return np.array([(v >> (width - 1 - j)) & 1 for j in range(width)], dtype=np.uint8)


def _windows(bits: np.ndarray, n: int, width: int, stride: int = 1) -> np.ndarray:
    acc = np.zeros(n, dtype=U64)
    span = stride * (n - 1) + 1
    for j in range(width):
        acc <<= U64(1)
        acc |= bits[j : j + span : stride].astype(U64)
    return acc


# ---------------------------------------------------------------- orbits


@dataclass(frozen=True)
class Orbit:
    system: str
    base: str
    horizon: int
    states: np.ndarray = field(repr=False)
    drift: bool = False  # True when states carry floating-point rounding

    def __len__(self) -> int:
        return self.horizon


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class DynSystem:
    """Interface: points are system-specific objects, states are numpy rows."""

    name: str

    def parse_point(self, literal):
        raise NotImplementedError

    def step(self, x):
        return self.iterate(x, 1)

    def iterate(self, x, k: int):
        raise NotImplementedError

    def states(self, x, n: int) -> np.ndarray:
        raise NotImplementedError

    def power(self, k: int) -> DynSystem:
        raise NotImplementedError

    def metric(self, a, b) -> float:
        raise NotImplementedError

    def ball_mask(self, states: np.ndarray, center, radius: float) -> np.ndarray:
        raise NotImplementedError

    def label(self, x) -> str:
        return str(x)

    def grid_targets(self, count: int) -> list:
        raise NotImplementedError(f"{self.name} has no target grid")

    def ball_grid(self, center, radius: float, count: int) -> list:
        raise NotImplementedError

    def cells(self, states: np.ndarray, count: int) -> np.ndarray | None:
        return None

    def state(self, x):
        return self.states(x, 1)[0]

    def value(self, x):
        return self.state(x)


def _circle_threshold(radius: float) -> int | None:
    """Largest integer distance (in 2^-64 units) strictly below ``radius``;
    None when the open ball is the whole circle."""
    R = Fraction(radius) * SCALE
    if R > SCALE // 2:
        return None
    return math.ceil(R) - 1


def _circle_mask(states: np.ndarray, c: int, radius: float) -> np.ndarray:
    t = _circle_threshold(radius)
    if t is None:
        return np.ones(states.shape[0], dtype=bool)
    d = states - U64(c)
    return np.minimum(d, U64(0) - d) <= U64(t)


def _circle_dist(a: int, b: int) -> float:
    d = (int(a) - int(b)) & MASK
    return min(d, SCALE - d) / SCALE


def _fixed_point(x: Fraction) -> int:
    return round(Fraction(x) * SCALE) & MASK


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc


GOLDEN = (math.isqrt(5 << 128) - SCALE) >> 1  # floor(2^64 (sqrt5 - 1)/2)


class Rotation(DynSystem):
    """``x -> x + alpha mod 1``; points are 64-bit fixed-point ints."""

    def __init__(self, alpha: int, name: str | None = None):
        self.alpha = alpha & MASK
        if self.alpha == 0:
            raise ValueError("rotation angle must lie in (0, 1)")
        self.name = name or f"rotation:{self.alpha / SCALE!r}"
        approx = Fraction(self.alpha, SCALE).limit_denominator(64)
        if abs(Fraction(self.alpha, SCALE) - approx) < Fraction(1, 1 << 40):
            warnings.warn(f"rotation angle is close to {approx}; orbits are periodic", RuntimeWarning, stacklevel=3)

    def parse_point(self, literal):
        if isinstance(literal, int) and not isinstance(literal, bool):
            return literal & MASK
        if isinstance(literal, (float, Fraction)):
            return _fixed_point(Fraction(literal))
        text = str(literal).strip()
        if text == "golden":
            return GOLDEN
        return _fixed_point(_parse_fraction(text))

    def iterate(self, x: int, k: int) -> int:
        return (x + k * self.alpha) & MASK

    def states(self, x: int, n: int) -> np.ndarray:
        return _frozen(U64(x) + np.arange(n, dtype=U64) * U64(self.alpha))

    def states_by_stepping(self, x: int, n: int) -> np.ndarray:
        steps = np.full(n, self.alpha, dtype=U64)
        steps[0] = U64(x)
        return np.cumsum(steps, dtype=U64)

    def power(self, k: int) -> Rotation:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return Rotation(self.alpha * k, f"{self.name}^{k}")

    def metric(self, a: int, b: int) -> float:
        return _circle_dist(a, b)

    def ball_mask(self, states, center: int, radius: float) -> np.ndarray:
        return _circle_mask(states, center, radius)

    def label(self, x: int) -> str:
        return repr(x / SCALE)

    def value(self, x: int) -> float:
        return x / SCALE

    def grid_targets(self, count: int) -> list[int]:
        return [_fixed_point(Fraction(2 * i + 1, 2 * count)) for i in range(count)]

    def ball_grid(self, center: int, radius: float, count: int) -> list[int]:
        if count == 1:
            return [center]
        R = min(Fraction(radius), Fraction(1, 2))
        return [(center + round((Fraction(2 * i + 1, count) - 1) * R * SCALE)) & MASK for i in range(count)]

    def cells(self, states, count: int) -> np.ndarray:
        return (states >> U64(64 - int(math.log2(count)))).astype(np.int64)


class _WordSystem(DynSystem):
    width: int
    stride: int = 1

    def parse_point(self, literal):
        if isinstance(literal, Word):
            return literal
        if isinstance(literal, Fraction):
            return Word.fraction(literal % 1)
        text = str(literal).strip()
        if text == "champernowne":
            return Word.champernowne()
        if text == "zeroblock":
            return Word.zeroblock()
        if text in ("zeros", "0"):
            return Word.periodic("0")
        for prefix, ctor in (("periodic:", Word.periodic), ("word:", Word.explicit), ("finite:", Word.finite)):
            if text.startswith(prefix):
                return ctor(text[len(prefix):])
        if text.startswith("random:"):
            return Word.random(int(text[7:]))
        if re.fullmatch(r"[01]{2,}", text):
            return Word.explicit(text)
        x = _parse_fraction(text)
        if not 0 <= x < 1:
            raise ValueError(f"point {text} outside [0, 1)")
        return Word.fraction(x)

    def iterate(self, x: Word, k: int) -> Word:
        return x.shift(k * self.stride)

    def states(self, x: Word, n: int) -> np.ndarray:
        bits = x.bits(self.stride * (n - 1) + self.width)
        return _frozen(_windows(bits, n, self.width, self.stride))

    def label(self, x: Word) -> str:
        return x.name


class Doubling(_WordSystem):
    """``x -> 2x mod 1`` on binary expansions; states are 64-bit windows."""

    width = 64

    def __init__(self, stride: int = 1):
        self.stride = stride
        self.name = "doubling" if stride == 1 else f"doubling^{stride}"

    def power(self, k: int) -> Doubling:
        return Doubling(self.stride * k)

    def metric(self, a: Word, b: Word) -> float:
        return _circle_dist(int(self.state(a)), int(self.state(b)))

    def ball_mask(self, states, center: Word, radius: float) -> np.ndarray:
        return _circle_mask(states, int(self.state(center)), radius)

    def value(self, x: Word) -> float:
        return int(self.state(x)) / SCALE

    def grid_targets(self, count: int) -> list[Word]:
        return [Word.fraction(Fraction(2 * i + 1, 2 * count)) for i in range(count)]

    def ball_grid(self, center: Word, radius: float, count: int) -> list[Word]:
        if count == 1:
            return [center]
        c = int(self.state(center))
        R = min(Fraction(radius), Fraction(1, 2))
        pts = []
        for i in range(count):
            s = (c + round((Fraction(2 * i + 1, count) - 1) * R * SCALE)) & MASK
            pts.append(Word.prefixed(_int_bits(s, 64), Word.random(i), f"grid{i}@{s / SCALE!r}"))
        return pts

    def cells(self, states, count: int) -> np.ndarray:
        return (states >> U64(64 - int(math.log2(count)))).astype(np.int64)


class CantorShift(_WordSystem):
    """Left shift on ``{0,1}^omega`` seen through its first ``D`` symbols;
    metric ``2^-i`` with ``i`` the first disagreement; group law xor."""

    def __init__(self, depth: int = 32, stride: int = 1):
        if not 1 <= depth <= 62:
            raise ValueError("cantor depth must be in [1, 62]")
        self.width = depth
        self.stride = stride
        base = f"cantor_shift:{depth}"
        self.name = base if stride == 1 else f"{base}^{stride}"

    @property
    def depth(self) -> int:
        return self.width

    def power(self, k: int) -> CantorShift:
        return CantorShift(self.width, self.stride * k)

    def add(self, a: Word, b: Word) -> Word:
        return a.xor(b)

    def metric(self, a: Word, b: Word) -> float:
        v = int(self.state(a)) ^ int(self.state(b))
        return 0.0 if v == 0 else 2.0 ** -(self.width - v.bit_length())

    @staticmethod
    def agree_length(radius: float) -> int:
        """Prefix length ``m`` with ``d < radius`` iff the first ``m`` symbols agree."""
        if radius <= 0:
            raise ValueError("radius must be positive")
        m = 0
        while not 2.0 ** -m < radius:
            m += 1
        return m

    def ball_mask(self, states, center: Word, radius: float) -> np.ndarray:
        m = self.agree_length(radius)
        diff = states ^ self.state(center)
        if m >= self.width:
            return diff == 0
        return (diff >> U64(self.width - m)) == 0

    def grid_targets(self, count: int) -> list[Word]:
        b = int(math.log2(count))
        if 1 << b != count:
            raise ValueError("cantor target grids need a power-of-two count")
        return [Word.finite(_int_bits(i, b), label=f"cyl:{i:0{b}b}" if b else "cyl:") for i in range(count)]

    def ball_grid(self, center: Word, radius: float, count: int) -> list[Word]:
        if count == 1:
            return [center]
        m = min(self.agree_length(radius), self.width)
        b = max(1, (count - 1).bit_length())
        head = center.bits(m)
        return [Word.prefixed(np.concatenate((head, _int_bits(i, b))), Word.random(i), f"grid{i}")
                for i in range(count)]

    def cells(self, states, count: int) -> np.ndarray:
        b = int(math.log2(count))
        return (states >> U64(self.width - b)).astype(np.int64)


class WeightedShift(DynSystem):
    """``(x_0..x_{d-1}) -> (w_1 x_1, ..., w_{d-1} x_{d-1}, 0)`` with the sup metric."""

    def __init__(self, d: int, weights, stride: int = 1):
        w = np.broadcast_to(np.asarray(weights, dtype=np.float64), (d - 1,)).copy() if d > 1 else np.zeros(0)
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        self.d = d
        self.weights = w
        self.stride = stride
        wtxt = ",".join(repr(float(v)) for v in w)
        self.name = f"wshift:{d},{wtxt}" + ("" if stride == 1 else f"^{stride}")
        # T^stride: coordinate j receives prod(w_{j+1..j+s}) x_{j+s}
        self._pw = np.array([float(np.prod(w[j : j + stride])) if j + stride < d else 0.0 for j in range(d)])
        self.exact = bool(np.all(w == np.round(w)))

    def parse_point(self, literal):
        if isinstance(literal, np.ndarray):
            v = literal.astype(np.float64)
        elif isinstance(literal, (list, tuple)):
            v = np.asarray(literal, dtype=np.float64)
        else:
            v = np.array([float(t) for t in str(literal).strip("() ").split(",")], dtype=np.float64)
        if v.size == 1:
            v = np.full(self.d, v[0])
        if v.shape != (self.d,):
            raise ValueError(f"point needs {self.d} coordinates")
        return v

    def _apply(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(self.d)
        s = self.stride
        if s < self.d:
            out[: self.d - s] = self._pw[: self.d - s] * x[s:]
        return out

    def iterate(self, x: np.ndarray, k: int) -> np.ndarray:
        for _ in range(k):
            x = self._apply(x)
        return x

    def states(self, x: np.ndarray, n: int) -> np.ndarray:
        out = np.zeros((n, self.d))
        cur = np.asarray(x, dtype=np.float64)
        for i in range(min(n, self.d + 1)):
            out[i] = cur
            cur = self._apply(cur)
        return _frozen(out)

    def power(self, k: int) -> WeightedShift:
        return WeightedShift(self.d, self.weights, self.stride * k)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a + b

    def metric(self, a, b) -> float:
        return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))

    def ball_mask(self, states, center, radius: float) -> np.ndarray:
        return np.max(np.abs(states - np.asarray(center)), axis=1) < radius

    def state(self, x):
        return np.asarray(x, dtype=np.float64)

    def label(self, x) -> str:
        return "(" + ",".join(repr(float(v)) for v in x) + ")"

    def ball_grid(self, center, radius: float, count: int) -> list[np.ndarray]:
        if count == 1:
            return [np.asarray(center, dtype=np.float64)]
        rng = np.random.default_rng(0)
        return [np.asarray(center) + 0.999 * radius * rng.uniform(-1, 1, self.d) for _ in range(count)]


def make_system(spec: str) -> DynSystem:
    """``rotation:<alpha|golden>`` | ``doubling`` | ``cantor:<D>`` |
    ``cantor_shift:<D>`` | ``wshift:<d>,<w1>,...`` | ``weighted_shift:<d>,(<w1>,...)``."""
    spec = spec.strip()
    head, _, arg = spec.partition(":")
    if head == "rotation":
        if arg.strip() == "golden":
            return Rotation(GOLDEN, "rotation:golden")
        a = _parse_fraction(arg)
        if not 0 < a < 1:
            raise ValueError("rotation angle must lie in (0, 1)")
        return Rotation(_fixed_point(a), spec)
    if head == "doubling" and not arg:
        return Doubling()
    if head in ("cantor", "cantor_shift"):
        return CantorShift(int(arg) if arg else 32)
    if head in ("wshift", "weighted_shift"):
        nums = [t for t in re.split(r"[,\s()]+", arg) if t]
        if not nums:
            raise ValueError("weighted shift needs a dimension")
        d = int(nums[0])
        if d < 1:
            raise ValueError("dimension must be positive")
        w = [float(t) for t in nums[1:]] or [1.0]
        if len(w) not in (1, d - 1):
            raise ValueError(f"need 1 or {d - 1} weights, got {len(w)}")
        return WeightedShift(d, w if len(w) > 1 else w[0])
    raise ValueError(f"unknown system spec {spec!r}")


def step_orbit(sys: DynSystem, x, n: int) -> Orbit:
    if n < 1:
        raise ValueError("orbit horizon must be >= 1")
    x = sys.parse_point(x)
    drift = isinstance(sys, WeightedShift) and not sys.exact
    return Orbit(sys.name, sys.label(x), n, sys.states(x, n), drift)


def iterate(sys: DynSystem, x, k: int):
    return sys.iterate(sys.parse_point(x), k)


def detect_period(sys: DynSystem, x, max_n: int, tol: float = 0.0) -> int | None:
    """Least ``p <= max_n`` with ``d(T^p x, x) <= tol`` and ``d(T^2p x, x) <= tol``."""
    if max_n < 1 or tol < 0:
        raise ValueError("need max_n >= 1 and tol >= 0")
    x = sys.parse_point(x)
    st = sys.states(x, 2 * max_n + 1)
    if isinstance(sys, WeightedShift):
        d = np.max(np.abs(st - st[0]), axis=1)
    elif isinstance(sys, CantorShift):
        diff = st ^ st[0]
        d = np.zeros(st.shape[0])
        nz = diff != 0
        # distance 2^-(D - bitlength); exact bitlength via integer compare ladder
        bl = np.zeros(st.shape[0], dtype=np.int64)
        for b in range(sys.width):
            bl += (diff >> U64(b)) != 0
        d[nz] = 2.0 ** -(sys.width - bl[nz]).astype(np.float64)
    else:
        diff = st - st[0]
        d = np.minimum(diff, U64(0) - diff).astype(np.float64) / SCALE
    for p in range(1, max_n + 1):
        if d[p] <= tol and d[2 * p] <= tol:
            return p
    return None


def ball_membership(sys: DynSystem, center, radius: float, p) -> bool:
    if radius <= 0:
        raise ValueError("radius must be positive")
    c = sys.parse_point(center)
    st = sys.states(sys.parse_point(p), 1)
    return bool(sys.ball_mask(st, c, radius)[0])


def is_pseudo_universal(sys: DynSystem, x, horizon: int, cells: int = 64) -> bool:
    """Orbit visits every cell of a ``cells``-point grid before ``horizon``."""
    x = sys.parse_point(x)
    c = sys.cells(sys.states(x, horizon), cells)
    if c is None:
        return False
    return np.unique(c).size == cells
