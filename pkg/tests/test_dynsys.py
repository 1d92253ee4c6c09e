import warnings
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ideal_dyn.dynsys import (
    GOLDEN,
    CantorShift,
    Doubling,
    PrecisionError,
    Rotation,
    WeightedShift,
    Word,
    ball_membership,
    detect_period,
    is_pseudo_universal,
    make_system,
    step_orbit,
)

SCALE = 1 << 64


def champernowne_oracle(n):
    out = "0"
    k = 1
    while len(out) < n:
        out += format(k, "b")
        k += 1
    return out[:n]


def test_golden_constant():
    getcontext().prec = 60
    want = int((Decimal(5).sqrt() - 1) / 2 * SCALE)
    assert GOLDEN == want


def test_champernowne_prefix():
    frozen = "011011100101110111100010011010101111001101111011"
    w = "".join(map(str, Word.champernowne().bits(48).tolist()))
    assert w == frozen == champernowne_oracle(48)
    long = "".join(map(str, Word.champernowne().bits(5000).tolist()))
    assert long == champernowne_oracle(5000)


def test_zeroblock_layout():
    w = Word.zeroblock().bits(1 << 14)
    champ = Word.champernowne()
    for j in range(4, 14):
        lo, hi = 1 << j, 1 << (j + 1)
        cut = lo + (7 * lo) // 16
        assert not w[cut:hi].any()
        assert w[lo:cut].sum() > 0
    # the content positions, read in order, spell the Champernowne word
    segs = np.concatenate([w[:16]] + [w[1 << j : (1 << j) + (7 << j) // 16] for j in range(4, 14)])
    assert np.array_equal(segs, champ.bits(segs.size))


def test_fraction_and_finite_words():
    assert Word.fraction(Fraction(1, 3)).bits(8).tolist() == [0, 1, 0, 1, 0, 1, 0, 1]
    assert Word.fraction(Fraction(3, 4)).bits(4).tolist() == [1, 1, 0, 0]
    f = Word.finite("101")
    assert f.bits(6).tolist() == [1, 0, 1, 0, 0, 0] and f.support(100) == 3
    with pytest.raises(PrecisionError):
        Word.explicit("1010").bits(5)
    assert Word.champernowne().shift(3).bits(4).tolist() == Word.champernowne().bits(7)[3:].tolist()


def test_random_word_prefix_consistent():
    w = Word.random(9)
    assert np.array_equal(w.bits(100), w.bits(5000)[:100])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, SCALE - 1), st.integers(1, SCALE - 1), st.integers(1, 3000))
def test_rotation_closed_form_matches_stepping(x, alpha, n):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = Rotation(alpha)
    a = r.states(x, n)
    assert np.array_equal(a, r.states_by_stepping(x, n))
    assert int(a[-1]) == (x + (n - 1) * alpha) % SCALE == r.iterate(x, n - 1)


def test_rotation_return_count_frozen():
    r = make_system("rotation:golden")
    st_ = r.states(0, 10**6)
    # frozen from a 200-bit fixed-point recomputation
    assert int(np.count_nonzero(r.ball_mask(st_, r.parse_point("0.5"), 0.1))) == 200000


def test_rotation_ball_matches_exact_oracle():
    r = make_system("rotation:golden")
    states = r.states(0, 20000)
    mask = r.ball_mask(states, r.parse_point("0.25"), 0.05)
    c, R = Fraction(1, 4), Fraction(0.05)
    for n in range(0, 20000, 7):
        x = Fraction(int(states[n]), SCALE)
        d = min(abs(x - c), 1 - abs(x - c))
        assert mask[n] == (d < R)


def test_rotation_small_denominator_warns():
    with pytest.warns(RuntimeWarning):
        make_system("rotation:1/8")


def test_cantor_metric_and_balls():
    c = CantorShift(16)
    assert c.agree_length(1.0) == 1 and c.agree_length(0.3) == 2 and c.agree_length(0.25) == 3
    x = Word.champernowne()
    states = c.states(x, 3000)
    center = c.parse_point("finite:0110")
    for r in (1.0, 0.3, 1 / 16, 1e-6):
        mask = c.ball_mask(states, center, r)
        for n in range(0, 3000, 11):
            assert mask[n] == (c.metric(x.shift(n), center) < r)


def test_cantor_homomorphism():
    c = CantorShift(32)
    rng = np.random.default_rng(1)
    for _ in range(1000):
        a, b = Word.random(int(rng.integers(1 << 30))), Word.random(int(rng.integers(1 << 30)))
        k = int(rng.integers(0, 50))
        lhs = c.states(c.iterate(c.add(a, b), k), 1)[0]
        rhs = c.states(c.iterate(a, k), 1)[0] ^ c.states(c.iterate(b, k), 1)[0]
        assert lhs == rhs


def test_weighted_shift_orbit_and_linearity():
    w = make_system("wshift:3,2")
    st_ = w.states(w.parse_point("1,1,1"), 5)
    assert st_.tolist() == [[1, 1, 1], [2, 2, 0], [4, 0, 0], [0, 0, 0], [0, 0, 0]]
    rng = np.random.default_rng(2)
    w8 = make_system("wshift:8,2")
    for _ in range(1000):
        a, b = rng.integers(-50, 50, 8).astype(float), rng.integers(-50, 50, 8).astype(float)
        k = int(rng.integers(0, 9))
        assert np.array_equal(w8.iterate(w8.add(a, b), k), w8.iterate(a, k) + w8.iterate(b, k))


def test_powers_sample_the_orbit():
    for sys, x in ((make_system("rotation:golden"), "0.1"), (Doubling(), "champernowne"),
                   (CantorShift(20), "champernowne"), (make_system("wshift:6,3"), "1,2,3,4,5,6")):
        p = sys.parse_point(x)
        full = sys.states(p, 60)
        assert np.array_equal(sys.power(3).states(p, 20), full[::3])


def test_make_system_forms():
    assert make_system("cantor:8").name == make_system("cantor_shift:8").name
    assert make_system("wshift:3,2,5").name == make_system("weighted_shift:3,(2,5)").name
    assert isinstance(make_system("doubling"), Doubling)
    assert isinstance(make_system("wshift:4"), WeightedShift)
    for bad in ("rotation:0", "rotation:1.5", "cantor:70", "wshift:4,1,2", "wshift:3,-1", "spiral"):
        with pytest.raises(ValueError):
            make_system(bad)


def test_detect_period():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert detect_period(make_system("rotation:1/8"), "0", 20) == 8
    assert detect_period(CantorShift(16), "periodic:011", 10) == 3
    assert detect_period(make_system("wshift:3,2"), "0", 5) == 1
    assert detect_period(make_system("wshift:3,2"), "1,1,1", 5) is None
    assert detect_period(make_system("rotation:golden"), "0", 50) is None


def test_pseudo_universal_and_membership():
    d = Doubling()
    assert is_pseudo_universal(d, "champernowne", 1 << 12)
    assert not is_pseudo_universal(d, "zeros", 1 << 12)
    assert ball_membership(d, "0.5", 0.01, "0.505")
    assert not ball_membership(d, "0.5", 0.01, "0.52")


def test_explicit_word_too_short_for_orbit():
    with pytest.raises(PrecisionError):
        Doubling().states(Doubling().parse_point("0101"), 4)
    assert Doubling().states(Doubling().parse_point("finite:0101"), 4).shape == (4,)


def test_step_orbit_drift_flag():
    assert not step_orbit(make_system("wshift:4,2"), "1", 8).drift
    assert step_orbit(make_system("wshift:4,0.3"), "1", 8).drift
    with pytest.raises(ValueError):
        step_orbit(Doubling(), "0.5", 0)
