import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ideal_dyn.intset import (
    IntSet,
    affine_image,
    build,
    difference_set,
    dumps,
    from_members,
    gap_profile,
    loads,
    restrict,
    set_algebra,
)

HORIZON = 200
members = st.sets(st.integers(0, HORIZON - 1), max_size=80)


def as_set(s: IntSet) -> set[int]:
    return set(s.members().tolist())


def test_grammar_examples():
    assert as_set(build("ap:3,1", 12)) == {1, 4, 7, 10}
    assert as_set(build("list:5,2,2,99", 10)) == {2, 5}
    assert as_set(build("intervals:1-3;7-8", 10)) == {1, 2, 3, 7, 8}
    assert as_set(build("blocks:pow4", 40)) == {1} | set(range(4, 8)) | set(range(16, 32))
    assert as_set(build("squares", 50)) == {0, 1, 4, 9, 16, 25, 36, 49}
    assert len(build("all", 17)) == 17 and len(build("empty", 17)) == 0
    assert as_set(build(lambda n: n % 5 == 0, 16)) == {0, 5, 10, 15}


def test_random_is_seeded():
    a, b = build("random:0.3,7", 1000), build("random:0.3,7", 1000)
    assert a == b and a != build("random:0.3,8", 1000)


def test_file_spec(tmp_path):
    f = tmp_path / "s.txt"
    f.write_text("3\n9\n100\n")
    assert as_set(build(f"file:{f}", 50)) == {3, 9}


@pytest.mark.parametrize("spec", ["", "ap:0,1", "ap:1", "random:1.5,0", "intervals:5-2", "blocks:pow3", "nope"])
def test_grammar_errors(spec):
    with pytest.raises(ValueError):
        build(spec, 10)


def test_intervals_are_closed_runs():
    s = build("intervals:0-0;3-5", 8)
    assert s.intervals() == [(0, 0), (3, 5)]


@given(members, members)
def test_set_algebra_matches_python_sets(a, b):
    A, B = from_members(a, HORIZON), from_members(b, HORIZON)
    assert as_set(set_algebra("union", A, B)) == a | b
    assert as_set(set_algebra("intersect", A, B)) == a & b
    assert as_set(set_algebra("minus", A, B)) == a - b
    assert as_set(set_algebra("complement", A)) == set(range(HORIZON)) - a
    assert as_set(A | B) == a | b and as_set(~A) == set(range(HORIZON)) - a


def test_set_algebra_errors():
    with pytest.raises(ValueError):
        set_algebra("union", build("all", 3), build("all", 4))
    with pytest.raises(ValueError):
        set_algebra("union", build("all", 3))


@given(members, st.integers(1, 7), st.integers(0, 20))
def test_affine_image_matches_comprehension(a, k, h):
    A = from_members(a, HORIZON)
    fwd = affine_image(A, k, h, "forward")
    expect = {k * x + h for x in a}
    assert as_set(fwd) == {y for y in expect if y < HORIZON}
    assert fwd.clipped == sum(y >= HORIZON for y in expect)
    back = affine_image(A, k, h, "backward")
    assert as_set(back) == {(x - h) // k for x in a if x >= h and (x - h) % k == 0}


def test_affine_image_rejects_bad_scale():
    with pytest.raises(ValueError):
        affine_image(build("all", 4), 0, 0)


@settings(max_examples=60)
@given(st.sets(st.integers(0, 499), max_size=200), st.sets(st.integers(0, 499), max_size=200))
def test_difference_set_matches_pairwise_oracle(a, b):
    # sizes straddle the shift/FFT switch
    A, B = from_members(a, 500), from_members(b, 500)
    expect = {x - y for x in a for y in b if x >= y}
    assert as_set(difference_set(A, B)) == expect


@given(members)
def test_gap_profile_matches_diffs(a):
    prof = gap_profile(from_members(a, HORIZON))
    mem = sorted(a)
    if not mem:
        assert prof.empty and prof.max_gap is None
        return
    diffs = [y - x for x, y in zip(mem, mem[1:])]
    assert prof.gaps == tuple(diffs)
    assert prof.max_gap == (max(diffs) if diffs else None)
    assert prof.leading_gap == mem[0]
    assert prof.trailing_gap == HORIZON - 1 - mem[-1]


def test_syndetic_verdicts():
    assert gap_profile(build("ap:5,0", 10_000)).is_syndetic_at_horizon
    assert not gap_profile(build("squares", 10_000)).is_syndetic_at_horizon
    # a long tail after the last member also breaks syndeticity
    assert not gap_profile(build("intervals:0-4999", 10_000)).is_syndetic_at_horizon


@given(members)
def test_serialization_roundtrip(a):
    A = from_members(a, HORIZON)
    text = dumps(A)
    assert text.startswith(f"horizon={HORIZON}\n")
    assert loads(text) == A


def test_restrict_pads_and_truncates():
    s = build("ap:2,0", 10)
    assert as_set(restrict(s, 5)) == {0, 2, 4}
    assert as_set(restrict(s, 20)) == {0, 2, 4, 6, 8}


def test_mask_is_read_only():
    s = build("all", 4)
    with pytest.raises(ValueError):
        s.mask[0] = False


@settings(max_examples=40)
@given(st.sets(st.integers(0, 499), min_size=65, max_size=300))
def test_self_difference_matches_pairwise_oracle(a):
    # A - A takes the autocorrelation path
    A = from_members(a, 500)
    assert as_set(difference_set(A, A)) == {x - y for x in a for y in a if x >= y}
