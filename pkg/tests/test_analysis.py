import numpy as np
import pytest

from ideal_dyn.analysis import (
    CLASSIFY_HEADER,
    classify,
    cluster_value,
    estimate_c_parameter,
    extract_limit_subsequence,
    hitting_witnesses,
    return_set,
)
from ideal_dyn.dynsys import make_system
from ideal_dyn.ideals import exh_norm, make_submeasure
from ideal_dyn.intset import affine_image, restrict

NU = make_submeasure("nu")


def test_rotation_cluster_norms_frozen():
    rep = cluster_value("rotation:golden", "0", "0.3", 0.2, 9, NU, 10**6)
    # frozen from an independent 200-bit fixed-point orbit
    assert rep.norms[0] == 52429 / 131072
    assert rep.norms[8] == 103 / 65536
    assert rep.u_value == rep.norms[-1]
    assert rep.is_cluster and not rep.is_limit
    assert all(a >= b for a, b in zip(rep.norms, rep.norms[1:]))


def test_return_set_report():
    rep = return_set("rotation:golden", "0", "0.5", 0.1, 10**5)
    assert len(rep.returns) == int(np.count_nonzero(rep.returns.mask))
    assert rep.densities["upper_asymptotic"].value == pytest.approx(0.2, abs=0.01)
    row = rep.csv_row().split(",")
    assert row[0] == "rotation:golden" and int(row[5]) == len(rep.returns)
    with pytest.raises(ValueError):
        return_set("rotation:golden", "0", "0.5", 0.0, 100)


@pytest.mark.parametrize("system,point,center,radius", [
    ("rotation:golden", "0.1", "0.7", 0.05),
    ("doubling", "champernowne", "0.25", 1 / 32),
    ("cantor:24", "champernowne", "finite:101", 0.2),
])
def test_orbit_shift_identity(system, point, center, radius):
    # N(Tx, U) = (N(x, U) - 1) ∩ omega
    N = 1 << 14
    sys = make_system(system)
    x = sys.parse_point(point)
    base = return_set(sys, x, center, radius, N).returns
    moved = return_set(sys, sys.iterate(x, 1), center, radius, N - 1).returns
    assert moved == restrict(affine_image(base, 1, 1, "backward"), N - 1)


def test_hitting_witnesses_are_genuine():
    sys = make_system("rotation:golden")
    s, pts, w = hitting_witnesses(sys, ("0", 0.01), ("0.5", 0.01), 8, 5000)
    V = sys.parse_point("0.5")
    for n in s.members()[::13].tolist():
        y = pts[int(w[n])]
        assert sys.metric(sys.iterate(y, n), V) < 0.01
        assert sys.metric(y, sys.parse_point("0")) < 0.01
    assert np.all(w[~s.mask] == -1)


def test_limit_extraction_on_zeroblock():
    N = 1 << 18
    rep = cluster_value("cantor:32", "zeroblock", "zeros", 1.0, 6, NU, N)
    assert rep.is_limit
    A = extract_limit_subsequence(rep)
    assert A.issubset(rep.return_sets[0])
    assert exh_norm(NU, A) >= rep.u_value - 1e-9
    # past block k every index of A returns to the k-th ball
    for k, (start, _) in enumerate(rep.blocks):
        tail = np.zeros(N, dtype=bool)
        tail[start:] = A.mask[start:]
        assert not np.any(tail & ~rep.return_sets[k].mask)
    assert rep.blocks[-1][1] == N - 1


def test_extraction_refuses_without_limit():
    rep = cluster_value("rotation:golden", "0", "0.3", 0.2, 9, NU, 1 << 16)
    with pytest.raises(ValueError, match="not above threshold"):
        extract_limit_subsequence(rep)


def test_classify_rotation():
    rep = classify("rotation:golden", "0", NU, 10, 0.05, 1 << 17)
    assert rep.verdicts["recurrent"][0] == "positive"
    assert rep.verdicts["universal"][0] == "positive"
    assert rep.verdicts["strong_recurrent"][0] == "member"
    assert rep.verdicts["strong_universal"][0] == "member"
    assert len(rep.csv_rows()) == 4 and CLASSIFY_HEADER.count(",") == rep.csv_rows()[0].count(",")
    par = classify("rotation:golden", "0", NU, 10, 0.05, 1 << 17, workers=3)
    assert par.verdicts == rep.verdicts


def test_classify_fixed_point_is_not_universal():
    rep = classify("doubling", "zeros", NU, 8, 1 / 64, 1 << 12, K=3)
    assert rep.verdicts["recurrent"][0] == "positive"
    assert rep.verdicts["universal"][0] == "member"
    with pytest.raises(ValueError):
        classify("doubling", "zeros", NU, [], 0.1, 100)


def test_c_parameter_guards():
    with pytest.raises(ValueError):
        estimate_c_parameter("cantor:32", "zeros", NU, [], 1.0, 4, 1 << 14)
    with pytest.raises(ValueError, match="density test"):
        estimate_c_parameter("cantor:32", "zeros", NU, ["zeros"], 1.0, 4, 1 << 14)


def test_c_parameter_is_min_over_k_of_max():
    rep = estimate_c_parameter("cantor:32", "zeros", NU, ["zeroblock", "champernowne"], 1.0, 5, 1 << 16)
    best = [max(row) for row in rep.norms]
    assert rep.value == min(best) == best[rep.argmin_k]
    assert float(rep) == rep.value
