import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from graspsyn.dataset import extract_features
from graspsyn.errors import DomainError, InsufficientDataError
from graspsyn.hand import GraspType, ObjectSpec
from graspsyn.synergy import (
    ForceMassModel,
    RadarProfile,
    force_mass_eval,
    force_mass_fit,
    radar_area,
    radar_profiles,
)

from conftest import make_trial
from oracles import polygon_area

radii5 = arrays(np.float64, 5, elements=st.floats(0, 100))


def test_area_examples():
    assert radar_area(np.zeros(5)) == 0.0
    assert radar_area(np.ones(5)) == pytest.approx(2.5 * math.sin(math.radians(72)), abs=1e-12)
    assert radar_area([1, 0, 0, 0, 0]) == 0.0
    with pytest.raises(DomainError):
        radar_area(np.ones(4))


@settings(max_examples=200)
@given(radii5, st.floats(0, 10))
def test_area_oracle_and_homogeneity(r, s):
    a = radar_area(r)
    assert a == pytest.approx(polygon_area(r.tolist()), rel=1e-9, abs=1e-9)
    assert radar_area(s * r) == pytest.approx(s * s * a, rel=1e-9, abs=1e-9)


def _constant_trial(forces, angle=29.0, name="Apple", gt=GraspType.SG, mass=158.01, n=100):
    f = np.tile(np.asarray(forces, dtype=float), (n, 1))
    return make_trial(f, np.full((n, 5), angle), obj=ObjectSpec(name, gt, mass))


def _records(trials):
    return extract_features(trials, strict=True)


def test_profiles_one_trial():
    recs = _records([_constant_trial([2, 1, 1, 0.5, 0.5])])
    prof = radar_profiles(recs)
    np.testing.assert_allclose(prof["force"][GraspType.SG].radii, [2, 1, 1, 0.5, 0.5])
    post = prof["posture"][GraspType.SG]
    assert len(post.labels) == 15
    spokes = dict(post.spokes)
    assert spokes["Index MCP"] == pytest.approx(12) and spokes["Index PIP"] == pytest.approx(9)
    assert spokes["Pinky DIP"] == pytest.approx(8)
    assert spokes["Thumb DIP (n/a)"] == 0.0


def test_two_identical_trials():
    one = radar_profiles(_records([_constant_trial([2, 1, 1, 0.5, 0.5])]))
    t2 = _constant_trial([2, 1, 1, 0.5, 0.5])
    two = radar_profiles(_records([t2, _constant_trial([2, 1, 1, 0.5, 0.5])]))
    for dom in ("force", "posture"):
        np.testing.assert_allclose(one[dom][GraspType.SG].radii, two[dom][GraspType.SG].radii)
    assert two["force"][GraspType.SG].n_trials == 2


def test_missing_type_dropped(caplog):
    prof = radar_profiles(_records([_constant_trial([1] * 5)]), [GraspType.SG, GraspType.PP])
    assert list(prof["force"]) == [GraspType.SG]
    assert "PP" in caplog.text


def test_negative_radius_rejected():
    with pytest.raises(DomainError):
        RadarProfile(GraspType.SG, "force", tuple("abcde"), [1, 1, -1, 1, 1])


def test_power_beats_precision(default_records):
    force = radar_profiles(default_records)["force"]
    power = min(radar_area(force[g]) for g in (GraspType.SG, GraspType.CG, GraspType.EG))
    precision = max(radar_area(force[g]) for g in (GraspType.TP, GraspType.LP, GraspType.PP))
    assert power > precision


def test_force_mass_examples():
    model = ForceMassModel(GraspType.CG, [100.0, 200.0], [5.0, 7.0])
    assert force_mass_eval(model, 150).value == pytest.approx(6.0)
    assert force_mass_eval(model, 100) == (5.0, False)
    hi = force_mass_eval(model, 250)
    assert hi.value == pytest.approx(8.0) and hi.extrapolated  # 7 N + 0.02 N/g * 50 g
    lo = force_mass_eval(model, 50)
    assert lo.value == pytest.approx(4.0) and lo.extrapolated
    vec = force_mass_eval(model, np.array([50.0, 150.0]))
    np.testing.assert_array_equal(vec.extrapolated, [True, False])


def test_force_mass_model_invariants():
    with pytest.raises(InsufficientDataError):
        ForceMassModel(GraspType.CG, [100.0], [5.0])
    with pytest.raises(DomainError):
        ForceMassModel(GraspType.CG, [200.0, 100.0], [5.0, 7.0])


@settings(max_examples=100)
@given(st.lists(st.floats(0, 1499), min_size=2, max_size=8, unique=True), st.data())
def test_force_mass_reproduces_points(masses, data):
    masses = np.sort(masses)
    if np.min(np.diff(masses)) < 1e-3:
        return
    forces = data.draw(arrays(np.float64, masses.size, elements=st.floats(0, 20)))
    model = ForceMassModel(GraspType.SG, masses, forces)
    for m, f in model.samples:
        r = force_mass_eval(model, m)
        assert r.value == pytest.approx(f, abs=1e-9) and not r.extrapolated


@settings(max_examples=100)
@given(st.lists(st.floats(0, 1499), min_size=2, max_size=8, unique=True), st.data())
def test_force_mass_continuous(masses, data):
    masses = np.sort(masses)
    if np.min(np.diff(masses)) < 1e-3:
        return
    forces = data.draw(arrays(np.float64, masses.size, elements=st.floats(0, 20)))
    model = ForceMassModel(GraspType.SG, masses, forces)
    slope = np.max(np.abs(np.diff(forces) / np.diff(masses)))
    for m in masses:
        for d in (1e-4, 1e-7):
            left, mid, right = force_mass_eval(model, np.array([m - d, m, m + d])).value
            assert abs(left - mid) <= slope * d + 1e-9
            assert abs(right - mid) <= slope * d + 1e-9


def test_force_mass_fit_from_records():
    trials = [
        _constant_trial([1, 1, 1, 1, 1], name="A", mass=100.0),
        _constant_trial([2, 1, 1, 1, 1], name="A", mass=100.0),
        _constant_trial([2, 2, 2, 2, 2], name="B", mass=300.0),
        _constant_trial([0, 0, 0, 0, 0.5], name="Switch", gt=GraspType.INDEX_POINTING, mass=None),
    ]
    recs = _records(trials)
    model = force_mass_fit(recs, GraspType.SG)
    np.testing.assert_allclose(model.masses, [100, 300])
    np.testing.assert_allclose(model.forces, [5.5, 10])
    assert model.objects == ("A", "B")
    with pytest.raises(InsufficientDataError):
        force_mass_fit(recs, GraspType.INDEX_POINTING)
