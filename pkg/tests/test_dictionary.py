"""Dictionary storage, quantization decisions and significance bookkeeping."""

import numpy as np
import pytest

import oracles
from dklms.dictionary import Dictionary, DictionaryEntry
from dklms.errors import ConfigError, ShapeError, StateError
from dklms.kernel import KernelParams, gaussian_kernel

P = KernelParams(sigma=1.0)


def small_dict(centers, weights, sigs=None, ages=None, budget=None):
    """Build a dictionary with prescribed state, bypassing the update path."""
    d = Dictionary(len(centers[0]), budget=budget)
    for i, (c, w) in enumerate(zip(centers, weights)):
        s = sigs[i] if sigs is not None else abs(w)
        a = ages[i] if ages is not None else 1.0
        d._append(np.asarray(c, dtype=float), w, s, a)
    return d


def test_construction_validation():
    with pytest.raises(ShapeError):
        Dictionary(0)
    with pytest.raises(ConfigError):
        Dictionary(2, budget=0)


def test_initial_entry():
    d = Dictionary.initial([1.0, -2.0], eta=0.25, d0=-3.0)
    assert len(d) == 1
    assert d.centers.tolist() == [[1.0, -2.0]]
    assert d.weights.tolist() == [-0.75]
    assert d.significances.tolist() == [3.0]
    assert d.ages.tolist() == [1.0]


def test_predict_single_entry_at_center():
    d = small_dict([[0.5, 0.5]], [0.7])
    assert d.predict([0.5, 0.5], P) == 0.7


def test_predict_zero_weights():
    d = small_dict([[0.0], [1.0], [2.0]], [0.0, 0.0, 0.0])
    assert d.predict([0.3], P) == 0.0


def test_predict_matches_bruteforce_sum():
    rng = np.random.default_rng(11)
    centers = rng.normal(size=(3, 4))
    weights = rng.normal(size=3)
    d = small_dict(centers, weights)
    x = rng.normal(size=4)
    expected = sum(w * oracles.rbf(list(c), list(x), 1.0) for c, w in zip(centers, weights))
    assert d.predict(x, P) == pytest.approx(expected, rel=1e-12)


def test_predict_empty_raises():
    with pytest.raises(StateError):
        Dictionary(2).predict([0.0, 0.0], P)


def test_predict_linear_in_weights():
    rng = np.random.default_rng(12)
    centers = rng.normal(size=(5, 2))
    w1 = rng.normal(size=5)
    w2 = rng.normal(size=5)
    x = rng.normal(size=2)
    a = small_dict(centers, w1).predict(x, P)
    b = small_dict(centers, w2).predict(x, P)
    both = small_dict(centers, w1 + w2).predict(x, P)
    assert both == pytest.approx(a + b, rel=1e-12, abs=1e-12)


def test_nearest_exact_match():
    d = small_dict([[0.0, 0.0], [1.0, 0.0], [2.0, 2.0]], [0.1, 0.2, 0.3])
    assert d.nearest_entry([2.0, 2.0]) == (2, 0.0)


def test_nearest_tie_breaks_low_index():
    d = small_dict([[-1.0], [1.0]], [0.0, 0.0])
    j, dist = d.nearest_entry([0.0])
    assert j == 0
    assert dist == 1.0


def test_nearest_matches_linear_scan():
    rng = np.random.default_rng(7)
    centers = rng.normal(size=(10, 3))
    d = small_dict(centers, np.zeros(10))
    for _ in range(25):
        x = rng.normal(size=3)
        j, dist = d.nearest_entry(x)
        oj, od = oracles._nearest([list(c) for c in centers], list(x))
        assert j == oj
        assert dist == pytest.approx(od, rel=1e-12)


def test_nearest_empty_raises():
    with pytest.raises(StateError):
        Dictionary(3).nearest_entry([0.0, 0.0, 0.0])


def test_merge_update_arithmetic():
    d = small_dict([[0.0]], [0.5])
    d.merge_update(0, eta=0.1, diffused_error=1.0)
    assert d.weights[0] == 0.6


def test_merge_update_zero_error_is_noop():
    d = small_dict([[0.0], [1.0]], [0.5, -0.2])
    before = d.weights.copy()
    d.merge_update(1, eta=0.1, diffused_error=0.0)
    assert d.weights.tolist() == before.tolist()


def test_merge_update_folds():
    d = small_dict([[0.0]], [0.25])
    errs = [1.0, -0.5, 2.0, 0.125]
    for e in errs:
        d.merge_update(0, eta=0.5, diffused_error=e)
    assert d.weights[0] == pytest.approx(0.25 + 0.5 * sum(errs), rel=1e-14)


def test_merge_update_bad_index():
    d = small_dict([[0.0]], [0.5])
    with pytest.raises(StateError):
        d.merge_update(1, 0.1, 1.0)


def test_add_entry_appends_last():
    d = small_dict([[0.0], [1.0], [2.0]], [0.1, 0.2, 0.3])
    d.add_entry([5.0], eta=0.2, diffused_error=-2.0)
    assert len(d) == 4
    assert d.centers[-1].tolist() == [5.0]
    assert d.weights[-1] == pytest.approx(-0.4)
    assert d.significances[-1] == 2.0
    assert d.ages[-1] == 1.0


def test_add_entry_shifts_prediction_at_new_center():
    rng = np.random.default_rng(21)
    d = small_dict(rng.normal(size=(3, 2)), rng.normal(size=3))
    x = rng.normal(size=2)
    before = d.predict(x, P)
    d.add_entry(x, eta=0.1, diffused_error=0.75)
    assert d.predict(x, P) == pytest.approx(before + 0.1 * 0.75, rel=1e-12)


def test_add_entry_dimension_mismatch():
    d = small_dict([[0.0, 0.0]], [0.1])
    with pytest.raises(ShapeError):
        d.add_entry([1.0], 0.1, 1.0)


def test_growth_beyond_initial_capacity():
    d = Dictionary(1)
    for i in range(40):
        d.add_entry([float(i)], 0.1, float(i))
    assert len(d) == 40
    assert d.centers[:, 0].tolist() == [float(i) for i in range(40)]


def test_significance_on_add_zero_increment():
    d = small_dict([[0.0], [1.0]], [0.5, 0.5], sigs=[2.0, 3.0])
    d.significance_on_add(0.0, zeta=1.0, new_center=[0.5], params=P)
    assert d.significances.tolist() == [2.0, 3.0]


def test_significance_on_add_coincident_center():
    # E <- 0.5*2.0 + 1.0*k(c,c) = 2.0
    d = small_dict([[0.7, -0.1]], [0.5], sigs=[2.0])
    d.significance_on_add(1.0, zeta=0.5, new_center=[0.7, -0.1], params=P)
    assert d.significances[0] == 2.0


def test_significance_on_add_far_center_decays_only():
    d = small_dict([[0.0]], [0.5], sigs=[2.0])
    d.significance_on_add(1.0, zeta=0.25, new_center=[40.0], params=P)
    assert d.significances[0] == pytest.approx(0.5, abs=1e-12)


def test_significance_on_merge_zero_innovation():
    # eta*error = 0 collapses the ratio: E becomes zeta*E + |w_old|
    d = small_dict([[0.0]], [0.8], sigs=[1.5])
    d.significance_on_merge(0, eta=0.1, error=0.0, zeta=0.5, params=P)
    assert d.significances[0] == pytest.approx(0.5 * 1.5 + 0.8, rel=1e-14)
    assert d.ages[0] == pytest.approx(0.5 * 1.0 + 1.0, rel=1e-14)


def test_significance_on_merge_two_entries_hand_check():
    zeta = 0.5
    eta = 0.1
    err = 2.0
    d = small_dict([[0.0], [1.0]], [0.4, -0.6], sigs=[1.0, 2.0], ages=[1.0, 3.0])
    d.significance_on_merge(1, eta=eta, error=err, zeta=zeta, params=P)
    k01 = gaussian_kernel([0.0], [1.0], P)
    w_new = -0.6 + eta * err
    assert d.significances[0] == pytest.approx(zeta * 1.0 + 0.4 * k01, rel=1e-12)
    assert d.ages[0] == pytest.approx(zeta * 1.0, rel=1e-14)
    assert d.significances[1] == pytest.approx(
        (abs(w_new) / 0.6) * zeta * 2.0 + abs(w_new), rel=1e-12
    )
    assert d.ages[1] == pytest.approx(zeta * 3.0 + 1.0, rel=1e-14)
    # significance runs before the weight merge, so weights are untouched here
    assert d.weights.tolist() == [0.4, -0.6]


def test_significance_on_merge_zero_weight_guard():
    d = small_dict([[0.0]], [0.0], sigs=[2.0])
    d.significance_on_merge(0, eta=0.1, error=3.0, zeta=0.5, params=P)
    assert d.significances[0] == pytest.approx(0.5 * 2.0 + 0.3, rel=1e-14)


def test_significance_on_merge_all_zero_weights_zeta_one():
    d = small_dict([[0.0], [2.0], [4.0]], [0.0, 0.0, 0.0], sigs=[1.0, 2.0, 3.0])
    d.significance_on_merge(1, eta=0.1, error=0.0, zeta=1.0, params=P)
    assert d.significances.tolist() == [1.0, 2.0, 3.0]


def test_significance_on_prune_zero_age_correction():
    d = small_dict([[0.0], [1.0]], [0.5, 0.5], sigs=[1.0, 2.0], ages=[4.0, 2.0])
    removed = DictionaryEntry(center=np.array([0.5]), weight=0.1, significance=0.0, age_accum=0.0)
    d.significance_on_prune(removed, zeta=0.5, params=P)
    assert d.significances.tolist() == [1.0, 2.0]
    assert d.ages.tolist() == [3.0, 2.0]


def test_significance_on_prune_hand_check():
    d = small_dict([[0.0]], [-0.5], sigs=[1.0], ages=[1.0])
    removed = DictionaryEntry(center=np.array([1.0]), weight=0.0, significance=0.0, age_accum=3.0)
    d.significance_on_prune(removed, zeta=0.5, params=P)
    k = gaussian_kernel([0.0], [1.0], P)
    assert d.significances[0] == pytest.approx(1.0 - 0.5 * 3.0 * k, rel=1e-12)
    assert d.ages[0] == 1.5


def test_significance_on_prune_far_center():
    d = small_dict([[0.0]], [0.5], sigs=[1.0])
    removed = DictionaryEntry(center=np.array([50.0]), weight=0.0, significance=0.0, age_accum=9.0)
    d.significance_on_prune(removed, zeta=1.0, params=P)
    assert d.significances[0] == pytest.approx(1.0, abs=1e-12)


def test_prune_noop_without_budget():
    d = small_dict([[0.0], [1.0]], [0.1, 0.2])
    assert d.prune_min_significance(0.95, P) is None
    assert len(d) == 2


def test_prune_noop_at_budget():
    d = small_dict([[0.0], [1.0]], [0.1, 0.2], budget=2)
    assert d.prune_min_significance(0.95, P) is None


def test_prune_removes_argmin():
    d = small_dict([[0.0], [5.0], [10.0]], [0.1, 0.2, 0.3], sigs=[3.0, 1.0, 2.0], budget=2)
    idx, removed = d.prune_min_significance(0.95, P)
    assert idx == 1
    assert removed.center.tolist() == [5.0]
    assert len(d) == 2
    assert d.centers[:, 0].tolist() == [0.0, 10.0]


def test_prune_tie_breaks_low_index():
    d = small_dict([[0.0], [5.0], [10.0]], [0.1, 0.2, 0.3], sigs=[1.0, 1.0, 5.0], budget=2)
    idx, removed = d.prune_min_significance(0.95, P)
    assert idx == 0
    assert removed.center.tolist() == [0.0]


def test_prune_applies_survivor_correction():
    sigs = [1.0, 0.0, 2.0]
    ages = [2.0, 7.0, 4.0]
    d = small_dict([[0.0], [1.0], [2.0]], [0.5, -0.5, 0.25], sigs=sigs, ages=ages, budget=2)
    idx, removed = d.prune_min_significance(0.5, P)
    assert idx == 1
    k0 = gaussian_kernel([0.0], [1.0], P)
    k2 = gaussian_kernel([2.0], [1.0], P)
    assert d.significances[0] == pytest.approx(1.0 - 0.5 * 7.0 * k0, rel=1e-12)
    assert d.significances[1] == pytest.approx(2.0 - 0.25 * 7.0 * k2, rel=1e-12)
    assert d.ages.tolist() == [0.5 * 2.0 + 1.0, 0.5 * 4.0 + 1.0]


def test_budget_growth_prunes_back_to_budget():
    d = Dictionary.initial([0.0], eta=0.1, d0=1.0, budget=10)
    for i in range(1, 12):
        d.significance_on_add(1.0, 0.95, [float(i)], P)
        d.add_entry([float(i)], 0.1, 1.0)
        d.prune_min_significance(0.95, P)
        assert len(d) <= 10
    assert len(d) == 10


def test_entries_snapshot_is_decoupled():
    d = small_dict([[1.0, 2.0]], [0.5], sigs=[0.25], ages=[2.0])
    e = d.entries()[0]
    assert e.center.tolist() == [1.0, 2.0]
    assert (e.weight, e.significance, e.age_accum) == (0.5, 0.25, 2.0)
    e.center[0] = 99.0
    assert d.centers[0, 0] == 1.0


def test_json_dump_shapes():
    d = small_dict([[1.0], [2.0]], [0.5, -0.5], budget=4)
    brief = d.to_json_dict()
    assert brief == {"size": 2, "budget": 4}
    full = d.to_json_dict(full=True)
    assert [e["center"] for e in full["entries"]] == [[1.0], [2.0]]
    assert [e["weight"] for e in full["entries"]] == [0.5, -0.5]
