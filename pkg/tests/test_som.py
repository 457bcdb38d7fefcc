import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from somrel.datasets import gauss3_spec, gen_gauss
from somrel.errors import InvalidArgumentError
from somrel.som import (
    Codebook,
    Dataset,
    MapTopology,
    TrainingSchedule,
    best_matching_unit,
    best_matching_units,
    grid_distance,
    init_codebook,
    ss_intra,
    train_som,
)


def brute_ss(centroids, data):
    total = 0.0
    for x in data:
        total += min(sum((a - b) ** 2 for a, b in zip(x, c)) for c in centroids)
    return total


def brute_bmu(centroids, x):
    d = [sum((a - b) ** 2 for a, b in zip(x, c)) for c in centroids]
    return d.index(min(d))


class TestTopology:
    def test_parse_roundtrip(self):
        for text in ("string:9", "grid:7x7", "grid:4x5"):
            assert str(MapTopology.parse(text)) == text

    @pytest.mark.parametrize("bad", ["ring:4", "grid:0x3", "string:", "grid:3", "string:-1"])
    def test_parse_rejects(self, bad):
        with pytest.raises(InvalidArgumentError):
            MapTopology.parse(bad)

    def test_row_major_numbering(self):
        top = MapTopology.grid(4, 5)
        assert top.coords(top.index(1, 3)) == (1, 3)
        assert top.index(2, 0) == 10
        assert top.n_units == 20

    def test_grid_distance_examples(self):
        g = MapTopology.grid(4, 5)
        assert grid_distance(g, g.index(1, 1), g.index(1, 1)) == 0
        assert grid_distance(g, g.index(1, 1), g.index(0, 3)) == 2
        assert grid_distance(MapTopology.string(10), 2, 7) == 5

    def test_grid_distance_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            grid_distance(MapTopology.string(4), 0, 4)

    def test_distance_matrix_matches_pointwise(self):
        top = MapTopology.grid(3, 4)
        D = top.distance_matrix
        for u, v in itertools.product(range(top.n_units), repeat=2):
            assert D[u, v] == grid_distance(top, u, v)


def _all_small_topologies():
    tops = [MapTopology.string(L) for L in range(1, 101)]
    tops += [MapTopology.grid(r, c) for r in range(1, 11) for c in range(1, 11) if r * c <= 100]
    return tops


def test_metric_axioms_exhaustive():
    for top in _all_small_topologies():
        D = top.distance_matrix.astype(np.int64)
        U = top.n_units
        assert np.all(D >= 0)
        assert np.array_equal(D == 0, np.eye(U, dtype=bool))
        assert np.array_equal(D, D.T)
        # triangle inequality: D[u, w] <= D[u, v] + D[v, w] for all u, v, w
        via = (D[:, :, None] + D[None, :, :]).min(axis=1)
        assert np.all(D <= via)


class TestBmu:
    def test_nearest(self):
        cb = Codebook(MapTopology.string(2), [[0.0], [10.0]])
        assert best_matching_unit(cb, [1.0]) == 0

    def test_tie_goes_to_lowest_index(self):
        cb = Codebook(MapTopology.string(2), [[0.0], [10.0]])
        assert best_matching_unit(cb, [5.0]) == 0

    def test_three_centroids(self):
        cb = Codebook(MapTopology.string(3), [[0, 0], [3, 4], [6, 0]])
        assert best_matching_unit(cb, [3, 1]) == 1

    def test_dimension_mismatch(self):
        cb = Codebook(MapTopology.string(2), [[0.0], [10.0]])
        with pytest.raises(InvalidArgumentError):
            best_matching_unit(cb, [1.0, 2.0])
        with pytest.raises(InvalidArgumentError):
            ss_intra(cb, np.zeros((3, 2)))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        U, d = rng.integers(1, 8), rng.integers(1, 4)
        # small integer grid makes exact ties common
        cents = rng.integers(-2, 3, size=(U, d)).astype(float)
        xs = rng.integers(-2, 3, size=(10, d)).astype(float)
        cb = Codebook(MapTopology.string(U), cents)
        got = best_matching_units(cb, xs)
        assert list(got) == [brute_bmu(cents.tolist(), x.tolist()) for x in xs]


class TestSsIntra:
    def test_examples(self):
        one = Codebook(MapTopology.string(1), [[0.0]])
        assert ss_intra(one, np.array([[-1.0], [1.0]])) == 2.0
        two = Codebook(MapTopology.string(2), [[0.0], [10.0]])
        assert ss_intra(two, np.array([[1.0], [4.0], [12.0]])) == 21.0
        pts = np.array([[1.0, 2.0], [3.0, -1.0]])
        assert ss_intra(Codebook(MapTopology.string(2), pts), pts) == 0.0

    def test_brute_force_100_instances(self, rng):
        for _ in range(100):
            U, d, n = rng.integers(1, 10), rng.integers(1, 5), rng.integers(1, 30)
            cents = rng.normal(size=(U, d)) * 5
            data = rng.normal(size=(n, d)) * 5
            cb = Codebook(MapTopology.string(U), cents)
            expected = brute_ss(cents.tolist(), data.tolist())
            assert ss_intra(cb, data) == pytest.approx(expected, rel=1e-9, abs=1e-12)


class TestSchedule:
    def test_defaults(self):
        s = TrainingSchedule.default_for(MapTopology.grid(7, 7), 200)
        assert (s.total_steps, s.alpha_start, s.alpha_end, s.radius_start, s.radius_end) == (
            10000, 0.1, 0.01, 4, 0,
        )

    def test_overrides_ignore_none(self):
        s = TrainingSchedule.default_for(MapTopology.string(6), 10, total_steps=None, alpha_start=0.3)
        assert s.total_steps == 500 and s.alpha_start == 0.3

    @pytest.mark.parametrize("kw", [
        dict(total_steps=0),
        dict(total_steps=10, alpha_start=0.1, alpha_end=0.2),
        dict(total_steps=10, alpha_start=1.5),
        dict(total_steps=10, radius_start=0, radius_end=1),
        dict(total_steps=10, radius_end=-1),
    ])
    def test_invalid(self, kw):
        with pytest.raises(InvalidArgumentError):
            TrainingSchedule(**kw)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 500), st.integers(0, 6), st.integers(0, 6))
    def test_radius_reaches_end_by_half(self, T, a, b):
        rs, re = max(a, b), min(a, b)
        radii = TrainingSchedule(T, radius_start=rs, radius_end=re).radii()
        assert radii.shape == (T,)
        assert radii[0] == rs
        assert np.all(np.diff(radii) <= 0)
        assert np.all(radii[(T + 1) // 2:] == re)
        if T >= 2 * (rs - re + 1):
            # long enough for every level to get its own phase
            assert set(radii.tolist()) == set(range(re, rs + 1))

    def test_learning_rate_linear(self):
        lr = TrainingSchedule(5, alpha_start=0.5, alpha_end=0.1).learning_rates()
        np.testing.assert_allclose(lr, [0.5, 0.4, 0.3, 0.2, 0.1])


class TestInit:
    def test_deterministic_and_members(self, clusters):
        top = MapTopology.grid(3, 3)
        a = init_codebook(clusters, top, 7)
        b = init_codebook(clusters, top, 7)
        assert a.equals(b)
        rows = {tuple(r) for r in clusters.observations}
        assert all(tuple(c) in rows for c in a.centroids)

    def test_n_equals_u_is_permutation(self, rng):
        data = Dataset(rng.normal(size=(6, 2)))
        cb = init_codebook(data, MapTopology.grid(2, 3), 1)
        key = lambda a: sorted(map(tuple, a))
        assert key(cb.centroids) == key(data.observations)

    def test_fewer_rows_than_units(self):
        data = Dataset(np.array([[0.0], [1.0]]))
        cb = init_codebook(data, MapTopology.string(5), 3)
        assert set(cb.centroids[:, 0]) <= {0.0, 1.0}


class TestTrain:
    def test_zero_rate_is_identity(self, clusters):
        top = MapTopology.string(4)
        init = init_codebook(clusters, top, 0)
        out = train_som(clusters, init, TrainingSchedule(300, alpha_start=0.0, alpha_end=0.0), 1)
        assert out.equals(init)

    def test_deterministic(self, clusters):
        top = MapTopology.grid(2, 3)
        init = init_codebook(clusters, top, 0)
        s = TrainingSchedule.default_for(top, clusters.n)
        assert train_som(clusters, init, s, 9).equals(train_som(clusters, init, s, 9))
        assert not train_som(clusters, init, s, 9).equals(train_som(clusters, init, s, 10))

    def test_radius_zero_moves_only_bmu(self, rng):
        top = MapTopology.grid(3, 3)
        init = Codebook(top, rng.normal(size=(9, 2)))
        x = Dataset(np.array([[5.0, 5.0]]))
        out = train_som(x, init, TrainingSchedule(1, 0.5, 0.5, 0, 0), 0)
        moved = np.flatnonzero(np.any(out.centroids != init.centroids, axis=1))
        assert list(moved) == [best_matching_unit(init, [5.0, 5.0])]

    def test_hard_neighbourhood_update(self):
        top = MapTopology.string(5)
        init = Codebook(top, np.arange(5.0)[:, None])
        x = Dataset(np.array([[2.2]]))
        out = train_som(x, init, TrainingSchedule(1, 0.5, 0.5, 1, 1), 0)
        np.testing.assert_allclose(out.centroids[:, 0], [0, 1.6, 2.1, 2.6, 4])

    def test_single_observation_converges(self):
        top = MapTopology.string(5)
        init = Codebook(top, np.linspace(-3, 3, 5)[:, None] * np.ones((1, 2)))
        x = np.array([0.7, -0.4])
        s = TrainingSchedule(10_000, alpha_start=0.1, alpha_end=1e-3, radius_start=2, radius_end=0)
        out = train_som(Dataset(x[None, :]), init, s, 0)
        bmu = best_matching_unit(out, x)
        assert np.linalg.norm(out.centroids[bmu] - x) < 1e-3

    def test_cluster_capture(self):
        data = gen_gauss(gauss3_spec(100), seed=11)
        top = MapTopology.string(3)
        sched = TrainingSchedule.default_for(top, data.n)
        good = 0
        for seed in range(100):
            init = init_codebook(data, top, seed)
            cb = train_som(data, init, sched, 1000 + seed)
            bmu = best_matching_units(cb, data)
            captured = all(len(set(data.labels[bmu == u])) == 1 for u in range(3))
            good += captured and len(set(bmu)) == 3
        assert good >= 95


class TestDataset:
    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidArgumentError):
            Dataset(np.array([[1.0], [np.nan]]))

    def test_frozen(self, clusters):
        with pytest.raises(ValueError):
            clusters.observations[0, 0] = 1.0

    def test_subset_keeps_labels(self, clusters):
        sub = clusters.subset([0, 0, 50])
        assert sub.n == 3 and list(sub.labels) == [0, 0, 1]
