import numpy as np
import pytest
from scipy.spatial import cKDTree

from somrel.datasets import (
    GaussCluster,
    GaussSpec,
    HorseshoeSpec,
    gauss1_spec,
    gauss2_spec,
    gauss3_spec,
    gen_gauss,
    gen_horseshoe,
    gen_uniform_cube,
    horseshoe_residual,
    load_abalone,
    load_csv,
    make_dataset,
    save_csv,
    unstandardize,
    zscore,
)
from somrel.errors import DataFormatError, InvalidArgumentError
from somrel.som import Dataset


class TestGauss:
    def test_degenerate_cluster(self):
        spec = GaussSpec((GaussCluster((3.0, -1.0), 1e-12, 50),))
        data = gen_gauss(spec, 0)
        assert np.all(np.abs(data.observations - [3.0, -1.0]) < 1e-9)

    def test_mean_clt(self):
        spec = GaussSpec((GaussCluster((2.0, 5.0), 1.5, 100_000),))
        mean = gen_gauss(spec, 1).observations.mean(axis=0)
        assert np.all(np.abs(mean - [2.0, 5.0]) < 0.01 * 1.5)

    def test_gauss3_separation(self):
        spec = gauss3_spec()
        for a in range(3):
            for b in range(a + 1, 3):
                ca, cb = spec.clusters[a], spec.clusters[b]
                gap = np.linalg.norm(np.subtract(ca.center, cb.center))
                assert gap >= 10 * (ca.std + cb.std)
        data = gen_gauss(spec, 0)
        x, lab = data.observations, data.labels
        intra = max(np.max(np.linalg.norm(x[lab == k][:, None] - x[lab == k][None], axis=2))
                    for k in range(3))
        inter = min(np.min(np.linalg.norm(x[lab == a][:, None] - x[lab == b][None], axis=2))
                    for a in range(3) for b in range(a + 1, 3))
        assert inter > intra

    def test_defaults(self):
        assert gen_gauss(gauss1_spec(), 0).n == 500
        assert gen_gauss(gauss2_spec(), 0).n == 1500
        assert len({c.std for c in gauss2_spec().clusters}) == 1
        assert sorted(c.std for c in gauss3_spec().clusters) == [1.0, 2.0, 3.0]

    def test_deterministic(self):
        a = gen_gauss(gauss2_spec(20), 4).observations
        assert np.array_equal(a, gen_gauss(gauss2_spec(20), 4).observations)

    @pytest.mark.parametrize("clusters", [
        (),
        (GaussCluster((0.0,), 0.0, 5),),
        (GaussCluster((0.0,), 1.0, 0),),
        (GaussCluster((0.0,), 1.0, 5), GaussCluster((0.0, 1.0), 1.0, 5)),
    ])
    def test_invalid(self, clusters):
        with pytest.raises(InvalidArgumentError):
            GaussSpec(clusters)


class TestHorseshoe:
    def test_on_surface(self):
        spec = HorseshoeSpec(n=5000)
        data = gen_horseshoe(spec, 0)
        assert np.max(horseshoe_residual(data.observations, spec)) < 1e-9
        y = data.observations[:, 1]
        assert y.min() >= 0 and y.max() <= spec.width

    def test_noise_moves_off_surface(self):
        spec = HorseshoeSpec(n=2000, noise=0.05)
        res = horseshoe_residual(gen_horseshoe(spec, 0).observations, spec)
        assert 0.02 < np.median(res) < 0.06

    def test_intrinsic_dimension_two(self):
        x = gen_horseshoe(HorseshoeSpec(n=4000), 2).observations
        tree = cKDTree(x)
        _, idx = tree.query(x[::40], k=20)
        ratios = []
        for nb in idx:
            patch = x[nb] - x[nb].mean(axis=0)
            ev = np.sort(np.linalg.eigvalsh(patch.T @ patch))[::-1]
            ratios.append(ev[2] / ev[0])
        assert np.max(ratios) < 0.01

    def test_invalid(self):
        with pytest.raises(InvalidArgumentError):
            HorseshoeSpec(n=0)
        with pytest.raises(InvalidArgumentError):
            HorseshoeSpec(radius=-1)


def test_cube_mean():
    x = gen_uniform_cube(100_000, 3, seed=5).observations
    assert np.all((x >= 0) & (x <= 1))
    assert np.all(np.abs(x.mean(axis=0) - 0.5) < 0.01)


class TestCsv:
    def test_roundtrip(self, tmp_path):
        data = gen_gauss(gauss2_spec(5), 0)
        save_csv(data, tmp_path / "d.csv")
        back = load_csv(tmp_path / "d.csv")
        assert np.array_equal(back.observations, data.observations)

    def test_options(self, tmp_path):
        path = tmp_path / "d.tsv"
        path.write_text("name\ta\tb\nx\t1\t2\n\ny\t3\t4\n")
        d = load_csv(path, delimiter="\t", columns=["b"])
        assert d.observations.tolist() == [[2.0], [4.0]]
        d = load_csv(path, delimiter="\t", label_column="name")
        assert d.columns == ("a", "b") and list(d.labels) == ["x", "y"]

    def test_no_header_indices(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1,2,3\n4,5,6\n")
        assert load_csv(path, header=False, columns=[2, 0]).observations.tolist() == [[3, 1], [6, 4]]

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n1,2\n3,oops\n")
        with pytest.raises(DataFormatError) as exc:
            load_csv(path)
        assert exc.value.row == 3 and exc.value.column == "b"
        assert "oops" in str(exc.value)

    def test_ragged(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n1,2\n3\n")
        with pytest.raises(DataFormatError) as exc:
            load_csv(path)
        assert exc.value.row == 3

    def test_unknown_column(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(DataFormatError):
            load_csv(path, columns=["c"])

    def test_empty(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n")
        with pytest.raises(DataFormatError):
            load_csv(path)

    def test_abalone(self, tmp_path):
        path = tmp_path / "abalone.data"
        path.write_text("M,0.455,0.365,0.095,0.514,0.2245,0.101,0.15,15\n"
                        "F,0.53,0.42,0.135,0.677,0.2565,0.1415,0.21,9\n")
        d = load_abalone(path)
        assert d.observations.shape == (2, 8)
        assert d.observations[:, -1].tolist() == [15.0, 9.0]


class TestZscore:
    def test_moments(self, rng):
        data = Dataset(rng.normal(3, 7, size=(200, 4)))
        z = zscore(data).observations
        assert np.all(np.abs(z.mean(axis=0)) < 1e-12)
        assert np.all(np.abs(z.std(axis=0, ddof=1) - 1) < 1e-12)

    def test_inverse(self, rng):
        data = Dataset(rng.normal(3, 7, size=(50, 3)))
        back = unstandardize(zscore(data))
        np.testing.assert_allclose(back, data.observations, rtol=1e-9)

    def test_constant_column(self):
        data = Dataset(np.array([[1.0, 5.0], [2.0, 5.0]]), columns=("a", "b"))
        with pytest.raises(DataFormatError, match="'b'"):
            zscore(data)

    def test_unstandardize_requires_zscore(self, rng):
        with pytest.raises(InvalidArgumentError):
            unstandardize(Dataset(rng.normal(size=(3, 2))))


def test_make_dataset():
    assert make_dataset("gauss3", seed=0, n=10).n == 30
    assert make_dataset("cube", seed=0, n=7).dim == 3
    assert make_dataset("horseshoe", seed=0, n=9).n == 9
    with pytest.raises(InvalidArgumentError):
        make_dataset("nope")
