import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import benchpursuit as bp
from benchpursuit import DataMatrix, IndexConfig, ProjectionFrame
from benchpursuit.errors import UnsupportedDimension
from benchpursuit.projection_index import ball_volume, map_to_ball
from benchpursuit.spatial import RegionSpec, combined_region

# Oracle-derived value for the square-corners instance below: dense polar
# grid integration (10^6 cells) of the node gap over the disc centered at
# (0.5, 0.5) with radius sqrt(1/2).
SQUARE_CORNERS_INDEX = 1.895654920938231


def _instance(seed=0, n1=20, n2=25, p=2, shift=1.5):
    rng = np.random.default_rng(seed)
    x = DataMatrix(rng.standard_normal((n1, p)) + shift, tuple(f"v{i}" for i in range(p)))
    y = DataMatrix(rng.standard_normal((n2, p)), tuple(f"v{i}" for i in range(p)))
    return x, y


class TestBallVolume:
    def test_interval(self):
        assert ball_volume(1, 3.0) == pytest.approx(6.0)

    def test_disc(self):
        assert ball_volume(2, 2.0) == pytest.approx(4.0 * np.pi)

    def test_solid_sphere(self):
        assert ball_volume(3, 1.0) == pytest.approx(4.0 * np.pi / 3.0)


class TestMapToBall:
    def test_inside_ball(self, rng):
        region = RegionSpec(center=[1.0, -2.0], base_radius=3.0, multiplier=1.0)
        u = rng.random((500, 2))
        pts = map_to_ball(u, region)
        assert np.linalg.norm(pts - region.center, axis=1).max() <= 3.0 + 1e-12

    def test_single_matches_batch(self, rng):
        region = RegionSpec(center=[0.0, 0.0, 0.0], base_radius=2.0, multiplier=1.0)
        u = rng.random((7, 3))
        batch = map_to_ball(u, region)
        singles = np.array([map_to_ball(row, region) for row in u])
        assert np.array_equal(batch, singles)

    def test_interval_map_is_affine(self):
        region = RegionSpec(center=[5.0], base_radius=2.0, multiplier=1.0)
        pts = map_to_ball(np.array([[0.0], [0.5], [1.0]]), region)
        assert np.allclose(pts[:, 0], [3.0, 5.0, 7.0])

    def test_volume_preservation_statistics(self):
        """The cube-to-ball map should be measure preserving: the fraction of
        mapped points inside the half-radius ball matches the volume ratio."""
        region = RegionSpec(center=[0.0, 0.0], base_radius=1.0, multiplier=1.0)
        from benchpursuit.sobol import SobolStream

        pts = map_to_ball(SobolStream(2).take(4096), region)
        frac = float((np.linalg.norm(pts, axis=1) <= 0.5).mean())
        assert frac == pytest.approx(0.25, abs=0.01)

    def test_unsupported_dimension(self):
        region = RegionSpec(center=[0.0] * 4, base_radius=1.0, multiplier=1.0)
        with pytest.raises(UnsupportedDimension):
            map_to_ball(np.zeros((2, 4)), region)


class TestIndexConfig:
    def test_defaults(self):
        cfg = IndexConfig()
        assert cfg.k == 1.0 and cfg.n_nodes == 50 and cfg.n_nodes_refine == 5000

    def test_validation(self):
        with pytest.raises(ValueError):
            IndexConfig(k=0.0)
        with pytest.raises(ValueError):
            IndexConfig(n_nodes=0)
        with pytest.raises(ValueError):
            IndexConfig(sobol_skip=-1)


class TestIndexValue:
    def test_float_protocol(self):
        x, y = _instance()
        v = bp.index(ProjectionFrame(np.eye(2)), x, y)
        assert float(v) > 0.0
        assert v.n_nodes_used == 50
        assert v.median_converged

    def test_region_attached(self):
        x, y = _instance()
        v = bp.index(ProjectionFrame(np.eye(2)), x, y, IndexConfig(k=2.0))
        assert v.region.multiplier == 2.0


class TestIndexProperties:
    def test_identity_is_exactly_zero(self):
        x, _ = _instance()
        assert float(bp.index(ProjectionFrame(np.eye(2)), x, x)) == 0.0

    def test_symmetry_exact(self):
        x, y = _instance()
        f = ProjectionFrame(np.eye(2))
        assert float(bp.index(f, x, y)) == float(bp.index(f, y, x))

    def test_determinism_bit_identical(self):
        x, y = _instance()
        f = bp.random_frame(2, 2, np.random.default_rng(4))
        assert float(bp.index(f, x, y)) == float(bp.index(f, x, y))

    def test_translation_invariance(self):
        """Shifting both samples by the same vector moves the region with
        them and leaves the index unchanged up to roundoff."""
        x, y = _instance()
        f = ProjectionFrame(np.eye(2))
        shift = np.array([13.25, -7.5])
        xs = DataMatrix(x.values + shift, x.column_names)
        ys = DataMatrix(y.values + shift, y.column_names)
        a = float(bp.index(f, x, y))
        b = float(bp.index(f, xs, ys))
        assert abs(a - b) <= 1e-9 * abs(a)

    def test_rotation_invariance_loose(self):
        x, y = _instance(p=4)
        f = bp.random_frame(4, 2, np.random.default_rng(8))
        q, r = np.linalg.qr(np.random.default_rng(9).standard_normal((2, 2)))
        q = q * np.sign(np.diag(r))
        cfg = IndexConfig(n_nodes_refine=5000)
        a = float(bp.refine_index(f, x, y, cfg))
        b = float(bp.refine_index(ProjectionFrame(f.matrix @ q), x, y, cfg))
        assert abs(a - b) / a < 0.02

    @given(st.integers(0, 10_000))
    @settings(max_examples=15, deadline=None)
    def test_nonnegative(self, seed):
        x, y = _instance(seed=seed, n1=8, n2=9)
        f = ProjectionFrame(np.eye(2))
        assert float(bp.index(f, x, y)) >= 0.0

    def test_skip_changes_nodes(self):
        x, y = _instance()
        f = ProjectionFrame(np.eye(2))
        a = float(bp.index(f, x, y, IndexConfig(sobol_skip=0)))
        b = float(bp.index(f, x, y, IndexConfig(sobol_skip=1)))
        assert a != b


class TestAgainstOracle:
    def test_square_corners_value(self):
        """Two-point samples on opposite edges of the unit square; the
        refined QMC estimate must sit on the dense-grid oracle value."""
        x = DataMatrix(np.array([[0.0, 0.0], [1.0, 0.0]]), ("a", "b"))
        y = DataMatrix(np.array([[0.0, 1.0], [1.0, 1.0]]), ("a", "b"))
        f = ProjectionFrame(np.eye(2))
        refined = float(bp.refine_index(f, x, y, IndexConfig()))
        assert refined == pytest.approx(SQUARE_CORNERS_INDEX, rel=1e-4)
        search = float(bp.index(f, x, y, IndexConfig()))
        assert search == pytest.approx(SQUARE_CORNERS_INDEX, rel=0.02)

    def test_region_is_pooled(self):
        x = DataMatrix(np.array([[0.0, 0.0], [1.0, 0.0]]), ("a", "b"))
        y = DataMatrix(np.array([[0.0, 1.0], [1.0, 1.0]]), ("a", "b"))
        v = bp.index(ProjectionFrame(np.eye(2)), x, y)
        assert np.allclose(v.region.center, [0.5, 0.5])
        assert v.region.base_radius == pytest.approx(np.sqrt(0.5))


class TestRefine:
    def test_uses_refine_node_count(self):
        x, y = _instance()
        f = ProjectionFrame(np.eye(2))
        v = bp.refine_index(f, x, y, IndexConfig(n_nodes_refine=333))
        assert v.n_nodes_used == 333

    def test_refine_tightens(self):
        """Search and refined values approximate the same integral."""
        x, y = _instance()
        f = ProjectionFrame(np.eye(2))
        coarse = float(bp.index(f, x, y))
        fine = float(bp.refine_index(f, x, y))
        assert abs(coarse - fine) / fine < 0.05
