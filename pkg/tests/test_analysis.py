"""Tests for Gini, Jacobi eigendecomposition, PCA, and group ellipses."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mobtax.analysis import (
    GroupEllipse,
    PcaModel,
    fit_group_ellipse,
    gini,
    jacobi_eigh,
    pca_fit,
    pca_project,
    pca_project_rows,
)

from oracles import gini_ref

# ---------------------------------------------------------------------------
# Gini
# ---------------------------------------------------------------------------


class TestGini:
    def test_perfect_equality_is_exactly_zero(self):
        assert gini([5, 5, 5, 5]) == 0.0
        assert gini([1.0]) == 0.0
        assert gini(np.full(1000, 3.7)) == 0.0

    def test_two_value_split(self):
        # one of two holds everything: G = 1/2
        assert gini([0, 1]) == pytest.approx(0.5, abs=1e-15)

    def test_single_holder_of_four(self):
        # one of four holds everything: G = 3/4
        assert gini([0, 0, 0, 1]) == pytest.approx(0.75, abs=1e-15)

    def test_matches_pairwise_reference(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            n = int(rng.integers(1, 40))
            x = rng.integers(0, 50, size=n).astype(float)
            if x.sum() == 0:
                x[0] = 1.0
            assert gini(x) == pytest.approx(gini_ref(x), abs=1e-12)

    def test_scale_invariance(self):
        x = [1.0, 2.0, 3.0, 10.0, 0.5]
        g = gini(x)
        for factor in (0.001, 7.0, 1e6):
            assert gini([v * factor for v in x]) == pytest.approx(g, abs=1e-12)

    def test_order_invariance(self):
        x = [3.0, 1.0, 4.0, 1.0, 5.0]
        assert gini(x) == gini(sorted(x)) == gini(sorted(x, reverse=True))

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            gini([])
        with pytest.raises(ValueError):
            gini([1.0, -0.5])
        with pytest.raises(ValueError):
            gini([0.0, 0.0])
        with pytest.raises(ValueError):
            gini([1.0, float("nan")])
        with pytest.raises(ValueError):
            gini([[1.0, 2.0]])

    @given(
        st.lists(st.integers(min_value=0, max_value=10_000), min_size=1, max_size=60)
    )
    def test_bounds_property(self, xs):
        assume(sum(xs) > 0)
        g = gini(xs)
        n = len(xs)
        assert 0.0 <= g <= (n - 1) / n + 1e-12

    @given(
        st.lists(st.integers(min_value=0, max_value=1_000), min_size=2, max_size=30)
    )
    def test_reference_agreement_property(self, xs):
        assume(sum(xs) > 0)
        assert gini(xs) == pytest.approx(gini_ref(xs), abs=1e-12)


# ---------------------------------------------------------------------------
# Jacobi eigendecomposition
# ---------------------------------------------------------------------------


class TestJacobiEigh:
    def test_diagonal_matrix_is_exact(self):
        vals, vecs = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
        assert np.array_equal(vals, [3.0, 2.0, 1.0])
        # columns are the matching standard basis vectors
        assert np.array_equal(np.abs(vecs), np.eye(3)[:, [0, 2, 1]])

    def test_two_by_two_analytic(self):
        # [[2, 1], [1, 2]] has eigenvalues 3 and 1, eigenvectors (1,1), (1,-1)
        vals, vecs = jacobi_eigh([[2.0, 1.0], [1.0, 2.0]])
        assert vals == pytest.approx([3.0, 1.0], abs=1e-12)
        r = 1.0 / math.sqrt(2.0)
        assert np.abs(vecs[:, 0]) == pytest.approx([r, r], abs=1e-12)
        assert np.abs(vecs[:, 1]) == pytest.approx([r, r], abs=1e-12)
        assert vecs[0, 1] * vecs[1, 1] < 0  # second eigenvector has mixed signs

    def test_reconstruction_and_orthonormality(self):
        rng = np.random.default_rng(7)
        for n in (2, 3, 6, 8):
            b = rng.normal(size=(n, n))
            a = (b + b.T) / 2
            vals, vecs = jacobi_eigh(a)
            assert np.allclose(vecs @ np.diag(vals) @ vecs.T, a, atol=1e-10)
            assert np.allclose(vecs.T @ vecs, np.eye(n), atol=1e-12)
            assert np.all(np.diff(vals) <= 1e-12)  # descending

    def test_rejects_non_square_and_asymmetric(self):
        with pytest.raises(ValueError, match="square"):
            jacobi_eigh(np.zeros((2, 3)))
        with pytest.raises(ValueError, match="symmetric"):
            jacobi_eigh([[1.0, 2.0], [0.0, 1.0]])

    @settings(max_examples=50)
    @given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(2, 7))
    def test_reconstruction_property(self, seed, n):
        rng = np.random.default_rng(seed)
        b = rng.normal(size=(n, n))
        a = (b + b.T) / 2
        vals, vecs = jacobi_eigh(a)
        assert np.allclose(vecs @ np.diag(vals) @ vecs.T, a, atol=1e-9)
        assert np.allclose(vecs.T @ vecs, np.eye(n), atol=1e-10)


# ---------------------------------------------------------------------------
# PCA
# ---------------------------------------------------------------------------

HAND_ROWS = np.array(
    [
        [0.9, -0.1, 0.3, 0.0, 0.5, 0.2],
        [0.1, 0.4, -0.2, 0.3, 0.1, 0.6],
        [-0.3, 0.2, 0.5, -0.4, 0.2, 0.1],
    ]
)

# Worked independently with a separate LAPACK-based eigensolver route.
HAND_MEAN = np.array(
    [
        0.2333333333333333,
        0.16666666666666666,
        0.19999999999999998,
        -0.03333333333333335,
        0.26666666666666666,
        0.3,
    ]
)
HAND_EIGENVALUES = np.array([0.45971358255756001, 0.34361975077577339])
HAND_COMPONENT_1 = np.array(
    [
        0.8999664388977159,
        -0.2602660595479817,
        -0.07552612352211886,
        0.23335929663252764,
        0.24850790960679742,
        0.02012583684928301,
    ]
)
HAND_COMPONENT_2 = np.array(
    [
        0.05375983414444965,
        -0.3060850200942823,
        0.6088462687098393,
        -0.5348540604506155,
        0.20853666624155898,
        -0.45074566513400455,
    ]
)


class TestPcaFit:
    def test_hand_worked_three_row_example(self):
        model = pca_fit(HAND_ROWS)
        assert model.n_used == 3
        assert model.n_excluded == 0
        assert model.mean == pytest.approx(HAND_MEAN, abs=1e-15)
        assert model.eigenvalues[:2] == pytest.approx(HAND_EIGENVALUES, abs=1e-12)
        # three points span at most a plane: remaining variance vanishes
        assert np.all(model.eigenvalues[2:] <= 1e-12)
        assert model.components[0] == pytest.approx(HAND_COMPONENT_1, abs=1e-9)
        assert model.components[1] == pytest.approx(HAND_COMPONENT_2, abs=1e-9)
        # total variance is preserved by the rotation
        centred = HAND_ROWS - HAND_ROWS.mean(axis=0)
        total = float((centred**2).sum()) / 2
        assert model.eigenvalues.sum() == pytest.approx(total, abs=1e-12)
        assert total == pytest.approx(0.8033333333333333, abs=1e-15)

    def test_components_are_orthonormal(self):
        model = pca_fit(HAND_ROWS)
        assert np.allclose(model.components @ model.components.T, np.eye(6), atol=1e-12)

    def test_sign_convention(self):
        model = pca_fit(HAND_ROWS)
        for row in model.components:
            assert row[np.argmax(np.abs(row))] >= 0

    def test_rank_one_data(self):
        # collinear rows: all variance on one axis, first component is the line
        direction = np.array([1.0, 2.0, -1.0, 0.5, 0.0, 3.0])
        direction /= np.linalg.norm(direction)
        offsets = np.array([-2.0, -0.5, 0.0, 1.0, 3.5])
        rows = np.array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6]) + offsets[:, None] * direction
        model = pca_fit(rows)
        assert model.eigenvalues[0] == pytest.approx(float(np.var(offsets, ddof=1)), abs=1e-12)
        assert np.all(model.eigenvalues[1:] <= 1e-12)
        assert np.abs(model.components[0]) == pytest.approx(np.abs(direction), abs=1e-9)

    def test_identity_covariance(self):
        # rows +-a*e_i with a = sqrt(11/2) give sample covariance exactly I
        a = math.sqrt(11.0 / 2.0)
        rows = np.vstack([a * np.eye(6), -a * np.eye(6)])
        model = pca_fit(rows)
        assert model.eigenvalues == pytest.approx(np.ones(6), abs=1e-12)
        assert np.allclose(model.components @ model.components.T, np.eye(6), atol=1e-12)

    def test_degenerate_rows_are_excluded_and_counted(self):
        rows = np.vstack([HAND_ROWS, [np.nan, 0, 0, 0, 0, 0], [0, np.inf, 0, 0, 0, 0]])
        model = pca_fit(rows)
        assert model.n_used == 3
        assert model.n_excluded == 2
        clean = pca_fit(HAND_ROWS)
        assert np.array_equal(model.mean, clean.mean)
        assert np.array_equal(model.eigenvalues, clean.eigenvalues)

    def test_rejects_too_few_rows(self):
        with pytest.raises(ValueError, match="at least 2"):
            pca_fit(HAND_ROWS[:1])
        rows = np.vstack([HAND_ROWS[:2], np.full((3, 6), np.nan)])
        rows[0, 0] = np.nan
        with pytest.raises(ValueError, match="at least 2"):
            pca_fit(rows)

    def test_rejects_wrong_width(self):
        with pytest.raises(ValueError, match="6"):
            pca_fit(np.zeros((4, 5)))


class TestPcaProject:
    def test_plane_reconstruction(self):
        # rank-2 data: the two leading components reconstruct every row
        model = pca_fit(HAND_ROWS)
        for row in HAND_ROWS:
            z = pca_project(model, row)
            rebuilt = model.mean + z[0] * model.components[0] + z[1] * model.components[1]
            assert rebuilt == pytest.approx(row, abs=1e-9)

    def test_mean_projects_to_origin(self):
        model = pca_fit(HAND_ROWS)
        assert pca_project(model, model.mean) == pytest.approx([0.0, 0.0], abs=1e-15)

    def test_degenerate_record_returns_none(self):
        model = pca_fit(HAND_ROWS)
        bad = HAND_ROWS[0].copy()
        bad[3] = np.nan
        assert pca_project(model, bad) is None

    def test_rejects_wrong_shape(self):
        model = pca_fit(HAND_ROWS)
        with pytest.raises(ValueError, match="6"):
            pca_project(model, [1.0, 2.0])

    def test_batch_matches_single(self):
        model = pca_fit(HAND_ROWS)
        rows = np.vstack([HAND_ROWS, [np.nan] * 6])
        out, mask = pca_project_rows(model, rows)
        assert mask.tolist() == [True, True, True, False]
        for i in range(3):
            assert out[i] == pytest.approx(pca_project(model, rows[i]), abs=1e-15)
        assert np.isnan(out[3]).all()

    def test_projected_variance_matches_eigenvalues(self):
        rng = np.random.default_rng(11)
        rows = rng.normal(size=(40, 6)) @ rng.normal(size=(6, 6))
        model = pca_fit(rows)
        out, _ = pca_project_rows(model, rows)
        assert np.var(out[:, 0], ddof=1) == pytest.approx(model.eigenvalues[0], abs=1e-9)
        assert np.var(out[:, 1], ddof=1) == pytest.approx(model.eigenvalues[1], abs=1e-9)


# ---------------------------------------------------------------------------
# Group ellipses
# ---------------------------------------------------------------------------


class TestGroupEllipse:
    def _axis_aligned_points(self):
        # four points with sample covariance exactly diag(4, 1)
        return np.array(
            [
                [math.sqrt(6.0), 0.0],
                [-math.sqrt(6.0), 0.0],
                [0.0, math.sqrt(1.5)],
                [0.0, -math.sqrt(1.5)],
            ]
        )

    def test_axis_aligned(self):
        ell = fit_group_ellipse(self._axis_aligned_points(), n_sigma=2.0, label="g")
        assert ell.label == "g"
        assert ell.n_points == 4
        assert ell.mean == pytest.approx([0.0, 0.0], abs=1e-15)
        assert ell.covariance == pytest.approx(np.diag([4.0, 1.0]), abs=1e-12)
        assert ell.semi_axes == pytest.approx([4.0, 2.0], abs=1e-12)
        assert ell.angle == pytest.approx(0.0, abs=1e-12)
        assert not ell.degenerate

    def test_rotated_cloud_recovers_angle(self):
        theta = math.pi / 6
        rot = np.array(
            [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
        )
        pts = self._axis_aligned_points() @ rot.T
        ell = fit_group_ellipse(pts, n_sigma=1.0)
        assert ell.semi_axes == pytest.approx([2.0, 1.0], abs=1e-12)
        assert ell.angle == pytest.approx(theta, abs=1e-12)

    def test_angle_normalised_to_half_open_interval(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            pts = rng.normal(size=(30, 2)) @ rng.normal(size=(2, 2))
            ell = fit_group_ellipse(pts)
            assert -math.pi / 2 < ell.angle <= math.pi / 2

    def test_n_sigma_scales_axes(self):
        pts = self._axis_aligned_points()
        one = fit_group_ellipse(pts, n_sigma=1.0)
        three = fit_group_ellipse(pts, n_sigma=3.0)
        assert three.semi_axes == pytest.approx(3.0 * one.semi_axes, abs=1e-12)

    def test_collinear_points_flagged_degenerate(self):
        pts = np.array([[0.0, 0.0], [1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
        ell = fit_group_ellipse(pts)
        assert ell.degenerate
        assert ell.semi_axes[1] == pytest.approx(0.0, abs=1e-9)
        assert ell.angle == pytest.approx(math.atan2(2.0, 1.0), abs=1e-12)

    def test_identical_points_flagged_degenerate(self):
        pts = np.tile([1.5, -2.0], (5, 1))
        ell = fit_group_ellipse(pts)
        assert ell.degenerate
        assert ell.mean == pytest.approx([1.5, -2.0], abs=1e-15)
        assert ell.semi_axes == pytest.approx([0.0, 0.0], abs=1e-15)

    def test_large_sample_recovers_population_shape(self):
        rng = np.random.default_rng(19)
        cov = np.array([[3.0, 1.2], [1.2, 1.0]])
        chol = np.linalg.cholesky(cov)
        pts = rng.normal(size=(50_000, 2)) @ chol.T + [5.0, -3.0]
        ell = fit_group_ellipse(pts, n_sigma=2.0)
        assert ell.mean == pytest.approx([5.0, -3.0], abs=0.05)
        assert ell.covariance == pytest.approx(cov, abs=0.08)
        vals, vecs = np.linalg.eigh(cov)
        assert ell.semi_axes == pytest.approx(2.0 * np.sqrt(vals[::-1]), abs=0.05)
        expected_angle = math.atan2(vecs[1, 1], vecs[0, 1])
        if expected_angle <= -math.pi / 2:
            expected_angle += math.pi
        elif expected_angle > math.pi / 2:
            expected_angle -= math.pi
        assert ell.angle == pytest.approx(expected_angle, abs=0.05)

    def test_rejects_bad_input(self):
        good = self._axis_aligned_points()
        with pytest.raises(ValueError, match="at least 3"):
            fit_group_ellipse(good[:2])
        with pytest.raises(ValueError, match="finite"):
            bad = good.copy()
            bad[0, 0] = np.nan
            fit_group_ellipse(bad)
        with pytest.raises(ValueError, match="positive"):
            fit_group_ellipse(good, n_sigma=0.0)
        with pytest.raises(ValueError, match=r"\(n, 2\)"):
            fit_group_ellipse(np.zeros((4, 3)))
