import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from numkit.common import DimensionMismatch, StructuralError
from numkit.spatial import (
    KdTree,
    PairCountRequest,
    count_neighbors,
    query_knn,
    read_points_binary,
    read_points_csv,
    sparse_distance_matrix,
    write_points_binary,
    write_points_csv,
)


def brute_distances(points, q, p, boxsize=None):
    """O(n) exhaustive distance scan."""
    out = []
    for x in points:
        acc = []
        for d in range(len(q)):
            delta = abs(x[d] - q[d])
            if boxsize is not None:
                delta = min(delta, boxsize[d] - delta)
            acc.append(delta)
        if math.isinf(p):
            out.append(max(acc))
        else:
            out.append(sum(a**p for a in acc) ** (1.0 / p))
    return np.array(out)


def brute_knn(points, q, k, p, boxsize=None):
    d = brute_distances(points, q, p, boxsize)
    order = sorted(range(len(d)), key=lambda i: (d[i], i))[:k]
    return d[order], np.array(order)


def wrapped(points, boxsize):
    return np.mod(points, boxsize) if boxsize is not None else points


class TestBuild:
    def test_single_point(self):
        tree = KdTree([[0.5, 0.5]])
        assert tree.n_nodes == 1
        assert tree.depth == 0

    def test_depth_uniform(self):
        pts = np.random.default_rng(0).random((10_000, 3))
        tree = KdTree(pts, leafsize=16)
        assert tree.depth <= 4 * math.log2(10_000 / 16) + 8
        assert all(e - s <= 16 for s, e in tree.leaves())
        assert sorted(tree.indices.tolist()) == list(range(10_000))

    def test_bounding_boxes(self):
        tree = KdTree(np.random.default_rng(1).random((500, 2)), leafsize=4)
        assert tree.node_contains_descendants()

    def test_collinear_duplicates(self):
        pts = np.array([[0.0, 0.0]] * 40 + [[1.0, 1.0]] * 30 + [[0.5, 0.5]] * 5)
        tree = KdTree(pts, leafsize=3)
        for q in ([0.1, 0.1], [0.9, 0.8], [0.5, 0.49]):
            res = tree.query_knn(q, k=7)
            d, i = brute_knn(pts, q, 7, 2.0)
            np.testing.assert_array_equal(res.indices, i)
            np.testing.assert_allclose(res.distances, d, rtol=0, atol=1e-12)

    def test_non_finite(self):
        with pytest.raises(StructuralError):
            KdTree([[0.0, np.nan]])

    def test_bad_period(self):
        with pytest.raises(StructuralError):
            KdTree([[0.1]], boxsize=[0.0])

    def test_periodic_wrap(self):
        tree = KdTree([[1.25], [-0.25]], boxsize=1.0)
        np.testing.assert_allclose(tree.points.ravel(), [0.25, 0.75])
        assert np.all((tree.points >= 0) & (tree.points < 1))

    def test_tiny_negative_wraps_below_period(self):
        tree = KdTree([[-1e-300]], boxsize=1.0)
        assert tree.points[0, 0] < 1.0


class TestQuery:
    def test_line(self):
        tree = KdTree([[0.0], [1.0], [3.0]])
        res = query_knn(tree, [0.9], k=1)
        assert res.indices.tolist() == [1]
        assert res.distances[0] == pytest.approx(0.1)

    def test_periodic_interval(self):
        tree = KdTree([[0.1], [0.9]], boxsize=1.0)
        res = query_knn(tree, [0.0], k=1)
        # the image of 0.9 at -0.1 is nearest (1 - 0.9 rounds just below 0.1)
        assert res.indices[0] == 1
        assert res.distances[0] == pytest.approx(0.1)
        tree = KdTree([[0.25], [0.75]], boxsize=1.0)
        assert query_knn(tree, [0.0], k=1).indices[0] == 0
        assert query_knn(tree, [0.5], k=2).indices.tolist() == [0, 1]

    def test_ties_smaller_index(self):
        tree = KdTree([[1.0], [-1.0], [1.0], [2.0]], leafsize=1)
        res = tree.query_knn([0.0], k=3)
        assert res.indices.tolist() == [0, 1, 2]

    @pytest.mark.parametrize("m", [2, 3])
    @pytest.mark.parametrize("k", [1, 5])
    @pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
    @pytest.mark.parametrize("periodic", [False, True])
    def test_matches_brute_force(self, m, k, p, periodic):
        rng = np.random.default_rng(hash((m, k, p, periodic)) % 2**32)
        box = np.full(m, 1.0) if periodic else None
        pts = rng.random((200, m))
        tree = KdTree(pts, leafsize=8, boxsize=box)
        for q in rng.random((15, m)) * 1.2 - 0.1:
            res = tree.query_knn(q, k, p)
            d, i = brute_knn(wrapped(pts, box), wrapped(q, box), k, p, box)
            np.testing.assert_array_equal(res.indices, i)
            np.testing.assert_allclose(res.distances, d, rtol=0, atol=1e-12)

    def test_general_p(self):
        rng = np.random.default_rng(3)
        pts = rng.random((150, 3))
        tree = KdTree(pts, leafsize=5)
        for q in rng.random((10, 3)):
            res = tree.query_knn(q, 4, 3.5)
            d, i = brute_knn(pts, q, 4, 3.5)
            np.testing.assert_array_equal(res.indices, i)
            np.testing.assert_allclose(res.distances, d, rtol=0, atol=1e-12)

    def test_distances_sorted(self):
        tree = KdTree(np.random.default_rng(5).random((300, 2)))
        res = tree.query_knn([0.5, 0.5], k=20)
        assert np.all(np.diff(res.distances) >= 0)

    def test_k_too_large(self):
        with pytest.raises(ValueError):
            KdTree([[0.0], [1.0]]).query_knn([0.0], k=3)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            KdTree([[0.0, 1.0]]).query_knn([0.0, 1.0, 2.0])

    def test_bad_p(self):
        with pytest.raises(ValueError):
            KdTree([[0.0]]).query_knn([0.0], p=0.5)

    def test_batch(self):
        rng = np.random.default_rng(8)
        pts = rng.random((100, 2))
        qs = rng.random((5, 2))
        d, i = KdTree(pts).query(qs, k=2)
        assert d.shape == i.shape == (5, 2)
        for row, q in enumerate(qs):
            np.testing.assert_array_equal(i[row], brute_knn(pts, q, 2, 2.0)[1])

    @given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=60),
           st.tuples(st.floats(-6, 6), st.floats(-6, 6)),
           st.booleans())
    @settings(max_examples=80, deadline=None)
    def test_property_brute_force(self, pts, q, periodic):
        pts = np.array(pts)
        box = np.array([10.0, 10.0]) if periodic else None
        k = min(3, len(pts))
        res = KdTree(pts, leafsize=2, boxsize=box).query_knn(q, k)
        d, i = brute_knn(wrapped(pts, box), wrapped(np.array(q), box), k, 2.0, box)
        np.testing.assert_allclose(res.distances, d, rtol=0, atol=1e-12)
        np.testing.assert_array_equal(res.indices, i)


class TestPeriodicDistance:
    @given(st.floats(0, 0.999), st.floats(0, 0.999))
    @settings(max_examples=100, deadline=None)
    def test_minimum_image_bound(self, a, b):
        tree = KdTree([[a]], boxsize=1.0)
        d = tree.query_knn([b], 1).distances[0]
        assert d <= abs(a - b) + 1e-15
        assert d <= 0.5 + 1e-15


def dense_pairwise(a, b, p, box=None):
    return np.array([brute_distances(b, x, p, box) for x in a])


class TestSparseDistanceMatrix:
    def test_zero_radius_coincident_only(self):
        a = KdTree([[0.0, 0.0], [1.0, 1.0]])
        b = KdTree([[1.0, 1.0], [2.0, 0.0]])
        dok = sparse_distance_matrix(a, b, 0.0)
        assert dict(dok.items()) == {(1, 0): 0.0}

    def test_two_points(self):
        t = KdTree([[0.0, 0.0], [3.0, 4.0]])
        dok = t.sparse_distance_matrix(t, 5.0)
        assert dok[0, 1] == dok[1, 0] == 5.0
        assert (0, 0) in dok and dok[0, 0] == 0.0
        assert t.sparse_distance_matrix(t, 4.99).nnz == 2

    @pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
    @pytest.mark.parametrize("periodic", [False, True])
    def test_random_vs_dense(self, p, periodic):
        rng = np.random.default_rng(12)
        box = np.array([1.0, 1.0]) if periodic else None
        a, b = rng.random((100, 2)), rng.random((80, 2))
        ta, tb = KdTree(a, leafsize=6, boxsize=box), KdTree(b, leafsize=6, boxsize=box)
        r = 0.15
        dok = ta.sparse_distance_matrix(tb, r, p)
        dense = dense_pairwise(a, b, p, box)
        expected = {(i, j): dense[i, j] for i, j in zip(*np.nonzero(dense <= r))}
        assert set(dok.keys()) == set(expected)
        for key, v in expected.items():
            assert dok[key] == pytest.approx(v, abs=1e-12)

    def test_symmetric_self(self):
        t = KdTree(np.random.default_rng(2).random((120, 3)), leafsize=4)
        dok = t.sparse_distance_matrix(t, 0.3)
        for (i, j), v in dok.items():
            assert dok[j, i] == pytest.approx(v, abs=1e-15)

    def test_mismatched_topology(self):
        with pytest.raises(DimensionMismatch):
            KdTree([[0.1]]).sparse_distance_matrix(KdTree([[0.1]], boxsize=1.0), 1.0)

    def test_converts_to_csr(self):
        t = KdTree(np.random.default_rng(4).random((30, 2)))
        dok = t.sparse_distance_matrix(t, 0.2)
        np.testing.assert_array_equal(dok.tocsr().to_dense(), dok.to_dense())


def brute_pair_counts(a, b, wa, wb, radii, p=2.0, box=None):
    """Quadratic pair-sum oracle."""
    d = dense_pairwise(a, b, p, box)
    w = np.outer(wa, wb)
    return np.array([w[d <= r].sum() for r in radii])


class TestCountNeighbors:
    def test_single_pair(self):
        a, b = KdTree([[0.0]]), KdTree([[2.0]])
        res = count_neighbors(a, b, PairCountRequest([1.0, 2.0, 3.0], [2.0], [3.0]))
        np.testing.assert_array_equal(res, [0.0, 6.0, 6.0])

    def test_infinite_radius(self):
        rng = np.random.default_rng(1)
        wa, wb = rng.random(40), rng.random(30)
        res = KdTree(rng.random((40, 2))).count_neighbors(
            KdTree(rng.random((30, 2))), PairCountRequest([np.inf], wa, wb))
        assert res[0] == pytest.approx(wa.sum() * wb.sum(), rel=1e-12)

    @pytest.mark.parametrize("periodic", [False, True])
    @pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
    def test_random_weighted(self, periodic, p):
        rng = np.random.default_rng(21)
        box = np.array([1.0, 1.0, 1.0]) if periodic else None
        a, b = rng.random((150, 3)), rng.random((150, 3))
        wa, wb = rng.random(150), rng.random(150)
        radii = np.array([0.05, 0.1, 0.2, 0.4, 0.8])
        res = KdTree(a, leafsize=8, boxsize=box).count_neighbors(
            KdTree(b, leafsize=8, boxsize=box), PairCountRequest(radii, wa, wb), p)
        np.testing.assert_allclose(res, brute_pair_counts(a, b, wa, wb, radii, p, box), rtol=1e-9)

    def test_unit_weights_integer_and_monotone(self):
        rng = np.random.default_rng(5)
        t = KdTree(rng.random((200, 2)), leafsize=4)
        radii = np.linspace(0, 1.5, 16)
        res = t.count_neighbors(t, radii)
        assert np.all(np.diff(res) >= 0)
        np.testing.assert_array_equal(res, np.round(res))
        assert res[-1] == 200 * 200

    def test_unsorted_radii(self):
        with pytest.raises(ValueError):
            PairCountRequest([0.2, 0.1])

    def test_negative_radii(self):
        with pytest.raises(ValueError):
            PairCountRequest([-0.1, 0.1])

    def test_weight_length(self):
        t = KdTree([[0.0], [1.0]])
        with pytest.raises(DimensionMismatch):
            t.count_neighbors(t, PairCountRequest([1.0], [1.0], [1.0, 1.0]))


class TestPointFiles:
    def test_csv_round_trip(self, tmp_path):
        pts = np.random.default_rng(0).random((10, 3))
        write_points_csv(tmp_path / "p.csv", pts)
        np.testing.assert_array_equal(read_points_csv(tmp_path / "p.csv"), pts)

    def test_binary_round_trip(self, tmp_path):
        pts = np.random.default_rng(0).random((7, 4))
        path = tmp_path / "p.bin"
        write_points_binary(path, pts)
        raw = path.read_bytes()
        assert raw[:4] == b"NKPT" and len(raw) == 16 + 7 * 4 * 8
        np.testing.assert_array_equal(read_points_binary(path), pts)

    def test_binary_bad_magic(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"XXXX" + bytes(12))
        with pytest.raises(StructuralError):
            read_points_binary(path)
