"""k-d tree with Minkowski-p queries and optional toroidal topology.

Distances are compared through a monotone surrogate to avoid roots: the sum
of ``|delta|**p`` for finite ``p`` and the coordinate maximum for ``p = inf``.
Under periodic topology each coordinate delta is the minimum image,
``min(|delta|, period - |delta|)``.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from ..common import DimensionMismatch, StructuralError
from ..sparse import DokMatrix

# pruning slack: never discard a node whose lower bound ties the current bound
_PRUNE_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class QueryResult:
    distances: np.ndarray
    indices: np.ndarray


@dataclass(frozen=True)
class PairCountRequest:
    radii: np.ndarray
    weights_a: np.ndarray = None
    weights_b: np.ndarray = None

    def __post_init__(self):
        radii = np.atleast_1d(np.asarray(self.radii, dtype=np.float64))
        if radii.ndim != 1:
            raise ValueError("radii must be one-dimensional")
        if np.any(np.isnan(radii)) or np.any(radii < 0):
            raise ValueError("radii must be nonnegative")
        if np.any(np.diff(radii) < 0):
            raise ValueError("radii must be sorted in nondecreasing order")
        object.__setattr__(self, "radii", radii)


def _check_p(p):
    p = float(p)
    if not p >= 1:
        raise ValueError("Minkowski order p must satisfy p >= 1")
    return p


def _surrogate(r, p):
    if math.isinf(p) or math.isinf(r):
        return r
    if p == 1:
        return r
    if p == 2:
        return r * r
    return r**p


def _from_surrogate(s, p):
    if math.isinf(p) or p == 1:
        return s
    if p == 2:
        return np.sqrt(s)
    return s ** (1.0 / p)


def wrap_points(points, boxsize):
    """Canonical representatives in ``[0, period)`` along every axis."""
    wrapped = np.mod(points, boxsize)
    # x mod L can round up to exactly L for tiny negative x
    wrapped[wrapped >= boxsize] = 0.0
    return wrapped


class KdTree:
    """Space-partitioning tree over ``n`` points in ``m`` dimensions.

    Nodes are split at the midpoint of the longest side of their tight
    bounding box; when every point lies on one side the split slides to the
    nearest point.  Leaves hold at most ``leafsize`` points, except leaves of
    coincident points.  With ``boxsize`` the space is a torus with the given
    periods and coordinates are wrapped into ``[0, period)``.
    """

    def __init__(self, points, leafsize=16, boxsize=None):
        data = np.array(points, dtype=np.float64)
        if data.ndim == 1:
            data = data[:, None]
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise StructuralError("points must be an (n, m) array with n, m >= 1")
        if not np.all(np.isfinite(data)):
            raise StructuralError("points must be finite")
        if int(leafsize) < 1:
            raise ValueError("leafsize must be at least 1")
        self.n, self.m = data.shape
        self.leafsize = int(leafsize)
        if boxsize is not None:
            box = np.broadcast_to(np.asarray(boxsize, dtype=np.float64), (self.m,)).copy()
            if not np.all(np.isfinite(box)) or np.any(box <= 0):
                raise StructuralError("periods must be positive and finite")
            self.boxsize = box
            data = wrap_points(data, box)
        else:
            self.boxsize = None
        self.points = data
        self.points.flags.writeable = False
        self._build()

    # construction

    def _build(self):
        data = self.points
        perm = np.arange(self.n)
        starts, ends, lefts, rights, los, his, depths = [], [], [], [], [], [], []

        def new_node(start, end, depth):
            block = data[perm[start:end]]
            starts.append(start)
            ends.append(end)
            lefts.append(-1)
            rights.append(-1)
            los.append(block.min(axis=0))
            his.append(block.max(axis=0))
            depths.append(depth)
            return len(starts) - 1

        stack = [new_node(0, self.n, 0)]
        while stack:
            node = stack.pop()
            start, end = starts[node], ends[node]
            spread = his[node] - los[node]
            if end - start <= self.leafsize or not np.any(spread > 0):
                continue
            dim = int(np.argmax(spread))
            idx = perm[start:end]
            coord = data[idx, dim]
            split = 0.5 * (los[node][dim] + his[node][dim])
            mask = coord < split
            n_left = int(mask.sum())
            if n_left == 0:
                mask = coord <= los[node][dim]
            elif n_left == idx.size:
                mask = coord < his[node][dim]
            n_left = int(mask.sum())
            perm[start:end] = np.concatenate((idx[mask], idx[~mask]))
            mid = start + n_left
            left = new_node(start, mid, depths[node] + 1)
            right = new_node(mid, end, depths[node] + 1)
            lefts[node], rights[node] = left, right
            stack.extend((right, left))

        self.indices = perm
        self._sorted = data[perm]
        self._start, self._end = starts, ends
        self._left, self._right = lefts, rights
        self._lo = [lo.tolist() for lo in los]
        self._hi = [hi.tolist() for hi in his]
        self._lo_arr = np.array(los)
        self._hi_arr = np.array(his)
        self.depth = max(depths)
        self.n_nodes = len(starts)
        self._box = None if self.boxsize is None else self.boxsize.tolist()

    def leaves(self):
        """``(start, end)`` slices into ``indices`` for every leaf."""
        return [(self._start[i], self._end[i]) for i in range(self.n_nodes) if self._left[i] < 0]

    def node_contains_descendants(self):
        """Every node's bounding box contains all of its points."""
        for i in range(self.n_nodes):
            block = self._sorted[self._start[i]:self._end[i]]
            if np.any(block < self._lo_arr[i]) or np.any(block > self._hi_arr[i]):
                return False
        return True

    # distances

    def _point_surrogates(self, block, q, p):
        delta = np.abs(block - q)
        if self.boxsize is not None:
            delta = np.minimum(delta, self.boxsize - delta)
        if math.isinf(p):
            return delta.max(axis=-1)
        if p == 1:
            return delta.sum(axis=-1)
        if p == 2:
            return (delta * delta).sum(axis=-1)
        return (delta**p).sum(axis=-1)

    def _min_box_surrogate(self, node, q, p):
        lo, hi, box = self._lo[node], self._hi[node], self._box
        acc = 0.0
        for d in range(self.m):
            x = q[d]
            if x < lo[d]:
                g = lo[d] - x
                if box is not None:
                    g = min(g, x + box[d] - hi[d])
            elif x > hi[d]:
                g = x - hi[d]
                if box is not None:
                    g = min(g, lo[d] + box[d] - x)
            else:
                continue
            if p == 2:
                acc += g * g
            elif p == 1:
                acc += g
            elif math.isinf(p):
                if g > acc:
                    acc = g
            else:
                acc += g**p
        return acc

    def _box_pair_bounds(self, other, na, nb, p):
        """Lower and upper surrogate bounds over all pairs of two nodes."""
        alo, ahi = self._lo[na], self._hi[na]
        blo, bhi = other._lo[nb], other._hi[nb]
        box = self._box
        dmin = dmax = 0.0
        for d in range(self.m):
            gap = max(blo[d] - ahi[d], alo[d] - bhi[d], 0.0)
            far = max(bhi[d] - alo[d], ahi[d] - blo[d])
            if box is not None:
                span = max(ahi[d], bhi[d]) - min(alo[d], blo[d])
                gap = max(0.0, min(gap, box[d] - span))
                far = min(far, 0.5 * box[d])
            if math.isinf(p):
                dmin = max(dmin, gap)
                dmax = max(dmax, far)
            elif p == 1:
                dmin += gap
                dmax += far
            elif p == 2:
                dmin += gap * gap
                dmax += far * far
            else:
                dmin += gap**p
                dmax += far**p
        return dmin, dmax

    def _pair_surrogates(self, other, na, nb, p):
        a = self._sorted[self._start[na]:self._end[na]]
        b = other._sorted[other._start[nb]:other._end[nb]]
        return self._point_surrogates(a[:, None, :], b[None, :, :], p)

    # queries

    def _canonical_query(self, q):
        q = np.atleast_1d(np.asarray(q, dtype=np.float64))
        if q.shape != (self.m,):
            raise DimensionMismatch(f"query has shape {q.shape}, tree has dimension {self.m}")
        if not np.all(np.isfinite(q)):
            raise StructuralError("query point must be finite")
        if self.boxsize is not None:
            q = wrap_points(q, self.boxsize)
        return q

    def query_knn(self, q, k=1, p=2.0):
        """Exact ``k`` nearest neighbours of one point.

        Ties on distance go to the smaller point index.
        """
        p = _check_p(p)
        k = int(k)
        if not 1 <= k <= self.n:
            raise ValueError(f"k must be in [1, {self.n}]")
        q = self._canonical_query(q)
        qlist = q.tolist()
        # max-heap of the k best as (-surrogate, -index)
        heap = []
        bound = math.inf
        left, right, start, end = self._left, self._right, self._start, self._end
        stack = [(0.0, 0)]
        while stack:
            dmin, node = stack.pop()
            if dmin > bound * _PRUNE_SLACK:
                continue
            if left[node] < 0:
                s, e = start[node], end[node]
                dist = self._point_surrogates(self._sorted[s:e], q, p)
                if len(heap) == k:
                    cand = np.flatnonzero(dist <= bound)
                else:
                    cand = range(e - s)
                for c in cand:
                    d = float(dist[c])
                    idx = int(self.indices[s + c])
                    if len(heap) < k:
                        heapq.heappush(heap, (-d, -idx))
                    elif (d, idx) < (-heap[0][0], -heap[0][1]):
                        heapq.heapreplace(heap, (-d, -idx))
                    else:
                        continue
                    if len(heap) == k:
                        bound = -heap[0][0]
                continue
            lc, rc = left[node], right[node]
            dl = self._min_box_surrogate(lc, qlist, p)
            dr = self._min_box_surrogate(rc, qlist, p)
            # push farther child first so the nearer one is explored first
            if dl <= dr:
                stack.append((dr, rc))
                stack.append((dl, lc))
            else:
                stack.append((dl, lc))
                stack.append((dr, rc))
        best = sorted((-d, -i) for d, i in heap)
        dist = np.array([b[0] for b in best])
        return QueryResult(distances=_from_surrogate(dist, p), indices=np.array([b[1] for b in best]))

    def query(self, queries, k=1, p=2.0):
        """Batch form of :meth:`query_knn`; returns ``(distances, indices)``
        arrays of shape ``(n_queries, k)``."""
        queries = np.asarray(queries, dtype=np.float64)
        if queries.ndim == 1:
            queries = queries[None, :] if self.m > 1 else queries[:, None]
        dists = np.empty((queries.shape[0], k))
        idx = np.empty((queries.shape[0], k), dtype=np.int64)
        for i, q in enumerate(queries):
            res = self.query_knn(q, k, p)
            dists[i], idx[i] = res.distances, res.indices
        return dists, idx

    def _check_compatible(self, other):
        if other.m != self.m:
            raise DimensionMismatch("trees have different dimensionality")
        same_box = (self.boxsize is None and other.boxsize is None) or (
            self.boxsize is not None and other.boxsize is not None
            and np.array_equal(self.boxsize, other.boxsize))
        if not same_box:
            raise DimensionMismatch("trees have different periodic topology")

    def sparse_distance_matrix(self, other, max_distance, p=2.0):
        """DOK matrix of every pair ``(i, j)`` within ``max_distance``.

        Pairs at distance exactly zero are stored as explicit ``0.0`` entries;
        an absent key always means "farther than ``max_distance``".  When
        ``other is self`` the self-pairs ``(i, i)`` are included.
        """
        p = _check_p(p)
        self._check_compatible(other)
        if max_distance < 0:
            raise ValueError("max_distance must be nonnegative")
        limit = _surrogate(float(max_distance), p)
        out = DokMatrix((self.n, other.n))
        store = out._data

        def visit(na, nb):
            dmin, _ = self._box_pair_bounds(other, na, nb, p)
            if dmin > limit * _PRUNE_SLACK:
                return
            a_leaf, b_leaf = self._left[na] < 0, other._left[nb] < 0
            if a_leaf and b_leaf:
                d = self._pair_surrogates(other, na, nb, p)
                ii, jj = np.nonzero(d <= limit)
                if ii.size:
                    ia = self.indices[self._start[na] + ii]
                    jb = other.indices[other._start[nb] + jj]
                    vals = _from_surrogate(d[ii, jj], p)
                    for i, j, v in zip(ia.tolist(), jb.tolist(), vals.tolist()):
                        store[(i, j)] = v
                return
            size_a = self._end[na] - self._start[na]
            size_b = other._end[nb] - other._start[nb]
            if b_leaf or (not a_leaf and size_a >= size_b):
                visit(self._left[na], nb)
                visit(self._right[na], nb)
            else:
                visit(na, other._left[nb])
                visit(na, other._right[nb])

        visit(0, 0)
        return out

    def count_neighbors(self, other, request, p=2.0):
        """Weighted pair counts ``result[t] = sum w_a[i] w_b[j]`` over pairs
        with ``dist(a_i, b_j) <= radii[t]``, by dual-tree traversal."""
        p = _check_p(p)
        self._check_compatible(other)
        if not isinstance(request, PairCountRequest):
            request = PairCountRequest(request)
        wa = self._weights(request.weights_a)
        wb = other._weights(request.weights_b)
        radii = request.radii
        sur = np.array([_surrogate(float(r), p) for r in radii])
        result = np.zeros(radii.size)
        cwa = np.concatenate(([0.0], np.cumsum(wa[self.indices])))
        cwb = np.concatenate(([0.0], np.cumsum(wb[other.indices])))
        swa = wa[self.indices]
        swb = wb[other.indices]

        def visit(na, nb, lo, hi):
            dmin, dmax = self._box_pair_bounds(other, na, nb, p)
            # radii below the lower bound see no pair of this node pair
            new_lo = lo + int(np.searchsorted(sur[lo:hi], dmin / _PRUNE_SLACK, side="left"))
            # radii at or above the upper bound see every pair
            new_hi = lo + int(np.searchsorted(sur[lo:hi], dmax * _PRUNE_SLACK, side="left"))
            if new_hi < hi:
                w = ((cwa[self._end[na]] - cwa[self._start[na]])
                     * (cwb[other._end[nb]] - cwb[other._start[nb]]))
                result[new_hi:hi] += w
            if new_lo >= new_hi:
                return
            a_leaf, b_leaf = self._left[na] < 0, other._left[nb] < 0
            if a_leaf and b_leaf:
                d = self._pair_surrogates(other, na, nb, p).ravel()
                w = np.outer(swa[self._start[na]:self._end[na]],
                             swb[other._start[nb]:other._end[nb]]).ravel()
                order = np.argsort(d, kind="stable")
                cum = np.concatenate(([0.0], np.cumsum(w[order])))
                pos = np.searchsorted(d[order], sur[new_lo:new_hi], side="right")
                result[new_lo:new_hi] += cum[pos]
                return
            size_a = self._end[na] - self._start[na]
            size_b = other._end[nb] - other._start[nb]
            if b_leaf or (not a_leaf and size_a >= size_b):
                visit(self._left[na], nb, new_lo, new_hi)
                visit(self._right[na], nb, new_lo, new_hi)
            else:
                visit(na, other._left[nb], new_lo, new_hi)
                visit(na, other._right[nb], new_lo, new_hi)

        visit(0, 0, 0, radii.size)
        return result

    def _weights(self, w):
        if w is None:
            return np.ones(self.n)
        w = np.asarray(w, dtype=np.float64).reshape(-1)
        if w.size != self.n:
            raise DimensionMismatch(f"expected {self.n} weights, got {w.size}")
        return w


def build(points, leafsize=16, boxsize=None):
    return KdTree(points, leafsize=leafsize, boxsize=boxsize)


def query_knn(tree, q, k=1, p=2.0):
    return tree.query_knn(q, k, p)


def sparse_distance_matrix(tree_a, tree_b, max_distance, p=2.0):
    return tree_a.sparse_distance_matrix(tree_b, max_distance, p)


def count_neighbors(tree_a, tree_b, request, p=2.0):
    return tree_a.count_neighbors(tree_b, request, p)
