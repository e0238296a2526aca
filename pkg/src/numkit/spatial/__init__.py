"""k-d trees: nearest neighbours, sparse distance matrices, pair counting."""

from .io import read_points_binary, read_points_csv, write_points_binary, write_points_csv
from .kdtree import (
    KdTree,
    PairCountRequest,
    QueryResult,
    build,
    count_neighbors,
    query_knn,
    sparse_distance_matrix,
)

__all__ = [
    "KdTree",
    "PairCountRequest",
    "QueryResult",
    "build",
    "query_knn",
    "sparse_distance_matrix",
    "count_neighbors",
    "read_points_csv",
    "write_points_csv",
    "read_points_binary",
    "write_points_binary",
]
