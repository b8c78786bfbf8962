"""Vertex classification from lower/upper link connectivity.

A vertex is regular iff both its lower and its upper link have exactly one
connected component; empty lower (upper) link means minimum (maximum);
anything else is a saddle, degenerate when a side has more than two
components.  Classification is total on grid boundaries, where links are
paths instead of cycles.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .order import OrderField, ScalarField
from .triangulation import MeshError, Triangulation, grid_link_tables, link_adjacency


class Kind(Enum):
    REGULAR = "regular"
    MINIMUM = "minimum"
    MAXIMUM = "maximum"
    SADDLE = "saddle"


@dataclass(frozen=True)
class Criticality:
    kind: Kind
    lower_components: int
    upper_components: int

    @property
    def degenerate(self) -> bool:
        return self.lower_components > 2 or self.upper_components > 2


@dataclass
class CriticalSet:
    minima: np.ndarray
    maxima: np.ndarray
    saddles: np.ndarray          # vertex ids
    lower_components: np.ndarray  # per vertex, full field
    upper_components: np.ndarray

    def kinds(self) -> np.ndarray:
        n = len(self.lower_components)
        kinds = np.full(n, 0, dtype=np.int8)  # 0 regular
        kinds[self.minima] = 1
        kinds[self.maxima] = 2
        kinds[self.saddles] = 3
        return kinds


def _kind_from_counts(lower: int, upper: int) -> Kind:
    if lower == 0 and upper == 0:
        raise MeshError("isolated vertex cannot be classified")
    if lower == 0:
        return Kind.MINIMUM
    if upper == 0:
        return Kind.MAXIMUM
    if lower == 1 and upper == 1:
        return Kind.REGULAR
    return Kind.SADDLE


def classify_vertex(mesh: Triangulation, order: OrderField, v: int) -> Criticality:
    """Classify one vertex by flood filling its lower and upper link."""
    if not 0 <= v < mesh.n:
        raise MeshError(f"vertex {v} out of range (n={mesh.n})")
    nbrs = mesh.neighbors(v)
    if len(nbrs) == 0:
        raise MeshError("isolated vertex cannot be classified")
    rank = order.rank
    side = {int(u): rank[u] > rank[v] for u in nbrs}
    parent = {u: u for u in side}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in link_adjacency(mesh, v):
        if side[a] == side[b]:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra
    lower = sum(1 for u in side if not side[u] and find(u) == u)
    upper = sum(1 for u in side if side[u] and find(u) == u)
    return Criticality(_kind_from_counts(lower, upper), lower, upper)


def classify_all(mesh: Triangulation, order: OrderField):
    """Lower/upper link component counts for every vertex (kernel-backed)."""
    lower = np.empty(mesh.n, dtype=np.int16)
    upper = np.empty(mesh.n, dtype=np.int16)
    if mesh.is_grid:
        offsets, pairs = grid_link_tables(mesh.dim)
        dims = np.asarray(mesh.grid_dims, dtype=np.int64)
        strides = np.array(
            [1, dims[0]] + ([dims[0] * dims[1]] if mesh.dim == 3 else []),
            dtype=np.int64)
        _kernels.classify_grid(order.rank, dims, strides, offsets,
                               pairs[:, 0].copy(), pairs[:, 1].copy(),
                               lower, upper)
    else:
        _kernels.classify_explicit(order.rank, mesh.indptr, mesh.indices,
                                   mesh.link_ptr, mesh.link_a, mesh.link_b,
                                   lower, upper)
    return lower, upper


def extract_critical_points(mesh: Triangulation, order: OrderField) -> CriticalSet:
    lower, upper = classify_all(mesh, order)
    minima = np.flatnonzero((lower == 0))
    maxima = np.flatnonzero((upper == 0))
    saddles = np.flatnonzero((lower > 0) & (upper > 0) & ((lower > 1) | (upper > 1)))
    return CriticalSet(minima=minima, maxima=maxima, saddles=saddles,
                       lower_components=lower, upper_components=upper)


def morse_count_check(mesh: Triangulation, order: OrderField) -> int:
    """Alternating count #min - sum(lower_components - 1 over saddles) + #max.

    Equals the Euler characteristic on closed explicit 2-manifolds, which
    makes it a cheap whole-pipeline diagnostic.
    """
    if mesh.is_grid:
        raise MeshError("Morse count diagnostic needs an explicit closed mesh")
    if mesh.boundary.any():
        raise MeshError("Morse count diagnostic needs a closed mesh (no boundary)")
    cs = extract_critical_points(mesh, order)
    saddle_mult = int(np.sum(cs.lower_components[cs.saddles] - 1))
    return int(len(cs.minima) - saddle_mult + len(cs.maxima))


def critical_points_json(mesh: Triangulation, order: OrderField,
                         field: ScalarField | None = None) -> list:
    """Critical points as JSON-ready records {vertexId, kind, order, value}."""
    cs = extract_critical_points(mesh, order)
    records = []
    for vs, kind in ((cs.minima, Kind.MINIMUM), (cs.maxima, Kind.MAXIMUM),
                     (cs.saddles, Kind.SADDLE)):
        for v in vs:
            records.append({
                "vertexId": int(v),
                "kind": kind.value,
                "order": int(order.rank[v]),
                "value": float(field.values[v]) if field is not None else None,
            })
    records.sort(key=lambda r: r["order"])
    return records
