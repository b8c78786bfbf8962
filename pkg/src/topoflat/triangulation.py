"""Triangulated domains: implicit Freudenthal grids and explicit triangle meshes.

Regular grids are triangulated implicitly with the Kuhn/Freudenthal scheme
(2D: lower-left to upper-right diagonal; 3D: the six tetrahedra per cube that
share the main cube diagonal).  The diagonal direction is fixed so that
connectivity, and everything downstream of it, is reproducible bit for bit.

Vertex ids on grids are x-fastest: id = x + nx * (y + ny * z).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class MeshError(ValueError):
    """Invalid or unsupported mesh input."""


class NonTriangleFace(MeshError):
    """Explicit meshes must consist of triangles only."""


class NonManifoldEdge(MeshError):
    """An edge of an explicit mesh is shared by more than two triangles."""


# Neighbor offsets of the Kuhn/Freudenthal triangulation.  An edge connects
# p and p + d iff d or -d lies in {0,1}^dim (excluding the null offset).
_OFFSETS_2D = np.array(
    [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)], dtype=np.int64
)
_OFFSETS_3D = np.array(
    [
        (1, 0, 0), (0, 1, 0), (0, 0, 1),
        (1, 1, 0), (1, 0, 1), (0, 1, 1),
        (1, 1, 1),
        (-1, 0, 0), (0, -1, 0), (0, 0, -1),
        (-1, -1, 0), (-1, 0, -1), (0, -1, -1),
        (-1, -1, -1),
    ],
    dtype=np.int64,
)


def _is_binary(d: np.ndarray) -> bool:
    return bool(np.all((d == 0) | (d == 1)))


def _face_triple(a: np.ndarray, b: np.ndarray) -> bool:
    """Whether {p, p+a, p+b} spans a 2-face of the Kuhn subdivision.

    A simplex of the subdivision is a monotone lattice chain; a triple is a
    face iff it can be ordered x <= y <= z with consecutive differences in
    {0,1}^dim.
    """
    zero = np.zeros_like(a)
    for x, y, z in ((zero, a, b), (zero, b, a), (a, zero, b),
                    (b, zero, a), (a, b, zero), (b, a, zero)):
        if _is_binary(y - x) and _is_binary(z - y):
            return True
    return False


def _stencil_link_pairs(offsets: np.ndarray) -> np.ndarray:
    """Index pairs (i, j) of stencil offsets that form a link edge."""
    pairs = []
    for i in range(len(offsets)):
        for j in range(i + 1, len(offsets)):
            if _face_triple(offsets[i], offsets[j]):
                pairs.append((i, j))
    return np.array(pairs, dtype=np.int64)


_LINK_PAIRS_2D = _stencil_link_pairs(_OFFSETS_2D)
_LINK_PAIRS_3D = _stencil_link_pairs(_OFFSETS_3D)


@dataclass
class Triangulation:
    """Connectivity of a PL domain; immutable after construction.

    ``indptr``/``indices`` hold the symmetric vertex adjacency in CSR form.
    Explicit meshes additionally carry per-vertex link edges
    (``link_ptr``/``link_a``/``link_b``); grids derive the same information
    from the translation-invariant stencil tables.
    """

    dim: int
    n: int
    grid_dims: Optional[tuple] = None
    points: Optional[np.ndarray] = None
    triangles: Optional[np.ndarray] = None
    spacing: float = 1.0
    indptr: np.ndarray = field(default=None, repr=False)
    indices: np.ndarray = field(default=None, repr=False)
    link_ptr: Optional[np.ndarray] = field(default=None, repr=False)
    link_a: Optional[np.ndarray] = field(default=None, repr=False)
    link_b: Optional[np.ndarray] = field(default=None, repr=False)
    boundary: np.ndarray = field(default=None, repr=False)

    @property
    def is_grid(self) -> bool:
        return self.grid_dims is not None

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def grid_coords(self, v: int) -> tuple:
        nx = self.grid_dims[0]
        if self.dim == 2:
            return (v % nx, v // nx)
        ny = self.grid_dims[1]
        return (v % nx, (v // nx) % ny, v // (nx * ny))

    def grid_index(self, coords) -> int:
        nx = self.grid_dims[0]
        if self.dim == 2:
            return coords[0] + nx * coords[1]
        return coords[0] + nx * (coords[1] + self.grid_dims[1] * coords[2])


def _csr_from_edges(n: int, src: np.ndarray, dst: np.ndarray):
    """Build CSR adjacency from directed edge lists (already symmetric)."""
    order = np.argsort(src, kind="stable")
    src = src[order]
    dst = dst[order]
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, dst.astype(np.int64)


def build_grid_triangulation(dims, spacing: float = 1.0) -> Triangulation:
    """Implicitly Freudenthal-triangulated regular grid (2D or 3D)."""
    dims = tuple(int(d) for d in dims)
    if len(dims) not in (2, 3):
        raise MeshError(f"grid must be 2D or 3D, got {len(dims)} axes")
    if any(d < 2 for d in dims):
        raise MeshError(f"every grid axis needs at least 2 vertices, got {dims}")
    ndim = len(dims)
    n = int(np.prod(dims))
    offsets = _OFFSETS_2D if ndim == 2 else _OFFSETS_3D

    coords = np.indices(dims[::-1]).reshape(ndim, -1)[::-1]  # coords[axis][id]
    srcs, dsts = [], []
    ids = np.arange(n, dtype=np.int64)
    strides = np.array([1, dims[0]] + ([dims[0] * dims[1]] if ndim == 3 else []),
                       dtype=np.int64)
    for off in offsets:
        mask = np.ones(n, dtype=bool)
        for ax in range(ndim):
            c = coords[ax] + off[ax]
            mask &= (c >= 0) & (c < dims[ax])
        srcs.append(ids[mask])
        dsts.append(ids[mask] + int(off @ strides))
    indptr, indices = _csr_from_edges(n, np.concatenate(srcs), np.concatenate(dsts))

    bmask = np.zeros(n, dtype=bool)
    for ax in range(ndim):
        bmask |= (coords[ax] == 0) | (coords[ax] == dims[ax] - 1)

    return Triangulation(dim=ndim, n=n, grid_dims=dims, spacing=spacing,
                         indptr=indptr, indices=indices, boundary=bmask)


def build_explicit_triangulation(points, triangles) -> Triangulation:
    """Explicit 2-manifold triangle mesh (with or without boundary)."""
    points = np.asarray(points, dtype=np.float64)
    triangles = np.asarray(triangles, dtype=np.int64)
    if triangles.ndim != 2 or triangles.shape[1] != 3:
        raise NonTriangleFace("faces must be triangles")
    n = len(points)
    if triangles.size and (triangles.min() < 0 or triangles.max() >= n):
        raise MeshError("triangle references an unknown vertex")

    edge_tris: dict = {}
    for t, (a, b, c) in enumerate(triangles):
        for u, w in ((a, b), (b, c), (a, c)):
            key = (min(u, w), max(u, w))
            edge_tris.setdefault(key, []).append(t)
    for (u, w), ts in edge_tris.items():
        if len(ts) > 2:
            raise NonManifoldEdge(f"edge ({u},{w}) lies in {len(ts)} triangles")

    nbrs = [set() for _ in range(n)]
    link = [[] for _ in range(n)]
    for a, b, c in triangles:
        nbrs[a].update((b, c)); nbrs[b].update((a, c)); nbrs[c].update((a, b))
        link[a].append((b, c)); link[b].append((a, c)); link[c].append((a, b))

    src = np.concatenate([np.full(len(s), v, dtype=np.int64)
                          for v, s in enumerate(nbrs)]) if n else np.empty(0, np.int64)
    dst = np.concatenate([np.fromiter(sorted(s), dtype=np.int64, count=len(s))
                          for s in nbrs]) if n else np.empty(0, np.int64)
    indptr, indices = _csr_from_edges(n, src, dst)

    link_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum([len(l) for l in link], out=link_ptr[1:])
    link_a = np.array([p[0] for l in link for p in l], dtype=np.int64)
    link_b = np.array([p[1] for l in link for p in l], dtype=np.int64)

    boundary = np.zeros(n, dtype=bool)
    for (u, w), ts in edge_tris.items():
        if len(ts) == 1:
            boundary[u] = boundary[w] = True

    mesh = Triangulation(dim=2, n=n, points=points, triangles=triangles,
                         indptr=indptr, indices=indices,
                         link_ptr=link_ptr, link_a=link_a, link_b=link_b,
                         boundary=boundary)
    _validate_vertex_links(mesh)
    return mesh


def _validate_vertex_links(mesh: Triangulation) -> None:
    """Each vertex link must be one cycle (interior) or one path (boundary)."""
    for v in range(mesh.n):
        pairs = link_adjacency(mesh, v)
        deg: dict = {}
        for u, w in pairs:
            deg[u] = deg.get(u, 0) + 1
            deg[w] = deg.get(w, 0) + 1
        if not deg:
            if mesh.degree(v):
                raise MeshError(f"vertex {v} has neighbors but no link edges")
            continue
        odd = sum(1 for d in deg.values() if d == 1)
        if any(d > 2 for d in deg.values()) or odd not in (0, 2):
            raise MeshError(f"link of vertex {v} is not a single cycle or path")
        # connectivity of the link graph
        adj: dict = {}
        for u, w in pairs:
            adj.setdefault(u, []).append(w)
            adj.setdefault(w, []).append(u)
        seen = {next(iter(adj))}
        stack = list(seen)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(deg):
            raise MeshError(f"link of vertex {v} is disconnected")


def link_adjacency(mesh: Triangulation, v: int) -> list:
    """Edges of the link of v, as (u, w) vertex pairs sharing a cofacet of v."""
    if not 0 <= v < mesh.n:
        raise MeshError(f"vertex {v} out of range (n={mesh.n})")
    if mesh.is_grid:
        offsets = _OFFSETS_2D if mesh.dim == 2 else _OFFSETS_3D
        pairs_idx = _LINK_PAIRS_2D if mesh.dim == 2 else _LINK_PAIRS_3D
        c = np.array(mesh.grid_coords(v), dtype=np.int64)
        dims = np.array(mesh.grid_dims, dtype=np.int64)
        valid = np.all((c + offsets >= 0) & (c + offsets < dims), axis=1)
        strides = np.array([1, dims[0]] + ([dims[0] * dims[1]] if mesh.dim == 3 else []),
                           dtype=np.int64)
        out = []
        for i, j in pairs_idx:
            if valid[i] and valid[j]:
                out.append((v + int(offsets[i] @ strides), v + int(offsets[j] @ strides)))
        return out
    lo, hi = mesh.link_ptr[v], mesh.link_ptr[v + 1]
    return [(int(a), int(b)) for a, b in zip(mesh.link_a[lo:hi], mesh.link_b[lo:hi])]


def grid_link_tables(dim: int):
    """Stencil offsets and link-edge index pairs for grid kernels."""
    if dim == 2:
        return _OFFSETS_2D, _LINK_PAIRS_2D
    return _OFFSETS_3D, _LINK_PAIRS_3D


# ---------------------------------------------------------------------------
# OFF text format
# ---------------------------------------------------------------------------

def load_off(text: str) -> Triangulation:
    """Parse an OFF mesh (triangle faces only) into an explicit triangulation."""
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    if not tokens or tokens[0] != "OFF":
        raise MeshError("missing OFF header")
    try:
        nv, nf = int(tokens[1]), int(tokens[2])  # edge count ignored
        pos = 4
        pts = np.array(tokens[pos:pos + 3 * nv], dtype=np.float64).reshape(nv, 3)
        pos += 3 * nv
        tris = []
        for _ in range(nf):
            k = int(tokens[pos])
            if k != 3:
                raise NonTriangleFace(f"face with {k} vertices; triangles only")
            tris.append([int(t) for t in tokens[pos + 1:pos + 4]])
            pos += 1 + k
    except (IndexError, ValueError) as exc:
        if isinstance(exc, MeshError):
            raise
        raise MeshError(f"malformed OFF data: {exc}") from exc
    return build_explicit_triangulation(pts, np.array(tris, dtype=np.int64))


def write_off(mesh: Triangulation) -> str:
    if mesh.is_grid:
        raise MeshError("OFF output requires an explicit mesh")
    lines = ["OFF", f"{mesh.n} {len(mesh.triangles)} 0"]
    for p in mesh.points:
        lines.append(" ".join(repr(float(x)) for x in p))
    for t in mesh.triangles:
        lines.append("3 " + " ".join(str(int(v)) for v in t))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Canonical closed test surfaces
# ---------------------------------------------------------------------------

def make_octahedron() -> Triangulation:
    pts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    tris = [(0, 2, 4), (2, 1, 4), (1, 3, 4), (3, 0, 4),
            (2, 0, 5), (1, 2, 5), (3, 1, 5), (0, 3, 5)]
    return build_explicit_triangulation(np.array(pts, float), np.array(tris))


def make_icosahedron() -> Triangulation:
    phi = (1 + np.sqrt(5)) / 2
    pts = []
    for a, b in ((1, phi), (-1, phi), (1, -phi), (-1, -phi)):
        pts.extend([(0, a, b), (a, b, 0), (b, 0, a)])
    pts = np.array(pts, dtype=np.float64)
    # faces = triples at mutual minimal distance
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    edge = np.isclose(d2, 4.0)
    tris = []
    for i in range(12):
        for j in range(i + 1, 12):
            if not edge[i, j]:
                continue
            for k in range(j + 1, 12):
                if edge[i, k] and edge[j, k]:
                    tris.append((i, j, k))
    return build_explicit_triangulation(pts, np.array(tris, dtype=np.int64))


def make_torus(p: int = 8, q: int = 8) -> Triangulation:
    """Flat torus: p x q vertex grid with wraparound, diagonal split."""
    if p < 3 or q < 3:
        raise MeshError("torus grid needs at least 3 vertices per axis")
    idx = lambda x, y: (x % p) + p * (y % q)
    pts = []
    for y in range(q):
        for x in range(p):
            ang_u, ang_v = 2 * np.pi * x / p, 2 * np.pi * y / q
            r = 2 + np.cos(ang_v)
            pts.append((r * np.cos(ang_u), r * np.sin(ang_u), np.sin(ang_v)))
    tris = []
    for y in range(q):
        for x in range(p):
            a, b = idx(x, y), idx(x + 1, y)
            c, d = idx(x, y + 1), idx(x + 1, y + 1)
            tris.append((a, b, d))
            tris.append((a, d, c))
    return build_explicit_triangulation(np.array(pts), np.array(tris, dtype=np.int64))
