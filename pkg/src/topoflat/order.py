"""Order fields: the injective integer re-indexing of vertices by (value, id).

Scalar values with ties are disambiguated by vertex id, which makes every
downstream classification unambiguous.  ``realize_numeric`` is the inverse
step: it turns a (possibly reordered) order field back into scalar values by
a single descending sweep that lowers any vertex violating the order.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .triangulation import Triangulation
from . import _kernels


class FieldError(ValueError):
    """Invalid scalar-field input."""


@dataclass
class ScalarField:
    """Real values on the vertices of a triangulation."""

    mesh: Triangulation
    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.shape != (self.mesh.n,):
            raise FieldError(
                f"expected {self.mesh.n} values, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise FieldError("scalar field contains NaN or infinite values")

    @property
    def value_range(self) -> float:
        return float(self.values.max() - self.values.min())


@dataclass
class OrderField:
    """Bijection vertices -> {0..n-1}; ``inverse`` is the sorted vertex list."""

    rank: np.ndarray
    inverse: np.ndarray

    @property
    def n(self) -> int:
        return len(self.rank)

    def reversed(self) -> "OrderField":
        rev_rank = (self.n - 1) - self.rank
        return OrderField(rank=rev_rank, inverse=self.inverse[::-1].copy())

    def __eq__(self, other) -> bool:
        return isinstance(other, OrderField) and np.array_equal(self.rank, other.rank)


class ZetaMode(Enum):
    RELATIVE_EPSILON = "relative-epsilon"
    ULP_DECREMENT = "ulp-decrement"


@dataclass
class ZetaPolicy:
    """How far a violating vertex is lowered below its predecessor.

    The relative mode scales a dimensionless factor by the global value
    range; whenever the resulting decrement underflows (or the range is
    zero), the next smaller representable value is used instead, so the
    decrement is always strictly positive.
    """

    mode: ZetaMode = ZetaMode.RELATIVE_EPSILON
    factor: float = 1e-12

    def step(self, value_range: float) -> float:
        if self.mode is ZetaMode.ULP_DECREMENT:
            return 0.0  # realize falls back to nextafter on zero step
        return self.factor * value_range


def compute_order_field(f: ScalarField) -> OrderField:
    """Sort vertices by (value, id); ranks are the positions in that order."""
    inverse = np.argsort(f.values, kind="stable").astype(np.int64)
    rank = np.empty(f.mesh.n, dtype=np.int64)
    rank[inverse] = np.arange(f.mesh.n, dtype=np.int64)
    return OrderField(rank=rank, inverse=inverse)


def order_from_ranks(rank: np.ndarray) -> OrderField:
    rank = np.asarray(rank, dtype=np.int64)
    n = len(rank)
    inverse = np.empty(n, dtype=np.int64)
    inverse[rank] = np.arange(n, dtype=np.int64)
    return OrderField(rank=rank.copy(), inverse=inverse)


def realize_numeric(f: ScalarField, order: OrderField,
                    zeta: ZetaPolicy | None = None) -> ScalarField:
    """Scalar field g that increases strictly with ``order`` and equals f
    wherever the descending sweep finds f already consistent.

    A vertex is lowered iff keeping its value would contradict the order
    after (value, id) tie-breaking, so realize(f, order(f)) == f exactly and
    the order of the result reproduces ``order``.
    """
    if order.n != f.mesh.n:
        raise FieldError("order field size does not match the scalar field")
    zeta = zeta or ZetaPolicy()
    g = f.values.copy()
    _kernels.realize_sweep(g, order.inverse, zeta.step(f.value_range))
    return ScalarField(mesh=f.mesh, values=g)
