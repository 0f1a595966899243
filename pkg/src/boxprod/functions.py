"""Dense real-valued functions on product graphs.

Tables hold one value per product vertex in row-major tuple order and
expose the measure-weighted primitives: norms, variance, coordinate
variance (both as a conditional variance and as the quadratic form of
the coordinate centering operator), and entropy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .graphs import ProductGraph

BOOL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """Function on the vertices of a product graph (dense, row-major)."""

    product: ProductGraph
    values: np.ndarray

    def __post_init__(self):
        self.product.require_dense()
        if self.values.shape != (self.product.num_vertices,):
            raise ValueError(
                f"expected {self.product.num_vertices} values, "
                f"got shape {self.values.shape}"
            )
        self.values.setflags(write=False)

    @property
    def k(self) -> int:
        return self.product.k

    @property
    def boolean_pm1(self) -> bool:
        return bool(np.all(np.abs(np.abs(self.values) - 1.0) < BOOL_TOL))

    def as_tensor(self) -> np.ndarray:
        return self.values.reshape(self.product.shape)

    def with_values(self, values: np.ndarray) -> "FunctionTable":
        return FunctionTable(self.product, np.array(values, dtype=np.float64))

    # -- measure-weighted primitives ----------------------------------------

    def _pi(self) -> np.ndarray:
        return self.product.pi_product()

    def mean(self) -> float:
        return float(np.sum(self._pi() * self.values))

    def norm1(self) -> float:
        return float(np.sum(self._pi() * np.abs(self.values)))

    def norm2_sq(self) -> float:
        return float(np.sum(self._pi() * self.values * self.values))

    def inner(self, other: "FunctionTable") -> float:
        return float(np.sum(self._pi() * self.values * other.values))

    def variance(self) -> float:
        m = self.mean()
        return self.norm2_sq() - m * m

    def variance_along(self, j: int) -> float:
        """Expected conditional variance over coordinate ``j``."""
        n = self.product.base.n
        pi = self.product.base.pi
        tens = np.moveaxis(self.as_tensor(), j, 0).reshape(n, -1)
        m1 = pi @ tens
        m2 = pi @ (tens * tens)
        rest = self.product.pi_rest(j)
        return float((m2 - m1 * m1) @ rest)

    def centering_form(self, j: int) -> float:
        """Same quantity via the coordinate-j centering quadratic form."""
        n = self.product.base.n
        pi = self.product.base.pi
        tens = np.moveaxis(self.as_tensor(), j, 0).reshape(n, -1)
        # apply diag(pi) - pi pi^T along axis j, diag(pi) elsewhere
        applied = pi[:, None] * (tens - (pi @ tens)[None, :])
        rest = self.product.pi_rest(j)
        return float(np.sum(tens * applied, axis=0) @ rest)

    def entropy_sq(self) -> float:
        """Entropy of f^2 under the product measure (0*log0 = 0)."""
        f2 = self.values * self.values
        n2 = float(np.sum(self._pi() * f2))
        if n2 <= 0.0:
            return 0.0
        logs = np.zeros_like(f2)
        pos = f2 > 0.0
        logs[pos] = np.log(f2[pos])
        return float(np.sum(self._pi() * f2 * logs)) - n2 * np.log(n2)


# -- constructors ------------------------------------------------------------

def from_values(product: ProductGraph, values) -> FunctionTable:
    return FunctionTable(product, np.array(values, dtype=np.float64))


def dictator(product: ProductGraph, coord: int = 0) -> FunctionTable:
    """Boolean function determined by a single coordinate: +1 iff it is 0."""
    n, k = product.base.n, product.k
    col = np.where(np.arange(n) == 0, 1.0, -1.0)
    shape = [1] * k
    shape[coord] = n
    vals = np.broadcast_to(col.reshape(shape), product.shape)
    return from_values(product, vals.reshape(-1))


def parity(product: ProductGraph) -> FunctionTable:
    """Product of per-coordinate signs; requires a 2-vertex base."""
    if product.base.n != 2:
        raise ValueError("parity needs a 2-vertex base graph")
    vals = np.array([1.0])
    for _ in range(product.k):
        vals = np.kron(vals, np.array([1.0, -1.0]))
    return from_values(product, vals)


def random_boolean(product: ProductGraph, rng, balanced: bool = False) -> FunctionTable:
    size = product.num_vertices
    if balanced:
        vals = np.ones(size)
        vals[: size // 2] = -1.0
        rng.shuffle(vals)
    else:
        vals = rng.choice([-1.0, 1.0], size=size)
    return from_values(product, vals)


# -- orthogonal coordinate decomposition -------------------------------------

@dataclass(frozen=True, eq=False)
class Decomposition:
    """Split of f into a constant part plus one component per coordinate.

    Component j collects the spectral multi-indices whose last nonzero
    slot is j; the parts are pairwise orthogonal and their squared norms
    sum to the variance of f.
    """

    constant: FunctionTable
    parts: tuple

    def reconstruct(self) -> np.ndarray:
        total = self.constant.values.copy()
        for part in self.parts:
            total = total + part.values
        return total


def check_l2_l1_bounds(f: FunctionTable, dec: Decomposition, slack: float = 1e-9):
    """Per-coordinate norm bounds of the decomposition parts.

    For Boolean f, both the squared 2-norm and the 1-norm of part j are
    bounded by the coordinate-j variance.  Returns one row per
    coordinate with the observed slack.
    """
    if not f.boolean_pm1:
        raise ValueError("norm bounds require a {-1,+1}-valued function")
    rows = []
    for j, part in enumerate(dec.parts):
        l2_sq = part.norm2_sq()
        l1 = part.norm1()
        vj = f.variance_along(j)
        rows.append({
            "j": j,
            "l2_sq": l2_sq,
            "l1": l1,
            "var_j": vj,
            "ok_l2": bool(l2_sq <= vj + slack),
            "ok_l1": bool(l1 <= vj + slack),
        })
    return rows


def efron_stein_check(f: FunctionTable, slack: float = 1e-9):
    """Return (sum of coordinate variances, variance); the sum dominates."""
    lhs = sum(f.variance_along(j) for j in range(f.k))
    rhs = f.variance()
    if lhs < rhs - slack:
        raise AssertionError(
            f"variance subadditivity violated: {lhs} < {rhs}"
        )
    return lhs, rhs


# -- JSON interchange --------------------------------------------------------

def function_to_dict(f: FunctionTable) -> dict:
    return {"k": f.k, "values": [float(v) for v in f.values]}


def function_from_dict(data: dict, product: ProductGraph) -> FunctionTable:
    if int(data["k"]) != product.k:
        raise ValueError(f"function has k={data['k']}, product has k={product.k}")
    return from_values(product, data["values"])


def save_function(f: FunctionTable, path):
    with open(path, "w") as fh:
        json.dump(function_to_dict(f), fh, sort_keys=True)
        fh.write("\n")


def load_function(path, product: ProductGraph) -> FunctionTable:
    with open(path) as fh:
        return function_from_dict(json.load(fh), product)
