"""Weighted graphs with probability measures and their Cartesian powers.

A graph carries an edge measure ``mu`` (a probability distribution on
unordered vertex pairs) and a vertex measure ``pi`` fixed by the
consistency rule ``2*pi(v) = sum_u mu({u,v})``, which makes ``pi`` the
stationary distribution of the random walk driven by ``mu``.  Function
space inner products are always taken against ``pi``; the Dirichlet
energy ``f.L.f`` of the normalized Laplacian equals half the expected
squared edge difference under ``mu``.

The k-fold Cartesian power is kept implicit: vertices are k-tuples of
base vertices, and all product measures are derived from base data.
Dense operations are only allowed while ``n**k`` stays under a
configurable cap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

DENSE_CAP = 1 << 22

MEASURE_TOL = 1e-12


class DenseCapError(RuntimeError):
    """Raised when a dense operation would exceed the product-size cap."""


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Connected undirected graph with normalized edge/vertex measures.

    Edges are stored as parallel arrays (``edge_u[i] < edge_v[i]``) with
    masses ``edge_w`` summing to one.  The dense Laplacian is built
    lazily so that large sampled-only graphs stay cheap.
    """

    n: int
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_w: np.ndarray
    pi: np.ndarray

    def __post_init__(self):
        for arr in (self.edge_u, self.edge_v, self.edge_w, self.pi):
            arr.setflags(write=False)

    @property
    def num_edges(self) -> int:
        return len(self.edge_w)

    @cached_property
    def laplacian(self) -> np.ndarray:
        lap = np.zeros((self.n, self.n))
        half = self.edge_w / 2.0
        lap[self.edge_u, self.edge_v] = -half
        lap[self.edge_v, self.edge_u] = -half
        lap[np.arange(self.n), np.arange(self.n)] = self.pi
        lap.setflags(write=False)
        return lap

    @cached_property
    def _edge_index(self) -> dict:
        return {
            (int(u), int(v)): float(w)
            for u, v, w in zip(self.edge_u, self.edge_v, self.edge_w)
        }

    @cached_property
    def csr(self) -> tuple:
        """Adjacency in CSR form: (indptr, neighbor, weight) arrays."""
        deg = np.zeros(self.n, dtype=np.int64)
        np.add.at(deg, self.edge_u, 1)
        np.add.at(deg, self.edge_v, 1)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        nbr = np.empty(indptr[-1], dtype=np.int64)
        wts = np.empty(indptr[-1], dtype=np.float64)
        cursor = indptr[:-1].copy()
        for u, v, w in zip(self.edge_u, self.edge_v, self.edge_w):
            nbr[cursor[u]] = v
            wts[cursor[u]] = w
            cursor[u] += 1
            nbr[cursor[v]] = u
            wts[cursor[v]] = w
            cursor[v] += 1
        return indptr, nbr, wts

    def edge_mass(self, u: int, v: int) -> float:
        """Mass of the unordered pair {u, v}; zero when not an edge."""
        if u == v:
            return 0.0
        key = (u, v) if u < v else (v, u)
        return self._edge_index.get(key, 0.0)

    # -- function-space primitives under the vertex measure -----------------

    def inner(self, f: np.ndarray, g: np.ndarray) -> float:
        return float(np.sum(self.pi * f * g))

    def mean(self, f: np.ndarray) -> float:
        return float(np.sum(self.pi * f))

    def norm2_sq(self, f: np.ndarray) -> float:
        return self.inner(f, f)

    def norm1(self, f: np.ndarray) -> float:
        return float(np.sum(self.pi * np.abs(f)))

    def variance(self, f: np.ndarray) -> float:
        m = self.mean(f)
        return self.norm2_sq(f) - m * m

    def dirichlet(self, f: np.ndarray) -> float:
        """Energy form; equals half the mu-expectation of (f(u)-f(v))^2."""
        d = f[self.edge_u] - f[self.edge_v]
        return 0.5 * float(np.sum(self.edge_w * d * d))

    def entropy_sq(self, f: np.ndarray) -> float:
        """Entropy of f^2 under pi with the 0*log(0)=0 convention."""
        f2 = f * f
        n2 = float(np.sum(self.pi * f2))
        if n2 <= 0.0:
            return 0.0
        logs = np.zeros_like(f2)
        pos = f2 > 0.0
        logs[pos] = np.log(f2[pos])
        return float(np.sum(self.pi * f2 * logs)) - n2 * np.log(n2)


def _connected_components(n, edge_u, edge_v):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in zip(edge_u, edge_v):
        ru, rv = find(int(u)), find(int(v))
        if ru != rv:
            parent[ru] = rv
    comps = {}
    for v in range(n):
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values())


def _from_arrays(n, edge_u, edge_v, edge_w, *, normalize, check_connected=True):
    edge_u = np.asarray(edge_u, dtype=np.int64)
    edge_v = np.asarray(edge_v, dtype=np.int64)
    edge_w = np.asarray(edge_w, dtype=np.float64)
    order = np.lexsort((edge_v, edge_u))
    edge_u, edge_v, edge_w = edge_u[order], edge_v[order], edge_w[order]
    if normalize:
        edge_w = edge_w / edge_w.sum()
    if check_connected:
        comps = _connected_components(n, edge_u, edge_v)
        if len(comps) != 1:
            raise ValueError(f"graph is disconnected; components: {comps}")
    pi = np.zeros(n)
    np.add.at(pi, edge_u, edge_w / 2.0)
    np.add.at(pi, edge_v, edge_w / 2.0)
    return WeightedGraph(n=n, edge_u=edge_u, edge_v=edge_v, edge_w=edge_w, pi=pi)


def build_graph(n: int, edges) -> WeightedGraph:
    """Build a graph from (u, v, weight) triples.

    Weights are renormalized so the edge masses form a probability
    distribution; the vertex measure is derived from the consistency
    rule.  Self-loops, duplicate pairs, nonpositive weights and
    disconnected graphs are rejected.
    """
    if n < 2:
        raise ValueError("need at least 2 vertices")
    seen = set()
    eu, ev, ew = [], [], []
    for u, v, w in edges:
        u, v, w = int(u), int(v), float(w)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"vertex out of range in edge ({u}, {v})")
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if w <= 0:
            raise ValueError(f"nonpositive weight {w} on edge ({u}, {v})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
        eu.append(key[0])
        ev.append(key[1])
        ew.append(w)
    if not eu:
        raise ValueError("graph has no edges")
    return _from_arrays(n, eu, ev, ew, normalize=True)


@dataclass(frozen=True)
class MeasureReport:
    """Residuals of the edge/vertex measure consistency conditions."""

    residuals: np.ndarray
    mass_error: float
    worst_vertex: int
    passed: bool


def validate_measures(graph: WeightedGraph, tol: float = MEASURE_TOL) -> MeasureReport:
    """Check 2*pi(v) = sum_u mu({u,v}) per vertex and sum(mu) = 1."""
    row = np.zeros(graph.n)
    np.add.at(row, graph.edge_u, graph.edge_w)
    np.add.at(row, graph.edge_v, graph.edge_w)
    residuals = np.abs(2.0 * graph.pi - row)
    mass_error = abs(float(graph.edge_w.sum()) - 1.0)
    worst = int(np.argmax(residuals))
    passed = bool(residuals.max() < tol and mass_error < tol)
    return MeasureReport(residuals=residuals, mass_error=mass_error,
                         worst_vertex=worst, passed=passed)


# -- builtin families --------------------------------------------------------

def complete_graph(q: int) -> WeightedGraph:
    if q < 2:
        raise ValueError("complete graph needs q >= 2")
    edges = [(u, v, 1.0) for u in range(q) for v in range(u + 1, q)]
    return build_graph(q, edges)


def cycle_graph(n: int) -> WeightedGraph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return build_graph(n, [(i, (i + 1) % n, 1.0) for i in range(n)])


def path_graph(n: int) -> WeightedGraph:
    if n < 2:
        raise ValueError("path needs n >= 2")
    return build_graph(n, [(i, i + 1, 1.0) for i in range(n - 1)])


# -- k-fold Cartesian power --------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProductGraph:
    """Implicit k-fold Cartesian power of a base graph.

    Vertices are k-tuples of base vertices (row-major flat indexing,
    coordinate 0 slowest).  Nothing of size ``n**k x n**k`` is ever
    materialized; the dense cap only gates length-``n**k`` objects.
    """

    base: WeightedGraph
    k: int
    dense_cap: int = DENSE_CAP

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("power k must be >= 1")

    @property
    def num_vertices(self) -> int:
        return self.base.n ** self.k

    @property
    def shape(self) -> tuple:
        return (self.base.n,) * self.k

    @property
    def within_cap(self) -> bool:
        return self.num_vertices <= self.dense_cap

    def require_dense(self):
        if not self.within_cap:
            raise DenseCapError(
                f"n^k = {self.num_vertices} exceeds the dense cap "
                f"{self.dense_cap}; use the Monte-Carlo estimators instead"
            )

    def index_of(self, tup) -> int:
        n = self.base.n
        idx = 0
        if len(tup) != self.k:
            raise ValueError("tuple length != k")
        for x in tup:
            if not 0 <= x < n:
                raise ValueError(f"coordinate {x} out of range")
            idx = idx * n + int(x)
        return idx

    def tuple_of(self, index: int) -> tuple:
        n = self.base.n
        out = []
        for _ in range(self.k):
            out.append(index % n)
            index //= n
        return tuple(reversed(out))

    def pi_product(self) -> np.ndarray:
        """Flat product vertex measure (row-major)."""
        self.require_dense()
        out = np.array([1.0])
        for _ in range(self.k):
            out = np.kron(out, self.base.pi)
        return out

    def pi_rest(self, j: int) -> np.ndarray:
        """Flat product measure over all coordinates except ``j``."""
        if self.k == 1:
            return np.array([1.0])
        cap_rest = self.base.n ** (self.k - 1)
        if cap_rest > self.dense_cap:
            raise DenseCapError("n^(k-1) exceeds the dense cap")
        out = np.array([1.0])
        for _ in range(self.k - 1):
            out = np.kron(out, self.base.pi)
        return out

    def product_edge_mass(self, x, y) -> float:
        """Mass of the unordered product edge {x, y}.

        Zero unless the tuples differ in exactly one coordinate by a
        base edge; otherwise (1/k) * prod(pi over shared coordinates)
        * mu(base pair).
        """
        if len(x) != self.k or len(y) != self.k:
            raise ValueError("tuples must have length k")
        diff = [j for j in range(self.k) if x[j] != y[j]]
        if len(diff) != 1:
            return 0.0
        j = diff[0]
        mass = self.base.edge_mass(int(x[j]), int(y[j]))
        if mass == 0.0:
            return 0.0
        rest = 1.0
        for i in range(self.k):
            if i != j:
                rest *= float(self.base.pi[x[i]])
        return mass * rest / self.k

    def dense_edges(self):
        """All product edges as flat-index arrays (u, v, mass)."""
        self.require_dense()
        n, k = self.base.n, self.k
        rest_count = n ** (k - 1)
        pi_rest_flat = self.pi_rest(0) if k > 1 else np.array([1.0])
        us, vs, ws = [], [], []
        r = np.arange(rest_count, dtype=np.int64)
        for j in range(k):
            low = n ** (k - 1 - j)
            hi = r // low
            lo = r % low
            base_off = hi * (low * n) + lo
            for u, v, w in zip(self.base.edge_u, self.base.edge_v, self.base.edge_w):
                us.append(base_off + int(u) * low)
                vs.append(base_off + int(v) * low)
                ws.append((w / self.k) * pi_rest_flat)
        return (np.concatenate(us), np.concatenate(vs), np.concatenate(ws))

    def to_weighted_graph(self, max_vertices: int = 1 << 16) -> WeightedGraph:
        """Materialize the product as an explicit WeightedGraph."""
        if self.num_vertices > max_vertices:
            raise DenseCapError(
                f"refusing to materialize {self.num_vertices} vertices "
                f"(limit {max_vertices})"
            )
        if self.k == 1:
            return self.base
        eu, ev, ew = self.dense_edges()
        swap = eu > ev
        eu2 = np.where(swap, ev, eu)
        ev2 = np.where(swap, eu, ev)
        return _from_arrays(self.num_vertices, eu2, ev2, ew,
                            normalize=False, check_connected=False)


def cartesian_power(base: WeightedGraph, k: int,
                    dense_cap: int = DENSE_CAP) -> ProductGraph:
    """Implicit handle on the k-fold Cartesian power of ``base``."""
    return ProductGraph(base=base, k=k, dense_cap=dense_cap)


# -- JSON interchange --------------------------------------------------------

def graph_to_dict(graph: WeightedGraph) -> dict:
    return {
        "n": graph.n,
        "edges": [
            [int(u), int(v), float(w)]
            for u, v, w in zip(graph.edge_u, graph.edge_v, graph.edge_w)
        ],
    }


def graph_from_dict(data: dict) -> WeightedGraph:
    return build_graph(int(data["n"]), data["edges"])


def save_graph(graph: WeightedGraph, path):
    with open(path, "w") as fh:
        json.dump(graph_to_dict(graph), fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_graph(path) -> WeightedGraph:
    with open(path) as fh:
        return graph_from_dict(json.load(fh))
