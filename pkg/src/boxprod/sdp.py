"""Sparsest-cut SDP machinery: the spectrally solvable basic relaxation,
direct-sum vector lifting to Cartesian powers, and verified liftings of
local-distribution and parity-set hierarchy solutions.

Every lifting scales direct sums by 1/sqrt(k), the unique normalization
under which inner products average over coordinates, the spread
constraint is preserved exactly, and the lifted objective equals the
base objective divided by k.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graphs import ProductGraph, WeightedGraph
from .spectral import eigendecompose

TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SdpSolution:
    """One embedding vector per vertex (rows)."""

    vectors: np.ndarray

    def __post_init__(self):
        if self.vectors.ndim != 2:
            raise ValueError("vectors must be a 2-d array (vertices x dim)")
        self.vectors.setflags(write=False)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T

    def objective(self, graph: WeightedGraph) -> float:
        """Expected squared edge distance under the edge measure."""
        diff = self.vectors[graph.edge_u] - self.vectors[graph.edge_v]
        return float(np.sum(graph.edge_w * np.sum(diff * diff, axis=1)))

    def spread(self, graph: WeightedGraph) -> float:
        """Expected squared distance between two independent pi-vertices."""
        second = float(graph.pi @ np.sum(self.vectors ** 2, axis=1))
        mean_vec = graph.pi @ self.vectors
        return 2.0 * (second - float(mean_vec @ mean_vec))

    def is_feasible(self, graph: WeightedGraph, tol: float = TOL) -> bool:
        return abs(self.spread(graph) - 1.0) <= tol

    def unit_norms(self, tol: float = TOL) -> bool:
        norms = np.sum(self.vectors ** 2, axis=1)
        return bool(np.all(np.abs(norms - 1.0) <= tol))

    def squared_distances(self) -> np.ndarray:
        g = self.gram()
        d = np.diag(g)
        return d[:, None] + d[None, :] - 2.0 * g


def basic_sdp_opt(graph: WeightedGraph):
    """Optimum of the basic spread-normalized relaxation.

    Equals the spectral gap; the witness is the gap eigenfunction as a
    one-dimensional embedding scaled to unit spread.
    """
    basis = eigendecompose(graph)
    opt = basis.lambda1
    vec = basis.eigenfunctions[:, 1].copy()
    sol = SdpSolution(vectors=(vec / math.sqrt(2.0))[:, None])
    if abs(sol.spread(graph) - 1.0) > TOL:
        raise AssertionError("witness embedding misses the spread constraint")
    if abs(sol.objective(graph) - opt) > TOL:
        raise AssertionError("witness objective does not match the optimum")
    return opt, sol


def lift_vectors(sol: SdpSolution, product: ProductGraph,
                 max_vertices: int = 1 << 10) -> SdpSolution:
    """Direct-sum lifting: product vertex x gets (1/sqrt(k)) (+) v_{x_j}.

    Verifies the three lifting identities: Gram entries average the
    coordinate Gram entries, spread stays 1, and the objective drops by
    exactly the factor k.
    """
    base = product.base
    dense = product.to_weighted_graph(max_vertices=max_vertices)
    if not sol.is_feasible(base):
        raise ValueError("input solution violates the spread constraint")
    k, d = product.k, sol.dim
    nv = product.num_vertices
    coords = np.array([product.tuple_of(flat) for flat in range(nv)],
                      dtype=np.int64)
    scale = 1.0 / math.sqrt(k)
    lifted = np.concatenate(
        [scale * sol.vectors[coords[:, j]] for j in range(k)], axis=1)
    out = SdpSolution(vectors=lifted)

    base_gram = sol.gram()
    want = np.zeros((nv, nv))
    for j in range(k):
        want += base_gram[np.ix_(coords[:, j], coords[:, j])]
    want /= k
    if float(np.abs(out.gram() - want).max()) > TOL:
        raise AssertionError("lifted Gram is not the coordinate mean")
    if abs(out.spread(dense) - 1.0) > TOL:
        raise AssertionError("lifted solution violates the spread constraint")
    if abs(out.objective(dense) - sol.objective(base) / k) > TOL:
        raise AssertionError("lifted objective is not objective/k")
    return out


@dataclass(frozen=True, eq=False)
class TriangleReport:
    violations: np.ndarray
    count: int
    worst: float
    checked: int
    partial: bool


def check_triangle(sol: SdpSolution, *, tol: float = TOL,
                   budget: int = 2_000_000, seed: int = 0,
                   backend=None) -> TriangleReport:
    """Scan ordered vertex triples for squared-distance triangle
    violations; samples with a seed when the full scan exceeds the
    budget."""
    dist = sol.squared_distances()
    n = sol.n
    total = n ** 3
    if total <= budget:
        count, worst, trips = _kernels.triangle_scan(dist, tol, backend=backend)
        return TriangleReport(violations=trips, count=count, worst=worst,
                              checked=total, partial=False)
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, n, size=budget)
    ys = rng.integers(0, n, size=budget)
    zs = rng.integers(0, n, size=budget)
    slack = dist[xs, zs] - dist[xs, ys] - dist[ys, zs]
    bad = slack > tol
    trips = np.stack([xs[bad], ys[bad], zs[bad]], axis=1)[:64]
    worst = float(slack[bad].max()) if bad.any() else 0.0
    return TriangleReport(violations=trips, count=int(bad.sum()), worst=worst,
                          checked=budget, partial=True)


# -- local distributions (Sherali-Adams style) -----------------------------------

def _normalize_table(table: dict) -> dict:
    return {tuple(int(z) for z in key): float(p) for key, p in table.items()}


@dataclass(frozen=True, eq=False)
class LocalDistributions:
    """Level-t family: for each vertex subset T (|T| <= t, keyed by a
    sorted tuple) a probability table over {-1,+1} assignments to T."""

    level: int
    tables: dict

    def table(self, subset) -> dict:
        return self.tables[tuple(sorted(subset))]

    def subsets(self):
        return sorted(self.tables.keys())

    def marginal(self, subset, onto) -> dict:
        subset = tuple(sorted(subset))
        onto = tuple(sorted(onto))
        pos = [subset.index(v) for v in onto]
        out: dict = {}
        for assign, p in self.tables[subset].items():
            key = tuple(assign[i] for i in pos)
            out[key] = out.get(key, 0.0) + p
        return out

    def check_tables(self, tol: float = TOL):
        for subset, table in self.tables.items():
            if len(subset) > self.level:
                raise ValueError(f"subset {subset} exceeds level {self.level}")
            total = sum(table.values())
            if abs(total - 1.0) > tol:
                raise ValueError(f"table for {subset} sums to {total}")
            if any(p < -tol for p in table.values()):
                raise ValueError(f"negative probability in table for {subset}")

    def check_marginal_consistency(self, tol: float = TOL) -> float:
        """Max disagreement of marginals on intersections of stored sets."""
        worst = 0.0
        keys = self.subsets()
        for t1, t2 in itertools.combinations(keys, 2):
            common = tuple(sorted(set(t1) & set(t2)))
            if not common:
                continue
            m1 = self.marginal(t1, common)
            m2 = self.marginal(t2, common)
            for key in set(m1) | set(m2):
                worst = max(worst, abs(m1.get(key, 0.0) - m2.get(key, 0.0)))
        return worst

    def check_vector_consistency(self, sol: SdpSolution, vertex_index=None,
                                 tol: float = TOL) -> float:
        """Max gap between Gram entries and pair-correlation moments."""
        if vertex_index is None:
            vertex_index = lambda v: v
        gram = sol.gram()
        worst = 0.0
        for subset in self.subsets():
            if len(subset) != 2:
                continue
            x, y = subset
            corr = sum(p * z[0] * z[1] for z, p in self.tables[subset].items())
            worst = max(worst, abs(gram[vertex_index(x), vertex_index(y)] - corr))
        return worst


def sa_from_distribution(dist: dict, n: int, level: int) -> LocalDistributions:
    """Exact marginals of a global distribution over {-1,+1}^n."""
    tables = {}
    for size in range(1, level + 1):
        for subset in itertools.combinations(range(n), size):
            table: dict = {}
            for assign, p in dist.items():
                key = tuple(assign[v] for v in subset)
                table[key] = table.get(key, 0.0) + p
            tables[subset] = table
    return LocalDistributions(level=level, tables=tables)


def vectors_from_distribution(dist: dict) -> SdpSolution:
    """Unit-norm vectors whose Gram matrix realizes the pair moments of a
    global distribution: coordinates indexed by outcomes, entry
    sqrt(p(sigma)) * sigma_x."""
    outcomes = sorted(dist.keys())
    n = len(outcomes[0])
    mat = np.zeros((n, len(outcomes)))
    for col, sigma in enumerate(outcomes):
        root = math.sqrt(dist[sigma])
        for x in range(n):
            mat[x, col] = root * sigma[x]
    return SdpSolution(vectors=mat)


def vectors_from_local_tables(ld: LocalDistributions, n: int,
                              tol: float = 1e-7) -> SdpSolution:
    """Unit-norm vectors realizing the pair moments of level-2 tables.

    Factors the moment matrix (ones on the diagonal, pair correlations
    off it); fails when the tables admit no consistent vector family,
    i.e. the moment matrix is not positive semidefinite.
    """
    gram = np.eye(n)
    for subset in ld.subsets():
        if len(subset) != 2:
            continue
        x, y = subset
        corr = sum(p * z[0] * z[1] for z, p in ld.table(subset).items())
        gram[x, y] = gram[y, x] = corr
    evals, evecs = np.linalg.eigh(gram)
    if evals.min() < -tol:
        raise ValueError("local tables have no consistent vector family "
                         f"(moment matrix eigenvalue {evals.min():.2e})")
    vecs = evecs * np.sqrt(np.clip(evals, 0.0, None))[None, :]
    if np.abs(vecs @ vecs.T - gram).max() > tol:
        raise ValueError("moment matrix factorization failed")
    return SdpSolution(vectors=vecs)


def lift_sherali_adams(ld: LocalDistributions, sol: SdpSolution,
                       product: ProductGraph):
    """Lift local distributions and vectors to the product.

    The lifted table for a set T of product vertices is the uniform
    mixture over coordinates j of the base table on the j-th projection
    of T (duplicates collapsed); vectors lift by scaled direct sum.
    Requires unit-norm base vectors so collapsed coordinates stay
    consistent.  Returns the lifted pair plus the verifier gaps.
    """
    ld.check_tables()
    if not sol.unit_norms():
        raise ValueError(
            "base vectors must be unit norm: a coordinate where two "
            "product vertices agree contributes a correlation of exactly 1"
        )
    base_n = product.base.n
    if sol.n != base_n:
        raise ValueError("solution size does not match the base graph")
    k = product.k
    nv = product.num_vertices
    all_vertices = [product.tuple_of(i) for i in range(nv)]

    tables = {}
    for size in range(1, ld.level + 1):
        for subset in itertools.combinations(all_vertices, size):
            subset = tuple(sorted(subset))
            table: dict = {}
            for j in range(k):
                proj = [x[j] for x in subset]
                collapsed = tuple(sorted(set(proj)))
                base_table = ld.table(collapsed)
                slot = {v: collapsed.index(v) for v in collapsed}
                for assign, p in base_table.items():
                    key = tuple(assign[slot[x[j]]] for x in subset)
                    table[key] = table.get(key, 0.0) + p / k
            tables[subset] = table
    lifted_ld = LocalDistributions(level=ld.level, tables=tables)

    d = sol.dim
    lifted_vecs = np.zeros((nv, k * d))
    scale = 1.0 / math.sqrt(k)
    for flat, tup in enumerate(all_vertices):
        for j, xj in enumerate(tup):
            lifted_vecs[flat, j * d:(j + 1) * d] = scale * sol.vectors[xj]
    lifted_sol = SdpSolution(vectors=lifted_vecs)

    lifted_ld.check_tables()
    index = {tup: i for i, tup in enumerate(all_vertices)}
    marginal_gap = lifted_ld.check_marginal_consistency()
    vector_gap = lifted_ld.check_vector_consistency(
        lifted_sol, vertex_index=lambda tup: index[tup])
    return lifted_ld, lifted_sol, marginal_gap, vector_gap


# -- parity-set hierarchy (Lasserre style) ----------------------------------------

@dataclass(frozen=True, eq=False)
class SetVectorSolution:
    """Level-t family of vectors indexed by vertex subsets (including the
    empty set), constrained so inner products depend only on the
    symmetric difference of the index sets."""

    level: int
    vectors: dict

    def subsets(self):
        return sorted(self.vectors.keys(), key=lambda s: (len(s), s))

    def check_delta_consistency(self, tol: float = TOL) -> float:
        """Max inner-product spread within a symmetric-difference class;
        equivalent to checking every quadruple with equal differences."""
        groups: dict = {}
        keys = self.subsets()
        for s1 in keys:
            for s2 in keys:
                delta = tuple(sorted(set(s1) ^ set(s2)))
                val = float(np.dot(self.vectors[s1], self.vectors[s2]))
                groups.setdefault(delta, []).append(val)
        worst = 0.0
        for vals in groups.values():
            worst = max(worst, max(vals) - min(vals))
        return worst


def parity_projection(subset, j: int):
    """Base vertices appearing an odd number of times among the j-th
    coordinates of a set of product vertices."""
    counts: dict = {}
    for tup in subset:
        counts[tup[j]] = counts.get(tup[j], 0) + 1
    return frozenset(v for v, c in counts.items() if c % 2 == 1)


def lasserre_from_distribution(dist: dict, n: int, level: int) -> SetVectorSolution:
    """Moment vectors of a global distribution: index-set character values
    weighted by sqrt of the probability."""
    outcomes = sorted(dist.keys())
    vectors = {}
    for size in range(level + 1):
        for subset in itertools.combinations(range(n), size):
            vec = np.array([
                math.sqrt(dist[sigma]) * np.prod([sigma[v] for v in subset])
                for sigma in outcomes
            ])
            vectors[subset] = vec
    return SetVectorSolution(level=level, vectors=vectors)


def lift_lasserre(ls: SetVectorSolution, product: ProductGraph, level: int,
                  max_sets: int = 20000) -> SetVectorSolution:
    """Lift set vectors to the product via coordinate parity sets:
    v_T = (1/sqrt(k)) (+)_j v_{T_j} with T_j the odd-multiplicity base
    vertices among the j-th coordinates."""
    if level > ls.level:
        raise ValueError(
            f"requested level {level} exceeds base solution level {ls.level}")
    k = product.k
    nv = product.num_vertices
    all_vertices = [product.tuple_of(i) for i in range(nv)]
    scale = 1.0 / math.sqrt(k)
    vectors = {}
    count = 0
    for size in range(level + 1):
        for subset in itertools.combinations(all_vertices, size):
            count += 1
            if count > max_sets:
                raise ValueError("too many product subsets at this level")
            parts = []
            for j in range(k):
                tj = tuple(sorted(parity_projection(subset, j)))
                parts.append(scale * ls.vectors[tj])
            vectors[tuple(sorted(subset))] = np.concatenate(parts)
    return SetVectorSolution(level=level, vectors=vectors)


# -- feasible-solution generators and file formats --------------------------------

def random_feasible_sdp(graph: WeightedGraph, dim: int, seed: int) -> SdpSolution:
    """Random embedding scaled onto the spread constraint."""
    rng = np.random.default_rng(seed)
    vecs = rng.standard_normal((graph.n, dim))
    sol = SdpSolution(vectors=vecs)
    s = sol.spread(graph)
    if s <= 0:
        raise RuntimeError("degenerate random embedding")
    return SdpSolution(vectors=vecs / math.sqrt(s))


def random_cut_combination(graph: WeightedGraph, cuts: int, seed: int) -> SdpSolution:
    """Nonnegative combination of cut embeddings, scaled to unit spread.

    Each coordinate is a scaled {-1,+1} labelling, so all squared
    distances form an L1 metric and satisfy every triangle inequality.
    """
    rng = np.random.default_rng(seed)
    cols = []
    for _ in range(cuts):
        labels = rng.choice([-1.0, 1.0], size=graph.n)
        while np.all(labels == labels[0]):
            labels = rng.choice([-1.0, 1.0], size=graph.n)
        cols.append(labels * math.sqrt(rng.uniform(0.1, 1.0)))
    sol = SdpSolution(vectors=np.stack(cols, axis=1))
    s = sol.spread(graph)
    if s < 1e-9:
        raise RuntimeError("degenerate cut combination; reseed")
    return SdpSolution(vectors=sol.vectors / math.sqrt(s))


def uniform_cut_distribution(n: int, subset) -> dict:
    """Distribution putting half the mass on a cut labelling and half on
    its negation (so all single-vertex marginals are uniform)."""
    inside = set(subset)
    sigma = tuple(1 if v in inside else -1 for v in range(n))
    neg = tuple(-z for z in sigma)
    return {sigma: 0.5, neg: 0.5}


def _assignment_key(assign) -> str:
    return "".join("+" if z > 0 else "-" for z in assign)


def _assignment_from_key(key: str):
    return tuple(1 if ch == "+" else -1 for ch in key)


def sdp_to_dict(sol: SdpSolution) -> dict:
    return {"d": sol.dim, "vectors": [[float(x) for x in row] for row in sol.vectors]}


def sdp_from_dict(data: dict) -> SdpSolution:
    vecs = np.asarray(data["vectors"], dtype=np.float64)
    if vecs.ndim != 2 or vecs.shape[1] != int(data["d"]):
        raise ValueError("malformed SDP solution file")
    return SdpSolution(vectors=vecs.copy())


def sa_to_dict(ld: LocalDistributions) -> dict:
    return {
        "t": ld.level,
        "dists": [
            {"T": list(subset),
             "probs": {_assignment_key(a): p for a, p in table.items()}}
            for subset, table in sorted(ld.tables.items())
        ],
    }


def sa_from_dict(data: dict) -> LocalDistributions:
    tables = {}
    for entry in data["dists"]:
        subset = tuple(sorted(int(v) for v in entry["T"]))
        tables[subset] = {
            _assignment_from_key(key): float(p)
            for key, p in entry["probs"].items()
        }
    return LocalDistributions(level=int(data["t"]), tables=tables)


def lasserre_to_dict(ls: SetVectorSolution) -> dict:
    return {
        "t": ls.level,
        "sets": [
            {"S": list(subset), "vec": [float(x) for x in ls.vectors[subset]]}
            for subset in ls.subsets()
        ],
    }


def lasserre_from_dict(data: dict) -> SetVectorSolution:
    vectors = {}
    for entry in data["sets"]:
        subset = tuple(sorted(int(v) for v in entry["S"]))
        vectors[subset] = np.asarray(entry["vec"], dtype=np.float64)
    return SetVectorSolution(level=int(data["t"]), vectors=vectors)


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def save_json(data: dict, path):
    with open(path, "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=2)
        fh.write("\n")
