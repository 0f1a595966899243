"""Graph families and sampling estimators for the tightness experiments.

The necklace graph is the quotient of the R-cube (minus the two
monochromatic strings) by cyclic rotation, with edge masses
proportional to the number of cube edges joining two classes.  The
consecutive-ones predicate on tuples of classes drives the sampled
influence experiments at sizes where dense tables are impossible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import (ProductGraph, WeightedGraph, _from_arrays, cartesian_power,
                     complete_graph, cycle_graph, path_graph)

NECKLACE_MAX_R = 20


def build_qary_cube(q: int, k: int) -> ProductGraph:
    """k-fold power of the complete graph on q vertices."""
    if q < 2:
        raise ValueError("q must be >= 2")
    return cartesian_power(complete_graph(q), k)


def _rotate1(values: np.ndarray, width: int) -> np.ndarray:
    mask = (1 << width) - 1
    return ((values >> 1) | ((values & 1) << (width - 1))) & mask


def _canonical_rotations(width: int) -> np.ndarray:
    """Canonical (minimal) rotation of every width-bit string."""
    total = 1 << width
    strings = np.arange(total, dtype=np.int64)
    canon = strings.copy()
    cur = strings.copy()
    for _ in range(width - 1):
        cur = _rotate1(cur, width)
        canon = np.minimum(canon, cur)
    return canon


def build_necklace(r: int) -> WeightedGraph:
    """Quotient of the r-cube minus monochromatic strings by rotation.

    Vertices are rotation classes (canonical representative = minimal
    rotation); the mass of a class pair is proportional to the number of
    cube edges between the classes, and the vertex measure follows from
    consistency.
    """
    if r < 3:
        raise ValueError("necklace needs r >= 3")
    if r > NECKLACE_MAX_R:
        raise ValueError(f"necklace limited to r <= {NECKLACE_MAX_R}")
    total = 1 << r
    mono = total - 1
    canon = _canonical_rotations(r)
    strings = np.arange(total, dtype=np.int64)
    keep = (strings != 0) & (strings != mono)
    classes = np.unique(canon[keep])
    class_of = np.searchsorted(classes, canon)

    survivors = strings[keep]
    counts: dict = {}
    for b in range(r):
        flipped = survivors ^ (np.int64(1) << b)
        ok = (flipped != 0) & (flipped != mono)
        a = class_of[survivors[ok]]
        c = class_of[flipped[ok]]
        lo = np.minimum(a, c)
        hi = np.maximum(a, c)
        pair_ids = lo * len(classes) + hi
        uniq, mult = np.unique(pair_ids, return_counts=True)
        for pid, m in zip(uniq, mult):
            counts[int(pid)] = counts.get(int(pid), 0) + int(m)
    n_cls = len(classes)
    eu = np.array([pid // n_cls for pid in sorted(counts)], dtype=np.int64)
    ev = np.array([pid % n_cls for pid in sorted(counts)], dtype=np.int64)
    # each cube edge was visited once from each endpoint
    ew = np.array([counts[pid] / 2.0 for pid in sorted(counts)])
    return _from_arrays(n_cls, eu, ev, ew, normalize=True)


def necklace_classes(r: int) -> np.ndarray:
    """Canonical representatives of the rotation classes, ascending."""
    total = 1 << r
    canon = _canonical_rotations(r)
    strings = np.arange(total, dtype=np.int64)
    keep = (strings != 0) & (strings != total - 1)
    return np.unique(canon[keep])


def _has_cyclic_run(values: np.ndarray, r: int, run: int) -> np.ndarray:
    """Whether each r-bit string has >= run cyclically consecutive ones."""
    acc = values.copy()
    cur = values.copy()
    for _ in range(run - 1):
        cur = _rotate1(cur, r)
        acc = acc & cur
    return acc != 0


@dataclass(frozen=True, eq=False)
class ConsecutiveOnesFunction:
    """Boolean predicate on tuples of necklace classes: +1 iff some
    coordinate's class has ceil(log2(k*r)) cyclically consecutive ones."""

    graph: WeightedGraph
    r: int
    k: int
    run_length: int
    class_has_run: np.ndarray

    def __post_init__(self):
        self.class_has_run.setflags(write=False)

    def __call__(self, tup) -> float:
        idx = np.asarray(tup, dtype=np.int64)
        return 1.0 if bool(self.class_has_run[idx].any()) else -1.0

    def evaluate_batch(self, tuples: np.ndarray) -> np.ndarray:
        hits = self.class_has_run[tuples].any(axis=1)
        return np.where(hits, 1.0, -1.0)


def consecutive_ones_function(r: int, k: int,
                              graph: WeightedGraph | None = None) -> ConsecutiveOnesFunction:
    if k * r < 4:
        raise ValueError("need k*r >= 4")
    if graph is None:
        graph = build_necklace(r)
    run = math.ceil(math.log2(k * r))
    reps = necklace_classes(r)
    if len(reps) != graph.n:
        raise ValueError("graph does not match necklace(r)")
    return ConsecutiveOnesFunction(
        graph=graph, r=r, k=k, run_length=run,
        class_has_run=_has_cyclic_run(reps, r, run),
    )


# -- sampling estimators ---------------------------------------------------------

@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    half_width: float
    samples: int


def influence_monte_carlo(fn, graph: WeightedGraph, k: int, j: int,
                          samples: int, seed: int) -> MonteCarloEstimate:
    """Unbiased sampled estimate of the directional energy along j.

    Draws the off-coordinate tuple from the product vertex measure and a
    base edge from the edge measure; averages half the squared function
    difference across the edge.  ``fn`` maps an index tuple to {-1,+1};
    an ``evaluate_batch`` method is used when present.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    xs = rng.choice(graph.n, size=(samples, k), p=graph.pi)
    edges = rng.choice(graph.num_edges, size=samples, p=graph.edge_w)
    xu = xs.copy()
    xv = xs.copy()
    xu[:, j] = graph.edge_u[edges]
    xv[:, j] = graph.edge_v[edges]
    if hasattr(fn, "evaluate_batch"):
        fu = fn.evaluate_batch(xu)
        fv = fn.evaluate_batch(xv)
    else:
        fu = np.array([fn(tuple(row)) for row in xu])
        fv = np.array([fn(tuple(row)) for row in xv])
    z = 0.5 * (fu - fv) ** 2
    est = float(z.mean())
    spread = float(z.std(ddof=1)) if samples > 1 else 0.0
    return MonteCarloEstimate(
        estimate=est,
        half_width=1.96 * spread / math.sqrt(samples),
        samples=samples,
    )


def probability_minus_one(fn, graph: WeightedGraph, k: int,
                          samples: int, seed: int) -> MonteCarloEstimate:
    """Sampled probability that the predicate evaluates to -1 under the
    product vertex measure."""
    rng = np.random.default_rng(seed)
    xs = rng.choice(graph.n, size=(samples, k), p=graph.pi)
    if hasattr(fn, "evaluate_batch"):
        vals = fn.evaluate_batch(xs)
    else:
        vals = np.array([fn(tuple(row)) for row in xs])
    hits = (vals < 0).astype(np.float64)
    p = float(hits.mean())
    se = math.sqrt(max(p * (1.0 - p), 1e-300) / samples)
    return MonteCarloEstimate(estimate=p, half_width=se, samples=samples)


# -- builtin registry -------------------------------------------------------------

def named_graph(spec: str) -> WeightedGraph:
    """Builtin graphs: k2 | kq:<q> | cycle:<n> | path:<n> | necklace:<R>."""
    name, _, arg = spec.partition(":")
    if name == "k2":
        return complete_graph(2)
    if name == "kq":
        return complete_graph(int(arg))
    if name == "cycle":
        return cycle_graph(int(arg))
    if name == "path":
        return path_graph(int(arg))
    if name == "necklace":
        return build_necklace(int(arg))
    raise ValueError(f"unknown builtin graph {spec!r}")
