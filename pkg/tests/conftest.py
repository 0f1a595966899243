"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the library's optimized paths:
conductance by itertools subset enumeration of the set formula,
coordinate variance by explicit conditional means, and component
functions by dense centering/averaging instead of the spectral filter.
"""

import itertools

import numpy as np
import pytest

import boxprod as bp


@pytest.fixture(scope="session")
def k2():
    return bp.complete_graph(2)


@pytest.fixture(scope="session")
def k3():
    return bp.complete_graph(3)


@pytest.fixture(scope="session")
def p3():
    return bp.path_graph(3)


@pytest.fixture(scope="session")
def c5():
    return bp.cycle_graph(5)


def naive_conductance(graph):
    """Set-formula conductance by explicit subset enumeration."""
    best = np.inf
    best_set = None
    vertices = list(range(graph.n))
    for size in range(1, graph.n):
        for subset in itertools.combinations(vertices, size):
            inside = set(subset)
            cut = sum(
                w for u, v, w in zip(graph.edge_u, graph.edge_v, graph.edge_w)
                if (u in inside) != (v in inside)
            )
            vol_s = sum(graph.pi[v] for v in inside)
            vol_c = sum(graph.pi[v] for v in vertices if v not in inside)
            ratio = 0.25 * cut / (vol_s * vol_c)
            if ratio < best - 1e-15:
                best = ratio
                best_set = subset
    return best, best_set


def naive_variance_along(f, j):
    """Coordinate variance via explicit conditional means per fiber."""
    n = f.product.base.n
    pi = f.product.base.pi
    tens = np.moveaxis(f.as_tensor(), j, 0)
    total = 0.0
    for rest_idx in np.ndindex(*tens.shape[1:]):
        fiber = tens[(slice(None),) + rest_idx]
        weight = np.prod([pi[i] for i in rest_idx]) if rest_idx else 1.0
        m1 = float(pi @ fiber)
        m2 = float(pi @ (fiber * fiber))
        total += weight * (m2 - m1 * m1)
    return total


def naive_component(f, j, order=None):
    """Component j by dense centering + trailing-coordinate averaging."""
    k = f.k
    order = list(range(k)) if order is None else list(order)
    pos = order.index(j)
    pi = f.product.base.pi
    tens = f.as_tensor()
    centered = tens - np.tensordot(pi, tens, axes=(0, j)).reshape(
        tens.shape[:j] + (1,) + tens.shape[j + 1:])
    out = centered
    for later in order[pos + 1:]:
        mean = np.tensordot(pi, out, axes=(0, later))
        out = np.broadcast_to(
            np.expand_dims(mean, later), out.shape)
    return out.reshape(-1)


def product_pi(f):
    return f.product.pi_product()
