"""Hot numeric kernels, each in an njit and a pure-numpy variant.

Two loops dominate runtime: the exhaustive cut scan over all 2^n vertex
subsets (Gray-code incremental updates in the njit variant, chunked
bit-matrix evaluation in the numpy one) and the exhaustive scan of
ordered vertex triples for squared-distance triangle violations.

Both variants of a kernel feed the same exact-recompute selection step,
so results agree across backends to the stated tolerances.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

SCAN_SLACK = 1e-11
CANDIDATE_CAP = 1 << 16


# -- subset cut scan ----------------------------------------------------------

@njit(cache=True)
def _gray_min_ratio(n, indptr, nbr, wts, pi):
    total = np.int64(1) << n
    in_s = np.zeros(n, dtype=np.bool_)
    cut = 0.0
    vol = 0.0
    size = 0
    best = np.inf
    for i in range(1, total):
        b = i & (-i)
        v = 0
        while (np.int64(1) << v) != b:
            v += 1
        if in_s[v]:
            for p in range(indptr[v], indptr[v + 1]):
                if in_s[nbr[p]]:
                    cut += wts[p]
                else:
                    cut -= wts[p]
            in_s[v] = False
            vol -= pi[v]
            size -= 1
        else:
            for p in range(indptr[v], indptr[v + 1]):
                if in_s[nbr[p]]:
                    cut -= wts[p]
                else:
                    cut += wts[p]
            in_s[v] = True
            vol += pi[v]
            size += 1
        if size == 0 or size == n:
            continue
        ratio = 0.25 * cut / (vol * (1.0 - vol))
        if ratio < best:
            best = ratio
    return best


@njit(cache=True)
def _gray_candidates(n, indptr, nbr, wts, pi, threshold, out):
    total = np.int64(1) << n
    in_s = np.zeros(n, dtype=np.bool_)
    cut = 0.0
    vol = 0.0
    size = 0
    count = 0
    for i in range(1, total):
        b = i & (-i)
        v = 0
        while (np.int64(1) << v) != b:
            v += 1
        if in_s[v]:
            for p in range(indptr[v], indptr[v + 1]):
                if in_s[nbr[p]]:
                    cut += wts[p]
                else:
                    cut -= wts[p]
            in_s[v] = False
            vol -= pi[v]
            size -= 1
        else:
            for p in range(indptr[v], indptr[v + 1]):
                if in_s[nbr[p]]:
                    cut -= wts[p]
                else:
                    cut += wts[p]
            in_s[v] = True
            vol += pi[v]
            size += 1
        if size == 0 or size == n:
            continue
        ratio = 0.25 * cut / (vol * (1.0 - vol))
        if ratio <= threshold:
            if count < out.shape[0]:
                out[count] = i ^ (i >> 1)
            count += 1
    return count


def subset_scan_numba(n, indptr, nbr, wts, pi):
    """Min cut ratio and near-minimal subset masks via a Gray-code walk."""
    best = _gray_min_ratio(n, indptr, nbr, wts, pi)
    out = np.zeros(CANDIDATE_CAP, dtype=np.int64)
    count = _gray_candidates(n, indptr, nbr, wts, pi, best + SCAN_SLACK, out)
    if count > CANDIDATE_CAP:
        raise RuntimeError("degenerate cut-ratio plateau; too many candidates")
    return best, out[:count]


def subset_scan_numpy(n, edge_u, edge_v, edge_w, pi, chunk=1 << 18):
    """Same scan with chunked vectorized evaluation of every subset."""
    total = 1 << n
    shifts = np.arange(n, dtype=np.int64)
    best = np.inf
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = ((masks[:, None] >> shifts[None, :]) & 1).astype(np.float64)
        vol = bits @ pi
        cut = np.zeros(len(masks))
        for u, v, w in zip(edge_u, edge_v, edge_w):
            cut += w * np.abs(bits[:, u] - bits[:, v])
        proper = (masks != total - 1)
        ratio = np.where(proper, 0.25 * cut / np.maximum(vol * (1.0 - vol), 1e-300), np.inf)
        m = float(ratio.min())
        if m < best:
            best = m
    cands = []
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = ((masks[:, None] >> shifts[None, :]) & 1).astype(np.float64)
        vol = bits @ pi
        cut = np.zeros(len(masks))
        for u, v, w in zip(edge_u, edge_v, edge_w):
            cut += w * np.abs(bits[:, u] - bits[:, v])
        proper = (masks != total - 1)
        ratio = np.where(proper, 0.25 * cut / np.maximum(vol * (1.0 - vol), 1e-300), np.inf)
        hit = masks[ratio <= best + SCAN_SLACK]
        cands.append(hit)
        if sum(len(c) for c in cands) > CANDIDATE_CAP:
            raise RuntimeError("degenerate cut-ratio plateau; too many candidates")
    return best, np.concatenate(cands) if cands else np.zeros(0, dtype=np.int64)


def subset_scan(graph, backend=None):
    """Dispatch the subset scan; returns (approx min ratio, candidate masks)."""
    use = USE_NUMBA if backend is None else (backend == "numba")
    if use:
        indptr, nbr, wts = graph.csr
        return subset_scan_numba(graph.n, indptr, nbr, wts, graph.pi)
    return subset_scan_numpy(graph.n, graph.edge_u, graph.edge_v,
                             graph.edge_w, graph.pi)


# -- triangle inequality scan --------------------------------------------------

@njit(cache=True)
def _triangle_full(dist, tol, out):
    n = dist.shape[0]
    count = 0
    worst = 0.0
    for x in range(n):
        for y in range(n):
            dxy = dist[x, y]
            for z in range(n):
                s = dist[x, z] - dxy - dist[y, z]
                if s > tol:
                    if count < out.shape[0]:
                        out[count, 0] = x
                        out[count, 1] = y
                        out[count, 2] = z
                    count += 1
                    if s > worst:
                        worst = s
    return count, worst


def triangle_scan_numba(dist, tol, max_report=64):
    out = np.zeros((max_report, 3), dtype=np.int64)
    count, worst = _triangle_full(dist, tol, out)
    return count, worst, out[: min(count, max_report)]


def triangle_scan_numpy(dist, tol, max_report=64, block=64):
    n = dist.shape[0]
    count = 0
    worst = 0.0
    rows = []
    for x0 in range(0, n, block):
        xs = np.arange(x0, min(x0 + block, n))
        slack = dist[xs][:, None, :] - dist[xs][:, :, None] - dist[None, :, :]
        bad = slack > tol
        c = int(bad.sum())
        if c:
            w = float(slack[bad].max())
            worst = max(worst, w)
            if len(rows) < max_report:
                xi, yi, zi = np.nonzero(bad)
                take = min(max_report - len(rows), len(xi))
                for t in range(take):
                    rows.append((int(xs[xi[t]]), int(yi[t]), int(zi[t])))
        count += c
    trips = np.array(rows, dtype=np.int64).reshape(-1, 3)
    return count, worst, trips


def triangle_scan(dist, tol, backend=None, max_report=64):
    use = USE_NUMBA if backend is None else (backend == "numba")
    if use:
        return triangle_scan_numba(dist, tol, max_report=max_report)
    return triangle_scan_numpy(dist, tol, max_report=max_report)
