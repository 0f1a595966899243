"""Influence analysis on product graphs: the entropy-based lemma chain,
max-influence reports, and constructive junta extraction.

The central inequality lower-bounds the product energy of a function h
by ``(alpha/2k) * (sqrt(t) log(t) |h|_1 + log(t) |h|_2^2 - |h|_2^2 log |h|_2^2)``
for any ``0 < t <= 1/e^2``, where ``alpha`` is a valid log-Sobolev
constant of the base graph.  Summed over the orthogonal coordinate
components of a Boolean function it yields both the max-influence lower
bound and the junta extraction threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functions import Decomposition, FunctionTable
from .spectral import (FourierCoefficients, SpectralBasis, decompose,
                       dirichlet_form, eigendecompose, fourier_transform,
                       influence_profile, inverse_transform)

T_MAX = math.exp(-2.0)
SLACK = 1e-9


def _entropy_rhs(alpha, k, t, l1, l2_sq):
    xlogx = l2_sq * math.log(l2_sq) if l2_sq > 0 else 0.0
    return (alpha / (2.0 * k)) * (
        math.sqrt(t) * math.log(t) * l1 + math.log(t) * l2_sq - xlogx
    )


@dataclass(frozen=True)
class LemmaCheck:
    lhs: float
    rhs: float
    ok: bool


def main_lemma_check(h: FunctionTable, t: float, alpha: float) -> LemmaCheck:
    """Evaluate both sides of the entropy lemma for an arbitrary table."""
    if not (0.0 < t <= T_MAX + 1e-15):
        raise ValueError(f"t must lie in (0, 1/e^2], got {t}")
    lhs = dirichlet_form(h)
    rhs = _entropy_rhs(alpha, h.k, t, h.norm1(), h.norm2_sq())
    return LemmaCheck(lhs=lhs, rhs=rhs, ok=bool(lhs >= rhs - SLACK))


@dataclass(frozen=True)
class CorollaryRow:
    j: int
    lhs: float
    rhs: float
    ok: bool


def corollary_check(f: FunctionTable, t: float, alpha: float, *,
                    basis: SpectralBasis | None = None,
                    dec: Decomposition | None = None) -> list:
    """Per-coordinate lemma applied to the components of a Boolean f,
    with the 1-norm replaced by the coordinate variance."""
    if not (0.0 < t <= T_MAX + 1e-15):
        raise ValueError(f"t must lie in (0, 1/e^2], got {t}")
    if not f.boolean_pm1:
        raise ValueError("corollary check requires a {-1,+1}-valued function")
    if basis is None:
        basis = eigendecompose(f.product.base)
    if dec is None:
        dec = decompose(f, basis)
    rows = []
    for j, part in enumerate(dec.parts):
        lhs = dirichlet_form(part)
        rhs = _entropy_rhs(alpha, f.k, t, f.variance_along(j), part.norm2_sq())
        rows.append(CorollaryRow(j=j, lhs=lhs, rhs=rhs, ok=bool(lhs >= rhs - SLACK)))
    return rows


# -- max influence report --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class InfluenceReport:
    """Directional energies of a Boolean cut with the scale the
    max-influence theorem predicts (no hidden constant is asserted)."""

    influences: np.ndarray
    max_influence: float
    mean_influence: float
    variance: float
    bound_expr: float
    ratio: float

    def __post_init__(self):
        self.influences.setflags(write=False)


def kkl_report(f: FunctionTable, alpha: float) -> InfluenceReport:
    """Influence profile of f plus the ratio of its max influence to
    ``alpha * var(f) * log(k) / k``."""
    if not f.boolean_pm1:
        raise ValueError("influence report requires a {-1,+1}-valued function")
    if f.k < 2:
        raise ValueError("influence report needs k >= 2")
    var = f.variance()
    if var <= 0.0:
        raise ValueError("constant function; influence report undefined")
    infl = influence_profile(f)
    max_inf = float(infl.max())
    mean_inf = float(infl.mean())
    if max_inf < mean_inf - 1e-12:
        raise AssertionError("max influence fell below the mean influence")
    bound = alpha * var * math.log(f.k) / f.k
    return InfluenceReport(
        influences=infl,
        max_influence=max_inf,
        mean_influence=mean_inf,
        variance=var,
        bound_expr=bound,
        ratio=max_inf / bound,
    )


# -- junta extraction --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class JuntaResult:
    """Output of the junta extraction: coordinates kept, the rounded
    Boolean junta, its squared distance from the input, the variance
    threshold used, and the guaranteed bound on the junta size
    (exp(50 k I / (eps alpha)), also carried in log form)."""

    junta: tuple
    g_tilde: FunctionTable
    g_real: FunctionTable
    distance: float
    threshold: float
    size_bound_log: float
    size_bound: float
    dirichlet: float
    coordinate_variances: np.ndarray

    def __post_init__(self):
        self.coordinate_variances.setflags(write=False)


def _truncate_to_junta(f, basis, junta):
    """Project onto multi-indices supported inside the junta coordinates."""
    coeffs = fourier_transform(f, basis)
    keep = np.ones(f.product.shape, dtype=bool)
    grids = np.indices(f.product.shape)
    for j in range(f.k):
        if j not in junta:
            keep &= grids[j] == 0
    kept = np.where(keep, coeffs.coeffs, 0.0)
    return inverse_transform(
        FourierCoefficients(basis=basis, product=f.product, coeffs=kept))


def friedgut_extract(f: FunctionTable, epsilon: float, alpha: float,
                     phi: float, *, basis: SpectralBasis | None = None) -> JuntaResult:
    """Extract a Boolean junta within squared distance epsilon of f.

    Coordinates are kept when their variance clears the threshold
    ``V = exp(F(eps/4))`` with
    ``F(e) = 2(1+1/e) log(2 phi e / (e k I)) - 2 k I / (alpha e)``;
    the junta is the sign of the spectral truncation of f to those
    coordinates (sign(0) = +1).
    """
    if not f.boolean_pm1:
        raise ValueError("junta extraction requires a {-1,+1}-valued function")
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    if basis is None:
        basis = eigendecompose(f.product.base)
    k = f.k
    var_j = np.array([f.variance_along(j) for j in range(k)])
    energy = dirichlet_form(f)
    variance = f.variance()

    if variance <= 1e-15:
        constant = 1.0 if f.mean() >= 0 else -1.0
        g_tilde = f.with_values(np.full(f.product.num_vertices, constant))
        return JuntaResult(
            junta=(), g_tilde=g_tilde, g_real=g_tilde, distance=0.0,
            threshold=math.inf, size_bound_log=0.0, size_bound=1.0,
            dirichlet=energy, coordinate_variances=var_j,
        )
    if energy <= 0.0:
        raise AssertionError("non-constant function with zero energy on a "
                             "connected graph")

    eps_round = epsilon / 4.0
    f_of_eps = (2.0 * (1.0 + 1.0 / math.e)
                * math.log(2.0 * phi * eps_round / (math.e * k * energy))
                - 2.0 * k * energy / (alpha * eps_round))
    threshold = math.exp(f_of_eps)
    junta = tuple(sorted(int(j) for j in np.flatnonzero(var_j >= threshold)))

    g_real = _truncate_to_junta(f, basis, set(junta))
    g_vals = np.where(g_real.values >= 0.0, 1.0, -1.0)
    g_tilde = f.with_values(g_vals)

    diff = f.values - g_tilde.values
    distance = float(np.sum(f.product.pi_product() * diff * diff))
    real_diff = f.values - g_real.values
    real_distance = float(np.sum(f.product.pi_product() * real_diff * real_diff))

    size_bound_log = 50.0 * k * energy / (epsilon * alpha)
    try:
        size_bound = math.exp(size_bound_log)
    except OverflowError:
        size_bound = math.inf

    if distance > epsilon + SLACK:
        raise AssertionError(
            f"junta distance {distance} exceeds epsilon {epsilon}")
    if len(junta) > 0 and math.log(len(junta)) > size_bound_log + SLACK:
        raise AssertionError("junta size exceeds its guaranteed bound")
    if distance > 4.0 * real_distance + SLACK:
        raise AssertionError("sign rounding lost more than a factor of 4")

    # the two intermediate bounds behind the threshold choice
    dec_sorted = decompose(f, basis, order=list(np.argsort(-var_j, kind="stable")))
    outside = sum(dirichlet_form(dec_sorted.parts[j])
                  for j in range(k) if j not in junta)
    if outside > energy + SLACK:
        raise AssertionError("off-junta component energy exceeds total energy")
    if float(var_j.sum()) > (k / (2.0 * phi)) * energy + SLACK:
        raise AssertionError("coordinate variances exceed the energy bound")

    return JuntaResult(
        junta=junta, g_tilde=g_tilde, g_real=g_real, distance=distance,
        threshold=threshold, size_bound_log=size_bound_log,
        size_bound=size_bound, dirichlet=energy, coordinate_variances=var_j,
    )


def is_junta_on(f: FunctionTable, coords) -> bool:
    """True when the table is constant along every coordinate outside
    ``coords``."""
    coords = set(coords)
    tens = f.as_tensor()
    others = [j for j in range(f.k) if j not in coords]
    if not others:
        return True
    moved = np.moveaxis(tens, sorted(coords), range(len(coords)))
    flat = moved.reshape(f.product.base.n ** len(coords), -1)
    return bool(np.all(flat == flat[:, :1]))
