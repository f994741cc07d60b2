"""Semi-infinite chain edge states and the bulk Zak phase.

A semi-infinite chain with left boundary spring k31 hosts a genuine edge
state iff the quadratic

    (k31-k2)^2 k1 a^2 + [k2 (k31-k2)^2 - k2^3] a - k1 k2^2 = 0

has a root with |a| < 1.  The branch sign sigma is recovered by
substituting the root back into the signed boundary identity.  The Zak
phase of the bulk bands is computed with a gauge-invariant Wilson loop;
its closed form is pi for k1 < k2 and 0 for k1 > k2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import BulkParams, cell_vectors, omega2_of_a, solve_decay
from .errors import GapClosed

SIGMA_MATCH_TOL = 1e-10


@dataclass(frozen=True)
class SemiInfiniteRoot:
    a_tilde: float
    sigma: int
    omega2: float
    location: Optional[str]  # "InGap", "AboveOptical", or None
    k32_match: float  # matching right stiffness (may be +inf)


@dataclass(frozen=True)
class ZakResult:
    gamma_numeric: float
    gamma_closed: float
    grid_points: int


def _boundary_sign_residual(k1: float, k2: float, k31: float,
                            a: float, sigma: int) -> float:
    """Residual of the signed identity fixing sigma for a given root."""
    fa = cmath.sqrt(complex(k1 + k2 * a))
    finv = cmath.sqrt(complex(k1 + k2 / a))
    if a * finv == 0:
        return math.inf
    s = math.copysign(1.0, k1 + k2 * a) if k1 + k2 * a != 0 else 1.0
    rhs = sigma * s * k2 * fa / (a * finv)
    return abs((k31 - k2) - rhs)


def _resolve_sigma(k1: float, k2: float, k31: float, a: float) -> Optional[int]:
    best = None
    for sigma in (1, -1):
        r = _boundary_sign_residual(k1, k2, k31, a, sigma)
        if r <= SIGMA_MATCH_TOL * max(1.0, k2):
            if best is None or r < best[1]:
                best = (sigma, r)
    return best[0] if best else None


def _location(p: BulkParams, omega2: float) -> Optional[str]:
    lo, hi = sorted((2 * p.k1, 2 * p.k2))
    if lo < omega2 < hi:
        return "InGap"
    if omega2 > 2 * p.k1 + 2 * p.k2:
        return "AboveOptical"
    return None


def k32_match_of_root(k1: float, k2: float, a: float, sigma: int,
                      omega2: float) -> float:
    """Matching right boundary stiffness k32 = omega^2 - k1 + k1 v11/v12.

    Returns +inf when v12(a) = 0 (the k31 = k2 special root a = -k1/k2).
    """
    te = solve_decay(BulkParams(k1, k2), omega2)
    if te.degenerate:
        return math.nan
    cv = cell_vectors(BulkParams(k1, k2), te)
    v11, v12 = cv.v1
    if abs(v12) < 1e-14 * max(1.0, abs(v11)):
        return math.inf
    ratio = v11 / v12
    return float(omega2 - k1 + k1 * ratio.real)


def solve_semi_infinite(k1: float, k2: float, k31: float) -> list[SemiInfiniteRoot]:
    """All decaying roots (|a| < 1) of the left semi-infinite chain."""
    d = k31 - k2
    roots: list[float] = []
    locations_forced: Optional[str] = None

    if d == 0.0:
        # Degenerate linear equation: the only root is a = -k1/k2, at
        # the exact midgap omega^2 = k1 + k2 where the sigma branches
        # coincide (sigma = +1 by convention).
        a = -k1 / k2
        if abs(a) >= 1.0:
            return []
        p = BulkParams(k1, k2)
        return [SemiInfiniteRoot(a, 1, k1 + k2, _location(p, k1 + k2),
                                 math.inf)]
    if abs(abs(d) - k2) < 1e-14 * max(1.0, k2):
        # k31 in {0, 2k2}: roots are exactly +-1, no decaying state.
        out = []
        for a in (1.0, -1.0):
            sigma = _resolve_sigma(k1, k2, k31, a)
            w2 = omega2_of_a(BulkParams(k1, k2), a, sigma or 1)
            out.append(SemiInfiniteRoot(a, sigma or 1, w2, None, math.nan))
        return out
    else:
        A = d * d * k1
        B = k2 * d * d - k2 ** 3
        C = -k1 * k2 * k2
        disc = B * B - 4 * A * C
        if disc < 0:
            return []
        sq = math.sqrt(disc)
        # Stable form: larger-magnitude root first, companion by product.
        q = -(B + math.copysign(sq, B)) / 2
        roots = [q / A, C / q] if q != 0 else [0.0, 0.0]

    p = BulkParams(k1, k2)
    out = []
    for a in roots:
        if a == 0.0 or abs(a) >= 1.0:
            continue
        sigma = _resolve_sigma(k1, k2, k31, a)
        if sigma is None:
            continue
        w2 = omega2_of_a(p, a, sigma)
        loc = locations_forced or _location(p, w2)
        if d == 0.0:
            k32m = math.inf
        else:
            k32m = k32_match_of_root(k1, k2, a, sigma, w2)
        out.append(SemiInfiniteRoot(a, sigma, w2, loc, k32m))
    out.sort(key=lambda r: r.omega2)
    return out


def equation_residual(k1: float, k2: float, k31: float, a: float) -> float:
    """Residual of the edge-state quadratic at a (testing hook)."""
    d = k31 - k2
    return abs(d * d * k1 * a * a + (k2 * d * d - k2 ** 3) * a - k1 * k2 * k2)


def count_edge_states_semi(k1: float, k2: float, k31: float) -> int:
    """Number of decaying left edge states of the semi-infinite chain."""
    return len([r for r in solve_semi_infinite(k1, k2, k31)
                if r.location is not None])


def _bloch_vector(k1: float, k2: float, theta: float) -> np.ndarray:
    """Normalized optical-branch Bloch eigenvector at angle theta."""
    z = k1 + k2 * cmath.exp(1j * theta)
    v = np.array([-math.sqrt(k1 * k1 + k2 * k2 + 2 * k1 * k2 * math.cos(theta)),
                  0.0], dtype=complex)
    v[1] = z
    return v / np.linalg.norm(v)


def zak_phase(k1: float, k2: float, grid_points: int = 512) -> ZakResult:
    """Gauge-invariant Wilson loop over a closed theta grid on [-pi, pi]."""
    if abs(k1 - k2) <= 1e-9:
        raise GapClosed("k1 = k2: no gap, Zak phase undefined")
    thetas = np.linspace(-math.pi, math.pi, grid_points + 1)
    vs = [_bloch_vector(k1, k2, t) for t in thetas[:-1]]
    vs.append(vs[0])  # close the loop
    total = 0.0
    for va, vb in zip(vs[:-1], vs[1:]):
        total -= cmath.phase(np.vdot(va, vb))
    gamma = total % (2 * math.pi)
    closed = math.pi if k1 < k2 else 0.0
    return ZakResult(gamma_numeric=gamma, gamma_closed=closed,
                     grid_points=grid_points)
