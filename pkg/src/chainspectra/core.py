"""Transfer-matrix algebra of the infinite diatomic chain.

The chain alternates bond stiffnesses k1 and k2 with unit masses.  A unit
cell holds two sites; displacements of adjacent cells are related by a 2x2
transfer matrix T(omega).  Its eigenvalue a (|a| <= 1 by convention)
encodes spatial decay of gap modes (|a| < 1) or the Bloch phase of band
modes (a = e^{i theta}).  Everything here is closed-form and stateless.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateTransfer, InvalidA

# Relative tolerance for declaring a band-edge (a = +-1) degeneracy.
DEGENERATE_RTOL = 1e-9


@dataclass(frozen=True)
class BulkParams:
    """Bulk stiffness pair of the infinite chain."""

    k1: float
    k2: float

    def __post_init__(self) -> None:
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError("stiffnesses must be positive")

    def band_edges(self) -> list[float]:
        """Sorted distinct band-edge values of omega^2."""
        edges = {0.0, 2 * self.k1, 2 * self.k2, 2 * self.k1 + 2 * self.k2}
        return sorted(edges)

    def band_intervals(self) -> list[tuple[float, float]]:
        """The two closed bands [0, 2kmin] and [2kmax, 2k1+2k2]."""
        lo, hi = sorted((self.k1, self.k2))
        return [(0.0, 2 * lo), (2 * hi, 2 * lo + 2 * hi)]

    def in_band(self, omega2: float) -> bool:
        return any(lo <= omega2 <= hi for lo, hi in self.band_intervals())


@dataclass(frozen=True)
class TransferEigen:
    """Decay factor a, branch sign sigma and the frequency they encode."""

    a: complex
    sigma: int
    omega2: float
    theta: Optional[float] = None  # angle in (0, pi] when |a| = 1
    degenerate: bool = False  # a = +-1 (band edge)

    @property
    def on_circle(self) -> bool:
        return self.theta is not None


@dataclass(frozen=True)
class CellVectors:
    """Eigenvectors of T for eigenvalues a and 1/a.

    Components may lie on the imaginary axis (negative radicands for gap
    modes with k1 < k2); they are stored as complex numbers and
    `imaginary_axis` flags that case.  All downstream boundary-condition
    ratios are then real.
    """

    v1: np.ndarray
    v2: np.ndarray
    imaginary_axis: bool = False


def transfer_matrix(p: BulkParams, omega2: float) -> np.ndarray:
    """T(omega) relating (u_{2m+1}, u_{2m+2}) to the next cell."""
    w = omega2 - p.k1 - p.k2
    return np.array(
        [
            [-p.k1 * p.k1, -p.k1 * w],
            [p.k1 * w, w * w - p.k2 * p.k2],
        ]
    ) / (p.k1 * p.k2)


def _omega2_of_a(p: BulkParams, a: complex, sigma: int) -> complex:
    prod = (p.k1 + p.k2 * a) * (p.k1 + p.k2 / a)
    return p.k1 + p.k2 + sigma * np.sqrt(complex(prod))


def omega2_of_a(p: BulkParams, a: complex, sigma: int) -> float:
    """omega^2 = k1 + k2 + sigma * sqrt((k1 + k2 a)(k1 + k2 / a))."""
    return float(_omega2_of_a(p, a, sigma).real)


def solve_decay(p: BulkParams, omega2: float) -> TransferEigen:
    """Roots of the lambda-quadratic at omega2; returns the |a| <= 1 root.

    lambda^2 + B lambda + 1 = 0 with
    B = (-omega^4 + 2 omega^2 (k1+k2) - 2 k1 k2) / (k1 k2) = -tr T(omega).
    """
    w = omega2 - p.k1 - p.k2
    B = (p.k1**2 + p.k2**2 - w * w) / (p.k1 * p.k2)
    sigma = 1 if w >= 0 else -1

    scale = max(1.0, omega2)
    degenerate = any(
        abs(omega2 - e) <= DEGENERATE_RTOL * scale for e in p.band_edges()
    )

    if abs(B) <= 2.0:
        # In band: conjugate pair on the unit circle.
        theta = math.acos(min(1.0, max(-1.0, -B / 2.0)))
        if theta == 0.0:
            theta = None if degenerate else 0.0  # a = +1 edge
            a = complex(1.0, 0.0)
        else:
            a = cmath.exp(1j * theta)
        if degenerate:
            a = complex(round(a.real), 0.0)
            theta = math.pi if a.real < 0 else None
        return TransferEigen(a=a, sigma=sigma, omega2=omega2, theta=theta,
                             degenerate=degenerate)

    # Out of band: real reciprocal pair.  Compute the larger-magnitude root
    # first to avoid cancellation, then its companion by the unit product.
    big = -(B + math.copysign(math.sqrt(B * B - 4.0), B)) / 2.0
    a = complex(1.0 / big, 0.0)
    return TransferEigen(a=a, sigma=sigma, omega2=omega2,
                         theta=None, degenerate=degenerate)


def _sgn_factor(p: BulkParams, a: float) -> float:
    """Sign prefactor of the second components for real a.

    Equals sgn(k1 + k2 a), which agrees with sgn(a) in every case
    reachable with k1 < k2 and keeps the eigen-residual zero when
    k1 > k2 (gap roots with k1 + k2 a > 0, a < 0).
    """
    s = p.k1 + p.k2 * a
    if s == 0.0:
        return math.copysign(1.0, a)
    return math.copysign(1.0, s)


def cell_vectors(p: BulkParams, te: TransferEigen) -> CellVectors:
    """Eigenvectors v1 (eigenvalue a) and v2 (eigenvalue 1/a) of T."""
    if te.degenerate:
        raise DegenerateTransfer(
            "a = +-1: use generalized_cell_vectors instead"
        )
    a = te.a
    sigma = te.sigma
    if te.on_circle:
        # a = e^{i theta}: v1 = (rho e^{i alpha}, -sigma rho e^{-i alpha}).
        f_minus = cmath.sqrt(p.k1 + p.k2 * a.conjugate())  # rho e^{i alpha}
        f_plus = cmath.sqrt(p.k1 + p.k2 * a)
        v1 = np.array([f_minus, -sigma * f_plus])
        v2 = np.array([f_plus, -sigma * f_minus])
        return CellVectors(v1=v1, v2=v2, imaginary_axis=False)

    ar = a.real
    s = _sgn_factor(p, ar)
    f_a = cmath.sqrt(complex(p.k1 + p.k2 * ar))
    f_inv = cmath.sqrt(complex(p.k1 + p.k2 / ar))
    v1 = np.array([f_inv, -s * sigma * f_a])
    v2 = np.array([f_a, -s * sigma * f_inv])
    imaginary = (p.k1 + p.k2 * ar) < 0 or (p.k1 + p.k2 / ar) < 0
    return CellVectors(v1=v1, v2=v2, imaginary_axis=imaginary)


def generalized_cell_vectors(p: BulkParams, a: int, sigma: int) -> CellVectors:
    """Eigenvector and generalized eigenvector at a band edge a = +-1.

    v1 = (1, -s sigma) with s = sgn(k1 + k2 a); s equals a whenever
    k1 < k2 but flips at a = -1 for an inverted chain, where the edge
    sits at 2k1 instead of 2k2.
    """
    if a not in (1, -1):
        raise InvalidA("a must be +1 or -1")
    s = _sgn_factor(p, float(a))
    v1 = np.array([1.0, -s * sigma], dtype=complex)
    v2 = np.array([1.0, s * sigma], dtype=complex)
    return CellVectors(v1=v1, v2=v2, imaginary_axis=False)


def band_edge_end_cell(
    p: BulkParams, a: int, sigma: int, c1: complex, c2: complex, n: int
) -> np.ndarray:
    """Closed form for (u_{2n-1}, u_{2n}) when a = +-1.

    T v2 = a v2 + kappa v1 with kappa = -2(k1 + k2 a)/k2, so after n-1
    cell steps the c2 part acquires a linear-in-n growth term:
    u = a^{n-1} (c1 v1 + c2 v2) + c2 (n-1) a^{n-2} kappa v1.
    """
    if a not in (1, -1):
        raise InvalidA("a must be +1 or -1")
    cv = generalized_cell_vectors(p, a, sigma)
    kappa = -2 * (p.k1 + p.k2 * a) / p.k2
    af = float(a)
    return (
        af ** (n - 1) * (c1 * cv.v1 + c2 * cv.v2)
        + c2 * (n - 1) * af ** (n - 2) * kappa * cv.v1
    )
