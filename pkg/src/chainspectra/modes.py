"""Transfer decomposition and classification of exact eigenmodes.

Each eigenvector of the finite chain restricts, cell by cell, to
(u_{2m+1}, u_{2m+2}) = c1 a^m v1 + c2 a^{-m} v2.  Solving the 2x2 system
at the first cell yields (c1, c2); the envelope |c1||a|^{m-1} +
|c2||a|^{1-m} then decides left/right/two-sided localization.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import semi_infinite
from .core import BulkParams, TransferEigen, cell_vectors, omega2_of_a, solve_decay
from .eigensolver import ChainConfig, Spectrum, full_spectrum
from .errors import NoEdgeState

# Envelope contrast for calling a mode an edge state (three decades).
EPS_LOC = 1e-3

LABELS = ("LeftEdge", "RightEdge", "TwoSided", "SlowDecaying", "Extended", "BandEdge")


@dataclass(frozen=True)
class ModeAnalysis:
    mode_index: int
    omega2: float
    te: TransferEigen
    c1: complex
    c2: complex
    beta: Optional[float]  # in-band phase of c1 = r e^{i beta}, in [0, pi)
    r: Optional[float]  # in-band amplitude
    eta: Optional[float]  # |c2/c1| |a|^{2-2n} (out-of-band)
    xi: Optional[float]  # localization length -1/ln|a| (out-of-band)
    label: str


@dataclass(frozen=True)
class ClassifiedSpectrum:
    spectrum: Spectrum
    modes: list[ModeAnalysis]
    out_of_band_count: int
    n_optical: int
    n_acoustic: int

    def labels(self) -> list[str]:
        return [m.label for m in self.modes]

    def count(self, label: str) -> int:
        return sum(1 for m in self.modes if m.label == label)


def reconstruct(config: ChainConfig, te: TransferEigen,
                c1: complex, c2: complex) -> np.ndarray:
    """Full 2n-site displacement from the cell expansion."""
    cv = cell_vectors(config.bulk, te)
    m = np.arange(config.n)
    cells = (
        c1 * te.a ** m[:, None] * cv.v1[None, :]
        + c2 * te.a ** (-m[:, None]) * cv.v2[None, :]
    )
    return cells.reshape(-1)


def _envelope_label(c1m: float, c2m: float, amag: float, n: int) -> str:
    a_left = c1m + c2m  # envelope at cell 1
    a_right = c1m * amag ** (n - 1) + c2m * amag ** (1 - n)
    if a_right <= EPS_LOC * a_left:
        return "LeftEdge"
    if a_left <= EPS_LOC * a_right:
        return "RightEdge"
    return "TwoSided"


def classify(te: TransferEigen, c1: complex, c2: complex, n: int) -> str:
    """Decision procedure for the mode label."""
    if te.degenerate:
        return "BandEdge"
    if te.on_circle:
        return "Extended"
    amag = abs(te.a)
    xi = -1.0 / math.log(amag)
    if xi > n / 2:
        return "SlowDecaying"
    return _envelope_label(abs(c1), abs(c2), amag, n)


def decompose(config: ChainConfig, omega2: float, u: np.ndarray,
              mode_index: int = -1) -> ModeAnalysis:
    """Transfer-matrix decomposition of one exact eigenpair."""
    p = config.bulk
    te = solve_decay(p, omega2)

    if te.degenerate:
        # The v1/v2 basis is ill-conditioned at a band edge; no expansion.
        return ModeAnalysis(mode_index, omega2, te, complex(0), complex(0),
                            None, None, None, None, "BandEdge")

    cv = cell_vectors(p, te)
    mat = np.column_stack([cv.v1, cv.v2])
    c1, c2 = np.linalg.solve(mat, u[:2].astype(complex))
    if not te.on_circle:
        # For decaying modes the left cell determines c1 accurately but
        # its c2 content sits below rounding noise (true c2 ~ a^{2n}).
        # Estimate c2 from the last cell, where c2 a^{-(n-1)} is O(end
        # amplitude); noise there is damped by a^{n-1} instead of being
        # amplified by a^{1-n}.
        g1, g2 = np.linalg.solve(mat, u[-2:].astype(complex))
        c2 = g2 * te.a ** (config.n - 1)

    beta = r = eta = xi = None
    if te.on_circle:
        r = abs(c1)
        beta = cmath.phase(c1) % math.pi
    else:
        amag = abs(te.a)
        xi = -1.0 / math.log(amag) if amag < 1 else math.inf
        eta = abs(c2 / c1) * amag ** (2 - 2 * config.n) if c1 != 0 else math.inf

    label = classify(te, c1, c2, config.n)
    return ModeAnalysis(mode_index, omega2, te, complex(c1), complex(c2),
                        beta, r, eta, xi, label)


def classify_spectrum(spec: Spectrum) -> ClassifiedSpectrum:
    """Decompose and label every mode of a spectrum."""
    config = spec.config
    p = config.bulk
    modes = []
    out = 0
    n_opt = n_ac = 0
    (ac_lo, ac_hi), (op_lo, op_hi) = p.band_intervals()
    for j, w2 in enumerate(spec.omega2):
        ma = decompose(config, float(w2), spec.mode(j), mode_index=j)
        modes.append(ma)
        if not p.in_band(float(w2)):
            out += 1
        elif ac_lo <= w2 <= ac_hi:
            n_ac += 1
        else:
            n_opt += 1
    return ClassifiedSpectrum(spec, modes, out, n_opt, n_ac)


def analyze(config: ChainConfig) -> ClassifiedSpectrum:
    """Solve and classify in one call."""
    return classify_spectrum(full_spectrum(config))


def predicted_c2_ratio(config: ChainConfig) -> tuple[float, complex]:
    """Predicted |c2/c1| for the left edge state of a finite chain.

    Evaluates the right boundary condition at the semi-infinite root:
    c2 = a^{2n-2} (R v12 - v11) / (v21 - R v22), R = (k1+k32-omega^2)/k1,
    with c1 = 1.  Returns (a_tilde, c2).
    """
    roots = semi_infinite.solve_semi_infinite(config.k1, config.k2, config.k31)
    roots = [r for r in roots if r.location is not None]
    if not roots:
        raise NoEdgeState("no decaying semi-infinite root for these parameters")
    root = roots[0]
    a = root.a_tilde
    te = solve_decay(config.bulk, root.omega2)
    cv = cell_vectors(config.bulk, te)
    v11, v12 = cv.v1
    v21, v22 = cv.v2
    R = (config.k1 + config.k32 - root.omega2) / config.k1
    c2 = a ** (2 * config.n - 2) * (R * v12 - v11) / (v21 - R * v22)
    return a, complex(c2)


def min_chain_size(k1: float, k2: float, k31: float, k32: float,
                   epsilon: float, n_max: int = 100000) -> int:
    """Smallest n with predicted |c2/c1| below epsilon for the left edge state."""
    if not math.isfinite(epsilon):
        return 2
    for n in range(2, n_max + 1):
        cfg = ChainConfig(n=n, k1=k1, k2=k2, k31=k31, k32=k32)
        _, c2 = predicted_c2_ratio(cfg)
        if abs(c2) < epsilon:
            return n
    raise NoEdgeState("purity bound not reachable below n_max")
