"""Exact spectra of the finite diatomic chain.

The finite chain of length 2n with boundary springs k31 (left) and k32
(right) obeys -omega^2 u = L u where L is symmetric tridiagonal:
diagonal (-k1-k31, -k1-k2, ..., -k1-k2, -k1-k32), off-diagonal
alternating (k1, k2, k1, ..., k2, k1).

Eigenvalues come from LAPACK's Sturm-sequence bisection (?STEBZ) and
eigenvectors from inverse iteration with cluster reorthogonalization
(?STEIN), both behind scipy's eigh_tridiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import BulkParams
from .errors import ConvergenceFailure

# Eigenvector pairs closer than this (relative to ||L||) are treated as a
# cluster when recombining symmetric/antisymmetric modes at k31 = k32.
CLUSTER_RTOL = 1e-8


@dataclass(frozen=True)
class ChainConfig:
    """Physical parameters of the finite chain (length 2n sites)."""

    n: int
    k1: float
    k2: float
    k31: float
    k32: float

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need at least two unit cells")
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError("bulk stiffnesses must be positive")
        if self.k31 < 0 or self.k32 < 0:
            raise ValueError("boundary stiffnesses must be nonnegative")

    @property
    def bulk(self) -> BulkParams:
        return BulkParams(self.k1, self.k2)

    @property
    def size(self) -> int:
        return 2 * self.n


@dataclass
class Spectrum:
    """Full ordered eigensystem of L (eigenvalues are -omega^2)."""

    eigenvalues: np.ndarray  # ascending, all <= 0
    eigenvectors: np.ndarray  # columns, unit norm, sign-fixed
    config: ChainConfig

    @property
    def omega2(self) -> np.ndarray:
        """Squared eigenfrequencies, ascending."""
        return -self.eigenvalues[::-1]

    def mode(self, j: int) -> np.ndarray:
        """Eigenvector of the j-th smallest omega^2 (0-based)."""
        return self.eigenvectors[:, self.eigenvectors.shape[1] - 1 - j]


def assemble(config: ChainConfig) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the tridiagonal operator L."""
    m = config.size
    diag = np.full(m, -config.k1 - config.k2)
    diag[0] = -config.k1 - config.k31
    diag[-1] = -config.k1 - config.k32
    off = np.empty(m - 1)
    off[0::2] = config.k1
    off[1::2] = config.k2
    return diag, off


def dense_operator(config: ChainConfig) -> np.ndarray:
    """L as a dense matrix (oracle/testing convenience)."""
    diag, off = assemble(config)
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def operator_norm(config: ChainConfig) -> float:
    """Infinity norm of L (cheap bound used for tolerances)."""
    diag, off = assemble(config)
    pad = np.concatenate(([0.0], off, [0.0]))
    return float(np.max(np.abs(diag) + pad[:-1] + pad[1:]))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Largest-|component| entry positive; ties broken by lowest index."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _symmetrize(vals: np.ndarray, vecs: np.ndarray, norm: float) -> np.ndarray:
    """Recombine near-degenerate pairs into symmetric/antisymmetric modes.

    With k31 = k32 every true eigenvector is mirror-(anti)symmetric, but
    inverse iteration returns mixed one-sided combinations when a pair is
    separated by less than machine precision.  Projecting onto the mirror
    eigenspaces restores the true eigenvectors without changing residuals.
    """
    out = vecs.copy()
    m = vecs.shape[0]
    rev = slice(None, None, -1)
    j = 0
    while j < len(vals):
        k = j
        while k + 1 < len(vals) and vals[k + 1] - vals[k] <= CLUSTER_RTOL * norm:
            k += 1
        if k > j:
            # Cluster: build an orthonormal basis of symmetric and
            # antisymmetric projections and redistribute.
            block = out[:, j : k + 1]
            sym = block + block[rev, :]
            anti = block - block[rev, :]
            cand = []
            for col in range(sym.shape[1]):
                for v in (sym[:, col], anti[:, col]):
                    nv = np.linalg.norm(v)
                    if nv > 1e-8:
                        cand.append(v / nv)
            # Gram-Schmidt down to the cluster dimension.
            basis: list[np.ndarray] = []
            for v in cand:
                for b in basis:
                    v = v - (b @ v) * b
                nv = np.linalg.norm(v)
                if nv > 1e-6:
                    basis.append(v / nv)
                if len(basis) == k - j + 1:
                    break
            if len(basis) == k - j + 1:
                out[:, j : k + 1] = np.column_stack(basis)
        else:
            v = out[:, j]
            s = v + v[rev]
            a = v - v[rev]
            pick = s if np.linalg.norm(s) >= np.linalg.norm(a) else a
            out[:, j] = pick / np.linalg.norm(pick)
        j = k + 1
    return out


def full_spectrum(config: ChainConfig) -> Spectrum:
    """All 2n eigenpairs of L via Sturm bisection + inverse iteration."""
    diag, off = assemble(config)
    norm = operator_norm(config)
    try:
        vals, vecs = eigh_tridiagonal(
            diag, off, lapack_driver="stebz", tol=1e-13 * norm
        )
    except Exception as exc:  # pragma: no cover - LAPACK failure path
        raise ConvergenceFailure(str(exc)) from exc

    if config.k31 == config.k32:
        vals_sorted = np.sort(vals)
        vecs = _symmetrize(vals_sorted, vecs, norm)
        vals = vals_sorted

    vecs = _fix_signs(vecs)
    # Clamp the tiny positive rounding of the free-chain rigid mode.
    vals = np.minimum(vals, 0.0) if vals[-1] > 0 and vals[-1] < 1e-12 * norm else vals
    return Spectrum(eigenvalues=vals, eigenvectors=vecs, config=config)


def residuals(spec: Spectrum) -> np.ndarray:
    """Per-mode ||L u + omega^2 u|| (should be <= 1e-10 ||L||)."""
    diag, off = assemble(spec.config)
    res = np.empty(len(spec.eigenvalues))
    for j, lam in enumerate(spec.eigenvalues):
        u = spec.eigenvectors[:, j]
        lu = diag * u
        lu[:-1] += off * u[1:]
        lu[1:] += off * u[:-1]
        res[j] = np.linalg.norm(lu - lam * u)
    return res


def frequency_derivative(spec: Spectrum, mode_index: int, which_end: str) -> float:
    """Analytic d(lambda)/d(k3) = -|u_end|^2 for the given boundary spring.

    mode_index counts modes by ascending omega^2; which_end is 'left'
    (k31) or 'right' (k32).  Always strictly negative: boundary stiffening
    lowers every eigenvalue of L (raises every omega).
    """
    u = spec.mode(mode_index)
    if which_end == "left":
        return -float(u[0] ** 2)
    if which_end == "right":
        return -float(u[-1] ** 2)
    raise ValueError("which_end must be 'left' or 'right'")
