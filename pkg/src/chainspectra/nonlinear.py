"""Continuation of linear chain modes into nonlinear periodic solutions.

The chain with an on-site cubic force, q'' = L q + b q^3, is reduced by
the rescaling tau = omega t to omega^2 Q'' = L Q + b Q^3 for 2pi-periodic
Q.  Time-periodic solutions are sought with a time-reversible cosine
ansatz over odd harmonics,

    Q_j(tau) = sum_{h odd, h <= H} A_{j,h} cos(h tau),

which the cubic nonlinearity closes on.  Harmonic balance (Galerkin
projection evaluated by exact trigonometric quadrature on 4H+4 points)
plus Newton and pseudo-arclength continuation track the family that
bifurcates from a linear eigenmode, recording frequency, energy,
localization, and band-edge crossings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .eigensolver import ChainConfig, Spectrum, assemble, full_spectrum
from .errors import ResonanceEncountered, StepUnderflow

DELTA_RES = 1e-3  # margin to integer frequency ratios (m >= 2)


@dataclass(frozen=True)
class NonlinearConfig:
    chain: ChainConfig
    b: float  # cubic coefficient of the on-site force b q^3
    harmonics: int = 7  # odd truncation order H
    newton_tol: float = 1e-10  # bound on the synthesized residual
    step: float = 0.05  # initial arclength step
    delta_res: float = DELTA_RES
    min_step: float = 1e-7
    max_points: int = 500

    def __post_init__(self):
        if self.harmonics < 1 or self.harmonics % 2 == 0:
            raise ValueError("harmonics must be odd and >= 1")
        if self.newton_tol <= 0:
            raise ValueError("newton_tol must be positive")


@dataclass(frozen=True)
class PeriodicSolution:
    coeffs: np.ndarray  # (2n, m) cosine amplitudes on harmonics 1,3,...,H
    omega: float
    energy: float  # period-averaged Hamiltonian
    ipr: float  # inverse participation ratio of the fundamental profile
    residual: float  # max synthesized collocation residual
    amplitude: float  # seed-mode projection of the fundamental harmonic


@dataclass(frozen=True)
class ExitEvent:
    edge_omega2: float
    index: int  # branch point after which the crossing happened
    direction: int  # sign of the omega^2 change across the edge
    amplitude: float  # linear interpolation at the crossing


@dataclass(frozen=True)
class NonresonanceReport:
    ok: bool
    margins: np.ndarray  # distance to the nearest harmonic (>= 2x) per mode
    min_margin: float


@dataclass
class ContinuationBranch:
    points: list[PeriodicSolution]
    seed_mode: int
    exit_event: Optional[ExitEvent] = None
    status: str = "Completed"  # Completed | StepUnderflow | ResonanceEncountered
    resonance_margin: Optional[float] = None


def harmonic_orders(h_max: int) -> np.ndarray:
    return np.arange(1, h_max + 1, 2)


def collocation_grid(h_max: int) -> np.ndarray:
    n_tau = 4 * h_max + 4
    return 2 * math.pi * np.arange(n_tau) / n_tau


class _Balance:
    """Harmonic-balance residual and Jacobian for a tridiagonal operator."""

    def __init__(self, diag: np.ndarray, off: np.ndarray, b: float, h_max: int):
        self.diag = diag
        self.off = off
        self.b = b
        self.h = harmonic_orders(h_max)
        self.tau = collocation_grid(h_max)
        # cos table (m, N); uniform trapezoid is exact for trig
        # polynomials of degree < N, which covers the cubic (3H) and the
        # quartic energy integrand (4H) on N = 4H+4 points.
        self.cos = np.cos(np.outer(self.h, self.tau))
        self.n_tau = self.tau.size

    def apply_operator(self, a: np.ndarray) -> np.ndarray:
        la = self.diag[:, None] * a
        la[:-1] += self.off[:, None] * a[1:]
        la[1:] += self.off[:, None] * a[:-1]
        return la

    def cubic_projection(self, a: np.ndarray) -> np.ndarray:
        q = a @ self.cos
        return (q ** 3) @ self.cos.T * (2.0 / self.n_tau)

    def galerkin(self, a: np.ndarray, omega: float) -> np.ndarray:
        f = -(omega ** 2) * (self.h ** 2)[None, :] * a
        f -= self.apply_operator(a)
        f -= self.b * self.cubic_projection(a)
        return f

    def residual_time(self, a: np.ndarray, omega: float) -> np.ndarray:
        """Galerkin residual synthesized at the collocation points."""
        return self.galerkin(a, omega) @ self.cos

    def jacobian(self, a: np.ndarray, omega: float):
        sites, m = a.shape
        size = sites * m
        j = np.zeros((size, size))
        q2 = (a @ self.cos) ** 2
        # per-site harmonic coupling from the cubic term
        blocks = -3 * self.b * (2.0 / self.n_tau) * np.einsum(
            "jt,ht,gt->jhg", q2, self.cos, self.cos)
        hh = -(omega ** 2) * self.h ** 2
        for s in range(sites):
            blk = blocks[s].copy()
            blk[np.diag_indices(m)] += hh - self.diag[s]
            j[s * m:(s + 1) * m, s * m:(s + 1) * m] = blk
            if s + 1 < sites:
                idx = np.arange(m)
                j[s * m + idx, (s + 1) * m + idx] = -self.off[s]
                j[(s + 1) * m + idx, s * m + idx] = -self.off[s]
        dw = (-2 * omega * (self.h ** 2)[None, :] * a).ravel()
        return j, dw

    def energy(self, a: np.ndarray, omega: float,
               k_end: tuple[float, float]) -> float:
        """Period-averaged Hamiltonian of the synthesized solution."""
        # kinetic: <(q')^2>/2 summed over sites
        kin = 0.25 * omega ** 2 * float(np.sum((self.h ** 2)[None, :] * a ** 2))
        # quadratic potential: -L is the stiffness quadratic form
        pot = -0.25 * float(np.sum(a * self.apply_operator(a)))
        # quartic: -(b/4) <q^4>, exact on the collocation grid
        q = a @ self.cos
        quart = -(self.b / 4.0) * float(np.sum(np.mean(q ** 4, axis=1)))
        return kin + pot + quart


def _balance_for(cfg: NonlinearConfig) -> _Balance:
    diag, off = assemble(cfg.chain)
    return _Balance(diag, off, cfg.b, cfg.harmonics)


def residual(cfg: NonlinearConfig, coeffs: np.ndarray,
             omega: float) -> np.ndarray:
    """Collocation residual of the rescaled equation at 4H+4 tau points.

    The cubic term is evaluated pointwise in tau and projected onto the
    retained harmonics, so a converged harmonic-balance solution has a
    uniformly small residual.
    """
    return _balance_for(cfg).residual_time(np.asarray(coeffs, float), omega)


def check_nonresonance(spectrum: Spectrum, seed_index: int,
                       delta_res: float = DELTA_RES) -> NonresonanceReport:
    """Margins of omega_j / omega_seed to the harmonics m >= 2.

    The 1:1 ratios of neighboring modes do not obstruct the continuation;
    only integer multiples of the seed frequency resonate with it.
    """
    w = np.sqrt(np.maximum(spectrum.omega2, 0.0))
    w_seed = w[seed_index]
    if w_seed <= 0:
        raise ValueError("seed mode must have positive frequency")
    ratios = np.delete(w, seed_index) / w_seed
    nearest = np.maximum(np.round(ratios), 2.0)
    margins = np.abs(ratios - nearest)
    ok = bool(np.all(margins > delta_res))
    return NonresonanceReport(ok=ok, margins=margins,
                              min_margin=float(margins.min()))


def _ipr(a: np.ndarray) -> float:
    p = a[:, 0] ** 2
    s = p.sum()
    if s == 0:
        return 0.0
    p = p / s
    return float(np.sum(p ** 2))


def _solution(bal: _Balance, cfg: NonlinearConfig, a: np.ndarray,
              omega: float, u_seed: np.ndarray) -> PeriodicSolution:
    return PeriodicSolution(
        coeffs=a.copy(), omega=omega,
        energy=bal.energy(a, omega, (cfg.chain.k31, cfg.chain.k32)),
        ipr=_ipr(a),
        residual=float(np.max(np.abs(bal.residual_time(a, omega)))),
        amplitude=float(a[:, 0] @ u_seed),
    )


def _newton(bal: _Balance, a: np.ndarray, omega: float,
            constraint, tol: float, max_iter: int = 25):
    """Solve the bordered system {galerkin = 0, constraint = 0}.

    `constraint(a, omega) -> (value, grad_a, grad_omega)` closes the
    count of unknowns (2n*m coefficients plus omega).
    """
    sites, m = a.shape
    for _ in range(max_iter):
        f = bal.galerkin(a, omega)
        g, ga, gw = constraint(a, omega)
        if np.max(np.abs(f)) <= 0.25 * tol and abs(g) <= 0.25 * tol:
            return a, omega, True
        j, dw = bal.jacobian(a, omega)
        size = sites * m
        aug = np.zeros((size + 1, size + 1))
        aug[:size, :size] = j
        aug[:size, size] = dw
        aug[size, :size] = ga.ravel()
        aug[size, size] = gw
        rhs = -np.concatenate([f.ravel(), [g]])
        try:
            delta = np.linalg.solve(aug, rhs)
        except np.linalg.LinAlgError:
            return a, omega, False
        a = a + delta[:size].reshape(sites, m)
        omega = omega + delta[size]
        if not np.isfinite(omega) or omega <= 0:
            return a, omega, False
    return a, omega, False


def solve_fixed_amplitude(cfg: NonlinearConfig, seed_index: int,
                          amplitude: float,
                          spectrum: Optional[Spectrum] = None,
                          guess: Optional[tuple[np.ndarray, float]] = None
                          ) -> PeriodicSolution:
    """Periodic solution at a prescribed seed-mode projection."""
    spec = spectrum if spectrum is not None else full_spectrum(cfg.chain)
    u = spec.mode(seed_index)
    omega0 = math.sqrt(spec.omega2[seed_index])
    bal = _balance_for(cfg)
    m = harmonic_orders(cfg.harmonics).size
    if guess is None:
        a = np.zeros((2 * cfg.chain.n, m))
        a[:, 0] = amplitude * u
        omega = omega0
    else:
        a, omega = guess[0].copy(), guess[1]

    grad_a = np.zeros_like(a)
    grad_a[:, 0] = u

    def constraint(a_, w_):
        return float(a_[:, 0] @ u) - amplitude, grad_a, 0.0

    a, omega, ok = _newton(bal, a, omega, constraint, cfg.newton_tol)
    if not ok:
        raise StepUnderflow("Newton failed at the requested amplitude")
    return _solution(bal, cfg, a, omega, u)


def continue_branch(cfg: NonlinearConfig, seed_index: int,
                    amplitude_range: tuple[float, float],
                    stop_omega2: Optional[float] = None) -> ContinuationBranch:
    """Pseudo-arclength continuation of the seed mode's periodic family.

    The branch starts at the small-amplitude end of `amplitude_range`
    (the linear limit) and is continued until the seed projection
    reaches the upper end, omega^2 drops below `stop_omega2` (if set),
    the step underflows, or a harmonic of the running frequency collides
    with a linear eigenfrequency.
    """
    amp_lo, amp_hi = amplitude_range
    if not 0 < amp_lo < amp_hi:
        raise ValueError("amplitude_range must be 0 < lo < hi")
    spec = full_spectrum(cfg.chain)
    report = check_nonresonance(spec, seed_index, cfg.delta_res)
    if not report.ok:
        raise ResonanceEncountered(
            f"seed mode resonates with the spectrum "
            f"(margin {report.min_margin:.2e})")
    u = spec.mode(seed_index)
    w_linear = np.sqrt(np.maximum(np.delete(spec.omega2, seed_index), 0.0))
    bal = _balance_for(cfg)
    edges = sorted(set(cfg.chain.bulk.band_edges()))

    branch = ContinuationBranch(points=[], seed_mode=seed_index)

    def accept(sol: PeriodicSolution) -> bool:
        """Record the point; False truncates the branch (resonance)."""
        if branch.points:
            prev = branch.points[-1]
            for e in edges:
                lo, hi = sorted((prev.omega ** 2, sol.omega ** 2))
                if branch.exit_event is None and lo < e < hi:
                    t = (e - prev.omega ** 2) / (sol.omega ** 2 - prev.omega ** 2)
                    branch.exit_event = ExitEvent(
                        edge_omega2=e, index=len(branch.points) - 1,
                        direction=int(math.copysign(
                            1.0, sol.omega ** 2 - prev.omega ** 2)),
                        amplitude=prev.amplitude + t * (sol.amplitude
                                                        - prev.amplitude),
                    )
        branch.points.append(sol)
        ratios = w_linear / sol.omega
        nearest = np.maximum(np.round(ratios), 2.0)
        margin = float(np.min(np.abs(ratios - nearest)))
        if margin <= cfg.delta_res:
            branch.status = "ResonanceEncountered"
            branch.resonance_margin = margin
            return False
        return True

    first = solve_fixed_amplitude(cfg, seed_index, amp_lo, spectrum=spec)
    if not accept(first):
        return branch

    # Second point by a short amplitude step fixes the initial tangent.
    second = solve_fixed_amplitude(
        cfg, seed_index, amp_lo + cfg.step,
        spectrum=spec, guess=(first.coeffs, first.omega))
    if not accept(second):
        return branch

    def pack(sol):
        return np.concatenate([sol.coeffs.ravel(), [sol.omega]])

    x_prev, x = pack(first), pack(second)
    step = float(np.linalg.norm(x - x_prev))
    shape = first.coeffs.shape
    size = first.coeffs.size

    while (branch.points[-1].amplitude < amp_hi
           and len(branch.points) < cfg.max_points):
        tangent = (x - x_prev) / np.linalg.norm(x - x_prev)
        x_pred = x + step * tangent

        def constraint(a_, w_, x_pred=x_pred, tangent=tangent):
            y = np.concatenate([a_.ravel(), [w_]])
            return (float(tangent @ (y - x_pred)),
                    tangent[:size].reshape(shape), tangent[size])

        a, omega, ok = _newton(
            bal, x_pred[:size].reshape(shape), x_pred[size],
            constraint, cfg.newton_tol)
        if not ok:
            step *= 0.5
            if step < cfg.min_step:
                branch.status = "StepUnderflow"
                break
            continue
        sol = _solution(bal, cfg, a, omega, u)
        if stop_omega2 is not None and sol.omega ** 2 < stop_omega2:
            break
        x_prev, x = x, np.concatenate([a.ravel(), [omega]])
        if not accept(sol):
            break
        step = min(step * 1.3, 40 * cfg.step)
    return branch


def branch_rows(branch: ContinuationBranch) -> list[dict]:
    """One exportable record per accepted point."""
    rows = []
    s = 0.0
    prev = None
    for p in branch.points:
        if prev is not None:
            s += float(np.linalg.norm(p.coeffs - prev.coeffs)
                       + abs(p.omega - prev.omega))
        rows.append({
            "arclength": s,
            "amplitude": p.amplitude,
            "omega": p.omega,
            "omega2": p.omega ** 2,
            "energy": p.energy,
            "ipr": p.ipr,
            "residual": p.residual,
        })
        prev = p
    return rows
