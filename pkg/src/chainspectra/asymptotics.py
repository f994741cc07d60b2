"""Closed-form finite-size estimates for finite diatomic chains.

Four groups of estimators, each paired with an exact-diagonalization
validator in the test suite:

* regime taxonomy: a boundary stiffness k3 is "special" when |k3 - k2|
  is within 5/n of k2 (k3 near 0 or 2 k2), which controls whether the
  finite chain behaves like two semi-infinite chains;
* edge-state prediction: decay root, order-of-magnitude classes for the
  finite-size shift Delta a = a - a_tilde, and the expected label
  multiset of the out-of-band modes;
* band-edge matching: the exact (k31, k32) pairs hosting an eigenstate
  with a = +-1, with three asymptotic tiers in the distance of k31 from
  the critical stiffness;
* near-edge in-band patterns: Delta theta ~ k pi/(n-1) (integer),
  (k-1/2) pi/(n-1) (half-integer) or a gamma-shifted ladder, with the
  second-order tilde-theta series and approximate eigenvectors.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import BulkParams, TransferEigen, cell_vectors, omega2_of_a, solve_decay
from .eigensolver import ChainConfig, full_spectrum
from .errors import DegenerateDenominator, NoMatch, PatternUndetermined
from .modes import EPS_LOC, decompose
from .semi_infinite import solve_semi_infinite

# A margin m is "~ 0" when |m| <= NEAR/n and "not ~ 0" when |m| >= FAR/n;
# the annulus in between is reported as ambiguous.
TUBE_NEAR = 5.0
TUBE_FAR = 50.0


# --------------------------------------------------------------------------
# Regime taxonomy
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Regime:
    """Which ends of the finite chain are near the critical values {0, 2k2}."""

    tag: str  # NearlyInfinite | NearlySemiInfiniteLeft | NearlySemiInfiniteRight | Finite
    tube_margins: tuple[float, float]  # |k3i - k2| - k2 per side
    gap: float  # k2 - k1
    ambiguous: tuple[bool, bool]  # margin inside the (5/n, 50/n) annulus


def classify_regime(config: ChainConfig) -> Regime:
    n = config.n
    margins = (abs(config.k31 - config.k2) - config.k2,
               abs(config.k32 - config.k2) - config.k2)
    special = tuple(abs(m) <= TUBE_NEAR / n for m in margins)
    ambiguous = tuple(TUBE_NEAR / n < abs(m) < TUBE_FAR / n for m in margins)
    if special[0] and special[1]:
        tag = "Finite"
    elif special[1]:
        tag = "NearlySemiInfiniteLeft"
    elif special[0]:
        tag = "NearlySemiInfiniteRight"
    else:
        tag = "NearlyInfinite"
    return Regime(tag=tag, tube_margins=margins, gap=config.k2 - config.k1,
                  ambiguous=ambiguous)


# --------------------------------------------------------------------------
# Band-edge geometry shared by several estimators
# --------------------------------------------------------------------------

# The four band edges in the (a, sigma) parametrization
# omega^2 = k1 + k2 + a sigma (k1 + k2 a), a in {+1, -1}:
#   (+1, +1) -> 2(k1+k2)   (top)
#   (-1, +1) -> 2 k2
#   (-1, -1) -> 2 k1
#   (+1, -1) -> 0
# The critical boundary stiffness enabling states pinned near an edge is
# k2 (1 + sigma): 2 k2 for the upper pair, 0 for the lower pair.

_EDGES = ((1, 1), (-1, 1), (-1, -1), (1, -1))


def _edge_omega2(k1: float, k2: float, a: int, sigma: int) -> float:
    return k1 + k2 + a * sigma * (k1 + k2 * a)


def _edge_out_direction(k1: float, k2: float, a: int, sigma: int) -> int:
    """Sign of (out-of-band region) - (edge): +1 above, -1 below, 0 none."""
    if a == 1:
        return 1 if sigma == 1 else 0  # above the top edge; nothing below 0
    # a = -1: the gap lies between 2 min(k1,k2) and 2 max(k1,k2).
    if sigma == 1:  # edge at 2 k2
        return -1 if k1 < k2 else 1
    return 1 if k1 < k2 else -1  # edge at 2 k1


def _edge_crossing_delta(k1: float, k2: float, n: int, a: int, sigma: int) -> float:
    """First-order offset of the boundary stiffness at which a mode sits
    exactly on the edge: k3 = k2 (1 + sigma) + delta*."""
    den = n * (k2 + a * k1)
    if den == 0.0:  # closed gap (k1 = k2 with a = -1): no crossing scale
        return math.nan
    return a * sigma * k1 * k2 / den


# --------------------------------------------------------------------------
# Edge-state prediction
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeEstimate:
    a_tilde: float  # in-gap decay root of the left boundary (nan if none)
    delta_a_order: str  # order class of |a - a_tilde| in n
    c2_order: str
    predicted_labels: list[str]  # expected labels of out-of-band modes, sorted


def _finite_label(amag: float, n: int, side: str) -> str:
    """Label a predicted gap mode the same way the exact classifier would."""
    if amag >= 1.0:
        return "BandEdge"
    xi = -1.0 / math.log(amag)
    if xi > n / 2:
        return "SlowDecaying"
    # One-sided envelope contrast |a|^{n-1} must clear three decades.
    if amag ** (n - 1) > EPS_LOC:
        return "TwoSided"
    return side


def _slow_mode_labels(k1: float, k2: float, k3: float, n: int) -> list[str]:
    """Out-of-band slow modes induced by a boundary stiffness near 0 or 2 k2.

    A mode pinned near the edge leaves the band once k3 passes the
    first-order crossing value k2 (1 + sigma) + delta*; the out-of-band
    side is fixed by the geometry of the gap around that edge.
    """
    labels = []
    tube = TUBE_NEAR / n
    for a, sigma in _EDGES:
        crit = k2 * (1 + sigma)
        if abs(k3 - crit) > tube:
            continue
        direction = _edge_out_direction(k1, k2, a, sigma)
        if direction == 0:
            continue
        delta = k3 - crit
        delta_star = _edge_crossing_delta(k1, k2, n, a, sigma)
        if direction * (delta - delta_star) > 0:
            labels.append("SlowDecaying")
    return labels


def predict_edge_states(config: ChainConfig) -> EdgeEstimate:
    """Expected out-of-band mode labels and finite-size order classes."""
    k1, k2, k31, k32, n = config.k1, config.k2, config.k31, config.k32, config.n
    reg = classify_regime(config)
    tube = TUBE_NEAR / n
    left_special, right_special = (abs(m) <= tube for m in reg.tube_margins)

    left_roots = [] if left_special else [
        r for r in solve_semi_infinite(k1, k2, k31) if r.location is not None]
    right_roots = [] if right_special else [
        r for r in solve_semi_infinite(k1, k2, k32) if r.location is not None]

    a_tilde = math.nan
    in_gap = [r for r in left_roots if r.location == "InGap"]
    if left_roots:
        a_tilde = (in_gap or left_roots)[0].a_tilde

    near_k2 = abs(k31 - k2) <= 1e-9
    two_sided = (left_roots and right_roots
                 and abs(k31 - k32) <= tube)

    labels: list[str] = []
    if two_sided:
        # Hybridized pairs localized at both ends; one pair per root.
        for r in left_roots:
            lab = _finite_label(abs(r.a_tilde), n, "TwoSided")
            labels += [lab if lab == "SlowDecaying" else "TwoSided"] * 2
        delta_a_order = "Theta(a^{2n})" if near_k2 else "Theta(a^n)"
        c2_order = "Theta(a^n)"
    else:
        for r in left_roots:
            labels.append(_finite_label(abs(r.a_tilde), n, "LeftEdge"))
        for r in right_roots:
            labels.append(_finite_label(abs(r.a_tilde), n, "RightEdge"))
        if near_k2:
            delta_a_order = "O((k1/k2)^{4n})"
            c2_order = "Theta(a^{2n}/k32)"
        else:
            delta_a_order = "O(a^{2n})"
            c2_order = "O(a^{2n})"

    if left_special:
        labels += _slow_mode_labels(k1, k2, k31, n)
    if right_special:
        labels += _slow_mode_labels(k1, k2, k32, n)

    return EdgeEstimate(a_tilde=a_tilde, delta_a_order=delta_a_order,
                        c2_order=c2_order, predicted_labels=sorted(labels))


# --------------------------------------------------------------------------
# The (a, c2) <-> k32 correspondence for gap modes
# --------------------------------------------------------------------------

def c2_of_a(k1: float, k2: float, k31: float, a: float, sigma: int) -> float:
    """c2/c1 enforced by the left boundary condition at decay factor a.

    Vanishes exactly at the semi-infinite root a_tilde(k31); near it,
    c2(a) ~ c2'(a_tilde) (a - a_tilde).
    """
    p = BulkParams(k1, k2)
    omega2 = omega2_of_a(p, a, sigma)
    te = TransferEigen(a=complex(a), sigma=sigma, omega2=omega2)
    cv = cell_vectors(p, te)
    v11, v12 = cv.v1
    v21, v22 = cv.v2
    g = (k1 + k31 - omega2) / k1  # u2/u1 enforced by the left boundary
    den = v22 - g * v21
    scale = max(abs(v21), abs(v22), 1.0)
    if abs(den) <= 1e-13 * scale * max(1.0, abs(g)):
        raise DegenerateDenominator(
            "left boundary condition is singular in c2; use the inverse "
            "parametrization")
    c2 = (g * v11 - v12) / den
    return float(c2.real)


def k32_of_a(k1: float, k2: float, n: int, a: float, sigma: int,
             c2: float) -> float:
    """Right boundary stiffness matching a gap mode with decay factor a.

    k32 = k1 (v11 + c2 a^{2-2n} v21) / (v12 + c2 a^{2-2n} v22) + omega^2 - k1.
    The three size regimes of |c2 a^{2-2n}| reproduce the matching
    stiffness k31 k2/(k31 - k2) (vanishing), generic values (order one)
    and k31 itself (large).
    """
    p = BulkParams(k1, k2)
    omega2 = omega2_of_a(p, a, sigma)
    te = TransferEigen(a=complex(a), sigma=sigma, omega2=omega2)
    cv = cell_vectors(p, te)
    v11, v12 = cv.v1
    v21, v22 = cv.v2
    tail = c2 * float(a) ** (2 - 2 * n)
    den = v12 + tail * v22
    if abs(den) <= 1e-300:
        raise DegenerateDenominator("right boundary condition is singular")
    val = k1 * (v11 + tail * v21) / den + omega2 - k1
    return float(val.real)


# --------------------------------------------------------------------------
# Exact band-edge matching (a = +-1)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BandEdgeMatch:
    a: int
    sigma: int
    omega2: float
    k32: float  # exact matching right stiffness
    c1: float
    c2: float
    zeta: float  # end-cell denominator 1 - c2 - c2 (n-1)(2k2 + 2a k1)/k2
    margin_regime: str  # "far" | "near" | "intermediate" in |k31 - critical| vs 1/n
    k32_asymptotic: float  # tier estimate (nan in the intermediate tier)
    predicted_sign: Optional[int]  # intermediate tier: sign of k32 - critical


def band_edge_match(k1: float, k2: float, k31: float, n: int,
                    a: int, sigma: int) -> BandEdgeMatch:
    """The unique k32 placing an eigenstate exactly at a band edge.

    The edge is selected by (a, sigma) via omega^2 = k1+k2+a sigma (k1+k2 a).
    With c1 = 1 the left boundary fixes c2; the generalized-eigenvector
    iteration gives the end cell and hence k32 in closed form.  The
    returned asymptotic tier follows the distance of k31 from the
    critical stiffness k2 (1 + sigma).
    """
    if a not in (1, -1) or sigma not in (1, -1):
        raise ValueError("a and sigma must be +-1")
    omega2 = _edge_omega2(k1, k2, a, sigma)
    crit = k2 * (1 + sigma)
    growth = (n - 1) * (2 * k2 + 2 * a * k1) / k2

    d = k31 - crit - 2 * a * sigma * k1
    if abs(d) <= 1e-13 * max(1.0, k1, k2):
        # Pole of the c2 formula: the pure generalized-eigenvector state.
        c1, c2 = 0.0, 1.0
        zeta = math.nan
        k32 = crit + 2 * a * sigma * k1 / (1 + growth)
    else:
        c1 = 1.0
        c2 = (crit - k31) / d
        zeta = 1 - c2 - c2 * growth
        if zeta == 0.0:
            raise NoMatch("end displacement vanishes; no finite k32 matches")
        k32 = crit - 2 * a * sigma * c2 * k1 / zeta
    if k32 < 0:
        raise NoMatch("matching stiffness is negative")

    m = k31 - crit
    predicted_sign: Optional[int] = None
    if abs(m) >= TUBE_FAR / n:
        regime = "far"
        k32_asym = crit + _edge_crossing_delta(k1, k2, n, a, sigma)
    elif abs(m) <= TUBE_NEAR / n:
        # Mirror tier: the offsets reflect, k32 - crit = -(k31 - crit).
        regime = "near"
        k32_asym = crit - m
    else:
        regime = "intermediate"
        k32_asym = math.nan
        if c1 != 0.0:
            if a * m > 0:
                zeta_signed = a * sigma * zeta
                predicted_sign = -int(math.copysign(1.0, zeta_signed))
            elif a * m < 0:
                predicted_sign = a
    return BandEdgeMatch(a=a, sigma=sigma, omega2=omega2, k32=k32, c1=c1,
                         c2=c2, zeta=zeta, margin_regime=regime,
                         k32_asymptotic=k32_asym,
                         predicted_sign=predicted_sign)


# --------------------------------------------------------------------------
# Near-band-edge existence report
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeWindow:
    omega2: float
    a: int
    sigma: int
    critical: float  # boundary stiffness enabling modes pinned at this edge
    sides_near: tuple[str, ...]  # which chain ends are near the critical value
    out_sign: Optional[int]  # required sign of k3 - critical for an
    # out-of-band mode near this edge (None when no out-of-band room)
    magnitude: Optional[str]  # size constraint on |k3 - critical|


@dataclass(frozen=True)
class NearEdgeReport:
    left_special: bool  # |k31 - k2| ~ k2
    right_special: bool
    max_at_band_edges: int
    out_of_band_count: int  # edge-state frequencies away from the edges
    windows: list[EdgeWindow]


def near_band_edge_existence(config: ChainConfig) -> NearEdgeReport:
    """Counting rules for frequencies at or near the band edges.

    Both boundaries generic: no band-edge frequencies and exactly two
    out-of-band (edge-state) frequencies.  One special boundary: at most
    one band-edge frequency plus one edge state.  Both special: at most
    two band-edge frequencies and no edge states.
    """
    k1, k2, n = config.k1, config.k2, config.n
    tube = TUBE_NEAR / n
    reg = classify_regime(config)
    left_special, right_special = (abs(m) <= tube for m in reg.tube_margins)

    windows = []
    for a, sigma in _EDGES:
        crit = k2 * (1 + sigma)
        sides = tuple(
            side for side, k3 in (("left", config.k31), ("right", config.k32))
            if abs(k3 - crit) <= tube)
        direction = _edge_out_direction(k1, k2, a, sigma)
        windows.append(EdgeWindow(
            omega2=_edge_omega2(k1, k2, a, sigma), a=a, sigma=sigma,
            critical=crit, sides_near=sides,
            out_sign=direction if direction != 0 else None,
            magnitude="Omega(1/n) <= |delta| << 1" if direction != 0 else None,
        ))

    n_special = int(left_special) + int(right_special)
    return NearEdgeReport(
        left_special=left_special, right_special=right_special,
        max_at_band_edges=n_special,
        out_of_band_count=2 - n_special,
        windows=windows,
    )


# --------------------------------------------------------------------------
# In-band patterns near the band edges
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class InBandEstimate:
    band: str  # "Acoustic" | "Optical"
    edge: str  # "Lower" | "Upper"
    pattern: str  # "Integer" | "HalfInteger" | "Shifted"
    gamma: Optional[float]  # arctan offset of the Shifted ladder
    delta_theta: list[float]  # first-order |theta - edge angle| for k = 1..k_max
    # Second-order series: delta_theta[k] + tilde_theta[k]/(n-1) refines
    # the angle estimate (two-term series in the boundary coefficient).
    tilde_theta: Optional[list[float]]
    delta_alpha: Optional[list[float]]
    delta_beta: Optional[list[float]]
    omega2: list[float]
    approx_modes: Optional[list[np.ndarray]]
    multiplier: Optional[list[int]]  # harmonic index per mode (k or 2k-1)


def _edge_value(k1: float, k2: float, band: str, edge: str) -> float:
    lo_band = (0.0, 2 * min(k1, k2))
    hi_band = (2 * max(k1, k2), 2 * (k1 + k2))
    sel = lo_band if band == "Acoustic" else hi_band
    return sel[0] if edge == "Lower" else sel[1]


def _margin_state(delta: float, n: int) -> str:
    if abs(delta) <= TUBE_NEAR / n:
        return "critical"
    if abs(delta) >= TUBE_FAR / n:
        return "generic"
    return "shifted"


def _canonical_lower_optical(k1: float, k2: float, kl: float, kr: float,
                             n: int, k_max: int):
    """Pattern data near theta = pi for an effective chain with k1 < k2,
    boundary stiffnesses (kl, kr), measured from the edge at 2 k2.

    Returns (pattern, gamma, base Delta-theta list, tilde series,
    Delta-alpha, Delta-beta, multipliers, flip_lr) in the canonical
    orientation; the caller undoes any parameter reflections.
    """
    dl, dr = kl - 2 * k2, kr - 2 * k2
    sl, sr = _margin_state(dl, n), _margin_state(dr, n)
    states = (sl, sr)

    gamma = None
    flip_lr = False
    if "shifted" in states:
        other = sr if sl == "shifted" else sl
        if sl == "shifted" and sr == "shifted" or other == "critical":
            raise PatternUndetermined(
                "both boundary offsets sit in the ambiguous window")
        # gamma from the shifted side's offset, self-consistent per rung.
        delta = dl if sl == "shifted" else dr
        # A negative offset pushes the first rung out of the band (into
        # the gap below 2 k2); the in-band ladder then starts one rung up.
        delta_star = -k1 * k2 / (n * (k2 - k1))
        offset = 1 if delta < delta_star else 0

        def rung(m: int) -> tuple[float, float]:
            dth = m * math.pi / (n - 1)
            for _ in range(3):
                dalpha = k2 * dth / (2 * (k2 - k1))
                g = math.atan(-2 * k1 * dalpha / delta)
                if g <= 0:
                    g += math.pi
                dth = ((m - 1) * math.pi + g) / (n - 1)
            return dth, g

        pattern = "Shifted"
        pairs = [rung(k + offset) for k in range(1, k_max + 1)]
        base = [dth for dth, _ in pairs]
        gamma = pairs[0][1]
        mult = None
    else:
        n_crit = states.count("critical")
        if n_crit == 1:
            pattern = "HalfInteger"
            base = [(k - 0.5) * math.pi / (n - 1) for k in range(1, k_max + 1)]
            mult = [2 * k - 1 for k in range(1, k_max + 1)]
            if sl == "critical":
                # Mirror so the generic boundary drives alpha/beta.
                kl, kr = kr, kl
                dl, dr = dr, dl
                flip_lr = True
        else:
            pattern = "Integer"
            base = [k * math.pi / (n - 1) for k in range(1, k_max + 1)]
            mult = list(range(1, k_max + 1))

    # Second-order series and boundary phases need a generic left side.
    tilde = dalpha = dbeta = None
    if pattern == "Integer" and sl == "generic" and sr == "generic":
        s_sum = ((2 * k1 + kl - 2 * k2) / (2 * k2 - kl)
                 + (2 * k1 + kr - 2 * k2) / (2 * k2 - kr))
        c = s_sum * k2 / (2 * (k2 - k1))
        tilde = [c * k * math.pi / (n - 1) + c * c * k * math.pi / (n - 1) ** 2
                 for k in range(1, k_max + 1)]
    elif pattern == "HalfInteger" and _margin_state(kl - 2 * k2, n) == "generic":
        c = (2 * k2 * (2 * k1 + kl - 2 * k2)
             / (4 * k1 * (k1 - k2) * (2 * k2 - kl)) + 0.5)
        tilde = [-c * (k - 0.5) * math.pi / (n - 1)
                 + c * c * (k - 0.5) * math.pi / (n - 1) ** 2
                 for k in range(1, k_max + 1)]
    if _margin_state(kl - 2 * k2, n) == "generic":
        dalpha = [k2 * dth / (2 * (k2 - k1)) for dth in base]
        dbeta = [(2 * k1 + kl - 2 * k2) / (2 * k2 - kl) * da for da in dalpha]
    return pattern, gamma, base, tilde, dalpha, dbeta, mult, flip_lr


def _pattern_mode(n: int, mult: int, da: float, db: float, dth: float) -> np.ndarray:
    """Approximate eigenvector built from the first-mode phases."""
    j = np.arange(1, n + 1)
    sign = (-1.0) ** (j - 1)
    u = np.empty(2 * n)
    u[0::2] = sign * np.sin(mult * (da + db - (j - 1) * dth))
    u[1::2] = sign * np.sin(mult * (-da + db - (j - 1) * dth))
    return u


def inband_pattern(config: ChainConfig, band: str, edge: str,
                   k_max: int) -> InBandEstimate:
    """Ladder of in-band frequencies counted from a band edge.

    The pattern is Integer when zero or two boundary stiffnesses sit at
    the edge's critical value (2 k2 for the upper band-edge pair, 0 for
    the lower pair), HalfInteger when exactly one does, and Shifted with
    a gamma offset when one offset is of size Theta(1/n).
    """
    if band not in ("Acoustic", "Optical") or edge not in ("Lower", "Upper"):
        raise ValueError("band must be Acoustic/Optical, edge Lower/Upper")
    k1, k2, n = config.k1, config.k2, config.n
    if k_max > n // 10:
        raise ValueError("k_max must not exceed n/10")
    e_val = _edge_value(k1, k2, band, edge)
    theta_pi = e_val in (2 * min(k1, k2), 2 * max(k1, k2)) and e_val != 0.0
    crit = 2 * k2 if e_val in (2 * k2, 2 * (k1 + k2)) else 0.0

    if theta_pi and k1 < k2:
        # Full analysis near theta = pi.  The edge at 2 k2 is canonical;
        # the edge at 2 k1 maps onto it by the exact spectral reflection
        # omega^2 -> 2(k1+k2) - omega^2, k3 -> 2 k2 - k3, u_j -> (-1)^j u_j.
        reflect = e_val == 2 * k1
        kl = 2 * k2 - config.k31 if reflect else config.k31
        kr = 2 * k2 - config.k32 if reflect else config.k32
        (pattern, gamma, base, tilde, dalpha, dbeta, mult,
         flip_lr) = _canonical_lower_optical(k1, k2, kl, kr, n, k_max)
        curv = k1 * k2 / (2 * (k2 - k1))
        omega2 = [2 * k2 + curv * dth * dth for dth in base]
        if reflect:
            omega2 = [2 * (k1 + k2) - w for w in omega2]
        modes = None
        if mult is not None and dalpha is not None and dbeta is not None:
            modes = [_pattern_mode(n, m, dalpha[0], dbeta[0], base[0])
                     for m in mult]
            if flip_lr:
                modes = [u[::-1] for u in modes]
            if reflect:
                parity = (-1.0) ** np.arange(2 * n)
                modes = [u * parity for u in modes]
        return InBandEstimate(band=band, edge=edge, pattern=pattern,
                              gamma=gamma, delta_theta=base,
                              tilde_theta=tilde, delta_alpha=dalpha,
                              delta_beta=dbeta, omega2=omega2,
                              approx_modes=modes, multiplier=mult)

    # Remaining edges: pattern and first-order frequencies only.
    states = (_margin_state(config.k31 - crit, n),
              _margin_state(config.k32 - crit, n))
    if "shifted" in states:
        raise PatternUndetermined(
            "boundary offset in the ambiguous window; no closed-form "
            "ladder for this edge")
    n_crit = states.count("critical")
    if n_crit == 1:
        pattern = "HalfInteger"
        base = [(k - 0.5) * math.pi / (n - 1) for k in range(1, k_max + 1)]
        mult = [2 * k - 1 for k in range(1, k_max + 1)]
    else:
        pattern = "Integer"
        base = [k * math.pi / (n - 1) for k in range(1, k_max + 1)]
        mult = list(range(1, k_max + 1))
    if theta_pi:
        curv = k1 * k2 / (2 * abs(k2 - k1))
        sgn = 1.0 if e_val == 2 * max(k1, k2) else -1.0
    else:
        curv = k1 * k2 / (2 * (k1 + k2))
        sgn = 1.0 if e_val == 0.0 else -1.0
    omega2 = [e_val + sgn * curv * dth * dth for dth in base]
    return InBandEstimate(band=band, edge=edge, pattern=pattern, gamma=None,
                          delta_theta=base, tilde_theta=None,
                          delta_alpha=None, delta_beta=None, omega2=omega2,
                          approx_modes=None, multiplier=mult)


# --------------------------------------------------------------------------
# Approximate-eigenvector error against exact diagonalization
# --------------------------------------------------------------------------

def _optical_lower_modes(config: ChainConfig):
    """Exact in-band modes of the upper band sorted up from its lower edge."""
    spec = full_spectrum(config)
    p = config.bulk
    (_, _), (op_lo, op_hi) = p.band_intervals()
    idx = [j for j, w2 in enumerate(spec.omega2) if op_lo < w2 < op_hi]
    return spec, idx


def approx_eigvec_error(config: ChainConfig, k: int) -> float:
    """Max-norm error of the harmonic approximation of the k-th in-band
    mode above the upper band's lower edge, built from the exact first
    mode's phases.

    Both vectors are normalized to unit max amplitude and sign-aligned;
    the error is expected to grow like k^3/n^3.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    est = inband_pattern(config, "Optical", "Lower", max(k, 1) + 1)
    if est.multiplier is None:
        raise PatternUndetermined("no harmonic approximation for this pattern")
    k1, k2, n = config.k1, config.k2, config.n

    spec, idx = _optical_lower_modes(config)
    w2_1 = float(spec.omega2[idx[0]])
    te1 = solve_decay(config.bulk, w2_1)
    dth1 = math.pi - te1.theta
    alpha1 = cmath.phase(cmath.sqrt(k1 + k2 * cmath.exp(-1j * te1.theta)))
    da1 = alpha1 + math.pi / 2
    ma1 = decompose(config, w2_1, spec.mode(idx[0]))
    db1 = ma1.beta if ma1.beta < math.pi / 2 else ma1.beta - math.pi

    mult = est.multiplier[k - 1]
    approx = _pattern_mode(n, mult, da1, db1, dth1)
    exact = spec.mode(idx[k - 1])

    approx = approx / np.max(np.abs(approx))
    exact = exact / np.max(np.abs(exact))
    return float(min(np.max(np.abs(exact - approx)),
                     np.max(np.abs(exact + approx))))


# --------------------------------------------------------------------------
# Odd chains: the exact mid-gap sublattice mode
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OddChainMidgap:
    omega2: float
    mode: np.ndarray  # normalized exact eigenvector, length 2n+1
    side: str  # localization side of the odd-sublattice envelope
    ratio: float  # per-cell amplitude ratio on the odd sublattice
    even_sublattice_max: float
    residual: float  # operator residual of the constructed mode
    omega2_numeric: float  # nearest eigenvalue of the assembled odd operator


def odd_chain_assemble(k1: float, k2: float, n: int):
    """Tridiagonal (diag, offdiag) of the 2n+1-site chain with boundary
    springs (k2, k1): every site then carries the same on-site sum."""
    size = 2 * n + 1
    off = np.empty(size - 1)
    off[0::2] = k1
    off[1::2] = k2
    diag = np.full(size, -(k1 + k2))
    return diag, off


def odd_chain_midgap(k1: float, k2: float, n: int) -> OddChainMidgap:
    """Exact mid-gap mode of the odd chain: omega^2 = k1 + k2, the even
    sublattice vanishes identically and the odd sublattice decays
    geometrically with ratio -k1/k2 (left-localized for k1 < k2)."""
    size = 2 * n + 1
    u = np.zeros(size)
    ratio = -k1 / k2
    u[0::2] = ratio ** np.arange(n + 1)
    u = u / np.linalg.norm(u)

    diag, off = odd_chain_assemble(k1, k2, n)
    # Residual of (L + (k1+k2) I) u = 0.
    lu = diag * u
    lu[:-1] += off * u[1:]
    lu[1:] += off * u[:-1]
    residual = float(np.max(np.abs(lu + (k1 + k2) * u)))

    vals = eigh_tridiagonal(diag, off, eigvals_only=True)
    omega2_all = -vals
    omega2_num = float(omega2_all[np.argmin(np.abs(omega2_all - (k1 + k2)))])

    side = "left" if abs(ratio) < 1 else "right"
    return OddChainMidgap(omega2=k1 + k2, mode=u, side=side, ratio=ratio,
                          even_sublattice_max=float(np.max(np.abs(u[1::2]))),
                          residual=residual, omega2_numeric=omega2_num)
