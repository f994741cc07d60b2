import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainspectra.eigensolver import (
    ChainConfig,
    assemble,
    dense_operator,
    frequency_derivative,
    full_spectrum,
    operator_norm,
    residuals,
)

stiffness = st.floats(min_value=0.2, max_value=5.0)
boundary = st.floats(min_value=0.0, max_value=6.0)


def random_config(rng, n_max=100):
    return ChainConfig(
        n=int(rng.integers(2, n_max + 1)),
        k1=float(rng.uniform(0.2, 5)),
        k2=float(rng.uniform(0.2, 5)),
        k31=float(rng.uniform(0, 6)),
        k32=float(rng.uniform(0, 6)),
    )


def test_assemble_example():
    d, e = assemble(ChainConfig(n=2, k1=1, k2=2.3, k31=0, k32=0))
    assert np.allclose(d, [-1, -3.3, -3.3, -1])
    assert np.allclose(e, [1, 2.3, 1])


def test_assemble_diagonal_dominance():
    cfg = ChainConfig(n=5, k1=1.0, k2=2.3, k31=1.3, k32=3.5)
    d, e = assemble(cfg)
    pad = np.concatenate(([0.0], e, [0.0]))
    assert np.all(pad[:-1] + pad[1:] <= np.abs(d) + 1e-14)


def test_free_chain_rigid_mode():
    spec = full_spectrum(ChainConfig(n=2, k1=1, k2=1, k31=0, k32=0))
    assert np.min(np.abs(spec.eigenvalues)) <= 1e-12
    assert np.all(spec.eigenvalues <= 0)


def test_dense_oracle_small_chains():
    rng = np.random.default_rng(42)
    for _ in range(50):
        cfg = random_config(rng, n_max=6)
        spec = full_spectrum(cfg)
        oracle = np.linalg.eigvalsh(dense_operator(cfg))
        assert np.max(np.abs(np.sort(spec.eigenvalues) - oracle)) <= 1e-10


def test_residuals_and_signs():
    rng = np.random.default_rng(7)
    for _ in range(20):
        cfg = random_config(rng)
        spec = full_spectrum(cfg)
        assert np.max(residuals(spec)) <= 1e-10 * operator_norm(cfg)
        # Sign convention: largest-magnitude component positive.
        for j in range(spec.eigenvectors.shape[1]):
            u = spec.eigenvectors[:, j]
            assert u[np.argmax(np.abs(u))] > 0
            assert abs(np.linalg.norm(u) - 1) <= 1e-12


def test_eigenvalues_distinct_and_negative():
    rng = np.random.default_rng(3)
    for _ in range(30):
        cfg = random_config(rng)
        spec = full_spectrum(cfg)
        assert np.all(spec.eigenvalues <= 0)
        if cfg.k31**2 + cfg.k32**2 != 0:
            assert np.all(spec.eigenvalues < 0)
        gaps = np.diff(spec.eigenvalues)
        # Strict distinctness away from the two-sided tube, where the
        # true gap is Theta(|a|^n) and may underflow double precision.
        if abs(cfg.k31 - cfg.k32) > 0.05:
            assert np.min(gaps) > 1e-14 * operator_norm(cfg)
        else:
            assert np.min(gaps) >= 0


def test_fig2_out_of_band_count():
    # 2n = 100, k1 = 1, k2 = 2.3, k31 = 1.3, k32 = 4.6: at most two
    # squared frequencies outside [0, 2] union [4.6, 6.6].
    cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=1.3, k32=4.6)
    spec = full_spectrum(cfg)
    w2 = spec.omega2
    outside = np.sum(~((w2 <= 2 + 1e-9) | ((w2 >= 4.6 - 1e-9) & (w2 <= 6.6 + 1e-9))))
    assert outside <= 2


def test_mirror_symmetry():
    cfg = ChainConfig(n=50, k1=1, k2=2.3, k31=1.5, k32=1.5)
    spec = full_spectrum(cfg)
    for j in range(spec.eigenvectors.shape[1]):
        u = spec.eigenvectors[:, j]
        rev = u[::-1]
        assert min(np.max(np.abs(u - rev)), np.max(np.abs(u + rev))) <= 1e-8


def test_monotonicity_in_boundary_stiffness():
    rng = np.random.default_rng(11)
    for _ in range(10):
        cfg = random_config(rng, n_max=30)
        spec = full_spectrum(cfg)
        base = spec.eigenvalues
        norm = operator_norm(cfg)
        m = len(base)
        for field, end in (("k31", "left"), ("k32", "right")):
            bumped = ChainConfig(**{**cfg.__dict__, field: getattr(cfg, field) + 0.1})
            moved = full_spectrum(bumped).eigenvalues - base
            # Never increases (up to solver resolution); strictly
            # decreases wherever the analytic derivative -|u_end|^2
            # predicts a resolvable change.
            assert np.all(moved <= 1e-12 * norm)
            for j in range(m):
                if -frequency_derivative(spec, j, end) * 0.1 > 1e-9 * norm:
                    assert moved[m - 1 - j] < 0


def test_frequency_derivative_against_finite_difference():
    rng = np.random.default_rng(5)
    for _ in range(10):
        cfg = random_config(rng, n_max=20)
        spec = full_spectrum(cfg)
        h = 1e-6
        for end, field in (("left", "k31"), ("right", "k32")):
            dn_val = getattr(cfg, field) - h
            if dn_val < 0:
                continue
            # Independent oracle route: dense-accuracy QR eigenvalues.
            from scipy.linalg import eigvalsh_tridiagonal

            up_cfg = ChainConfig(**{**cfg.__dict__, field: getattr(cfg, field) + h})
            dn_cfg = ChainConfig(**{**cfg.__dict__, field: dn_val})
            up = eigvalsh_tridiagonal(*assemble(up_cfg))
            dn = eigvalsh_tridiagonal(*assemble(dn_cfg))
            fd = (up - dn) / (2 * h)
            # eigenvalues ascending in lambda = -omega^2: mode j of
            # ascending omega^2 is lambda index 2n-1-j
            m = len(fd)
            for j in range(m):
                d = frequency_derivative(spec, j, end)
                assert d < 0
                if abs(d) > 1e-2:
                    assert abs(d - fd[m - 1 - j]) <= 1e-5 * abs(d)
                else:
                    # Below the finite-difference noise floor
                    # (eigenvalue rounding / 2h) only absolute
                    # agreement is meaningful.
                    assert abs(d - fd[m - 1 - j]) <= 1e-7


@given(n=st.integers(2, 12), k1=stiffness, k2=stiffness, k31=boundary, k32=boundary)
@settings(max_examples=60, deadline=None)
def test_spectrum_properties(n, k1, k2, k31, k32):
    cfg = ChainConfig(n=n, k1=k1, k2=k2, k31=k31, k32=k32)
    spec = full_spectrum(cfg)
    assert len(spec.eigenvalues) == 2 * n
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    # Residuals are solver-accurate except for nearly degenerate
    # two-sided pairs, where they are limited by the pair splitting.
    norm = operator_norm(cfg)
    lam = spec.eigenvalues
    pad = np.concatenate(([np.inf], np.diff(lam), [np.inf]))
    nn_gap = np.minimum(pad[:-1], pad[1:])
    assert np.all(residuals(spec) <= 1e-10 * norm + 10 * np.where(
        nn_gap < 1e-6 * norm, nn_gap, 0.0))
    oracle = np.linalg.eigvalsh(dense_operator(cfg))
    assert np.max(np.abs(spec.eigenvalues - oracle)) <= 1e-10 * max(1, operator_norm(cfg))
