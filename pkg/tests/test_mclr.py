import numpy as np
import pytest

import probsens as ps
from probsens.mclr import DensityGrid

IDENTITY = ps.InputModel((ps.normal(1.0, 0.2),))
H = staticmethod(lambda x: x[:, 0])


def identity_h(x):
    return x[:, 0]


def g_scalar(v):
    return np.asarray(v, dtype=float)


@pytest.fixture(scope="module")
def batch():
    return ps.sample(IDENTITY, 100000, seed=1)


def test_pf_threshold_below_all_samples(batch):
    spec = ps.FailureSpec(g=g_scalar, z=-100.0, direction="above")
    pf, se = ps.estimate_pf(identity_h, spec, batch)
    assert pf == 1.0
    assert se == 0.0


def test_pf_at_mean_by_symmetry(batch):
    spec = ps.FailureSpec(g=g_scalar, z=1.0, direction="below")
    pf, se = ps.estimate_pf(identity_h, spec, batch)
    assert abs(pf - 0.5) <= 3 * se


def test_pf_at_median_is_half(batch):
    z = float(np.median(batch.draws[:, 0]))
    for direction in ("above", "below"):
        pf, _ = ps.estimate_pf(identity_h, ps.FailureSpec(g=g_scalar, z=z, direction=direction), batch)
        assert abs(pf - 0.5) <= 1.0 / batch.n + 1e-12


def test_gradient_is_mean_score_when_always_failing(batch):
    spec = ps.FailureSpec(g=g_scalar, z=-100.0, direction="above")
    res = ps.estimate_gradient(identity_h, spec, batch)
    assert res.p_f == 1.0
    # P_f == 1 is parameter independent; gradient is the (zero-mean) score mean
    assert np.all(np.abs(res.gradient) <= 5 * res.grad_std_err)


def test_gradient_closed_form_at_mean(batch):
    # CDF convention at z = mu: d/dmu = -p(mu) = -1.9947, d/dsigma = 0
    spec = ps.FailureSpec(g=g_scalar, z=1.0, direction="below")
    res = ps.estimate_gradient(identity_h, spec, batch)
    assert res.gradient[0] == pytest.approx(-1.9947, rel=0.02)
    assert abs(res.gradient[1]) <= 5 * res.grad_std_err[1]
    assert res.grad_norm_sq == pytest.approx(float(res.gradient @ res.gradient))


def test_gradient_vs_fd_step_1e3(batch):
    # explicit 1e-3 steps; agreement wherever |component| > 0.1
    for pct in (10, 30, 50, 70, 90):
        z = float(np.percentile(batch.draws[:, 0], pct))
        spec = ps.FailureSpec(g=g_scalar, z=z, direction="below")
        res = ps.estimate_gradient(identity_h, spec, batch)
        fd = ps.estimate_gradient_fd(identity_h, spec, IDENTITY, batch, steps=[1e-3, 1e-3])
        for gj, fj in zip(res.gradient, fd):
            if abs(gj) > 0.1:
                assert abs(gj - fj) / abs(gj) < 0.02


def test_curve_median_and_monotonicity(batch):
    curve = ps.sensitivity_curve(identity_h, g_scalar, range(5, 100, 5), batch, direction="above")
    pfs = np.array([r.p_f for r in curve])
    zs = np.array([r.z for r in curve])
    assert np.all(np.diff(zs) > 0)
    assert np.all(np.diff(pfs) <= 0)  # non-increasing in z for exceedance
    mid = curve[len(curve) // 2]
    assert abs(mid.p_f - 0.5) <= 1.0 / batch.n + 1e-12


def test_curve_bell_with_flat_top(batch):
    # norm^2 peaks near y = mu and falls toward both tails
    curve = ps.sensitivity_curve(identity_h, g_scalar, range(1, 100), batch, direction="below")
    norms = np.array([r.grad_norm_sq for r in curve])
    zs = np.array([r.z for r in curve])
    peak_z = zs[norms.argmax()]
    assert abs(peak_z - 1.0) < 0.05
    assert norms[0] < 0.5 * norms.max()
    assert norms[-1] < 0.5 * norms.max()


def test_curve_rejects_bad_percentiles(batch):
    with pytest.raises(ps.ParameterDomainError):
        ps.sensitivity_curve(identity_h, g_scalar, [0.0, 50.0], batch)


def test_degenerate_output_flagged(batch):
    with pytest.warns(RuntimeWarning, match="degenerate"):
        ps.sensitivity_curve(identity_h, lambda v: np.zeros(len(v)), [50.0], batch)


def test_nonfinite_output_reports_draw_index():
    m = ps.InputModel((ps.normal(0.0, 1.0),))
    b = ps.sample(m, 64, seed=0)

    def bad_h(x):
        out = x[:, 0].copy()
        out[5] = np.nan
        return out

    with pytest.raises(ps.EvaluationError, match="draw 5"):
        ps.evaluate_outputs(bad_h, b.draws, chunk=64)


# ---------------------------------------------------------------------------
# density grids


@pytest.fixture(scope="module")
def grid(batch):
    return ps.estimate_output_density(batch.draws[:, 0], batch.scores)


def test_density_matches_normal_pdf(grid):
    i = int(np.argmin(np.abs(grid.axes[0] - 1.0)))
    assert grid.density[i] == pytest.approx(1.9947, rel=0.05)


def test_density_mass_invariant(grid):
    assert 0.98 <= grid.mass() <= 1.0 + 1e-9


def test_density_grad_mass_invariant(grid):
    for j in range(2):
        assert abs(grid.grad_mass(j)) <= 0.02


def test_density_grad_matches_closed_form(grid):
    # dp/dmu = (y - mu)/sigma^2 * p(y) for the identity case
    y = grid.axes[0]
    p_exact = np.exp(-0.5 * ((y - 1.0) / 0.2) ** 2) / (0.2 * np.sqrt(2 * np.pi))
    expected = (y - 1.0) / 0.04 * p_exact
    mask = grid.density > 0.1 * grid.density.max()
    # exclude the sign change at y = mu where relative error is undefined
    mask &= np.abs(expected) > 0.1 * np.abs(expected).max()
    rel = np.abs(grid.density_grad[0][mask] - expected[mask]) / np.abs(expected[mask])
    assert rel.max() < 0.10


def test_density_input_contracts(batch):
    with pytest.raises(ps.ContractError):
        ps.estimate_output_density(batch.draws[:500, 0], batch.scores[:500])
    with pytest.raises(ps.ParameterDomainError):
        ps.estimate_output_density(batch.draws[:, 0], batch.scores, bandwidth=0.0)
    with pytest.raises(ps.ContractError):
        ps.estimate_output_density(np.zeros((2000, 3)), np.zeros((2000, 2)))
    with pytest.raises(ps.ContractError):  # fixed grid of the wrong dimension
        ps.estimate_output_density(
            batch.draws[:, 0], batch.scores, axes=(np.linspace(0, 2, 64), np.linspace(0, 2, 64))
        )


def test_output_fim_identity_trace(grid):
    f = ps.estimate_output_fim(grid)
    assert f.trace == pytest.approx(75.0, rel=0.10)
    assert np.array_equal(f.matrix, f.matrix.T)  # symmetric by construction
    assert f.min_eigenvalue() >= -1e-8 * f.trace


@pytest.mark.parametrize("sigma", [0.1, 0.2, 0.4])
def test_output_fim_scale_check(sigma):
    # doubling sigma quarters the information entries: tr = 3/sigma^2
    m = ps.InputModel((ps.normal(1.0, sigma),))
    b = ps.sample(m, 100000, seed=6)
    dg = ps.estimate_output_density(b.draws[:, 0], b.scores)
    f = ps.estimate_output_fim(dg)
    assert f.trace == pytest.approx(3.0 / sigma**2, rel=0.10)


def _exact_grid(mu, sigma, axes, n_params=1):
    from probsens.bounds import normal_pdf_grid

    density = normal_pdf_grid(axes[0], mu, sigma)
    return DensityGrid(
        axes=axes,
        density=density,
        density_grad=np.zeros((n_params, axes[0].size)),
        bandwidth=np.array([0.0]),
    )


def test_kl_identical_inputs_is_zero(grid):
    assert ps.estimate_kl(grid, grid) == pytest.approx(0.0, abs=1e-12)


def test_kl_exact_normal_shift():
    axes = (np.linspace(-6.0, 6.0, 2048),)
    dg0 = _exact_grid(0.0, 1.0, axes)
    dg1 = _exact_grid(0.1, 1.0, axes)
    kl = ps.estimate_kl(dg0, dg1)
    assert kl == pytest.approx(0.1**2 / 2.0, rel=0.02)
    assert ps.estimate_kl(dg0, dg0) == 0.0
    assert kl >= -1e-6


def test_kl_grid_mismatch_is_contract_error(grid):
    other = DensityGrid(
        axes=(grid.axes[0] + 1.0,),
        density=grid.density,
        density_grad=grid.density_grad,
        bandwidth=grid.bandwidth,
    )
    with pytest.raises(ps.ContractError):
        ps.estimate_kl(grid, other)


def test_kl_quadratic_consistency_identity(batch, grid):
    db = np.array([0.002, 0.002])  # 0.01 * sigma per parameter
    b2 = ps.sample(IDENTITY.shifted(db), 100000, seed=1)
    dg2 = ps.estimate_output_density(
        b2.draws[:, 0], b2.scores, bandwidth=grid.bandwidth, axes=grid.axes
    )
    f = IDENTITY.fim()
    for kl in (ps.estimate_kl(grid, dg2), ps.estimate_kl(dg2, grid)):
        assert ps.kl_quadratic_consistency(f, db, kl) < 0.05
