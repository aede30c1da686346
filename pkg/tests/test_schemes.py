import numpy as np
import pytest

from llgsp.grid import Grid, VectorField, error_norms, norm_drift
from llgsp.manufactured import get_case, ic
from llgsp.schemes import (DegenerateStateError, Scheme, SchemeConfig, Stepper, evolve, step_full_llg,
                           step_gspm, step_scheme_a, step_scheme_b_damp, step_scheme_b_nodamp,
                           step_scheme_i, step_times)
from llgsp.sources import CompositeSource, ManufacturedSource

ALL = list(Scheme)


@pytest.mark.parametrize("scheme", ALL)
@pytest.mark.parametrize("cells", [(16,), (4, 5), (4, 4, 4)])
def test_uniform_state_is_fixed_point(scheme, cells):
    grid = Grid(cells)
    m = VectorField.uniform(grid, (0.6, 0.0, 0.8)).values
    out = Stepper(grid, SchemeConfig(scheme=scheme, dt=0.05)).step(m, 0.0, 0.05)
    assert np.max(np.abs(out - m)) <= 1e-14


@pytest.mark.parametrize("scheme", [s for s in ALL if s is not Scheme.GSPM])
def test_rotation_schemes_preserve_norm_every_step(scheme):
    grid = Grid((200,))
    drifts = []
    evolve(ic("1d_sin001", grid), SchemeConfig(scheme=scheme, dt=0.01, t_final=0.1),
           observers=[lambda n, t, m: drifts.append(norm_drift(m))])
    assert len(drifts) == 11 and max(drifts) <= 1e-12


def test_gspm_projection_is_exact():
    grid = Grid((3, 4, 5))
    report = evolve(ic("3d_cospix_cospiy_cospiz", grid), SchemeConfig(scheme="GSPM", dt=0.01, t_final=0.05))
    assert report.max_drift <= 5 * np.finfo(float).eps


def test_gspm_degenerate_state(monkeypatch):
    grid = Grid((4,))
    st = Stepper(grid, SchemeConfig(scheme="GSPM", dt=0.1))
    monkeypatch.setattr(st, "damping", lambda mt, t1, dt: np.zeros_like(mt))
    with pytest.raises(DegenerateStateError):
        st.step(ic("1d_sin001", grid).values, 0.0, 0.1)


@pytest.mark.parametrize("damped,plain", [(Scheme.A_DAMP, Scheme.A_NODAMP), (Scheme.B_DAMP, Scheme.B_NODAMP)])
def test_alpha_zero_collapse(damped, plain):
    grid = Grid((6, 6, 6))
    m = ic("3d_cospix_cospiy_cospiz", grid).values
    a = Stepper(grid, SchemeConfig(scheme=damped, dt=1e-3, alpha=0.0)).step(m, 0.0, 1e-3)
    b = Stepper(grid, SchemeConfig(scheme=plain, dt=1e-3, alpha=0.0)).step(m, 0.0, 1e-3)
    assert np.max(np.abs(a - b)) <= 1e-14


def test_full_llg_equals_b_damp_without_source():
    grid = Grid((50,))
    m = ic("1d_sin001", grid)
    cfg = SchemeConfig(dt=1e-3)
    np.testing.assert_array_equal(step_full_llg(m, cfg).values, step_scheme_b_damp(m, cfg).values)


def test_named_step_functions_dispatch():
    grid = Grid((20,))
    m = ic("3d_x_plus_t", grid)
    cfg = SchemeConfig(dt=1e-3)
    for fn, scheme in [(step_gspm, "GSPM"), (step_scheme_i, "SchemeI"), (step_scheme_b_nodamp, "B_NoDamp")]:
        ref = Stepper(grid, SchemeConfig(scheme=scheme, dt=1e-3)).step(m.values, 0.0, 1e-3)
        np.testing.assert_array_equal(fn(m, cfg).values, ref)
    for damped, scheme in [(True, "A_Damp"), (False, "A_NoDamp")]:
        ref = Stepper(grid, SchemeConfig(scheme=scheme, dt=1e-3)).step(m.values, 0.0, 1e-3)
        np.testing.assert_array_equal(step_scheme_a(m, cfg, damped).values, ref)


def test_composite_source_parallel_field_fixed_point():
    grid = Grid((8,))
    m = VectorField.uniform(grid, (0, 0, 1)).values
    src = CompositeSource(q=0.5, applied=(0.0, 0.0, 3.0))
    out = Stepper(grid, SchemeConfig(scheme="FullLLG", dt=0.1), src).step(m, 0.0, 0.1)
    assert np.max(np.abs(out - m)) <= 1e-15


def test_anisotropy_pulls_toward_easy_axis():
    grid = Grid((4,))
    v = np.array([np.sin(0.5), 0.0, np.cos(0.5)])
    m0 = VectorField.uniform(grid, v)
    # easy axis is e1: the energy penalises the second and third components
    out = evolve(m0, SchemeConfig(scheme="FullLLG", dt=0.01, t_final=1.0, alpha=0.5, q=1.0))
    assert out.final.values[0, 0] > v[0]


def test_step_times():
    assert step_times(0.1, 0.02) == pytest.approx([0.02, 0.04, 0.06, 0.08, 0.1])
    assert step_times(0.1, 0.03) == pytest.approx([0.03, 0.06, 0.09, 0.1])
    assert step_times(0.0, 0.1) == []
    assert step_times(0.1, 0.1 / 57)[-1] == 0.1


def test_evolve_zero_steps_and_count():
    grid = Grid((10,))
    m0 = ic("1d_sin001", grid)
    r = evolve(m0, SchemeConfig(dt=0.01, t_final=0.0))
    assert r.steps == 0 and r.t_final == 0.0 and len(r.energy_trace) == 1
    np.testing.assert_array_equal(r.final.values, m0.values)
    r = evolve(m0, SchemeConfig(dt=0.1 / 40, t_final=0.1))
    assert r.steps == 40 and r.t_final == pytest.approx(0.1)
    with pytest.raises(ValueError, match="unit length"):
        evolve(VectorField(grid, 2 * m0.values), SchemeConfig())


def test_evolve_records_divergence():
    grid = Grid((16,))
    src = CompositeSource(applied=(1e100, 0.0, 0.0))
    r = evolve(ic("1d_sin001", grid), SchemeConfig(scheme="B_Damp", dt=0.01, t_final=0.1), src)
    assert r.diverged and r.divergence_step == 1 and r.steps == 0
    assert r.summary()["divergence_step"] == 1


def test_config_validation():
    for kw in [dict(dt=0.0), dict(alpha=-1.0), dict(epsilon=0.0), dict(q=-0.1), dict(solver="lu"),
               dict(t_final=-1.0), dict(scheme="C")]:
        with pytest.raises(ValueError):
            SchemeConfig(**kw)
    assert SchemeConfig(scheme="B_NoDamp", alpha=0.3).damping == 0.0
    assert SchemeConfig(scheme="B_Damp", alpha=0.3).damping == 0.3


def test_local_error_is_second_order():
    case = get_case("1d")
    grid = Grid((400,))
    m0 = case.sample(grid, 0.0).values
    errs = []
    for dt in (2e-3, 1e-3):
        st = Stepper(grid, SchemeConfig(dt=dt), ManufacturedSource(case, 0.01))
        errs.append(np.max(np.abs(st.step(m0, 0.0, dt) - case.exact(grid.coords, dt))))
    assert 3.0 < errs[0] / errs[1] < 5.0


def test_scheme_i_step_restriction():
    # stable well below h^2, unstable at a quarter of it
    case = get_case("1d")
    grid = Grid((20,))
    h = 1.0 / 20
    out = {}
    for k in (h * h / 16, h * h / 4):
        r = evolve(case.sample(grid, 0.0), SchemeConfig(scheme="SchemeI", dt=k, t_final=0.1),
                   ManufacturedSource(case, 0.01))
        out[k] = error_norms(r.final.values, case.exact(grid.coords, r.t_final), grid)[0]
    assert out[h * h / 16] < 1e-3 and out[h * h / 4] > 0.5


def test_cg_backend_agrees_with_dct():
    grid = Grid((6, 6, 6))
    m = ic("3d_xyz", grid).values
    a = Stepper(grid, SchemeConfig(dt=1e-2)).step(m, 0.0, 1e-2)
    b = Stepper(grid, SchemeConfig(dt=1e-2, solver="cg")).step(m, 0.0, 1e-2)
    assert np.max(np.abs(a - b)) <= 1e-10
