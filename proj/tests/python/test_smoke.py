import math

import pytest

import moskalloc as ma


def make_user(reservoir=6e8, release=4e4):
    u = ma.TransmitterConfig()
    u.n_low = reservoir
    u.n_high = reservoir
    u.c_init = 0.5
    u.n_release = release
    return u


def test_thermo_roundtrip():
    env = ma.Environment()
    u = make_user()
    fr = ma.fractions_after_energy(u, env, 2e-16)
    assert fr.c_low == pytest.approx(0.49363706765509117, rel=1e-12)
    back = ma.energy_cost_exact(u, env, fr.moved)
    assert abs(back - 2e-16) / 2e-16 <= fr.beta**2
    assert fr.within_small_move_domain()


def test_analytic_ber():
    env = ma.Environment()
    r = ma.transmitter_ber(make_user(), env, 2e-16)
    assert r.ber == pytest.approx(0.0054579585446499409, rel=1e-12)
    assert ma.transmitter_ber(make_user(), env, 0.0).ber == pytest.approx(0.5, abs=1e-10)
    assert ma.std_normal_cdf(0.0) == 0.5


def test_exact_tail():
    u = make_user(2e5, 2001)
    st = ma.IntegerReservoirState()
    st.k1_low = 102000
    st.k2_low = 98000
    st.k1_high = 98000
    st.k2_high = 102000
    assert ma.hypergeom_tail_bit0(st, u) == pytest.approx(0.81576981905892882, rel=1e-12)


def test_trials_are_deterministic():
    env = ma.Environment()
    u = make_user(2e5, 2001)
    st = ma.build_state(u, env, 0.0)
    a = ma.run_trials(st, u, 20000, 7)
    b = ma.run_trials(st, u, 20000, 7, 4)
    assert a.correct0 == b.correct0
    assert a.correct1 == b.correct1
    assert abs(a.ber - 0.5) <= 3 * math.sqrt(0.25 / 20000)


def test_two_user_optimum():
    p = ma.OptimizationProblem()
    p.users = [make_user(), make_user()]
    p.e_total = 4e-16
    a = ma.optimize_two_user(p)
    assert a.rho[0] == pytest.approx(0.5, abs=1e-3)
    assert a.total_ber == pytest.approx(0.0109159170893, rel=1e-9)


def test_projection_and_errors():
    proj = ma.project_to_simplex([3e-16, -1e-16, 5e-16], 4e-16)
    assert sum(proj) == pytest.approx(4e-16, rel=1e-12)
    assert min(proj) >= 0.0

    p = ma.OptimizationProblem()
    p.users = [make_user(), make_user()]
    p.e_total = 4e-12
    ga = ma.GaSettings()
    with pytest.raises(ma.InfeasibleError):
        ma.optimize_ga(p, ga)

    with pytest.raises(ma.ConfigError):
        ma.preset("fig9")


def test_presets():
    names = ma.preset_names()
    assert names == ["fig3", "fig4", "fig5", "fig6"]
    fig5 = ma.preset("fig5")
    assert len(fig5.users) == 3
    assert fig5.users[2].n_low == 9e8
