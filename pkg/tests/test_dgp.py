import numpy as np
import pytest

from mdhtest import DgpSpec, ExplosiveSample, MdhError, acf, mdd2, simulate
from mdhtest.dgp import MDS_IDS, NAMES, ConstantProcess


def test_iid_moments():
    x = simulate(1, 100_000, seed=0)
    assert abs(x.mean()) < 0.02
    assert x.var() == pytest.approx(1.0, abs=0.03)


def test_nlma_mean():
    x = simulate(9, 100_000, seed=0)
    assert x.mean() == pytest.approx(-0.6, abs=0.02)


def test_garch_is_uncorrelated_with_arch_effects():
    alpha, beta = 0.01, 0.97
    population = alpha * (1 - alpha * beta - beta**2) / (1 - 2 * alpha * beta - beta**2)
    assert population > 0.01
    level, squares = [], []
    for seed in range(10):
        x = simulate(2, 100_000, seed=seed)
        level.append(acf(x, [1])[0])
        squares.append(acf(x * x, [1])[0])
    assert abs(level[0]) < 0.02
    assert abs(np.mean(level)) < 0.02
    assert np.mean(squares) > 0.01


@pytest.mark.parametrize("dgp_id", sorted(NAMES))
def test_reproducible_and_finite(dgp_id):
    a = simulate(dgp_id, 200, seed=42)
    b = DgpSpec(dgp_id, 200, seed=42).generate()
    np.testing.assert_array_equal(a, b)
    assert a.shape == (200,)
    assert np.all(np.isfinite(a))
    assert not np.array_equal(a, simulate(dgp_id, 200, seed=43))


def test_window_innovations_independent_of_burnin():
    # the i.i.d. process has no state, so the window is unaffected by burn-in
    np.testing.assert_array_equal(simulate(1, 50, seed=3), simulate(1, 50, seed=3, burnin=100))


@pytest.mark.parametrize("dgp_id", [2, 3, 4, 5])
def test_burnin_sufficiency(dgp_id):
    a = simulate(dgp_id, 10_000, seed=1)
    b = simulate(dgp_id, 10_000, seed=1, burnin=1000)
    assert abs(a.var() / b.var() - 1) < 0.02


def test_nlma10_recursion():
    spec = DgpSpec(10, 5, seed=8)
    from mdhtest.dgp import _innovations

    e = _innovations(8, 2, 5)[0]
    expected = [e[t - 1] * e[t - 2] * (e[t - 2] + e[t] + 1) for t in range(2, 7)]
    np.testing.assert_allclose(spec.generate(), expected, rtol=1e-15)


def test_tar_recursion():
    from mdhtest.dgp import _innovations

    e = _innovations(4, 3, 6)[0]
    x, out = 0.0, []
    for v in e:
        x = (-1.5 * x if x < 0 else 0.5 * x) + v
        out.append(x)
    np.testing.assert_allclose(simulate(6, 6, seed=4, burnin=3), out[-6:], rtol=1e-15)


def test_mds_separation():
    m1 = np.median([mdd2(simulate(1, 300, seed=s), 1) for s in range(100)])
    m6 = np.median([mdd2(simulate(6, 300, seed=s), 1) for s in range(100)])
    assert m6 >= 5 * m1


def test_explosive_parameters_raise():
    with pytest.raises(ExplosiveSample):
        simulate(2, 500, seed=0, params=(0.9, 0.9))


def test_spec_validation():
    with pytest.raises(MdhError):
        DgpSpec(11)
    with pytest.raises(MdhError):
        DgpSpec(1, n=1)
    with pytest.raises(MdhError):
        DgpSpec(2, burnin=-5)


def test_spec_properties():
    spec = DgpSpec(7)
    assert spec.label == "DGP7" and spec.name == "Bilinear"
    assert spec.effective_params == (0.15, 0.05)
    assert spec.effective_burnin == 500
    assert DgpSpec(9).effective_burnin == 2
    assert DgpSpec(1).effective_params is None
    assert MDS_IDS == {1, 2, 3, 4, 5}


def test_constant_process():
    proc = ConstantProcess(2.5).with_n_seed(7, 1)
    np.testing.assert_array_equal(proc.generate(), np.full(7, 2.5))
