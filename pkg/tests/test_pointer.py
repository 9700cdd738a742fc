import numpy as np
import pytest
from scipy.integrate import quad

from weaklogic.core import Operator, basis_state, identity, make_state, projector
from weaklogic.errors import FitUnstable, NotHermitian, PostSelectionVanished, ValidationError
from weaklogic.pointer import PointerGrid, extract_weak_value, simulate
from weaklogic.scenarios import hardy_scenario
from weaklogic.weak import weak_value

from conftest import random_state, random_unitary


@pytest.fixture(scope="module")
def hardy_nono():
    s = hardy_scenario()
    return s.observable("N_NO,NO"), s.pre, s.post


def quad_oracle(a, pre, post, g, sigma=1.0):
    """Mean position and post-selection probability by adaptive quadrature."""
    vals, vecs = np.linalg.eigh(a.matrix)
    amps = [np.vdot(post.amplitudes, vecs[:, k]) * np.vdot(vecs[:, k], pre.amplitudes) for k in range(len(vals))]

    def psi(x):
        return sum(c * (2 * np.pi * sigma**2) ** -0.25 * np.exp(-(x - g * lam) ** 2 / (4 * sigma**2))
                   for c, lam in zip(amps, vals))

    norm = quad(lambda x: abs(psi(x)) ** 2, -np.inf, np.inf, epsabs=1e-14)[0]
    first = quad(lambda x: x * abs(psi(x)) ** 2, -np.inf, np.inf, epsabs=1e-14)[0]
    return first / norm, norm


def test_grid_validation():
    with pytest.raises(ValidationError):
        PointerGrid(num_points=32)
    with pytest.raises(ValidationError):
        PointerGrid(extent=5.0, sigma=1.0)
    grid = PointerGrid(64, 6.0, 1.0)
    assert grid.norm(grid.gaussian()) == pytest.approx(1, abs=1e-8)
    assert grid.spacing == pytest.approx(12 / 63)


def test_zero_coupling(hardy_nono):
    a, pre, post = hardy_nono
    st = simulate(a, pre, post, 0.0)
    assert st.mean_position == pytest.approx(0, abs=1e-12)
    assert st.post_selection_probability == pytest.approx(1 / 12, abs=1e-8)


@pytest.mark.parametrize("g", [0.01, 0.3, 2.0])
def test_identity_shifts_uniformly(rng, g):
    pre, post = random_state(rng, 3), random_state(rng, 3)
    st = simulate(identity(3), pre, post, g)
    assert st.mean_position == pytest.approx(g, abs=1e-10)
    assert st.post_selection_probability == pytest.approx(abs(np.vdot(post.amplitudes, pre.amplitudes)) ** 2, abs=1e-10)


def test_matches_quadrature(hardy_nono, rng):
    a, pre, post = hardy_nono
    for g in (0.05, 0.5):
        mean, prob = quad_oracle(a, pre, post, g)
        st = simulate(a, pre, post, g)
        assert st.mean_position == pytest.approx(mean, abs=1e-10)
        assert st.post_selection_probability == pytest.approx(prob, abs=1e-10)
    h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    a = Operator((h + h.conj().T) / 2)
    pre, post = random_state(rng, 3), random_state(rng, 3)
    mean, prob = quad_oracle(a, pre, post, 0.2)
    st = simulate(a, pre, post, 0.2)
    assert st.mean_position == pytest.approx(mean, abs=1e-9)
    assert st.post_selection_probability == pytest.approx(prob, abs=1e-10)


def test_small_coupling_ratio_tends_to_weak_value(hardy_nono):
    a, pre, post = hardy_nono
    errors = [abs(simulate(a, pre, post, g).mean_position / g + 1) for g in (0.1, 0.01, 0.001)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 1e-5


def test_first_order_law(rng):
    a = projector(random_state(rng, 3))
    pre, post = random_state(rng, 3), random_state(rng, 3)
    w = weak_value(a, pre, post)
    gs = np.array([0.1, 0.03, 0.01])
    residual = np.array([abs(simulate(a, pre, post, g).mean_position / g - w.real) for g in gs])
    assert np.all(np.diff(residual) < 0)
    c = residual / gs**2
    assert np.max(c) / np.min(c) < 2  # residual scales like g^2


def test_momentum_methods_agree(rng):
    a = projector(random_state(rng, 2))
    pre, post = random_state(rng, 2), random_state(rng, 2)
    for g in (0.02, 0.4):
        analytic = simulate(a, pre, post, g, momentum="analytic")
        fft = simulate(a, pre, post, g, momentum="fft")
        assert fft.mean_momentum == pytest.approx(analytic.mean_momentum, abs=1e-9)
    with pytest.raises(ValueError):
        simulate(a, pre, post, 0.1, momentum="guess")


def test_unitarity(rng):
    for _ in range(5):
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        a = Operator((h + h.conj().T) / 2)
        st = simulate(a, random_state(rng, 4), random_state(rng, 4), 0.3)
        assert st.joint_norm == pytest.approx(1, abs=1e-10)


def test_post_selection_probability_converges(hardy_nono):
    a, pre, post = hardy_nono
    gaps = [abs(simulate(a, pre, post, g).post_selection_probability - 1 / 12) for g in (0.1, 0.01, 0.001)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_grid_independence(hardy_nono):
    a, pre, post = hardy_nono
    coarse = simulate(a, pre, post, 0.02, PointerGrid(1024, 10.0))
    fine = simulate(a, pre, post, 0.02, PointerGrid(2048, 10.0))
    assert abs(coarse.mean_position - fine.mean_position) < 1e-6
    est_c, _ = extract_weak_value(a, pre, post, [0.05, 0.02, 0.01], PointerGrid(1024, 10.0))
    est_f, _ = extract_weak_value(a, pre, post, [0.05, 0.02, 0.01], PointerGrid(2048, 10.0))
    assert abs(est_c - est_f) < 1e-6


def test_deterministic(hardy_nono):
    a, pre, post = hardy_nono
    assert simulate(a, pre, post, 0.03) == simulate(a, pre, post, 0.03)


def test_simulate_errors():
    with pytest.raises(NotHermitian):
        simulate(Operator([[0, 1], [0, 0]]), basis_state(2, 0), basis_state(2, 0), 0.1)
    with pytest.raises(PostSelectionVanished):
        simulate(identity(2), basis_state(2, 0), basis_state(2, 1), 0.0)


def test_extract_commuting_with_post(rng):
    u = random_unitary(rng, 3)
    from weaklogic.core import StateVector
    post = StateVector(u[:, 0])
    a = projector(StateVector(u[:, 0]))
    pre = random_state(rng, 3)
    est, _ = extract_weak_value(a, pre, post, [0.05, 0.02, 0.01])
    assert est == pytest.approx(1, abs=1e-6)


def test_extract_hardy(hardy_nono):
    a, pre, post = hardy_nono
    est, stats = extract_weak_value(a, pre, post, [0.05, 0.02, 0.01])
    assert abs(est - weak_value(a, pre, post)) < 1e-3
    assert [s.coupling for s in stats] == [0.05, 0.02, 0.01]


def test_extract_imaginary():
    pre, post = make_state([1, 1j]), make_state([1, 1])
    a = projector(basis_state(2, 0))
    # closed form: <+|0><0|pre> / <+|pre> = (1/2) / ((1+i)/2) = (1-i)/2
    exact = (1 - 1j) / 2
    assert weak_value(a, pre, post) == pytest.approx(exact, abs=1e-15)
    est, _ = extract_weak_value(a, pre, post, [0.05, 0.02, 0.01])
    assert abs(est.imag - exact.imag) < 1e-3
    assert abs(est.real - exact.real) < 1e-3


def test_extract_sweep_validation(hardy_nono):
    a, pre, post = hardy_nono
    with pytest.raises(ValidationError, match="positive"):
        extract_weak_value(a, pre, post, [0.05, 0.0])
    with pytest.raises(ValidationError, match="decreasing"):
        extract_weak_value(a, pre, post, [0.01, 0.05])


def test_extract_fit_unstable(hardy_nono):
    # couplings far outside the linear regime cannot be extrapolated
    a, pre, post = hardy_nono
    with pytest.raises(FitUnstable):
        extract_weak_value(a, pre, post, [3.0, 2.0, 1.0])
