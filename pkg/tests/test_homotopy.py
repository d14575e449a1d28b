import numpy as np
import pytest

from tenfold.exceptions import (
    Gapless,
    InvalidGrading,
    NotInvolution,
    NotOdd,
    StepTooLarge,
    SymmetryViolation,
)
from tenfold.homotopy import (
    SIGMA1,
    SIGMA2,
    SIGMA3,
    GappedMatrix,
    GradingFamily,
    conjugate_family,
    cyclic_shift_check,
    difference_class,
    direct_sum_swap_check,
    gauge_phi,
    grading_residual,
    perturb_family,
    random_family,
    spectral_flatten,
    standard_families,
    symmetry_residual,
    trivializing_path,
    winding,
)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def test_standard_families():
    gamma0, gamma1 = standard_families()
    assert winding(gamma0) == 0
    assert winding(gamma1) == 2
    assert difference_class(gamma0, gamma1) == 2
    assert np.allclose(gamma0.samples, SIGMA1)


def test_phi_maps_gamma0_to_gamma1():
    gamma0, gamma1 = standard_families()
    assert np.abs(gauge_phi(gamma0).samples - gamma1.samples).max() < 1e-9


@pytest.mark.parametrize("w", [-3, -1, 0, 1, 4])
def test_winding_of_linear_phases(w):
    assert winding(GradingFamily.from_function(lambda t: w * t)) == w


def test_chain_rule_and_antisymmetry(rng):
    for _ in range(100):
        g1, g2, g3 = (random_family(rng) for _ in range(3))
        assert difference_class(g1, g2) + difference_class(g2, g3) == difference_class(g1, g3)
        assert difference_class(g1, g2) == -difference_class(g2, g1)
        assert difference_class(g1, g1) == 0


def test_conjugation_shifts_winding(rng):
    g = random_family(rng)
    for k in (-2, 1, 3):
        assert winding(conjugate_family(g, k)) == winding(g) + k


def test_perturbation_invariance(rng):
    for _ in range(10):
        g = random_family(rng)
        perturbed = perturb_family(g, 1e-2, rng)
        assert winding(perturbed) == winding(g)
        assert max(grading_residual(s) for s in perturbed.samples) < 1e-9


def test_swap_and_cyclic_homotopies(rng):
    g1, g2, g3 = (random_family(rng) for _ in range(3))
    assert direct_sum_swap_check(g1, g2)
    assert cyclic_shift_check(g1, g2, g3)


def test_grid_mismatch(rng):
    with pytest.raises(ValueError):
        difference_class(random_family(rng, 64), random_family(rng, 128))
    with pytest.raises(ValueError):
        direct_sum_swap_check(random_family(rng, 64), random_family(rng, 128))


def test_coarse_grid_is_rejected():
    # steps of 3 * 2pi / 8 exceed pi / 2
    with pytest.raises(StepTooLarge):
        GradingFamily.from_function(lambda t: 3 * t, 8)
    # fine steps, but too few samples
    with pytest.raises(InvalidGrading, match="at least 64 samples"):
        GradingFamily.from_function(lambda t: 0 * t, 16)


def test_invalid_samples():
    with pytest.raises(InvalidGrading):
        GradingFamily(np.array([SIGMA3] * 64))
    with pytest.raises(InvalidGrading):
        GradingFamily(np.array([2 * SIGMA1] * 64))
    with pytest.raises(InvalidGrading):
        GradingFamily(np.zeros((64, 3, 3)))


def test_phases_follow_sigma2_component():
    g = GradingFamily(np.array([SIGMA2] * 64))
    assert np.allclose(g.phases(), np.pi / 2)
    assert winding(g) == 0


def test_spectral_flatten():
    h = GappedMatrix(np.diag([2.0, -0.5]) + 0.1 * SIGMA1)
    flat = spectral_flatten(h)
    assert np.allclose(flat @ flat, np.eye(2))
    assert np.allclose(flat, flat.conj().T)
    with pytest.raises(Gapless):
        spectral_flatten(GappedMatrix(np.diag([1.0, 0.0])))
    with pytest.raises(ValueError):
        GappedMatrix(np.array([[0, 1], [0, 0]]))


def test_symmetry_residual():
    assert symmetry_residual(SIGMA1, [(SIGMA3, -1)]) == pytest.approx(0)
    assert symmetry_residual(SIGMA1, [(SIGMA1, 1)]) == pytest.approx(0)
    assert symmetry_residual(SIGMA1, [(SIGMA3, 1)]) > 1


def test_trivializing_path():
    gamma = np.kron(np.diag([1, -1]), np.diag([1, -1]))
    swap = np.kron(SIGMA1, np.eye(2))
    path = trivializing_path(gamma, swap)
    assert path.residual < 1e-9
    assert np.allclose(path.samples[0], gamma)
    assert np.allclose(path.samples[-1], -gamma)


def test_trivializing_path_with_symmetry():
    gamma = np.kron(SIGMA3, SIGMA3)
    inv = np.kron(SIGMA1, np.eye(2))
    # commutes with both gamma and the involution
    chiral = np.kron(np.eye(2), SIGMA3)
    path = trivializing_path(gamma, inv, [(chiral, 1)])
    assert path.residual < 1e-9
    with pytest.raises(SymmetryViolation):
        trivializing_path(gamma, inv, [(chiral, -1)])


def test_trivializing_path_preconditions():
    gamma = np.kron(SIGMA3, SIGMA3)
    with pytest.raises(NotInvolution):
        trivializing_path(gamma, 2 * np.kron(SIGMA1, np.eye(2)))
    with pytest.raises(NotOdd):
        trivializing_path(gamma, np.eye(4))
