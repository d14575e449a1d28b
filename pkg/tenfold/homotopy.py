"""
The rank two AIII model on a circle: gradings Gamma(theta) anticommuting with sigma_3 are
cos f sigma_1 + sin f sigma_2, so a closed loop of them is a phase function and its
homotopy class is the winding of f.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag, expm

from .constants import settings
from .exceptions import (
    Gapless,
    InvalidGrading,
    NotInvolution,
    NotOdd,
    StepTooLarge,
    SymmetryViolation,
)

log = logging.getLogger("tenfold.homotopy")

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

# adjacent samples closer than this in operator norm have phase steps below pi/2
MAX_ADJACENT_NORM = np.sqrt(2)


def _norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2))


def grading_residual(gamma: np.ndarray, odd_to: np.ndarray = SIGMA3) -> float:
    """Worst of Gamma^2 = 1, Gamma hermitian and Gamma anticommuting with `odd_to`."""
    eye = np.eye(gamma.shape[0])
    return max(
        _norm(gamma @ gamma - eye),
        _norm(gamma - gamma.conj().T),
        _norm(gamma @ odd_to + odd_to @ gamma),
    )


def _phase_steps(phases: np.ndarray) -> np.ndarray:
    steps = np.diff(np.append(phases, phases[0]))
    # principal branch in (-pi, pi]
    return np.pi - np.mod(np.pi - steps, 2 * np.pi)


@dataclass(frozen=True, eq=False)
class GradingFamily:
    """A closed loop of gradings sampled at theta_j = 2 pi j / M."""

    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        object.__setattr__(self, "samples", samples)
        self.check_kwargs(samples)

    @staticmethod
    def check_kwargs(samples: np.ndarray):
        if samples.ndim != 3 or samples.shape[1:] != (2, 2) or not len(samples):
            raise InvalidGrading(f"Expected a list of 2x2 samples, got shape {samples.shape}.")
        for j, gamma in enumerate(samples):
            if (res := grading_residual(gamma)) >= settings.family_tolerance:
                raise InvalidGrading(f"Sample {j} is not a grading (residual {res:.3e}).")
        for j, gamma in enumerate(samples):
            following = samples[(j + 1) % len(samples)]
            if _norm(following - gamma) >= MAX_ADJACENT_NORM:
                raise StepTooLarge(
                    f"Samples {j} and {(j + 1) % len(samples)} are too far apart to follow the "
                    "phase; sample the loop more finely."
                )
        if len(samples) < settings.min_grid_size:
            raise InvalidGrading(
                f"A family needs at least {settings.min_grid_size} samples, got {len(samples)}."
            )

    @property
    def size(self) -> int:
        return len(self.samples)

    @property
    def thetas(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.size) / self.size

    @classmethod
    def from_phases(cls, phases: Sequence[float]):
        phases = np.asarray(phases, dtype=float)
        samples = np.cos(phases)[:, None, None] * SIGMA1 + np.sin(phases)[:, None, None] * SIGMA2
        return cls(samples)

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], size: int = None):
        size = size or settings.grid_size
        return cls.from_phases(f(2 * np.pi * np.arange(size) / size))

    def phases(self) -> np.ndarray:
        """f(theta_j) on the principal branch, read off the sigma_1, sigma_2 coefficients."""
        lower = self.samples[:, 1, 0]
        if np.any(np.abs(lower) < settings.family_tolerance):
            raise InvalidGrading("A sample has no sigma_1 or sigma_2 component.")
        return np.arctan2(lower.imag, lower.real)

    def __str__(self):
        return f"<GradingFamily samples={self.size}>"

    def __repr__(self) -> str:
        return self.__str__()


class GappedMatrix:
    """A hermitian matrix with no spectrum in (-gap, gap)."""

    def __init__(self, matrix: np.ndarray, gap: float = None):
        self.matrix = np.asarray(matrix, dtype=complex)
        self.gap = gap if gap is not None else settings.family_tolerance
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"Expected a square matrix, got shape {self.matrix.shape}.")
        if _norm(self.matrix - self.matrix.conj().T) >= settings.rep_tolerance:
            raise ValueError("Matrix is not hermitian.")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def spectral_flatten(h: GappedMatrix) -> np.ndarray:
    """sgn(H): same eigenvectors, eigenvalues replaced by their signs."""
    values, vectors = np.linalg.eigh(h.matrix)
    if (smallest := float(np.abs(values).min())) < h.gap:
        raise Gapless(f"Smallest eigenvalue {smallest:.3e} is inside the gap {h.gap:.1e}.")
    return (vectors * np.sign(values)) @ vectors.conj().T


def symmetry_residual(gamma: np.ndarray, symmetries: Sequence[Tuple[np.ndarray, int]]) -> float:
    """Worst violation of theta Gamma = c Gamma theta over linear symmetry operators."""
    return max((_norm(op @ gamma - c * gamma @ op) for op, c in symmetries), default=0.0)


def winding(g: GradingFamily) -> int:
    steps = _phase_steps(g.phases())
    if (largest := float(np.abs(steps).max())) >= np.pi / 2:
        raise StepTooLarge(f"Phase step of {largest:.3f} rad, the limit is pi/2.")
    return int(round(steps.sum() / (2 * np.pi)))


def difference_class(g1: GradingFamily, g2: GradingFamily) -> int:
    """The relative class of (Gamma_1, Gamma_2); zero iff they are homotopic."""
    if g1.size != g2.size:
        raise ValueError(f"Families live on different grids ({g1.size} and {g2.size}).")
    return winding(g2) - winding(g1)


def conjugate_family(g: GradingFamily, k: int) -> GradingFamily:
    """Gamma(theta) -> U Gamma U^* with U = exp(-i k theta sigma_3 / 2); winding moves by k."""
    half = np.exp(-0.5j * k * g.thetas)
    u = np.zeros((g.size, 2, 2), dtype=complex)
    u[:, 0, 0], u[:, 1, 1] = half, half.conj()
    return GradingFamily(u @ g.samples @ u.conj().transpose(0, 2, 1))


def gauge_phi(g: GradingFamily) -> GradingFamily:
    """Conjugation by exp(-i theta sigma_3), taking sigma_1 to cos 2theta s1 + sin 2theta s2."""
    return conjugate_family(g, 2)


def _conjugation_path_residual(rotations, families, endpoint_order) -> float:
    """
    Conjugate the direct sum of the families by each rotation (acting on blocks) and return
    the worst failure of grading identities, plus the distance of the last point from the
    reordered sum."""
    count = len(families)
    odd_to = np.kron(np.eye(count), SIGMA3)
    worst = 0.0
    for j in range(families[0].size):
        start = block_diag(*(f.samples[j] for f in families))
        for rotation in rotations:
            r = np.kron(rotation, IDENTITY)
            worst = max(worst, grading_residual(r @ start @ r.T, odd_to))
        r = np.kron(rotations[-1], IDENTITY)
        end = block_diag(*(families[i].samples[j] for i in endpoint_order))
        worst = max(worst, _norm(r @ start @ r.T - end), _norm(rotations[0] - np.eye(count)))
    return worst


def swap_residual(g1: GradingFamily, g2: GradingFamily) -> float:
    ts = np.linspace(0, np.pi / 2, settings.swap_steps)
    rotations = [np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]]) for t in ts]
    return _conjugation_path_residual(rotations, [g1, g2], [1, 0])


def direct_sum_swap_check(g1: GradingFamily, g2: GradingFamily) -> bool:
    """Gamma_1 + Gamma_2 and Gamma_2 + Gamma_1 are joined by a rotation through gradings."""
    if g1.size != g2.size:
        raise ValueError(f"Families live on different grids ({g1.size} and {g2.size}).")
    residual = swap_residual(g1, g2)
    log.debug("swap homotopy residual %.3e", residual)
    return residual < settings.family_tolerance


def cyclic_shift_residual(g1: GradingFamily, g2: GradingFamily, g3: GradingFamily) -> float:
    axis = np.ones(3) / np.sqrt(3)
    generator = np.array(
        [[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]]
    )
    # a third of a turn about (1,1,1) sends e1 -> e2 -> e3 -> e1
    ts = np.linspace(0, 1, settings.swap_steps)
    rotations = [expm(t * 2 * np.pi / 3 * generator) for t in ts]
    return _conjugation_path_residual(rotations, [g1, g2, g3], [2, 0, 1])


def cyclic_shift_check(g1: GradingFamily, g2: GradingFamily, g3: GradingFamily) -> bool:
    if not g1.size == g2.size == g3.size:
        raise ValueError("Families live on different grids.")
    return cyclic_shift_residual(g1, g2, g3) < settings.family_tolerance


class TrivializingPath(NamedTuple):
    times: np.ndarray
    samples: np.ndarray

    @property
    def residual(self) -> float:
        eye = np.eye(self.samples.shape[1])
        return max(_norm(s @ s - eye) for s in self.samples)


def trivializing_path(
    gamma: np.ndarray,
    inv: np.ndarray,
    symmetries: Sequence[Tuple[np.ndarray, int]] = (),
) -> TrivializingPath:
    """cos(t) Gamma + sin(t) inv for t in [0, pi], a path of gradings from Gamma to -Gamma."""
    gamma, inv = np.asarray(gamma, dtype=complex), np.asarray(inv, dtype=complex)
    eye = np.eye(gamma.shape[0])
    tol = settings.family_tolerance
    if _norm(inv @ inv - eye) >= tol or _norm(inv - inv.conj().T) >= tol:
        raise NotInvolution("The odd involution must be self-adjoint and square to one.")
    if _norm(inv @ gamma + gamma @ inv) >= tol:
        raise NotOdd("The involution does not anticommute with the grading.")
    if symmetry_residual(inv, symmetries) >= tol:
        raise SymmetryViolation("The involution does not respect the symmetry operators.")

    times = np.linspace(0, np.pi, settings.path_steps)
    samples = np.cos(times)[:, None, None] * gamma + np.sin(times)[:, None, None] * inv
    return TrivializingPath(times, samples)


def perturb_family(g: GradingFamily, scale: float, rng: np.random.Generator) -> GradingFamily:
    """
    Add hermitian noise of operator norm `scale` to every sample, keep the part odd under
    sigma_3 and flatten again."""
    samples = []
    for gamma in g.samples:
        noise = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        noise = noise + noise.conj().T
        noise *= scale / _norm(noise)
        h = gamma + noise
        h = (h - SIGMA3 @ h @ SIGMA3) / 2
        samples.append(spectral_flatten(GappedMatrix(h)))
    return GradingFamily(np.array(samples))


def random_family(rng: np.random.Generator, size: int = None, max_winding: int = 5):
    """A smooth loop with a random winding and a few random Fourier modes on top."""
    size = size or settings.grid_size
    w = int(rng.integers(-max_winding, max_winding + 1))
    amplitudes = rng.uniform(-0.5, 0.5, 3)
    offsets = rng.uniform(0, 2 * np.pi, 3)

    def f(theta):
        modes = enumerate(zip(amplitudes, offsets), start=1)
        return w * theta + sum(a * np.sin(j * theta + o) for j, (a, o) in modes)

    return GradingFamily.from_function(f, size)


def standard_families(size: int = None) -> List[GradingFamily]:
    """Gamma^0 = sigma_1 and Gamma^1 = cos 2theta sigma_1 + sin 2theta sigma_2."""
    return [
        GradingFamily.from_function(lambda t: 0 * t, size),
        GradingFamily.from_function(lambda t: 2 * t, size),
    ]
