"""
Brute-force matrix oracle.

Graded Clifford modules are real matrices. Irreducibles of Cl_{0,k} come from inducing the
irreducibles of Cl_{0,k-1} along one more positive generator and splitting the result with a
random symmetric element of its even commutant. Every other signature follows from the index
swap Cl_{k,0} <-> Cl_{0,k} and graded tensoring with Cl_{1,1}.

The commutant of a Clifford module is the fixed space of the commuting involutions
X -> g X g^T, so averaging over the generators one at a time projects onto it, and the
dimension of any intertwiner space is the trace of that projection.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from cachetools import LRUCache, cached
from scipy.linalg import null_space

from .clifford import AlgebraStructure, CliffordClass
from .constants import settings
from .exceptions import CocycleError, ExtensionError, RepresentationError, WedderburnError
from .groups import AbelianGroup, IntMatrix, cokernel
from .symmetry import (
    ONE,
    ParityGroupData,
    SymmetrySpec,
    UnitPhase,
    clifford_cocycle,
    complex_clifford_cocycle,
    sign_cocycle,
    validate_cocycle,
)

log = logging.getLogger("tenfold.repr_engine")

_GAMMA0 = np.diag([1.0, -1.0])
_F0 = np.array([[0.0, 1.0], [1.0, 0.0]])
_E0 = np.array([[0.0, -1.0], [1.0, 0.0]])
_I2 = np.eye(2)


@dataclass(frozen=True, eq=False)
class GradedRep:
    """
    A graded Clifford module on R^{p|q}. Generators are odd, orthogonal, pairwise
    anticommuting, negative squares first. `complex_structure` is an even J with J^2 = -1
    commuting with everything when the module is complex."""

    p: int
    q: int
    generators: Tuple[np.ndarray, ...]
    squares: Tuple[int, ...]
    complex_structure: Optional[np.ndarray] = None

    def __post_init__(self):
        if len(self.generators) != len(self.squares):
            raise RepresentationError("Every generator needs a declared square.")
        for g in self.generators:
            if g.shape != (self.dim, self.dim):
                raise RepresentationError(
                    f"Generator of shape {g.shape} on a {self.dim}-dim module."
                )

    @property
    def dim(self) -> int:
        return self.p + self.q

    @property
    def grading(self) -> np.ndarray:
        return np.diag([1.0] * self.p + [-1.0] * self.q)

    @property
    def signature(self) -> Tuple[int, int]:
        return self.squares.count(-1), self.squares.count(1)

    @property
    def is_complex(self) -> bool:
        return self.complex_structure is not None

    @property
    def operators(self) -> List[np.ndarray]:
        """Grading, generators and J: an intertwiner commutes with all of them."""
        ops = [self.grading, *self.generators]
        if self.is_complex:
            ops.append(self.complex_structure)
        return ops

    def restricted(self) -> "GradedRep":
        """Forget the last generator."""
        return GradedRep(
            self.p, self.q, self.generators[:-1], self.squares[:-1], self.complex_structure
        )

    def residual(self) -> float:
        eye = np.eye(self.dim)
        gamma = self.grading
        worst = 0.0
        for i, (g, sq) in enumerate(zip(self.generators, self.squares)):
            worst = max(worst, np.abs(g @ gamma + gamma @ g).max(), np.abs(g @ g - sq * eye).max())
            for h in self.generators[:i]:
                worst = max(worst, np.abs(g @ h + h @ g).max())
        if self.is_complex:
            j = self.complex_structure
            worst = max(worst, np.abs(j @ j + eye).max())
            worst = max(worst, *(np.abs(j @ op - op @ j).max() for op in self.operators[:-1]))
        return float(worst)

    def __str__(self):
        kind = "C" if self.is_complex else "R"
        r, s = self.signature
        return f"<GradedRep {kind}^{{{self.p}|{self.q}}} of Cl_{{{r},{s}}}>"

    def __repr__(self) -> str:
        return self.__str__()


def _permuted(p_diag: np.ndarray, mats: Sequence[np.ndarray]):
    # even basis vectors first
    order = np.argsort(-p_diag, kind="stable")
    return int((p_diag > 0).sum()), [m[np.ix_(order, order)] for m in mats]


def _rebuild(gamma_diag, gens, squares, j=None) -> GradedRep:
    mats = list(gens) + ([j] if j is not None else [])
    p, mats = _permuted(gamma_diag, mats)
    if j is not None:
        j, mats = mats[-1], mats[:-1]
    return GradedRep(p, len(gamma_diag) - p, tuple(mats), tuple(squares), j)


def induce(rep: GradedRep) -> GradedRep:
    """Tensor with R^{1|1} along one extra positive generator (dimension doubles)."""
    gamma = rep.grading
    gens = [np.kron(g, _I2) for g in rep.generators] + [np.kron(gamma, _F0)]
    j = np.kron(rep.complex_structure, _I2) if rep.is_complex else None
    return _rebuild(np.kron(np.diag(gamma), np.diag(_GAMMA0)), gens, rep.squares + (1,), j)


def tensor_cl11(rep: GradedRep) -> GradedRep:
    """Graded tensor with Cl_{1,1}: a module of Cl_{r,s} becomes one of Cl_{r+1,s+1}."""
    gamma = rep.grading
    r, _ = rep.signature
    negative = [np.kron(g, _I2) for g in rep.generators[:r]] + [np.kron(gamma, _E0)]
    positive = [np.kron(g, _I2) for g in rep.generators[r:]] + [np.kron(gamma, _F0)]
    squares = (-1,) * len(negative) + (1,) * len(positive)
    j = np.kron(rep.complex_structure, _I2) if rep.is_complex else None
    return _rebuild(np.kron(np.diag(gamma), np.diag(_GAMMA0)), negative + positive, squares, j)


def swap_signature(rep: GradedRep) -> GradedRep:
    """Cl_{r,s} -> Cl_{s,r} on the same space: e' = f Gamma, f' = e Gamma."""
    gamma = rep.grading
    r, _ = rep.signature
    negative = [f @ gamma for f in rep.generators[r:]]
    positive = [e @ gamma for e in rep.generators[:r]]
    squares = (-1,) * len(negative) + (1,) * len(positive)
    return GradedRep(
        rep.p, rep.q, tuple(negative + positive), squares, rep.complex_structure
    )


def _project(pairs, x: np.ndarray) -> np.ndarray:
    for a2, a1 in pairs:
        x = 0.5 * (x + a2 @ x @ a1.T)
    return x


def _trace_sum(pairs, i, a, b) -> float:
    if i == len(pairs):
        return float(np.trace(a) * np.trace(b))
    a2, a1 = pairs[i]
    return _trace_sum(pairs, i + 1, a, b) + _trace_sum(pairs, i + 1, a @ a2, b @ a1)


def intertwiner_dimension(source: GradedRep, target: GradedRep) -> int:
    """Real dimension of the even intertwiners source -> target."""
    if source.squares != target.squares or source.is_complex != target.is_complex:
        raise RepresentationError(f"{source} and {target} are modules of different algebras.")
    pairs = list(zip(target.operators, source.operators))
    value = _trace_sum(pairs, 0, np.eye(target.dim), np.eye(source.dim)) / 2 ** len(pairs)
    rounded = round(value)
    if abs(value - rounded) > settings.rounding_tolerance:
        raise RepresentationError(f"Intertwiner dimension {value} is not an integer.")
    return int(rounded)


def commutant_dimension(rep: GradedRep) -> int:
    return intertwiner_dimension(rep, rep)


def _clusters(values: np.ndarray, tol: float) -> List[List[int]]:
    groups = [[0]]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] > tol:
            groups.append([])
        groups[-1].append(i)
    return groups


def _restrict_to(rep: GradedRep, basis: np.ndarray) -> GradedRep:
    # basis spans a submodule; adapt it to the grading first
    local_gamma = basis.T @ rep.grading @ basis
    w, u = np.linalg.eigh((local_gamma + local_gamma.T) / 2)
    order = np.argsort(-w, kind="stable")
    adapted = basis @ u[:, order]
    p = int((w > 0).sum())
    gens = tuple(adapted.T @ g @ adapted for g in rep.generators)
    j = adapted.T @ rep.complex_structure @ adapted if rep.is_complex else None
    return GradedRep(p, adapted.shape[1] - p, gens, rep.squares, j)


def split(rep: GradedRep, rng: np.random.Generator) -> List[GradedRep]:
    """Decompose into irreducible graded submodules."""
    ops = rep.operators
    x = rng.standard_normal((rep.dim, rep.dim))
    y = _project(list(zip(ops, ops)), x + x.T)
    w, v = np.linalg.eigh((y + y.T) / 2)
    scale = max(1.0, float(np.abs(w).max()))
    groups = _clusters(w, 1e-6 * scale)
    if len(groups) == 1:
        return [rep]
    pieces = []
    for idx in groups:
        pieces.extend(split(_restrict_to(rep, v[:, idx]), rng))
    return pieces


def _distinct(reps: Sequence[GradedRep]) -> List[GradedRep]:
    kept = []
    for rep in reps:
        if not any(
            (k.p, k.q) == (rep.p, rep.q) and intertwiner_dimension(rep, k) > 0 for k in kept
        ):
            kept.append(rep)
    return kept


def _certify(reps: Sequence[GradedRep], algebra_dim: int, label: str):
    for rep in reps:
        if (res := rep.residual()) >= settings.rep_tolerance:
            raise RepresentationError(f"{rep} has residual {res:.3e}.")
    count = sum(rep.dim**2 / commutant_dimension(rep) for rep in reps)
    if abs(count - algebra_dim) > settings.rounding_tolerance:
        raise RepresentationError(
            f"Irreducibles of {label} account for dimension {count}, expected {algebra_dim}."
        )


def _point_reps(complex_: bool) -> List[GradedRep]:
    if complex_:
        return [
            GradedRep(2, 0, (), (), _E0.copy()),
            GradedRep(0, 2, (), (), _E0.copy()),
        ]
    return [GradedRep(1, 0, (), ()), GradedRep(0, 1, (), ())]


@cached(cache=LRUCache(maxsize=64))
def _positive_chain(k: int, complex_: bool) -> Tuple[GradedRep, ...]:
    """Irreducible graded modules of Cl_{0,k} (complex: CCl_k)."""
    if k == 0:
        return tuple(_point_reps(complex_))
    rng = np.random.default_rng(settings.seed + k)
    candidates = [
        piece for w in _positive_chain(k - 1, complex_) for piece in split(induce(w), rng)
    ]
    reps = sorted(_distinct(candidates), key=lambda w: (w.dim, -w.p))
    log.debug("built %d irreducibles for positive index %d (complex=%s)", len(reps), k, complex_)
    return tuple(reps)


@cached(cache=LRUCache(maxsize=128))
def build_irreducible_graded_reps(r: int, s: int) -> Tuple[GradedRep, ...]:
    """All irreducible graded Cl_{r,s}-modules over R, up to even isomorphism."""
    if r < 0 or s < 0 or r + s > 10:
        raise ValueError(f"Cl_{{{r},{s}}} is outside the supported range r+s <= 10.")
    m = min(r, s)
    if r == m:
        reps = list(_positive_chain(s - m, False))
    else:
        reps = [swap_signature(w) for w in _positive_chain(r - m, False)]
    for _ in range(m):
        reps = [tensor_cl11(w) for w in reps]
    # graded modules of Cl_{r,s} are ungraded modules of Cl_{r,s+1}
    _certify(reps, 2 ** (r + s + 1), f"Cl_{{{r},{s}}}")
    return tuple(reps)


@cached(cache=LRUCache(maxsize=32))
def build_irreducible_complex_reps(n: int) -> Tuple[GradedRep, ...]:
    if n < 0 or n > 10:
        raise ValueError(f"CCl_{n} is outside the supported range n <= 10.")
    reps = _positive_chain(n, True)
    _certify(reps, 2 ** (n + 2), f"CCl_{n}")
    return reps


def _decomposition_matrix(small: Sequence[GradedRep], big: Sequence[GradedRep]) -> IntMatrix:
    rows = []
    for w in small:
        end = commutant_dimension(w)
        row = []
        for v in big:
            hom = intertwiner_dimension(w, v.restricted())
            if hom % end:
                raise RepresentationError(f"Hom dimension {hom} not a multiple of {end}.")
            row.append(hom // end)
        rows.append(row)
    return IntMatrix.from_rows(rows, len(big))


@cached(cache=LRUCache(maxsize=128))
def restriction_matrix(r: int, s: int) -> IntMatrix:
    """
    Columns: irreducible graded Cl_{r,s+1}-modules restricted to Cl_{r,s}, written in terms of
    the irreducible graded Cl_{r,s}-modules."""
    if r + s > 9:
        raise ValueError("restriction_matrix needs r+s <= 9.")
    m = _decomposition_matrix(
        build_irreducible_graded_reps(r, s), build_irreducible_graded_reps(r, s + 1)
    )
    log.debug("restriction matrix for Cl_{%d,%d}: %s", r, s, m.tolist())
    return m


@cached(cache=LRUCache(maxsize=32))
def complex_restriction_matrix(n: int) -> IntMatrix:
    if n > 9:
        raise ValueError("complex_restriction_matrix needs n <= 9.")
    return _decomposition_matrix(
        build_irreducible_complex_reps(n), build_irreducible_complex_reps(n + 1)
    )


def sr_bruteforce(r: int, s: int) -> AbelianGroup:
    return cokernel(restriction_matrix(r, s))


def sr_bruteforce_complex(n: int) -> AbelianGroup:
    return cokernel(complex_restriction_matrix(n))


def sr_of_class(c: CliffordClass) -> AbelianGroup:
    return sr_bruteforce(c.r, c.s) if c.is_real else sr_bruteforce_complex(c.n)


# finite groups and structure-constant algebras


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group as a multiplication table with identity 0."""

    table: Tuple[Tuple[int, ...], ...]
    name: str = "G"

    def __post_init__(self):
        n = len(self.table)
        if any(len(row) != n for row in self.table):
            raise ExtensionError(f"{self.name}: multiplication table is not square.")
        if any(self.table[0][x] != x or self.table[x][0] != x for x in range(n)):
            raise ExtensionError(f"{self.name}: element 0 must be the identity.")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self.table[x].index(0)

    def conj(self, x: int, n: int) -> int:
        """x n x^-1"""
        return self.mul(self.mul(x, n), self.inv(x))

    def generated(self, gens: Sequence[int]) -> List[int]:
        elements, frontier = {0}, [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in elements:
                    elements.add(y)
                    frontier.append(y)
        return sorted(elements)

    def generators(self) -> List[int]:
        gens, span = [], [0]
        for x in range(self.order):
            if x not in span:
                gens.append(x)
                span = self.generated(gens)
        return gens

    def subgroup(self, elements: Sequence[int], name: str = "N") -> "FiniteGroup":
        elements = list(elements)
        index = {x: i for i, x in enumerate(elements)}
        table = tuple(tuple(index[self.mul(x, y)] for y in elements) for x in elements)
        return FiniteGroup(table, name)

    def __str__(self):
        return f"<FiniteGroup {self.name} order={self.order}>"

    def __repr__(self) -> str:
        return self.__str__()


def parity_group(n: int) -> FiniteGroup:
    return FiniteGroup(
        tuple(tuple(x ^ y for y in range(1 << n)) for x in range(1 << n)), f"Z_2^{n}"
    )


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(tuple(tuple((x + y) % n for y in range(n)) for x in range(n)), f"Z_{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    m = h.order
    return FiniteGroup(
        tuple(
            tuple(g.mul(a // m, b // m) * m + h.mul(a % m, b % m) for b in range(g.order * m))
            for a in range(g.order * m)
        ),
        f"{g.name}x{h.name}",
    )


def dihedral_group(n: int) -> FiniteGroup:
    """Order 2n; element k + n*e is r^k s^e."""

    def mul(x, y):
        a, e = x % n, x // n
        b, f = y % n, y // n
        return (a + (b if e == 0 else -b)) % n + n * ((e + f) % 2)

    elements = range(2 * n)
    return FiniteGroup(tuple(tuple(mul(x, y) for y in elements) for x in elements), f"D_{n}")


def quaternion_group() -> FiniteGroup:
    """Q8; element u + 4*neg is (-1)^neg times the unit u of (1, i, j, k)."""
    # unit products as (sign, unit)
    units = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }  # fmt: skip

    def mul(x, y):
        sign, unit = units[(x % 4, y % 4)]
        neg = (x // 4 + y // 4 + (sign == -1)) % 2
        return unit + 4 * neg

    return FiniteGroup(tuple(tuple(mul(x, y) for y in range(8)) for x in range(8)), "Q_8")


class Action(NamedTuple):
    """Scalars R or C (as real 2x2 blocks), and phi(x) = -1 where x acts by conjugation."""

    base: str
    phi: Tuple[int, ...]

    @property
    def base_dim(self) -> int:
        return 1 if self.base == "R" else 2

    def apply(self, x: int, value: complex) -> complex:
        return value.conjugate() if self.phi[x] == -1 else value


PhaseTable = Tuple[Tuple[UnitPhase, ...], ...]


def check_group_cocycle(
    group: FiniteGroup, action: Action, sigma: PhaseTable, closed: bool = True
):
    """
    Phases must be powers of i (signs over R), normalized, and satisfy
    sigma(x,y) sigma(xy,z) = sigma(y,z)^x sigma(x,yz). `closed=False` skips the triple loop
    for callers that validated the identity already."""
    n = group.order
    if action.base not in ("R", "C"):
        raise CocycleError(f"Unknown base `{action.base}`.")
    if len(action.phi) != n or len(sigma) != n or any(len(row) != n for row in sigma):
        raise CocycleError(f"phi and sigma must cover all {n} elements of {group.name}.")
    if any(
        action.phi[group.mul(x, y)] != action.phi[x] * action.phi[y]
        for x in range(n)
        for y in range(n)
    ):
        raise CocycleError("phi is not a homomorphism.")
    for row in sigma:
        for phase in row:
            if (phase.turns * 4).denominator != 1:
                raise CocycleError(f"Phase {phase} is not a power of i.")
            if action.base == "R" and not phase.is_sign:
                raise CocycleError(f"Phase {phase} can't be realized over the real numbers.")
    if any(sigma[0][x] != ONE or sigma[x][0] != ONE for x in range(n)):
        raise CocycleError("Cocycle is not normalized.")
    if not closed:
        return
    for x in range(n):
        for y in range(n):
            xy = group.mul(x, y)
            for z in range(n):
                lhs = sigma[x][y] * sigma[xy][z]
                rhs = sigma[y][z].twisted(action.phi[x]) * sigma[x][group.mul(y, z)]
                if lhs != rhs:
                    raise CocycleError(f"Cocycle identity fails at ({x}, {y}, {z}).")


def _units(base_dim: int) -> List[complex]:
    return [1.0 + 0j, 1j][:base_dim]


def _scatter(vec: np.ndarray, slot: int, base_dim: int, value: complex):
    vec[slot * base_dim] += value.real
    if base_dim == 2:
        vec[slot * base_dim + 1] += value.imag
    elif abs(value.imag) > 1e-12:
        raise CocycleError("A complex value appeared over the real numbers.")


@dataclass(frozen=True, eq=False)
class StructureAlgebra:
    """
    A finite dimensional real *-algebra: mult[i, j] holds the coordinates of e_i e_j."""

    mult: np.ndarray
    involution: np.ndarray
    unit: np.ndarray
    generators: Tuple[np.ndarray, ...] = field(default=())
    name: str = "A"

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    def basis(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim)
        v[i] = 1.0
        return v

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", u, v, self.mult)

    def left(self, u: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijk->kj", u, self.mult)

    def right(self, u: np.ndarray) -> np.ndarray:
        return np.einsum("j,ijk->ki", u, self.mult)

    def star(self, u: np.ndarray) -> np.ndarray:
        return self.involution @ u

    def algebra_generators(self) -> List[np.ndarray]:
        return list(self.generators) or [self.basis(i) for i in range(self.dim)]

    def associativity_residual(self) -> float:
        worst = 0.0
        for i in range(self.dim):
            lhs = np.einsum("jm,mkl->jkl", self.mult[i], self.mult)
            rhs = np.einsum("jkm,ml->jkl", self.mult, self.mult[i])
            worst = max(worst, float(np.abs(lhs - rhs).max()))
        return worst

    def involution_residual(self) -> float:
        worst = float(np.abs(self.involution @ self.involution - np.eye(self.dim)).max())
        for i in range(self.dim):
            # (e_i e_j)* = e_j* e_i*
            lhs = self.mult[i] @ self.involution.T
            star_i = self.star(self.basis(i))
            rhs = np.stack(
                [self.multiply(self.star(self.basis(j)), star_i) for j in range(self.dim)]
            )
            worst = max(worst, float(np.abs(lhs - rhs).max()))
        return worst

    def center(self) -> np.ndarray:
        """Orthonormal basis (columns) of the center."""
        blocks = [self.right(g) - self.left(g) for g in self.algebra_generators()]
        return null_space(np.vstack(blocks), rcond=1e-9)

    def __str__(self):
        return f"<StructureAlgebra {self.name} dim={self.dim}>"

    def __repr__(self) -> str:
        return self.__str__()


def _exact(value: complex) -> complex:
    # every structure constant is a power of i
    return complex(round(value.real), round(value.imag))


def crossed_product(
    group: FiniteGroup, action: Action, sigma: PhaseTable, validated: bool = False
) -> StructureAlgebra:
    """
    The twisted crossed product of R or C by a finite group. Basis element (x, k) is
    u_k delta_x with u = (1, i), and

        (a delta_x)(b delta_y) = a alpha_x(b) sigma(x,y) delta_xy
        (a delta_y)* = conj(sigma(y^-1,y)) alpha_{y^-1}(conj a) delta_{y^-1}
    """
    check_group_cocycle(group, action, sigma, closed=not validated)
    bd = action.base_dim
    dim = group.order * bd
    units = _units(bd)
    mult = np.zeros((dim, dim, dim))
    involution = np.zeros((dim, dim))

    for x in range(group.order):
        for k, a in enumerate(units):
            i = x * bd + k
            for y in range(group.order):
                phase = complex(sigma[x][y])
                for l, b in enumerate(units):
                    value = _exact(a * action.apply(x, b) * phase)
                    _scatter(mult[i, y * bd + l], group.mul(x, y), bd, value)

            xi = group.inv(x)
            value = _exact(complex(sigma[xi][x]).conjugate() * action.apply(xi, a.conjugate()))
            column = np.zeros(dim)
            _scatter(column, xi, bd, value)
            involution[:, i] = column

    unit = np.zeros(dim)
    unit[0] = 1.0
    generators = [np.eye(dim)[g * bd] for g in group.generators()]
    if bd == 2:
        generators.append(np.eye(dim)[1])
    return StructureAlgebra(mult, involution, unit, tuple(generators), name=group.name)


def _parity_setup(d: ParityGroupData, base: str) -> Tuple[FiniteGroup, Action]:
    return parity_group(d.n), Action(base, tuple(d.phi_of(x) for x in range(d.order)))


def twisted_group_algebra(d: ParityGroupData, base: str = "R") -> StructureAlgebra:
    """The twisted group algebra of {+1,-1}^n for the data d over R or C-as-real."""
    if not validate_cocycle(d):
        raise CocycleError(f"{d} does not carry a valid cocycle.")
    group, action = _parity_setup(d, base)
    return crossed_product(group, action, d.sigma, validated=True)


def _commutant_dim(actions: Sequence[np.ndarray]) -> int:
    m = actions[0].shape[0]
    eye = np.eye(m)
    system = np.vstack([np.kron(a, eye) - np.kron(eye, a.T) for a in actions])
    return null_space(system, rcond=1e-9).shape[1]


def _separated(values: np.ndarray, gap: float) -> bool:
    scale = max(1.0, float(np.abs(values).max()))
    diffs = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(diffs, np.inf)
    return bool(diffs.min() >= gap * scale) if len(values) > 1 else True


def _central_idempotents(a: StructureAlgebra, rng: np.random.Generator, gap: float):
    z = a.center()
    c = z @ rng.standard_normal(z.shape[1])
    m = z.T @ a.left(c) @ z
    values, vectors = np.linalg.eig(m)
    if not _separated(values, gap):
        raise WedderburnError("Central spectrum is not separated.")

    inverse = np.linalg.inv(vectors)
    unit = z.T @ a.unit
    groups = []
    for i, value in enumerate(values):
        if abs(value.imag) < 1e-12 * max(1.0, abs(value)):
            groups.append([i])
        elif value.imag > 0:
            partner = int(np.argmin(np.abs(values - value.conjugate())))
            groups.append([i, partner])

    for idx in groups:
        projector = vectors[:, idx] @ inverse[idx, :]
        yield z @ np.real(projector @ unit), len(idx)


def _simple_block(a: StructureAlgebra, e: np.ndarray, center: int, rng) -> Tuple[str, int, int]:
    dim_b = int(round(np.trace(a.left(e))))
    y = a.multiply(e, rng.standard_normal(a.dim))
    x = a.multiply(e, y + a.star(y))
    rx = a.right(x)
    values = np.linalg.eigvals(rx)
    top = float(np.real(values[np.argmax(np.abs(values))]))
    module = null_space(rx - top * np.eye(a.dim), rcond=1e-8)
    actions = [module.T @ a.left(g) @ module for g in a.algebra_generators()]
    d = _commutant_dim(actions)
    if d not in (1, 2, 4) or (d == 2) != (center == 2):
        raise WedderburnError(f"Block of dimension {dim_b} has commutant of dimension {d}.")
    k = int(round(np.sqrt(dim_b / d)))
    if k * k * d != dim_b or module.shape[1] != k * d:
        raise WedderburnError(f"Block of dimension {dim_b} is not M_k(D) with dim D = {d}.")
    return {1: "R", 2: "C", 4: "H"}[d], k, dim_b


def wedderburn(a: StructureAlgebra, seed: int = None) -> AlgebraStructure:
    """Block decomposition of a semisimple *-algebra, retried with fresh seeds on bad draws."""
    seed = settings.seed if seed is None else seed
    for attempt in range(settings.wedderburn_retries):
        rng = np.random.default_rng(seed + attempt)
        try:
            blocks = []
            for e, center in _central_idempotents(a, rng, settings.wedderburn_gap):
                blocks.append(_simple_block(a, e, center, rng))
            total = sum(b[2] for b in blocks)
            if total != a.dim:
                raise WedderburnError(f"Blocks cover dimension {total} of {a.dim}.")
        except (WedderburnError, np.linalg.LinAlgError) as e:
            log.debug("wedderburn attempt %d on %s failed: %s", attempt, a, e)
            continue
        return AlgebraStructure(tuple((kind, k) for kind, k, _ in blocks))
    raise WedderburnError(
        f"Could not decompose {a} after {settings.wedderburn_retries} attempts."
    )


@cached(cache=LRUCache(maxsize=64))
def clifford_algebra_structure(c: CliffordClass) -> AlgebraStructure:
    if c.is_real:
        return wedderburn(twisted_group_algebra(clifford_cocycle(c.r, c.s), "R"))
    return wedderburn(twisted_group_algebra(complex_clifford_cocycle(c.n), "C"))


def ct_structure_algebra(spec: SymmetrySpec) -> StructureAlgebra:
    """The ungraded algebra of a tenfold class: C twisted by the CT group and Gamma."""
    ct = spec.check().ct_data()
    n = ct.n
    squares = [ct(1 << i, 1 << i).to_sign for i in range(n)] + [1]
    commutation = [[1] * (n + 1) for _ in range(n + 1)]
    # Gamma commutes with even symmetries and anticommutes with odd ones
    commutation[n] = list(ct.c) + [1]
    d = sign_cocycle(squares, commutation, list(ct.phi) + [1], list(ct.c) + [1])
    return twisted_group_algebra(d, "C")


def base_structure_table() -> Dict[CliffordClass, AlgebraStructure]:
    """The frozen base table, recomputed from Clifford cocycle algebras."""
    classes = (
        [CliffordClass.real(k, 0) for k in range(8)]
        + [CliffordClass.real(0, k) for k in range(1, 8)]
        + [CliffordClass.complex(n) for n in range(2)]
    )
    return {c: clifford_algebra_structure(c) for c in classes}


# finite Packer-Raeburn decomposition


class FiniteExtension:
    """
    A normal subgroup N of a finite group G inside ker(c), with a section s of G -> G/N.
    Cosets are ordered by their smallest element; by default s picks that element."""

    def __init__(
        self,
        group: FiniteGroup,
        normal: Sequence[int],
        section: Optional[Sequence[int]] = None,
        c: Optional[Sequence[int]] = None,
    ):
        self.group = group
        self.normal = sorted(set(normal))
        self.c = tuple(c) if c is not None else (1,) * group.order
        self.check_kwargs(group, self.normal, self.c)

        cosets = {}
        for x in range(group.order):
            coset = tuple(sorted(group.mul(x, n) for n in self.normal))
            cosets.setdefault(coset[0], coset)
        self.cosets = [cosets[key] for key in sorted(cosets)]
        self._coset_of = {x: p for p, coset in enumerate(self.cosets) for x in coset}

        if section is None:
            section = [coset[0] for coset in self.cosets]
        self.section = tuple(section)
        if len(self.section) != len(self.cosets) or self.section[0] != 0:
            raise ExtensionError("The section needs one element per coset and s(eN) = e.")
        if any(self._coset_of[s] != p for p, s in enumerate(self.section)):
            raise ExtensionError("The section does not pick an element of each coset.")

        self.quotient = FiniteGroup(
            tuple(
                tuple(self.coset_of(group.mul(sp, sq)) for sq in self.section)
                for sp in self.section
            ),
            f"{group.name}/N",
        )

    @staticmethod
    def check_kwargs(group: FiniteGroup, normal: List[int], c: Tuple[int, ...]):
        if not normal or normal[0] != 0:
            raise ExtensionError("N must contain the identity.")
        members = set(normal)
        if any(group.mul(a, b) not in members for a in normal for b in normal):
            raise ExtensionError("N is not closed under multiplication.")
        if any(group.conj(x, n) not in members for x in range(group.order) for n in normal):
            raise ExtensionError("N is not a normal subgroup.")
        if len(c) != group.order or any(c[n] != 1 for n in normal):
            raise ExtensionError("N must lie in the kernel of c.")

    def coset_of(self, x: int) -> int:
        return self._coset_of[x]

    def inner_index(self, n: int) -> int:
        return self.normal.index(n)

    def __str__(self):
        return (
            f"<FiniteExtension G={self.group.name} |N|={len(self.normal)} "
            f"|G/N|={self.quotient.order}>"
        )

    def __repr__(self) -> str:
        return self.__str__()


class TwistingPair(NamedTuple):
    inner: StructureAlgebra
    beta: Tuple[np.ndarray, ...]
    nu: Dict[Tuple[int, int], np.ndarray]
    outer: StructureAlgebra
    residual: float


def _inner_vector(ext: FiniteExtension, n: int, value: complex, bd: int) -> np.ndarray:
    vec = np.zeros(len(ext.normal) * bd)
    _scatter(vec, ext.inner_index(n), bd, _exact(value))
    return vec


def twisted_pair_residual(
    ext: FiniteExtension,
    inner: StructureAlgebra,
    beta: Sequence[np.ndarray],
    nu: Dict[Tuple[int, int], np.ndarray],
) -> float:
    """
    Worst violation of beta_p beta_q(b) nu(p,q) = nu(p,q) beta_pq(b) and
    nu(p,q) nu(pq,r) = beta_p(nu(q,r)) nu(p,qr)."""
    q_group = ext.quotient
    worst = 0.0
    for p in range(q_group.order):
        for q in range(q_group.order):
            pq = q_group.mul(p, q)
            for i in range(inner.dim):
                b = inner.basis(i)
                lhs = inner.multiply(beta[p] @ (beta[q] @ b), nu[p, q])
                rhs = inner.multiply(nu[p, q], beta[pq] @ b)
                worst = max(worst, float(np.abs(lhs - rhs).max()))
            for r in range(q_group.order):
                lhs = inner.multiply(nu[p, q], nu[pq, r])
                rhs = inner.multiply(beta[p] @ nu[q, r], nu[p, q_group.mul(q, r)])
                worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def packer_raeburn_decompose(
    ext: FiniteExtension, action: Action, sigma: PhaseTable
) -> TwistingPair:
    """
    Split the crossed product by G into one by N followed by one by G/N. beta_p is the
    conjugation by s_p on the inner algebra, nu the cocycle of the section with values in its
    unitaries."""
    group, bd = ext.group, action.base_dim
    check_group_cocycle(group, action, sigma)
    if any(ext.c[x] != 1 for x in ext.normal):
        raise ExtensionError("N must lie in the kernel of c.")

    normal = ext.normal
    inner_group = group.subgroup(normal)
    inner = crossed_product(
        inner_group,
        Action(action.base, tuple(action.phi[n] for n in normal)),
        tuple(tuple(sigma[a][b] for b in normal) for a in normal),
        validated=True,
    )
    units = _units(bd)

    beta = []
    for x in ext.section:
        matrix = np.zeros((inner.dim, inner.dim))
        for j, n in enumerate(normal):
            m = group.conj(x, n)
            phase = complex(sigma[x][n] / sigma[m][x])
            for k, u in enumerate(units):
                matrix[:, j * bd + k] = _inner_vector(ext, m, action.apply(x, u) * phase, bd)
        beta.append(matrix)

    q_group = ext.quotient
    nu = {}
    for p, sp in enumerate(ext.section):
        for q, sq in enumerate(ext.section):
            spq = ext.section[q_group.mul(p, q)]
            n = group.mul(group.mul(sp, sq), group.inv(spq))
            phase = complex(sigma[sp][sq] / sigma[n][spq])
            nu[p, q] = _inner_vector(ext, n, phase, bd)

    residual = twisted_pair_residual(ext, inner, beta, nu)
    outer = _outer_product(ext, inner, beta, nu)
    log.debug("decomposed %s: twisted pair residual %.3e", ext, residual)
    return TwistingPair(inner, tuple(beta), nu, outer, residual)


def _outer_product(ext, inner: StructureAlgebra, beta, nu) -> StructureAlgebra:
    """(b delta_p)(b' delta_q) = b beta_p(b') nu(p,q) delta_pq over the quotient."""
    q_group = ext.quotient
    m = inner.dim
    dim = q_group.order * m
    mult = np.zeros((dim, dim, dim))
    involution = np.zeros((dim, dim))
    for p in range(q_group.order):
        for i in range(m):
            b = inner.basis(i)
            for q in range(q_group.order):
                pq = q_group.mul(p, q)
                for j in range(m):
                    value = inner.multiply(inner.multiply(b, beta[p] @ inner.basis(j)), nu[p, q])
                    mult[p * m + i, q * m + j, pq * m : (pq + 1) * m] = value
            # (b delta_p)* = nu(p^-1,p)* beta_{p^-1}(b*) delta_{p^-1}
            pi = q_group.inv(p)
            value = inner.multiply(inner.star(nu[pi, p]), beta[pi] @ inner.star(b))
            involution[pi * m : (pi + 1) * m, p * m + i] = value

    unit = np.zeros(dim)
    unit[:m] = inner.unit
    generators = [np.pad(g, (0, dim - m)) for g in inner.algebra_generators()]
    for q in q_group.generators():
        g = np.zeros(dim)
        g[q * m : (q + 1) * m] = inner.unit
        generators.append(g)
    return StructureAlgebra(mult, involution, unit, tuple(generators), name=f"({inner.name})xG/N")


def packer_raeburn_verify(ext: FiniteExtension, action: Action, sigma: PhaseTable) -> bool:
    """Compare the crossed product by G with the iterated one: dimension, center, blocks."""
    full = crossed_product(ext.group, action, sigma)
    pair = packer_raeburn_decompose(ext, action, sigma)
    outer = pair.outer
    checks = {
        "twisted pair": pair.residual < settings.rounding_tolerance,
        "dimension": full.dim == outer.dim,
        "center": full.center().shape[1] == outer.center().shape[1],
        "blocks": wedderburn(full) == wedderburn(outer),
    }
    for name, ok in checks.items():
        log.debug("packer-raeburn %s on %s: %s", name, ext, "ok" if ok else "mismatch")
    return all(checks.values())


def symmetric_group_3() -> FiniteGroup:
    group = dihedral_group(3)
    return FiniteGroup(group.table, "S_3")


class ExtensionCase(NamedTuple):
    name: str
    extension: FiniteExtension
    action: Action
    sigma: PhaseTable


def _trivial_sigma(order: int) -> PhaseTable:
    return tuple(tuple(ONE for _ in range(order)) for _ in range(order))


def standard_extensions() -> List[ExtensionCase]:
    """The extension suite run by `verify --suite packer-raeburn`."""
    cases = []

    def add(name, group, normal, base, phi=None, sigma=None, c=None, section=None):
        phi = tuple(phi) if phi is not None else (1,) * group.order
        sigma = sigma if sigma is not None else _trivial_sigma(group.order)
        ext = FiniteExtension(group, normal, section, c)
        cases.append(ExtensionCase(name, ext, Action(base, phi), sigma))

    add("Z2xZ2/Z2", direct_product(cyclic_group(2), cyclic_group(2)), [0, 2], "R")
    add("Z4/Z2", cyclic_group(4), [0, 2], "C")

    # class CII: T^2 = C^2 = -1, split along S = TC
    cii = SymmetrySpec(t_square=-1, c_square=-1).ct_data()
    group, action = _parity_setup(cii, "C")
    add("CT/{1,S}", group, [0, 3], "C", action.phi, cii.sigma)

    # class DIII with its grading homomorphism, split along T
    diii = SymmetrySpec(t_square=-1, c_square=1).ct_data()
    group, action = _parity_setup(diii, "C")
    c = tuple(diii.c_of(x) for x in range(diii.order))
    add("CT/{1,T}", group, [0, 1], "C", action.phi, diii.sigma, c)

    add("D4/Z4", dihedral_group(4), [0, 1, 2, 3], "R")
    add("Q8/Z2", quaternion_group(), [0, 4], "C")

    cl12 = clifford_cocycle(1, 2)
    add("Z2^3/Z2", parity_group(3), [0, 1], "R", sigma=cl12.sigma)
    add("S3/A3", symmetric_group_3(), [0, 1, 2], "R")
    return cases
