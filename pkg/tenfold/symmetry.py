import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import TYPE_CHECKING, Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .constants import settings, tenfold_rows
from .exceptions import CocycleError, InconsistentSpec, NotAntiunitary, NotReducedError

if TYPE_CHECKING:
    from .kcalc import KSequence

log = logging.getLogger("tenfold.symmetry")

__all__ = [
    "UnitPhase",
    "ParityGroupData",
    "BasisChange",
    "StandardForm",
    "SymmetrySpec",
    "sign_cocycle",
    "clifford_cocycle",
    "complex_clifford_cocycle",
    "validate_cocycle",
    "reduce_antiunitaries",
    "antiunitary_case",
    "standardize",
    "exterior_transform",
    "pm1_reduce",
]


@dataclass(frozen=True)
class UnitPhase:
    """
    The phase exp(2*pi*i*turns), kept as an exact rational number of turns in [0, 1)."""

    turns: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "turns", Fraction(self.turns) % 1)

    @classmethod
    def sign(cls, value: int):
        if value not in (1, -1):
            raise ValueError(f"{value} is not a sign.")
        return cls(Fraction(0) if value == 1 else Fraction(1, 2))

    def __mul__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(self.turns + other.turns)

    def __truediv__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(self.turns - other.turns)

    def __pow__(self, k: int) -> "UnitPhase":
        return UnitPhase(self.turns * k)

    def inverse(self) -> "UnitPhase":
        return UnitPhase(-self.turns)

    # the complex conjugate of a unit phase is its inverse
    conjugate = inverse

    def twisted(self, phi: int) -> "UnitPhase":
        """lambda^x: conjugated when x acts antiunitarily."""
        return self if phi == 1 else self.conjugate()

    def sqrt(self) -> "UnitPhase":
        return UnitPhase(self.turns / 2)

    @property
    def is_sign(self) -> bool:
        return self.turns in (0, Fraction(1, 2))

    @property
    def to_sign(self) -> int:
        if not self.is_sign:
            raise ValueError(f"{self} is not real.")
        return 1 if self.turns == 0 else -1

    def __complex__(self):
        return complex(np.exp(2j * np.pi * float(self.turns)))

    def __str__(self):
        return f"e(2pi*i*{self.turns})" if not self.is_sign else f"{self.to_sign:+d}"

    def __repr__(self) -> str:
        return f"<UnitPhase turns={self.turns}>"


ONE = UnitPhase()
MINUS_ONE = UnitPhase.sign(-1)

PhaseTable = Tuple[Tuple[UnitPhase, ...], ...]


def _bits(x: int, n: int) -> List[int]:
    return [(x >> i) & 1 for i in range(n)]


@dataclass(frozen=True)
class ParityGroupData:
    """
    Symmetry data on the group {+1,-1}^n. Elements are bitmasks, generator i is 1 << i.
    `phi` and `c` give the values of the two homomorphisms on the generators."""

    n: int
    phi: Tuple[int, ...]
    c: Tuple[int, ...]
    sigma: PhaseTable

    def __post_init__(self):
        self.check_kwargs(self.n, self.phi, self.c, self.sigma)

    @staticmethod
    def check_kwargs(n, phi, c, sigma):
        if not 0 <= n <= settings.max_parity_generators:
            raise CocycleError(
                f"{n} generators requested, at most {settings.max_parity_generators} supported."
            )
        if len(phi) != n or len(c) != n:
            raise CocycleError(f"phi and c need {n} entries each.")
        if any(v not in (1, -1) for v in (*phi, *c)):
            raise CocycleError("phi and c take values +1 and -1 only.")
        if len(sigma) != 1 << n or any(len(row) != 1 << n for row in sigma):
            raise CocycleError(f"sigma must be a {1 << n}x{1 << n} table.")

    @property
    def order(self) -> int:
        return 1 << self.n

    def _character(self, values: Sequence[int], x: int) -> int:
        sign = 1
        for i, bit in enumerate(_bits(x, self.n)):
            if bit:
                sign *= values[i]
        return sign

    def phi_of(self, x: int) -> int:
        return self._character(self.phi, x)

    def c_of(self, x: int) -> int:
        return self._character(self.c, x)

    def __call__(self, x: int, y: int) -> UnitPhase:
        return self.sigma[x][y]

    def with_sigma(self, sigma: Callable[[int, int], UnitPhase]) -> "ParityGroupData":
        table = tuple(tuple(sigma(x, y) for y in range(self.order)) for x in range(self.order))
        return ParityGroupData(self.n, self.phi, self.c, table)

    def turn_table(self) -> Tuple[np.ndarray, int]:
        """Integer numerators of all turns over a common denominator."""
        denominator = reduce(lcm, (p.turns.denominator for row in self.sigma for p in row), 1)
        table = np.array(
            [
                [p.turns.numerator * (denominator // p.turns.denominator) for p in row]
                for row in self.sigma
            ],
            dtype=np.int64,
        )
        return table, denominator

    @property
    def json(self):
        return {
            "n": self.n,
            "phi": list(self.phi),
            "c": list(self.c),
            "sigma": [[str(p.turns) for p in row] for row in self.sigma],
        }

    @classmethod
    def from_json(cls, json: dict):
        sigma = tuple(tuple(UnitPhase(Fraction(t)) for t in row) for row in json["sigma"])
        return cls(json["n"], tuple(json["phi"]), tuple(json["c"]), sigma)

    def __str__(self):
        return f"<ParityGroupData n={self.n} phi={self.phi} c={self.c}>"

    def __repr__(self) -> str:
        return self.__str__()


def sign_cocycle(
    squares: Sequence[int],
    commutation: Optional[Sequence[Sequence[int]]] = None,
    phi: Optional[Sequence[int]] = None,
    c: Optional[Sequence[int]] = None,
) -> ParityGroupData:
    """
    The +-1 cocycle of ordered generators g_1..g_n with g_i^2 = squares[i] and
    g_i g_j = commutation[i][j] g_j g_i (only i > j is read, default -1):

        sigma(x, y) = prod_{i>j} commutation[i][j]^(x_i y_j) * prod_i squares[i]^(x_i y_i)
    """
    n = len(squares)
    if commutation is None:
        commutation = [[-1] * n for _ in range(n)]
    phi = tuple(phi) if phi is not None else (1,) * n
    c = tuple(c) if c is not None else (-1,) * n

    def value(x, y):
        xb, yb = _bits(x, n), _bits(y, n)
        sign = 1
        for i in range(n):
            if not xb[i]:
                continue
            if yb[i]:
                sign *= squares[i]
            for j in range(i):
                if yb[j]:
                    sign *= commutation[i][j]
        return UnitPhase.sign(sign)

    table = tuple(tuple(value(x, y) for y in range(1 << n)) for x in range(1 << n))
    return ParityGroupData(n, phi, c, table)


def clifford_cocycle(r: int, s: int) -> ParityGroupData:
    """sigma_{r,s}: r generators squaring to -1 followed by s squaring to +1."""
    return sign_cocycle([-1] * r + [1] * s)


def complex_clifford_cocycle(n: int) -> ParityGroupData:
    return sign_cocycle([1] * n)


def validate_cocycle(d: ParityGroupData) -> bool:
    """
    Normalization plus sigma(x,y) sigma(xy,z) = sigma(y,z)^x sigma(x,yz) on every triple."""
    if any(d(0, x) != ONE or d(x, 0) != ONE for x in range(d.order)):
        return False

    table, denominator = d.turn_table()
    elements = np.arange(d.order)
    ys, zs = np.meshgrid(elements, elements, indexing="ij")
    for x in range(d.order):
        lhs = table[x, ys] + table[x ^ ys, zs]
        rhs = d.phi_of(x) * table[ys, zs] + table[x, ys ^ zs]
        if np.any((lhs - rhs) % denominator):
            log.debug("cocycle identity fails at x=%d", x)
            return False
    return True


def exterior_transform(
    d: ParityGroupData, lam: Union[Sequence[UnitPhase], Callable[[int], UnitPhase]]
) -> ParityGroupData:
    """sigma'(x,y) = lam(x) lam(y)^x sigma(x,y) lam(xy)^-1."""
    values = [lam(x) for x in range(d.order)] if callable(lam) else list(lam)
    if len(values) != d.order:
        raise CocycleError(f"lambda needs {d.order} values, got {len(values)}.")
    if values[0] != ONE:
        raise CocycleError("lambda must be 1 at the identity.")

    return d.with_sigma(
        lambda x, y: values[x] * values[y].twisted(d.phi_of(x)) * d(x, y) / values[x ^ y]
    )


class BasisChange(NamedTuple):
    # new generator i is the old element masks[i]
    masks: Tuple[int, ...]
    case: str

    def image(self, y: int) -> int:
        x = 0
        for i, mask in enumerate(self.masks):
            if (y >> i) & 1:
                x ^= mask
        return x


# (phi == -1, c == -1) packed as a two bit label
_EVEN_ANTIUNITARY, _ODD_UNITARY, _ODD_ANTIUNITARY = 1, 2, 3

_cases = {
    (): "unitary",
    (_ODD_UNITARY,): "odd unitary",
    (_EVEN_ANTIUNITARY,): "even antiunitary",
    (_ODD_ANTIUNITARY,): "odd antiunitary",
    (_EVEN_ANTIUNITARY, _ODD_ANTIUNITARY): "even and odd antiunitary",
}


def _label(d: ParityGroupData, x: int) -> int:
    return int(d.phi_of(x) == -1) | (int(d.c_of(x) == -1) << 1)


def _independent(basis: List[int], x: int) -> bool:
    # basis is kept with distinct leading bits
    for b in basis:
        if x ^ b < x:
            x ^= b
    return x != 0


def _insert(basis: List[int], x: int):
    for b in basis:
        if x ^ b < x:
            x ^= b
    basis.append(x)
    basis.sort(reverse=True)


def reduce_antiunitaries(d: ParityGroupData) -> Tuple[ParityGroupData, BasisChange]:
    """
    Change the F2 basis of {+1,-1}^n so the generators are a basis of ker(phi, c) followed by
    at most two generators spanning the image of (phi, c). Lowest bitmasks win ties."""
    image = {_label(d, x) for x in range(d.order)}
    if len(image) == 1:
        targets = ()
    elif len(image) == 2:
        targets = (max(image),)
    else:
        targets = (_EVEN_ANTIUNITARY, _ODD_ANTIUNITARY)

    lifts = [next(x for x in range(d.order) if _label(d, x) == t) for t in targets]

    kernel, echelon = [], []
    for x in range(1, d.order):
        if _label(d, x) == 0 and _independent(echelon, x):
            kernel.append(x)
            _insert(echelon, x)

    masks = tuple(kernel + lifts)
    if len(masks) != d.n:
        raise CocycleError(f"Basis change found {len(masks)} generators for n={d.n}.")
    change = BasisChange(masks, _cases[targets])

    images = [change.image(y) for y in range(d.order)]
    reduced = ParityGroupData(
        d.n,
        tuple(d.phi_of(m) for m in masks),
        tuple(d.c_of(m) for m in masks),
        tuple(tuple(d(images[x], images[y]) for y in range(d.order)) for x in range(d.order)),
    )
    log.debug("reduced generators %s (%s)", masks, change.case)
    return reduced, change


def _split(d: ParityGroupData) -> Tuple[int, Tuple[int, ...]]:
    labels = [_label(d, 1 << i) for i in range(d.n)]
    kernel = 0
    while kernel < d.n and labels[kernel] == 0:
        kernel += 1
    trailing = tuple(labels[kernel:])
    if trailing not in _cases:
        raise NotReducedError(
            f"Generator labels {labels} are not kernel generators followed by a reduced image."
        )
    return kernel, trailing


def antiunitary_case(d: ParityGroupData) -> str:
    return _cases[_split(d)[1]]


@dataclass(frozen=True)
class StandardForm:
    """
    Exterior class invariants of reduced data: unitary generators (phi = +1) normalized to
    square +1, antiunitary squares, and the commutation signs lambda_ij (unitary pairs) and
    nu_ik (unitary with antiunitary). The antiunitaries are fixed to commute."""

    phi: Tuple[int, ...]
    c: Tuple[int, ...]
    u_squares: Tuple[int, ...]
    a_squares: Tuple[int, ...]
    unitary_signs: Tuple[Tuple[int, ...], ...]
    mixed_signs: Tuple[Tuple[int, ...], ...]

    def to_data(self) -> ParityGroupData:
        m, k = len(self.u_squares), len(self.a_squares)
        n = m + k
        commutation = [[1] * n for _ in range(n)]
        for i in range(n):
            for j in range(i):
                if i < m:
                    commutation[i][j] = self.unitary_signs[j][i]
                elif j < m:
                    commutation[i][j] = self.mixed_signs[j][i - m]
        return sign_cocycle(
            list(self.u_squares) + list(self.a_squares), commutation, self.phi, self.c
        )


def standardize(d: ParityGroupData) -> StandardForm:
    _split(d)
    unitary = [i for i in range(d.n) if d.phi[i] == 1]
    antiunitary = [i for i in range(d.n) if d.phi[i] == -1]

    def gen(i):
        return 1 << i

    def sign_of(phase: UnitPhase, what: str) -> int:
        if not phase.is_sign:
            raise CocycleError(f"{what} is {phase}, expected +1 or -1.")
        return phase.to_sign

    a_squares = tuple(
        sign_of(d(gen(a), gen(a)), f"square of antiunitary generator {a}") for a in antiunitary
    )
    unitary_signs = tuple(
        tuple(
            1 if i == j else sign_of(d(gen(i), gen(j)) / d(gen(j), gen(i)), f"lambda_{i}{j}")
            for j in unitary
        )
        for i in unitary
    )
    mixed_signs = tuple(
        tuple(
            sign_of(
                d(gen(i), gen(a)) / d(gen(a), gen(i)) / d(gen(i), gen(i)), f"nu_{i}{a}"
            )
            for a in antiunitary
        )
        for i in unitary
    )
    return StandardForm(
        tuple(d.phi[i] for i in unitary + antiunitary),
        tuple(d.c[i] for i in unitary + antiunitary),
        (1,) * len(unitary),
        a_squares,
        unitary_signs,
        mixed_signs,
    )


def pm1_reduce(d: ParityGroupData, w: int) -> ParityGroupData:
    """
    Exterior equivalent cocycle that only takes values +-1 (the group is abelian, so the
    centralizer of w is everything). Uses lam(y) = sigma(w,y) / sigma(y,w) and the
    coboundary of its principal square root."""
    if d.phi_of(w) != -1:
        raise NotAntiunitary(f"Element {w} acts unitarily; an antiunitary element is needed.")
    if not validate_cocycle(d):
        raise CocycleError("pm1_reduce needs a valid cocycle.")
    return exterior_transform(d, lambda y: (d(w, y) / d(y, w)).sqrt())


@dataclass(frozen=True)
class SymmetrySpec:
    t_square: Optional[int] = None
    c_square: Optional[int] = None
    s_present: bool = False
    continuous_dims: int = 0
    lattice_dims: int = 0
    base_k: Optional["KSequence"] = None

    def check(self) -> "SymmetrySpec":
        for name, value in (("T", self.t_square), ("C", self.c_square)):
            if value not in (None, 1, -1):
                raise InconsistentSpec(f"{name}^2 must be +1 or -1, got {value}.")
        if self.s_present and self.t_square is not None and self.c_square is not None:
            raise InconsistentSpec(
                "S is implied by T and C (S = CT) and must not be specified separately."
            )
        if self.s_present and (self.t_square is not None or self.c_square is not None):
            raise InconsistentSpec(
                "S together with a single antiunitary fixes the other one; give both T and C."
            )
        if self.continuous_dims < 0 or self.lattice_dims < 0:
            raise InconsistentSpec("Dimensions must be nonnegative.")
        if self.base_k is not None and self.base_k.field != self.field:
            raise InconsistentSpec(
                f"base_k is a {self.base_k.field} sequence but the symmetries select the "
                f"{self.field} series."
            )
        return self

    @property
    def field(self) -> str:
        return "real" if self.t_square is not None or self.c_square is not None else "complex"

    @property
    def cartan_label(self) -> str:
        return next(
            row["label"]
            for row in tenfold_rows
            if (row["t_square"], row["c_square"], row["s_present"])
            == (self.t_square, self.c_square, self.s_present)
        )

    @classmethod
    def from_label(cls, label: str, **kwargs):
        row = next((r for r in tenfold_rows if r["label"] == label), None)
        if row is None:
            raise InconsistentSpec(f"Unknown symmetry class `{label}`.")
        return cls(row["t_square"], row["c_square"], row["s_present"], **kwargs)

    def ct_data(self) -> ParityGroupData:
        """
        The CT subgroup with its standard cocycle. Generators are ordered T, C (whichever are
        present) or S alone; T and C commute."""
        squares, phi, c = [], [], []
        if self.t_square is not None:
            squares, phi, c = squares + [self.t_square], phi + [-1], c + [1]
        if self.c_square is not None:
            squares, phi, c = squares + [self.c_square], phi + [-1], c + [-1]
        if self.s_present:
            squares, phi, c = [1], [1], [-1]
        n = len(squares)
        return sign_cocycle(squares, [[1] * n for _ in range(n)], phi, c)

    @property
    def json(self):
        return {
            "T": self.t_square,
            "C": self.c_square,
            "S": 1 if self.s_present else None,
            "continuous_dims": self.continuous_dims,
            "lattice_dims": self.lattice_dims,
            "base_k": [str(g) for g in self.base_k.groups] if self.base_k else None,
        }

    def __str__(self):
        return (
            f"<SymmetrySpec T={self.t_square} C={self.c_square} S={self.s_present} "
            f"d={self.continuous_dims} d'={self.lattice_dims} base_k={self.base_k}>"
        )

    def __repr__(self) -> str:
        return self.__str__()
