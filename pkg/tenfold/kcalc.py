import logging
from dataclasses import dataclass
from math import comb
from typing import List, Sequence, Tuple

from .clifford import ct_to_clifford, degree
from .constants import COMPLEX_PERIOD, REAL_PERIOD, point_groups, settings, tenfold_rows
from .groups import AbelianGroup
from .symmetry import SymmetrySpec

log = logging.getLogger("tenfold.kcalc")

__all__ = [
    "KSequence",
    "k_point",
    "shift",
    "crossed_with_Z",
    "graded_degree",
    "classify",
    "lattice_classify",
    "iterated_lattice_classify",
    "periodic_table",
    "row_spec",
]


@dataclass(frozen=True)
class KSequence:
    """K-groups of one algebra over a full Bott period; indices wrap."""

    field: str
    groups: Tuple[AbelianGroup, ...]

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        if self.field not in ("real", "complex"):
            raise ValueError(f"Unknown field `{self.field}`.")
        if len(self.groups) != self.period:
            raise ValueError(
                f"A {self.field} K-sequence needs {self.period} groups, got {len(self.groups)}."
            )

    @property
    def period(self) -> int:
        return REAL_PERIOD if self.field == "real" else COMPLEX_PERIOD

    def __getitem__(self, n: int) -> AbelianGroup:
        return self.groups[n % self.period]

    def __iter__(self):
        return iter(self.groups)

    def shift(self, d: int) -> "KSequence":
        return KSequence(self.field, tuple(self[n - d] for n in range(self.period)))

    @classmethod
    def parse(cls, items: Sequence[str]):
        """Field follows from the length: 8 groups are real, 2 are complex."""
        field = {REAL_PERIOD: "real", COMPLEX_PERIOD: "complex"}.get(len(items))
        if field is None:
            raise ValueError(
                f"base_k needs {REAL_PERIOD} or {COMPLEX_PERIOD} groups, got {len(items)}."
            )
        return cls(field, tuple(AbelianGroup.parse(item) for item in items))

    def __str__(self):
        return "[" + ", ".join(str(g) for g in self.groups) + "]"

    def __repr__(self) -> str:
        return f"<KSequence {self.field} {self}>"


def k_point(field: str) -> KSequence:
    """K_n(R) for n = 0..7, or K_n(C) for n = 0, 1."""
    return KSequence(field, tuple(AbelianGroup.parse(g) for g in point_groups[field]))


def shift(seq: KSequence, d: int) -> KSequence:
    return seq.shift(d)


def crossed_with_Z(seq: KSequence) -> KSequence:
    """K_n(A x Z) = K_n(A) + K_{n-1}(A) for the trivial Z action."""
    return KSequence(seq.field, tuple(seq[n] + seq[n - 1] for n in range(seq.period)))


def graded_degree(spec: SymmetrySpec) -> int:
    """The degree of the graded Morita class before any dimension shift."""
    _, graded = ct_to_clifford(spec)
    return degree(graded)


def _base(spec: SymmetrySpec) -> KSequence:
    return spec.base_k if spec.base_k is not None else k_point(spec.field)


def classify(spec: SymmetrySpec) -> AbelianGroup:
    """K_{n0 - d} of the base algebra, d continuous dimensions, no lattice directions."""
    spec.check()
    if spec.lattice_dims:
        raise ValueError("classify takes no lattice dimensions; use lattice_classify.")
    group = _base(spec)[graded_degree(spec) - spec.continuous_dims]
    log.debug("classify %s -> %s", spec, group)
    return group


def lattice_classify(spec: SymmetrySpec) -> AbelianGroup:
    """
    Sum over k of C(d', k) copies of K_{n0 - k}, where n0 already includes the continuous
    shift and d' is the number of lattice directions."""
    spec.check()
    base = _base(spec)
    n0 = graded_degree(spec) - spec.continuous_dims
    d = spec.lattice_dims
    group = AbelianGroup.trivial()
    for k in range(d + 1):
        group = group + base[n0 - k].scaled(comb(d, k))
    log.debug("lattice_classify %s -> %s", spec, group)
    return group


def iterated_lattice_classify(spec: SymmetrySpec) -> AbelianGroup:
    """The same group through d' applications of crossed_with_Z."""
    spec.check()
    seq = _base(spec)
    for _ in range(spec.lattice_dims):
        seq = crossed_with_Z(seq)
    return seq[graded_degree(spec) - spec.continuous_dims]


def row_spec(label: str, **kwargs) -> SymmetrySpec:
    return SymmetrySpec.from_label(label, **kwargs)


def periodic_table(d_max: int) -> List[Tuple[dict, List[AbelianGroup]]]:
    """Rows in degree order (real then complex) with K_{n-d} of a point for d = 0..d_max."""
    if not 0 <= d_max <= settings.max_table_dims:
        raise ValueError(f"d_max must be between 0 and {settings.max_table_dims}.")
    table = []
    for row in tenfold_rows:
        seq = k_point(row["field"])
        table.append((row, [seq[row["degree"] - d] for d in range(d_max + 1)]))
    return table
