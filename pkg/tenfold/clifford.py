import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple

from cachetools import cached

from .constants import COMPLEX_PERIOD, REAL_PERIOD
from .symmetry import SymmetrySpec

log = logging.getLogger("tenfold.clifford")

BASE_TABLE_PATH = Path(__file__).parent / "data" / "clifford_base.txt"
BASE_TABLE_HEADER = (
    "# generated by tenfold.repr_engine.base_structure_table(), do not edit by hand\n"
)

DIVISION_ORDER = {"R": 0, "C": 1, "H": 2}
DIVISION_DIM = {"R": 1, "C": 2, "H": 4}


@dataclass(frozen=True)
class CliffordClass:
    field: str
    r: int = 0
    s: int = 0
    n: int = 0

    def __post_init__(self):
        if self.field not in ("real", "complex"):
            raise ValueError(f"Unknown field `{self.field}`.")
        if min(self.r, self.s, self.n) < 0:
            raise ValueError("Generator counts must be nonnegative.")
        if self.field == "complex" and (self.r or self.s):
            raise ValueError("A complex Clifford class only carries n.")
        if self.field == "real" and self.n:
            raise ValueError("A real Clifford class only carries r and s.")

    @classmethod
    def real(cls, r: int, s: int):
        return cls("real", r, s)

    @classmethod
    def complex(cls, n: int):
        return cls("complex", n=n)

    @property
    def is_real(self):
        return self.field == "real"

    @property
    def dimension(self) -> int:
        """Real dimension of the algebra."""
        return 2 ** (self.r + self.s) if self.is_real else 2 ** (self.n + 1)

    def __str__(self):
        return f"Cl_{{{self.r},{self.s}}}" if self.is_real else f"CCl_{self.n}"

    def __repr__(self) -> str:
        return f"<CliffordClass {self}>"


@dataclass(frozen=True)
class AlgebraStructure:
    """Wedderburn blocks (division type, matrix size), sorted by size then type."""

    blocks: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        for kind, size in self.blocks:
            if kind not in DIVISION_ORDER or size < 1:
                raise ValueError(f"Bad block ({kind}, {size}).")
        object.__setattr__(
            self,
            "blocks",
            tuple(sorted(self.blocks, key=lambda b: (b[1], DIVISION_ORDER[b[0]]))),
        )

    @property
    def dimension(self) -> int:
        return sum(DIVISION_DIM[kind] * size**2 for kind, size in self.blocks)

    def scaled(self, factor: int) -> "AlgebraStructure":
        """Tensor with M_factor(R)."""
        return AlgebraStructure(tuple((kind, size * factor) for kind, size in self.blocks))

    @classmethod
    def parse(cls, text: str):
        blocks = []
        for term in text.split("+"):
            term = term.strip()
            if match := re.fullmatch(r"M(\d+)\(([RCH])\)", term):
                blocks.append((match.group(2), int(match.group(1))))
            elif term in DIVISION_ORDER:
                blocks.append((term, 1))
            else:
                raise ValueError(f"Can't read algebra block `{term}`.")
        return cls(tuple(blocks))

    def __str__(self):
        return " + ".join(kind if size == 1 else f"M{size}({kind})" for kind, size in self.blocks)

    def __repr__(self) -> str:
        return f"<AlgebraStructure {self}>"


def read_base_table(path: Path = BASE_TABLE_PATH) -> Dict[CliffordClass, AlgebraStructure]:
    table = {}
    with open(path) as fp:
        for line in fp:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            name, structure = (part.strip() for part in line.split("="))
            if match := re.fullmatch(r"Cl_\{(\d+),(\d+)\}", name):
                key = CliffordClass.real(int(match.group(1)), int(match.group(2)))
            elif match := re.fullmatch(r"CCl_(\d+)", name):
                key = CliffordClass.complex(int(match.group(1)))
            else:
                raise ValueError(f"Can't read Clifford class `{name}` in {path}.")
            table[key] = AlgebraStructure.parse(structure)
    return table


def render_base_table(table: Dict[CliffordClass, AlgebraStructure]) -> str:
    return "".join(f"{c} = {structure}\n" for c, structure in table.items())


def write_base_table(table: Dict[CliffordClass, AlgebraStructure], path: Path = BASE_TABLE_PATH):
    with open(path, "w") as fp:
        fp.write(BASE_TABLE_HEADER + render_base_table(table))
    log.info("wrote %d base Clifford structures to %s", len(table), path)


@cached(cache={})
def base_table() -> Dict[CliffordClass, AlgebraStructure]:
    table = read_base_table()
    log.debug("loaded %d base Clifford structures", len(table))
    return table


def morita_reduce(c: CliffordClass) -> CliffordClass:
    """Strip (1,1) pairs and reduce the remaining index mod 8 (mod 2 for complex)."""
    if not c.is_real:
        return CliffordClass.complex(c.n % COMPLEX_PERIOD)
    m = min(c.r, c.s)
    return CliffordClass.real((c.r - m) % REAL_PERIOD, (c.s - m) % REAL_PERIOD)


def graded_morita_class(c: CliffordClass) -> CliffordClass:
    """
    The graded Morita class as Cl_{k,0} with k = r - s mod 8, or CCl_{n mod 2}.
    Cl_{0,j} and Cl_{8-j,0} land on the same representative."""
    if not c.is_real:
        return CliffordClass.complex(c.n % COMPLEX_PERIOD)
    return CliffordClass.real((c.r - c.s) % REAL_PERIOD, 0)


def degree(c: CliffordClass) -> int:
    """s - r mod 8 for real classes, n mod 2 for complex ones."""
    if not c.is_real:
        return c.n % COMPLEX_PERIOD
    return (c.s - c.r) % REAL_PERIOD


def clifford_structure(c: CliffordClass) -> AlgebraStructure:
    if not c.is_real:
        return base_table()[CliffordClass.complex(c.n % 2)].scaled(2 ** (c.n // 2))

    m = min(c.r, c.s)
    r, s = c.r - m, c.s - m
    # Cl_{k+8,0} = Cl_{k,0} (x) M16(R), same on the positive side
    factor = 2**m * 16 ** (r // REAL_PERIOD + s // REAL_PERIOD)
    return base_table()[CliffordClass.real(r % REAL_PERIOD, s % REAL_PERIOD)].scaled(factor)


def generating_set(spec: SymmetrySpec, graded: bool = False) -> List[Tuple[str, int]]:
    """
    Odd generators (label, square) of the Clifford algebra attached to a tenfold class.
    The ungraded algebra includes the grading operator; the graded one doesn't. With time
    reversal alone the graded set is doubled by two extra Clifford generators e and f."""
    spec.check()
    t, c = spec.t_square, spec.c_square
    if t is not None and c is None:
        if graded:
            return [("e", -1), ("ie", -1), ("eT", t), ("ifT", t)]
        return [("i", -1), ("T", t), ("iT.Gamma", t)]

    if t is not None:
        gens = [("Gamma", 1), ("C", c), ("iC", c), ("iCT", -c * t)]
    elif c is not None:
        gens = [("Gamma", 1), ("C", c), ("iC", c)]
    elif spec.s_present:
        gens = [("Gamma", 1), ("S", 1)]
    else:
        gens = [("Gamma", 1)]
    return gens[1:] if graded else gens


def _class_of(spec: SymmetrySpec, gens: List[Tuple[str, int]]) -> CliffordClass:
    if spec.field == "complex":
        return CliffordClass.complex(len(gens))
    return CliffordClass.real(
        sum(1 for _, sq in gens if sq == -1), sum(1 for _, sq in gens if sq == 1)
    )


def graded_class(spec: SymmetrySpec) -> CliffordClass:
    """The graded Clifford class straight from the graded generating set (e.g. Cl_{2,2})."""
    return _class_of(spec, generating_set(spec, graded=True))


def ct_to_clifford(spec: SymmetrySpec) -> Tuple[CliffordClass, CliffordClass]:
    """(ungraded Clifford algebra, graded Morita class Cl_{k,0} or CCl_k)."""
    ungraded = _class_of(spec, generating_set(spec))
    return ungraded, graded_morita_class(graded_class(spec))
