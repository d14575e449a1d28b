import logging
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, List, NamedTuple, Sequence, Tuple

log = logging.getLogger("tenfold.groups")

__all__ = [
    "AbelianGroup",
    "IntMatrix",
    "SmithForm",
    "direct_sum",
    "smith_normal_form",
    "cokernel",
]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("Matrix dimensions must be nonnegative.")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(
                f"Expected {self.rows}x{self.cols} entries, got rows of lengths "
                f"{[len(r) for r in self.entries]}."
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(tuple(r[j] for r in self.entries) for j in range(self.cols)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"Can't multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}."
            )
        cols = other.transpose().entries
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries),
        )

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    def __str__(self):
        return f"<IntMatrix {self.rows}x{self.cols} {self.tolist()}>"

    def __repr__(self) -> str:
        return self.__str__()


class SmithForm(NamedTuple):
    diagonal: List[int]
    left: IntMatrix
    right: IntMatrix
    matrix: IntMatrix


def _swap_rows(a, u, i, j):
    a[i], a[j] = a[j], a[i]
    u[i], u[j] = u[j], u[i]


def _swap_cols(a, v, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in v:
        row[i], row[j] = row[j], row[i]


def _add_row(a, u, target, source, k):
    # row[target] += k * row[source]
    for mat in (a, u):
        mat[target] = [x + k * y for x, y in zip(mat[target], mat[source])]


def _add_col(a, v, target, source, k):
    for mat in (a, v):
        for row in mat:
            row[target] += k * row[source]


def smith_normal_form(m: IntMatrix) -> SmithForm:
    """
    Diagonalize `m` with unimodular row and column operations.
    Returns the diagonal together with U and V such that U @ m @ V is the diagonal matrix."""
    rows, cols = m.rows, m.cols
    a = m.tolist()
    u = IntMatrix.identity(rows).tolist()
    v = IntMatrix.identity(cols).tolist()

    t = 0
    while t < min(rows, cols):
        pivots = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not pivots:
            break
        _, i, j = min(pivots)
        _swap_rows(a, u, t, i)
        _swap_cols(a, v, t, j)

        while True:
            moved = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    _add_row(a, u, i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        _swap_rows(a, u, i, t)
                        moved = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    _add_col(a, v, j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        _swap_cols(a, v, j, t)
                        moved = True
            if moved:
                continue

            stray = next(
                (
                    i
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if a[i][j] % a[t][t]
                ),
                None,
            )
            if stray is None:
                break
            # pulls a non-multiple into row t, the column pass then lowers the pivot
            _add_row(a, u, t, stray, 1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    diagonal = [a[i][i] for i in range(min(rows, cols))]
    return SmithForm(
        diagonal,
        IntMatrix.from_rows(u, rows),
        IntMatrix.from_rows(v, cols),
        IntMatrix.from_rows(a, cols),
    )


def _prime_powers(n: int) -> List[Tuple[int, int]]:
    """(p, p^e) for each prime p exactly dividing n with multiplicity e."""
    powers, p = [], 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            powers.append((p, q))
        p += 1
    if n > 1:
        powers.append((n, n))
    return powers


@dataclass(frozen=True)
class AbelianGroup:
    """
    A finitely generated abelian group Z^free_rank + Z_m1 + ... + Z_mk in invariant factor form,
    so equal groups have equal fields."""

    free_rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        torsion = tuple(int(t) for t in self.torsion)
        object.__setattr__(self, "torsion", torsion)
        if self.free_rank < 0:
            raise ValueError("Free rank must be nonnegative.")
        if any(t < 2 for t in torsion):
            raise ValueError(f"Invariant factors must be at least 2, got {list(torsion)}.")
        if any(b % a for a, b in zip(torsion, torsion[1:])):
            raise ValueError(f"{list(torsion)} is not a divisibility chain.")

    @classmethod
    def trivial(cls):
        return cls()

    @classmethod
    def free(cls, rank: int = 1):
        return cls(rank, ())

    @classmethod
    def cyclic(cls, order: int):
        if order == 0:
            return cls.free(1)
        return cls.from_factors(0, [order])

    @classmethod
    def from_factors(cls, free_rank: int, factors: Iterable[int]):
        """
        Build a group from any list of cyclic orders (Z_2 + Z_3 becomes Z_6).

        The orders are split into prime powers; the j-th largest invariant factor is the
        product over primes of the j-th largest power of that prime."""
        factors = [abs(int(f)) for f in factors]
        free_rank += factors.count(0)
        powers = defaultdict(list)
        for order, count in Counter(f for f in factors if f > 1).items():
            for p, q in _prime_powers(order):
                powers[p] += [q] * count
        length = max((len(qs) for qs in powers.values()), default=0)
        invariant = [1] * length
        for qs in powers.values():
            for j, q in enumerate(sorted(qs, reverse=True)):
                invariant[j] *= q
        return cls(free_rank, tuple(reversed(invariant)))

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def scaled(self, k: int) -> "AbelianGroup":
        """k-fold direct sum."""
        return AbelianGroup.from_factors(self.free_rank * k, list(self.torsion) * k)

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return direct_sum(self, other)

    @property
    def machine(self) -> str:
        return f"free_rank={self.free_rank} torsion={','.join(map(str, self.torsion))}"

    @property
    def json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, json: dict):
        return cls(json.get("free_rank", 0), tuple(json.get("torsion", ())))

    @classmethod
    def parse(cls, text: str):
        """
        Read either rendering: `Z + Z_2^4`, `Z^2`, `0`, or `free_rank=1 torsion=2,2,2,2`."""
        text = text.strip()
        if match := re.fullmatch(r"free_rank=(\d+)\s+torsion=([\d,]*)", text):
            factors = [int(t) for t in match.group(2).split(",") if t]
            return cls.from_factors(int(match.group(1)), factors)

        free, factors = 0, []
        for term in text.split("+"):
            term = term.strip()
            if term == "0":
                continue
            if match := re.fullmatch(r"Z(?:\^(\d+))?", term):
                free += int(match.group(1) or 1)
            elif match := re.fullmatch(r"Z_(\d+)(?:\^(\d+))?", term):
                factors += [int(match.group(1))] * int(match.group(2) or 1)
            else:
                raise ValueError(f"Can't read group term `{term}`.")
        return cls.from_factors(free, factors)

    def __str__(self):
        terms = []
        if self.free_rank == 1:
            terms.append("Z")
        elif self.free_rank > 1:
            terms.append(f"Z^{self.free_rank}")
        for order, same in groupby(self.torsion):
            count = len(list(same))
            terms.append(f"Z_{order}" if count == 1 else f"Z_{order}^{count}")
        return " + ".join(terms) or "0"

    def __repr__(self) -> str:
        return f"<AbelianGroup {self}>"


def direct_sum(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    return AbelianGroup.from_factors(a.free_rank + b.free_rank, a.torsion + b.torsion)


def cokernel(m: IntMatrix) -> AbelianGroup:
    """Z^rows / image(m) for m viewed as a map Z^cols -> Z^rows."""
    diagonal = smith_normal_form(m).diagonal
    rank = sum(1 for d in diagonal if d)
    group = AbelianGroup(m.rows - rank, tuple(d for d in diagonal if d > 1))
    log.debug("cokernel of %dx%d matrix: %s", m.rows, m.cols, group)
    return group
