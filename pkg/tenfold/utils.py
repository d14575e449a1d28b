from typing import List, Optional, Sequence

from tabulate import tabulate

from .clifford import CliffordClass, clifford_structure, ct_to_clifford
from .constants import algebra_table_order, tenfold_rows
from .kcalc import k_point, periodic_table
from .symmetry import SymmetrySpec


def render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    # numeric looking cells such as +1 stay text
    return tabulate(rows, headers=header, tablefmt="rst", disable_numparse=True) + "\n"


def sign_label(value: Optional[int]) -> str:
    return "" if value is None else f"{value:+d}"


def generators_label(spec: SymmetrySpec) -> str:
    present = [name for name, v in (("C", spec.c_square), ("T", spec.t_square)) if v is not None]
    if spec.s_present:
        present.append("S")
    return ",".join(present) or "N/A"


def square_labels(spec: SymmetrySpec) -> List[str]:
    """The C^2 and T^2 cells; the complex rows use the S^2 note instead."""
    if spec.field == "complex":
        return ["S^2=+1", ""] if spec.s_present else ["N/A", "N/A"]
    return [sign_label(spec.c_square), sign_label(spec.t_square)]


def tenfold_table() -> str:
    header = ["A", "C^2", "T^2", "Associated algebra", "Ungraded", "Graded Morita"]
    rows = []
    for label in algebra_table_order:
        spec = SymmetrySpec.from_label(label)
        ungraded, morita = ct_to_clifford(spec)
        rows.append(
            [generators_label(spec), *square_labels(spec)]
            + [str(clifford_structure(ungraded)), str(ungraded), str(morita)]
        )
    return render_table(header, rows)


def zero_d_table() -> str:
    header = ["n", "Cartan", "A", "C^2", "T^2", "Clifford", "K-group"]
    rows = []
    for row in tenfold_rows:
        spec = SymmetrySpec.from_label(row["label"])
        n = row["degree"]
        clifford = CliffordClass.real(0, n) if row["field"] == "real" else CliffordClass.complex(n)
        rows.append(
            [str(n), row["label"], generators_label(spec), *square_labels(spec)]
            + [str(clifford), str(k_point(row["field"])[n])]
        )
    return render_table(header, rows)


def periodic_table_text(d_max: int) -> str:
    header = ["n", "Cartan", "C^2", "T^2"] + [f"d={d}" for d in range(d_max + 1)]
    rows = []
    for row, groups in periodic_table(d_max):
        spec = SymmetrySpec.from_label(row["label"])
        rows.append(
            [str(row["degree"]), row["label"], *square_labels(spec)] + [str(g) for g in groups]
        )
    return render_table(header, rows)
