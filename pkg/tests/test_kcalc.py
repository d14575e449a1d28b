import pytest

from tenfold.constants import tenfold_rows
from tenfold.groups import AbelianGroup
from tenfold.kcalc import (
    KSequence,
    classify,
    crossed_with_Z,
    graded_degree,
    iterated_lattice_classify,
    k_point,
    lattice_classify,
    periodic_table,
    row_spec,
    shift,
)
from tenfold.symmetry import SymmetrySpec

G = AbelianGroup.parse

# rows of the periodic table for d = 0..3
PERIODIC = {
    "AI": ["Z", "0", "0", "0"],
    "BDI": ["Z_2", "Z", "0", "0"],
    "D": ["Z_2", "Z_2", "Z", "0"],
    "DIII": ["0", "Z_2", "Z_2", "Z"],
    "AII": ["Z", "0", "Z_2", "Z_2"],
    "CII": ["0", "Z", "0", "Z_2"],
    "C": ["0", "0", "Z", "0"],
    "CI": ["0", "0", "0", "Z"],
    "A": ["Z", "0", "Z", "0"],
    "AIII": ["0", "Z", "0", "Z"],
}


def test_point_sequences():
    assert [str(g) for g in k_point("real")] == ["Z", "Z_2", "Z_2", "0", "Z", "0", "0", "0"]
    assert [str(g) for g in k_point("complex")] == ["Z", "0"]
    assert k_point("real")[9] == G("Z_2")
    assert k_point("real")[-4] == G("Z")


def test_sequence_validation():
    with pytest.raises(ValueError):
        KSequence("real", (G("Z"),) * 3)
    with pytest.raises(ValueError):
        KSequence("quaternionic", (G("Z"),) * 2)
    with pytest.raises(ValueError):
        KSequence.parse(["Z", "0", "0"])
    assert KSequence.parse(["Z", "0"]).field == "complex"


def test_shift():
    seq = k_point("real")
    assert shift(seq, 1)[1] == seq[0]
    assert shift(seq, 8) == seq


@pytest.mark.parametrize("row", tenfold_rows, ids=lambda r: r["label"])
def test_graded_degree_matches_row(row):
    assert graded_degree(row_spec(row["label"])) == row["degree"]


@pytest.mark.parametrize("label, groups", PERIODIC.items())
def test_classify_continuous(label, groups):
    for d, expected in enumerate(groups):
        assert str(classify(row_spec(label, continuous_dims=d))) == expected


def test_periodic_table():
    table = periodic_table(3)
    assert [row["label"] for row, _ in table] == list(PERIODIC)
    for row, groups in table:
        assert [str(g) for g in groups] == PERIODIC[row["label"]]


def test_periodic_table_bott_period():
    for row, groups in periodic_table(11):
        period = 8 if row["field"] == "real" else 2
        assert groups[:12 - period] == groups[period:]


def test_periodic_table_range():
    with pytest.raises(ValueError):
        periodic_table(13)
    with pytest.raises(ValueError):
        periodic_table(-1)


def test_strong_and_weak_invariants_3d_aii():
    spec = SymmetrySpec(t_square=-1, lattice_dims=3)
    group = lattice_classify(spec)
    assert str(group) == "Z + Z_2^4"
    assert group.machine == "free_rank=1 torsion=2,2,2,2"


@pytest.mark.parametrize(
    "spec, expected",
    [
        (SymmetrySpec(), "Z"),
        (SymmetrySpec(s_present=True, continuous_dims=1), "Z"),
        (SymmetrySpec(lattice_dims=2), "Z^2"),
        (SymmetrySpec(c_square=1, lattice_dims=1), "Z_2^2"),
        (SymmetrySpec(s_present=True, lattice_dims=1), "Z"),
    ],
)
def test_lattice_classify_examples(spec, expected):
    assert str(lattice_classify(spec)) == expected


@pytest.mark.parametrize("row", tenfold_rows, ids=lambda r: r["label"])
def test_binomial_formula_matches_iterated_crossed_products(row):
    for d in range(7):
        for continuous in range(3):
            spec = row_spec(row["label"], lattice_dims=d, continuous_dims=continuous)
            assert lattice_classify(spec) == iterated_lattice_classify(spec)


def test_crossed_with_Z():
    seq = crossed_with_Z(k_point("complex"))
    assert [str(g) for g in seq] == ["Z", "Z"]
    seq = crossed_with_Z(k_point("real"))
    assert str(seq[1]) == "Z + Z_2"


def test_custom_base_sequence():
    base = KSequence.parse(["Z^2", "0"])
    spec = SymmetrySpec(base_k=base, continuous_dims=2)
    assert classify(spec) == G("Z^2")
    assert lattice_classify(SymmetrySpec(base_k=base, lattice_dims=1)) == G("Z^2")


def test_classify_rejects_lattice_dims():
    with pytest.raises(ValueError):
        classify(SymmetrySpec(lattice_dims=1))


def test_lattice_classify_high_dimension():
    # K_{4-k}(R) is Z for k = 0 mod 4 and Z_2 for k = 2, 3 mod 8
    group = lattice_classify(SymmetrySpec(t_square=-1, lattice_dims=14))
    assert group.free_rank == 1 + 1001 + 3003 + 91
    assert group.torsion == (2,) * (91 + 364 + 1001 + 364)
    assert str(group) == "Z^4096 + Z_2^1820"
