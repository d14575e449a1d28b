import numpy as np
import pytest

from tenfold.clifford import (
    BASE_TABLE_PATH,
    CliffordClass,
    clifford_structure,
    ct_to_clifford,
    read_base_table,
    write_base_table,
)
from tenfold.constants import algebra_table_order
from tenfold.exceptions import CocycleError, ExtensionError, RepresentationError
from tenfold.groups import AbelianGroup
from tenfold.kcalc import k_point
from tenfold.repr_engine import (
    Action,
    FiniteExtension,
    base_structure_table,
    build_irreducible_complex_reps,
    build_irreducible_graded_reps,
    check_group_cocycle,
    clifford_algebra_structure,
    commutant_dimension,
    crossed_product,
    ct_structure_algebra,
    cyclic_group,
    dihedral_group,
    direct_product,
    intertwiner_dimension,
    packer_raeburn_decompose,
    packer_raeburn_verify,
    quaternion_group,
    restriction_matrix,
    sr_bruteforce,
    sr_bruteforce_complex,
    sr_of_class,
    standard_extensions,
    symmetric_group_3,
    twisted_group_algebra,
    wedderburn,
)
from tenfold.symmetry import (
    MINUS_ONE,
    ONE,
    SymmetrySpec,
    UnitPhase,
    clifford_cocycle,
    complex_clifford_cocycle,
)


def _trivial(order):
    return tuple(tuple(ONE for _ in range(order)) for _ in range(order))


@pytest.mark.parametrize("n", range(8))
def test_super_representation_groups_match_real_points(n):
    assert sr_bruteforce(0, n) == k_point("real")[n]
    assert max(rep.residual() for rep in build_irreducible_graded_reps(0, n)) < 1e-12


@pytest.mark.parametrize("n", range(2))
def test_super_representation_groups_match_complex_points(n):
    assert sr_bruteforce_complex(n) == k_point("complex")[n]
    assert max(rep.residual() for rep in build_irreducible_complex_reps(n)) < 1e-12


def test_irreducible_counts():
    for r in range(6):
        for s in range(6 - r):
            count = len(build_irreducible_graded_reps(r, s))
            assert count == (2 if (r - s) % 4 == 0 else 1), (r, s)


def test_graded_morita_invariance():
    for r in range(5):
        for s in range(5 - r):
            assert sr_bruteforce(r, s) == sr_bruteforce(r + 1, s + 1)


def test_positive_and_negative_index_agree_mod_8():
    # Cl_{0,j} and Cl_{8-j,0} are graded Morita equivalent
    for j in range(1, 4):
        assert sr_bruteforce(0, j) == sr_bruteforce(8 - j, 0)


def test_sr_of_class():
    assert sr_of_class(CliffordClass.real(0, 1)) == AbelianGroup.cyclic(2)
    assert sr_of_class(CliffordClass.complex(0)) == AbelianGroup.free()


def test_restriction_matrix_shape():
    # two irreducibles of Cl_{0,0}, one of Cl_{0,1}
    m = restriction_matrix(0, 0)
    assert (m.rows, m.cols) == (2, 1)
    assert m.tolist() == [[1], [1]]


def test_intertwiners():
    reps = build_irreducible_graded_reps(0, 0)
    assert [rep.dim for rep in reps] == [1, 1]
    assert commutant_dimension(reps[0]) == 1
    assert intertwiner_dimension(reps[0], reps[1]) == 0
    # graded Cl_{2,0}-modules are Cl_{2,1} = M2(C) modules, so the commutant is C
    (rep,) = build_irreducible_graded_reps(2, 0)
    assert (rep.p, rep.q) == (2, 2)
    assert commutant_dimension(rep) == 2
    with pytest.raises(RepresentationError):
        intertwiner_dimension(reps[0], rep)


def test_irreducible_range():
    with pytest.raises(ValueError):
        build_irreducible_graded_reps(6, 5)
    with pytest.raises(ValueError):
        restriction_matrix(5, 5)


@pytest.mark.parametrize("label", algebra_table_order)
def test_wedderburn_of_tenfold_algebras(label):
    spec = SymmetrySpec.from_label(label)
    ungraded, _ = ct_to_clifford(spec)
    algebra = ct_structure_algebra(spec)
    assert algebra.associativity_residual() < 1e-12
    assert algebra.involution_residual() < 1e-12
    assert wedderburn(algebra) == clifford_structure(ungraded)


def test_base_table_regenerates_frozen_file(tmp_path):
    assert base_structure_table() == read_base_table()
    path = tmp_path / "clifford_base.txt"
    write_base_table(base_structure_table(), path)
    assert path.read_text() == BASE_TABLE_PATH.read_text()


@pytest.mark.parametrize("r, s", [(r, s) for r in range(6) for s in range(6 - r)])
def test_twisted_group_algebra_matches_clifford_structure(r, s):
    algebra = twisted_group_algebra(clifford_cocycle(r, s))
    assert wedderburn(algebra) == clifford_structure(CliffordClass.real(r, s))


@pytest.mark.parametrize("n", range(5))
def test_complex_twisted_group_algebra_matches_clifford_structure(n):
    algebra = twisted_group_algebra(complex_clifford_cocycle(n), "C")
    assert wedderburn(algebra) == clifford_structure(CliffordClass.complex(n))


def test_wedderburn_with_nontrivial_center():
    # Cl_{1,0} = C and Cl_{0,1} = R + R both have a two dimensional center
    assert str(wedderburn(twisted_group_algebra(clifford_cocycle(1, 0)))) == "C"
    assert str(wedderburn(twisted_group_algebra(clifford_cocycle(0, 1)))) == "R + R"


@pytest.mark.parametrize(
    "r, s, expected",
    [(0, 0, "R"), (1, 0, "C"), (2, 0, "H"), (0, 1, "R + R"), (3, 0, "H + H"), (1, 1, "M2(R)")],
)
def test_clifford_algebra_structure(r, s, expected):
    assert str(clifford_algebra_structure(CliffordClass.real(r, s))) == expected


def test_wedderburn_is_seed_independent():
    algebra = twisted_group_algebra(clifford_cocycle(1, 2))
    assert len({wedderburn(algebra, seed=seed) for seed in range(5)}) == 1


def test_crossed_product_of_group_algebra():
    # R[Z_3] = R + C
    algebra = crossed_product(cyclic_group(3), Action("R", (1, 1, 1)), _trivial(3))
    assert str(wedderburn(algebra)) == "R + C"
    assert algebra.center().shape[1] == 3


def test_crossed_product_with_conjugation():
    # C x Z_2 by complex conjugation is M2(R)
    algebra = crossed_product(cyclic_group(2), Action("C", (1, -1)), _trivial(2))
    assert str(wedderburn(algebra)) == "M2(R)"
    assert algebra.involution_residual() < 1e-12


def test_group_algebras_of_order_8():
    real = Action("R", (1,) * 8)
    dihedral = crossed_product(dihedral_group(4), real, _trivial(8))
    assert str(wedderburn(dihedral)) == "R + R + R + R + M2(R)"
    quaternion = crossed_product(quaternion_group(), real, _trivial(8))
    assert str(wedderburn(quaternion)) == "R + R + R + R + H"


def test_cocycle_checks():
    group = cyclic_group(2)
    with pytest.raises(CocycleError):
        check_group_cocycle(group, Action("R", (1, 1)), ((ONE, ONE), (ONE, UnitPhase(0.25))))
    with pytest.raises(CocycleError):
        check_group_cocycle(group, Action("C", (1, 1)), ((ONE, MINUS_ONE), (ONE, ONE)))
    with pytest.raises(CocycleError):
        check_group_cocycle(group, Action("C", (-1, 1)), _trivial(2))
    with pytest.raises(CocycleError):
        check_group_cocycle(group, Action("Q", (1, 1)), _trivial(2))
    # sigma(x,y) = i on Z_2 x Z_2 fails closure over C with trivial action
    klein = direct_product(group, group)
    sigma = tuple(
        tuple(UnitPhase(0.25) if x == 1 and y == 2 else ONE for y in range(4)) for x in range(4)
    )
    with pytest.raises(CocycleError):
        check_group_cocycle(klein, Action("C", (1,) * 4), sigma)


def test_extension_checks():
    s3 = symmetric_group_3()
    with pytest.raises(ExtensionError):
        FiniteExtension(s3, [0, 3])
    with pytest.raises(ExtensionError):
        FiniteExtension(cyclic_group(4), [0, 2], c=(1, -1, -1, 1))
    with pytest.raises(ExtensionError):
        FiniteExtension(cyclic_group(4), [0, 2], section=[0, 2])
    ext = FiniteExtension(s3, [0, 1, 2])
    assert ext.quotient.order == 2
    assert ext.section == (0, 3)


def test_standard_extensions_cover_required_cases():
    cases = standard_extensions()
    names = [case.name for case in cases]
    assert len(cases) >= 6
    assert "Z4/Z2" in names and "CT/{1,S}" in names
    assert all(case.extension.group.order <= 16 for case in cases)


@pytest.mark.parametrize("case", standard_extensions(), ids=lambda case: case.name)
def test_packer_raeburn(case):
    pair = packer_raeburn_decompose(case.extension, case.action, case.sigma)
    assert pair.residual < 1e-9
    assert pair.outer.associativity_residual() < 1e-9
    assert pair.outer.involution_residual() < 1e-9
    assert packer_raeburn_verify(case.extension, case.action, case.sigma)


def test_packer_raeburn_nontrivial_section():
    group = cyclic_group(4)
    ext = FiniteExtension(group, [0, 2], section=[0, 3])
    action = Action("C", (1,) * 4)
    assert packer_raeburn_verify(ext, action, _trivial(4))
    pair = packer_raeburn_decompose(ext, action, _trivial(4))
    # s_1 s_1 = 3 + 3 = 2 lies in N, so nu(1,1) is delta_2
    assert np.allclose(pair.nu[1, 1], [0, 0, 1, 0])
