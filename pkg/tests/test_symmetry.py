from fractions import Fraction

import numpy as np
import pytest

from tenfold.constants import tenfold_rows
from tenfold.exceptions import CocycleError, InconsistentSpec, NotAntiunitary, NotReducedError
from tenfold.symmetry import (
    MINUS_ONE,
    ONE,
    ParityGroupData,
    SymmetrySpec,
    UnitPhase,
    antiunitary_case,
    clifford_cocycle,
    exterior_transform,
    pm1_reduce,
    reduce_antiunitaries,
    sign_cocycle,
    standardize,
    validate_cocycle,
)


def _random_lambda(rng, order):
    # eighth roots of unity, 1 at the identity
    return [ONE] + [UnitPhase(Fraction(int(k), 8)) for k in rng.integers(0, 8, order - 1)]


def _random_reduced(rng, kernel, phi_tail, c_tail):
    n = kernel + len(phi_tail)
    squares = [int(s) for s in rng.choice([-1, 1], n)]
    commutation = [[int(s) for s in rng.choice([-1, 1], n)] for _ in range(n)]
    return sign_cocycle(
        squares, commutation, (1,) * kernel + tuple(phi_tail), (1,) * kernel + tuple(c_tail)
    )


def test_unit_phase_arithmetic():
    i = UnitPhase(Fraction(1, 4))
    assert i * i == MINUS_ONE
    assert i.conjugate() == UnitPhase(Fraction(3, 4))
    assert i / i == ONE
    assert i**4 == ONE
    assert MINUS_ONE.sqrt() == i
    assert complex(i) == pytest.approx(1j)
    assert i.twisted(-1) == i.inverse()
    assert str(MINUS_ONE) == "-1"
    with pytest.raises(ValueError):
        UnitPhase.sign(2)


def test_sign_cocycle_values():
    d = clifford_cocycle(1, 1)
    e, f = 1, 2
    assert d(e, e) == MINUS_ONE
    assert d(f, f) == ONE
    # f e = -e f
    assert d(f, e) / d(e, f) == MINUS_ONE
    assert validate_cocycle(d)


def test_validate_rejects_broken_cocycles():
    d = clifford_cocycle(2, 0)
    broken = d.with_sigma(lambda x, y: MINUS_ONE if (x, y) == (1, 2) else d(x, y))
    assert not validate_cocycle(broken)
    unnormalized = d.with_sigma(lambda x, y: MINUS_ONE if x == 0 and y == 1 else d(x, y))
    assert not validate_cocycle(unnormalized)


def test_parity_data_checks():
    with pytest.raises(CocycleError):
        ParityGroupData(1, (1,), (1, 1), ((ONE, ONE), (ONE, ONE)))
    with pytest.raises(CocycleError):
        ParityGroupData(1, (2,), (1,), ((ONE, ONE), (ONE, ONE)))
    with pytest.raises(CocycleError):
        ParityGroupData(1, (1,), (1,), ((ONE,),))


def test_exterior_transform_keeps_validity():
    rng = np.random.default_rng(3)
    d = sign_cocycle([-1, 1, -1], phi=(1, -1, 1))
    for _ in range(20):
        assert validate_cocycle(exterior_transform(d, _random_lambda(rng, d.order)))
    with pytest.raises(CocycleError):
        exterior_transform(d, [MINUS_ONE] * d.order)
    with pytest.raises(CocycleError):
        exterior_transform(d, [ONE])


def test_reduce_even_and_odd_antiunitary():
    # T then C
    d = sign_cocycle([-1, -1], [[1, 1], [1, 1]], phi=(-1, -1), c=(1, -1))
    reduced, change = reduce_antiunitaries(d)
    assert change.masks == (1, 2)
    assert change.case == "even and odd antiunitary"
    assert antiunitary_case(reduced) == "even and odd antiunitary"


def test_reduce_two_even_antiunitaries():
    d = sign_cocycle([1, -1], phi=(-1, -1), c=(1, 1))
    reduced, change = reduce_antiunitaries(d)
    assert change.masks == (3, 1)
    assert change.case == "even antiunitary"
    assert reduced.phi == (1, -1)
    assert reduced.c == (1, 1)
    assert validate_cocycle(reduced)


def test_reduce_unitary_only():
    d = sign_cocycle([-1, 1, 1], c=(1, 1, 1))
    reduced, change = reduce_antiunitaries(d)
    assert change.case == "unitary"
    assert antiunitary_case(reduced) == "unitary"


def test_reduce_odd_unitaries():
    # Clifford generators are odd, so a single odd unitary is kept
    reduced, change = reduce_antiunitaries(clifford_cocycle(0, 3))
    assert change.case == "odd unitary"
    assert change.masks == (3, 5, 1)
    assert reduced.c == (1, 1, -1)


def test_reduce_three_even_antiunitaries():
    d = sign_cocycle([1, 1, 1], phi=(-1, -1, -1), c=(1, 1, 1))
    reduced, change = reduce_antiunitaries(d)
    assert change.case == "even antiunitary"
    assert change.masks == (3, 5, 1)
    assert reduced.phi == (1, 1, -1)
    assert validate_cocycle(reduced)


def test_standardize_cii():
    reduced, _ = reduce_antiunitaries(SymmetrySpec(t_square=-1, c_square=-1).ct_data())
    form = standardize(reduced)
    assert form.a_squares == (-1, -1)
    assert form.u_squares == ()


def test_standardize_needs_reduced_data():
    d = sign_cocycle([1, 1], phi=(-1, 1), c=(1, 1))
    with pytest.raises(NotReducedError):
        standardize(d)


@pytest.mark.parametrize(
    "phi_tail, c_tail",
    [((), ()), ((1,), (-1,)), ((-1,), (1,)), ((-1,), (-1,)), ((-1, -1), (1, -1))],
)
def test_standardize_is_idempotent(phi_tail, c_tail):
    rng = np.random.default_rng(11)
    for _ in range(10):
        d = _random_reduced(rng, 2, phi_tail, c_tail)
        form = standardize(d)
        assert standardize(form.to_data()) == form
        assert validate_cocycle(form.to_data())


def test_standardize_invariant_under_exterior_transforms():
    rng = np.random.default_rng(5)
    for _ in range(200):
        d = _random_reduced(rng, 2, (-1, -1), (1, -1))
        transformed = exterior_transform(d, _random_lambda(rng, d.order))
        assert validate_cocycle(transformed)
        assert standardize(transformed) == standardize(d)


def test_pm1_reduce_on_random_cocycles():
    rng = np.random.default_rng(9)
    for _ in range(100):
        n = int(rng.integers(1, 4))
        phi = [int(p) for p in rng.choice([-1, 1], n)]
        phi[int(rng.integers(n))] = -1
        squares = [int(s) for s in rng.choice([-1, 1], n)]
        d = sign_cocycle(squares, phi=phi)
        d = exterior_transform(d, _random_lambda(rng, d.order))
        w = next(x for x in range(d.order) if d.phi_of(x) == -1)
        reduced = pm1_reduce(d, w)
        assert validate_cocycle(reduced)
        assert all(phase.is_sign for row in reduced.sigma for phase in row)


def test_pm1_reduce_keeps_sign_cocycles_real():
    d = sign_cocycle([-1, 1], phi=(-1, 1))
    assert all(phase.is_sign for row in pm1_reduce(d, 1).sigma for phase in row)


def test_pm1_reduce_needs_antiunitary():
    d = sign_cocycle([-1, 1], phi=(-1, 1))
    with pytest.raises(NotAntiunitary):
        pm1_reduce(d, 2)


@pytest.mark.parametrize("row", tenfold_rows, ids=lambda r: r["label"])
def test_labels_round_trip(row):
    spec = SymmetrySpec.from_label(row["label"])
    assert spec.cartan_label == row["label"]
    assert spec.field == row["field"]


def test_spec_rules():
    with pytest.raises(InconsistentSpec, match="S is implied"):
        SymmetrySpec(t_square=1, c_square=1, s_present=True).check()
    with pytest.raises(InconsistentSpec):
        SymmetrySpec(t_square=-1, s_present=True).check()
    with pytest.raises(InconsistentSpec):
        SymmetrySpec(continuous_dims=-1).check()
    with pytest.raises(InconsistentSpec):
        SymmetrySpec.from_label("BD")


def test_ct_data():
    d = SymmetrySpec(t_square=-1, c_square=-1).ct_data()
    assert d.phi == (-1, -1)
    assert d.c == (1, -1)
    assert d(1, 1) == MINUS_ONE
    assert d(2, 2) == MINUS_ONE
    assert d(1, 2) == d(2, 1)
    assert validate_cocycle(d)

    chiral = SymmetrySpec(s_present=True).ct_data()
    assert (chiral.n, chiral.phi, chiral.c) == (1, (1,), (-1,))


def test_json_round_trip():
    d = sign_cocycle([-1, 1], phi=(-1, 1))
    assert ParityGroupData.from_json(d.json) == d
