import logging
import sys
from argparse import ArgumentParser
from itertools import product
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from . import __version__
from .clifford import clifford_structure, ct_to_clifford, read_base_table
from .constants import algebra_table_order, settings
from .converters import parse_family_file, parse_spec_file
from .exceptions import SpecParseError, TenfoldError, VerificationFailed
from .homotopy import (
    conjugate_family,
    cyclic_shift_residual,
    difference_class,
    perturb_family,
    random_family,
    standard_families,
    swap_residual,
    trivializing_path,
    winding,
)
from .kcalc import k_point, lattice_classify
from .repr_engine import (
    base_structure_table,
    build_irreducible_graded_reps,
    ct_structure_algebra,
    packer_raeburn_decompose,
    packer_raeburn_verify,
    sr_bruteforce,
    sr_bruteforce_complex,
    standard_extensions,
    wedderburn,
)
from .symmetry import SymmetrySpec
from .utils import periodic_table_text, tenfold_table, zero_d_table

log = logging.getLogger("tenfold.main")

SUITES = ["repr", "wedderburn", "packer-raeburn", "homotopy"]
TABLES = ["tenfold", "zero-d", "periodic"]


class NoExitParser(ArgumentParser):
    def error(self, message):
        raise SpecParseError(message)


class Check(NamedTuple):
    suite: str
    name: str
    passed: bool
    residual: float = 0.0

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.suite} {self.name} residual={self.residual:.2e}"


def cmd_classify(path: str, format: str = "human") -> str:
    group = lattice_classify(parse_spec_file(path))
    return group.machine if format == "machine" else str(group)


def cmd_table(which: str, d_max: int = 3) -> str:
    if which == "tenfold":
        return tenfold_table()
    if which == "zero-d":
        return zero_d_table()
    return periodic_table_text(d_max)


def cmd_winding(path: str) -> int:
    return winding(parse_family_file(path))


# verification suites


def _worst_residual(r: int, s: int) -> float:
    return max(rep.residual() for rep in build_irreducible_graded_reps(r, s))


def verify_repr(seed: int) -> List[Check]:
    checks = []
    real, complex_ = k_point("real"), k_point("complex")
    for n in range(8):
        group = sr_bruteforce(0, n)
        residual = max(_worst_residual(0, n), _worst_residual(0, n + 1))
        checks.append(Check("repr", f"SR(Cl_{{0,{n}}})={group}", group == real[n], residual))
    for n in range(2):
        group = sr_bruteforce_complex(n)
        checks.append(Check("repr", f"SR(CCl_{n})={group}", group == complex_[n]))

    for r, s in product(range(9), repeat=2):
        if r + s > 8:
            continue
        count = len(build_irreducible_graded_reps(r, s))
        expected = 2 if (r - s) % 4 == 0 else 1
        name = f"irreducibles(Cl_{{{r},{s}}})={count}"
        checks.append(Check("repr", name, count == expected, _worst_residual(r, s)))
        if r + s <= 7:
            same = sr_bruteforce(r, s) == sr_bruteforce(r + 1, s + 1)
            checks.append(Check("repr", f"morita(Cl_{{{r},{s}}})", same))
    return checks


def verify_wedderburn(seed: int) -> List[Check]:
    checks = []
    for label in algebra_table_order:
        spec = SymmetrySpec.from_label(label)
        ungraded, _ = ct_to_clifford(spec)
        found = wedderburn(ct_structure_algebra(spec), seed=seed)
        expected = clifford_structure(ungraded)
        checks.append(Check("wedderburn", f"{label}:{found}", found == expected))

    frozen = read_base_table()
    for c, structure in base_structure_table().items():
        checks.append(Check("wedderburn", f"{c}={structure}", frozen.get(c) == structure))
    return checks


def verify_packer_raeburn(seed: int) -> List[Check]:
    checks = []
    for case in standard_extensions():
        pair = packer_raeburn_decompose(case.extension, case.action, case.sigma)
        passed = packer_raeburn_verify(case.extension, case.action, case.sigma)
        checks.append(Check("packer-raeburn", case.name, passed, pair.residual))
    return checks


def verify_homotopy(seed: int) -> List[Check]:
    rng = np.random.default_rng(seed)
    gamma0, gamma1 = standard_families()
    checks = [
        Check("homotopy", "winding(Gamma0)=0", winding(gamma0) == 0),
        Check("homotopy", "winding(Gamma1)=2", winding(gamma1) == 2),
        Check("homotopy", "difference(Gamma0,Gamma1)=2", difference_class(gamma0, gamma1) == 2),
    ]
    mapped = conjugate_family(gamma0, 2)
    residual = float(np.abs(mapped.samples - gamma1.samples).max())
    checks.append(Check("homotopy", "phi(Gamma0)=Gamma1", residual < 1e-9, residual))

    chain = antisymmetric = True
    for _ in range(100):
        g1, g2, g3 = (random_family(rng) for _ in range(3))
        chain &= difference_class(g1, g2) + difference_class(g2, g3) == difference_class(g1, g3)
        antisymmetric &= difference_class(g1, g2) == -difference_class(g2, g1)
    checks.append(Check("homotopy", "chain rule", chain))
    checks.append(Check("homotopy", "antisymmetry", antisymmetric))

    g1, g2, g3 = (random_family(rng) for _ in range(3))
    residual = swap_residual(gamma0, gamma1)
    checks.append(Check("homotopy", "swap(Gamma0,Gamma1)", residual < 1e-9, residual))
    residual = swap_residual(g1, g2)
    checks.append(Check("homotopy", "swap(random)", residual < 1e-9, residual))
    residual = cyclic_shift_residual(g1, g2, g3)
    checks.append(Check("homotopy", "cyclic shift", residual < 1e-9, residual))

    stable = all(winding(perturb_family(g, 1e-2, rng)) == winding(g) for g in (g1, g2, g3))
    checks.append(Check("homotopy", "perturbation", stable))

    shifts = {winding(conjugate_family(g, 3)) - winding(g) for g in (g1, g2, g3, gamma0)}
    checks.append(Check("homotopy", "gauge shift", shifts == {3}))

    # Gamma + (-Gamma) on C^2 + C^2 is trivialized by the swap
    gamma = np.kron(np.diag([1, -1]), np.diag([1, -1]))
    swap = np.kron(np.array([[0, 1], [1, 0]]), np.eye(2))
    path = trivializing_path(gamma, swap)
    checks.append(Check("homotopy", "trivializing path", path.residual < 1e-9, path.residual))
    return checks


_suites: Dict[str, Callable[[int], List[Check]]] = {
    "repr": verify_repr,
    "wedderburn": verify_wedderburn,
    "packer-raeburn": verify_packer_raeburn,
    "homotopy": verify_homotopy,
}


def cmd_verify(suite: str, seed: Optional[int] = None) -> List[Check]:
    seed = settings.seed if seed is None else seed
    checks = []
    for name in SUITES if suite == "all" else [suite]:
        for check in _suites[name](seed):
            log.debug("%s", check)
            checks.append(check)
    return checks


def render_report(checks: Sequence[Check]) -> str:
    passed = sum(c.passed for c in checks)
    return "".join(f"{c}\n" for c in checks) + f"{passed}/{len(checks)} passed\n"


def build_parser() -> NoExitParser:
    parser = NoExitParser(prog="tenfold", description="Tenfold way K-theory classifier")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", dest="verbose")
    commands = parser.add_subparsers(dest="command", required=True)

    classify = commands.add_parser("classify", help="classify a symmetry spec file")
    classify.add_argument("--spec", required=True, dest="spec")
    classify.add_argument("--format", choices=["human", "machine"], default="human")

    table = commands.add_parser("table", help="print one of the classification tables")
    table.add_argument("--which", choices=TABLES, required=True)
    table.add_argument("--dmax", type=int, default=3, dest="d_max")

    verify = commands.add_parser("verify", help="run an oracle verification suite")
    verify.add_argument("--suite", choices=SUITES + ["all"], required=True)
    verify.add_argument("--seed", type=int, default=None)

    wind = commands.add_parser("winding", help="winding number of a family file")
    wind.add_argument("--input", required=True, dest="input")
    return parser


def run(args) -> int:
    if args.command == "classify":
        print(cmd_classify(args.spec, args.format))
    elif args.command == "table":
        if not 0 <= args.d_max <= settings.max_table_dims:
            raise SpecParseError(f"--dmax must be between 0 and {settings.max_table_dims}.")
        sys.stdout.write(cmd_table(args.which, args.d_max))
    elif args.command == "verify":
        checks = cmd_verify(args.suite, args.seed)
        sys.stdout.write(render_report(checks))
        if not all(c.passed for c in checks):
            return VerificationFailed.exit_code
    elif args.command == "winding":
        print(cmd_winding(args.input))
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except TenfoldError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return run(args)
    except TenfoldError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception:
        log.exception("Unexpected error while running `%s`", args.command)
        return 1


if __name__ == "__main__":
    sys.exit(main())
