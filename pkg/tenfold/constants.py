from dataclasses import dataclass, fields

REAL_PERIOD = 8
COMPLEX_PERIOD = 2

# (label, T^2, C^2, S present, field, degree) in degree order.
# the degree is the index into the K-sequence of a point
_rows = [
    ("AI", 1, None, False, "real", 0),
    ("BDI", 1, 1, False, "real", 1),
    ("D", None, 1, False, "real", 2),
    ("DIII", -1, 1, False, "real", 3),
    ("AII", -1, None, False, "real", 4),
    ("CII", -1, -1, False, "real", 5),
    ("C", None, -1, False, "real", 6),
    ("CI", 1, -1, False, "real", 7),
    ("A", None, None, False, "complex", 0),
    ("AIII", None, None, True, "complex", 1),
]

tenfold_rows = [
    dict(zip(("label", "t_square", "c_square", "s_present", "field", "degree"), row))
    for row in _rows
]

# order of the rows when listing graded classes Cl_{k,0}, k = 0..7, then the complex ones
algebra_table_order = ["AI", "CI", "C", "CII", "AII", "DIII", "D", "BDI", "A", "AIII"]

# K_n of the real and complex numbers, as canonical renderings
point_groups = {
    "real": ["Z", "Z_2", "Z_2", "0", "Z", "0", "0", "0"],
    "complex": ["Z", "0"],
}

spec_keys = ["T", "C", "S", "continuous_dims", "lattice_dims", "base_k"]

reserved_spec_keys = {
    "P": "inversion",
    "I": "inversion",
    "inversion": "inversion",
    "reflection": "point group",
    "rotation": "point group",
    "point_group": "point group",
}

inversion_caveat = (
    "the lattice formula needs translations and symmetries to act on Z^d trivially; "
    "with {kind} symmetry these assumptions do not hold, so `{key}` is not accepted"
)

DEFAULT_SETTINGS = {
    "seed": 20230917,
    "rep_tolerance": 1e-12,
    "family_tolerance": 1e-9,
    "wedderburn_gap": 1e-6,
    "wedderburn_retries": 8,
    "rounding_tolerance": 1e-6,
    "grid_size": 256,
    "min_grid_size": 64,
    "max_parity_generators": 8,
    "max_table_dims": 12,
    "swap_steps": 17,
    "path_steps": 33,
}


@dataclass(frozen=True)
class Settings:
    seed: int
    rep_tolerance: float
    family_tolerance: float
    wedderburn_gap: float
    wedderburn_retries: int
    rounding_tolerance: float
    grid_size: int
    min_grid_size: int
    max_parity_generators: int
    max_table_dims: int
    swap_steps: int
    path_steps: int

    @property
    def json(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def get_settings(**overrides) -> Settings:
    settings = DEFAULT_SETTINGS.copy()
    settings.update(overrides)
    return Settings(**settings)


settings = get_settings()
