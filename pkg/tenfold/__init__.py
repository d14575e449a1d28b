import json
from pathlib import Path

from .groups import AbelianGroup
from .kcalc import classify, lattice_classify
from .symmetry import SymmetrySpec

with open(Path(__file__).parent / "info.json") as fp:
    __version__ = json.load(fp)["version"]

__all__ = ["AbelianGroup", "SymmetrySpec", "classify", "lattice_classify", "__version__"]
