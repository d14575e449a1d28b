import logging
import re
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
from fuzzywuzzy.process import extractOne

from .constants import inversion_caveat, reserved_spec_keys, spec_keys
from .exceptions import InconsistentSpec, SpecParseError
from .groups import AbelianGroup
from .homotopy import SIGMA1, SIGMA2, GradingFamily
from .kcalc import KSequence
from .symmetry import SymmetrySpec

log = logging.getLogger("tenfold.converters")

_signs = {"none": None, "+1": 1, "-1": -1}


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _read(source: Union[str, Path]) -> str:
    try:
        with open(source) as fp:
            return fp.read()
    except OSError as e:
        raise SpecParseError(f"Can't read `{source}`: {e.strerror}.") from e


def parse_group(text: str) -> AbelianGroup:
    try:
        return AbelianGroup.parse(text)
    except ValueError as e:
        raise SpecParseError(str(e)) from e


def _sign(key: str, value: str, allowed=("none", "+1", "-1")) -> Optional[int]:
    if value not in allowed:
        raise SpecParseError(f"`{key}` takes one of {', '.join(allowed)}, got `{value}`.")
    return _signs[value]


def _dims(key: str, value: str) -> int:
    if not re.fullmatch(r"\d+", value):
        raise SpecParseError(f"`{key}` must be a nonnegative integer, got `{value}`.")
    return int(value)


def _base_k(value: str) -> KSequence:
    if not (match := re.fullmatch(r"\[(.*)\]", value)):
        raise SpecParseError(f"`base_k` must be a bracketed list of groups, got `{value}`.")
    items = [item.strip() for item in match.group(1).split(",")]
    for item in items:
        parse_group(item)
    try:
        return KSequence.parse(items)
    except ValueError as e:
        raise SpecParseError(str(e)) from e


def _unknown_key(key: str):
    if key in reserved_spec_keys:
        raise InconsistentSpec(inversion_caveat.format(kind=reserved_spec_keys[key], key=key))
    message = f"Unknown key `{key}`."
    if match := extractOne(key, spec_keys, score_cutoff=80):
        message += f" Did you mean `{match[0]}`?"
    raise SpecParseError(message)


def parse_spec_text(text: str) -> SymmetrySpec:
    """
    Read `key = value` lines into a checked SymmetrySpec. Missing keys mean no symmetry and
    zero dimensions; `#` starts a comment."""
    values: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if not (line := _strip(line)):
            continue
        if "=" not in line:
            raise SpecParseError(f"Line {number}: expected `key = value`, got `{line}`.")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in spec_keys:
            _unknown_key(key)
        if key in values:
            raise SpecParseError(f"Line {number}: `{key}` is given twice.")
        values[key] = value

    spec = SymmetrySpec(
        t_square=_sign("T", values.get("T", "none")),
        c_square=_sign("C", values.get("C", "none")),
        s_present=_sign("S", values.get("S", "none"), ("none", "+1")) is not None,
        continuous_dims=_dims("continuous_dims", values.get("continuous_dims", "0")),
        lattice_dims=_dims("lattice_dims", values.get("lattice_dims", "0")),
        base_k=_base_k(values["base_k"]) if "base_k" in values else None,
    )
    log.debug("parsed %s", spec)
    return spec.check()


def parse_spec_file(path: Union[str, Path]) -> SymmetrySpec:
    return parse_spec_text(_read(path))


def parse_family_text(text: str) -> GradingFamily:
    """
    One sample per line: `f <phase>` or eight reals, the 2x2 complex matrix row by row with
    real and imaginary parts interleaved."""
    samples = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not (line := _strip(line)):
            continue
        parts = line.split()
        try:
            if parts[0] == "f" and len(parts) == 2:
                phase = float(parts[1])
                samples.append(np.cos(phase) * SIGMA1 + np.sin(phase) * SIGMA2)
            elif len(parts) == 8:
                numbers = [float(p) for p in parts]
                entries = [complex(re_, im) for re_, im in zip(numbers[::2], numbers[1::2])]
                samples.append(np.array(entries).reshape(2, 2))
            else:
                raise ValueError
        except ValueError:
            raise SpecParseError(
                f"Line {number}: expected `f <value>` or 8 real numbers, got `{line}`."
            ) from None
    if not samples:
        raise SpecParseError("The family file has no samples.")
    return GradingFamily(np.array(samples))


def parse_family_file(path: Union[str, Path]) -> GradingFamily:
    return parse_family_text(_read(path))
