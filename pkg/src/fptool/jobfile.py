"""Job files: flat ``key = value`` lines (a TOML subset) describing one run.

    command = "thm33"
    p = 2
    vars = ["x", "y"]
    ideal = ["x", "y"]
    e_max = 1
    reduction_size = 2
    assume_unmixed = true
    assume_reduced = true
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ParseError
from .groebner import Ideal
from .ring import RationalParam, RingContext, is_prime

COMMANDS = (
    "trace", "root", "gb", "colon", "dim", "nu", "fpt", "test-ideal", "fpure", "ein",
    "link", "geomcheck", "paramtest", "thm33", "frational", "extend", "fptcheck", "split",
)

# which caller assertions each command needs before it will run
REQUIRED_ASSUMPTIONS = {
    "ein": ("unmixed",),
    "link": ("unmixed",),
    "geomcheck": ("unmixed", "reduced"),
    "paramtest": ("unmixed",),
    "thm33": ("unmixed", "reduced"),
    "frational": ("unmixed", "reduced"),
    "extend": ("unmixed",),
    "fptcheck": ("unmixed",),
}


@dataclass
class JobSpec:
    command: str
    p: int | None = None
    vars: list = field(default_factory=list)
    ideal: list = field(default_factory=list)
    ideal2: list = field(default_factory=list)
    poly: str | None = None
    point: list | None = None
    order: str = "grevlex"
    e: int = 1
    e_max: int = 2
    t: str | None = None
    c: int | None = None
    k: int = 1
    N: int | None = None
    q: int | None = None
    beta: list | None = None
    coeffs: list | None = None
    reduction_size: int | None = None
    assume_unmixed: bool | None = None
    assume_reduced: bool | None = None

    def ring(self):
        if self.p is None:
            raise ParseError("missing key 'p'")
        if not self.vars:
            raise ParseError("missing key 'vars'")
        return RingContext(self.p, self.vars, self.order)

    def parsed_ideal(self, ring, key="ideal"):
        gens = getattr(self, key)
        if not gens:
            raise ParseError(f"missing key {key!r}")
        polys = []
        for i, text in enumerate(gens, start=1):
            try:
                polys.append(ring.parse(text))
            except ParseError as exc:
                raise ParseError(
                    f"{key} generator {i} ({text!r}): {exc.message}", exc.position, text
                ) from None
        return Ideal(ring, polys)

    def rational_t(self, default=None):
        if self.t is None:
            if default is None:
                raise ParseError("missing key 't'")
            return RationalParam.coerce(default)
        return RationalParam.parse(str(self.t))

    def assumptions(self):
        return {
            name: getattr(self, f"assume_{name}")
            for name in ("unmixed", "reduced")
            if getattr(self, f"assume_{name}") is not None
        }


_FIELD_TYPES = {
    "command": str, "p": int, "vars": list, "ideal": list, "ideal2": list, "poly": str,
    "point": list, "order": str, "e": int, "e_max": int, "t": str, "c": int, "k": int,
    "N": int, "q": int, "beta": list, "coeffs": list, "reduction_size": int,
    "assume_unmixed": bool, "assume_reduced": bool,
}
assert set(_FIELD_TYPES) == {f.name for f in fields(JobSpec)}


def validate(spec):
    """Shape checks shared by job files and the command line."""
    if spec.command not in COMMANDS:
        raise ParseError(f"unknown command {spec.command!r}")
    if spec.p is not None and not is_prime(spec.p):
        raise ParseError(f"characteristic must be prime, got p={spec.p}")
    if spec.p is not None and spec.p > 2**31 - 1:
        raise ParseError(f"characteristic must be at most 2^31-1, got p={spec.p}")
    if spec.order not in ("grevlex", "lex"):
        raise ParseError(f"order must be 'grevlex' or 'lex', got {spec.order!r}")
    for key in ("e", "e_max"):
        if getattr(spec, key) < 0:
            raise ParseError(f"{key} must be nonnegative")
    return spec


def spec_from_mapping(data, source="<job>"):
    """Build a JobSpec from parsed key/value data, rejecting unknown keys."""
    if "command" not in data:
        raise ParseError(f"{source}: missing key 'command'")
    kwargs = {}
    for key, value in data.items():
        want = _FIELD_TYPES.get(key)
        if want is None:
            raise ParseError(f"{source}: unknown key {key!r}")
        if key == "t" and isinstance(value, int) and not isinstance(value, bool):
            value = str(value)
        if (want is int and isinstance(value, bool)) or not isinstance(value, want):
            raise ParseError(f"{source}: key {key!r} must be of type {want.__name__}, got {value!r}")
        if key == "beta":
            if not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
                raise ParseError(f"{source}: key 'beta' must be a list of integers")
        elif want is list:
            if not all(isinstance(v, (str, int)) and not isinstance(v, bool) for v in value):
                raise ParseError(f"{source}: key {key!r} must be a list of strings")
            value = [str(v) for v in value]
        kwargs[key] = value
    try:
        return validate(JobSpec(**kwargs))
    except ParseError as exc:
        raise ParseError(f"{source}: {exc.message}", exc.position, exc.source) from None


def load_job(path):
    """Read and validate a job file; I/O, syntax and validation errors differ."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read job file {path}: {exc.strerror}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8", exc.start) from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{path}: syntax error: {exc}") from None
    return spec_from_mapping(data, str(path))
