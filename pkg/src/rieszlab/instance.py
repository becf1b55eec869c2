"""Instance files: JSON with every rational written as a ``"num/den"`` string."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import InstanceError
from .expectation import ExpectationOperator
from .hahn_jordan import DEFAULT_THETA, ComponentCharge, charge_from_density
from .lattice import PartitionAlgebra, RieszElement, refines
from .riesz_frechet import StrongFunctional, make_density_functional, validate_matrix_functional

TOP_KEYS = {
    "dimension", "weights", "expectationPartition", "algebraAtoms",
    "charge", "density", "functional", "options",
}
REQUIRED_KEYS = ("dimension", "weights", "expectationPartition", "algebraAtoms")
OPTION_KEYS = {"theta", "depth", "oracle"}
DEFAULT_DEPTH = 10


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _rational(value, pointer) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InstanceError("expected a rational written as a 'num/den' string", pointer)
    try:
        return Fraction(value.strip() if isinstance(value, str) else value)
    except (ValueError, ZeroDivisionError):
        raise InstanceError(f"not a rational: {value!r}", pointer) from None


def _vector(value, n, pointer) -> tuple[Fraction, ...]:
    if not isinstance(value, list):
        raise InstanceError("expected a list", pointer)
    if len(value) != n:
        raise InstanceError(f"expected {n} entries, got {len(value)}", pointer)
    return tuple(_rational(v, f"{pointer}/{i}") for i, v in enumerate(value))


def _partition(value, n, pointer) -> PartitionAlgebra:
    if not isinstance(value, list) or not value:
        raise InstanceError("expected a nonempty list of index lists", pointer)
    for j, block in enumerate(value):
        if not isinstance(block, list) or not all(
            isinstance(i, int) and not isinstance(i, bool) for i in block
        ):
            raise InstanceError("expected a list of integer indices", f"{pointer}/{j}")
    try:
        return PartitionAlgebra(value, n)
    except ValueError as exc:
        raise InstanceError(str(exc), pointer) from None


def _check_keys(obj, allowed, pointer):
    for key in obj:
        if key not in allowed:
            raise InstanceError(f"unknown field {key!r}", f"{pointer}/{key}")


@dataclass(frozen=True)
class Options:
    theta: Fraction = DEFAULT_THETA
    depth: int = DEFAULT_DEPTH
    oracle: bool = False


@dataclass(frozen=True)
class Instance:
    dimension: int
    weights: tuple
    expectation_partition: PartitionAlgebra
    algebra: PartitionAlgebra
    charge: tuple | None = None
    density: RieszElement | None = None
    functional: tuple | None = None  # ("density", RieszElement) or ("matrix", rows)
    options: Options = field(default_factory=Options)
    digest: str = ""

    @property
    def T(self) -> ExpectationOperator:
        return ExpectationOperator(self.expectation_partition, self.weights)

    def component_charge(self) -> ComponentCharge:
        """The charge to decompose: explicit atom values, else ``p -> T(p f)``."""
        if self.charge is not None:
            return ComponentCharge(self.algebra, self.expectation_partition, self.charge)
        if self.density is not None:
            return charge_from_density(self.T, self.density, self.algebra)
        raise InstanceError("instance has neither a charge nor a density", "/charge")

    def strong_functional(self) -> StrongFunctional:
        """The functional; matrix forms are validated here and may raise a violation."""
        if self.functional is None:
            raise InstanceError("instance has no functional", "/functional")
        kind, payload = self.functional
        if kind == "density":
            return make_density_functional(self.T, payload)
        return validate_matrix_functional(payload, self.T)

    def to_json(self) -> dict:
        out = {
            "dimension": self.dimension,
            "weights": [format_rational(w) for w in self.weights],
            "expectationPartition": [list(b) for b in self.expectation_partition.atoms],
            "algebraAtoms": [list(a) for a in self.algebra.atoms],
        }
        if self.charge is not None:
            out["charge"] = [format_rational(v) for v in self.charge]
        if self.density is not None:
            out["density"] = [format_rational(v) for v in self.density]
        if self.functional is not None:
            kind, payload = self.functional
            if kind == "density":
                out["functional"] = {"type": "density", "y": [format_rational(v) for v in payload]}
            else:
                out["functional"] = {
                    "type": "matrix",
                    "rows": [[format_rational(v) for v in row] for row in payload],
                }
        out["options"] = {
            "theta": format_rational(self.options.theta),
            "depth": self.options.depth,
            "oracle": self.options.oracle,
        }
        return out


def _parse_functional(value, n, pointer):
    if not isinstance(value, dict):
        raise InstanceError("expected an object", pointer)
    kind = value.get("type")
    if kind == "density":
        _check_keys(value, {"type", "y"}, pointer)
        if "y" not in value:
            raise InstanceError("missing field 'y'", f"{pointer}/y")
        return ("density", RieszElement(_vector(value["y"], n, f"{pointer}/y")))
    if kind == "matrix":
        _check_keys(value, {"type", "rows"}, pointer)
        rows = value.get("rows")
        if not isinstance(rows, list) or len(rows) != n:
            raise InstanceError(f"expected {n} rows", f"{pointer}/rows")
        return ("matrix", tuple(_vector(r, n, f"{pointer}/rows/{i}") for i, r in enumerate(rows)))
    raise InstanceError("type must be 'density' or 'matrix'", f"{pointer}/type")


def _parse_options(value) -> Options:
    if not isinstance(value, dict):
        raise InstanceError("expected an object", "/options")
    _check_keys(value, OPTION_KEYS, "/options")
    theta = _rational(value.get("theta", "2"), "/options/theta")
    if theta <= 1:
        raise InstanceError("theta must exceed 1", "/options/theta")
    depth = value.get("depth", DEFAULT_DEPTH)
    if isinstance(depth, bool) or not isinstance(depth, int) or depth < 1:
        raise InstanceError("depth must be a positive integer", "/options/depth")
    oracle = value.get("oracle", False)
    if not isinstance(oracle, bool):
        raise InstanceError("oracle must be true or false", "/options/oracle")
    return Options(theta, depth, oracle)


def parse_instance(data: bytes | str) -> Instance:
    raw = data.encode("utf-8") if isinstance(data, str) else data
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InstanceError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise InstanceError("instance must be a JSON object")
    _check_keys(obj, TOP_KEYS, "")
    for key in REQUIRED_KEYS:
        if key not in obj:
            raise InstanceError(f"missing field {key!r}", f"/{key}")

    n = obj["dimension"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InstanceError("dimension must be a positive integer", "/dimension")
    weights = _vector(obj["weights"], n, "/weights")
    for i, w in enumerate(weights):
        if w <= 0:
            raise InstanceError("weights must be strictly positive", f"/weights/{i}")
    blocks = _partition(obj["expectationPartition"], n, "/expectationPartition")
    atoms = _partition(obj["algebraAtoms"], n, "/algebraAtoms")
    if not refines(atoms, blocks):
        raise InstanceError(
            "algebra atoms must refine the expectation partition", "/algebraAtoms"
        )

    charge = None
    if "charge" in obj:
        charge = _vector(obj["charge"], len(atoms), "/charge")
    density = None
    if "density" in obj:
        density = RieszElement(_vector(obj["density"], n, "/density"))
    functional = None
    if "functional" in obj:
        functional = _parse_functional(obj["functional"], n, "/functional")
    options = _parse_options(obj.get("options", {}))

    return Instance(
        dimension=n,
        weights=weights,
        expectation_partition=blocks,
        algebra=atoms,
        charge=charge,
        density=density,
        functional=functional,
        options=options,
        digest=hashlib.sha256(raw).hexdigest(),
    )


def dump_instance(inst: Instance) -> str:
    return json.dumps(inst.to_json(), indent=2) + "\n"


def load_instance(path) -> Instance:
    with open(path, "rb") as fh:
        return parse_instance(fh.read())

