"""Pass/fail records shared by reports and certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice import ComponentMask, RieszElement


def encode(value):
    """JSON-friendly form: rationals as ``"num/den"``, masks as bit strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value
    if isinstance(value, RieszElement):
        return [encode(c) for c in value]
    if isinstance(value, ComponentMask):
        return str(value)
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, str):
        return value
    raise TypeError(f"cannot encode {type(value).__name__}")


@dataclass
class Check:
    name: str
    scope: str
    passed: bool
    witness: object = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "scope": self.scope,
            "pass": self.passed,
            "witness": None if self.passed else encode(self.witness),
        }


def first_failure(cases):
    """Return the first witness for which ``ok`` is false, else None.

    ``cases`` yields ``(ok, witness)`` pairs.
    """
    for ok, witness in cases:
        if not ok:
            return witness if witness is not None else "unspecified"
    return None


def check(name: str, scope: str, cases) -> Check:
    w = first_failure(cases)
    return Check(name, scope, w is None, w)
