"""Command runners; each returns a certificate as a plain JSON-ready dict."""

from __future__ import annotations

import json
import random
import time
from fractions import Fraction

from .checks import Check, encode
from .exceptions import InstanceError
from .hahn_jordan import (
    DEFAULT_ORACLE_BOUND,
    alpha,
    evaluate_charge,
    hahn_jordan,
    maximal_m,
    negative_part_witness,
    order_bound,
    positive_piece,
)
from .instance import Instance, dump_instance, parse_instance
from .lattice import ComponentMask, RieszElement, band_mask
from .partial_inverse import (
    canonical_inverse_exact,
    inverse_error,
    spectral_inverse_signed,
    spectral_inverse_upper,
)
from .riesz_frechet import (
    bijection_certificate,
    dyadic_represent,
    exact_represent,
    functional_norm_squared,
)
from .sampling import random_instance
from . import suites

SELFTEST_THETAS = (Fraction(3, 2), Fraction(2), Fraction(3))
SELFTEST_DEPTHS = (4, 8, 12, 16)
INVERSE_DEPTHS = tuple(range(1, 21))


def certificate(command: str, arguments: dict, instance: dict | None, outputs: dict,
                checks: list[Check], elapsed: float | None = None) -> dict:
    return {
        "command": command,
        "arguments": encode(arguments),
        "instance": instance,
        "outputs": encode(outputs),
        "checks": [c.to_json() for c in checks],
        "passed": all(c.passed for c in checks),
        "timing": None if elapsed is None else {"seconds": round(elapsed, 6)},
    }


def _instance_info(inst: Instance) -> dict:
    return {"sha256": inst.digest, "dimension": inst.dimension, "atoms": len(inst.algebra)}


def run_decompose(inst: Instance, theta=None, oracle: bool | None = None,
                  oracle_bound: int = DEFAULT_ORACLE_BOUND, timing: bool = False) -> dict:
    start = time.perf_counter()
    theta = inst.options.theta if theta is None else Fraction(theta)
    if theta <= 1:
        raise InstanceError("theta must exceed 1", "/options/theta")
    oracle = inst.options.oracle if oracle is None else oracle
    psi = inst.component_charge()
    e = ComponentMask.full(inst.dimension)
    q = hahn_jordan(psi)
    outputs = {
        "q": q,
        "psi(q)": evaluate_charge(psi, q),
        "psi(e-q)": evaluate_charge(psi, ~q),
        "alpha(e)": alpha(psi, e),
        "qhat(e)": maximal_m(psi, e, theta),
        "u(e)": positive_piece(psi, e, theta),
        "order bound": order_bound(psi),
    }
    if not evaluate_charge(psi, e).neg.is_zero():
        outputs["negative part witness(e)"] = negative_part_witness(psi, e)
    checks = suites.decomposition_checks(psi, theta)
    if oracle:
        checks += suites.exhaustive_decomposition_checks(psi, (theta,), oracle_bound)
    args = {"theta": theta, "oracle": oracle, "oracle_bound": oracle_bound}
    return certificate("decompose", args, _instance_info(inst), outputs, checks,
                       time.perf_counter() - start if timing else None)


def represent_outputs(inst: Instance, depth: int):
    f = inst.strong_functional()
    T = f.T
    y = exact_represent(f)
    approx = dyadic_represent(f, depth)
    err = (approx - y).max_norm()
    bound = T.ratio_constant() * Fraction(1, 1 << depth)
    outputs = {
        "representer": y,
        "approximant": approx,
        "error": err,
        "error bound": bound,
        "norm squared": functional_norm_squared(f),
    }
    return f, outputs


def run_represent(inst: Instance, depth: int | None = None, timing: bool = False) -> dict:
    start = time.perf_counter()
    depth = inst.options.depth if depth is None else depth
    if depth < 1:
        raise InstanceError("depth must be a positive integer", "/options/depth")
    f, outputs = represent_outputs(inst, depth)
    checks = [
        Check("error bound", "||y_n - y|| <= C 2^-n", outputs["error"] <= outputs["error bound"],
              {"error": outputs["error"], "bound": outputs["error bound"]}),
    ] + suites.representation_checks(f, [depth], bound=DEFAULT_ORACLE_BOUND)
    return certificate("represent", {"depth": depth}, _instance_info(inst), outputs, checks,
                       time.perf_counter() - start if timing else None)


def _inverse_target(inst: Instance) -> RieszElement:
    if inst.density is None:
        raise InstanceError("invert needs a density vector", "/density")
    return inst.density


def run_invert(inst: Instance, depth: int | None = None, timing: bool = False) -> dict:
    start = time.perf_counter()
    depth = inst.options.depth if depth is None else depth
    if depth < 1:
        raise InstanceError("depth must be a positive integer", "/options/depth")
    g = _inverse_target(inst)
    outputs = {
        "inverse": canonical_inverse_exact(g),
        "band": band_mask(g),
        "lower approximant": spectral_inverse_signed(g, depth),
        "upper approximant of |g|": spectral_inverse_upper(abs(g), depth),
        "error": inverse_error(g, depth),
    }
    checks = suites.inverse_checks(g, range(1, depth + 1))
    return certificate("invert", {"depth": depth}, _instance_info(inst), outputs, checks,
                       time.perf_counter() - start if timing else None)


def io_checks(inst: Instance) -> list[Check]:
    text = dump_instance(inst)
    again = parse_instance(text)
    return [Check("instance round trip", "parse(dump(instance)) has identical fields",
                  again.to_json() == inst.to_json(), {"dump": text})]


def instance_checks(inst: Instance, oracle_bound: int = DEFAULT_ORACLE_BOUND,
                    thetas=SELFTEST_THETAS, depths=SELFTEST_DEPTHS) -> list[Check]:
    """Every suite that applies to ``inst``."""
    T = inst.T
    n = inst.dimension
    vectors = [v for v in (inst.density,) if v is not None]
    if inst.functional is not None and inst.functional[0] == "density":
        vectors.append(inst.functional[1])
    a = vectors[0] if vectors else RieszElement.unit(n)
    b = vectors[-1] if len(vectors) > 1 else RieszElement.indicator(n, 0) - RieszElement.unit(n)
    size = 1 << len(inst.algebra)
    sample = range(size) if size <= 12 else sorted(random.Random(inst.digest).sample(range(size), 12))

    checks = suites.lattice_checks(a, b, inst.algebra, sample)
    checks += suites.expectation_checks(T, a, b)
    if inst.charge is not None or inst.density is not None:
        psi = inst.component_charge()
        checks += suites.decomposition_checks(psi)
        if len(psi) <= oracle_bound:
            checks += suites.exhaustive_decomposition_checks(psi, thetas, oracle_bound)
    if inst.functional is not None:
        f = inst.strong_functional()
        checks += suites.representation_checks(f, depths, bound=oracle_bound)
        checks += bijection_certificate(T, exact_represent(f))
    if inst.density is not None:
        checks += suites.inverse_checks(inst.density, INVERSE_DEPTHS)
    checks += io_checks(inst)
    return checks


def run_verify(inst: Instance, oracle_bound: int = DEFAULT_ORACLE_BOUND, timing: bool = False) -> dict:
    start = time.perf_counter()
    checks = instance_checks(inst, oracle_bound)
    return certificate("verify", {"oracle_bound": oracle_bound}, _instance_info(inst),
                       {"checks run": len(checks)}, checks,
                       time.perf_counter() - start if timing else None)


def run_self_test(seed: int = 0, trials: int = 100, timing: bool = False) -> dict:
    """Run every suite on ``trials`` random instances; deterministic in ``seed``.

    Checks are merged by name across trials; a failing check reports the
    first failing trial and its instance.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    start = time.perf_counter()
    rng = random.Random(seed)
    merged: dict[str, Check] = {}
    counts: dict[str, int] = {}
    for trial in range(trials):
        data = random_instance(rng)
        inst = parse_instance(json.dumps(data))
        results = instance_checks(inst)
        # a fresh vector pair per trial keeps the Holder suite honest on dense data
        n = inst.dimension
        f = RieszElement(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n))
        g = RieszElement(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n))
        results += suites.expectation_checks(inst.T, f, g)
        results += bijection_certificate(inst.T, f)
        for c in results:
            counts[c.name] = counts.get(c.name, 0) + 1
            if c.name not in merged or (merged[c.name].passed and not c.passed):
                witness = None if c.passed else {"trial": trial, "instance": data, "witness": encode(c.witness)}
                merged[c.name] = Check(c.name, c.scope, c.passed, witness)
    checks = [
        Check(name, f"{counts[name]} runs: {c.scope}", c.passed, c.witness)
        for name, c in sorted(merged.items())
    ]
    failures = sum(not c.passed for c in checks)
    return certificate(
        "selftest", {"seed": seed, "trials": trials}, None,
        {"suites": len(checks), "failed": failures}, checks,
        time.perf_counter() - start if timing else None,
    )


def render_json(cert: dict) -> str:
    return json.dumps(cert, indent=2) + "\n"


def render_text(cert: dict) -> str:
    """Tab-delimited lines: ``output``, ``check`` and a closing ``result`` line."""
    lines = [f"command\t{cert['command']}"]
    if cert["instance"]:
        lines.append(f"instance\t{cert['instance']['sha256']}")
    for key, value in cert["outputs"].items():
        shown = value if isinstance(value, str) else json.dumps(value)
        lines.append(f"output\t{key}\t{shown}")
    for c in cert["checks"]:
        row = f"check\t{c['name']}\t{'PASS' if c['pass'] else 'FAIL'}"
        if not c["pass"]:
            row += "\t" + json.dumps(c["witness"])
        lines.append(row)
    if cert["timing"]:
        lines.append(f"timing\t{cert['timing']['seconds']}")
    lines.append(f"result\t{'PASS' if cert['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"



def represent_convergence(inst: Instance, depth: int) -> list[tuple[int, Fraction, Fraction]]:
    f = inst.strong_functional()
    y = exact_represent(f)
    C = f.T.ratio_constant()
    return [
        (d, (dyadic_represent(f, d) - y).max_norm(), C * Fraction(1, 1 << d))
        for d in range(1, depth + 1)
    ]


def invert_convergence(inst: Instance, depth: int) -> list[tuple[int, Fraction, Fraction]]:
    """Error of the lower approximant; the bound column is ``2^(1-n) max(h)^2``."""
    g = _inverse_target(inst)
    hmax = max(abs(canonical_inverse_exact(g)), default=Fraction(0))
    return [
        (d, inverse_error(g, d), Fraction(2, 1 << d) * hmax * hmax) for d in range(1, depth + 1)
    ]
