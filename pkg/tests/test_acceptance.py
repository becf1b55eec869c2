"""Acceptance criteria, one test each, with their runtime limits.

Each test records a PASS/FAIL line; the lines are printed in the terminal
summary (see conftest.py) and when this file is run as a script.
"""

import json
import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from rieszlab import (
    DecompositionTables,
    brute_force_hahn,
    hahn_jordan,
    maximal_m,
    negative_part_witness,
    parse_instance,
)
from rieszlab.expectation import holder_holds, t_norm2_squared
from rieszlab.partial_inverse import canonical_inverse_exact, spectral_inverse
from rieszlab.lattice import band_mask
from rieszlab.riesz_frechet import (
    dyadic_represent,
    exact_represent,
    functional_norm_squared,
    make_density_functional,
    validate_matrix_functional,
)
from rieszlab.sampling import random_instance, random_operator, random_vector

RESULTS = []
THETAS = (Fraction(3, 2), Fraction(2), Fraction(3))


def record(number, title, passed, detail):
    line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    RESULTS.append(line)
    print(line)
    return passed


class Table:
    """psi over every atom subset, as scaled integers from a 0/1 product."""

    def __init__(self, psi):
        m = len(psi)
        self.m, self.size = m, 1 << m
        scale = 1
        for v in psi.atom_values:
            scale = scale * v.denominator // np.gcd(scale, v.denominator)
        A = np.zeros((m, psi.nblocks), dtype=object)
        for j, v in enumerate(psi.atom_values):
            A[j, psi.atom_block[j]] = int(v * scale)
        self.scale = scale
        self.index = np.arange(self.size, dtype=np.int64)
        S = ((self.index[:, None] >> np.arange(m)) & 1).astype(object)
        self.values = (S @ A if m else np.zeros((1, psi.nblocks), dtype=object)).astype(np.int64)
        self.touch = np.zeros((self.size, psi.nblocks), dtype=bool)
        for j, b in enumerate(psi.atom_block):
            self.touch[:, b] |= (self.index >> j) & 1 == 1
        self.nonneg = (self.values >= 0).all(axis=1)
        self.nonpos = (self.values <= 0).all(axis=1)

    def subset_fold(self, arr, op):
        out = arr.copy()
        for j in range(self.m):
            has = (self.index >> j) & 1 == 1
            out[has] = op(out[has], out[self.index[has] ^ (1 << j)])
        return out


@pytest.fixture(scope="module")
def campaign():
    rng = random.Random(20240501)
    charges = []
    for _ in range(500):
        inst = parse_instance(json.dumps(random_instance(rng)))
        charges.append(inst.component_charge())
    return charges


def test_criterion_1_hahn_jordan_oracle(campaign):
    start = time.perf_counter()
    bad = []
    for k, psi in enumerate(campaign):
        t = Table(psi)
        q = psi.to_set(hahn_jordan(psi))
        full = t.size - 1
        solutions = {psi.to_set(m) for m in brute_force_hahn(psi)}
        two_sided = t.nonneg[t.index & q].all() and t.nonpos[t.index & (full ^ q)].all()
        if q not in solutions or not two_sided:
            bad.append(k)
    elapsed = time.perf_counter() - start
    atoms = max(len(p) for p in campaign)
    ok = not bad and elapsed < 10
    record(1, "Hahn-Jordan oracle equivalence", ok,
           f"{len(campaign)} instances (up to {atoms} atoms), {len(bad)} failures, {elapsed:.2f}s < 10s")
    assert not bad, f"failing instances {bad[:5]}"
    assert elapsed < 10


def test_criterion_2_sandwich(campaign):
    start = time.perf_counter()
    bad = []
    spot = random.Random(2)
    for k, psi in enumerate(campaign):
        t = Table(psi)
        alpha = t.subset_fold(t.values, np.maximum)
        for theta in THETAS:
            a, d = theta.numerator, theta.denominator
            lib = DecompositionTables(psi, theta)
            h = lib.maximal
            v = t.values[h]
            ok = (
                ((h & ~t.index) == 0)
                & (alpha * d <= v * a).all(axis=1)
                & (v <= alpha).all(axis=1)
                # (alpha - theta psi(qhat))+ qhat = 0
                & ~(t.touch[h] & (alpha * d > v * a)).any(axis=1)
            )
            s = spot.randrange(t.size)
            scalar = psi.to_set(maximal_m(psi, psi.to_mask(s), theta)) == h[s]
            if not ok.all() or not scalar:
                bad.append((k, str(theta)))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    record(2, "sandwich and (alpha - theta psi(qhat))+ qhat = 0 for theta in {3/2, 2, 3}", ok,
           f"{len(campaign)} instances x all q, {len(bad)} failures, {elapsed:.2f}s < 10s")
    assert not bad, f"failing (instance, theta) {bad[:5]}"
    assert elapsed < 10


def test_criterion_3_negative_witnesses(campaign):
    start = time.perf_counter()
    bad = []
    checked = 0
    spot = random.Random(3)
    for k, psi in enumerate(campaign):
        t = Table(psi)
        strongly_negative = t.subset_fold(t.nonpos, np.logical_and)
        has, w = DecompositionTables(psi).negative_part_witnesses()
        oracle_has = (t.values < 0).any(axis=1)
        ok = (has == oracle_has) & (
            ~oracle_has
            | (((w & ~t.index) == 0)
               & (t.values[w] <= np.minimum(t.values, 0)).all(axis=1)
               & strongly_negative[w])
        )
        checked += int(oracle_has.sum())
        candidates = np.flatnonzero(oracle_has)
        scalar = True
        if candidates.size:
            s = int(candidates[spot.randrange(candidates.size)])
            scalar = psi.to_set(negative_part_witness(psi, psi.to_mask(s))) == w[s]
        if not ok.all() or not scalar:
            bad.append(k)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    record(3, "negative-part witnesses strongly negative", ok,
           f"{checked} members with psi(q)- != 0, {len(bad)} failing instances, {elapsed:.2f}s < 10s")
    assert not bad
    assert elapsed < 10


def test_criterion_4_holder():
    rng = random.Random(4)
    setup = time.perf_counter()
    triples = []
    for _ in range(10_000):
        n = rng.randint(1, 12)
        triples.append((random_operator(rng, n), random_vector(rng, n), random_vector(rng, n)))
    setup = time.perf_counter() - setup
    start = time.perf_counter()
    violations = sum(not holder_holds(T, f, g).holds for T, f, g in triples)
    elapsed = time.perf_counter() - start
    ok = violations == 0 and elapsed < 5
    record(4, "(T|fg|)^2 <= T(f^2) T(g^2)", ok,
           f"10000 triples, {violations} violations, {elapsed:.2f}s < 5s (plus {setup:.2f}s generating)")
    assert violations == 0
    assert elapsed < 5


def test_criterion_5_norm_equality():
    rng = random.Random(5)
    setup = time.perf_counter()
    pairs = []
    for _ in range(1000):
        n = rng.randint(1, 12)
        pairs.append((random_operator(rng, n), random_vector(rng, n)))
    probes = [random_vector(rng, pairs[i % len(pairs)][0].n) for i in range(10_000)]
    setup = time.perf_counter() - setup
    start = time.perf_counter()
    norm_bad = bound_bad = 0
    functionals = []
    for T, y in pairs:
        f = make_density_functional(T, y)
        norm = functional_norm_squared(f)
        norm_bad += norm != t_norm2_squared(T, y)
        functionals.append((T, f, norm))
    for i, g in enumerate(probes):
        T, f, norm = functionals[i % len(functionals)]
        value = f(g)
        bound_bad += not value * value <= norm * t_norm2_squared(T, g)
    elapsed = time.perf_counter() - start
    ok = norm_bad == bound_bad == 0 and elapsed < 5
    record(5, "||T_y||^2 = T(y^2) and f(g)^2 <= ||f||^2 T(g^2)", ok,
           f"1000 (T, y) with {norm_bad} mismatches, 10000 g with {bound_bad} violations, "
           f"{elapsed:.2f}s < 5s (plus {setup:.2f}s generating)")
    assert norm_bad == 0 and bound_bad == 0
    assert elapsed < 5


def test_criterion_6_round_trip():
    rng = random.Random(6)
    start = time.perf_counter()
    bad = []
    depths = (4, 8, 12, 16)
    count = 200
    for k in range(count):
        n = rng.randint(1, 12)
        T = random_operator(rng, n)
        y = random_vector(rng, n)
        f = make_density_functional(T, y)
        if k % 2:
            f = validate_matrix_functional(f.matrix(), T)
        if exact_represent(f) != y:
            bad.append((k, "exact"))
            continue
        C = T.ratio_constant()
        prev = None
        for d in depths:
            gap = y - dyadic_represent(f, d)
            if gap.max_norm() > C * Fraction(1, 2**d):
                bad.append((k, d))
            # undershoot measured inside each sign band of y
            signed = [c if yi >= 0 else -c for c, yi in zip(gap, y)]
            if prev is not None and any(a > b for a, b in zip(signed, prev)):
                bad.append((k, d, "increase"))
            prev = signed
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    record(6, "exact round trip and dyadic error <= C 2^-n, n in {4, 8, 12, 16}", ok,
           f"{count} functionals (half in matrix form), {len(bad)} failures, {elapsed:.2f}s < 30s")
    assert not bad, bad[:5]
    assert elapsed < 30


def test_criterion_7_partial_inverse():
    rng = random.Random(7)
    start = time.perf_counter()
    bad = []
    count = 100
    for k in range(count):
        n = rng.randint(1, 12)
        f = abs(random_vector(rng, n))
        h = canonical_inverse_exact(f)
        if f * h != band_mask(f).as_element():
            bad.append((k, "identity"))
        positives = [c for c in f if c]
        hmax = max(h)
        for depth in range(1, 21):
            if positives and Fraction(1, 2**depth) < min(positives):
                err = (band_mask(f) * (spectral_inverse(f, depth) - h)).max_norm()
                if err > Fraction(2, 2**depth) * hmax * hmax:
                    bad.append((k, depth))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    record(7, "g h = P_g e and spectral inverse error <= 2^(1-n) max(h)^2", ok,
           f"{count} vectors f >= 0, depths 1..20, {len(bad)} failures, {elapsed:.2f}s < 10s")
    assert not bad, bad[:5]
    assert elapsed < 10


def test_criterion_8_determinism():
    cmd = [sys.executable, "-m", "rieszlab", "selftest", "--seed", "42", "--trials", "100", "--json"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    same = first.stdout == second.stdout and bool(first.stdout)
    passed = json.loads(first.stdout)["passed"] if first.stdout else False
    ok = same and first.returncode == 0
    record(8, "selftest --seed 42 --trials 100 is byte-identical across runs", ok,
           f"{len(first.stdout)} bytes, identical={same}, all suites passed={passed}")
    assert same
    assert first.returncode == 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
