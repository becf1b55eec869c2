"""Random instances for property campaigns.

Everything is drawn from a caller-supplied :class:`random.Random`, so a seed
fixes the whole campaign.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .expectation import ExpectationOperator
from .lattice import PartitionAlgebra, RieszElement

MAX_DIMENSION = 12


def random_rational(rng: random.Random, span: int = 6, denominators=(1, 2, 3, 4, 6)) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice(denominators))


def random_positive(rng: random.Random, span: int = 6) -> Fraction:
    return Fraction(rng.randint(1, span), rng.choice((1, 2, 3, 4)))


def random_partition(rng: random.Random, indices, max_blocks=None) -> list[list[int]]:
    """Split ``indices`` into shuffled nonempty blocks."""
    items = list(indices)
    rng.shuffle(items)
    k = rng.randint(1, len(items) if max_blocks is None else min(max_blocks, len(items)))
    cuts = sorted(rng.sample(range(1, len(items)), k - 1))
    blocks = [sorted(items[a:b]) for a, b in zip([0] + cuts, cuts + [len(items)])]
    return sorted(blocks)


def random_refinement(rng: random.Random, blocks) -> list[list[int]]:
    atoms = []
    for block in blocks:
        atoms += random_partition(rng, block)
    return sorted(atoms)


def random_vector(rng: random.Random, n: int, zero_rate: float = 0.15) -> RieszElement:
    return RieszElement(
        Fraction(0) if rng.random() < zero_rate else random_rational(rng) for _ in range(n)
    )


def random_operator(rng: random.Random, n: int) -> ExpectationOperator:
    blocks = random_partition(rng, range(n))
    return ExpectationOperator(PartitionAlgebra(blocks, n), [random_positive(rng) for _ in range(n)])


def _text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def random_instance(rng: random.Random, max_dimension: int = MAX_DIMENSION) -> dict:
    """A JSON-ready instance with a charge, a density and a functional."""
    n = rng.randint(1, max_dimension)
    blocks = random_partition(rng, range(n))
    atoms = random_refinement(rng, blocks)
    weights = [random_positive(rng) for _ in range(n)]
    # repeated values exercise the tie rules
    pool = [random_rational(rng) for _ in range(3)] + [Fraction(0)]
    charge = [
        rng.choice(pool) if rng.random() < 0.3 else random_rational(rng) for _ in atoms
    ]
    out = {
        "dimension": n,
        "weights": [_text(w) for w in weights],
        "expectationPartition": blocks,
        "algebraAtoms": atoms,
        "charge": [_text(v) for v in charge],
        "density": [_text(v) for v in random_vector(rng, n)],
    }
    y = random_vector(rng, n)
    if rng.random() < 0.5:
        out["functional"] = {"type": "density", "y": [_text(v) for v in y]}
    else:
        out["functional"] = {"type": "matrix", "rows": _matrix_rows(blocks, weights, y)}
    return out


def _matrix_rows(blocks, weights, y) -> list[list[str]]:
    # column i is f(chi_i), so the matrix is T-linear by construction
    n = len(weights)
    T = ExpectationOperator(PartitionAlgebra(blocks, n), weights)
    f = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        b = T.block_of(i)
        value = y[i] / T.weight_ratio(i)
        for k in T.blocks[b]:
            f[k][i] = value
    return [[_text(v) for v in row] for row in f]
