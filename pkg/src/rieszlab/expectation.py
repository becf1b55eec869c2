"""Strictly positive conditional expectations as weighted block averages."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exceptions import DimensionMismatch
from .lattice import ComponentMask, PartitionAlgebra, RieszElement, to_rational


class ExpectationOperator:
    """``T f`` is constant on each block, equal to the ``w``-weighted mean of ``f``.

    Every weight must be strictly positive; that is what makes ``T`` strictly
    positive.  ``T e = e``, ``T T = T`` and the range ``R(T)`` is the space of
    block-constant vectors.
    """

    __slots__ = ("partition", "weights", "block_weight", "_blocks")

    def __init__(self, partition: PartitionAlgebra, weights: Sequence):
        weights = tuple(to_rational(w) for w in weights)
        if len(weights) != partition.n:
            raise DimensionMismatch(
                f"{len(weights)} weights for dimension {partition.n}"
            )
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be strictly positive")
        self.partition = partition
        self.weights = weights
        self._blocks = partition.atoms
        self.block_weight = tuple(sum(weights[i] for i in b) for b in self._blocks)

    @classmethod
    def uniform(cls, blocks, n: int | None = None) -> "ExpectationOperator":
        partition = PartitionAlgebra(blocks, n)
        return cls(partition, [1] * partition.n)

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def blocks(self):
        return self._blocks

    def block_of(self, i: int) -> int:
        return self.partition.atom_index[i]

    def weight_ratio(self, i: int) -> Fraction:
        """``W_b / w_i`` for the block ``b`` containing ``i``."""
        return self.block_weight[self.block_of(i)] / self.weights[i]

    def ratio_constant(self) -> Fraction:
        """``max_i W_block(i) / w_i``; at least 1."""
        return max(self.weight_ratio(i) for i in range(self.n))

    def block_means(self, f: RieszElement) -> list[Fraction]:
        if len(f) != self.n:
            raise DimensionMismatch(f"dimension mismatch: {len(f)} != {self.n}")
        c, w = f.coords, self.weights
        return [
            sum(w[i] * c[i] for i in b) / W for b, W in zip(self._blocks, self.block_weight)
        ]

    def expand(self, block_values: Sequence[Fraction]) -> RieszElement:
        """Block-constant vector with the given value on each block."""
        idx = self.partition.atom_index
        return RieszElement._wrap(tuple(block_values[idx[i]] for i in range(self.n)))

    def block_value(self, r: RieszElement, b: int) -> Fraction:
        return r.coords[self._blocks[b][0]]

    def block_mask(self, b: int) -> ComponentMask:
        return ComponentMask(self.partition.atom_masks[b], self.n)

    def __call__(self, f: RieszElement) -> RieszElement:
        return apply_t(self, f)

    def matrix(self) -> list[list[Fraction]]:
        """Row-major matrix of ``T`` acting on column vectors."""
        n = self.n
        rows = []
        for i in range(n):
            b = self.block_of(i)
            W = self.block_weight[b]
            rows.append(
                [self.weights[j] / W if self.block_of(j) == b else Fraction(0) for j in range(n)]
            )
        return rows

    def __repr__(self):
        return (
            f"ExpectationOperator(blocks={[list(b) for b in self._blocks]}, "
            f"weights={[str(w) for w in self.weights]})"
        )


def apply_t(T: ExpectationOperator, f: RieszElement) -> RieszElement:
    return T.expand(T.block_means(f))


def is_in_range(T: ExpectationOperator, f: RieszElement) -> bool:
    if len(f) != T.n:
        raise DimensionMismatch(f"dimension mismatch: {len(f)} != {T.n}")
    c = f.coords
    return all(all(c[i] == c[b[0]] for i in b) for b in T.blocks)


def t_norm1(T: ExpectationOperator, f: RieszElement) -> RieszElement:
    return apply_t(T, abs(f))


def t_norm2_squared(T: ExpectationOperator, f: RieszElement) -> RieszElement:
    return apply_t(T, f * f)


def t_norm2(T: ExpectationOperator, f: RieszElement) -> tuple[float, ...]:
    """Float square root of :func:`t_norm2_squared`, for display only."""
    return tuple(math.sqrt(c) for c in t_norm2_squared(T, f))


class HolderCheck(NamedTuple):
    holds: bool
    lhs: RieszElement  # (T|fg|)^2
    rhs: RieszElement  # T(f^2) T(g^2)

    def strict_blocks(self, T: ExpectationOperator) -> list[int]:
        return [b for b in range(len(T.blocks)) if T.block_value(self.lhs, b) < T.block_value(self.rhs, b)]


def holder_holds(T: ExpectationOperator, f: RieszElement, g: RieszElement) -> HolderCheck:
    """Hoelder inequality for the T-norms, checked in squared form.

    ``(T|fg|)^2 <= T(f^2) T(g^2)``; both sides are nonnegative elements of
    ``R(T)`` so this is equivalent to the unsquared statement.
    """
    tfg = t_norm1(T, f * g)
    lhs = tfg * tfg
    rhs = t_norm2_squared(T, f) * t_norm2_squared(T, g)
    return HolderCheck(lhs <= rhs, lhs, rhs)
