"""Component charges and their Hahn-Jordan decomposition.

A charge ``psi`` maps the members of a Boolean algebra ``B`` of components of
``e`` into a Riesz subspace ``G`` of block-constant vectors.  It is stored by
one rational per atom of ``B``: ``psi(atom)`` is that value times the mask of
the ``G``-block containing the atom.  With this encoding ``psi(pk) = k psi(p)``
for ``G``-measurable components ``k`` and additivity hold by construction; order
continuity and order boundedness are automatic in finite dimension.

Internally members of ``B`` are handled as atom-subset ints (bit ``j`` is atom
``j``).  The public functions take and return :class:`ComponentMask` values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .exceptions import (
    OracleBoundExceeded,
    PreconditionError,
    RefinementError,
)
from .expectation import ExpectationOperator, apply_t
from .lattice import ComponentMask, PartitionAlgebra, RieszElement, refines, to_rational

DEFAULT_THETA = Fraction(2)
DEFAULT_ORACLE_BOUND = 12

_ZERO = Fraction(0)


class ComponentCharge:
    """A charge ``psi: B -> G`` given by its values on the atoms of ``B``."""

    __slots__ = ("algebra", "g_partition", "atom_values", "atom_block", "nblocks")

    def __init__(
        self,
        algebra: PartitionAlgebra,
        g_partition: PartitionAlgebra,
        atom_values: Sequence,
    ):
        if algebra.n != g_partition.n:
            raise RefinementError("algebra and G-partition have different dimensions")
        if not refines(algebra, g_partition):
            raise RefinementError("B does not contain the components of e in G")
        values = tuple(to_rational(v) for v in atom_values)
        if len(values) != len(algebra):
            raise ValueError(f"{len(values)} atom values for {len(algebra)} atoms")
        self.algebra = algebra
        self.g_partition = g_partition
        self.atom_values = values
        self.atom_block = tuple(g_partition.atom_index[a[0]] for a in algebra.atoms)
        self.nblocks = len(g_partition)

    @property
    def n(self) -> int:
        return self.algebra.n

    def __len__(self):
        return len(self.atom_values)

    def __repr__(self):
        return (
            f"ComponentCharge(atoms={[list(a) for a in self.algebra.atoms]}, "
            f"G={[list(b) for b in self.g_partition.atoms]}, "
            f"values={[str(v) for v in self.atom_values]})"
        )

    def __call__(self, p: ComponentMask) -> RieszElement:
        return evaluate_charge(self, p)

    # -- atom-set helpers -------------------------------------------------

    def atoms_of(self, s: int) -> Iterator[int]:
        j = 0
        while s:
            if s & 1:
                yield j
            s >>= 1
            j += 1

    def full_set(self) -> int:
        return (1 << len(self.atom_values)) - 1

    def block_sums(self, s: int) -> list[Fraction]:
        out = [_ZERO] * self.nblocks
        for j in self.atoms_of(s):
            out[self.atom_block[j]] += self.atom_values[j]
        return out

    def expand(self, block_values: Sequence[Fraction]) -> RieszElement:
        idx = self.g_partition.atom_index
        return RieszElement._wrap(tuple(block_values[idx[i]] for i in range(self.n)))

    def to_set(self, p: ComponentMask) -> int:
        return self.algebra.atom_set(p)

    def to_mask(self, s: int) -> ComponentMask:
        return self.algebra.mask_of(s)

    def g_mask(self, blocks) -> ComponentMask:
        bits = 0
        for b in blocks:
            bits |= self.g_partition.atom_masks[b]
        return ComponentMask(bits, self.n)


def order_bound(psi: ComponentCharge) -> RieszElement:
    """An element ``g >= |psi(p)|`` for every ``p`` in ``B``.

    Per G-block this is the sum of ``|value|`` over the atoms in the block.
    """
    out = [_ZERO] * psi.nblocks
    for b, v in zip(psi.atom_block, psi.atom_values):
        out[b] += abs(v)
    return psi.expand(out)


def evaluate_charge(psi: ComponentCharge, p: ComponentMask) -> RieszElement:
    return psi.expand(psi.block_sums(psi.to_set(p)))


def charge_from_density(
    T: ExpectationOperator, f: RieszElement, algebra: PartitionAlgebra
) -> ComponentCharge:
    """The charge ``p -> T(p f)`` on ``algebra``, with ``G = R(T)``."""
    if not refines(algebra, T.partition):
        raise RefinementError("algebra does not refine the blocks of T")
    values = []
    for j, atom in enumerate(algebra.atoms):
        image = apply_t(T, ComponentMask(algebra.atom_masks[j], T.n) * f)
        values.append(image[atom[0]])
    return ComponentCharge(algebra, T.partition, values)


def _alpha_blocks(psi: ComponentCharge, s: int) -> list[Fraction]:
    out = [_ZERO] * psi.nblocks
    for j in psi.atoms_of(s):
        v = psi.atom_values[j]
        if v > 0:
            out[psi.atom_block[j]] += v
    return out


def alpha(psi: ComponentCharge, q: ComponentMask) -> RieszElement:
    """Supremum of ``psi(p)`` over members ``p <= q``.

    Blocks are independent, so on each G-block the supremum collects exactly
    the atoms of ``q`` in that block carrying a positive value.
    """
    return psi.expand(_alpha_blocks(psi, psi.to_set(q)))


def _check_theta(theta) -> Fraction:
    theta = to_rational(theta)
    if theta <= 1:
        raise ValueError(f"theta must exceed 1, got {theta}")
    return theta


def m_condition(psi: ComponentCharge, q: ComponentMask, p: ComponentMask, theta=DEFAULT_THETA) -> bool:
    """Membership of ``p`` in ``M(q)``: ``p <= q`` and ``theta psi(p) >= p alpha(q)``.

    Evaluated on full vectors; :func:`maximal_m` uses an equivalent per-block form.
    """
    theta = _check_theta(theta)
    if not p <= q:
        return False
    return evaluate_charge(psi, p) * theta >= p * alpha(psi, q)


def _maximal_set(psi: ComponentCharge, s: int, theta: Fraction) -> int:
    alpha_b = _alpha_blocks(psi, s)
    values, block = psi.atom_values, psi.atom_block
    chosen = 0
    sums = [_ZERO] * psi.nblocks
    negatives = []
    for j in psi.atoms_of(s):
        v = values[j]
        if v >= 0:
            chosen |= 1 << j
            sums[block[j]] += v
        else:
            negatives.append(j)
    # seed: each touched block sums to alpha, and theta * alpha >= alpha
    negatives.sort(key=lambda j: (-values[j], j))
    for j in negatives:
        b = block[j]
        trial = sums[b] + values[j]
        # once p meets block b the coordinates there require theta*psi >= alpha
        if theta * trial >= alpha_b[b]:
            chosen |= 1 << j
            sums[b] = trial
    return chosen


def maximal_m(psi: ComponentCharge, q: ComponentMask, theta=DEFAULT_THETA) -> ComponentMask:
    """A maximal element of ``M(q)``.

    Greedy: start from every atom of ``q`` with a nonnegative value, then try
    the negative atoms in descending value order (ties by index).  Because the
    seed contains all nonnegative atoms, any further extension only lowers the
    block sums, so an extension by a set of atoms fails whenever each single
    atom fails, and the result is maximal.
    """
    theta = _check_theta(theta)
    return psi.to_mask(_maximal_set(psi, psi.to_set(q), theta))


def _positive_piece_set(psi: ComponentCharge, s: int, theta: Fraction) -> int:
    qhat = _maximal_set(psi, s, theta)
    sums = psi.block_sums(qhat)
    u = 0
    for j in psi.atoms_of(qhat):
        if sums[psi.atom_block[j]] != 0:
            u |= 1 << j
    return u


def positive_piece(psi: ComponentCharge, q: ComponentMask, theta=DEFAULT_THETA) -> ComponentMask:
    """``u <= P_psi(u) q`` with ``psi(u) <= alpha(q) <= theta psi(u)``.

    ``u`` is ``qhat`` cut down to the band of ``psi(qhat)``, where ``qhat`` is
    :func:`maximal_m`.
    """
    theta = _check_theta(theta)
    return psi.to_mask(_positive_piece_set(psi, psi.to_set(q), theta))


def _strongly_negative_set(psi: ComponentCharge, s: int) -> int:
    rest = s
    while any(_alpha_blocks(psi, rest)):
        u = _positive_piece_set(psi, rest, DEFAULT_THETA)
        # alpha(rest) != 0 forces psi(u) != 0, so at least one atom leaves
        assert u and u & ~rest == 0, "positive piece must be a nonzero part of the remainder"
        rest &= ~u
    return rest


def strongly_negative_witness(psi: ComponentCharge, p: ComponentMask) -> ComponentMask:
    """A strongly negative ``v <= p`` with ``psi(v) <= psi(p)``.

    Requires ``psi(p) <= 0`` and ``psi(p) != 0``.  Positive pieces are peeled off
    the remainder until its ``alpha`` vanishes; every round removes at least
    one atom.
    """
    s = psi.to_set(p)
    sums = psi.block_sums(s)
    if any(v > 0 for v in sums) or not any(sums):
        raise PreconditionError(f"psi({p}) must be <= 0 and nonzero")
    return psi.to_mask(_strongly_negative_set(psi, s))


def negative_part_witness(psi: ComponentCharge, q: ComponentMask) -> ComponentMask:
    """A strongly negative ``v <= q`` with ``psi(v) <= -psi(q)^-``."""
    s = psi.to_set(q)
    sums = psi.block_sums(s)
    neg_blocks = [b for b, v in enumerate(sums) if v < 0]
    if not neg_blocks:
        raise PreconditionError(f"psi({q}) has no negative part")
    g = psi.to_set(psi.g_mask(neg_blocks))
    return psi.to_mask(_strongly_negative_set(psi, g & s))


def hahn_jordan(psi: ComponentCharge, nulls: str = "negative") -> ComponentMask:
    """A member ``q`` with ``q`` strongly positive and ``e - q`` strongly negative.

    ``nulls`` decides where atoms of value 0 go.  With ``"negative"`` (the
    default) ``q`` is the join of the positive atoms, except that a charge with
    a positive atom and no negative atom gets ``q = e``.  With ``"positive"``
    ``q`` is the join of all atoms of nonnegative value, the largest solution.
    """
    values = psi.atom_values
    if nulls == "positive":
        s = sum(1 << j for j, v in enumerate(values) if v >= 0)
    elif nulls == "negative":
        has_pos = any(v > 0 for v in values)
        has_neg = any(v < 0 for v in values)
        if has_pos and not has_neg:
            s = psi.full_set()
        else:
            s = sum(1 << j for j, v in enumerate(values) if v > 0)
    else:
        raise ValueError(f"nulls must be 'negative' or 'positive', got {nulls!r}")
    return psi.to_mask(s)


def is_strongly_positive(psi: ComponentCharge, q: ComponentMask, bound: int = DEFAULT_ORACLE_BOUND) -> bool:
    return ChargeTable(psi, bound).strongly_positive(psi.to_set(q))


def is_strongly_negative(psi: ComponentCharge, q: ComponentMask, bound: int = DEFAULT_ORACLE_BOUND) -> bool:
    return ChargeTable(psi, bound).strongly_negative(psi.to_set(q))


class ChargeTable:
    """Exhaustive table of ``psi`` over all members of ``B``.

    Row ``s`` holds the per-G-block values of ``psi`` on atom subset ``s``,
    scaled by a common denominator so the comparisons run on integers.  Built
    by a 0/1 membership matrix product, independently of the decomposition
    routines it is used to check.
    """

    def __init__(self, psi: ComponentCharge, bound: int = DEFAULT_ORACLE_BOUND):
        m = len(psi)
        if m > bound:
            raise OracleBoundExceeded(m, bound)
        self.psi = psi
        self.m = m
        self.size = 1 << m
        self.scale = math.lcm(*(v.denominator for v in psi.atom_values)) if m else 1
        ints = [int(v * self.scale) for v in psi.atom_values]
        dtype = np.int64 if sum(abs(x) for x in ints) < 2**62 else object
        A = np.zeros((m, psi.nblocks), dtype=dtype)
        for j, x in enumerate(ints):
            A[j, psi.atom_block[j]] = x
        self.index = np.arange(self.size, dtype=np.int64)
        S = ((self.index[:, None] >> np.arange(m, dtype=np.int64)) & 1).astype(dtype)
        self.table = S @ A if m else np.zeros((1, psi.nblocks), dtype=dtype)
        self.nonneg = (self.table >= 0).all(axis=1).astype(bool)
        self.nonpos = (self.table <= 0).all(axis=1).astype(bool)

    def value(self, s: int) -> list[Fraction]:
        return [Fraction(int(x), self.scale) for x in self.table[s]]

    def sup_below(self, s: int) -> list[Fraction]:
        """Per-block supremum of ``psi(p)`` over all ``p <= s``."""
        best = self.table[self.index & s].max(axis=0)
        return [Fraction(int(x), self.scale) for x in best]

    def strongly_positive(self, s: int) -> bool:
        return bool(self.nonneg[self.index & s].all())

    def strongly_negative(self, s: int) -> bool:
        return bool(self.nonpos[self.index & s].all())

    def sup_below_all(self) -> np.ndarray:
        """Row ``s``: per-block max of the table over all subsets of ``s``."""
        best = self.table.copy()
        for j in range(self.m):
            has = (self.index >> j) & 1 == 1
            best[has] = np.maximum(best[has], best[self.index[has] ^ (1 << j)])
        return best

    def strongly_negative_all(self) -> np.ndarray:
        """``out[s]``: every subset of ``s`` has a nonpositive value."""
        ok = self.nonpos.copy()
        for j in range(self.m):
            has = (self.index >> j) & 1 == 1
            ok[has] &= ok[self.index[has] ^ (1 << j)]
        return ok

    def touches(self) -> np.ndarray:
        """``out[s, b]``: atom subset ``s`` meets G-block ``b``."""
        out = np.zeros((self.size, self.psi.nblocks), dtype=bool)
        for j, b in enumerate(self.psi.atom_block):
            out[:, b] |= (self.index >> j) & 1 == 1
        return out

    def hahn_solutions(self) -> list[int]:
        """Every ``q`` with ``psi(pq) >= 0`` and ``psi(p(e-q)) <= 0`` for all ``p``.

        Literal double enumeration over ``B x B``, in chunks of candidates.
        """
        full = self.size - 1
        out = []
        chunk = max(1, (1 << 20) // self.size)
        for start in range(0, self.size, chunk):
            qs = self.index[start:start + chunk]
            meet = self.index[None, :] & qs[:, None]
            rest = self.index[None, :] & (full ^ qs)[:, None]
            ok = self.nonneg[meet].all(axis=1) & self.nonpos[rest].all(axis=1)
            out.extend(int(q) for q in qs[ok])
        return out


def brute_force_hahn(psi: ComponentCharge, bound: int = DEFAULT_ORACLE_BOUND) -> frozenset:
    """All Hahn-Jordan positive components of ``psi``, by exhaustive search."""
    table = ChargeTable(psi, bound)
    return frozenset(psi.to_mask(s) for s in table.hahn_solutions())



class DecompositionTables:
    """The greedy constructions evaluated for every member of ``B`` at once.

    Arrays are indexed by atom subset.  ``maximal[s]``, ``piece[s]`` and
    :meth:`negative_part_witnesses` agree with :func:`maximal_m`,
    :func:`positive_piece` and :func:`negative_part_witness` on every member;
    values are scaled integers, with ``scale`` the common denominator.
    """

    def __init__(self, psi: ComponentCharge, theta=DEFAULT_THETA, bound: int = DEFAULT_ORACLE_BOUND):
        theta = _check_theta(theta)
        m = len(psi)
        if m > bound:
            raise OracleBoundExceeded(m, bound)
        self.psi, self.theta, self.m = psi, theta, m
        size = 1 << m
        self.scale = math.lcm(*(v.denominator for v in psi.atom_values)) if m else 1
        ints = [int(v * self.scale) for v in psi.atom_values]
        big = sum(abs(x) for x in ints) * max(theta.numerator, theta.denominator) >= 2**62
        dtype = object if big else np.int64
        k = psi.nblocks
        index = np.arange(size, dtype=np.int64)
        self.index = index

        # sums and alpha by doubling over atoms
        sums = np.zeros((1, k), dtype=dtype)
        alphas = np.zeros((1, k), dtype=dtype)
        for j, x in enumerate(ints):
            step = np.zeros(k, dtype=dtype)
            step[psi.atom_block[j]] = x
            sums = np.concatenate([sums, sums + step])
            alphas = np.concatenate([alphas, alphas + (step if x > 0 else 0 * step)])
        self.sums, self.alpha = sums, alphas

        # greedy maximal element of M(q), all q at once
        nonneg = sum(1 << j for j, x in enumerate(ints) if x >= 0)
        chosen = index & nonneg
        current = sums[chosen].copy()
        negatives = sorted((j for j, x in enumerate(ints) if x < 0), key=lambda j: (-ints[j], j))
        a, d = theta.numerator, theta.denominator
        for j in negatives:
            b = psi.atom_block[j]
            trial = current[:, b] + ints[j]
            ok = ((index >> j) & 1 == 1) & (a * trial >= d * alphas[:, b])
            chosen = chosen | (ok.astype(np.int64) << j)
            current[ok, b] = trial[ok]
        self.maximal = chosen

        block_atoms = [0] * k
        for j, b in enumerate(psi.atom_block):
            block_atoms[b] |= 1 << j
        keep = np.zeros(size, dtype=np.int64)
        for b in range(k):
            keep |= np.where(current[:, b] != 0, block_atoms[b], 0)
        self.piece = chosen & keep
        self._block_atoms = block_atoms

    def _peel(self, start: np.ndarray) -> np.ndarray:
        # positive pieces at theta = 2, matching the scalar witness routine
        piece = self.piece if self.theta == DEFAULT_THETA else DecompositionTables(
            self.psi, DEFAULT_THETA, self.m
        ).piece
        positive = (self.alpha != 0).any(axis=1)
        rest = start.copy()
        while True:
            live = positive[rest]
            if not live.any():
                return rest
            rest = np.where(live, rest & ~piece[rest], rest)

    def negative_part_witnesses(self) -> tuple[np.ndarray, np.ndarray]:
        """``(has_negative, v)``: which members have ``psi(q)^- != 0`` and their witnesses."""
        neg = self.sums < 0
        g = np.zeros(len(self.index), dtype=np.int64)
        for b, atoms in enumerate(self._block_atoms):
            g |= np.where(neg[:, b], atoms, 0)
        has = neg.any(axis=1)
        return has, np.where(has, self._peel(self.index & g), 0)
