"""Finite-dimensional Riesz space primitives.

The ambient space is Q^n with the componentwise order.  The weak order unit
is ``e = (1, ..., 1)``, which is also the unit of the componentwise
multiplication, so components of ``e`` are exactly the 0/1 vectors.  Those are
stored as bitmasks (:class:`ComponentMask`) and double as band projections.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .exceptions import DimensionMismatch, NotInAlgebra, OracleBoundExceeded

DEFAULT_ENUMERATION_BOUND = 20


def to_rational(x) -> Fraction:
    """Convert ``x`` to an exact rational, refusing floats and bools."""
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _check_dims(a, b):
    if len(a) != len(b):
        raise DimensionMismatch(f"dimension mismatch: {len(a)} != {len(b)}")


class RieszElement:
    """A point of Q^n.

    Arithmetic is componentwise; ``<=`` and ``>=`` are the lattice (partial)
    order, so ``not a <= b`` does not imply ``a > b``.
    """

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(to_rational(c) for c in coords))

    @classmethod
    def _wrap(cls, coords: tuple) -> "RieszElement":
        # trusted fast path: coords is already a tuple of Fractions
        obj = object.__new__(cls)
        object.__setattr__(obj, "coords", coords)
        return obj

    @classmethod
    def zero(cls, n: int) -> "RieszElement":
        return cls._wrap((Fraction(0),) * n)

    @classmethod
    def unit(cls, n: int) -> "RieszElement":
        return cls._wrap((Fraction(1),) * n)

    @classmethod
    def indicator(cls, n: int, i: int) -> "RieszElement":
        return cls._wrap(tuple(Fraction(int(j == i)) for j in range(n)))

    def __setattr__(self, name, value):
        raise AttributeError("RieszElement is immutable")

    def __len__(self):
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __eq__(self, other):
        if isinstance(other, RieszElement):
            return self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return "RieszElement(" + ", ".join(str(c) for c in self.coords) + ")"

    def __add__(self, other: "RieszElement") -> "RieszElement":
        _check_dims(self, other)
        return RieszElement._wrap(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RieszElement") -> "RieszElement":
        _check_dims(self, other)
        return RieszElement._wrap(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RieszElement":
        return RieszElement._wrap(tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, RieszElement):
            return multiply(self, other)
        if isinstance(other, ComponentMask):
            return other.apply(self)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RieszElement._wrap(tuple(a * other for a in self.coords))
        return NotImplemented

    __rmul__ = __mul__

    def __le__(self, other: "RieszElement") -> bool:
        _check_dims(self, other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def __ge__(self, other: "RieszElement") -> bool:
        _check_dims(self, other)
        return all(a >= b for a, b in zip(self.coords, other.coords))

    def __abs__(self) -> "RieszElement":
        return RieszElement._wrap(tuple(abs(a) for a in self.coords))

    @property
    def pos(self) -> "RieszElement":
        return RieszElement._wrap(tuple(a if a > 0 else Fraction(0) for a in self.coords))

    @property
    def neg(self) -> "RieszElement":
        return RieszElement._wrap(tuple(-a if a < 0 else Fraction(0) for a in self.coords))

    def sup(self, other: "RieszElement") -> "RieszElement":
        _check_dims(self, other)
        return RieszElement._wrap(tuple(max(a, b) for a, b in zip(self.coords, other.coords)))

    def inf(self, other: "RieszElement") -> "RieszElement":
        _check_dims(self, other)
        return RieszElement._wrap(tuple(min(a, b) for a, b in zip(self.coords, other.coords)))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_positive(self) -> bool:
        """True iff ``self >= 0``."""
        return all(a >= 0 for a in self.coords)

    def max_norm(self) -> Fraction:
        return max((abs(a) for a in self.coords), default=Fraction(0))


@dataclass(frozen=True)
class ComponentMask:
    """A component of ``e``; bit ``i`` of ``bits`` is coordinate ``i``.

    The textual form lists coordinate 0 first, so ``ComponentMask.parse("1100")``
    is the indicator of coordinates 0 and 1.
    """

    bits: int
    n: int

    def __post_init__(self):
        if self.n < 0 or self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} do not fit in dimension {self.n}")

    @classmethod
    def parse(cls, text: str) -> "ComponentMask":
        if text.strip("01"):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(sum(1 << i for i, ch in enumerate(text) if ch == "1"), len(text))

    @classmethod
    def from_indices(cls, indices: Iterable[int], n: int) -> "ComponentMask":
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise IndexError(f"index {i} out of range for dimension {n}")
            bits |= 1 << i
        return cls(bits, n)

    @classmethod
    def full(cls, n: int) -> "ComponentMask":
        return cls((1 << n) - 1, n)

    @classmethod
    def empty(cls, n: int) -> "ComponentMask":
        return cls(0, n)

    def __str__(self):
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.n))

    def __repr__(self):
        return f"ComponentMask('{self}')"

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return (i for i in range(self.n) if self.bits >> i & 1)

    def __bool__(self):
        return self.bits != 0

    def _same_dim(self, other):
        if self.n != other.n:
            raise DimensionMismatch(f"dimension mismatch: {self.n} != {other.n}")

    def __and__(self, other: "ComponentMask") -> "ComponentMask":
        self._same_dim(other)
        return ComponentMask(self.bits & other.bits, self.n)

    def __or__(self, other: "ComponentMask") -> "ComponentMask":
        self._same_dim(other)
        return ComponentMask(self.bits | other.bits, self.n)

    def __invert__(self) -> "ComponentMask":
        return ComponentMask(~self.bits & ((1 << self.n) - 1), self.n)

    def __le__(self, other: "ComponentMask") -> bool:
        self._same_dim(other)
        return self.bits & ~other.bits == 0

    def __ge__(self, other: "ComponentMask") -> bool:
        return other <= self

    def __lt__(self, other: "ComponentMask") -> bool:
        return self <= other and self != other

    def __mul__(self, other):
        if isinstance(other, ComponentMask):
            return self & other
        if isinstance(other, RieszElement):
            return self.apply(other)
        return NotImplemented

    def apply(self, f: RieszElement) -> RieszElement:
        """The band projection: keep coordinates in the mask, zero the rest."""
        if len(f) != self.n:
            raise DimensionMismatch(f"dimension mismatch: {self.n} != {len(f)}")
        zero = Fraction(0)
        return RieszElement._wrap(
            tuple(c if self.bits >> i & 1 else zero for i, c in enumerate(f.coords))
        )

    def as_element(self) -> RieszElement:
        return RieszElement._wrap(
            tuple(Fraction(self.bits >> i & 1) for i in range(self.n))
        )

    def count(self) -> int:
        return bin(self.bits).count("1")


class PartitionAlgebra:
    """The finite Boolean algebra generated by a partition of ``{0, ..., n-1}``.

    Subsets of atoms are encoded as ints with bit ``j`` standing for atom ``j``;
    :meth:`mask_of` and :meth:`atom_set` convert to and from coordinate masks.
    """

    __slots__ = ("n", "atoms", "atom_masks", "atom_index")

    def __init__(self, atoms: Sequence[Iterable[int]], n: int | None = None):
        atoms = tuple(tuple(sorted(set(a))) for a in atoms)
        if n is None:
            n = sum(len(a) for a in atoms)
        index = [-1] * n
        for j, atom in enumerate(atoms):
            if not atom:
                raise ValueError(f"atom {j} is empty")
            for i in atom:
                if not 0 <= i < n:
                    raise ValueError(f"atom {j}: index {i} out of range for dimension {n}")
                if index[i] != -1:
                    raise ValueError(f"index {i} lies in atoms {index[i]} and {j}")
                index[i] = j
        missing = [i for i, j in enumerate(index) if j == -1]
        if missing:
            raise ValueError(f"indices {missing} are not covered by any atom")
        self.n = n
        self.atoms = atoms
        self.atom_masks = tuple(sum(1 << i for i in a) for a in atoms)
        self.atom_index = tuple(index)

    @classmethod
    def singletons(cls, n: int) -> "PartitionAlgebra":
        return cls([[i] for i in range(n)], n)

    @classmethod
    def trivial(cls, n: int) -> "PartitionAlgebra":
        return cls([list(range(n))], n)

    def __len__(self):
        return len(self.atoms)

    def __eq__(self, other):
        if isinstance(other, PartitionAlgebra):
            return self.n == other.n and sorted(self.atoms) == sorted(other.atoms)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.atoms))))

    def __repr__(self):
        return f"PartitionAlgebra({[list(a) for a in self.atoms]}, n={self.n})"

    def mask_of(self, atom_set: int) -> ComponentMask:
        bits = 0
        j = 0
        while atom_set:
            if atom_set & 1:
                bits |= self.atom_masks[j]
            atom_set >>= 1
            j += 1
        return ComponentMask(bits, self.n)

    def atom_set(self, mask: ComponentMask) -> int:
        """Inverse of :meth:`mask_of`; raises :class:`NotInAlgebra`."""
        if mask.n != self.n:
            raise DimensionMismatch(f"dimension mismatch: {mask.n} != {self.n}")
        s = 0
        for j, am in enumerate(self.atom_masks):
            hit = mask.bits & am
            if hit == am:
                s |= 1 << j
            elif hit:
                raise NotInAlgebra(mask)
        return s

    def contains(self, mask: ComponentMask) -> bool:
        try:
            self.atom_set(mask)
        except NotInAlgebra:
            return False
        return True

    def members(self, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[ComponentMask]:
        return algebra_members(self, bound)


def sup_inf(a: RieszElement, b: RieszElement) -> tuple[RieszElement, RieszElement]:
    return a.sup(b), a.inf(b)


def pos_neg_abs(a: RieszElement) -> tuple[RieszElement, RieszElement, RieszElement]:
    return a.pos, a.neg, abs(a)


def multiply(a: RieszElement, b: RieszElement) -> RieszElement:
    _check_dims(a, b)
    return RieszElement._wrap(tuple(x * y for x, y in zip(a.coords, b.coords)))


def band_mask(f: RieszElement) -> ComponentMask:
    """Component ``P_f e`` of the band generated by ``f``: the support of ``|f|``."""
    return ComponentMask(sum(1 << i for i, c in enumerate(f.coords) if c), len(f))


def mask_op(p: ComponentMask, q: ComponentMask, kind: str) -> ComponentMask:
    if kind == "meet":
        return p & q
    if kind == "join":
        return p | q
    if kind == "complement":
        p._same_dim(q)
        return ~p
    raise ValueError(f"unknown mask operation {kind!r}")


def algebra_members(
    algebra: PartitionAlgebra, bound: int = DEFAULT_ENUMERATION_BOUND
) -> list[ComponentMask]:
    """All unions of atoms.

    Ordered by the atom-inclusion bit string read with atom 0 as the most
    significant digit, so singleton atoms of two coordinates give
    ``00, 01, 10, 11``.
    """
    m = len(algebra)
    if m > bound:
        raise OracleBoundExceeded(m, bound)
    out = []
    for s in range(1 << m):
        bits = 0
        for j in range(m):
            if s >> (m - 1 - j) & 1:
                bits |= algebra.atom_masks[j]
        out.append(ComponentMask(bits, algebra.n))
    return out


def refines(fine: PartitionAlgebra, coarse: PartitionAlgebra) -> bool:
    """True iff every atom of ``fine`` lies inside a single atom of ``coarse``."""
    if fine.n != coarse.n:
        return False
    return all(len({coarse.atom_index[i] for i in atom}) == 1 for atom in fine.atoms)
