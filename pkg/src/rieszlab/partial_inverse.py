"""Canonical partial inverses, exactly and by dyadic spectral approximation.

The dyadic construction sorts the coordinates of ``f >= 0`` into level cells
of width ``2**-n``.  Cells are right-closed by default, ``(j/2^n, (j+1)/2^n]``
for ``j >= 1`` and ``(0, 1/2^n]`` for ``j = 0``, which is the band-projection
composition ``P_(f - j/2^n e)^+ (I - P_(f - (j+1)/2^n e)^+)``.  The
left-closed variant ``[j/2^n, (j+1)/2^n)`` comes from the composition
``P_((j+1)/2^n e - f)^+ (I - P_(j/2^n e - f)^+)`` and is available with
``convention="left"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import PreconditionError
from .lattice import ComponentMask, RieszElement, band_mask

_ZERO = Fraction(0)
CONVENTIONS = ("right", "left")


def canonical_inverse_exact(g: RieszElement) -> RieszElement:
    """``h`` with ``g h = P_|g| e`` and ``h`` supported on the band of ``g``."""
    return RieszElement._wrap(tuple(1 / c if c else _ZERO for c in g.coords))


@dataclass(frozen=True)
class SpectralLadder:
    """Level masks ``q_{n,j}`` of ``f`` at depth ``n``.

    Only nonzero levels are stored; :meth:`mask` returns the empty mask for the
    others.  ``truncation_index`` is the smallest ``J`` with ``q_{n,j} = 0`` for
    all ``j >= J``.
    """

    depth: int
    dim: int
    levels: dict = field(default_factory=dict)
    truncation_index: int = 0
    convention: str = "right"

    def mask(self, j: int) -> ComponentMask:
        return self.levels.get(j, ComponentMask(0, self.dim))

    def nonzero_levels(self) -> list[int]:
        return sorted(self.levels)

    def union(self) -> ComponentMask:
        bits = 0
        for m in self.levels.values():
            bits |= m.bits
        return ComponentMask(bits, self.dim)

    def weighted_sum(self, weight) -> RieszElement:
        """``sum_j weight(j) q_{n,j}`` as a vector."""
        out = [_ZERO] * self.dim
        for j, m in self.levels.items():
            w = weight(j)
            for i in m:
                out[i] = w
        return RieszElement._wrap(tuple(out))


def _check_nonnegative(f: RieszElement):
    if not f.is_positive():
        bad = [i for i, c in enumerate(f) if c < 0]
        raise PreconditionError(f"f has negative coordinates at {bad}")


def _check_depth(n: int):
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"depth must be a positive integer, got {n!r}")


def level_index(c: Fraction, n: int, convention: str = "right") -> int:
    """Cell index of a positive coordinate value ``c`` at depth ``n``."""
    scaled = c * (1 << n)
    if convention == "right":
        return math.ceil(scaled) - 1
    if convention == "left":
        return math.floor(scaled)
    raise ValueError(f"unknown convention {convention!r}")


def spectral_masks(f: RieszElement, n: int, convention: str = "right") -> SpectralLadder:
    _check_nonnegative(f)
    _check_depth(n)
    bits: dict[int, int] = {}
    for i, c in enumerate(f.coords):
        if c:
            j = level_index(c, n, convention)
            bits[j] = bits.get(j, 0) | 1 << i
    levels = {j: ComponentMask(b, len(f)) for j, b in bits.items()}
    top = max(levels) + 1 if levels else 0
    return SpectralLadder(n, len(f), levels, top, convention)


def dyadic_bounds(f: RieszElement, n: int, convention: str = "right") -> tuple[RieszElement, RieszElement]:
    """``(lower, upper)`` with ``lower <= f <= upper`` and gap ``2**-n`` on the band of ``f``."""
    ladder = spectral_masks(f, n, convention)
    step = Fraction(1, 1 << n)
    return (
        ladder.weighted_sum(lambda j: j * step),
        ladder.weighted_sum(lambda j: (j + 1) * step),
    )


def spectral_inverse(f: RieszElement, n: int, convention: str = "right") -> RieszElement:
    """Lower dyadic approximant ``sum_j 2^n/(j+1) q_{n,j}`` of the canonical inverse of ``f``."""
    ladder = spectral_masks(f, n, convention)
    scale = 1 << n
    return ladder.weighted_sum(lambda j: Fraction(scale, j + 1))


def bottom_correction(f: RieszElement, n: int, convention: str = "right") -> RieszElement:
    """Upper bound for ``1/f`` on the bottom cell ``q_{n,0}``.

    Sums ``2^(j+1) (q_{j,0} - q_{j+1,0})`` over ``j >= n``.  The sum is finite:
    ``q_{j,0}`` is empty once ``2**-j`` drops below the smallest positive
    coordinate.
    """
    _check_nonnegative(f)
    out = [_ZERO] * len(f)
    j = n
    current = spectral_masks(f, j, convention).mask(0)
    while current:
        below = spectral_masks(f, j + 1, convention).mask(0)
        for i in current & ~below:
            out[i] = Fraction(2 ** (j + 1))
        current = below
        j += 1
    return RieszElement._wrap(tuple(out))


def spectral_inverse_upper(f: RieszElement, n: int, convention: str = "right") -> RieszElement:
    """Upper dyadic approximant: ``2^n/j`` on level ``j >= 1`` plus :func:`bottom_correction`."""
    ladder = spectral_masks(f, n, convention)
    scale = 1 << n
    upper = ladder.weighted_sum(lambda j: Fraction(scale, j) if j else _ZERO)
    return upper + bottom_correction(f, n, convention)


def spectral_inverse_signed(g: RieszElement, n: int, convention: str = "right") -> RieszElement:
    """Dyadic approximant for a sign-changing ``g`` via ``g+`` and ``g-``."""
    return spectral_inverse(g.pos, n, convention) - spectral_inverse(g.neg, n, convention)


def inverse_error(f: RieszElement, n: int, convention: str = "right") -> Fraction:
    """``max |spectral_inverse(f, n) - canonical_inverse_exact(f)|`` over the band of ``f``."""
    approx = spectral_inverse_signed(f, n, convention)
    exact = canonical_inverse_exact(f)
    return (band_mask(f) * (approx - exact)).max_norm()
