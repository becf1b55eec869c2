"""T-linear functionals, their strong-dual norm, and their density representation.

A functional ``f: E -> R(T)`` is known here either by a density ``y``
(``g -> T(y g)``) or by a validated matrix.  :func:`exact_represent` recovers
the density of any valid functional directly; :func:`dyadic_represent`
rebuilds it from Hahn-Jordan positive components of the shifted functionals
``f - (k/2^n) T``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

from .checks import Check, check
from .exceptions import DimensionMismatch, HomogeneityViolation, RangeViolation, RieszError
from .expectation import ExpectationOperator, apply_t, is_in_range, t_norm2_squared
from .hahn_jordan import ComponentCharge, hahn_jordan
from .lattice import ComponentMask, PartitionAlgebra, RieszElement, band_mask, to_rational

_ZERO = Fraction(0)


class StrongFunctional:
    """Base class; subclasses implement ``__call__``."""

    T: ExpectationOperator

    def __init__(self, T: ExpectationOperator):
        self.T = T
        self._indicator_values = None

    @property
    def n(self) -> int:
        return self.T.n

    def __call__(self, g: RieszElement) -> RieszElement:
        raise NotImplementedError

    def indicator_values(self) -> tuple[Fraction, ...]:
        """Value of ``f(chi_i)`` on the block containing ``i``, for each ``i``."""
        if self._indicator_values is None:
            n = self.n
            self._indicator_values = tuple(
                self(RieszElement.indicator(n, i))[i] for i in range(n)
            )
        return self._indicator_values

    def matrix(self) -> list[list[Fraction]]:
        n = self.n
        cols = [self(RieszElement.indicator(n, i)).coords for i in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def shift(self, c) -> "StrongFunctional":
        """``g -> f(g) - c T(g)``."""
        return _Affine(self, Fraction(1), to_rational(c))

    def __neg__(self) -> "StrongFunctional":
        return _Affine(self, Fraction(-1), _ZERO)


class DensityFunctional(StrongFunctional):
    """``T_y: g -> T(y g)``."""

    def __init__(self, T: ExpectationOperator, y: RieszElement):
        if len(y) != T.n:
            raise DimensionMismatch(f"dimension mismatch: {len(y)} != {T.n}")
        super().__init__(T)
        self.y = y

    def __call__(self, g):
        return apply_t(self.T, self.y * g)

    def indicator_values(self):
        if self._indicator_values is None:
            T = self.T
            self._indicator_values = tuple(
                self.y[i] / T.weight_ratio(i) for i in range(T.n)
            )
        return self._indicator_values

    def __repr__(self):
        return f"DensityFunctional(y={self.y!r})"


class MatrixFunctional(StrongFunctional):
    """``g -> M g``; build through :func:`validate_matrix_functional`."""

    def __init__(self, T: ExpectationOperator, rows: Sequence[Sequence]):
        super().__init__(T)
        self.rows = tuple(tuple(to_rational(x) for x in row) for row in rows)

    def __call__(self, g):
        if len(g) != self.n:
            raise DimensionMismatch(f"dimension mismatch: {len(g)} != {self.n}")
        return RieszElement._wrap(
            tuple(sum(a * b for a, b in zip(row, g.coords)) for row in self.rows)
        )

    def __repr__(self):
        return f"MatrixFunctional({[[str(x) for x in r] for r in self.rows]})"


class _Affine(StrongFunctional):
    def __init__(self, base: StrongFunctional, scale: Fraction, shift: Fraction):
        super().__init__(base.T)
        self.base, self.scale, self.offset = base, scale, shift

    def __call__(self, g):
        return self.base(g) * self.scale - apply_t(self.T, g) * self.offset

    def indicator_values(self):
        if self._indicator_values is None:
            T = self.T
            self._indicator_values = tuple(
                self.scale * a - self.offset / T.weight_ratio(i)
                for i, a in enumerate(self.base.indicator_values())
            )
        return self._indicator_values


def make_density_functional(T: ExpectationOperator, y: RieszElement) -> DensityFunctional:
    return DensityFunctional(T, y)


def validate_matrix_functional(rows: Sequence[Sequence], T: ExpectationOperator) -> MatrixFunctional:
    """Check that ``rows`` maps into ``R(T)`` and is ``R(T)``-homogeneous.

    Both properties reduce by linearity to coordinate indicators ``chi_i`` and
    block indicators ``r``.  Raises :class:`RangeViolation` or
    :class:`HomogeneityViolation` with the failing pair as witness.
    """
    n = T.n
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionMismatch(f"matrix must be {n}x{n}")
    f = MatrixFunctional(T, rows)
    images = [f(RieszElement.indicator(n, i)) for i in range(n)]
    for i, img in enumerate(images):
        if not is_in_range(T, img):
            raise RangeViolation(
                f"image of coordinate indicator {i} is not block-constant",
                {"coordinate": i, "image": img},
            )
    for b in range(len(T.blocks)):
        r = T.block_mask(b)
        for i, img in enumerate(images):
            lhs = f(r * RieszElement.indicator(n, i))
            rhs = r * img
            if lhs != rhs:
                raise HomogeneityViolation(
                    f"f(r chi_{i}) != r f(chi_{i}) for block indicator {r}",
                    {"block": str(r), "coordinate": i, "lhs": lhs, "rhs": rhs},
                )
    return f


def exact_represent(f: StrongFunctional) -> RieszElement:
    """The unique ``y`` with ``f(g) = T(y g)`` for all ``g``.

    ``y_i = f(chi_i)_i * W_block(i) / w_i``, verified on every coordinate indicator.
    """
    T = f.T
    y = RieszElement._wrap(
        tuple(a * T.weight_ratio(i) for i, a in enumerate(f.indicator_values()))
    )
    for i in range(T.n):
        chi = RieszElement.indicator(T.n, i)
        if apply_t(T, y * chi) != f(chi):
            raise RieszError(f"representer fails on coordinate indicator {i}")
    return y


def functional_norm_squared(f: StrongFunctional) -> RieszElement:
    """``||f||^2``, which equals ``T(y^2)`` for the density ``y`` of ``f``."""
    return t_norm2_squared(f.T, exact_represent(f))


def functional_charge(f: StrongFunctional) -> ComponentCharge:
    """``p -> f(p)`` as a charge on all components of ``e`` with ``G = R(T)``."""
    T = f.T
    return ComponentCharge(PartitionAlgebra.singletons(T.n), T.partition, f.indicator_values())


def positive_component(f: StrongFunctional, nulls: str = "negative") -> ComponentMask:
    """``q+`` with ``f(p q+) >= 0`` and ``f(p (e - q+)) <= 0`` for every component ``p``."""
    return hahn_jordan(functional_charge(f), nulls=nulls)


class LevelSets(NamedTuple):
    positive: ComponentMask  # q+ of the unshifted functional
    levels: dict  # k -> h_k, nonzero levels only
    evaluations: int  # positive components computed


def _level_cap(f: StrongFunctional, n: int) -> int:
    T = f.T
    norm_sq = functional_norm_squared(f)
    # |y_i|^2 w_i <= W_b T(y^2)_b
    worst = max(T.weight_ratio(i) * norm_sq[i] for i in range(T.n))
    bound = math.isqrt(math.ceil(worst)) + 1
    return (1 << n) * (1 + bound)


def level_sets(f: StrongFunctional, n: int, search: str = "bisect") -> LevelSets:
    """Level sets ``h_k = q+_k (e - q+_(k+1))`` of ``f`` at depth ``n``.

    ``q+_k`` is the largest positive component of ``f - (k/2^n) T`` (null
    atoms on the positive side), so coordinate ``i`` of the density lands in
    level ``k`` exactly when ``k/2^n <= y_i < (k+1)/2^n``.  ``q+_k`` shrinks as
    ``k`` grows, so ``search="bisect"`` only evaluates ``k`` where it can change;
    ``search="linear"`` walks every ``k``.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"depth must be a positive integer, got {n!r}")
    scale = 1 << n
    cap = _level_cap(f, n)
    cache: dict[int, ComponentMask] = {}

    def q(k: int) -> ComponentMask:
        if k not in cache:
            if k > cap:
                raise RieszError(f"level search passed the cap {cap}")
            cache[k] = positive_component(f.shift(Fraction(k, scale)), nulls="positive")
        return cache[k]

    levels: dict[int, ComponentMask] = {}
    if search == "linear":
        k = 0
        while q(k):
            h = q(k) & ~q(k + 1)
            if h:
                levels[k] = h
            k += 1
    elif search == "bisect":
        points = [0]
        while q(points[-1]):
            if points[-1] == cap:
                raise RieszError(f"positive component still nonzero at the cap {cap}")
            points.append(min(max(1, 2 * points[-1]), cap))

        def fill(lo: int, hi: int):
            qlo, qhi = q(lo), q(hi)
            if qlo == qhi:
                return
            if hi == lo + 1:
                levels[lo] = qlo & ~qhi
                return
            mid = (lo + hi) // 2
            qmid = q(mid)
            if not (qhi <= qmid <= qlo):
                raise RieszError("shifted positive components are not nested")
            fill(lo, mid)
            fill(mid, hi)

        for lo, hi in zip(points, points[1:]):
            fill(lo, hi)
    else:
        raise ValueError(f"unknown search {search!r}")
    return LevelSets(q(0), dict(sorted(levels.items())), len(cache))


def _partial_sum(sets: LevelSets, n: int, dim: int) -> RieszElement:
    out = [_ZERO] * dim
    for k, h in sets.levels.items():
        for i in h:
            out[i] = Fraction(k, 1 << n)
    return RieszElement._wrap(tuple(out))


def dyadic_represent(f: StrongFunctional, n: int, search: str = "bisect") -> RieszElement:
    """Dyadic approximation ``s_n - sigma_n`` of the density of ``f``.

    ``s_n = sum_k (k/2^n) h_k`` over the level sets of ``f`` and ``sigma_n``
    likewise for ``-f``.  On each sign band the result undershoots the density
    in magnitude by less than ``2**-n``.
    """
    dim = f.n
    plus = level_sets(f, n, search)
    minus = level_sets(-f, n, search)
    s = _partial_sum(plus, n, dim)
    sigma = _partial_sum(minus, n, dim)
    if not band_mask(s) <= plus.positive or not band_mask(sigma) <= minus.positive:
        raise RieszError("partial sum escapes the band of its positive component")
    values = f.indicator_values()
    overlap = plus.positive & minus.positive
    if any(values[i] for i in overlap):
        raise RieszError("q+ and q- overlap outside the null coordinates of f")
    if ~plus.positive & ~minus.positive:
        raise RieszError("q+ and q- do not cover e")
    return s - sigma


def bijection_certificate(T: ExpectationOperator, y: RieszElement) -> list[Check]:
    """Checks that ``y -> T_y`` round-trips, preserves the norm and is ``R(T)``-linear."""
    n = T.n
    fy = make_density_functional(T, y)
    rep = exact_represent(fy)
    norm_f = functional_norm_squared(fy)
    norm_y = t_norm2_squared(T, y)
    indicators = [RieszElement.indicator(n, i) for i in range(n)]
    partners = [RieszElement.unit(n), y] + indicators
    multipliers = [T.block_mask(b).as_element() for b in range(len(T.blocks))] + [apply_t(T, y)]

    def additive():
        for z in partners:
            fz = make_density_functional(T, z)
            fyz = make_density_functional(T, y + z)
            for i, chi in enumerate(indicators):
                yield fyz(chi) == fy(chi) + fz(chi), {"z": z, "coordinate": i}

    def homogeneous():
        for r in multipliers:
            fry = make_density_functional(T, r * y)
            for i, chi in enumerate(indicators):
                yield fry(chi) == r * fy(chi), {"r": r, "coordinate": i}

    return [
        Check("round trip", "exactRepresent(T_y) = y", rep == y, {"y": y, "got": rep}),
        Check("norm equality", "||T_y||^2 = T(y^2)", norm_f == norm_y, {"functional": norm_f, "density": norm_y}),
        check("additivity", "T_(y+z) = T_y + T_z on coordinate indicators", additive()),
        check("R(T)-homogeneity", "T_(r y) = r T_y for r in R(T)", homogeneous()),
    ]
