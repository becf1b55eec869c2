"""Invariant suites producing :class:`~rieszlab.checks.Check` records.

Each function takes already-built objects and returns a list of checks; the
command runners and ``selftest`` assemble them into certificates.  Exhaustive
checks consult :class:`~rieszlab.hahn_jordan.ChargeTable` instead of the
decomposition routines they verify.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .checks import Check, check
from .expectation import (
    ExpectationOperator,
    apply_t,
    holder_holds,
    is_in_range,
    t_norm1,
    t_norm2_squared,
)
from .hahn_jordan import (
    DEFAULT_ORACLE_BOUND,
    DEFAULT_THETA,
    ChargeTable,
    DecompositionTables,
    ComponentCharge,
    alpha,
    evaluate_charge,
    hahn_jordan,
    m_condition,
    maximal_m,
    negative_part_witness,
    positive_piece,
)
from .lattice import ComponentMask, PartitionAlgebra, RieszElement, band_mask, mask_op
from .partial_inverse import (
    canonical_inverse_exact,
    dyadic_bounds,
    spectral_inverse,
    spectral_inverse_signed,
    spectral_inverse_upper,
    spectral_masks,
)
from .riesz_frechet import (
    StrongFunctional,
    dyadic_represent,
    exact_represent,
    functional_charge,
    functional_norm_squared,
    level_sets,
    make_density_functional,
    positive_component,
)

_ZERO = Fraction(0)


def negated(psi: ComponentCharge) -> ComponentCharge:
    return ComponentCharge(psi.algebra, psi.g_partition, [-v for v in psi.atom_values])


# -- lattice --------------------------------------------------------------

def lattice_checks(a: RieszElement, b: RieszElement, algebra: PartitionAlgebra, sample: Sequence[int]) -> list[Check]:
    """Lattice identities for ``a, b`` and mask closure for the members listed in ``sample``."""
    sup, inf = a.sup(b), a.inf(b)
    members = [algebra.mask_of(s) for s in sample]

    def closure():
        for p in members:
            for q in members:
                for kind in ("meet", "join", "complement"):
                    r = mask_op(p, q, kind)
                    yield algebra.contains(r), {"p": p, "q": q, "kind": kind}
                yield (p * q).as_element() == p.as_element() * q.as_element(), {"p": p, "q": q}

    def band():
        m = band_mask(a)
        for i in range(len(a)):
            expect = b[i] if a[i] else _ZERO
            yield (m * b)[i] == expect, {"coordinate": i}

    return [
        Check("sup plus inf", "a v b + a ^ b = a + b", sup + inf == a + b, {"a": a, "b": b}),
        Check(
            "positive and negative parts",
            "a+ ^ a- = 0 and a+ - a- = a",
            a.pos.inf(a.neg).is_zero() and a.pos - a.neg == a and a.pos + a.neg == abs(a),
            {"a": a},
        ),
        check("band projection", "P_a b = p_a b coordinatewise", band()),
        check("mask closure", "meet/join/complement stay in B; pq = p ^ q", closure()),
    ]


# -- conditional expectation ---------------------------------------------

def expectation_checks(T: ExpectationOperator, f: RieszElement, g: RieszElement) -> list[Check]:
    r = apply_t(T, g)
    tf = apply_t(T, f)
    holder = holder_holds(T, f, g)
    checks = [
        Check("T e = e", "unit", apply_t(T, RieszElement.unit(T.n)) == RieszElement.unit(T.n), None),
        Check("projection", "T T f = T f", apply_t(T, tf) == tf, {"f": f}),
        Check("range", "T f in R(T)", is_in_range(T, tf), {"f": f}),
        Check("averaging", "T(r f) = r T f for r = T g", apply_t(T, r * f) == r * tf, {"f": f, "r": r}),
        Check(
            "norm homogeneity",
            "||r f||_T1 = |r| ||f||_T1, ||r f||_T2^2 = r^2 ||f||_T2^2",
            t_norm1(T, r * f) == abs(r) * t_norm1(T, f)
            and t_norm2_squared(T, r * f) == r * r * t_norm2_squared(T, f),
            {"f": f, "r": r},
        ),
        Check("holder", "(T|fg|)^2 <= T(f^2) T(g^2)", holder.holds, {"f": f, "g": g, "lhs": holder.lhs, "rhs": holder.rhs}),
    ]
    if not f.is_zero():
        checks.append(Check("strict positivity", "|f| != 0 implies T|f| != 0", not t_norm1(T, f).is_zero(), {"f": f}))
    return checks


# -- hahn-jordan ------------------------------------------------------------

def decomposition_checks(psi: ComponentCharge, theta=Fraction(2)) -> list[Check]:
    """Checks that need no enumeration: everything is read off ``alpha``."""
    q = hahn_jordan(psi)
    e = ComponentMask.full(psi.n)
    qhat = maximal_m(psi, e, theta)
    a = alpha(psi, e)
    v = evaluate_charge(psi, qhat)
    u = positive_piece(psi, e, theta)
    pu = evaluate_charge(psi, u)
    return [
        Check(
            "hahn-jordan",
            "q strongly positive and e-q strongly negative (alpha(e-q) = 0, alpha_-psi(q) = 0)",
            alpha(psi, ~q).is_zero() and alpha(negated(psi), q).is_zero(),
            {"q": q},
        ),
        Check(
            "sandwich at e",
            "alpha(e) <= theta psi(qhat) <= theta alpha(e)",
            a <= v * theta <= a * theta and m_condition(psi, e, qhat, theta),
            {"qhat": qhat, "alpha": a, "psi(qhat)": v},
        ),
        Check(
            "positive piece at e",
            "psi(u) <= alpha(e) <= theta psi(u), u <= P_psi(u) e",
            pu.is_positive() and pu <= a <= pu * theta and u <= band_mask(pu),
            {"u": u, "psi(u)": pu, "alpha": a},
        ),
    ]


def exhaustive_decomposition_checks(
    psi: ComponentCharge,
    thetas: Sequence = (Fraction(2),),
    bound: int = DEFAULT_ORACLE_BOUND,
    spot_checks: int = 8,
) -> list[Check]:
    """Every member of ``B`` (and ``B x B``) checked against the brute-force table.

    The library side is :class:`DecompositionTables`; ``spot_checks`` members
    are also recomputed through the scalar routines to tie the two together.
    """
    table = ChargeTable(psi, bound)
    full = table.size - 1
    vals = table.table
    q = psi.to_set(hahn_jordan(psi))
    solutions = table.hahn_solutions()
    touches = table.touches()
    sup = table.sup_below_all()
    strongly_negative = table.strongly_negative_all()
    step = max(1, table.size // max(1, spot_checks))
    spots = range(0, table.size, step)

    def row(values):
        return [Fraction(int(x), table.scale) for x in values]

    def witness_at(s, **extra):
        return {"q": psi.to_mask(int(s)), **extra}

    two_sided = table.nonneg[table.index & q] & table.nonpos[table.index & (full ^ q)]
    checks = [
        _array_check(
            "hahn-jordan two-sided", "for all p in B: psi(pq) >= 0, psi(p(e-q)) <= 0",
            two_sided, lambda s: {"p": psi.to_mask(int(s)), "q": psi.to_mask(q)},
        ),
        Check("oracle membership", "q in brute-force solution set", q in solutions,
              {"q": psi.to_mask(q), "solutions": sorted(str(psi.to_mask(x)) for x in solutions)}),
    ]

    for theta in thetas:
        theta = Fraction(theta)
        lib = DecompositionTables(psi, theta, bound)
        a, d = theta.numerator, theta.denominator
        # library alpha against the subset-max of the literal table
        if theta == thetas[0]:
            checks.append(_array_check(
                "alpha is supremum", "for all q in B: alpha(q) = max psi(p), p <= q",
                (lib.alpha * table.scale == sup * lib.scale).all(axis=1),
                lambda s: witness_at(s, alpha=row(lib.alpha[s]), exhaustive=row(sup[s])),
            ))
        h = lib.maximal
        alpha_ = sup
        v = vals[h]
        inside = (h & ~table.index) == 0
        lower = (alpha_ * d <= v * a).all(axis=1)
        upper = (v <= alpha_).all(axis=1)
        kills_excess = ~(touches[h] & (alpha_ * d > v * a)).any(axis=1)
        # any single extra atom of q leaves M(q); by monotonicity of the greedy seed
        # this rules out every larger member
        maximal = np.ones(table.size, dtype=bool)
        for j in range(table.m):
            cand = h | (1 << j)
            fresh = (((table.index >> j) & 1) == 1) & (((h >> j) & 1) == 0)
            in_m = ((vals[cand] * a >= alpha_ * d) | ~touches[cand]).all(axis=1)
            maximal &= ~(fresh & in_m)
        checks.append(_array_check(
            f"maximal element (theta={theta})",
            "for all q in B: qhat <= q, alpha <= theta psi(qhat) <= theta alpha, "
            "(alpha - theta psi(qhat))+ qhat = 0, no atom of q extends qhat inside M(q)",
            inside & lower & upper & kills_excess & maximal,
            lambda s: witness_at(s, qhat=psi.to_mask(int(h[s]))) | {"theta": theta},
        ))
        if theta == DEFAULT_THETA:
            u = lib.piece
            pu = vals[u]
            band_ok = ~(touches[u] & (pu == 0)).any(axis=1)
            checks.append(_array_check(
                "positive piece", "for all q in B: u <= q, psi(u) <= alpha(q) <= 2 psi(u), u <= P_psi(u) e",
                ((u & ~table.index) == 0) & (pu >= 0).all(axis=1) & (pu <= alpha_).all(axis=1)
                & (alpha_ <= 2 * pu).all(axis=1) & band_ok,
                lambda s: witness_at(s, u=psi.to_mask(int(u[s]))),
            ))
            has, w = lib.negative_part_witnesses()
            oracle_has = (vals < 0).any(axis=1)
            ok = (
                (has == oracle_has)
                & ((w & ~table.index) == 0)
                & (vals[w] <= np.minimum(vals, 0)).all(axis=1)
                & strongly_negative[w]
            ) | ~oracle_has
            checks.append(_array_check(
                "negative part witness",
                "for all q with psi(q)- != 0: v <= q, psi(v) <= -psi(q)-, every p <= v has psi(p) <= 0",
                ok, lambda s: witness_at(s, v=psi.to_mask(int(w[s]))),
            ))

    def spot():
        D = DecompositionTables(psi, DEFAULT_THETA, bound)
        has, w = D.negative_part_witnesses()
        for s in spots:
            qm = psi.to_mask(s)
            ok = (
                psi.to_set(maximal_m(psi, qm)) == D.maximal[s]
                and psi.to_set(positive_piece(psi, qm)) == D.piece[s]
                and (not has[s] or psi.to_set(negative_part_witness(psi, qm)) == w[s])
            )
            yield ok, {"q": qm}

    checks.append(check("batch agrees with scalar", "sampled q: tables equal maximal_m, positive_piece, witnesses", spot()))
    return checks


def _array_check(name, scope, ok: np.ndarray, witness) -> Check:
    bad = np.flatnonzero(~np.asarray(ok, dtype=bool))
    if bad.size == 0:
        return Check(name, scope, True, None)
    return Check(name, scope, False, witness(int(bad[0])))


# -- partial inverse --------------------------------------------------------

def inverse_checks(g: RieszElement, depths: Sequence[int]) -> list[Check]:
    h = canonical_inverse_exact(g)
    f = abs(g)
    band = band_mask(g)
    hf = canonical_inverse_exact(f)
    checks = [
        Check("partial inverse", "g h = P_|g| e", g * h == band.as_element(), {"g": g, "h": h}),
        Check("involution", "canonical inverse of h is g", canonical_inverse_exact(h) == g, {"g": g}),
        Check("support", "(I - P_|g|) h = 0", (~band * h).is_zero(), {"h": h}),
    ]
    if g.is_positive():
        checks.append(Check("positivity", "g >= 0 implies h >= 0", h.is_positive(), {"h": h}))

    positive = [c for c in f if c > 0]
    fmin = min(positive, default=None)
    hmax = max(hf, default=_ZERO)

    def ladder():
        for n in depths:
            lad = spectral_masks(f, n)
            masks = list(lad.levels.values())
            disjoint = all(not (p & q) for i, p in enumerate(masks) for q in masks[i + 1:])
            yield disjoint and lad.union() == band_mask(f), {"depth": n}

    def sandwich():
        for n in depths:
            lo, hi = dyadic_bounds(f, n)
            yield lo <= f <= hi and hi - lo <= band_mask(f).as_element() * Fraction(1, 1 << n), {"depth": n}

    def brackets():
        for n in depths:
            lo, up = spectral_inverse(f, n), spectral_inverse_upper(f, n)
            yield lo <= hf <= up, {"depth": n, "lower": lo, "upper": up}

    def convergence():
        prev = None
        for n in sorted(depths):
            err = (band_mask(f) * (spectral_inverse_signed(g, n) - h)).max_norm()
            if prev is not None and err > prev:
                yield False, {"depth": n, "error": err, "previous": prev}
            prev = err
            if fmin is not None and Fraction(1, 1 << n) < fmin:
                yield err <= Fraction(2, 1 << n) * hmax * hmax, {"depth": n, "error": err}

    checks += [
        check("ladder partition", "q_{n,j} disjoint, sum = p_f", ladder()),
        check("dyadic sandwich", "lower <= f <= upper, upper - lower <= 2^-n p_f", sandwich()),
        check("inverse brackets", "lower inverse <= h <= upper inverse", brackets()),
        check("inverse convergence", "error nonincreasing; <= 2^(1-n) max(h)^2 once 2^-n < min f", convergence()),
    ]
    return checks


# -- riesz-frechet ----------------------------------------------------------

def representation_checks(
    f: StrongFunctional,
    depths: Sequence[int],
    samples: Sequence[RieszElement] = (),
    bound: int = DEFAULT_ORACLE_BOUND,
) -> list[Check]:
    T = f.T
    n = T.n
    y = exact_represent(f)
    ty = make_density_functional(T, y)
    norm_sq = functional_norm_squared(f)
    C = T.ratio_constant()
    indicators = [RieszElement.indicator(n, i) for i in range(n)]

    def extensional():
        for i, chi in enumerate(indicators):
            yield ty(chi) == f(chi), {"coordinate": i}

    def strong_bound():
        for g in list(samples) + indicators + [RieszElement.unit(n), y]:
            v = f(g)
            yield v * v <= norm_sq * t_norm2_squared(T, g), {"g": g}

    def dyadic():
        prev = None
        for d in sorted(depths):
            approx = dyadic_represent(f, d)
            gap = y - approx
            # undershoot in magnitude on each sign band
            signed = RieszElement([c if yi >= 0 else -c for c, yi in zip(gap, y)])
            err = gap.max_norm()
            ok = err <= C * Fraction(1, 1 << d) and signed.is_positive()
            if prev is not None:
                ok = ok and signed <= prev
            prev = signed
            yield ok, {"depth": d, "error": err, "approx": approx}

    def levels():
        for d in depths:
            ls = level_sets(f, d)
            masks = list(ls.levels.values())
            union = ComponentMask(0, n)
            for m in masks:
                union = union | m
            disjoint = all(not (p & q) for i, p in enumerate(masks) for q in masks[i + 1:])
            yield disjoint and union == ls.positive, {"depth": d}

    checks = [
        check("density agrees", "T(y chi_i) = f(chi_i)", extensional()),
        Check("round trip", "exact representer of T_y is y", exact_represent(ty) == y, {"y": y}),
        Check("norm equality", "||T_y||^2 = T(y^2)", functional_norm_squared(ty) == t_norm2_squared(T, y),
              {"y": y}),
        check("strong bound", "f(g)^2 <= ||f||^2 T(g^2)", strong_bound()),
        check("dyadic representation", "||y_n - y|| <= C 2^-n, undershoot nonincreasing on sign bands", dyadic()),
        check("level sets", "h_k disjoint, sum = q+", levels()),
    ]
    if n <= bound:
        table = ChargeTable(functional_charge(f), bound)
        qp = positive_component(f).bits
        full = table.size - 1

        def sign():
            for p in range(table.size):
                yield bool(table.nonneg[p & qp] and table.nonpos[p & (full ^ qp)]), {"p": ComponentMask(p, n)}

        checks.append(check("positive component", "for all p: f(p q+) >= 0, f(p(e-q+)) <= 0", sign()))
    return checks
