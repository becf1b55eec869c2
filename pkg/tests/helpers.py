"""Strategies and brute-force reference computations shared by the tests.

The reference functions work per coordinate on plain lists of Fractions and
enumerate with itertools; they share no code with the library routines.
"""

from fractions import Fraction
from itertools import product

from hypothesis import strategies as st

from rieszlab import ComponentCharge, ComponentMask, ExpectationOperator, PartitionAlgebra, RieszElement

small = st.builds(Fraction, st.integers(-8, 8), st.sampled_from([1, 2, 3, 4]))
positive = st.builds(Fraction, st.integers(1, 8), st.sampled_from([1, 2, 3]))


def vectors(n):
    return st.lists(small, min_size=n, max_size=n).map(RieszElement)


@st.composite
def partitions(draw, items):
    items = list(items)
    labels = draw(st.lists(st.integers(0, len(items) - 1), min_size=len(items), max_size=len(items)))
    blocks = {}
    for i, lab in zip(items, labels):
        blocks.setdefault(lab, []).append(i)
    return sorted(blocks.values())


@st.composite
def operators(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    blocks = draw(partitions(range(n)))
    weights = draw(st.lists(positive, min_size=n, max_size=n))
    return ExpectationOperator(PartitionAlgebra(blocks, n), weights)


@st.composite
def charges(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    blocks = draw(partitions(range(n)))
    atoms = []
    for b in blocks:
        atoms += draw(partitions(b))
    values = draw(st.lists(small, min_size=len(atoms), max_size=len(atoms)))
    return ComponentCharge(PartitionAlgebra(atoms, n), PartitionAlgebra(blocks, n), values)


# -- reference computations ------------------------------------------------

def members(psi):
    """Every union of atoms as a coordinate bit list."""
    n = psi.n
    for pick in product((0, 1), repeat=len(psi.algebra)):
        bits = [0] * n
        for take, atom in zip(pick, psi.algebra.atoms):
            if take:
                for i in atom:
                    bits[i] = 1
        yield bits


def charge_value(psi, bits):
    """psi(p) coordinate by coordinate: sum over atoms inside p and inside i's block."""
    n = psi.n
    blocks = psi.g_partition.atoms
    block_of = {i: b for b, blk in enumerate(blocks) for i in blk}
    out = []
    for i in range(n):
        total = Fraction(0)
        for atom, v in zip(psi.algebra.atoms, psi.atom_values):
            if block_of[atom[0]] == block_of[i] and all(bits[k] for k in atom):
                total += v
        out.append(total)
    return out


def below(p, q):
    return all(a <= b for a, b in zip(p, q))


def meet(p, q):
    return [a & b for a, b in zip(p, q)]


def complement(p):
    return [1 - a for a in p]


def sup_over_subsets(psi, q):
    best = None
    for p in members(psi):
        if below(p, q):
            v = charge_value(psi, p)
            best = v if best is None else [max(a, b) for a, b in zip(best, v)]
    return best


def hahn_solutions(psi):
    all_members = list(members(psi))
    values = {tuple(p): charge_value(psi, p) for p in all_members}
    out = set()
    for q in all_members:
        if all(
            min(values[tuple(meet(p, q))]) >= 0 and max(values[tuple(meet(p, complement(q)))]) <= 0
            for p in all_members
        ):
            out.add("".join(map(str, q)))
    return out


def mask(bits):
    return ComponentMask.parse("".join(map(str, bits)))
