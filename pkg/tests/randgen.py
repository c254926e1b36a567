"""Seeded random groups/representations/complexes for the test suite."""

import random
from fractions import Fraction

from orbichern.exactnum import Cyclotomic
from orbichern.linalg import Matrix, block
from orbichern.groups import FiniteGroup, subgroup_embedding
from orbichern.reps import Representation, direct_sum, induce, tensor
from orbichern.complexes import ChainMap, EquivariantComplex, mapping_cone


def corpus_groups():
    """The standard ambient groups: S3, S4, D4, Q8, C2 x C4."""
    return {
        "S3": FiniteGroup.symmetric(3),
        "S4": FiniteGroup.symmetric(4),
        "D4": FiniteGroup.dihedral(4),
        "Q8": FiniteGroup.quaternion(),
        "C2xC4": FiniteGroup.direct_product(
            FiniteGroup.cyclic(2), FiniteGroup.cyclic(4)
        ),
    }


def coset_action(group, sub_elems):
    """Left multiplication action on left cosets of a subgroup."""
    coset_of = {}
    reps = []
    for t in group.elements():
        if t in coset_of:
            continue
        reps.append(t)
        for m in sub_elems:
            coset_of[group.mul(t, m)] = len(reps) - 1
    return [
        [coset_of[group.mul(g, r)] for r in reps] for g in group.elements()
    ]


def cyclic_subgroup(group, x):
    m = group.order_of(x)
    return sorted({group.power(x, k) for k in range(m)})


def random_rep(rng, group, max_dim=6):
    """A random representation with honest cyclotomic entries."""
    for _ in range(8):
        kind = rng.randrange(4)
        if kind == 0:
            return Representation.trivial(group)
        x = rng.randrange(group.size)
        sub_elems = cyclic_subgroup(group, x)
        index = group.size // len(sub_elems)
        if kind == 1 and index <= max_dim:
            return Representation.permutation(
                group, coset_action(group, sub_elems), check=False
            )
        if kind >= 2 and index <= max_dim:
            m = group.order_of(x)
            sub, emb = subgroup_embedding(group, sub_elems, check=False)
            powers = {}
            y = group.identity
            for k in range(m):
                powers[y] = k
                y = group.mul(y, x)
            j = rng.randrange(m)
            values = [
                Cyclotomic.root_of_unity(m, (j * powers[emb.mapping[s]]) % m)
                for s in range(sub.size)
            ]
            w = Representation.one_dimensional(sub, values, check=False)
            return induce(emb, w)
    return Representation.trivial(group)


def random_rep_combo(rng, group, max_dim=6):
    a = random_rep(rng, group, max_dim)
    roll = rng.random()
    if roll < 0.25:
        b = random_rep(rng, group, max(1, max_dim // max(a.dim, 1)))
        if a.dim * b.dim <= max_dim:
            return tensor(a, b)
    elif roll < 0.5:
        b = random_rep(rng, group, max(1, max_dim - a.dim))
        if a.dim + b.dim <= max_dim:
            return direct_sum(a, b)
    return a


def reynolds(rng, a, b):
    """A random equivariant map a -> b by group averaging."""
    g = a.group
    t0 = Matrix.from_rows(
        [
            [Fraction(rng.randint(-2, 2)) for _ in range(a.dim)]
            for _ in range(b.dim)
        ],
        ncols=a.dim,
    )
    acc = Matrix.zero(b.dim, a.dim)
    for x in g.elements():
        acc = acc + b.mats[x] * t0 * a.mats[g.inv(x)]
    return acc.scale(Fraction(1, g.size))


def complex_direct_sum(c1, c2):
    lo = min(c1.min_degree, c2.min_degree)
    hi = max(c1.max_degree, c2.max_degree)
    pieces = [direct_sum(c1.piece(k), c2.piece(k)) for k in range(lo, hi + 1)]
    diffs = []
    for k in range(lo, hi):
        d1 = c1.differential(k)
        d2 = c2.differential(k)
        diffs.append(
            block(
                [[d1, None], [None, d2]],
                [d1.nrows, d2.nrows],
                [d1.ncols, d2.ncols],
            )
        )
    return EquivariantComplex(c1.group, lo, pieces, diffs, check=False)


def random_two_term(rng, group, max_dim=4, degree=0):
    a = random_rep(rng, group, max_dim)
    b = random_rep(rng, group, max_dim)
    d = reynolds(rng, a, b)
    return EquivariantComplex(group, degree, (a, b), (d,), check=False)


def random_complex(rng, group, max_dim=4, summands=2):
    """Random equivariant complex: sums of singles, two-terms, and cones."""
    parts = []
    for _ in range(summands):
        kind = rng.randrange(3)
        deg = rng.randint(-1, 1)
        if kind == 0:
            parts.append(
                EquivariantComplex.single(random_rep(rng, group, max_dim), deg)
            )
        elif kind == 1:
            parts.append(random_two_term(rng, group, max_dim, deg))
        else:
            two = random_two_term(rng, group, max_dim, deg)
            parts.append(mapping_cone(ChainMap.identity(two)))
    out = parts[0]
    for p in parts[1:]:
        out = complex_direct_sum(out, p)
    return out
