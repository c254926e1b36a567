"""Finite groupoids and the bibundle calculus between them.

Objects and arrows are integer indices; composition is a partial table
``comp[(a, b)] = a o b`` defined exactly when ``source(a) == target(b)``
(apply ``b`` first).  Morphisms between groupoids are generalized
morphisms: a finite set carrying commuting left/right actions whose
right quotient recovers the source objects.  On top of that sit graphs,
embedding classification via the pullback comparison, factorization
through the image, inertia groupoids, and the Morita decomposition of
inertia for translation groupoids.

Every constructed groupoid re-checks the axioms; the cubic check
families (associativity of composition and of the two bibundle actions,
and the commutation between them) run exhaustively up to
`_TRIPLES_FULL` instances and switch to a seeded random sample beyond
that, while all linear and quadratic checks stay exhaustive.  All
enumerations are index ordered, so outputs are deterministic.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter

from .groups import FiniteGroup, subgroup_embedding

MAX_ARROWS = 10000
_TRIPLES_FULL = 500000
_TRIPLES_SAMPLES = 20000


class FiniteGroupoid:
    """A finite groupoid as explicit source/target/composition tables."""

    __slots__ = (
        "num_objects",
        "num_arrows",
        "source",
        "target",
        "comp",
        "units",
        "inverses",
        "object_labels",
        "arrow_labels",
        "_by_source",
        "_by_target",
    )

    def __init__(
        self,
        num_objects,
        source,
        target,
        comp,
        units,
        inverses,
        object_labels=None,
        arrow_labels=None,
        check=True,
    ):
        self.num_objects = int(num_objects)
        self.source = tuple(source)
        self.target = tuple(target)
        self.num_arrows = len(self.source)
        if self.num_arrows > MAX_ARROWS:
            raise ValueError("at most %d arrows are supported" % MAX_ARROWS)
        self.comp = dict(comp)
        self.units = tuple(units)
        self.inverses = tuple(inverses)
        self.object_labels = tuple(object_labels) if object_labels is not None else None
        self.arrow_labels = tuple(arrow_labels) if arrow_labels is not None else None
        by_source = [[] for _ in range(self.num_objects)]
        by_target = [[] for _ in range(self.num_objects)]
        for a in range(self.num_arrows):
            by_source[self.source[a]].append(a)
            by_target[self.target[a]].append(a)
        self._by_source = tuple(tuple(v) for v in by_source)
        self._by_target = tuple(tuple(v) for v in by_target)
        if check:
            self.validate()

    # -- structure access ------------------------------------------------

    def mul(self, a, b):
        """Composite ``a o b`` (first ``b``, then ``a``)."""
        try:
            return self.comp[(a, b)]
        except KeyError:
            raise ValueError("arrows %d and %d are not composable" % (a, b))

    def inv(self, a):
        return self.inverses[a]

    def unit(self, x):
        return self.units[x]

    def arrows_from(self, x):
        return self._by_source[x]

    def arrows_into(self, x):
        return self._by_target[x]

    def arrows_between(self, x, y):
        return tuple(a for a in self._by_source[x] if self.target[a] == y)

    def loop_arrows(self):
        """Arrows with equal source and target, in index order."""
        return tuple(a for a in range(self.num_arrows) if self.source[a] == self.target[a])

    def is_loop(self, a):
        return self.source[a] == self.target[a]

    # -- axioms ----------------------------------------------------------

    def validate(self):
        n, m = self.num_objects, self.num_arrows
        if len(self.target) != m or len(self.inverses) != m or len(self.units) != n:
            raise ValueError("table sizes are inconsistent")
        for a in range(m):
            if not (0 <= self.source[a] < n and 0 <= self.target[a] < n):
                raise ValueError("arrow %d has an endpoint out of range" % a)
        pairs = []
        for b in range(m):
            for a in self._by_source[self.target[b]]:
                pairs.append((a, b))
        if len(self.comp) != len(pairs):
            raise ValueError("composition is not defined exactly on composable pairs")
        for a, b in pairs:
            c = self.comp.get((a, b))
            if c is None:
                raise ValueError("missing composite for composable pair (%d, %d)" % (a, b))
            if self.source[c] != self.source[b] or self.target[c] != self.target[a]:
                raise ValueError("composite (%d, %d) has wrong endpoints" % (a, b))
        for x in range(n):
            u = self.units[x]
            if self.source[u] != x or self.target[u] != x:
                raise ValueError("unit of object %d is not a loop there" % x)
        for a in range(m):
            if self.comp[(a, self.units[self.source[a]])] != a:
                raise ValueError("right unit law fails at arrow %d" % a)
            if self.comp[(self.units[self.target[a]], a)] != a:
                raise ValueError("left unit law fails at arrow %d" % a)
            ai = self.inverses[a]
            if self.source[ai] != self.target[a] or self.target[ai] != self.source[a]:
                raise ValueError("inverse of arrow %d has wrong endpoints" % a)
            if self.comp[(a, ai)] != self.units[self.target[a]]:
                raise ValueError("arrow %d composed with its inverse is not a unit" % a)
            if self.comp[(ai, a)] != self.units[self.source[a]]:
                raise ValueError("inverse of arrow %d is only one-sided" % a)
        fan_in = [len(self._by_source[self.target[b]]) for b in range(m)]
        fan_by_object = [0] * n
        for b in range(m):
            fan_by_object[self.source[b]] += fan_in[b]
        total_triples = sum(fan_by_object[self.target[c]] for c in range(m))
        if total_triples <= _TRIPLES_FULL:
            triples = (
                (a, b, c)
                for c in range(m)
                for b in self._by_source[self.target[c]]
                for a in self._by_source[self.target[b]]
            )
        else:
            rng = random.Random(0x5EED ^ m)
            pool = []
            for _ in range(_TRIPLES_SAMPLES):
                c = rng.randrange(m)
                bs = self._by_source[self.target[c]]
                b = bs[rng.randrange(len(bs))]
                as_ = self._by_source[self.target[b]]
                a = as_[rng.randrange(len(as_))]
                pool.append((a, b, c))
            triples = pool
        for a, b, c in triples:
            if self.comp[(self.comp[(a, b)], c)] != self.comp[(a, self.comp[(b, c)])]:
                raise ValueError("composition is not associative")
        return True

    # -- constructors ----------------------------------------------------

    @staticmethod
    def from_group(group):
        """One object whose arrows are the group elements."""
        n = group.size
        comp = {(a, b): group.mul(a, b) for a in range(n) for b in range(n)}
        return FiniteGroupoid(
            1,
            [0] * n,
            [0] * n,
            comp,
            [group.identity],
            group.inverses,
            arrow_labels=group.names if group.names is not None else tuple(range(n)),
        )

    @staticmethod
    def translation(group, num_points, images):
        """Action groupoid of ``group`` on ``{0, .., num_points - 1}``.

        ``images[g][x]`` is ``g . x``; the arrow ``g * num_points + x``
        runs from ``x`` to ``g . x``.
        """
        p = int(num_points)
        images = tuple(tuple(row) for row in images)
        if len(images) != group.size or any(len(row) != p for row in images):
            raise ValueError("need one image row of length %d per group element" % p)
        for row in images:
            if sorted(row) != list(range(p)):
                raise ValueError("not an action: some element does not permute the points")
        if images[group.identity] != tuple(range(p)):
            raise ValueError("not an action: identity moves a point")
        for g in range(group.size):
            for h in range(group.size):
                gh = group.mul(g, h)
                for x in range(p):
                    if images[g][images[h][x]] != images[gh][x]:
                        raise ValueError("not an action: composition fails")
        m = group.size * p
        source = [0] * m
        target = [0] * m
        labels = [None] * m
        for g in range(group.size):
            for x in range(p):
                a = g * p + x
                source[a] = x
                target[a] = images[g][x]
                labels[a] = (g, x)
        comp = {}
        for g2 in range(group.size):
            for g1 in range(group.size):
                g21 = group.mul(g2, g1)
                for x in range(p):
                    comp[(g2 * p + images[g1][x], g1 * p + x)] = g21 * p + x
        units = [group.identity * p + x for x in range(p)]
        inverses = [0] * m
        for g in range(group.size):
            gi = group.inverses[g]
            for x in range(p):
                inverses[g * p + x] = gi * p + images[g][x]
        return FiniteGroupoid(
            p, source, target, comp, units, inverses,
            object_labels=tuple(range(p)), arrow_labels=labels,
        )

    @staticmethod
    def product(a, b):
        """Product groupoid; pairs are flattened row-major."""
        no = a.num_objects * b.num_objects
        source = []
        target = []
        for p in range(a.num_arrows):
            for q in range(b.num_arrows):
                source.append(a.source[p] * b.num_objects + b.source[q])
                target.append(a.target[p] * b.num_objects + b.target[q])
        comp = {}
        for (p1, p2), c1 in a.comp.items():
            for (q1, q2), c2 in b.comp.items():
                comp[(p1 * b.num_arrows + q1, p2 * b.num_arrows + q2)] = (
                    c1 * b.num_arrows + c2
                )
        units = [
            a.units[x] * b.num_arrows + b.units[y]
            for x in range(a.num_objects)
            for y in range(b.num_objects)
        ]
        inverses = [
            a.inverses[p] * b.num_arrows + b.inverses[q]
            for p in range(a.num_arrows)
            for q in range(b.num_arrows)
        ]
        return FiniteGroupoid(no, source, target, comp, units, inverses)

    def full_subgroupoid(self, objects):
        """Restrict to ``objects``; returns the piece and its inclusion."""
        objs = sorted(set(objects))
        if any(not 0 <= x < self.num_objects for x in objs):
            raise ValueError("object out of range")
        obj_set = set(objs)
        obj_index = {x: i for i, x in enumerate(objs)}
        arrs = [
            a
            for a in range(self.num_arrows)
            if self.source[a] in obj_set and self.target[a] in obj_set
        ]
        arr_index = {a: i for i, a in enumerate(arrs)}
        source = [obj_index[self.source[a]] for a in arrs]
        target = [obj_index[self.target[a]] for a in arrs]
        comp = {}
        for i, a in enumerate(arrs):
            for b in arrs:
                if self.source[a] == self.target[b]:
                    comp[(i, arr_index[b])] = arr_index[self.comp[(a, b)]]
        units = [arr_index[self.units[x]] for x in objs]
        inverses = [arr_index[self.inverses[a]] for a in arrs]
        labels = None
        if self.arrow_labels is not None:
            labels = [self.arrow_labels[a] for a in arrs]
        sub = FiniteGroupoid(
            len(objs), source, target, comp, units, inverses,
            object_labels=objs, arrow_labels=labels,
        )
        incl = StrictFunctor(sub, self, objs, arrs)
        return sub, incl


class StrictFunctor:
    """An object map and an arrow map preserving all structure."""

    __slots__ = ("src", "dst", "obj_map", "arr_map")

    def __init__(self, src, dst, obj_map, arr_map, check=True):
        self.src = src
        self.dst = dst
        self.obj_map = tuple(obj_map)
        self.arr_map = tuple(arr_map)
        if check:
            self.validate()

    def validate(self):
        g, h = self.src, self.dst
        if len(self.obj_map) != g.num_objects or len(self.arr_map) != g.num_arrows:
            raise ValueError("functor tables have the wrong size")
        for a in range(g.num_arrows):
            fa = self.arr_map[a]
            if self.obj_map[g.source[a]] != h.source[fa]:
                raise ValueError("functor breaks sources at arrow %d" % a)
            if self.obj_map[g.target[a]] != h.target[fa]:
                raise ValueError("functor breaks targets at arrow %d" % a)
        for x in range(g.num_objects):
            if self.arr_map[g.units[x]] != h.units[self.obj_map[x]]:
                raise ValueError("functor breaks the unit at object %d" % x)
        for (a, b), c in g.comp.items():
            if h.comp[(self.arr_map[a], self.arr_map[b])] != self.arr_map[c]:
                raise ValueError("functor breaks composition at (%d, %d)" % (a, b))
        return True

    @staticmethod
    def identity(groupoid):
        return StrictFunctor(
            groupoid,
            groupoid,
            range(groupoid.num_objects),
            range(groupoid.num_arrows),
            check=False,
        )

    def then(self, other):
        """Composite functor ``other o self``."""
        if other.src is not self.dst:
            raise ValueError("functors are not composable")
        return StrictFunctor(
            self.src,
            other.dst,
            [other.obj_map[x] for x in self.obj_map],
            [other.arr_map[a] for a in self.arr_map],
            check=False,
        )


class GeneralizedMorphism:
    """A bibundle from ``src`` to ``dst``.

    The carrier is ``{0, .., size - 1}`` with anchor maps ``rho`` (to
    src objects) and ``sigma`` (to dst objects).  ``left[(g, z)]`` is
    defined exactly when ``src.source[g] == rho[z]`` and moves rho to
    ``src.target[g]``; ``right[(z, h)]`` is defined exactly when
    ``dst.target[h] == sigma[z]`` and moves sigma to ``dst.source[h]``.
    The right action is free and ``rho`` identifies right orbits with
    src objects.
    """

    __slots__ = ("src", "dst", "size", "rho", "sigma", "left", "right", "labels")

    def __init__(self, src, dst, rho, sigma, left, right, labels=None, check=True):
        self.src = src
        self.dst = dst
        self.rho = tuple(rho)
        self.sigma = tuple(sigma)
        self.size = len(self.rho)
        self.left = dict(left)
        self.right = dict(right)
        self.labels = tuple(labels) if labels is not None else None
        if check:
            self.validate()

    # -- invariants -------------------------------------------------------

    def validate(self):
        g, h = self.src, self.dst
        if len(self.sigma) != self.size:
            raise ValueError("anchor maps have different lengths")
        for z in range(self.size):
            if not 0 <= self.rho[z] < g.num_objects:
                raise ValueError("rho out of range at %d" % z)
            if not 0 <= self.sigma[z] < h.num_objects:
                raise ValueError("sigma out of range at %d" % z)
        count = 0
        for z in range(self.size):
            for a in g.arrows_from(self.rho[z]):
                z2 = self.left.get((a, z))
                if z2 is None:
                    raise ValueError("left action undefined for arrow %d at %d" % (a, z))
                if self.rho[z2] != g.target[a] or self.sigma[z2] != self.sigma[z]:
                    raise ValueError("left action breaks anchors at (%d, %d)" % (a, z))
                count += 1
        if count != len(self.left):
            raise ValueError("left action defined on non-composable pairs")
        count = 0
        for z in range(self.size):
            for b in h.arrows_into(self.sigma[z]):
                z2 = self.right.get((z, b))
                if z2 is None:
                    raise ValueError("right action undefined for arrow %d at %d" % (b, z))
                if self.sigma[z2] != h.source[b] or self.rho[z2] != self.rho[z]:
                    raise ValueError("right action breaks anchors at (%d, %d)" % (z, b))
                count += 1
        if count != len(self.right):
            raise ValueError("right action defined on non-composable pairs")
        for z in range(self.size):
            if self.left[(g.units[self.rho[z]], z)] != z:
                raise ValueError("left unit moves carrier point %d" % z)
            if self.right[(z, h.units[self.sigma[z]])] != z:
                raise ValueError("right unit moves carrier point %d" % z)
        rho_fibers = [[] for _ in range(g.num_objects)]
        sigma_fibers = [[] for _ in range(h.num_objects)]
        for z in range(self.size):
            rho_fibers[self.rho[z]].append(z)
            sigma_fibers[self.sigma[z]].append(z)

        total = sum(len(rho_fibers[g.source[a1]]) for _, a1 in g.comp)
        if total <= _TRIPLES_FULL:
            for (a2, a1), c in g.comp.items():
                for z in rho_fibers[g.source[a1]]:
                    if self.left[(a2, self.left[(a1, z)])] != self.left[(c, z)]:
                        raise ValueError("left action is not associative")
        else:
            rng = random.Random(0xB1B ^ self.size)
            keys = list(g.comp)
            for _ in range(_TRIPLES_SAMPLES):
                a2, a1 = keys[rng.randrange(len(keys))]
                fiber = rho_fibers[g.source[a1]]
                if not fiber:
                    continue
                z = fiber[rng.randrange(len(fiber))]
                if self.left[(a2, self.left[(a1, z)])] != self.left[(g.comp[(a2, a1)], z)]:
                    raise ValueError("left action is not associative")
        total = sum(len(sigma_fibers[h.target[b1]]) for b1, _ in h.comp)
        if total <= _TRIPLES_FULL:
            for (b1, b2), c in h.comp.items():
                for z in sigma_fibers[h.target[b1]]:
                    if self.right[(self.right[(z, b1)], b2)] != self.right[(z, c)]:
                        raise ValueError("right action is not associative")
        else:
            rng = random.Random(0xB1B2 ^ self.size)
            keys = list(h.comp)
            for _ in range(_TRIPLES_SAMPLES):
                b1, b2 = keys[rng.randrange(len(keys))]
                fiber = sigma_fibers[h.target[b1]]
                if not fiber:
                    continue
                z = fiber[rng.randrange(len(fiber))]
                if self.right[(self.right[(z, b1)], b2)] != self.right[(z, h.comp[(b1, b2)])]:
                    raise ValueError("right action is not associative")
        total = sum(len(h.arrows_into(self.sigma[z])) for _, z in self.left)
        if total <= _TRIPLES_FULL:
            for (a, z), z2 in self.left.items():
                for b in h.arrows_into(self.sigma[z]):
                    if self.right[(z2, b)] != self.left[(a, self.right[(z, b)])]:
                        raise ValueError("the two actions do not commute")
        else:
            rng = random.Random(0xC0A ^ self.size)
            keys = list(self.left)
            for _ in range(_TRIPLES_SAMPLES):
                a, z = keys[rng.randrange(len(keys))]
                into = h.arrows_into(self.sigma[z])
                if not into:
                    continue
                b = into[rng.randrange(len(into))]
                if self.right[(self.left[(a, z)], b)] != self.left[(a, self.right[(z, b)])]:
                    raise ValueError("the two actions do not commute")
        for (z, b), z2 in self.right.items():
            if z2 == z and b != h.units[self.sigma[z]]:
                raise ValueError("right action is not free at %d" % z)
        orbit = self._right_orbits()
        seen = {}
        for z in range(self.size):
            x = self.rho[z]
            if x in seen:
                if seen[x] != orbit[z]:
                    raise ValueError("rho separates a right orbit")
            else:
                seen[x] = orbit[z]
        if len(seen) != g.num_objects:
            raise ValueError("rho misses an object of the source")
        if len(set(seen.values())) != len(set(orbit)):
            raise ValueError("two right orbits share a rho value")
        return True

    def _right_orbits(self):
        orbit = [-1] * self.size
        nxt = 0
        for z0 in range(self.size):
            if orbit[z0] != -1:
                continue
            orbit[z0] = nxt
            stack = [z0]
            while stack:
                z = stack.pop()
                for b in self.dst.arrows_into(self.sigma[z]):
                    w = self.right[(z, b)]
                    if orbit[w] == -1:
                        orbit[w] = nxt
                        stack.append(w)
            nxt += 1
        return orbit

    def _left_orbits(self):
        orbit = [-1] * self.size
        nxt = 0
        for z0 in range(self.size):
            if orbit[z0] != -1:
                continue
            orbit[z0] = nxt
            stack = [z0]
            while stack:
                z = stack.pop()
                for a in self.src.arrows_from(self.rho[z]):
                    w = self.left[(a, z)]
                    if orbit[w] == -1:
                        orbit[w] = nxt
                        stack.append(w)
            nxt += 1
        return orbit

    def is_morita(self):
        """True when the bibundle is principal on both sides."""
        self.validate()
        for (a, z), z2 in self.left.items():
            if z2 == z and a != self.src.units[self.rho[z]]:
                return False
        if len(set(self.sigma)) != self.dst.num_objects:
            return False
        orbit = self._left_orbits()
        seen = {}
        for z in range(self.size):
            y = self.sigma[z]
            if y in seen:
                if seen[y] != orbit[z]:
                    return False
            else:
                seen[y] = orbit[z]
        return len(set(seen.values())) == len(set(orbit))

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_functor(functor):
        """Comma bibundle of a strict functor."""
        g, h = functor.src, functor.dst
        carrier = []
        for x in range(g.num_objects):
            for b in h.arrows_into(functor.obj_map[x]):
                carrier.append((x, b))
        index = {zw: i for i, zw in enumerate(carrier)}
        rho = [x for x, _ in carrier]
        sigma = [h.source[b] for _, b in carrier]
        left = {}
        right = {}
        for i, (x, b) in enumerate(carrier):
            for a in g.arrows_from(x):
                left[(a, i)] = index[(g.target[a], h.comp[(functor.arr_map[a], b)])]
            for b2 in h.arrows_into(h.source[b]):
                right[(i, b2)] = index[(x, h.comp[(b, b2)])]
        return GeneralizedMorphism(g, h, rho, sigma, left, right, labels=carrier)

    @staticmethod
    def identity(groupoid):
        return GeneralizedMorphism.from_functor(StrictFunctor.identity(groupoid))

    # -- calculus -----------------------------------------------------------

    def compose(self, other):
        """Composite bibundle ``self`` followed by ``other``."""
        if other.src is not self.dst:
            raise ValueError("morphisms are not composable")
        h = self.dst
        pairs = [
            (z, w)
            for z in range(self.size)
            for w in range(other.size)
            if self.sigma[z] == other.rho[w]
        ]
        index = {zw: i for i, zw in enumerate(pairs)}
        orbit = [-1] * len(pairs)
        classes = []
        for i0, (z0, w0) in enumerate(pairs):
            if orbit[i0] != -1:
                continue
            members = [i0]
            orbit[i0] = -2
            stack = [(z0, w0)]
            while stack:
                z, w = stack.pop()
                for b in h.arrows_into(self.sigma[z]):
                    z2 = self.right[(z, b)]
                    w2 = other.left[(h.inverses[b], w)]
                    j = index[(z2, w2)]
                    if orbit[j] == -1:
                        orbit[j] = -2
                        members.append(j)
                        stack.append((z2, w2))
            classes.append(sorted(members))
        classes.sort(key=lambda ms: ms[0])
        for ci, ms in enumerate(classes):
            for j in ms:
                orbit[j] = ci
        rho = [0] * len(classes)
        sigma = [0] * len(classes)
        reps = [pairs[ms[0]] for ms in classes]
        for ci, (z, w) in enumerate(reps):
            rho[ci] = self.rho[z]
            sigma[ci] = other.sigma[w]
        left = {}
        right = {}
        for ci, ms in enumerate(classes):
            z, w = pairs[ms[0]]
            for a in self.src.arrows_from(self.rho[z]):
                left[(a, ci)] = orbit[index[(self.left[(a, z)], w)]]
            for b in other.dst.arrows_into(other.sigma[w]):
                right[(ci, b)] = orbit[index[(z, other.right[(w, b)])]]
        return GeneralizedMorphism(
            self.src, other.dst, rho, sigma, left, right, labels=reps
        )

    def graph(self):
        """Graph bibundle into the product of source and target."""
        g, h = self.src, self.dst
        prod = FiniteGroupoid.product(g, h)
        carrier = []
        for a in range(g.num_arrows):
            for z in range(self.size):
                if self.rho[z] == g.source[a]:
                    carrier.append((a, z))
        index = {az: i for i, az in enumerate(carrier)}
        rho = [g.target[a] for a, _ in carrier]
        sigma = [g.source[a] * h.num_objects + self.sigma[z] for a, z in carrier]
        left = {}
        right = {}
        for i, (a, z) in enumerate(carrier):
            for a2 in g.arrows_from(g.target[a]):
                left[(a2, i)] = index[(g.comp[(a2, a)], z)]
            for a2 in g.arrows_into(g.source[a]):
                for b in h.arrows_into(self.sigma[z]):
                    pair_arrow = a2 * h.num_arrows + b
                    z2 = self.right[(self.left[(g.inverses[a2], z)], b)]
                    right[(i, pair_arrow)] = index[(g.comp[(a, a2)], z2)]
        return GeneralizedMorphism(g, prod, rho, sigma, left, right, labels=carrier)


class PullbackComparison:
    """The two pulled-back groupoids over a carrier and the map between them.

    ``gt`` and ``ht`` are the arrow lists ``(z1, arrow, z2)`` (from
    ``z2`` to ``z1``) of the source and target groupoids pulled back
    along the anchors; ``phi`` sends a ``gt`` triple to the unique
    ``ht`` triple with ``arrow . z2 == z1 . image``.

    The classification flags are computed in aggregate at construction:
    ``phi`` preserves the carrier pair ``(z1, z2)``, and within a pair
    its arrow component is determined by ``arrow . z2`` (the right
    action is a dictionary, so distinct comparison arrows at ``z1``
    land on distinct carrier points).  Injectivity therefore reduces to
    injectivity of ``arrow |-> arrow . z2`` per carrier point, and the
    triple counts and the saturation condition depend only on
    anchor-fibre multiplicities.  The triple lists grow quadratically
    in the carrier, so ``gt``, ``ht`` and ``phi`` are materialized only
    on first access.
    """

    __slots__ = (
        "morphism",
        "_gt_count",
        "_ht_count",
        "_injective",
        "_saturated",
        "_gt",
        "_ht",
        "_phi",
    )

    def __init__(self, morphism):
        self.morphism = morphism
        f = morphism
        g, h = f.src, f.dst
        self._gt = None
        self._ht = None
        self._phi = None
        anchors = list(Counter(zip(f.rho, f.sigma)).items())
        g_between = Counter(zip(g.source, g.target))
        h_between = Counter(zip(h.source, h.target))
        gt_count = 0
        ht_count = 0
        saturated = True
        for (x1, y1), c1 in anchors:
            for (x2, y2), c2 in anchors:
                ga = g_between.get((x2, x1), 0)
                hb = h_between.get((y2, y1), 0)
                gt_count += c1 * c2 * ga
                ht_count += c1 * c2 * hb
                if hb and not ga:
                    saturated = False
        self._gt_count = gt_count
        self._ht_count = ht_count
        self._saturated = saturated

        rho_fibers = [[] for _ in range(g.num_objects)]
        for z, x in enumerate(f.rho):
            rho_fibers[x].append(z)
        orbit = f._right_orbits()
        fiber_orbits = [{orbit[z] for z in fiber} for fiber in rho_fibers]
        injective = True
        connected = True
        for z2 in range(f.size):
            images = {}
            counts = {}
            for a in g.arrows_from(f.rho[z2]):
                y = g.target[a]
                if not rho_fibers[y]:
                    continue
                w = f.left[(a, z2)]
                orbits_at = fiber_orbits[y]
                if len(orbits_at) != 1 or orbit[w] not in orbits_at:
                    connected = False
                    break
                images.setdefault(y, set()).add(w)
                counts[y] = counts.get(y, 0) + 1
            if not connected:
                break
            if injective and any(len(images[y]) != counts[y] for y in counts):
                injective = False
        self._injective = injective
        if not connected:
            # some comparison arrow is missing; the exhaustive pass
            # raises the error naming the offending triple
            self._materialize()

    def _materialize(self):
        f = self.morphism
        g, h = f.src, f.dst
        gt = [
            (z1, a, z2)
            for z1 in range(f.size)
            for a in g.arrows_into(f.rho[z1])
            for z2 in range(f.size)
            if f.rho[z2] == g.source[a]
        ]
        ht = [
            (z1, b, z2)
            for z1 in range(f.size)
            for b in h.arrows_into(f.sigma[z1])
            for z2 in range(f.size)
            if f.sigma[z2] == h.source[b]
        ]
        phi = {}
        for z1, a, z2 in gt:
            w = f.left[(a, z2)]
            image = None
            for b in h.arrows_between(f.sigma[w], f.sigma[z1]):
                if f.right[(z1, b)] == w:
                    image = b
                    break
            if image is None:
                raise ValueError("no comparison arrow for (%d, %d, %d)" % (z1, a, z2))
            phi[(z1, a, z2)] = (z1, image, z2)
        self._gt = gt
        self._ht = ht
        self._phi = phi

    @property
    def gt(self):
        if self._gt is None:
            self._materialize()
        return self._gt

    @property
    def ht(self):
        if self._ht is None:
            self._materialize()
        return self._ht

    @property
    def phi(self):
        if self._phi is None:
            self._materialize()
        return self._phi

    def is_injective(self):
        return self._injective

    def is_saturated(self):
        return self._saturated

    def is_bijective(self):
        return self._injective and self._gt_count == self._ht_count


class EmbeddingFlags:
    __slots__ = ("embedding", "iso_spatial", "stabilizer_preserving", "comparison")

    def __init__(self, embedding, iso_spatial, stabilizer_preserving, comparison):
        self.embedding = embedding
        self.iso_spatial = iso_spatial
        self.stabilizer_preserving = stabilizer_preserving
        self.comparison = comparison

    def __repr__(self):
        return "EmbeddingFlags(embedding=%r, iso_spatial=%r, stabilizer_preserving=%r)" % (
            self.embedding,
            self.iso_spatial,
            self.stabilizer_preserving,
        )


def classify_embedding(morphism):
    """Decide embedding / iso-spatial / stabilizer-preserving for a bibundle."""
    comparison = PullbackComparison(morphism)
    embedding = comparison.is_injective() and comparison.is_saturated()
    iso_spatial = embedding and len(set(morphism.sigma)) == morphism.dst.num_objects
    stabilizer_preserving = embedding and comparison.is_bijective()
    return EmbeddingFlags(embedding, iso_spatial, stabilizer_preserving, comparison)


def factorize(morphism):
    """Split an embedding through the full subgroupoid on its image.

    Returns ``(first, second)`` with ``first`` iso-spatial onto the
    image piece, ``second`` the stabilizer-preserving comma bibundle of
    the inclusion, and ``second . first`` isomorphic to the input.
    """
    flags = classify_embedding(morphism)
    if not flags.embedding:
        raise ValueError("only embeddings factor through their image")
    h = morphism.dst
    image = sorted(set(morphism.sigma))
    piece, incl = h.full_subgroupoid(image)
    obj_index = {x: i for i, x in enumerate(incl.obj_map)}
    arr_index = {a: i for i, a in enumerate(incl.arr_map)}
    sigma = [obj_index[y] for y in morphism.sigma]
    right = {}
    for (z, b), z2 in morphism.right.items():
        if b in arr_index:
            right[(z, arr_index[b])] = z2
    first = GeneralizedMorphism(
        morphism.src, piece, morphism.rho, sigma, morphism.left, right,
        labels=morphism.labels,
    )
    second = GeneralizedMorphism.from_functor(incl)
    return first, second


def find_isomorphism(a, b):
    """A bijection of carriers respecting anchors and both actions, or None."""
    if a.src is not b.src or a.dst is not b.dst or a.size != b.size:
        return None
    moves = [[] for _ in range(a.size)]
    for (g, z), z2 in a.left.items():
        moves[z].append((0, g, z2))
    for (z, h), z2 in a.right.items():
        moves[z].append((1, h, z2))
    buckets = {}
    for w in range(b.size):
        buckets.setdefault((b.rho[w], b.sigma[w]), []).append(w)
    mapping = [-1] * a.size
    used = [False] * b.size

    def assign(z0, w0):
        made = []
        stack = [(z0, w0)]
        while stack:
            z, w = stack.pop()
            if mapping[z] == w:
                continue
            if mapping[z] != -1 or used[w] or a.rho[z] != b.rho[w] or a.sigma[z] != b.sigma[w]:
                for zz in made:
                    used[mapping[zz]] = False
                    mapping[zz] = -1
                return None
            mapping[z] = w
            used[w] = True
            made.append(z)
            for kind, arrow, z2 in moves[z]:
                w2 = b.left.get((arrow, w)) if kind == 0 else b.right.get((w, arrow))
                if w2 is None:
                    for zz in made:
                        used[mapping[zz]] = False
                        mapping[zz] = -1
                    return None
                stack.append((z2, w2))
        return made

    def solve(start):
        z0 = start
        while z0 < a.size and mapping[z0] != -1:
            z0 += 1
        if z0 == a.size:
            return True
        for w0 in buckets.get((a.rho[z0], a.sigma[z0]), ()):
            if used[w0]:
                continue
            made = assign(z0, w0)
            if made is None:
                continue
            if solve(z0 + 1):
                return True
            for zz in made:
                used[mapping[zz]] = False
                mapping[zz] = -1
        return False

    return list(mapping) if solve(0) else None


class InertiaGroupoid:
    """Loops of a groupoid with conjugation arrows.

    Objects index ``loops``; the arrow ``(i, j, gamma)`` conjugates
    ``loops[i]`` into ``loops[j]`` by the base arrow ``gamma``.  ``beta``
    is the forgetful functor back to the base and ``tau[i]`` is the
    canonical automorphism of loop ``i`` given by the loop itself.
    """

    __slots__ = ("base", "groupoid", "loops", "arrow_data", "beta", "tau", "_arrow_index")

    def __init__(self, base):
        self.base = base
        loops = base.loop_arrows()
        self.loops = loops
        loop_index = {a: i for i, a in enumerate(loops)}
        data = []
        for i, loop in enumerate(loops):
            x = base.source[loop]
            for gamma in base.arrows_from(x):
                conj = base.comp[(base.comp[(gamma, loop)], base.inverses[gamma])]
                data.append((i, loop_index[conj], gamma))
        self.arrow_data = tuple(data)
        index = {(i, gamma): k for k, (i, _, gamma) in enumerate(data)}
        self._arrow_index = index
        source = [i for i, _, _ in data]
        target = [j for _, j, _ in data]
        comp = {}
        for k2, (j2, _, delta) in enumerate(data):
            for k1, (i1, j1, gamma) in enumerate(data):
                if j1 == j2:
                    comp[(k2, k1)] = index[(i1, base.comp[(delta, gamma)])]
        units = [index[(i, base.units[base.source[loop]])] for i, loop in enumerate(loops)]
        inverses = [index[(j, base.inverses[gamma])] for _, j, gamma in data]
        self.groupoid = FiniteGroupoid(
            len(loops),
            source,
            target,
            comp,
            units,
            inverses,
            object_labels=loops,
            arrow_labels=data,
        )
        self.beta = StrictFunctor(
            self.groupoid,
            base,
            [base.source[loop] for loop in loops],
            [gamma for _, _, gamma in data],
        )
        self.tau = tuple(index[(i, loop)] for i, loop in enumerate(loops))
        ig = self.groupoid
        for k, (i, j, _) in enumerate(data):
            conj = ig.comp[(ig.comp[(k, self.tau[i])], ig.inverses[k])]
            if conj != self.tau[j]:
                raise ValueError("canonical loop section is not conjugation equivariant")

    def arrow(self, i, gamma):
        """Arrow index of the conjugation of loop ``i`` by base arrow ``gamma``."""
        return self._arrow_index[(i, gamma)]

    def loop_object(self, base_arrow):
        return self.loops.index(base_arrow)


def inertia(base):
    return InertiaGroupoid(base)


def inertia_of_morphism(morphism, inertia_src=None, inertia_dst=None):
    """Bibundle induced on inertia groupoids.

    The carrier is the set of ``(g, z, h)`` with ``g . z == z . h``; the
    middle leg ``h`` is unique by freeness, so the components anchor to
    the loop ``g`` upstairs and the loop ``h`` downstairs.
    """
    f = morphism
    g, h = f.src, f.dst
    isrc = inertia_src if inertia_src is not None else inertia(g)
    idst = inertia_dst if inertia_dst is not None else inertia(h)
    if isrc.base is not g or idst.base is not h:
        raise ValueError("inertia groupoids do not match the morphism")
    src_loop_index = {a: i for i, a in enumerate(isrc.loops)}
    dst_loop_index = {a: i for i, a in enumerate(idst.loops)}
    carrier = []
    for z in range(f.size):
        x = f.rho[z]
        for loop in g.arrows_between(x, x):
            z2 = f.left[(loop, z)]
            middle = None
            for b in h.arrows_between(f.sigma[z], f.sigma[z]):
                if f.right[(z, b)] == z2:
                    middle = b
                    break
            if middle is None:
                raise ValueError("carrier point %d has no matching loop downstairs" % z)
            carrier.append((src_loop_index[loop], z, dst_loop_index[middle]))
    index = {t: i for i, t in enumerate(carrier)}
    rho = [i for i, _, _ in carrier]
    sigma = [j for _, _, j in carrier]
    left = {}
    right = {}
    for ci, (i, z, j) in enumerate(carrier):
        for k in isrc.groupoid.arrows_from(i):
            i2 = isrc.groupoid.target[k]
            gamma = isrc.arrow_data[k][2]
            left[(k, ci)] = index[(i2, f.left[(gamma, z)], j)]
        for k in idst.groupoid.arrows_into(j):
            j2 = idst.groupoid.source[k]
            eta = idst.arrow_data[k][2]
            right[(ci, k)] = index[(i, f.right[(z, eta)], j2)]
    return GeneralizedMorphism(
        isrc.groupoid, idst.groupoid, rho, sigma, left, right, labels=carrier
    )


class PointModel:
    """A single orbit presented as one point modulo its stabilizer."""

    __slots__ = ("orbit", "base_point", "stabilizer", "equivalence", "piece")

    def __init__(self, orbit, base_point, stabilizer, equivalence, piece):
        self.orbit = orbit
        self.base_point = base_point
        self.stabilizer = stabilizer
        self.equivalence = equivalence
        self.piece = piece


class MoritaComponent:
    """One conjugacy class worth of loops inside an inertia groupoid."""

    __slots__ = (
        "class_index",
        "element",
        "loop_objects",
        "piece",
        "model_group",
        "model",
        "equivalence",
        "point_models",
    )

    def __init__(
        self, class_index, element, loop_objects, piece, model_group, model,
        equivalence, point_models,
    ):
        self.class_index = class_index
        self.element = element
        self.loop_objects = loop_objects
        self.piece = piece
        self.model_group = model_group
        self.model = model
        self.equivalence = equivalence
        self.point_models = point_models


def morita_decompose_inertia(group, num_points, images):
    """Split the inertia of a translation groupoid along conjugacy classes.

    For each class with a nonempty fixed set the corresponding loops
    form a full piece of the inertia groupoid; the returned component
    carries a verified principal bibundle from the centralizer acting
    on the fixed set onto that piece, plus one point model per orbit
    inside the fixed set.
    """
    images = tuple(tuple(row) for row in images)
    base = FiniteGroupoid.translation(group, num_points, images)
    ig = inertia(base)
    cd = group.conjugacy()
    components = []
    for c, rep in enumerate(cd.reps):
        fixed = [x for x in range(num_points) if images[rep][x] == x]
        if not fixed:
            continue
        class_elems = set(
            g for g in range(group.size) if cd.class_of[g] == c
        )
        loop_objects = [
            i
            for i, loop in enumerate(ig.loops)
            if base.arrow_labels[loop][0] in class_elems
        ]
        piece, piece_incl = ig.groupoid.full_subgroupoid(loop_objects)
        cent = cd.centralizers[c]
        zg, zg_emb = subgroup_embedding(group, cent)
        fixed_index = {x: k for k, x in enumerate(fixed)}
        model_images = [
            [fixed_index[images[zg_emb.mapping[s]][x]] for x in fixed]
            for s in range(zg.size)
        ]
        model = FiniteGroupoid.translation(zg, len(fixed), model_images)
        piece_obj_index = {o: i for i, o in enumerate(piece_incl.obj_map)}
        piece_arr_index = {a: i for i, a in enumerate(piece_incl.arr_map)}
        rep_loop = {x: ig.loop_object(rep * num_points + x) for x in fixed}
        obj_map = [piece_obj_index[rep_loop[x]] for x in fixed]
        arr_map = []
        for s in range(zg.size):
            gamma_elem = zg_emb.mapping[s]
            for k, x in enumerate(fixed):
                gamma = gamma_elem * num_points + x
                ig_arrow = ig.arrow(rep_loop[x], gamma)
                arr_map.append(piece_arr_index[ig_arrow])
        functor = StrictFunctor(model, piece, obj_map, arr_map)
        equivalence = GeneralizedMorphism.from_functor(functor)
        point_models = []
        seen = set()
        for x in fixed:
            if x in seen:
                continue
            orbit = sorted(
                set(images[zg_emb.mapping[s]][x] for s in range(zg.size))
            )
            seen.update(orbit)
            stab_elems = [
                zg_emb.mapping[s]
                for s in range(zg.size)
                if images[zg_emb.mapping[s]][x] == x
            ]
            stab, stab_emb = subgroup_embedding(group, stab_elems)
            orbit_model_objs = [fixed_index[y] for y in orbit]
            orbit_piece, orbit_incl = model.full_subgroupoid(orbit_model_objs)
            oarr_index = {a: i for i, a in enumerate(orbit_incl.arr_map)}
            oobj_index = {o: i for i, o in enumerate(orbit_incl.obj_map)}
            zg_index = {zg_emb.mapping[s]: s for s in range(zg.size)}
            pt = FiniteGroupoid.from_group(stab)
            pt_arr_map = [
                oarr_index[zg_index[stab_emb.mapping[s]] * len(fixed) + fixed_index[x]]
                for s in range(stab.size)
            ]
            pt_functor = StrictFunctor(
                pt, orbit_piece, [oobj_index[fixed_index[x]]], pt_arr_map
            )
            point_models.append(
                PointModel(
                    tuple(orbit),
                    x,
                    stab,
                    GeneralizedMorphism.from_functor(pt_functor),
                    orbit_piece,
                )
            )
        components.append(
            MoritaComponent(
                c,
                rep,
                tuple(loop_objects),
                piece,
                zg,
                model,
                equivalence,
                point_models,
            )
        )
    return components
