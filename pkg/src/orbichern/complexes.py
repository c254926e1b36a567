"""Bounded complexes of representations with equivariant differentials.

Supertrace convention, fixed globally: Tr_s = sum_k (-1)^k tr on degree
k.  Under this convention the mapping cone of a chain map phi: E -> F,
built as C^n = E^{n+1} (+) F^n with differential blocks
[[d_E, 0], [phi * (-1)^deg, d_F]], satisfies
supertrace(cone) = supertrace(F) - supertrace(E): target minus source.

Cohomology is computed exactly over the cyclotomic field; the heat
supertrace is the one floating-point cross-check in the package and
sends zeta_n to exp(2*pi*i/n).
"""

from __future__ import annotations

import itertools
import random

import numpy

from .exactnum import Cyclotomic
from .linalg import Matrix, block
from .reps import Representation, VirtualCharacter, character, direct_sum

_EQUIV_EXHAUSTIVE = 60
_EQUIV_SAMPLES = 1000


class EquivariantComplex:
    """Pieces E^k for k in a contiguous degree window, with d_k: E^k -> E^{k+1}."""

    __slots__ = ("group", "min_degree", "pieces", "diffs")

    def __init__(self, group, min_degree, pieces, diffs, check=True):
        pieces = tuple(pieces)
        diffs = tuple(diffs)
        if not pieces:
            raise ValueError("a complex needs at least one piece")
        if len(diffs) != len(pieces) - 1:
            raise ValueError("need exactly one differential between adjacent pieces")
        for p in pieces:
            if p.group is not group:
                raise ValueError("pieces live over different groups")
        for k, d in enumerate(diffs):
            want = (pieces[k + 1].dim, pieces[k].dim)
            if d.shape() != want:
                raise ValueError(
                    "differential %d has shape %s, expected %s"
                    % (k, d.shape(), want)
                )
        self.group = group
        self.min_degree = min_degree
        self.pieces = pieces
        self.diffs = diffs
        if check:
            bad = self.validate()
            if bad:
                raise ValueError("; ".join(bad[:3]))

    @property
    def max_degree(self):
        return self.min_degree + len(self.pieces) - 1

    def degrees(self):
        return range(self.min_degree, self.max_degree + 1)

    def piece(self, k) -> Representation:
        i = k - self.min_degree
        if 0 <= i < len(self.pieces):
            return self.pieces[i]
        return Representation.zero_dimensional(self.group)

    def differential(self, k) -> Matrix:
        """d_k: E^k -> E^{k+1}; zero outside the stored window."""
        i = k - self.min_degree
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return Matrix.zero(self.piece(k + 1).dim, self.piece(k).dim)

    def validate(self):
        """d o d = 0 and equivariance; exhaustive over g for |G| <= 60."""
        out = []
        for k in range(len(self.diffs) - 1):
            if not (self.diffs[k + 1] * self.diffs[k]).is_zero():
                out.append(
                    "d o d is nonzero from degree %d" % (self.min_degree + k)
                )
        g = self.group
        if g.size <= _EQUIV_EXHAUSTIVE:
            elems = range(g.size)
        else:
            rng = random.Random(0xD1FF ^ g.size)
            elems = [rng.randrange(g.size) for _ in range(_EQUIV_SAMPLES // 10)]
        for k, d in enumerate(self.diffs):
            lo, hi = self.pieces[k], self.pieces[k + 1]
            for x in elems:
                if d * lo.mats[x] != hi.mats[x] * d:
                    out.append(
                        "differential at degree %d is not equivariant at element %d"
                        % (self.min_degree + k, x)
                    )
                    break
        return out

    def supertrace_class(self) -> VirtualCharacter:
        """sum_k (-1)^k char(E^k), the delocalized degree-0 character."""
        out = None
        for i, p in enumerate(self.pieces):
            term = character(p)
            if (self.min_degree + i) % 2:
                term = -term
            out = term if out is None else out + term
        return out

    @staticmethod
    def single(rep, degree=0):
        return EquivariantComplex(rep.group, degree, (rep,), (), check=False)


def supertrace_class(c) -> VirtualCharacter:
    return c.supertrace_class()


def _action_trace(basis, action_matrix):
    """Trace of the action restricted to the span of the basis columns."""
    if basis.ncols == 0:
        return Cyclotomic.from_rational(0)
    return basis.solve(action_matrix * basis).trace()


def cohomology(c) -> list:
    """Characters of ker d_k / im d_{k-1}, one per stored degree.

    The kernel and image are preserved by the action, so the class of
    H^k is char(ker d_k) - char(im d_{k-1}), each computed by solving
    for the action on a canonical basis.
    """
    cd = c.group.conjugacy()
    out = []
    for k in c.degrees():
        dim = c.piece(k).dim
        dk = c.differential(k)
        if dk.nrows == 0:
            kernel = Matrix.identity(dim)
        else:
            kernel = dk.kernel()
        dprev = c.differential(k - 1)
        if dprev.ncols == 0:
            image = Matrix.zero(dim, 0)
        else:
            image = dprev.column_space()
        values = []
        for g in cd.reps:
            act = c.piece(k).mats[g]
            values.append(_action_trace(kernel, act) - _action_trace(image, act))
        out.append(VirtualCharacter(c.group, values))
    return out


class ChainMap:
    """A degreewise equivariant map commuting with the differentials."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source, target, mats, check=True):
        if source.group is not target.group:
            raise ValueError("chain map between complexes over different groups")
        if source.min_degree != target.min_degree or len(source.pieces) != len(
            target.pieces
        ):
            raise ValueError("chain map needs matching degree windows")
        mats = tuple(mats)
        if len(mats) != len(source.pieces):
            raise ValueError("need one matrix per degree")
        for k, m in enumerate(mats):
            want = (target.pieces[k].dim, source.pieces[k].dim)
            if m.shape() != want:
                raise ValueError("chain map piece %d has the wrong shape" % k)
        self.source = source
        self.target = target
        self.mats = mats
        if check:
            bad = self.validate()
            if bad:
                raise ValueError("; ".join(bad[:3]))

    def validate(self):
        out = []
        for k in range(len(self.mats) - 1):
            if self.mats[k + 1] * self.source.diffs[k] != self.target.diffs[k] * self.mats[k]:
                out.append("does not commute with d at slot %d" % k)
        g = self.source.group
        elems = (
            range(g.size)
            if g.size <= _EQUIV_EXHAUSTIVE
            else random.Random(0xFADE).choices(range(g.size), k=50)
        )
        for k, m in enumerate(self.mats):
            for x in elems:
                if m * self.source.pieces[k].mats[x] != self.target.pieces[k].mats[x] * m:
                    out.append("not equivariant at slot %d" % k)
                    break
        return out

    @staticmethod
    def identity(c):
        return ChainMap(c, c, tuple(Matrix.identity(p.dim) for p in c.pieces), check=False)


def mapping_cone(phi: ChainMap) -> EquivariantComplex:
    """C^n = E^{n+1} (+) F^n with blocks [[d_E, 0], [phi*(-1)^deg, d_F]]."""
    e, f = phi.source, phi.target
    group = e.group
    lo = e.min_degree - 1
    hi = e.max_degree
    pieces = []
    for n in range(lo, hi + 1):
        pieces.append(direct_sum(e.piece(n + 1), f.piece(n)))
    diffs = []
    for n in range(lo, hi):
        etop = e.piece(n + 1).dim
        fbot = f.piece(n).dim
        etop2 = e.piece(n + 2).dim
        fbot2 = f.piece(n + 1).dim
        de = e.differential(n + 1)
        df = f.differential(n)
        i = n + 1 - e.min_degree
        ph = phi.mats[i] if 0 <= i < len(phi.mats) else Matrix.zero(fbot2, etop)
        if (n + 1) % 2:
            ph = -ph
        diffs.append(
            block(
                [[de, None], [ph, df]],
                [etop2, fbot2],
                [etop, fbot],
            )
        )
    return EquivariantComplex(group, lo, pieces, diffs, check=False)


def shift(c: EquivariantComplex) -> EquivariantComplex:
    """E[1]^n = E^{n+1}, same pieces one degree lower, d[1]_n = (-1)^(n+1) d_{n+1}."""
    diffs = []
    for i, d in enumerate(c.diffs):
        if (c.min_degree + i) % 2:
            d = -d
        diffs.append(d)
    return EquivariantComplex(c.group, c.min_degree - 1, c.pieces, diffs, check=False)


def heat_supertrace(c, g, ts=(0.1, 1.0, 10.0)):
    """Tr_s[rho(g) exp(-t Delta)] for each t, via numpy eigendecomposition.

    Delta_k = d_k^* d_k + d_{k-1} d_{k-1}^* with adjoints for the
    standard Hermitian product.  The value is independent of t and
    equals the supertrace of the complex at g.
    """
    mats = []
    dnum = []
    for k in c.degrees():
        mats.append(numpy.array(c.piece(k).mats[g].to_complex(), dtype=complex).reshape(
            (c.piece(k).dim, c.piece(k).dim)
        ))
    for k in list(c.degrees())[:-1]:
        d = c.differential(k)
        dnum.append(
            numpy.array(d.to_complex(), dtype=complex).reshape((d.nrows, d.ncols))
        )
    out = []
    lap = []
    for i, k in enumerate(c.degrees()):
        dim = c.piece(k).dim
        delta = numpy.zeros((dim, dim), dtype=complex)
        if i < len(dnum):
            delta += dnum[i].conj().T @ dnum[i]
        if i > 0:
            delta += dnum[i - 1] @ dnum[i - 1].conj().T
        lap.append(delta)
    eigs = [numpy.linalg.eigh(d) for d in lap]
    for t in ts:
        acc = 0j
        for i, k in enumerate(c.degrees()):
            if c.piece(k).dim == 0:
                continue
            w, u = eigs[i]
            heat = (u * numpy.exp(-t * w)) @ u.conj().T
            term = numpy.trace(mats[i] @ heat)
            acc += term if k % 2 == 0 else -term
        out.append(complex(acc))
    return out
