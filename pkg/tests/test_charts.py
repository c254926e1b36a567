import random

import pytest

from orbichern.exactnum import Cyclotomic
from orbichern.groups import FiniteGroup
from orbichern.linalg import Matrix
from orbichern.reps import Representation
from orbichern.charts import (
    EigenData,
    LinearChart,
    eigen_decomposition,
    fixed_subspace,
    inertia_data,
)

from randgen import corpus_groups, random_rep
from test_reps import standard_rep

E = Cyclotomic.root_of_unity


def test_fixed_subspace_identity_is_everything():
    g = FiniteGroup.cyclic(3)
    chart = LinearChart(g, Representation.regular(g))
    assert fixed_subspace(chart, g.identity).ncols == 3


def test_fixed_subspace_sign_action_is_zero():
    g = FiniteGroup.cyclic(2)
    rep = Representation.one_dimensional(
        g, [Cyclotomic.one(), Cyclotomic.from_rational(-1)]
    )
    chart = LinearChart(g, rep)
    assert fixed_subspace(chart, 1).ncols == 0


def test_fixed_subspace_standard_transposition():
    s3 = FiniteGroup.symmetric(3)
    chart = LinearChart(s3, standard_rep(s3))
    transposition = next(g for g in s3.elements() if s3.order_of(g) == 2)
    assert fixed_subspace(chart, transposition).ncols == 1
    three_cycle = next(g for g in s3.elements() if s3.order_of(g) == 3)
    assert fixed_subspace(chart, three_cycle).ncols == 0


def test_eigen_weight_line():
    g = FiniteGroup.cyclic(4)
    chart = LinearChart(g, Representation.cyclic_weight(g, 1))
    data = eigen_decomposition(chart, 1)
    assert data.entries == ((E(4, 1), 1),)


def test_eigen_regular_c3():
    g = FiniteGroup.cyclic(3)
    chart = LinearChart(g, Representation.regular(g))
    data = eigen_decomposition(chart, 1)
    assert data.entries == ((E(3, 0), 1), (E(3, 1), 1), (E(3, 2), 1))


def test_eigen_exponent_order():
    g = FiniteGroup.cyclic(6)
    rep = Representation(
        g,
        [
            Matrix.from_rows([[E(6, k), 0], [0, E(6, (5 * k) % 6)]])
            for k in range(6)
        ],
    )
    data = eigen_decomposition(LinearChart(g, rep), 1)
    assert data.eigenvalues() == [E(6, 1), E(6, 5)]
    assert data.total() == 2


def test_eigen_multiplicities_fill_dimension_on_random_charts():
    rng = random.Random(4004)
    for name, g in corpus_groups().items():
        chart = LinearChart(g, random_rep(rng, g, 6))
        for x in g.conjugacy().reps:
            data = eigen_decomposition(chart, x)
            assert data.total() == chart.dim, name


def test_eigen_conjugation_equivariance():
    rng = random.Random(515)
    for name, g in corpus_groups().items():
        chart = LinearChart(g, random_rep(rng, g, 6))
        for _ in range(4):
            x = rng.randrange(g.size)
            a = rng.randrange(g.size)
            d1 = eigen_decomposition(chart, x, with_bases=False)
            d2 = eigen_decomposition(chart, g.conj(a, x), with_bases=False)
            assert d1.entries == d2.entries, name


def test_inertia_trivial_group_line():
    g = FiniteGroup.cyclic(1)
    chart = LinearChart(g, Representation.trivial(g))
    comps = inertia_data(chart)
    assert len(comps) == 1
    assert comps[0].fixed_dim == 1
    assert comps[0].normal_eigen.entries == ()


def test_inertia_line_mod_c2():
    g = FiniteGroup.cyclic(2)
    rep = Representation.one_dimensional(
        g, [Cyclotomic.one(), Cyclotomic.from_rational(-1)]
    )
    comps = inertia_data(LinearChart(g, rep))
    assert comps[0].element == g.identity
    assert comps[0].fixed_dim == 1
    assert comps[0].normal_eigen.entries == ()
    assert comps[1].fixed_dim == 0
    assert comps[1].normal_eigen.entries == ((Cyclotomic.from_rational(-1), 1),)


def test_inertia_point_mod_s3():
    s3 = FiniteGroup.symmetric(3)
    chart = LinearChart(s3, Representation.zero_dimensional(s3))
    comps = inertia_data(chart)
    assert [len(c.centralizer) for c in comps] == [6, 2, 3]
    assert all(c.fixed_dim == 0 for c in comps)


def test_inertia_random_charts_consistent():
    rng = random.Random(77)
    for name, g in corpus_groups().items():
        chart = LinearChart(g, random_rep(rng, g, 6))
        comps = inertia_data(chart)
        cd = g.conjugacy()
        assert [c.element for c in comps] == list(cd.reps), name
        for c in comps:
            assert c.fixed_dim + c.normal_eigen.total() == chart.dim
            one = Cyclotomic.one()
            assert all(z != one for z in c.normal_eigen.eigenvalues())


def test_eigendata_helpers():
    d = EigenData(((E(4, 1), 2), (E(4, 3), 1)))
    assert d.multiplicity_of(E(4, 1)) == 2
    assert d.multiplicity_of(Cyclotomic.one()) == 0
    assert d.total() == 3
