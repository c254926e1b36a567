"""Linear orbifold charts [V/G]: fixed subspaces and normal eigen-data.

A chart is a finite group acting exactly on C^d.  Every group element
has finite order, so its action is diagonalizable with eigenvalues
among the m-th roots of unity; eigenspaces are exact kernels over the
cyclotomic field.  The inertia data lists, per conjugacy class, the
fixed subspace V^g together with the eigen-decomposition of the normal
directions (eigenvalues != 1), which is what the delocalized Todd and
Koszul series consume.
"""

from __future__ import annotations

from .exactnum import Cyclotomic
from .linalg import Matrix
from .reps import Representation

__all__ = [
    "LinearChart",
    "EigenData",
    "InertiaComponent",
    "fixed_subspace",
    "eigen_decomposition",
    "inertia_data",
]


class LinearChart:
    """A finite group with a representation on the ambient space V = C^d."""

    __slots__ = ("group", "action")

    def __init__(self, group, action: Representation):
        if action.group is not group:
            raise ValueError("chart action must live over the chart group")
        self.group = group
        self.action = action

    @property
    def dim(self):
        return self.action.dim

    def __repr__(self):
        return "LinearChart(|G|=%d, dim=%d)" % (self.group.size, self.dim)


class EigenData:
    """Eigenvalues of a finite-order operator with multiplicities and bases.

    entries: tuple of (eigenvalue, multiplicity), eigenvalues distinct
    roots of unity ordered by exponent; bases: one column basis per
    entry (columns span the exact eigenspace).
    """

    __slots__ = ("entries", "bases")

    def __init__(self, entries, bases=None):
        self.entries = tuple(entries)
        self.bases = None if bases is None else tuple(bases)

    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity_of(self, value) -> int:
        for zeta, m in self.entries:
            if zeta == value:
                return m
        return 0

    def eigenvalues(self):
        return [zeta for zeta, _ in self.entries]

    def __eq__(self, other):
        if not isinstance(other, EigenData):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self):
        return "EigenData(%s)" % ", ".join(
            "%s x%d" % (zeta, m) for zeta, m in self.entries
        )


class InertiaComponent:
    """One inertia stratum [V^g / Z_G(g)] of a linear chart."""

    __slots__ = (
        "chart",
        "class_index",
        "element",
        "centralizer",
        "fixed_basis",
        "normal_eigen",
    )

    def __init__(self, chart, class_index, element, centralizer, fixed_basis, normal_eigen):
        self.chart = chart
        self.class_index = class_index
        self.element = element
        self.centralizer = tuple(centralizer)
        self.fixed_basis = fixed_basis
        self.normal_eigen = normal_eigen

    @property
    def fixed_dim(self):
        return self.fixed_basis.ncols

    def __repr__(self):
        return "InertiaComponent(g=%s, fixed_dim=%d, |Z|=%d)" % (
            self.chart.group.name(self.element),
            self.fixed_dim,
            len(self.centralizer),
        )


def fixed_subspace(chart: LinearChart, g) -> Matrix:
    """Exact column basis of V^g = ker(rho(g) - 1)."""
    rho = chart.action.mats[g]
    return (rho - Matrix.identity(chart.dim)).kernel()


def eigen_decomposition(chart: LinearChart, g, with_bases=True) -> EigenData:
    """Eigenvalues of rho(g) among the m-th roots of unity, m = order of g.

    Multiplicity of zeta_m^j is dim ker(rho(g) - zeta_m^j); the
    multiplicities always sum to the ambient dimension because the
    operator has finite order.
    """
    rho = chart.action.mats[g]
    m = chart.group.order_of(g)
    ident = Matrix.identity(chart.dim)
    entries = []
    bases = []
    for j in range(m):
        zeta = Cyclotomic.root_of_unity(m, j)
        ker = (rho - ident.scale(zeta)).kernel()
        if ker.ncols:
            entries.append((zeta, ker.ncols))
            bases.append(ker)
    data = EigenData(entries, bases if with_bases else None)
    if data.total() != chart.dim:
        raise ArithmeticError(
            "eigenvalue multiplicities sum to %d, dimension is %d"
            % (data.total(), chart.dim)
        )
    return data


def _check_preserved(basis: Matrix, mat: Matrix, what: str):
    if basis.ncols == 0:
        return
    try:
        basis.solve(mat * basis)
    except ValueError:
        raise ArithmeticError("%s does not preserve the fixed subspace" % what)


def inertia_data(chart: LinearChart) -> list:
    """One InertiaComponent per conjugacy class, in class order.

    For each class representative g: the fixed basis of V^g, the
    centralizer Z_G(g) (checked to preserve V^g), and the eigen-data
    of the normal directions (every eigenvalue != 1).
    """
    cd = chart.group.conjugacy()
    out = []
    for c, g in enumerate(cd.reps):
        fixed = fixed_subspace(chart, g)
        for z in cd.centralizers[c]:
            _check_preserved(
                fixed, chart.action.mats[z], "centralizer element %d" % z
            )
        eig = eigen_decomposition(chart, g)
        one = Cyclotomic.one()
        normal_entries = []
        normal_bases = []
        for (zeta, m), basis in zip(eig.entries, eig.bases):
            if zeta == one:
                continue
            normal_entries.append((zeta, m))
            normal_bases.append(basis)
        normal = EigenData(normal_entries, normal_bases)
        if fixed.ncols + normal.total() != chart.dim:
            raise ArithmeticError("fixed and normal dimensions do not fill V")
        out.append(InertiaComponent(chart, c, g, cd.centralizers[c], fixed, normal))
    return out
