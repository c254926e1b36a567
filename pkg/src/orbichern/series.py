"""Truncated multivariate power series in formal Chern roots.

Coefficients are exact cyclotomic numbers; monomials are dense exponent
tuples of total degree <= the truncation degree D.  The two central
constructions are the delocalized Todd class and the Koszul Chern
character of an eigen-line model: per line with eigenvalue zeta and
variable x, Todd contributes x/(1 - e^{-x}) when zeta = 1 and
1/(1 - zeta^{-1} e^{-x}) otherwise, while the Koszul complex
contributes 1 - zeta^{-1} e^{-x}.  The zero-section identity equates
the Koszul character with the Euler monomial of the zeta = 1 lines
times the inverse Todd class, coefficientwise within truncation.

All (2*pi*i) normalizations are absorbed into the variables, so every
coefficient stays in the cyclotomic field.  Deliberately, koszul_ch is
computed by subset enumeration with explicit multinomial coefficients
rather than by multiplying per-line factors, so the identity check
compares two genuinely independent computational paths.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd, lcm

from .exactnum import Cyclotomic, _int_vec, _reduction_rows, euler_phi

__all__ = [
    "GradedSeries",
    "NormalModel",
    "DelocalizedClass",
    "ZeroSectionReport",
    "series_mul",
    "invert_unit",
    "exp_nilpotent",
    "todd_delocalized",
    "koszul_ch",
    "zero_section_identity",
    "delocalized_chern",
]


def _coerce(x) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.from_rational(x)
    raise TypeError("series coefficients must be exact: %r" % (x,))


_CYC_ONE = Cyclotomic.one()


def _grlex_key(exps):
    return (sum(exps), exps)


# -- integer kernel ---------------------------------------------------------
#
# Bulk series arithmetic flattens every coefficient to an integer vector over
# a common denominator in one fixed Q(zeta_n); the convolution then runs on
# machine integers and Fractions are rebuilt once per output monomial.


def _flat_entry(v: Cyclotomic, n, phi):
    """(integer vector, denominator) for v viewed inside Q(zeta_n)."""
    if v.order == n:
        return _int_vec(v.coeffs)
    if v.is_rational():
        q = v.coeffs[0]
        return [q.numerator] + [0] * (phi - 1), q.denominator
    return _int_vec(v.lift(n).coeffs)


def _vec_mul(a, b, n, phi, rows):
    conv = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    conv[i + j] += ai * bj
    if len(conv) > n:
        for k in range(n, len(conv)):
            if conv[k]:
                conv[k % n] += conv[k]
        del conv[n:]
    out = conv[:phi]
    for j in range(phi, len(conv)):
        c = conv[j]
        if c:
            row = rows[j - phi]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
    return out


def _acc_add(acc, key, vec, den):
    """Accumulate vec/den into acc[key], aligning denominators."""
    cur = acc.get(key)
    if cur is None:
        acc[key] = (vec, den)
    else:
        v0, d0 = cur
        if d0 == den:
            acc[key] = ([x + y for x, y in zip(v0, vec)], d0)
        else:
            g = gcd(d0, den)
            m0, m1 = den // g, d0 // g
            acc[key] = ([x * m0 + y * m1 for x, y in zip(v0, vec)], d0 * m0)


def _common_order(*coeff_maps):
    n = 1
    for coeffs in coeff_maps:
        for v in coeffs.values():
            n = lcm(n, v.order)
    return n


def _fast_fraction(num, den):
    # Fraction.__new__ minus the dispatch; den must be positive.
    g = gcd(num, den)
    f = Fraction.__new__(Fraction)
    f._numerator = num // g
    f._denominator = den // g
    return f


def _rebuild(num_vars, trunc_degree, n, acc) -> "GradedSeries":
    out = {}
    for key, (vec, den) in acc.items():
        if any(vec):
            out[key] = Cyclotomic(
                n, tuple(_fast_fraction(x, den) for x in vec), _canonical=True
            )
    return GradedSeries._raw(num_vars, trunc_degree, out)


class GradedSeries:
    """Polynomial truncation of a power series in num_vars variables."""

    __slots__ = ("num_vars", "trunc_degree", "coeffs")

    def __init__(self, num_vars, trunc_degree, coeffs=None):
        if trunc_degree < 0:
            raise ValueError("truncation degree must be nonnegative")
        self.num_vars = num_vars
        self.trunc_degree = trunc_degree
        clean = {}
        for exps, val in (coeffs or {}).items():
            exps = tuple(exps)
            if len(exps) != num_vars or any(e < 0 for e in exps):
                raise ValueError("bad exponent tuple %r" % (exps,))
            if sum(exps) > trunc_degree:
                raise ValueError("monomial %r exceeds truncation" % (exps,))
            val = _coerce(val)
            if not val.is_zero():
                clean[exps] = val
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def _raw(num_vars, trunc_degree, coeffs) -> "GradedSeries":
        # trusted input: canonical keys, nonzero Cyclotomic values
        s = GradedSeries.__new__(GradedSeries)
        s.num_vars = num_vars
        s.trunc_degree = trunc_degree
        s.coeffs = coeffs
        return s

    @staticmethod
    def zero(num_vars, trunc_degree) -> "GradedSeries":
        return GradedSeries(num_vars, trunc_degree)

    @staticmethod
    def constant(num_vars, trunc_degree, value) -> "GradedSeries":
        return GradedSeries(
            num_vars, trunc_degree, {(0,) * num_vars: _coerce(value)}
        )

    @staticmethod
    def one(num_vars, trunc_degree) -> "GradedSeries":
        return GradedSeries.constant(num_vars, trunc_degree, 1)

    @staticmethod
    def variable(num_vars, trunc_degree, j) -> "GradedSeries":
        exps = tuple(1 if i == j else 0 for i in range(num_vars))
        return GradedSeries(num_vars, trunc_degree, {exps: 1})

    # -- ring structure ----------------------------------------------------

    def _shape_check(self, other):
        if (
            self.num_vars != other.num_vars
            or self.trunc_degree != other.trunc_degree
        ):
            raise ValueError("incompatible series shapes")

    def coefficient(self, exps) -> Cyclotomic:
        return self.coeffs.get(tuple(exps), Cyclotomic.zero())

    @property
    def constant_term(self) -> Cyclotomic:
        return self.coefficient((0,) * self.num_vars)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        if not isinstance(other, GradedSeries):
            other = GradedSeries.constant(self.num_vars, self.trunc_degree, other)
        self._shape_check(other)
        out = dict(self.coeffs)
        for exps, val in other.coeffs.items():
            out[exps] = out.get(exps, Cyclotomic.zero()) + val
        return GradedSeries(self.num_vars, self.trunc_degree, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries(
            self.num_vars,
            self.trunc_degree,
            {e: -v for e, v in self.coeffs.items()},
        )

    def __sub__(self, other):
        if not isinstance(other, GradedSeries):
            other = GradedSeries.constant(self.num_vars, self.trunc_degree, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "GradedSeries":
        value = _coerce(value)
        return GradedSeries(
            self.num_vars,
            self.trunc_degree,
            {e: v * value for e, v in self.coeffs.items()},
        )

    def __mul__(self, other):
        if not isinstance(other, GradedSeries):
            return self.scale(other)
        self._shape_check(other)
        d = self.trunc_degree
        if not self.coeffs or not other.coeffs:
            return GradedSeries.zero(self.num_vars, d)
        for mono, series in ((self, other), (other, self)):
            if len(mono.coeffs) == 1:
                ((e1, v1),) = mono.coeffs.items()
                if v1 == _CYC_ONE:
                    shift = sum(e1)
                    out = {
                        tuple(a + b for a, b in zip(e1, e2)): v2
                        for e2, v2 in series.coeffs.items()
                        if sum(e2) + shift <= d
                    }
                    return GradedSeries._raw(self.num_vars, d, out)
        n = _common_order(self.coeffs, other.coeffs)
        phi = euler_phi(n)
        rows = _reduction_rows(n) if n > phi else ()
        lhs = [
            (sum(e), e, _flat_entry(v, n, phi)) for e, v in self.coeffs.items()
        ]
        rhs = [
            (sum(e), e, _flat_entry(v, n, phi)) for e, v in other.coeffs.items()
        ]
        rhs.sort(key=lambda t: t[0])
        acc = {}
        for d1, e1, (va, da) in lhs:
            budget = d - d1
            if budget < 0:
                continue
            for d2, e2, (vb, db) in rhs:
                if d2 > budget:
                    break
                key = tuple(a + b for a, b in zip(e1, e2))
                _acc_add(acc, key, _vec_mul(va, vb, n, phi, rows), da * db)
        return _rebuild(self.num_vars, d, n, acc)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers need invert_unit")
        out = GradedSeries.one(self.num_vars, self.trunc_degree)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.trunc_degree == other.trunc_degree
            and self.coeffs == other.coeffs
        )

    def terms(self):
        """(exponents, coefficient) pairs in graded-lex order."""
        for exps in sorted(self.coeffs, key=_grlex_key):
            yield exps, self.coeffs[exps]

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for exps, val in self.terms():
            mono = "*".join(
                ("x%d" % j if e == 1 else "x%d^%d" % (j, e))
                for j, e in enumerate(exps)
                if e
            )
            cs = str(val)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                if any(op in cs[1:] for op in "+-"):
                    cs = "(%s)" % cs
                parts.append("%s*%s" % (cs, mono))
        text = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                text += " - " + p[1:]
            else:
                text += " + " + p
        return text

    __repr__ = __str__


def series_mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    return a * b


def _univar_inverse(col):
    """Inverse coefficient list of a one-variable unit given by col."""
    a0inv = col[0].inverse()
    inv = [a0inv]
    for m in range(1, len(col)):
        acc = Cyclotomic.zero()
        for k in range(1, m + 1):
            if not col[k].is_zero():
                acc = acc + col[k] * inv[m - k]
        inv.append(-(a0inv * acc))
    return inv


def _axis_series(num_vars, trunc_degree, j, col) -> GradedSeries:
    coeffs = {
        tuple(k if i == j else 0 for i in range(num_vars)): c
        for k, c in enumerate(col)
    }
    return GradedSeries(num_vars, trunc_degree, coeffs)


def _axis_factors(s: GradedSeries):
    """Univariate slices multiplying back to s, or None if s does not split.

    Only valid for s with constant term 1; the check is an exact product
    comparison, so a None return is the only inexactness-free fallback.
    """
    d, r = s.trunc_degree, s.num_vars
    used = sorted({j for exps in s.coeffs for j, e in enumerate(exps) if e})
    factors = []
    for j in used:
        col = [Cyclotomic.one()]
        for k in range(1, d + 1):
            col.append(s.coefficient(tuple(k if i == j else 0 for i in range(r))))
        factors.append((j, col))
    prod = GradedSeries.one(r, d)
    for j, col in factors:
        prod = prod * _axis_series(r, d, j, col)
    if prod == s:
        return factors
    return None


def invert_unit(s: GradedSeries) -> GradedSeries:
    """Multiplicative inverse within truncation; needs a nonzero constant.

    A series that splits as a product of one-variable units (detected by an
    exact product check) is inverted factor by factor.  Otherwise, writing
    s = c(1 + t), the recurrence b_m = -sum_k t_k b_{m-|k|} fills the inverse
    degree by degree at the cost of about one series product.
    """
    c = s.constant_term
    if c.is_zero():
        raise ValueError("not a unit: zero constant term")
    cinv = c.inverse()
    d = s.trunc_degree
    origin = (0,) * s.num_vars
    unit = s.scale(cinv)
    split = _axis_factors(unit)
    if split is not None:
        out = GradedSeries.constant(s.num_vars, d, cinv)
        for j, col in split:
            out = out * _axis_series(s.num_vars, d, j, _univar_inverse(col))
        return out
    tail = [
        (sum(exps), exps, val)
        for exps, val in unit.coeffs.items()
        if exps != origin
    ]
    layers = [dict() for _ in range(d + 1)]
    layers[0][origin] = Cyclotomic.one()
    for m in range(1, d + 1):
        layer = layers[m]
        for deg, exps, val in tail:
            if deg > m:
                continue
            for e2, w in layers[m - deg].items():
                key = tuple(a + b for a, b in zip(exps, e2))
                prod = val * w
                if key in layer:
                    layer[key] = layer[key] + prod
                else:
                    layer[key] = prod
        for key, acc in list(layer.items()):
            acc = -acc
            if acc.is_zero():
                del layer[key]
            else:
                layer[key] = acc
    out = {}
    for layer in layers:
        for key, val in layer.items():
            out[key] = val * cinv
    return GradedSeries(s.num_vars, d, out)


def exp_nilpotent(s: GradedSeries) -> GradedSeries:
    """exp of a series with zero constant term."""
    if not s.constant_term.is_zero():
        raise ValueError("not nilpotent: nonzero constant term")
    out = GradedSeries.one(s.num_vars, s.trunc_degree)
    power = GradedSeries.one(s.num_vars, s.trunc_degree)
    for k in range(1, s.trunc_degree + 1):
        power = power * s
        if power.is_zero():
            break
        out = out + power.scale(Fraction(1, factorial(k)))
    return out


class NormalModel:
    """Eigen-line model of a normal bundle: (eigenvalue, variable) pairs."""

    __slots__ = ("lines", "trunc_degree", "num_vars")

    def __init__(self, lines, trunc_degree, num_vars=None):
        lines = tuple((_coerce(z), int(j)) for z, j in lines)
        indices = [j for _, j in lines]
        if len(set(indices)) != len(indices):
            raise ValueError("variable indices must be distinct")
        if num_vars is None:
            num_vars = max(indices) + 1 if indices else 0
        if any(j < 0 or j >= num_vars for j in indices):
            raise ValueError("variable index out of range")
        self.lines = lines
        self.trunc_degree = trunc_degree
        self.num_vars = num_vars

    @staticmethod
    def from_eigen(eigen, trunc_degree) -> "NormalModel":
        """Expand (eigenvalue, multiplicity) data into one line per dimension."""
        lines = []
        for zeta, mult in eigen.entries:
            for _ in range(mult):
                lines.append((zeta, len(lines)))
        return NormalModel(lines, trunc_degree, num_vars=len(lines))

    def __repr__(self):
        return "NormalModel(%s; D=%d)" % (
            ", ".join("(%s, x%d)" % (z, j) for z, j in self.lines),
            self.trunc_degree,
        )


@lru_cache(maxsize=None)
def _todd_line(zeta: Cyclotomic, trunc_degree: int):
    """Univariate coefficients of x/(1-e^{-x}) (zeta = 1) or 1/(1-zeta^{-1}e^{-x}).

    Cached per eigenvalue: the one-variable inversion is shared by every
    model that carries a line with this rotation number.
    """
    one = Cyclotomic.one()
    if zeta == one:
        # inverse of (1 - e^{-x})/x, whose coefficients are (-1)^k/(k+1)!
        base = [
            Cyclotomic.from_rational(Fraction(-1 if k % 2 else 1, factorial(k + 1)))
            for k in range(trunc_degree + 1)
        ]
    else:
        zinv = zeta.inverse()
        base = [one - zinv]
        for k in range(1, trunc_degree + 1):
            base.append(zinv * Fraction(1 if k % 2 else -1, factorial(k)))
    return tuple(_univar_inverse(base))


def todd_delocalized(model: NormalModel) -> GradedSeries:
    """Product over lines: x/(1-e^{-x}) at zeta = 1, else 1/(1-zeta^{-1}e^{-x})."""
    r, d = model.num_vars, model.trunc_degree
    out = GradedSeries.one(r, d)
    for zeta, j in model.lines:
        out = out * _axis_series(r, d, j, _todd_line(zeta, d))
    return out


def _degs_within(k, budget):
    """Tuples of k nonnegative integers with sum at most budget."""
    if k == 0:
        yield ()
        return
    for a in range(budget + 1):
        for rest in _degs_within(k - 1, budget - a):
            yield (a,) + rest


def koszul_ch(model: NormalModel) -> GradedSeries:
    """Sum over subsets S of lines of (-1)^{|S|} prod_{j in S} zeta_j^{-1} e^{-x_j}.

    Expanded directly: the x^a coefficient picks up, from each subset S
    containing the support of a, the multinomial weight
    prod_j (-1)^{a_j}/a_j!.  No series multiplication is involved.
    """
    r, d = model.num_vars, model.trunc_degree
    order = 1
    for zeta, _ in model.lines:
        order = lcm(order, zeta.order)
    phi = euler_phi(order)
    fact = [factorial(k) for k in range(d + 1)]
    acc = {}
    n = len(model.lines)
    for mask in range(1 << n):
        chosen = [model.lines[i] for i in range(n) if mask >> i & 1]
        sign = -1 if len(chosen) % 2 else 1
        zfac = Cyclotomic.one()
        for zeta, _ in chosen:
            zfac = zfac * zeta.inverse()
        zvec, zden = _flat_entry(zfac, order, phi)
        vars_in = [j for _, j in chosen]
        for degs in _degs_within(len(chosen), d):
            wnum = sign
            wden = 1
            for a in degs:
                if a % 2:
                    wnum = -wnum
                wden *= fact[a]
            exps = [0] * r
            for j, a in zip(vars_in, degs):
                exps[j] = a
            _acc_add(acc, tuple(exps), [x * wnum for x in zvec], zden * wden)
    return _rebuild(r, d, order, acc)


class ZeroSectionReport:
    """Outcome of the Koszul = Euler * Todd^{-1} comparison."""

    __slots__ = ("passed", "lhs", "rhs", "first_mismatch")

    def __init__(self, passed, lhs, rhs, first_mismatch=None):
        self.passed = passed
        self.lhs = lhs
        self.rhs = rhs
        self.first_mismatch = first_mismatch

    def __bool__(self):
        return self.passed

    def __repr__(self):
        if self.passed:
            return "ZeroSectionReport(passed)"
        return "ZeroSectionReport(failed at %r)" % (self.first_mismatch,)


def first_difference(a: GradedSeries, b: GradedSeries):
    """Graded-lex smallest exponent tuple where two series differ, or None."""
    keys = set(a.coeffs) | set(b.coeffs)
    for exps in sorted(keys, key=_grlex_key):
        if a.coefficient(exps) != b.coefficient(exps):
            return exps
    return None


def zero_section_identity(model: NormalModel) -> ZeroSectionReport:
    """koszul_ch(model) = (prod of zeta=1 variables) * invert_unit(todd)."""
    lhs = koszul_ch(model)
    euler_exps = [0] * model.num_vars
    one = Cyclotomic.one()
    for zeta, j in model.lines:
        if zeta == one:
            euler_exps[j] = 1
    if sum(euler_exps) > model.trunc_degree:
        raise ValueError("truncation degree too small for the Euler monomial")
    euler = GradedSeries(
        model.num_vars, model.trunc_degree, {tuple(euler_exps): 1}
    )
    rhs = euler * invert_unit(todd_delocalized(model))
    diff = first_difference(lhs, rhs)
    return ZeroSectionReport(diff is None, lhs, rhs, diff)


class DelocalizedClass:
    """One graded series per inertia component, indexed like the classes."""

    __slots__ = ("components",)

    def __init__(self, components):
        self.components = tuple(components)

    def __getitem__(self, c):
        return self.components[c]

    def __len__(self):
        return len(self.components)


def delocalized_chern(chart, cx, trunc_degree) -> DelocalizedClass:
    """ch of an equivariant complex over a chart: the flat/constant model.

    On each inertia component the curvature vanishes, so the component
    series is the constant supertrace of the acting element; the
    variables are the Chern roots of that component's normal lines.
    """
    from .charts import inertia_data
    from .complexes import supertrace_class

    chi = supertrace_class(cx)
    out = []
    for comp in inertia_data(chart):
        r = comp.normal_eigen.total()
        out.append(
            GradedSeries.constant(r, trunc_degree, chi.values[comp.class_index])
        )
    return DelocalizedClass(out)
