"""Command-line front end: scenario files in, verdict tables or JSON out.

A scenario is a single JSON document declaring groups, embeddings,
representations, complexes, charts, eigen-line models, group actions,
and command blocks that wire those pieces into runnable checks.  Every
cross-reference is resolved and validated at load time with a JSON
pointer in the error message; blocks may opt out with
``"skip_validation": true``, in which case the violation surfaces as a
failing report entry at run time instead of a load error.

Exit codes: 0 all checks pass, 1 any verification failure, 2 load or
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .exactnum import Cyclotomic
from .linalg import Matrix
from .groups import FiniteGroup, GroupEmbedding, subgroup_embedding
from .reps import (
    Representation,
    character,
    induced_character_sum,
)
from .complexes import EquivariantComplex
from .charts import LinearChart, inertia_data
from .series import NormalModel, delocalized_chern, todd_delocalized
from .groupoids import (
    FiniteGroupoid,
    GeneralizedMorphism,
    StrictFunctor,
    classify_embedding,
    factorize,
    find_isomorphism,
    inertia,
    inertia_of_morphism,
    morita_decompose_inertia,
)
from .rrg import (
    GeneralScenario,
    IsoSpatialScenario,
    ZeroSectionScenario,
    check_general_degree0,
    check_iso_spatial,
    check_td_pullback,
    check_zero_section,
    pushforward_characters,
)

SCHEMA_VERSION = 1
DEFAULT_TRUNC = 4

COMMANDS = (
    "inertia",
    "induce",
    "chern",
    "todd",
    "rrg-iso",
    "rrg-zero-section",
    "rrg-general",
    "groupoid-check",
)


# -- cyclotomic expression grammar -----------------------------------------
#
#   expr     := ['-'] term (('+'|'-') term)*
#   term     := factor ('*' factor)*
#   factor   := rational | 'E(' int ')' ['^' int] | '(' expr ')'
#   rational := ['-'] int ['/' int]


class CycParseError(ValueError):
    """Malformed cyclotomic expression; carries the offending offset."""

    def __init__(self, message, position):
        super().__init__("parse error at position %d: %s" % (position, message))
        self.position = position


class _Scanner:
    __slots__ = ("text", "pos")

    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            raise CycParseError("expected '%s'" % ch, self.pos)
        self.pos += 1

    def integer(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise CycParseError("expected an integer", start)
        return int(self.text[start : self.pos]), start

    def expr(self):
        if self.peek() == "-":
            self.pos += 1
            acc = -self.term()
        else:
            acc = self.term()
        while True:
            op = self.peek()
            if op == "+":
                self.pos += 1
                acc = acc + self.term()
            elif op == "-":
                self.pos += 1
                acc = acc - self.term()
            else:
                return acc

    def term(self):
        acc = self.factor()
        while self.peek() == "*":
            self.pos += 1
            acc = acc * self.factor()
        return acc

    def factor(self):
        ch = self.peek()
        start = self.pos
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.take(")")
            return inner
        if ch == "E":
            self.pos += 1
            self.take("(")
            n, _ = self.integer()
            self.take(")")
            if n < 1:
                raise CycParseError("E(%d) is not a root of unity" % n, start)
            k = 1
            if self.peek() == "^":
                self.pos += 1
                k, _ = self.integer()
            return Cyclotomic.root_of_unity(n, k)
        if ch == "-" or ch.isdigit():
            return self.rational()
        raise CycParseError("expected a factor", self.pos)

    def rational(self):
        self.skip_ws()
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        num, _ = self.integer()
        den = 1
        if self.peek() == "/":
            self.pos += 1
            den, den_start = self.integer()
            if den == 0:
                raise CycParseError("zero denominator", den_start)
        return Cyclotomic.from_rational(Fraction(sign * num, den))


def parse_cyclotomic(text) -> Cyclotomic:
    """Evaluate a cyclotomic expression string, exactly."""
    if not isinstance(text, str):
        raise CycParseError("expected a string", 0)
    sc = _Scanner(text)
    value = sc.expr()
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise CycParseError("unexpected trailing input", sc.pos)
    return value


def print_cyclotomic(value) -> str:
    """Canonical printer; ``parse_cyclotomic`` inverts it."""
    return str(value)


# -- scenario loading --------------------------------------------------------


class LoadError(ValueError):
    """Schema or invariant violation, located by a JSON pointer."""

    def __init__(self, message, pointer):
        super().__init__("%s (at %s)" % (message, pointer or "/"))
        self.pointer = pointer


def _want(value, kind, pointer, what):
    if not isinstance(value, kind):
        raise LoadError("expected %s" % what, pointer)
    return value


def _want_int(value, pointer):
    if isinstance(value, bool) or not isinstance(value, int):
        raise LoadError("expected an integer", pointer)
    return value


def _parse_entry(text, pointer):
    try:
        return parse_cyclotomic(_want(value=text, kind=str, pointer=pointer, what="an expression string"))
    except CycParseError as exc:
        raise LoadError(str(exc), pointer)


def _parse_matrix(rows, ncols, pointer):
    rows = _want(rows, list, pointer, "a list of rows")
    out = []
    for i, row in enumerate(rows):
        row = _want(row, list, "%s/%d" % (pointer, i), "a row list")
        out.append(
            tuple(
                _parse_entry(e, "%s/%d/%d" % (pointer, i, j))
                for j, e in enumerate(row)
            )
        )
    widths = {len(r) for r in out}
    if len(widths) > 1:
        raise LoadError("ragged rows", pointer)
    if ncols is not None and out and len(out[0]) != ncols:
        raise LoadError("expected %d columns" % ncols, pointer)
    return Matrix.from_rows(out, ncols=ncols if (ncols is not None) else None)


class Scenario:
    """Resolved object graph behind one scenario file."""

    __slots__ = (
        "groups",
        "perm_actions",
        "embeddings",
        "representations",
        "complexes",
        "charts",
        "models",
        "actions",
        "blocks",
        "trunc",
    )

    def __init__(self):
        self.groups = {}
        self.perm_actions = {}
        self.embeddings = {}
        self.representations = {}
        self.complexes = {}
        self.charts = {}
        self.models = {}
        self.actions = {}
        self.blocks = {}
        self.trunc = DEFAULT_TRUNC


def _load_group(name, body, ptr):
    body = _want(body, dict, ptr, "an object")
    try:
        if "table" in body:
            table = _want(body["table"], list, ptr + "/table", "a list of rows")
            names = body.get("names")
            return FiniteGroup(table, names=names), None
        if "permutations" in body:
            perms = _want(
                body["permutations"], list, ptr + "/permutations", "a list"
            )
            if not perms:
                raise LoadError("need at least one generator", ptr + "/permutations")
            degree = len(_want(perms[0], list, ptr + "/permutations/0", "a list"))
            group, order = FiniteGroup.from_generators(degree, perms)
            return group, order
        if "cyclic" in body:
            return FiniteGroup.cyclic(_want_int(body["cyclic"], ptr + "/cyclic")), None
        if "symmetric" in body:
            return (
                FiniteGroup.symmetric(_want_int(body["symmetric"], ptr + "/symmetric")),
                None,
            )
        if "dihedral" in body:
            return (
                FiniteGroup.dihedral(_want_int(body["dihedral"], ptr + "/dihedral")),
                None,
            )
        if "quaternion" in body:
            return FiniteGroup.quaternion(), None
    except LoadError:
        raise
    except (ValueError, TypeError, IndexError) as exc:
        raise LoadError(str(exc), ptr)
    raise LoadError(
        "group needs one of: table, permutations, cyclic, symmetric, dihedral, quaternion",
        ptr,
    )


def _load_embedding(sc, body, ptr):
    body = _want(body, dict, ptr, "an object")
    target = _ref(sc.groups, body, "target", ptr)
    try:
        if "elements" in body:
            elements = _want(body["elements"], list, ptr + "/elements", "a list")
            sub, emb = subgroup_embedding(target, elements)
            register = body.get("register_source")
            if register is not None:
                if register in sc.groups:
                    raise LoadError(
                        "group name %r already taken" % register,
                        ptr + "/register_source",
                    )
                sc.groups[register] = sub
            return emb
        if "mapping" in body:
            source = _ref(sc.groups, body, "source", ptr)
            mapping = _want(body["mapping"], list, ptr + "/mapping", "a list")
            return GroupEmbedding(source, target, mapping)
    except LoadError:
        raise
    except (ValueError, TypeError, IndexError, KeyError) as exc:
        raise LoadError(str(exc), ptr)
    raise LoadError("embedding needs either elements or source+mapping", ptr)


def _load_representation(sc, body, ptr):
    body = _want(body, dict, ptr, "an object")
    group = _ref(sc.groups, body, "group", ptr)
    try:
        if "matrices" in body:
            mats_json = _want(body["matrices"], list, ptr + "/matrices", "a list")
            if len(mats_json) != group.size:
                raise LoadError(
                    "need one matrix per group element (%d)" % group.size,
                    ptr + "/matrices",
                )
            dim = len(_want(mats_json[0], list, ptr + "/matrices/0", "a matrix"))
            mats = [
                _parse_matrix(m, dim if dim == 0 else None, "%s/matrices/%d" % (ptr, i))
                for i, m in enumerate(mats_json)
            ]
            return Representation(group, mats)
        if "values" in body:
            vals = _want(body["values"], list, ptr + "/values", "a list")
            if len(vals) != group.size:
                raise LoadError(
                    "need one value per group element (%d)" % group.size,
                    ptr + "/values",
                )
            parsed = tuple(
                _parse_entry(v, "%s/values/%d" % (ptr, i)) for i, v in enumerate(vals)
            )
            return Representation.one_dimensional(group, parsed)
        if body.get("trivial"):
            return Representation.trivial(group)
        if body.get("zero"):
            return Representation.zero_dimensional(group)
        if "permutation" in body:
            images = _want(body["permutation"], list, ptr + "/permutation", "a list")
            return Representation.permutation(group, images)
    except LoadError:
        raise
    except (ValueError, TypeError, IndexError) as exc:
        raise LoadError(str(exc), ptr)
    raise LoadError(
        "representation needs one of: matrices, values, permutation, trivial, zero",
        ptr,
    )


def _load_complex(sc, body, ptr):
    body = _want(body, dict, ptr, "an object")
    group = _ref(sc.groups, body, "group", ptr)
    pieces_json = _want(body.get("pieces"), list, ptr + "/pieces", "a list")
    pieces = [
        _lookup(sc.representations, pname, "%s/pieces/%d" % (ptr, i))
        for i, pname in enumerate(pieces_json)
    ]
    for i, p in enumerate(pieces):
        if p.group is not group:
            raise LoadError("piece lives over a different group", "%s/pieces/%d" % (ptr, i))
    diffs_json = body.get("differentials", [None] * (len(pieces) - 1))
    diffs_json = _want(diffs_json, list, ptr + "/differentials", "a list")
    if len(diffs_json) != len(pieces) - 1:
        raise LoadError(
            "need exactly %d differentials" % (len(pieces) - 1),
            ptr + "/differentials",
        )
    diffs = []
    for k, d in enumerate(diffs_json):
        shape = (pieces[k + 1].dim, pieces[k].dim)
        if d is None:
            diffs.append(Matrix.zero(*shape))
        else:
            m = _parse_matrix(d, shape[1], "%s/differentials/%d" % (ptr, k))
            if m.shape() != shape:
                raise LoadError(
                    "differential %d has shape %s, expected %s" % (k, m.shape(), shape),
                    "%s/differentials/%d" % (ptr, k),
                )
            diffs.append(m)
    check = not body.get("skip_validation", False)
    try:
        return EquivariantComplex(
            group, _want_int(body.get("min_degree", 0), ptr + "/min_degree"),
            pieces, diffs, check=check,
        )
    except ValueError as exc:
        raise LoadError(str(exc), ptr)


def _load_action(sc, body, ptr):
    body = _want(body, dict, ptr, "an object")
    gname = body.get("group")
    group = _ref(sc.groups, body, "group", ptr)
    if body.get("natural"):
        order = sc.perm_actions.get(gname)
        if order is None:
            raise LoadError(
                "natural action needs a group declared by permutations",
                ptr + "/natural",
            )
        return group, len(order[0]), [list(p) for p in order]
    points = _want_int(body.get("points"), ptr + "/points")
    images = _want(body.get("images"), list, ptr + "/images", "a list")
    if len(images) != group.size:
        raise LoadError("need one image row per group element", ptr + "/images")
    rows = []
    for i, row in enumerate(images):
        row = _want(row, list, "%s/images/%d" % (ptr, i), "a list")
        if len(row) != points or any(
            not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < points
            for x in row
        ):
            raise LoadError(
                "image row must list %d point indices" % points,
                "%s/images/%d" % (ptr, i),
            )
        rows.append(list(row))
    return group, points, rows


def _lookup(table, name, ptr):
    if not isinstance(name, str) or name not in table:
        raise LoadError("unknown reference %r" % name, ptr)
    return table[name]


def _ref(table, body, key, ptr):
    name = body.get(key)
    if name is None:
        raise LoadError("missing %r" % key, ptr)
    return _lookup(table, name, "%s/%s" % (ptr, key))


def _inclusion_matrix(body, ambient, sub, ptr):
    m = _parse_matrix(body.get("inclusion", []), sub.dim, ptr + "/inclusion")
    if m.nrows == 0 and sub.dim == 0:
        return Matrix.zero(ambient.dim, 0)
    return m


def _load_model(body, ptr):
    body = _want(body, dict, ptr, "an object")
    lines = _want(body.get("lines"), list, ptr + "/lines", "a list")
    roots = tuple(
        _parse_entry(z, "%s/lines/%d" % (ptr, i)) for i, z in enumerate(lines)
    )
    trunc = body.get("trunc")
    if trunc is not None:
        trunc = _want_int(trunc, ptr + "/trunc")
    return roots, trunc


_BLOCK_KEYS = (
    "induce",
    "chern",
    "todd",
    "rrg_iso",
    "rrg_zero_section",
    "rrg_general",
    "groupoid_checks",
)


def parse_scenario(data) -> Scenario:
    """Resolve and validate a decoded scenario document."""
    data = _want(data, dict, "", "a JSON object")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise LoadError("unsupported schema_version %r" % version, "/schema_version")
    sc = Scenario()
    if "trunc" in data:
        sc.trunc = _want_int(data["trunc"], "/trunc")
        if sc.trunc < 0:
            raise LoadError("truncation degree must be nonnegative", "/trunc")
    for name, body in _want(
        data.get("groups", {}), dict, "/groups", "an object"
    ).items():
        group, order = _load_group(name, body, "/groups/%s" % name)
        sc.groups[name] = group
        if order is not None:
            sc.perm_actions[name] = order
    for name, body in _want(
        data.get("embeddings", {}), dict, "/embeddings", "an object"
    ).items():
        sc.embeddings[name] = _load_embedding(sc, body, "/embeddings/%s" % name)
    for name, body in _want(
        data.get("representations", {}), dict, "/representations", "an object"
    ).items():
        sc.representations[name] = _load_representation(
            sc, body, "/representations/%s" % name
        )
    for name, body in _want(
        data.get("complexes", {}), dict, "/complexes", "an object"
    ).items():
        sc.complexes[name] = _load_complex(sc, body, "/complexes/%s" % name)
    for name, body in _want(
        data.get("charts", {}), dict, "/charts", "an object"
    ).items():
        body = _want(body, dict, "/charts/%s" % name, "an object")
        group = _ref(sc.groups, body, "group", "/charts/%s" % name)
        action = _ref(sc.representations, body, "action", "/charts/%s" % name)
        try:
            sc.charts[name] = LinearChart(group, action)
        except ValueError as exc:
            raise LoadError(str(exc), "/charts/%s" % name)
    for name, body in _want(
        data.get("models", {}), dict, "/models", "an object"
    ).items():
        sc.models[name] = _load_model(body, "/models/%s" % name)
    for name, body in _want(
        data.get("actions", {}), dict, "/actions", "an object"
    ).items():
        sc.actions[name] = _load_action(sc, body, "/actions/%s" % name)
    for key in _BLOCK_KEYS:
        blocks = _want(data.get(key, []), list, "/" + key, "a list")
        sc.blocks[key] = [
            _load_block(sc, key, b, "/%s/%d" % (key, i)) for i, b in enumerate(blocks)
        ]
    return sc


def _load_block(sc, kind, body, ptr):
    body = _want(body, dict, ptr, "an object")
    out = {"label": body.get("label"), "pointer": ptr}
    defer = bool(body.get("skip_validation", False))
    out["defer"] = defer
    if body.get("trunc") is not None:
        _want_int(body["trunc"], ptr + "/trunc")
    if kind == "induce":
        emb = _ref(sc.embeddings, body, "embedding", ptr)
        rep = _ref(sc.representations, body, "representation", ptr)
        if rep.group is not emb.source:
            raise LoadError(
                "representation must live over the embedding source",
                ptr + "/representation",
            )
        out.update(emb=emb, rep=rep)
    elif kind == "chern":
        chart = _ref(sc.charts, body, "chart", ptr)
        cx = _ref(sc.complexes, body, "complex", ptr)
        if cx.group is not chart.group:
            raise LoadError(
                "complex must live over the chart group", ptr + "/complex"
            )
        out.update(chart=chart, cx=cx, trunc=body.get("trunc"))
    elif kind == "todd":
        roots, trunc = _ref(sc.models, body, "model", ptr)
        out.update(roots=roots, trunc=body.get("trunc", trunc))
    elif kind == "rrg_iso":
        emb = _ref(sc.embeddings, body, "embedding", ptr)
        chart = _ref(sc.representations, body, "chart", ptr)
        cx = _ref(sc.complexes, body, "complex", ptr)
        weight = body.get("weight", "centralizer")
        build = lambda trunc, e=emb, ch=chart, c=cx: IsoSpatialScenario(e, ch, c)
        out.update(build=build, weight=weight, trunc=None)
        _prevalidate(out, ptr)
    elif kind == "rrg_zero_section":
        group = _ref(sc.groups, body, "group", ptr)
        sub = _ref(sc.representations, body, "sub", ptr)
        ambient = _ref(sc.representations, body, "ambient", ptr)
        cx = _ref(sc.complexes, body, "complex", ptr)
        incl = _inclusion_matrix(body, ambient, sub, ptr)
        trunc = body.get("trunc")
        euler = body.get("euler_factor", "include")
        build = lambda t, g=group, s=sub, a=ambient, m=incl, c=cx: ZeroSectionScenario(
            g, s, a, m, c, t
        )
        out.update(build=build, euler=euler, trunc=trunc)
        _prevalidate(out, ptr, sc.trunc)
    elif kind == "rrg_general":
        emb = _ref(sc.embeddings, body, "embedding", ptr)
        sub = _ref(sc.representations, body, "sub", ptr)
        ambient = _ref(sc.representations, body, "ambient", ptr)
        cx = _ref(sc.complexes, body, "complex", ptr)
        incl = _inclusion_matrix(body, ambient, sub, ptr)
        trunc = body.get("trunc")
        inversion = body.get("inversion", "dual")
        build = lambda t, e=emb, s=sub, a=ambient, m=incl, c=cx: GeneralScenario(
            e, s, a, m, c, t
        )
        out.update(build=build, inversion=inversion, trunc=trunc)
        _prevalidate(out, ptr, sc.trunc)
    elif kind == "groupoid_checks":
        if "action" in body:
            out.update(action=_ref(sc.actions, body, "action", ptr))
        elif "embedding" in body:
            out.update(gemb=_ref(sc.embeddings, body, "embedding", ptr))
        else:
            raise LoadError("groupoid check needs an action or an embedding", ptr)
    return out


def _prevalidate(block, ptr, default_trunc=None):
    """Run the deferred builder once at load unless validation is skipped."""
    if block["defer"]:
        return
    trunc = block.get("trunc")
    if trunc is None:
        trunc = default_trunc if default_trunc is not None else 0
    try:
        block["build"](trunc)
    except ValueError as exc:
        raise LoadError(str(exc), ptr)


def load_scenario(path) -> Scenario:
    """Read, decode, and fully validate a scenario file."""
    with open(path, "r") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise LoadError("invalid JSON: %s" % exc, "")
    return parse_scenario(data)


# -- command execution -------------------------------------------------------


class Flags:
    __slots__ = ("trunc", "json", "parallel")

    def __init__(self, trunc=None, json=False, parallel=1):
        self.trunc = trunc
        self.json = json
        self.parallel = max(1, int(parallel))


def _block_name(kind, index, block):
    label = block.get("label")
    return label if label else "%s[%d]" % (kind, index)


def _effective_trunc(scenario, block, flags):
    if flags.trunc is not None:
        return flags.trunc
    if block.get("trunc") is not None:
        return block["trunc"]
    return scenario.trunc


def _error_block(name, message):
    return {"name": name, "passed": False, "error": message, "classes": []}


def _run_induce(scenario, name, block, flags):
    emb, rep = block["emb"], block["rep"]
    chi = character(rep)
    slow = induced_character_sum(emb, chi)
    fast = pushforward_characters(emb, chi)
    classes = []
    for c in range(len(slow.values)):
        ok = slow.values[c] == fast.values[c]
        classes.append(
            {
                "class": c,
                "status": "pass" if ok else "fail",
                "lhs": str(slow.values[c]),
                "rhs": str(fast.values[c]),
            }
        )
    passed = all(e["status"] == "pass" for e in classes)
    return {"name": name, "passed": passed, "classes": classes}


def _run_chern(scenario, name, block, flags):
    cx, chart = block["cx"], block["chart"]
    problems = cx.validate()
    if problems:
        return _error_block(name, problems[0])
    trunc = _effective_trunc(scenario, block, flags)
    ch = delocalized_chern(chart, cx, trunc)
    comps = inertia_data(chart)
    rows = []
    for comp, series in zip(comps, ch.components):
        rows.append(
            {
                "class": comp.class_index,
                "element": chart.group.name(comp.element),
                "fixed_dim": comp.fixed_dim,
                "series": str(series),
            }
        )
    return {"name": name, "passed": True, "trunc": trunc, "components": rows}


def _run_todd(scenario, name, block, flags):
    trunc = _effective_trunc(scenario, block, flags)
    roots = block["roots"]
    model = NormalModel(
        [(z, i) for i, z in enumerate(roots)], trunc, num_vars=len(roots)
    )
    series = todd_delocalized(model)
    return {
        "name": name,
        "passed": True,
        "trunc": trunc,
        "lines": [str(z) for z in roots],
        "series": str(series),
    }


def _run_check_block(scenario, name, block, flags, checks):
    trunc = _effective_trunc(scenario, block, flags)
    try:
        sc = block["build"](trunc)
    except ValueError as exc:
        return _error_block(name, str(exc))
    reports = [chk(sc).to_dict() for chk in checks]
    passed = all(r["passed"] for r in reports)
    return {"name": name, "passed": passed, "checks": reports}


def _groupoid_items_for_action(action):
    group, points, images = action
    items = []

    def attempt(label, thunk):
        try:
            detail = thunk()
        except (ValueError, AssertionError) as exc:
            items.append({"check": label, "status": "fail", "detail": str(exc)})
            return None
        entry = {"check": label, "status": "pass"}
        if detail:
            entry["detail"] = detail
        items.append(entry)
        return True

    state = {}

    def build_base():
        state["base"] = FiniteGroupoid.translation(group, points, images)
        return "%d objects, %d arrows" % (
            state["base"].num_objects,
            state["base"].num_arrows,
        )

    if attempt("action-axioms", build_base) is None:
        return items

    def build_inertia():
        state["inertia"] = inertia(state["base"])
        return "%d loop objects" % state["inertia"].groupoid.num_objects

    if attempt("inertia-axioms", build_inertia) is None:
        return items

    def decompose():
        comps = morita_decompose_inertia(group, points, images)
        for comp in comps:
            if not comp.equivalence.is_morita():
                raise ValueError(
                    "component at class %d is not Morita" % comp.class_index
                )
        return "%d components" % len(comps)

    attempt("morita-decomposition", decompose)
    return items


def _groupoid_items_for_embedding(emb):
    items = []
    src = FiniteGroupoid.from_group(emb.source)
    dst = FiniteGroupoid.from_group(emb.target)
    functor = StrictFunctor(src, dst, [0], list(emb.mapping))
    morphism = GeneralizedMorphism.from_functor(functor)
    flags = classify_embedding(morphism)
    items.append(
        {
            "check": "bibundle-axioms",
            "status": "pass",
            "detail": "carrier size %d" % morphism.size,
        }
    )
    graph_flags = classify_embedding(morphism.graph())
    items.append(
        {
            "check": "graph-embedding",
            "status": "pass" if graph_flags.embedding else "fail",
        }
    )
    if flags.embedding:
        first, second = factorize(morphism)
        ok = (
            classify_embedding(first).iso_spatial
            and classify_embedding(second).stabilizer_preserving
            and find_isomorphism(first.compose(second), morphism) is not None
        )
        items.append(
            {"check": "factorize-round-trip", "status": "pass" if ok else "fail"}
        )
    else:
        items.append(
            {
                "check": "factorize-round-trip",
                "status": "skipped",
                "detail": "not an embedding",
            }
        )
    if flags.stabilizer_preserving:
        inherited = classify_embedding(inertia_of_morphism(morphism))
        items.append(
            {
                "check": "inertia-stabilizers",
                "status": "pass" if inherited.stabilizer_preserving else "fail",
            }
        )
    else:
        items.append(
            {
                "check": "inertia-stabilizers",
                "status": "skipped",
                "detail": "not stabilizer preserving",
            }
        )
    return items


def _run_groupoid_check(scenario, name, block, flags):
    if "action" in block:
        items = _groupoid_items_for_action(block["action"])
    else:
        items = _groupoid_items_for_embedding(block["gemb"])
    passed = all(i["status"] != "fail" for i in items)
    return {"name": name, "passed": passed, "items": items}


def _run_inertia(scenario, name, block, flags):
    group, points, images = block["action"]
    try:
        comps = morita_decompose_inertia(group, points, images)
    except ValueError as exc:
        return _error_block(name, str(exc))
    rows = []
    for comp in comps:
        rows.append(
            {
                "class": comp.class_index,
                "element": group.name(comp.element),
                "loops": len(comp.loop_objects),
                "model_group_order": comp.model_group.size,
                "orbits": [
                    {
                        "base_point": pm.base_point,
                        "stabilizer_order": pm.stabilizer.size,
                    }
                    for pm in comp.point_models
                ],
            }
        )
    return {"name": name, "passed": True, "components": rows}


def _collect_blocks(scenario, command):
    if command == "inertia":
        blocks = [
            {"label": label, "action": act}
            for label, act in sorted(scenario.actions.items())
        ]
        if not blocks:
            blocks = [
                {"label": label, "action": (g, 1, [[0]] * g.size)}
                for label, g in sorted(scenario.groups.items())
            ]
        return blocks, _run_inertia
    if command == "induce":
        return scenario.blocks.get("induce", []), _run_induce
    if command == "chern":
        return scenario.blocks.get("chern", []), _run_chern
    if command == "todd":
        return scenario.blocks.get("todd", []), _run_todd
    if command == "rrg-iso":
        def runner(sc, name, block, flags):
            weight = block["weight"]
            return _run_check_block(
                sc, name, block, flags,
                [lambda s: check_iso_spatial(s, weight=weight)],
            )
        return scenario.blocks.get("rrg_iso", []), runner
    if command == "rrg-zero-section":
        def runner(sc, name, block, flags):
            euler = block["euler"]
            return _run_check_block(
                sc, name, block, flags,
                [lambda s: check_zero_section(s, euler_factor=euler)],
            )
        return scenario.blocks.get("rrg_zero_section", []), runner
    if command == "rrg-general":
        def runner(sc, name, block, flags):
            inv = block["inversion"]
            return _run_check_block(
                sc, name, block, flags,
                [
                    lambda s: check_general_degree0(s, inversion=inv),
                    check_td_pullback,
                ],
            )
        return scenario.blocks.get("rrg_general", []), runner
    if command == "groupoid-check":
        blocks = scenario.blocks.get("groupoid_checks", [])
        if not blocks:
            blocks = [
                {"label": label, "action": act}
                for label, act in sorted(scenario.actions.items())
            ]
        return blocks, _run_groupoid_check
    raise ValueError("unknown command %r" % command)


def run(command, scenario, flags):
    """Execute one command over a scenario; returns (exit code, report)."""
    blocks, runner = _collect_blocks(scenario, command)
    named = [
        (_block_name(command, i, b), b) for i, b in enumerate(blocks)
    ]

    def evaluate(item):
        name, block = item
        return runner(scenario, name, block, flags)

    if flags.parallel > 1 and len(named) > 1:
        with ThreadPoolExecutor(max_workers=flags.parallel) as pool:
            results = list(pool.map(evaluate, named))
    else:
        results = [evaluate(item) for item in named]
    passed = all(r["passed"] for r in results)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "passed": passed,
        "blocks": results,
    }
    return (0 if passed else 1), report


# -- rendering ----------------------------------------------------------------


def _render_classes(lines, classes):
    for e in classes:
        parts = ["  class %d: %s" % (e["class"], e["status"])]
        if "lhs" in e:
            parts.append("lhs=%s" % e["lhs"])
        if "rhs" in e:
            parts.append("rhs=%s" % e["rhs"])
        if "detail" in e:
            parts.append("(%s)" % e["detail"])
        lines.append("  ".join(parts))


def render_text(report) -> str:
    lines = []
    for block in report["blocks"]:
        head = "%s %s: %s" % (
            report["command"],
            block["name"],
            "pass" if block["passed"] else "fail",
        )
        if "error" in block:
            head += "  (%s)" % block["error"]
        lines.append(head)
        if "classes" in block and block["classes"]:
            _render_classes(lines, block["classes"])
        for chk in block.get("checks", []):
            lines.append(
                "  %s [scenario %s]: %s"
                % (chk["check"], chk["scenario"], "pass" if chk["passed"] else "fail")
            )
            _render_classes(lines, chk["classes"])
        for row in block.get("components", []):
            if "series" in row:
                lines.append(
                    "  class %d (%s), fixed dim %d: %s"
                    % (row["class"], row["element"], row["fixed_dim"], row["series"])
                )
            else:
                lines.append(
                    "  class %d (%s): %d loops, model group order %d, orbits %s"
                    % (
                        row["class"],
                        row["element"],
                        row["loops"],
                        row["model_group_order"],
                        "+".join(
                            "pt/%d" % o["stabilizer_order"] for o in row["orbits"]
                        ),
                    )
                )
        if "series" in block:
            lines.append("  %s" % block["series"])
        for item in block.get("items", []):
            row = "  %s: %s" % (item["check"], item["status"])
            if item.get("detail"):
                row += "  (%s)" % item["detail"]
            lines.append(row)
    if not report["blocks"]:
        lines.append("%s: nothing to do" % report["command"])
    lines.append("OK" if report["passed"] else "FAILED")
    return "\n".join(lines) + "\n"


def render_json(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# -- entry point --------------------------------------------------------------


def _build_arg_parser():
    parser = argparse.ArgumentParser(
        prog="orbichern",
        description="Exact orbifold character calculus over scenario files.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name, help="run the %s command" % name)
        p.add_argument("scenario", help="path to a scenario JSON file")
        p.add_argument(
            "--trunc", type=int, default=None, help="series truncation degree"
        )
        p.add_argument(
            "--json", action="store_true", help="emit the machine-readable report"
        )
        p.add_argument(
            "--parallel", type=int, default=1, metavar="N",
            help="number of worker threads for independent blocks",
        )
    return parser


def main(argv=None) -> int:
    parser = _build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if args.trunc is not None and args.trunc < 0:
        print("error: --trunc must be nonnegative", file=sys.stderr)
        return 2
    if args.parallel < 1:
        print("error: --parallel must be positive", file=sys.stderr)
        return 2
    try:
        scenario = load_scenario(args.scenario)
    except LoadError as exc:
        print("load error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("load error: %s" % exc, file=sys.stderr)
        return 2
    flags = Flags(trunc=args.trunc, json=args.json, parallel=args.parallel)
    code, report = run(args.command, scenario, flags)
    out = render_json(report) if args.json else render_text(report)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
