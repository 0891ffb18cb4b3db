"""Declarative spec files and machine-readable reports (JSON, format version 1)."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import algtwist as alg
from . import cotwist, equiv, tw, zoo
from .errors import ParseError, TwistcoError, ValidationError
from .functionals import Functional
from .linalg import Field, LinMap
from .report import Check, Report
from .structures import Algebra, Bialgebra, Coalgebra, check_algebra, check_bialgebra, check_coalgebra

SPEC_FORMAT = "twistco-spec"
REPORT_FORMAT = "twistco-report"
VERSION = 1


@dataclass
class Spec:
    field: Field
    objects: dict[str, Any] = field(default_factory=dict)
    functionals: dict[str, Functional] = field(default_factory=dict)
    twists: dict[str, cotwist.Twist] = field(default_factory=dict)
    alg_twists: dict[str, alg.AlgTwist] = field(default_factory=dict)
    tasks: list[dict] = field(default_factory=list)


# -- parsing ------------------------------------------------------------------


def _scalar(f: Field, x, where: str):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ValidationError(f"{where}: scalars must be integers or \"p/q\" strings, got {x!r}")
    try:
        return f.coerce(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{where}: bad scalar {x!r}: {exc}") from None


def _require(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise ValidationError(f"{where}: missing key {key!r}")
    return d[key]


def _index(x, n: int, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n:
        raise ValidationError(f"{where}: index {x!r} out of range 0..{n - 1}")
    return x


def _vector(f: Field, xs, n: int, where: str) -> list:
    if not isinstance(xs, list) or len(xs) != n:
        raise ValidationError(f"{where}: expected a list of {n} scalars")
    return [_scalar(f, x, f"{where}[{i}]") for i, x in enumerate(xs)]


def _coalgebra(name: str, f: Field, d: dict, where: str) -> Coalgebra:
    n = _require(d, "dim", where)
    if not isinstance(n, int) or n <= 0:
        raise ValidationError(f"{where}.dim: expected a positive integer")
    delta: dict[int, dict] = {}
    for t, row in enumerate(_require(d, "delta", where)):
        w = f"{where}.delta[{t}]"
        if not isinstance(row, list) or len(row) != 4:
            raise ValidationError(f"{w}: expected [i, j, k, coefficient]")
        i, j, k = (_index(x, n, w) for x in row[:3])
        delta.setdefault(i, {})[(j, k)] = _scalar(f, row[3], w)
    counit = _vector(f, _require(d, "counit", where), n, f"{where}.counit")
    return Coalgebra.from_constants(name, n, delta, counit, f)


def _algebra(name: str, f: Field, d: dict, where: str) -> Algebra:
    n = _require(d, "dim", where)
    if not isinstance(n, int) or n <= 0:
        raise ValidationError(f"{where}.dim: expected a positive integer")
    mul: dict[tuple, dict] = {}
    for t, row in enumerate(_require(d, "mul", where)):
        w = f"{where}.mul[{t}]"
        if not isinstance(row, list) or len(row) != 4:
            raise ValidationError(f"{w}: expected [i, j, k, coefficient]")
        i, j, k = (_index(x, n, w) for x in row[:3])
        mul.setdefault((i, j), {})[k] = _scalar(f, row[3], w)
    unit = _vector(f, _require(d, "unit", where), n, f"{where}.unit")
    return Algebra.from_constants(name, n, mul, unit, f)


def _object(name: str, f: Field, d: dict):
    where = f"objects.{name}"
    if not isinstance(d, dict):
        raise ValidationError(f"{where}: expected an object")
    if "zoo" in d:
        try:
            return zoo.get(d["zoo"], f)
        except KeyError:
            raise ValidationError(f"{where}.zoo: unknown zoo object {d['zoo']!r}") from None
    c = _coalgebra(name, f, d["coalgebra"], f"{where}.coalgebra") if "coalgebra" in d else None
    a = _algebra(name, f, d["algebra"], f"{where}.algebra") if "algebra" in d else None
    if c is None and a is None:
        raise ValidationError(f"{where}: needs \"zoo\", \"coalgebra\" or \"algebra\"")
    if c is not None and a is not None:
        if c.dim != a.dim:
            raise ValidationError(f"{where}: coalgebra and algebra dimensions differ")
        a = Algebra(a.name, a.mul.relabel(c.space * c.space, c.space), a.unit.relabel(None, c.space))
        return Bialgebra(name, c, a)
    return c if c is not None else a


def _pair(spec: Spec, d: dict, where: str, kind: str):
    on = _require(d, "on", where)
    if not isinstance(on, list) or len(on) != 2:
        raise ValidationError(f"{where}.on: expected two object names")
    out = []
    for i, name in enumerate(on):
        if name not in spec.objects:
            raise ValidationError(f"{where}.on[{i}]: unknown object {name!r}")
        obj = spec.objects[name]
        attr = "delta" if kind == "coalgebra" else "mul"
        if not hasattr(obj, attr):
            raise ValidationError(f"{where}.on[{i}]: {name!r} is not a {kind}")
        out.append(obj)
    return out


def _matrix(f: Field, d: dict, rows: int, cols: int, where: str) -> np.ndarray:
    if "matrix" in d:
        m = d["matrix"]
        if not isinstance(m, list) or len(m) != rows:
            raise ValidationError(f"{where}.matrix: expected {rows} rows")
        return f.array([_vector(f, r, cols, f"{where}.matrix[{i}]") for i, r in enumerate(m)])
    if "entries" in d:
        out = f.zeros((rows, cols))
        for t, e in enumerate(d["entries"]):
            w = f"{where}.entries[{t}]"
            if not isinstance(e, list) or len(e) != 3:
                raise ValidationError(f"{w}: expected [row, column, coefficient]")
            out[_index(e[0], rows, w), _index(e[1], cols, w)] = _scalar(f, e[2], w)
        return out
    raise ValidationError(f"{where}: needs \"flip\", \"matrix\", \"entries\" or a generator")


def _twist(spec: Spec, name: str, d: dict) -> cotwist.Twist:
    where = f"twists.{name}"
    C, D = _pair(spec, d, where, "coalgebra")
    if d.get("flip"):
        return cotwist.Twist.flip(C, D)
    if "functional" in d:
        phi = spec.functionals.get(d["functional"])
        if phi is None or phi.C is not C or phi.D is not D:
            raise ValidationError(f"{where}.functional: unknown or mismatched functional {d['functional']!r}")
        return tw.F_inv(phi).twist
    n = C.dim * D.dim
    return cotwist.Twist.from_matrix(C, D, _matrix(spec.field, d, n, n, where))


def _alg_twist(spec: Spec, name: str, d: dict) -> alg.AlgTwist:
    where = f"alg_twists.{name}"
    A, B = _pair(spec, d, where, "algebra")
    if d.get("flip"):
        return alg.AlgTwist.flip(A, B)
    n = A.dim * B.dim
    if "element" in d:
        return alg.G_inv(A, B, _vector(spec.field, d["element"], n, f"{where}.element"))
    return alg.AlgTwist.from_matrix(A, B, _matrix(spec.field, d, n, n, where))


def parse_spec(text: str) -> Spec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise ValidationError("top level must be an object")
    if raw.get("format") != SPEC_FORMAT or raw.get("version") != VERSION:
        raise ValidationError(f"expected format {SPEC_FORMAT!r} version {VERSION}")
    try:
        f = Field.parse(raw.get("field", "Q"))
    except ValueError as exc:
        raise ValidationError(f"field: {exc}") from None
    spec = Spec(f)
    for name, d in raw.get("objects", {}).items():
        spec.objects[name] = _object(name, f, d)
    for name, d in raw.get("functionals", {}).items():
        where = f"functionals.{name}"
        C, D = _pair(spec, d, where, "coalgebra")
        coeffs = _vector(f, _require(d, "coeffs", where), C.dim * D.dim, f"{where}.coeffs")
        spec.functionals[name] = Functional(C, D, coeffs)
    for name, d in raw.get("twists", {}).items():
        spec.twists[name] = _twist(spec, name, d)
    for name, d in raw.get("alg_twists", {}).items():
        spec.alg_twists[name] = _alg_twist(spec, name, d)
    tasks = raw.get("tasks", [])
    if not isinstance(tasks, list):
        raise ValidationError("tasks: expected a list")
    for i, task in enumerate(tasks):
        _validate_task(spec, task, f"tasks[{i}]")
        spec.tasks.append(task)
    return spec


def load_spec(path) -> Spec:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


# -- tasks ----------------------------------------------------------------------------


def _get(spec: Spec, kind: str, name, where: str):
    table = {
        "object": spec.objects,
        "twist": spec.twists,
        "alg_twist": spec.alg_twists,
        "functional": spec.functionals,
    }[kind]
    if not isinstance(name, str) or name not in table:
        raise ValidationError(f"{where}: unknown {kind} {name!r}")
    return table[name]


def _fmt_vec(f: Field, xs) -> list[str]:
    return [f.fmt(x) for x in xs]


def _task_axioms(spec, t):
    obj = _get(spec, "object", t.get("object"), "object")
    if isinstance(obj, Bialgebra):
        return check_bialgebra(obj)
    return check_coalgebra(obj) if isinstance(obj, Coalgebra) else check_algebra(obj)


def _task_octagon(spec, t):
    return cotwist.check_octagon(_get(spec, "twist", t.get("twist"), "twist"))


def _task_pentagons(spec, t):
    return cotwist.check_pentagons(_get(spec, "twist", t.get("twist"), "twist"))


def _task_conormal(spec, t):
    return cotwist.conormality_report(_get(spec, "twist", t.get("twist"), "twist"))


def _task_counit(spec, t):
    psi = _get(spec, "twist", t.get("twist"), "twist")
    eps = cotwist.solve_counit(psi)
    rep = Report("counit")
    rep.add(Check("exists", eps is not None))
    if eps is not None:
        rep.derived["counit"] = eps.strings()
    return rep


def _task_z_conormal(spec, t):
    psi = _get(spec, "twist", t.get("twist"), "twist")
    if "z" in t:
        Z = _get(spec, "twist", t["z"], "z").psi
    else:
        eps = cotwist.solve_counit(psi)
        if eps is None:
            rep = Report("z_conormal")
            rep.add(Check("counit_exists", False))
            return rep
        Z = cotwist.z_witness(eps)
    return cotwist.z_conormality_report(psi, Z)


def _task_tw(spec, t):
    psi = _get(spec, "twist", t.get("twist"), "twist")
    rep = tw.is_in_tw(psi)
    if rep.passed:
        rep.derived["functional"] = tw.F(psi).strings()
    return rep


def _task_conormalize(spec, t):
    psi = _get(spec, "twist", t.get("twist"), "twist")
    rep = Report("conormalize")
    res = cotwist.conormalize(psi)
    rep.add(Check("mu_invertible", res is not None))
    if res is not None:
        tilde, mu = res
        left, right = cotwist.is_conormal(tilde)
        rep.add(Check("tilde_conormal", left and right))
        rep.add(Check("tilde_octagon", cotwist.check_octagon(tilde).passed))
        rep.derived["tilde_is_flip"] = tilde.is_flip()
    return rep


def _task_double_iso(spec, t):
    return tw.double_isomorphism(_get(spec, "functional", t.get("functional"), "functional"))


def _task_functional_counit(spec, t):
    phi = _get(spec, "functional", t.get("functional"), "functional")
    eps = tw.counit_of_functional_twist(phi)
    rep = Report("functional_counit")
    rep.add(Check("exists", eps is not None))
    if eps is not None:
        rep.derived["counit"] = eps.strings()
    return rep


def _theta(spec, t, t1, t2):
    if "theta" in t:
        V = t1.C.space * t1.D.space
        d = t["theta"]
        m = _matrix(spec.field, d, V.dim, V.dim, "theta")
        return LinMap(V, V, m, spec.field)
    found = equiv.search_theta(t1, t2, t.get("search", "factorized"), t.get("budget"))
    return found


def _task_equivalence(spec, t, strong: bool = False):
    names = t.get("twists")
    if not isinstance(names, list) or len(names) != 2:
        raise ValidationError("twists: expected two twist names")
    t1, t2 = (_get(spec, "twist", n, "twists") for n in names)
    if "theta" not in t and strong:
        theta = equiv.search_strong_isomorphism(t1, t2, t.get("search", "factorized"), t.get("budget"))
    else:
        theta = _theta(spec, t, t1, t2)
    name = "strong_isomorphism" if strong else "equivalence"
    if theta is None:
        rep = Report(name)
        rep.add(Check("theta_found", False))
        return rep
    rep = equiv.is_strongly_isomorphic(t1, t2, theta) if strong else equiv.are_equivalent(t1, t2, theta)
    rep.derived["theta"] = [_fmt_vec(spec.field, row) for row in theta.matrix]
    return rep


def _task_assoc(spec, t):
    return alg.check_assoc(_get(spec, "alg_twist", t.get("alg_twist"), "alg_twist"))


def _task_alg_pentagons(spec, t):
    return alg.check_assoc_pentagons(_get(spec, "alg_twist", t.get("alg_twist"), "alg_twist"))


def _task_normal(spec, t):
    return alg.normality_report(_get(spec, "alg_twist", t.get("alg_twist"), "alg_twist"))


def _task_unit(spec, t):
    psi = _get(spec, "alg_twist", t.get("alg_twist"), "alg_twist")
    z = alg.solve_unit(psi)
    rep = Report("unit")
    rep.add(Check("exists", z is not None))
    if z is not None:
        rep.derived["unit"] = _fmt_vec(spec.field, z)
        rep.extend(alg.unit_from_z(psi, z))
    return rep


def _task_normalize(spec, t):
    psi = _get(spec, "alg_twist", t.get("alg_twist"), "alg_twist")
    tilde, _ = alg.normalize(psi)
    rep = Report("normalize")
    rep.add(Check("tilde_normal", all(alg.is_normal(tilde))))
    rep.add(Check("tilde_associative", alg.check_assoc(tilde).passed))
    rep.derived["tilde_is_flip"] = tilde.is_flip()
    return rep


def _task_tw_alg(spec, t):
    psi = _get(spec, "alg_twist", t.get("alg_twist"), "alg_twist")
    rep = alg.is_in_tw_alg(psi)
    rep.derived["G"] = _fmt_vec(spec.field, alg.G(psi))
    return rep


def _task_zero_divisors(spec, t):
    psi = _get(spec, "alg_twist", t.get("alg_twist"), "alg_twist")
    w = alg.zero_divisor_witness(psi)
    rep = Report("zero_divisors")
    rep.add(Check("witness_found", w is not None))
    if w is not None:
        rep.derived["x"] = _fmt_vec(spec.field, w[0])
        rep.derived["y"] = _fmt_vec(spec.field, w[1])
    return rep


def _task_dual(spec, t):
    psi = _get(spec, "twist", t.get("twist"), "twist")
    tc = cotwist.twisted_coalgebra(psi)
    ta = alg.dualize(tc)
    rep = Report("dual")
    rep.add(Check(
        "associativity_matches_octagon",
        alg.check_assoc(ta.twist).passed == cotwist.check_octagon(psi).passed,
    ))
    unit = alg.solve_unit(ta.twist)
    same = (unit is None) == (tc.counit is None)
    if same and unit is not None:
        same = list(unit) == list(tc.counit.coeffs)
    rep.add(Check("unit_matches_counit", same))
    return rep


COALGEBRA_TASKS: dict[str, Callable] = {
    "axioms": _task_axioms,
    "octagon": _task_octagon,
    "pentagons": _task_pentagons,
    "conormal": _task_conormal,
    "counit": _task_counit,
    "z_conormal": _task_z_conormal,
    "tw": _task_tw,
    "conormalize": _task_conormalize,
    "double_isomorphism": _task_double_iso,
    "functional_counit": _task_functional_counit,
    "dual": _task_dual,
}
EQUIV_TASKS: dict[str, Callable] = {
    "equivalence": _task_equivalence,
    "strong_isomorphism": lambda spec, t: _task_equivalence(spec, t, strong=True),
}
ALGEBRA_TASKS: dict[str, Callable] = {
    "axioms": _task_axioms,
    "assoc": _task_assoc,
    "alg_pentagons": _task_alg_pentagons,
    "normal": _task_normal,
    "unit": _task_unit,
    "normalize": _task_normalize,
    "tw_alg": _task_tw_alg,
    "zero_divisors": _task_zero_divisors,
}
TASKS = {**COALGEBRA_TASKS, **EQUIV_TASKS, **ALGEBRA_TASKS}

_TASK_REFS = {
    "object": "object",
    "twist": "twist",
    "z": "twist",
    "functional": "functional",
    "alg_twist": "alg_twist",
}


def _validate_task(spec: Spec, task, where: str) -> None:
    if not isinstance(task, dict):
        raise ValidationError(f"{where}: expected an object")
    check = task.get("check")
    if check not in TASKS:
        raise ValidationError(f"{where}.check: unknown check {check!r}")
    if "expect" in task and task["expect"] not in ("pass", "fail"):
        raise ValidationError(f"{where}.expect: must be \"pass\" or \"fail\"")
    for key, kind in _TASK_REFS.items():
        if key in task:
            _get(spec, kind, task[key], f"{where}.{key}")
    if "twists" in task:
        names = task["twists"]
        if not isinstance(names, list) or len(names) != 2:
            raise ValidationError(f"{where}.twists: expected two twist names")
        for i, n in enumerate(names):
            _get(spec, "twist", n, f"{where}.twists[{i}]")


def run_spec(spec: Spec, allowed: dict[str, Callable] | None = None, timing: bool = True) -> dict:
    """Execute the tasks in order and assemble a report document."""
    allowed = TASKS if allowed is None else allowed
    results = []
    for i, task in enumerate(spec.tasks):
        check = task["check"]
        if check not in allowed:
            continue
        name = task.get("name", f"{check}#{i}")
        expect = task.get("expect", "pass")
        start = time.perf_counter()
        entry: dict[str, Any] = {"name": name, "check": check}
        try:
            rep = allowed[check](spec, task)
            outcome = "pass" if rep.passed else "fail"
            entry["outcome"] = outcome
            entry["verdict"] = "pass" if outcome == expect else "fail"
            entry["checks"] = [c.to_dict() for c in rep.checks]
            entry["derived"] = _jsonable(rep.derived, spec.field)
        except (TwistcoError, ValueError) as exc:
            entry["verdict"] = "error"
            entry["error"] = f"{type(exc).__name__}: {exc}"
        if timing:
            entry["seconds"] = round(time.perf_counter() - start, 6)
        results.append(entry)
    summary = {v: sum(1 for r in results if r["verdict"] == v) for v in ("pass", "fail", "error")}
    return {
        "format": REPORT_FORMAT,
        "version": VERSION,
        "field": spec.field.name,
        "tasks": results,
        "summary": summary,
    }


def _jsonable(x, f: Field):
    if isinstance(x, dict):
        return {str(k): _jsonable(v, f) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v, f) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v, f) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (Fraction, np.integer)):
        return f.fmt(x)
    return x


def exit_code(report: dict) -> int:
    s = report["summary"]
    if s["error"]:
        return 2
    return 1 if s["fail"] else 0


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# -- zoo export -------------------------------------------------------------------


def _triples_coalgebra(C) -> list:
    f = C.field
    n = C.dim
    out = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c = C.dc[i, j, k]
                if c != 0:
                    out.append([i, j, k, _json_scalar(f, c)])
    return out


def _triples_algebra(A) -> list:
    f = A.field
    n = A.dim
    out = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c = A.mc[k, i, j]
                if c != 0:
                    out.append([i, j, k, _json_scalar(f, c)])
    return out


def _json_scalar(f: Field, c):
    s = f.fmt(c)
    return int(s) if "/" not in s else s


def export_object(obj) -> dict:
    f = obj.field
    d: dict[str, Any] = {}
    if hasattr(obj, "delta"):
        d["coalgebra"] = {
            "dim": obj.dim,
            "delta": _triples_coalgebra(obj),
            "counit": [_json_scalar(f, x) for x in obj.ec],
        }
    if hasattr(obj, "mul"):
        d["algebra"] = {
            "dim": obj.dim,
            "mul": _triples_algebra(obj),
            "unit": [_json_scalar(f, x) for x in obj.one],
        }
    return d


def export_zoo(name: str, f: Field) -> dict:
    obj = zoo.get(name, f)
    return {
        "format": SPEC_FORMAT,
        "version": VERSION,
        "field": f.name,
        "objects": {name: export_object(obj)},
        "tasks": [{"name": f"{name} axioms", "check": "axioms", "object": name}],
    }
