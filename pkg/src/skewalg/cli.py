"""Command line interface: load JSON models, run computations, print reports.

Exit codes: 0 success, 1 mathematical failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .algebroid import (
    AlgebroidError,
    SkewAlgebroid,
    bracket,
    de_rham,
    hamiltonian_vf,
    is_almost_lie,
    is_lie,
    lie_obstructions,
    make_algebroid,
)
from .expr import ExprError, eval_expr, free_symbols, parse_expr, subst_expr, to_text
from .holonomy import PathSpec, check_admissible, make_path, relative_holonomy
from .modular import (
    make_metric,
    mechanical_hamiltonian,
    modular_form,
    relative_modular_class,
)
from .reduction import (
    chaplygin_sleigh,
    direct_product,
    graph_relation,
    make_morphism,
    morphism_check,
    morphism_modular_class,
    pullback_form,
    relation_modular_class,
    subalgebroid_check,
)

VERSION = 1
USAGE_ERROR = 2
MATH_FAILURE = 1


class ModelError(Exception):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass
class Model:
    algebroid: SkewAlgebroid
    metric: list | None = None
    paths: dict = field(default_factory=dict)
    subalgebroid: tuple | None = None


def fmt_num(v) -> str:
    return f"{float(v):.17g}"


def _names(doc, key, errors) -> list[str]:
    val = doc.get(key, [])
    if not isinstance(val, list) or not all(isinstance(s, str) for s in val):
        errors.append(f"/{key}: expected a list of names")
        return []
    return val


def _int(entry, key, ptr, errors):
    v = entry.get(key) if isinstance(entry, dict) else None
    if not isinstance(v, int) or isinstance(v, bool):
        errors.append(f"{ptr}/{key}: expected an integer")
        return None
    return v


def _parse(text, allowed, ptr, errors):
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = str(text)
    if not isinstance(text, str):
        errors.append(f"{ptr}: expected an expression string")
        return None
    try:
        return parse_expr(text, allowed)
    except ExprError as exc:
        errors.append(f"{ptr}: {exc}")
        return None


def model_from_dict(doc) -> Model:
    errors: list[str] = []
    if not isinstance(doc, dict):
        raise ModelError(["/: expected a JSON object"])
    if doc.get("version") != VERSION:
        errors.append(f"/version: expected {VERSION}")
    coords = _names(doc, "base_coords", errors)
    frame = _names(doc, "frame", errors)
    params = _names(doc, "params", errors)
    if not frame:
        errors.append("/frame: at least one frame name required")
    allowed = set(coords) | set(params)
    n, m = len(frame), len(coords)
    c = {}
    for idx, entry in enumerate(doc.get("c", []) or []):
        ptr = f"/c/{idx}"
        i, j, k = (_int(entry, key, ptr, errors) for key in ("i", "j", "k"))
        if None in (i, j, k):
            continue
        if i == j:
            errors.append(f"{ptr}: i = j violates antisymmetry")
            continue
        if not all(1 <= v <= n for v in (i, j, k)):
            errors.append(f"{ptr}: frame index out of range 1..{n}")
            continue
        key = (min(i, j), max(i, j), k)
        if key in c:
            errors.append(f"{ptr}: duplicate entry for c^{k}_{key[0]}{key[1]}")
            continue
        e = _parse(entry.get("expr"), allowed, ptr + "/expr", errors)
        if e is not None:
            c[key] = e if i < j else -e
    rho = {}
    for idx, entry in enumerate(doc.get("rho", []) or []):
        ptr = f"/rho/{idx}"
        i, a = _int(entry, "i", ptr, errors), _int(entry, "a", ptr, errors)
        if None in (i, a):
            continue
        if not (1 <= i <= n and 1 <= a <= m):
            errors.append(f"{ptr}: index out of range")
            continue
        if (i, a) in rho:
            errors.append(f"{ptr}: duplicate entry for rho^{a}_{i}")
            continue
        e = _parse(entry.get("expr"), allowed, ptr + "/expr", errors)
        if e is not None:
            rho[(i, a)] = e
    if errors:
        raise ModelError(errors)
    try:
        E = make_algebroid(m, n, c=c, rho=rho, coords=coords, frame=frame, params=params)
    except AlgebroidError as exc:
        raise ModelError([f"/: {exc}"]) from None
    metric = None
    if "metric" in doc:
        vals = doc["metric"]
        if not isinstance(vals, list) or len(vals) != n * n:
            errors.append(f"/metric: expected {n * n} entries (row-major)")
        else:
            exprs = [_parse(v, allowed, f"/metric/{q}", errors) for q, v in enumerate(vals)]
            if not errors:
                metric = [exprs[r * n:(r + 1) * n] for r in range(n)]
    paths = {}
    for name, spec in sorted((doc.get("paths") or {}).items()):
        ptr = f"/paths/{name}"
        if not isinstance(spec, dict):
            errors.append(f"{ptr}: expected an object with base and fiber")
            continue
        base = [_parse(v, {"t"}, f"{ptr}/base/{q}", errors) for q, v in enumerate(spec.get("base", []))]
        fiber = [_parse(v, {"t"}, f"{ptr}/fiber/{q}", errors) for q, v in enumerate(spec.get("fiber", []))]
        paths[name] = (base, fiber)
    sub = None
    if "subalgebroid" in doc:
        s = doc["subalgebroid"]
        n0, m0 = _int(s, "n0", "/subalgebroid", errors), _int(s, "m0", "/subalgebroid", errors)
        if n0 is not None and m0 is not None:
            if not (1 <= n0 <= n and 0 <= m0 <= m):
                errors.append("/subalgebroid: n0 or m0 out of range")
            else:
                sub = (n0, m0)
    if errors:
        raise ModelError(errors)
    return Model(E, metric, paths, sub)


def load_model(path: str) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ModelError([f"/: invalid JSON ({exc.msg} at line {exc.lineno})"]) from None
    return model_from_dict(doc)


def model_to_dict(model: Model) -> dict:
    E = model.algebroid
    doc = {
        "version": VERSION,
        "base_coords": list(E.coords),
        "frame": list(E.frame),
        "params": list(E.params),
        "c": [{"i": i, "j": j, "k": k, "expr": to_text(v)} for (i, j, k), v in sorted(E.c.items())],
        "rho": [{"i": i, "a": a, "expr": to_text(v)} for (i, a), v in sorted(E.rho.items())],
    }
    if model.metric is not None:
        doc["metric"] = [to_text(v) for row in model.metric for v in row]
    if model.paths:
        doc["paths"] = {
            k: {"base": [to_text(v) for v in b], "fiber": [to_text(v) for v in f]}
            for k, (b, f) in sorted(model.paths.items())
        }
    if model.subalgebroid is not None:
        doc["subalgebroid"] = {"n0": model.subalgebroid[0], "m0": model.subalgebroid[1]}
    return doc


# ------------------------------------------------------------------ helpers


def parse_bindings(text: str | None) -> dict:
    """Parse k=v,... bindings into exact values."""
    out = {}
    if not text:
        return out
    for part in text.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ValueError(f"bad binding {part!r}; expected name=value")
        k, v = part.split("=", 1)
        e = parse_expr(v.strip(), set())
        out[k.strip()] = eval_expr(e, {})
    return out


def _bind(E: SkewAlgebroid, bindings: dict) -> SkewAlgebroid:
    params = {k: v for k, v in bindings.items() if k in E.params}
    return E.substitute(params) if params else E


def _sections(E: SkewAlgebroid, text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != E.n:
        raise ValueError(f"section needs {E.n} comma-separated components")
    return E.section([parse_expr(p, set(E.scalar_symbols)) for p in parts])


def _value_text(v) -> str:
    if isinstance(v, Fraction):
        return fmt_num(v) if v.denominator != 1 else str(v.numerator)
    return fmt_num(v)


def _out(lines):
    sys.stdout.write("".join(line + "\n" for line in lines))


# ----------------------------------------------------------------- commands


def cmd_check(args) -> int:
    model = load_model(args.model)
    E = _bind(model.algebroid, parse_bindings(args.at))
    lie = is_lie(E, trials=args.samples)
    almost = is_almost_lie(E, trials=args.samples)
    mod = modular_form(E)
    lines = [f"lie: {str(lie).lower()}, almost_lie: {str(almost).lower()}, modular_form: {mod}"]
    if not lie:
        lines += [f"  {o}" for o in lie_obstructions(E, trials=args.samples)]
    ok = lie
    if model.subalgebroid is not None:
        rep = subalgebroid_check(E, *model.subalgebroid, samples=args.samples, tol=args.tol, seed=args.seed)
        lines.append(f"subalgebroid: {'ok' if rep else 'violated'}")
        lines += [f"  {v}" for v in rep.violations]
        ok = ok and rep.ok
    _out(lines)
    return 0 if ok else MATH_FAILURE


def cmd_modular(args) -> int:
    model = load_model(args.model)
    E = _bind(model.algebroid, parse_bindings(args.at))
    lines = [str(modular_form(E))]
    if args.relative:
        if model.subalgebroid is None:
            raise ValueError("model has no subalgebroid entry")
        lines.append(f"relative: {relative_modular_class(E, *model.subalgebroid)}")
    _out(lines)
    return 0


def cmd_bracket(args) -> int:
    E = _bind(load_model(args.model).algebroid, parse_bindings(args.at))
    X, Y = _sections(E, args.x), _sections(E, args.y)
    _out([str(bracket(E, X, Y))])
    return 0


def cmd_derham(args) -> int:
    E = _bind(load_model(args.model).algebroid, parse_bindings(args.at))
    allowed = set(E.scalar_symbols)
    if args.function is not None:
        form = E.function(parse_expr(args.function, allowed))
    else:
        coeffs = {}
        degree = None
        for term in args.term or []:
            if "=" not in term:
                raise ValueError(f"bad term {term!r}; expected i,j,...=expr")
            idx, expr = term.split("=", 1)
            key = tuple(int(s) for s in idx.split(",") if s.strip())
            if degree is None:
                degree = len(key)
            elif degree != len(key):
                raise ValueError("all terms must have the same degree")
            coeffs[key] = parse_expr(expr, allowed)
        if degree is None:
            raise ValueError("give --function or at least one --term")
        form = E.form(degree, coeffs)
    _out([str(de_rham(E, form))])
    return 0


def cmd_hamiltonian(args) -> int:
    model = load_model(args.model)
    bindings = parse_bindings(args.at)
    E = _bind(model.algebroid, bindings)
    if args.H is not None:
        H = parse_expr(args.H, set(E.scalar_symbols) | set(E.dual_coords))
    else:
        if model.metric is None:
            raise ValueError("give --H or a model with a metric")
        rows = [[subst_expr(v, {k: b for k, b in bindings.items() if k in model.algebroid.params}) for v in r]
                for r in model.metric]
        H = mechanical_hamiltonian(E, make_metric(E, rows))
    field_ = hamiltonian_vf(E, H)
    lines = [f"H = {to_text(H)}"]
    env = {k: v for k, v in bindings.items() if k not in E.params}
    for name, comp in zip(field_.coords, field_.components):
        line = f"d/d{name}: {to_text(comp)}"
        if env and free_symbols(comp) <= set(env):
            line += f" = {_value_text(eval_expr(comp, env))}"
        lines.append(line)
    _out(lines)
    return 0


def cmd_sleigh(args) -> int:
    vals = {}
    for k in ("m", "J", "a", "b"):
        text = getattr(args, k)
        vals[k] = None if text is None else parse_expr(text, set())
    D, mod = chaplygin_sleigh(vals["m"], vals["J"], vals["a"], vals["b"], complement=args.complement)
    lines = []
    numeric = not D.params
    for k in (1, 2):
        v = D.struct(1, 2, k)
        lines.append(f"c^{k}_12 = {fmt_num(eval_expr(v, {})) if numeric else to_text(v)}")
    rep = mod.representative
    for i in (1, 2):
        v = rep.coeffs.get((i,))
        text = "0" if v is None else (fmt_num(eval_expr(v, {})) if numeric else to_text(v))
        lines.append(f"mod(D)_{i} = {text}")
    lines.append(f"mod(D) = {mod}")
    _out(lines)
    return 0


def cmd_product(args) -> int:
    E1 = load_model(args.model).algebroid
    E2 = load_model(args.other).algebroid
    P, p1, p2 = direct_product(E1, E2)
    mod = modular_form(P).representative
    expected = pullback_form(p1, modular_form(E1).representative) + pullback_form(p2, modular_form(E2).representative)
    ok = mod.equals(expected)
    _out([
        f"dims: m={P.m} n={P.n}",
        f"frame: {' '.join(P.frame)}",
        f"modular_form: {mod}",
        f"product_formula: {str(ok).lower()}",
    ])
    return 0 if ok else MATH_FAILURE


def _path(model: Model, E0: SkewAlgebroid, name: str | None) -> PathSpec:
    if not model.paths:
        raise ValueError("model has no paths")
    if name is None:
        name = sorted(model.paths)[0]
    if name not in model.paths:
        raise ValueError(f"unknown path {name!r}; available: {', '.join(sorted(model.paths))}")
    base, fiber = model.paths[name]
    return make_path(E0, base, fiber)


def cmd_holonomy(args) -> int:
    from .reduction import restrict

    model = load_model(args.model)
    E = _bind(model.algebroid, parse_bindings(args.at))
    if model.subalgebroid is None:
        raise ValueError("model has no subalgebroid entry")
    n0, m0 = model.subalgebroid
    E0 = restrict(E, n0, m0)
    p = _path(model, E0, args.path)
    adm = check_admissible(E0, p, tol=args.tol_admissible)
    if not adm:
        _out([f"admissible: false (max defect {fmt_num(adm.max_defect)})"])
        return MATH_FAILURE
    res = relative_holonomy(E, n0, m0, p, steps=args.steps)
    ok = res.relative_error <= args.tol
    _out([
        f"ode_value: {fmt_num(res.ode_value)}",
        f"formula_value: {fmt_num(res.formula_value)}",
        f"relative_error: {fmt_num(res.relative_error)}",
        f"agree: {str(ok).lower()}",
    ])
    return 0 if ok else MATH_FAILURE


def _matrix(text: str, E1: SkewAlgebroid):
    rows = [r for r in text.split(";")]
    return [[parse_expr(v.strip(), set(E1.scalar_symbols)) for v in r.split(",")] for r in rows]


def cmd_relation(args) -> int:
    E1 = load_model(args.model).algebroid
    E2 = load_model(args.other).algebroid
    F = _matrix(args.map, E1)
    phi = None
    if args.base is not None:
        phi = [parse_expr(v.strip(), set(E1.scalar_symbols)) for v in args.base.split(",")] if args.base else []
    mor = make_morphism(E1, E2, F, phi)
    rep = morphism_check(mor, samples=args.samples, tol=args.tol, seed=args.seed)
    lines = [f"morphism: {'ok' if rep else 'violated'}"]
    lines += [f"  {v}" for v in rep.violations]
    if not rep:
        _out(lines)
        return MATH_FAILURE
    mc = morphism_modular_class(mor, check=False)
    rc = relation_modular_class(graph_relation(mor))
    same = mc.representative.equals(rc)
    lines += [
        f"morphism_class: {mc}",
        f"graph_relation_class: {rc}",
        f"agree: {str(same).lower()}",
    ]
    _out(lines)
    return 0 if same else MATH_FAILURE


def cmd_dump(args) -> int:
    model = load_model(args.model)
    sys.stdout.write(json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n")
    return 0


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skewalg", description="Skew algebroid computations on JSON models.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_, model=True):
        p = sub.add_parser(name, help=help_)
        if model:
            p.add_argument("model", help="model JSON file")
        p.add_argument("--samples", type=int, default=32)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--at", default=None, help="bindings k=v,... for parameters or coordinates")
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "Lie / almost-Lie checks and the modular form")
    p = add("modular", cmd_modular, "modular form representative")
    p.add_argument("--relative", action="store_true", help="also print the relative class of the subalgebroid")
    p = add("bracket", cmd_bracket, "bracket of two sections")
    p.add_argument("--x", required=True, help="components of X, comma separated")
    p.add_argument("--y", required=True, help="components of Y, comma separated")
    p = add("derham", cmd_derham, "de Rham derivative of a form")
    p.add_argument("--function", default=None)
    p.add_argument("--term", action="append", help="i,j,...=expr (repeatable)")
    p = add("hamiltonian", cmd_hamiltonian, "Hamiltonian vector field on the dual bundle")
    p.add_argument("--H", default=None, help="Hamiltonian; defaults to the model metric's kinetic energy")
    p = add("sleigh", cmd_sleigh, "Chaplygin sleigh projection", model=False)
    for k in ("m", "J", "a", "b"):
        p.add_argument(f"--{k}", default=None, help="value; omit to keep symbolic")
    p.add_argument("--complement", choices=("paper", "metric"), default="paper")
    p = add("product", cmd_product, "direct product and its modular form")
    p.add_argument("other", help="second model JSON file")
    p = add("holonomy", cmd_holonomy, "relative holonomy along a model path")
    p.add_argument("--path", default=None)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--tol-admissible", type=float, default=1e-8)
    p.set_defaults(tol=1e-6)
    p = add("relation", cmd_relation, "morphism check and modular classes of a morphism and its graph")
    p.add_argument("other", help="target model JSON file")
    p.add_argument("--map", required=True, help="fiber matrix rows separated by ';'")
    p.add_argument("--base", default=None, help="base map components, comma separated")
    add("dump", cmd_dump, "print the validated model as canonical JSON")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ModelError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, ExprError) as exc:
        if isinstance(exc, AlgebroidError):
            print(f"failure: {exc}", file=sys.stderr)
            return MATH_FAILURE
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
