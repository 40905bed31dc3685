"""Command line front end.

    intehrhart chambers --input problem.json
    intehrhart ehrhart  --input problem.json --variant conebycone --k 1 --eval 1/2,1
    intehrhart plotdata --input problem.json --grid 0,1,1/100
    intehrhart oracle   --input problem.json

Exit codes: 0 success, 2 bad input, 3 domain error (OnWall, EmptyChamber, ...),
4 resource bound exceeded, 1 oracle disagreement.
"""

import argparse
import json
import sys
from fractions import Fraction

import jsonschema

from .exactlin import Subspace
from .oracle import ResourceBound, VPolytope, brute_intermediate_sum
from .parametric import (EmptyChamber, NormalsInsufficient, NotSimple, OnWall,
                         OutsideClosure, ParametricPolytope, ResidueCancellationFailure,
                         Unbounded, Weight, chamber_near, chamber_of, chamber_qp,
                         enumerate_bases, minkowski_support, simplex_system)
from .steppoly import qp_eval, to_json_obj, to_text

SCHEMA_VERSION = 1

_num = {"type": ["string", "integer"]}
_vec = {"type": "array", "items": _num}
_mat = {"type": "array", "items": _vec}

PROBLEM_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "mu": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "simplex": _mat,
        "weight": {"type": "array", "items": {
            "type": "object",
            "properties": {"coeff": _num, "ell": _vec, "power": {"type": "integer", "minimum": 0}},
            "required": ["ell", "power"],
        }},
        "b": _vec,
        "ray_b0": _vec,
        "minkowski": {"type": "object", "properties": {
            "polytopes": {"type": "array", "items": _mat},
            "b": _mat,
        }},
        "samples": _mat,
        "subspace": {"oneOf": [{"enum": ["zero", "full"]}, _mat]},
        "variant": {"enum": ["exact", "barvinok", "conebycone"]},
        "k": {"type": "integer", "minimum": 0},
        "eval": {"type": "array"},
        "columns": {"type": "array", "items": {"type": "object", "properties": {
            "variant": {"enum": ["exact", "barvinok", "conebycone"]},
            "k": {"type": "integer", "minimum": 0},
            "subspace": {"oneOf": [{"enum": ["zero", "full"]}, _mat]},
            "label": {"type": "string"},
        }}},
    },
    "anyOf": [{"required": ["mu"]}, {"required": ["simplex"]}],
}

DOMAIN_ERRORS = (OnWall, EmptyChamber, NotSimple, OutsideClosure, NormalsInsufficient,
                 Unbounded, ResidueCancellationFailure)


class InputError(ValueError):
    pass


class OracleMismatch(AssertionError):
    pass


def rat(x):
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError("not an exact rational: %r" % (x,)) from exc


def fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


def decimal12(x):
    """Exact rational rendered with 12 digits after the point (round half away from zero)."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    q = abs(x) * 10 ** 12
    n = q.numerator // q.denominator
    if 2 * (q - n) >= 1:
        n += 1
    whole, part = divmod(n, 10 ** 12)
    if n == 0:
        sign = ""
    return "%s%d.%012d" % (sign, whole, part)


# -- problem parsing ------------------------------------------------------------

def load_problem(obj):
    try:
        jsonschema.validate(obj, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(exc.message) from exc
    prob = dict(obj)
    if "simplex" in obj:
        pp, b = simplex_system([[rat(x) for x in v] for v in obj["simplex"]])
        prob.setdefault("ray_b0", [fmt(x) for x in b])
    else:
        pp = ParametricPolytope(obj["mu"])
    prob["pp"] = pp
    d = pp.d
    if "weight" in obj:
        terms = []
        for w in obj["weight"]:
            ell = [rat(x) for x in w["ell"]]
            if len(ell) != d:
                raise InputError("weight form has the wrong length")
            terms.append((rat(w.get("coeff", 1)), ell, w["power"]))
        prob["h"] = Weight(terms)
    else:
        prob["h"] = Weight.one(d)
    prob["L"] = parse_subspace(obj.get("subspace", "zero"), d)
    for key in ("b", "ray_b0"):
        if key in prob:
            v = [rat(x) for x in prob[key]]
            if len(v) != pp.N:
                raise InputError("%s has length %d, expected %d" % (key, len(v), pp.N))
            prob[key] = v
    return prob


def parse_subspace(s, d):
    if s == "zero":
        return Subspace.zero(d)
    if s == "full":
        return Subspace.full(d)
    rows = [[rat(x) for x in r] for r in s]
    if any(len(r) != d for r in rows):
        raise InputError("subspace generators have the wrong length")
    return Subspace.span(rows, d)


def parse_list(text):
    return [rat(x) for x in text.split(",") if x.strip()]


def parameter_setup(prob):
    """(chamber, linear map or None, variable names, b -> parameter for points)."""
    pp = prob["pp"]
    if "ray_b0" in prob:
        b0 = prob["ray_b0"]
        return chamber_near(pp, b0), [[x] for x in b0], ["t"]
    if "minkowski" in prob:
        mk = prob["minkowski"]
        if "polytopes" in mk:
            bs = minkowski_support([[[rat(x) for x in p] for p in poly] for poly in mk["polytopes"]], pp)
        else:
            bs = [[rat(x) for x in b] for b in mk["b"]]
        total = [sum(col) for col in zip(*bs)]
        T = [[b[j] for b in bs] for j in range(pp.N)]
        return chamber_near(pp, total), T, ["t%d" % (i + 1) for i in range(len(bs))]
    if "b" in prob:
        return chamber_near(pp, prob["b"]), None, ["b%d" % (i + 1) for i in range(pp.N)]
    raise InputError("need one of b, ray_b0, minkowski")


def point_to_b(prob, T, point):
    if T is None:
        return point
    return [sum(T[j][i] * point[i] for i in range(len(point))) for j in range(len(T))]


def oracle_value(pp, b, L, h):
    poly = VPolytope.from_h([list(r) for r in pp.mu], b)
    return brute_intermediate_sum(poly, L, list(h))


# -- commands ---------------------------------------------------------------------

def cmd_chambers(prob, args):
    pp = prob["pp"]
    bases = [[j + 1 for j in B.indices] for B in enumerate_bases(pp)]
    samples = prob.get("samples") or ([prob["b"]] if "b" in prob else [])
    rows = []
    failed = False
    for s in samples:
        s = [rat(x) for x in s]
        entry = {"b": [fmt(x) for x in s]}
        try:
            ch = chamber_of(pp, s)
            entry["chamber"] = [[j + 1 for j in B] for B in ch.index_sets]
        except (OnWall, EmptyChamber) as exc:
            entry["error"] = {"kind": type(exc).__name__, "message": str(exc)}
            failed = True
        rows.append(entry)
    return {"schema": SCHEMA_VERSION, "bases": bases, "samples": rows}, (3 if failed else 0)


def _variant(prob, args):
    variant = args.variant or prob.get("variant", "exact")
    k = args.k if args.k is not None else prob.get("k")
    if variant != "exact" and k is None:
        raise InputError("variant %s needs k" % variant)
    return variant, k


def cmd_ehrhart(prob, args):
    pp = prob["pp"]
    variant, k = _variant(prob, args)
    ch, T, names = parameter_setup(prob)
    q = chamber_qp(pp, ch, variant, prob["h"], k=k, L=prob["L"], param_map=T)
    out = {
        "schema": SCHEMA_VERSION,
        "variant": variant,
        "k": k,
        "chamber": [[j + 1 for j in B] for B in ch.index_sets],
        "variables": names,
        "quasi_polynomial": to_json_obj(q),
        "text": to_text(q, names),
    }
    points = []
    if args.eval:
        points = [[x] for x in parse_list(args.eval)]
    elif "eval" in prob:
        points = [[rat(x) for x in (p if isinstance(p, list) else [p])] for p in prob["eval"]]
    table = []
    for p in points:
        if len(p) != len(names):
            raise InputError("evaluation point has the wrong length")
        v = qp_eval(q, p)
        row = {"at": [fmt(x) for x in p], "value": fmt(v)}
        if args.oracle_check:
            if variant != "exact":
                raise InputError("--oracle-check needs the exact variant")
            ref = oracle_value(pp, point_to_b(prob, T, p), prob["L"], prob["h"])
            row["oracle"] = fmt(ref)
            if ref != v:
                raise OracleMismatch("quasi-polynomial %s != oracle %s at %s" % (v, ref, p))
        table.append(row)
    if table:
        out["evaluations"] = table
    return out, 0


def cmd_plotdata(prob, args):
    pp = prob["pp"]
    if "ray_b0" not in prob:
        raise InputError("plotdata needs ray_b0 (or simplex)")
    grid = args.grid or prob.get("grid")
    if not grid:
        raise InputError("plotdata needs --grid min,max,step")
    lo, hi, step = parse_list(grid) if isinstance(grid, str) else [rat(x) for x in grid]
    if step <= 0 or hi < lo:
        raise InputError("bad grid")
    ch, T, _ = parameter_setup(prob)
    cols = prob.get("columns")
    if not cols:
        variant, k = _variant(prob, args)
        cols = [{"variant": variant, "k": k, "subspace": prob.get("subspace", "zero")}]
    qps, labels = [], []
    for c in cols:
        variant = c.get("variant", "exact")
        k = c.get("k")
        L = parse_subspace(c.get("subspace", "zero"), pp.d)
        qps.append(chamber_qp(pp, ch, variant, prob["h"], k=k, L=L, param_map=T))
        labels.append(c.get("label") or _label(variant, k, c.get("subspace", "zero")))
    rows = []
    t = lo
    while t <= hi:
        rows.append([t] + [qp_eval(q, [t]) for q in qps])
        t += step
    if args.oracle_check:
        for r in rows:
            b = point_to_b(prob, T, [r[0]])
            for c, v in zip(cols, r[1:]):
                if c.get("variant", "exact") == "exact":
                    ref = oracle_value(pp, b, parse_subspace(c.get("subspace", "zero"), pp.d), prob["h"])
                    if ref != v:
                        raise OracleMismatch("plot value %s != oracle %s at t=%s" % (v, ref, r[0]))
    return {"schema": SCHEMA_VERSION, "columns": ["t"] + labels,
            "rows": [[fmt(x) for x in r] for r in rows]}, 0


def _label(variant, k, sub):
    name = sub if isinstance(sub, str) else "L"
    return variant if variant == "exact" and name == "zero" else \
        ("%s_k%s" % (variant, k) if variant != "exact" else "exact_%s" % name)


def cmd_oracle(prob, args):
    pp = prob["pp"]
    if "b" in prob:
        b = prob["b"]
    elif "ray_b0" in prob:
        ts = parse_list(args.eval) if args.eval else [Fraction(1)]
        vals = []
        for t in ts:
            b = [t * x for x in prob["ray_b0"]]
            vals.append({"at": [fmt(t)], "value": fmt(oracle_value(pp, b, prob["L"], prob["h"]))})
        return {"schema": SCHEMA_VERSION, "values": vals, "value": vals[0]["value"]}, 0
    else:
        raise InputError("oracle needs b or ray_b0")
    return {"schema": SCHEMA_VERSION, "value": fmt(oracle_value(pp, b, prob["L"], prob["h"]))}, 0


COMMANDS = {"chambers": cmd_chambers, "ehrhart": cmd_ehrhart,
            "plotdata": cmd_plotdata, "oracle": cmd_oracle}


def render(result, fmt_name):
    if fmt_name == "csv":
        if "rows" in result:
            lines = [",".join(result["columns"])]
            for r in result["rows"]:
                lines.append(",".join(decimal12(Fraction(x)) for x in r))
            return "\n".join(lines) + "\n"
        if "evaluations" in result:
            lines = ["t,value"]
            for e in result["evaluations"]:
                lines.append("%s,%s" % (" ".join(decimal12(Fraction(x)) for x in e["at"]),
                                        decimal12(Fraction(e["value"]))))
            return "\n".join(lines) + "\n"
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="intehrhart", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", required=True, help="problem JSON file ('-' for stdin)")
    p.add_argument("--output", help="write here instead of stdout")
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--variant", choices=["exact", "barvinok", "conebycone"])
    p.add_argument("--k", type=int)
    p.add_argument("--eval", help="comma separated rationals")
    p.add_argument("--grid", help="min,max,step")
    p.add_argument("--oracle-check", action="store_true")
    return p


def run(argv=None):
    """Returns (exit code, text, output path or None)."""
    args = build_parser().parse_args(argv)
    fmt_name = args.format or ("csv" if args.command == "plotdata" else "json")
    try:
        if args.input == "-":
            obj = json.load(sys.stdin)
        else:
            with open(args.input) as fh:
                obj = json.load(fh)
        prob = load_problem(obj)
        result, code = COMMANDS[args.command](prob, args)
    except (json.JSONDecodeError, InputError, OSError) as exc:
        result, code = _error(exc), 2
    except DOMAIN_ERRORS as exc:
        result, code = _error(exc), 3
    except ResourceBound as exc:
        result, code = _error(exc), 4
    except OracleMismatch as exc:
        result, code = _error(exc), 1
    if "error" in result:
        fmt_name = "json"
    return code, render(result, fmt_name), args.output


def _error(exc):
    return {"schema": SCHEMA_VERSION, "error": {"kind": type(exc).__name__, "message": str(exc)}}


def main(argv=None):
    code, text, output = run(argv)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
