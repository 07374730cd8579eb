"""Command-line entry point: config ingestion, dispatch, report emission.

Commands: dual-datum, ext-calc, verify, all.  Exit codes: 0 pass,
1 check failure, 2 invalid input.  Configs and reports are JSON with all
rationals serialized as "p/q" strings; field elements appear as exponent
literals "g^e".  Machine-readable reports are deterministic (sorted keys,
no timings), so identical configs give byte-identical reports; timings go
to the human-readable log only.
"""

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field

from . import comparison, extcalc, harness
from .bdmodel import DModelError, Splitting, build_d_model
from .fieldmodel import FieldModelError, build_field_model
from .metaplectic import (CoverAssumptionError, CoverDatum, DualDatumError,
                          compute_dual_datum)
from .rootdatum import (FiniteAbelianPresentation, QuadraticForm,
                        StructuralError, make_root_datum)

MODEL_SCHEMA = "mlg/model-v1"
EXT_SCHEMA = "mlg/ext-v1"
REPORT_DIR_ENV = "MLG_REPORT_DIR"


class ConfigError(ValueError):
    def __init__(self, errors):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


@dataclass
class RunConfig:
    kind: str              # "model" | "ext"
    name: str
    path: str
    data: dict = field(default_factory=dict)


_ELEMENT_RE = re.compile(r"^g\^(-?\d+)$")


def parse_element(lit, where, errors):
    """Exponent literal "g^e" (or a plain integer exponent)."""
    if isinstance(lit, int):
        return lit
    if isinstance(lit, str):
        m = _ELEMENT_RE.match(lit)
        if m:
            return int(m.group(1))
    errors.append("%s: expected an element literal like \"g^3\", got %r"
                  % (where, lit))
    return 0


def _require(data, key, types, where, errors, default=None, required=True):
    if key not in data:
        if required:
            errors.append("%s: missing required field %r" % (where, key))
        return default
    value = data[key]
    if not isinstance(value, types):
        errors.append("%s.%s: wrong type %s" % (where, key, type(value).__name__))
        return default
    return value


def _parse_root_datum(spec, where, errors):
    if isinstance(spec, str):
        try:
            return harness.bundled_datum(spec)
        except ValueError as exc:
            errors.append("%s: %s" % (where, exc))
            return None
    if not isinstance(spec, dict):
        errors.append("%s: expected a bundled name or an explicit datum" % where)
        return None
    rank = _require(spec, "rank", int, where, errors, default=1)
    roots = _require(spec, "roots", list, where, errors, default=[])
    coroots = _require(spec, "coroots", list, where, errors, default=[])
    pairing = _require(spec, "pairing", list, where, errors, default=[])
    simple = _require(spec, "simple_indices", list, where, errors, default=[])
    if errors:
        return None
    if len(roots) != len(coroots):
        errors.append("%s: roots and coroots must be in bijection "
                      "(%d vs %d)" % (where, len(roots), len(coroots)))
        return None
    for label, vecs in (("roots", roots), ("coroots", coroots)):
        for v in vecs:
            if not isinstance(v, list) or len(v) != rank:
                errors.append("%s.%s: vector %r does not have rank %d"
                              % (where, label, v, rank))
                return None
    try:
        return make_root_datum(rank, roots, coroots, pairing, simple)
    except StructuralError as exc:
        errors.append("%s: %s" % (where, exc))
        return None


def _parse_q_form(spec, where, errors):
    if not isinstance(spec, dict):
        errors.append("%s: expected an object with diag/off" % where)
        return None
    diag = _require(spec, "diag", list, where, errors, default=[])
    off = spec.get("off", [])
    try:
        return QuadraticForm(tuple(diag), tuple(tuple(o) for o in off))
    except (StructuralError, TypeError) as exc:
        errors.append("%s: %s" % (where, exc))
        return None


def parse_config(path):
    """Fully validated RunConfig, or ConfigError carrying every problem
    found (not just the first)."""
    errors = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(["cannot read %s: %s" % (path, exc)])
    except json.JSONDecodeError as exc:
        raise ConfigError(["%s is not valid JSON: %s" % (path, exc)])
    if not isinstance(raw, dict):
        raise ConfigError(["%s: top level must be an object" % path])

    schema = raw.get("schema")
    if schema == MODEL_SCHEMA:
        cfg = _parse_model_config(raw, path, errors)
    elif schema == EXT_SCHEMA:
        cfg = _parse_ext_config(raw, path, errors)
    else:
        raise ConfigError(["%s: unknown schema %r (expected %r or %r)"
                           % (path, schema, MODEL_SCHEMA, EXT_SCHEMA)])
    if errors:
        raise ConfigError(errors)
    return cfg


def _parse_model_config(raw, path, errors):
    where = "model config"
    name = _require(raw, "name", str, where, errors, default="model")
    rd = _parse_root_datum(raw.get("group"), where + ".group", errors)
    q_form = _parse_q_form(raw.get("q_form"), where + ".q_form", errors)
    n = _require(raw, "n", int, where, errors, default=1)
    fld = _require(raw, "field", dict, where, errors, default=None,
                   required=False)
    data = {"rd": rd, "q_form": q_form, "n": n,
            "seed": raw.get("seed", 0), "zeta_level": raw.get("zeta_level")}
    if n < 1:
        errors.append("%s.n: must be a positive integer" % where)
    if fld is not None:
        q = _require(fld, "q", int, where + ".field", errors, default=2)
        data["q"] = q
        data["k"] = fld.get("k")
        data["epsilon_unit"] = fld.get("epsilon_unit", 1)
        if n >= 1 and q >= 2 and (q - 1) % n != 0:
            errors.append(
                "%s.field: n = %d does not divide q - 1 = %d; pick q with "
                "q = 1 mod n so the field carries full mu_n" % (where, n, q - 1))
    overrides = raw.get("overrides")
    if overrides is not None:
        ov_errors = []
        data["overrides"] = {
            "c_frobenius": [parse_element(x, where + ".overrides.c_frobenius",
                                          ov_errors)
                            for x in overrides.get("c_frobenius", [])],
            "e_inputs": [parse_element(x, where + ".overrides.e_inputs",
                                       ov_errors)
                         for x in overrides.get("e_inputs", [])],
            "splittings": [[parse_element(x, where + ".overrides.splittings",
                                          ov_errors) for x in t]
                           for t in overrides.get("splittings", [])],
        }
        errors.extend(ov_errors)
    return RunConfig("model", name, path, data)


def _parse_ext_config(raw, path, errors):
    where = "ext config"
    name = _require(raw, "name", str, where, errors, default="ext")
    group_spec = _require(raw, "group", dict, where, errors, default={})
    kernel_spec = _require(raw, "kernel", dict, where, errors, default={})
    cocycles = _require(raw, "cocycles", dict, where, errors, default={})
    operations = _require(raw, "operations", list, where, errors, default=[])
    data = {}
    try:
        if "cyclic" in group_spec:
            group = extcalc.cyclic_group(group_spec["cyclic"])
        elif "product_cyclic" in group_spec:
            group = extcalc.cyclic_group(group_spec["product_cyclic"][0])
            for m in group_spec["product_cyclic"][1:]:
                group = extcalc.direct_product(group, extcalc.cyclic_group(m))
        elif "table" in group_spec:
            group = extcalc.make_group_table(group_spec["table"])
        else:
            raise extcalc.GroupTableError(
                "group needs one of cyclic / product_cyclic / table")
        data["group"] = group
    except (extcalc.GroupTableError, StructuralError, TypeError,
            IndexError) as exc:
        errors.append("%s.group: %s" % (where, exc))
    try:
        data["kernel"] = FiniteAbelianPresentation(
            kernel_spec.get("free_rank", 0),
            tuple(kernel_spec.get("invariant_factors", [])))
    except StructuralError as exc:
        errors.append("%s.kernel: %s" % (where, exc))
    parsed = {}
    if "group" in data and "kernel" in data:
        for cname, table in cocycles.items():
            try:
                rows = [[tuple(extcalc.parse_fraction(x) for x in v)
                         for v in row] for row in table]
                parsed[cname] = extcalc.make_cocycle(data["group"],
                                                     data["kernel"], rows)
            except (StructuralError, ValueError, TypeError) as exc:
                errors.append("%s.cocycles.%s: %s" % (where, cname, exc))
    data["cocycles"] = parsed
    for i, op in enumerate(operations):
        if not isinstance(op, dict) or "op" not in op:
            errors.append("%s.operations[%d]: each operation needs an 'op'"
                          % (where, i))
            continue
        for key in ("cocycle", "left", "right", "expect_cohomologous_to"):
            if key in op and op[key] not in parsed:
                errors.append("%s.operations[%d].%s: unknown cocycle %r"
                              % (where, i, key, op[key]))
    data["operations"] = operations
    return RunConfig("ext", name, path, data)


# ------------------------------------------------------------- commands

def _build_model_bundle(cfg):
    """Either harness-generated or rebuilt from explicit overrides."""
    d = cfg.data
    if "q" not in d:
        raise ConfigError(["%s: this command needs a 'field' section"
                           % cfg.path])
    if "overrides" not in d:
        return harness.build_model(d["rd"], d["q_form"], d["n"], d["q"],
                                   k=d.get("k"), seed=d["seed"],
                                   zeta_level=d.get("zeta_level"),
                                   name=cfg.name,
                                   epsilon_unit=d.get("epsilon_unit", 1))
    ov = d["overrides"]
    cd = CoverDatum(d["rd"], d["q_form"], d["n"])
    dd = compute_dual_datum(cd)
    fm = build_field_model(d["q"], d["n"], d.get("k"),
                           d.get("epsilon_unit", 1))
    dm = build_d_model(dd, fm, ov["c_frobenius"], ov["e_inputs"])
    bps = tuple(comparison.make_base_point(dm, Splitting(tuple(t)),
                                           d.get("zeta_level"))
                for t in ov["splittings"])
    if not bps:
        raise ConfigError(["%s: overrides must include at least one splitting"
                           % cfg.path])
    return harness.ModelBundle(cfg.name, dd, fm, dm, bps)


def _frac_str(x):
    return "%d/%d" % (x.numerator, x.denominator)


def dual_datum_report(cfg):
    d = cfg.data
    dd = compute_dual_datum(CoverDatum(d["rd"], d["q_form"], d["n"]))
    return {
        "name": cfg.name,
        "n": d["n"],
        "y_qn_basis": [list(row) for row in dd.y_qn_basis],
        "n_alpha": list(dd.n_alpha),
        "modified_coroots": [list(v) for v in dd.modified_coroots],
        "modified_roots": [[_frac_str(x) for x in v]
                           for v in dd.modified_roots],
        "x_qn_basis": [[_frac_str(x) for x in row] for row in dd.x_qn_basis],
        "x_qn_definition": "adopted definition: dual lattice of Y_{Q,n} "
                           "inside X tensor Q",
        "center": {"free_rank": dd.center.free_rank,
                   "invariant_factors": list(dd.center.invariant_factors)},
    }


def _print_dual_datum(rep, out):
    print("dual datum: %s (n = %d)" % (rep["name"], rep["n"]), file=out)
    print("  Y_Qn basis columns : %s" % rep["y_qn_basis"], file=out)
    print("  n_alpha            : %s" % rep["n_alpha"], file=out)
    print("  modified coroots   : %s" % rep["modified_coroots"], file=out)
    print("  modified roots     : %s" % rep["modified_roots"], file=out)
    print("  X_Qn basis columns : %s  [%s]"
          % (rep["x_qn_basis"], rep["x_qn_definition"]), file=out)
    center = rep["center"]
    desc = ["Z"] * center["free_rank"] + \
           ["Z/%d" % m for m in center["invariant_factors"]]
    print("  center             : %s" % (" x ".join(desc) or "trivial"),
          file=out)


def run_ext_calc(cfg):
    """Execute the declared operations; returns (ok, report)."""
    d = cfg.data
    results = []
    ok = True
    for i, op in enumerate(d["operations"]):
        kind = op["op"]
        entry = {"index": i, "op": kind}
        if kind == "validate":
            good, witness = extcalc.validate_cocycle(d["cocycles"][op["cocycle"]])
            entry["ok"] = good
            if witness is not None:
                entry["witness"] = [witness[0], list(witness[1])]
        elif kind == "baer_sum":
            total = extcalc.baer_sum(
                extcalc.make_extension(d["cocycles"][op["left"]]),
                extcalc.make_extension(d["cocycles"][op["right"]]))
            entry["sum"] = extcalc.cocycle_to_dict(total.cocycle)
            entry["ok"] = True
            if "expect_cohomologous_to" in op:
                entry["ok"] = extcalc.cohomologous(
                    total.cocycle, d["cocycles"][op["expect_cohomologous_to"]])
        elif kind == "cohomologous":
            same = extcalc.cohomologous(d["cocycles"][op["left"]],
                                        d["cocycles"][op["right"]])
            entry["cohomologous"] = same
            entry["ok"] = same == op.get("expect", same)
        elif kind == "coboundary_solve":
            cochain = extcalc.coboundary_solve(d["cocycles"][op["cocycle"]])
            solvable = cochain is not None
            entry["solvable"] = solvable
            if solvable:
                entry["cochain"] = {str(g): [_frac_str(x) for x in v]
                                    for g, v in sorted(cochain.items())}
            entry["ok"] = solvable == op.get("expect_solvable", solvable)
        else:
            raise ConfigError(["%s: unknown operation %r" % (cfg.path, kind)])
        ok = ok and entry["ok"]
        results.append(entry)
    return ok, {"name": cfg.name, "operations": results, "ok": ok}


def run_verify(cfgs):
    """Build every model and run the comparison suite; model construction
    failures count as check failures, not usage errors."""
    entries = []
    report = {"models": [], "ok": True}
    log_lines = []
    for cfg in cfgs:
        try:
            bundle = _build_model_bundle(cfg)
        except (DModelError, DualDatumError, CoverAssumptionError,
                FieldModelError, comparison.ComparisonError,
                comparison.ModelDiagnostic, StructuralError) as exc:
            report["models"].append({
                "name": cfg.name,
                "checks": {"model": {"ok": False, "count": 0,
                                     "counterexample": {"error": str(exc)}}},
            })
            report["ok"] = False
            log_lines.append("%-24s FAIL (model construction: %s)"
                             % (cfg.name, exc))
            continue
        entries.append({"name": bundle.name,
                        "base_points": list(bundle.base_points)})
    if entries:
        suite = comparison.verify_comparison_suite(entries)
        report["ok"] = report["ok"] and suite["ok"]
        for m in suite["models"]:
            elapsed = m.pop("elapsed_seconds", None)
            report["models"].append(m)
            bad = [k for k, v in m["checks"].items() if not v["ok"]]
            log_lines.append("%-24s %s (%.2fs)"
                             % (m["name"],
                                "OK" if not bad else "FAIL " + ",".join(bad),
                                elapsed or 0.0))
    report["models"].sort(key=lambda m: m["name"])
    return report["ok"], report, log_lines


# --------------------------------------------------------------- plumbing

def _report_path(path):
    if os.path.isabs(path):
        return path
    base = os.environ.get(REPORT_DIR_ENV)
    return os.path.join(base, path) if base else path


def write_report(report, path):
    full = _report_path(path)
    directory = os.path.dirname(full)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(full, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return full


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mlg",
        description="Exact metaplectic dual data, extension calculus, and "
                    "second-twist verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dual-datum", help="compute the dual root datum")
    p.add_argument("config")
    p.add_argument("--report", help="write the machine-readable report here")

    p = sub.add_parser("ext-calc", help="run extension-calculus operations")
    p.add_argument("config")
    p.add_argument("--report")

    p = sub.add_parser("verify", help="run the comparison verification suite")
    p.add_argument("configs", nargs="+")
    p.add_argument("--report")

    p = sub.add_parser("all", help="every stage applicable to one config")
    p.add_argument("config")
    p.add_argument("--report")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        for err in exc.errors:
            print("config error: %s" % err, file=sys.stderr)
        return 2
    except (CoverAssumptionError, DualDatumError, StructuralError,
            FieldModelError) as exc:
        print("invalid input: %s" % exc, file=sys.stderr)
        return 2


def _dispatch(args):
    if args.command == "dual-datum":
        cfg = parse_config(args.config)
        if cfg.kind != "model":
            raise ConfigError(["%s: dual-datum needs a model config"
                               % args.config])
        rep = dual_datum_report(cfg)
        _print_dual_datum(rep, sys.stdout)
        if args.report:
            print("report: %s" % write_report(rep, args.report))
        return 0

    if args.command == "ext-calc":
        cfg = parse_config(args.config)
        if cfg.kind != "ext":
            raise ConfigError(["%s: ext-calc needs an ext config"
                               % args.config])
        ok, rep = run_ext_calc(cfg)
        for entry in rep["operations"]:
            print("op %d (%s): %s" % (entry["index"], entry["op"],
                                      "ok" if entry["ok"] else "FAIL"))
        if args.report:
            print("report: %s" % write_report(rep, args.report))
        return 0 if ok else 1

    if args.command == "verify":
        cfgs = [parse_config(p) for p in args.configs]
        for cfg in cfgs:
            if cfg.kind != "model":
                raise ConfigError(["%s: verify needs model configs"
                                   % cfg.path])
        ok, rep, log_lines = run_verify(cfgs)
        for line in log_lines:
            print(line)
        print("verify: %s" % ("PASS" if ok else "FAIL"))
        if args.report:
            print("report: %s" % write_report(rep, args.report))
        return 0 if ok else 1

    # all: every stage applicable to the config's kind
    cfg = parse_config(args.config)
    if cfg.kind == "ext":
        ok, rep = run_ext_calc(cfg)
        if args.report:
            print("report: %s" % write_report(rep, args.report))
        return 0 if ok else 1
    dual = dual_datum_report(cfg)
    _print_dual_datum(dual, sys.stdout)
    ok, verify_rep, log_lines = run_verify([cfg])
    for line in log_lines:
        print(line)
    print("all: %s" % ("PASS" if ok else "FAIL"))
    if args.report:
        combined = {"dual_datum": dual, "verify": verify_rep,
                    "ok": bool(ok)}
        print("report: %s" % write_report(combined, args.report))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
