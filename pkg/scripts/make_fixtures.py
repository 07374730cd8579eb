#!/usr/bin/env python3
"""Regenerate the bundled JSON fixtures in configs/.

Positive fixtures are harness-driven model configs (one per grid entry)
plus an extension-calculus example.  Negative fixtures freeze a valid
model's explicit data with one deliberate corruption each; they must fail
`mlg verify` / `mlg ext-calc` as labeled.
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from mlg import harness  # noqa: E402

OUT = os.path.join(os.path.dirname(__file__), "..", "configs")


def q_form_dict(qf):
    return {"diag": list(qf.diag), "off": [list(o) for o in qf.off]}


def model_config(group, q, n, seed=0, name=None):
    qf = harness.q_form_for(group, n)
    return {
        "schema": "mlg/model-v1",
        "name": name or "%s_q%d_n%d" % (group, q, n),
        "group": group,
        "q_form": q_form_dict(qf),
        "n": n,
        "field": {"q": q},
        "seed": seed,
    }


def lit(e):
    return "g^%d" % e


def explicit_config(bundle, name):
    """Freeze a harness model into explicit overrides."""
    dm = bundle.dm
    cfg = model_config(bundle.name.split("_q")[0],
                       bundle.fm.q, bundle.fm.n, name=name)
    cfg["overrides"] = {
        "c_frobenius": [lit(x) for x in dm.c[1 % bundle.fm.k]],
        # undo the r_alpha sign so these are the raw invariant inputs
        "e_inputs": [lit(x) for x in _raw_e_inputs(bundle)],
        "splittings": [[lit(x) for x in bp.s.t]
                       for bp in bundle.base_points],
    }
    return cfg


def _raw_e_inputs(bundle):
    from mlg.metaplectic import compute_r_alpha
    dm = bundle.dm
    N = bundle.fm.N
    out = []
    for pos, idx in enumerate(bundle.dd.cd.rd.simple_indices):
        u = dm.s_psi[pos]
        if compute_r_alpha(bundle.dd.cd, idx) == -1:
            u = (u - N // 2) % N
        out.append(u)
    return out


def ext_laws_config():
    """Z/2 base, Z/2 kernel: the nontrivial class (Z/4), its Baer square
    (trivial), and coboundary checks."""
    half = "1/2"
    zero = "0/1"
    nontrivial = [[[zero], [zero]], [[zero], [half]]]
    split = [[[zero], [zero]], [[zero], [zero]]]
    return {
        "schema": "mlg/ext-v1",
        "name": "ext_laws_z2",
        "group": {"cyclic": 2},
        "kernel": {"free_rank": 0, "invariant_factors": [2]},
        "cocycles": {"split": split, "nontrivial": nontrivial},
        "operations": [
            {"op": "validate", "cocycle": "split"},
            {"op": "validate", "cocycle": "nontrivial"},
            {"op": "cohomologous", "left": "split", "right": "nontrivial",
             "expect": False},
            {"op": "baer_sum", "left": "nontrivial", "right": "nontrivial",
             "expect_cohomologous_to": "split"},
            {"op": "coboundary_solve", "cocycle": "nontrivial",
             "expect_solvable": False},
        ],
    }


def bad_mult_config():
    """Table violating the 2-cocycle identity (a corrupted multiplication
    rule); the validate operation must fail."""
    zero, quarter = "0/1", "1/4"
    table = [[[zero] for _ in range(4)] for _ in range(4)]
    table[1][2] = [quarter]   # single corrupted entry breaks associativity
    return {
        "schema": "mlg/ext-v1",
        "name": "bad_mult",
        "group": {"cyclic": 4},
        "kernel": {"free_rank": 0, "invariant_factors": [4]},
        "cocycles": {"corrupt": table},
        "operations": [{"op": "validate", "cocycle": "corrupt"}],
    }


def main():
    os.makedirs(OUT, exist_ok=True)
    files = {}

    files["sl2_n2.json"] = model_config("sl2", 5, 2, name="sl2_n2")
    for group in harness.GRID_GROUPS:
        for q, n in harness.GRID_FIELDS:
            cfg = model_config(group, q, n)
            files["%s.json" % cfg["name"]] = cfg

    bundle = harness.build_model(harness.bundled_datum("sl2"),
                                 harness.q_form_for("sl2", 2), 2, 5,
                                 name="sl2_q5_n2")
    good = explicit_config(bundle, "sl2_n2_explicit")
    files["sl2_n2_explicit.json"] = good

    bad_cocycle = json.loads(json.dumps(good))
    bad_cocycle["name"] = "bad_cocycle"
    e = int(bad_cocycle["overrides"]["c_frobenius"][0][2:])
    bad_cocycle["overrides"]["c_frobenius"][0] = lit(e + 1)
    files["bad_cocycle.json"] = bad_cocycle

    bad_sign = json.loads(json.dumps(good))
    bad_sign["name"] = "bad_sign"
    e = int(bad_sign["overrides"]["e_inputs"][0][2:])
    bad_sign["overrides"]["e_inputs"][0] = lit((e + bundle.fm.N // 2)
                                               % bundle.fm.N)
    files["bad_sign.json"] = bad_sign

    files["ext_laws.json"] = ext_laws_config()
    files["bad_mult.json"] = bad_mult_config()

    for fname, cfg in sorted(files.items()):
        path = os.path.join(OUT, fname)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(cfg, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print("wrote", os.path.relpath(path))


if __name__ == "__main__":
    main()
