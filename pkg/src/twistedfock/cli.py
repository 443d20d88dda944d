"""Configuration-driven experiment runner.

Config files are UTF-8 JSON; complex scalars are written as [re, im] pairs
and matrices as row-major nested arrays.  Reports are emitted with a fixed
field order and floats at 17 significant digits so identical (config, seed)
pairs produce byte-identical output.  Wall-clock timing is opt-in via
--timing because it breaks byte-level reproducibility.

Exit codes: 0 all checks pass, 1 check failure, 2 config error, 3 budget.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time

import numpy as np

from . import _linalg as la
from . import base_modular as bm
from . import correspondence as corr
from . import fock as fk
from . import oracles
from . import qms
from . import twist as tw
from .errors import BudgetExceeded, ConfigParse, ConfigSchema

__all__ = ["load_config", "run", "dumps_report", "main"]

VERSION = "0.1.0"


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _scalar(v, where):
    if isinstance(v, bool):
        raise ConfigSchema(f"{where}: expected a number, got a boolean")
    if isinstance(v, (int, float)):
        return complex(v)
    if (isinstance(v, list) and len(v) == 2
            and all(isinstance(u, (int, float)) and not isinstance(u, bool) for u in v)):
        return complex(v[0], v[1])
    raise ConfigSchema(f"{where}: expected number or [re, im] pair, got {v!r}")


def _matrix(v, where):
    if not isinstance(v, list) or not v or not all(isinstance(r, list) for r in v):
        raise ConfigSchema(f"{where}: expected a nested array")
    width = len(v[0])
    rows = []
    for i, row in enumerate(v):
        if len(row) != width:
            raise ConfigSchema(f"{where}: ragged rows")
        rows.append([_scalar(x, f"{where}[{i}]") for x in row])
    return np.array(rows, dtype=la.COMPLEX)


def _int_field(cfg, key, default=None, minimum=None):
    v = cfg.get(key, default)
    if v is None:
        raise ConfigSchema(f"missing required field {key!r}")
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigSchema(f"{key} must be an integer")
    if minimum is not None and v < minimum:
        raise ConfigSchema(f"{key} must be >= {minimum}")
    return v


def load_config(source):
    """Parse and validate a config from a path, JSON string, or dict."""
    if isinstance(source, dict):
        raw = source
    else:
        try:
            text = open(source, "r", encoding="utf-8").read() if not str(
                source).lstrip().startswith("{") else str(source)
            raw = json.loads(text)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigParse(f"cannot read config: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigSchema("config root must be an object")

    cfg = {}
    base_spec = raw.get("base", {"d": 1, "h": [[1.0]]})
    d = _int_field(base_spec, "d", 1, minimum=1)
    h = _matrix(base_spec.get("h", np.eye(d).tolist()), "base.h")
    if h.shape != (d, d):
        raise ConfigSchema(f"base.h must be {d}x{d}")
    cfg["base"] = {"d": d, "h": h}

    cspec = raw.get("correspondence", {"kind": "multiplicity", "k": 1})
    kind = cspec.get("kind", "multiplicity")
    if kind not in ("multiplicity", "group"):
        raise ConfigSchema(f"unknown correspondence kind {kind!r}")
    k = _int_field(cspec, "k", 1, minimum=1)
    C = _matrix(cspec["C"], "correspondence.C") if "C" in cspec else None
    a = _matrix(cspec["a"], "correspondence.a") if "a" in cspec else None
    table = None
    rep = None
    if kind == "group":
        if "table" not in cspec or "rep" not in cspec:
            raise ConfigSchema("group correspondence needs 'table' and 'rep'")
        table = np.array(cspec["table"], dtype=int)
        rep = [_matrix(p, f"correspondence.rep[{i}]")
               for i, p in enumerate(cspec["rep"])]
    cfg["correspondence"] = {"kind": kind, "k": k, "C": C, "a": a,
                             "table": table, "rep": rep}

    tspec = raw.get("twist", {"kind": "q", "q": 0.0})
    tkind = tspec.get("kind", "q")
    if tkind not in ("q", "mixed_q", "flip", "custom"):
        raise ConfigSchema(f"unknown twist kind {tkind!r}")
    tw_args = {"kind": tkind, "k": k}
    if tkind == "q":
        q = tspec.get("q", 0.0)
        if isinstance(q, bool) or not isinstance(q, (int, float)):
            raise ConfigSchema("twist.q must be a number")
        if abs(q) > 1:
            raise ConfigSchema(f"twist.q = {q} outside [-1, 1]")
        tw_args["q"] = float(q)
    elif tkind == "mixed_q":
        tw_args["q_matrix"] = _matrix(tspec["q_matrix"], "twist.q_matrix").real
    elif tkind == "custom":
        tw_args["matrix"] = _matrix(tspec["matrix"], "twist.matrix")
    cfg["twist"] = tw_args

    cfg["cutoff"] = _int_field(raw, "cutoff", 3, minimum=1)
    cfg["seed"] = _int_field(raw, "seed", 0, minimum=0)
    cfg["budget"] = _int_field(raw, "budget", tw.DEFAULT_BUDGET, minimum=1)
    tol = raw.get("tolerance", 1e-9)
    if isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol < 0:
        raise ConfigSchema("tolerance must be a nonnegative number")
    cfg["tolerance"] = float(tol)

    checks = raw.get("checks", [])
    if not isinstance(checks, list) or not checks:
        raise ConfigSchema("config needs a nonempty 'checks' list")
    known = set(_CHECKS)
    out_checks = []
    for c in checks:
        if not isinstance(c, dict) or "name" not in c:
            raise ConfigSchema("each check must be an object with a 'name'")
        if c["name"] not in known:
            raise ConfigSchema(f"unknown check name {c['name']!r}")
        out_checks.append(dict(c))
    cfg["checks"] = out_checks
    cfg["_raw"] = raw
    return cfg


def _preflight(cfg):
    k = cfg["correspondence"]["k"]
    N = cfg["cutoff"]
    if cfg["correspondence"]["kind"] == "group":
        g0 = cfg["correspondence"]["table"].shape[0]
    else:
        g0 = cfg["base"]["d"] ** 2
    estimate = max(k ** N, g0 * k ** N)
    if estimate > cfg["budget"]:
        raise BudgetExceeded(
            f"estimated tensor dimension {estimate} exceeds budget {cfg['budget']}",
            estimate=estimate, budget=cfg["budget"],
        )


# ---------------------------------------------------------------------------
# shared lazy context
# ---------------------------------------------------------------------------

class _Ctx:
    def __init__(self, cfg):
        self.cfg = cfg
        self.rng = la.rng_from_seed(cfg["seed"])
        self._cache = {}

    def base(self):
        if "base" not in self._cache:
            self._cache["base"] = bm.make_base(self.cfg["base"]["h"])
        return self._cache["base"]

    def twist_obj(self):
        if "twist" not in self._cache:
            self._cache["twist"] = tw.make_twist(**self.cfg["twist"])
        return self._cache["twist"]

    def tc(self):
        if "tc" not in self._cache:
            cs = self.cfg["correspondence"]
            if cs["kind"] == "multiplicity":
                self._cache["tc"] = corr.make_multiplicity_corr(
                    self.base(), cs["k"], cs["C"], cs["a"])
            else:
                self._cache["tc"] = corr.make_group_corr(
                    cs["table"], cs["rep"], cs["C"], cs["a"])
        return self._cache["tc"]

    def fock(self):
        if "fock" not in self._cache:
            self._cache["fock"] = fk.build_fock(
                self.tc(), self.twist_obj().T, self.cfg["cutoff"],
                budget=self.cfg["budget"])
        return self._cache["fock"]


def _rand_real_left(ctx):
    tc = ctx.tc()
    raw = la.rand_complex(ctx.rng, (tc.m,))
    v = fk.real_project_left(tc, raw)
    nrm = np.linalg.norm(v)
    return v / nrm if nrm > 1e-12 else v


def _rand_real_right(ctx):
    tc = ctx.tc()
    raw = la.rand_complex(ctx.rng, (tc.m,))
    v = fk.real_project_right(tc, raw)
    nrm = np.linalg.norm(v)
    return v / nrm if nrm > 1e-12 else v


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def _check_validate(ctx, params, tol):
    res = corr.validate_tomita(ctx.tc())
    return {}, res, res["max_residual"] <= tol


def _check_tower(ctx, params, tol):
    t = ctx.twist_obj()
    tower = tw.build_tower(t, ctx.cfg["cutoff"], budget=ctx.cfg["budget"])
    sw = tw.sandwich_bounds_report(tower)
    values = {
        "levels": [
            {"n": lv.n, "min_eig": lv.min_eig, "max_eig": lv.max_eig,
             "kernel_rank": lv.kernel_rank, "braided_defect": lv.braided_defect}
            for lv in tower.levels
        ],
        "ybe": tower.ybe,
        "worst_margin": sw["worst_margin"],
    }
    residuals = {
        "max_braided_defect": tower.max_braided_defect,
        "worst_sandwich_margin": sw["worst_margin"],
    }
    ok = sw["worst_margin"] >= -max(tol, 1e-10)
    if tower.ybe <= 1e-12:
        ok = ok and tower.max_braided_defect <= max(tol, 1e-10)
    return values, residuals, ok


def _check_compatibility(ctx, params, tol):
    res = tw.compatibility_residuals(ctx.twist_obj(), ctx.tc(),
                                     n_max=min(ctx.cfg["cutoff"], 3))
    flat = {
        "level2_J": res["level2_J"],
        "level2_U": res["level2_U"],
        "max_residual": res["max_residual"],
    }
    for n, v in res["tower_J"].items():
        flat[f"tower_J_{n}"] = v
    for n, v in res["tower_U"].items():
        flat[f"tower_U_{n}"] = v
    return {}, flat, res["max_residual"] <= tol


def _check_moments(ctx, params, tol):
    cs = ctx.cfg["correspondence"]
    if ctx.cfg["base"]["d"] != 1:
        raise ConfigSchema("moments check needs a scalar base (d=1)")
    a = cs["a"]
    if a is not None and la.op_norm(np.asarray(a)) > 0:
        raise ConfigSchema("moments check needs trivial flow (a=0)")
    if ctx.cfg["twist"]["kind"] not in ("q", "flip"):
        raise ConfigSchema("moments oracle covers q-type twists only")
    orders = params.get("orders", [2, 4, 6, 8])
    if not all(isinstance(o, int) and o > 0 and o % 2 == 0 for o in orders):
        raise ConfigSchema("moments orders must be positive even integers")
    if max(orders) > ctx.cfg["cutoff"]:
        raise ConfigSchema("largest order exceeds the cutoff")
    F = ctx.fock()
    e = np.zeros(ctx.tc().m, dtype=la.COMPLEX)
    e[0] = 1.0
    qval = float(ctx.cfg["twist"].get("q", 1.0))
    rows = []
    worst = 0.0
    for order in orders:
        measured = fk.vacuum_moment(F, [e] * order)
        expected = oracles.moment_oracle(qval, [e] * order)
        diff = abs(measured - expected)
        worst = max(worst, diff)
        rows.append({"order": order, "measured": measured,
                     "oracle": expected, "abs_diff": diff})
    return {"table": rows}, {"max_abs_diff": worst}, worst <= tol


def _check_modular(ctx, params, tol):
    F = ctx.fock()
    n_words = params.get("n_words", 3)
    max_len = max(1, min(params.get("max_len", 3), ctx.cfg["cutoff"] - 1))
    r_kms = 0.0
    for _ in range(n_words):
        length = int(ctx.rng.integers(1, max_len + 1))
        word = [_rand_real_left(ctx) for _ in range(length)]
        r_kms = max(r_kms, fk.kms_residual(F, word))
    xi = _rand_real_left(ctx)
    residuals = {
        "level1_flow": fk.modular_level1_residual(F),
        "kms": r_kms,
        "conjugation_intertwining": fk.conj_intertwining_residual(F, xi),
    }
    return {}, residuals, max(residuals.values()) <= tol


def _check_locality(ctx, params, tol):
    F = ctx.fock()
    worst = 0.0
    for _ in range(params.get("n_pairs", 3)):
        worst = max(worst, fk.locality_residual(
            F, _rand_real_left(ctx), _rand_real_right(ctx)))
    return {}, {"max_commutator": worst}, worst <= tol


def _check_disintegrate(ctx, params, tol):
    bd = corr.disintegrate(ctx.tc())
    values = {"frequencies": [[s.omega, s.dim] for s in bd.sectors]}
    return values, dict(bd.residuals), max(bd.residuals.values()) <= tol


def _check_type_one(ctx, params, tol):
    cs = ctx.cfg["correspondence"]
    if cs["kind"] != "multiplicity":
        raise ConfigSchema("type_one check needs a multiplicity correspondence")
    report = fk.type_I_factorization_check(
        ctx.base(), cs["k"], cs["C"], cs["a"], ctx.twist_obj().T,
        ctx.cfg["cutoff"], seed=ctx.cfg["seed"])
    return {}, report, report["max_residual"] <= tol


def _check_crossed(ctx, params, tol):
    cs = ctx.cfg["correspondence"]
    if cs["kind"] != "group":
        raise ConfigSchema("crossed check needs a group correspondence")
    report = fk.crossed_product_check(
        cs["table"], cs["rep"], ctx.twist_obj().T, ctx.cfg["cutoff"],
        C=cs["C"], a=cs["a"], seed=ctx.cfg["seed"])
    return {}, report, report["max_residual"] <= tol


def _check_gap(ctx, params, tol):
    qval = params.get("q", ctx.twist_obj().norm)
    m = params.get("m")
    gc = tw.gap_constants(float(qval), m=m)
    values = {"q": gc.q, "c": gc.c, "d": gc.d, "f": gc.f,
              "m": gc.m, "kappa": gc.kappa,
              "truncation_level": gc.truncation_level}
    return values, {"truncation_diff": gc.truncation_diff}, True


def _check_bohr(ctx, params, tol):
    if "beta" in params:
        beta = float(params["beta"])
        h = np.diag([1.0, np.exp(-beta)])
        e12 = np.array([[0, 1], [0, 0]], dtype=float)
        jumps = [(e12, -beta), (e12.T, beta)]
    else:
        h = _matrix(params["h"], "bohr.h")
        jumps = [(_matrix(j["v"], "bohr.jumps.v"), float(j["omega"]))
                 for j in params.get("jumps", [])]
        if not jumps:
            raise ConfigSchema("bohr check needs jumps or beta")
    gen = qms.make_alicki(h, jumps)
    report = qms.bohr_spectrum(gen)
    values = {
        "frequencies": [[om, mult] for om, mult in
                        report["from_jumps"].frequencies],
    }
    residuals = {
        "match_residual": report["match_residual"],
        "gns_symmetry": qms.gns_symmetry_residual(gen),
        "choi_min_eig": qms.cp_residual(gen),
    }
    ok = (report["match_residual"] <= tol
          and residuals["gns_symmetry"] <= max(tol, 1e-10)
          and residuals["choi_min_eig"] >= -1e-9)
    return values, residuals, ok


_CHECKS = {
    "validate": _check_validate,
    "tower": _check_tower,
    "compatibility": _check_compatibility,
    "moments": _check_moments,
    "modular": _check_modular,
    "locality": _check_locality,
    "disintegrate": _check_disintegrate,
    "type_one": _check_type_one,
    "crossed": _check_crossed,
    "gap": _check_gap,
    "bohr": _check_bohr,
}


# ---------------------------------------------------------------------------
# report serialization
# ---------------------------------------------------------------------------

def _fmt_float(x):
    if np.isnan(x):
        return '"NaN"'
    if np.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(float(x), ".17g")


def _serialize(obj, out):
    if obj is None:
        out.write("null")
    elif isinstance(obj, bool):
        out.write("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.write(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.write(_fmt_float(obj))
    elif isinstance(obj, (complex, np.complexfloating)):
        out.write(f"[{_fmt_float(obj.real)}, {_fmt_float(obj.imag)}]")
    elif isinstance(obj, str):
        out.write(json.dumps(obj))
    elif isinstance(obj, dict):
        out.write("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.write(", ")
            out.write(json.dumps(str(k)))
            out.write(": ")
            _serialize(v, out)
        out.write("}")
    elif isinstance(obj, (list, tuple)):
        out.write("[")
        for i, v in enumerate(obj):
            if i:
                out.write(", ")
            _serialize(v, out)
        out.write("]")
    elif isinstance(obj, np.ndarray):
        _serialize(obj.tolist(), out)
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps_report(report):
    buf = io.StringIO()
    _serialize(report, buf)
    buf.write("\n")
    return buf.getvalue()


def _config_digest(raw):
    canon = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

def run(config, timing=False):
    """Execute all configured checks in order; returns the report dict."""
    cfg = config if isinstance(config, dict) and "_raw" in config else load_config(config)
    _preflight(cfg)
    ctx = _Ctx(cfg)
    records = []
    all_pass = True
    for spec in cfg["checks"]:
        name = spec["name"]
        tol = float(spec.get("tolerance", cfg["tolerance"]))
        started = time.perf_counter()
        values, residuals, ok = _CHECKS[name](ctx, spec, tol)
        elapsed = time.perf_counter() - started
        rec = {
            "name": name,
            "tolerance": tol,
            "pass": bool(ok),
            "values": values,
            "residuals": residuals,
        }
        if timing:
            rec["wall_time_s"] = elapsed
        records.append(rec)
        all_pass = all_pass and ok
    raw = dict(cfg["_raw"])
    return {
        "version": VERSION,
        "seed": cfg["seed"],
        "config_digest": _config_digest(raw),
        "checks": records,
        "status": "pass" if all_pass else "fail",
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _write_out(text, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format(x, ".17g") if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _cmd_check(args):
    cfg = load_config(args.config)
    if args.tol is not None:
        cfg["tolerance"] = args.tol
    if args.seed:
        cfg["seed"] = args.seed
    report = run(cfg, timing=args.timing)
    _write_out(dumps_report(report), args.out)
    return 0 if report["status"] == "pass" else 1


def _cmd_moments(args):
    if abs(args.q) > 1:
        raise ConfigSchema(f"q = {args.q} outside [-1, 1]")
    order = args.order
    if order % 2 or order < 2:
        raise ConfigSchema("order must be a positive even integer")
    cutoff = args.cutoff or order
    cfg = {
        "base": {"d": 1, "h": [[1.0]]},
        "correspondence": {"kind": "multiplicity", "k": 1},
        "twist": {"kind": "q", "q": args.q},
        "cutoff": cutoff,
        "seed": args.seed,
        "tolerance": args.tol if args.tol is not None else 1e-10,
        "checks": [{"name": "moments", "orders": list(range(2, order + 1, 2))}],
    }
    report = run(cfg)
    table = report["checks"][0]["values"]["table"]
    if args.format == "csv":
        rows = [
            (r["order"], float(r["measured"].real), float(r["measured"].imag),
             float(r["oracle"].real), float(r["oracle"].imag), float(r["abs_diff"]))
            for r in table
        ]
        _write_out(_csv_text(
            ["order", "measured_re", "measured_im", "oracle_re", "oracle_im",
             "abs_diff"], rows), args.out)
    else:
        _write_out(dumps_report(report), args.out)
    return 0 if report["status"] == "pass" else 1


def _cmd_bohr(args):
    if args.config:
        try:
            spec = json.loads(open(args.config, "r", encoding="utf-8").read())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigParse(str(exc)) from exc
        params = spec
    elif args.beta is not None:
        params = {"beta": args.beta}
    else:
        raise ConfigSchema("bohr needs --config or --beta")
    cfg = {
        "cutoff": 1,
        "seed": args.seed,
        "tolerance": args.tol if args.tol is not None else 1e-8,
        "checks": [{"name": "bohr", **params}],
    }
    report = run(cfg)
    if args.format == "csv":
        rows = [(om, mult) for om, mult in
                report["checks"][0]["values"]["frequencies"]]
        _write_out(_csv_text(["omega", "multiplicity"], rows), args.out)
    else:
        _write_out(dumps_report(report), args.out)
    return 0 if report["status"] == "pass" else 1


def _cmd_gap(args):
    qs = [float(s) for s in str(args.q).split(",")]
    rows = []
    for qv in qs:
        gc = tw.gap_constants(qv, m=args.m)
        rows.append({"q": gc.q, "c": gc.c, "d": gc.d, "f": gc.f,
                     "m": gc.m, "kappa": gc.kappa})
    if args.format == "csv":
        flat = [(r["q"], r["c"], r["d"], r["f"],
                 r["m"] if r["m"] is not None else "",
                 r["kappa"] if r["kappa"] is not None else "") for r in rows]
        _write_out(_csv_text(["q", "c", "d", "f", "m", "kappa"], flat), args.out)
    else:
        _write_out(dumps_report({"version": VERSION, "table": rows}), args.out)
    return 0


def _cmd_tower(args):
    if abs(args.q) > 1:
        raise ConfigSchema(f"q = {args.q} outside [-1, 1]")
    t = tw.make_twist("q", k=args.k, q=args.q)
    tower = tw.build_tower(t, args.cutoff)
    sw = tw.sandwich_bounds_report(tower)
    rows = []
    for lv in tower.levels[1:]:
        entry = {"n": lv.n, "min_eig": lv.min_eig, "max_eig": lv.max_eig,
                 "kernel_rank": lv.kernel_rank,
                 "braided_defect": lv.braided_defect}
        rows.append(entry)
    if args.format == "csv":
        flat = [(r["n"], r["min_eig"], r["max_eig"], r["kernel_rank"],
                 r["braided_defect"]) for r in rows]
        _write_out(_csv_text(
            ["n", "min_eig", "max_eig", "kernel_rank", "braided_defect"],
            flat), args.out)
    else:
        _write_out(dumps_report({
            "version": VERSION, "q": args.q, "k": args.k,
            "levels": rows, "worst_margin": sw["worst_margin"],
        }), args.out)
    return 0


def _build_parser():
    p = argparse.ArgumentParser(
        prog="twistedfock",
        description="Twisted Fock bimodule checks over matrix-algebra bases",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", default=None)
        sp.add_argument("--tol", type=float, default=None,
                        help="override the default tolerance")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=["json", "csv"], default="json")

    sp = sub.add_parser("check", help="run a config of named checks")
    sp.add_argument("--config", required=True)
    sp.add_argument("--timing", action="store_true",
                    help="include wall time (breaks byte reproducibility)")
    common(sp)
    sp.set_defaults(fn=_cmd_check)

    sp = sub.add_parser("moments", help="vacuum moment table vs oracle")
    sp.add_argument("--q", type=float, default=0.0)
    sp.add_argument("--order", type=int, default=8)
    sp.add_argument("--cutoff", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_moments)

    sp = sub.add_parser("bohr", help="Bohr spectrum of an Alicki generator")
    sp.add_argument("--config", default=None)
    sp.add_argument("--beta", type=float, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_bohr)

    sp = sub.add_parser("gap", help="spectral gap constants over a q grid")
    sp.add_argument("--q", default="0.0")
    sp.add_argument("--m", type=int, default=None)
    common(sp)
    sp.set_defaults(fn=_cmd_gap)

    sp = sub.add_parser("tower", help="P_n tower margins for a q twist")
    sp.add_argument("--q", type=float, default=0.0)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--cutoff", type=int, default=4)
    common(sp)
    sp.set_defaults(fn=_cmd_tower)
    return p


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigParse, ConfigSchema) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
