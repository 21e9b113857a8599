"""Command-line front end.

Subcommands: list-models | validate | integrate | closed-form | check | compare.
Exit codes: 0 success, 2 usage/config error, 3 early stop or pole.
Config files are flat JSON; unknown keys are a hard error so parameter typos
cannot silently fall back to defaults.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog, closedform, coframing, integrate as integ, models, pmp, verify
from .closedform import ClosedFormFamily, NoClosedFormError, PoleError
from .integrate import IntegratorConfig, Trajectory
from .models import CASE_TAGS, DomainError, ModelSpec
from .pmp import PhasePoint

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EARLY = 3

COMPARE_TOL = 1e-6


class ConfigError(ValueError):
    pass


# -- config parsing -------------------------------------------------------------

_MODEL_KEYS = {"case", "c1", "c2", "c3", "c4", "j0", "g0", "epsilon", "f20_coeffs"}


def _reject_unknown(d: dict, allowed: set, where: str):
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(extra)}")


def model_from_dict(d: dict) -> ModelSpec:
    if not isinstance(d, dict) or "case" not in d:
        raise ConfigError("model block must be an object with a 'case' key")
    _reject_unknown(d, _MODEL_KEYS, "model")
    if d["case"] not in CASE_TAGS:
        raise ConfigError(f"unknown case {d['case']!r}")
    try:
        return ModelSpec(**d)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad model block: {e}")


def _integrator_from_dict(d: dict) -> IntegratorConfig:
    allowed = {"method", "step", "abs_tol", "rel_tol", "max_steps",
               "blow_up_norm", "domain_margin"}
    _reject_unknown(d, allowed, "integrator")
    cfg = IntegratorConfig(**d)
    errs = cfg.validate()
    if errs:
        raise ConfigError("bad integrator block: " + "; ".join(errs))
    return cfg


def load_run_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}")
    _reject_unknown(raw, {"model", "initial", "t_span", "integrator", "output"},
                    "config")
    if "model" not in raw or "initial" not in raw:
        raise ConfigError("config needs 'model' and 'initial' blocks")
    spec = model_from_dict(raw["model"])
    errs = models.validate(spec)
    if errs:
        raise ConfigError("invalid model: " + "; ".join(errs))

    init = raw["initial"]
    _reject_unknown(init, {"x", "p"}, "initial")
    if "x" not in init or "p" not in init:
        raise ConfigError("initial block needs 'x' and 'p'")
    try:
        start = PhasePoint(np.array(init["x"], dtype=float),
                           np.array(init["p"], dtype=float))
    except ValueError as e:
        raise ConfigError(f"bad initial block: {e}")
    if start.x.shape != (spec.dim,):
        raise ConfigError(f"{spec.case} needs {spec.dim} state components")
    if not models.in_domain(spec, start.x):
        raise ConfigError("initial state outside the model domain")

    t_span = tuple(raw.get("t_span", (0.0, 1.0)))
    if len(t_span) != 2 or not float(t_span[0]) < float(t_span[1]):
        raise ConfigError("t_span must be (t0, t1) with t0 < t1")
    cfg = _integrator_from_dict(raw.get("integrator", {}))

    out = raw.get("output", {})
    _reject_unknown(out, {"path", "format", "stride"}, "output")
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output.format must be csv or json")
    stride = int(out.get("stride", 1))
    if stride < 1:
        raise ConfigError("output.stride must be >= 1")
    return {"spec": spec, "start": start, "t_span": t_span, "cfg": cfg,
            "path": out.get("path"), "format": fmt, "stride": stride}


# -- serialization --------------------------------------------------------------

def _fmt(v: float) -> str:
    return "%.17g" % v


def trajectory_csv(spec: ModelSpec, traj: Trajectory, stride: int = 1) -> str:
    n = spec.dim
    cols = (["t"] + [f"x{i+1}" for i in range(n)] + [f"p{i+1}" for i in range(n)]
            + ["u"] + list(traj.integral_names))
    lines = [",".join(cols)]
    for i in range(0, len(traj), stride):
        row = ([traj.times[i]] + list(traj.states[i]) + list(traj.costates[i])
               + [traj.controls[i]] + list(traj.integrals[i]))
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def trajectory_json(spec: ModelSpec, traj: Trajectory, stride: int = 1) -> str:
    s = slice(None, None, stride)
    doc = {
        "case": spec.case,
        "stop_reason": traj.stop_reason,
        "integral_names": list(traj.integral_names),
        "times": traj.times[s].tolist(),
        "states": traj.states[s].tolist(),
        "costates": traj.costates[s].tolist(),
        "controls": traj.controls[s].tolist(),
        "integrals": traj.integrals[s].tolist(),
    }
    return json.dumps(doc, indent=1) + "\n"


def trajectory_from_json(text: str) -> Trajectory:
    doc = json.loads(text)
    return Trajectory(np.array(doc["times"]), np.array(doc["states"]),
                      np.array(doc["costates"]), np.array(doc["controls"]),
                      tuple(doc["integral_names"]), np.array(doc["integrals"]),
                      doc["stop_reason"])


def _emit(text: str, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------------

def cmd_list_models(args) -> int:
    cases = CASE_TAGS
    if args.case:
        if args.case not in CASE_TAGS:
            print(f"unknown case {args.case!r}", file=sys.stderr)
            return EXIT_CONFIG
        cases = (args.case,)
    header = f"{'case':6} {'dim':3} {'params':28} {'integrals':22} domain"
    print(header)
    for c in cases:
        info = catalog.CASE_INFO[c]
        print(f"{c:6} {info['dim']:3} {', '.join(info['params']):28} "
              f"{', '.join(info['integrals']):22} {info['domain']}")
        if args.case:
            print(f"  metric: {info['metric']}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        if args.config:
            with open(args.config) as fh:
                raw = json.load(fh)
            spec = model_from_dict(raw.get("model", raw))
        else:
            params = json.loads(args.params) if args.params else {}
            spec = model_from_dict({"case": args.case, **params})
    except (ConfigError, OSError, json.JSONDecodeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    errs = models.validate(spec)
    if errs:
        for e in errs:
            print(f"invalid: {e}")
        return EXIT_CONFIG
    print(f"{spec.case} parameters valid")
    return EXIT_OK


def cmd_integrate(args) -> int:
    try:
        rc = load_run_config(args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    traj = integ.integrate(rc["spec"], rc["start"], rc["t_span"], rc["cfg"])
    path = args.out or rc["path"]
    fmt = args.format or rc["format"]
    stride = args.stride or rc["stride"]
    text = (trajectory_csv if fmt == "csv" else trajectory_json)(rc["spec"], traj, stride)
    _emit(text, path)
    drift = integ.integral_drift(rc["spec"], traj)
    e = integ.energy(rc["spec"], traj) if len(traj) >= 3 else float("nan")
    final = np.array2string(traj.states[-1], precision=10)
    print(f"final_state={final} stop_reason={traj.stop_reason} "
          f"max_integral_drift={max(drift.values()):.3e} energy={e:.10g}")
    return EXIT_OK if traj.stop_reason == "horizon" else EXIT_EARLY


def cmd_closed_form(args) -> int:
    try:
        constants = json.loads(args.constants)
        if not isinstance(constants, dict):
            raise ConfigError("constants must be a JSON object")
        if "coeffs" in constants:
            constants["coeffs"] = tuple(constants["coeffs"])
        family = ClosedFormFamily(args.case, args.subcase or "", constants)
        t0, t1, step = args.t0, args.t1, args.step
        if not (step > 0 and t0 < t1):
            raise ConfigError("need t0 < t1 and step > 0")
        n = int(round((t1 - t0) / step))
        grid = t0 + step * np.arange(n + 1)
    except (json.JSONDecodeError, ConfigError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    rows = []
    try:
        for t in grid:
            rows.append((t, closedform.evaluate_family(family, float(t))))
    except PoleError as e:
        print(f"pole at t = {e.t}", file=sys.stderr)
        return EXIT_EARLY
    except (NoClosedFormError, DomainError, ValueError, KeyError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    dim = len(rows[0][1])
    lines = [",".join(["t"] + [f"x{i+1}" for i in range(dim)])]
    for t, x in rows:
        lines.append(",".join(_fmt(v) for v in (t, *x)))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


SUITES = ("duality", "homogeneity", "integrals", "appendix", "symmetry", "all")


def _report(lines, status, case, check, metric, value):
    lines.append(f"{status} {case} {check} {metric}={value:.3e}")
    return status != "FAIL"


def run_suite(spec: ModelSpec, suite: str, lines: list) -> bool:
    """Append machine-readable pass/fail lines; returns overall pass."""
    rng = np.random.default_rng(catalog.rng_seed())
    ok = True
    case = spec.case
    if suite in ("duality", "all"):
        pts = catalog.sample_states(spec, 20, rng)
        worst = max(coframing.duality_defect(spec, x) for x in pts)
        ok &= _report(lines, "PASS" if worst < 1e-10 else "FAIL",
                      case, "duality", "max_defect", worst)
    if suite in ("homogeneity", "all"):
        pts = catalog.sample_states(spec, 10, rng)
        res = coframing.homogeneity_check(spec, pts)
        ok &= _report(lines, "PASS" if res["pass"] else "FAIL",
                      case, "homogeneity", "max_spread", res["max_spread"])
    if suite in ("integrals", "all"):
        traj = integ.integrate(spec, catalog.default_phase_point(case), (0.0, 5.0))
        if traj.stop_reason != "horizon":
            ok &= _report(lines, "FAIL", case, "integrals", "drift", float("inf"))
        else:
            worst = max(integ.integral_drift(spec, traj).values())
            ok &= _report(lines, "PASS" if worst < 1e-8 else "FAIL",
                          case, "integrals", "max_drift", worst)
    if suite in ("appendix", "all"):
        if case in ("C231", "C232", "C233"):
            pts = catalog.sample_states(spec, 10, rng)
            expected_c2 = spec.epsilon * spec.c2 if case == "C231" else 0.0
            w9 = max(verify.pde_residual_A9(spec, x, expected_c2) for x in pts)
            ok &= _report(lines, "PASS" if w9 < 1e-5 else "FAIL",
                          case, "appendix_pde", "max_residual", w9)
            target = {"C231": 0.0, "C232": -spec.c3 ** 2,
                      "C233": spec.c3 ** 2}[case]
            w10 = max(abs(verify.schwarzian_x1(spec, x) - target) for x in pts)
            ok &= _report(lines, "PASS" if w10 < 1e-4 else "FAIL",
                          case, "appendix_schwarzian", "max_residual", w10)
            if case == "C231":
                roots = pmp.characteristic_roots_case231(spec)
                wq = max(abs(r * r - spec.epsilon * spec.c2 * r - spec.epsilon)
                         for r in (roots.r1, roots.r2))
                ok &= _report(lines, "PASS" if wq < 1e-12 else "FAIL",
                              case, "appendix_roots", "max_residual", wq)
        else:
            lines.append(f"SKIP {case} appendix not_applicable=0")
    if suite in ("symmetry", "all"):
        if case in verify.SYMMETRY_CASES:
            pts = catalog.sample_states(spec, 10, rng)
            worst = 0.0
            for _ in range(5):
                sym = verify.random_symmetry(spec, rng)
                for x in pts:
                    try:
                        r = verify.isometry_residual(spec, sym, x)
                    except DomainError:
                        continue  # image outside domain; point not usable
                    worst = max(worst, r["drift_err"], r["span_err"],
                                r["metric_err"])
            ok &= _report(lines, "PASS" if worst < 1e-6 else "FAIL",
                          case, "symmetry", "max_residual", worst)
        else:
            lines.append(f"SKIP {case} symmetry not_applicable=0")
    return ok


def cmd_check(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}", file=sys.stderr)
        return EXIT_CONFIG
    if args.case:
        if args.case not in CASE_TAGS:
            print(f"unknown case {args.case!r}", file=sys.stderr)
            return EXIT_CONFIG
        specs = [catalog.default_spec(args.case)]
    else:
        specs = catalog.default_specs()
    lines = []
    ok = True
    for spec in specs:
        errs = models.validate(spec)
        if errs:
            print("invalid spec: " + "; ".join(errs), file=sys.stderr)
            return EXIT_CONFIG
        ok &= run_suite(spec, args.suite, lines)
    for line in lines:
        print(line)
    return EXIT_OK if ok else 1


def cmd_compare(args) -> int:
    try:
        rc = load_run_config(args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    spec, start = rc["spec"], rc["start"]
    try:
        if spec.case == "C11":
            flow = closedform.closed_flow_c11(spec, start.x, start.p)
        elif spec.case == "C12":
            flow = closedform.closed_flow_c12(spec, start.x, start.p)
        else:
            print(f"no closed form for {spec.case}", file=sys.stderr)
            return EXIT_CONFIG
    except NoClosedFormError as e:
        print(f"no closed form: {e}", file=sys.stderr)
        return EXIT_CONFIG
    t0, t1 = rc["t_span"]
    times = np.linspace(t0, t1, 11)[1:] - t0
    try:
        numeric = integ.flow_at(spec, start, times, rc["cfg"])
        exact = np.array([flow(t) for t in times])
    except (DomainError, PoleError) as e:
        print(f"early stop during comparison: {e}", file=sys.stderr)
        return EXIT_EARLY
    disc = float(np.max(np.abs(numeric - exact)))
    print(f"max_state_discrepancy={disc:.3e} tolerance={COMPARE_TOL:.1e}")
    return EXIT_OK if disc < COMPARE_TOL else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pointaffine",
                                 description="Homogeneous point-affine models: "
                                             "trajectories and invariant checks")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-models", help="show the model catalog")
    p.add_argument("--case")
    p.set_defaults(fn=cmd_list_models)

    p = sub.add_parser("validate", help="check model parameters")
    p.add_argument("--case")
    p.add_argument("--params", help="JSON object of parameter values")
    p.add_argument("--config", help="RunConfig JSON (model block used)")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("integrate", help="integrate the Hamiltonian flow")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--stride", type=int)
    p.set_defaults(fn=cmd_integrate)

    p = sub.add_parser("closed-form", help="sample a closed-form family")
    p.add_argument("--case", required=True)
    p.add_argument("--subcase", default="")
    p.add_argument("--constants", default="{}", help="JSON object")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=1.0)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_closed_form)

    p = sub.add_parser("check", help="run invariant suites")
    p.add_argument("--case")
    p.add_argument("--suite", default="all", choices=SUITES)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("compare", help="closed form vs numerical flow")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_compare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
