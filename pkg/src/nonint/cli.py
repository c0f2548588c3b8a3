"""Command-line entry point: ``nonint analyze | example | simulate``."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import criteria as CR
from . import families as FAM
from . import oracle as OR
from . import planar as PL
from . import resonance as RS
from . import spectral as S
from . import vectorfield as VF
from .errors import NonintError
from .normalform import double_hopf_coeffs, fold_hopf_coeffs
from .ode import integrate

SCHEMA = "nonint.report/1"

EXIT_NONINTEGRABLE = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2

CONVENTIONS = {
    "inner_product": "<u, v> = sum conj(u_k) v_k",
    "eigenvector_scaling": "right eigenvectors have last non-negligible component 1; <u, v> = 1",
    "kappa11_fold_hopf": "<u1, B(v0, v1)>",
    "alpha": "real and imaginary parts of the kappas (fold-Hopf: Re k11, Im k11, k02, k01)",
}

PLANAR_X0 = {"Case1": (0.1, -0.05), "Case2": (0.1, 0.1)}
FULL_X0 = {3: (0.1, 0.0, -0.05), 4: (0.1, 0.0, 0.1, 0.0)}


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


# --- parsing helpers -----------------------------------------------------------

def parse_number(text: str, exact: bool = True):
    """``"9/10"`` or ``"0.9"`` as a Fraction (exact) or float."""
    text = text.strip()
    try:
        return Fraction(text) if exact else float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise CliError("BadArgument", f"not a number: {text!r}") from None


def parse_vector(text: str, exact: bool = True) -> list:
    return [parse_number(t, exact) for t in text.split(",") if t.strip()]


def parse_sweep(text: str) -> tuple[str, list[Fraction]]:
    """``a=0.1:1.4:0.05`` -> ("a", [1/10, 3/20, ..., 7/5]) with exact steps."""
    try:
        name, rng = text.split("=", 1)
        lo, hi, step = (Fraction(x) for x in rng.split(":"))
    except ValueError:
        raise CliError("BadArgument", f"sweep must look like name=start:stop:step, got {text!r}") from None
    if step <= 0:
        raise CliError("BadArgument", "sweep step must be positive")
    vals, k = [], 0
    while lo + k * step <= hi:
        vals.append(lo + k * step)
        k += 1
    return name.strip(), vals


def _family_params(args) -> dict:
    if args.family == "rossler":
        return {"a": args.a}
    return {"c": args.c, "b1": args.b1, "b2": args.b2, "a1": args.a1, "a2": args.a2}


def _family_field(family: str, params: dict, exact: bool):
    vals = {k: parse_number(str(v), exact) for k, v in params.items()}
    if family == "rossler":
        return FAM.rossler(vals["a"]), FAM.rossler_closed_form(vals["a"])
    return FAM.vdp(**vals), FAM.vdp_closed_form(**vals)


# --- analysis pipeline ---------------------------------------------------------

def _ser(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def _eigen_summary(pairs, A) -> list:
    out = []
    for p in pairs:
        out.append({"lambda": _ser(complex(p.lam)), "residual": p.residual(A),
                    "biorthogonality": abs(complex(S.inner(p.u, p.v)) - 1)})
    return out


def _rationalize(alpha) -> tuple:
    return tuple(a if isinstance(a, Fraction) else Fraction(float(a)).limit_denominator(10 ** 6) for a in alpha)


def analyze_field(f: VF.PolyVectorField, opts: dict) -> dict:
    """Run the full pipeline on a field with an equilibrium at the origin."""
    cfg = CR.CriteriaConfig(qmax=opts["qmax"], rat_tol=opts["rat_tol"])
    report: dict = {"conventions": CONVENTIONS}
    A = VF.jacobian_at_origin(f)
    pairs = S.eigen_decomposition(A)
    cls = S.classify_case(pairs, S.default_classify_tol(A))
    report["spectral"] = {"classification": cls.kind, "eigenpairs": _eigen_summary(pairs, A),
                          "classify_tol": S.default_classify_tol(A), "norm_inf": S.inf_norm(A)}
    if isinstance(cls, S.Unsupported):
        raise CliError("Unsupported", f"unsupported spectrum: {cls.reason}")
    if isinstance(cls, S.FoldHopf):
        coeffs = fold_hopf_coeffs(f, cls)
        verdict = CR.evaluate_fold_hopf(coeffs, cfg)
        spec = RS.SymbolicSpectrum.fold_hopf(cls.omega)
        kind = "Case1"
    else:
        coeffs = double_hopf_coeffs(f, cls)
        verdict = CR.evaluate_double_hopf(coeffs, cfg, check_frequencies=not opts["incommensurate"])
        spec = RS.SymbolicSpectrum.double_hopf(cls.omega1, cls.omega2)
        kind = "Case2"
    report["coefficients"] = coeffs.to_dict()
    res = RS.resonance_set(spec, opts["bound"])
    report["resonance"] = dict(res.to_dict(), spectrum=spec.to_dict())
    report["planar"] = _planar_checks(coeffs, kind, opts)
    if opts.get("oracle"):
        report["oracle"] = _oracle_block(coeffs, kind, opts["oracle"])
        verdict = _apply_oracle(verdict, report["oracle"])
    if opts["incommensurate"] and kind == "Case2":
        verdict = CR._with_caveats(verdict, verdict.caveats + ("omega1/omega2 declared irrational by the user",))
    report["verdict"] = verdict.to_dict()
    report["outcome"] = verdict.outcome
    return report


def _planar_checks(coeffs, kind: str, opts: dict) -> dict:
    rtol, atol = opts["rtol"], opts["atol"]
    sysm = PL.make_planar(coeffs)
    out: dict = {"kind": kind, "field": sysm.field.to_str(list(sysm.names)), "rtol": rtol, "atol": atol}
    Q = sysm.integral()
    x0 = None if Q.degenerate else _domain_start(Q, kind)
    if Q.degenerate:
        out["conservation"] = {"skipped": Q.reason}
    elif x0 is None:
        out["conservation"] = {"skipped": "no starting point of radius 0.1 inside the domain of Q"}
    else:
        try:
            traj = integrate(sysm.field, x0, 5.0, rtol, atol, domain=Q.domain)
            out["conservation"] = {"x0": list(x0), "t_end": 5.0, "max_relative_drift":
                                   PL.conservation_drift(Q, traj), "termination": traj.termination}
        except NonintError as exc:
            out["conservation"] = {"error": type(exc).__name__, "message": str(exc)}
    x0f = FULL_X0[3 if kind == "Case1" else 4]
    try:
        red = PL.reduction_consistency(coeffs, x0f, 3.0, rtol, atol)
        out["reduction"] = dict(red.to_dict(), x0=list(x0f), t_end=3.0)
    except NonintError as exc:
        out["reduction"] = {"error": type(exc).__name__, "message": str(exc)}
    return out


def _domain_start(Q, kind: str):
    """The default start if Q is defined there, else the first point on a 0.1-arc that is."""
    cands = [PLANAR_X0[kind]]
    lo = -math.pi / 2 if kind == "Case1" else 0.0
    cands += [(0.1 * math.cos(t), 0.1 * math.sin(t)) for t in np.linspace(lo, math.pi / 2, 41)[1:-1]]
    for x in cands:
        if Q.domain(np.asarray(x)):
            return tuple(float(v) for v in x)
    return None


def _oracle_block(coeffs, kind: str, d: int) -> dict:
    if kind == "Case1":
        a = coeffs.alpha_exact
        alpha = (a[0], 0, a[1], a[2]) if a is not None else _rationalize(coeffs.alpha)
        sysm = PL.planar_case1(_rationalize(alpha))
    else:
        sysm = PL.planar_case2(_rationalize(coeffs.alpha))
    names = list(sysm.names)
    fi = OR.polynomial_first_integrals(sysm.field, d)
    cf = OR.polynomial_commuting_fields(sysm.field, d)
    exact = kind == "Case1" and coeffs.alpha_exact is not None
    return {
        "degree_bound": d,
        "alpha_used": [str(x) for x in sysm.alpha],
        "alpha_source": "exact" if exact else "rationalized (denominators <= 10^6)",
        "first_integrals": fi.to_dict(names),
        "commuting_fields": cf.to_dict(names),
        "statement": (f"no polynomial first integral up to degree {d}" if fi.dimension == 0 else
                      f"polynomial first integrals found up to degree {d}") + "; " +
                     (f"no polynomial commuting field beyond span(p) up to degree {d}"
                      if cf.quotient_dimension == 0 else
                      f"polynomial commuting fields beyond span(p) found up to degree {d}") +
                     "; analytic objects of higher degree are not ruled out",
        "confirms": fi.dimension == 0 and cf.quotient_dimension == 0,
    }


def _apply_oracle(v: CR.Verdict, block: dict) -> CR.Verdict:
    if block["confirms"] or v.outcome != CR.NONINTEGRABLE:
        return v
    return CR.Verdict(CR.INCONCLUSIVE, None, v.hypotheses, v.rationality,
                      v.caveats + ("oracle found polynomial objects in the planar truncation",),
                      v.satisfied, v.frequency_ratio, v.zero_tol, v.config)


def _input_block(raw: bytes | None, f: VF.PolyVectorField, origin: str) -> dict:
    d = {"source": origin, "dim": f.dim, "n_terms": len(f.terms), "scalar_kind": f.kind}
    if raw is not None:
        d["sha256"] = hashlib.sha256(raw).hexdigest()
    return d


def _opts(args) -> dict:
    return {"qmax": args.qmax, "rat_tol": args.rat_tol, "rtol": args.rtol, "atol": args.atol,
            "bound": args.bound, "oracle": args.oracle, "incommensurate": args.incommensurate}


def _tolerances(opts: dict) -> dict:
    return {k: opts[k] for k in ("qmax", "rat_tol", "rtol", "atol", "bound")} | {
        "oracle_degree": opts["oracle"], "screen_degree": OR.SCREEN_DEGREE, "screen_tol": OR.SCREEN_TOL}


def _prepare(f: VF.PolyVectorField, args) -> tuple[VF.PolyVectorField, dict]:
    info: dict = {}
    if args.shift:
        x0 = parse_vector(args.shift, exact=f.kind == "fraction")
        f = VF.shift(f, x0)
        info["shift"] = [_ser(x) for x in x0]
    elif args.find_equilibrium:
        seed = parse_vector(args.find_equilibrium, exact=False)
        x0 = VF.find_equilibrium(f, seed)
        snapped = [Fraction(float(x)).limit_denominator(10 ** 6) for x in x0]
        if f.kind == "fraction" and not any(VF.evaluate(f, snapped, exact=True)):
            # at a fold-Hopf point the root is double and Newton is only good to
            # about sqrt(machine eps); an exact rational root avoids that
            f = VF.shift(f, snapped)
            info["shift"] = [str(x) for x in snapped]
            info["shift_source"] = "Newton, snapped to an exact rational equilibrium"
        else:
            g = f.astype("float") if f.kind == "fraction" else f
            f = VF.shift(g, [float(x) for x in x0])
            # Newton leaves round-off sized constants behind
            f = VF.PolyVectorField(f.dim, [{m: c for m, c in comp.items() if sum(m) > 0 or abs(c) > 1e-12}
                                           for comp in f.components], max_degree=f.max_degree)
            info["shift"] = [float(x) for x in x0]
            info["shift_source"] = "Newton"
    return f, info


def run_analysis(f: VF.PolyVectorField, raw: bytes | None, origin: str, args, extra: dict | None = None) -> dict:
    opts = _opts(args)
    base = {"schema": SCHEMA, "tool": {"name": "nonint", "version": __version__},
            "tolerances": _tolerances(opts)}
    try:
        base["input"] = _input_block(raw, f, origin)
        if extra:
            base["input"].update(extra)
        g, info = _prepare(f, args)
        base["input"].update(info)
        base.update(analyze_field(g, opts))
    except CliError as exc:
        base["outcome"] = "Error"
        base["error"] = {"code": exc.code, "message": str(exc)}
    except (NonintError, ValueError, ZeroDivisionError) as exc:
        base["outcome"] = "Error"
        base["error"] = {"code": type(exc).__name__, "message": str(exc)}
    return base


def exit_code(report: dict) -> int:
    return {CR.NONINTEGRABLE: EXIT_NONINTEGRABLE, CR.INCONCLUSIVE: EXIT_INCONCLUSIVE}.get(
        report.get("outcome"), EXIT_ERROR)


def dumps(report: dict, compact: bool = False) -> str:
    if compact:
        return json.dumps(report, sort_keys=True, separators=(",", ":"), allow_nan=False, default=_ser)
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False, default=_ser)


def _clean(obj):
    """Replace non-finite floats by strings so the JSON stays valid."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _load_spec(path: str):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise CliError("FileNotFound", str(exc)) from None
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CliError("SpecParseError", f"invalid JSON: {exc}") from None
    return VF.from_json_obj(obj), raw


def cmd_analyze(args) -> int:
    if args.sweep:
        return _sweep(args)
    try:
        if args.family:
            f, closed = _family_field(args.family, _family_params(args), not args.float_params)
            report = run_analysis(f, None, f"family:{args.family}", args,
                                  {"params": {k: str(v) for k, v in _family_params(args).items()}})
            report["closed_form"] = closed.to_dict()
        else:
            if not args.spec:
                raise CliError("BadArgument", "give a spec file or --family")
            f, raw = _load_spec(args.spec)
            report = run_analysis(f, raw, Path(args.spec).name, args)
    except CliError as exc:
        report = _error_report(exc.code, str(exc))
    except (NonintError, ValueError) as exc:
        report = _error_report(type(exc).__name__, str(exc))
    _emit(_clean(report), args)
    return exit_code(report)


def _error_report(code: str, message: str) -> dict:
    return {"schema": SCHEMA, "tool": {"name": "nonint", "version": __version__}, "outcome": "Error",
            "error": {"code": code, "message": message}}


def _emit(report: dict, args) -> None:
    text = dumps(report) + "\n"
    if args.json:
        Path(args.json).write_text(text)
    else:
        sys.stdout.write(text)


def _sweep(args) -> int:
    if not args.family:
        raise SystemExit("--sweep needs --family")
    name, values = parse_sweep(args.sweep)
    base = _family_params(args)
    if name not in base:
        raise SystemExit(f"unknown parameter {name!r} for family {args.family}")

    def point(v):
        params = dict(base, **{name: str(v)})
        try:
            f, _ = _family_field(args.family, params, not args.float_params)
        except (NonintError, ValueError, CliError) as exc:
            code = exc.code if isinstance(exc, CliError) else type(exc).__name__
            rep = _error_report(code, str(exc))
        else:
            rep = run_analysis(f, None, f"family:{args.family}", args,
                               {"params": {k: str(x) for k, x in params.items()}})
        rep["sweep"] = {"parameter": name, "value": str(v)}
        return _clean(rep)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        reports = list(pool.map(point, values))  # map keeps input order
    lines = "".join(dumps(r, compact=True) + "\n" for r in reports)
    if args.json:
        Path(args.json).write_text(lines)
    else:
        sys.stdout.write(lines)
    codes = {exit_code(r) for r in reports}
    if EXIT_ERROR in codes:
        return EXIT_ERROR
    return EXIT_INCONCLUSIVE if EXIT_INCONCLUSIVE in codes else EXIT_NONINTEGRABLE


# --- example -------------------------------------------------------------------

def cmd_example(args) -> int:
    params = _family_params(args)
    try:
        f, closed = _family_field(args.family, params, not args.float_params)
    except (NonintError, ValueError, CliError) as exc:
        code = exc.code if isinstance(exc, CliError) else type(exc).__name__
        sys.stderr.write(f"error [{code}]: {exc}\n")
        return EXIT_ERROR
    spec = json.dumps(VF.to_json_obj(f), indent=2) + "\n"
    side = json.dumps(_clean(closed.to_dict()), sort_keys=True, indent=2) + "\n"
    if args.out:
        out = Path(args.out)
        out.write_text(spec)
        sidecar = Path(args.sidecar) if args.sidecar else out.with_name(out.stem + ".closed_form.json")
        sidecar.write_text(side)
        sys.stderr.write(f"wrote {out} and {sidecar}\n")
    else:
        sys.stdout.write(spec)
        if args.sidecar:
            Path(args.sidecar).write_text(side)
    return 0


# --- simulate ------------------------------------------------------------------

def _stats_comment(drifts) -> str:
    return f"Q relative drift max {max(drifts):.6e} mean {float(np.mean(drifts)):.6e}"


def cmd_simulate(args) -> int:
    try:
        return _simulate(args)
    except CliError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
    except (NonintError, ValueError) as exc:
        sys.stderr.write(f"error [{type(exc).__name__}]: {exc}\n")
    return EXIT_ERROR


def _coeffs_for(f):
    A = VF.jacobian_at_origin(f)
    cls = S.classify_case(S.eigen_decomposition(A), S.default_classify_tol(A))
    if isinstance(cls, S.FoldHopf):
        return fold_hopf_coeffs(f, cls)
    if isinstance(cls, S.DoubleHopf):
        return double_hopf_coeffs(f, cls)
    raise CliError("Unsupported", f"unsupported spectrum: {cls.reason}")


def _simulate(args) -> int:
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        if args.case1 or args.case2:
            alpha = parse_vector(args.case1 or args.case2, exact=False)
            if len(alpha) != 4:
                raise CliError("BadArgument", "alpha needs four entries (alpha2 is ignored for Case1)")
            sysm = PL.planar_case1(alpha) if args.case1 else PL.planar_case2(alpha)
            return _simulate_planar(sysm, args, out)
        if args.family:
            f, _ = _family_field(args.family, _family_params(args), not args.float_params)
        elif args.spec:
            f, _ = _load_spec(args.spec)
        else:
            raise CliError("BadArgument", "give a spec file, --family, --case1 or --case2")
        if f.dim == 2 and not (args.planar or args.compare_planar):
            return _simulate_plain(f, args, out)
        if args.planar or args.compare_planar:
            coeffs = _coeffs_for(f)
            if args.compare_planar:
                return _simulate_compare(coeffs, args, out)
            return _simulate_planar(PL.make_planar(coeffs), args, out)
        return _simulate_plain(f, args, out)
    finally:
        if args.csv:
            out.close()


def _x0(args, n: int, default=None) -> list[float]:
    if args.x0 is None:
        if default is None:
            raise CliError("BadArgument", "--x0 is required")
        return list(default)
    x0 = parse_vector(args.x0, exact=False)
    if len(x0) != n:
        raise CliError("DimensionMismatch", f"--x0 needs {n} entries, got {len(x0)}")
    return x0


def _simulate_plain(f, args, out) -> int:
    traj = integrate(f, _x0(args, f.dim), args.t_end, args.rtol, args.atol)
    meta = traj.metadata()
    PL.write_csv(traj, out, comment=" ".join(f"{k}={meta[k]}" for k in sorted(meta)))
    return 0


def _simulate_planar(sysm: PL.PlanarSystem, args, out) -> int:
    x0 = list(PLANAR_X0[sysm.kind]) if args.x0 is None else parse_vector(args.x0, exact=False)
    if len(x0) == 3:  # full coordinates, reduced to (r, x3)
        x0 = [math.hypot(x0[0], x0[1]), x0[2]]
    elif len(x0) == 4:
        x0 = [math.hypot(x0[0], x0[1]), math.hypot(x0[2], x0[3])]
    elif len(x0) != 2:
        raise CliError("DimensionMismatch", "--x0 needs 2, 3 or 4 entries")
    Q = sysm.integral()
    zero_start = all(v == 0 for v in x0)
    traj = integrate(sysm.field, x0, args.t_end, args.rtol, args.atol,
                     domain=None if zero_start or Q.degenerate else Q.domain)
    if zero_start or Q.degenerate:
        comment = "Q not evaluated: " + ("start at the equilibrium" if zero_start else Q.reason)
        PL.write_csv(traj, out, list(sysm.names), comment=comment)
        return 0
    q0 = Q(traj.states[0])
    drifts = [abs(Q(x) - q0) / max(abs(q0), 1e-300) for x in traj.states]
    comment = _stats_comment(drifts) + f" termination={traj.termination} rtol={args.rtol} atol={args.atol}"
    PL.write_csv(traj, out, list(sysm.names), Q=Q, comment=comment)
    return 0


def _simulate_compare(coeffs, args, out) -> int:
    full = PL.truncated_normal_form(coeffs)
    x0 = _x0(args, full.dim, FULL_X0[full.dim])
    rep = PL.reduction_consistency(coeffs, x0, args.t_end, args.rtol, args.atol, samples=args.samples)
    grid = np.linspace(0.0, args.t_end, args.samples)
    tf = integrate(full, x0, args.t_end, args.rtol, args.atol, stops=grid)
    sysm = PL.make_planar(coeffs)
    if full.dim == 3:
        y0 = [math.hypot(x0[0], x0[1]), x0[2]]
        radial = lambda x: [math.hypot(x[0], x[1]), x[2]]
    else:
        y0 = [math.hypot(x0[0], x0[1]), math.hypot(x0[2], x0[3])]
        radial = lambda x: [math.hypot(x[0], x[1]), math.hypot(x[2], x[3])]
    tp = integrate(sysm.field, y0, args.t_end, args.rtol, args.atol, stops=grid)
    names = list(sysm.names)
    out.write(",".join(["t"] + [f"{n}_full" for n in names] + [f"{n}_planar" for n in names]) + "\n")
    for t in grid:
        if t > tf.times[-1] or t > tp.times[-1]:
            break
        row = [float(t)] + radial(tf.at(t)) + list(tp.at(t))
        out.write(",".join(repr(float(v)) for v in row) + "\n")
    out.write(f"# max deviation {rep.max_deviation:.6e} over {rep.samples} samples\n")
    return 0


# --- argument parser -------------------------------------------------------------

def _add_family(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--family", choices=("rossler", "vdp"), required=required)
    p.add_argument("--a", default="9/10", help="Rossler parameter (b = 1, c = a)")
    p.add_argument("--c", default="2")
    p.add_argument("--b1", default="1/2")
    p.add_argument("--b2", default="1/2")
    p.add_argument("--a1", default="1")
    p.add_argument("--a2", default="1")
    p.add_argument("--float-params", action="store_true",
                   help="treat family parameters as floats instead of exact fractions")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nonint", description="Nonintegrability checks for fold-Hopf "
                                 "and double-Hopf equilibria of polynomial vector fields.")
    ap.add_argument("--version", action="version", version=f"nonint {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="run the full pipeline on a spec file")
    an.add_argument("spec", nargs="?")
    _add_family(an)
    an.add_argument("--oracle", type=int, default=0, metavar="D", help="polynomial search up to degree D")
    an.add_argument("--rtol", type=float, default=1e-10)
    an.add_argument("--atol", type=float, default=1e-12)
    an.add_argument("--qmax", type=int, default=10 ** 6)
    an.add_argument("--rat-tol", type=float, default=1e-12)
    an.add_argument("--bound", type=int, default=RS.DEFAULT_BOUND, help="resonance search bound")
    eq = an.add_mutually_exclusive_group()
    eq.add_argument("--shift", help="translate the equilibrium x0 (comma separated) to the origin")
    eq.add_argument("--find-equilibrium", metavar="SEED", help="Newton from SEED, then shift")
    an.add_argument("--incommensurate", action="store_true",
                    help="declare omega1/omega2 irrational instead of testing it")
    an.add_argument("--sweep", help="name=start:stop:step over a family parameter (JSON lines)")
    an.add_argument("--workers", type=int, default=4)
    an.add_argument("--json", help="write the report here instead of stdout")
    an.set_defaults(func=cmd_analyze)

    ex = sub.add_parser("example", help="emit a built-in example spec and its closed-form sidecar")
    ex.add_argument("family", choices=("rossler", "vdp"))
    ex.add_argument("--a", default="9/10")
    ex.add_argument("--c", default="2")
    ex.add_argument("--b1", default="1/2")
    ex.add_argument("--b2", default="1/2")
    ex.add_argument("--a1", default="1")
    ex.add_argument("--a2", default="1")
    ex.add_argument("--float-params", action="store_true")
    ex.add_argument("--out", help="spec path (sidecar defaults to <stem>.closed_form.json)")
    ex.add_argument("--sidecar")
    ex.set_defaults(func=cmd_example)

    si = sub.add_parser("simulate", help="integrate a field or its planar reduction, CSV output")
    si.add_argument("spec", nargs="?")
    _add_family(si)
    si.add_argument("--case1", metavar="ALPHA", help="planar Case1 system with alpha (4 entries)")
    si.add_argument("--case2", metavar="ALPHA", help="planar Case2 system with alpha")
    si.add_argument("--x0", help="initial state; --planar and --compare-planar default to a point near 0")
    si.add_argument("--t-end", type=float, default=5.0)
    si.add_argument("--rtol", type=float, default=1e-10)
    si.add_argument("--atol", type=float, default=1e-12)
    si.add_argument("--planar", action="store_true", help="integrate the planar reduction")
    si.add_argument("--compare-planar", action="store_true",
                    help="truncated normal form against the planar reduction")
    si.add_argument("--samples", type=int, default=301)
    si.add_argument("--csv")
    si.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
