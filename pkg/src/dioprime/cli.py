"""Command-line front door: ``dioprime <subcommand> [--config FILE] [flags]``.

The config file is flat ``key = value`` text with ``#`` comments.  Precedence
is config file < ``RIEV_THREADS`` (threads only) < command-line flags.  Every
run writes ``<subcommand>.json`` and ``config.echo`` into ``--out``; feeding
the echo back with the echoed flags reproduces the run.

Exit codes: 0 success, 1 self-test failure, 2 invalid input, 3 resource guard.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, DomainError, ResourceError

ENV_THREADS = "RIEV_THREADS"

DEFAULTS = {
    "q0": 121,
    "delta": 0.05,
    "s": 2.948,
    "lambda0": 0.5,
    "k": 10,
    "lambda1": math.sqrt(2),
    "lambda2": -1.0,
    "lambda3": -1.0,
    "eta": 0.0,
    "seed": 0,
    "threads": 1,
}
INT_KEYS = {"q0", "k", "seed", "threads"}

_SQRT = re.compile(r"^([+-]?)sqrt\(\s*([^)]+)\s*\)$")


def parse_value(key: str, text: str):
    text = text.strip()
    try:
        if key in INT_KEYS:
            return int(text)
        m = _SQRT.match(text)
        if m:
            v = math.sqrt(float(Fraction(m.group(2))))
            return -v if m.group(1) == "-" else v
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad value for {key}: {text!r}") from None


def parse_config_text(text: str) -> dict:
    out, unknown = {}, []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in DEFAULTS:
            unknown.append(key)
            continue
        out[key] = parse_value(key, value)
    if unknown:
        raise ConfigError("unknown config keys: " + ", ".join(sorted(unknown)))
    return out


def load_config(path: str | Path | None, overrides: list[str] | None = None,
                env: dict | None = None) -> dict:
    cfg = dict(DEFAULTS)
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        cfg.update(parse_config_text(p.read_text()))
    env = os.environ if env is None else env
    if env.get(ENV_THREADS):
        cfg["threads"] = parse_value("threads", env[ENV_THREADS])
    if overrides:
        cfg.update(parse_config_text("\n".join(overrides)))
    if cfg["threads"] < 1:
        raise ConfigError("threads must be >= 1")
    return cfg


def echo_config(cfg: dict) -> str:
    return "".join(f"{k} = {cfg[k]!r}\n" for k in DEFAULTS)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serialisable: {type(o).__name__}")


def _lambdas(cfg):
    return (cfg["lambda1"], cfg["lambda2"], cfg["lambda3"])


def _params(cfg):
    from .params import derive_params

    return derive_params(cfg["q0"], cfg["delta"], cfg["s"], cfg["lambda0"], cfg["k"])


def _levels(p, args):
    z = args.z if args.z is not None else p.z
    D = args.D if args.D is not None else p.D
    return z, D


def _weights(z, D, table):
    from .rosser import build_weights, trivial_weights

    return build_weights(z, D, table) if z >= 3 else trivial_weights(z, D)


# subcommands: each returns (result dict, ok flag)

def cmd_params(cfg, args, out):
    from .params import validate_scale

    p = _params(cfg)
    res = p.as_dict()
    res["s_check"] = p.s_check
    res["beta_below_ceiling"] = p.beta_below_ceiling
    res["warnings"] = validate_scale(p)
    print(f"X = {p.X:.6g}  vartheta = {p.vartheta:.6g}  tau = {p.tau:.6g}  H = {p.H:.6g}")
    print(f"z = {p.z:.6g}  D = {p.D:.6g}  beta = {p.beta:.7f}  h = {p.h}")
    for w in res["warnings"]:
        print("warning:", w)
    return res, True


def cmd_weights(cfg, args, out):
    from .ntheory import sieve_primes
    from .rosser import G_pm, W_of, sandwich_violations, sieve_summary

    p = _params(cfg)
    z, D = _levels(p, args)
    table = sieve_primes(max(int(z) + 1, 16))
    w = _weights(z, D, table)
    w.to_csv(out / "weights.csv")
    res = {"z": z, "D": D, "sieving_primes": list(w.sieving_primes), "entries": len(w)}
    if len(w.sieving_primes) <= args.sandwich_max_primes:
        bad = sandwich_violations(w)
        res["sandwich_checked"] = 2 ** len(w.sieving_primes)
        res["sandwich_violations"] = bad
    else:
        bad = []
        res["sandwich_checked"] = 0
        res["sandwich_violations"] = None
    gm, gp = G_pm(w)
    res.update(Gminus=gm, Gplus=gp, W=W_of(gm, gp))
    if z >= 3 and 2 <= math.log(D) / math.log(z) <= 3:
        res["summary"] = sieve_summary(w, table).as_dict()
    print(f"{len(w)} weights (z = {z:.6g}, D = {D:.6g}); G- = {gm:.10g}, G+ = {gp:.10g}")
    print("sandwich:", "skipped" if res["sandwich_violations"] is None
          else f"{len(bad)} violations over {res['sandwich_checked']} divisors")
    return res, not bad


def cmd_mollifier(cfg, args, out):
    from .mollifier import Mollifier

    p = _params(cfg)
    m = Mollifier(p.vartheta, p.k)
    v = m.vartheta
    y = np.linspace(-1.5 * v, 1.5 * v, 10_001)
    th = m.theta(y)
    r = np.abs(y)
    trans = (r > 0.75 * v) & (r < v)
    grid = {
        "plateau_ok": bool(np.all(th[r <= 0.75 * v] == 1.0)),
        "support_ok": bool(np.all(th[r >= v] == 0.0)),
        "range_ok": bool(np.all((th >= 0) & (th <= 1))),
        "transition_open_ok": bool(np.all(th[trans] > 0) and np.all(m.theta_complement(y[trans]) > 0)),
    }
    x = np.logspace(-3, 3, args.points) / v
    hat = np.abs(m.theta_hat(x))
    bnd = m.bound(x)
    ok = m.check_bound(x)
    with np.errstate(divide="ignore"):
        ratio = np.where(bnd > 0, hat / bnd, 0.0)
    with open(out / "theta.csv", "w") as fh:
        fh.write("y,theta\n")
        fh.writelines(f"{a!r},{b!r}\n" for a, b in zip(y.tolist(), th.tolist()))
    with open(out / "transform.csv", "w") as fh:
        fh.write("x,Theta,bound\n")
        fh.writelines(f"{a!r},{b!r},{c!r}\n" for a, b, c in
                      zip(x.tolist(), m.theta_hat(x).tolist(), bnd.tolist()))
    res = {"vartheta": v, "k": m.k, "grid": grid, "bound_points": int(x.size),
           "bound_violations": int((~ok).sum()), "max_ratio": float(ratio.max())}
    print(f"vartheta = {v:.6g}, k = {m.k}: grid {'ok' if all(grid.values()) else 'FAIL'}, "
          f"{res['bound_violations']} bound violations, max |Theta|/bound = {res['max_ratio']:.6f}")
    return res, all(grid.values()) and res["bound_violations"] == 0


def cmd_expsum(cfg, args, out):
    from .expsum import (B_eval, ExpSumContext, J1_eval, J1_truncation_bound, L_pm, dump_grid,
                         gamma1_intermediate_sampled, gamma1_major, main_term_ratio, meansquare_L,
                         tail_diagnostic)
    from .mollifier import Mollifier
    from .ntheory import sieve_primes

    p = _params(cfg)
    z, D = _levels(p, args)
    table = sieve_primes(int(p.X) + 1)
    w = _weights(z, D, table)
    ctx = ExpSumContext.from_params(p, w, table, threads=cfg["threads"])
    m = Mollifier(p.vartheta, p.k)
    lam = _lambdas(cfg)
    eta = cfg["eta"]
    res = {"X": p.X, "primes": int(ctx.primes.size), "z": z, "D": D}
    for s in "-+":
        val = complex(L_pm(ctx, 0.0, s))
        res[f"L{s}(0)"] = val.real
        res[f"ratio{s}"] = main_term_ratio(ctx, s)
    major = gamma1_major(ctx, m, lam, eta, max_panels=args.max_panels)
    J1 = J1_eval(ctx, m, lam, eta, max_panels=args.max_panels)
    B = B_eval(m, lam, eta, p.X, p.lambda0)
    G3 = ctx.G["-"] * ctx.G["+"] ** 2
    res["gamma1_major"] = major.as_dict()
    res["J1"] = J1.as_dict()
    res["B"] = B.as_dict()
    res["B_G_product"] = B.value * G3
    res["J1_truncation_bound"] = J1_truncation_bound(m, lam, p.tau, G3)
    crude = ctx.crude_L_bound()
    res["tail_diagnostic"] = tail_diagnostic(m, p.H, crude)
    res["meansquare"] = {s: meansquare_L(ctx, s, p.tau) for s in "-+"}
    res["intermediate_sampled"] = gamma1_intermediate_sampled(ctx, m, lam, eta, seed=cfg["seed"])
    dump_grid(ctx, np.linspace(-p.tau, p.tau, 257), out / "expsum_grid.csv")
    print(f"L-(0) = {res['L-(0)']:.10g}, L+(0) = {res['L+(0)']:.10g} (ratios {res['ratio-']:.5f}, "
          f"{res['ratio+']:.5f})")
    print(f"major arc = {major.value:.6g} +- {major.error:.2g}; J1 = {J1.value:.6g}; "
          f"B G-G+^2 = {res['B_G_product']:.6g}")
    return res, True


def cmd_hunt(cfg, args, out):
    from .hunt import SearchConfig, find_triples, main_term_report, write_hits_csv
    from .mollifier import Mollifier
    from .ntheory import sieve_primes

    p = _params(cfg)
    z, D = _levels(p, args)
    if p.X > args.max_x:
        raise ResourceError(f"X = {p.X:.4g} beyond the search guard {args.max_x:.4g}")
    table = sieve_primes(int(p.X) + 3)
    w = _weights(z, D, table)
    sc = SearchConfig(_lambdas(cfg), cfg["eta"], p.X, p.lambda0, p.vartheta, z, args.max_omega)
    m = Mollifier(p.vartheta, p.k)
    hits = find_triples(sc, table, threads=cfg["threads"])
    listed = [h for h in hits
              if max(h.omega) <= args.max_omega and (not args.rough_only or all(h.rough))]
    if args.limit is not None:
        listed = listed[: args.limit]
    write_hits_csv(listed, out / "hits.csv")
    report = main_term_report(sc, table, m, w, threads=cfg["threads"])
    report["listed"] = len(listed)
    report["search"] = sc.as_dict()
    print(f"{report['hits']} hits below vartheta = {p.vartheta:.6g} (X = {p.X:.6g}); "
          f"{len(listed)} listed")
    print(f"Gamma = {report['Gamma']:.6g}, Gamma~ = {report['Gamma_tilde']:.6g}, "
          f"Gamma0 = {report['Gamma0']:.6g}, BW = {report['BW']:.6g}")
    return report, True


def cmd_paperchecks(cfg, args, out):
    from .ntheory import sieve_primes
    from .params import sieve_exponent
    from .rosser import positivity_checks, singular_product

    chk = positivity_checks(cfg["s"])
    beta = sieve_exponent(cfg["s"])
    res = dict(chk)
    res["beta_matches_printed"] = abs(beta - 0.035089) < 5e-6
    res["h_is_28"] = chk["h"] == 28
    table = sieve_primes(1000)
    res["singular_product_z1000"] = singular_product(1000, table)
    passed = res["beta_matches_printed"] and res["h_is_28"] and chk["margin_ok"]
    res["pass"] = passed
    print(f"beta = {beta:.7f}, h = {chk['h']}, f - (2/3)F = {chk['f_minus_two_thirds_F']:.4e}, "
          f"{'PASS' if passed else 'FAIL'}")
    return res, passed


COMMANDS = {
    "params": cmd_params,
    "weights": cmd_weights,
    "mollifier": cmd_mollifier,
    "expsum": cmd_expsum,
    "hunt": cmd_hunt,
    "paperchecks": cmd_paperchecks,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dioprime", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    common.add_argument("--threads", type=int, help="worker threads (overrides config and env)")
    common.add_argument("--out", default="dioprime-out", help="report directory")
    common.add_argument("--no-timings", action="store_true", help="omit wall-clock timings")
    levels = argparse.ArgumentParser(add_help=False)
    levels.add_argument("--z", type=float, help="sifting limit (default: derived)")
    levels.add_argument("--D", type=float, help="sieve level (default: derived)")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("params", parents=[common], help="derive and validate the parameter chain")
    w = sub.add_parser("weights", parents=[common, levels], help="build and export Rosser weights")
    w.add_argument("--sandwich-max-primes", type=int, default=22,
                   help="exhaustive sandwich self-test when at most this many sifting primes")
    mo = sub.add_parser("mollifier", parents=[common], help="mollifier grid and bound sweep")
    mo.add_argument("--points", type=int, default=10_000)
    ex = sub.add_parser("expsum", parents=[common, levels], help="major-arc block")
    ex.add_argument("--max-panels", type=int, default=200_000)
    hu = sub.add_parser("hunt", parents=[common, levels], help="search for prime triples")
    hu.add_argument("--limit", type=int, default=1000, help="rows in hits.csv")
    hu.add_argument("--max-omega", type=int, default=28, help="list only hits with every Omega(p+2) <= r")
    hu.add_argument("--rough-only", action="store_true", help="list only hits with every p+2 free of P(z)")
    hu.add_argument("--max-x", type=float, default=2e6, help="refuse larger searches")
    sub.add_parser("paperchecks", parents=[common], help="the s = 2.948 arithmetic")
    return ap


_NON_FLAGS = {"command", "config", "set", "threads", "out", "no_timings"}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.set)
        if args.threads is not None:
            if args.threads < 1:
                raise ConfigError("threads must be >= 1")
            cfg["threads"] = args.threads
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in _NON_FLAGS}
    report = {"artifact": "dioprime", "version": __version__, "subcommand": args.command,
              "config": cfg, "flags": flags, "seed": cfg["seed"]}
    (out / "config.echo").write_text(echo_config(cfg))
    t0 = time.perf_counter()
    code = 0
    try:
        result, ok = COMMANDS[args.command](cfg, args, out)
        report["result"] = result
        report["status"] = "ok" if ok else "self-test failed"
        code = 0 if ok else 1
    except (DomainError, ConfigError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        report["status"] = f"invalid input: {exc}"
        code = 2
    except ResourceError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        partial = exc.partial
        if partial is not None and hasattr(partial, "__dict__"):
            partial = dict(partial.__dict__)
        report["status"] = f"resource guard: {exc}"
        report["partial"] = partial
        code = 3
    if not args.no_timings:
        report["timings"] = {"wall_seconds": time.perf_counter() - t0}
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default)
    (out / f"{args.command}.json").write_text(text + "\n")
    return code


def main() -> None:
    sys.exit(run())
