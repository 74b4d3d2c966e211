"""Command-line entry point.

Exit codes: 0 every check passed, 1 at least one failed, 2 usage or
configuration error (including an unwritable ``--json`` path).
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
from typing import List, Optional, Sequence

from . import __version__
from .asep import RateParameters, config_index
from .montecarlo import RNG_DESCRIPTION, SimulationConfig, estimate_duality_gap, exact_duality_expectations
from .report import emit_report, load_schema
from .results import CheckResult, InternalConsistencyError
from .scalar_ring import parse_rational
from .symmetry import (
    check_explicit_SN,
    check_symmetry_commutation,
    diagnose_representation_conventions,
    verify_coproduct_identity,
    verify_shift_relation,
)
from .verification import (
    RunConfig,
    check_corollary,
    check_detailed_balance,
    check_duality,
    run_all,
    run_example_L1,
    run_example_N1,
)
from .xxz import check_prop1, verify_proof_scalar_identities

SEED_ENV = "ASEPDUAL_SEED"
DEFAULT_SEED = 20261019
VERIFY_TARGETS = ("all", "prop1", "lemma", "duality", "corollary", "symmetry", "examples", "conventions")

# defaults of `simulate duality-mc`
MC_DEFAULTS = {"L": 4, "N": 1, "p": "2", "q": "0.5", "alpha": "4", "gamma": "1", "t": 0.5,
               "trajectories": 100_000, "eta": "1100", "xi": "1000"}


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {v}")
    return v


def _grid_parent() -> argparse.ArgumentParser:
    par = argparse.ArgumentParser(add_help=False)
    g = par.add_argument_group("grid")
    lg = g.add_mutually_exclusive_group()
    lg.add_argument("--L", type=_positive_int, help="single lattice size")
    lg.add_argument("--Lmax", type=_positive_int, help="lattice sizes 1..Lmax (default 4)")
    ng = g.add_mutually_exclusive_group()
    ng.add_argument("--N", type=_positive_int, help="single duality order")
    ng.add_argument("--Nmax", type=_positive_int, help="duality orders 1..Nmax (default 2)")
    r = par.add_argument_group("rates (rationals as a/b in exact mode)")
    r.add_argument("--tau", help="asymmetry tau; omitted in exact mode means symbolic tau = t^2")
    r.add_argument("--p", help="right hop rate (requires --q)")
    r.add_argument("--q", help="left hop rate (requires --p)")
    r.add_argument("--alpha", help="entry rate at site 1 (default gamma*p/q)")
    r.add_argument("--gamma", help="exit rate at site 1 (default 1)")
    r.add_argument("--beta", help="entry rate at site L (default 0)")
    r.add_argument("--delta", help="exit rate at site L (default 0)")
    r.add_argument("--c", help="sqrt(pq) when --tau is used or tau is symbolic (default 1)")
    par.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    _output_args(par)
    return par


def _output_args(par: argparse.ArgumentParser) -> None:
    par.add_argument("--json", metavar="PATH", help="also write the JSON report to PATH")
    par.add_argument("--timestamp", action="store_true", help="record the UTC time in the JSON report")
    par.add_argument("--quiet", action="store_true", help="print only the summary line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="asepdual", description="Duality checks for open ASEP.")
    parser.add_argument("--version", action="version", version=f"asepdual {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[_grid_parent()], help="run exact or numeric identity checks")
    v.add_argument("target", choices=VERIFY_TARGETS)
    v.add_argument("--t", type=float, action="append", dest="times",
                   help="semigroup time (repeatable; default 0.5 and 1.0)")

    s = sub.add_parser("simulate", help="Monte Carlo checks")
    s.add_argument("target", choices=("duality-mc",))
    s.add_argument("--L", type=_positive_int, default=MC_DEFAULTS["L"])
    s.add_argument("--N", type=_positive_int, default=MC_DEFAULTS["N"])
    for name in ("p", "q", "alpha", "gamma"):
        s.add_argument(f"--{name}", default=MC_DEFAULTS[name])
    s.add_argument("--beta", default="0")
    s.add_argument("--delta", default="0")
    s.add_argument("--t", type=float, default=MC_DEFAULTS["t"], help="simulation time")
    s.add_argument("--trajectories", type=_positive_int, default=MC_DEFAULTS["trajectories"])
    s.add_argument("--seed", type=int, default=None, help=f"RNG seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    s.add_argument("--eta", default=None, help="occupancies of the first copy, site 1 first (e.g. 1100)")
    s.add_argument("--xi", default=None, help="occupancies of the second copy, site 1 first")
    _output_args(s)

    rp = sub.add_parser("report", help="report utilities")
    rp.add_argument("target", choices=("schema",))
    return parser


# argument interpretation -----------------------------------------------------

def _number(text: Optional[str], mode: str, default=None):
    if text is None:
        return default
    try:
        return parse_rational(text) if mode == "exact" else float(parse_rational(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse number {text!r}")


def rates_from_args(args) -> RateParameters:
    mode = args.mode
    one, zero = _number("1", mode), _number("0", mode)
    gamma = _number(args.gamma, mode, one)
    alpha = _number(args.alpha, mode)
    beta = _number(args.beta, mode, zero)
    delta = _number(args.delta, mode, zero)
    c = _number(getattr(args, "c", None), mode, one)
    if (args.p is None) != (args.q is None):
        raise UsageError("--p and --q must be given together")
    if args.p is not None and getattr(args, "tau", None) is not None:
        raise UsageError("give either --tau or --p/--q, not both")
    try:
        if args.p is not None:
            p, q = _number(args.p, mode), _number(args.q, mode)
            if q == 0:
                raise UsageError("--q must be positive")
            if alpha is None:
                alpha = gamma * p / q
            return RateParameters.from_rates(p, q, alpha, gamma, beta, delta)
        if getattr(args, "tau", None) is not None or mode == "numeric":
            tau = _number(getattr(args, "tau", None), mode, _number("2", mode))
            if tau <= 0:
                raise UsageError("--tau must be positive")
            rates = RateParameters.from_tau(tau, gamma, c)
        else:
            rates = RateParameters.symbolic_rates(c=c, gamma=gamma)
    except ValueError as exc:
        raise UsageError(str(exc))
    changes = {"beta": beta, "delta": delta}
    if alpha is not None:
        changes["alpha"] = alpha
    return rates.replace(**changes)


def _sizes(single, upper, default_max) -> List[int]:
    if single is not None:
        return [single]
    return list(range(1, (upper or default_max) + 1))


def _occupancies(text: str, L: int) -> List[int]:
    if len(text) != L or set(text) - {"0", "1"}:
        raise UsageError(f"configuration {text!r} must be {L} characters of 0/1")
    return [int(ch) for ch in text]


def resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"${SEED_ENV} is not an integer: {env!r}")


# subcommands -------------------------------------------------------------------

def run_verify(args) -> tuple[List[CheckResult], dict]:
    rates = rates_from_args(args)
    Ls = _sizes(args.L, args.Lmax, 4)
    Ns = _sizes(args.N, args.Nmax, 2)
    grid = {"L": Ls, "N": Ns, "rates": rates.as_params()}
    target = args.target
    tau = rates.tau
    out: List[CheckResult] = []
    if target == "all":
        cfg = RunConfig(Ls=Ls, Ns=Ns, mode=rates.mode, gammas=(rates.gamma,), fixed_rates=rates)
        if args.times:
            cfg.semigroup_times = tuple(args.times)
        out = run_all(cfg)
    elif target == "prop1":
        if rates.sqrt_pq != 1:
            raise UsageError("prop1 needs sqrt(pq) = 1")
        out.append(verify_proof_scalar_identities(tau, rates.gamma))
        out.extend(check_prop1(L, rates) for L in Ls)
    elif target == "lemma":
        out.extend(check_detailed_balance(L, rates) for L in Ls)
    elif target == "duality":
        out.extend(check_duality(L, N, rates) for L in Ls for N in Ns)
    elif target == "corollary":
        out.extend(check_corollary(L, N, rates) for L in Ls for N in Ns)
    elif target == "symmetry":
        out.append(verify_shift_relation(range(-3, 4), tau))
        out.append(verify_coproduct_identity(tau))
        out.extend(check_symmetry_commutation(L, N, rates) for L in Ls for N in Ns)
        out.extend(check_explicit_SN(L, N, tau) for L in Ls for N in Ns)
    elif target == "examples":
        out.append(run_example_L1(max(Ns), tau, rates.gamma))
        big = [L for L in Ls if L >= 3] or [3, 4, 5]
        out.extend(run_example_N1(L, rates) for L in big)
    elif target == "conventions":
        out.append(diagnose_representation_conventions(tau))
    return out, grid


def run_simulate(args) -> tuple[List[CheckResult], dict]:
    args.mode = "numeric"
    args.tau = None
    rates = rates_from_args(args)
    seed = resolve_seed(args.seed)
    L = args.L
    eta = _occupancies(args.eta, L) if args.eta else ([1, 1] + [0] * (L - 2) if L >= 2 else [1])
    xi = _occupancies(args.xi, L) if args.xi else [1] + [0] * (L - 1)
    if not rates.in_duality_regime():
        raise UsageError("duality-mc needs beta = delta = 0 and alpha/gamma = p/q")
    try:
        cfg = SimulationConfig(L=L, rates=rates, N=args.N, t_max=args.t,
                               n_trajectories=args.trajectories, seed=seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    est = estimate_duality_gap(cfg, eta, xi)
    exact_lhs, exact_rhs = exact_duality_expectations(cfg, config_index(eta), config_index(xi))
    params = {"L": L, "N": args.N, "mode": "numeric", "t": args.t, "trajectories": args.trajectories,
              "seed": seed, "eta": "".join(map(str, eta)), "xi": "".join(map(str, xi)),
              **{k: str(v) for k, v in rates.as_params().items() if k in ("p", "q", "alpha", "gamma")}}
    derived = {"lhs_mean": est.lhs_mean, "rhs_mean": est.rhs_mean, "combined_stderr": est.combined_stderr,
               "z_score": est.z_score, "exact_lhs": exact_lhs, "exact_rhs": exact_rhs, "rng": RNG_DESCRIPTION}
    passed = abs(est.gap) <= 3 * est.combined_stderr
    result = CheckResult("duality_mc", params, passed, est.gap, derived)
    return [result], {"L": [L], "N": [args.N], "seed": seed}


def _writable(path: str) -> bool:
    if os.path.isdir(path):
        return False
    if os.path.exists(path):
        return os.access(path, os.W_OK)
    parent = os.path.dirname(os.path.abspath(path))
    return os.path.isdir(parent) and os.access(parent, os.W_OK)


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 0 for --help/--version, 2 for usage errors
        return int(exc.code or 0)
    if args.command == "report":
        json.dump(load_schema(), sys.stdout, indent=2)
        sys.stdout.write("\n")
        return 0
    if getattr(args, "json", None) and not _writable(args.json):
        print(f"asepdual: cannot write {args.json}", file=sys.stderr)
        return 2
    try:
        results, grid = run_verify(args) if args.command == "verify" else run_simulate(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"asepdual: error: {exc}", file=sys.stderr)
        return 2
    except InternalConsistencyError as exc:
        print(f"asepdual: internal consistency failure: {exc}", file=sys.stderr)
        return 1
    if args.quiet:
        n_pass = sum(r.passed for r in results)
        print(f"{'PASS' if n_pass == len(results) else 'FAIL'}: {n_pass}/{len(results)} checks passed")
    else:
        emit_report(results, "text")
    if args.json:
        stamp = _dt.datetime.now(_dt.timezone.utc).isoformat() if args.timestamp else None
        mode = getattr(args, "mode", None)
        try:
            emit_report(results, "json", args.json, mode=mode, grid=grid, timestamp=stamp)
        except OSError as exc:
            print(f"asepdual: cannot write {args.json}: {exc}", file=sys.stderr)
            return 2
    return 0 if all(r.passed for r in results) else 1


def main() -> None:
    sys.exit(run_cli())
