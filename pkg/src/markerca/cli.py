"""Command line entry point: exhaustive, evolve, verify, metrics."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from .boolfun import parse_rule
from .debruijn import SUTNER_MAX_D, build_debruijn, sutner_reversible
from .dynamics import Configuration, is_bijective, is_involution, space_time_trace
from .evolve.config import ConfigError
from .exhaustive import LongRunRequired, exhaustive_search, reports_to_csv
from .fitness import kernel
from .landscape import atomic_landscapes, merge_landscapes

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
EXHAUSTIVE_N_MAX = 16
DEFAULT_SAMPLES = 10_000


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


# --- exhaustive ----------------------------------------------------------------

def cmd_exhaustive(args) -> int:
    reports = []
    for d in args.d:
        omegas = args.omega if args.omega is not None else list(range(d))
        for omega in omegas:
            reports.append(exhaustive_search(d, omega, allow_long=args.allow_long,
                                             method=args.method))
    _emit(reports_to_csv(reports), args.out)
    return EXIT_OK


# --- evolve --------------------------------------------------------------------

_OVERRIDES = {
    "algorithm": "algorithm", "d": "d", "omega": "omega",
    "population_size": "population_size", "mutation_rate": "mutation_rate",
    "gp_mutation_rate": "gp_mutation_rate", "max_depth": "max_depth",
    "operators": "operator_set", "budget": "evaluation_budget",
    "runs": "runs", "base_seed": "base_seed", "workers": "workers", "out": "out_dir",
}


def cmd_evolve(args) -> int:
    values: dict = {}
    if args.config is not None:
        try:
            values.update(harness.parse_config_text(args.config.read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    for attr, key in _OVERRIDES.items():
        value = getattr(args, attr)
        if value is not None:
            values[key] = value
    spec = harness.build_spec(values)
    res = harness.run_experiment(spec)
    found = sum(1 for a in res.archives if a)
    print(f"runs={spec.runs} with_solution={found}")
    for basis, rep in (("archive", res.diversity), ("best", res.diversity_best)):
        if rep is not None:
            print(f"{basis}: UHW={rep.UHW} mHW={rep.mHW} MHW={rep.MHW} USol={rep.USol}")
    return EXIT_OK


# --- verify --------------------------------------------------------------------

def _read_rules(path: Path):
    try:
        lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise ConfigError(f"cannot read rule file: {exc}") from exc
    if not lines:
        raise ConfigError(f"{path} holds no rules")
    try:
        return [(ln.strip(), parse_rule(ln)) for ln in lines]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def verify_rule(parsed, n_min: int, n_max: int, samples: int) -> list[tuple[str, bool | None]]:
    """(check name, verdict) pairs; None marks a check that does not apply."""
    rule, g = parsed.rule, parsed.generating
    checks: list[tuple[str, bool | None]] = []
    if g is None:
        checks.append(("obj1=0", None))
    else:
        checks.append(("obj1=0", kernel(rule.diameter, rule.offset).evaluate_bits(g.bits).obj1 == 0))
    lo = max(n_min, rule.diameter)
    for n in range(lo, n_max + 1):
        if n <= EXHAUSTIVE_N_MAX:
            checks.append((f"involution n={n}", is_involution(rule, n)))
            checks.append((f"bijective n={n}", is_bijective(rule, n)))
        else:
            checks.append((f"involution n={n} ({samples} samples)",
                           is_involution(rule, n, samples=samples, seed=n)))
    if rule.diameter <= SUTNER_MAX_D:
        checks.append(("sutner", sutner_reversible(rule)))
    else:
        checks.append(("sutner", None))
    return checks


def cmd_verify(args) -> int:
    failed = False
    for text, parsed in _read_rules(args.rule_file):
        d = parsed.rule.diameter
        n_min = args.n_min if args.n_min is not None else d
        n_max = args.n_max if args.n_max is not None else max(n_min, d + 4)
        if n_max < n_min:
            raise ConfigError("--n-max is smaller than --n-min")
        print(text)
        if parsed.generating is not None and parsed.generating.bits:
            lands = merge_landscapes(atomic_landscapes(parsed.generating, parsed.rule.offset))
            print("  landscapes: " + " ".join(sorted(map(str, lands))))
        for name, ok in verify_rule(parsed, n_min, n_max, args.samples):
            verdict = "skip" if ok is None else ("pass" if ok else "FAIL")
            print(f"  {name}: {verdict}")
            failed |= ok is False
        if args.debruijn is not None:
            args.debruijn.write_text(build_debruijn(parsed.rule).dump())
        if args.trace is not None:
            try:
                start = Configuration.parse(args.trace)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            print("\n".join(space_time_trace(parsed.rule, start, args.steps)))
    return EXIT_FAIL if failed else EXIT_OK


# --- metrics -------------------------------------------------------------------

def cmd_metrics(args) -> int:
    archives = []
    failed = False
    for path in args.archives:
        entries = _read_rules(path) if path.stat().st_size else []
        bits = []
        for text, parsed in entries:
            g = parsed.generating
            if g is None:
                raise ConfigError(f"{text!r} is not a marker rule")
            if args.verify and not harness.verify_solution(g.bits, g.num_vars + 1,
                                                           parsed.rule.offset):
                print(f"FAIL {path}: {text}")
                failed = True
            bits.append(g.bits)
        archives.append(bits)
    try:
        rep = harness.diversity_metrics(archives)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(",".join(harness.DIVERSITY_FIELDS[1:]))
    print(f"{rep.UHW},{rep.mHW},{rep.MHW},{rep.USol}")
    return EXIT_FAIL if failed else EXIT_OK


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="markerca", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exhaustive", help="enumerate all conserved-landscape rules")
    p.add_argument("--d", type=int, nargs="+", required=True)
    p.add_argument("--omega", type=int, nargs="+")
    p.add_argument("--allow-long", action="store_true")
    p.add_argument("--method", choices=("graph", "brute"), default="graph")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_exhaustive)

    p = sub.add_parser("evolve", help="run an evolutionary experiment")
    p.add_argument("--config", type=Path, help="file of 'key = value' lines")
    p.add_argument("--algorithm")
    p.add_argument("--d", type=int)
    p.add_argument("--omega", type=int)
    p.add_argument("--population-size", type=int)
    p.add_argument("--mutation-rate", type=float)
    p.add_argument("--gp-mutation-rate", type=float)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--operators", help="comma separated GP operator set")
    p.add_argument("--budget", type=int, help="fitness evaluations per run")
    p.add_argument("--runs", type=int)
    p.add_argument("--base-seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", help="check reversibility of rules in a file")
    p.add_argument("rule_file", type=Path)
    p.add_argument("--n-min", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--debruijn", type=Path, help="write the labeled de Bruijn edge list")
    p.add_argument("--trace", help="initial configuration for a space-time trace")
    p.add_argument("--steps", type=int, default=8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("metrics", help="diversity metrics of archive files")
    p.add_argument("archives", type=Path, nargs="+")
    p.add_argument("--verify", action="store_true", help="re-verify every entry")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, LongRunRequired) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
