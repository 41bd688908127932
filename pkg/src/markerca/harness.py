"""Batch execution of evolutionary runs with diversity metrics and CSV export."""
from __future__ import annotations

import csv
import io
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

from .boolfun import GeneratingFunction, format_rule, local_rule_from_generating
from .dynamics import is_involution
from .evolve.config import Algorithm, ConfigError, EngineConfig
from .evolve.engine import RunResult, run_lexicographic, run_single_objective
from .evolve.nsga2 import ParetoFront, run_nsga2
from .fitness import kernel

log = logging.getLogger(__name__)

LOG_FIELDS = ("evaluations", "best_fit", "best_obj1", "best_obj2")
FRONT_FIELDS = ("obj1", "obj2", "genome_hex")
SUMMARY_FIELDS = ("run", "seed", "evaluations", "evaluations_to_optimum",
                  "best_obj1", "best_obj2", "archive_size")
DIVERSITY_FIELDS = ("basis", "UHW", "mHW", "MHW", "USol")
CONVERGENCE_FIELDS = ("evaluations", "median_best_fit")
MAX_LOG_ROWS = 1000


@dataclass(frozen=True)
class ExperimentSpec:
    config: EngineConfig
    runs: int = 50
    base_seed: int = 0
    out_dir: Path | None = None
    workers: int = 1

    def seeds(self) -> list[int]:
        return [self.base_seed + r for r in range(self.runs)]


@dataclass(frozen=True)
class DiversityReport:
    UHW: int
    mHW: int
    MHW: int
    USol: int


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    results: list = field(default_factory=list)
    archives: list[list[int]] = field(default_factory=list)
    diversity: DiversityReport | None = None          # all archived solutions
    diversity_best: DiversityReport | None = None     # best-of-run only
    convergence: list[tuple[int, float]] = field(default_factory=list)


# --- single runs ---------------------------------------------------------------

def run_one(config: EngineConfig) -> RunResult | ParetoFront:
    if config.algorithm is Algorithm.NSGA2:
        return run_nsga2(config)
    if config.algorithm.is_lexicographic:
        return run_lexicographic(config)
    return run_single_objective(config)


def verify_solution(bits: int, d: int, omega: int) -> bool:
    """obj1 = 0, nonzero weight, and F∘F = id on every array of length d+1."""
    rec = kernel(d, omega).evaluate_bits(bits)
    if not rec.is_solution:
        return False
    rule = local_rule_from_generating(GeneratingFunction(d - 1, bits), omega)
    return is_involution(rule, d + 1)


def solutions_of(result: RunResult | ParetoFront) -> list[int]:
    """Verified-candidate truth tables produced by a run."""
    if isinstance(result, ParetoFront):
        return [g for (o1, o2), g in zip(result.points, result.genomes) if o1 == 0 and o2 > 0]
    return list(result.archive)


def downsample(rows: list, limit: int = MAX_LOG_ROWS) -> list:
    """Keep at most ``limit`` rows, always including the first and last."""
    if len(rows) <= limit:
        return list(rows)
    step = (len(rows) - 1) / (limit - 1)
    return [rows[round(i * step)] for i in range(limit)]


# --- metrics -------------------------------------------------------------------

def diversity_metrics(archives: list[list[int]]) -> DiversityReport:
    """Unique weights, weight range and unique truth tables over all archives."""
    tables = {bits for archive in archives for bits in archive}
    if not tables:
        raise ValueError("diversity metrics need at least one archived solution")
    weights = {bits.bit_count() for bits in tables}
    return DiversityReport(len(weights), min(weights), max(weights), len(tables))


def median_convergence(logs: list[list[tuple]]) -> list[tuple[int, float]]:
    """Median best fitness across runs on the union of logged evaluation counts.

    Each run's best fitness is a step function; a run that stopped early keeps
    its final value.
    """
    logs = [lg for lg in logs if lg]
    if not logs:
        return []
    grid = downsample(sorted({row[0] for lg in logs for row in lg}))
    out = []
    pos = [0] * len(logs)
    for e in grid:
        values = []
        for k, lg in enumerate(logs):
            while pos[k] + 1 < len(lg) and lg[pos[k] + 1][0] <= e:
                pos[k] += 1
            values.append(lg[pos[k]][1])
        out.append((e, float(statistics.median(values))))
    return out


# --- output --------------------------------------------------------------------

def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write_once(path: Path, text: str):
    with open(path, "x") as fh:
        fh.write(text)


def front_csv(front: ParetoFront) -> str:
    width = max(1, (1 << (front.config.d - 1)) // 4)
    rows = [(o1, o2, f"{g:0{width}x}") for (o1, o2), g in zip(front.points, front.genomes)]
    return _csv_text(FRONT_FIELDS, rows)


def log_csv(rows) -> str:
    return _csv_text(LOG_FIELDS, downsample(rows))


def archive_text(bits_list: list[int], d: int, omega: int) -> str:
    return "".join(format_rule(GeneratingFunction(d - 1, b), omega) + "\n" for b in bits_list)


def config_text(spec: ExperimentSpec) -> str:
    lines = [f"{k} = {v}" for k, v in spec.config.as_dict().items() if k != "seed"]
    lines += [f"runs = {spec.runs}", f"base_seed = {spec.base_seed}"]
    return "\n".join(lines) + "\n"


def _summary_row(r: int, result) -> tuple:
    if isinstance(result, ParetoFront):
        best = min(result.points)
        sols = solutions_of(result)
        return (r, result.config.seed, result.evaluations, "", best[0], best[1], len(sols))
    eto = "" if result.evaluations_to_optimum is None else result.evaluations_to_optimum
    return (r, result.config.seed, result.evaluations, eto, result.best_record.obj1,
            result.best_record.obj2, len(result.archive))


def _write_outputs(res: ExperimentResult):
    out = res.spec.out_dir
    cfg = res.spec.config
    try:
        out.mkdir(parents=True, exist_ok=True)
        _write_once(out / "config.txt", config_text(res.spec))
        for r, (result, archive) in enumerate(zip(res.results, res.archives)):
            _write_once(out / f"run_{r:03d}_log.csv", log_csv(result.log))
            _write_once(out / f"run_{r:03d}_archive.txt", archive_text(archive, cfg.d, cfg.omega))
            if isinstance(result, ParetoFront):
                _write_once(out / f"run_{r:03d}_front.csv", front_csv(result))
        _write_once(out / "summary.csv", _csv_text(
            SUMMARY_FIELDS, [_summary_row(r, x) for r, x in enumerate(res.results)]))
        rows = []
        for basis, rep in (("archive", res.diversity), ("best", res.diversity_best)):
            rows.append((basis, rep.UHW, rep.mHW, rep.MHW, rep.USol) if rep
                        else (basis, 0, "", "", 0))
        _write_once(out / "diversity.csv", _csv_text(DIVERSITY_FIELDS, rows))
        _write_once(out / "convergence.csv", _csv_text(CONVERGENCE_FIELDS, res.convergence))
    except FileExistsError as exc:
        raise ConfigError(f"refusing to overwrite existing output {exc.filename}") from exc


# --- experiments ---------------------------------------------------------------

def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    if spec.runs < 1:
        raise ConfigError("runs must be positive")
    spec.config.validate()
    configs = [spec.config.with_seed(s) for s in spec.seeds()]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(run_one, configs))
    else:
        results = [run_one(c) for c in configs]

    d, omega = spec.config.d, spec.config.omega
    res = ExperimentResult(spec, results)
    best = []
    for r, result in enumerate(results):
        archive = []
        for bits in solutions_of(result):
            if verify_solution(bits, d, omega):
                archive.append(bits)
            else:
                log.warning("run %d: candidate %x failed re-verification", r, bits)
        res.archives.append(archive)
        if isinstance(result, RunResult) and result.best_bits in archive:
            best.append([result.best_bits])
    if any(res.archives):
        res.diversity = diversity_metrics(res.archives)
    if best:
        res.diversity_best = diversity_metrics(best)
    res.convergence = median_convergence([x.log for x in results])
    if spec.out_dir is not None:
        _write_outputs(res)
    return res


# --- configuration files -------------------------------------------------------

_ENGINE_KEYS = {f.name: f for f in fields(EngineConfig)}
_EXPERIMENT_KEYS = ("runs", "base_seed", "workers", "out_dir")


def parse_config_text(text: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _ENGINE_KEYS and key not in _EXPERIMENT_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _coerce(key: str, value):
    if not isinstance(value, str):
        return value
    try:
        if key in ("mutation_rate", "gp_mutation_rate"):
            return float(value)
        if key == "operator_set":
            return tuple(s.strip().upper() for s in value.split(",") if s.strip())
        if key == "algorithm":
            return Algorithm(value.upper())
        if key == "out_dir":
            return Path(value)
        if key == "max_depth" and value.lower() in ("", "none"):
            return None
        return int(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc


def build_spec(values: dict) -> ExperimentSpec:
    """ExperimentSpec from a mapping of config-file keys (strings or typed values)."""
    typed = {k: _coerce(k, v) for k, v in values.items() if v is not None}
    if "algorithm" not in typed or "d" not in typed:
        raise ConfigError("algorithm and d are required")
    engine = {k: v for k, v in typed.items() if k in _ENGINE_KEYS}
    try:
        config = EngineConfig(**engine).validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    extra = {k: v for k, v in typed.items() if k in _EXPERIMENT_KEYS}
    return ExperimentSpec(config, **extra)
