"""Scenario configuration, closed-loop experiment runs, and metrics.

A scenario bundles the QoS configuration, the links, the services with
their rate traces, a seed-profile source, and a predictor choice. Scenarios
are fully deterministic: (config, rng_seed) fixes every output byte except
wall-clock timing, which is therefore segregated into its own sidecar file
(timings.csv) and excluded from the determinism contract.

Config files are JSON with a strict key set (unknown keys are rejected) so
experiments stay auditable; rate and background traces are CSV files with
one column per service (or link) and one row per epoch.

Reported metrics, averaged over all epochs of a run:

* avg_rab            mean of max(0, ERAB)      (surplus bandwidth)
* avg_dlr            mean of max(0, -ERAB)     (loss rate)
* avg_bw_variation   mean |total_{t+1} - total_t| over consecutive epochs
* final_search_time  wall-clock of the last epoch's allocation search,
                     re-measured as a median over repeated evaluations of
                     that same final-state search so single-shot timer
                     jitter cannot invert comparisons.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .baselines import GRNN_BOUNDED, KNN, KnnPredictor, PredictorKind
from .controller import ConfigError, QosConfig, QosController, quantize
from .netsim import LinkSpec, ServiceSpec, Simulator
from .predictor import DEFAULT_SIGMA2, GrnnPredictor, KernelParams
from .profile import Profile
from .search import SearchGrid, search

FINAL_TIMING_REPS = 21


# ---------------------------------------------------------------------------
# scenario configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeedSpec:
    """Where the initial profile comes from: a file, or the generator."""

    file: str | None = None
    records: int | None = None
    nominal_rate: float | None = None

    def __post_init__(self) -> None:
        from_file = self.file is not None
        generated = self.records is not None or self.nominal_rate is not None
        if from_file == generated:
            raise ConfigError(
                "seed_profile needs exactly one of: a file, or records + nominal_rate"
            )
        if generated and (self.records is None or self.nominal_rate is None):
            raise ConfigError("generated seed_profile needs both records and nominal_rate")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one closed-loop experiment needs."""

    level_count: int
    thresholds: tuple[float, ...]
    targets: tuple[int, ...]
    grid_step: float
    grid_max_per_link: tuple[float, ...]
    capacity: int
    run_length: int
    rng_seed: int
    links: tuple[LinkSpec, ...]
    qos_levels: tuple[int, ...]
    rates: tuple[tuple[float, ...], ...]  # one trace per service
    seed: SeedSpec
    sigma2: float = DEFAULT_SIGMA2
    min_kernel_sum: float = 0.0
    predictor: PredictorKind = field(default_factory=PredictorKind)
    erab_noise_std: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "thresholds", tuple(float(t) for t in self.thresholds))
        object.__setattr__(self, "targets", tuple(int(a) for a in self.targets))
        object.__setattr__(
            self, "grid_max_per_link", tuple(float(b) for b in self.grid_max_per_link)
        )
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "qos_levels", tuple(int(q) for q in self.qos_levels))
        object.__setattr__(
            self, "rates", tuple(tuple(float(r) for r in trace) for trace in self.rates)
        )
        if self.run_length < 1:
            raise ConfigError(f"run_length must be >= 1, got {self.run_length}")
        if len(self.links) != len(self.grid_max_per_link):
            raise ConfigError(
                f"{len(self.links)} links but grid covers {len(self.grid_max_per_link)}"
            )
        if len(self.qos_levels) != len(self.rates):
            raise ConfigError(
                f"{len(self.qos_levels)} services but {len(self.rates)} rate traces"
            )
        if not self.qos_levels:
            raise ConfigError("need at least one service")
        for q in self.qos_levels:
            if not 1 <= q <= len(self.targets):
                raise ConfigError(f"qos_level {q} outside [1, {len(self.targets)}]")
        for s, trace in enumerate(self.rates):
            if len(trace) < self.run_length:
                raise ConfigError(
                    f"service {s + 1} rate trace has {len(trace)} epochs, "
                    f"run needs {self.run_length}"
                )
        for link in self.links:
            if isinstance(link.background, tuple) and len(link.background) < self.run_length:
                raise ConfigError(
                    f"background trace has {len(link.background)} epochs, "
                    f"run needs {self.run_length}"
                )
        # fail early on inconsistent QoS parameters
        self.to_qos_config()

    def to_qos_config(self) -> QosConfig:
        return QosConfig(
            level_count=self.level_count,
            thresholds=self.thresholds,
            targets=self.targets,
            kernel=KernelParams(self.sigma2),
            grid=SearchGrid(self.grid_step, self.grid_max_per_link),
            capacity=self.capacity,
            min_kernel_sum=self.min_kernel_sum,
        )


# ---------------------------------------------------------------------------
# config / trace file IO
# ---------------------------------------------------------------------------

_TOP_KEYS = {
    "rng_seed", "run_length", "levels", "thresholds", "targets", "sigma2",
    "min_kernel_sum", "grid", "capacity", "predictor", "links", "services",
    "rate_trace", "background_trace", "seed_profile", "erab_noise_std",
}
_GRID_KEYS = {"step", "max_per_link"}
_PREDICTOR_KEYS = {"kind", "knn_k"}
_LINK_KEYS = {"capacity", "background"}
_SERVICE_KEYS = {"qos_level"}
_SEED_KEYS = {"file", "records", "nominal_rate"}


def _reject_unknown(mapping: dict, allowed: set[str], where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}; allowed: {sorted(allowed)}")


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ConfigError(f"{where}: missing required key {key!r}")
    return mapping[key]


def read_trace_csv(path: Path, expected_columns: int, what: str) -> tuple[tuple[float, ...], ...]:
    """Read a trace CSV (header row, then one row per epoch) column-major."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"{what} trace {path}: {exc}") from exc
    rows = [ln for ln in lines if ln.strip()]
    if not rows:
        raise ConfigError(f"{what} trace {path}: empty file")
    header = rows[0].split(",")
    if len(header) != expected_columns:
        raise ConfigError(
            f"{what} trace {path}: {len(header)} columns in header, expected {expected_columns}"
        )
    data: list[list[float]] = []
    for lineno, row in enumerate(rows[1:], start=2):
        fields = row.split(",")
        if len(fields) != expected_columns:
            raise ConfigError(
                f"{what} trace {path}: line {lineno} has {len(fields)} fields, "
                f"expected {expected_columns}"
            )
        try:
            data.append([float(v) for v in fields])
        except ValueError as exc:
            raise ConfigError(f"{what} trace {path}: line {lineno}: {exc}") from exc
    columns = tuple(tuple(row[c] for row in data) for c in range(expected_columns))
    return columns


def write_trace_csv(path: Path, columns: Sequence[Sequence[float]], prefix: str) -> None:
    """Write a trace CSV, one column per series, header '<prefix>_<i>_mbps'."""
    path = Path(path)
    epochs = len(columns[0])
    header = ",".join(f"{prefix}_{i + 1}_mbps" for i in range(len(columns)))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for t in range(epochs):
            fh.write(",".join(repr(float(col[t])) for col in columns) + "\n")


def _inline_or_file_trace(value, base: Path, columns: int, what: str):
    if isinstance(value, str):
        return read_trace_csv(base / value, columns, what)
    if isinstance(value, dict):
        _reject_unknown(value, {"inline"}, what)
        rows = _require(value, "inline", what)
        for i, row in enumerate(rows):
            if len(row) != columns:
                raise ConfigError(
                    f"{what}: inline row {i + 1} has {len(row)} values, expected {columns}"
                )
        return tuple(tuple(float(r[c]) for r in rows) for c in range(columns))
    raise ConfigError(f"{what}: expected a path or an inline table, got {type(value).__name__}")


def load_scenario(path) -> ScenarioConfig:
    """Parse a scenario JSON file, resolving trace paths relative to it."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    where = str(path)
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: top level must be an object")
    _reject_unknown(raw, _TOP_KEYS, where)
    base = path.parent

    grid = _require(raw, "grid", where)
    _reject_unknown(grid, _GRID_KEYS, f"{where}: grid")
    links_raw = _require(raw, "links", where)
    links = []
    for i, entry in enumerate(links_raw):
        _reject_unknown(entry, _LINK_KEYS, f"{where}: links[{i}]")
        links.append(
            LinkSpec(
                capacity=float(_require(entry, "capacity", f"{where}: links[{i}]")),
                background=float(entry.get("background", 0.0)),
            )
        )
    services_raw = _require(raw, "services", where)
    if not services_raw:
        raise ConfigError(f"{where}: services must be non-empty")
    qos_levels = []
    for i, entry in enumerate(services_raw):
        _reject_unknown(entry, _SERVICE_KEYS, f"{where}: services[{i}]")
        qos_levels.append(int(_require(entry, "qos_level", f"{where}: services[{i}]")))

    rates = _inline_or_file_trace(
        _require(raw, "rate_trace", where), base, len(services_raw), f"{where}: rate_trace"
    )
    if "background_trace" in raw:
        bg_cols = _inline_or_file_trace(
            raw["background_trace"], base, len(links), f"{where}: background_trace"
        )
        links = [replace(link, background=bg_cols[i]) for i, link in enumerate(links)]

    seed_raw = _require(raw, "seed_profile", where)
    _reject_unknown(seed_raw, _SEED_KEYS, f"{where}: seed_profile")
    seed = SeedSpec(
        file=str(base / seed_raw["file"]) if "file" in seed_raw else None,
        records=seed_raw.get("records"),
        nominal_rate=seed_raw.get("nominal_rate"),
    )

    predictor = PredictorKind()
    if "predictor" in raw:
        _reject_unknown(raw["predictor"], _PREDICTOR_KEYS, f"{where}: predictor")
        predictor = PredictorKind(
            tag=raw["predictor"].get("kind", GRNN_BOUNDED),
            knn_k=int(raw["predictor"].get("knn_k", 5)),
        )

    return ScenarioConfig(
        level_count=int(_require(raw, "levels", where)),
        thresholds=tuple(_require(raw, "thresholds", where)),
        targets=tuple(_require(raw, "targets", where)),
        grid_step=float(grid["step"]),
        grid_max_per_link=tuple(grid["max_per_link"]),
        capacity=int(_require(raw, "capacity", where)),
        run_length=int(_require(raw, "run_length", where)),
        rng_seed=int(_require(raw, "rng_seed", where)),
        links=tuple(links),
        qos_levels=tuple(qos_levels),
        rates=rates,
        seed=seed,
        sigma2=float(raw.get("sigma2", DEFAULT_SIGMA2)),
        min_kernel_sum=float(raw.get("min_kernel_sum", 0.0)),
        predictor=predictor,
        erab_noise_std=float(raw.get("erab_noise_std", 0.0)),
    )


def dump_scenario(config: ScenarioConfig, path, rate_trace_name: str | None = None) -> None:
    """Write a scenario as JSON (+ a trace CSV next to it when named)."""
    path = Path(path)
    doc: dict = {
        "rng_seed": config.rng_seed,
        "run_length": config.run_length,
        "levels": config.level_count,
        "thresholds": list(config.thresholds),
        "targets": list(config.targets),
        "sigma2": config.sigma2,
        "min_kernel_sum": config.min_kernel_sum,
        "grid": {"step": config.grid_step, "max_per_link": list(config.grid_max_per_link)},
        "capacity": config.capacity,
        "predictor": {"kind": config.predictor.tag, "knn_k": config.predictor.knn_k},
        "links": [
            {
                "capacity": link.capacity,
                "background": link.background if isinstance(link.background, float) else 0.0,
            }
            for link in config.links
        ],
        "services": [{"qos_level": q} for q in config.qos_levels],
        "erab_noise_std": config.erab_noise_std,
    }
    if any(isinstance(link.background, tuple) for link in config.links):
        epochs = max(
            len(link.background)
            for link in config.links
            if isinstance(link.background, tuple)
        )
        cols = []
        for link in config.links:
            if isinstance(link.background, tuple):
                cols.append(list(link.background))
            else:
                cols.append([float(link.background)] * epochs)
        doc["background_trace"] = {"inline": [list(row) for row in zip(*cols)]}
    if rate_trace_name is not None:
        write_trace_csv(path.parent / rate_trace_name, config.rates, "service")
        doc["rate_trace"] = rate_trace_name
    else:
        doc["rate_trace"] = {"inline": [list(col) for col in zip(*config.rates)]}
    if config.seed.file is not None:
        doc["seed_profile"] = {"file": config.seed.file}
    else:
        doc["seed_profile"] = {
            "records": config.seed.records,
            "nominal_rate": config.seed.nominal_rate,
        }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# seed-profile generation
# ---------------------------------------------------------------------------

def seed_profile_generate(
    grid: SearchGrid,
    qos_config: QosConfig,
    n_records: int,
    nominal_rate: float,
    rng_seed: int | np.random.Generator,
    capacity: int | None = None,
) -> Profile:
    """Generate an idealized prior profile spanning low-to-high totals.

    The grid is sorted by total bandwidth and split into n_records strata;
    one allocation is sampled per stratum, so records are distinct and
    cover the whole range. Each record's response is what quantization
    would yield for that allocation under the nominal source rate on
    uncontended links.
    """
    if n_records < 1:
        raise ValueError(f"n_records must be >= 1, got {n_records}")
    if n_records > grid.size:
        raise ValueError(f"n_records={n_records} exceeds grid size {grid.size}")
    rng = (
        rng_seed
        if isinstance(rng_seed, np.random.Generator)
        else np.random.default_rng(rng_seed)
    )
    counts = grid.counts()
    totals = counts.sum(axis=1)
    lex_keys = tuple(counts[:, j] for j in range(grid.link_count - 1, -1, -1))
    order = np.lexsort(lex_keys + (totals,))
    profile = Profile(grid.link_count, qos_config.level_count, capacity)
    size = grid.size
    for k in range(n_records):
        lo = (k * size) // n_records
        hi = ((k + 1) * size) // n_records
        pick = order[int(rng.integers(lo, hi))]
        allocation = tuple(float(v) for v in counts[pick] * grid.step)
        erab = float(sum(allocation)) - nominal_rate
        profile.append(allocation, quantize(erab, qos_config))
    return profile


# ---------------------------------------------------------------------------
# runs and metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricsReport:
    """Per-service metrics plus the per-epoch series they derive from."""

    service: int
    qos_level: int
    epochs: int
    avg_rab: float
    avg_dlr: float
    avg_bw_variation: float
    final_search_time_ms: float
    erab: tuple[float, ...]
    total_allocation: tuple[float, ...]
    source_rate: tuple[float, ...]
    response: tuple[int, ...]
    search_ms: tuple[float, ...]


@dataclass(frozen=True)
class ScenarioResult:
    config: ScenarioConfig
    reports: tuple[MetricsReport, ...]
    controllers: tuple[QosController, ...]


def compute_metrics(
    erab: Sequence[float], totals: Sequence[float]
) -> tuple[float, float, float]:
    """(avg_rab, avg_dlr, avg_bw_variation) from the per-epoch series."""
    erab_arr = np.asarray(erab, dtype=float)
    totals_arr = np.asarray(totals, dtype=float)
    avg_rab = float(np.maximum(erab_arr, 0.0).mean())
    avg_dlr = float(np.maximum(-erab_arr, 0.0).mean())
    if totals_arr.size > 1:
        avg_var = float(np.abs(np.diff(totals_arr)).mean())
    else:
        avg_var = 0.0
    return avg_rab, avg_dlr, avg_var


def _measure_final_search_ms(ctrl: QosController, reps: int = FINAL_TIMING_REPS) -> float:
    """Median wall-clock of the controller's final-state search."""
    times = []
    for _ in range(reps + 1):
        t0 = time.perf_counter()
        search(
            ctrl.config.grid, ctrl.profile, ctrl.config.kernel, ctrl.target,
            predictor=ctrl.predictor,
        )
        times.append((time.perf_counter() - t0) * 1e3)
    return float(np.median(times[1:]))  # first evaluation is the warm-up


def _build_seed_profile(
    config: ScenarioConfig, qos_config: QosConfig, rng: np.random.Generator,
    capacity: int | None,
) -> Profile:
    if config.seed.file is not None:
        loaded = Profile.load(config.seed.file)
        if loaded.link_count != qos_config.grid.link_count:
            raise ConfigError(
                f"seed profile {config.seed.file} has {loaded.link_count} links, "
                f"grid has {qos_config.grid.link_count}"
            )
        if loaded.level_count != qos_config.level_count:
            raise ConfigError(
                f"seed profile {config.seed.file} has {loaded.level_count} levels, "
                f"config has {qos_config.level_count}"
            )
        # rewrap under the run's capacity policy; the file's own capacity is
        # a property of whoever saved it
        return Profile(
            loaded.link_count, loaded.level_count, capacity,
            [(r.allocation, r.response) for r in loaded.records],
        )
    if capacity is not None and config.seed.records > capacity:
        raise ConfigError(
            f"seed has {config.seed.records} records but capacity is {capacity}"
        )
    return seed_profile_generate(
        qos_config.grid, qos_config, config.seed.records, config.seed.nominal_rate,
        rng, capacity=capacity,
    )


def run_scenario(config: ScenarioConfig, out_dir=None) -> ScenarioResult:
    """Run one closed-loop scenario; optionally write the output files."""
    qos_config = config.to_qos_config()
    rng = np.random.default_rng(config.rng_seed)
    capacity = config.capacity if config.predictor.bounded else None
    if config.predictor.tag == KNN:
        predictor = KnnPredictor(config.predictor.knn_k)
    else:
        predictor = GrnnPredictor(qos_config.kernel)
    controllers = []
    for q in config.qos_levels:
        seed_profile = _build_seed_profile(config, qos_config, rng, capacity)
        controllers.append(QosController(qos_config, seed_profile, q, predictor=predictor))
    services = [
        ServiceSpec(rate_trace=config.rates[i], qos_level=config.qos_levels[i])
        for i in range(len(config.qos_levels))
    ]
    sim = Simulator(
        config.links, services, controllers,
        noise_std=config.erab_noise_std,
        rng=rng if config.erab_noise_std > 0.0 else None,
    )
    sim.run(config.run_length)

    reports = []
    for i, ctrl in enumerate(controllers):
        erab = tuple(rec.erab for rec in ctrl.log)
        totals = tuple(rec.total for rec in ctrl.log)
        avg_rab, avg_dlr, avg_var = compute_metrics(erab, totals)
        reports.append(
            MetricsReport(
                service=i + 1,
                qos_level=config.qos_levels[i],
                epochs=len(ctrl.log),
                avg_rab=avg_rab,
                avg_dlr=avg_dlr,
                avg_bw_variation=avg_var,
                final_search_time_ms=_measure_final_search_ms(ctrl),
                erab=erab,
                total_allocation=totals,
                source_rate=tuple(rec.source_rate for rec in ctrl.log),
                response=tuple(rec.response for rec in ctrl.log),
                search_ms=tuple(rec.search_ms for rec in ctrl.log),
            )
        )
    result = ScenarioResult(
        config=config, reports=tuple(reports), controllers=tuple(controllers)
    )
    if out_dir is not None:
        write_outputs(result, out_dir)
    return result


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_outputs(result: ScenarioResult, out_dir) -> None:
    """Write metrics.csv, epochs.csv, plot data, final profiles, timings.csv.

    Everything except timings.csv is a deterministic function of
    (config, rng_seed).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n_links = len(result.config.links)

    with open(out / "metrics.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("service,qos_level,epochs,avg_rab_mbps,avg_dlr_mbps,avg_bw_variation_mbps\n")
        for rep in result.reports:
            fh.write(
                ",".join(
                    [str(rep.service), str(rep.qos_level), str(rep.epochs),
                     _fmt(rep.avg_rab), _fmt(rep.avg_dlr), _fmt(rep.avg_bw_variation)]
                )
                + "\n"
            )

    alloc_cols = ",".join(f"x{j + 1}_mbps" for j in range(n_links))
    with open(out / "epochs.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(
            "service,epoch," + alloc_cols
            + ",total_mbps,source_rate_mbps,erab_mbps,response,"
            + "feasible_found,search_fallback,low_confidence,update_action\n"
        )
        for rep, ctrl in zip(result.reports, result.controllers):
            for rec in ctrl.log:
                row = [str(rep.service), str(rec.epoch)]
                row += [_fmt(v) for v in rec.allocation]
                row += [
                    _fmt(rec.total), _fmt(rec.source_rate), _fmt(rec.erab),
                    str(rec.response), _fmt(rec.feasible_found),
                    _fmt(rec.search_fallback), _fmt(rec.low_confidence),
                    rec.update_action,
                ]
                fh.write(",".join(row) + "\n")

    with open(out / "plot_total_bw.csv", "w", encoding="utf-8", newline="\n") as fh:
        head = ["epoch"]
        for rep in result.reports:
            head += [f"source_rate_s{rep.service}_mbps", f"total_s{rep.service}_mbps"]
        fh.write(",".join(head) + "\n")
        for t in range(result.config.run_length):
            row = [str(t + 1)]
            for rep in result.reports:
                row += [_fmt(rep.source_rate[t]), _fmt(rep.total_allocation[t])]
            fh.write(",".join(row) + "\n")

    for rep, ctrl in zip(result.reports, result.controllers):
        ctrl.profile.save(out / f"profile_s{rep.service}.csv")

    with open(out / "timings.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("service,label,ms\n")
        for rep, ctrl in zip(result.reports, result.controllers):
            fh.write(f"{rep.service},initial,{_fmt(ctrl.initial_search_ms)}\n")
            for rec in ctrl.log:
                fh.write(f"{rep.service},epoch_{rec.epoch},{_fmt(rec.search_ms)}\n")
            fh.write(f"{rep.service},final_median,{_fmt(rep.final_search_time_ms)}\n")


# ---------------------------------------------------------------------------
# predictor comparison (Table-I-style sweeps)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Variant:
    """One comparison row: a predictor kind, optionally a capacity override."""

    predictor: PredictorKind
    capacity: int | None = None

    @property
    def label(self) -> str:
        base = self.predictor.label
        return f"{base}_S{self.capacity}" if self.capacity is not None else base


def parse_variant(token: str) -> Variant:
    """Parse CLI variant tokens like 'grnn_bounded@16' or 'knn@7'.

    For bounded kinds the @N suffix overrides the profile capacity; for the
    kNN kind it overrides the neighbor count.
    """
    name, _, suffix = token.partition("@")
    if name == "knn":
        kind = PredictorKind(tag="knn", knn_k=int(suffix) if suffix else 5)
        return Variant(kind)
    kind = PredictorKind(tag=name)
    return Variant(kind, capacity=int(suffix) if suffix else None)


def compare_predictors(
    config: ScenarioConfig, variants: Sequence[Variant], out_dir=None
) -> list[tuple[str, ScenarioResult]]:
    """Run each variant on the same traces and seed; one report row each."""
    results: list[tuple[str, ScenarioResult]] = []
    for variant in variants:
        cfg = replace(
            config,
            predictor=variant.predictor,
            capacity=variant.capacity if variant.capacity is not None else config.capacity,
        )
        results.append((variant.label, run_scenario(cfg)))
    if out_dir is not None:
        write_comparison(results, out_dir)
    return results


def write_comparison(results: Sequence[tuple[str, ScenarioResult]], out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "comparison.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("variant,service,avg_rab_mbps,avg_dlr_mbps,avg_bw_variation_mbps\n")
        for label, result in results:
            for rep in result.reports:
                fh.write(
                    f"{label},{rep.service},{_fmt(rep.avg_rab)},{_fmt(rep.avg_dlr)},"
                    f"{_fmt(rep.avg_bw_variation)}\n"
                )
    with open(out / "comparison_timing.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("variant,service,final_search_time_ms\n")
        for label, result in results:
            for rep in result.reports:
                fh.write(f"{label},{rep.service},{_fmt(rep.final_search_time_ms)}\n")
    with open(out / "plot_compare.csv", "w", encoding="utf-8", newline="\n") as fh:
        head = ["epoch", "source_rate_mbps"] + [f"total_{label}_mbps" for label, _ in results]
        fh.write(",".join(head) + "\n")
        epochs = results[0][1].config.run_length
        base = results[0][1].reports[0]
        for t in range(epochs):
            row = [str(t + 1), _fmt(base.source_rate[t])]
            row += [_fmt(result.reports[0].total_allocation[t]) for _, result in results]
            fh.write(",".join(row) + "\n")
