"""Experiment configuration, grid search, ensemble runs and result export."""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
from sklearn.model_selection import ParameterGrid

from .dynamics import (
    SYSTEMS,
    generate_mfe_ensemble,
    integrate,
    kinetic_energy,
    lt_to_steps,
)
from .exceptions import ConfigError, DivergenceError, LengthError, SolverError
from .metrics import event_scores, memory_capacity, overlap_coefficient, pdf_histogram, ph, vpt
from .quantum import ANSATZE, CNOT, build_step_circuit, circuit_depth, reservoir_layers
from .reservoir import ClassicalESN, QuantumESN, init_classical, init_quantum

__all__ = [
    "CLASSICAL_GRID",
    "QUANTUM_LEAK_MAX",
    "Dataset",
    "ExperimentConfig",
    "GridSearchResult",
    "RunRecord",
    "derive_seed",
    "make_dataset",
    "make_estimator",
    "grid_search",
    "run_experiment",
    "memory_capacity_study",
    "depth_table",
    "export",
    "load_records",
]

CLASSICAL_GRID = {
    "sigma_in": [round(0.1 * i, 1) for i in range(1, 11)],
    "spectral_radius": [round(0.1 * i, 1) for i in range(1, 11)],
    "tikhonov": [1e-6, 1e-9, 1e-12],
    "leak_rate": [0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0],
    "density": [0.1, 0.6, 0.9],
}
QUANTUM_KEYS = ("leak_rate", "tikhonov")
QUANTUM_LEAK_MAX = 0.3
METRICS = ("vpt", "ph", "fscore", "pdf")


def derive_seed(master: int, tag: str, index: int) -> int:
    """Child seed from ``(master, tag, index)``; stable across runs and platforms."""
    digest = hashlib.sha256(f"{int(master)}/{tag}/{int(index)}".encode()).digest()
    return int.from_bytes(digest[:4], "little")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment.

    Lengths are in Lyapunov times.  ``reservoir`` is ``"classical"`` or one
    of ``"C1" .. "C5"``; ``size`` is ``N_r`` for the former and the qubit
    count for the latter.  ``grid`` maps hyperparameter names to candidate
    lists; missing names fall back to the default grid.  ``output`` is not
    part of the configuration hash.
    """

    system: str = "lorenz63"
    reservoir: str = "classical"
    size: int = 512
    grid: Mapping[str, Sequence[float]] = field(default_factory=dict)
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    master_seed: int = 0
    dt: float | None = None
    system_params: Mapping[str, float] = field(default_factory=dict)
    washout_lt: float = 2.0
    train_lt: float = 20.0
    test_lt: float = 100.0
    transient_lt: float = 20.0
    val_intervals: int = 3
    val_lt: float = 3.0
    metrics: tuple[str, ...] = ("vpt",)
    n_starts: int = 20
    horizon_lt: float = 15.0
    stats_lt: float = 100.0
    n_series: int = 2000
    series_lt: float = 65.0
    n_train_series: int = 25
    n_test_series: int = 500
    k_e: float = 0.1
    k_l: float = 0.48
    n_events: int = 100
    prediction_times: tuple[float, ...] = (0.0, 1.0, 2.0, 3.0)
    n_fscore_starts: int = 100
    n_fscore_series: int = 20
    output: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        object.__setattr__(self, "prediction_times", tuple(float(p) for p in self.prediction_times))
        object.__setattr__(self, "grid", {k: list(v) for k, v in dict(self.grid).items()})
        object.__setattr__(self, "system_params", dict(self.system_params))
        self.validate()

    # -- validation / serialisation -----------------------------------------

    @property
    def is_quantum(self) -> bool:
        return self.reservoir != "classical"

    def validate(self) -> None:
        if self.system not in SYSTEMS:
            raise ConfigError(f"unknown system {self.system!r}; choose from {sorted(SYSTEMS)}")
        if self.reservoir != "classical" and self.reservoir not in ANSATZE:
            raise ConfigError(f"reservoir must be 'classical' or one of {sorted(ANSATZE)}")
        if self.size < 1 or (self.is_quantum and self.size > 20):
            raise ConfigError(f"size {self.size} is out of range")
        unknown = set(self.grid) - set(CLASSICAL_GRID)
        if unknown:
            raise ConfigError(f"unknown hyperparameters in grid: {sorted(unknown)}")
        for key, values in self.grid.items():
            if len(values) == 0:
                raise ConfigError(f"grid entry {key!r} is empty")
        bad = set(self.metrics) - set(METRICS)
        if bad:
            raise ConfigError(f"unknown metrics {sorted(bad)}; choose from {METRICS}")
        if self.system != "mfe" and {"ph", "fscore"} & set(self.metrics):
            raise ConfigError("ph and fscore need the extreme-event (mfe) system")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        for name in ("washout_lt", "train_lt", "val_lt", "horizon_lt", "series_lt"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if min(self.n_starts, self.n_events, self.n_fscore_starts, self.val_intervals) < 0:
            raise ConfigError("counts must be non-negative")
        if self.dt is not None and self.dt <= 0:
            raise ConfigError("dt must be positive")
        self.effective_grid()

    def effective_grid(self) -> dict[str, list]:
        """Grid actually searched: defaults filled in, quantum-only restrictions applied."""
        grid = {k: list(v) for k, v in CLASSICAL_GRID.items()}
        grid.update({k: list(v) for k, v in self.grid.items()})
        if self.is_quantum:
            grid = {k: grid[k] for k in QUANTUM_KEYS}
            grid["leak_rate"] = [e for e in grid["leak_rate"] if 0.05 <= e <= QUANTUM_LEAK_MAX]
        for key, values in grid.items():
            if not values:
                raise ConfigError(f"grid entry {key!r} is empty after restrictions")
        return grid

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown configuration fields: {sorted(unknown)}")
        try:
            return cls(**data)
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid configuration: {exc}") from exc

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must hold a JSON object")
        return cls.from_dict(data)

    def canonical_json(self) -> str:
        data = self.to_dict()
        data.pop("output")
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    # -- derived quantities --------------------------------------------------

    def system_instance(self):
        return SYSTEMS[self.system](**self.system_params)

    def time_step(self) -> float:
        return self.dt if self.dt is not None else self.system_instance().dt

    def steps(self, lt: float) -> int:
        return lt_to_steps(lt, self.system_instance().lyapunov_exponent, self.time_step())


@dataclass
class RunRecord:
    config_hash: str
    seed: int
    hyperparameters: dict
    metrics: dict
    wall_time: float
    samples: dict = field(default_factory=dict)

    def sort_key(self):
        return (self.config_hash, self.seed)


@dataclass
class GridSearchResult:
    best_params: dict
    best_score: float
    table: list[dict]


@dataclass
class Dataset:
    """Raw training/test series plus the time scales needed by the metrics."""

    train: list[np.ndarray]
    test: list[np.ndarray]
    dt: float
    lyapunov_exponent: float
    meta: dict = field(default_factory=dict)

    @property
    def sigma(self) -> np.ndarray:
        return np.vstack(self.train).std(axis=0)


def make_dataset(cfg: ExperimentConfig) -> Dataset:
    """Integrate the configured system and cut it into training and test series."""
    system = cfg.system_instance()
    dt = cfg.time_step()
    lam = system.lyapunov_exponent
    seed = derive_seed(cfg.master_seed, "data", 0)
    n_wash, n_train = cfg.steps(cfg.washout_lt), cfg.steps(cfg.train_lt)

    if cfg.system == "mfe":
        ens = generate_mfe_ensemble(
            cfg.n_series, length_lt=cfg.series_lt, k_l=cfg.k_l, seed=seed, system=system, k_e=cfg.k_e
        )
        n_test = min(cfg.n_test_series, len(ens.series) - cfg.n_train_series)
        if n_test < 1:
            raise LengthError(
                f"only {len(ens.series)} series survived; need more than {cfg.n_train_series}"
            )
        train, test = ens.split(cfg.n_train_series, n_test)
        if n_wash + n_train > len(train[0]):
            raise LengthError("washout + training length exceeds the series length")
        meta = {
            "generated": ens.generated_count,
            "discarded": ens.discarded_count,
            "discard_fraction": ens.discard_fraction,
        }
        return Dataset(
            [s.data[: n_wash + n_train] for s in train], [s.data for s in test], dt, lam, meta
        )

    rng = np.random.default_rng(seed)
    if cfg.system == "lorenz63":
        x0 = np.array([0.0, 0.0, 25.0]) + rng.uniform(-5.0, 5.0, 3)
    else:
        x0 = system.forcing + rng.uniform(-0.5, 0.5, system.dim)
    n_skip, n_test = cfg.steps(cfg.transient_lt), cfg.steps(cfg.test_lt)
    traj = integrate(system, x0, n_skip + n_wash + n_train + n_test, dt=dt, seed=seed)
    data = traj.data[n_skip + 1 :]
    return Dataset([data[: n_wash + n_train]], [data[n_wash + n_train :]], dt, lam)


def make_estimator(cfg: ExperimentConfig, params: Mapping, seed: int):
    washout = cfg.steps(cfg.washout_lt)
    if cfg.is_quantum:
        kw = {k: params[k] for k in QUANTUM_KEYS if k in params}
        return QuantumESN(
            n_qubits=cfg.size, ansatz=cfg.reservoir, washout=washout, random_state=seed, **kw
        )
    kw = {k: params[k] for k in CLASSICAL_GRID if k in params}
    return ClassicalESN(n_reservoir=cfg.size, washout=washout, random_state=seed, **kw)


def network_seed(cfg: ExperimentConfig, seed: int) -> int:
    return derive_seed(cfg.master_seed, "network", seed)


def _start_points(series: Sequence[np.ndarray], n: int, before: int, after: int, n_series=None):
    """``n`` start indices spread round-robin over ``series``.

    Each start has ``before`` samples of history and ``after`` samples ahead.
    """
    usable = [i for i, s in enumerate(series) if len(s) >= before + after]
    if n_series is not None:
        usable = usable[:n_series]
    if n == 0:
        return []
    if not usable:
        raise LengthError(f"no series is long enough for {before} + {after} steps")
    per = [n // len(usable) + (k < n % len(usable)) for k in range(len(usable))]
    points = []
    for idx, count in zip(usable, per):
        if count:
            hi = len(series[idx]) - after
            points += [(idx, int(s)) for s in np.linspace(before, hi, count).round()]
    return points


def _windows(series, points, before, after):
    warm = np.stack([series[i][s - before : s] for i, s in points])
    truth = np.stack([series[i][s : s + after] for i, s in points])
    return warm, truth


def _validation_score(est, data: Dataset, cfg: ExperimentConfig) -> float:
    w, h = cfg.steps(cfg.washout_lt), cfg.steps(cfg.val_lt)
    points = _start_points(data.train, cfg.val_intervals, w, h)
    warm, truth = _windows(data.train, points, w, h)
    pred = est.forecast(warm, h)
    return float(np.mean(vpt(truth, pred, data.lyapunov_exponent, data.dt, sigma=data.sigma)))


def _lex_key(params: Mapping) -> tuple:
    return tuple((k, params[k]) for k in sorted(params))


def grid_search(
    cfg: ExperimentConfig,
    data: Dataset | None = None,
    seed: int | None = None,
    scorer: Callable[[dict], float] | None = None,
) -> GridSearchResult:
    """Exhaustive sweep over ``cfg.effective_grid()``.

    Each point is scored by the mean VPT over ``cfg.val_intervals`` windows
    recycled from the training series (the readout is trained on the full
    training span).  Points whose fit or forecast fails score ``-inf``.  A
    custom ``scorer(params)`` replaces the forecasting pipeline entirely.
    Ties go to the lexicographically smallest hyperparameter tuple.
    """
    grid = cfg.effective_grid()
    points = sorted(ParameterGrid(grid), key=_lex_key)
    if not points:
        raise ConfigError("empty hyperparameter grid")
    scores: dict[tuple, float] = {}

    if scorer is not None:
        for p in points:
            scores[_lex_key(p)] = float(scorer(dict(p)))
    else:
        data = data if data is not None else make_dataset(cfg)
        w, h = cfg.steps(cfg.washout_lt), cfg.steps(cfg.val_lt)
        if not any(len(s) >= w + h for s in data.train):
            raise LengthError("validation intervals exceed the training data")
        net_seed = network_seed(cfg, cfg.seeds[0] if seed is None else seed)
        betas = grid["tikhonov"]
        structural = {k: v for k, v in grid.items() if k != "tikhonov"}
        for base in ParameterGrid(structural):
            est = None
            for beta in betas:
                p = {**base, "tikhonov": beta}
                try:
                    if est is None:
                        est = make_estimator(cfg, p, net_seed).fit(data.train)
                    else:
                        est.refit_readout(beta)
                    score = _validation_score(est, data, cfg)
                except (SolverError, DivergenceError):
                    score = -math.inf
                scores[_lex_key(p)] = score

    table, best = [], None
    for p in points:
        score = scores[_lex_key(p)]
        table.append({**p, "score": score})
        if best is None or score > best[1]:
            best = (dict(p), score)
    return GridSearchResult(best[0], best[1], table)


def _summary(name: str, values) -> dict:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return {}
    return {
        f"{name}_median": float(np.median(values)),
        f"{name}_mean": float(np.mean(values)),
        f"{name}_std": float(np.std(values)),
    }


def _event_indices(series: Sequence[np.ndarray], k_e: float, lead: int, limit: int):
    """First upward crossing of ``k_e`` in each series having ``lead`` steps of history."""
    events = []
    for i, s in enumerate(series):
        k = kinetic_energy(s)
        above = k >= k_e
        up = np.flatnonzero(above[1:] & ~above[:-1]) + 1
        up = up[up >= lead]
        if up.size:
            events.append((i, int(up[0])))
        if len(events) == limit:
            break
    return events


def predictability_horizons(est, series, events, cfg: ExperimentConfig, k_bar: float) -> np.ndarray:
    """Batched lead-time scan over ``events``; one horizon per event.

    Matches :func:`rfqrc.metrics.extreme_event_scan` event by event while
    forecasting all unresolved events of a given lead time together.
    """
    system = cfg.system_instance()
    dt, lam = cfg.time_step(), system.lyapunov_exponent
    w = cfg.steps(cfg.washout_lt)
    delta_init, tau = 10.0, 0.5
    result = np.zeros(len(events))
    pending = np.arange(len(events))
    for i in range(int(round(delta_init / tau))):
        if pending.size == 0:
            break
        delta = delta_init - i * tau
        lead = lt_to_steps(delta, lam, dt)
        pts = [(events[j][0], events[j][1] - lead) for j in pending]
        warm, truth = _windows(series, pts, w, lead)
        k_pred = kinetic_energy(est.forecast(warm, lead))
        h = np.atleast_1d(ph(k_pred, kinetic_energy(truth), cfg.k_e, k_bar, dt, lam))
        ok = h >= lead * dt * lam - 1e-12
        result[pending[ok]] = delta
        pending = pending[~ok]
    return result


def _evaluate(est, data: Dataset, cfg: ExperimentConfig):
    metrics, samples = {}, {}
    dt, lam = data.dt, data.lyapunov_exponent
    w = cfg.steps(cfg.washout_lt)

    if "vpt" in cfg.metrics:
        h = cfg.steps(cfg.horizon_lt)
        points = _start_points(data.test, cfg.n_starts, w, h)
        values = []
        if points:
            warm, truth = _windows(data.test, points, w, h)
            values = np.atleast_1d(vpt(truth, est.forecast(warm, h), lam, dt, sigma=data.sigma)).tolist()
        samples["vpt"] = values
        metrics.update(_summary("vpt", values))

    if "pdf" in cfg.metrics:
        if cfg.system == "mfe":
            n = cfg.steps(cfg.series_lt) - w - 1
            points = _start_points(data.test, cfg.n_starts, w, n)
            if points:
                warm, truth = _windows(data.test, points, w, n)
                true_x = kinetic_energy(truth).reshape(-1, 1)
                pred_x = kinetic_energy(est.forecast(warm, n)).reshape(-1, 1)
        else:
            n = cfg.steps(cfg.stats_lt)
            points = _start_points(data.test, 1, w, n)
            warm, truth = _windows(data.test, points, w, n)
            true_x, pred_x = truth[0], est.forecast(warm[0], n)
        if points:
            overlaps = []
            for c in range(true_x.shape[1]):
                lo = min(true_x[:, c].min(), pred_x[:, c].min())
                hi = max(true_x[:, c].max(), pred_x[:, c].max())
                edges, p_true = pdf_histogram(true_x[:, c], bins=50, range=(lo, hi))
                _, p_pred = pdf_histogram(pred_x[:, c], bins=50, range=(lo, hi))
                overlaps.append(overlap_coefficient(p_true, p_pred, edges))
            samples["overlap"] = overlaps
            metrics["overlap_min"] = float(min(overlaps))
            metrics.update({f"overlap_c{c}": v for c, v in enumerate(overlaps)})

    k_bar = float(np.mean(kinetic_energy(np.vstack(data.train)))) if cfg.system == "mfe" else None

    if "ph" in cfg.metrics:
        events = _event_indices(data.test, cfg.k_e, w + lt_to_steps(10.0, lam, dt), cfg.n_events)
        values = predictability_horizons(est, data.test, events, cfg, k_bar).tolist() if events else []
        samples["ph"] = values
        metrics.update(_summary("ph", values))

    if "fscore" in cfg.metrics:
        h = lt_to_steps(max(cfg.prediction_times) + 1.0, lam, dt)
        points = _start_points(data.test, cfg.n_fscore_starts, w, h, cfg.n_fscore_series)
        if points:
            warm, truth = _windows(data.test, points, w, h)
            k_pred = kinetic_energy(est.forecast(warm, h))
            k_true = kinetic_energy(truth)
            for pt in cfg.prediction_times:
                p, r, f = event_scores(k_pred, k_true, cfg.k_e, pt, 1.0 / (lam * dt))
                tag = f"pt{pt:g}"
                metrics.update({f"precision_{tag}": p, f"recall_{tag}": r, f"fscore_{tag}": f})
    return metrics, samples


def run_experiment(
    cfg: ExperimentConfig,
    hyperparams: Mapping | Mapping[int, Mapping] | None = None,
    data: Dataset | None = None,
) -> list[RunRecord]:
    """Train one network per seed and evaluate ``cfg.metrics``.

    ``hyperparams`` is one parameter dict shared by all seeds or a mapping
    ``seed -> dict``; when omitted each seed is tuned by :func:`grid_search`.
    With ``cfg.output`` set, finished records are written there even if a
    later seed fails.
    """
    data = data if data is not None else make_dataset(cfg)
    records: list[RunRecord] = []
    chash = cfg.config_hash()
    try:
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            if hyperparams is None:
                params = grid_search(cfg, data, seed=seed).best_params
            else:
                per_seed = hyperparams.get(seed, hyperparams.get(str(seed)))
                params = dict(per_seed if isinstance(per_seed, Mapping) else hyperparams)
            est = make_estimator(cfg, params, network_seed(cfg, seed)).fit(data.train)
            metrics, samples = _evaluate(est, data, cfg)
            records.append(
                RunRecord(chash, seed, params, metrics, time.perf_counter() - t0, samples)
            )
    finally:
        if cfg.output:
            export(records, cfg.output)
    return records


def memory_capacity_study(
    cfg: ExperimentConfig, d_max: int = 25, input_len: int = 5000
) -> list[RunRecord]:
    """Memory capacity for every grid point and seed (readout ``beta`` is chosen internally)."""
    grid = {k: v for k, v in cfg.effective_grid().items() if k != "tikhonov"}
    chash = cfg.config_hash()
    records = []
    for seed in cfg.seeds:
        net_seed = network_seed(cfg, seed)
        for p in sorted(ParameterGrid(grid), key=_lex_key):
            t0 = time.perf_counter()
            if cfg.is_quantum:
                res = init_quantum(cfg.size, cfg.reservoir, p["leak_rate"], seed=net_seed)
            else:
                res = init_classical(
                    cfg.size,
                    1,
                    p["sigma_in"],
                    p["spectral_radius"],
                    p["density"],
                    seed=net_seed,
                    leak_rate=p["leak_rate"],
                )
            mc, profile = memory_capacity(
                res, d_max=d_max, input_len=input_len, seed=derive_seed(seed, "mc", 0), return_profile=True
            )
            records.append(
                RunRecord(chash, seed, dict(p), {"mc": mc}, time.perf_counter() - t0, {"mf": profile.tolist()})
            )
    return records


def depth_table(ansatze=("C1", "C2", "C3", "C4", "C5"), qubits=range(4, 12), n_inputs: int = 10):
    """Step-circuit depth and gate counts for each ansatz and qubit count."""
    rows = []
    for name in ansatze:
        cfg = ANSATZE[name]
        for n in qubits:
            r = np.zeros(2**n) if cfg.recurrent else None
            circ = build_step_circuit(cfg, r, np.zeros(n_inputs), n, np.zeros(n))
            rows.append(
                {
                    "ansatz": name,
                    "n_qubits": n,
                    "depth": circuit_depth(circ),
                    "n_gates": len(circ),
                    "n_cnot": circ.count(CNOT),
                    "reservoir_layers": reservoir_layers(n) if cfg.recurrent else 0,
                }
            )
    return rows


# -- export -------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def export(records: Sequence[RunRecord], path, format: str | None = None) -> Path:
    """Write records sorted by (config hash, seed) as CSV or JSON.

    The format follows the file suffix unless given.  CSV columns are
    ``config_hash, seed, hp:<name>..., metric:<name>..., wall_time, samples``.
    """
    path = Path(path)
    format = format or ("json" if path.suffix.lower() == ".json" else "csv")
    if format not in ("csv", "json"):
        raise ConfigError(f"unknown export format {format!r}")
    records = sorted(records, key=RunRecord.sort_key)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if format == "json":
            path.write_text(json.dumps([dataclasses.asdict(r) for r in records], indent=2))
            return path
        hp_keys = sorted({k for r in records for k in r.hyperparameters})
        m_keys = sorted({k for r in records for k in r.metrics})
        header = ["config_hash", "seed"] + [f"hp:{k}" for k in hp_keys]
        header += [f"metric:{k}" for k in m_keys] + ["wall_time", "samples"]
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for r in records:
                row = [r.config_hash, r.seed]
                row += [_fmt(r.hyperparameters[k]) if k in r.hyperparameters else "" for k in hp_keys]
                row += [_fmt(r.metrics[k]) if k in r.metrics else "" for k in m_keys]
                row += [_fmt(r.wall_time), json.dumps(r.samples)]
                writer.writerow(row)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return path


def load_records(path) -> list[RunRecord]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read results from {path}: {exc}") from exc
    if path.suffix.lower() == ".json":
        return [RunRecord(**item) for item in json.loads(text)]
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        return []
    header, records = rows[0], []
    for row in rows[1:]:
        item = dict(zip(header, row))
        hp = {k[3:]: float(v) for k, v in item.items() if k.startswith("hp:") and v != ""}
        mt = {k[7:]: float(v) for k, v in item.items() if k.startswith("metric:") and v != ""}
        records.append(
            RunRecord(
                item["config_hash"],
                int(item["seed"]),
                hp,
                mt,
                float(item["wall_time"]),
                json.loads(item["samples"]),
            )
        )
    return records
