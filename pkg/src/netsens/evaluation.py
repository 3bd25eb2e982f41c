"""Experiment harness: perturb hidden graphs, estimate, score and aggregate.

One run of an experiment draws a hidden graph ``H`` (fresh for random models,
the same loaded graph every run for real networks), and for every error
mechanism draws an observed graph ``O`` from it.  For each centrality measure
it records the true sensitivity ``s = rho(c(H), c(O))`` next to both estimates
computed from ``O`` alone.

All randomness of run ``r`` comes from streams below ``RngSeed(seed).child(r)``,
keyed by mechanism rather than by position in the list, so the records do not
depend on how runs are spread over worker processes.
"""

from __future__ import annotations

import configparser
import csv
import io
import logging
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .centrality import ALL_MEASURES, CentralityError, Measure, compute_many
from .estimators import DEFAULT_INNER_SAMPLES, Estimate, imputation_estimates, iterative_estimates
from .graph import Graph, barabasi_albert, erdos_renyi, largest_connected_component, read_edge_list
from .perturb import ErrorKind, ErrorMechanism, InfeasibleError, apply_error
from .rng import RngSeed, as_seed
from .sensitivity import UndefinedSensitivityError, classify_pairs, rho

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.3
DEFAULT_RUNS = 500
# slack on the success boundary so that e.g. (0.9, 0.93) is not lost to rounding
_BOUNDARY_SLACK = 1e-12

DEFAULT_MECHANISMS = tuple(
    ErrorMechanism(kind, level)
    for level in (0.1, 0.3)
    for kind in (ErrorKind.ADD_EDGES, ErrorKind.REMOVE_EDGES_PROPORTIONAL,
                 ErrorKind.REMOVE_EDGES_UNIFORM, ErrorKind.REMOVE_NODES)
)


# -- scoring ------------------------------------------------------------------


def weighted_error(s: float, s_hat: float) -> float:
    """``|s - s_hat| / (1 - s)``; only defined for ``s < 1``."""
    if s >= 1.0:
        raise ValueError("weighted error is undefined for s = 1")
    return abs(s - s_hat) / (1.0 - s)


def success(s: float, s_hat: float, threshold: float = DEFAULT_THRESHOLD) -> bool:
    """Whether ``s_hat`` is an acceptable estimate of ``s``.

    For ``s < 1`` the weighted error must not exceed ``threshold`` (the
    boundary counts as success); for ``s = 1`` only an exact hit succeeds.
    """
    if s >= 1.0:
        return s_hat == 1.0
    return abs(s - s_hat) <= threshold * (1.0 - s) + _BOUNDARY_SLACK


def percentile_nearest_rank(values: Sequence[float], q: float = 95.0) -> float:
    """The ``ceil(q/100 * N)``-th smallest value."""
    x = np.sort(np.asarray(values, dtype=np.float64))
    if x.size == 0:
        raise ValueError("no values")
    rank = max(1, math.ceil(q / 100.0 * x.size - 1e-9))
    return float(x[rank - 1])


# -- experiment description -------------------------------------------------------


@lru_cache(maxsize=None)
def _load_real_network(path: str) -> Graph:
    return largest_connected_component(read_edge_list(path))


def bundled_network_path(name: str) -> Path | None:
    res = resources.files("netsens") / "data" / f"{name}.txt"
    return Path(str(res)) if res.is_file() else None


@dataclass(frozen=True)
class NetworkSource:
    """Where hidden graphs come from.

    Text form: ``er:<n>:<p>``, ``ba:<n>:<m>``, ``file:<path>`` or the name of
    a bundled network such as ``dolphins``.
    """

    kind: str
    n: int = 0
    p: float = 0.0
    m: int = 0
    path: str = ""

    @classmethod
    def parse(cls, token: str) -> NetworkSource:
        parts = token.strip().split(":", 1)
        head = parts[0].lower()
        try:
            if head == "er":
                n, p = parts[1].split(":")
                src = cls("er", n=int(n), p=float(p))
            elif head == "ba":
                n, m = parts[1].split(":")
                src = cls("ba", n=int(n), m=int(m))
            elif head == "file":
                src = cls("file", path=parts[1])
            else:
                path = bundled_network_path(head)
                if path is None:
                    raise ValueError(f"no bundled network {head!r}; real networks are "
                                     "fetched with scripts/fetch_networks.py")
                src = cls("file", path=str(path))
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad network source {token!r}: {exc}") from None
        src.validate()
        return src

    def validate(self) -> None:
        if self.kind == "er" and not (self.n >= 0 and 0.0 <= self.p <= 1.0):
            raise ValueError("ER source needs n >= 0 and p in [0, 1]")
        if self.kind == "ba" and not 1 <= self.m < self.n:
            raise ValueError("BA source needs 1 <= m < n")

    @property
    def token(self) -> str:
        if self.kind == "er":
            return f"er:{self.n}:{self.p:g}"
        if self.kind == "ba":
            return f"ba:{self.n}:{self.m}"
        return f"file:{self.path}"

    @property
    def label(self) -> str:
        """Short name for CSV output."""
        if self.kind == "file":
            return Path(self.path).stem
        return self.token

    @property
    def is_random(self) -> bool:
        return self.kind in ("er", "ba")

    def hidden_graph(self, seed: RngSeed) -> Graph:
        if self.kind == "er":
            return erdos_renyi(self.n, self.p, seed)
        if self.kind == "ba":
            return barabasi_albert(self.n, self.m, seed)
        return _load_real_network(self.path)


@dataclass(frozen=True)
class ExperimentSpec:
    network: NetworkSource
    mechanisms: tuple[ErrorMechanism, ...] = DEFAULT_MECHANISMS
    measures: tuple[Measure, ...] = ALL_MEASURES
    runs: int = DEFAULT_RUNS
    inner_samples: int = DEFAULT_INNER_SAMPLES
    threshold: float = DEFAULT_THRESHOLD
    seed: int = field(default_factory=lambda: as_seed(None).master_seed)

    def __post_init__(self):
        if isinstance(self.network, str):
            object.__setattr__(self, "network", NetworkSource.parse(self.network))
        object.__setattr__(self, "mechanisms", tuple(
            m if isinstance(m, ErrorMechanism) else ErrorMechanism.parse(m)
            for m in self.mechanisms))
        object.__setattr__(self, "measures", tuple(Measure.parse(m) for m in self.measures))
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.inner_samples < 1:
            raise ValueError("inner_samples must be at least 1")
        if not self.threshold > 0:
            raise ValueError("threshold must be positive")
        if not self.mechanisms or not self.measures:
            raise ValueError("need at least one mechanism and one measure")

    # flat "key = value" text, '#' comments
    _KEYS = ("network", "mechanisms", "measures", "runs", "inner_samples", "threshold", "seed")

    @classmethod
    def from_text(cls, text: str) -> ExperimentSpec:
        cp = configparser.ConfigParser(comment_prefixes=("#",), inline_comment_prefixes=("#",))
        cp.read_string("[experiment]\n" + text)
        sec = cp["experiment"]
        unknown = set(sec) - set(cls._KEYS)
        if unknown:
            raise ValueError(f"unknown keys in experiment file: {', '.join(sorted(unknown))}")
        if "network" not in sec:
            raise ValueError("experiment file needs a 'network' entry")
        kw: dict = {"network": NetworkSource.parse(sec["network"])}
        if "mechanisms" in sec:
            kw["mechanisms"] = tuple(ErrorMechanism.parse(t) for t in _split(sec["mechanisms"]))
        if "measures" in sec:
            kw["measures"] = tuple(Measure.parse(t) for t in _split(sec["measures"]))
        for key, conv in (("runs", int), ("inner_samples", int), ("threshold", float),
                          ("seed", int)):
            if key in sec:
                kw[key] = conv(sec[key])
        return cls(**kw)

    def to_text(self) -> str:
        return (
            f"network = {self.network.token}\n"
            f"mechanisms = {', '.join(m.token for m in self.mechanisms)}\n"
            f"measures = {', '.join(m.value for m in self.measures)}\n"
            f"runs = {self.runs}\n"
            f"inner_samples = {self.inner_samples}\n"
            f"threshold = {self.threshold:g}\n"
            f"seed = {self.seed}\n"
        )


def _split(value: str) -> list[str]:
    return [t for t in (x.strip() for x in value.replace("\n", ",").split(",")) if t]


PRESETS = ("er-paper", "ba-paper", "realworld-paper")


def load_preset(name: str, **overrides) -> ExperimentSpec:
    """One of the bundled experiment files, optionally with fields replaced."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = (resources.files("netsens") / "presets" / f"{name}.spec").read_text()
    spec = ExperimentSpec.from_text(text)
    return replace(spec, **overrides) if overrides else spec


# -- records ------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentRecord:
    """Outcome of one (run, mechanism, measure) cell.

    Missing values are ``None``; ``flags`` says why.
    """

    run_id: int
    network: str
    mechanism: str
    level: float
    measure: Measure
    s: float | None
    s_hat_iter: float | None
    s_hat_imp: float | None
    weighted_err_iter: float | None
    weighted_err_imp: float | None
    success_iter: bool | None
    success_imp: bool | None
    flags: tuple[str, ...] = ()

    @property
    def excluded(self) -> bool:
        return self.s is None


def _score(s: float | None, est: Estimate | None, threshold: float):
    if s is None or est is None or est.value is None:
        return None, (False if s is not None else None)
    werr = weighted_error(s, est.value) if s < 1.0 else None
    return werr, success(s, est.value, threshold)


def _mechanism_key(phi: ErrorMechanism) -> tuple[int, int]:
    kinds = list(ErrorKind)
    return kinds.index(phi.kind), int(round(phi.level * 1_000_000))


def _run_once(spec: ExperimentSpec, run_id: int) -> list[ExperimentRecord]:
    seed = RngSeed(spec.seed).child(run_id)
    hidden = spec.network.hidden_graph(seed.child(0))
    measures = spec.measures
    c_hidden = compute_many(hidden, measures)
    net = spec.network.label
    out: list[ExperimentRecord] = []
    for phi in spec.mechanisms:
        mseed = seed.child(1, *_mechanism_key(phi))

        def emit(measure, s=None, it=None, imp=None, flags=()):
            w_it, ok_it = _score(s, it, spec.threshold)
            w_imp, ok_imp = _score(s, imp, spec.threshold)
            out.append(ExperimentRecord(
                run_id, net, phi.kind.value, phi.level, measure, s,
                None if it is None else it.value, None if imp is None else imp.value,
                w_it, w_imp, ok_it, ok_imp, tuple(flags)))

        try:
            observed = apply_error(hidden, phi, mseed.child(0))
        except InfeasibleError:
            for measure in measures:
                emit(measure, flags=("infeasible",))
            continue
        c_obs = compute_many(observed, measures)
        iters = iterative_estimates(observed, phi, measures, spec.inner_samples,
                                    mseed.child(1), reference=c_obs)
        imp_flags: tuple[str, ...] = ()
        try:
            imps = imputation_estimates(observed, phi, measures, spec.inner_samples,
                                        mseed.child(2), reference=c_obs)
        except InfeasibleError:
            imps, imp_flags = {}, ("imp_infeasible",)
        for measure in measures:
            flags = list(imp_flags)
            try:
                a, b = c_hidden[measure], c_obs[measure]
                if isinstance(a, CentralityError) or isinstance(b, CentralityError):
                    raise UndefinedSensitivityError(str(a if isinstance(a, CentralityError) else b))
                s = rho(classify_pairs(a, b))
            except UndefinedSensitivityError:
                s = None
                flags.append("s_undefined")
            it, imp = iters[measure], imps.get(measure)
            if it.value is None:
                flags.append("iter_undefined")
            if imp is not None and imp.value is None:
                flags.append("imp_undefined")
            emit(measure, s, it, imp, flags)
    return out


def _run_chunk(args) -> list[ExperimentRecord]:
    spec, run_ids = args
    out = []
    for r in run_ids:
        out.extend(_run_once(spec, r))
    return out


def run_experiment(spec: ExperimentSpec, workers: int = 1, progress=None) -> list[ExperimentRecord]:
    """Execute every run of ``spec``; records come back ordered by run, mechanism, measure.

    ``progress`` is an optional callable receiving the number of finished runs.
    """
    run_ids = list(range(spec.runs))
    if workers <= 1:
        records = []
        for r in run_ids:
            records.extend(_run_once(spec, r))
            if progress:
                progress(r + 1)
        return records
    chunks = [(spec, run_ids[i::workers * 4]) for i in range(min(len(run_ids), workers * 4))]
    by_run: dict[int, list[ExperimentRecord]] = defaultdict(list)
    done = 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for recs in pool.map(_run_chunk, chunks):
            for rec in recs:
                by_run[rec.run_id].append(rec)
            done += len({rec.run_id for rec in recs})
            if progress:
                progress(done)
    return [rec for r in run_ids for rec in by_run[r]]


# -- aggregation --------------------------------------------------------------------


@dataclass(frozen=True)
class AggregateRow:
    network: str
    mechanism: str
    level: float
    measure: Measure
    runs: int
    excluded_runs: int
    mean_s: float
    p95_abs_err_imp: float | None
    p95_abs_err_iter: float | None
    success_rate_imp: float | None
    success_rate_iter: float | None


def aggregate(records: Iterable[ExperimentRecord]) -> list[AggregateRow]:
    """Per (network, mechanism, level, measure): mean ``s``, nearest-rank 95th
    percentile of ``|s - s_hat|`` and success rate for each estimator.

    Records with undefined ``s`` are excluded and counted.  An estimate that is
    itself undefined counts as a failure and is left out of the percentile.
    Groups are returned sorted by key, so record order does not matter.
    """
    groups: dict[tuple, list[ExperimentRecord]] = defaultdict(list)
    for rec in records:
        groups[(rec.network, rec.mechanism, rec.level, rec.measure.value)].append(rec)
    rows = []
    for key in sorted(groups):
        recs = groups[key]
        used = [r for r in recs if not r.excluded]
        if not used:
            logger.warning("no defined records for %s; group omitted", key)
            continue
        s = np.array([r.s for r in used])

        def stats(attr_val, attr_ok):
            vals = [abs(r.s - getattr(r, attr_val)) for r in used if getattr(r, attr_val) is not None]
            oks = [bool(getattr(r, attr_ok)) for r in used if getattr(r, attr_ok) is not None]
            p95 = percentile_nearest_rank(vals) if vals else None
            rate = float(np.mean(oks)) if oks else None
            return p95, rate

        p_imp, r_imp = stats("s_hat_imp", "success_imp")
        p_it, r_it = stats("s_hat_iter", "success_iter")
        rows.append(AggregateRow(key[0], key[1], key[2], Measure(key[3]), len(used),
                                 len(recs) - len(used), float(np.sort(s).mean()),
                                 p_imp, p_it, r_imp, r_it))
    return rows


# -- CSV ----------------------------------------------------------------------------

RECORD_FIELDS = ("run_id", "network", "mechanism", "level", "centrality", "s", "s_hat_iter",
                 "s_hat_imp", "werr_iter", "werr_imp", "success_iter", "success_imp", "flags")

AGGREGATE_FIELDS = ("network", "mechanism", "level", "centrality", "runs", "excluded_runs",
                    "mean_s", "p95_abs_err_imp", "p95_abs_err_iter", "success_rate_imp",
                    "success_rate_iter")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return repr(x)
    return str(x)


def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    for r in records:
        w.writerow([_fmt(v) for v in (
            r.run_id, r.network, r.mechanism, r.level, r.measure.value, r.s, r.s_hat_iter,
            r.s_hat_imp, r.weighted_err_iter, r.weighted_err_imp, r.success_iter,
            r.success_imp)] + ["|".join(r.flags)])
    return buf.getvalue()


def _opt(conv, text):
    return conv(text) if text != "" else None


def records_from_csv(text: str) -> list[ExperimentRecord]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(ExperimentRecord(
            int(row["run_id"]), row["network"], row["mechanism"], float(row["level"]),
            Measure(row["centrality"]), _opt(float, row["s"]), _opt(float, row["s_hat_iter"]),
            _opt(float, row["s_hat_imp"]), _opt(float, row["werr_iter"]),
            _opt(float, row["werr_imp"]), _opt(lambda t: t == "1", row["success_iter"]),
            _opt(lambda t: t == "1", row["success_imp"]),
            tuple(f for f in row["flags"].split("|") if f)))
    return out


def aggregates_to_csv(rows: Iterable[AggregateRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AGGREGATE_FIELDS)
    for a in rows:
        w.writerow([_fmt(v) for v in (
            a.network, a.mechanism, a.level, a.measure.value, a.runs, a.excluded_runs,
            a.mean_s, a.p95_abs_err_imp, a.p95_abs_err_iter, a.success_rate_imp,
            a.success_rate_iter)])
    return buf.getvalue()
