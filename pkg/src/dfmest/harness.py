"""Monte Carlo risk evaluation and experiment orchestration: seeded
replication streams, exact excess-risk measurement against finite-support
population losses, hard-instance floor reports, risk curves over sample
sizes, and the config/emission plumbing the CLI drives.

Excess risk is always measured against the exact population mixture, not
a held-out estimate; an infinite excess (the unrestricted-ERM blow-up) is
counted explicitly, never clipped.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .convex import minimize
from .errors import CertificationError, ConfigurationError, DomainError, ParameterError
from .estimators import Estimator, estimator_from_descriptor
from .extreal import INF, NEG_INF
from .families import LossFamily, family_from_descriptor
from .separation import (
    DiscreteDist,
    HardInstance,
    hard_instance_from_dict,
    minimax_testing_lb,
    population_loss,
    tv,
    tv_product_bound,
)

__all__ = [
    "RiskEstimate",
    "ExperimentConfig",
    "seeded_stream",
    "excess_risk",
    "hard_instance_report",
    "risk_curve",
    "RISK_COLUMNS",
    "write_rows",
    "jsonable",
]

RISK_COLUMNS = (
    "experiment_id",
    "kind",
    "family",
    "distribution_id",
    "estimator",
    "n",
    "rep",
    "value",
    "stderr",
    "inf_count",
    "seed",
)


def seeded_stream(seed: int, rep_index: int) -> np.random.Generator:
    """Counter-based replication stream: identical (seed, rep_index) give
    identical draws on every platform, and distinct indices give
    independent-quality streams regardless of scheduling."""
    key = np.array([np.uint64(int(seed)), np.uint64(int(rep_index))], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class RiskEstimate:
    """Monte Carlo excess-risk summary for one (estimator, n) cell.

    ``mean_excess`` is +inf exactly when some replication landed where the
    population loss is infinite; ``stderr`` is computed over the finite
    replications only.
    """

    estimator: str
    n: int
    mean_excess: float
    stderr: float
    inf_count: int
    replications: int

    def __post_init__(self):
        if self.stderr < 0.0:
            raise ParameterError("stderr cannot be negative")
        if not 0 <= self.inf_count <= self.replications:
            raise ParameterError("infinite-excess count out of range")
        if (self.mean_excess == math.inf) != (self.inf_count > 0):
            raise ParameterError("mean is infinite exactly when some excess is infinite")


def excess_risk(
    family: LossFamily,
    P: DiscreteDist,
    estimator: Estimator,
    n: int,
    reps: int,
    seed: int,
) -> RiskEstimate:
    """Fit the estimator on ``reps`` independent samples of size ``n`` and
    measure the exact population excess of each fit."""
    n, reps = int(n), int(reps)
    if n < 1:
        raise ParameterError("need n >= 1")
    if reps < 1:
        raise ParameterError("need at least one replication")
    L = population_loss(family, P)
    dom = family.theta_domain
    _, fstar = minimize(L)
    if fstar == NEG_INF:
        raise DomainError("population loss unbounded below")
    base = float(fstar)
    finite = []
    inf_count = 0
    for rep in range(reps):
        rng = seeded_stream(seed, rep)
        sample = P.sample(rng, n)
        theta_hat = estimator.fit(family, sample, dom, rng)
        value = L(theta_hat)
        if value == INF:
            inf_count += 1
        else:
            finite.append(float(value) - base)
    mean = math.inf if inf_count else float(np.mean(finite))
    stderr = (
        float(np.std(finite, ddof=1) / math.sqrt(len(finite))) if len(finite) > 1 else 0.0
    )
    return RiskEstimate(estimator.name, n, mean, stderr, inf_count, reps)


def hard_instance_report(
    instance: HardInstance,
    estimators: Sequence[Estimator],
    reps: int,
    seed: int,
) -> dict:
    """Check that the certified minimax floor binds every given estimator.

    Recomputes the floor from the measured TV, runs the Monte Carlo risk
    under both distributions, and requires each estimator's worse side to
    sit above floor - 3*stderr; a violation raises, since it would
    contradict the certified lower bound.
    """
    instance.verify()
    tv_n = tv_product_bound(min(1.0, tv(instance.P0, instance.P1)), instance.n)
    floor = minimax_testing_lb(instance.dopt_lb, tv_n)
    entries = []
    for est in estimators:
        r0 = excess_risk(instance.family, instance.P0, est, instance.n, reps, seed)
        r1 = excess_risk(instance.family, instance.P1, est, instance.n, reps, seed)
        worse = r0 if r0.mean_excess >= r1.mean_excess else r1
        slack = 3.0 * worse.stderr
        binds = worse.mean_excess >= floor - slack
        if not binds:
            raise CertificationError(
                f"estimator {est.name!r} beat the certified floor: "
                f"{worse.mean_excess} < {floor} - {slack}"
            )
        entries.append(
            {
                "estimator": est.name,
                "P0": r0,
                "P1": r1,
                "max_mean_excess": worse.mean_excess,
                "stderr_at_max": worse.stderr,
                "binds": binds,
            }
        )
    return {
        "n": instance.n,
        "dopt_lb": instance.dopt_lb,
        "tv_n_bound": tv_n,
        "floor": floor,
        "estimators": entries,
    }


# ---------------------------------------------------------------------------
# configuration


_KINDS = ("risk_curve", "hard_instance", "stationarity", "condition_report")


def _decode_scalar(x):
    if x == "inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    return float(x)


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative experiment description, loadable from structured text.

    ``distributions`` entries are either {"id", "atoms"} finite
    distributions or {"kind": "uniform", "lo", "hi"} continuous samplers
    (the latter only for stationarity experiments).  ``threshold`` is the
    stationarity exceedance level.  ``instance`` inlines a certified
    hard-instance record for kind="hard_instance".  ``conditions`` holds
    {"c1_compacts": [[a,b],...]} and/or {"c2": {"eps", "probe"}}.
    """

    kind: str
    family: Optional[dict] = None
    distributions: tuple = ()
    estimators: tuple = ()
    n_grid: tuple = ()
    replications: int = 1
    seed: int = 0
    out: Optional[str] = None
    threshold: float = 0.05
    experiment_id: Optional[str] = None
    instance: Optional[dict] = None
    conditions: Optional[dict] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConfigurationError(f"unknown experiment kind {self.kind!r}")
        if int(self.replications) < 1:
            raise ConfigurationError("need at least one replication")
        grid = tuple(int(n) for n in self.n_grid)
        for a, b in zip(grid, grid[1:]):
            if not b > a:
                raise ConfigurationError("sample sizes must be strictly increasing")
        object.__setattr__(self, "n_grid", grid)
        object.__setattr__(self, "replications", int(self.replications))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "distributions", tuple(self.distributions))
        object.__setattr__(self, "estimators", tuple(self.estimators))
        # fail early on unresolvable descriptors
        if self.family is not None:
            family_from_descriptor(self.family)
        for d in self.estimators:
            estimator_from_descriptor(d)

    @property
    def label(self) -> str:
        if self.experiment_id:
            return self.experiment_id
        fam = self.family["name"] if self.family else "instance"
        return f"{self.kind}-{fam}"

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {
            "kind",
            "family",
            "distributions",
            "estimators",
            "n_grid",
            "replications",
            "seed",
            "out",
            "threshold",
            "experiment_id",
            "instance",
            "conditions",
        }
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config fields: {sorted(unknown)}")
        return cls(**{k: v for k, v in d.items()})

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def resolve_family(self) -> LossFamily:
        if self.family is None:
            raise ConfigurationError("config has no family descriptor")
        return family_from_descriptor(self.family)

    def resolve_estimators(self) -> list:
        if not self.estimators:
            raise ConfigurationError("config lists no estimators")
        return [estimator_from_descriptor(d) for d in self.estimators]

    def resolve_distributions(self) -> list:
        """[(id, DiscreteDist or sampler)] in declaration order."""
        from .stationarity import UniformSampler

        out = []
        for i, entry in enumerate(self.distributions):
            ident = entry.get("id", f"P{i}")
            if entry.get("kind") == "uniform":
                out.append((ident, UniformSampler(_decode_scalar(entry.get("lo", 0.0)),
                                                  _decode_scalar(entry.get("hi", 1.0)))))
            elif "atoms" in entry:
                out.append((ident, DiscreteDist(tuple((z, p) for z, p in entry["atoms"]))))
            else:
                raise ConfigurationError(f"distribution entry {i} is neither atoms nor uniform")
        if not out:
            raise ConfigurationError("config lists no distributions")
        return out

    def resolve_instance(self) -> HardInstance:
        if self.instance is None:
            raise ConfigurationError("config has no hard-instance record")
        return hard_instance_from_dict(self.instance)


def risk_curve(config: ExperimentConfig) -> list:
    """Sweep excess_risk over the configured grid; one summary row per
    (distribution, estimator, n), deterministic for a fixed seed."""
    if config.kind != "risk_curve":
        raise ConfigurationError("risk_curve needs a risk_curve config")
    if not config.n_grid:
        raise ConfigurationError("empty sample-size grid")
    family = config.resolve_family()
    estimators = config.resolve_estimators()
    rows = []
    for dist_id, P in config.resolve_distributions():
        if not isinstance(P, DiscreteDist):
            raise ConfigurationError(
                "risk curves need finite-support distributions (exact population loss)"
            )
        for est in estimators:
            for n in config.n_grid:
                r = excess_risk(family, P, est, n, config.replications, config.seed)
                rows.append(_risk_row(config, dist_id, r))
    return rows


def _risk_row(config: ExperimentConfig, dist_id: str, r: RiskEstimate) -> dict:
    return {
        "experiment_id": config.label,
        "kind": config.kind,
        "family": config.family["name"] if config.family else "",
        "distribution_id": dist_id,
        "estimator": r.estimator,
        "n": r.n,
        "rep": "summary",
        "value": r.mean_excess,
        "stderr": r.stderr,
        "inf_count": r.inf_count,
        "seed": config.seed,
    }


def hard_instance_rows(config: ExperimentConfig, report: dict) -> list:
    """Flatten a hard-instance report into the fixed risk-row schema."""
    rows = []
    for entry in report["estimators"]:
        for dist_id in ("P0", "P1"):
            r: RiskEstimate = entry[dist_id]
            rows.append(
                {
                    "experiment_id": config.label,
                    "kind": config.kind,
                    "family": config.family["name"] if config.family else
                    (config.instance["family"]["name"] if config.instance else ""),
                    "distribution_id": dist_id,
                    "estimator": r.estimator,
                    "n": r.n,
                    "rep": "summary",
                    "value": r.mean_excess,
                    "stderr": r.stderr,
                    "inf_count": r.inf_count,
                    "seed": config.seed,
                }
            )
    return rows


# ---------------------------------------------------------------------------
# emission


def jsonable(obj):
    """Recursively convert to JSON-encodable values; infinities become
    "inf"/"-inf" string literals."""
    if isinstance(obj, float):
        if obj == math.inf:
            return "inf"
        if obj == -math.inf:
            return "-inf"
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return jsonable(obj.item())
    if isinstance(obj, RiskEstimate):
        return jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def write_rows(rows: Sequence[dict], path, fmt: str = "csv", columns: Optional[Sequence[str]] = None):
    """Emit rows as CSV (infinities as "inf"/"-inf" literals) or JSON.
    ``path`` of None streams to stdout."""
    if fmt == "json":
        text = json.dumps([jsonable(r) for r in rows], indent=2) + "\n"
    elif fmt == "csv":
        if columns is None:
            columns = list(rows[0].keys()) if rows else list(RISK_COLUMNS)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(columns))
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_cell(row.get(k)) for k in columns})
        text = buf.getvalue()
    else:
        raise ConfigurationError(f"unknown output format {fmt!r}")
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if v == math.inf:
            return "inf"
        if v == -math.inf:
            return "-inf"
        return repr(v)
    return v
