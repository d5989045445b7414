# application/study_service.py
from __future__ import annotations
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from typing import Dict, List, Optional, Tuple
import json
import logging
import math
import time

import numpy as np
import pandas as pd

from application.model_registry import job_for, simulate
from application.ports import SamplerOptions, StudyRepository
from application.version import __version__
from domain.errors import PointProcessError
from domain.models.chain_config import ChainConfig
from domain.models.curve import Curve
from domain.models.envelope import CurveSet
from domain.models.model_params import ModelParams
from domain.models.point_pattern import PointPattern
from domain.models.rgrid import RGrid
from domain.models.seed_spec import SeedSpec
from domain.models.study import StudyConfig, StudyRow
from domain.services.global_envelopes import envelope_area, global_envelope
from domain.services.model_fitting import fit_model, params_from_fit
from domain.services.summary_statistics import estimate
from infrastructure.runners.replication_runner import ReplicationRunner

# sub-stream layout below a replication's SeedSpec
DATA_STREAM = 0
SIM_STREAM = 1


@dataclass(frozen=True)
class _Source:
    name: str
    params: Optional[ModelParams]
    fitted_json: str
    excluded: bool
    error: str


def _curves(x: PointPattern, stats: Tuple[str, ...], rgrid: RGrid, f_resolution: int) -> Dict[str, Curve]:
    return {s: estimate(s, x, rgrid, f_resolution) for s in stats}


def _fitted_json(params: Dict[str, float]) -> str:
    return json.dumps({k: (None if not math.isfinite(v) else v) for k, v in params.items()}, sort_keys=True)


class StudyService:
    """
    Desk-scale envelope study: for every data replication, simulate the data, optionally
    refit, and for each conditioning flag build n_env simulations and one global
    envelope per statistic.
    """

    def __init__(
        self,
        repo: Optional[StudyRepository] = None,
        logger: Optional[logging.Logger] = None,
        log_every: int = 10,
    ) -> None:
        self.repo = repo
        self.log = logger or logging.getLogger("study")
        self.log_every = max(1, int(log_every))

    def _options(self, cfg: StudyConfig, chain: ChainConfig) -> SamplerOptions:
        return SamplerOptions(chain=chain, field_grid=cfg.field_grid, max_attempts=cfg.max_attempts)

    def _sources(self, cfg: StudyConfig, data: PointPattern, rgrid: RGrid) -> List[_Source]:
        out: List[_Source] = []
        for name in cfg.param_sources:
            if name == "true":
                out.append(_Source("true", cfg.true_params, "", False, ""))
                continue
            try:
                fit = fit_model(
                    data,
                    job_for(cfg.true_params).fit_model,
                    rgrid=rgrid,
                    delta_exclude_at=cfg.delta_exclude_at,
                    kappa_exclude_below=cfg.kappa_exclude_below,
                )
                params = None if fit.excluded else params_from_fit(fit)
                out.append(_Source("fitted", params, _fitted_json(fit.params), fit.excluded, ""))
            except PointProcessError as e:
                self.log.warning("fit failed: %s", e)
                out.append(_Source("fitted", None, "", False, f"{type(e).__name__}: {e}"))
        return out

    def replicate(self, cfg: StudyConfig, chain: ChainConfig, k: int) -> List[StudyRow]:
        """All rows of data replication k; sampler failures become row errors."""
        options = self._options(cfg, chain)
        rgrid = RGrid.linear(cfg.r_max, cfg.r_count)
        seed = SeedSpec(cfg.seed).replication(k)
        rows: List[StudyRow] = []

        def emit(source: _Source, n: int, cond: bool, results: Dict[str, tuple], error: str, match) -> None:
            for stat in cfg.statistics:
                area, p = results.get(stat, (None, None))
                rows.append(
                    StudyRow(
                        replication=k,
                        statistic=stat,
                        conditional=cond,
                        param_source=source.name,
                        n_data_points=n,
                        envelope_area=area,
                        p_value=p,
                        fitted_params=source.fitted_json,
                        excluded=source.excluded,
                        error=error,
                        sim_counts_match=match,
                    )
                )

        try:
            data = simulate(cfg.true_params, seed.child(DATA_STREAM), options)
            data_curves = _curves(data, cfg.statistics, rgrid, cfg.f_resolution)
        except PointProcessError as e:
            self.log.warning("replication %d: data simulation failed: %s", k, e)
            for name in cfg.param_sources:
                for cond in cfg.conditional:
                    emit(_Source(name, None, "", False, ""), -1, cond, {}, f"{type(e).__name__}: {e}", None)
            return rows

        for si, source in enumerate(self._sources(cfg, data, rgrid)):
            for ci, cond in enumerate(cfg.conditional):
                if source.params is None:
                    emit(source, data.n, cond, {}, source.error, None)
                    continue
                try:
                    sims_seed = seed.child(SIM_STREAM).child(si).child(ci)
                    n = data.n if cond else None
                    sims = [simulate(source.params, sims_seed.child(i), options, n) for i in range(cfg.n_env)]
                    match = all(x.n == data.n for x in sims) if cond else None
                    sim_curves = [_curves(x, cfg.statistics, rgrid, cfg.f_resolution) for x in sims]
                    results = {}
                    for stat in cfg.statistics:
                        env = global_envelope(
                            CurveSet.from_curves(data_curves[stat], [c[stat] for c in sim_curves]), cfg.alpha
                        )
                        results[stat] = (envelope_area(env), env.p_value)
                    emit(source, data.n, cond, results, "", match)
                except PointProcessError as e:
                    self.log.warning("replication %d (%s, conditional=%s) failed: %s", k, source.name, cond, e)
                    emit(source, data.n, cond, {}, f"{type(e).__name__}: {e}", None)
        return rows

    def run_rows(self, cfg: StudyConfig, chain: Optional[ChainConfig] = None) -> List[StudyRow]:
        chain = chain or ChainConfig()
        runner = ReplicationRunner(cfg.max_workers, self.log, self.log_every)
        per_rep = runner.run(lambda k: self.replicate(cfg, chain, k), list(range(cfg.n_data)), label="replications")
        return [row for rows in per_rep for row in rows]

    def run(self, cfg: StudyConfig, chain: Optional[ChainConfig] = None) -> List[StudyRow]:
        chain = chain or ChainConfig()
        t0 = time.time()
        self.log.info(
            "Study: model=%s n_data=%d n_env=%d statistics=%s conditional=%s sources=%s",
            cfg.model, cfg.n_data, cfg.n_env, ",".join(cfg.statistics), cfg.conditional, cfg.param_sources,
        )
        rows = self.run_rows(cfg, chain)
        df = rows_frame(rows)
        n_errors = int((df["error"] != "").sum()) if len(df) else 0
        if self.repo is not None:
            meta = {
                "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                "version": __version__,
                "seed": cfg.seed,
                "config": {**asdict(cfg), "model": cfg.model, "out_dir": str(cfg.out_dir) if cfg.out_dir else None},
                "chain": asdict(chain),
                "counts": {
                    "rows": len(df),
                    "errors": n_errors,
                    "excluded": int(df["excluded"].sum()) if len(df) else 0,
                },
                "elapsed_sec": round(time.time() - t0, 2),
            }
            meta["outputs"] = {
                "rows_csv": str(self.repo.save_rows(df)),
                "qq_csv": str(self.repo.save_qq(qq_frame(df))),
            }
            self.repo.save_manifest(meta)
        self.log.info("Study done: %d rows (%d errors) in %.1fs", len(rows), n_errors, time.time() - t0)
        return rows


def rows_frame(rows: List[StudyRow]) -> pd.DataFrame:
    cols = [f for f in StudyRow.__dataclass_fields__]
    if not rows:
        return pd.DataFrame(columns=cols)
    return pd.DataFrame([asdict(r) for r in rows], columns=cols)


def qq_frame(df: pd.DataFrame) -> pd.DataFrame:
    """Per (statistic, conditional, param_source): sorted p-values against plotting positions i / (k + 1)."""
    out = []
    if df.empty:
        return pd.DataFrame(columns=["statistic", "conditional", "param_source", "uniform", "p_value"])
    ok = df[df["p_value"].notna()]
    for (stat, cond, source), g in ok.groupby(["statistic", "conditional", "param_source"], sort=True):
        p = np.sort(g["p_value"].to_numpy(dtype=float))
        k = p.size
        out.append(
            pd.DataFrame(
                {
                    "statistic": stat,
                    "conditional": cond,
                    "param_source": source,
                    "uniform": np.arange(1, k + 1) / (k + 1.0),
                    "p_value": p,
                }
            )
        )
    if not out:
        return pd.DataFrame(columns=["statistic", "conditional", "param_source", "uniform", "p_value"])
    return pd.concat(out, ignore_index=True)


def run_study(
    cfg: StudyConfig,
    chain: Optional[ChainConfig] = None,
    repo: Optional[StudyRepository] = None,
    logger: Optional[logging.Logger] = None,
) -> List[StudyRow]:
    """Rows of the study; rows.csv, qq.csv and the manifest are written when a repository is given."""
    return StudyService(repo, logger, cfg.log_every).run(cfg, chain)
