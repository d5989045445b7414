# application/table1_service.py
from __future__ import annotations
from dataclasses import asdict
from datetime import datetime, timezone
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from application.ports import SamplerOptions, StudyRepository, Table1Config
from application.version import __version__
from domain.models.model_params import StraussParams
from domain.models.seed_spec import SeedSpec
from domain.services.strauss_model import ripley_count_mean
from domain.services.strauss_sampler import sample_strauss
from infrastructure.runners.replication_runner import ReplicationRunner

TABLE1_COLUMNS = ["beta", "gamma", "approx_mean", "sim_mean", "sim_se", "sim_reps"]


class Table1Service:
    """Mean number of Strauss points on the unit square: closed-form approximation and, optionally, simulation."""

    def __init__(
        self,
        repo: Optional[StudyRepository] = None,
        options: Optional[SamplerOptions] = None,
        logger: Optional[logging.Logger] = None,
        log_every: int = 500,
    ) -> None:
        self.repo = repo
        self.options = options or SamplerOptions()
        self.log = logger or logging.getLogger("table1")
        self.log_every = log_every

    def _simulated(self, p: StraussParams, reps: int, seed: SeedSpec, max_workers: int) -> Tuple[float, float]:
        runner = ReplicationRunner(max_workers, self.log, self.log_every)
        counts = runner.run(
            lambda k: sample_strauss(p, self.options.window, self.options.chain, seed.child(k)).n,
            list(range(reps)),
            label=f"table1 beta={p.beta:g} gamma={p.gamma:g}",
        )
        c = np.asarray(counts, dtype=float)
        se = float(c.std(ddof=1) / math.sqrt(c.size)) if c.size > 1 else math.nan
        return float(c.mean()), se

    def run(self, cfg: Table1Config) -> pd.DataFrame:
        rows: List[dict] = []
        for bi, beta in enumerate(cfg.betas):
            for gi, gamma in enumerate(cfg.gammas):
                p = StraussParams(beta=beta, gamma=gamma, R=cfg.R)
                row = {
                    "beta": beta,
                    "gamma": gamma,
                    "approx_mean": ripley_count_mean(p),
                    "sim_mean": math.nan,
                    "sim_se": math.nan,
                    "sim_reps": cfg.simulate_reps,
                }
                if cfg.simulate_reps > 0:
                    seed = SeedSpec(cfg.seed, bi).child(gi)
                    row["sim_mean"], row["sim_se"] = self._simulated(p, cfg.simulate_reps, seed, cfg.max_workers)
                self.log.info("beta=%g gamma=%g approx=%.4f sim=%.4f", beta, gamma, row["approx_mean"], row["sim_mean"])
                rows.append(row)
        df = pd.DataFrame(rows, columns=TABLE1_COLUMNS)
        if self.repo is not None:
            out = self.repo.save_table1(df)
            self.repo.save_manifest(
                {
                    "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                    "version": __version__,
                    "seed": cfg.seed,
                    "config": asdict(cfg),
                    "chain": asdict(self.options.chain),
                    "outputs": {"table1_csv": str(out)},
                }
            )
        return df


def run_table1(
    cfg: Optional[Table1Config] = None,
    repo: Optional[StudyRepository] = None,
    options: Optional[SamplerOptions] = None,
    logger: Optional[logging.Logger] = None,
) -> pd.DataFrame:
    return Table1Service(repo, options, logger).run(cfg or Table1Config())
