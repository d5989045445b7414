# application/simulation_service.py
from __future__ import annotations
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional
import json
import logging
import time

from application.model_registry import simulate
from application.ports import PatternRepository, SamplerOptions, SimulateConfig
from application.version import __version__
from domain.errors import InvalidParameter
from domain.models.model_params import ModelParams, model_name
from domain.models.point_pattern import PointPattern
from domain.models.seed_spec import SeedSpec
from infrastructure.runners.replication_runner import ReplicationRunner


class SimulationService:
    def __init__(
        self,
        pattern_repo: PatternRepository,
        logger: Optional[logging.Logger] = None,
        log_every: int = 10,
    ) -> None:
        self.pattern_repo = pattern_repo
        self.log = logger or logging.getLogger("simulate")
        self.log_every = max(1, int(log_every))

    def simulate_many(self, params: ModelParams, options: SamplerOptions, cfg: SimulateConfig) -> List[PointPattern]:
        if cfg.reps < 1:
            raise InvalidParameter("reps must be >= 1")
        root = SeedSpec(cfg.seed)
        runner = ReplicationRunner(cfg.max_workers, self.log, self.log_every)
        return runner.run(
            lambda k: simulate(params, root.replication(k), options, cfg.condition_n),
            list(range(cfg.reps)),
            label="simulations",
        )

    def run(self, params: ModelParams, options: SamplerOptions, cfg: SimulateConfig, out_dir: Path) -> dict:
        t0 = time.time()
        name = model_name(params)
        self.log.info(
            "Simulating %d %s pattern(s) (conditional n=%s, seed=%d)", cfg.reps, name, cfg.condition_n, cfg.seed
        )
        patterns = self.simulate_many(params, options, cfg)
        paths = self.pattern_repo.write_many(patterns, Path(out_dir), stem=name)
        counts = [x.n for x in patterns]
        meta = {
            "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "version": __version__,
            "model": name,
            "params": asdict(params),
            "config": asdict(cfg),
            "window": list(options.window.as_tuple()),
            "counts": {"patterns": len(patterns), "mean_points": sum(counts) / len(counts)},
            "outputs": {"patterns_dir": str(out_dir), "first": str(paths[0]) if paths else None},
            "elapsed_sec": round(time.time() - t0, 2),
        }
        (Path(out_dir) / "simulate.meta.json").write_text(json.dumps(meta, indent=2), encoding="utf-8")
        self.log.info("Wrote %d pattern(s) to %s (mean count %.2f)", len(paths), out_dir, meta["counts"]["mean_points"])
        return meta
