# application/envelope_service.py
from __future__ import annotations
from pathlib import Path
from typing import Dict, List, Optional
import logging

from application.ports import CurveRepository, EnvelopeWriter, PatternRepository, SummaryConfig
from domain.models.curve import Curve
from domain.models.envelope import CurveSet, Envelope
from domain.models.rgrid import RGrid
from domain.services.global_envelopes import envelope_area, global_envelope
from domain.services.summary_statistics import estimate, poisson_reference


class SummaryService:
    """Estimate a summary curve for a stored pattern and persist it."""

    def __init__(self, patterns: PatternRepository, curves: CurveRepository, logger: Optional[logging.Logger] = None) -> None:
        self.patterns = patterns
        self.curves = curves
        self.log = logger or logging.getLogger("summaries")

    def run(self, stat: str, in_path: Path, out_path: Path, cfg: SummaryConfig, theo_rho: Optional[float] = None) -> Curve:
        x = self.patterns.read(in_path)
        rgrid = RGrid.linear(cfg.r_max, cfg.r_count)
        curve = estimate(stat, x, rgrid, cfg.f_resolution)
        extra = None
        if theo_rho is not None:
            extra = {"theo": poisson_reference(stat, theo_rho, rgrid).values}
        self.curves.write(curve, out_path, extra=extra)
        self.log.info("%s-hat for %d points written to %s", stat, x.n, out_path)
        return curve


class EnvelopeService:
    """Global ERL envelope test for a stored data curve against a directory of simulated curves."""

    def __init__(self, curves: CurveRepository, writer: EnvelopeWriter, logger: Optional[logging.Logger] = None) -> None:
        self.curves = curves
        self.writer = writer
        self.log = logger or logging.getLogger("envelopes")

    @staticmethod
    def test(data: Curve, sims: List[Curve], alpha: float) -> tuple[Envelope, float]:
        env = global_envelope(CurveSet.from_curves(data, sims), alpha)
        return env, envelope_area(env)

    def run(self, data_path: Path, sims_dir: Path, alpha: float, out_csv: Path) -> Dict[str, object]:
        data = self.curves.read(data_path)
        sims = self.curves.read_dir(sims_dir, kind=data.kind)
        env, area = self.test(data, sims, alpha)
        outputs = self.writer.write(env, area, out_csv)
        self.log.info(
            "%s envelope: p=%.4g, area=%.4g, %d simulations, data %s",
            data.kind, env.p_value, area, env.n_sims, "inside" if env.data_inside else "outside",
        )
        return {"p_value": env.p_value, "area": area, "data_inside": env.data_inside, "outputs": outputs}
