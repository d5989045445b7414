# domain/services/global_envelopes.py
from __future__ import annotations
from dataclasses import dataclass
import math

import numpy as np
from scipy.stats import rankdata

from domain.errors import InvalidParameter, MismatchedGrids, TooFewCurves
from domain.models.curve import Curve
from domain.models.envelope import CurveSet, Envelope

DEFAULT_ALPHA = 0.05


@dataclass(frozen=True, eq=False)
class ErlMeasures:
    pointwise_ranks: np.ndarray  # (s + 1, m) two-sided ranks on the common mask
    sorted_ranks: np.ndarray     # each row sorted ascending
    classes: np.ndarray          # tie-class per curve; 0 is the most extreme class
    class_sizes: np.ndarray

    def more_extreme(self, i: int, j: int) -> bool:
        return bool(self.classes[i] < self.classes[j])

    def ties(self, i: int, j: int) -> bool:
        return bool(self.classes[i] == self.classes[j])


def erl_measures(cs: CurveSet) -> ErlMeasures:
    """
    Extreme rank lengths of all s + 1 curves.

    The pointwise rank is min(rank from below, rank from above) with ties sharing the
    minimum rank. Curves are ordered lexicographically by their sorted rank vectors;
    equal vectors form one tie-class.
    """
    vals = np.asarray(cs.values, dtype=float)
    if vals.ndim != 2 or vals.shape[1] != len(cs.rgrid) or cs.mask.shape[0] != vals.shape[1]:
        raise MismatchedGrids("curve values do not match the r-grid")
    v = vals[:, cs.mask]
    if v.shape[1] == 0:
        ranks = np.ones((vals.shape[0], 0))
    else:
        below = rankdata(v, method="min", axis=0)
        above = rankdata(-v, method="min", axis=0)
        ranks = np.minimum(below, above)
    sorted_ranks = np.sort(ranks, axis=1)
    _, classes, sizes = np.unique(sorted_ranks, axis=0, return_inverse=True, return_counts=True)
    return ErlMeasures(ranks, sorted_ranks, np.asarray(classes).ravel(), sizes)


def global_envelope(cs: CurveSet, alpha: float = DEFAULT_ALPHA) -> Envelope:
    """
    ERL global envelope at level alpha with its Monte Carlo p-value.

    The k = floor(alpha (s + 1)) most extreme curves are discarded by whole tie-classes,
    and only while the running count stays within k. The band is the pointwise range of
    the retained curves; the data curve is retained exactly when p_value > alpha.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidParameter(f"alpha must lie in (0, 1), got {alpha}")
    total = cs.s + 1
    k = int(math.floor(alpha * total + 1e-9))
    if cs.s < 1 or k < 1:
        raise TooFewCurves(f"{cs.s} simulations are too few for alpha={alpha} (need floor(alpha (s+1)) >= 1)")
    erl = erl_measures(cs)

    cumulative = np.cumsum(erl.class_sizes)
    discarded = int(np.searchsorted(cumulative, k, side="right"))  # classes 0..discarded-1 go
    retained = erl.classes >= discarded
    data_class = int(erl.classes[0])
    p_value = float(cumulative[data_class]) / total

    kept = cs.values[retained]
    lo = np.full(len(cs.rgrid), np.nan)
    hi = np.full(len(cs.rgrid), np.nan)
    lo[cs.mask] = kept[:, cs.mask].min(axis=0)
    hi[cs.mask] = kept[:, cs.mask].max(axis=0)
    obs = np.where(cs.mask, cs.data, np.nan)
    return Envelope(
        lower=Curve(cs.rgrid, lo, cs.kind, cs.mask),
        upper=Curve(cs.rgrid, hi, cs.kind, cs.mask),
        observed=Curve(cs.rgrid, obs, cs.kind, cs.mask),
        alpha=float(alpha),
        p_value=p_value,
        erl_classes=erl.classes,
        retained=retained,
        n_sims=cs.s,
    )


def envelope_area(e: Envelope) -> float:
    """Trapezoid integral of upper - lower over adjacent pairs of defined grid points."""
    mask = e.lower.defined
    if int(mask.sum()) < 2:
        raise InvalidParameter("envelope must be defined on at least two grid points")
    r = e.lower.r
    gap = np.where(mask, e.upper.values - e.lower.values, 0.0)
    both = mask[:-1] & mask[1:]
    pieces = np.diff(r) * (gap[:-1] + gap[1:]) / 2.0
    return float(pieces[both].sum())
