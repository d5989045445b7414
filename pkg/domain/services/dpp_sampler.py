# domain/services/dpp_sampler.py
from __future__ import annotations
import logging

import numpy as np

from domain.errors import AttemptsExhausted, InfeasibleCount, InvalidParameter
from domain.models.dpp_spectrum import DppSpectrum
from domain.models.point_pattern import PointPattern
from domain.models.seed_spec import SeedSpec
from domain.models.window import Window
from domain.services.poisson_sampler import uniform_points

log = logging.getLogger("samplers.dpp")

DEFAULT_MAX_ATTEMPTS = 100_000
_BATCH = 64


def _check_window(s: DppSpectrum, w: Window) -> None:
    if w != s.window:
        raise InvalidParameter(f"spectrum was built for {s.window}, not {w}")


def sample_projection(s: DppSpectrum, index: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Sequential sampler for the projection DPP spanned by the basis functions at `index`.

    Every basis function has unit modulus, so the first-point intensity is constant and
    each later point is proposed uniformly and kept with probability
    (n - ||E^H phi(u)||^2) / n, where E holds the orthonormalized features of the points
    drawn so far.
    """
    index = np.asarray(index, dtype=np.int64)
    n = index.size
    w = s.window
    if n == 0:
        return np.empty((0, 2))
    points = np.empty((n, 2))
    basis = np.empty((n, 0), dtype=complex)
    for i in range(n):
        while True:
            cands = uniform_points(rng, _BATCH, w)
            phi = s.basis(index, cands)  # (batch, n)
            resid = n - np.sum(np.abs(phi @ basis.conj()) ** 2, axis=1) if i else np.full(_BATCH, float(n))
            hit = np.flatnonzero(rng.random(_BATCH) * n < resid)
            if hit.size:
                j = int(hit[0])
                break
        points[i] = cands[j]
        v = phi[j].copy()
        for _ in range(2):  # re-orthogonalize for stability
            v -= basis @ (basis.conj().T @ v)
        basis = np.column_stack([basis, v / np.linalg.norm(v)])
    return points


def sample_dpp(s: DppSpectrum, w: Window, seed: SeedSpec) -> PointPattern:
    """Independent Bernoulli(lambda_i) selection followed by the projection sampler."""
    _check_window(s, w)
    rng = seed.rng()
    index = np.flatnonzero(rng.random(len(s)) < s.eigenvalues)
    return PointPattern(sample_projection(s, index, rng), w)


def sample_dpp_count_indices(
    n: int, s: DppSpectrum, seed: SeedSpec, max_attempts: int = DEFAULT_MAX_ATTEMPTS
) -> np.ndarray:
    """
    Positions i_1 < ... < i_n (in the sorted spectrum) of the Bernoulli successes,
    conditioned on exactly n successes.

    Positions with eigenvalue 1 are always selected and positions with eigenvalue 0
    never are. On the rest, each i_k is drawn by inversion from the first-success
    distribution after i_{k-1}: with prefix products P_j = prod_{i<j}(1 - lambda_i),
    F(m | l) = 1 - P_{m+1} / P_{l+1}. The first draw is normalized to at least one
    success; a later draw falling past the spectrum rejects the attempt. An attempt is
    kept with probability prod_{j > i_n}(1 - lambda_j).
    """
    return _count_indices(n, s, seed.rng(), max_attempts)[0]


def _count_indices(n: int, s: DppSpectrum, rng: np.random.Generator, max_attempts: int) -> tuple[np.ndarray, int]:
    if n < 0:
        raise InvalidParameter(f"n must be >= 0, got {n}")
    if max_attempts < 1:
        raise InvalidParameter("max_attempts must be >= 1")
    lam = s.eigenvalues
    sure = np.flatnonzero(lam >= 1.0)
    free = np.flatnonzero((lam > 0.0) & (lam < 1.0))
    if n > sure.size + free.size:
        raise InfeasibleCount(f"n={n} exceeds the {sure.size + free.size} nonzero eigenvalues")
    if n < sure.size:
        raise InfeasibleCount(f"n={n} is below the {sure.size} eigenvalues equal to 1")
    need = n - sure.size
    if need == 0:
        return sure, 1
    if need == free.size:
        return np.sort(np.concatenate([sure, free])), 1

    # neg_log_p[j] = -log P_j over the free eigenvalues; nondecreasing, starts at 0
    neg_log_p = np.concatenate([[0.0], np.cumsum(-np.log1p(-lam[free]))])
    m = free.size
    for attempt in range(1, max_attempts + 1):
        picks = np.empty(need, dtype=np.int64)
        last = -1
        ok = True
        for k in range(need):
            base = neg_log_p[last + 1]
            u = rng.random()
            if k == 0:
                # condition the first draw on a success somewhere in the suffix
                u *= -np.expm1(-(neg_log_p[m] - base))
            target = base - np.log1p(-u)
            j = max(int(np.searchsorted(neg_log_p, target, side="left")), last + 2)
            if j > m:
                ok = False
                break
            last = j - 1
            picks[k] = last
        if not ok:
            continue
        if rng.random() <= np.exp(-(neg_log_p[m] - neg_log_p[last + 1])):
            return np.sort(np.concatenate([sure, free[picks]])), attempt
    raise AttemptsExhausted(f"no index vector with {n} successes accepted in {max_attempts} attempts")


def sample_dpp_conditional(
    n: int, s: DppSpectrum, w: Window, seed: SeedSpec, max_attempts: int = DEFAULT_MAX_ATTEMPTS
) -> PointPattern:
    """DPP conditioned on N(W) = n: conditional index selection, then the projection sampler."""
    _check_window(s, w)
    rng = seed.rng()
    index, attempts = _count_indices(n, s, rng, max_attempts)
    log.debug("conditional DPP: n=%d accepted after %d attempts", n, attempts)
    return PointPattern(sample_projection(s, index, rng), w, meta={"attempts": attempts})
