# domain/models/dpp_spectrum.py
from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from domain.errors import InvalidParameter
from domain.models.window import Window


@dataclass(frozen=True, eq=False)
class DppSpectrum:
    """
    Truncated spectral representation of a stationary DPP kernel on a rectangle.

    eigenvalues[i] belongs to the Fourier basis function with integer frequency
    frequencies[i] = (k1, k2), phi_k(u) = exp(2 pi i (k1 (x - xmin)/width + k2 (y - ymin)/height)).
    Eigenvalues are kept in nonincreasing order.
    """

    eigenvalues: np.ndarray
    frequencies: np.ndarray
    window: Window
    bound: int  # |k1|, |k2| <= bound
    neglected_mass: float = 0.0

    def __post_init__(self) -> None:
        lam = np.array(self.eigenvalues, dtype=float).ravel()
        freq = np.array(self.frequencies, dtype=np.int64).reshape(-1, 2)
        if lam.shape[0] != freq.shape[0]:
            raise InvalidParameter("one frequency per eigenvalue is required")
        if lam.size and (lam.min() < 0.0 or lam.max() > 1.0):
            raise InvalidParameter("eigenvalues must lie in [0, 1]")
        if lam.size > 1 and np.any(np.diff(lam) > 0):
            raise InvalidParameter("eigenvalues must be sorted nonincreasing")
        lam.setflags(write=False)
        freq.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "frequencies", freq)

    @classmethod
    def from_eigenvalues(cls, eigenvalues, window: Window | None = None) -> "DppSpectrum":
        """
        Spectrum from bare eigenvalues, sorted nonincreasing (stable, so equal values keep
        their input order). The i-th input value gets frequency (i, 0) before sorting.
        """
        lam = np.asarray(eigenvalues, dtype=float).ravel()
        order = np.argsort(-lam, kind="stable")
        freq = np.column_stack([np.arange(lam.size), np.zeros(lam.size, dtype=np.int64)])
        return cls(lam[order], freq[order], window or Window.unit_square(), bound=int(lam.size))

    def __len__(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def expected_count(self) -> float:
        return float(self.eigenvalues.sum())

    @property
    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.eigenvalues > 0.0))

    def basis(self, index: np.ndarray, pts: np.ndarray) -> np.ndarray:
        """Matrix [phi_{k_j}(u_i)] for the selected spectrum positions `index`, |phi| = 1."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        w = self.window
        ux = (pts[:, 0] - w.xmin) / w.width
        uy = (pts[:, 1] - w.ymin) / w.height
        k = self.frequencies[np.asarray(index, dtype=np.int64)]
        phase = np.outer(ux, k[:, 0]) + np.outer(uy, k[:, 1])
        return np.exp(2j * np.pi * phase)
