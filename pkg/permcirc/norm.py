"""Spectral norm of the scaled encoding matrix G / 2^(h/(2m)).

A norm below one is the regime in which an efficient classical
approximation of per(G) is known; the report states the flag and nothing
more.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .encoder import Encoding
from .errors import NoConvergence
from .matrix import IntMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormReport:
    norm: float
    scale: float
    subunit: bool
    matrix_size: int
    h: int


def spectral_norm(
    matrix: IntMatrix, tol: float | None = None, *, max_iter: int | None = None
) -> float:
    """Largest singular value by power iteration on A^T A."""
    tol = DEFAULTS.norm_tol if tol is None else tol
    max_iter = DEFAULTS.norm_max_iter if max_iter is None else max_iter
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if matrix.n == 0:
        return 0.0

    a = matrix.to_numpy(np.float64)
    v = np.random.default_rng(0).standard_normal(matrix.n)
    v /= np.linalg.norm(v)
    estimate = 0.0

    for _ in range(max_iter):
        w = a.T @ (a @ v)
        new_estimate = float(v @ w)
        length = np.linalg.norm(w)
        if length == 0.0:
            return 0.0
        v = w / length
        if abs(new_estimate - estimate) <= tol * new_estimate:
            return math.sqrt(new_estimate)
        estimate = new_estimate

    raise NoConvergence(f"power iteration did not converge in {max_iter} iterations")


def gurvits_norm_report(encoding: Encoding, tol: float | None = None) -> NormReport:
    """Spectral norm of the encoding matrix over 2^(h/(2m)), m its dimension."""
    m = encoding.matrix.n
    if m == 0:
        return NormReport(0.0, 1.0, True, 0, encoding.h)
    scale = 2.0 ** (encoding.h / (2 * m))
    norm = spectral_norm(encoding.matrix, tol) / scale
    logger.info(f"Scaled norm {norm:.6g} (m={m}, h={encoding.h})")
    return NormReport(norm, scale, norm < 1.0, m, encoding.h)
