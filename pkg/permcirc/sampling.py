"""Monte-Carlo permanent estimation with the +-1 (Glynn/Gurvits) estimator.

Samples are split over a fixed number of streams, each seeded by spawning
``numpy.random.SeedSequence(seed)`` and drawn with PCG64. Workers take whole
streams and values are concatenated in stream order, so (seed, samples,
streams) alone determines the estimate.
"""

import logging
import math
from dataclasses import dataclass
from multiprocessing import Pool

import numpy as np

from .config import DEFAULTS
from .matrix import IntMatrix

logger = logging.getLogger(__name__)

_BATCH = 1 << 14


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int


def _stream_values(args: tuple[np.ndarray, int, np.random.SeedSequence]) -> np.ndarray:
    a, count, seed_seq = args
    rng = np.random.default_rng(seed_seq)
    n = a.shape[0]
    out = []
    for start in range(0, count, _BATCH):
        size = min(_BATCH, count - start)
        x = rng.integers(0, 2, size=(size, n), dtype=np.int8).astype(np.float64) * 2 - 1
        out.append(np.prod(x @ a.T, axis=1) * np.prod(x, axis=1))
    return np.concatenate(out) if out else np.empty(0)


def per_gurvits(
    matrix: IntMatrix,
    samples: int,
    seed: int,
    *,
    streams: int | None = None,
    workers: int = 1,
) -> McEstimate:
    """Unbiased Monte-Carlo estimate of per(matrix) from ``samples`` Glynn
    values. Samples are split over ``streams`` PCG64 generators spawned from
    ``seed``, so the estimate is the same for any ``workers``.
    """
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    streams = DEFAULTS.mc_streams if streams is None else streams
    seed &= 0xFFFF_FFFF_FFFF_FFFF

    if matrix.n == 0:
        return McEstimate(1.0, 0.0, samples, seed)

    a = matrix.to_numpy(np.float64)
    base, extra = divmod(samples, streams)
    counts = [base + (1 if i < extra else 0) for i in range(streams)]
    children = np.random.SeedSequence(seed).spawn(streams)
    jobs = [(a, count, child) for count, child in zip(counts, children) if count]

    if workers > 1 and len(jobs) > 1:
        with Pool(processes=workers) as pool:
            parts = pool.map(_stream_values, jobs)
    else:
        parts = [_stream_values(job) for job in jobs]

    values = np.concatenate(parts)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(samples))
    logger.debug(f"Estimator: {samples} samples over {len(jobs)} streams, mean {mean}")
    return McEstimate(mean, stderr, samples, seed)
