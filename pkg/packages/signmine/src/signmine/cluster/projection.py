"""
Two-dimensional embedding of an affinity matrix by classical multidimensional scaling.
"""

from dataclasses import dataclass

import numpy as np

from ..config import get_logger
from ..exceptions import TooFewPoints
from ..metric.affinity import AffinityMatrix

logger = get_logger(__name__)

SIGN_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Projection2D:
    coords: np.ndarray
    explained: tuple[float, float]


def project_2d(matrix: AffinityMatrix) -> Projection2D:
    """
    Classical MDS: double-center the squared distances, keep the top two
    eigenpairs and scale eigenvectors by the root of their eigenvalue.

    Negative eigenvalues are clamped to 0. Each axis is flipped so that its
    first non-zero coordinate is positive.

    Raises:
        TooFewPoints: Fewer than 3 phonemes.
    """
    n = matrix.n
    if n < 3:
        raise TooFewPoints(f"Projection needs at least 3 phonemes, got {n}")

    d2 = matrix.distances ** 2
    centering = np.eye(n) - np.ones((n, n)) / n
    b = -centering @ d2 @ centering / 2
    b = (b + b.T) / 2

    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1]
    evals = np.clip(evals[order], 0.0, None)
    evecs = evecs[:, order]

    coords = evecs[:, :2] * np.sqrt(evals[:2])
    for axis in range(2):
        nonzero = np.nonzero(np.abs(coords[:, axis]) > SIGN_TOLERANCE)[0]
        if len(nonzero) and coords[nonzero[0], axis] < 0:
            coords[:, axis] = -coords[:, axis]
        coords[np.abs(coords[:, axis]) <= SIGN_TOLERANCE, axis] = 0.0

    total = evals.sum()
    explained = tuple(float(v / total) if total > 0 else 0.0 for v in evals[:2])
    logger.info(f"Projected {n} phonemes; explained shares {explained[0]:.3f}, {explained[1]:.3f}")
    return Projection2D(coords=coords, explained=explained)
