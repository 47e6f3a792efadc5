"""Deterministic random sampling of ball points for residual sweeps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["BallSampler", "ball_points", "probe_points", "PROBE_SEED"]

#: fixed seed for the group-deduplication probe set
PROBE_SEED = 0xB411


def ball_points(rng: np.random.Generator, count: int, n: int, radius: float = 0.9) -> np.ndarray:
    """Sample `count` points with |z| <= radius, shape (count, n).

    Coordinates are drawn uniformly from the complex disc of the given
    radius (uniform polydisc) and rejected until the Euclidean norm is
    within the radius, which avoids boundary blowup in residual tests.
    """
    out = np.empty((count, n), dtype=complex)
    have = 0
    while have < count:
        need = count - have
        batch = max(8, int(need * (1.6**n)))
        r = radius * np.sqrt(rng.random((batch, n)))
        th = 2.0 * np.pi * rng.random((batch, n))
        cand = r * np.exp(1j * th)
        keep = np.sum(np.abs(cand) ** 2, axis=1) <= radius**2
        cand = cand[keep][:need]
        out[have : have + cand.shape[0]] = cand
        have += cand.shape[0]
    return out


def probe_points(n: int, count: int = 4, radius: float = 0.5) -> np.ndarray:
    """Fixed pseudo-random probe set used to compare group actions."""
    rng = np.random.default_rng(PROBE_SEED)
    return ball_points(rng, count, n, radius)


@dataclass(frozen=True)
class BallSampler:
    """Reproducible source of ball points and pairs."""

    n: int
    count: int
    seed: int = 0
    radius: float = 0.9

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def points(self, rng: np.random.Generator | None = None) -> np.ndarray:
        return ball_points(rng or self.rng(), self.count, self.n, self.radius)

    def pairs(self, rng: np.random.Generator | None = None) -> tuple[np.ndarray, np.ndarray]:
        r = rng or self.rng()
        return (
            ball_points(r, self.count, self.n, self.radius),
            ball_points(r, self.count, self.n, self.radius),
        )
