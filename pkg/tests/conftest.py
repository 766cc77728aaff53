"""Shared fixtures: deterministic random sequence generation and the
session-scoped instance corpora used by the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pytest

from plastore import COMPRESSION, INDEXING, PointSeq, build_optimal_pla

EPSILONS = (1, 2, 4, 8, 16, 32, 64)
MAX_N = 10**5
MAX_U = 10**7


def random_values(rng: np.random.Generator, n: int, density: float) -> np.ndarray:
    """Strictly increasing values with mean gap ~density.

    Six gap shapes cycle through the corpus: three globally uniform-ish
    ones and three with the macro structure (clusters, ramps, bursts)
    that piecewise linear approximations are built to exploit.
    """
    shape = rng.integers(0, 6)
    if shape == 0:  # geometric-ish gaps
        gaps = rng.geometric(min(1.0, 1.0 / density), size=n)
    elif shape == 1:  # heavy tail
        gaps = np.rint(rng.lognormal(mean=np.log(max(density, 1.001)) - 0.5, sigma=1.0, size=n)).astype(np.int64)
    elif shape == 2:  # near-linear with jitter
        base = max(1, int(round(density)))
        gaps = base + rng.integers(-min(base - 1, 2), 3, size=n)
    elif shape == 3:  # bursty: dense runs with occasional jumps
        gaps = rng.geometric(min(1.0, 2.0 / density), size=n)
        jumps = rng.random(n) < 0.02
        gaps = gaps + jumps * rng.integers(1, int(10 * density) + 2, size=n)
    elif shape == 4:  # clusters: tight runs separated by wide empty spans
        k = int(rng.integers(3, max(4, n // 64)))
        gaps = rng.geometric(0.7, size=n)
        cuts = rng.choice(n, size=k, replace=False)
        gaps[cuts] += rng.integers(1, max(2, int(density * n / k)), size=k)
    else:  # ramps: density drifts smoothly across the sequence
        ramp = np.abs(np.sin(np.linspace(0, rng.uniform(2, 9), n))) * 2 * density + 1
        gaps = np.rint(ramp + rng.uniform(-0.5, 0.5, size=n)).astype(np.int64)
    gaps = np.maximum(gaps.astype(np.int64), 1)
    values = np.cumsum(gaps)
    if values[-1] > MAX_U:
        values = values[values <= MAX_U]
    return values


@dataclass
class Instance:
    index: int
    epsilon: int
    points: PointSeq
    pla: object


def make_instance(setting: str, idx: int, seed: int = 20240811) -> Instance:
    rng = np.random.default_rng([seed, idx, 0 if setting == COMPRESSION else 1])
    epsilon = EPSILONS[idx % len(EPSILONS)]
    n = int(np.exp(rng.uniform(np.log(256), np.log(MAX_N))))
    density = float(np.exp(rng.uniform(np.log(1.1), np.log(min(200.0, MAX_U / n)))))
    values = random_values(rng, n, density)
    if len(values) < 2:
        values = np.arange(1, 34)
    points = PointSeq(values.tolist(), setting=setting)
    pla = build_optimal_pla(points, epsilon)
    return Instance(index=idx, epsilon=epsilon, points=points, pla=pla)


def make_corpus(setting: str, count: int = 200) -> list:
    return [make_instance(setting, i) for i in range(count)]


@pytest.fixture(scope="session")
def corpus_compression():
    return make_corpus(COMPRESSION)


@pytest.fixture(scope="session")
def corpus_indexing():
    return make_corpus(INDEXING)


def max_error_against_truth(setting, segments, points) -> int:
    """Max |prediction - truth| over every position (compression) or every
    key (indexing), evaluated segment by segment with numpy."""
    values = np.asarray(points.values, dtype=np.int64)
    if setting == COMPRESSION:
        xs = np.arange(1, points.n + 1, dtype=np.int64)
        truth = values
        counts = [s.last_x - s.first_x + 1 for s in segments]
    else:
        xs = values
        truth = np.arange(1, points.n + 1, dtype=np.int64)
        counts = [s.last_y - s.first_y + 1 for s in segments]
    assert sum(counts) == points.n
    firsts = np.repeat(np.array([s.first_x for s in segments], dtype=np.int64), counts)
    lasts = np.repeat(np.array([s.last_x for s in segments], dtype=np.int64), counts)
    betas = np.repeat(np.array([s.intercept for s in segments], dtype=np.int64), counts)
    gammas = np.repeat(np.array([s.final_y for s in segments], dtype=np.int64), counts)
    dx = np.maximum(lasts - firsts, 1)
    pred = np.where(lasts == firsts, betas, (xs - firsts) * (gammas - betas) // dx + betas)
    return int(np.max(np.abs(pred - truth)))
