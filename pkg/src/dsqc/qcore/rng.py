"""Seeded, splittable random streams (Philox counter-based generator)."""
from __future__ import annotations

import numpy as np


def make_stream(seed: int | np.random.SeedSequence) -> np.random.Generator:
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def split(stream: np.random.Generator, count: int) -> list[np.random.Generator]:
    """Independent child streams; the parent is advanced, not consumed."""
    return stream.spawn(count)


def trial_stream(seed: int, index: int) -> np.random.Generator:
    """Stream for Monte-Carlo trial ``index``: a pure function of ``(seed, index)``."""
    return make_stream(np.random.SeedSequence([seed, index]))
