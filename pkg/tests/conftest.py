import random

import pytest


def random_bits(rng: random.Random, n: int) -> list[int]:
    return [rng.randint(0, 1) for _ in range(n)]


def lanes_to_masks(lanes: list[list[int]]) -> list[int]:
    """Transpose per-lane bit lists into per-position masks (bit i = lane i)."""
    nbits = len(lanes[0])
    return [sum(lanes[w][i] << w for w in range(len(lanes))) for i in range(nbits)]


def masks_to_lane(masks: list[int], lane: int) -> list[int]:
    return [(m >> lane) & 1 for m in masks]


@pytest.fixture
def rng():
    return random.Random(0xC1A0)
