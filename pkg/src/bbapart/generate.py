"""Seeded random LTS generation for property campaigns.

The generator is fully documented so instances are reproducible: it draws
from Python's Mersenne Twister (``random.Random(seed)``), visiting states
in index order.  For every state it first draws the visible transitions,
then the silent ones.  A density ``d`` yields ``floor(d)`` draws plus one
more with probability ``d - floor(d)``; each draw picks a label index with
``randrange`` (visible phase only) and then a target with ``randrange``.
Duplicates collapse because transitions form a set.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .lts import TAU, ActionLabel, Lts


def _action_name(i: int) -> str:
    # a, b, ..., z, a1, b1, ...
    letter = chr(ord("a") + i % 26)
    return letter if i < 26 else f"{letter}{i // 26}"


@dataclass(frozen=True)
class GenParams:
    """Parameters for :func:`random_lts`; densities are expected
    out-degrees per state."""

    n_states: int = 8
    visible_actions: int = 2
    visible_density: float = 1.5
    tau_density: float = 0.7
    seed: int = 0

    def __post_init__(self):
        if self.n_states < 1:
            raise ValueError("n_states must be >= 1")
        if self.visible_actions < 0:
            raise ValueError("visible_actions must be >= 0")
        if self.visible_density < 0 or self.tau_density < 0:
            raise ValueError("densities must be >= 0")
        if self.visible_density > 0 and self.visible_actions == 0:
            raise ValueError("visible transitions need at least one action")


def _draw_count(rng: random.Random, density: float) -> int:
    base = math.floor(density)
    frac = density - base
    return base + (1 if frac > 0 and rng.random() < frac else 0)


def random_lts(g: GenParams) -> Lts:
    """Deterministic in ``g.seed``; see the module docstring for the exact
    drawing procedure."""
    rng = random.Random(g.seed)
    labels = [ActionLabel(_action_name(i)) for i in range(g.visible_actions)]
    transitions = set()
    for src in range(g.n_states):
        for _ in range(_draw_count(rng, g.visible_density)):
            label = labels[rng.randrange(g.visible_actions)]
            transitions.add((src, label, rng.randrange(g.n_states)))
        for _ in range(_draw_count(rng, g.tau_density)):
            transitions.add((src, TAU, rng.randrange(g.n_states)))
    return Lts(g.n_states, frozenset(transitions))


def campaign_instances(count: int, seed: int, min_states: int = 2,
                       max_states: int = 8, visible_actions: int = 2,
                       visible_density: float = 1.5,
                       tau_density: float = 0.7):
    """The seeded instance stream used by the validation campaign: state
    counts cycle through [min_states, max_states], per-instance seeds are
    derived from the campaign seed."""
    span = max_states - min_states + 1
    for i in range(count):
        yield GenParams(n_states=min_states + i % span,
                        visible_actions=visible_actions,
                        visible_density=visible_density,
                        tau_density=tau_density,
                        seed=seed * 1_000_003 + i)
