"""Seeded random instances for property checks.

All generators use a counter-based bit generator keyed by the seed and a
per-trial counter, so any single trial can be reproduced independently of how
many trials ran before it.
"""

from __future__ import annotations

import numpy as np

from .fusion import FusionCategory, Morphism, word
from .ind import IndMorphism, IndObject, ind_object
from .monad import Context, ZModuleAction, Z_object, free_half_braiding, epsilon

__all__ = [
    "trial_rng",
    "random_morphism",
    "random_ind_object",
    "random_ind_morphism",
    "random_module",
]


def trial_rng(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed by the seed with a per-trial counter."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, stream, trial]))


def random_morphism(cat: FusionCategory, dom, cod, rng: np.random.Generator) -> Morphism:
    dom, cod = word(cat, dom), word(cat, cod)
    blocks = {}
    for s in cat.labels:
        n, m = cat.tree_count(dom, s), cat.tree_count(cod, s)
        if n and m:
            blocks[s] = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    return Morphism(cat, dom, cod, blocks)


def random_ind_object(cat: FusionCategory, rng: np.random.Generator,
                      max_total: int = 2) -> IndObject:
    """Small random ind-object with at least one nonzero fiber."""
    while True:
        mult = {}
        budget = int(rng.integers(1, max_total + 1))
        for _ in range(budget):
            lbl = cat.labels[int(rng.integers(0, len(cat.labels)))]
            mult[lbl] = mult.get(lbl, 0) + 1
        v = ind_object(cat, mult)
        if not v.is_zero():
            return v


def random_ind_morphism(dom: IndObject, cod: IndObject, rng: np.random.Generator) -> IndMorphism:
    blocks = {}
    for u in dom.category.labels:
        n, m = dom.m(u), cod.m(u)
        if n and m:
            blocks[u] = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    return IndMorphism(dom, cod, blocks)


def random_module(ctx: Context, rng: np.random.Generator, max_total: int = 2) -> ZModuleAction:
    """A random module over the centralizer monad: a free module twisted by a
    random invertible change of fiber bases."""
    from .ind import compose_ind, ind_identity

    x = random_ind_object(ctx.category, rng, max_total=max_total)
    hb = free_half_braiding(ctx, x)
    tau = epsilon(ctx, hb)
    carrier = Z_object(ctx, x).total
    g = random_ind_morphism(carrier, carrier, rng)
    # make it well-conditioned and invertible
    gi = ind_identity(carrier) + 0.35 * (1.0 / max(g.norm(), 1.0)) * g
    blocks_inv = {u: np.linalg.inv(gi.block(u)) for u in carrier.support}
    gi_inv = IndMorphism(carrier, carrier, blocks_inv)
    from .monad import Z_morphism

    twisted = compose_ind(gi, compose_ind(tau, Z_morphism(ctx, gi_inv)))
    return ZModuleAction(ctx, carrier, twisted)
