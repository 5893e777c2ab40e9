"""Brute-force reference computations used to cross-check the decision procedures.

These deliberately take a different route from ``relations``: closures by
iterated boolean matrix products, and directed consistency by an explicit
search over every same-shaped middle pair.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Sequence

import numpy as np

from .. import relations as rel
from ..syntax import SumCon, Type, shape


def matrix(universe: Sequence, pairs: Iterable[tuple]) -> np.ndarray:
    index = {x: k for k, x in enumerate(universe)}
    m = np.zeros((len(universe), len(universe)), dtype=bool)
    for a, b in pairs:
        m[index[a], index[b]] = True
    return m


def closure_matrix(universe: Sequence, edges: Iterable[tuple]) -> np.ndarray:
    """Reflexive-transitive closure by squaring until a fixed point."""
    m = matrix(universe, edges) | np.eye(len(universe), dtype=bool)
    while True:
        nxt = (m.astype(np.int64) @ m.astype(np.int64)) > 0
        if (nxt == m).all():
            return m
        m = nxt


def table_matrix(universe: Sequence, relation) -> np.ndarray:
    return np.array([[relation(a, b) for b in universe] for a in universe], dtype=bool)


def compose(*ms: np.ndarray) -> np.ndarray:
    out = ms[0].astype(np.int64)
    for m in ms[1:]:
        out = (out @ m.astype(np.int64) > 0).astype(np.int64)
    return out > 0


def dcons_sum_oracle() -> np.ndarray:
    """``⊑⁻¹ ; ≤ ; ⊑`` over the eight constructors."""
    sums = list(SumCon)
    p = closure_matrix(sums, rel.PRECISION_EDGES)
    s = closure_matrix(sums, rel.SUBSUM_EDGES)
    return compose(p.T, s, p)


def shape_groups(universe: Iterable[Type]) -> dict:
    groups = defaultdict(list)
    for a in universe:
        groups[shape(a)].append(a)
    return groups


def same_shape_pairs(universe: Iterable[Type]) -> int:
    return sum(len(g) ** 2 for g in shape_groups(universe).values())


def brute_dcons(group: Sequence[Type]) -> np.ndarray:
    """``D[i, j]`` iff some middles ``A0 ⊑ group[i]``, ``B0 ⊑ group[j]`` have ``A0 ≤ B0``."""
    p = table_matrix(group, rel.type_precision)
    s = table_matrix(group, rel.subtype)
    return compose(p.T, s, p)


def structural_dcons(group: Sequence[Type]) -> np.ndarray:
    return table_matrix(group, rel.dcons)


__all__ = ["matrix", "closure_matrix", "table_matrix", "compose", "dcons_sum_oracle",
           "shape_groups", "same_shape_pairs", "brute_dcons", "structural_dcons"]
