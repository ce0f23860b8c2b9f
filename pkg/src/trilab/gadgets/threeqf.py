"""Triple-quadratic-feasibility gadget and the oracle decision tree.

``build_3qf`` attaches the rank-forcing slices B_1 = E_11,
B_i = E_1i - E_i1 (and C_i = B_i) to a square quadratic system.
``qf_via_3qf`` then decides quadratic feasibility with at most n+2
queries to any sound 3QF oracle: query S at the current dimension; if
infeasible, the primed system S' (B_1 = C_1 = 0) settles the answer;
if feasible, drop the leading variable and recurse on the lower-right
blocks of *all* the quadratics.  Reaching dimension zero means every
gadget level was feasible, and the terminal test is whether the (n,n)
entry of each quadratic vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .systems import QuadraticSystem, TrilinearSystem


def _gadget_slices(dim: int, primed: bool) -> tuple:
    out = []
    first = np.empty((dim, dim), dtype=object)
    first[...] = Fraction(0)
    if not primed:
        first[0, 0] = Fraction(1)
    out.append(first)
    for i in range(1, dim):
        M = np.empty((dim, dim), dtype=object)
        M[...] = Fraction(0)
        M[0, i] = Fraction(1)
        M[i, 0] = Fraction(-1)
        out.append(M)
    return tuple(out)


def build_3qf(qs: QuadraticSystem, primed: bool = False) -> TrilinearSystem:
    """Gadget system S (or S' when ``primed``) for a square quadratic system."""
    if qs.num_equations != qs.dim:
        raise ValueError(
            f"square system required: {qs.num_equations} equations in {qs.dim} variables"
        )
    gadget = _gadget_slices(qs.dim, primed)
    return TrilinearSystem(
        dims=(qs.dim, qs.dim, qs.dim),
        a_slices=tuple(M.copy() for M in qs.matrices),
        b_slices=gadget,
        c_slices=gadget,
    )


def _level_system(blocks: list, dim: int, primed: bool) -> TrilinearSystem:
    gadget = _gadget_slices(dim, primed)
    return TrilinearSystem(
        dims=(dim, dim, dim),
        a_slices=tuple(blocks),
        b_slices=gadget,
        c_slices=gadget,
    )


@dataclass(frozen=True)
class QfVerdict:
    feasible: bool
    queries: int


Oracle = Callable[[TrilinearSystem], bool]


def qf_via_3qf(qs: QuadraticSystem, oracle: Oracle) -> QfVerdict:
    """Decide quadratic feasibility through a 3QF oracle (<= n+2 queries)."""
    n = qs.dim
    budget = n + 2
    queries = 0

    def ask(system: TrilinearSystem) -> bool:
        nonlocal queries
        queries += 1
        if queries > budget:
            raise AssertionError(f"oracle budget exceeded: {queries} > {budget}")
        return bool(oracle(system))

    for level in range(n, 1, -1):
        off = n - level
        blocks = [M[off:, off:].copy() for M in qs.matrices]
        if ask(_level_system(blocks, level, primed=False)):
            continue  # solutions are pinned to the trailing coordinates; shrink
        feasible = ask(_level_system(blocks, level, primed=True))
        return QfVerdict(feasible, queries)
    # every gadget level was feasible: the answer rides on the last diagonal
    corner_zero = all(M[n - 1, n - 1] == 0 for M in qs.matrices)
    return QfVerdict(corner_zero, queries)
