"""All-solutions chronological backtracking with exact node accounting.

The modelled search assigns variables 0..n-1 in a fixed order and values in
a fixed order, checks consistency of every partial assignment it creates,
and enumerates the entire consistent tree.  Every variable-value
instantiation is one search-tree node, plus the root, so

    nodes = 1 + sum_{i=0}^{n-1} d * c_i,

where c_i is the number of consistent depth-i prefixes.  Because the full
consistent tree is enumerated, that count does not depend on visit order,
and the implementation below sweeps level by level over numpy arrays of
consistent prefixes instead of recursing; its observable outputs (node
count, level profile, solution set) are identical to the depth-first
traversal and are cross-checked against a naive re-check-everything oracle
in the test suite.

For strict instances (q < d) a constraint can only fail once its scope is
fully assigned, so each constraint is checked exactly at the depth that
completes it.  Non-strict instances fall back to checking a constraint at
every depth that touches it, counting how many of its forbidden tuples
agree with the assigned prefix (violated iff they cover all completions).

Counts are Python ints and therefore exact at any size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Instance, is_consistent


@dataclass(frozen=True)
class SearchStats:
    """Exact search-tree accounting for one instance."""

    nodes: int
    solution_count: int
    level_counts: tuple[int, ...]
    solutions: tuple[tuple[int, ...], ...] | None = None


def _value_dtype(d: int):
    if d <= 255:
        return np.uint8
    if d <= 65535:
        return np.uint16
    return np.uint32


def _check_at_depth(constraint, d: int, last_var: int):
    """Blocking subcodes for rows right after ``last_var`` is assigned.

    Returns (cols, weights, blocked) where a row is violated iff its
    weighted code over cols equals one of blocked, or None when no partial
    assignment at this depth can violate the constraint.
    """
    scope = constraint.scope
    fixed_positions = [j for j, v in enumerate(scope) if v <= last_var]
    free = len(scope) - len(fixed_positions)
    cover = d**free
    counts: dict[int, int] = {}
    for tup in constraint.incompatible:
        code = 0
        for w, j in enumerate(fixed_positions):
            code += tup[j] * d**w
        counts[code] = counts.get(code, 0) + 1
    blocked = sorted(c for c, m in counts.items() if m == cover)
    if not blocked:
        return None
    cols = [scope[j] for j in fixed_positions]
    weights = [d**w for w in range(len(cols))]
    return cols, weights, blocked


def _codes(arr: np.ndarray, cols, weights) -> np.ndarray:
    code = arr[:, cols[0]].astype(np.int64)
    for c, w in zip(cols[1:], weights[1:]):
        code += arr[:, c].astype(np.int64) * w
    return code


def _match_any(code: np.ndarray, blocked) -> np.ndarray:
    if len(blocked) == 1:
        return code == blocked[0]
    if len(blocked) <= 8:
        bad = code == blocked[0]
        for b in blocked[1:]:
            bad |= code == b
        return bad
    return np.isin(code, np.asarray(blocked, dtype=np.int64))


def solve_all(inst: Instance, collect: bool = False, value_order=None) -> SearchStats:
    """Enumerate all solutions and count search-tree nodes exactly.

    ``value_order`` (a permutation of range(d)) only affects visit order,
    never the counts; collected solutions are always reported in
    lexicographic order.
    """
    params = inst.params
    n, d = params.n, params.d
    if value_order is None:
        order = np.arange(d, dtype=_value_dtype(d))
    else:
        order_list = list(value_order)
        if sorted(order_list) != list(range(d)):
            raise ValueError("value_order must be a permutation of range(d)")
        order = np.asarray(order_list, dtype=_value_dtype(d))

    if params.d**params.k > 2**62:
        raise ValueError("d**k too large for 64-bit tuple codes")

    checks_at: list[list] = [[] for _ in range(n)]
    for c in inst.constraints:
        depths = [max(c.scope)] if params.strict else sorted(c.scope)
        for v in depths:
            chk = _check_at_depth(c, d, v)
            if chk is not None:
                checks_at[v].append(chk)

    # The level sweep below only tests constraints touched by the newest
    # variable; a root-level violation (every tuple forbidden, q = d**k)
    # must be handled up front.
    root_ok = params.strict or is_consistent(inst, ())
    level_counts = [1 if root_ok else 0]
    nodes = 1
    cur = np.zeros((1 if root_ok else 0, 0), dtype=order.dtype)

    for i in range(n):
        rows = cur.shape[0]
        if rows == 0:
            level_counts.append(0)
            continue
        nodes += rows * d
        nxt = np.empty((rows * d, i + 1), dtype=order.dtype)
        if i:
            nxt[:, :i] = np.repeat(cur, d, axis=0)
        nxt[:, i] = np.tile(order, rows)
        keep = None
        for cols, weights, blocked in checks_at[i]:
            bad = _match_any(_codes(nxt, cols, weights), blocked)
            keep = ~bad if keep is None else np.logical_and(keep, ~bad, out=keep)
        cur = nxt if keep is None else nxt[keep]
        level_counts.append(cur.shape[0])

    solution_count = level_counts[-1]
    solutions = None
    if collect:
        solutions = tuple(sorted(tuple(int(v) for v in row) for row in cur.tolist()))
    return SearchStats(
        nodes=nodes,
        solution_count=solution_count,
        level_counts=tuple(level_counts),
        solutions=solutions,
    )


def level_profile(inst: Instance) -> list[int]:
    """c_i for i = 0..n: consistent prefix counts per level."""
    return list(solve_all(inst).level_counts)
