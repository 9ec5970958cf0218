"""Swap-stable ("sequential feasible") permutations and the exact solver.

A permutation is swap-stable when no exchange of two neighbouring positions
strictly increases the total flight.  Exchanging positions k and k+1 only
changes the two terms at those positions, and those terms depend on nothing
but the pair itself and the consumption of the airplanes behind it.  Building
orders from the back (the farthest flyer first) therefore lets every pair
condition be checked the moment the pair is formed, and the sieve yields the
stable set exactly.  Every global maximiser is swap-stable, so the maximum
over the sieve is the optimum.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import EmptyInstance, NegativeSuffix, NonPositiveRate, SearchTimeout
from .model import Instance, check_permutation, evaluate, to_rational

_DEADLINE_STRIDE = 4096


@dataclass(frozen=True)
class SwapWitness:
    """Certificate that a permutation is not swap-stable.

    Falsy, so ``if is_sequential_feasible(...)`` reads naturally while the
    witness stays available to callers that want it.
    """

    position: int
    original_value: Fraction
    swapped_value: Fraction

    def __post_init__(self):
        if not self.swapped_value > self.original_value:
            raise ValueError("a swap witness must strictly improve the total")

    def __bool__(self):
        return False


@dataclass
class SolveReport:
    optimum: Fraction
    optimal_perms: list[tuple[int, ...]]
    q_n: Optional[int]  # None when pruning skipped part of the stable set
    nodes_expanded: int
    elapsed: float
    ties_detected: bool = False

    def comparable(self) -> tuple:
        """Everything except wall-clock time, for determinism checks."""
        return (self.optimum, tuple(self.optimal_perms), self.q_n,
                self.nodes_expanded, self.ties_detected)


def adjacent_swap_delta(v_i, c_i, v_j, c_j, R=0) -> Fraction:
    """S(i then j) - S(j then i) for neighbours i, j with consumption ``R`` behind them.

    Positive means i should drop out before j.
    """
    v_i, c_i, v_j, c_j, R = (to_rational(x) for x in (v_i, c_i, v_j, c_j, R))
    if c_i <= 0 or c_j <= 0:
        raise NonPositiveRate(f"consumption rates must be positive (got {c_i}, {c_j})")
    if R < 0:
        raise NegativeSuffix(f"suffix consumption must be >= 0 (got {R})")
    both = c_i + c_j + R
    return v_j * c_i / ((c_j + R) * both) - v_i * c_j / ((c_i + R) * both)


def is_sequential_feasible(inst: Instance, perm) -> bool | SwapWitness:
    """``True`` if no neighbour exchange strictly improves ``perm``, else the
    first improving exchange as a :class:`SwapWitness` (1-based position)."""
    order = list(check_permutation(inst, perm))
    base = evaluate(inst, order).total
    for k in range(len(order) - 1):
        order[k], order[k + 1] = order[k + 1], order[k]
        swapped = evaluate(inst, order).total
        order[k], order[k + 1] = order[k + 1], order[k]
        if swapped > base:
            return SwapWitness(k + 1, base, swapped)
    return True


@dataclass
class _SubtreeResult:
    root: int
    leaves: int = 0
    nodes: int = 0
    ties: bool = False
    best: Optional[Fraction] = None  # integer-scale objective
    argmax: list = field(default_factory=list)


class _Sieve:
    """Backward depth-first sieve over one instance's integer view."""

    def __init__(self, v, c, *, track_value, prune=False, deadline=None, visit=None):
        self.v = v
        self.c = c
        self.n = len(v)
        self.track_value = track_value or visit is not None
        self.prune = prune and track_value
        self.visit = visit
        self.deadline = deadline

    def run(self, root: int) -> _SubtreeResult:
        """Explore every order whose last (farthest) airplane is ``root`` (0-based)."""
        v, c, n = self.v, self.c, self.n
        res = _SubtreeResult(root, nodes=1)
        path = [root]
        used = [False] * n
        used[root] = True
        deadline = self.deadline
        prune = self.prune
        wants_order = self.track_value

        def leaf(partial):
            res.leaves += 1
            if not wants_order:
                return
            if partial is None:
                # total consumption behind each placed airplane, back to front
                partial, acc = Fraction(0), 0
                for i in path:
                    acc += c[i]
                    partial += Fraction(v[i], acc)
            order = tuple(i + 1 for i in reversed(path))
            if self.visit is not None:
                self.visit(order, partial)
            if res.best is None or partial > res.best:
                res.best = partial
                res.argmax = [order]
            elif partial == res.best:
                res.argmax.append(order)

        def bound(partial, total_c):
            rest = [i for i in range(n) if not used[i]]
            fuel = sum(v[i] for i in rest)
            return partial + Fraction(fuel, total_c + min(c[i] for i in rest))

        def extend(y, behind, total_c, partial, depth):
            # y: current front; behind: consumption strictly behind y; total_c = behind + c[y]
            if depth == n:
                leaf(partial)
                return
            vy, cy = v[y], c[y]
            lhs_y = cy * (cy + behind)
            for x in range(n):
                if used[x]:
                    continue
                cx = c[x]
                sign = vy * cx * (cx + behind) - v[x] * lhs_y
                if sign < 0:
                    continue
                if sign == 0:
                    res.ties = True
                res.nodes += 1
                if deadline is not None and not res.nodes % _DEADLINE_STRIDE:
                    if time.time() > deadline:
                        raise SearchTimeout("search deadline exceeded", res.nodes)
                new_total = total_c + cx
                used[x] = True
                path.append(x)
                if prune:
                    p2 = partial + Fraction(v[x], new_total)
                    if depth + 1 == n or res.best is None or not bound(p2, new_total) < res.best:
                        extend(x, total_c, new_total, p2, depth + 1)
                else:
                    extend(x, total_c, new_total, None, depth + 1)
                path.pop()
                used[x] = False

        extend(root, 0, c[root], Fraction(v[root], c[root]) if prune else None, 1)
        return res


def _run_root(v, c, root, track_value, prune, deadline) -> _SubtreeResult:
    return _Sieve(v, c, track_value=track_value, prune=prune, deadline=deadline).run(root)


def _explore(inst: Instance, *, track_value, prune=False, workers=1, deadline=None):
    if inst.n == 0:
        raise EmptyInstance("instance has no airplanes")
    view = inst.integer_view
    roots = range(inst.n)
    if workers <= 1 or inst.n == 1:
        return [_run_root(view.v, view.c, r, track_value, prune, deadline) for r in roots]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_root, view.v, view.c, r, track_value, prune, deadline)
                   for r in roots]
        return [f.result() for f in futures]


def _deadline(timeout):
    return None if timeout is None else time.time() + timeout


def enumerate_sequential_feasible(
    inst: Instance, visit: Callable[[tuple, Fraction], None]
) -> int:
    """Call ``visit(order, total)`` once per swap-stable permutation; return Q_n.

    Orders are produced by choosing the farthest airplane first, trying
    candidates in ascending id at every level.
    """
    factor = inst.integer_view.factor

    def scaled_visit(order, value):
        visit(order, value * factor)

    view = inst.integer_view
    count = 0
    for root in range(inst.n):
        sieve = _Sieve(view.v, view.c, track_value=True, visit=scaled_visit)
        count += sieve.run(root).leaves
    return count


def solve(inst: Instance, *, workers: int = 1, prune: bool = False,
          timeout: float | None = None) -> SolveReport:
    """Exact optimum by maximising over the swap-stable set.

    With ``prune=True`` subtrees whose admissible bound falls strictly below
    the incumbent of the same top-level branch are skipped; ``q_n`` is then
    reported as ``None``.  Incumbents are kept per top-level branch so the
    result does not depend on ``workers``.
    """
    start = time.perf_counter()
    parts = _explore(inst, track_value=True, prune=prune, workers=workers,
                     deadline=_deadline(timeout))
    best = max(p.best for p in parts if p.best is not None)
    argmax = [o for p in parts if p.best == best for o in p.argmax]
    return SolveReport(
        optimum=best * inst.integer_view.factor,
        optimal_perms=argmax,
        q_n=None if prune else sum(p.leaves for p in parts),
        nodes_expanded=sum(p.nodes for p in parts),
        elapsed=time.perf_counter() - start,
        ties_detected=any(p.ties for p in parts),
    )


@dataclass
class CountStats:
    q_n: int
    nodes: int
    ties_detected: bool


def count_stats(inst: Instance, *, workers: int = 1, timeout: float | None = None) -> CountStats:
    parts = _explore(inst, track_value=False, workers=workers, deadline=_deadline(timeout))
    return CountStats(sum(p.leaves for p in parts), sum(p.nodes for p in parts),
                      any(p.ties for p in parts))


def count_qn(inst: Instance, *, workers: int = 1, timeout: float | None = None) -> int:
    """Q_n by a count-only traversal (no pruning, no permutations kept)."""
    return count_stats(inst, workers=workers, timeout=timeout).q_n
