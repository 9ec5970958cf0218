"""Brute-force ground truth over all n! drop-out orders.

The oracle never prunes.  Orders are walked with the Steinhaus-Johnson-Trotter
scheme, so consecutive orders differ by one exchange of neighbours and both
the objective and the per-pair stability flags can be patched locally.
``mode="full"`` re-evaluates every order from scratch instead and is kept as
a cross-check on the incremental bookkeeping.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .enumeration import is_sequential_feasible
from .errors import EmptyInstance, SearchTimeout, SizeCapExceeded
from .model import Instance, evaluate

DEFAULT_CAP = 10


@dataclass
class OracleReport:
    optimum: Fraction
    argmax_perms: list[tuple[int, ...]]
    permutations_evaluated: int
    stable_count: int


def sjt_swaps(m: int):
    """Yield the positions k of the neighbour exchanges (k, k+1) that walk
    through all m! orders of ``range(m)``, starting from the identity."""
    perm = list(range(m))
    pos = list(range(m))
    direction = [-1] * m
    while True:
        mobile = -1
        for e in range(m - 1, -1, -1):
            j = pos[e] + direction[e]
            if 0 <= j < m and perm[j] < e:
                mobile = e
                break
        if mobile < 0:
            return
        i = pos[mobile]
        j = i + direction[mobile]
        other = perm[j]
        perm[i], perm[j] = other, mobile
        pos[mobile], pos[other] = j, i
        for e in range(mobile + 1, m):
            direction[e] = -direction[e]
        yield min(i, j)


def _pair_is_stable(v, c, x, y, behind, total):
    # x directly before y, ``behind`` consumed after y, ``total`` = c[x] + c[y] + behind.
    # kept:    v[x]/total + v[y]/(c[y]+behind)
    # swapped: v[y]/total + v[x]/(c[x]+behind)
    px = c[x] + behind
    py = c[y] + behind
    kept = v[x] * px * py + v[y] * total * px
    swapped = v[y] * px * py + v[x] * total * py
    return kept >= swapped


def _scan_with_last(v, c, last, deadline):
    """All orders whose final (farthest) airplane is ``last``; incremental mode."""
    n = len(v)
    perm = [i for i in range(n) if i != last] + [last]
    suf = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suf[k] = suf[k + 1] + c[perm[k]]
    s = sum((Fraction(v[perm[k]], suf[k]) for k in range(n)), Fraction(0))
    stable = [_pair_is_stable(v, c, perm[k], perm[k + 1], suf[k + 2], suf[k])
              for k in range(n - 1)]
    unstable = stable.count(False)

    evaluated = 1
    n_stable = 1 if unstable == 0 else 0
    best, argmax = s, [tuple(perm)]

    for k in sjt_swaps(n - 1):
        a, b = perm[k], perm[k + 1]
        behind = suf[k + 2]
        total = suf[k]
        pa, pb = c[a] + behind, c[b] + behind
        num = (v[b] - v[a]) * pa * pb + v[a] * total * pb - v[b] * total * pa
        s += Fraction(num, total * pa * pb)
        perm[k], perm[k + 1] = b, a
        suf[k + 1] = pa
        for j in (k - 1, k, k + 1):
            if 0 <= j < n - 1:
                flag = _pair_is_stable(v, c, perm[j], perm[j + 1], suf[j + 2], suf[j])
                if flag != stable[j]:
                    unstable += -1 if flag else 1
                    stable[j] = flag
        evaluated += 1
        if unstable == 0:
            n_stable += 1
        if s > best:
            best, argmax = s, [tuple(perm)]
        elif s == best:
            argmax.append(tuple(perm))
        if deadline is not None and evaluated % 4096 == 0 and time.time() > deadline:
            raise SearchTimeout("oracle deadline exceeded", evaluated)
    return evaluated, n_stable, best, argmax


def _check(inst: Instance, cap: int):
    if inst.n == 0:
        raise EmptyInstance("instance has no airplanes")
    if inst.n > cap:
        raise SizeCapExceeded(f"n={inst.n} exceeds oracle cap {cap} ({inst.n}! orders)")


def _solve_incremental(inst, workers, deadline):
    view = inst.integer_view
    lasts = range(inst.n)
    if workers <= 1 or inst.n == 1:
        parts = [_scan_with_last(view.v, view.c, r, deadline) for r in lasts]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_scan_with_last, view.v, view.c, r, deadline) for r in lasts]
            parts = [f.result() for f in futures]
    best = max(p[2] for p in parts)
    argmax = sorted(tuple(i + 1 for i in o) for p in parts if p[2] == best for o in p[3])
    return OracleReport(
        optimum=best * view.factor,
        argmax_perms=argmax,
        permutations_evaluated=sum(p[0] for p in parts),
        stable_count=sum(p[1] for p in parts),
    )


def _solve_full(inst, deadline):
    best, argmax, evaluated, n_stable = None, [], 0, 0
    for order in itertools.permutations(range(1, inst.n + 1)):
        total = evaluate(inst, order).total
        evaluated += 1
        if is_sequential_feasible(inst, order) is True:
            n_stable += 1
        if best is None or total > best:
            best, argmax = total, [order]
        elif total == best:
            argmax.append(order)
        if deadline is not None and evaluated % 512 == 0 and time.time() > deadline:
            raise SearchTimeout("oracle deadline exceeded", evaluated)
    return OracleReport(best, sorted(argmax), evaluated, n_stable)


def brute_force_solve(inst: Instance, *, cap: int = DEFAULT_CAP, mode: str = "incremental",
                      workers: int = 1, timeout: float | None = None) -> OracleReport:
    """Exact optimum, every maximiser and the swap-stable count, by exhaustion."""
    _check(inst, cap)
    deadline = None if timeout is None else time.time() + timeout
    if mode == "incremental":
        report = _solve_incremental(inst, workers, deadline)
    elif mode == "full":
        report = _solve_full(inst, deadline)
    else:
        raise ValueError(f"unknown oracle mode {mode!r}")
    assert report.permutations_evaluated == math.factorial(inst.n)
    return report


def brute_force_count_stable(inst: Instance, *, cap: int = DEFAULT_CAP,
                             mode: str = "incremental", workers: int = 1,
                             timeout: float | None = None) -> int:
    return brute_force_solve(inst, cap=cap, mode=mode, workers=workers,
                             timeout=timeout).stable_count
