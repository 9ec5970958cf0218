"""Instance generators, Q_n sweeps, bound checks and growth summaries."""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .enumeration import count_stats, solve
from .errors import GenerationFailed, InsufficientData, InvalidParam, SearchTimeout
from .model import Instance, Kind, make_instance, to_rational

CSV_HEADER = ["family", "n", "seed", "qn", "bound_2exp", "optimum", "nodes", "ties",
              "elapsed_micros"]
DEFAULT_ROW_TIMEOUT = 60.0


class Family(enum.Enum):
    RANDOM_GENERAL = "random"
    THEOREM2_CANONICAL = "canonical"


@dataclass(frozen=True)
class GeneratorSpec:
    family: Family
    n: int
    seed: int = 0
    M: Fraction = Fraction(10)
    value_range: tuple[int, int] = (100, 10)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParam(f"n must be >= 1 (got {self.n})")
        if to_rational(self.M) <= 0:
            raise InvalidParam(f"M must be positive (got {self.M})")
        if min(self.value_range) < 1:
            raise InvalidParam(f"value_range bounds must be positive (got {self.value_range})")


def bound_2exp(n: int) -> int:
    return 2 ** (n - 2) if n >= 2 else 1


def gen_random(spec: GeneratorSpec, *, max_tries: int = 1000) -> Instance:
    """Random instance whose v/c and v/c^2 values are pairwise distinct.

    Each v and c is ``randint(1, num_max) / randint(1, den_max)`` from a
    generator seeded with ``spec.seed``.
    """
    num_max, den_max = spec.value_range
    rng = random.Random(spec.seed)

    def draw():
        return Fraction(rng.randint(1, num_max), rng.randint(1, den_max))

    for _ in range(max_tries):
        values = [(draw(), draw()) for _ in range(spec.n)]
        ratios = {v / c for v, c in values}
        ratios2 = {v / (c * c) for v, c in values}
        if len(ratios) == spec.n and len(ratios2) == spec.n:
            return make_instance(Kind.ARP, values, f"random n={spec.n} seed={spec.seed}")
    raise GenerationFailed(
        f"no distinct-ratio instance after {max_tries} draws (n={spec.n}, range={spec.value_range})"
    )


def gen_theorem2_family(n: int, M) -> Instance:
    """c_i = i and v_i = M*i^2/(i+1).

    Then v_i/c_i = M*i/(i+1) rises towards M and v_i/c_i^2 = M/(i+1) falls.
    """
    if n < 1:
        raise InvalidParam(f"n must be >= 1 (got {n})")
    M = to_rational(M)
    if M <= 0:
        raise InvalidParam(f"M must be positive (got {M})")
    values = [(M * i * i / (i + 1), Fraction(i)) for i in range(1, n + 1)]
    return make_instance(Kind.ARP, values, f"canonical n={n} M={M}")


@dataclass(frozen=True)
class PreconditionCheck:
    ok: bool
    reason: Optional[str] = None

    def __bool__(self):
        return self.ok


def validate_theorem2_preconditions(inst: Instance, M) -> PreconditionCheck:
    """v/c^2 strictly decreasing, v/c strictly increasing, last v/c <= M."""
    M = to_rational(M)
    per_c = [a.v / a.c for a in inst.items]
    per_c2 = [a.v / (a.c * a.c) for a in inst.items]
    for i in range(inst.n - 1):
        if not per_c2[i] > per_c2[i + 1]:
            return PreconditionCheck(False, f"v/c^2 not decreasing at {i + 1}->{i + 2}")
    for i in range(inst.n - 1):
        if not per_c[i] < per_c[i + 1]:
            return PreconditionCheck(False, f"v/c not increasing at {i + 1}->{i + 2}")
    if per_c[-1] > M:
        return PreconditionCheck(False, f"v_n/c_n = {per_c[-1]} exceeds M = {M}")
    return PreconditionCheck(True)


def row_seed(base: int, n: int, rep: int) -> int:
    """Deterministic 64-bit seed for sweep row (n, rep)."""
    digest = hashlib.blake2b(f"{base}:{n}:{rep}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def generate(spec: GeneratorSpec) -> Instance:
    if spec.family is Family.RANDOM_GENERAL:
        return gen_random(spec)
    return gen_theorem2_family(spec.n, spec.M)


@dataclass
class SweepRow:
    family: str
    n: int
    seed: int
    q_n: Optional[int]
    bound_2exp: int
    optimum: Optional[Fraction]
    nodes: int
    ties_detected: bool
    elapsed_micros: int
    timed_out: bool = False

    def key(self) -> tuple:
        """Row content minus wall-clock time."""
        return (self.family, self.n, self.seed, self.q_n, self.bound_2exp, self.optimum,
                self.nodes, self.ties_detected, self.timed_out)

    @property
    def violates_bound(self) -> bool:
        return self.q_n is not None and self.n >= 2 and self.q_n > self.bound_2exp


def run_row(spec: GeneratorSpec, timeout: float | None = DEFAULT_ROW_TIMEOUT) -> SweepRow:
    inst = generate(spec)
    start = time.perf_counter()
    try:
        stats = count_stats(inst, timeout=timeout)
        remaining = None if timeout is None else max(timeout - (time.perf_counter() - start), 0.0)
        report = solve(inst, timeout=remaining)
    except SearchTimeout as exc:
        return SweepRow(spec.family.value, spec.n, spec.seed, None, bound_2exp(spec.n), None,
                        exc.nodes, False, int((time.perf_counter() - start) * 1e6), True)
    if report.q_n != stats.q_n or report.nodes_expanded != stats.nodes:
        raise RuntimeError(f"solve and count disagree on {inst.label}")
    return SweepRow(
        family=spec.family.value,
        n=spec.n,
        seed=spec.seed,
        q_n=stats.q_n,
        bound_2exp=bound_2exp(spec.n),
        optimum=report.optimum,
        nodes=stats.nodes,
        ties_detected=stats.ties_detected,
        elapsed_micros=int((time.perf_counter() - start) * 1e6),
    )


def qn_sweep(template: GeneratorSpec, n_from: int, n_to: int, reps: int = 1, *,
             workers: int = 1, timeout: float | None = DEFAULT_ROW_TIMEOUT) -> list[SweepRow]:
    """One row per (n, rep), ordered by (n, rep) whatever the completion order.

    Random rows use ``row_seed(template.seed, n, rep)``; canonical rows are
    seed-independent and keep the template seed.
    """
    if not 1 <= n_from <= n_to:
        raise InvalidParam(f"need 1 <= n_from <= n_to (got {n_from}, {n_to})")
    if reps < 1:
        raise InvalidParam(f"reps must be >= 1 (got {reps})")
    specs = []
    for n in range(n_from, n_to + 1):
        for rep in range(reps):
            seed = (row_seed(template.seed, n, rep)
                    if template.family is Family.RANDOM_GENERAL else template.seed)
            specs.append(replace(template, n=n, seed=seed))
    if workers <= 1:
        return [run_row(s, timeout) for s in specs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_row, specs, [timeout] * len(specs)))


def _fmt_optional(x) -> str:
    return "" if x is None else str(x)


def write_sweep_csv(rows: Iterable[SweepRow], fh) -> None:
    """Timed-out rows leave ``qn`` and ``optimum`` empty; ``nodes`` is partial."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([r.family, r.n, r.seed, _fmt_optional(r.q_n), r.bound_2exp,
                         _fmt_optional(r.optimum), r.nodes,
                         "true" if r.ties_detected else "false", r.elapsed_micros])


def sweep_csv_text(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    return buf.getvalue()


def read_sweep_csv(fh) -> list[SweepRow]:
    reader = csv.DictReader(fh)
    if reader.fieldnames != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        timed_out = rec["qn"] == ""
        rows.append(SweepRow(
            family=rec["family"],
            n=int(rec["n"]),
            seed=int(rec["seed"]),
            q_n=None if timed_out else int(rec["qn"]),
            bound_2exp=int(rec["bound_2exp"]),
            optimum=None if rec["optimum"] == "" else Fraction(rec["optimum"]),
            nodes=int(rec["nodes"]),
            ties_detected=rec["ties"] == "true",
            elapsed_micros=int(rec["elapsed_micros"]),
            timed_out=timed_out,
        ))
    return rows


@dataclass
class NStats:
    n: int
    rows: int
    max_qn: int
    bound_2exp: int
    bound_margin: int
    ratio_to_next: Optional[Fraction] = None  # max q at the next tested n / max q here
    log2_slope: Optional[float] = None


@dataclass
class RegimeSummary:
    per_n: list[NStats]
    inflection_candidate: Optional[int]
    bound_violation: bool
    violations: list[SweepRow] = field(default_factory=list)
    tie_rows: int = 0
    timed_out_rows: int = 0
    note: str = ("observational: growth of the largest Q_n per tested n; the inflection "
                 "candidate is where the ratio stays below 2, not a computed threshold")


def regime_report(rows: Sequence[SweepRow]) -> RegimeSummary:
    """Per-n growth statistics over completed rows.

    The inflection candidate is the smallest tested n from which every
    ratio ``max q(next n) / max q(n)`` stays below 2.
    """
    done = [r for r in rows if not r.timed_out]
    ns = sorted({r.n for r in done})
    if len(ns) < 2:
        raise InsufficientData("regime report needs completed rows for at least two values of n")
    per_n = []
    for n in ns:
        qs = [r.q_n for r in done if r.n == n]
        top = max(qs)
        per_n.append(NStats(n, len(qs), top, bound_2exp(n), bound_2exp(n) - top))
    for cur, nxt in zip(per_n, per_n[1:]):
        cur.ratio_to_next = Fraction(nxt.max_qn, cur.max_qn)
        cur.log2_slope = (math.log2(nxt.max_qn) - math.log2(cur.max_qn)) / (nxt.n - cur.n)

    candidate = None
    for s in reversed(per_n[:-1]):
        if s.ratio_to_next < 2:
            candidate = s.n
        else:
            break

    violations = [r for r in done if r.violates_bound]
    return RegimeSummary(
        per_n=per_n,
        inflection_candidate=candidate,
        bound_violation=bool(violations),
        violations=violations,
        tie_rows=sum(r.ties_detected for r in done),
        timed_out_rows=len(rows) - len(done),
    )


def format_regime(summary: RegimeSummary) -> str:
    lines = ["n rows max_qn 2^(n-2) margin ratio log2_slope"]
    for s in summary.per_n:
        ratio = "-" if s.ratio_to_next is None else str(s.ratio_to_next)
        slope = "-" if s.log2_slope is None else f"{s.log2_slope:.4f}"
        lines.append(f"{s.n} {s.rows} {s.max_qn} {s.bound_2exp} {s.bound_margin} {ratio} {slope}")
    lines.append(f"inflection_candidate {summary.inflection_candidate}")
    lines.append(f"bound_violation {'true' if summary.bound_violation else 'false'}")
    for r in summary.violations:
        lines.append(f"  violation n={r.n} seed={r.seed} qn={r.q_n} ties={r.ties_detected}")
    lines.append(f"tie_rows {summary.tie_rows} timed_out_rows {summary.timed_out_rows}")
    lines.append(f"# {summary.note}")
    return "\n".join(lines)
