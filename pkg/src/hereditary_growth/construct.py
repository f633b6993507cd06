"""Turn an admissible growth target into per-length parameters of a
hereditary language whose growth function tracks the target's ``F``.

For lengths ``n <= N`` the language keeps every word with at most one y.
Past ``N`` each length n gets a gap parameter ``d_n`` and a prefix length
``e_n``; the length-n words are ``T(d_n, n) ∪ x^{e_n} T(d_n - 1, n - e_n)``
and ``a(n)`` counts them.  Both parameters are the smallest values that keep
``A(n) = a(0) + ... + a(n)`` at or below ``F(n)``.
"""

import csv
import logging
import math
import os
from dataclasses import dataclass, field

from ._validation import InvalidTarget, check_int, dec, parse_int
from .targets import validate
from .tseries import count_T, count_union

__all__ = [
    "ConstructionConfig",
    "TraceRow",
    "ConstructionTrace",
    "Violation",
    "DominationResult",
    "SearchExhausted",
    "CorruptCheckpoint",
    "WindowEmpty",
    "ConstructionError",
    "run",
    "resume",
    "check_trace",
    "empirical_domination",
    "save_checkpoint",
    "load_checkpoint",
    "plot_rows",
    "TRACE_HEADER",
    "PAPER_N",
]

logger = logging.getLogger(__name__)

TRACE_HEADER = ("n", "d", "e", "in_x", "in_y", "a", "A", "F")

# cutoff at which every estimate the asymptotic argument relies on is in force
PAPER_N = 1 << 19


class SearchExhausted(RuntimeError):
    """No admissible d or e exists at some length."""

    def __init__(self, n, what, budget):
        super().__init__(f"no admissible {what} at n={n} (budget F(n) - A(n-1) = {budget})")
        self.n = n
        self.what = what
        self.budget = budget


class ConstructionError(RuntimeError):
    """A step produced a row breaking an invariant the construction guarantees."""


class CorruptCheckpoint(ValueError):
    pass


class WindowEmpty(ValueError):
    pass


@dataclass(frozen=True)
class ConstructionConfig:
    N: int = 8
    n_max: int = 256
    checkpoint_path: str = None
    checkpoint_every: int = 256
    search: str = "binary"

    def __post_init__(self):
        check_int(self.N, "N", minimum=1)
        check_int(self.n_max, "n_max", minimum=self.N)
        check_int(self.checkpoint_every, "checkpoint_every", minimum=1)
        if self.search not in ("binary", "linear"):
            raise ValueError(f"search must be 'binary' or 'linear', got {self.search!r}")

    def describe(self):
        return f"N={self.N}"


@dataclass(frozen=True)
class TraceRow:
    n: int
    d: int
    e: int
    in_x: bool
    in_y: bool
    a: int
    A: int
    F: int

    def as_csv(self):
        return (
            f"{self.n},{self.d},{self.e},{int(self.in_x)},{int(self.in_y)},"
            f"{dec(self.a)},{dec(self.A)},{dec(self.F)}"
        )


@dataclass
class ConstructionTrace:
    rows: list
    N: int
    origin: str = ""

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, n):
        return self.rows[n]

    @property
    def n_max(self):
        return len(self.rows) - 1

    @property
    def d(self):
        return [r.d for r in self.rows]

    @property
    def e(self):
        return [r.e for r in self.rows]

    @property
    def a(self):
        return [r.a for r in self.rows]

    @property
    def A(self):
        return [r.A for r in self.rows]

    @property
    def F(self):
        return [r.F for r in self.rows]

    def to_csv(self, path):
        _atomic_write(path, _trace_text(self.rows))

    @classmethod
    def from_csv(cls, path, N=None):
        rows = _read_rows(path)
        if N is None:
            # the cutoff is the last n of the initial segment d = e = n, a = n+1
            N = 0
            for r in rows:
                if r.d == r.n and r.e == r.n and r.a == r.n + 1 and not r.in_x:
                    N = r.n
                else:
                    break
        return cls(rows, N, origin=f"file({path})")


def _trace_text(rows):
    lines = [",".join(TRACE_HEADER)]
    lines.extend(r.as_csv() for r in rows)
    return "\n".join(lines) + "\n"


def _atomic_write(path, text):
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _read_rows(path):
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return rows
        if tuple(h.strip() for h in header) != TRACE_HEADER:
            raise ValueError(f"{path}: expected header {','.join(TRACE_HEADER)}, got {header}")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(TRACE_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(TRACE_HEADER)} fields")
            n, d, e, x, y, a, A, F = (parse_int(v) for v in rec)
            if x not in (0, 1) or y not in (0, 1):
                raise ValueError(f"{path}:{lineno}: in_x/in_y must be 0 or 1")
            rows.append(TraceRow(n, d, e, bool(x), bool(y), a, A, F))
    return rows


def _smallest(lo, hi, admissible, linear=False):
    """Least ``v`` in ``[lo, hi]`` with ``admissible(v)``, or None.

    ``admissible`` must be monotone (false then true) for the binary search.
    """
    if lo > hi:
        return None
    if linear:
        for v in range(lo, hi + 1):
            if admissible(v):
                return v
        return None
    if not admissible(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if admissible(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _initial_rows(target, N):
    rows = []
    A = 0
    for n in range(N + 1):
        A += n + 1
        rows.append(TraceRow(n, n, n, False, False, n + 1, A, target.F(n)))
    return rows


def _next_row(prev, n, F_n, linear):
    budget = F_n - prev.A
    d = _smallest(prev.d, n, lambda d: count_T(d, n) <= budget, linear)
    if d is None:
        raise SearchExhausted(n, "d", budget)
    in_x = d > prev.d
    if in_x:
        e = _smallest(0, n, lambda e: count_union(d, e, n) <= budget, linear)
    else:
        e = _smallest(prev.e + 1, n, lambda e: count_union(d, e, n) <= budget, linear)
    if e is None:
        raise SearchExhausted(n, "e", budget)
    if in_x and e < 1:
        raise ConstructionError(f"n={n} entered X with e_n = 0")
    in_y = in_x or e > prev.e + 1
    a = count_union(d, e, n)
    if a < n + 1:
        raise ConstructionError(f"a({n}) = {a} < {n + 1}")
    return TraceRow(n, d, e, in_x, in_y, a, prev.A + a, F_n)


def _check_runnable(target, config):
    if target.F(0) != 1 or target.F(1) != 3:
        raise InvalidTarget(
            f"{target.origin}: construction needs F(0)=1 and F(1)=3, got "
            f"F(0)={target.F(0)}, F(1)={target.F(1)}; normalize the target first"
        )
    # condition 1 only for pairs inside 0..n_max; condition 2 on all of it
    report = validate(target, config.n_max // 2)
    if not report.ok:
        raise InvalidTarget(f"{target.origin} is not admissible: {report.summary()}")
    for n in range(config.n_max // 2 + 1, config.n_max + 1):
        if target.f(n) < n + 1:
            raise InvalidTarget(f"{target.origin}: f({n}) < {n + 1}")


def run(target, config, progress=None):
    """Run the construction on ``0..config.n_max``.

    With ``config.checkpoint_path`` set, rows are persisted every
    ``checkpoint_every`` steps (and on interruption) and an existing
    checkpoint for the same target is resumed.  ``progress(row)`` is called
    after each committed row.
    """
    _check_runnable(target, config)
    rows = None
    if config.checkpoint_path and os.path.exists(config.checkpoint_path):
        rows = load_checkpoint(config.checkpoint_path, target, config)
        if rows:
            logger.info("resuming from %s at n=%d", config.checkpoint_path, rows[-1].n)
    if not rows:
        rows = _initial_rows(target, config.N)
    rows = rows[: config.n_max + 1]
    linear = config.search == "linear"
    unsaved = 0
    try:
        for n in range(len(rows), config.n_max + 1):
            rows.append(_next_row(rows[-1], n, target.F(n), linear))
            unsaved += 1
            if config.checkpoint_path and unsaved >= config.checkpoint_every:
                save_checkpoint(rows, config.checkpoint_path, target, config)
                unsaved = 0
            if progress is not None:
                progress(rows[-1])
    finally:
        if config.checkpoint_path:
            save_checkpoint(rows, config.checkpoint_path, target, config)
    return ConstructionTrace(rows, config.N, origin=target.origin)


def resume(target, config):
    """Continue from ``config.checkpoint_path``; same as ``run`` with a checkpoint."""
    if not config.checkpoint_path:
        raise ValueError("resume needs config.checkpoint_path")
    return run(target, config)


def _sidecar(path):
    return f"{path}.sidecar"


def _sidecar_line(rows, target, config):
    return f"{target.sha256(len(rows) - 1)},{config.describe()}\n"


def save_checkpoint(rows, path, target, config):
    """Write the trace file and its ``target_sha,config`` sidecar."""
    _atomic_write(path, _trace_text(rows))
    _atomic_write(_sidecar(path), _sidecar_line(rows, target, config))


def load_checkpoint(path, target, config):
    """Rows from a checkpoint, after verifying it belongs to ``target``/``config``.

    An empty or header-only file yields no rows.  Any mismatch raises
    ``CorruptCheckpoint``.
    """
    try:
        rows = _read_rows(path)
    except ValueError as exc:
        raise CorruptCheckpoint(str(exc)) from exc
    if not rows:
        return []
    side = _sidecar(path)
    if not os.path.exists(side):
        raise CorruptCheckpoint(f"{path}: missing sidecar {side}")
    with open(side) as fh:
        line = fh.read().strip()
    expected = _sidecar_line(rows, target, config).strip()
    sha, _, conf = line.partition(",")
    if sha != expected.partition(",")[0]:
        raise CorruptCheckpoint(f"{path}: checkpoint was written for a different target")
    if conf != config.describe():
        raise CorruptCheckpoint(f"{path}: checkpoint config {conf!r} != {config.describe()!r}")
    for i, r in enumerate(rows):
        if r.n != i:
            raise CorruptCheckpoint(f"{path}: rows not contiguous from 0 (row {i} has n={r.n})")
    if len(rows) <= config.N:
        raise CorruptCheckpoint(f"{path}: checkpoint stops inside the initial segment")
    problems = check_trace(ConstructionTrace(rows, config.N), target)
    if problems:
        raise CorruptCheckpoint(f"{path}: {len(problems)} invariant violations, first: {problems[0]}")
    return rows


@dataclass(frozen=True)
class Violation:
    n: int
    kind: str
    detail: str = ""

    def __str__(self):
        return f"n={self.n} {self.kind}: {self.detail}"


def check_trace(trace, target=None):
    """Every per-row invariant and displayed inequality the construction promises.

    Checks, for rows past the cutoff ``N``:

    * ``d`` weakly increasing, ``d_n <= n``, ``in_x`` iff ``d`` jumped;
    * ``e_n`` in ``[0, n]``, ``e_n >= 1`` on X, off X ``d`` is unchanged and
      ``e`` advances by at least one; ``in_y`` as defined from X and e-jumps;
    * ``a(n) >= n + 1``, ``a(n)`` equals the union count, ``A`` accumulates ``a``
      and ``A(n) <= F(n)``;
    * on X: ``f(p) < #T(d_p - 1, p)``;
    * off X with ``e_p > e_{p-1} + 1``: the union with ``e_p - 1`` overshoots ``F(p)``;
    * on Y: ``F(n) <= A(n) + #T(d_n - 1, n - e_n - d_n + 1)``.

    Rows ``0..N`` must equal the fixed initial segment.  If ``target`` is given
    the ``F`` column is compared against it.  Returns a list of ``Violation``.
    """
    out = []

    def bad(n, kind, detail=""):
        out.append(Violation(n, kind, detail))

    N = trace.N
    rows = trace.rows
    A_prev = 0
    for i, r in enumerate(rows):
        n = r.n
        if n != i:
            bad(i, "contiguity", f"row {i} has n={n}")
            break
        if target is not None and r.F != target.F(n):
            bad(n, "F_match", f"F={r.F} but target gives {target.F(n)}")
        if r.a < n + 1:
            bad(n, "a_lower", f"a={r.a} < {n + 1}")
        if r.A != A_prev + r.a:
            bad(n, "A_sum", f"A={r.A} != A(n-1)+a = {A_prev + r.a}")
        if r.A > r.F:
            bad(n, "A_le_F", f"A={r.A} > F={r.F}")
        if r.d > n:
            bad(n, "d_le_n", f"d={r.d}")
        if not 0 <= r.e <= n:
            bad(n, "e_range", f"e={r.e}")
        A_prev = r.A
        if n <= N:
            if (r.d, r.e, r.a, r.in_x, r.in_y) != (n, n, n + 1, False, False):
                bad(n, "init", f"row {r.as_csv()} is not the initial segment")
            continue
        prev = rows[i - 1]
        if r.d < prev.d:
            bad(n, "d_monotone", f"d={r.d} < d(n-1)={prev.d}")
        if r.in_x != (r.d > prev.d):
            bad(n, "x_flag", f"in_x={r.in_x} but d {prev.d}->{r.d}")
        if r.in_y != (r.in_x or r.e > prev.e + 1):
            bad(n, "y_flag", f"in_y={r.in_y}")
        if r.in_x and r.e < 1:
            bad(n, "e_pos_on_X", "e=0 on X")
        if not r.in_x and r.e < prev.e + 1:
            bad(n, "e_step", f"e={r.e} <= e(n-1)={prev.e}")
        if 0 <= r.e <= n and r.d >= 0 and r.a != count_union(r.d, r.e, n):
            bad(n, "a_count", f"a={r.a} != union count {count_union(r.d, r.e, n)}")
        if r.in_x:
            f_n = r.F - prev.F
            t = count_T(r.d - 1, n)
            if not f_n < t:
                bad(n, "pinX", f"f(p)={f_n} >= #T(d-1,p)={t}")
        elif r.e > prev.e + 1:
            over = prev.A + count_union(r.d, r.e - 1, n)
            if not over > r.F:
                bad(n, "Xplus", f"A(p-1)+union(e-1)={over} <= F(p)={r.F}")
        if r.in_y:
            rhs = r.A + count_T(r.d - 1, n - r.e - r.d + 1)
            if r.F > rhs:
                bad(n, "AF", f"F={r.F} > A+#T={rhs}")
    return out


@dataclass
class DominationResult:
    C: int
    window: tuple
    margins: list = field(default_factory=list)  # (n, A(Cn) - F(n))
    tried: list = field(default_factory=list)  # (C, window, first failing n or None)

    def summary(self):
        if self.C is None:
            return "no candidate C passed; " + "; ".join(
                f"C={c} window={w[0]}..{w[1]} fails at n={fail}" for c, w, fail in self.tried
            )
        lo, hi = self.window
        least = min(m for _, m in self.margins)
        return f"C={self.C} window={lo}..{hi} min_margin={least}"


def empirical_domination(trace, target=None, candidates=None):
    """Least ``C`` among ``candidates`` with ``F(n) <= A(C n)`` on ``[N+1, n_max // C]``.

    Default candidates are ``1, 2, 4, ..., 2**16``.  Candidates whose window is
    empty are skipped; if all are empty ``WindowEmpty`` is raised.  ``C`` is
    None in the result when every nonempty window fails.
    """
    if candidates is None:
        candidates = [1 << k for k in range(17)]
    A = trace.A
    F = trace.F if target is None else target.cumulative(trace.n_max)
    lo = trace.N + 1
    tried = []
    for C in sorted(candidates):
        hi = trace.n_max // C
        if hi < lo:
            continue
        failing = next((n for n in range(lo, hi + 1) if F[n] > A[C * n]), None)
        tried.append((C, (lo, hi), failing))
        if failing is None:
            margins = [(n, A[C * n] - F[n]) for n in range(lo, hi + 1)]
            return DominationResult(C, (lo, hi), margins, tried)
    if not tried:
        raise WindowEmpty(f"every candidate window [N+1, n_max/C] is empty (N={trace.N}, n_max={trace.n_max})")
    return DominationResult(None, None, [], tried)


def plot_rows(trace, target=None):
    """``(n, A, F, ln F - ln A)`` per row; the log ratio is for display only."""
    out = []
    for r in trace.rows:
        F = r.F if target is None else target.F(r.n)
        out.append((r.n, r.A, F, math.log(F) - math.log(r.A)))
    return out
