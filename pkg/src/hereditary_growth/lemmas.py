"""Grid verification of the counting inequalities for ``#T(d, n)``.

Every check is oriented as ``lhs >= rhs``.  Fractional powers are removed by
raising both sides to a common integer power, so exact verdicts never touch
floating point.  In ``logfloat`` mode a cell is accepted on its float
log-margin only when that margin is at least ``escalation``; anything
closer is recomputed exactly.

Lemmas and their cells:

========  =========  =====================================================
lemma     cell       inequality
========  =========  =====================================================
3.2       (d, n)     ``n #T(d,2n) >= #T(d,n)^2`` for ``d < n``, ``n >= 2``
3.3       (d, n)     ``8 n^2 #T(d,2n)^3 >= #T(d,n)^6`` when ``#T(d,n)^3 <= n^4``
3.4       (d, n)     ``#T(d,N) >= #T(d-1,n)`` at the least N with ``d(N-2) >= (n-1)(d+1)``
3.5       (d, n)     ``#T(d,4n)^3 >= (4n)^4`` for ``d <= n-1``, ``n >= 512``
3.6       (d, n)     ``#T(d,64n) >= 512 n #T(d-1,n)^2``, claimed for ``n >= 2^19``
3.7       (d, n, t)  ``#T(d,64 2^t n) >= 512 2^t n #T(d-1,n)^(2^t)``, ``n >= 2^19``
remark    (p, j)     ``f(p)^(2^j) >= f(i)`` on the j-th dyadic segment
========  =========  =====================================================
"""

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ._validation import check_int
from .tseries import count_T, counter, log_count_T

__all__ = [
    "GridSpec",
    "CellResult",
    "LemmaReport",
    "verify_doubling",
    "verify_conditional_two_thirds",
    "verify_shift",
    "verify_base",
    "verify_512",
    "verify_tower",
    "verify_remark",
    "verify",
    "LEMMAS",
    "LARGE_N",
    "shift_threshold",
]

LARGE_N = 1 << 19

LEMMAS = ("3.2", "3.3", "3.4", "3.5", "3.6", "3.7", "remark")


@dataclass(frozen=True)
class GridSpec:
    """Cell coordinates for a lemma run; each axis is a tuple of ints."""

    d: tuple = ()
    n: tuple = ()
    t: tuple = (0,)
    p: tuple = ()
    j: tuple = ()
    mode: str = "exact"
    escalation: float = 1.0

    def __post_init__(self):
        if self.mode not in ("exact", "logfloat"):
            raise ValueError(f"mode must be 'exact' or 'logfloat', got {self.mode!r}")
        for axis in ("d", "n", "t", "p", "j"):
            values = tuple(int(v) for v in getattr(self, axis))
            object.__setattr__(self, axis, values)

    @classmethod
    def parse(cls, text, **kwargs):
        """Parse ``"d=0:63;n=2:1024:2,2048;t=0:3"``.

        Axes are separated by ``;``.  An axis value is a comma list whose
        items are ``a``, ``a:b`` or ``a:b:step`` with ``b`` inclusive.
        """
        axes = {}
        for part in filter(None, (p.strip() for p in text.split(";"))):
            key, sep, raw = part.partition("=")
            key = key.strip()
            if not sep or key not in ("d", "n", "t", "p", "j"):
                raise ValueError(f"bad grid axis {part!r}; expected d=, n=, t=, p= or j=")
            values = []
            for item in raw.split(","):
                bounds = [int(b) for b in item.split(":")]
                if len(bounds) == 1:
                    values.append(bounds[0])
                elif len(bounds) in (2, 3):
                    step = bounds[2] if len(bounds) == 3 else 1
                    if step < 1:
                        raise ValueError(f"grid step must be positive in {item!r}")
                    values.extend(range(bounds[0], bounds[1] + 1, step))
                else:
                    raise ValueError(f"bad grid range {item!r}")
            axes[key] = tuple(sorted(set(values)))
        return cls(**axes, **kwargs)

    def describe(self):
        parts = []
        for axis in ("d", "n", "t", "p", "j"):
            values = getattr(self, axis)
            if values:
                if len(values) > 6:
                    parts.append(f"{axis}={values[0]}..{values[-1]}({len(values)} values)")
                else:
                    parts.append(f"{axis}={','.join(map(str, values))}")
        return ";".join(parts) + f";mode={self.mode};escalation={self.escalation:g}"


@dataclass
class CellResult:
    lemma: str
    cell: str
    lhs: int
    rhs: int
    passed: bool
    log_margin: float
    status: str = "checked"  # checked | vacuous | exploratory
    escalated: bool = False


@dataclass
class LemmaReport:
    lemma: str
    grid: str = ""
    checked: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)
    vacuous: int = 0
    skipped: int = 0
    escalated: int = 0
    exploratory_checked: int = 0
    exploratory_failures: list = field(default_factory=list)
    min_log_margin: float = math.inf
    cells: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def add(self, result, keep=False):
        if result.status == "vacuous":
            self.vacuous += 1
        elif result.status == "exploratory":
            self.exploratory_checked += 1
            if not result.passed:
                self.exploratory_failures.append(result)
        else:
            self.checked += 1
            if result.passed:
                self.passed += 1
            else:
                self.failures.append(result)
            if result.log_margin is not None:
                self.min_log_margin = min(self.min_log_margin, result.log_margin)
        self.escalated += result.escalated
        if keep or (not result.passed and result.status != "vacuous"):
            self.cells.append(result)

    def merge(self, other):
        self.checked += other.checked
        self.passed += other.passed
        self.failures += other.failures
        self.vacuous += other.vacuous
        self.skipped += other.skipped
        self.escalated += other.escalated
        self.exploratory_checked += other.exploratory_checked
        self.exploratory_failures += other.exploratory_failures
        self.min_log_margin = min(self.min_log_margin, other.min_log_margin)
        self.cells += other.cells

    def summary(self):
        verdict = "PASS" if self.ok else "FAIL"
        text = (
            f"lemma {self.lemma}: {verdict} checked={self.checked} passed={self.passed} "
            f"failed={len(self.failures)} vacuous={self.vacuous} skipped={self.skipped} "
            f"escalated={self.escalated} min_log_margin={self.min_log_margin:.6g}"
        )
        if self.exploratory_checked:
            text += (
                f" exploratory={self.exploratory_checked}"
                f"(failed={len(self.exploratory_failures)}, below n={LARGE_N}, not lemma violations)"
            )
        return text


def _log(x):
    if x <= 0:
        return -math.inf
    return math.log(x)


def _cell(lemma, name, exact, logs, mode, escalation, status="checked"):
    """Evaluate one cell; ``exact()`` -> (lhs, rhs), ``logs()`` -> (ln lhs, ln rhs)."""
    if mode == "logfloat" and logs is not None:
        log_lhs, log_rhs = logs()
        margin = log_lhs - log_rhs
        if margin >= escalation:
            return CellResult(lemma, name, None, None, True, margin, status)
        lhs, rhs = exact()
        return CellResult(lemma, name, lhs, rhs, lhs >= rhs, _log(lhs) - _log(rhs), status, True)
    lhs, rhs = exact()
    return CellResult(lemma, name, lhs, rhs, lhs >= rhs, _log(lhs) - _log(rhs), status)


def _run_chunks(worker, chunks, lemma, grid, threads, keep):
    report = LemmaReport(lemma, grid.describe())
    if threads > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(worker, chunks, [grid] * len(chunks), [keep] * len(chunks)))
    else:
        parts = [worker(chunk, grid, keep) for chunk in chunks]
    for part in parts:
        report.merge(part)
    return report


def _doubling_chunk(d, grid, keep):
    report = LemmaReport("3.2")
    T = counter(d)
    for n in grid.n:
        if not (d < n and n >= 2 and d >= 0):
            report.skipped += 1
            continue
        report.add(
            _cell(
                "3.2", f"d={d};n={n}",
                lambda: (n * T(2 * n), T(n) ** 2),
                lambda: (math.log(n) + _log(T(2 * n)), 2 * _log(T(n))),
                grid.mode, grid.escalation,
            ),
            keep,
        )
    return report


def verify_doubling(grid, threads=1, keep=False):
    """``n #T(d, 2n) >= #T(d, n)^2`` on every cell with ``0 <= d < n``, ``n >= 2``."""
    report = _run_chunks(_doubling_chunk, list(grid.d), "3.2", grid, threads, keep)
    if report.skipped:
        report.notes.append(f"{report.skipped} cells outside 0 <= d < n, n >= 2 skipped")
    return report


def _two_thirds_chunk(d, grid, keep):
    report = LemmaReport("3.3")
    T = counter(d)
    for n in grid.n:
        if not (0 <= d < n and n >= 64):
            report.skipped += 1
            continue
        t_n = T(n)
        if t_n**3 > n**4:
            report.add(CellResult("3.3", f"d={d};n={n}", None, None, True, None, "vacuous"), keep)
            continue
        report.add(
            _cell(
                "3.3", f"d={d};n={n}",
                lambda: (8 * n * n * T(2 * n) ** 3, t_n**6),
                lambda: (math.log(8 * n * n) + 3 * _log(T(2 * n)), 6 * _log(t_n)),
                grid.mode, grid.escalation,
            ),
            keep,
        )
    return report


def verify_conditional_two_thirds(grid, threads=1, keep=False):
    """``#T(d,n)^2 <= 2 n^(2/3) #T(d,2n)`` wherever ``#T(d,n) <= n^(4/3)``,
    checked as ``#T(d,n)^6 <= 8 n^2 #T(d,2n)^3``; other cells are vacuous."""
    report = _run_chunks(_two_thirds_chunk, list(grid.d), "3.3", grid, threads, keep)
    if report.skipped:
        report.notes.append(f"{report.skipped} cells outside d < n, n >= 64 skipped")
    return report


def shift_threshold(d, n):
    """Least integer N with ``d (N - 2) >= (n - 1)(d + 1)``; for ``d = 0``, N = n."""
    if d == 0:
        return n
    return 2 + -((-(n - 1) * (d + 1)) // d)


def _shift_chunk(d, grid, keep):
    report = LemmaReport("3.4")
    T = counter(d)
    T_prev = counter(d - 1)
    for n in grid.n:
        if d < 0 or n < 0:
            report.skipped += 1
            continue
        N = shift_threshold(d, n)
        report.add(
            _cell(
                "3.4", f"d={d};n={n};N={N}",
                lambda: (T(N), T_prev(n)),
                lambda: (_log(T(N)), _log(T_prev(n))),
                grid.mode, grid.escalation,
            ),
            keep,
        )
    return report


def verify_shift(grid, threads=1, keep=False):
    """``#T(d, N) >= #T(d-1, n)`` at the exact threshold N (and ``N = n`` for d = 0)."""
    return _run_chunks(_shift_chunk, list(grid.d), "3.4", grid, threads, keep)


def _base_chunk(d, grid, keep):
    report = LemmaReport("3.5")
    T = counter(d)
    for n in grid.n:
        if not (0 <= d <= n - 1 and n >= 512):
            report.skipped += 1
            continue
        report.add(
            _cell(
                "3.5", f"d={d};n={n}",
                lambda: (T(4 * n) ** 3, (4 * n) ** 4),
                lambda: (3 * _log(T(4 * n)), 4 * math.log(4 * n)),
                grid.mode, grid.escalation,
            ),
            keep,
        )
    return report


def verify_base(grid, threads=1, keep=False):
    """``#T(d, 4n) >= (4n)^(4/3)`` for ``d <= n-1``, ``n >= 512``, as cubes."""
    report = _run_chunks(_base_chunk, list(grid.d), "3.5", grid, threads, keep)
    if report.skipped:
        report.notes.append(f"{report.skipped} cells outside d <= n-1, n >= 512 skipped")
    return report


def _tower_cell(lemma, d, n, t, grid):
    length = 64 * (1 << t) * n
    factor = 512 * (1 << t) * n
    status = "checked" if n >= LARGE_N else "exploratory"
    name = f"d={d};n={n}" + (f";t={t}" if lemma == "3.7" else "")
    return _cell(
        lemma, name,
        lambda: (count_T(d, length), factor * count_T(d - 1, n) ** (1 << t)),
        lambda: (log_count_T(d, length), math.log(factor) + (1 << t) * log_count_T(d - 1, n)),
        grid.mode, grid.escalation, status,
    )


def _tower_chunk(d, grid, keep, lemma):
    report = LemmaReport(lemma)
    ts = (0,) if lemma == "3.6" else grid.t
    for n in grid.n:
        if d < 0 or n < 1 or (lemma == "3.6" and d > n):
            report.skipped += 1
            continue
        if grid.mode == "exact" and n >= LARGE_N:
            warnings.warn(
                f"exact evaluation of #T({d}, {64 * n}<<t) has millions of digits; expect long runtimes",
                RuntimeWarning,
                stacklevel=3,
            )
        for t in ts:
            report.add(_tower_cell(lemma, d, n, t, grid), keep)
    return report


def _chunk_512(d, grid, keep):
    return _tower_chunk(d, grid, keep, "3.6")


def _chunk_tower(d, grid, keep):
    return _tower_chunk(d, grid, keep, "3.7")


def verify_512(grid, threads=1, keep=False):
    """``#T(d, 64n) >= 512 n #T(d-1, n)^2``; cells below ``n = 2^19`` are exploratory."""
    return _run_chunks(_chunk_512, list(grid.d), "3.6", grid, threads, keep)


def verify_tower(grid, threads=1, keep=False):
    """``#T(d, 64 2^t n) >= 512 2^t n #T(d-1, n)^(2^t)``; exploratory below ``2^19``."""
    return _run_chunks(_chunk_tower, list(grid.d), "3.7", grid, threads, keep)


def _power_ge(base, exponent, value):
    """Whether ``base**exponent >= value`` for nonnegative ints, avoiding the
    power when bit lengths already decide it."""
    if base <= 1:
        return base >= value or (base == 1 and value <= 1)
    if value.bit_length() <= (base.bit_length() - 1) * exponent:
        return True
    if value.bit_length() > base.bit_length() * exponent:
        return False
    return base**exponent >= value


def verify_remark(target, grid, keep=False):
    """``f(i) <= f(p)^(2^j)`` on each dyadic segment, cells ``(p, j)``.

    Segment j is ``[2^(j-1) p, 2^j p]`` for ``j >= 1`` and ``[p, p]`` for j = 0.
    The reported sides are ``(j, f(p))`` exponent form on the left and the
    segment maximum on the right; the log-margin is ``2^j ln f(p) - ln max``.
    """
    report = LemmaReport("remark", grid.describe())
    for p in grid.p:
        if p < 1:
            report.skipped += 1
            continue
        base = target.f(p)
        for j in grid.j:
            j = check_int(j, "j", minimum=0)
            lo, hi = (p, p) if j == 0 else (p << (j - 1), p << j)
            segment = target.values(hi)[lo:]
            worst = max(segment)
            passed = _power_ge(base, 1 << j, worst)
            name = f"p={p};j={j}"
            if not passed:
                first = next(lo + k for k, v in enumerate(segment) if not _power_ge(base, 1 << j, v))
                name += f";i={first}"
            lhs = base ** (1 << j) if j <= 12 else None
            margin = (1 << j) * _log(base) - _log(worst)
            report.add(CellResult("remark", name, lhs, worst, passed, margin), keep)
    return report


def verify(lemma, grid, target=None, threads=1, keep=False):
    """Dispatch by lemma id (one of ``LEMMAS``)."""
    if lemma == "remark":
        if target is None:
            raise ValueError("the remark check needs a target")
        return verify_remark(target, grid, keep)
    runners = {
        "3.2": verify_doubling,
        "3.3": verify_conditional_two_thirds,
        "3.4": verify_shift,
        "3.5": verify_base,
        "3.6": verify_512,
        "3.7": verify_tower,
    }
    if lemma not in runners:
        raise ValueError(f"unknown lemma {lemma!r}; choose from {', '.join(LEMMAS)}")
    return runners[lemma](grid, threads=threads, keep=keep)
