"""Candidate growth functions and their admissibility checks.

A ``GrowthTarget`` wraps an exact integer sequence ``f`` and its global
counting function ``F(n) = f(0) + ... + f(n)``.  A target is admissible when

1. ``f(m) <= f(n)**2`` for ``n >= 1`` and ``n <= m <= 2n``;
2. ``f(n) >= n + 1`` for every ``n``.
"""

import csv
import hashlib
import math
import threading
from collections import deque
from dataclasses import dataclass

import mpmath

from ._validation import InvalidTarget, RangeError, check_counts, check_int, dec, parse_int

__all__ = [
    "GrowthTarget",
    "ValidityReport",
    "NormalizationError",
    "validate",
    "check_doubling_bound",
    "compare",
    "dominates",
    "builtin",
    "parse_family",
    "normalize",
    "read_target_csv",
    "write_target_csv",
    "FAMILIES",
]

FAMILIES = ("minimal", "exponential", "power", "intermediate")


class NormalizationError(ValueError):
    """No finite change of initial values makes the target admissible."""


class GrowthTarget:
    """Exact sequence ``f`` backed by a finite table or an unbounded rule.

    Table-backed targets refuse to extrapolate past their last entry.  Rule
    values are computed on demand and memoised.
    """

    def __init__(self, values=None, *, rule=None, origin="table"):
        if (values is None) == (rule is None):
            raise ValueError("give exactly one of values or rule")
        self.origin = origin
        self._rule = rule
        self._f = [] if values is None else list(check_counts(values, "f"))
        self._F = []
        self._lock = threading.Lock()

    @classmethod
    def from_rule(cls, rule, origin):
        return cls(rule=rule, origin=origin)

    @property
    def size(self):
        """Number of defined values, or None for a rule-backed target."""
        return None if self._rule is not None else len(self._f)

    def _ensure(self, n):
        if n < len(self._f):
            return
        if self._rule is None:
            raise RangeError(
                f"target {self.origin!r} is defined on 0..{len(self._f) - 1}, asked for n={n}"
            )
        with self._lock:
            for k in range(len(self._f), n + 1):
                value = self._rule(k)
                if value < 0:
                    raise ValueError(f"rule produced negative f({k}) = {value}")
                self._f.append(int(value))

    def f(self, n):
        n = check_int(n, "n", minimum=0)
        self._ensure(n)
        return self._f[n]

    def F(self, n):
        """Global counting function; ``F(-1) = 0``."""
        n = check_int(n, "n", minimum=-1)
        if n < 0:
            return 0
        if n >= len(self._F):
            self._ensure(n)
            with self._lock:
                total = self._F[-1] if self._F else 0
                for k in range(len(self._F), n + 1):
                    total += self._f[k]
                    self._F.append(total)
        return self._F[n]

    def values(self, n_max):
        """``[f(0), ..., f(n_max)]``."""
        self._ensure(n_max)
        return self._f[: n_max + 1]

    def cumulative(self, n_max):
        self.F(n_max)
        return self._F[: n_max + 1]

    def sha256(self, n_max):
        """Digest of ``f(0..n_max)``; identifies the target in checkpoints."""
        digest = hashlib.sha256()
        for v in self.values(n_max):
            digest.update(dec(v).encode())
            digest.update(b",")
        return digest.hexdigest()

    def __repr__(self):
        return f"GrowthTarget(origin={self.origin!r})"


@dataclass
class ValidityReport:
    checked_range: int
    condition1_ok: bool = True
    condition2_ok: bool = True
    condition1_violation: tuple = None  # (n, m)
    condition2_violation: int = None

    @property
    def ok(self):
        return self.condition1_ok and self.condition2_ok

    def summary(self):
        parts = [f"range=0..{self.checked_range}"]
        if self.condition1_ok:
            parts.append("condition1=ok")
        else:
            n, m = self.condition1_violation
            parts.append(f"condition1=FAIL(n={n},m={m})")
        if self.condition2_ok:
            parts.append("condition2=ok")
        else:
            parts.append(f"condition2=FAIL(n={self.condition2_violation})")
        return " ".join(parts)


def _first_square_violation(values, n_lo, n_hi):
    """First ``(n, m)`` with ``n_lo <= n <= n_hi``, ``n <= m <= 2n`` and
    ``values[m] > values[n]**2``; ``values`` must cover ``0..2*n_hi``.

    Both window ends only move right, so a monotone deque gives the window
    maximum in amortised O(1).
    """
    window = deque()
    right = n_lo - 1
    for n in range(n_lo, n_hi + 1):
        while right < 2 * n:
            right += 1
            while window and values[window[-1]] <= values[right]:
                window.pop()
            window.append(right)
        while window[0] < n:
            window.popleft()
        bound = values[n] * values[n]
        if values[window[0]] > bound:
            for m in range(n, 2 * n + 1):
                if values[m] > bound:
                    return n, m
    return None


def validate(target, n_max):
    """Check both admissibility conditions, condition 1 for ``1 <= n <= n_max``.

    Raises ``RangeError`` if the target is not defined up to ``2 * n_max``.
    """
    n_max = check_int(n_max, "n_max", minimum=0)
    values = target.values(2 * n_max)
    report = ValidityReport(checked_range=n_max)
    bad = _first_square_violation(values, 1, n_max)
    if bad is not None:
        report.condition1_ok = False
        report.condition1_violation = bad
    for n in range(n_max + 1):
        if values[n] < n + 1:
            report.condition2_ok = False
            report.condition2_violation = n
            break
    return report


def check_doubling_bound(target, p, j_max):
    """Whether ``f(i) <= f(p)**(2**j)`` on every dyadic segment ``j <= j_max``.

    Segment ``j`` is ``2**(j-1) p <= i <= 2**j p`` for ``j >= 1`` and just
    ``[p, p]`` for ``j = 0``.
    """
    return not _doubling_failures(target, p, j_max, first_only=True)


def _doubling_failures(target, p, j_max, first_only=False):
    p = check_int(p, "p", minimum=1)
    j_max = check_int(j_max, "j_max", minimum=0)
    values = target.values(p << j_max)
    base = values[p]
    failures = []
    bound = base
    for j in range(j_max + 1):
        if j:
            bound = bound * bound
        lo = p if j == 0 else p << (j - 1)
        for i in range(lo, (p << j) + 1):
            if values[i] > bound:
                failures.append((p, j, i))
                if first_only:
                    return failures
    return failures


def dominates(upper, lower, C, n_max):
    """Check ``lower[n] <= upper[C n]`` for ``1 <= n <= n_max``.

    ``upper`` and ``lower`` are indexable sequences.  Returns
    ``(ok, first_failing_n)``.
    """
    C = check_int(C, "C", minimum=1)
    n_max = check_int(n_max, "n_max", minimum=0)
    if len(upper) <= C * n_max or len(lower) <= n_max:
        raise RangeError(f"need upper on 0..{C * n_max} and lower on 0..{n_max}")
    for n in range(1, n_max + 1):
        if lower[n] > upper[C * n]:
            return False, n
    return True, None


def compare(f, g, C, n_max, cumulative=True):
    """Whether ``g(n) <= f(C n)`` on ``1..n_max``; returns ``(ok, first_failing_n)``.

    With ``cumulative`` (the default) the global counting functions are
    compared, which is the order used between growth functions.
    """
    C = check_int(C, "C", minimum=1)
    n_max = check_int(n_max, "n_max", minimum=0)
    if cumulative:
        upper, lower = f.cumulative(C * n_max), g.cumulative(n_max)
    else:
        upper, lower = f.values(C * n_max), g.values(n_max)
    return dominates(upper, lower, C, n_max)


def _power_rule(alpha):
    exponent = alpha - 1
    if exponent == int(exponent):
        k = int(exponent)
        return lambda n: max(n + 1, n**k)

    def rule(n):
        with mpmath.workdps(30 + int(exponent * math.log10(n + 1))):
            return max(n + 1, int(mpmath.floor(mpmath.mpf(n) ** exponent + 0.5)))

    return rule


def _intermediate_rule(beta):
    def rule(n):
        if n == 0:
            return 1
        # exp(n**beta) has about n**beta / ln(10) digits before the point
        digits = 30 + int(n**beta / math.log(10))
        with mpmath.workdps(digits):
            top = mpmath.exp(mpmath.mpf(n) ** beta)
            low = mpmath.exp(mpmath.mpf(n - 1) ** beta)
            return max(n + 1, int(mpmath.floor(top - low + 0.5)))

    return rule


def parse_family(spec):
    """Split ``"name[:param]"`` into ``(name, param)``; param is a float or None."""
    name, _, raw = spec.partition(":")
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    if name in ("minimal", "exponential"):
        if raw:
            raise ValueError(f"family {name!r} takes no parameter")
        return name, None
    if not raw:
        raise ValueError(f"family {name!r} needs a parameter, e.g. {name}:{3 if name == 'power' else 0.5}")
    if "/" in raw:
        num, _, den = raw.partition("/")
        param = float(num) / float(den)
    else:
        param = float(raw)
    return name, param


def builtin(name, n_max=None, param=None):
    """A builtin target family, validated on ``0..n_max`` when ``n_max`` is given.

    ``name`` may carry its parameter (``"power:3"``) or take it via ``param``.
    """
    if param is None and ":" in name:
        name, param = parse_family(name)
    elif name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}")
    if name == "minimal":
        target = GrowthTarget.from_rule(lambda n: n + 1, "builtin(minimal)")
    elif name == "exponential":
        target = GrowthTarget.from_rule(lambda n: 1 << n, "builtin(exponential)")
    elif name == "power":
        if param is None or not param >= 2:
            raise ValueError(f"power family needs alpha >= 2, got {param}")
        target = GrowthTarget.from_rule(_power_rule(param), f"builtin(power,{param:g})")
    else:
        if param is None or not 0 < param < 1:
            raise ValueError(f"intermediate family needs 0 < beta < 1, got {param}")
        target = GrowthTarget.from_rule(_intermediate_rule(param), f"builtin(intermediate,{param:g})")
    if n_max is not None:
        report = validate(target, n_max)
        if not report.ok:
            raise InvalidTarget(f"{target.origin} is not admissible: {report.summary()}")
    return target


def normalize(target, n_max):
    """Return an admissible target with ``f(0) = 1`` and ``f(1) = 2``.

    ``f(0)`` and ``f(1)`` are reset, then values are lowered left to right to
    the largest value compatible with condition 1 given the already fixed
    smaller indices.  This is the pointwise largest admissible sequence below
    the original with the required start.  If changes are still happening
    beyond ``n_max`` on the probed range ``0..2*n_max`` the modification is not
    provably finite and ``NormalizationError`` is raised.
    """
    n_max = check_int(n_max, "n_max", minimum=1)
    report = validate(target, n_max)
    if not report.condition2_ok:
        raise NormalizationError(f"{target.origin}: f(n) >= n+1 fails at n={report.condition2_violation}")
    original = target.values(2 * n_max)
    if original[0] == 1 and original[1] == 2 and report.ok:
        return target
    values = list(original)
    values[0], values[1] = 1, 2
    for n in range(1, n_max + 1):
        cap = values[n] * values[n]
        for m in range(n + 1, 2 * n + 1):
            if values[m] > cap:
                values[m] = cap
    changed = [i for i, (a, b) in enumerate(zip(original, values)) if a != b]
    if changed and changed[-1] > n_max:
        raise NormalizationError(
            f"{target.origin}: adjustments still needed at n={changed[-1]} > {n_max}; "
            "no finite modification found on the probed range"
        )
    overrides = {i: values[i] for i in changed}
    note = ",".join(f"f({i})={values[i]}" for i in changed)
    if target.size is None:
        rule = target._rule
        return GrowthTarget.from_rule(
            lambda n: overrides[n] if n in overrides else rule(n),
            f"normalized({target.origin};{note})",
        )
    table = target.values(target.size - 1)
    return GrowthTarget(
        [overrides.get(i, v) for i, v in enumerate(table)],
        origin=f"normalized({target.origin};{note})",
    )


def read_target_csv(path):
    """Read a ``n,f`` CSV with rows 0, 1, 2, ... in order."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["n", "f"]:
            raise ValueError(f"{path}: expected header 'n,f', got {header}")
        values = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            n, value = int(row[0]), parse_int(row[1])
            if n != len(values):
                raise ValueError(f"{path}:{lineno}: expected n={len(values)}, got {n}")
            values.append(value)
    return GrowthTarget(values, origin=f"table({path})")


def write_target_csv(target, n_max, path):
    with open(path, "w", newline="") as fh:
        fh.write("n,f\n")
        for n, value in enumerate(target.values(n_max)):
            fh.write(f"{n},{dec(value)}\n")
