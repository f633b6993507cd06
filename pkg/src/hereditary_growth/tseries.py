"""Exact counts of the gap-constrained binary words T(d, n).

T(d, n) is the set of length-n words over {x, y} that are either x^n or
have every x-run strictly between two y's of length at least d.  Its size
is ``1 + h(0) + ... + h(n-1)`` where ``h(m) = h(m-1) + h(m-d-1)`` counts
compositions of m into parts 1 and d+1.

Counts are Python ints.  Per-d tables are append-only and shared through a
module-level registry; ``TSeries`` objects can also be used standalone when a
caller wants to drop a table after use.
"""

import math
import threading
from itertools import product

import gmpy2
import numpy as np

from ._validation import check_int

__all__ = [
    "TSeries",
    "h_value",
    "count_T",
    "counter",
    "count_union",
    "enumerate_T",
    "in_T",
    "log_count_T",
    "count_T_large",
    "clear_cache",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 16

# beyond this length count_T switches from tables to matrix powers
TABLE_LIMIT = 1 << 16

# log_count_T evaluates exactly up to this length
LOG_EXACT_LIMIT = 4096


class TSeries:
    """Append-only table of ``h_{d+1}(m)`` and prefix sums ``#T(d, n)``.

    ``h[m]`` is the number of compositions of ``m`` into parts 1 and ``d+1``;
    ``prefix[n] = 1 + sum(h[:n])``.
    """

    def __init__(self, d):
        self.d = check_int(d, "d", minimum=0)
        self.h = [1]
        self.prefix = [1, 2]
        self._lock = threading.Lock()

    def __len__(self):
        return len(self.h)

    def extend(self, m):
        """Make ``h[0..m]`` and ``prefix[0..m+1]`` available."""
        if m < len(self.h):
            return
        with self._lock:
            h, prefix = self.h, self.prefix
            s = self.d + 1
            for k in range(len(h), m + 1):
                value = h[k - 1] + (h[k - s] if k >= s else 0)
                h.append(value)
                prefix.append(prefix[-1] + value)

    def h_at(self, m):
        if m < 0:
            return 0
        self.extend(m)
        return self.h[m]

    def count(self, n):
        """``#T(d, n)``; zero for negative n."""
        if n < 0:
            return 0
        self.extend(n - 1)
        return self.prefix[n]


_tables = {}
_registry_lock = threading.Lock()


def _table(d):
    table = _tables.get(d)
    if table is None:
        with _registry_lock:
            table = _tables.setdefault(d, TSeries(d))
    return table


def clear_cache():
    """Drop every shared table."""
    with _registry_lock:
        _tables.clear()


def h_value(s, m):
    """Coefficient of ``t^m`` in ``1 / (1 - t - t^s)``."""
    s = check_int(s, "s", minimum=1)
    m = check_int(m, "m")
    if m < 0:
        return 0
    if s == 1:
        return 1 << m
    return _table(s - 1).h_at(m)


def _count(d, n, table):
    if n < 0:
        return 0
    if d == 0:
        return 1 << n
    if n <= 2 * d + 2:
        # at most two y's fit: x^n, the n one-y words, and C(n-d, 2) two-y words
        k = n - d
        return n + 1 + (k * (k - 1) // 2 if k >= 2 else 0)
    if n > TABLE_LIMIT:
        return count_T_large(d, n)
    return (table or _table(d)).count(n)


def count_T(d, n):
    """Size of T(d, n).

    Negative ``d`` is read as ``d = 0`` (every binary word qualifies) and a
    negative length gives 0.
    """
    d = max(check_int(d, "d"), 0)
    n = check_int(n, "n")
    return _count(d, n, None)


def counter(d):
    """``n -> #T(d, n)`` backed by a private table, released with the closure."""
    d = max(check_int(d, "d"), 0)
    table = TSeries(d)
    return lambda n: _count(d, n, table)


def count_union(d, e, n):
    """Size of ``T(d, n) ∪ x^e T(d-1, n-e)``.

    The intersection of the two sets is ``x^e T(d, n-e)``: prepending x only
    lengthens the leading run, which is never an interior gap.
    """
    d = check_int(d, "d", minimum=0)
    n = check_int(n, "n", minimum=0)
    e = check_int(e, "e")
    if e < 0 or e > n:
        raise ValueError(f"e must lie in [0, n={n}], got {e}")
    return count_T(d, n) + count_T(d - 1, n - e) - count_T(d, n - e)


def in_T(word, d):
    """Whether ``word`` (a str over 'xy') belongs to T(d, len(word))."""
    last = -1
    for i, c in enumerate(word):
        if c == "y":
            if last >= 0 and i - last - 1 < d:
                return False
            last = i
    return True


def enumerate_T(d, n, cap=ENUMERATION_CAP):
    """All words of T(d, n), found by filtering every binary word of length n."""
    d = check_int(d, "d")
    n = check_int(n, "n", minimum=0)
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap {cap}")
    words = ("".join(letters) for letters in product("xy", repeat=n))
    return {w for w in words if in_T(w, d)}


def _companion(d):
    # state (h(m), h(m-1), ..., h(m-d)) -> (h(m+1), ..., h(m-d+1))
    k = d + 1
    rows = [[0] * k for _ in range(k)]
    rows[0][0] = 1
    rows[0][d] += 1
    for i in range(1, k):
        rows[i][i - 1] = 1
    return rows


def count_T_large(d, n):
    """``#T(d, n)`` by exact matrix powering, for lengths too long to tabulate.

    Uses ``#T(d, n) = h_{d+1}(n + d)``, which follows from telescoping the
    recurrence ``h(m + d) - h(m + d - 1) = h(m - 1)``.
    """
    d = max(check_int(d, "d"), 0)
    n = check_int(n, "n")
    if n < 0:
        return 0
    if d == 0:
        return 1 << n
    k = d + 1
    power = [[gmpy2.mpz(v) for v in row] for row in _companion(d)]
    state = [gmpy2.mpz(1)] + [gmpy2.mpz(0)] * d  # (h(0), h(-1), ..., h(-d))
    m = n + d
    while m:
        if m & 1:
            state = [sum(power[i][j] * state[j] for j in range(k)) for i in range(k)]
        m >>= 1
        if m:
            power = [
                [sum(power[i][t] * power[t][j] for t in range(k)) for j in range(k)]
                for i in range(k)
            ]
    return int(state[0])


def _log_matpow(d, m):
    """Natural log of ``h_{d+1}(m)`` via scaled float matrix powering."""
    k = d + 1
    power = np.array(_companion(d), dtype=float)
    state = np.zeros(k)
    state[0] = 1.0
    log_state = 0.0
    log_power = 0.0
    while m:
        if m & 1:
            state = power @ state
            top = state.max()
            state /= top
            log_state += math.log(top) + log_power
        m >>= 1
        if m:
            power = power @ power
            top = power.max()
            power /= top
            log_power = 2.0 * log_power + math.log(top)
    return log_state + math.log(state[0])


def log_count_T(d, n):
    """Natural log of ``#T(d, n)``.

    Exact up to ``LOG_EXACT_LIMIT``; beyond it a float matrix power with
    per-step renormalisation.  All matrix entries are nonnegative so there is
    no cancellation, and the relative error of the count stays near
    ``(d + 2) * 2 * log2(n) * 2**-52`` (far inside 1e-9).
    """
    d = max(check_int(d, "d"), 0)
    n = check_int(n, "n", minimum=0)
    if d == 0:
        return n * math.log(2)
    if n <= LOG_EXACT_LIMIT:
        return math.log(count_T(d, n))
    return _log_matpow(d, n + d)
