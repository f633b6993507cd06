"""Word-level view of the constructed languages, plus a finite
forbidden-factor engine for general factorial languages.
"""

from collections import deque
from dataclasses import dataclass, field
from itertools import product

import networkx as nx

from ._validation import RangeError, check_alphabet, check_int, check_word
from .tseries import ENUMERATION_CAP, in_T as _in_T

__all__ = [
    "runs",
    "from_runs",
    "in_T",
    "LanguageSpec",
    "in_language",
    "enumerate_language",
    "check_factorial",
    "AvoidanceAutomaton",
    "build_automaton",
    "count_avoiding",
    "brute_force_avoiding",
    "check_necessity",
    "Growth",
    "classify_growth",
    "read_forbidden",
]


def runs(word):
    """Split a binary word into ``(i, gaps, j)``: leading x-run, interior
    x-runs between consecutive y's, trailing x-run.  Returns None for ``x^n``.
    """
    word = check_word(word)
    ys = [k for k, c in enumerate(word) if c == "y"]
    if not ys:
        return None
    gaps = tuple(b - a - 1 for a, b in zip(ys, ys[1:]))
    return ys[0], gaps, len(word) - ys[-1] - 1


def from_runs(i, gaps, j):
    return "x" * i + "y" + "".join("x" * g + "y" for g in gaps) + "x" * j


def in_T(word, d):
    """Whether ``word`` is in T(d, |word|); always true for ``d <= 0``."""
    word = check_word(word)
    return _in_T(word, check_int(d, "d"))


@dataclass(frozen=True)
class LanguageSpec:
    """Per-length parameters ``(d_n, e_n)`` for ``n = 0..n_max``.

    ``monotone=False`` skips the weakly-increasing check on ``d``, which is
    only useful for building deliberately non-factorial specs.
    """

    d: tuple
    e: tuple
    monotone: bool = field(default=True, compare=False)

    def __post_init__(self):
        if len(self.d) != len(self.e) or not self.d:
            raise ValueError("d and e must be nonempty and of equal length")
        for n, (dn, en) in enumerate(zip(self.d, self.e)):
            if not 0 <= en <= n:
                raise ValueError(f"e_{n} = {en} outside [0, {n}]")
            if self.monotone and n and dn < self.d[n - 1]:
                raise ValueError(f"d must be weakly increasing (d_{n} = {dn} < {self.d[n - 1]})")

    @property
    def n_max(self):
        return len(self.d) - 1

    @classmethod
    def from_trace(cls, trace):
        return cls(tuple(trace.d), tuple(trace.e))

    def _params(self, n):
        if n > self.n_max:
            raise RangeError(f"spec covers lengths 0..{self.n_max}, asked for {n}")
        return self.d[n], self.e[n]


def _member(word, d, e):
    if _in_T(word, d):
        return True
    return word.startswith("x" * e) and _in_T(word[e:], d - 1)


def in_language(word, spec):
    """Whether ``word`` is in ``T(d_n, n) ∪ x^{e_n} T(d_n - 1, n - e_n)``, n = |word|."""
    word = check_word(word)
    d, e = spec._params(len(word))
    return _member(word, d, e)


def enumerate_language(spec, n, cap=ENUMERATION_CAP):
    """All members of length n, by filtering every binary word."""
    n = check_int(n, "n", minimum=0)
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap {cap}")
    d, e = spec._params(n)
    words = ("".join(letters) for letters in product("xy", repeat=n))
    return {w for w in words if _member(w, d, e)}


def check_factorial(spec, n_max, cap=ENUMERATION_CAP):
    """Factor-closure violations among members of length ``<= n_max``.

    Closure under dropping the first or last letter, checked at every length,
    is equivalent to closure under all factors.  Returns ``(word, factor)``
    pairs; empty means the language is factorial on the range.
    """
    n_max = check_int(n_max, "n_max", minimum=0)
    if n_max > spec.n_max:
        raise RangeError(f"spec covers lengths 0..{spec.n_max}, asked for {n_max}")
    violations = []
    below = enumerate_language(spec, 0, cap)
    for n in range(1, n_max + 1):
        members = enumerate_language(spec, n, cap)
        for w in sorted(members):
            for factor in (w[1:], w[:-1]):
                if factor not in below:
                    violations.append((w, factor))
        below = members
    return violations


class AvoidanceAutomaton:
    """Deterministic automaton recognising words with no forbidden factor.

    Live states are numbered ``0..n_live-1`` with 0 the start;
    ``delta[state][letter]`` is a live state or ``DEAD``.  All dead trie
    nodes are merged into one sink, so ``n_states`` counts it once when any
    forbidden word exists.
    """

    DEAD = -1

    def __init__(self, alphabet, delta, labels, forbidden):
        self.alphabet = alphabet
        self.delta = delta
        self.labels = labels
        self.forbidden = forbidden

    @property
    def n_live(self):
        return len(self.delta)

    @property
    def n_states(self):
        return self.n_live + (1 if self.forbidden else 0)

    def accepts(self, word):
        """True iff ``word`` avoids every forbidden factor."""
        state = 0
        for c in word:
            state = self.delta[state][self.alphabet.index(c)]
            if state == self.DEAD:
                return False
        return True

    def live_graph(self):
        """Live transitions as a networkx MultiDiGraph (one edge per letter)."""
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.n_live))
        for s, row in enumerate(self.delta):
            for k, t in enumerate(row):
                if t != self.DEAD:
                    graph.add_edge(s, t, letter=self.alphabet[k])
        return graph


def build_automaton(forbidden, alphabet="xy"):
    """Aho-Corasick automaton for avoiding ``forbidden`` as factors."""
    alphabet = check_alphabet(alphabet)
    words = sorted({check_word(w, alphabet) for w in forbidden})
    if "" in words:
        raise ValueError("the empty word cannot be forbidden (it would exclude every word)")
    # trie
    children = [{}]
    terminal = [False]
    path = [""]
    for w in words:
        node = 0
        for c in w:
            nxt = children[node].get(c)
            if nxt is None:
                nxt = len(children)
                children[node][c] = nxt
                children.append({})
                terminal.append(False)
                path.append(path[node] + c)
            node = nxt
        terminal[node] = True
    # failure links, breadth first; a node is dead if it or any suffix state is terminal
    n_nodes = len(children)
    fail = [0] * n_nodes
    goto = [[0] * len(alphabet) for _ in range(n_nodes)]
    dead = terminal[:]
    queue = deque()
    for k, c in enumerate(alphabet):
        child = children[0].get(c)
        if child is None:
            goto[0][k] = 0
        else:
            goto[0][k] = child
            queue.append(child)
    order = []
    while queue:
        node = queue.popleft()
        order.append(node)
        dead[node] = dead[node] or dead[fail[node]]
        for k, c in enumerate(alphabet):
            child = children[node].get(c)
            if child is None:
                goto[node][k] = goto[fail[node]][k]
            else:
                fail[child] = goto[fail[node]][k]
                goto[node][k] = child
                queue.append(child)
    # renumber live nodes in BFS order, root first
    live = [0] + [v for v in order if not dead[v]]
    index = {v: i for i, v in enumerate(live)}
    delta = [
        [AvoidanceAutomaton.DEAD if dead[t] else index[t] for t in goto[v]]
        for v in live
    ]
    return AvoidanceAutomaton(alphabet, delta, [path[v] for v in live], tuple(words))


def count_avoiding(automaton, n_max):
    """``g(n)``, the number of length-n words avoiding every forbidden factor,
    for ``n = 0..n_max``, by dynamic programming over live states."""
    n_max = check_int(n_max, "n_max", minimum=0)
    occupancy = [0] * automaton.n_live
    occupancy[0] = 1
    g = [1]
    for _ in range(n_max):
        nxt = [0] * automaton.n_live
        for s, ways in enumerate(occupancy):
            if ways:
                for t in automaton.delta[s]:
                    if t != AvoidanceAutomaton.DEAD:
                        nxt[t] += ways
        occupancy = nxt
        g.append(sum(occupancy))
    return g


def brute_force_avoiding(forbidden, alphabet, n_max):
    """``g(0..n_max)`` by enumerating every word and searching for factors."""
    forbidden = list(forbidden)
    return [
        sum(1 for letters in product(alphabet, repeat=n)
            if not any(f in "".join(letters) for f in forbidden))
        for n in range(n_max + 1)
    ]


def check_necessity(g, n_max):
    """Pairs ``(n, m)`` with ``1 <= n <= m <= 2n <= n_max`` and ``g(m) > g(n)**2``."""
    n_max = check_int(n_max, "n_max", minimum=0)
    if len(g) <= n_max:
        raise RangeError(f"need g on 0..{n_max}, have {len(g)} values")
    bad = []
    for n in range(1, n_max // 2 + 1):
        bound = g[n] * g[n]
        for m in range(n, 2 * n + 1):
            if g[m] > bound:
                bad.append((n, m))
    return bad


@dataclass(frozen=True)
class Growth:
    kind: str  # "polynomial" or "exponential"
    degree: int = None  # for polynomial: g(n) ~ n**degree; -1 when g is eventually 0

    def __str__(self):
        return self.kind if self.kind == "exponential" else f"{self.kind} {self.degree}"


def classify_growth(automaton):
    """Polynomial-versus-exponential classification of ``g(n)``.

    Restricted to live states reachable from the start, ``g`` grows
    exponentially iff some strongly connected component carries two distinct
    cycles (more transitions than states inside it).  Otherwise each component
    is a single cycle or acyclic, and ``g(n)`` is of order ``n**(k - 1)`` where
    ``k`` is the largest number of cyclic components along one path.
    """
    graph = automaton.live_graph()
    reachable = nx.descendants(graph, 0) | {0}
    graph = graph.subgraph(reachable).copy()
    dag = nx.condensation(nx.DiGraph(graph))
    weight = {}
    for comp in dag.nodes:
        members = dag.nodes[comp]["members"]
        inner = graph.subgraph(members).number_of_edges()
        if inner > len(members):
            return Growth("exponential")
        weight[comp] = 1 if inner == len(members) else 0
    best = {}
    for comp in reversed(list(nx.topological_sort(dag))):
        tail = max((best[s] for s in dag.successors(comp)), default=0)
        best[comp] = weight[comp] + tail
    start = dag.graph["mapping"][0]
    return Growth("polynomial", best[start] - 1)


def read_forbidden(path, alphabet):
    """Forbidden words from a text file, one per line; blank lines are skipped."""
    words = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            word = line.strip()
            if not word:
                continue
            try:
                words.append(check_word(word, alphabet))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return words
