"""scikit-learn style front ends.

``HereditaryConstruction`` fits the per-length language parameters to a
growth target; ``AvoidanceGrowth`` fits an avoidance automaton to a finite
forbidden-factor set.  Both expose ``get_params``/``set_params`` through
``BaseEstimator`` and so work with ``sklearn.base.clone``.
"""

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_alphabet, check_int
from .construct import ConstructionConfig, check_trace, empirical_domination, run
from .language import LanguageSpec, build_automaton, classify_growth, count_avoiding
from .targets import GrowthTarget, builtin, normalize as normalize_target


def as_target(X):
    """Coerce ``X`` to a ``GrowthTarget``.

    Accepts a ``GrowthTarget``, a family string such as ``"power:3"``, or an
    array-like of the values ``f(0), f(1), ...``.
    """
    if isinstance(X, GrowthTarget):
        return X
    if isinstance(X, str):
        return builtin(X)
    return GrowthTarget(list(X))


def check_lengths(X):
    """Coerce a scalar or array-like of lengths to a list of nonnegative ints."""
    if isinstance(X, (list, tuple)) or hasattr(X, "__array__") or hasattr(X, "__iter__"):
        return [check_int(v, "n", minimum=0) for v in X]
    return [check_int(X, "n", minimum=0)]


class HereditaryConstruction(BaseEstimator):
    """Build a hereditary language whose growth function tracks a target.

    Parameters
    ----------
    N : int
        Lengths ``0..N`` keep every word with at most one y.
    search : {"binary", "linear"}
        Strategy for the minimal d and e at each length; both give the same trace.
    normalize : bool
        Adjust the first values to ``f(0) = 1``, ``f(1) = 2`` before running.
    checkpoint_path : str or None
    checkpoint_every : int

    Attributes
    ----------
    trace_ : ConstructionTrace
    target_ : GrowthTarget
    language_spec_ : LanguageSpec
    n_max_ : int
    """

    def __init__(self, N=8, search="binary", normalize=False, checkpoint_path=None, checkpoint_every=256):
        self.N = N
        self.search = search
        self.normalize = normalize
        self.checkpoint_path = checkpoint_path
        self.checkpoint_every = checkpoint_every

    def fit(self, X, y=None, n_max=None):
        target = as_target(X)
        if n_max is None:
            if target.size is None:
                raise ValueError("n_max is required for rule-backed targets")
            n_max = target.size - 1
        if self.normalize:
            target = normalize_target(target, max(1, n_max // 2))
        config = ConstructionConfig(
            N=self.N,
            n_max=n_max,
            checkpoint_path=self.checkpoint_path,
            checkpoint_every=self.checkpoint_every,
            search=self.search,
        )
        self.target_ = target
        self.trace_ = run(target, config)
        self.language_spec_ = LanguageSpec.from_trace(self.trace_)
        self.n_max_ = n_max
        return self

    def transform(self, X):
        """Growth function ``A(n)`` of the fitted language at each length in ``X``."""
        check_is_fitted(self, "trace_")
        A = self.trace_.A
        return [A[self._in_range(n)] for n in check_lengths(X)]

    def predict(self, X):
        """Number of words ``a(n)`` of each length in ``X``."""
        check_is_fitted(self, "trace_")
        a = self.trace_.a
        return [a[self._in_range(n)] for n in check_lengths(X)]

    def fit_transform(self, X, y=None, n_max=None):
        self.fit(X, y, n_max=n_max)
        return self.trace_.A

    def violations(self):
        check_is_fitted(self, "trace_")
        return check_trace(self.trace_, self.target_)

    def domination(self, candidates=None):
        check_is_fitted(self, "trace_")
        return empirical_domination(self.trace_, self.target_, candidates)

    def _in_range(self, n):
        if n > self.n_max_:
            raise ValueError(f"length {n} beyond fitted range 0..{self.n_max_}")
        return n


class AvoidanceGrowth(BaseEstimator):
    """Count words avoiding a finite set of forbidden factors.

    Parameters
    ----------
    alphabet : str
        Distinct symbols, e.g. ``"xy"``.

    Attributes
    ----------
    automaton_ : AvoidanceAutomaton
    growth_ : Growth
    """

    def __init__(self, alphabet="xy"):
        self.alphabet = alphabet

    def fit(self, X, y=None):
        alphabet = check_alphabet(self.alphabet)
        self.automaton_ = build_automaton(list(X), alphabet)
        self.growth_ = classify_growth(self.automaton_)
        self._counts = [1]
        return self

    def transform(self, X):
        """``g(n)`` for each length in ``X``."""
        check_is_fitted(self, "automaton_")
        lengths = check_lengths(X)
        if lengths and max(lengths) >= len(self._counts):
            self._counts = count_avoiding(self.automaton_, max(lengths))
        return [self._counts[n] for n in lengths]

    def predict(self, X):
        return self.transform(X)
