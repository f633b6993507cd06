"""Growth functions of hereditary (factorial) binary languages.

Exact counting of the T(d, n) word families, admissibility checks for growth
targets, the length-by-length construction of a factorial language tracking a
target, and numeric checks of the supporting counting inequalities.
"""

from .construct import (
    ConstructionConfig,
    ConstructionTrace,
    check_trace,
    empirical_domination,
    run,
)
from .language import (
    LanguageSpec,
    build_automaton,
    check_factorial,
    check_necessity,
    classify_growth,
    count_avoiding,
    enumerate_language,
)
from .lemmas import GridSpec, LemmaReport, verify
from .targets import GrowthTarget, builtin, compare, normalize, validate
from .tseries import count_T, count_union, enumerate_T, log_count_T

__version__ = "0.1.0"


def __getattr__(name):
    # the estimators pull in scikit-learn, which the CLI never needs
    if name in ("AvoidanceGrowth", "HereditaryConstruction"):
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")

__all__ = [
    "AvoidanceGrowth",
    "ConstructionConfig",
    "ConstructionTrace",
    "GridSpec",
    "GrowthTarget",
    "HereditaryConstruction",
    "LanguageSpec",
    "LemmaReport",
    "build_automaton",
    "builtin",
    "check_factorial",
    "check_necessity",
    "check_trace",
    "classify_growth",
    "compare",
    "count_T",
    "count_avoiding",
    "count_union",
    "empirical_domination",
    "enumerate_T",
    "enumerate_language",
    "log_count_T",
    "normalize",
    "run",
    "validate",
    "verify",
]
