import pytest
from hypothesis import given, settings, strategies as st

from hereditary_growth._validation import RangeError
from hereditary_growth.construct import ConstructionConfig, run
from hereditary_growth.language import (
    LanguageSpec,
    brute_force_avoiding,
    build_automaton,
    check_factorial,
    check_necessity,
    classify_growth,
    count_avoiding,
    enumerate_language,
    from_runs,
    in_language,
    in_T,
    read_forbidden,
    runs,
)
from hereditary_growth.targets import builtin


def flat_spec(n_max, d, e=0):
    return LanguageSpec((d,) * (n_max + 1), tuple(min(e, n) for n in range(n_max + 1)))


def test_in_t_examples():
    assert in_T("xyxxxy", 3) and not in_T("xyxxxy", 4)
    assert in_T("xxxxx", 50)
    assert in_T("xy", 100)


def test_runs_round_trip():
    assert runs("xxxx") is None
    assert runs("xyxxyyx") == (1, (2, 0), 1)
    assert from_runs(1, (2, 0), 1) == "xyxxyyx"


def test_membership_examples():
    spec = LanguageSpec((0, 1, 2, 2, 2, 2), (0, 1, 1, 1, 1, 1))
    assert in_language("xyxxy", spec)
    assert not in_language("yxyxx", spec)
    assert in_language("xxxxx", spec)


def test_spec_range():
    with pytest.raises(RangeError):
        in_language("xxxx", flat_spec(3, 1))


def test_spec_rejects_decreasing_d():
    with pytest.raises(ValueError):
        LanguageSpec((0, 2, 1), (0, 0, 0))


def test_enumerate_examples():
    trace = run(builtin("minimal"), ConstructionConfig(N=4, n_max=12))
    spec = LanguageSpec.from_trace(trace)
    assert len(enumerate_language(spec, 6)) == 7
    assert enumerate_language(spec, 0) == {""}
    assert len(enumerate_language(flat_spec(8, 0), 8)) == 256


@pytest.mark.parametrize("name", ["minimal", "exponential", "power:3", "intermediate:1/2"])
def test_trace_languages_are_factorial(name):
    trace = run(builtin(name), ConstructionConfig(N=4, n_max=12))
    spec = LanguageSpec.from_trace(trace)
    assert check_factorial(spec, 12) == []
    for n in range(13):
        assert len(enumerate_language(spec, n)) == trace.a[n]


def test_full_language_is_factorial():
    assert check_factorial(flat_spec(8, 0), 8) == []


def test_non_factorial_spec_detected():
    # d drops from 3 to 1: yxyx is kept at length 4 but its factor yxy is not at length 3
    spec = LanguageSpec((0, 1, 2, 3, 1), (0, 1, 2, 3, 4), monotone=False)
    assert ("yxyx", "yxy") in check_factorial(spec, 4)


def test_automaton_sizes():
    yy = build_automaton(["yy"])
    assert yy.n_live == 2 and yy.n_states == 3
    assert build_automaton([]).n_states == 1
    assert build_automaton(["x", "y"]).n_live == 1


def test_automaton_rejects_empty_word():
    with pytest.raises(ValueError):
        build_automaton([""])


@pytest.mark.parametrize("forbidden", [[], ["yy"], ["yx"], ["yy", "yxy"], ["xyx", "yy"], ["xxx", "yyy", "xyxy"]])
def test_counts_match_brute_force(forbidden):
    assert count_avoiding(build_automaton(forbidden), 12) == brute_force_avoiding(forbidden, "xy", 12)


def test_count_examples():
    assert count_avoiding(build_automaton(["yy"]), 6) == [1, 2, 3, 5, 8, 13, 21]
    assert count_avoiding(build_automaton([]), 5) == [2**n for n in range(6)]
    assert count_avoiding(build_automaton(["yx"]), 8) == [n + 1 for n in range(9)]


def test_necessity():
    assert check_necessity(count_avoiding(build_automaton(["yy"]), 64), 64) == []
    assert check_necessity([2**n for n in range(65)], 64) == []
    assert check_necessity([1, 1, 5], 2) == [(1, 2)]


@pytest.mark.parametrize(
    "forbidden, kind, degree",
    [
        (["yx"], "polynomial", 1),
        (["yy"], "exponential", None),
        ([], "exponential", None),
        (["x", "y"], "polynomial", -1),
        (["yx", "yy"], "polynomial", 0),
        (["xy", "yx"], "polynomial", 0),
        (["xy"], "polynomial", 1),
        (["ba", "ca", "cb"], "polynomial", 2),
    ],
)
def test_classify(forbidden, kind, degree):
    alphabet = "abc" if any("c" in w for w in forbidden) else "xy"
    growth = classify_growth(build_automaton(forbidden, alphabet))
    assert growth.kind == kind and growth.degree == degree


def test_read_forbidden(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("yy\n\nyxy\n")
    assert read_forbidden(path, "xy") == ["yy", "yxy"]
    path.write_text("yz\n")
    with pytest.raises(ValueError):
        read_forbidden(path, "xy")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.text(alphabet="xy", min_size=1, max_size=4), max_size=4))
def test_random_forbidden_sets(forbidden):
    automaton = build_automaton(forbidden)
    assert count_avoiding(automaton, 9) == brute_force_avoiding(forbidden, "xy", 9)
    g = count_avoiding(automaton, 20)
    assert check_necessity(g, 20) == []
