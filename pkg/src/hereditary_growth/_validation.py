"""Input validation helpers and the package's exception types."""

import numbers

import gmpy2


class RangeError(ValueError):
    """A sequence was asked for values outside the range it is defined on."""


class InvalidTarget(ValueError):
    """A growth target fails the admissibility conditions."""


def check_int(value, name, minimum=None, maximum=None):
    """Return ``value`` as a Python int, rejecting bools, floats and bounds violations."""
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    if maximum is not None and value > maximum:
        raise ValueError(f"{name} must be <= {maximum}, got {value}")
    return value


def check_word(word, alphabet="xy"):
    """Return ``word`` as a str after checking every letter is in ``alphabet``."""
    if not isinstance(word, str):
        word = "".join(word)
    bad = set(word) - set(alphabet)
    if bad:
        raise ValueError(f"word {word!r} has letters {sorted(bad)} outside alphabet {alphabet!r}")
    return word


def check_alphabet(alphabet):
    if not alphabet:
        raise ValueError("alphabet must be nonempty")
    if len(set(alphabet)) != len(alphabet):
        raise ValueError(f"alphabet {alphabet!r} repeats a symbol")
    return str(alphabet)


def check_counts(values, name="values"):
    """Coerce an iterable of nonnegative integers to a tuple of ints."""
    out = []
    for i, v in enumerate(values):
        if isinstance(v, str):
            v = parse_int(v)
        out.append(check_int(v, f"{name}[{i}]", minimum=0))
    return tuple(out)


def dec(value):
    """Decimal string of an int of any size (str() refuses > 4300 digits)."""
    return gmpy2.mpz(value).digits(10)


def parse_int(text):
    """Inverse of ``dec``."""
    return int(gmpy2.mpz(text.strip(), 10))
