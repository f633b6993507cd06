"""Command-line entry point.

Exit status: 0 on success with every check passing, 1 when a verification
found violations, 2 on usage or input errors.  Data goes to ``--out`` (or
standard output); the resolved configuration and diagnostics go to standard
error.
"""

import argparse
import logging
import sys

from ._validation import InvalidTarget, RangeError, dec
from .construct import (
    ConstructionConfig,
    ConstructionTrace,
    CorruptCheckpoint,
    SearchExhausted,
    WindowEmpty,
    check_trace,
    empirical_domination,
    plot_rows,
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
    read_forbidden,
)
from .lemmas import LEMMAS, GridSpec, verify
from .targets import (
    NormalizationError,
    builtin,
    compare,
    normalize,
    read_target_csv,
    validate,
)
from .tseries import count_T, log_count_T

USAGE_ERROR = 2
VIOLATION = 1


class _Output:
    """Write to ``--out`` if given, else standard output."""

    def __init__(self, path):
        self.path = path
        self._fh = None

    def __enter__(self):
        self._fh = open(self.path, "w", newline="") if self.path else sys.stdout
        return self._fh

    def __exit__(self, *exc):
        if self.path:
            self._fh.close()
        return False


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("--threads", type=int, default=1, help="worker processes for lemma grids (default: 1)")
    common.add_argument("--config", help="file of key=value lines; flags override it")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    return common


def _target_flags(parser, required=True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--input", help="growth target CSV with header n,f")
    group.add_argument("--family", help="builtin family: minimal, exponential, power:ALPHA, intermediate:BETA")


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(
        prog="hereditary-growth",
        description="Growth functions of hereditary languages: counts, construction, verification.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("tcount", parents=[common], help="print #T(d, n)")
    p.add_argument("--d", type=int, required=True, help="gap parameter (negative means 0)")
    p.add_argument("--n", type=int, required=True, help="word length")
    p.add_argument("--log", action="store_true", help="print the natural log instead")

    p = sub.add_parser("validate", parents=[common], help="check a growth target's admissibility")
    _target_flags(p)
    p.add_argument("--nmax", type=int, required=True, help="check condition 1 for n <= NMAX")
    p.add_argument("--normalize", action="store_true", help="report the normalized target instead")

    p = sub.add_parser("construct", parents=[common], help="run the construction and write a trace CSV")
    _target_flags(p)
    p.add_argument("--N", type=int, default=8, help="cutoff of the initial segment (default: 8)")
    p.add_argument("--nmax", type=int, required=True, help="last length to construct")
    p.add_argument("--checkpoint", help="checkpoint file; resumed if present")
    p.add_argument("--checkpoint-every", type=int, default=256, help="rows between checkpoint writes (default: 256)")
    p.add_argument("--search", choices=("binary", "linear"), default="binary", help="d/e search strategy")
    p.add_argument("--normalize", action="store_true", help="normalize the target first")
    p.add_argument("--check", action="store_true", help="verify every trace invariant")
    p.add_argument("--domination", action="store_true", help="report the least C with F(n) <= A(Cn)")
    p.add_argument("--plot-out", help="also write n,A,F,ratio_log to this file")

    p = sub.add_parser("plot", parents=[common], help="write n,A,F,ratio_log for a trace and target")
    p.add_argument("--trace", required=True, help="trace CSV")
    _target_flags(p)

    p = sub.add_parser("verify-lemmas", parents=[common], help="check a counting inequality on a grid")
    p.add_argument("--lemma", required=True, choices=LEMMAS)
    p.add_argument("--grid", required=True, help='e.g. "d=0:63;n=2:1024" or "p=1:64;j=0:4"; ranges inclusive')
    p.add_argument("--mode", choices=("exact", "logfloat"), default="exact")
    p.add_argument("--escalation", type=float, default=1.0, help="log-margin below which logfloat cells are rechecked exactly")
    p.add_argument("--cells", choices=("failures", "all"), default="failures", help="which cells go to the report")
    _target_flags(p, required=False)

    p = sub.add_parser("language", parents=[common], help="words of a trace-derived language")
    p.add_argument("action", choices=("enumerate", "count", "check-hereditary"))
    p.add_argument("--trace", required=True, help="trace CSV")
    p.add_argument("--n", type=int, required=True, help="length (enumerate) or last length (count, check-hereditary)")

    p = sub.add_parser("avoid", parents=[common], help="words avoiding a finite forbidden-factor set")
    p.add_argument("action", choices=("count", "classify"))
    p.add_argument("--forbidden", required=True, help="text file, one forbidden word per line")
    p.add_argument("--alphabet", default="xy", help="distinct symbols (default: xy)")
    p.add_argument("--nmax", type=int, default=64, help="last length to count (default: 64)")
    p.add_argument("--check", action="store_true", help="also check g(m) <= g(n)^2 for n <= m <= 2n")

    p = sub.add_parser("compare", parents=[common], help="check G(n) <= F(Cn)")
    p.add_argument("--f", required=True, help="dominating target CSV")
    p.add_argument("--g", required=True, help="dominated target CSV")
    p.add_argument("--C", type=int, required=True, help="scale factor")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--per-length", action="store_true", help="compare f values instead of cumulative F")
    return parser


def _load_config(path):
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def _apply_config(parser, argv):
    """Parse ``argv`` with config-file values as defaults, so explicit flags win."""
    argv = sys.argv[1:] if argv is None else list(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    path = pre.parse_known_args(argv)[0].config
    choices = parser._subparsers._group_actions[0].choices
    command = next((a for a in argv if a in choices), None)
    if not path or command is None:
        return parser.parse_args(argv)
    subparser = choices[command]
    known = {a.dest: a for a in subparser._actions}
    relaxed = []
    for key, raw in _load_config(path).items():
        action = known.get(key)
        if action is None or key in ("help", "config"):
            parser.error(f"unknown key {key!r} in config file {path}")
        if action.nargs == 0:
            raw = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            raw = action.type(raw)
        if action.choices is not None and raw not in action.choices:
            parser.error(f"config key {key!r}: {raw!r} not in {list(action.choices)}")
        action.required = False
        for group in subparser._mutually_exclusive_groups:
            if action in group._group_actions and group.required:
                group.required = False
                relaxed.append(group)
        subparser.set_defaults(**{key: raw})
    args = parser.parse_args(argv)
    for group in relaxed:
        on_line = [a for a in group._group_actions if set(a.option_strings) & set(argv)]
        if on_line:
            for a in group._group_actions:
                if a not in on_line:
                    setattr(args, a.dest, None)
        if sum(getattr(args, a.dest) is not None for a in group._group_actions) != 1:
            names = " ".join(a.option_strings[0] for a in group._group_actions)
            subparser.error(f"exactly one of {names} is required")
    return args


def _echo_config(args):
    items = sorted((k, v) for k, v in vars(args).items() if k != "command")
    print(f"# {args.command} " + " ".join(f"{k}={v}" for k, v in items), file=sys.stderr)


def _target(args, n_max=None):
    if args.input:
        return read_target_csv(args.input)
    return builtin(args.family, n_max)


def cmd_tcount(args):
    with _Output(args.out) as out:
        if args.log:
            out.write(f"{log_count_T(args.d, args.n)!r}\n")
        else:
            out.write(dec(count_T(args.d, args.n)) + "\n")
    return 0


def cmd_validate(args):
    target = _target(args)
    if args.normalize:
        target = normalize(target, args.nmax)
    report = validate(target, args.nmax)
    with _Output(args.out) as out:
        out.write(f"{target.origin} {report.summary()}\n")
    return 0 if report.ok else VIOLATION


def _write_plot(path, trace, target=None):
    with _Output(path) as out:
        out.write("n,A,F,ratio_log\n")
        for n, A, F, ratio in plot_rows(trace, target):
            out.write(f"{n},{dec(A)},{dec(F)},{ratio:.12g}\n")


def cmd_construct(args):
    target = _target(args)
    if args.normalize:
        target = normalize(target, max(1, args.nmax // 2))
    config = ConstructionConfig(
        N=args.N,
        n_max=args.nmax,
        checkpoint_path=args.checkpoint,
        checkpoint_every=args.checkpoint_every,
        search=args.search,
    )
    trace = run(target, config)
    if args.out:
        trace.to_csv(args.out)
    else:
        sys.stdout.write("n,d,e,in_x,in_y,a,A,F\n")
        for row in trace.rows:
            sys.stdout.write(row.as_csv() + "\n")
    if args.plot_out:
        _write_plot(args.plot_out, trace, target)
    status = 0
    if args.check:
        problems = check_trace(trace, target)
        print(f"check: {len(problems)} violations", file=sys.stderr)
        for v in problems[:20]:
            print(f"  {v}", file=sys.stderr)
        if problems:
            status = VIOLATION
    if args.domination:
        result = empirical_domination(trace, target)
        print(f"domination: {result.summary()}", file=sys.stderr)
        if result.C is None:
            status = VIOLATION
    return status


def cmd_plot(args):
    trace = ConstructionTrace.from_csv(args.trace)
    target = _target(args)
    try:
        mismatch = next((r.n for r in trace.rows if r.F != target.F(r.n)), None)
    except RangeError:
        mismatch = len(target.cumulative(target.size - 1)) if target.size else None
    if mismatch is not None:
        raise ValueError(f"trace and target disagree on F at n={mismatch}")
    _write_plot(args.out, trace, target)
    return 0


def cmd_verify_lemmas(args):
    grid = GridSpec.parse(args.grid, mode=args.mode, escalation=args.escalation)
    target = None
    if args.lemma == "remark":
        if not (args.input or args.family):
            raise ValueError("--lemma remark needs --input or --family")
        target = _target(args)
    report = verify(args.lemma, grid, target=target, threads=args.threads, keep=args.cells == "all")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write("lemma,cell,lhs,rhs,pass,log_margin\n")
            for c in report.cells + [c for c in report.exploratory_failures if c not in report.cells]:
                lhs = "" if c.lhs is None else dec(c.lhs)
                rhs = "" if c.rhs is None else dec(c.rhs)
                margin = "" if c.log_margin is None else f"{c.log_margin:.12g}"
                fh.write(f"{c.lemma},{c.cell},{lhs},{rhs},{int(c.passed)},{margin}\n")
    print(report.summary())
    for note in report.notes:
        print(f"note: {note}", file=sys.stderr)
    return 0 if report.ok else VIOLATION


def cmd_language(args):
    trace = ConstructionTrace.from_csv(args.trace)
    spec = LanguageSpec.from_trace(trace)
    status = 0
    with _Output(args.out) as out:
        if args.action == "enumerate":
            for word in sorted(enumerate_language(spec, args.n)):
                out.write(word + "\n")
        elif args.action == "count":
            out.write("n,words,a\n")
            for n in range(args.n + 1):
                words = len(enumerate_language(spec, n))
                out.write(f"{n},{words},{dec(trace.rows[n].a)}\n")
                if words != trace.rows[n].a:
                    status = VIOLATION
        else:
            problems = check_factorial(spec, args.n)
            for word, factor in problems:
                out.write(f"{word},{factor}\n")
            print(f"check-hereditary: {len(problems)} violations up to n={args.n}", file=sys.stderr)
            status = VIOLATION if problems else 0
    return status


def cmd_avoid(args):
    words = read_forbidden(args.forbidden, args.alphabet)
    automaton = build_automaton(words, args.alphabet)
    status = 0
    with _Output(args.out) as out:
        if args.action == "count":
            g = count_avoiding(automaton, args.nmax)
            out.write("n,g\n")
            for n, value in enumerate(g):
                out.write(f"{n},{dec(value)}\n")
            if args.check:
                bad = check_necessity(g, args.nmax)
                print(f"necessity: {len(bad)} violations", file=sys.stderr)
                status = VIOLATION if bad else 0
        else:
            out.write(f"{classify_growth(automaton)}\n")
    return status


def cmd_compare(args):
    f = read_target_csv(args.f)
    g = read_target_csv(args.g)
    ok, failing = compare(f, g, args.C, args.nmax, cumulative=not args.per_length)
    with _Output(args.out) as out:
        if ok:
            out.write(f"true C={args.C} n=1..{args.nmax}\n")
        else:
            out.write(f"false C={args.C} first_failure={failing}\n")
    return 0 if ok else VIOLATION


COMMANDS = {
    "tcount": cmd_tcount,
    "validate": cmd_validate,
    "construct": cmd_construct,
    "plot": cmd_plot,
    "verify-lemmas": cmd_verify_lemmas,
    "language": cmd_language,
    "avoid": cmd_avoid,
    "compare": cmd_compare,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    _echo_config(args)
    try:
        return COMMANDS[args.command](args)
    except (SearchExhausted, WindowEmpty) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VIOLATION
    except (InvalidTarget, NormalizationError, CorruptCheckpoint, RangeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
