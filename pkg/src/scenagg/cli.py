"""Command-line front end: generate instances, solve, approximate, and run
the aggregation experiment.

Exit codes: 0 success, 1 usage error, 2 input validation error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .approx import approx_minmax, approx_regret
from .core import CapExceededError, ValidationError
from .experiment import (
    ExperimentConfig,
    format_summary,
    render_svg,
    run_experiment,
    write_csv,
)
from .instances import (
    dumps_instance,
    gen_example1,
    gen_layered,
    gen_tight,
    read_instance,
    write_instance,
)
from .labelops import BACKEND
from .solvers import (
    brute_force,
    exact_generalized_regret,
    exact_minmax,
    fptas_solve,
    per_scenario_optima,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_CAP = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2
    # for input validation, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scenagg",
                     description="Scenario aggregation for robust "
                                 "combinatorial optimization")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen_sub = gen.add_subparsers(dest="generator", required=True,
                                 parser_class=_Parser)
    g_layered = gen_sub.add_parser("layered",
                                   help="random complete layered graph")
    g_layered.add_argument("--layers", type=int, required=True)
    g_layered.add_argument("--width", type=int, required=True)
    g_layered.add_argument("--k", type=int, required=True,
                           help="number of scenarios")
    g_layered.add_argument("--seed", type=int, required=True)
    g_tight = gen_sub.add_parser("tight",
                                 help="two-path worst-case family")
    g_tight.add_argument("--k", type=int, required=True,
                         help="scenario-count exponent (K = 2**k)")
    g_tight.add_argument("--ell", type=int, required=True,
                         help="aggregation level the gap targets")
    gen_sub.add_parser("example1", help="three-edge regret example")
    for g in (g_layered, g_tight, gen_sub.choices["example1"]):
        g.add_argument("-o", "--output", default=None,
                       help="output path (default: stdout)")

    solve = sub.add_parser("solve", help="solve an instance file")
    solve.add_argument("instance")
    solve.add_argument("--criterion", choices=["minmax", "regret"],
                       default="minmax")
    solve.add_argument("--method", choices=["exact", "brute", "fptas"],
                       default="exact")
    solve.add_argument("--epsilon-tilde", type=float, default=1.0,
                       help="FPTAS quality (method fptas)")
    solve.add_argument("--json", action="store_true",
                       help="emit structured output")

    approx = sub.add_parser("approx",
                            help="aggregation-based approximation with "
                                 "certificate")
    approx.add_argument("instance")
    approx.add_argument("--epsilon", type=float, required=True,
                        help="target quality in (0, 1]; the certified "
                             "factor is at most epsilon * K for "
                             "power-of-two K")
    approx.add_argument("--scheme", choices=["consecutive", "similarity"],
                        default="consecutive")
    approx.add_argument("--criterion", choices=["minmax", "regret"],
                        default="minmax")
    approx.add_argument("--sub-solver", choices=["fptas", "exact"],
                        default="fptas")
    approx.add_argument("--epsilon-tilde", type=float, default=1.0)
    approx.add_argument("--level", type=int, default=None,
                        help="force the aggregation level instead of "
                             "deriving it from epsilon")
    approx.add_argument("--tie-break",
                        choices=["lexicographic", "adversarial"],
                        default="lexicographic")
    approx.add_argument("--json", action="store_true")

    exp = sub.add_parser("experiment",
                         help="aggregation-level sweep on random instances")
    exp.add_argument("--layers", type=int, default=10)
    exp.add_argument("--width", type=int, default=4)
    exp.add_argument("--scenarios", type=int, default=16)
    exp.add_argument("--instances", type=int, default=200)
    exp.add_argument("--full", action="store_true",
                     help="run the full 1000-instance study")
    exp.add_argument("--seed", type=int, default=5000)
    exp.add_argument("--schemes", nargs="+",
                     choices=["consecutive", "similarity"],
                     default=["similarity", "consecutive"])
    exp.add_argument("--levels", nargs="+", type=int, default=None,
                     help="scenario counts to sweep (default: all halving "
                          "stages)")
    exp.add_argument("--criterion", choices=["minmax", "regret"],
                     default="minmax")
    exp.add_argument("--csv", default="experiment.csv")
    exp.add_argument("--svg", default="experiment.svg")
    exp.add_argument("--quiet", action="store_true")
    return parser


def _emit_instance(instance, output) -> None:
    if output is None:
        sys.stdout.write(dumps_instance(instance))
    else:
        write_instance(instance, output)
        print(f"wrote {output}")


def _cmd_gen(args) -> int:
    if args.generator == "layered":
        instance = gen_layered(args.layers, args.width, args.k, args.seed)
    elif args.generator == "tight":
        instance = gen_tight(args.k, args.ell)
    else:
        instance = gen_example1()
    _emit_instance(instance, args.output)
    return EXIT_OK


def _solution_report(instance, result, criterion: str) -> dict:
    x = result.solution
    return {
        "criterion": criterion,
        "value": result.value,
        "exact": result.exact,
        "labels_explored": result.labels_explored,
        "selected": list(x.selected),
        "incidence": "".join(str(int(v)) for v in x.incidence),
        "kernel_backend": BACKEND,
    }


def _cmd_solve(args) -> int:
    instance = read_instance(args.instance)
    offsets = None
    if args.criterion == "regret":
        offsets = per_scenario_optima(instance)
    if args.method == "exact":
        if offsets is None:
            result = exact_minmax(instance)
        else:
            result = exact_generalized_regret(instance, offsets)
    elif args.method == "brute":
        crit = "minmax" if offsets is None else "generalized_regret"
        result = brute_force(instance, crit, offsets)
    else:
        crit = "minmax" if offsets is None else "generalized_regret"
        result = fptas_solve(instance, args.epsilon_tilde, crit, offsets)
    report = _solution_report(instance, result, args.criterion)
    report["method"] = args.method
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"instance:  {instance.name or args.instance}")
        print(f"criterion: {args.criterion}   method: {args.method}")
        print(f"value:     {result.value!r}")
        print(f"exact:     {result.exact}   "
              f"labels explored: {result.labels_explored}")
        print(f"selected:  {list(result.solution.selected)}")
        print(f"incidence: {report['incidence']}")
    return EXIT_OK


def _cmd_approx(args) -> int:
    instance = read_instance(args.instance)
    fn = approx_minmax if args.criterion == "minmax" else approx_regret
    solution, cert = fn(
        instance, args.epsilon, scheme=args.scheme,
        sub_solver=args.sub_solver, epsilon_tilde=args.epsilon_tilde,
        level=args.level, tie_break=args.tie_break)
    report = {
        "criterion": args.criterion,
        "epsilon": args.epsilon,
        "scheme": cert.scheme,
        "level_used": cert.level_used,
        "sub_solver_alpha": cert.sub_solver_alpha,
        "guarantee_factor": cert.guarantee_factor,
        "achieved_value": cert.achieved_value,
        "lower_bound": cert.lower_bound,
        "selected": list(solution.selected),
        "incidence": "".join(str(int(v)) for v in solution.incidence),
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"instance:         {instance.name or args.instance}")
        print(f"criterion:        {args.criterion}   scheme: {cert.scheme}")
        print(f"level used:       {cert.level_used} "
              f"({2 ** cert.level_used} scenario budget)")
        print(f"achieved value:   {cert.achieved_value!r}")
        print(f"guarantee factor: {cert.guarantee_factor!r}")
        print(f"lower bound:      {cert.lower_bound!r}")
        print(f"selected:         {list(solution.selected)}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    config = ExperimentConfig(
        layers=args.layers,
        width=args.width,
        scenario_count=args.scenarios,
        instance_count=1000 if args.full else args.instances,
        seed=args.seed,
        schemes=tuple(args.schemes),
        levels=tuple(args.levels) if args.levels else None,
        criterion=args.criterion,
        csv_path=args.csv,
        svg_path=args.svg,
    )
    progress = None
    if not args.quiet:
        def progress(i, total=config.instance_count):
            done = i + 1
            if done % 20 == 0 or done == total:
                print(f"  solved instance {done}/{total}", file=sys.stderr)
    rows = run_experiment(config, progress=progress)
    write_csv(rows, config.csv_path)
    render_svg(rows, config.svg_path)
    print(format_summary(rows))
    print(f"wrote {config.csv_path} and {config.svg_path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "approx":
            return _cmd_approx(args)
        if args.command == "experiment":
            return _cmd_experiment(args)
    except CapExceededError as exc:
        print(f"scenagg: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValidationError as exc:
        print(f"scenagg: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"scenagg: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
