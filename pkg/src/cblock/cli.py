"""Command-line entry point: ``cblock <subcommand> ...``.

Exit status: 0 on success, 1 on invalid input or usage, 2 on I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import blktree, core, drilldown, machines, multiround
from .rollup import rollup as rollup_canopies
from .blktree import LANGUAGES, STRATEGIES, BlockingModel, BuildLimits
from .core import ValidationError
from .evaluation import CvConfig, cross_validate, report_csv, run_experiment
from .hashing import enumerate_hash_space
from .synth import SynthConfig, gen_synthetic

log = logging.getLogger("cblock")


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _oversized(text: str) -> Optional[int]:
    value = int(text)
    return None if value <= 0 else value


def _add_space_args(p):
    p.add_argument("--K", type=_int_list, default=[1, 3, 5], help="prefix/suffix/freq lengths")
    p.add_argument("--k", type=_int_list, default=[5, 10], help="rounding widths for integers")
    p.add_argument("--drilldown", action="append", default=[], metavar="ATTR[:ORDERING]",
                   help="add a drill-down interval hash for ATTR to the space")


def _add_learn_args(p, rounds_default=5, oversized_default: Optional[int] = 8):
    p.add_argument("--max-size", type=int, required=True, help="canopy size bound S")
    p.add_argument("--language", choices=LANGUAGES, default="blktree")
    p.add_argument("--strategy", choices=STRATEGIES, default="optimistic")
    p.add_argument("--rounds", type=int, default=rounds_default, help="max disjoint rounds R")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-depth", type=int, default=16)
    p.add_argument("--max-oversized", type=_oversized, default=oversized_default,
                   help="reject hashes leaving more oversized children than this (<=0: no limit)")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cblock", description="Size-bounded blocking learned from labeled duplicates.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="learn a blocking model")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--out", default="model.json")
    p.add_argument("--build-factor", type=int, default=1, help="build with S/f and adapt at apply time")
    _add_learn_args(p)
    _add_space_args(p)

    p = sub.add_parser("apply", help="assign records to canopies with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--schema")
    p.add_argument("--out", help="assignment TSV (default: stdout)")
    p.add_argument("--seed", type=int, help="override the model's split seed")

    p = sub.add_parser("rollup", help="merge small canopies of an assignment")
    p.add_argument("--assignment", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--round", type=int, default=0)
    p.add_argument("--min-benefit", type=int, default=0)
    p.add_argument("--out", help="remap TSV (default: stdout)")

    p = sub.add_parser("drilldown", help="optimal interval hash for one attribute")
    p.add_argument("--data", required=True)
    p.add_argument("--schema")
    p.add_argument("--attr", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--max-cost", type=float, required=True, help="max records per interval")
    p.add_argument("--ordering", choices=drilldown.ORDERINGS, default=None)
    p.add_argument("--out", help="HashSpec JSON (default: stdout)")

    p = sub.add_parser("eval", help="k-fold cross-validated recall")
    p.add_argument("--data", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--out", help="JSON report (default: stdout)")
    _add_learn_args(p)
    _add_space_args(p)

    p = sub.add_parser("assign-machines", help="place canopies on m machines")
    p.add_argument("--assignment", required=True)
    p.add_argument("--machines", type=int, required=True)
    p.add_argument("--round", type=int, default=0)
    p.add_argument("--out", help="JSON report (default: stdout)")

    p = sub.add_parser("synth", help="generate a synthetic movie dataset")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--n-base", type=int, default=1000)
    p.add_argument("--dup-rate", type=float, default=0.1)
    p.add_argument("--skew", type=float, default=0.3, help="fraction of null titles")
    p.add_argument("--seed", type=int, default=42)

    p = sub.add_parser("experiment", help="recall grid over S, language and strategy")
    p.add_argument("--data", help="dataset JSONL (default: generate synthetic data)")
    p.add_argument("--schema")
    p.add_argument("--pairs")
    p.add_argument("--n-base", type=int, default=9000)
    p.add_argument("--dup-rate", type=float, default=1 / 9)
    p.add_argument("--skew", type=float, default=0.3)
    p.add_argument("--sizes", type=_int_list, default=[50, 200, 1000])
    p.add_argument("--languages", type=_str_list, default=list(LANGUAGES))
    p.add_argument("--strategies", type=_str_list, default=list(STRATEGIES))
    p.add_argument("--rounds", type=int, default=5)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-depth", type=int, default=16)
    p.add_argument("--max-oversized", type=_oversized, default=None,
                   help="reject hashes leaving more oversized children than this (default: no limit)")
    p.add_argument("--timing", action="store_true", help="fill apply_us_per_record (not reproducible)")
    p.add_argument("--out", default="report.csv")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--figure-format", default="png")
    _add_space_args(p)
    return parser


# ------------------------------------------------------------------ helpers

def _space(args, dataset, pairs=None, S=None):
    space = enumerate_hash_space(dataset.schema, args.K, args.k)
    for item in args.drilldown:
        attr, _, ordering = item.partition(":")
        if not ordering:
            ordering = "numeric" if dataset.schema.get(attr) == core.INTEGER else "lexicographic"
        spec, _ = drilldown.drill_down_attribute(dataset, pairs or (), attr, S, ordering)
        space.append(spec)
    return space


def _limits(args) -> BuildLimits:
    return BuildLimits(max_depth=args.max_depth, max_oversized_children=args.max_oversized)


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _assignment_text(assign: core.CanopyAssignment, order) -> str:
    lines = []
    for r, mapping in enumerate(assign.rounds):
        lines.extend(f"{rid}\t{r}\t{mapping[rid]}\n" for rid in order)
    return "".join(lines)


# ----------------------------------------------------------------- commands

def cmd_train(args) -> None:
    dataset = core.load_dataset(args.data, args.schema)
    pairs = core.load_pairs(args.pairs, dataset)
    space = _space(args, dataset, pairs, args.max_size)
    limits = _limits(args)
    if args.rounds <= 1:
        model = blktree.learn(args.language, dataset, pairs, space, args.max_size, args.strategy,
                              limits, args.seed, build_factor=args.build_factor)
    else:
        if args.build_factor != 1:
            raise ValidationError("--build-factor applies to single-round training only")
        model, _ = multiround.train_multi_round(dataset, pairs, space, args.max_size, args.language,
                                                args.rounds, args.strategy, args.seed, limits)
    blktree.save_model(model, args.out)
    log.info("wrote %s", args.out)


def cmd_apply(args) -> None:
    model = blktree.load_model(args.model)
    dataset = core.load_dataset(args.data, args.schema)
    models = model.rounds if isinstance(model, multiround.MultiRoundModel) else [model]
    rounds = []
    for m in models:
        rounds.extend(blktree.assign_canopies(m, dataset, seed=args.seed)[0].rounds)
    _write(_assignment_text(core.CanopyAssignment(rounds), dataset.ids()), args.out)


def cmd_rollup(args) -> None:
    assign = core.read_assignment(args.assignment)
    if not 0 <= args.round < len(assign.rounds):
        raise ValidationError(f"assignment has no round {args.round}")
    mapping = assign.rounds[args.round]
    pairs = core.TrainingSet.from_pairs(core.read_pair_rows(args.pairs))
    for a, b in pairs:
        for rid in (a, b):
            if rid not in mapping:
                raise ValidationError(f"unknown record id {rid!r}")
    members: dict[str, list[str]] = {}
    for rid, cid in mapping.items():
        members.setdefault(cid, []).append(rid)
    plan = rollup_canopies(sorted(members.items()), pairs, args.max_size, args.min_benefit)
    remap = plan.remap()
    _write("".join(f"{old}\t{remap[old]}\n" for old in sorted(remap)), args.out)
    log.info("rollup gained %d pairs", plan.merged_pairs_gained)


def cmd_drilldown(args) -> None:
    dataset = core.load_dataset(args.data, args.schema)
    pairs = core.load_pairs(args.pairs, dataset)
    ordering = args.ordering
    if ordering is None:
        ordering = "numeric" if dataset.schema.get(args.attr) == core.INTEGER else "lexicographic"
    spec, violations = drilldown.drill_down_attribute(dataset, pairs, args.attr, args.max_cost, ordering)
    _write(json.dumps(spec.to_json(), sort_keys=True, ensure_ascii=False) + "\n", args.out)
    log.info("drill-down on %s splits %d pairs", args.attr, violations)


def cmd_eval(args) -> None:
    dataset = core.load_dataset(args.data, args.schema)
    pairs = core.load_pairs(args.pairs, dataset)
    space = _space(args, dataset, pairs, args.max_size)
    config = CvConfig(args.max_size, args.language, args.strategy, args.rounds, args.folds, args.seed, _limits(args))
    report = cross_validate(dataset, pairs, space, config)
    out = {"per_fold": [{"train": tr, "test": te} for tr, te in report.per_fold],
           "mean_test_recall": report.mean_test_recall, "config": report.config}
    _write(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)


def cmd_assign_machines(args) -> None:
    assign = core.read_assignment(args.assignment)
    if not 0 <= args.round < len(assign.rounds):
        raise ValidationError(f"assignment has no round {args.round}")
    placed = machines.assign_to_machines(assign.stats(args.round), args.machines)
    cost, X, ok = machines.assignment_cost(placed)
    out = {
        "cost": cost,
        "X": float(X),
        "X_exact": str(X),
        "ratio": float(cost / X),
        "bound_ok": ok,
        "per_machine_loads": placed.loads,
    }
    _write(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)


def cmd_synth(args) -> None:
    dataset, pairs = gen_synthetic(SynthConfig(n_base=args.n_base, dup_rate=args.dup_rate, skew=args.skew, seed=args.seed))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    core.save_dataset(dataset, out / "data.jsonl", out / "schema.json")
    core.save_pairs(pairs, out / "pairs.csv")
    log.info("wrote %d records, %d pairs to %s", len(dataset), len(pairs), out)


def cmd_experiment(args) -> None:
    if args.data:
        if not args.pairs:
            raise ValidationError("--pairs is required with --data")
        dataset = core.load_dataset(args.data, args.schema)
        pairs = core.load_pairs(args.pairs, dataset)
    else:
        dataset, pairs = gen_synthetic(SynthConfig(n_base=args.n_base, dup_rate=args.dup_rate, skew=args.skew, seed=args.seed))
    space = _space(args, dataset, pairs, min(args.sizes) if args.sizes else None)
    rows = run_experiment(dataset, pairs, space, args.sizes, args.languages, args.strategies,
                          args.rounds, args.seed, args.folds, _limits(args), args.timing)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _write(report_csv(rows), str(out))
    if not args.no_figures:
        from .plotting import render_report_figures

        for path in render_report_figures(rows, out.parent, prefix=out.stem + "_", fmt=args.figure_format):
            log.info("wrote %s", path)


COMMANDS = {
    "train": cmd_train,
    "apply": cmd_apply,
    "rollup": cmd_rollup,
    "drilldown": cmd_drilldown,
    "eval": cmd_eval,
    "assign-machines": cmd_assign_machines,
    "synth": cmd_synth,
    "experiment": cmd_experiment,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        COMMANDS[args.command](args)
    except OSError as exc:
        print(f"cblock: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, ValueError, KeyError) as exc:
        print(f"cblock: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
