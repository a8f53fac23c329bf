"""Cross-validation and the recall experiment grid."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .blktree import LANGUAGES, OPTIMISTIC, STRATEGIES, BuildLimits, KeyTable, assign_canopies
from .core import CanopyAssignment, Dataset, TrainingSet, ValidationError, covered_pairs
from .hashing import HashSpec
from .multiround import train_multi_round

REPORT_COLUMNS = ("S", "language", "strategy", "rounds", "fold", "recall", "apply_us_per_record")
# languages whose learner ignores the greedy strategy
STRATEGY_FREE = ("random", "single")


@dataclass
class CvConfig:
    S: int
    language: str = "blktree"
    strategy: str = OPTIMISTIC
    rounds: int = 1
    folds: int = 5
    seed: int = 42
    limits: BuildLimits = field(default_factory=BuildLimits)


@dataclass
class CvReport:
    per_fold: list[tuple[float, float]]
    mean_test_recall: float
    config: dict


def fold_split(pairs: TrainingSet, folds: int, seed: int) -> list[TrainingSet]:
    """Seeded random split of the pairs into ``folds`` near-equal parts."""
    if folds < 2:
        raise ValidationError("need at least 2 folds")
    if len(pairs) < folds:
        raise ValidationError(f"{len(pairs)} pairs cannot fill {folds} folds")
    order = np.random.default_rng(seed).permutation(len(pairs))
    return [TrainingSet(tuple(pairs.pairs[i] for i in sorted(part))) for part in np.array_split(order, folds)]


def _train_test(pairs: TrainingSet, folds: int, seed: int):
    if folds <= 1:
        yield "all", pairs, pairs
        return
    parts = fold_split(pairs, folds, seed)
    for k, test in enumerate(parts):
        train = TrainingSet(tuple(p for j, part in enumerate(parts) if j != k for p in part.pairs))
        yield str(k), train, test


def _fraction(assign: CanopyAssignment, pairs: TrainingSet) -> float:
    return len(covered_pairs(assign, pairs)) / len(pairs) if len(pairs) else 0.0


def cross_validate(dataset: Dataset, pairs: TrainingSet, space: Sequence[HashSpec], config: CvConfig) -> CvReport:
    """Train on all folds but one, measure recall of the held-out fold on the
    model's assignment of the full dataset."""
    table = KeyTable(dataset, space) if config.language != "random" else None
    per_fold = []
    for _, train, test in _train_test(pairs, max(config.folds, 2), config.seed):
        _, assign = train_multi_round(
            dataset, train, space, config.S, config.language, config.rounds,
            config.strategy, config.seed, config.limits, table,
        )
        per_fold.append((_fraction(assign, train), _fraction(assign, test)))
    echo = asdict(config)
    echo["limits"] = asdict(config.limits)
    return CvReport(per_fold, float(np.mean([t for _, t in per_fold])), echo)


@dataclass
class ExperimentRow:
    S: int
    language: str
    strategy: str
    rounds: int
    fold: str
    recall: float
    apply_us_per_record: Optional[float] = None
    max_canopy: int = 0

    def csv_row(self) -> list[str]:
        us = "" if self.apply_us_per_record is None else f"{self.apply_us_per_record:.3f}"
        return [str(self.S), self.language, self.strategy, str(self.rounds), self.fold, f"{self.recall:.6f}", us]


def run_experiment(
    dataset: Dataset,
    pairs: TrainingSet,
    space: Sequence[HashSpec],
    S_list: Iterable[int],
    languages: Sequence[str] = LANGUAGES,
    strategies: Sequence[str] = (OPTIMISTIC,),
    R: int = 5,
    seed: int = 42,
    folds: int = 1,
    limits: Optional[BuildLimits] = None,
    timing: bool = False,
) -> list[ExperimentRow]:
    """Recall for every (S, language, strategy, fold) and every round count 1..R.

    ``rounds == 1`` is the disjoint result; larger counts are the cumulative
    non-disjoint recall, carried forward once the round loop has stopped.
    With ``timing`` each row also gets the wall-clock apply cost per record of
    its first ``rounds`` models (not reproducible byte-for-byte).
    """
    for lang in languages:
        if lang not in LANGUAGES:
            raise ValidationError(f"unknown language {lang!r}")
    for st in strategies:
        if st not in STRATEGIES:
            raise ValidationError(f"unknown strategy {st!r}")
    table = KeyTable(dataset, space)
    splits = list(_train_test(pairs, folds, seed))
    rows: list[ExperimentRow] = []
    for S in S_list:
        for lang in languages:
            for strategy in (("none",) if lang in STRATEGY_FREE else strategies):
                for fold, train, test in splits:
                    model, assign = train_multi_round(
                        dataset, train, space, S, lang, R,
                        OPTIMISTIC if strategy == "none" else strategy, seed, limits, table,
                    )
                    apply_us = []
                    if timing:
                        for m in model.rounds:
                            t0 = time.perf_counter()
                            assign_canopies(m, dataset)
                            apply_us.append((time.perf_counter() - t0) * 1e6 / max(len(dataset), 1))
                    biggest = max(assign.stats(r).max_size for r in range(len(assign.rounds)))
                    for r in range(1, R + 1):
                        used = min(r, len(assign.rounds))
                        sub = CanopyAssignment(assign.rounds[:used])
                        rows.append(ExperimentRow(
                            S, lang, strategy, r, fold, _fraction(sub, test),
                            sum(apply_us[:used]) if timing else None, biggest,
                        ))
    return rows


def report_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_row())
    return buf.getvalue()


def mean_recall(rows: Sequence[ExperimentRow]) -> dict[tuple[int, str, str, int], float]:
    """Average over folds, keyed by (S, language, strategy, rounds)."""
    acc: dict[tuple, list[float]] = {}
    for row in rows:
        acc.setdefault((row.S, row.language, row.strategy, row.rounds), []).append(row.recall)
    return {k: float(np.mean(v)) for k, v in acc.items()}


def best_strategy_recall(rows: Sequence[ExperimentRow]) -> dict[tuple[int, str, int], float]:
    """Best strategy per (S, language, rounds), after averaging over folds."""
    best: dict[tuple, float] = {}
    for (S, lang, _, r), value in mean_recall(rows).items():
        key = (S, lang, r)
        best[key] = max(best.get(key, value), value)
    return best
