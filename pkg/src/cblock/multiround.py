"""Non-disjoint blocking as successive disjoint rounds on the residual pairs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .blktree import OPTIMISTIC, BlockingModel, BuildLimits, KeyTable, assign_canopies, learn
from .core import CanopyAssignment, CanopyStats, Dataset, Pair, TrainingSet, ValidationError, covered_pairs
from .hashing import HashSpec


@dataclass
class MultiRoundModel:
    rounds: list[BlockingModel]
    covered_per_round: list[list[Pair]] = field(default_factory=list)

    def to_json(self) -> dict:
        first = self.rounds[0] if self.rounds else None
        return {
            "language": first.language if first else None,
            "max_size": first.max_size if first else None,
            "seed": first.seed if first else None,
            "rounds": [m.to_json() for m in self.rounds],
            "covered_per_round": [[list(p) for p in c] for c in self.covered_per_round],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "MultiRoundModel":
        return cls(
            [BlockingModel.from_json(m) for m in obj["rounds"]],
            [[tuple(p) for p in c] for c in obj.get("covered_per_round", [])],
        )


def apply_rounds(models: Sequence[BlockingModel], dataset: Dataset) -> CanopyAssignment:
    rounds = []
    for m in models:
        rounds.extend(assign_canopies(m, dataset)[0].rounds)
    return CanopyAssignment(rounds)


def train_multi_round(
    dataset: Dataset,
    pairs: TrainingSet,
    space: Sequence[HashSpec],
    S: int,
    learner: str = "blktree",
    R: int = 5,
    strategy: str = OPTIMISTIC,
    seed: int = 42,
    limits: Optional[BuildLimits] = None,
    table: Optional[KeyTable] = None,
) -> tuple[MultiRoundModel, CanopyAssignment]:
    """Train up to R rounds, each on the pairs no earlier round co-blocked.

    Stops early once every pair is covered or a round covers nothing new.
    Round r uses seed + r for its random splits.
    """
    if R < 1:
        raise ValidationError("R must be >= 1")
    if table is None and learner != "random":
        table = KeyTable(dataset, space)
    residual = pairs
    models: list[BlockingModel] = []
    covered: list[list[Pair]] = []
    rounds: list[dict[str, str]] = []
    while len(residual) > 0 and len(models) < R:
        model = learn(learner, dataset, residual, space, S, strategy, limits, seed + len(models), table)
        assign, _ = assign_canopies(model, dataset, table=table)
        newly = covered_pairs(assign, residual)
        models.append(model)
        covered.append(newly)
        rounds.extend(assign.rounds)
        if not newly:
            break
        residual = residual.without(newly)
    return MultiRoundModel(models, covered), CanopyAssignment(rounds)


def nondisjoint_cost(stats: Iterable[CanopyStats]) -> int:
    """max |C|^2 + sum |C| over the canopies of all rounds."""
    sizes = [n for st in stats for n in st.sizes.values()]
    if not sizes:
        raise ValidationError("no canopies")
    return max(sizes) ** 2 + sum(sizes)
