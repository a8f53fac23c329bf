"""Learned, size-bounded blocking for entity resolution."""

from .blktree import (
    LANGUAGES,
    STRATEGIES,
    BlkNode,
    BlockingModel,
    BuildLimits,
    assign_canopies,
    canopy_key,
    elim_count,
    learn,
    load_model,
    save_model,
)
from .core import (
    CanopyAssignment,
    CanopyStats,
    Dataset,
    ParseError,
    Record,
    SchemaTypeError,
    TrainingSet,
    ValidationError,
    covered_pairs,
    load_dataset,
    load_pairs,
    recall,
)
from .drilldown import DccPartition, InfeasibleError, OrderedDomain, drill_down, drill_down_attribute
from .hashing import HashSpec, apply_hash, enumerate_hash_space, make_spec
from .machines import MachineAssignment, assign_to_machines, assignment_cost
from .multiround import MultiRoundModel, nondisjoint_cost, train_multi_round
from .rollup import RollupPlan, rollup

__version__ = "0.1.0"
