"""Error balls and code-size bounds for deletions, insertions, substitutions and
adjacent transpositions, with exact small-length extremal codes for comparison."""

from .ballmath import SizeBounds, b11_size, b11_size_exact, b11_size_lower, ball_bounds
from .codebounds import (
    BoundParams,
    BoundValue,
    CheckMode,
    WeightKind,
    WeightScheme,
    certificate_bound,
    certificate_check,
    make_weight_scheme,
    redundancy_lower,
    threshold_n,
)
from .errorballs import Ball, ChannelKind, ChannelSpec, enumerate_ball, interleaved_ball
from .errors import (
    AlphabetError,
    BudgetExceeded,
    DLBoundsError,
    IllegalTranspositionError,
    ParseError,
    PreconditionError,
)
from .extremal import Code, conflict_graph, max_code_exact, max_code_greedy, verify_code
from .seqcore import GapRule, Word, format_sequence, parse_sequence, run_count, run_stats

__version__ = "0.1.0"

__all__ = [
    "AlphabetError",
    "Ball",
    "BoundParams",
    "BoundValue",
    "BudgetExceeded",
    "ChannelKind",
    "ChannelSpec",
    "CheckMode",
    "Code",
    "DLBoundsError",
    "GapRule",
    "IllegalTranspositionError",
    "ParseError",
    "PreconditionError",
    "SizeBounds",
    "WeightKind",
    "WeightScheme",
    "Word",
    "b11_size",
    "b11_size_exact",
    "b11_size_lower",
    "ball_bounds",
    "certificate_bound",
    "certificate_check",
    "conflict_graph",
    "enumerate_ball",
    "format_sequence",
    "interleaved_ball",
    "make_weight_scheme",
    "max_code_exact",
    "max_code_greedy",
    "parse_sequence",
    "redundancy_lower",
    "run_count",
    "run_stats",
    "threshold_n",
    "verify_code",
]
