"""Step-size-adaptive search heuristics maintaining maximal feasible dual
solutions (2-approximate weighted vertex covers) under dynamic graph edits,
with exact arithmetic over Q(alpha^(1/4)) and a seeded benchmark harness."""

from .numeric import (TAU, Alpha, RadicalValue, canonicalize_alpha,
                      float_sign, float_value, interval_sign, q_max_for,
                      sign_of_coeffs, step_value)
from .graph import Edit, EditDiff, WeightedGraph, apply_edit, canonical_edge
from .dual import (CoverCertificate, DualSolution, FitnessOutcome,
                   extract_cover, fitness, is_mfds, sign, violating_edges,
                   violating_vertices)
from .oracle import (ExactCoverResult, enumerate_mfds, exact_min_wvc,
                     exhaustive_min_wvc, reference_fitness,
                     validate_mfds_naive)
from .instances import (HARD_VARIANTS, VARIANTS, DynamicInstance, derive_seed,
                        greedy_mfds, hard_instance, make_dynamic,
                        random_dynamic, random_edit, random_instance)
from .heuristics import (ALGORITHMS, Checkpoint, MutationRecord, RunConfig,
                         RunResult, StepState, TransitionRecord, run,
                         run_reference, select_and_adapt)
from .harness import (BenchCell, BenchPlan, BenchRecord, ScalingCell,
                      ScalingReport, bound_shape, execute_plan,
                      format_scaling_report, read_records, run_trial,
                      scaling_report)

__version__ = "0.1.0"

__all__ = [
    "TAU", "Alpha", "RadicalValue", "canonicalize_alpha", "float_sign",
    "float_value", "interval_sign", "q_max_for", "sign_of_coeffs",
    "step_value",
    "Edit", "EditDiff", "WeightedGraph", "apply_edit", "canonical_edge",
    "CoverCertificate", "DualSolution", "FitnessOutcome", "extract_cover",
    "fitness", "is_mfds", "sign", "violating_edges", "violating_vertices",
    "ExactCoverResult", "enumerate_mfds", "exact_min_wvc",
    "exhaustive_min_wvc", "reference_fitness", "validate_mfds_naive",
    "HARD_VARIANTS", "VARIANTS", "DynamicInstance", "derive_seed",
    "greedy_mfds", "hard_instance", "make_dynamic", "random_dynamic",
    "random_edit", "random_instance",
    "ALGORITHMS", "Checkpoint", "MutationRecord", "RunConfig", "RunResult",
    "StepState", "TransitionRecord", "run", "run_reference",
    "select_and_adapt",
    "BenchCell", "BenchPlan", "BenchRecord", "ScalingCell", "ScalingReport",
    "bound_shape", "execute_plan", "format_scaling_report", "read_records",
    "run_trial", "scaling_report",
    "__version__",
]
