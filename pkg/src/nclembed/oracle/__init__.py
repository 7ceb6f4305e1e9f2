"""Bounded finite-model oracle: direct semantics, finite HOL evaluation, bounded search."""
from .decide import (
    AxiomViolation, BoundedVerdict, Countermodel, Disagreement, FaithfulnessReport,
    NoCountermodelWithinBounds, check_faithfulness, decide_bounded, effective_bounds,
    signature_for,
)
from .direct import DirectEvaluator, OracleLogic, eval_direct, oracle_logic
from .hol import FiniteInterp, eval_hol, interp_from_batch
from .models import (
    Bounds, FiniteModel, ModelBatch, ModelSignature, all_relations, cj_tables, cj_violations,
    cached_batches, enumerate_batches, enumerate_models, relation_tables,
)
