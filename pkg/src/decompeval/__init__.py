"""Differential-testing harness for Java bytecode decompilers.

Pipeline: compile a corpus, decompile it, recompile the output, run the
original tests against the recompiled classes, and classify every
⟨class, compiler, decompiler⟩ case. Quality indicators: syntactic
correctness (recompilability), syntactic distortion (tree edit distance
against the original source), and semantic equivalence modulo inputs
(bytecode equivalence or test passage).
"""

from .pipeline import (
    CaseKey,
    CaseResult,
    OutcomeCategory,
    ResultSet,
    RunContext,
    TestMap,
    evaluate_case,
    evaluate_matrix,
    resultset_load,
    resultset_store,
)

__version__ = "0.1.0"

__all__ = [
    "CaseKey",
    "CaseResult",
    "OutcomeCategory",
    "ResultSet",
    "RunContext",
    "TestMap",
    "evaluate_case",
    "evaluate_matrix",
    "resultset_load",
    "resultset_store",
    "__version__",
]
