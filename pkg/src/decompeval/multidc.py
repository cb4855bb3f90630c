"""Meta-decompiler: try decompilers in ranked order, keep the first
recompilable result.

The ranking orders decompilers by their semantic success rate on a prior
results file; for one unit the attempts are strictly sequential, stopping
as soon as a decompiler's output recompiles.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pipeline import (
    CORRECT_CATEGORIES,
    RECOMPILABLE_CATEGORIES,
    CaseKey,
    CaseResult,
    OutcomeCategory,
    ResultSet,
    RunContext,
    evaluate_case,
)


class EmptyResultSet(Exception):
    """No cases to rank decompilers from."""


@dataclass(frozen=True)
class DecompilerRanking:
    order: tuple  # decompiler ids, best first
    provenance: str  # "from-results" | "explicit"
    rates: dict  # id -> success rate used for ordering (empty for explicit)

    def __post_init__(self):
        if len(set(self.order)) != len(self.order):
            raise ValueError("duplicate decompiler id in ranking")


@dataclass(frozen=True)
class MultiDcOutcome:
    result: CaseResult
    chosen: str
    attempted: tuple  # every decompiler id tried, in order


def rank_decompilers(results: ResultSet) -> DecompilerRanking:
    """Order decompilers by rate of semantically correct results over
    tested cases, descending; ties break lexicographically by id."""
    if not results.results:
        raise EmptyResultSet("cannot rank decompilers from an empty result set")
    tested = {}
    correct = {}
    for r in results.results:
        d = r.key.decompiler
        tested.setdefault(d, 0)
        correct.setdefault(d, 0)
        if r.category is OutcomeCategory.NOT_TESTED:
            continue
        tested[d] += 1
        if r.category in CORRECT_CATEGORIES:
            correct[d] += 1
    rates = {d: (correct[d] / tested[d] if tested[d] else 0.0) for d in tested}
    order = tuple(sorted(rates, key=lambda d: (-rates[d], d)))
    return DecompilerRanking(order=order, provenance="from-results", rates=rates)


def explicit_ranking(order) -> DecompilerRanking:
    return DecompilerRanking(order=tuple(order), provenance="explicit", rates={})


def multi_decompile(project: str, unit: str, compiler: str,
                    ranking: DecompilerRanking, ctx: RunContext, *,
                    fallback_on_tests: bool = False) -> MultiDcOutcome:
    """Evaluate one unit against decompilers in ranking order.

    Stops at the first recompilable result (or, with fallback_on_tests, the
    first semantically correct one). If nothing qualifies the last
    attempt's result is returned. InfrastructureError propagates.
    """
    if not ranking.order:
        raise ValueError("empty ranking")
    accept = CORRECT_CATEGORIES if fallback_on_tests else RECOMPILABLE_CATEGORIES
    attempted = []
    last = None
    for decompiler in ranking.order:
        key = CaseKey(project, unit, compiler, decompiler)
        attempted.append(decompiler)
        last = evaluate_case(key, ctx)
        if last.category in accept:
            return MultiDcOutcome(result=last, chosen=decompiler,
                                  attempted=tuple(attempted))
    return MultiDcOutcome(result=last, chosen=attempted[-1],
                          attempted=tuple(attempted))
