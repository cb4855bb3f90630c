"""Aggregation of a ResultSet into summary tables and analyses.

Everything here is a pure function over an immutable ResultSet: per
decompiler summary rows, a Pearson chi-squared test of compiler effect on
syntactic correctness, coverage partitions (which subset of decompilers
handles each unit correctly), and deceptive-decompilation attribution.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from dataclasses import dataclass

from .pipeline import (
    CORRECT_CATEGORIES,
    RECOMPILABLE_CATEGORIES,
    OutcomeCategory,
    ResultSet,
)


class DegenerateTable(Exception):
    """A contingency-table margin is zero; the statistic is undefined."""


class UnsupportedFormat(Exception):
    pass


@dataclass(frozen=True)
class SummaryRow:
    decompiler: str
    n_units: int  # all cases for this decompiler
    n_tested: int  # cases with covering tests
    n_recompilable: int
    recompilable_ratio: float  # over all units
    n_pass_tests: int
    pass_ratio: float  # over tested units
    n_deceptive: int
    distortion_mean: float | None
    distortion_median: float | None
    distortion_q1: float | None
    distortion_q3: float | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ChiSquareResult:
    counts: tuple  # ((correct, incorrect) per compiler row)
    row_labels: tuple
    statistic: float
    p_value: float

    def to_dict(self) -> dict:
        return {"counts": [list(r) for r in self.counts],
                "rows": list(self.row_labels),
                "statistic": self.statistic, "p_value": self.p_value}


@dataclass(frozen=True)
class CoveragePartition:
    cells: dict  # frozenset of decompiler ids -> unit count
    total: int

    def unique_counts(self) -> dict:
        return {next(iter(s)): n for s, n in self.cells.items() if len(s) == 1}

    def all_handled(self, decompilers) -> int:
        return self.cells.get(frozenset(decompilers), 0)

    def none_handled(self) -> int:
        return self.cells.get(frozenset(), 0)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "cells": {"+".join(sorted(s)) if s else "(none)": n
                      for s, n in sorted(self.cells.items(),
                                         key=lambda kv: sorted(kv[0]))},
        }


def _distortion_stats(values):
    if not values:
        return None, None, None, None
    mean = statistics.fmean(values)
    median = statistics.median(values)
    if len(values) >= 2:
        q = statistics.quantiles(values, n=4, method="inclusive")
        q1, q3 = q[0], q[2]
    else:
        q1 = q3 = values[0]
    return mean, median, q1, q3


def aggregate(results: ResultSet) -> list:
    """One SummaryRow per decompiler with explicit dual denominators:
    recompilable is rated over all units, pass/deceptive over tested ones."""
    rows = []
    for decompiler in results.decompilers():
        cases = [r for r in results.results if r.key.decompiler == decompiler]
        tested = [r for r in cases if r.category is not OutcomeCategory.NOT_TESTED]
        recompilable = [r for r in cases if r.category in RECOMPILABLE_CATEGORIES]
        passing = [r for r in tested if r.category in CORRECT_CATEGORIES]
        deceptive = [r for r in tested if r.category is OutcomeCategory.DECEPTIVE]
        scores = [r.distortion.ratio for r in cases if r.distortion is not None]
        mean, median, q1, q3 = _distortion_stats(scores)
        rows.append(SummaryRow(
            decompiler=decompiler,
            n_units=len(cases),
            n_tested=len(tested),
            n_recompilable=len(recompilable),
            recompilable_ratio=len(recompilable) / len(cases) if cases else 0.0,
            n_pass_tests=len(passing),
            pass_ratio=len(passing) / len(tested) if tested else 0.0,
            n_deceptive=len(deceptive),
            distortion_mean=mean,
            distortion_median=median,
            distortion_q1=q1,
            distortion_q3=q3,
        ))
    return rows


def _gamma_p_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma by power series (x < a + 1)."""
    term = 1.0 / a
    total = term
    n = a
    for _ in range(500):
        n += 1.0
        term *= x / n
        total += term
        if abs(term) < abs(total) * 1e-15:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_q_contfrac(a: float, x: float) -> float:
    """Regularized upper incomplete gamma by continued fraction (x >= a + 1),
    modified Lentz algorithm."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a)."""
    if a <= 0 or x < 0:
        raise ValueError("gamma_q requires a > 0 and x >= 0")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def chi_squared_2x2(table) -> tuple:
    """Plain Pearson chi-squared on a 2x2 table, df = 1, no continuity
    correction; returns (statistic, p_value)."""
    (a, b), (c, d) = table
    rows = (a + b, c + d)
    cols = (a + c, b + d)
    total = rows[0] + rows[1]
    if 0 in rows or 0 in cols:
        raise DegenerateTable(f"zero margin in {table}")
    statistic = 0.0
    for i, row in enumerate(((a, b), (c, d))):
        for j, observed in enumerate(row):
            expected = rows[i] * cols[j] / total
            statistic += (observed - expected) ** 2 / expected
    return statistic, gamma_q(0.5, statistic / 2.0)


def chi_squared_compiler_effect(results: ResultSet, decompiler: str) -> ChiSquareResult:
    """Does the compiler affect this decompiler's syntactic correctness?

    Builds the 2x2 table {compiler} x {recompilable, not} from the results."""
    compilers = results.compilers()
    if len(compilers) != 2:
        raise DegenerateTable(
            f"need exactly 2 compilers, found {list(compilers)}")
    counts = []
    for compiler in compilers:
        cases = [r for r in results.results
                 if r.key.decompiler == decompiler and r.key.compiler == compiler]
        ok = sum(1 for r in cases if r.category in RECOMPILABLE_CATEGORIES)
        counts.append((ok, len(cases) - ok))
    statistic, p = chi_squared_2x2(counts)
    return ChiSquareResult(counts=tuple(counts), row_labels=compilers,
                           statistic=statistic, p_value=p)


def coverage_partition(results: ResultSet) -> CoveragePartition:
    """Partition tested units by which decompilers handle them correctly."""
    decompilers = set(results.decompilers())
    units = {}
    skip = set()
    for r in results.results:
        unit = (r.key.project, r.key.unit, r.key.compiler)
        if r.category is OutcomeCategory.NOT_TESTED:
            skip.add(unit)
            continue
        handled = units.setdefault(unit, set())
        if r.category in CORRECT_CATEGORIES:
            handled.add(r.key.decompiler)
    cells = {}
    total = 0
    for unit, handled in units.items():
        if unit in skip:
            continue
        key = frozenset(handled & decompilers)
        cells[key] = cells.get(key, 0) + 1
        total += 1
    return CoveragePartition(cells=cells, total=total)


def deceptive_attribution(results: ResultSet) -> dict:
    """Per decompiler: how many units are Deceptive under one compiler only
    versus under both."""
    compilers = results.compilers()
    if len(compilers) != 2:
        raise ValueError(f"need exactly 2 compilers, found {list(compilers)}")
    c1, c2 = compilers
    out = {}
    for decompiler in results.decompilers():
        deceptive = {c: set() for c in compilers}
        for r in results.results:
            if (r.key.decompiler == decompiler
                    and r.category is OutcomeCategory.DECEPTIVE):
                deceptive[r.key.compiler].add((r.key.project, r.key.unit))
        both = deceptive[c1] & deceptive[c2]
        out[decompiler] = {
            f"{c1}-only": len(deceptive[c1] - both),
            f"{c2}-only": len(deceptive[c2] - both),
            "both": len(both),
        }
    return out


SUMMARY_COLUMNS = [
    "decompiler", "n_units", "n_tested", "n_recompilable",
    "recompilable_ratio", "n_pass_tests", "pass_ratio", "n_deceptive",
    "distortion_mean", "distortion_median", "distortion_q1", "distortion_q3",
]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def emit_summary(rows, fmt: str) -> str:
    """Render summary rows as csv, json or markdown text."""
    if fmt == "json":
        return json.dumps([r.to_dict() for r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for row in rows:
            data = row.to_dict()
            writer.writerow([_fmt(data[c]) for c in SUMMARY_COLUMNS])
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| Decompiler | Recompilable | PassTest | Deceptive | Distortion |",
                 "|---|---|---|---|---|"]
        for row in rows:
            recomp = f"{row.n_recompilable} ({row.recompilable_ratio:.2f})"
            passing = f"{row.n_pass_tests} ({row.pass_ratio:.2f})"
            dist = "" if row.distortion_mean is None else f"{row.distortion_mean:.2f}"
            lines.append(f"| {row.decompiler} | {recomp} | {passing} "
                         f"| {row.n_deceptive} | {dist} |")
        return "\n".join(lines) + "\n"
    raise UnsupportedFormat(fmt)
