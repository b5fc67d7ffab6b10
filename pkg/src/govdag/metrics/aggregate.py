"""Aggregate per-task run records into the benchmark metric suite.

Score-scale conventions: ATS/TSR/CRR/Avg.Score are carried as 0-100 reals
and rounded only at presentation time. Ratios that would divide by zero
are reported as absent (None), never as 0.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from typing import Iterable, Sequence

from govdag.core.types import RunRecord

#: Success threshold on a task score S_i: a task "fully achieves" its
#: objective when its evaluator emits full marks; 0.99 absorbs float noise.
TAU_SUCC = 0.99


def is_success(score: float, tau: float = TAU_SUCC) -> bool:
    return score >= tau


@dataclass(frozen=True)
class DerivedMetrics:
    """Efficiency metrics derived from the headline rates.

    alignment         TSR / CRR
    contract_gap      CRR - TSR, in percentage points
    debug_efficiency  TSR / ADI
    tokens_per_success  avg tokens / (TSR/100)
    """

    alignment: float | None
    contract_gap: float
    debug_efficiency: float | None
    tokens_per_success: float | None


@dataclass(frozen=True)
class ScoreReport:
    ats: float
    tsr: float
    crr: float
    avg_score: float
    adi: float
    avg_tokens: float
    total_cost: float
    gen_time_s: float
    exec_time_s: float
    n_tasks: int
    alignment: float | None = None
    contract_gap: float | None = None
    debug_efficiency: float | None = None
    tokens_per_success: float | None = None

    @classmethod
    def from_rates(
        cls,
        tsr: float,
        crr: float,
        adi: float,
        avg_tokens: float,
        ats: float = 0.0,
        n_tasks: int = 0,
    ) -> "ScoreReport":
        """Build a report straight from tabulated rates (no records)."""
        report = cls(
            ats=ats,
            tsr=tsr,
            crr=crr,
            avg_score=(ats + tsr + crr) / 3.0,
            adi=adi,
            avg_tokens=avg_tokens,
            total_cost=0.0,
            gen_time_s=0.0,
            exec_time_s=0.0,
            n_tasks=n_tasks,
        )
        return with_derived(report)

    def to_obj(self) -> dict:
        return {
            "ats": self.ats,
            "tsr": self.tsr,
            "crr": self.crr,
            "avg_score": self.avg_score,
            "adi": self.adi,
            "avg_tokens": self.avg_tokens,
            "total_cost": self.total_cost,
            "gen_time_s": self.gen_time_s,
            "exec_time_s": self.exec_time_s,
            "n_tasks": self.n_tasks,
            "alignment": self.alignment,
            "contract_gap": self.contract_gap,
            "debug_efficiency": self.debug_efficiency,
            "tokens_per_success": self.tokens_per_success,
        }


def derived(report: ScoreReport) -> DerivedMetrics:
    """Alignment, contract gap, debugging efficiency and tokens-per-success."""
    alignment = report.tsr / report.crr if report.crr > 0 else None
    gap = report.crr - report.tsr
    efficiency = report.tsr / report.adi if report.adi > 0 else None
    tokens_per_success = report.avg_tokens / (report.tsr / 100.0) if report.tsr > 0 else None
    return DerivedMetrics(
        alignment=alignment,
        contract_gap=gap,
        debug_efficiency=efficiency,
        tokens_per_success=tokens_per_success,
    )


def with_derived(report: ScoreReport) -> ScoreReport:
    extras = derived(report)
    return ScoreReport(
        ats=report.ats,
        tsr=report.tsr,
        crr=report.crr,
        avg_score=report.avg_score,
        adi=report.adi,
        avg_tokens=report.avg_tokens,
        total_cost=report.total_cost,
        gen_time_s=report.gen_time_s,
        exec_time_s=report.exec_time_s,
        n_tasks=report.n_tasks,
        alignment=extras.alignment,
        contract_gap=extras.contract_gap,
        debug_efficiency=extras.debug_efficiency,
        tokens_per_success=extras.tokens_per_success,
    )


def aggregate(records: Sequence[RunRecord] | Iterable[RunRecord]) -> ScoreReport:
    """Fold run records into the metric suite.

    ATS = 100/N * sum(S_i); TSR = successes/N; CRR = runnable/generated;
    ADI = mean debug cycles; Avg.Score = mean of ATS, TSR, CRR.
    """
    records = list(records)
    if not records:
        raise ValueError("aggregate() requires at least one record")
    n = len(records)
    n_succ = sum(1 for r in records if r.success)
    n_run = sum(1 for r in records if r.runnable)
    # fsum: exactly-rounded sums, so aggregation is permutation-invariant
    ats = 100.0 / n * math.fsum(r.score for r in records)
    tsr = 100.0 * n_succ / n
    crr = 100.0 * n_run / n
    report = ScoreReport(
        ats=ats,
        tsr=tsr,
        crr=crr,
        avg_score=(ats + tsr + crr) / 3.0,
        adi=sum(r.debug_iterations for r in records) / n,
        avg_tokens=sum(r.tokens for r in records) / n,
        total_cost=math.fsum(r.cost for r in records),
        gen_time_s=math.fsum(r.gen_time_s for r in records),
        exec_time_s=math.fsum(r.exec_time_s for r in records),
        n_tasks=n,
    )
    return with_derived(report)
