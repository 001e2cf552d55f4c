"""Binary summation baseline: pairwise add and round in a balanced tree."""

import logging
import time

from ttspin.core.exceptions import StructureError
from ttspin.core.spin.terms import CPOperatorSum, cp_term_to_tt
from ttspin.core.summation.schemas import SummationReport
from ttspin.core.tt.arithmetic import add, norm
from ttspin.core.tt.rounding import round_tt
from ttspin.core.tt.schemas import RankProfile, TruncationPolicy
from ttspin.core.tt.tensor import TTOperator
from ttspin.schemas.enums import SummationMethod

logger = logging.getLogger(__name__)


def binary_sum(
    terms: CPOperatorSum, policy: TruncationPolicy | None = None
) -> tuple[TTOperator, SummationReport]:
    """Sum CP terms by pairwise addition with rounding after each addition.

    The report's rank_history holds every intermediate sum before its
    rounding, which is where memory peaks.

    Args:
        terms: CP sum.
        policy: Rounding policy applied after each addition.

    Returns:
        (TT operator, SummationReport).
    """
    policy = policy or TruncationPolicy()
    if terms.n_terms == 0:
        raise StructureError("cannot compress an empty CP sum")
    started = time.perf_counter()

    level = [cp_term_to_tt(term, terms.n_sites, terms.local_dim) for term in terms.terms]
    intermediate: list[RankProfile] = []
    discarded = 0.0
    cap_limited = False
    depth = 0
    while len(level) > 1:
        depth += 1
        merged = []
        for k in range(0, len(level) - 1, 2):
            total = add(level[k], level[k + 1])
            intermediate.append(total.rank_profile())
            rounded = round_tt(total, policy)
            discarded += rounded.truncation_error
            cap_limited = cap_limited or rounded.cap_limited
            merged.append(rounded)
        if len(level) % 2:
            merged.append(level[-1])
        level = merged
        logger.debug(
            "Binary summation level %d: %d partial sums, max rank %d",
            depth,
            len(level),
            max(max(t.ranks) for t in level),
        )

    result = round_tt(level[0], policy)
    discarded += result.truncation_error
    cap_limited = cap_limited or result.cap_limited
    result_norm = norm(result)
    estimate = discarded / result_norm if result_norm > 0 else 0.0
    if not intermediate:
        intermediate.append(result.rank_profile())

    elapsed = (time.perf_counter() - started) * 1e3
    logger.info(
        "Binary summation of %d terms: final max rank %d, peak effective rank %.2f",
        terms.n_terms,
        max(result.ranks),
        max(p.effective_rank for p in intermediate),
        extra={"n_terms": terms.n_terms, "estimate": estimate},
    )
    report = SummationReport(
        method=SummationMethod.BINARY,
        n_terms=terms.n_terms,
        sweeps_used=depth,
        converged=True,
        final_rel_error_estimate=estimate,
        error_history=[estimate],
        rank_history=intermediate,
        final_rank_profile=result.rank_profile(),
        cap_limited=cap_limited,
        wall_time_ms={"total": elapsed},
    )
    return result, report
