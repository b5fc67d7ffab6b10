from govdag.sandbox.feedback import Diagnostic, advice_for, build_feedback, make_diagnostic
from govdag.sandbox.loop import DEFAULT_MAX_ITER, LoopResult, debug_loop
from govdag.sandbox.postcheck import check_post
from govdag.sandbox.runner import (
    DEFAULT_INTERPRETERS,
    ExecutionOutcome,
    SandboxLimits,
    run_sandboxed,
    stage_job,
)

__all__ = [
    "DEFAULT_INTERPRETERS",
    "DEFAULT_MAX_ITER",
    "Diagnostic",
    "ExecutionOutcome",
    "LoopResult",
    "SandboxLimits",
    "advice_for",
    "build_feedback",
    "check_post",
    "debug_loop",
    "make_diagnostic",
    "run_sandboxed",
    "stage_job",
]
