from govdag.benchkit.compose import combine_objectives, compose_dag_task, dag_score, dag_weights
from govdag.benchkit.consistency import ConsistencyResult, consistency_check
from govdag.benchkit.evaluators import (
    EvalOutcome,
    eval_classification,
    eval_dedup,
    eval_filtering,
    eval_imputation,
    eval_integration,
    eval_refinement,
)
from govdag.benchkit.noise import (
    NoiseRecipe,
    build_noise_recipe,
    generate_eval_script,
    generate_noise_code,
    reverse_objective,
    synthesize_noise,
)
from govdag.benchkit.scoring import (
    score_dag_outputs,
    score_operator_output,
    score_with_binding,
    stage_gt_path,
    stage_raw_path,
)

__all__ = [
    "ConsistencyResult",
    "EvalOutcome",
    "NoiseRecipe",
    "build_noise_recipe",
    "combine_objectives",
    "compose_dag_task",
    "consistency_check",
    "dag_score",
    "dag_weights",
    "eval_classification",
    "eval_dedup",
    "eval_filtering",
    "eval_imputation",
    "eval_integration",
    "eval_refinement",
    "generate_eval_script",
    "generate_noise_code",
    "reverse_objective",
    "score_dag_outputs",
    "score_operator_output",
    "score_with_binding",
    "stage_gt_path",
    "stage_raw_path",
    "synthesize_noise",
]
