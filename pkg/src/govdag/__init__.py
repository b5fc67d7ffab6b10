"""govdag: natural-language data governance as contract-checked pipelines.

A Planner turns an instruction into a DAG of abstract operators with
(pre, post) governance contracts, an Executor realizes each node as
script code via retrieval-augmented generation over an operator library,
and a sandboxed Evaluator drives the feedback loop until every node is
runnable and contract-compliant. The benchkit/metrics side synthesizes
noisy benchmark tasks and scores pipeline runs.
"""

__version__ = "0.1.0"
