from __future__ import annotations

import hashlib
import json
from pathlib import Path

import pytest

from govdag.core.types import GovernanceContract, OperatorNode, Predicate
from govdag.errors import SandboxConfigError
from govdag.executor.codegen import CodeArtifact
from govdag.gateway.mock import MockBackend
from govdag.sandbox.feedback import advice_for, build_feedback, make_diagnostic
from govdag.sandbox.loop import debug_loop
from govdag.sandbox.postcheck import check_post
from govdag.sandbox.runner import ExecutionOutcome, SandboxLimits, run_sandboxed

LIMITS = SandboxLimits(wall_clock_s=20.0)


def artifact(source: str) -> CodeArtifact:
    return CodeArtifact(node_id="n1", source=source)


def write_jsonl(path: Path, rows) -> Path:
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def input_file(tmp_path):
    return write_jsonl(tmp_path / "rows.jsonl", [{"id": 1, "age": 30}, {"id": 2, "age": 31}])


COPY_SCRIPT = """
import json, shutil
from pathlib import Path
job = json.loads(Path("job.json").read_text())
shutil.copyfile(job["inputs"][0], job["output"])
"""


def test_successful_run(tmp_path, input_file):
    outcome = run_sandboxed(artifact(COPY_SCRIPT), [input_file], LIMITS, workdir=tmp_path / "w")
    assert outcome.status == "ok"
    assert outcome.exit_code == 0
    assert (tmp_path / "w" / "out" / "result").is_file()
    assert (tmp_path / "w" / "run.log").is_file()


def test_timeout_enforced_within_grace(tmp_path, input_file):
    limits = SandboxLimits(wall_clock_s=2.0)
    outcome = run_sandboxed(
        artifact("while True:\n    pass\n"), [input_file], limits, workdir=tmp_path / "w"
    )
    assert outcome.status == "timeout"
    assert outcome.duration_s < 3.0  # < 1 s grace over the 2 s budget


FAILING_SCRIPT = """\
import json
from pathlib import Path


def helper(rows):
    return rows["missing_key"]


def main():
    job = json.loads(Path("job.json").read_text())
    helper({})


main()
"""


def test_uncaught_exception_captures_trace_and_span(tmp_path, input_file):
    outcome = run_sandboxed(artifact(FAILING_SCRIPT), [input_file], LIMITS, workdir=tmp_path / "w")
    assert outcome.status == "error"
    assert outcome.exit_code == 1
    assert outcome.stack_trace is not None
    assert "KeyError" in outcome.stack_trace
    # deepest frame inside the script is the failing line of helper()
    assert outcome.offending_span == (6, 6)
    assert FAILING_SCRIPT.splitlines()[5].strip() == 'return rows["missing_key"]'


def test_traceback_paths_are_workdir_relative(tmp_path, input_file):
    outcome = run_sandboxed(artifact(FAILING_SCRIPT), [input_file], LIMITS, workdir=tmp_path / "w")
    assert str(tmp_path) not in outcome.stderr


HOSTILE_MUTATION = """
import json, os, stat
from pathlib import Path
job = json.loads(Path("job.json").read_text())
for name in job["inputs"]:
    path = Path(name)
    try:
        os.chmod(path, stat.S_IWUSR | stat.S_IRUSR)
        path.write_text("corrupted")
    except OSError:
        pass
Path(job["output"]).write_text("done")
"""


def test_original_inputs_survive_mutation_attempts(tmp_path, input_file):
    before = hashlib.sha256(input_file.read_bytes()).hexdigest()
    outcome = run_sandboxed(artifact(HOSTILE_MUTATION), [input_file], LIMITS, workdir=tmp_path / "w")
    after = hashlib.sha256(input_file.read_bytes()).hexdigest()
    assert before == after  # the child only ever saw a copy
    assert outcome.status == "ok"


def test_oversized_output_truncated(tmp_path, input_file):
    limits = SandboxLimits(wall_clock_s=20.0, max_output_bytes=4096)
    outcome = run_sandboxed(
        artifact("print('A' * 100000)"), [input_file], limits, workdir=tmp_path / "w"
    )
    assert outcome.status == "ok"
    assert outcome.stdout_truncated
    assert len(outcome.stdout) < 5000
    assert "[output truncated]" in outcome.stdout


def test_missing_interpreter_is_config_error(tmp_path, input_file):
    bad = CodeArtifact(node_id="n", source="x", language_tag="cobol")
    with pytest.raises(SandboxConfigError, match="cobol"):
        run_sandboxed(bad, [input_file], LIMITS, workdir=tmp_path / "w")


def test_duplicate_input_basenames_are_disambiguated(tmp_path):
    a = write_jsonl(tmp_path / "a" / "rows.jsonl", [{"id": 1}]) if (tmp_path / "a").mkdir() is None else None
    b = write_jsonl(tmp_path / "b" / "rows.jsonl", [{"id": 2}]) if (tmp_path / "b").mkdir() is None else None
    outcome = run_sandboxed(artifact(COPY_SCRIPT), [a, b], LIMITS, workdir=tmp_path / "w")
    assert outcome.status == "ok"
    staged = sorted(p.name for p in (tmp_path / "w" / "inputs").iterdir())
    assert staged == ["rows.jsonl", "rows_2.jsonl"]


# -- post-condition checks --


def node_with_post(*post: Predicate) -> OperatorNode:
    return OperatorNode(id="n1", abstract_op="Op", contract=GovernanceContract(post=tuple(post)))


def ok_outcome() -> ExecutionOutcome:
    return ExecutionOutcome(status="ok", exit_code=0, stdout="", stderr="", duration_s=0.1)


def test_check_post_flags_null_cell(tmp_path):
    out = write_jsonl(tmp_path / "o.jsonl", [{"id": 1, "age": 30}, {"id": 2, "age": None}])
    violated = check_post(ok_outcome(), node_with_post(Predicate.no_nulls("age")), [out])
    assert violated == [Predicate.no_nulls("age")]


def test_check_post_empty_contract(tmp_path):
    out = write_jsonl(tmp_path / "o.jsonl", [{"id": 1}])
    assert check_post(ok_outcome(), node_with_post(), [out]) == []


def test_check_post_value_format_iso_dates(tmp_path):
    out = write_jsonl(tmp_path / "o.jsonl", [{"date": "2024-01-02"}, {"date": "2023-12-31"}])
    pred = Predicate.value_format("date", r"\d{4}-\d{2}-\d{2}")
    assert check_post(ok_outcome(), node_with_post(pred), [out]) == []
    bad = write_jsonl(tmp_path / "b.jsonl", [{"date": "01/02/2024"}])
    assert check_post(ok_outcome(), node_with_post(pred), [bad]) == [pred]


def test_check_post_missing_output_violates_everything(tmp_path):
    preds = (Predicate.no_nulls("a"), Predicate.row_count_min(1))
    violated = check_post(ok_outcome(), node_with_post(*preds), [tmp_path / "absent.jsonl"])
    assert violated == list(preds)


def test_check_post_other_kinds(tmp_path):
    out = write_jsonl(tmp_path / "o.jsonl", [{"id": 1, "k": "a"}, {"id": 2, "k": "a"}])
    assert check_post(ok_outcome(), node_with_post(Predicate.unique_key("id")), [out]) == []
    assert check_post(ok_outcome(), node_with_post(Predicate.unique_key("k")), [out]) == [
        Predicate.unique_key("k")
    ]
    assert check_post(ok_outcome(), node_with_post(Predicate.row_count_min(3)), [out]) == [
        Predicate.row_count_min(3)
    ]
    assert check_post(ok_outcome(), node_with_post(Predicate.file_format("jsonl")), [out]) == []
    assert check_post(ok_outcome(), node_with_post(Predicate.type_is("id", "integer")), [out]) == []


def test_check_post_requires_ok_outcome(tmp_path):
    failed = ExecutionOutcome(status="error", exit_code=1, stdout="", stderr="", duration_s=0.1)
    with pytest.raises(ValueError):
        check_post(failed, node_with_post(), [tmp_path / "x"])


# -- feedback --


def test_feedback_contains_stderr_verbatim():
    outcome = ExecutionOutcome(
        status="error", exit_code=1, stdout="", stderr="SomeError: exploded here",
        duration_s=0.1, stack_trace="Traceback...", offending_span=(3, 3),
    )
    diag = make_diagnostic(outcome, [], "ctx", "a\nb\nc\nd", abstract_op="Op")
    prompt = build_feedback(diag)
    assert "SomeError: exploded here" in prompt
    assert "ctx" in prompt
    assert ">>    3 | c" in prompt


def test_feedback_contract_only_failure_mentions_null_advice():
    diag = make_diagnostic(ok_outcome(), [Predicate.no_nulls("creation_date")], "ctx", "code")
    prompt = build_feedback(diag)
    assert "violates its governance contract" in prompt
    assert "handle potential null values in column 'creation_date'" in prompt


def test_feedback_notes_truncation():
    outcome = ExecutionOutcome(
        status="error", exit_code=1, stdout="", stderr="partial",
        duration_s=0.1, stderr_truncated=True,
    )
    prompt = build_feedback(make_diagnostic(outcome, [], "ctx", "code"))
    assert "truncated" in prompt


def test_advice_covers_every_kind():
    preds = [
        Predicate.no_nulls("a"),
        Predicate.type_is("a", "real"),
        Predicate.value_format("a", "x"),
        Predicate.unique_key("a"),
        Predicate.column_exists("a"),
        Predicate.row_count_min(1),
        Predicate.file_format("csv"),
    ]
    for pred in preds:
        assert advice_for(pred)


# -- debug loop --


def _loop_backend(broken: str, fixed: str) -> MockBackend:
    def reply(prompt: str) -> str:
        if prompt.startswith("# feedback prompt"):
            return f"```python\n{fixed}```"
        return f"```python\n{broken}```"

    return MockBackend(reply)


def _run_loop(tmp_path, input_file, initial_source, backend, max_iter=5):
    node = node_with_post(Predicate.row_count_min(1))
    job = {"inputs": [f"inputs/{input_file.name}"], "output": "out/result.jsonl", "params": {}}
    return debug_loop(
        node,
        artifact(initial_source),
        SandboxLimits(wall_clock_s=20.0),
        max_iter,
        backend,
        inputs=[input_file],
        job=job,
        task_context="ctx",
        workdir_root=tmp_path / "loop",
    )


def test_loop_immediate_success_is_d1(tmp_path, input_file):
    result = _run_loop(tmp_path, input_file, COPY_SCRIPT, MockBackend())
    assert result.iterations == 1
    assert result.compliant
    assert result.output_path.is_file()


def test_loop_fail_once_then_fixed_is_d2(tmp_path, input_file):
    backend = _loop_backend("raise RuntimeError('broken')", COPY_SCRIPT)
    result = _run_loop(tmp_path, input_file, "raise RuntimeError('broken')", backend)
    assert result.iterations == 2
    assert result.compliant
    assert result.outcome.status == "ok"


def test_loop_always_failing_hits_cap(tmp_path, input_file):
    backend = _loop_backend("raise RuntimeError('x')", "raise RuntimeError('x')")
    result = _run_loop(tmp_path, input_file, "raise RuntimeError('x')", backend, max_iter=5)
    assert result.iterations == 5
    assert not result.compliant
    assert result.outcome.status == "error"


def test_loop_contract_violation_drives_retry(tmp_path, input_file):
    # ok status but empty output -> post row_count_min(1) violated -> feedback path
    empty_writer = """
import json
from pathlib import Path
job = json.loads(Path("job.json").read_text())
Path(job["output"]).write_text("")
"""
    backend = _loop_backend(empty_writer, COPY_SCRIPT)
    result = _run_loop(tmp_path, input_file, empty_writer, backend)
    assert result.iterations == 2
    assert result.compliant


def test_loop_gateway_error_aborts_with_last_outcome(tmp_path, input_file):
    def reply(prompt: str) -> str:
        return "never a code fence"

    result = _run_loop(tmp_path, input_file, "raise RuntimeError('x')", MockBackend(reply), max_iter=4)
    assert result.gateway_error is not None
    assert result.iterations == 1
    assert result.outcome.status == "error"


def test_loop_rejects_bad_max_iter(tmp_path, input_file):
    with pytest.raises(ValueError):
        _run_loop(tmp_path, input_file, COPY_SCRIPT, MockBackend(), max_iter=0)
