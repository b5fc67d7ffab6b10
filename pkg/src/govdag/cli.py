"""Command-line entry point.

Exit codes are stable across commands: 0 success, 1 task failures present,
2 configuration or usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from govdag.benchkit.compose import compose_dag_task
from govdag.benchkit.consistency import consistency_check
from govdag.benchkit.noise import build_noise_recipe, synthesize_noise
from govdag.bundled import sample_pack_path, seed_library_path, transcript_path
from govdag.core.manifest import load_pack, write_pack_meta, write_task
from govdag.core.tabular import sample_rows
from govdag.core.types import TaskLevel, TaskSpec
from govdag.errors import ConfigError, GovdagError, PlanningError
from govdag.executor.library import check_library, load_library
from govdag.gateway.base import Backend, CompletionParams
from govdag.gateway.live import HttpChatBackend
from govdag.gateway.pricing import load_pricing
from govdag.gateway.replay import RecordingBackend, ReplayBackend
from govdag.gateway.scripted import scripted_backend
from govdag.metrics.aggregate import aggregate
from govdag.metrics.report import read_run_log, render_table, report_to_json, write_run_log
from govdag.pipeline import RunConfig, plan_task, render_dag, run_pack
from govdag.planner.contracts import check_chain, schema_facts
from govdag.core.tabular import infer_schema
from govdag.sandbox.runner import SandboxLimits

EXIT_OK = 0
EXIT_TASK_FAILURES = 1
EXIT_CONFIG = 2


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _make_backend(config: RunConfig, base_url: str | None, record: Path | None) -> tuple[Backend, RecordingBackend | None]:
    if config.backend == "mock":
        backend: Backend = scripted_backend()
    elif config.backend == "replay":
        assert config.transcript is not None
        backend = ReplayBackend(config.transcript)
    else:
        if not base_url:
            raise ConfigError("live backend requires --base-url")
        backend = HttpChatBackend(base_url, config.model_id)
    recorder = None
    if record is not None:
        recorder = RecordingBackend(backend)
        backend = recorder
    return backend, recorder


def _run_options(fn):
    options = [
        click.option("--pack", "pack_path", type=click.Path(path_type=Path), default=None, help="Task pack directory (default: bundled sample pack)."),
        click.option("--library", "library_path", type=click.Path(path_type=Path), default=None, help="Operator library directory (default: bundled seed library)."),
        click.option("--backend", type=click.Choice(["live", "mock", "replay"]), default="mock", show_default=True),
        click.option("--model", "model_id", default="mock", show_default=True),
        click.option("--base-url", default=None, help="Chat-completion endpoint for --backend live."),
        click.option("--transcript", type=click.Path(path_type=Path), default=None, help="Transcript to replay (or 'bundled'/'bundled-no-rag')."),
        click.option("--record", type=click.Path(path_type=Path), default=None, help="Record every gateway turn to this transcript."),
        click.option("--ablate", type=click.Choice(["none", "no_planner", "no_rag"]), default="none", show_default=True),
        click.option("--max-iter", type=int, default=20, show_default=True),
        click.option("--k", type=int, default=4, show_default=True, help="Retrieval depth."),
        click.option("--parallel", type=int, default=1, show_default=True),
        click.option("--wall-clock", type=float, default=120.0, show_default=True, help="Sandbox wall-clock limit (s)."),
        click.option("--pricing", "pricing_path", type=click.Path(path_type=Path), default=None, help="JSON pricing table for cost accounting."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _resolve_transcript(transcript: Path | None) -> Path | None:
    if transcript is None:
        return None
    name = str(transcript)
    if name == "bundled":
        return transcript_path("run_replay")
    if name == "bundled-no-rag":
        return transcript_path("run_no_rag")
    return Path(transcript)


def _build_config(backend, model_id, transcript, ablate, max_iter, k, parallel, wall_clock, pricing_path) -> RunConfig:
    pricing = load_pricing(pricing_path) if pricing_path else None
    return RunConfig(
        backend=backend,
        model_id=model_id,
        limits=SandboxLimits(wall_clock_s=wall_clock),
        max_iter=max_iter,
        k=k,
        ablation=ablate,
        parallelism=parallel,
        transcript=_resolve_transcript(transcript),
        pricing=pricing,
        completion_params=CompletionParams(model_id=model_id),
    )


@click.group()
def main() -> None:
    """Natural-language data governance as contract-checked pipelines."""


@main.command("plan")
@click.argument("task_id")
@_run_options
def cmd_plan(task_id, pack_path, library_path, backend, model_id, base_url, transcript, record, ablate, max_iter, k, parallel, wall_clock, pricing_path):
    """Plan one task: ground the intent, extract contracts, synthesize the
    chain, check it and insert repairs."""
    try:
        config = _build_config(backend, model_id, transcript, ablate, max_iter, k, parallel, wall_clock, pricing_path)
        if config.ablation == "no_planner":
            raise ConfigError("`plan` is unavailable with --ablate no_planner: planning is disabled")
        pack = load_pack(pack_path or sample_pack_path())
        task = pack.task(task_id)
        gateway, recorder = _make_backend(config, base_url, record)
        dag, violations, intent = plan_task(pack, task, gateway, config)
        if recorder is not None and record is not None:
            recorder.save(record)
        if not intent.feasible:
            _fail(f"task '{task_id}' infeasible: {intent.infeasibility_reason}", EXIT_CONFIG)
        click.echo(render_dag(dag, violations))
        primary = pack.data_path(task, task.inputs[0])
        remaining = check_chain(dag, schema_facts(infer_schema(primary)))
        if remaining:
            click.echo("unrepaired violations:", err=True)
            for violation in remaining:
                click.echo(f"  {violation.edge}: {violation.unmet.describe()}", err=True)
            sys.exit(EXIT_TASK_FAILURES)
    except KeyError:
        _fail(f"no task '{task_id}' in pack", EXIT_CONFIG)
    except PlanningError as exc:
        _fail(str(exc), EXIT_TASK_FAILURES)
    except (ConfigError, GovdagError) as exc:
        _fail(str(exc), EXIT_CONFIG)


@main.command("run")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True, help="Output directory for the run log and report.")
@_run_options
def cmd_run(out_dir, pack_path, library_path, backend, model_id, base_url, transcript, record, ablate, max_iter, k, parallel, wall_clock, pricing_path):
    """Run a task pack end to end and write run_log.jsonl plus a report."""
    try:
        config = _build_config(backend, model_id, transcript, ablate, max_iter, k, parallel, wall_clock, pricing_path)
        pack = load_pack(pack_path or sample_pack_path())
        library = load_library(library_path or seed_library_path())
        gateway, recorder = _make_backend(config, base_url, record)
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        details = run_pack(pack, library, gateway, config, out_dir / "work")
        if recorder is not None and record is not None:
            recorder.save(record)
        records = [d.record for d in details]
        write_run_log(out_dir / "run_log.jsonl", records)
        report = aggregate(records)
        (out_dir / "report.json").write_text(report_to_json(report), encoding="utf-8")
        table = render_table({pack.pack_id: report})
        (out_dir / "report.md").write_text(table + "\n", encoding="utf-8")
        click.echo(table)
        failures = [d for d in details if not d.record.success]
        for detail in failures:
            click.echo(f"failed: {detail.record.task_id}" + (f" ({detail.error})" if detail.error else ""), err=True)
        sys.exit(EXIT_TASK_FAILURES if failures else EXIT_OK)
    except (ConfigError, GovdagError) as exc:
        _fail(str(exc), EXIT_CONFIG)


@main.group("bench")
def bench() -> None:
    """Benchmark construction and verification."""


@bench.command("build")
@click.option("--seed", "seed_path", type=click.Path(path_type=Path), default=None, help="Seed pack (default: bundled sample pack).")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--backend", type=click.Choice(["live", "mock", "replay"]), default="mock", show_default=True)
@click.option("--base-url", default=None)
@click.option("--model", "model_id", default="mock", show_default=True)
@click.option("--transcript", type=click.Path(path_type=Path), default=None, help="Transcript to replay (or 'bundled-bench').")
@click.option("--record", type=click.Path(path_type=Path), default=None)
@click.option("--compose", "compose_seeds", default=None, help="Comma-separated seed task ids for one extra DAG-level task.")
def cmd_bench_build(seed_path, out_dir, backend, base_url, model_id, transcript, record, compose_seeds):
    """Synthesize a new noisy task pack from a seed pack by objective
    reversal; tasks missing the consistency gate land in quarantine/."""
    try:
        if str(transcript) == "bundled-bench":
            transcript = transcript_path("bench_build")
        config = RunConfig(
            backend=backend,
            model_id=model_id,
            transcript=Path(transcript) if transcript else None,
            completion_params=CompletionParams(model_id=model_id),
        )
        gateway, recorder = _make_backend(config, base_url, record)
        seed_pack = load_pack(seed_path or sample_pack_path())
        out_dir = Path(out_dir)
        built, quarantined = _bench_build(seed_pack, out_dir, gateway, config, compose_seeds)
        if recorder is not None and record is not None:
            recorder.save(record)
        click.echo(f"built {built} task(s), quarantined {quarantined} at {out_dir}")
        sys.exit(EXIT_OK)
    except (ConfigError, GovdagError) as exc:
        _fail(str(exc), EXIT_CONFIG)


def _bench_build(seed_pack, out_dir: Path, gateway: Backend, config: RunConfig, compose_seeds: str | None) -> tuple[int, int]:
    import shutil

    out_dir.mkdir(parents=True, exist_ok=True)
    write_pack_meta(out_dir, pack_id=f"{seed_pack.pack_id}-rebuilt", alpha=seed_pack.alpha, frozen_scores=seed_pack.frozen_scores)
    quarantine_dir = out_dir / "quarantine"
    quarantined: list[dict] = []
    built = 0

    for task in seed_pack.tasks:
        if task.level is TaskLevel.DAG:
            continue
        gt_src = seed_pack.data_path(task, task.ground_truth)
        samples = sample_rows(gt_src)
        recipe = build_noise_recipe(task, samples, gateway, config.completion_params)
        new_task = TaskSpec(
            id=task.id,
            level=task.level,
            category=task.category,
            objective=task.objective,
            inputs=(f"data/noisy{gt_src.suffix}",),
            ground_truth=f"data/gt{gt_src.suffix}",
            evaluator=task.evaluator,
        )
        target_dir = write_task(out_dir, new_task)
        data_dir = target_dir / "data"
        data_dir.mkdir(exist_ok=True)
        shutil.copyfile(gt_src, data_dir / f"gt{gt_src.suffix}")
        outcome, noisy = synthesize_noise(recipe, data_dir / f"gt{gt_src.suffix}", data_dir / f"noisy{gt_src.suffix}")
        reason = None
        if noisy is None:
            reason = f"noise code failed: status={outcome.status}"
        else:
            rebuilt = load_pack(out_dir)
            result = consistency_check(rebuilt, rebuilt.task(task.id))
            if not result.passed:
                reason = f"consistency gate: gt={result.gt_score:.4f} noisy={result.noisy_score:.4f}"
        if reason is None:
            built += 1
            continue
        quarantine_dir.mkdir(parents=True, exist_ok=True)
        shutil.move(str(target_dir), str(quarantine_dir / task.id))
        quarantined.append({"task": task.id, "reason": reason})

    if compose_seeds:
        seeds = [s.strip() for s in compose_seeds.split(",") if s.strip()]
        built += _compose_into(seed_pack, out_dir, seeds, gateway, config)

    if quarantined:
        quarantine_dir.mkdir(parents=True, exist_ok=True)
        (quarantine_dir / "list.json").write_text(json.dumps(quarantined, indent=2) + "\n", encoding="utf-8")
    return built, len(quarantined)


def _compose_into(seed_pack, out_dir: Path, seeds: list[str], gateway: Backend, config: RunConfig) -> int:
    import shutil

    task = compose_dag_task(seeds, seed_pack, seed_pack.alpha)
    target_dir = write_task(out_dir, task)
    data_dir = target_dir / "data"
    data_dir.mkdir(exist_ok=True)
    suffix = Path(task.ground_truth).suffix
    # Stage ground truths are the seeds' own ground truths; the final seed's
    # doubles as the composed task's ground truth.
    for index, step in enumerate(task.dag_composition or (), start=1):
        seed_task = seed_pack.task(step.subtask_id)
        seed_gt = seed_pack.data_path(seed_task, seed_task.ground_truth)
        is_last = index == len(task.dag_composition or ())
        name = f"gt{suffix}" if is_last else f"stage_{index}{seed_gt.suffix}"
        shutil.copyfile(seed_gt, data_dir / name)
    samples = sample_rows(data_dir / f"gt{suffix}")
    recipe = build_noise_recipe(task, samples, gateway, config.completion_params)
    outcome, noisy = synthesize_noise(recipe, data_dir / f"gt{suffix}", data_dir / f"noisy{suffix}")
    if noisy is None:
        raise PlanningError(f"composed task noise synthesis failed: status={outcome.status}")
    return 1


@bench.command("eval")
@click.option("--pack", "pack_path", type=click.Path(path_type=Path), default=None)
def cmd_bench_eval(pack_path):
    """Run the consistency gate over every task of a pack."""
    try:
        pack = load_pack(pack_path or sample_pack_path())
        failures = 0
        for task in pack.tasks:
            result = consistency_check(pack, task)
            status = "PASS" if result.passed else "FAIL"
            click.echo(f"{status}  {task.id:28s} gt={result.gt_score:.4f} noisy={result.noisy_score:.4f}")
            failures += 0 if result.passed else 1
        sys.exit(EXIT_TASK_FAILURES if failures else EXIT_OK)
    except GovdagError as exc:
        _fail(str(exc), EXIT_CONFIG)


@main.command("report")
@click.argument("run_logs", nargs=-1, type=click.Path(path_type=Path), required=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the machine-readable report instead of the table.")
def cmd_report(run_logs, as_json):
    """Aggregate one or more run logs into the metric suite."""
    try:
        reports = {}
        for log_path in run_logs:
            records = read_run_log(log_path)
            if not records:
                _fail(f"{log_path}: run log is empty", EXIT_CONFIG)
            reports[Path(log_path).stem if len(run_logs) > 1 else Path(log_path).name] = aggregate(records)
        if as_json:
            payload = {name: json.loads(report_to_json(r)) for name, r in reports.items()}
            click.echo(json.dumps(payload, indent=2, sort_keys=True))
        else:
            click.echo(render_table(reports))
        sys.exit(EXIT_OK)
    except (ValueError, OSError) as exc:
        _fail(str(exc), EXIT_CONFIG)


@main.group("lib")
def lib() -> None:
    """Operator library maintenance."""


@lib.command("check")
@click.option("--library", "library_path", type=click.Path(path_type=Path), default=None)
def cmd_lib_check(library_path):
    """Validate an operator library directory."""
    path = library_path or seed_library_path()
    problems = check_library(path)
    if problems:
        for problem in problems:
            click.echo(problem, err=True)
        sys.exit(EXIT_TASK_FAILURES)
    cards = load_library(path)
    click.echo(f"{len(cards)} card(s) OK at {path}")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
