"""Isolated execution of generated scripts.

Isolation is process-level: a fresh working directory with read-only
copies of the inputs, a scrubbed environment, its own process group,
rlimits and a wall-clock kill. That is reproducible on developer machines;
container backends can implement the same contract.

Working-directory layout seen by the child::

    job.json    {"inputs": [...], "output": "out/...", "params": {...}}
    inputs/     read-only copies of the staged input files
    out/        where the script must write
    run.log     combined captured output (written after the run)
"""

from __future__ import annotations

import os
import re
import shutil
import signal
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from govdag.errors import SandboxConfigError
from govdag.executor.codegen import CodeArtifact

try:
    import resource
except ImportError:  # pragma: no cover - non-POSIX
    resource = None  # type: ignore[assignment]

DEFAULT_INTERPRETERS: dict[str, tuple[str, ...]] = {
    "python": (sys.executable, "-I", "{script}"),
}

_SCRIPT_SUFFIX = {"python": ".py"}

_TRACEBACK_MARK = "Traceback (most recent call last):"
_FRAME_RE = re.compile(r'File "(?P<path>[^"]+)", line (?P<line>\d+)')
_TRUNCATION_NOTE = "\n...[output truncated]"


@dataclass(frozen=True)
class SandboxLimits:
    wall_clock_s: float = 120.0
    max_output_bytes: int = 64 * 1024
    network: str = "denied"  # best-effort: env-scrubbed subprocess, no proxies
    writable_dirs: tuple[str, ...] = ("out",)


@dataclass(frozen=True)
class ExecutionOutcome:
    status: str  # ok | error | timeout | resource_kill
    exit_code: int
    stdout: str
    stderr: str
    duration_s: float
    stack_trace: str | None = None
    offending_span: tuple[int, int] | None = None
    stdout_truncated: bool = False
    stderr_truncated: bool = False

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class StagedJob:
    workdir: Path
    script_path: Path
    output_path: Path
    job: dict[str, Any] = field(default_factory=dict)


def _unique_names(inputs: Sequence[Path], staged_names: Sequence[str] | None) -> list[str]:
    if staged_names is not None:
        if len(staged_names) != len(inputs):
            raise SandboxConfigError("staged_names must match inputs length")
        return [Path(name).name for name in staged_names]
    names: list[str] = []
    for path in inputs:
        name = Path(path).name
        if name in names:
            stem, suffix = os.path.splitext(name)
            index = 2
            while f"{stem}_{index}{suffix}" in names:
                index += 1
            name = f"{stem}_{index}{suffix}"
        names.append(name)
    return names


def stage_job(
    artifact: CodeArtifact,
    inputs: Sequence[Path | str],
    workdir: Path | str | None = None,
    job: Mapping[str, Any] | None = None,
    staged_names: Sequence[str] | None = None,
) -> StagedJob:
    """Create the working directory: input copies, out/, job.json, script."""
    suffix = _SCRIPT_SUFFIX.get(artifact.language_tag, ".script")
    workdir = Path(workdir) if workdir else Path(tempfile.mkdtemp(prefix="govdag-sbx-"))
    workdir.mkdir(parents=True, exist_ok=True)
    inputs_dir = workdir / "inputs"
    inputs_dir.mkdir(exist_ok=True)
    (workdir / "out").mkdir(exist_ok=True)
    (workdir / "tmp").mkdir(exist_ok=True)

    paths = [Path(p) for p in inputs]
    names = _unique_names(paths, staged_names)
    for src, name in zip(paths, names):
        dst = inputs_dir / name
        shutil.copyfile(src, dst)
        dst.chmod(0o444)

    job_obj: dict[str, Any] = {
        "inputs": [f"inputs/{name}" for name in names],
        "output": "out/result",
        "params": {},
    }
    if job:
        job_obj.update(job)
    import json

    (workdir / "job.json").write_text(json.dumps(job_obj, indent=2, sort_keys=True), encoding="utf-8")
    script_path = workdir / f"script{suffix}"
    script_path.write_text(artifact.source, encoding="utf-8")
    return StagedJob(
        workdir=workdir,
        script_path=script_path,
        output_path=workdir / job_obj["output"],
        job=job_obj,
    )


def _scrubbed_env(workdir: Path) -> dict[str, str]:
    return {
        "PATH": "/usr/bin:/bin",
        "HOME": str(workdir),
        "TMPDIR": str(workdir / "tmp"),
        "LANG": "C.UTF-8",
        "LC_ALL": "C.UTF-8",
        "PYTHONDONTWRITEBYTECODE": "1",
        "PYTHONIOENCODING": "utf-8",
    }


def _rlimit_preexec(limits: SandboxLimits):
    if resource is None:  # pragma: no cover - non-POSIX
        return None
    cpu_s = max(1, int(limits.wall_clock_s) + 5)

    def apply() -> None:
        resource.setrlimit(resource.RLIMIT_CPU, (cpu_s, cpu_s))
        resource.setrlimit(resource.RLIMIT_FSIZE, (256 * 1024 * 1024, 256 * 1024 * 1024))

    return apply


def _truncate(data: bytes, limit: int, workdir: Path) -> tuple[str, bool]:
    truncated = len(data) > limit
    if truncated:
        data = data[:limit]
    text = data.decode("utf-8", errors="replace")
    # Present paths relative to the sandbox so captured output (and the
    # feedback prompts built from it) is independent of the host tempdir.
    text = text.replace(str(workdir) + os.sep, "").replace(str(workdir), ".")
    if truncated:
        text += _TRUNCATION_NOTE
    return text, truncated


def _parse_traceback(stderr: str, script_name: str) -> tuple[str | None, tuple[int, int] | None]:
    index = stderr.find(_TRACEBACK_MARK)
    if index < 0:
        return None, None
    trace = stderr[index:]
    span = None
    for match in _FRAME_RE.finditer(trace):
        if Path(match.group("path")).name == script_name:
            line = int(match.group("line"))
            span = (line, line)
    return trace.strip(), span


def run_sandboxed(
    artifact: CodeArtifact,
    inputs: Sequence[Path | str],
    limits: SandboxLimits,
    workdir: Path | str | None = None,
    job: Mapping[str, Any] | None = None,
    staged_names: Sequence[str] | None = None,
    interpreters: Mapping[str, tuple[str, ...]] | None = None,
) -> ExecutionOutcome:
    """Run one script in a fresh sandbox and capture its outcome.

    The original input files are never handed to the child; it only sees
    copies inside its working directory.
    """
    interpreters = interpreters or DEFAULT_INTERPRETERS
    if artifact.language_tag not in interpreters:
        raise SandboxConfigError(f"no interpreter configured for language tag '{artifact.language_tag}'")

    staged = stage_job(artifact, inputs, workdir=workdir, job=job, staged_names=staged_names)
    argv = [part.format(script=staged.script_path.name) for part in interpreters[artifact.language_tag]]

    started = time.monotonic()
    timed_out = False
    try:
        proc = subprocess.Popen(
            argv,
            cwd=staged.workdir,
            env=_scrubbed_env(staged.workdir),
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            start_new_session=True,
            preexec_fn=_rlimit_preexec(limits),
        )
    except OSError as exc:
        raise SandboxConfigError(f"cannot launch interpreter {argv[0]}: {exc}") from exc

    try:
        raw_out, raw_err = proc.communicate(timeout=limits.wall_clock_s)
    except subprocess.TimeoutExpired:
        timed_out = True
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except (ProcessLookupError, PermissionError):  # pragma: no cover - already gone
            pass
        raw_out, raw_err = proc.communicate()
    duration = time.monotonic() - started

    stdout, out_trunc = _truncate(raw_out or b"", limits.max_output_bytes, staged.workdir)
    stderr, err_trunc = _truncate(raw_err or b"", limits.max_output_bytes, staged.workdir)
    (staged.workdir / "run.log").write_text(stdout + "\n" + stderr, encoding="utf-8")

    exit_code = proc.returncode
    if timed_out:
        status = "timeout"
    elif exit_code == 0:
        status = "ok"
    elif exit_code < 0 and -exit_code in (signal.SIGXCPU, signal.SIGKILL):
        status = "resource_kill"
    else:
        status = "error"

    stack_trace, span = (None, None) if status == "ok" else _parse_traceback(stderr, staged.script_path.name)
    return ExecutionOutcome(
        status=status,
        exit_code=exit_code,
        stdout=stdout,
        stderr=stderr,
        duration_s=duration,
        stack_trace=stack_trace,
        offending_span=span,
        stdout_truncated=out_trunc,
        stderr_truncated=err_trunc,
    )
