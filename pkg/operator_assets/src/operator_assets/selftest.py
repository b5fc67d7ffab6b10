"""Run every shipped snippet against its paired sample fixture.

A snippet passes when it exits 0 in the sandbox, leaves the staged inputs
byte-identical, produces byte-identical output across two runs, and its
output scores exactly 1.0 under the category evaluator against the
committed expected file.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from tempfile import TemporaryDirectory

from govdag.benchkit.scoring import score_with_binding
from govdag.core.types import EvaluatorBinding
from govdag.executor.codegen import CodeArtifact
from govdag.executor.library import load_card
from govdag.sandbox.runner import SandboxLimits, run_sandboxed

from operator_assets import cards_root, samples_root

LIMITS = SandboxLimits(wall_clock_s=60.0)


@dataclass
class SnippetResult:
    name: str
    passed: bool
    score: float | None = None
    reason: str | None = None


def _sha(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _run_once(card, sample_dir: Path, workdir: Path):
    meta = json.loads((sample_dir / "sample.json").read_text(encoding="utf-8"))
    inputs = [sample_dir / name for name in meta["inputs"]]
    expected = sample_dir / meta["expected"]
    output_name = f"out/result{expected.suffix}"
    artifact = CodeArtifact(node_id=card.name, source=card.snippet, language_tag=card.language)
    outcome = run_sandboxed(
        artifact,
        inputs,
        LIMITS,
        workdir=workdir,
        job={
            "inputs": [f"inputs/{p.name}" for p in inputs],
            "output": output_name,
            "params": meta.get("params", {}),
        },
    )
    return meta, inputs, expected, outcome, workdir / output_name


def check_snippet(card_dir: Path, sample_dir: Path) -> SnippetResult:
    card = load_card(card_dir)
    with TemporaryDirectory(prefix="asset-selftest-") as tmp:
        tmp_path = Path(tmp)
        meta, inputs, expected, outcome, output = _run_once(card, sample_dir, tmp_path / "run1")
        if outcome.status != "ok":
            trace = outcome.stack_trace or outcome.stderr.strip()
            return SnippetResult(card.name, False, reason=f"{outcome.status}: {trace[:400]}")
        for source in inputs:
            staged = tmp_path / "run1" / "inputs" / source.name
            if _sha(staged) != _sha(source):
                return SnippetResult(card.name, False, reason=f"snippet mutated staged input {source.name}")
        if not output.is_file():
            return SnippetResult(card.name, False, reason="no output written")

        _, _, _, second_outcome, second_output = _run_once(card, sample_dir, tmp_path / "run2")
        if second_outcome.status != "ok" or second_output.read_bytes() != output.read_bytes():
            return SnippetResult(card.name, False, reason="output differs between two identical runs")

        binding = EvaluatorBinding.from_obj(meta["binding"])
        raw = inputs[0]
        result = score_with_binding(binding, expected, output, raw_path=raw)
        if result.score < 1.0:
            return SnippetResult(card.name, False, score=result.score, reason=result.reason)
        return SnippetResult(card.name, True, score=result.score)


def asset_selftest(pack: Path | None = None) -> list[SnippetResult]:
    cards = (Path(pack) / "cards") if pack else cards_root()
    samples = (Path(pack) / "samples") if pack else samples_root()
    results = []
    for card_dir in sorted(p for p in cards.iterdir() if p.is_dir()):
        sample_dir = samples / card_dir.name
        if not sample_dir.is_dir():
            results.append(SnippetResult(card_dir.name, False, reason="no paired sample fixture"))
            continue
        results.append(check_snippet(card_dir, sample_dir))
    return results


def main() -> int:
    results = asset_selftest()
    failed = 0
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        detail = f" score={result.score:.4f}" if result.score is not None else ""
        reason = f" ({result.reason})" if result.reason else ""
        print(f"{status}  {result.name}{detail}{reason}")
        failed += 0 if result.passed else 1
    print(f"\n{len(results) - failed}/{len(results)} snippets pass")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
