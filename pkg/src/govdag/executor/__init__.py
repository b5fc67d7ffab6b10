from govdag.executor.codegen import (
    CodeArtifact,
    build_codegen_prompt,
    extract_code_block,
    generate_code,
)
from govdag.executor.library import OperatorCard, check_library, load_card, load_library
from govdag.executor.retrieval import retrieve_ops, score_cards, tokenize

__all__ = [
    "CodeArtifact",
    "OperatorCard",
    "build_codegen_prompt",
    "check_library",
    "extract_code_block",
    "generate_code",
    "load_card",
    "load_library",
    "retrieve_ops",
    "score_cards",
    "tokenize",
]
