"""Loading of versioned prompt-template assets."""

from __future__ import annotations

from importlib import resources
from string import Template


def package_template(package: str, name: str) -> Template:
    text = resources.files(package).joinpath(f"{name}.txt").read_text(encoding="utf-8")
    return Template(text)
