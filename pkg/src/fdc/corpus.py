"""Bundled prelude and golden example files."""

from __future__ import annotations

import os
from importlib import resources

from .parser import parse_core
from .syntax import Env
from .typecheck import check_program

PRELUDE_ENV_VAR = "FDC_PRELUDE"


def corpus_text(name: str) -> str:
    return (resources.files(__package__) / "corpus" / name).read_text()


def prelude_text() -> str:
    override = os.environ.get(PRELUDE_ENV_VAR)
    if override:
        with open(override) as fh:
            return fh.read()
    return corpus_text("prelude.fd")


def prelude_env() -> Env:
    """Parse and check the prelude; it must be diagnostic-free."""
    decls = parse_core(prelude_text())
    env, diags = check_program(Env(), decls)
    if diags:
        raise RuntimeError(f"prelude does not typecheck: {diags[0]}")
    return env
