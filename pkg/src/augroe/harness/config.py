"""Run files: ``[case]`` / ``[run]`` sections of ``key = value`` lines.

    [case]
    id = heat-steady-const-k

    [run]
    scheme = augmented-flux
    dx = 0.5
    steps = 30000    # or t_end / residual
"""

from __future__ import annotations

import configparser
from pathlib import Path

from ..errors import ConfigurationError

CASE_KEYS = {"id": str}
RUN_KEYS = {
    "scheme": str,
    "dx": float,
    "cells": int,
    "cfl": float,
    "steps": int,
    "t_end": float,
    "residual": float,
    "eps_safety": float,
    "out": str,
}


def parse_config(text: str) -> tuple[dict, dict]:
    """Return (case, run) dictionaries with typed values."""
    cp = configparser.ConfigParser(
        inline_comment_prefixes=("#",), comment_prefixes=("#",), delimiters=("=",)
    )
    cp.optionxform = str  # keep key case
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config: {exc}") from None
    unknown_sections = set(cp.sections()) - {"case", "run"}
    if unknown_sections:
        raise ConfigurationError(f"unknown sections: {sorted(unknown_sections)}")
    out = []
    for section, schema in (("case", CASE_KEYS), ("run", RUN_KEYS)):
        values = {}
        if cp.has_section(section):
            for key, raw in cp.items(section):
                if key not in schema:
                    raise ConfigurationError(f"unknown key {key!r} in [{section}]")
                try:
                    values[key] = schema[key](raw.strip())
                except ValueError:
                    raise ConfigurationError(f"bad value for {key}: {raw!r}") from None
        out.append(values)
    return out[0], out[1]


def load_config(path: str | Path) -> tuple[dict, dict]:
    p = Path(path)
    if not p.is_file():
        raise ConfigurationError(f"config file not found: {p}")
    return parse_config(p.read_text(encoding="utf-8"))
