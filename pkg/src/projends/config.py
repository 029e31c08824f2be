"""Numerical tolerances shared by every module.

Values live in a context variable so a caller (or the CLI ``--tol`` flag)
can override them for one job without touching global state.
"""
from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    norm: float = 1e-12
    det: float = 1e-9
    col: float = 1e-8
    den: float = 1e-10
    mat: float = 1e-8
    geo: float = 1e-9
    eig: float = 1e-7
    gap: float = 1e-6
    dedup: float = 1e-8
    coc: float = 1e-7
    hull: float = 1e-9
    ball_cap: int = 200_000

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"tolerance {f.name} must be positive")


_CURRENT: ContextVar[Tolerances] = ContextVar("projends_tolerances", default=Tolerances())


def tol() -> Tolerances:
    return _CURRENT.get()


def _canonical(key: str) -> str:
    key = key.strip().lower()
    if key.startswith("tau_"):
        key = key[4:]
    names = {f.name for f in fields(Tolerances)}
    if key not in names:
        raise KeyError(f"unknown tolerance {key!r}; known: {sorted(names)}")
    return key


@contextmanager
def override(**values):
    """Temporarily replace tolerances, e.g. ``with override(gap=1e-5): ...``."""
    current = _CURRENT.get()
    kw = {}
    for key, val in values.items():
        name = _canonical(key)
        kw[name] = int(val) if name == "ball_cap" else float(val)
    token = _CURRENT.set(replace(current, **kw))
    try:
        yield _CURRENT.get()
    finally:
        _CURRENT.reset(token)


def parse_assignment(text: str) -> tuple[str, float]:
    """Parse ``KEY=VAL`` as used on the command line."""
    if "=" not in text:
        raise ValueError(f"expected KEY=VAL, got {text!r}")
    key, val = text.split("=", 1)
    return _canonical(key), float(val)
