"""Mine timed partial orders from traces and check traces against them."""

from ._core import (
    InputError,
    PreconditionError,
    Tpo,
    generate,
    mine,
    reduce,
    run_cli,
    split,
)

__all__ = [
    "InputError",
    "PreconditionError",
    "Tpo",
    "generate",
    "mine",
    "reduce",
    "run_cli",
    "split",
]
