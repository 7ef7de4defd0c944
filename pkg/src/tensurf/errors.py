"""Shared error types for the implicitization pipeline."""

from __future__ import annotations


class PipelineError(RuntimeError):
    """A mathematical failure at a specific pipeline stage (as opposed to
    malformed input, which raises ValueError)."""

    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class DegeneracyError(PipelineError):
    """The instance violates a genericity assumption mid-pipeline."""


class StepCapExceeded(RuntimeError):
    """The Groebner basis computation hit its step cap."""
