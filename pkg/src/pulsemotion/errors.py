"""Exception taxonomy shared by the whole package.

Exit-code mapping used by the CLI: ConfigError and DataError are data
problems (exit 2), EstimationError and subclasses are estimation failures
(exit 3).
"""

from __future__ import annotations


class PulseMotionError(Exception):
    """Base class for all errors raised by this package."""

    #: pipeline stage that raised, filled in by ``estimate_pulse``
    stage: str | None = None

    def with_stage(self, stage: str) -> "PulseMotionError":
        """Tag the error with the pipeline stage it came from (in place)."""
        if self.stage is None:
            self.stage = stage
            if self.args:
                self.args = (f"[{stage}] {self.args[0]}",) + self.args[1:]
            else:
                self.args = (f"[{stage}]",)
        return self


class DataError(PulseMotionError):
    """Invalid or malformed input data (files, matrices, parameters)."""


class ConfigError(PulseMotionError):
    """Invalid pipeline configuration; message names the offending key."""


class RankDeficiencyError(DataError):
    """Data rank is too low for the requested number of components."""

    def __init__(self, requested: int, achievable: int):
        super().__init__(
            f"data supports at most {achievable} components "
            f"(requested {requested})"
        )
        self.requested = requested
        self.achievable = achievable


class EstimationError(PulseMotionError):
    """Pulse-rate estimation failed for this input (non-fatal in batches)."""


class ConvergenceError(EstimationError):
    """Iterative separation did not converge within its iteration budget.

    Carries the last unmixing estimate so callers can inspect or reuse it.
    """

    def __init__(self, message: str, last_estimate=None):
        super().__init__(message)
        self.last_estimate = last_estimate


class GroundTruthUnavailableError(EstimationError):
    """ECG record does not support a ground-truth beat-rate estimate."""
