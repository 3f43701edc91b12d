"""sciwrite-lint: bibliography and cross-reference linter for scientific manuscripts."""

__version__ = "0.1.0"

from sciwrite_lint.config import Config, load_config
from sciwrite_lint.findings import Finding, Location
from sciwrite_lint.pipeline import CheckResult, run_check
from sciwrite_lint.scoring import ScoreReport

__all__ = [
    "__version__",
    "CheckResult",
    "Config",
    "Finding",
    "Location",
    "ScoreReport",
    "load_config",
    "run_check",
]
