"""Small result containers shared by the validation routines."""

from dataclasses import dataclass, field


@dataclass
class ValidationReport:
    """Outcome of sampling-based positivity checks.

    ``metrics`` holds named extrema (e.g. min pressure slope), ``failures``
    holds (location, message) pairs for every violated condition.
    """

    passed: bool
    metrics: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def as_dict(self):
        return {
            "passed": bool(self.passed),
            "metrics": {k: float(v) for k, v in self.metrics.items()},
            "failures": [{"where": str(w), "message": m} for w, m in self.failures],
        }
