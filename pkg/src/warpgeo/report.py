"""Run configuration, check records and report serialization.

Field names of the JSON report are a public contract (see README). Reports
serialize deterministically: fixed check order, sorted keys, repr floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

from .errors import ConfigurationError
from .fd import SCHEMES, DiffEngine


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by every verification run."""

    scheme: str = "central2"
    fd_step: float = 1e-5
    seed: int = 42
    samples: int = 25
    tolerance_scale: float = 1.0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {self.scheme!r}")
        if self.fd_step <= 0:
            raise ConfigurationError("fd_step must be positive")
        if self.samples < 1:
            raise ConfigurationError("samples must be >= 1")
        if self.tolerance_scale <= 0:
            raise ConfigurationError("tolerance_scale must be positive")

    def engine(self) -> DiffEngine:
        return DiffEngine(scheme=self.scheme, step=self.fd_step)

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "fd_step": self.fd_step,
            "seed": self.seed,
            "samples": self.samples,
            "tolerance_scale": self.tolerance_scale,
        }

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        return RunConfig(**d)


@dataclass
class CheckRecord:
    """One verified identity (or expected failure) of one scenario.

    max_residual is the maximum over samples of ||LHS - RHS|| / scale, where
    scale = 1 + the largest absolute value entering the identity at that
    sample. ``passed`` already accounts for ``expected_fail``: an
    expected-fail check passes exactly when the underlying comparison fails.
    Informational checks never affect the overall verdict.
    """

    check_id: str
    n_samples: int
    max_residual: float
    tolerance: float
    passed: bool
    expected_fail: bool = False
    informational: bool = False
    notes: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(d: dict) -> "CheckRecord":
        return CheckRecord(**d)


class ResidualCheck:
    """Accumulates per-sample scaled residuals for one check id."""

    def __init__(self, check_id: str, tolerance: float, expected_fail: bool = False,
                 informational: bool = False):
        self.check_id = check_id
        self.tolerance = tolerance
        self.expected_fail = expected_fail
        self.informational = informational
        self.residuals: list[float] = []
        self.notes: list[str] = []

    def add(self, residual: float, scale: float = 1.0) -> None:
        self.residuals.append(float(residual) / float(scale))

    def note(self, text: str) -> None:
        if text and text not in self.notes:
            self.notes.append(text)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    def record(self) -> CheckRecord:
        raw_pass = self.max_residual <= self.tolerance
        passed = (not raw_pass) if self.expected_fail else raw_pass
        return CheckRecord(
            check_id=self.check_id,
            n_samples=len(self.residuals),
            max_residual=self.max_residual,
            tolerance=self.tolerance,
            passed=passed,
            expected_fail=self.expected_fail,
            informational=self.informational,
            notes="; ".join(self.notes),
        )


@dataclass
class VerificationReport:
    """All check records of one scenario run, plus the config echo."""

    scenario: str
    description: str
    config: dict
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "description": self.description,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "overall_pass": self.overall_pass,
        }

    @staticmethod
    def from_dict(d: dict) -> "VerificationReport":
        report = VerificationReport(
            scenario=d["scenario"],
            description=d["description"],
            config=dict(d["config"]),
            checks=[CheckRecord.from_dict(c) for c in d["checks"]],
        )
        if report.overall_pass != d.get("overall_pass", report.overall_pass):
            raise ConfigurationError("inconsistent overall_pass in serialized report")
        return report

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @staticmethod
    def from_json(text: str) -> "VerificationReport":
        return VerificationReport.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [f"scenario: {self.scenario}", f"  {self.description}"]
        cfg = ", ".join(f"{k}={v}" for k, v in sorted(self.config.items()))
        lines.append(f"  config: {cfg}")
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            tag = ""
            if c.expected_fail:
                tag = " [expected-fail]"
            elif c.informational:
                tag = " [info]"
            lines.append(
                f"  {status}{tag} {c.check_id}: max_residual={c.max_residual:.3e} "
                f"tol={c.tolerance:.1e} n={c.n_samples}"
                + (f" ({c.notes})" if c.notes else "")
            )
        lines.append(f"  overall: {'PASS' if self.overall_pass else 'FAIL'}")
        return "\n".join(lines)


def reports_to_json(reports: list[VerificationReport], config: RunConfig) -> str:
    doc = {
        "config": config.to_dict(),
        "reports": [r.to_dict() for r in reports],
        "overall_pass": all(r.overall_pass for r in reports),
    }
    return json.dumps(doc, sort_keys=True, indent=2)


def reports_to_text(reports: list[VerificationReport]) -> str:
    body = "\n\n".join(r.to_text() for r in reports)
    verdict = all(r.overall_pass for r in reports)
    return body + f"\n\noverall: {'PASS' if verdict else 'FAIL'}\n"
