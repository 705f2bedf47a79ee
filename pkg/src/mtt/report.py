"""Verification reports shared by every theorem check."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .algebra import Polynomial, render_var

VERIFIED = "VERIFIED"
FAILED = "FAILED"
SKIPPED = "SKIPPED"


@dataclass
class VerificationReport:
    theorem: str
    digest: str
    lhs: str
    rhs: str
    equal: bool
    lhs_terms: int = 0
    rhs_terms: int = 0
    params: dict = field(default_factory=dict)
    elapsed: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    skipped: str = ""

    @property
    def status(self) -> str:
        if self.skipped:
            return SKIPPED
        return VERIFIED if self.equal else FAILED

    @property
    def ok(self) -> bool:
        return self.equal or bool(self.skipped)

    def to_dict(self, timings: bool = True) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("elapsed")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        return cls(**d)


def differing_monomials(P: Polynomial, Q: Polynomial, limit: int = 5) -> list:
    """Rendered monomials whose coefficients differ, in canonical order."""
    diff = P - Q
    out = []
    for mono, _ in diff.sorted_terms()[:limit]:
        name = "*".join(render_var(v) + (f"^{e}" if e > 1 else "") for v, e in mono) or "1"
        lc = P.terms.get(mono, P.ring.zero)
        rc = Q.terms.get(mono, Q.ring.zero)
        out.append(f"{name}: lhs={P.ring.render(lc)} rhs={Q.ring.render(rc)}")
    return out


def compare(theorem: str, digest: str, lhs: Polynomial, rhs: Polynomial, *, params=None, elapsed=None) -> VerificationReport:
    lt, rt = lhs.render(), rhs.render()
    equal = lt == rt
    return VerificationReport(
        theorem=theorem,
        digest=digest,
        lhs=lt,
        rhs=rt,
        equal=equal,
        lhs_terms=len(lhs),
        rhs_terms=len(rhs),
        params=dict(params or {}),
        elapsed={k: round(v, 6) for k, v in (elapsed or {}).items()},
        counterexamples=[] if equal else differing_monomials(lhs, rhs),
    )


def skipped(theorem: str, digest: str, reason: str, params=None) -> VerificationReport:
    return VerificationReport(theorem, digest, "", "", False, params=dict(params or {}), skipped=reason)


def render_report(report: VerificationReport, fmt: str = "text", *, timings: bool = False) -> str:
    """Render as human-diffable ``text`` or round-trippable ``json``.

    Timings are left out by default so that identical runs give identical bytes.
    """
    if fmt == "json":
        return json.dumps(report.to_dict(timings), sort_keys=True, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    params = " ".join(f"{k}={v}" for k, v in sorted(report.params.items()))
    lines = [f"[{report.status}] {report.theorem} {report.digest} {params}".rstrip()]
    if report.skipped:
        lines.append(f"  reason: {report.skipped}")
    else:
        lines.append(f"  terms: lhs={report.lhs_terms} rhs={report.rhs_terms}")
        if timings and report.elapsed:
            lines.append("  elapsed: " + " ".join(f"{k}={v:.3f}s" for k, v in sorted(report.elapsed.items())))
        if not report.equal:
            lines.append("  first differing monomials:")
            lines.extend(f"    {c}" for c in report.counterexamples)
            lines.append(f"  lhs: {report.lhs}")
            lines.append(f"  rhs: {report.rhs}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> VerificationReport:
    return VerificationReport.from_dict(json.loads(text))
