"""Proof-side quantities monitored along gauged trajectories.

For a gauged field v these are the ratio f = ||v||_L4^4 / ||v||_L6^3, its
Hoelder ceiling sqrt(M), the inequality-chain lower bound coming from the
periodic Gagliardo-Nirenberg bound and the conserved gauged energy, the
correction terms gamma and eta, and the modulation frequency alpha used to
trade gauged energy against momentum on the frequency lattice 2*pi*Z/L.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dynamics import Trajectory
from .functionals import ConservedReport, ecal, h1dot_sq, mass, momentum_v, mu
from .gn import CGN_POW_M18, CGN_POW_M92, mass_threshold
from .grid import Field, lp_norm

CASE_TAGS = ("case1", "case2", "degenerate")


class ZeroFieldError(ValueError):
    """Raised when a quantity undefined on the zero field is requested."""


class Case1NotApplicable(ValueError):
    """Raised by the lattice-frequency choice when eta + gamma <= 0 (the
    case-1 prescription alpha = 2*pi/L applies instead)."""


@dataclass(frozen=True)
class DiagnosticsSample:
    """Proof-side quantities at one time.

    lower_bound_f is absent when the base of its -1/4 power is not positive;
    alpha is absent until a case prescription assigns it.
    """

    t: float
    l4: float
    l6: float
    h1dot: float
    f: float
    gamma: float
    eta: float
    lower_bound_f: float | None
    holder_upper: float
    alpha: float | None
    case_tag: str

    COLUMNS = ("t", "l4", "l6", "h1dot", "f", "gamma", "eta",
               "lower_bound_f", "holder_upper", "alpha", "case_tag")


@dataclass(frozen=True)
class CaseRecord:
    """One frame of a case report: the sample, the applicable case inequality
    (lhs = ||v||_L4^4/4 against its conserved-quantity bound), and the defect
    M f^4 - 16 (1+2d/5L)^(-4) C^(-18) M - f^6 whose strict negativity below
    the mass threshold the argument exploits."""

    sample: DiagnosticsSample
    case_lhs: float | None
    case_rhs: float | None
    defect: float | None
    below_threshold: bool
    violations: tuple[str, ...]

    @property
    def flagged(self) -> bool:
        return self.below_threshold and bool(self.violations)


def f_ratio(v: Field) -> float:
    """||v||_L4^4 / ||v||_L6^3; Hoelder gives f_ratio <= sqrt(mass)."""
    l6 = lp_norm(v, 6)
    if l6 == 0.0:
        raise ZeroFieldError("f_ratio is undefined on the zero field")
    return lp_norm(v, 4) ** 4 / l6 ** 3


def proof_sample(v: Field, delta: float, ecal_val: float,
                 t: float = 0.0) -> DiagnosticsSample:
    """Evaluate the bound-chain quantities on one field.

    Everything is computed from v itself except ecal_val, which the caller
    supplies (the conserved value frozen at t = 0 along trajectories, or
    ecal(v) for standalone audits).
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    l6 = lp_norm(v, 6)
    if l6 == 0.0:
        raise ZeroFieldError("proof_sample is undefined on the zero field")
    L = v.grid.L
    l4 = lp_norm(v, 4)
    f = l4 ** 4 / l6 ** 3
    mu_val = mu(v)
    gamma = (2.0 / (delta * np.sqrt(L)) - 0.375 * mu_val * l4 ** 2) * l4 ** 2 / l6 ** 6
    shape = 1.0 + 2.0 * delta / (5.0 * L)
    eta = 1.0 / 16.0 - shape ** -4 * CGN_POW_M18 / f ** 4
    base = 1.0 + 16.0 * ecal_val / l6 ** 6 + 16.0 * gamma
    lower = 2.0 * CGN_POW_M92 / shape * base ** -0.25 if base > 0 else None
    return DiagnosticsSample(
        t=float(t), l4=l4, l6=l6, h1dot=float(np.sqrt(h1dot_sq(v))), f=f,
        gamma=gamma, eta=eta, lower_bound_f=lower,
        holder_upper=float(np.sqrt(mass(v))), alpha=None,
        case_tag="case1" if eta + gamma <= 0 else "case2")


def alpha_choice(sample: DiagnosticsSample, M_val: float, L: float) -> float:
    """Case-2 modulation frequency: the smallest lattice frequency in 2*pi*Z/L
    strictly above the balance target sqrt((eta+gamma)/M) * ||v||_L6^3."""
    if M_val <= 0:
        raise ValueError(f"M_val must be positive, got {M_val}")
    excess = sample.eta + sample.gamma
    if excess <= 0:
        raise Case1NotApplicable(
            "eta + gamma <= 0: the case-1 prescription alpha = 2*pi/L applies")
    unit = 2.0 * np.pi / L
    target = np.sqrt(excess / M_val) * sample.l6 ** 3
    return unit * (np.floor(target / unit) + 1.0)


def modulate(v: Field, alpha: float) -> Field:
    """Multiply by exp(i*alpha*x); alpha must sit on the lattice 2*pi*Z/L."""
    j = alpha * v.grid.L / (2.0 * np.pi)
    if abs(j - round(j)) > 1e-9 * max(1.0, abs(j)):
        raise ValueError(f"alpha = {alpha} is not on the frequency lattice 2*pi*Z/L")
    return Field(v.grid, np.exp(1j * alpha * v.grid.x) * v.values)


def m1_identity_check(v: Field, alpha: float) -> float:
    """|LHS - RHS| of the modulation identity

        P(v) + (1/4) int |v|^4  =  -Ecal(e^{i a x} v)/(2a) + (a/2) M(v)
                                   + Ecal(v)/(2a),

    an exact algebraic identity, so the return is floating-point noise.
    """
    j = alpha * v.grid.L / (2.0 * np.pi)
    if round(j) == 0 or abs(j - round(j)) > 1e-9 * max(1.0, abs(j)):
        raise ValueError(
            f"alpha = {alpha} must be a nonzero lattice frequency in 2*pi*Z/L")
    lhs = momentum_v(v) + 0.25 * lp_norm(v, 4) ** 4
    phi = modulate(v, alpha)
    rhs = -ecal(phi) / (2.0 * alpha) + 0.5 * alpha * mass(v) + ecal(v) / (2.0 * alpha)
    return abs(lhs - rhs)


def _degenerate_sample(t: float) -> DiagnosticsSample:
    return DiagnosticsSample(t=float(t), l4=0.0, l6=0.0, h1dot=0.0, f=float("nan"),
                             gamma=float("nan"), eta=float("nan"),
                             lower_bound_f=None, holder_upper=0.0, alpha=None,
                             case_tag="degenerate")


# Tolerances of the per-frame checks. Hoelder and the GN lower bound carry the
# contract tolerances; the case inequality and the defect sign absorb the
# conserved-quantity drift budget as well.
HOLDER_TOL = 1e-12
LOWER_BOUND_TOL = 1e-10
CASE_TOL = 1e-8
DEFECT_TOL = 1e-8


def case_report(traj: Trajectory, delta: float,
                conserved0: ConservedReport) -> list[CaseRecord]:
    """Evaluate the applicable case inequality and the defect on every frame
    of a gauged (beta = 3/4) trajectory.

    Conserved quantities are frozen at their t = 0 values; per-frame norms are
    instantaneous. A frame is flagged only when the mass sits below the
    threshold yet a bound-chain item fails beyond tolerance, which would
    indicate a numerical or transcription bug, never a refutation.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not traj.frames:
        raise ValueError("case_report needs a non-empty trajectory")
    L = traj.grid.L
    M0, P0, E0 = conserved0.M, conserved0.P, conserved0.Ecal
    threshold = mass_threshold(L, delta)
    below = M0 < threshold
    shape = 1.0 + 2.0 * delta / (5.0 * L)
    defect_const = 16.0 * shape ** -4 * CGN_POW_M18

    records = []
    for t, v in traj.frames:
        if float(np.max(np.abs(v.values))) == 0.0:
            records.append(CaseRecord(_degenerate_sample(t), None, None, None,
                                      below, ()))
            continue
        sample = proof_sample(v, delta, E0, t)
        violations = []
        if sample.f > sample.holder_upper * (1.0 + HOLDER_TOL):
            violations.append("holder")
        if (sample.lower_bound_f is not None
                and sample.f < sample.lower_bound_f * (1.0 - LOWER_BOUND_TOL)):
            violations.append("lower_bound")

        excess = sample.eta + sample.gamma
        lhs = 0.25 * sample.l4 ** 4
        if sample.case_tag == "case1":
            alpha = 2.0 * np.pi / L
            rhs = -P0 + np.pi / L * M0 + L / (4.0 * np.pi) * E0
        else:
            alpha = alpha_choice(sample, M0, L)
            rhs = (np.sqrt(M0 * excess) * sample.l6 ** 3
                   - P0 + np.pi / L * M0 + E0 / (2.0 * alpha))
        if lhs > rhs + CASE_TOL * max(1.0, abs(rhs), lhs):
            violations.append("case_bound")

        defect = M0 * sample.f ** 4 - defect_const * M0 - sample.f ** 6
        if below and defect > DEFECT_TOL * max(1.0, M0 * sample.f ** 4 + sample.f ** 6):
            violations.append("defect_sign")

        records.append(CaseRecord(replace(sample, alpha=alpha), lhs, rhs,
                                  defect, below, tuple(violations)))
    return records
