"""Closed-form two-term competing-exchange model.

A spin system with exchange integral A = a1 + a2 split into a
ferromagnetic part a1 >= 0 and an antiferromagnetic part a2 <= 0 is
described by a normalized superposition of the fully parallel state and
the Neel state with weights proportional to a1 and |a2|.  This module
holds the closed-form algebra: superposition weights, pair-arrangement
probabilities, the k-factor, the two alpha branches, the energy
eigenvalue in its published forms, phase classification and the
decomposition into pure + glass components.

Two energy expressions circulate for this model and they are not
algebraically equal.  The step-by-step derivation gives

    E = -Nz * (a1**2 + a2**2) / (a1 + |a2|)        (canonical here)

while the compact variant, after repairing an obviously missing energy
factor in its second term, reads

    E = -Nz*(a1 - |a2|) - 2*Nz*a1*|a2| / (a1 + |a2|)

``energy_published_forms`` evaluates both and flags the disagreement
rather than resolving it.

All functions are pure and all value types immutable; concurrent use
needs no synchronization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateCouplingsError, SgPointError

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class Couplings:
    """Exchange couplings: a1 >= 0 (ferromagnetic), a2 <= 0 (antiferromagnetic)."""

    a1: float
    a2: float

    def __post_init__(self):
        if not (self.a1 >= 0.0) or not math.isfinite(self.a1):
            raise ValueError(f"a1 must be finite and >= 0, got {self.a1}")
        if not (self.a2 <= 0.0) or not math.isfinite(self.a2):
            raise ValueError(f"a2 must be finite and <= 0, got {self.a2}")

    @property
    def abs_a2(self) -> float:
        return -self.a2

    @property
    def degenerate(self) -> bool:
        return self.a1 == 0.0 and self.a2 == 0.0

    @property
    def combined(self) -> float:
        """The overall exchange integral A = a1 + a2."""
        return self.a1 + self.a2


@dataclass(frozen=True)
class SystemSize:
    """N spins, each with z nearest neighbours."""

    n: int
    z: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.z < 1:
            raise ValueError(f"z must be >= 1, got {self.z}")


@dataclass(frozen=True)
class SuperpositionWeights:
    """Coefficients of the parallel (w1) and antiparallel (w2) basis states."""

    w1: float
    w2: float

    def __post_init__(self):
        if self.w1 < 0.0 or self.w2 < 0.0:
            raise ValueError("weights must be non-negative")
        norm = self.w1 * self.w1 + self.w2 * self.w2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"weights not normalized: w1^2+w2^2 = {norm}")


@dataclass(frozen=True)
class PairProbabilities:
    p_parallel: float
    p_antiparallel: float

    def __post_init__(self):
        for p in (self.p_parallel, self.p_antiparallel):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability out of range: {p}")
        if abs(self.p_parallel + self.p_antiparallel - 1.0) > _NORM_TOL:
            raise ValueError("probabilities must sum to 1")


@dataclass(frozen=True)
class AlphaBranch:
    """One solution branch of the rotation-angle constraint cos a - sin a = k."""

    cos_alpha: float
    sin_alpha: float
    branch_sign: str  # "+" or "-"


class PhaseLabel(enum.Enum):
    FM = "FM"
    AFM = "AFM"
    SG = "SG"
    FM_SG = "FM_SG"
    AFM_SG = "AFM_SG"
    NONE = "NONE"


@dataclass(frozen=True)
class StateDecomposition:
    """Split of the superposition into a pure component and a glass component.

    The state recombines as pure_coeff*|pure> + glass_coeff*(|1> + |2>),
    where |pure> is |1> for pure_basis FM and |2> for AFM.
    """

    pure_basis: str  # "FM" or "AFM"
    pure_coeff: float
    glass_coeff: float

    def recombine(self) -> SuperpositionWeights:
        if self.pure_basis == "FM":
            return SuperpositionWeights(self.pure_coeff + self.glass_coeff, self.glass_coeff)
        return SuperpositionWeights(self.glass_coeff, self.pure_coeff + self.glass_coeff)


@dataclass(frozen=True)
class EnergyReport:
    """The three published energy forms plus a consistency verdict."""

    e_competition: float
    e_conventional: float
    e_abstract_variant: float
    consistent: bool


def _require_nondegenerate(c: Couplings) -> None:
    if c.degenerate:
        raise DegenerateCouplingsError("a1 = a2 = 0: no state is defined")


def superposition_weights(c: Couplings) -> SuperpositionWeights:
    """Normalized weights (a1, |a2|) / sqrt(a1^2 + a2^2)."""
    _require_nondegenerate(c)
    norm = math.hypot(c.a1, c.a2)
    return SuperpositionWeights(c.a1 / norm, c.abs_a2 / norm)


def pair_probabilities(w: SuperpositionWeights) -> PairProbabilities:
    """Parallel/antiparallel arrangement probabilities: the squared weights."""
    return PairProbabilities(w.w1 * w.w1, w.w2 * w.w2)


def k_factor(c: Couplings) -> float:
    """k = (a1 - |a2|) / (a1 + |a2|), in [-1, 1]."""
    _require_nondegenerate(c)
    return (c.a1 - c.abs_a2) / (c.a1 + c.abs_a2)


def alpha_branches(k: float) -> tuple[AlphaBranch, AlphaBranch]:
    """Both solutions of cos a - sin a = k with cos^2 + sin^2 = 1.

    cos a = k/2 +- sqrt(2-k^2)/2, sin a = +-sqrt(2-k^2)/2 - k/2.  The model
    never selects a branch; callers must not rely on an ordering beyond
    branch_sign.
    """
    if abs(k) > 1.0:
        raise ValueError(f"|k| must be <= 1, got {k}")
    root = math.sqrt(2.0 - k * k)
    plus = AlphaBranch((k + root) / 2.0, (root - k) / 2.0, "+")
    minus = AlphaBranch((k - root) / 2.0, (-root - k) / 2.0, "-")
    return plus, minus


def energy_competition(c: Couplings, s: SystemSize, degenerate_ok: bool = False) -> float:
    """Canonical energy eigenvalue -Nz*(a1^2 + a2^2)/(a1 + |a2|).

    Algebraic consolidation of the derived form
    E = -Nz*a1 + Nz*|a2|*(a1 - |a2|)/(a1 + |a2|).
    With ``degenerate_ok`` the a1 = a2 = 0 point returns 0 instead of raising.
    """
    if c.degenerate:
        if degenerate_ok:
            return 0.0
        raise DegenerateCouplingsError("a1 = a2 = 0: energy undefined")
    nz = s.n * s.z
    return -nz * (c.a1 * c.a1 + c.a2 * c.a2) / (c.a1 + c.abs_a2)


def energy_conventional(c: Couplings, s: SystemSize) -> float:
    """Energy from the single-coupling treatment: -Nz*|a1 + a2|."""
    return -s.n * s.z * abs(c.a1 + c.a2)


def energy_abstract_variant(c: Couplings, s: SystemSize) -> float:
    """The compact published form, repaired minimally on two counts:
    the second term gains the factor a1*|a2| restoring energy units, and
    of the two published writings (one led by a1 - |a2|, one by |a2| - a1)
    the one whose leading coefficient is the dominant-minus-minor
    difference is taken, giving -Nz*|a1 - |a2|| - 2*Nz*a1*|a2|/(a1 + |a2|).
    """
    _require_nondegenerate(c)
    nz = s.n * s.z
    return -nz * abs(c.a1 - c.abs_a2) - 2.0 * nz * c.a1 * c.abs_a2 / (c.a1 + c.abs_a2)


def energy_published_forms(
    c: Couplings, s: SystemSize, rel_tol: float = 1e-9
) -> EnergyReport:
    """Evaluate all three published energy forms and compare them.

    ``consistent`` is True when the repaired compact form agrees with the
    canonical one within ``rel_tol`` relative; they genuinely disagree away
    from the a1 = |a2| and a1*|a2| = 0 loci.
    """
    e_comp = energy_competition(c, s)
    e_conv = energy_conventional(c, s)
    e_abs = energy_abstract_variant(c, s)
    scale = max(abs(e_comp), abs(e_abs), 1e-300)
    consistent = abs(e_abs - e_comp) <= rel_tol * scale
    return EnergyReport(e_comp, e_conv, e_abs, consistent)


def classify_phase(c: Couplings, tol: float = 1e-9) -> PhaseLabel:
    """Phase label from the coupling competition.

    SG wins within a relative tolerance band around a1 = |a2| (floating-point
    equality of the couplings is meaningless for computed inputs).
    """
    if tol < 0.0:
        raise ValueError("tol must be >= 0")
    a1, b2 = c.a1, c.abs_a2
    if a1 == 0.0 and b2 == 0.0:
        return PhaseLabel.NONE
    if b2 == 0.0:
        return PhaseLabel.FM
    if a1 == 0.0:
        return PhaseLabel.AFM
    if abs(a1 - b2) <= tol * max(a1, b2):
        return PhaseLabel.SG
    return PhaseLabel.FM_SG if a1 > b2 else PhaseLabel.AFM_SG


def decompose_state(c: Couplings) -> StateDecomposition:
    """Split the superposition into pure FM/AFM plus equal-weight glass parts.

    For a1 > |a2| the state is (a1-|a2|)*|1> + |a2|*(|1>+|2>), normalized;
    mirrored for a1 < |a2|.  The symmetric point carries no pure component.
    """
    _require_nondegenerate(c)
    a1, b2 = c.a1, c.abs_a2
    if a1 == b2:
        raise SgPointError("a1 == |a2|: no pure component at the glass point")
    norm = math.hypot(a1, b2)
    if a1 > b2:
        return StateDecomposition("FM", (a1 - b2) / norm, b2 / norm)
    return StateDecomposition("AFM", (b2 - a1) / norm, a1 / norm)
