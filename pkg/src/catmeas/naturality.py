"""Candidate transformations from POVMs to probability measures.

A natural transformation has one component per measurable space, so it is
never stored in full. Candidates carry a finite descriptor instead:

``born``
    atom value ``Tr[mu(atom) rho]`` for a density operator ``rho``.
``effectwise``
    atom value ``xi(mu(atom))`` for a closed-form functional ``xi``. These
    commute with every pushforward only when ``xi`` is additive, and produce
    genuine probability measures only when ``xi`` is a generalized
    probability measure.
``faulted``
    a base candidate whose output on one specific space has mass moved
    between two atoms. Used as a negative control.

Naturality is then tested on generated instances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal, Sequence

import numpy as np

from .errors import DecompositionNotSubunital, DecompositionTooLarge, DimMismatch, NotAMeasure, NotAnEffect
from .functors import (
    Povm,
    ProbabilityMeasure,
    make_measure,
    pushforward_povm,
    pushforward_prob,
)
from .measurable import Event, FiniteMeasurableSpace, MeasurableMap, discrete_space, make_map, make_space
from .operators import (
    DensityOperator,
    Effect,
    HermitianOperator,
    as_effect,
    identity_op,
    trace_pair,
)

APPLY_TOL = 1e-9
MAX_LAMBDA = 64

# canonical two-outcome space for extracting xi
TWO_POINT = discrete_space(["z1", "z0"])
ONE_POINT = discrete_space(["*"])


@dataclass(frozen=True, eq=False)
class EffectFunctional:
    """Closed-form map from effects to reals.

    ``linear``: ``Tr[H M]``; ``power``: ``Tr[H M] ** k``;
    ``affine``: ``a * Tr[H M] + b``. ``H`` need not be a density operator.
    """

    form: Literal["linear", "power", "affine"]
    operator: HermitianOperator
    k: int = 1
    a: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if self.form not in ("linear", "power", "affine"):
            raise ValueError(f"unknown functional form {self.form!r}")

    @property
    def dim(self) -> int:
        return self.operator.dim

    def __call__(self, m: HermitianOperator) -> float:
        t = trace_pair(self.operator, m)
        if self.form == "linear":
            return t
        if self.form == "power":
            return t**self.k
        return self.a * t + self.b


@dataclass(frozen=True, eq=False)
class Perturbation:
    """Move ``delta`` of mass onto ``atom`` from the next atom (cyclically).

    Applies only on ``space``; ``None`` means every space with at least two atoms.
    """

    atom: int = 0
    delta: float = 0.01
    space: FiniteMeasurableSpace | None = None


@dataclass(frozen=True, eq=False)
class CandidateTransformation:
    kind: Literal["born", "effectwise", "faulted"]
    dim: int
    rho: DensityOperator | None = None
    xi: EffectFunctional | None = None
    base: CandidateTransformation | None = None
    perturbation: Perturbation | None = None

    def __post_init__(self):
        if self.kind == "born" and self.rho is None:
            raise ValueError("born candidate needs rho")
        if self.kind == "effectwise" and self.xi is None:
            raise ValueError("effectwise candidate needs xi")
        if self.kind == "faulted" and (self.base is None or self.perturbation is None):
            raise ValueError("faulted candidate needs base and perturbation")
        if self.kind not in ("born", "effectwise", "faulted"):
            raise ValueError(f"unknown candidate kind {self.kind!r}")


def born_candidate(rho: DensityOperator) -> CandidateTransformation:
    return CandidateTransformation("born", rho.dim, rho=rho)


def effectwise(xi: EffectFunctional) -> CandidateTransformation:
    return CandidateTransformation("effectwise", xi.dim, xi=xi)


def faulted(base: CandidateTransformation, perturbation: Perturbation) -> CandidateTransformation:
    return CandidateTransformation("faulted", base.dim, base=base, perturbation=perturbation)


def raw_values(t: CandidateTransformation, povm: Povm) -> tuple[float, ...]:
    """Atom values the candidate assigns to ``povm``, before any validation."""
    if povm.dim != t.dim:
        raise DimMismatch(f"POVM dimension {povm.dim} vs candidate dimension {t.dim}")
    if t.kind == "born":
        return tuple(trace_pair(e, t.rho) for e in povm.atom_effects)
    if t.kind == "effectwise":
        return tuple(float(t.xi(e)) for e in povm.atom_effects)
    vals = list(raw_values(t.base, povm))
    p = t.perturbation
    n = len(vals)
    hits = p.space == povm.space if p.space is not None else n >= 2
    if hits and n >= 2:
        vals[p.atom % n] += p.delta
        vals[(p.atom + 1) % n] -= p.delta
    return tuple(vals)


def apply(t: CandidateTransformation, povm: Povm, tol: float = APPLY_TOL) -> ProbabilityMeasure:
    """Component of ``t`` at ``povm.space`` evaluated on ``povm``.

    Raises NotAMeasure when the atom values are negative beyond ``tol`` or
    do not sum to one within ``tol``.
    """
    return make_measure(povm.space, raw_values(t, povm), neg_tol=tol, sum_tol=tol)


def two_outcome_povm(m: HermitianOperator, space: FiniteMeasurableSpace = TWO_POINT) -> Povm:
    """POVM ``{m, 1 - m}`` on a two-atom space; ``m`` is trusted to be an effect."""
    d = m.dim
    return Povm(space, (Effect(m.matrix), Effect(np.eye(d) - m.matrix)))


def extract_xi(t: CandidateTransformation, m: HermitianOperator, validate: bool = True) -> float:
    """Value of the effect functional induced by ``t`` at ``m``.

    Places ``m`` in the two-outcome POVM ``{m, 1 - m}`` on ``{z1, z0}`` and
    reads off the ``z1`` value. With ``validate`` the candidate's output must
    be a probability measure (NotAMeasure otherwise); without it the raw
    value is returned, which is how additivity defects are measured.
    """
    povm = two_outcome_povm(m)
    if validate:
        return apply(t, povm)[0]
    return raw_values(t, povm)[0]


def one_point_value(t: CandidateTransformation) -> float:
    """Mass the candidate assigns to the unique POVM on a one-point space."""
    povm = Povm(ONE_POINT, (Effect(np.eye(t.dim)),))
    return raw_values(t, povm)[0]


@dataclass
class SquareReport:
    commutes: bool
    max_deviation: float
    atom: int
    pushforward_of_output: tuple[float, ...]
    output_of_pushforward: tuple[float, ...]

    def to_dict(self) -> dict[str, Any]:
        counter = None
        if not self.commutes:
            counter = {
                "atom": self.atom,
                "pushforward_of_output": list(self.pushforward_of_output),
                "output_of_pushforward": list(self.output_of_pushforward),
            }
        return {"pass": self.commutes, "max_deviation": self.max_deviation, "counterexample": counter}


def check_square(
    t: CandidateTransformation, f: MeasurableMap, povm: Povm, tol: float = 1e-10
) -> SquareReport:
    """Compare ``P(f)(t_X(mu))`` against ``t_Y(M(f)(mu))`` atom by atom.

    NotAMeasure from either side is re-raised with ``path`` set to
    ``"pushforward_of_output"`` or ``"output_of_pushforward"``.
    """
    try:
        left = pushforward_prob(f, apply(t, povm))
    except NotAMeasure as exc:
        exc.path = "pushforward_of_output"
        raise
    try:
        right = apply(t, pushforward_povm(f, povm))
    except NotAMeasure as exc:
        exc.path = "output_of_pushforward"
        raise
    diff = np.abs(np.asarray(left.atom_probs) - np.asarray(right.atom_probs))
    k = int(np.argmax(diff))
    dev = float(diff[k])
    return SquareReport(dev <= tol, dev, k, left.atom_probs, right.atom_probs)


def indicator_map(ev: Event, target: FiniteMeasurableSpace = TWO_POINT) -> MeasurableMap:
    """Map sending ``ev`` to the first point of ``target`` and its complement to the second."""
    space = ev.space
    inside = ev.members
    hit, miss = target.points[0], target.points[1]
    return make_map(space, target, {p: (hit if p in inside else miss) for p in space.points})


@dataclass
class WellDefinedReport:
    agrees: bool
    first_value: float
    second_value: float
    deviation: float
    square_deviation: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "pass": self.agrees,
            "max_deviation": max(self.deviation, self.square_deviation),
            "first_value": self.first_value,
            "second_value": self.second_value,
            "counterexample": None if self.agrees else {"values": [self.first_value, self.second_value]},
        }


def check_xi_well_defined(
    t: CandidateTransformation,
    first: tuple[Povm, Event],
    second: tuple[Povm, Event],
    tol: float = 1e-10,
) -> WellDefinedReport:
    """Check that two POVM/event pairs carrying the same effect get the same value.

    Also checks the naturality squares along the two indicator maps into
    ``{z1, z0}`` through which the values are forced to agree.
    """
    (mu, e), (nu, f) = first, second
    a = apply(t, mu).value(e)
    b = apply(t, nu).value(f)
    sq = max(
        check_square(t, indicator_map(e), mu, tol).max_deviation,
        check_square(t, indicator_map(f), nu, tol).max_deviation,
    )
    dev = abs(a - b)
    return WellDefinedReport(dev <= tol and sq <= tol, a, b, dev, sq)


def lambda_space(n: int) -> FiniteMeasurableSpace:
    """Discrete space ``{0} + Lambda`` with ``Lambda = {l1, ..., ln}``."""
    return discrete_space(["0"] + [f"l{i}" for i in range(1, n + 1)])


TWO_OUTCOME_Y = discrete_space(["y1", "y0"])


@dataclass
class GPMReport:
    passed: bool
    normalization: float
    decompositions: list[dict[str, Any]]

    @property
    def max_defect(self) -> float:
        return max((abs(d["defect"]) for d in self.decompositions), default=0.0)

    @property
    def max_route_gap(self) -> float:
        return max((d["route_gap"] for d in self.decompositions), default=0.0)

    def to_dict(self) -> dict[str, Any]:
        bad = next((d for d in self.decompositions if not d["pass"]), None)
        return {
            "pass": self.passed,
            "max_deviation": max(self.max_defect, self.max_route_gap, abs(self.normalization - 1)),
            "normalization": self.normalization,
            "counterexample": bad,
        }


def check_generalized_measure(
    t: CandidateTransformation,
    decompositions: Sequence[Sequence[HermitianOperator]],
    tol: float = 1e-9,
    route_tol: float = 1e-10,
    max_lambda: int = MAX_LAMBDA,
) -> GPMReport:
    """Check that the functional induced by ``t`` is normalized and additive.

    For each family ``{M_l}`` with ``sum M_l <= 1`` two routes are computed:

    * direct: ``xi(sum M_l)`` against ``sum xi(M_l)``, each value extracted
      through the canonical two-outcome POVM;
    * constructed: the POVM on ``{0} + Lambda`` with atoms ``M_l`` and
      ``1 - sum M_l``, pushed along the map collapsing ``Lambda`` to ``y1``
      and ``0`` to ``y0``. The ``y1`` value of the candidate on the pushed
      POVM plays the role of ``xi(sum M_l)``; the ``y1`` value of the
      pushed candidate output plays ``sum xi(M_l)``.

    Defects are signed, ``xi(sum) - sum xi``. Raw (unvalidated) candidate
    values are used so that non-additive candidates yield a measured defect
    rather than an exception; whether each output was a probability measure
    is recorded per decomposition.
    """
    d = t.dim
    one = identity_op(d)
    norm = extract_xi(t, one, validate=False)
    results = []
    passed = abs(norm - 1) <= tol
    for idx, family in enumerate(decompositions):
        n = len(family)
        if n > max_lambda:
            raise DecompositionTooLarge(f"decomposition {idx} has {n} > {max_lambda} members")
        members = []
        for j, m in enumerate(family):
            try:
                members.append(as_effect(m))
            except NotAnEffect as exc:
                raise DecompositionNotSubunital(f"decomposition {idx}, member {j}: {exc}") from None
        total = HermitianOperator(np.sum([m.matrix for m in members], axis=0)) if members else one * 0.0
        try:
            as_effect(total)
        except NotAnEffect as exc:
            raise DecompositionNotSubunital(f"decomposition {idx}: sum is not below identity ({exc})") from None

        direct_total = extract_xi(t, total, validate=False)
        direct_parts = [extract_xi(t, m, validate=False) for m in members]
        direct_sum = math.fsum(direct_parts)

        z = lambda_space(n)
        mu = Povm(z, (Effect(one.matrix - total.matrix),) + tuple(members))
        collapse = make_map(z, TWO_OUTCOME_Y, [1] + [0] * n)
        nu = pushforward_povm(collapse, mu)
        built_total = raw_values(t, nu)[0]
        z_values = raw_values(t, mu)
        built_sum = math.fsum(z_values[1:])

        valid = True
        for povm in (mu, nu, two_outcome_povm(total)):
            try:
                apply(t, povm)
            except NotAMeasure:
                valid = False

        defect = direct_total - direct_sum
        built_defect = built_total - built_sum
        route_gap = max(abs(direct_total - built_total), abs(direct_sum - built_sum))
        ok = abs(defect) <= tol and abs(built_defect) <= tol and route_gap <= route_tol and valid
        passed = passed and ok
        results.append(
            {
                "index": idx,
                "size": n,
                "pass": ok,
                "xi_of_sum": direct_total,
                "sum_of_xi": direct_sum,
                "defect": defect,
                "constructed_defect": built_defect,
                "route_gap": route_gap,
                "outputs_are_measures": valid,
            }
        )
    return GPMReport(passed, norm, results)
