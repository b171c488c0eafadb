"""POVMs and probability measures on finite spaces, with their pushforwards.

Both kinds of measure are stored by their atom values; the value on an event
is the sum over the atoms it contains, so additivity holds by construction
and validation only has to check atom positivity and normalization.
Pushing forward along ``f`` sums the atoms of the domain that ``f`` sends
into each codomain atom, which is ``mu(f^{-1}(F))`` evaluated atomwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Any, Sequence, Union

import numpy as np

from .errors import DimMismatch, NoComposablePair, NotAMeasure, NotAnEffect, NotNormalized
from .measurable import (
    Event,
    FiniteMeasurableSpace,
    MeasurableMap,
    _same_space,
    compose,
    identity,
)
from .operators import EFFECT_TOL, Effect, HermitianOperator, as_effect

NORMALIZATION_TOL = 1e-9
PROB_NEG_TOL = 1e-12
PROB_SUM_TOL = 1e-10
LAW_TOL = 1e-10
EXHAUSTIVE_ATOMS = 12


@dataclass(frozen=True, eq=False)
class Povm:
    space: FiniteMeasurableSpace
    atom_effects: tuple[Effect, ...]

    @property
    def dim(self) -> int:
        return self.atom_effects[0].dim

    def stack(self) -> np.ndarray:
        """Atom effects as an ``(n_atoms, d, d)`` array."""
        return np.stack([e.matrix for e in self.atom_effects])

    def value(self, ev: Event) -> Effect:
        return povm_value(self, ev)


@dataclass(frozen=True, eq=False)
class ProbabilityMeasure:
    space: FiniteMeasurableSpace
    atom_probs: tuple[float, ...]

    def value(self, ev: Event) -> float:
        _same_space(ev.space, self.space)
        return math.fsum(self.atom_probs[k] for k in ev.atom_indices)

    def __getitem__(self, k: int) -> float:
        return self.atom_probs[k]


Measure = Union[Povm, ProbabilityMeasure]


def make_povm(
    space: FiniteMeasurableSpace,
    atom_effects: Sequence[HermitianOperator],
    tol: float = NORMALIZATION_TOL,
) -> Povm:
    """Validate one effect per atom summing to the identity.

    Raises
    ------
    NotAnEffect
        An atom value leaves [0, 1]; the message names the atom.
    NotNormalized
        The atom values do not sum to the identity; reports the max-entry deviation.
    """
    if len(atom_effects) != space.n_atoms:
        raise NotNormalized(f"{len(atom_effects)} effects for {space.n_atoms} atoms")
    dims = {op.dim for op in atom_effects}
    if len(dims) != 1:
        raise DimMismatch(f"atom effects have mixed dimensions {sorted(dims)}")
    effects = []
    for k, op in enumerate(atom_effects):
        try:
            effects.append(as_effect(op, tol=max(tol, EFFECT_TOL)))
        except NotAnEffect as exc:
            raise NotAnEffect(f"atom {k}: {exc}") from None
    d = dims.pop()
    total = np.sum([e.matrix for e in effects], axis=0)
    dev = float(np.max(np.abs(total - np.eye(d))))
    if dev > tol:
        raise NotNormalized(f"atom effects sum to identity only up to {dev:.3e}")
    return Povm(space, tuple(effects))


def make_measure(
    space: FiniteMeasurableSpace,
    atom_probs: Sequence[float],
    neg_tol: float = PROB_NEG_TOL,
    sum_tol: float = PROB_SUM_TOL,
) -> ProbabilityMeasure:
    """Validate nonnegative atom probabilities summing to one (raises NotAMeasure)."""
    probs = tuple(float(p) for p in atom_probs)
    if len(probs) != space.n_atoms:
        raise NotAMeasure(f"{len(probs)} values for {space.n_atoms} atoms", values=probs)
    for k, p in enumerate(probs):
        if not p >= -neg_tol:
            raise NotAMeasure(f"atom {k} has value {p:.6g}", values=probs)
    s = math.fsum(probs)
    if abs(s - 1) > sum_tol:
        raise NotAMeasure(f"atom values sum to {s:.12g}", values=probs)
    return ProbabilityMeasure(space, probs)


def povm_value(povm: Povm, ev: Event) -> Effect:
    _same_space(ev.space, povm.space)
    d = povm.dim
    out = np.zeros((d, d), dtype=np.complex128)
    for k in sorted(ev.atom_indices):
        out = out + povm.atom_effects[k].matrix
    return Effect(out)


def _collect(f: MeasurableMap) -> list[list[int]]:
    """Domain atoms landing in each codomain atom."""
    groups: list[list[int]] = [[] for _ in range(f.codomain.n_atoms)]
    for k, b in enumerate(f.atom_map):
        groups[b].append(k)
    return groups


def pushforward_povm(f: MeasurableMap, povm: Povm) -> Povm:
    _same_space(povm.space, f.domain, "povm space/map domain")
    d = povm.dim
    effects = []
    for group in _collect(f):
        m = np.zeros((d, d), dtype=np.complex128)
        for k in group:
            m = m + povm.atom_effects[k].matrix
        effects.append(Effect(m))
    return Povm(f.codomain, tuple(effects))


def pushforward_prob(f: MeasurableMap, p: ProbabilityMeasure) -> ProbabilityMeasure:
    _same_space(p.space, f.domain, "measure space/map domain")
    probs = tuple(math.fsum(p.atom_probs[k] for k in group) for group in _collect(f))
    return ProbabilityMeasure(f.codomain, probs)


def pushforward(f: MeasurableMap, m: Measure) -> Measure:
    if isinstance(m, Povm):
        return pushforward_povm(f, m)
    return pushforward_prob(f, m)


def event_matrix(space: FiniteMeasurableSpace) -> np.ndarray:
    """0/1 incidence matrix, one row per event of ``space`` in :meth:`events` order."""
    n = space.n_atoms
    rows = [[1.0 if k in ev.atom_indices else 0.0 for k in range(n)] for ev in space.events()]
    return np.array(rows).reshape(-1, n)


def event_values(m: Measure) -> np.ndarray:
    """Value of ``m`` on every event, stacked along axis 0."""
    inc = event_matrix(m.space)
    if isinstance(m, Povm):
        return np.einsum("ek,kij->eij", inc, m.stack())
    return inc @ np.asarray(m.atom_probs)


def measure_deviation(a: Measure, b: Measure) -> tuple[float, Event]:
    """Max deviation over events of the common space and an event attaining it.

    Every event is compared when the space has at most ``EXHAUSTIVE_ATOMS``
    atoms; larger spaces compare single atoms and the full space.
    """
    _same_space(a.space, b.space)
    space = a.space
    if space.n_atoms <= EXHAUSTIVE_ATOMS:
        events = list(space.events())
        va, vb = event_values(a), event_values(b)
    else:
        events = [space.atom_event(k) for k in range(space.n_atoms)] + [space.full()]
        va = np.array([_value(a, e) for e in events])
        vb = np.array([_value(b, e) for e in events])
    diff = np.abs(va - vb).reshape(len(events), -1).max(axis=1)
    i = int(np.argmax(diff))
    return float(diff[i]), events[i]


def _value(m: Measure, ev: Event):
    return povm_value(m, ev).matrix if isinstance(m, Povm) else m.value(ev)


@dataclass
class LawReport:
    passed: bool
    identity_deviation: float
    composition_deviation: float
    n_identity_checks: int
    n_composition_checks: int
    counterexample: dict[str, Any] | None = None

    @property
    def max_deviation(self) -> float:
        return max(self.identity_deviation, self.composition_deviation)

    def to_dict(self) -> dict[str, Any]:
        return {
            "pass": self.passed,
            "max_deviation": self.max_deviation,
            "identity_deviation": self.identity_deviation,
            "composition_deviation": self.composition_deviation,
            "n_identity_checks": self.n_identity_checks,
            "n_composition_checks": self.n_composition_checks,
            "counterexample": self.counterexample,
        }


def _corrupt(m: Measure, delta: float) -> Measure:
    """Shift the first atom value of ``m``; only used for fault injection."""
    if isinstance(m, Povm):
        d = m.dim
        first = Effect(m.atom_effects[0].matrix + delta * np.eye(d))
        return Povm(m.space, (first,) + m.atom_effects[1:])
    return ProbabilityMeasure(m.space, (m.atom_probs[0] + delta,) + m.atom_probs[1:])


def check_functor_laws(
    maps: Sequence[MeasurableMap],
    samples: Sequence[Measure],
    tol: float = LAW_TOL,
    fault: float = 0.0,
) -> LawReport:
    """Check identity and composition preservation of the pushforward action.

    For every sample, the pushforward along the identity of its space must
    reproduce it. For every composable pair ``(f, g)`` drawn from ``maps``
    with ``f.domain`` equal to a sample's space, pushing along ``g o f``
    must agree with pushing along ``f`` then ``g``. Agreement is measured on
    every event of the target space. A nonzero ``fault`` corrupts the
    composite-path pushforward, as a negative control.
    """
    pairs = [(f, g) for f, g in product(maps, maps) if f.codomain == g.domain]
    if not pairs:
        raise NoComposablePair("no composable pair g o f among the given maps")

    id_dev = comp_dev = 0.0
    n_id = n_comp = 0
    counterexample = None

    for si, m in enumerate(samples):
        dev, ev = measure_deviation(pushforward(identity(m.space), m), m)
        n_id += 1
        if dev > id_dev:
            id_dev = dev
            if dev > tol and counterexample is None:
                counterexample = {"law": "identity", "sample": si, "event": sorted(ev.members)}
        for fi, f in enumerate(maps):
            if f.domain != m.space:
                continue
            for gi, g in enumerate(maps):
                if f.codomain != g.domain:
                    continue
                direct = pushforward(compose(g, f), m)
                if fault:
                    direct = _corrupt(direct, fault)
                stepwise = pushforward(g, pushforward(f, m))
                dev, ev = measure_deviation(direct, stepwise)
                n_comp += 1
                if dev > comp_dev:
                    comp_dev = dev
                    if dev > tol and counterexample is None:
                        counterexample = {
                            "law": "composition",
                            "sample": si,
                            "f": fi,
                            "g": gi,
                            "event": sorted(ev.members),
                            "deviation": dev,
                        }
    passed = id_dev <= tol and comp_dev <= tol
    return LawReport(passed, id_dev, comp_dev, n_id, n_comp, counterexample)

