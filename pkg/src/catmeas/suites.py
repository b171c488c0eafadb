"""Verification suites run by ``catmeas verify``.

Each suite runs ``config.trials`` independent seeded trials and folds them
into one or more check records::

    {"name": ..., "pass": bool, "max_deviation": float, "trials": int,
     "counterexample": {...} | null}

Library errors raised inside a trial become failed records, never crashes.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import __version__
from .born import born_measure, born_transformation, injectivity_witness, reconstruct
from .errors import CatMeasError, NotAMeasure, NotAState
from .functors import check_functor_laws, make_povm, pushforward_povm
from .instances import (
    SUITES,
    RunConfig,
    composites,
    embed_effect,
    random_chain,
    random_density,
    random_effect,
    random_measure,
    random_povm,
    random_povm_effects,
    random_pure,
    trial_rng,
)
from .measurable import discrete_space
from .naturality import (
    EffectFunctional,
    Perturbation,
    apply,
    check_generalized_measure,
    check_square,
    check_xi_well_defined,
    effectwise,
    extract_xi,
    faulted,
    one_point_value,
)
from .operators import HermitianOperator, identity_op

GPM_SIZES = (2, 5, 16, 64)
GPM_TOL = 1e-9
ROUNDTRIP_TOL = 1e-8
INJECTIVITY_EIG_TOL = 1e-10
INJECTIVITY_BORN_TOL = 1e-12
NORMALIZATION_TOL = 1e-12
FAULT_DELTA = 0.01


@dataclass
class Check:
    """Running aggregate of one named check across trials."""

    name: str
    tol: float
    passed: bool = True
    max_deviation: float = 0.0
    trials: int = 0
    counterexample: dict[str, Any] | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def record(self, ok: bool, deviation: float, detail: dict[str, Any] | None = None) -> None:
        self.trials += 1
        self.max_deviation = max(self.max_deviation, float(deviation))
        if not ok:
            self.passed = False
            if self.counterexample is None:
                self.counterexample = detail or {}

    def error(self, trial: int, exc: Exception) -> None:
        self.record(False, float("inf"), {"trial": trial, "error": f"{type(exc).__name__}: {exc}"})

    def to_dict(self) -> dict[str, Any]:
        dev = self.max_deviation if np.isfinite(self.max_deviation) else None
        out = {
            "name": self.name,
            "pass": self.passed,
            "max_deviation": dev,
            "tol": self.tol,
            "trials": self.trials,
            "counterexample": self.counterexample,
        }
        out.update(self.extra)
        return out


def _run_trials(config: RunConfig, suite: str, checks: list[Check], body: Callable) -> list[Check]:
    for i in range(config.trials):
        rng = trial_rng(config.seed, suite, i)
        try:
            body(i, rng)
        except CatMeasError as exc:
            checks[0].error(i, exc)
    return checks


def suite_functor_laws(config: RunConfig) -> list[Check]:
    povm_check = Check("functor-laws/M", config.tol)
    prob_check = Check("functor-laws/P", config.tol)
    fault = FAULT_DELTA if config.fault_inject else 0.0

    def body(i, rng):
        spaces, maps = random_chain(rng, config.max_atoms, length=3)
        all_maps = composites(maps)
        povms = [random_povm(rng, spaces[0], config.dim), random_povm(rng, spaces[1], config.dim)]
        probs = [random_measure(rng, spaces[0]), random_measure(rng, spaces[1])]
        for check, samples in ((povm_check, povms), (prob_check, probs)):
            rep = check_functor_laws(all_maps, samples, tol=config.tol, fault=fault)
            detail = None if rep.passed else {"trial": i, **(rep.counterexample or {})}
            check.record(rep.passed, rep.max_deviation, detail)

    return _run_trials(config, "functor-laws", [povm_check, prob_check], body)


def suite_naturality(config: RunConfig) -> list[Check]:
    check = Check("naturality/born", config.tol)

    def body(i, rng):
        rho = random_density(rng, config.dim)
        spaces, (f, g) = random_chain(rng, config.max_atoms, length=2)
        t = born_transformation(rho)
        if config.fault_inject:
            t = faulted(t, Perturbation(atom=0, delta=FAULT_DELTA, space=spaces[1]))
        mu = random_povm(rng, spaces[0], config.dim)
        squares = [
            ("f", f, mu),
            ("g", g, pushforward_povm(f, mu)),
            ("g.f", composites([f, g])[2], mu),
        ]
        for label, h, m in squares:
            rep = check_square(t, h, m, config.tol)
            check.record(rep.commutes, rep.max_deviation, {"trial": i, "square": label, **rep.to_dict()})

    return _run_trials(config, "naturality", [check], body)


def suite_xi_well_defined(config: RunConfig) -> list[Check]:
    check = Check("xi-well-defined", config.tol)
    cap = max(2, config.max_atoms)

    def body(i, rng):
        rho = random_density(rng, config.dim)
        t = born_transformation(rho)
        if config.fault_inject:
            t = faulted(t, Perturbation(atom=0, delta=FAULT_DELTA))
        m = random_effect(rng, config.dim)
        # two structurally different embeddings: 1+1 atoms versus more atoms on each side
        inside = int(rng.integers(2, cap + 1)) if cap >= 2 else 1
        first = embed_effect(rng, m, 1, 1, prefix="u")
        second = embed_effect(rng, m, inside, max(1, cap + 1 - inside), prefix="v")
        rep = check_xi_well_defined(t, first, second, config.tol)
        check.record(rep.agrees, max(rep.deviation, rep.square_deviation), {"trial": i, **rep.to_dict()})

    return _run_trials(config, "xi-well-defined", [check], body)


def _sub_unital_family(rng, n: int, dim: int, full: bool) -> list[HermitianOperator]:
    """``n`` effects summing to the identity (``full``) or strictly below it."""
    effects = random_povm_effects(rng, n if full else n + 1, dim)
    return [HermitianOperator(e) for e in effects[:n]]


def suite_gpm_additivity(config: RunConfig) -> list[Check]:
    additivity = Check("gpm-additivity", max(config.tol, GPM_TOL))
    routes = Check("gpm-additivity/routes", config.tol)
    additivity.extra["sizes"] = list(GPM_SIZES)

    def body(i, rng):
        rho = random_density(rng, config.dim)
        t = born_transformation(rho)
        if config.fault_inject:
            t = faulted(t, Perturbation(atom=0, delta=FAULT_DELTA))
        n = GPM_SIZES[i % len(GPM_SIZES)]
        family = _sub_unital_family(rng, n, config.dim, full=bool(i % 2))
        rep = check_generalized_measure(t, [family], tol=additivity.tol, route_tol=routes.tol)
        d = rep.decompositions[0]
        norm_dev = abs(rep.normalization - 1)
        ok = abs(d["defect"]) <= additivity.tol and abs(d["constructed_defect"]) <= additivity.tol
        ok = ok and norm_dev <= additivity.tol and d["outputs_are_measures"]
        additivity.record(ok, max(abs(d["defect"]), abs(d["constructed_defect"]), norm_dev), {"trial": i, **d})
        routes.record(d["route_gap"] <= routes.tol, d["route_gap"], {"trial": i, **d})

    return _run_trials(config, "gpm-additivity", [additivity, routes], body)


def suite_injectivity(config: RunConfig) -> list[Check]:
    gap_check = Check("injectivity/gap-positive", 0.0)
    eig_check = Check("injectivity/gap-equals-eigenvalue-sum", INJECTIVITY_EIG_TOL)
    born_check = Check("injectivity/born-difference", INJECTIVITY_BORN_TOL)
    bound_check = Check("injectivity/gap-below-trace-distance", INJECTIVITY_EIG_TOL)

    def body(i, rng):
        rho = random_density(rng, config.dim)
        sigma = random_density(rng, config.dim)
        while rho.frobenius_distance(sigma) < 1e-3:  # pragma: no cover - probability ~0
            sigma = random_density(rng, config.dim)
        w = injectivity_witness(rho, sigma)
        gap_check.record(w.gap > 0, 0.0, {"trial": i, "gap": w.gap})
        eig_check.record(abs(w.gap - w.eigenvalue_sum) <= eig_check.tol, abs(w.gap - w.eigenvalue_sum), {"trial": i})
        pr = born_measure(rho, w.povm)
        ps = born_measure(sigma, w.povm)
        dev = abs((pr[0] - ps[0]) - w.gap)
        born_check.record(dev <= born_check.tol, dev, {"trial": i})
        trace_distance = 0.5 * float(np.sum(np.abs((rho - sigma).eigvals())))
        excess = max(0.0, w.gap - trace_distance)
        bound_check.record(excess <= bound_check.tol, excess, {"trial": i})

    return _run_trials(config, "injectivity", [gap_check, eig_check, born_check, bound_check], body)


def suite_roundtrip(config: RunConfig) -> list[Check]:
    forward = Check(f"roundtrip/d={config.dim}", max(config.tol, ROUNDTRIP_TOL))
    backward = Check(f"roundtrip/inverse/d={config.dim}", max(config.tol, ROUNDTRIP_TOL))

    def body(i, rng):
        rho = random_pure(rng, config.dim) if i % 4 == 3 else random_density(rng, config.dim)
        t = born_transformation(rho)
        if config.fault_inject:
            t = faulted(t, Perturbation(atom=0, delta=FAULT_DELTA))
        try:
            rec = reconstruct(t, config.dim)
        except NotAState as exc:
            forward.record(False, float("inf"), {"trial": i, "error": str(exc)})
            return
        err = rec.frobenius_distance(rho)
        forward.record(err <= forward.tol, err, {"trial": i, "frobenius": err})
        m = random_effect(rng, config.dim)
        back = abs(extract_xi(born_transformation(rec), m) - extract_xi(t, m, validate=False))
        backward.record(back <= backward.tol, back, {"trial": i})

    return _run_trials(config, "roundtrip", [forward, backward], body)


def power_candidate(dim: int, k: int = 2):
    """``xi(M) = Tr[M / d] ** k``: normalized but not additive."""
    return effectwise(EffectFunctional("power", identity_op(dim) / dim, k=k))


def suite_negative_controls(config: RunConfig) -> list[Check]:
    """Each check passes when the planted defect is detected."""
    d = config.dim
    rng = trial_rng(config.seed, "negative-controls", 0)
    checks = []
    t = power_candidate(d)

    c = Check("negative/power/normalization-holds", NORMALIZATION_TOL)
    dev = abs(one_point_value(t) - 1)
    c.record(dev <= c.tol, dev)
    checks.append(c)

    c = Check("negative/power/apply-rejects-uniform-3-atom", 0.0)
    uniform = make_povm(discrete_space(["a", "b", "c"]), [identity_op(d) / 3] * 3)
    try:
        apply(t, uniform)
        c.record(False, 0.0, {"error": "apply accepted a non-additive candidate"})
    except NotAMeasure as exc:
        c.record(True, 0.0)
        c.extra["values"] = list(exc.values)
    checks.append(c)

    c = Check("negative/power/gpm-fails-on-halves", 0.0)
    half = identity_op(d) * 0.5
    rep = check_generalized_measure(t, [[half, half]], tol=GPM_TOL)
    c.record(not rep.passed, 0.0, None if not rep.passed else {"error": "additivity defect not detected"})
    c.extra["defect"] = rep.decompositions[0]["defect"]
    checks.append(c)

    c = Check("negative/power/reconstruct-rejects", 0.0)
    try:
        reconstruct(t, d)
        c.record(False, 0.0, {"error": "reconstruct accepted a non-additive candidate"})
    except NotAState:
        c.record(True, 0.0)
    checks.append(c)

    c = Check("negative/faulted-born/square-fails", 0.0)
    spaces, (f,) = random_chain(rng, max(2, config.max_atoms), length=1)
    while spaces[1].n_atoms < 2:  # pragma: no cover - depends on draw
        spaces, (f,) = random_chain(rng, max(2, config.max_atoms), length=1)
    mu = random_povm(rng, spaces[0], d)
    # all mass of the perturbed atoms must stay nonnegative: use a maximally mixed state
    bad = faulted(born_transformation(identity_op(d) / d), Perturbation(atom=0, delta=FAULT_DELTA, space=spaces[1]))
    try:
        sq = check_square(bad, f, mu, config.tol)
        c.record(not sq.commutes, 0.0, None if not sq.commutes else {"error": "fault not detected"})
        c.extra["measured_deviation"] = sq.max_deviation
        c.extra["located_atom"] = sq.atom
    except NotAMeasure as exc:
        c.record(True, 0.0)
        c.extra["detected_by"] = f"NotAMeasure on {exc.path}"
    checks.append(c)

    c = Check("negative/corrupted-pushforward/laws-fail", 0.0)
    spaces, maps = random_chain(rng, max(2, config.max_atoms), length=2)
    rep = check_functor_laws(composites(maps), [random_povm(rng, spaces[0], d)], tol=config.tol, fault=FAULT_DELTA)
    c.record(not rep.passed, 0.0, None if not rep.passed else {"error": "corruption not detected"})
    c.extra["located"] = rep.counterexample
    checks.append(c)
    return checks


SUITE_FUNCS: dict[str, Callable[[RunConfig], list[Check]]] = {
    "functor-laws": suite_functor_laws,
    "naturality": suite_naturality,
    "xi-well-defined": suite_xi_well_defined,
    "gpm-additivity": suite_gpm_additivity,
    "injectivity": suite_injectivity,
    "roundtrip": suite_roundtrip,
    "negative-controls": suite_negative_controls,
}


@dataclass
class SuiteReport:
    suite: str
    config: RunConfig
    checks: list[dict[str, Any]]
    wall_clock_seconds: float

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.config.seed,
            "version": __version__,
            "config": self.config.to_dict(),
            "pass": self.passed,
            "checks": self.checks,
            "wall_clock_seconds": self.wall_clock_seconds,
        }

    def to_text(self) -> str:
        lines = [f"suite {self.suite}  seed {self.config.seed}  dim {self.config.dim}"]
        for c in self.checks:
            dev = c["max_deviation"]
            dev_s = "n/a" if dev is None else f"{dev:.3e}"
            lines.append(f"  [{'PASS' if c['pass'] else 'FAIL'}] {c['name']}  max_dev={dev_s}  trials={c['trials']}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}  ({self.wall_clock_seconds:.2f} s)")
        return "\n".join(lines) + "\n"


def run_suite(config: RunConfig) -> SuiteReport:
    config.validate()
    names = SUITES if config.suite == "all" else (config.suite,)
    start = time.perf_counter()
    checks = []
    for name in names:
        checks.extend(c.to_dict() for c in SUITE_FUNCS[name](config))
    return SuiteReport(config.suite, config, checks, time.perf_counter() - start)
