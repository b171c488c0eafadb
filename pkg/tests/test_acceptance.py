"""Exit criteria. Each test records one PASS/FAIL line, printed at the end of the run.

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""
import json
import time

import numpy as np
import pytest

from catmeas.born import born_measure, injectivity_witness, reconstruct
from catmeas.cli import main
from catmeas.errors import NotAMeasure, NotAState
from catmeas.functors import make_povm
from catmeas.instances import RunConfig, random_density, trial_rng
from catmeas.measurable import discrete_space
from catmeas.naturality import apply, check_generalized_measure, one_point_value
from catmeas.operators import as_density, identity_op
from catmeas.suites import power_candidate, run_suite

from conftest import diag

RESULTS = []


def record(label, ok, detail):
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    return ok


def checks_by_name(report):
    return {c["name"]: c for c in report.to_dict()["checks"]}


def test_c1_functor_laws():
    start = time.perf_counter()
    rep = run_suite(RunConfig(seed=1, dim=2, max_atoms=6, trials=1000, tol=1e-10, suite="functor-laws"))
    elapsed = time.perf_counter() - start
    c = checks_by_name(rep)
    dev = max(c["functor-laws/M"]["max_deviation"], c["functor-laws/P"]["max_deviation"])
    ok = rep.passed and dev <= 1e-10 and c["functor-laws/M"]["trials"] >= 1000 and elapsed < 10
    assert record("C1 functor laws (M and P, 1000 3-map chains)", ok, f"max dev {dev:.2e}, {elapsed:.1f} s"), rep.to_dict()


def test_c2_born_naturality():
    rep = run_suite(RunConfig(seed=2, dim=3, max_atoms=6, trials=500, tol=1e-10, suite="naturality"))
    c = checks_by_name(rep)["naturality/born"]
    ok = c["pass"] and c["max_deviation"] <= 1e-10 and c["trials"] >= 500
    assert record("C2 naturality of Born transformation", ok, f"max dev {c['max_deviation']:.2e} over {c['trials']} squares"), c


def test_c3_xi_well_defined():
    rep = run_suite(RunConfig(seed=3, dim=2, max_atoms=6, trials=200, tol=1e-10, suite="xi-well-defined"))
    c = checks_by_name(rep)["xi-well-defined"]
    ok = c["pass"] and c["max_deviation"] <= 1e-10 and c["trials"] >= 200
    assert record("C3 xi well-defined across embeddings", ok, f"max dev {c['max_deviation']:.2e}"), c


def test_c4_generalized_measure_additivity():
    rep = run_suite(RunConfig(seed=4, dim=3, max_atoms=6, trials=80, tol=1e-10, suite="gpm-additivity"))
    c = checks_by_name(rep)
    add, routes = c["gpm-additivity"], c["gpm-additivity/routes"]
    ok = add["pass"] and add["max_deviation"] <= 1e-9 and routes["pass"] and routes["max_deviation"] <= 1e-10
    ok = ok and add["sizes"] == [2, 5, 16, 64]
    detail = f"defect {add['max_deviation']:.2e}, route gap {routes['max_deviation']:.2e}, sizes {add['sizes']}"
    assert record("C4 generalized-measure additivity (two routes)", ok, detail), c


def test_c5_injectivity():
    rep = run_suite(RunConfig(seed=5, dim=3, max_atoms=6, trials=200, suite="injectivity"))
    c = checks_by_name(rep)
    ok = (
        c["injectivity/gap-positive"]["pass"]
        and c["injectivity/gap-equals-eigenvalue-sum"]["max_deviation"] <= 1e-10
        and c["injectivity/born-difference"]["max_deviation"] <= 1e-12
        and c["injectivity/gap-positive"]["trials"] >= 200
    )
    detail = (
        f"eig-sum dev {c['injectivity/gap-equals-eigenvalue-sum']['max_deviation']:.2e}, "
        f"Born diff dev {c['injectivity/born-difference']['max_deviation']:.2e}"
    )
    assert record("C5 injectivity witness", ok, detail), c


def test_c6_roundtrip():
    start = time.perf_counter()
    worst = 0.0
    ok = True
    for d in (2, 3, 4):
        rep = run_suite(RunConfig(seed=6, dim=d, trials=100, suite="roundtrip"))
        c = checks_by_name(rep)[f"roundtrip/d={d}"]
        ok = ok and c["pass"] and c["trials"] >= 100
        worst = max(worst, c["max_deviation"] if c["max_deviation"] is not None else np.inf)
    elapsed = time.perf_counter() - start
    ok = ok and worst <= 1e-8 and elapsed < 30
    assert record("C6 bijection round-trip d=2,3,4", ok, f"max Frobenius {worst:.2e}, {elapsed:.1f} s")


def test_c7a_power_candidate_normalized():
    dev = abs(one_point_value(power_candidate(2)) - 1)
    assert record("C7a power-2 candidate normalized", dev <= 1e-12, f"|xi(1) - 1| = {dev:.1e}")


def test_c7b_power_candidate_rejected_by_apply():
    uniform = make_povm(discrete_space(["a", "b", "c"]), [identity_op(2) / 3] * 3)
    try:
        apply(power_candidate(2), uniform)
        caught = False
    except NotAMeasure:
        caught = True
    assert record("C7b apply rejects power-2 on uniform 3-atom POVM", caught, "NotAMeasure" if caught else "accepted")


def test_c7c_power_candidate_additivity_defect():
    half = identity_op(2) * 0.5
    rep = check_generalized_measure(power_candidate(2), [[half, half]])
    defect = rep.decompositions[0]["defect"]
    expected = 0.75
    ok = (not rep.passed) and abs(defect - expected) <= 1e-12
    detail = f"check fails: {not rep.passed}; measured defect {defect!r}, required {expected} +- 1e-12"
    # xi(1/2) = (Tr[rho/2])^2 = 1/4 for every unit-trace rho, so xi(1) - 2 xi(1/2) = 1/2.
    # A defect of 3/4 would need xi(1/2) = 1/8, i.e. exponent 3.
    assert record("C7c power-2 additivity defect on {1/2, 1/2}", ok, detail), detail


def test_c7d_power_candidate_not_a_state():
    outcomes = {}
    for d in (2, 3, 4):
        try:
            reconstruct(power_candidate(d), d)
            outcomes[d] = "reconstructed"
        except NotAState:
            outcomes[d] = "NotAState"
    ok = all(v == "NotAState" for v in outcomes.values())
    assert record("C7d reconstruct rejects power-2 at d=2,3,4", ok, str(outcomes))


def test_c8_hand_anchor():
    rho, sigma = as_density(diag(0.75, 0.25)), as_density(diag(0.25, 0.75))
    w = injectivity_witness(rho, sigma)
    p_dev = float(np.max(np.abs(w.projector.matrix - np.diag([1, 0]))))
    gap_dev = abs(w.gap - 0.5)
    ok = p_dev <= 1e-14 and gap_dev <= 1e-14
    assert record("C8 hand anchor P = diag(1,0), gap = 1/2", ok, f"P dev {p_dev:.1e}, gap dev {gap_dev:.1e}")


def test_c9_determinism(tmp_path):
    outs = []
    codes = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        codes.append(main(["verify", "--suite", "all", "--seed", "9", "--trials", "40", "--out", str(path)]))
        report = json.loads(path.read_text())
        report.pop("wall_clock_seconds")
        outs.append(json.dumps(report, sort_keys=True, indent=2).encode())
    ok = outs[0] == outs[1] and codes == [0, 0]
    assert record("C9 deterministic verify --suite all", ok, f"identical bytes: {outs[0] == outs[1]}, exit codes {codes}")


def test_born_measure_sanity():
    """Not a numbered criterion: guards the helper used by C5."""
    rng = trial_rng(0, "injectivity", 0)
    rho = random_density(rng, 2)
    w = injectivity_witness(rho, as_density(identity_op(2) / 2))
    assert born_measure(rho, w.povm)[0] >= 0


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
