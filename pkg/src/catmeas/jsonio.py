"""JSON encodings of spaces, maps, operators, measures and candidates.

Formats::

    space      {"points": ["a", "b", "c"], "atoms": [[0], [1, 2]]}
    map        {"domain": <space>, "codomain": <space>, "assignment": [1, 0, 0]}
    operator   {"dim": d, "entries": [[[re, im], ...], ...]}       (row-major)
    povm       {"space": <space>, "atom_effects": [<operator>, ...]}
    measure    {"space": <space>, "atom_probs": [...]}
    candidate  {"kind": "born", "dim": d, "rho": <operator>}
               {"kind": "effectwise", "dim": d,
                "xi": {"form": "linear"|"power"|"affine", "operator": <operator>,
                       "k": 2, "a": 1.0, "b": 0.0}}
               {"kind": "faulted", "dim": d, "base": <candidate>,
                "perturbation": {"atom": 0, "delta": 0.01, "space": <space>|null}}
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .functors import Povm, ProbabilityMeasure, make_measure, make_povm
from .measurable import FiniteMeasurableSpace, MeasurableMap, make_map, make_space
from .naturality import CandidateTransformation, EffectFunctional, Perturbation
from .operators import HermitianOperator, as_density, make_hermitian


def space_to_json(space: FiniteMeasurableSpace) -> dict[str, Any]:
    return {"points": list(space.points), "atoms": [list(a) for a in space.atoms]}


def space_from_json(obj: dict[str, Any]) -> FiniteMeasurableSpace:
    points = [str(p) for p in obj["points"]]
    atoms = [[points[i] for i in atom] for atom in obj["atoms"]]
    return make_space(points, atoms)


def map_to_json(f: MeasurableMap) -> dict[str, Any]:
    return {
        "domain": space_to_json(f.domain),
        "codomain": space_to_json(f.codomain),
        "assignment": list(f.assignment),
    }


def map_from_json(obj: dict[str, Any]) -> MeasurableMap:
    return make_map(space_from_json(obj["domain"]), space_from_json(obj["codomain"]), obj["assignment"])


def operator_to_json(op: HermitianOperator) -> dict[str, Any]:
    m = op.matrix
    return {
        "dim": op.dim,
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def operator_from_json(obj: dict[str, Any]) -> HermitianOperator:
    arr = np.asarray(obj["entries"], dtype=float)
    m = arr[..., 0] + 1j * arr[..., 1]
    if "dim" in obj and m.shape != (obj["dim"], obj["dim"]):
        raise ValueError(f"operator entries have shape {m.shape}, declared dim {obj['dim']}")
    return make_hermitian(m)


def povm_to_json(povm: Povm) -> dict[str, Any]:
    return {"space": space_to_json(povm.space), "atom_effects": [operator_to_json(e) for e in povm.atom_effects]}


def povm_from_json(obj: dict[str, Any]) -> Povm:
    return make_povm(space_from_json(obj["space"]), [operator_from_json(e) for e in obj["atom_effects"]])


def measure_to_json(p: ProbabilityMeasure) -> dict[str, Any]:
    return {"space": space_to_json(p.space), "atom_probs": list(p.atom_probs)}


def measure_from_json(obj: dict[str, Any]) -> ProbabilityMeasure:
    return make_measure(space_from_json(obj["space"]), obj["atom_probs"])


def candidate_to_json(t: CandidateTransformation) -> dict[str, Any]:
    out: dict[str, Any] = {"kind": t.kind, "dim": t.dim}
    if t.kind == "born":
        out["rho"] = operator_to_json(t.rho)
    elif t.kind == "effectwise":
        xi = t.xi
        out["xi"] = {"form": xi.form, "operator": operator_to_json(xi.operator), "k": xi.k, "a": xi.a, "b": xi.b}
    else:
        p = t.perturbation
        out["base"] = candidate_to_json(t.base)
        out["perturbation"] = {
            "atom": p.atom,
            "delta": p.delta,
            "space": None if p.space is None else space_to_json(p.space),
        }
    return out


def candidate_from_json(obj: dict[str, Any]) -> CandidateTransformation:
    kind = obj["kind"]
    if kind == "born":
        rho = as_density(operator_from_json(obj["rho"]))
        return CandidateTransformation("born", rho.dim, rho=rho)
    if kind == "effectwise":
        x = obj["xi"]
        xi = EffectFunctional(
            x["form"],
            operator_from_json(x["operator"]),
            k=int(x.get("k", 1)),
            a=float(x.get("a", 1.0)),
            b=float(x.get("b", 0.0)),
        )
        return CandidateTransformation("effectwise", xi.dim, xi=xi)
    if kind == "faulted":
        base = candidate_from_json(obj["base"])
        p = obj.get("perturbation", {})
        space = p.get("space")
        pert = Perturbation(
            atom=int(p.get("atom", 0)),
            delta=float(p.get("delta", 0.01)),
            space=None if space is None else space_from_json(space),
        )
        return CandidateTransformation("faulted", base.dim, base=base, perturbation=pert)
    raise ValueError(f"unknown candidate kind {kind!r}")


def dumps(obj: Any) -> str:
    """Canonical text form: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load(path: str | Path) -> Any:
    return json.loads(Path(path).read_text())
