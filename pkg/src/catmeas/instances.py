"""Seeded random instances: spaces, maps, POVMs, states and effects.

Randomness comes from numpy's Philox4x64 counter-based generator. The
generator for trial ``i`` of stream ``s`` under run seed ``seed`` is keyed by
``SeedSequence(entropy=seed, spawn_key=(s, i))``, so any single trial can be
regenerated without replaying the trials before it, and trial order does not
matter.
"""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from .errors import ConfigInvalid
from .functors import Povm, ProbabilityMeasure, make_measure, make_povm
from .measurable import Event, FiniteMeasurableSpace, MeasurableMap, compose, make_map, make_space
from .operators import DensityOperator, Effect, HermitianOperator, as_density, as_effect, sqrtm_psd

PRNG_NAME = "numpy.Philox4x64/SeedSequence(entropy=seed, spawn_key=(stream, trial))"
PRNG_VERSION = 1

SUITES = (
    "functor-laws",
    "naturality",
    "xi-well-defined",
    "gpm-additivity",
    "injectivity",
    "roundtrip",
    "negative-controls",
)

# one stream id per consumer of randomness
STREAMS = {name: i + 1 for i, name in enumerate(SUITES)}
STREAMS["gen"] = 100

DEFAULT_TOL = 1e-10


def default_tol() -> float:
    """Tolerance default, overridable through the ``CATMEAS_TOL`` environment variable."""
    raw = os.environ.get("CATMEAS_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ConfigInvalid(f"CATMEAS_TOL={raw!r} is not a number") from None
    if not tol > 0:
        raise ConfigInvalid(f"CATMEAS_TOL must be positive, got {tol}")
    return tol


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    dim: int = 2
    max_atoms: int = 6
    trials: int = 100
    tol: float = DEFAULT_TOL
    format: str = "json"
    suite: str = "all"
    fault_inject: bool = False

    def validate(self) -> RunConfig:
        if not 0 <= self.seed < 2**64:
            raise ConfigInvalid(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 2 <= self.dim <= 16:
            raise ConfigInvalid(f"dim must lie in [2, 16], got {self.dim}")
        if not 1 <= self.max_atoms <= 64:
            raise ConfigInvalid(f"max_atoms must lie in [1, 64], got {self.max_atoms}")
        if self.trials < 1:
            raise ConfigInvalid(f"trials must be at least 1, got {self.trials}")
        if not self.tol > 0:
            raise ConfigInvalid(f"tol must be positive, got {self.tol}")
        if self.format not in ("json", "text"):
            raise ConfigInvalid(f"format must be json or text, got {self.format!r}")
        if self.suite not in SUITES + ("all",):
            raise ConfigInvalid(f"unknown suite {self.suite!r}")
        return self

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def trial_rng(seed: int, stream: str | int, trial: int) -> np.random.Generator:
    s = STREAMS[stream] if isinstance(stream, str) else int(stream)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(s, int(trial)))
    return np.random.Generator(np.random.Philox(ss))


def random_space(rng: np.random.Generator, max_atoms: int, prefix: str = "p", min_atoms: int = 1) -> FiniteMeasurableSpace:
    """Random partition of 1 to 2x as many points as atoms."""
    n = int(rng.integers(min_atoms, max(min_atoms, max_atoms) + 1))
    n_points = n + int(rng.integers(0, n + 1))
    owner = np.concatenate([np.arange(n), rng.integers(0, n, size=n_points - n)]).astype(int)
    owner = owner[rng.permutation(n_points)]
    points = [f"{prefix}{i}" for i in range(n_points)]
    atoms = [[points[i] for i in range(n_points) if owner[i] == k] for k in range(n)]
    return make_space(points, atoms)


def random_map(rng: np.random.Generator, domain: FiniteMeasurableSpace, codomain: FiniteMeasurableSpace) -> MeasurableMap:
    """Each domain atom goes into one random codomain atom, pointwise at random inside it."""
    assignment = [0] * len(domain.points)
    for atom in domain.atoms:
        target = codomain.atoms[int(rng.integers(codomain.n_atoms))]
        for i in atom:
            assignment[i] = int(target[int(rng.integers(len(target)))])
    return make_map(domain, codomain, assignment)


def random_chain(rng: np.random.Generator, max_atoms: int, length: int = 3, prefix: str = "s"):
    """Spaces ``X_0 .. X_length`` and maps ``X_i -> X_{i+1}``."""
    spaces = [random_space(rng, max_atoms, f"{prefix}{i}_") for i in range(length + 1)]
    maps = [random_map(rng, spaces[i], spaces[i + 1]) for i in range(length)]
    return spaces, maps


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> DensityOperator:
    """``A^H A / Tr[A^H A]`` with ``A`` complex Gaussian of shape ``(rank, dim)``."""
    a = _ginibre(rng, rank or dim, dim)
    m = a.conj().T @ a
    return as_density(HermitianOperator(m / np.trace(m).real))


def random_pure(rng: np.random.Generator, dim: int) -> DensityOperator:
    return random_density(rng, dim, rank=1)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_effect(rng: np.random.Generator, dim: int) -> Effect:
    """Random eigenbasis with eigenvalues uniform on [0, 1]."""
    u = random_unitary(rng, dim)
    w = rng.uniform(0.0, 1.0, size=dim)
    return as_effect(HermitianOperator((u * w) @ u.conj().T))


def random_povm_effects(rng: np.random.Generator, n: int, dim: int) -> list[np.ndarray]:
    """``n`` PSD matrices summing to the identity: ``S^{-1/2} A_k^H A_k S^{-1/2}``."""
    raw = []
    for _ in range(n):
        a = _ginibre(rng, dim, dim)
        raw.append(a.conj().T @ a)
    s = np.sum(raw, axis=0)
    w, v = np.linalg.eigh(s)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    return [inv_sqrt @ e @ inv_sqrt for e in raw]


def random_povm(rng: np.random.Generator, space: FiniteMeasurableSpace, dim: int) -> Povm:
    ops = [HermitianOperator(m) for m in random_povm_effects(rng, space.n_atoms, dim)]
    return make_povm(space, ops)


def random_measure(rng: np.random.Generator, space: FiniteMeasurableSpace) -> ProbabilityMeasure:
    return make_measure(space, rng.dirichlet(np.ones(space.n_atoms)))


def split_effect(rng: np.random.Generator, m: HermitianOperator, pieces: int) -> list[HermitianOperator]:
    """``pieces`` PSD operators summing to ``m``: ``sqrt(m) W_k sqrt(m)`` for a random POVM ``W``."""
    root = sqrtm_psd(m).matrix
    return [HermitianOperator(root @ w @ root) for w in random_povm_effects(rng, pieces, m.dim)]


def embed_effect(
    rng: np.random.Generator, m: HermitianOperator, inside: int, outside: int, prefix: str = "e"
) -> tuple[Povm, Event]:
    """Random POVM on a fresh space together with an event carrying exactly ``m``.

    The event consists of ``inside`` atoms whose values split ``m``; the
    remaining ``outside`` atoms split ``1 - m``.
    """
    n = inside + outside
    space = random_space(rng, n, prefix, min_atoms=n)
    order = [int(k) for k in rng.permutation(n)]
    event_atoms = frozenset(order[:inside])
    comp = HermitianOperator(np.eye(m.dim) - m.matrix)
    parts_in = split_effect(rng, m, inside)
    parts_out = split_effect(rng, comp, outside)
    effects: list[HermitianOperator] = [None] * n  # type: ignore[list-item]
    for k, p in zip(order[:inside], parts_in):
        effects[k] = p
    for k, p in zip(order[inside:], parts_out):
        effects[k] = p
    povm = make_povm(space, effects)
    return povm, Event(space, event_atoms)


@dataclass
class InstanceBundle:
    config: RunConfig
    chains: list[dict[str, Any]]

    def to_json(self) -> dict[str, Any]:
        return {
            "prng": {"name": PRNG_NAME, "version": PRNG_VERSION},
            "config": self.config.to_dict(),
            "instances": self.chains,
        }


def gen_instances(config: RunConfig) -> InstanceBundle:
    """One record per trial: a 3-map chain, a POVM and a measure on its source, and a state."""
    from .jsonio import map_to_json, measure_to_json, operator_to_json, povm_to_json, space_to_json

    config.validate()
    records = []
    for i in range(config.trials):
        rng = trial_rng(config.seed, "gen", i)
        spaces, maps = random_chain(rng, config.max_atoms)
        povm = random_povm(rng, spaces[0], config.dim)
        measure = random_measure(rng, spaces[0])
        rho = random_density(rng, config.dim)
        records.append(
            {
                "trial": i,
                "spaces": [space_to_json(s) for s in spaces],
                "maps": [map_to_json(f) for f in maps],
                "povm": povm_to_json(povm),
                "measure": measure_to_json(measure),
                "density": operator_to_json(rho),
            }
        )
    return InstanceBundle(config, records)


def composites(maps: list[MeasurableMap]) -> list[MeasurableMap]:
    """The chain's maps plus every composite of two consecutive ones."""
    return list(maps) + [compose(maps[i + 1], maps[i]) for i in range(len(maps) - 1)]
