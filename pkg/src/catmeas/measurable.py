"""Finite measurable spaces, events and measurable maps.

A sigma-algebra on a finite set is generated by a unique partition, so a
space is stored as its points plus the list of atoms of that partition.
Events are unions of atoms and are identified by the set of atom indices
they contain, which makes event equality syntactic.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    DuplicatePoint,
    EmptyAtom,
    NotAnEvent,
    NotMeasurable,
    OverlappingAtoms,
    SpaceMismatch,
    UncoveredPoint,
    UnknownPoint,
)

__all__ = [
    "FiniteMeasurableSpace",
    "Event",
    "MeasurableMap",
    "make_space",
    "discrete_space",
    "is_event",
    "event",
    "make_map",
    "identity",
    "preimage",
    "compose",
]


@dataclass(frozen=True)
class FiniteMeasurableSpace:
    """Points and the atom partition generating the sigma-algebra.

    ``atoms`` holds sorted tuples of point indices. Build instances through
    :func:`make_space`, which validates the partition.
    """

    points: tuple[str, ...]
    atoms: tuple[tuple[int, ...], ...]

    @cached_property
    def atom_of(self) -> tuple[int, ...]:
        """Index of the atom containing each point."""
        owner = [0] * len(self.points)
        for k, atom in enumerate(self.atoms):
            for i in atom:
                owner[i] = k
        return tuple(owner)

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    def atom_points(self, k: int) -> frozenset[str]:
        return frozenset(self.points[i] for i in self.atoms[k])

    def full(self) -> Event:
        return Event(self, frozenset(range(self.n_atoms)))

    def empty(self) -> Event:
        return Event(self, frozenset())

    def atom_event(self, k: int) -> Event:
        return Event(self, frozenset([k]))

    def events(self) -> Iterator[Event]:
        """Enumerate the whole sigma-algebra (2**n_atoms events)."""
        n = self.n_atoms
        for r in range(n + 1):
            for combo in combinations(range(n), r):
                yield Event(self, frozenset(combo))

    def __repr__(self) -> str:
        blocks = ["{" + ",".join(self.points[i] for i in a) + "}" for a in self.atoms]
        return f"FiniteMeasurableSpace({' | '.join(blocks)})"


@dataclass(frozen=True)
class Event:
    space: FiniteMeasurableSpace
    atom_indices: frozenset[int]

    @property
    def members(self) -> frozenset[str]:
        pts = self.space.points
        return frozenset(pts[i] for k in self.atom_indices for i in self.space.atoms[k])

    def complement(self) -> Event:
        return Event(self.space, frozenset(range(self.space.n_atoms)) - self.atom_indices)

    def union(self, other: Event) -> Event:
        _same_space(self.space, other.space)
        return Event(self.space, self.atom_indices | other.atom_indices)

    def sorted_atoms(self) -> list[int]:
        return sorted(self.atom_indices)

    def __repr__(self) -> str:
        return "Event{" + ",".join(sorted(self.members)) + "}"


def _same_space(a: FiniteMeasurableSpace, b: FiniteMeasurableSpace, what: str = "space") -> None:
    if a is not b and a != b:
        raise SpaceMismatch(f"{what} mismatch: {a!r} vs {b!r}")


def make_space(points: Sequence[Hashable], atoms: Iterable[Iterable[Hashable]]) -> FiniteMeasurableSpace:
    """Validate a partition of ``points`` and return the space it generates.

    Raises
    ------
    DuplicatePoint, UnknownPoint, EmptyAtom, OverlappingAtoms, UncoveredPoint
    """
    names = tuple(str(p) for p in points)
    index: dict[str, int] = {}
    for i, p in enumerate(names):
        if p in index:
            raise DuplicatePoint(f"point {p!r} listed twice")
        index[p] = i

    owner: dict[int, int] = {}
    blocks = []
    for k, atom in enumerate(atoms):
        members = [str(p) for p in atom]
        if not members:
            raise EmptyAtom(f"atom {k} is empty")
        block = set()
        for p in members:
            if p not in index:
                raise UnknownPoint(f"atom {k} mentions unknown point {p!r}")
            i = index[p]
            if i in owner and owner[i] != k:
                raise OverlappingAtoms(f"point {p!r} lies in atoms {owner[i]} and {k}")
            owner[i] = k
            block.add(i)
        blocks.append(tuple(sorted(block)))

    for i, p in enumerate(names):
        if i not in owner:
            raise UncoveredPoint(f"point {p!r} is not covered by any atom")
    return FiniteMeasurableSpace(names, tuple(blocks))


def discrete_space(points: Sequence[Hashable]) -> FiniteMeasurableSpace:
    """Space with the power-set sigma-algebra (every point is an atom)."""
    return make_space(points, [[p] for p in points])


def is_event(space: FiniteMeasurableSpace, subset: Iterable[Hashable]) -> bool:
    """True iff ``subset`` is a union of atoms of ``space``."""
    try:
        event(space, subset)
    except NotAnEvent:
        return False
    return True


def event(space: FiniteMeasurableSpace, subset: Iterable[Hashable]) -> Event:
    """Canonical :class:`Event` for a subset of points."""
    idx = set()
    for p in subset:
        p = str(p)
        if p not in space.index:
            raise UnknownPoint(f"{p!r} is not a point of {space!r}")
        idx.add(space.index[p])
    ks = frozenset(space.atom_of[i] for i in idx)
    for k in ks:
        if not set(space.atoms[k]) <= idx:
            raise NotAnEvent(f"subset splits atom {k} of {space!r}")
    return Event(space, ks)


@dataclass(frozen=True)
class MeasurableMap:
    """Total function between finite spaces, stored as point indices.

    ``assignment[i]`` is the codomain point index of domain point ``i``.
    """

    domain: FiniteMeasurableSpace
    codomain: FiniteMeasurableSpace
    assignment: tuple[int, ...]

    @cached_property
    def atom_map(self) -> tuple[int, ...]:
        """Codomain atom receiving each domain atom (well defined by measurability)."""
        return tuple(self.codomain.atom_of[self.assignment[a[0]]] for a in self.domain.atoms)

    def __call__(self, point: Hashable) -> str:
        return self.codomain.points[self.assignment[self.domain.index[str(point)]]]


def make_map(
    domain: FiniteMeasurableSpace,
    codomain: FiniteMeasurableSpace,
    assignment: Mapping[Hashable, Hashable] | Sequence[int],
) -> MeasurableMap:
    """Build a map, checking that preimages of codomain atoms are events.

    ``assignment`` is either a dict from domain points to codomain points or
    a sequence giving the codomain point index for each domain point.
    """
    if isinstance(assignment, Mapping):
        values = []
        for p in domain.points:
            if p not in assignment:
                raise UnknownPoint(f"assignment is not defined at {p!r}")
            q = str(assignment[p])
            if q not in codomain.index:
                raise UnknownPoint(f"{q!r} is not a point of the codomain")
            values.append(codomain.index[q])
        target = tuple(values)
    else:
        target = tuple(int(j) for j in assignment)
        if len(target) != len(domain.points):
            raise UnknownPoint(
                f"assignment has {len(target)} entries for {len(domain.points)} domain points"
            )
        for j in target:
            if not 0 <= j < len(codomain.points):
                raise UnknownPoint(f"codomain index {j} out of range")

    # A domain atom whose points land in two codomain atoms is split by both preimages.
    for k, atom in enumerate(domain.atoms):
        hit = {codomain.atom_of[target[i]] for i in atom}
        if len(hit) > 1:
            b = min(hit)
            raise NotMeasurable(
                f"preimage of codomain atom {sorted(codomain.atom_points(b))} "
                f"splits domain atom {sorted(domain.atom_points(k))}"
            )
    return MeasurableMap(domain, codomain, target)


def identity(space: FiniteMeasurableSpace) -> MeasurableMap:
    return MeasurableMap(space, space, tuple(range(len(space.points))))


def preimage(f: MeasurableMap, ev: Event) -> Event:
    _same_space(ev.space, f.codomain, "event/codomain")
    return Event(f.domain, frozenset(k for k, b in enumerate(f.atom_map) if b in ev.atom_indices))


def compose(g: MeasurableMap, f: MeasurableMap) -> MeasurableMap:
    """``g`` after ``f``."""
    _same_space(f.codomain, g.domain, "f.codomain/g.domain")
    return MeasurableMap(f.domain, g.codomain, tuple(g.assignment[j] for j in f.assignment))
