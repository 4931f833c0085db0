"""Redundancy ``I_min`` and the partial-information atoms over the lattice."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .distribution import JointDistribution, Source, mutual_information, specific_information
from .lattice import (
    MAX_PREDICTORS,
    LatticeError,
    RedundancyLattice,
    SourceCollection,
    build_lattice,
    meet_all,
)

ATOM_TOL = 1e-8
CHECK_TOL = 1e-8
DEFAULT_ZERO_TOL = 1e-10


class ConsistencyError(RuntimeError):
    """A computed quantity contradicts a proven identity (a bug, not bad input)."""


class SpecificInformationTable:
    """Lazily cached ``I(S=s; A)`` for every target outcome and source.

    Each source appears in many lattice nodes, so the KL terms are
    computed at most once per ``(s, source)`` pair.
    """

    def __init__(self, d: JointDistribution):
        self.dist = d
        self.outcomes = d.target_support()
        ps = {s: 0.0 for s in self.outcomes}
        for o, p in d.items():
            ps[o[0]] += p
        self.p_s = np.array([ps[s] for s in self.outcomes])
        self._cache: dict[int, np.ndarray] = {}

    def source_values(self, mask: int) -> np.ndarray:
        vals = self._cache.get(mask)
        if vals is None:
            src = Source.from_mask(mask)
            vals = np.array([specific_information(self.dist, s, src) for s in self.outcomes])
            self._cache[mask] = vals
        return vals

    def profile(self, alpha: SourceCollection) -> np.ndarray:
        """Per-outcome minimum specific information over the sources of alpha."""
        return np.min([self.source_values(m) for m in alpha.masks], axis=0)

    def imin(self, alpha: SourceCollection) -> float:
        return float(self.p_s @ self.profile(alpha))

    @property
    def evaluated_sources(self) -> int:
        return len(self._cache)


def _validate(d: JointDistribution, alpha: SourceCollection) -> None:
    if alpha.max_index > d.num_predictors:
        raise LatticeError(
            f"{alpha} uses predictor {alpha.max_index}; the distribution has "
            f"{d.num_predictors}"
        )


def i_min(d: JointDistribution, alpha: SourceCollection, table: SpecificInformationTable | None = None) -> float:
    """Expected minimum specific information over the sources of ``alpha``."""
    _validate(d, alpha)
    table = table or SpecificInformationTable(d)
    return table.imin(alpha)


def _lattice_for(d: JointDistribution, lattice: RedundancyLattice | None) -> RedundancyLattice:
    if d.num_predictors < 1:
        raise LatticeError("the distribution has no predictors")
    if d.num_predictors > MAX_PREDICTORS:
        raise LatticeError(
            f"{d.num_predictors} predictors exceed the supported maximum of {MAX_PREDICTORS}"
        )
    if lattice is None:
        return build_lattice(d.num_predictors)
    if lattice.num_predictors != d.num_predictors:
        raise LatticeError(
            f"lattice is over {lattice.num_predictors} predictors, the distribution "
            f"has {d.num_predictors}"
        )
    return lattice


@dataclass
class PIDecomposition:
    """Redundancy values and partial-information atoms for one target."""

    lattice: RedundancyLattice
    target: str
    imin_values: np.ndarray
    atom_values: np.ndarray
    total: float
    evaluations: int = 0
    skipped: int = 0
    variable_names: tuple[str, ...] = field(default=())

    @property
    def imin(self) -> dict[SourceCollection, float]:
        return dict(zip(self.lattice.nodes, self.imin_values.tolist()))

    @property
    def atoms(self) -> dict[SourceCollection, float]:
        return dict(zip(self.lattice.nodes, self.atom_values.tolist()))

    def atom(self, alpha: SourceCollection | str) -> float:
        return float(self.atom_values[self.lattice.idx(alpha)])

    def imin_at(self, alpha: SourceCollection | str) -> float:
        return float(self.imin_values[self.lattice.idx(alpha)])

    def nonzero_atoms(self, tol: float = 1e-12) -> dict[str, float]:
        return {
            a.label: v for a, v in zip(self.lattice.nodes, self.atom_values.tolist()) if abs(v) > tol
        }

    def to_json_dict(self, decimals: int = 6, scale: float = 1.0) -> dict:
        def fmt(x: float) -> float:
            return round(x * scale, decimals) + 0.0

        return {
            "target": self.target,
            "total_bits": fmt(self.total),
            "atoms": {a.label: fmt(v) for a, v in zip(self.lattice.nodes, self.atom_values.tolist())},
            "imin": {a.label: fmt(v) for a, v in zip(self.lattice.nodes, self.imin_values.tolist())},
        }


def _mobius(lattice: RedundancyLattice, imin: np.ndarray) -> np.ndarray:
    raw = np.empty_like(imin)
    for i in range(len(lattice)):
        below = lattice.strict_down_set_idx(i)
        raw[i] = imin[i] - raw[below].sum()
    return raw


def _clamp(lattice: RedundancyLattice, raw: np.ndarray) -> np.ndarray:
    worst = int(np.argmin(raw)) if raw.size else 0
    if raw.size and raw[worst] < -ATOM_TOL:
        raise ConsistencyError(
            f"partial information at {lattice.nodes[worst]} is {raw[worst]:.3e} bits"
        )
    return np.maximum(raw, 0.0)


def pi_recursive(d: JointDistribution, lattice: RedundancyLattice | None = None) -> PIDecomposition:
    """Atoms by subtracting everything strictly below, bottom-up."""
    lattice = _lattice_for(d, lattice)
    table = SpecificInformationTable(d)
    profiles = np.array([table.profile(a) for a in lattice.nodes])
    imin = profiles @ table.p_s
    atoms = _clamp(lattice, _mobius(lattice, imin))
    return PIDecomposition(
        lattice=lattice,
        target=d.target_name,
        imin_values=imin,
        atom_values=atoms,
        total=mutual_information(d, range(1, d.num_predictors + 1)),
        evaluations=len(lattice),
        variable_names=d.variable_names,
    )


def pi_closed_form(
    d: JointDistribution,
    lattice: RedundancyLattice | None,
    alpha: SourceCollection | str,
    table: SpecificInformationTable | None = None,
) -> float:
    """Atom at ``alpha`` as ``I_min(alpha)`` minus the expected best cover profile."""
    lattice = _lattice_for(d, lattice)
    i = lattice.idx(alpha)
    alpha = lattice.nodes[i]
    table = table or SpecificInformationTable(d)
    children = lattice.children_idx(i)
    own = table.profile(alpha)
    if not children:
        return float(table.p_s @ own)
    best = np.max([table.profile(lattice.nodes[c]) for c in children], axis=0)
    return float(table.p_s @ (own - best))


def pi_inclusion_exclusion(
    d: JointDistribution,
    lattice: RedundancyLattice | None,
    alpha: SourceCollection | str,
    table: SpecificInformationTable | None = None,
) -> float:
    """Atom at ``alpha`` by inclusion-exclusion over meets of its covers."""
    lattice = _lattice_for(d, lattice)
    i = lattice.idx(alpha)
    table = table or SpecificInformationTable(d)
    value = table.imin(lattice.nodes[i])
    covers = [lattice.nodes[c] for c in lattice.children_idx(i)]
    for k in range(1, len(covers) + 1):
        sign = 1.0 if k % 2 == 1 else -1.0
        for group in itertools.combinations(covers, k):
            value -= sign * table.imin(meet_all(group))
    return value


def decompose(
    d: JointDistribution,
    lattice: RedundancyLattice | None = None,
    check_fraction: float = 0.1,
    seed: int = 0,
) -> PIDecomposition:
    """Full decomposition of ``I(S; R)``.

    A random ``check_fraction`` of nodes is re-derived with the closed form
    and must agree with the recursion to ``CHECK_TOL``.
    """
    result = pi_recursive(d, lattice)
    lat = result.lattice
    if check_fraction > 0:
        table = SpecificInformationTable(d)
        rng = np.random.default_rng(seed)
        count = max(1, math.ceil(check_fraction * len(lat)))
        for i in rng.choice(len(lat), size=min(count, len(lat)), replace=False):
            closed = pi_closed_form(d, lat, lat.nodes[i], table)
            if abs(closed - result.atom_values[i]) > CHECK_TOL:
                raise ConsistencyError(
                    f"atom at {lat.nodes[i]}: recursion {result.atom_values[i]!r} "
                    f"vs closed form {closed!r}"
                )
    return result


def decompose_pruned(
    d: JointDistribution,
    zero_tol: float = DEFAULT_ZERO_TOL,
    lattice: RedundancyLattice | None = None,
) -> PIDecomposition:
    """Decomposition that walks down from the top and skips every node
    below one whose ``I_min`` is at most ``zero_tol`` (``I_min`` is
    monotone, so those values are zero too)."""
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    lattice = _lattice_for(d, lattice)
    table = SpecificInformationTable(d)
    n = len(lattice)
    imin = np.zeros(n)
    pruned = np.zeros(n, dtype=bool)
    evaluations = 0
    for i in range(n - 1, -1, -1):
        if pruned[i]:
            continue
        value = table.imin(lattice.nodes[i])
        evaluations += 1
        if value <= zero_tol:
            pruned |= lattice.le[:, i]
        else:
            imin[i] = value
    atoms = _clamp(lattice, _mobius(lattice, imin))
    return PIDecomposition(
        lattice=lattice,
        target=d.target_name,
        imin_values=imin,
        atom_values=atoms,
        total=mutual_information(d, range(1, d.num_predictors + 1)),
        evaluations=evaluations,
        skipped=n - evaluations,
        variable_names=d.variable_names,
    )


def asymmetry_report(d: JointDistribution, pruned: bool = False) -> dict[str, PIDecomposition]:
    """Decompose once per variable acting as the target.

    The remaining variables keep their original relative order as
    predictors 1, 2, ...
    """
    if d.num_variables > MAX_PREDICTORS + 1:
        raise LatticeError(f"at most {MAX_PREDICTORS + 1} variables are supported")
    if d.num_variables < 2:
        raise LatticeError("need at least two variables")
    run = decompose_pruned if pruned else decompose
    return {name: run(d.with_target(name)) for name in d.variable_names}
