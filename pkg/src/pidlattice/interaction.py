"""Interaction information and its expansion into signed PI atoms.

Sign convention: the three-variable value is positive for XOR, i.e.
``I(S;R1;R2) = I(S;R1|R2) - I(S;R1)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .distribution import (
    JointDistribution,
    Source,
    as_source,
    condition,
    entropy,
    marginal_pmf,
    mutual_information,
)
from .lattice import (
    MAX_PREDICTORS,
    LatticeError,
    RedundancyLattice,
    SourceCollection,
    build_lattice,
)
from .pid import PIDecomposition, decompose

MIN_VARIABLES = 3
MAX_VARIABLES = MAX_PREDICTORS + 1


def _mi(d: JointDistribution, xs: tuple[int, ...], ys: tuple[int, ...]) -> float:
    return entropy(d, xs) + entropy(d, ys) - entropy(d, xs + ys)


def conditional_mutual_information(d: JointDistribution, source, given) -> float:
    """``I(S; A | C)`` in bits for disjoint predictor sets ``A`` and ``C``."""
    a = as_source(source)
    c = as_source(given)
    overlap = set(a.indices) & set(c.indices)
    if overlap:
        raise ValueError(f"source {a} and conditioning set {c} share {sorted(overlap)}")
    top = max(a.indices[-1], c.indices[-1])
    if top > d.num_predictors:
        raise IndexError(f"predictor {top} does not exist")
    s, av, cv = (0,), a.indices, c.indices
    value = entropy(d, s + cv) + entropy(d, av + cv) - entropy(d, s + av + cv) - entropy(d, cv)
    return max(0.0, value)


def _check_size(d: JointDistribution) -> None:
    if not MIN_VARIABLES <= d.num_variables <= MAX_VARIABLES:
        raise ValueError(
            f"interaction information needs {MIN_VARIABLES}..{MAX_VARIABLES} "
            f"variables, got {d.num_variables}"
        )


def _recursive(d: JointDistribution, vars: tuple[int, ...]) -> float:
    if len(vars) == 2:
        return _mi(d, vars[:1], vars[1:])
    head, last = vars[:-1], vars[-1]
    conditioned = 0.0
    for (z,), pz in marginal_pmf(d, (last,)).items():
        conditioned += pz * _recursive(condition(d, {last: z}), head)
    return conditioned - _recursive(d, head)


def interaction_information(d: JointDistribution) -> float:
    """Interaction information of all variables, by conditioning on the last
    variable and recursing (``I(...; X_{n-1} | X_n) - I(...; X_{n-1})``)."""
    _check_size(d)
    return _recursive(d, tuple(range(d.num_variables)))


def interaction_information_flat(d: JointDistribution) -> float:
    """Alternating sum ``sum_T (-1)^(|R|-|T|) I(S; T)`` over nonempty predictor sets."""
    _check_size(d)
    k = d.num_predictors
    total = 0.0
    for size in range(1, k + 1):
        sign = 1.0 if (k - size) % 2 == 0 else -1.0
        for T in itertools.combinations(range(1, k + 1), size):
            total += sign * mutual_information(d, T)
    return total


@dataclass(frozen=True)
class AtomSignature:
    """Integer weight of each PI atom in the interaction information."""

    lattice: RedundancyLattice
    coefficients: dict[SourceCollection, int]

    def __getitem__(self, alpha: SourceCollection | str) -> int:
        return self.coefficients[self.lattice.nodes[self.lattice.idx(alpha)]]

    def nonzero(self) -> dict[str, int]:
        return {a.label: c for a, c in self.coefficients.items() if c}

    def signed_atoms(self, pid: PIDecomposition) -> dict[SourceCollection, float]:
        if pid.lattice.num_predictors != self.lattice.num_predictors:
            raise LatticeError("signature and decomposition use different lattices")
        return {a: c * pid.atom(a) for a, c in self.coefficients.items()}

    def apply(self, pid: PIDecomposition) -> float:
        return sum(self.signed_atoms(pid).values())


def atom_signature(num_predictors: int) -> AtomSignature:
    """Each atom collects the sign of every ``I(S; T)`` term whose
    self-redundancy node ``{T}`` lies above it."""
    if not 2 <= num_predictors <= MAX_PREDICTORS:
        raise ValueError(f"signature needs 2..{MAX_PREDICTORS} predictors, got {num_predictors}")
    lattice = build_lattice(num_predictors)
    coeff = [0] * len(lattice)
    for size in range(1, num_predictors + 1):
        sign = 1 if (num_predictors - size) % 2 == 0 else -1
        for T in itertools.combinations(range(1, num_predictors + 1), size):
            j = lattice.idx(SourceCollection([Source(T)]))
            for i in lattice.down_set_idx(j):
                coeff[i] += sign
    return AtomSignature(lattice, dict(zip(lattice.nodes, coeff)))


@dataclass
class InteractionReport:
    interaction_bits: float
    signature: AtomSignature
    decomposition: PIDecomposition
    synergy_bits: float
    redundancy_bits: float

    @property
    def signed_atoms(self) -> dict[SourceCollection, float]:
        return self.signature.signed_atoms(self.decomposition)

    @property
    def balance_bits(self) -> float | None:
        """Synergy minus redundancy; only meaningful with two predictors."""
        if self.decomposition.lattice.num_predictors != 2:
            return None
        return self.synergy_bits - self.redundancy_bits

    def to_json_dict(self, decimals: int = 6, scale: float = 1.0) -> dict:
        def fmt(x: float) -> float:
            return round(x * scale, decimals) + 0.0

        out = {
            "target": self.decomposition.target,
            "interaction_bits": fmt(self.interaction_bits),
            "signature": self.signature.nonzero(),
            "signed_atoms": {
                a.label: fmt(v) for a, v in self.signed_atoms.items() if self.signature.coefficients[a]
            },
            "synergy_bits": fmt(self.synergy_bits),
            "redundancy_bits": fmt(self.redundancy_bits),
        }
        if self.balance_bits is not None:
            out["balance_bits"] = fmt(self.balance_bits)
        return out


def interaction_decomposition_report(d: JointDistribution) -> InteractionReport:
    """Interaction information next to the PI atoms it mixes together.

    ``synergy_bits`` is the atom at the top node (full joint source) and
    ``redundancy_bits`` the atom at the bottom (all single predictors).
    """
    _check_size(d)
    pid = decompose(d)
    sig = atom_signature(d.num_predictors)
    return InteractionReport(
        interaction_bits=interaction_information(d),
        signature=sig,
        decomposition=pid,
        synergy_bits=pid.atom(pid.lattice.top),
        redundancy_bits=pid.atom(pid.lattice.bottom),
    )
