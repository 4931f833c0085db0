"""Nonnegative partial information decomposition of discrete distributions.

The redundancy of a collection of sources is the expected minimum specific
information any of them carries about each target outcome; its Möbius
inverse over the lattice of source antichains gives nonnegative atoms that
add up to the mutual information.
"""
from ._backend import BACKEND
from .distribution import (
    JointDistribution,
    MalformedInputError,
    PMFInvariantError,
    Source,
    ZeroProbabilityError,
    conditional_prob,
    entropy,
    from_outcomes,
    load,
    marginal,
    mutual_information,
    response_specific_information,
    specific_information,
    stimulus_specific_information,
)
from .interaction import (
    AtomSignature,
    atom_signature,
    conditional_mutual_information,
    interaction_decomposition_report,
    interaction_information,
)
from .lattice import (
    RedundancyLattice,
    SourceCollection,
    build_lattice,
    canonical_label,
    enumerate_nodes,
    join,
    meet,
    parse,
    precedes,
)
from .pid import (
    ConsistencyError,
    PIDecomposition,
    asymmetry_report,
    decompose,
    decompose_pruned,
    i_min,
    pi_closed_form,
    pi_inclusion_exclusion,
    pi_recursive,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AtomSignature",
    "ConsistencyError",
    "JointDistribution",
    "MalformedInputError",
    "PIDecomposition",
    "PMFInvariantError",
    "RedundancyLattice",
    "Source",
    "SourceCollection",
    "ZeroProbabilityError",
    "asymmetry_report",
    "atom_signature",
    "build_lattice",
    "canonical_label",
    "conditional_mutual_information",
    "conditional_prob",
    "decompose",
    "decompose_pruned",
    "entropy",
    "enumerate_nodes",
    "from_outcomes",
    "i_min",
    "interaction_decomposition_report",
    "interaction_information",
    "join",
    "load",
    "marginal",
    "meet",
    "mutual_information",
    "parse",
    "pi_closed_form",
    "pi_inclusion_exclusion",
    "pi_recursive",
    "precedes",
    "response_specific_information",
    "specific_information",
    "stimulus_specific_information",
]
