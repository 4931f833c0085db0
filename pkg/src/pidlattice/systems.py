"""Small reference systems with known decompositions."""
from __future__ import annotations

import itertools
from typing import Callable

from .distribution import JointDistribution, from_outcomes, search_equiprobable_supports


def three_outcome() -> JointDistribution:
    """Three equiprobable outcomes (s, r1, r2): R1 flags S=2, R2 flags S=1,
    and only the pair pins down S=0."""
    return from_outcomes([(0, 0, 0), (1, 0, 1), (2, 1, 0)])


def xor() -> JointDistribution:
    """S = R1 xor R2 with uniform inputs."""
    return from_outcomes([(r1 ^ r2, r1, r2) for r1, r2 in itertools.product((0, 1), repeat=2)])


def copies(num_predictors: int = 2) -> JointDistribution:
    """Uniform binary S with every predictor an exact copy."""
    return from_outcomes([(s,) * (num_predictors + 1) for s in (0, 1)])


def parity(num_predictors: int = 3) -> JointDistribution:
    """S is the parity of uniform independent bits R1..Rk."""
    rows = [
        (sum(bits) % 2,) + bits for bits in itertools.product((0, 1), repeat=num_predictors)
    ]
    return from_outcomes(rows)


def independent(num_predictors: int = 2) -> JointDistribution:
    """Uniform S independent of uniform predictors."""
    return from_outcomes(list(itertools.product((0, 1), repeat=num_predictors + 1)))


BUNDLED: dict[str, tuple[Callable[[], JointDistribution], str]] = {
    "fig4a": (
        three_outcome,
        "Three equiprobable outcomes (0,0,0), (1,0,1), (2,1,0). Expected atoms: "
        "{1}{2}=log2(3)-1, {1}={2}={12}=1/3 bit.",
    ),
    "xor": (xor, "S = R1 xor R2, uniform inputs. Expected: {12}=1 bit, other atoms 0."),
    "copies2": (
        lambda: copies(2),
        "R1 and R2 are copies of a uniform bit S. Expected: {1}{2}=1 bit, other atoms 0.",
    ),
    "parity3": (
        lambda: parity(3),
        "S = R1 xor R2 xor R3, uniform inputs. Expected: {123}=1 bit, 17 zero atoms; "
        "interaction information +1 bit.",
    ),
    "copy3": (
        lambda: copies(3),
        "R1, R2, R3 are copies of a uniform bit S. Expected: {1}{2}{3}=1 bit, 17 zero "
        "atoms; interaction information +1 bit.",
    ),
}


# Balanced redundancy/synergy system over S in {0,1,2}, R1, R2 in {0,1}.
BALANCED_ALPHABETS = ((0, 1, 2), (0, 1), (0, 1))
BALANCED_TARGETS = {"redundancy": 0.5, "synergy": 0.5, "interaction": 0.0}


def balanced_constraints(d: JointDistribution, tol: float = 1e-9) -> bool:
    """Redundancy 1/2 bit, synergy 1/2 bit, zero interaction information, and
    each predictor alone carries information about the outcomes S=0 and S=2."""
    from .distribution import specific_information
    from .interaction import interaction_information
    from .pid import decompose

    pid = decompose(d, check_fraction=0)
    if abs(pid.atom("{1}{2}") - BALANCED_TARGETS["redundancy"]) > tol:
        return False
    if abs(pid.atom("{12}") - BALANCED_TARGETS["synergy"]) > tol:
        return False
    if abs(interaction_information(d) - BALANCED_TARGETS["interaction"]) > tol:
        return False
    support = set(d.target_support())
    if not {0, 2} <= support:
        return False
    return all(
        specific_information(d, s, (i,)) > tol for s in (0, 2) for i in (1, 2)
    )


def find_balanced_supports(limit: int | None = None) -> list[JointDistribution]:
    """All equiprobable supports on the 3x2x2 grid meeting :func:`balanced_constraints`."""
    out = []
    for d in search_equiprobable_supports(BALANCED_ALPHABETS, balanced_constraints):
        out.append(d)
        if limit is not None and len(out) >= limit:
            break
    return out
