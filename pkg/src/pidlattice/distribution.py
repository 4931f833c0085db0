"""Finite joint distributions and specific-information measures.

Variable 0 of a :class:`JointDistribution` is always the target ``S``;
positions ``1..n-1`` are the predictors ``R_1..R_{n-1}``. All information
quantities are reported in bits.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

SUM_TOL = 1e-9
ZERO_CUTOFF = 1e-12


class DistributionError(ValueError):
    """Base class for problems with a distribution."""


class MalformedInputError(DistributionError):
    """The input could not be parsed into a distribution at all."""


class PMFInvariantError(DistributionError):
    """A parsed pmf violates nonnegativity, normalization or alphabet rules."""


class ZeroProbabilityError(DistributionError):
    """Conditioning on, or asking about, an event of probability zero."""


def _xlogx_sum(probs: Iterable[float]) -> float:
    return -sum(p * math.log2(p) for p in probs if p > 0.0)


@dataclass(frozen=True, order=True)
class Source:
    """A nonempty set of predictor positions considered jointly."""

    indices: tuple[int, ...]

    def __init__(self, indices: Iterable[int]):
        idx = tuple(sorted(set(int(i) for i in indices)))
        if not idx:
            raise ValueError("a source must contain at least one predictor")
        if idx[0] < 1:
            raise ValueError(f"predictor positions start at 1, got {idx[0]}")
        object.__setattr__(self, "indices", idx)

    @property
    def mask(self) -> int:
        return sum(1 << (i - 1) for i in self.indices)

    @classmethod
    def from_mask(cls, mask: int) -> "Source":
        return cls(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __str__(self) -> str:
        return "{" + "".join(str(i) for i in self.indices) + "}"


def as_source(source: Source | int | Iterable[int]) -> Source:
    if isinstance(source, Source):
        return source
    if isinstance(source, int):
        return Source((source,))
    return Source(source)


class JointDistribution:
    """Immutable pmf over outcome tuples ``(s, r_1, ..., r_{n-1})``.

    Parameters
    ----------
    variable_names : sequence of str
        Labels; position 0 is the target.
    alphabets : sequence of sequences
        Declared outcome set of each variable.
    pmf : mapping
        Outcome tuple to probability. Entries below ``ZERO_CUTOFF`` are
        dropped from the support.
    sum_tol : float
        Allowed deviation of the total mass from 1.
    """

    def __init__(
        self,
        variable_names: Sequence[str],
        alphabets: Sequence[Sequence[Any]],
        pmf: Mapping[tuple, float],
        sum_tol: float = SUM_TOL,
    ):
        names = tuple(str(v) for v in variable_names)
        if not names:
            raise PMFInvariantError("a distribution needs at least one variable")
        if len(set(names)) != len(names):
            raise PMFInvariantError(f"duplicate variable names in {names}")
        if len(alphabets) != len(names):
            raise PMFInvariantError(
                f"{len(names)} variables but {len(alphabets)} alphabets"
            )
        alph = tuple(tuple(a) for a in alphabets)
        for name, a in zip(names, alph):
            if not a:
                raise PMFInvariantError(f"empty alphabet for variable {name!r}")
            if len(set(a)) != len(a):
                raise PMFInvariantError(f"repeated symbols in alphabet of {name!r}")
        lookup = [set(a) for a in alph]

        total = 0.0
        support: dict[tuple, float] = {}
        for outcome, p in pmf.items():
            outcome = tuple(outcome)
            if len(outcome) != len(names):
                raise PMFInvariantError(
                    f"outcome {outcome} has arity {len(outcome)}, expected {len(names)}"
                )
            for pos, value in enumerate(outcome):
                if value not in lookup[pos]:
                    raise PMFInvariantError(
                        f"value {value!r} of {names[pos]!r} is not in its alphabet"
                    )
            p = float(p)
            if not math.isfinite(p) or p < 0.0:
                raise PMFInvariantError(f"invalid probability {p} for outcome {outcome}")
            total += p
            if p >= ZERO_CUTOFF:
                support[outcome] = p
        if abs(total - 1.0) > sum_tol:
            raise PMFInvariantError(f"probabilities sum to {total!r}, not 1")

        mass = sum(support.values())
        self._names = names
        self._alphabets = alph
        self._pmf = {o: p / mass for o, p in support.items()}

    # ------------------------------------------------------------------
    @property
    def variable_names(self) -> tuple[str, ...]:
        return self._names

    @property
    def alphabets(self) -> tuple[tuple, ...]:
        return self._alphabets

    @property
    def pmf(self) -> dict[tuple, float]:
        return dict(self._pmf)

    @property
    def num_variables(self) -> int:
        return len(self._names)

    @property
    def num_predictors(self) -> int:
        return len(self._names) - 1

    @property
    def target_name(self) -> str:
        return self._names[0]

    def items(self):
        return self._pmf.items()

    def position(self, var: int | str) -> int:
        if isinstance(var, str):
            try:
                return self._names.index(var)
            except ValueError:
                raise KeyError(f"unknown variable {var!r}") from None
        if not 0 <= var < len(self._names):
            raise IndexError(f"variable position {var} out of range")
        return var

    def target_support(self) -> list:
        """Target outcomes with positive probability, in alphabet order."""
        ps = marginal_pmf(self, (0,))
        return [s for s in self._alphabets[0] if (s,) in ps]

    def reorder(self, order: Sequence[int | str]) -> "JointDistribution":
        """Permute variables; ``order[0]`` becomes the new target."""
        pos = [self.position(v) for v in order]
        if sorted(pos) != list(range(self.num_variables)):
            raise ValueError(f"{order} is not a permutation of the variables")
        return JointDistribution(
            [self._names[i] for i in pos],
            [self._alphabets[i] for i in pos],
            {tuple(o[i] for i in pos): p for o, p in self._pmf.items()},
        )

    def with_target(self, var: int | str) -> "JointDistribution":
        t = self.position(var)
        return self.reorder([t] + [i for i in range(self.num_variables) if i != t])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return (
            self._names == other._names
            and self._alphabets == other._alphabets
            and self._pmf.keys() == other._pmf.keys()
            and all(abs(p - other._pmf[o]) <= SUM_TOL for o, p in self._pmf.items())
        )

    def __repr__(self) -> str:
        return (
            f"JointDistribution(variables={list(self._names)}, "
            f"support_size={len(self._pmf)})"
        )

    # ------------------------------------------------------------------
    def to_json_dict(self, comment: str | None = None) -> dict:
        out: dict[str, Any] = {}
        if comment:
            out["comment"] = comment
        out["variables"] = list(self._names)
        out["states"] = [list(a) for a in self._alphabets]
        out["probs"] = [
            {"outcome": list(o), "p": p} for o, p in sorted(self._pmf.items(), key=_sort_key)
        ]
        return out


def _sort_key(item):
    return tuple(str(v) for v in item[0])


# ----------------------------------------------------------------------
# construction helpers


def from_outcomes(
    outcomes: Iterable[Sequence[Any]],
    variable_names: Sequence[str] | None = None,
    weights: Iterable[float] | None = None,
) -> JointDistribution:
    """Build a distribution from outcome tuples, equiprobable unless weighted."""
    outcomes = [tuple(o) for o in outcomes]
    if not outcomes:
        raise PMFInvariantError("no outcomes given")
    n = len(outcomes[0])
    if variable_names is None:
        variable_names = ["S"] + [f"R{i}" for i in range(1, n)]
    w = [1.0] * len(outcomes) if weights is None else [float(x) for x in weights]
    total = sum(w)
    pmf: dict[tuple, float] = defaultdict(float)
    for o, x in zip(outcomes, w):
        pmf[o] += x / total
    alphabets = [sorted({o[i] for o in outcomes}, key=_symbol_key) for i in range(n)]
    return JointDistribution(variable_names, alphabets, pmf)


def _symbol_key(v):
    return (0, v, "") if isinstance(v, (int, float)) else (1, 0, str(v))


def load(path: str | Path, sum_tol: float = SUM_TOL) -> JointDistribution:
    """Read a distribution from a ``.json`` or ``.csv`` file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".csv":
        return loads_csv(text, sum_tol)
    return loads_json(text, sum_tol)


def loads_json(text: str, sum_tol: float = SUM_TOL) -> JointDistribution:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from exc
    return from_json_dict(doc, sum_tol)


def from_json_dict(doc: Any, sum_tol: float = SUM_TOL) -> JointDistribution:
    if not isinstance(doc, dict):
        raise MalformedInputError("distribution JSON must be an object")
    for key in ("variables", "states", "probs"):
        if key not in doc:
            raise MalformedInputError(f"missing field {key!r}")
    variables, states, probs = doc["variables"], doc["states"], doc["probs"]
    if not isinstance(variables, list) or not isinstance(states, list):
        raise MalformedInputError("'variables' and 'states' must be lists")
    if not all(isinstance(s, list) for s in states):
        raise MalformedInputError("'states' must be a list of lists")
    if not isinstance(probs, list):
        raise MalformedInputError("'probs' must be a list")
    pmf: dict[tuple, float] = {}
    for entry in probs:
        if not isinstance(entry, dict) or "outcome" not in entry or "p" not in entry:
            raise MalformedInputError(f"bad probs entry {entry!r}")
        outcome, p = entry["outcome"], entry["p"]
        if not isinstance(outcome, list):
            raise MalformedInputError(f"outcome must be a list, got {outcome!r}")
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise MalformedInputError(f"probability must be a number, got {p!r}")
        key = tuple(outcome)
        if key in pmf:
            raise PMFInvariantError(f"outcome {outcome} listed twice")
        pmf[key] = p
    return JointDistribution(variables, states, pmf, sum_tol)


def loads_csv(text: str, sum_tol: float = SUM_TOL) -> JointDistribution:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise MalformedInputError("CSV needs a header and at least one row")
    header = [c.strip() for c in rows[0]]
    if header[-1] != "p" or len(header) < 2:
        raise MalformedInputError("last CSV column must be named 'p'")
    names = header[:-1]
    body = []
    for row in rows[1:]:
        if len(row) != len(header):
            raise MalformedInputError(f"row {row} has {len(row)} fields, expected {len(header)}")
        try:
            p = float(row[-1])
        except ValueError as exc:
            raise MalformedInputError(f"bad probability {row[-1]!r}") from exc
        body.append(([c.strip() for c in row[:-1]], p))
    columns = list(zip(*(vals for vals, _ in body)))
    converters = [_column_converter(col) for col in columns]
    pmf: dict[tuple, float] = {}
    for vals, p in body:
        key = tuple(conv(v) for conv, v in zip(converters, vals))
        if key in pmf:
            raise PMFInvariantError(f"outcome {list(key)} listed twice")
        pmf[key] = p
    alphabets = [sorted({k[i] for k in pmf}, key=_symbol_key) for i in range(len(names))]
    return JointDistribution(names, alphabets, pmf, sum_tol)


def _column_converter(column: Sequence[str]) -> Callable[[str], Any]:
    try:
        for v in column:
            int(v)
    except ValueError:
        return str
    return int


# ----------------------------------------------------------------------
# algebra


def _positions(d: JointDistribution, vars: Iterable[int | str]) -> tuple[int, ...]:
    pos = tuple(d.position(v) for v in vars)
    if not pos:
        raise ValueError("at least one variable position is required")
    if len(set(pos)) != len(pos):
        raise ValueError(f"repeated variable positions {pos}")
    return pos


def marginal_pmf(d: JointDistribution, vars: Iterable[int | str]) -> dict[tuple, float]:
    """Marginal as a plain ``{sub-outcome: p}`` dict (ordered as ``vars``)."""
    pos = tuple(d.position(v) for v in vars)
    out: dict[tuple, float] = defaultdict(float)
    for o, p in d.items():
        out[tuple(o[i] for i in pos)] += p
    return dict(out)


def marginal(d: JointDistribution, vars: Iterable[int | str]) -> JointDistribution:
    """Distribution of the variables at ``vars`` (kept in ascending order)."""
    pos = tuple(sorted(_positions(d, vars)))
    return JointDistribution(
        [d.variable_names[i] for i in pos],
        [d.alphabets[i] for i in pos],
        marginal_pmf(d, pos),
    )


def _event_prob(d: JointDistribution, fixed: Mapping[int, Any]) -> float:
    return sum(p for o, p in d.items() if all(o[i] == v for i, v in fixed.items()))


def _normalize_assignment(d: JointDistribution, fixed: Mapping[int | str, Any]) -> dict[int, Any]:
    out = {}
    for var, value in fixed.items():
        pos = d.position(var)
        if value not in d.alphabets[pos]:
            raise ValueError(f"{value!r} is not in the alphabet of {d.variable_names[pos]!r}")
        out[pos] = value
    return out


def conditional_prob(
    d: JointDistribution,
    event_fixed: Mapping[int | str, Any],
    query_fixed: Mapping[int | str, Any],
) -> float:
    """``p(query | event)`` for partial assignments ``{position: value}``."""
    event = _normalize_assignment(d, event_fixed)
    query = _normalize_assignment(d, query_fixed)
    pe = _event_prob(d, event)
    if pe <= 0.0:
        raise ZeroProbabilityError(f"conditioning event {event} has probability zero")
    for pos, v in query.items():
        if pos in event and event[pos] != v:
            return 0.0
    return _event_prob(d, {**event, **query}) / pe


def condition(d: JointDistribution, fixed: Mapping[int | str, Any]) -> JointDistribution:
    """Conditional distribution given ``fixed``; the fixed variables are kept."""
    event = _normalize_assignment(d, fixed)
    pe = _event_prob(d, event)
    if pe <= 0.0:
        raise ZeroProbabilityError(f"conditioning event {event} has probability zero")
    pmf = {
        o: p / pe for o, p in d.items() if all(o[i] == v for i, v in event.items())
    }
    return JointDistribution(d.variable_names, d.alphabets, pmf)


def entropy(d: JointDistribution, vars: Iterable[int | str] | None = None) -> float:
    """Joint Shannon entropy in bits of the variables at ``vars`` (all if None)."""
    if vars is None:
        return _xlogx_sum(p for _, p in d.items())
    pos = _positions(d, vars)
    return _xlogx_sum(marginal_pmf(d, pos).values())


def _source_positions(d: JointDistribution, source) -> tuple[int, ...]:
    src = as_source(source)
    if src.indices[-1] > d.num_predictors:
        raise IndexError(
            f"source {src} refers to predictor {src.indices[-1]} but there are "
            f"only {d.num_predictors}"
        )
    return src.indices


def mutual_information(d: JointDistribution, source) -> float:
    """``I(S; A)`` in bits, via ``H(S) + H(A) - H(S, A)``."""
    pos = _source_positions(d, source)
    return max(0.0, entropy(d, (0,)) + entropy(d, pos) - entropy(d, (0,) + pos))


def _target_prob(d: JointDistribution, s) -> float:
    ps = sum(p for o, p in d.items() if o[0] == s)
    if ps <= 0.0:
        raise ZeroProbabilityError(f"target outcome {s!r} is not in the support")
    return ps


def specific_information(d: JointDistribution, s, source) -> float:
    """``I(S=s; A)``: expected reduction in surprise of ``s`` given ``A``.

    Sums ``p(a|s) * log2(p(s|a) / p(s))`` over source outcomes ``a`` with
    ``p(a|s) > 0``.
    """
    pos = _source_positions(d, source)
    ps = _target_prob(d, s)
    p_a: dict[tuple, float] = defaultdict(float)
    p_sa: dict[tuple, float] = defaultdict(float)
    for o, p in d.items():
        a = tuple(o[i] for i in pos)
        p_a[a] += p
        if o[0] == s:
            p_sa[a] += p
    total = 0.0
    for a, joint in p_sa.items():
        total += (joint / ps) * math.log2(joint / (p_a[a] * ps))
    return max(0.0, total)


def _as_response(pos: tuple[int, ...], r) -> tuple:
    if isinstance(r, tuple):
        resp = r
    elif isinstance(r, list):
        resp = tuple(r)
    else:
        resp = (r,)
    if len(resp) != len(pos):
        raise ValueError(f"response {r!r} does not match a source of size {len(pos)}")
    return resp


def response_specific_information(d: JointDistribution, r, source) -> float:
    """``i_r(r) = H(S) - H(S | A=r)``; may be negative."""
    pos = _source_positions(d, source)
    resp = _as_response(pos, r)
    cond = condition(d, dict(zip(pos, resp)))
    return entropy(d, (0,)) - entropy(cond, (0,))


def stimulus_specific_information(d: JointDistribution, s, source) -> float:
    """``i_s(s) = sum_r p(r|s) i_r(r)``."""
    pos = _source_positions(d, source)
    ps = _target_prob(d, s)
    p_rs: dict[tuple, float] = defaultdict(float)
    for o, p in d.items():
        if o[0] == s:
            p_rs[tuple(o[i] for i in pos)] += p
    return sum(
        (p / ps) * response_specific_information(d, r, pos) for r, p in p_rs.items()
    )


# ----------------------------------------------------------------------
# small-support search


def search_equiprobable_supports(
    alphabets: Sequence[Sequence[Any]],
    predicate: Callable[[JointDistribution], bool],
    sizes: Iterable[int] | None = None,
    variable_names: Sequence[str] | None = None,
) -> Iterator[JointDistribution]:
    """Yield every equiprobable distribution over a subset of the product
    alphabet that satisfies ``predicate``.

    Supports are visited by increasing size, then lexicographically. Every
    declared symbol must occur in the support, so each candidate uses the
    full alphabets.
    """
    cells = list(itertools.product(*alphabets))
    if variable_names is None:
        variable_names = ["S"] + [f"R{i}" for i in range(1, len(alphabets))]
    if sizes is None:
        sizes = range(1, len(cells) + 1)
    for k in sizes:
        for support in itertools.combinations(cells, k):
            if any(
                {o[i] for o in support} != set(a) for i, a in enumerate(alphabets)
            ):
                continue
            d = JointDistribution(variable_names, alphabets, {o: 1.0 / k for o in support})
            if predicate(d):
                yield d
