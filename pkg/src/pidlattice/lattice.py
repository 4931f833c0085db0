"""The redundancy lattice: antichains of nonempty predictor subsets.

A source is encoded as a bitmask over predictors (bit ``i-1`` for
predictor ``i``). A :class:`SourceCollection` is an antichain of such
sources, ordered by ``alpha <= beta`` iff every source of ``beta`` contains
some source of ``alpha``.
"""
from __future__ import annotations

import functools
import re
from typing import Iterable, Iterator, Mapping

import numpy as np

from . import _backend
from .distribution import Source

MAX_PREDICTORS = 5


class LatticeError(ValueError):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _source_key(mask: int) -> tuple:
    bits = tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)
    return (len(bits), bits)


def _to_mask(source) -> int:
    if isinstance(source, Source):
        return source.mask
    if isinstance(source, int):
        raise TypeError("give sources as index collections, e.g. (1, 2), not bare ints")
    return Source(source).mask


def _minimal(masks: Iterable[int]) -> list[int]:
    ms = sorted(set(masks), key=_popcount)
    out: list[int] = []
    for m in ms:
        if not any(a & ~m == 0 for a in out):
            out.append(m)
    return out


class SourceCollection:
    """An antichain of sources, stored in canonical (size, lexicographic) order.

    >>> SourceCollection([(2, 3), (1,)]).label
    '{1}{23}'
    """

    __slots__ = ("_masks", "_hash")

    def __init__(self, sources: Iterable):
        masks = sorted({_to_mask(s) for s in sources}, key=_source_key)
        if not masks:
            raise LatticeError("a source collection must be nonempty")
        for a in masks:
            for b in masks:
                if a != b and a & ~b == 0:
                    raise LatticeError(
                        f"{Source.from_mask(a)} is contained in {Source.from_mask(b)}; "
                        "not an antichain"
                    )
        self._masks = tuple(masks)
        self._hash = hash(self._masks)

    @classmethod
    def _from_masks(cls, masks: Iterable[int]) -> "SourceCollection":
        obj = object.__new__(cls)
        obj._masks = tuple(sorted(masks, key=_source_key))
        obj._hash = hash(obj._masks)
        return obj

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    @property
    def sources(self) -> tuple[Source, ...]:
        return tuple(Source.from_mask(m) for m in self._masks)

    @property
    def max_index(self) -> int:
        return max(m.bit_length() for m in self._masks)

    @property
    def label(self) -> str:
        return "".join(str(s) for s in self.sources)

    def __iter__(self) -> Iterator[Source]:
        return iter(self.sources)

    def __len__(self) -> int:
        return len(self._masks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SourceCollection):
            return NotImplemented
        return self._masks == other._masks

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "SourceCollection") -> bool:
        return [_source_key(m) for m in self._masks] < [_source_key(m) for m in other._masks]

    def __repr__(self) -> str:
        return f"SourceCollection({self.label!r})"

    def __str__(self) -> str:
        return self.label


_LABEL_RE = re.compile(r"\{(\d+)\}")


def canonical_label(alpha: SourceCollection) -> str:
    return alpha.label


def parse(label: str) -> SourceCollection:
    """Inverse of :func:`canonical_label`; digits inside braces are predictors."""
    text = label.replace(" ", "")
    groups = _LABEL_RE.findall(text)
    if not groups or "".join("{%s}" % g for g in groups) != text:
        raise LatticeError(f"cannot parse source collection label {label!r}")
    return SourceCollection([int(c) for c in g] for g in groups)


def node(*sources) -> SourceCollection:
    """Shorthand: ``node((1,), (2, 3))`` or ``node("{1}{23}")``."""
    if len(sources) == 1 and isinstance(sources[0], str):
        return parse(sources[0])
    return SourceCollection(sources)


def _check_range(num_predictors: int | None, *alphas: SourceCollection) -> None:
    if num_predictors is None:
        return
    for a in alphas:
        if a.max_index > num_predictors:
            raise LatticeError(
                f"{a} uses predictor {a.max_index} but the lattice has {num_predictors}"
            )


def precedes(
    alpha: SourceCollection, beta: SourceCollection, num_predictors: int | None = None
) -> bool:
    """``alpha <= beta``: every source in beta contains a source in alpha."""
    _check_range(num_predictors, alpha, beta)
    a_sets = [set(s) for s in alpha]
    return all(any(a <= set(b) for a in a_sets) for b in beta)


def _up_bits(masks: Iterable[int], num_predictors: int) -> int:
    bits = 0
    for c in range(1, 1 << num_predictors):
        if any(m & ~c == 0 for m in masks):
            bits |= 1 << (c - 1)
    return bits


def _node_bits(masks: Iterable[int]) -> int:
    bits = 0
    for m in masks:
        bits |= 1 << (m - 1)
    return bits


def meet(
    alpha: SourceCollection, beta: SourceCollection, num_predictors: int | None = None
) -> SourceCollection:
    """Minimal sources of ``alpha | beta``."""
    _check_range(num_predictors, alpha, beta)
    return SourceCollection._from_masks(_minimal(alpha.masks + beta.masks))


def join(
    alpha: SourceCollection, beta: SourceCollection, num_predictors: int | None = None
) -> SourceCollection:
    """Minimal elements of the intersection of the up-sets of alpha and beta."""
    _check_range(num_predictors, alpha, beta)
    k = num_predictors or max(alpha.max_index, beta.max_index)
    common = _up_bits(alpha.masks, k) & _up_bits(beta.masks, k)
    members = [c for c in range(1, 1 << k) if common >> (c - 1) & 1]
    return SourceCollection._from_masks(_minimal(members))


def meet_all(alphas: Iterable[SourceCollection]) -> SourceCollection:
    masks: list[int] = []
    for a in alphas:
        masks.extend(a.masks)
    if not masks:
        raise LatticeError("meet of an empty family is undefined")
    return SourceCollection._from_masks(_minimal(masks))


def _check_count(num_predictors: int) -> None:
    if not isinstance(num_predictors, (int, np.integer)) or isinstance(num_predictors, bool):
        raise LatticeError(f"predictor count must be an integer, got {num_predictors!r}")
    if not 1 <= num_predictors <= MAX_PREDICTORS:
        raise LatticeError(
            f"predictor count must be between 1 and {MAX_PREDICTORS}, got {num_predictors}"
        )


def _enumerate_masks(num_predictors: int) -> list[tuple[int, ...]]:
    subsets = sorted(range(1, 1 << num_predictors), key=_source_key)
    out: list[tuple[int, ...]] = []

    # Subsets arrive by nondecreasing size, so a later subset can only be a
    # superset of an earlier one.
    def extend(start: int, chosen: list[int]) -> None:
        for i in range(start, len(subsets)):
            m = subsets[i]
            if any(a & ~m == 0 for a in chosen):
                continue
            chosen.append(m)
            out.append(tuple(chosen))
            extend(i + 1, chosen)
            chosen.pop()

    extend(0, [])
    return out


def enumerate_nodes(num_predictors: int) -> list[SourceCollection]:
    """All antichains of nonempty subsets of ``{1..num_predictors}``."""
    _check_count(num_predictors)
    return [SourceCollection._from_masks(m) for m in _enumerate_masks(num_predictors)]


class RedundancyLattice:
    """Antichains ordered by :func:`precedes`, with cover edges.

    Nodes are stored in layer order (longest chain from the bottom), ties
    broken by label, which is a linear extension of the order.
    """

    def __init__(self, num_predictors: int):
        _check_count(num_predictors)
        self.num_predictors = num_predictors
        raw = _enumerate_masks(num_predictors)
        node_bits = np.array([_node_bits(m) for m in raw], dtype=np.uint32)
        up_bits = np.array([_up_bits(m, num_predictors) for m in raw], dtype=np.uint32)

        # Going up the order strictly shrinks the up-set.
        up_size = np.array([_popcount(int(u)) for u in up_bits])
        lin = np.argsort(-up_size, kind="stable")
        le = _backend.order_matrix(node_bits[lin], up_bits[lin])
        child, parent = _backend.cover_pairs(le)

        n = len(raw)
        layer = np.zeros(n, dtype=np.int64)
        by_parent: list[list[int]] = [[] for _ in range(n)]
        for c, p in zip(child.tolist(), parent.tolist()):
            by_parent[p].append(c)
        for p in range(n):
            if by_parent[p]:
                layer[p] = 1 + max(layer[c] for c in by_parent[p])

        nodes_lin = [SourceCollection._from_masks(raw[i]) for i in lin]
        labels = [a.label for a in nodes_lin]
        final = sorted(range(n), key=lambda i: (layer[i], labels[i]))
        where = np.empty(n, dtype=np.int64)
        where[final] = np.arange(n)

        self.nodes: tuple[SourceCollection, ...] = tuple(nodes_lin[i] for i in final)
        self.index: dict[SourceCollection, int] = {a: i for i, a in enumerate(self.nodes)}
        self.layers = layer[final]
        self.le = le[np.ix_(final, final)]
        self.le.setflags(write=False)
        self._le_t = np.ascontiguousarray(self.le.T)
        self.node_bits = node_bits[lin][final]
        self.up_bits = up_bits[lin][final]

        children: list[list[int]] = [[] for _ in range(n)]
        parents: list[list[int]] = [[] for _ in range(n)]
        for c, p in zip(where[child].tolist(), where[parent].tolist()):
            children[p].append(c)
            parents[c].append(p)
        self._children = tuple(tuple(sorted(c)) for c in children)
        self._parents = tuple(tuple(sorted(p)) for p in parents)

        self.bottom = self.nodes[0]
        self.top = self.nodes[-1]
        if self.le[0].sum() != n or self.le[:, -1].sum() != n:
            raise LatticeError("lattice has no unique top/bottom; this is a bug")

    # ------------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[SourceCollection]:
        return iter(self.nodes)

    def __contains__(self, alpha) -> bool:
        return alpha in self.index

    def __repr__(self) -> str:
        return f"RedundancyLattice(num_predictors={self.num_predictors}, nodes={len(self)})"

    def idx(self, alpha: SourceCollection | str) -> int:
        if isinstance(alpha, str):
            alpha = parse(alpha)
        try:
            return self.index[alpha]
        except KeyError:
            raise LatticeError(f"{alpha} is not a node of {self!r}") from None

    def layer(self, alpha) -> int:
        return int(self.layers[self.idx(alpha)])

    def precedes(self, alpha, beta) -> bool:
        return bool(self.le[self.idx(alpha), self.idx(beta)])

    def covered_by(self, alpha) -> frozenset[SourceCollection]:
        """Nodes immediately below ``alpha``."""
        return frozenset(self.nodes[i] for i in self._children[self.idx(alpha)])

    def covers_of(self, alpha) -> frozenset[SourceCollection]:
        """Nodes immediately above ``alpha``."""
        return frozenset(self.nodes[i] for i in self._parents[self.idx(alpha)])

    def children_idx(self, i: int) -> tuple[int, ...]:
        return self._children[i]

    def parents_idx(self, i: int) -> tuple[int, ...]:
        return self._parents[i]

    def down_set_idx(self, i: int) -> np.ndarray:
        return np.flatnonzero(self._le_t[i])

    def strict_down_set_idx(self, i: int) -> np.ndarray:
        d = self.down_set_idx(i)
        return d[d != i]

    def down_set(self, alpha) -> frozenset[SourceCollection]:
        return frozenset(self.nodes[i] for i in self.down_set_idx(self.idx(alpha)))

    def up_set(self, alpha) -> frozenset[SourceCollection]:
        return frozenset(self.nodes[i] for i in np.flatnonzero(self.le[self.idx(alpha)]))

    def meet(self, alpha, beta) -> SourceCollection:
        self.idx(alpha), self.idx(beta)
        return meet(alpha, beta)

    def join(self, alpha, beta) -> SourceCollection:
        self.idx(alpha), self.idx(beta)
        return join(alpha, beta, self.num_predictors)

    def cover_edges(self) -> list[tuple[SourceCollection, SourceCollection]]:
        """``(child, parent)`` pairs in node order."""
        return [
            (self.nodes[c], self.nodes[p])
            for p in range(len(self.nodes))
            for c in self._children[p]
        ]

    def singleton(self, source) -> SourceCollection:
        """The node ``{A}`` holding one source."""
        return SourceCollection([source])

    # ------------------------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "nodes": [a.label for a in self.nodes],
            "covers": [[c.label, p.label] for c, p in self.cover_edges()],
        }

    def to_dot(self, annotations: Mapping[SourceCollection | str, str] | None = None) -> str:
        return to_dot(self, annotations)


@functools.lru_cache(maxsize=None)
def build_lattice(num_predictors: int) -> RedundancyLattice:
    """Cached :class:`RedundancyLattice` for ``num_predictors`` predictors."""
    return RedundancyLattice(num_predictors)


def covered_by(lattice: RedundancyLattice, alpha) -> frozenset[SourceCollection]:
    return lattice.covered_by(alpha)


def down_set(lattice: RedundancyLattice, alpha) -> frozenset[SourceCollection]:
    return lattice.down_set(alpha)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(
    lattice: RedundancyLattice,
    annotations: Mapping[SourceCollection | str, str] | None = None,
) -> str:
    """Hasse diagram in Graphviz DOT, one edge per cover (parent -> child)."""
    notes: dict[int, str] = {}
    for key, text in (annotations or {}).items():
        notes[lattice.idx(key)] = text
    lines = [
        "digraph redundancy_lattice {",
        "\trankdir=BT;",
        "\tnode [shape=box, fontname=\"Helvetica\"];",
    ]
    for layer in sorted(set(lattice.layers.tolist())):
        members = [i for i in range(len(lattice)) if lattice.layers[i] == layer]
        lines.append("\t{ rank=same; " + " ".join(f"n{i};" for i in members) + " }")
    for i, alpha in enumerate(lattice.nodes):
        label = alpha.label
        if i in notes:
            label += "\\n" + _dot_escape(notes[i])
        lines.append(f'\tn{i} [label="{label}"];')
    for p in range(len(lattice)):
        for c in lattice.children_idx(p):
            lines.append(f"\tn{c} -> n{p};")
    lines.append("}")
    return "\n".join(lines) + "\n"
