"""Finite-depth trees of bounded branching, their colourings and densities.

The ambient tree for a branching sequence f has, at level n, all integer
sequences (t(0), ..., t(n-1)) with t(i) < f(i).  A finite tree stores its
levels explicitly as sorted node tuples and is validated to be downward
closed at construction.  Levels are indexed so that level n holds the
length-n nodes; a tree built under a spec of length D can reach level D.

The canonical colouring assigns 0 to a node when its last coordinate
falls in the lower half-block of the branching at that step; the empty
root gets colour 0 by convention and the root level always counts as
homogeneous (a single extra level never affects the finitely-many-levels
statements this module checks).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Iterable, Iterator, Mapping, Sequence

Node = tuple[int, ...]

HOMOG_0 = "homog_0"
HOMOG_1 = "homog_1"
NONHOMOG = "nonhomog"


@dataclass(frozen=True)
class BranchingSpec:
    """Branching factors f(0), ..., f(depth-1), each at least 2."""

    f: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "f", tuple(int(v) for v in self.f))
        for i, v in enumerate(self.f):
            if v < 2:
                raise ValueError(f"branching factor f({i}) = {v} must be >= 2")

    @classmethod
    def constant(cls, factor: int, depth: int) -> "BranchingSpec":
        return cls((factor,) * depth)

    @property
    def depth(self) -> int:
        return len(self.f)

    def width_product(self, n: int) -> int:
        """Number of length-n sequences below the spec: prod of f(0..n-1)."""
        if not 0 <= n <= self.depth:
            raise ValueError(f"level {n} outside [0, {self.depth}]")
        return prod(self.f[:n])

    def validate_node(self, node: Sequence[int]) -> Node:
        node = tuple(int(v) for v in node)
        if len(node) > self.depth:
            raise ValueError(f"node of length {len(node)} exceeds spec depth {self.depth}")
        for i, v in enumerate(node):
            if not 0 <= v < self.f[i]:
                raise ValueError(f"coordinate {v} at position {i} outside [0, {self.f[i]})")
        return node


def full_tree_level_size(spec: BranchingSpec, n: int) -> int:
    return spec.width_product(n)


@dataclass(frozen=True)
class FiniteTree:
    """A downward-closed tree stored as per-level sorted node tuples."""

    spec: BranchingSpec
    levels: tuple[tuple[Node, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "levels", tuple(tuple(tuple(n) for n in level) for level in self.levels)
        )
        if len(self.levels) > self.spec.depth + 1:
            raise ValueError("tree has more levels than the spec admits")
        prev: set[Node] = set()
        for depth, level in enumerate(self.levels):
            seen: set[Node] = set()
            last: Node | None = None
            for node in level:
                node = self.spec.validate_node(node)
                if len(node) != depth:
                    raise ValueError(f"node {node} stored at level {depth}")
                if last is not None and node <= last:
                    raise ValueError("level nodes must be strictly ascending")
                if depth > 0 and node[:-1] not in prev:
                    raise ValueError(f"node {node} has no parent: tree not downward closed")
                seen.add(node)
                last = node
            if depth > 0 and level and not prev:
                raise ValueError("nonempty level above an empty one")
            prev = seen
        if self.levels and any(self.levels) and self.levels[0] != ((),):
            raise ValueError("a nonempty tree must have the empty sequence as its root")

    @classmethod
    def from_nodes(cls, spec: BranchingSpec, nodes: Iterable[Sequence[int]]) -> "FiniteTree":
        by_depth: dict[int, set[Node]] = {}
        for raw in nodes:
            node = spec.validate_node(raw)
            by_depth.setdefault(len(node), set()).add(node)
        if not by_depth:
            return cls(spec, ())
        top = max(by_depth)
        levels = tuple(tuple(sorted(by_depth.get(d, ()))) for d in range(top + 1))
        return cls(spec, levels)

    @property
    def depth(self) -> int:
        """Index of the highest stored level (-1 for the empty tree)."""
        return len(self.levels) - 1

    def level(self, n: int) -> tuple[Node, ...]:
        """Nodes of length n; empty when the tree does not reach that deep."""
        if not 0 <= n <= self.spec.depth:
            raise ValueError(f"level {n} outside [0, {self.spec.depth}]")
        return self.levels[n] if n < len(self.levels) else ()

    def level_size(self, n: int) -> int:
        return len(self.level(n))

    def nodes(self) -> Iterator[Node]:
        for level in self.levels:
            yield from level

    def __len__(self) -> int:
        return sum(len(level) for level in self.levels)

    def is_pruned(self) -> bool:
        """Every node below the tree's own top level has a successor."""
        for n in range(self.depth):
            parents = {node[:-1] for node in self.levels[n + 1]}
            if any(node not in parents for node in self.levels[n]):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "f": list(self.spec.f),
            "levels": [[list(node) for node in level] for level in self.levels],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteTree":
        spec = BranchingSpec(tuple(obj["f"]))
        levels = tuple(tuple(tuple(n) for n in level) for level in obj["levels"])
        return cls(spec, levels)


def full_tree(spec: BranchingSpec, depth: int | None = None) -> FiniteTree:
    depth = spec.depth if depth is None else depth
    levels: list[tuple[Node, ...]] = [((),)]
    for i in range(depth):
        levels.append(tuple(sorted(node + (c,) for node in levels[i] for c in range(spec.f[i]))))
    return FiniteTree(spec, tuple(levels))


def single_branch(spec: BranchingSpec, coords: Sequence[int] | None = None) -> FiniteTree:
    branch = tuple(coords) if coords is not None else (0,) * spec.depth
    branch = spec.validate_node(branch)
    return FiniteTree(spec, tuple((branch[:n],) for n in range(len(branch) + 1)))


def restrict(tree: FiniteTree, n: int) -> FiniteTree:
    """The subtree of the first n levels (levels 0..n-1)."""
    if not 0 <= n <= tree.depth + 1:
        raise ValueError(f"cannot take first {n} levels of a tree with {tree.depth + 1}")
    return FiniteTree(tree.spec, tree.levels[:n])


def is_subtree(sub: FiniteTree, tree: FiniteTree) -> bool:
    if sub.spec != tree.spec or sub.depth > tree.depth:
        return False
    return all(set(sub.levels[n]) <= set(tree.levels[n]) for n in range(len(sub.levels)))


def density(tree: FiniteTree, n: int) -> Fraction:
    """Level size relative to the full tree: |T(n)| / prod f(0..n-1), exact."""
    return Fraction(tree.level_size(n), tree.spec.width_product(n))


def measure_estimate(tree: FiniteTree) -> Fraction:
    """Density at the tree's own top level: the finite stand-in for the
    branch-set measure, an upper bound of the limit.

    Requires a pruned tree; an unpruned one carries dead nodes whose
    density says nothing about branches.
    """
    if not tree.is_pruned():
        raise ValueError("measure_estimate needs a pruned tree")
    if tree.depth < 0:
        return Fraction(0)
    return density(tree, tree.depth)


@dataclass(frozen=True, eq=False)
class NodeColouring:
    """A {0,1}-colouring of nodes: the half-block rule plus explicit exceptions.

    The base rule colours a node 0 exactly when its last coordinate is
    below floor(f(|s|-1)/2); the root is 0 by convention.  Exceptions
    override individual nodes, which lets arbitrary finite colourings
    ride on the same structure they serialize with.
    """

    spec: BranchingSpec
    exceptions: tuple[tuple[Node, int], ...] = ()
    _lookup: Mapping[Node, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        canon = []
        for node, colour in self.exceptions:
            node = self.spec.validate_node(node)
            if colour not in (0, 1):
                raise ValueError(f"colour {colour} not in {{0, 1}}")
            canon.append((node, colour))
        canon.sort()
        object.__setattr__(self, "exceptions", tuple(canon))
        object.__setattr__(self, "_lookup", dict(canon))

    def colour(self, node: Sequence[int]) -> int:
        node = self.spec.validate_node(node)
        if node in self._lookup:
            return self._lookup[node]
        if not node:
            return 0
        return 0 if node[-1] < self.spec.f[len(node) - 1] // 2 else 1

    def to_json(self) -> dict:
        return {
            "f": list(self.spec.f),
            "exceptions": [[list(node), colour] for node, colour in self.exceptions],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "NodeColouring":
        return cls(
            BranchingSpec(tuple(obj["f"])),
            tuple((tuple(node), colour) for node, colour in obj["exceptions"]),
        )


def canonical_colouring(spec: BranchingSpec) -> NodeColouring:
    return NodeColouring(spec)


def level_homogeneity(tree: FiniteTree, n: int, colouring: NodeColouring) -> str:
    """Classify level n as homog_0 / homog_1 / nonhomog.

    Empty levels are (vacuously) homogeneous and report homog_0; the
    root level is a singleton and is therefore always homogeneous.
    """
    colours = {colouring.colour(node) for node in tree.level(n)}
    if colours == {0, 1}:
        return NONHOMOG
    return HOMOG_1 if colours == {1} else HOMOG_0


@dataclass(frozen=True)
class Lemma5Report:
    """Homogeneous levels of a pruned tree and the density bound they force.

    `bound_levels` excludes the root level, which is homogeneous by
    convention but constrains no branching step.  For each homogeneous
    level j >= 1 the branching from level j-1 into j is confined to one
    half-block, of size ceil(f(j-1)/2); multiplying the per-step factors
    bounds the density one level past the last homogeneous one (clamped
    to the tree's top), and each factor is at most 2/3.
    """

    homogeneous_levels: tuple[int, ...]
    bound_levels: tuple[int, ...]
    vacuous: bool
    eval_level: int | None = None
    density_at_eval: Fraction | None = None
    halving_bound: Fraction | None = None
    two_thirds_bound: Fraction | None = None
    holds: bool | None = None

    def to_json(self) -> dict:
        return {
            "homogeneous_levels": list(self.homogeneous_levels),
            "bound_levels": list(self.bound_levels),
            "vacuous": self.vacuous,
            "eval_level": self.eval_level,
            "density_at_eval": None if self.density_at_eval is None else str(self.density_at_eval),
            "halving_bound": None if self.halving_bound is None else str(self.halving_bound),
            "two_thirds_bound": None if self.two_thirds_bound is None else str(self.two_thirds_bound),
            "holds": self.holds,
        }


def lemma5_check(tree: FiniteTree, colouring: NodeColouring) -> Lemma5Report:
    """Verify the homogeneous-level density bound on a pruned finite tree."""
    if not tree.is_pruned():
        raise ValueError("lemma5_check needs a pruned tree")
    homog = tuple(
        n for n in range(tree.depth + 1)
        if level_homogeneity(tree, n, colouring) != NONHOMOG
    )
    bound_levels = tuple(n for n in homog if n >= 1)
    if not bound_levels:
        return Lemma5Report(homog, bound_levels, vacuous=True)
    eval_level = min(max(bound_levels) + 1, tree.depth)
    halving = prod(
        (Fraction(-(-tree.spec.f[j - 1] // 2), tree.spec.f[j - 1]) for j in bound_levels),
        start=Fraction(1),
    )
    two_thirds = Fraction(2, 3) ** len(bound_levels)
    dens = density(tree, eval_level)
    return Lemma5Report(
        homog,
        bound_levels,
        vacuous=False,
        eval_level=eval_level,
        density_at_eval=dens,
        halving_bound=halving,
        two_thirds_bound=two_thirds,
        holds=dens <= halving <= two_thirds,
    )


def splitting_trace(colouring: NodeColouring, branch: Sequence[int], upto: int) -> frozenset[int]:
    """The positions n < upto at which the branch's length-n prefix is coloured 1.

    Needs branch coordinates for every prefix consulted, i.e. at least
    upto - 1 of them.
    """
    branch = tuple(branch)
    if upto < 0:
        raise ValueError("upto must be nonnegative")
    if len(branch) < upto - 1:
        raise ValueError(f"branch of length {len(branch)} too short for {upto} prefixes")
    colouring.spec.validate_node(branch)
    return frozenset(n for n in range(upto) if colouring.colour(branch[:n]) == 1)


def split_witness(tree: FiniteTree, colouring: NodeColouring,
                  level_set: Iterable[int]) -> tuple[int, Node, Node] | None:
    """First level in the given set where the colouring splits, with witnesses.

    Returns (n, node coloured 0, node coloured 1), or None when every
    listed level is homogeneous.
    """
    for n in sorted(set(level_set)):
        if not 0 <= n <= tree.spec.depth:
            raise ValueError(f"level {n} outside [0, {tree.spec.depth}]")
        zero = one = None
        for node in tree.level(n):
            if colouring.colour(node) == 0:
                zero = zero if zero is not None else node
            else:
                one = one if one is not None else node
            if zero is not None and one is not None:
                return n, zero, one
    return None


def random_pruned_tree(spec: BranchingSpec, depth: int, retain: float, seed: int) -> FiniteTree:
    """Seeded random pruned tree of exactly the requested depth.

    Children survive independently with probability `retain`; nodes that
    fail to reach the bottom level are then pruned away.  Attempts are
    redrawn (from the same deterministic stream) until the tree survives
    to full depth, so the result is reproducible given the seed.
    """
    if not 0 < retain <= 1:
        raise ValueError("retention probability must lie in (0, 1]")
    if depth > spec.depth:
        raise ValueError(f"depth {depth} exceeds spec depth {spec.depth}")
    rng = random.Random(seed)
    while True:
        levels: list[list[Node]] = [[()]]
        for i in range(depth):
            nxt = [
                node + (c,)
                for node in levels[i]
                for c in range(spec.f[i])
                if rng.random() < retain
            ]
            levels.append(sorted(nxt))
            if not nxt:
                break
        if len(levels) < depth + 1 or not levels[depth]:
            continue
        for i in range(depth - 1, -1, -1):
            parents = {node[:-1] for node in levels[i + 1]}
            levels[i] = [node for node in levels[i] if node in parents]
        if levels[0]:
            return FiniteTree(spec, tuple(tuple(level) for level in levels))
