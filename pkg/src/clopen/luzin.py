"""Clopen refining schemes on zero-dimensional spaces and the induced embedding.

A zero-dimensional presentation supplies a dense family with an exact
rational distance oracle bounded by 1, plus exactly decidable membership of
instance points in rational balls around dense points.  The scheme assigns
to every finite sequence of dense indices a cell:

    root cell       = the whole space
    ball stage      B_(s,k) = B_s intersect ball(r_k, 1/(2^(len(s)+2) + 1)),
                     provided r_k lies in B_s, else empty
    disjoint stage  A_(s,k) = (B_(s,k) minus the earlier B_(s,i), i < k)
                     intersect A_s

Cells on one level are pairwise disjoint, refine their parents, and have
diameter below 2^-level, so reading off the unique cell indices of a point
embeds the space into Baire space.  Cell emptiness is decided by scanning
dense witnesses up to an instance-supplied bound; that bound is the honest
computable stand-in for an existential the source construction leaves at
limit level two.

Ball memberships at fixed radii are clopen only for ultrametric distances,
which is why the catalog keeps to two-symbol sequence spaces, closed subsets
of Baire space, and finite discrete spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .baire import BairePoint, eventually_periodic, exact_distance
from .coding import decode, encode, rational_of_index
from .trees import DensePointFamily, PrunedTree, dense_pn_distance


class CellSearchExhausted(Exception):
    def __init__(self, depth: int, bound: int):
        self.depth, self.bound = depth, bound
        super().__init__(f"no child cell contains the point at depth {depth} (bound {bound})")


class WitnessSearchExhausted(Exception):
    def __init__(self, cell: tuple[int, ...], bound: int):
        self.cell, self.bound = cell, bound
        super().__init__(f"no dense witness in cell {list(cell)} within bound {bound}")


class SplitSearchExhausted(Exception):
    def __init__(self, i: int, j: int, depth: int):
        self.i, self.j, self.depth = i, j, depth
        super().__init__(f"points {i}, {j} not separated by depth {depth}")


def rescale(dist: Callable[..., Fraction]) -> Callable[..., Fraction]:
    """Turn a distance oracle d into d / (1 + d), exact on rationals.

    The rescaled oracle is bounded by 1, strictly below 1 on finite values,
    and preserves the ultrametric inequality.
    """

    def scaled(*args) -> Fraction:
        d = dist(*args)
        return d / (1 + d)

    return scaled


@dataclass(frozen=True)
class ZeroDimPresentation:
    """A zero-dimensional space given by dense points and exact comparisons.

    dense_point    -- index -> point handle (handles must be hashable)
    dist           -- exact distance on dense indices, bounded by 1
    dist_to_dense  -- exact distance from an instance point handle to r_i
    witness_bound  -- SeqCode -> scan ceiling for dense witnesses in a cell
    ultrametric    -- gate for the clopen-ball construction
    """

    name: str
    dense_point: Callable[[int], Any]
    dist: Callable[[int, int], Fraction]
    dist_to_dense: Callable[[Any, int], Fraction]
    witness_bound: Callable[[int], int]
    ultrametric: bool = True

    def ball_member(self, x: Any, i: int, radius: Fraction) -> bool:
        """Exactly decide d(x, r_i) < radius."""
        return self.dist_to_dense(x, i) < radius

    def ball_member_coded(self, x: Any, i: int, s_rat: int) -> bool:
        """The membership relation with the radius given by its rational index."""
        return self.ball_member(x, i, rational_of_index(s_rat))


class LuzinScheme:
    """The refining clopen cell family over a presentation."""

    def __init__(self, presentation: ZeroDimPresentation, max_depth: int = 8):
        if not presentation.ultrametric:
            raise ValueError("the cell construction needs an ultrametric presentation")
        self.presentation = presentation
        self.max_depth = max_depth
        self._ball: dict[tuple[Any, tuple[int, ...]], bool] = {}
        self._cell: dict[tuple[Any, tuple[int, ...]], bool] = {}

    def _radius(self, level: int) -> Fraction:
        return Fraction(1, 2 ** (level + 2) + 1)

    def ball_stage(self, x: Any, cell: tuple[int, ...]) -> bool:
        """Membership in the undisjointified stage B_cell."""
        if not cell:
            return True
        key = (x, cell)
        memo = self._ball
        v = memo.get(key)
        if v is not None:
            return v
        parent, k = cell[:-1], cell[-1]
        pres = self.presentation
        v = (self.ball_stage(x, parent)
             and pres.ball_member(x, k, self._radius(len(parent)))
             and self.ball_stage(pres.dense_point(k), parent))
        memo[key] = v
        return v

    def cell_member_seq(self, x: Any, cell: tuple[int, ...]) -> bool:
        """Membership in the disjointified cell A_cell."""
        if len(cell) > self.max_depth:
            raise ValueError(f"cell depth {len(cell)} exceeds max depth {self.max_depth}")
        if not cell:
            return True
        key = (x, cell)
        memo = self._cell
        v = memo.get(key)
        if v is not None:
            return v
        parent, k = cell[:-1], cell[-1]
        v = (self.cell_member_seq(x, parent)
             and self.ball_stage(x, cell)
             and all(not self.ball_stage(x, parent + (i,)) for i in range(k)))
        memo[key] = v
        return v

    def cell_member(self, x: Any, s: int) -> bool:
        """Code-level cell membership."""
        return self.cell_member_seq(x, decode(s))

    def child_scan_bound(self, cell: tuple[int, ...]) -> int:
        return self.presentation.witness_bound(encode(cell))

    def embed(self, x: Any) -> BairePoint:
        """The point reading off the unique cell index of x on each level."""
        scheme = self
        vals: list[int] = []

        def rule(n: int) -> int:
            while len(vals) <= n:
                prefix = tuple(vals)
                bound = scheme.child_scan_bound(prefix)
                for i in range(bound + 1):
                    if scheme.cell_member_seq(x, prefix + (i,)):
                        vals.append(i)
                        break
                else:
                    raise CellSearchExhausted(len(vals), bound)
            return vals[n]

        return BairePoint(rule, label=f"embed[{self.presentation.name}]")

    def image_node_seq(self, cell: tuple[int, ...]) -> bool:
        """Nonemptiness of a cell, decided by the bounded dense-witness scan."""
        bound = self.presentation.witness_bound(encode(cell))
        return any(self.cell_member_seq(self.presentation.dense_point(i), cell)
                   for i in range(bound + 1))

    def image_node(self, s: int) -> bool:
        return self.image_node_seq(decode(s))

    def image_witness(self, cell: tuple[int, ...]) -> int:
        """A dense index inside the cell; error when the scan bound is too small."""
        bound = self.presentation.witness_bound(encode(cell))
        for i in range(bound + 1):
            if self.cell_member_seq(self.presentation.dense_point(i), cell):
                return i
        raise WitnessSearchExhausted(cell, bound)

    def image_tree(self) -> PrunedTree:
        """The tree of the embedded image, pruned within the witness bounds."""
        return PrunedTree(
            self.image_node_seq,
            lambda cell: self.presentation.witness_bound(encode(cell)),
            label=f"image[{self.presentation.name}]",
        )

    def inverse_ball(self, a: BairePoint, i: int, s_rat: int, depth: int) -> bool:
        """Semi-decide d(point embedded at a, r_i) < q with the coded rational q.

        True certifies the inequality through a cell of a's branch; False only
        means nothing was found within the depth and witness budgets.
        """
        q = rational_of_index(s_rat)
        pres = self.presentation
        for n in range(depth + 1):
            margin = q - Fraction(1, 2 ** n)
            if margin <= 0:
                continue
            cell = tuple(a(t) for t in range(n))
            bound = pres.witness_bound(encode(cell))
            for j in range(bound + 1):
                if pres.dist(j, i) < margin and self.cell_member_seq(pres.dense_point(j), cell):
                    return True
        return False


@dataclass
class ImagePresentation:
    """The embedded dense family with its exact first-disagreement distances."""

    scheme: LuzinScheme
    distinct: Callable[[int, int], bool]

    def __post_init__(self):
        self._points: dict[int, BairePoint] = {}

    def point(self, i: int) -> BairePoint:
        pt = self._points.get(i)
        if pt is None:
            pt = self.scheme.embed(self.scheme.presentation.dense_point(i))
            self._points[i] = pt
        return pt

    def split_length(self, i: int, j: int) -> int:
        """Depth of the deepest common cell of the embedded points i and j."""
        delta = self.scheme.presentation.dist(i, j)
        if delta == 0:
            raise SplitSearchExhausted(i, j, 0)
        depth = 0
        while Fraction(1, 2 ** depth) > delta:
            depth += 1
        yi, yj = self.point(i), self.point(j)
        for k in range(depth + 1):
            if yi(k) != yj(k):
                return k
        raise SplitSearchExhausted(i, j, depth)

    def dist(self, i: int, j: int) -> Fraction:
        if not self.distinct(i, j):
            return Fraction(0)
        return Fraction(1, self.split_length(i, j) + 1)


def image_presentation(scheme: LuzinScheme,
                       distinct: Callable[[int, int], bool]) -> ImagePresentation:
    return ImagePresentation(scheme, distinct)


# --- presentation catalog ----------------------------------------------------

def _bit(i: int, k: int) -> int:
    return (i >> k) & 1


def cantor_presentation(witness_bound: int = 64) -> ZeroDimPresentation:
    """The two-symbol sequence space with the rescaled first-disagreement metric.

    Dense point i is the finite-support point whose k-th entry is bit k of i,
    an injective enumeration; instance points are any eventually periodic
    two-symbol points.  The rescale keeps every distance at most 1/2, so all
    diameters are strictly below the level bounds, root included.
    """

    def dense_point(i: int) -> BairePoint:
        if i == 0:
            return eventually_periodic((), (0,), label="r0")
        bits = tuple(_bit(i, k) for k in range(i.bit_length()))
        return eventually_periodic(bits, (0,), label=f"r{i}")

    def dist(i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(0)
        k = (i ^ j) & -(i ^ j)
        return Fraction(1, k.bit_length() + 1)

    def dist_to_dense(x: BairePoint, i: int) -> Fraction:
        d = exact_distance(x, dense_point(i))
        return d / (1 + d)

    return ZeroDimPresentation(
        name="cantor",
        dense_point=dense_point,
        dist=dist,
        dist_to_dense=dist_to_dense,
        witness_bound=lambda s: witness_bound,
        ultrametric=True,
    )


def discrete_presentation(n: int) -> ZeroDimPresentation:
    """n isolated points with the two-valued metric (already bounded by 1)."""
    if n < 1:
        raise ValueError("need at least one point")

    def dense_point(i: int) -> int:
        return i % n

    def dist(i: int, j: int) -> Fraction:
        return Fraction(0) if i % n == j % n else Fraction(1)

    return ZeroDimPresentation(
        name=f"discrete-{n}",
        dense_point=dense_point,
        dist=dist,
        dist_to_dense=lambda x, i: Fraction(0) if x == i % n else Fraction(1),
        witness_bound=lambda s: n,
        ultrametric=True,
    )


def baire_closed_presentation(fam: DensePointFamily,
                              witness_bound: int = 64) -> ZeroDimPresentation:
    """A closed subset of Baire space, presented through its dense family.

    Point handles are dense-family codes, so every distance reduces to the
    exactly decidable comparisons of the family; the metric is the rescaled
    first-disagreement distance.
    """

    def dist(i: int, j: int) -> Fraction:
        d = dense_pn_distance(fam, i, j)
        return d / (1 + d)

    return ZeroDimPresentation(
        name=f"closed[{fam.tree.label}]",
        dense_point=lambda i: i,
        dist=dist,
        dist_to_dense=dist,
        witness_bound=lambda s: witness_bound,
        ultrametric=True,
    )
