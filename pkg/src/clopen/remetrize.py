"""Re-metrization by pulling back the branch metric through closed representations.

A set and its complement, each carried injectively by a pruned tree, induce
new side-local metrics: the distance of two points on one side is the
first-disagreement distance of their branches, and points on opposite sides
are at distance 2.  Under the summed metric both sides become clopen, the
topology extends the ambient one, and the presentation relations of the new
space are decided exactly on the interleaved dense family.

Moduli of continuity replace the abstract two-sided continuity claims: each
representation declares how long a branch prefix pins the mapped point to a
requested ambient precision, and conversely.  Certificates computed from
those moduli are checked by sampling, never asserted blindly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional

from .baire import BairePoint, pair_points
from .coding import decode, pair_code
from .trees import DensePointFamily, PrunedTree, dense_distance_lt, \
    dense_pn_distance

Side = int  # 0 for the designated set, 1 for its complement


class NotInterior(Exception):
    def __init__(self, detail: str):
        super().__init__(detail)


class CertificateFailure(Exception):
    def __init__(self, detail: str):
        super().__init__(detail)


class OnBoundary(Exception):
    """A point with norm exactly 1: the ball re-metrization formula is singular."""


@dataclass(frozen=True)
class SpacePresentation:
    """A countable presentation: dense points with exact rational comparisons."""

    name: str
    point: Callable[[int], Any]
    dist: Callable[[int, int], Fraction]
    dist_point: Optional[Callable[[Any, int], Fraction]] = None

    def lt(self, i: int, j: int, m: int, k: int) -> bool:
        """Decide dist(point i, point j) < m/(k+1)."""
        return self.dist(i, j) < Fraction(m, k + 1)

    def le(self, i: int, j: int, m: int, k: int) -> bool:
        """Decide dist(point i, point j) <= m/(k+1)."""
        return self.dist(i, j) <= Fraction(m, k + 1)


@dataclass
class ClosedRepresentation:
    """A closed set of branches with an injective map into the ambient space.

    map_point       -- branch point -> ambient point handle
    map_modulus     -- precision index k -> branch prefix length L such that
                       branches agreeing on [0, L) map within 1/(k+1)
    inverse_modulus -- (branch point, k) -> ambient precision index m such
                       that ambient distance < 1/(m+1) forces the branches
                       within 1/(k+1); point-dependent because inverses of
                       injective maps are continuous but not uniformly so
    """

    tree: PrunedTree
    fam: DensePointFamily
    map_point: Callable[[BairePoint], Any]
    map_modulus: Callable[[int], int]
    inverse_modulus: Callable[[BairePoint, int], int]
    kind: str = "identity"
    closure: Any = None  # the WitnessClosure behind a witness-kind side

    def dense_image(self, s: int) -> Any:
        return self.map_point(self.fam.leftmost(s))


def identity_representation(tree: PrunedTree) -> ClosedRepresentation:
    """A closed subset of the ambient sequence space, carried by itself.

    The ambient metric is the rescaled first-disagreement distance, so prefix
    agreement on k+1 positions already lands within 1/(k+2) < 1/(k+1).
    """
    fam = DensePointFamily(tree)
    return ClosedRepresentation(
        tree=tree,
        fam=fam,
        map_point=lambda branch: branch,
        map_modulus=lambda k: k + 1,
        inverse_modulus=lambda branch, k: k + 1,
        kind="identity",
    )


@dataclass
class SumSpace:
    """The direct sum of the two pulled-back sides over an ambient space."""

    part_a: ClosedRepresentation
    part_c: ClosedRepresentation
    ambient: SpacePresentation
    label: str = "sum"

    def side(self, tag: Side) -> ClosedRepresentation:
        return self.part_a if tag == 0 else self.part_c


def pullback_distance(rep: ClosedRepresentation, s: int, t: int) -> Fraction:
    """Exact new-metric distance of the dense points with indices s and t."""
    return dense_pn_distance(rep.fam, s, t)


def sum_distance(sp: SumSpace, p: tuple[Side, int], q: tuple[Side, int]) -> Fraction:
    """2 across the partition, the side pullback within a side."""
    if p[0] != q[0]:
        return Fraction(2)
    return pullback_distance(sp.side(p[0]), p[1], q[1])


def tag_of_index(sp: SumSpace, t: int) -> tuple[Side, int]:
    """Decode a dense index of the sum presentation into (side, family code).

    Indices coding a pair (i, s) with i in {0, 1} name the s-th dense point
    of side i; every other index falls back to the base point of the set side.
    """
    u = decode(t)
    if len(u) == 2 and u[0] in (0, 1):
        return u[0], u[1]
    return 0, sp.part_a.fam.base_index


def new_presentation(sp: SumSpace) -> SpacePresentation:
    """The countable presentation of the summed space, decided exactly."""

    def point(t: int):
        side, s = tag_of_index(sp, t)
        return sp.side(side).dense_image(s)

    def dist(t1: int, t2: int) -> Fraction:
        return sum_distance(sp, tag_of_index(sp, t1), tag_of_index(sp, t2))

    return SpacePresentation(name=f"sum[{sp.label}]", point=point, dist=dist)


def epsilon_code(sp: SumSpace) -> BairePoint:
    """The combined 0/1 parameter pairing the two node predicates."""
    char_a = BairePoint(lambda s: 1 if sp.part_a.tree.node(s) else 0, label="nodes-a")
    char_c = BairePoint(lambda s: 1 if sp.part_c.tree.node(s) else 0, label="nodes-c")
    return pair_points(char_a, char_c)


def membership_in_a(sp: SumSpace, p: tuple[Side, int],
                    radius: Fraction = Fraction(3, 2)) -> bool:
    """Decide side membership by one ball query against a base point of the set.

    Distances within a side stay at most 1 and the cross distance is 2, so
    the radius-3/2 ball around any set-side point contains exactly the set.
    """
    base = (0, sp.part_a.fam.base_index)
    return sum_distance(sp, base, p) < radius


def side_of_branch(sp: SumSpace, branch: BairePoint, depth: int) -> Side:
    """Recover the side tag of a branch by growing prefixes until the trees split."""
    for n in range(depth + 1):
        u = branch.prefix(n)
        in_a = sp.part_a.tree.admits(u)
        in_c = sp.part_c.tree.admits(u)
        if in_a != in_c:
            return 0 if in_a else 1
        if not in_a and not in_c:
            raise ValueError("branch leaves both trees")
    raise ValueError(f"trees do not separate the branch within depth {depth}")


def extension_certificate(sp: SumSpace, side: Side, s: int,
                          center: int, radius: Fraction,
                          sample_cap: int = 150) -> int:
    """Certify that an ambient ball strictly containing a dense point is a
    new-metric neighborhood of it.

    Returns k such that the new-metric ball of radius 1/(k+1) around the
    point lies inside the ambient ball, derived from the representation's
    declared map modulus at the strict margin.  The certificate is then
    checked by sampling: every dense point of the side with code below
    sample_cap that the new ball contains must verifiably lie in the ambient
    ball, at exact-rational precision.
    """
    rep = sp.side(side)
    if sp.ambient.dist_point is None:
        raise CertificateFailure("ambient presentation has no exact point distance")
    x = rep.dense_image(s)
    d0 = sp.ambient.dist_point(x, center)
    if d0 >= radius:
        raise NotInterior(f"point {s} on side {side} is not strictly inside "
                          f"the ball ({d0} >= {radius})")
    margin = radius - d0
    # least precision index whose radius fits inside the margin
    k_target = -(-margin.denominator // margin.numerator) - 1
    prefix_len = rep.map_modulus(max(k_target, 0))
    k_cert = max(prefix_len - 1, 0)
    for t in range(sample_cap):
        if not rep.fam.admissible(t):
            continue
        if not dense_distance_lt(rep.fam, t, s, 1, k_cert):
            continue
        d = sp.ambient.dist_point(rep.dense_image(t), center)
        if d >= radius:
            raise CertificateFailure(
                f"sampled point {t} at new-distance < 1/{k_cert + 1} of {s} "
                f"lands outside the ambient ball ({d} >= {radius})")
    return k_cert


def witness_representation(matrix, alphabet_bound: int,
                           validate_depth: int = 10) -> ClosedRepresentation:
    """A side carried by the paired (point, least-witness) branches of a matrix.

    The map projects a pair branch to its point component; its modulus comes
    from the pairing layout (which pair positions a prefix covers), and the
    inverse modulus combines that layout with the witness map's own
    continuity modulus at the branch.
    """
    from .trees import validate_pruned
    from .witness import WitnessClosure, pair_tree

    tree = pair_tree(matrix, alphabet_bound)
    validate_pruned(tree, validate_depth)
    fam = DensePointFamily(tree)
    closure = WitnessClosure(matrix)

    def covered(component: int, k: int) -> int:
        n = 0
        while pair_code(component, n) <= k:
            n += 1
        return n

    def map_point(branch: BairePoint) -> BairePoint:
        from .baire import slice_point
        return slice_point(branch, 0)

    def map_modulus(k: int) -> int:
        if k == 0:
            return 0
        return pair_code(0, k - 1) + 1

    def inverse_modulus(branch: BairePoint, k: int) -> int:
        point_prefix = covered(0, k)
        witness_levels = covered(1, k)
        alpha = map_point(branch)
        stability = closure.continuity_modulus(alpha, witness_levels)
        return max(point_prefix, stability)

    return ClosedRepresentation(
        tree=tree,
        fam=fam,
        map_point=map_point,
        map_modulus=map_modulus,
        inverse_modulus=inverse_modulus,
        kind="witness",
        closure=closure,
    )


# --- direct re-metrization of an open unit ball ------------------------------

def distance_to_sphere(x: Fraction) -> Fraction:
    """Distance from a point of the open unit interval ball to its complement."""
    a = abs(x)
    if a >= 1:
        raise OnBoundary(f"|{x}| >= 1")
    return 1 - a


def open_ball_distance(x: Fraction, y: Fraction) -> Fraction:
    """The completed metric on the open unit ball of the rational line.

    Adds to the base distance the gap of the reciprocal distances to the
    complement, which blows up toward the missing boundary and makes the
    ball complete; exact on rationals and singular exactly on the sphere.
    """
    return abs(x - y) + abs(Fraction(1, distance_to_sphere(x))
                            - Fraction(1, distance_to_sphere(y)))


def complement_restriction_distance(x: Fraction, y: Fraction) -> Fraction:
    """The ambient metric restricted to the closed complement of the ball."""
    if abs(x) < 1 or abs(y) < 1:
        raise ValueError("both points must lie outside the open unit ball")
    return abs(x - y)
