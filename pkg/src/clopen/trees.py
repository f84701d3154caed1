"""Closed subsets of Baire space as pruned trees.

A tree is a node predicate on finite sequences together with a child search
ceiling.  The predicate works on decoded sequences (tuples): codes of long
sequences are astronomically large under the canonical coding, so forcing
every membership test through a code would make deep branches uncomputable.
The code-level view required by the wire formats is provided on top.

The dense point family attaches to each code s the branch that starts with
the coded sequence and then always takes the least admissible child.  For an
inadmissible s the branch of the least admissible code (the root, for a
nonempty tree) is used instead.  Equality and the distance comparison
relations on this family are decided exactly: equality reduces to a finite
prefix check, and unequal branches provably disagree within the longer of
the two coded prefixes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

from .baire import BairePoint
from .coding import decode, encode


class TreeError(Exception):
    """Base class for tree contract violations."""

    def __init__(self, node: tuple[int, ...], detail: str = ""):
        self.node = node
        self.detail = detail
        super().__init__(f"{type(self).__name__} at node {list(node)} {detail}".rstrip())

    @property
    def code(self) -> int:
        return encode(self.node)


class EmptyTreeViolation(TreeError):
    """The root is inadmissible: the tree codes the empty set."""


class PrunednessViolation(TreeError):
    """An admissible node has no admissible child within the child bound."""


class DownwardClosureViolation(TreeError):
    """An admissible child hangs under an inadmissible node."""

    def __init__(self, node: tuple[int, ...], k: int):
        self.k = k
        super().__init__(node, f"(child {k})")


class ChildSearchExhausted(TreeError):
    """The least-child search ran past the bound beyond the validated depth."""


class InsufficientDensePoints(Exception):
    def __init__(self, found: int, wanted: int, cap: int):
        self.found, self.wanted, self.cap = found, wanted, cap
        super().__init__(f"found {found} distinct dense points of {wanted} wanted (codes < {cap})")


@dataclass
class ValidationReport:
    depth: int
    admissible: int
    inspected: int


class PrunedTree:
    """A closed set of branches, given by a sequence predicate.

    admits      -- the node predicate on decoded sequences
    child_bound -- ceiling for the least-child search below a node
    hint        -- optional (sequence -> (preperiod_len, period_len)) giving a
                   periodicity promise for the leftmost branch through a node
    """

    def __init__(
        self,
        admits: Callable[[tuple[int, ...]], bool],
        child_bound: Callable[[tuple[int, ...]], int],
        hint: Optional[Callable[[tuple[int, ...]], Optional[tuple[int, int]]]] = None,
        label: str = "tree",
    ):
        self._admits = admits
        self.child_bound = child_bound
        self.hint = hint
        self.label = label
        self.depth_validated = 0
        self._cache: dict[tuple[int, ...], bool] = {}

    def admits(self, u: tuple[int, ...]) -> bool:
        cache = self._cache
        v = cache.get(u)
        if v is None:
            v = bool(self._admits(u))
            cache[u] = v
        return v

    def node(self, s: int) -> bool:
        """Code-level node predicate (the 0/1 parameter of the closed set)."""
        return self.admits(decode(s))

    def __repr__(self) -> str:
        return f"<PrunedTree {self.label} validated={self.depth_validated}>"


def validate_pruned(tree: PrunedTree, depth: int) -> ValidationReport:
    """Check nonemptiness, downward closure and prunedness to the given depth.

    All sequences of length < depth with entries within the child bounds are
    inspected, admissible or not; prunedness is certified for the admissible
    ones and downward closure for the rest.  Beyond the validated depth the
    prunedness contract is the caller's assertion.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not tree.admits(()):
        raise EmptyTreeViolation(())
    admissible = 0
    inspected = 0
    stack: list[tuple[int, ...]] = [()]
    while stack:
        u = stack.pop()
        inspected += 1
        adm = tree.admits(u)
        if adm:
            admissible += 1
        has_child = False
        bound = tree.child_bound(u)
        for k in range(bound + 1):
            c = u + (k,)
            if tree.admits(c):
                has_child = True
                if not adm:
                    raise DownwardClosureViolation(u, k)
            if len(c) < depth:
                stack.append(c)
        if adm and not has_child:
            raise PrunednessViolation(u)
    tree.depth_validated = max(tree.depth_validated, depth)
    return ValidationReport(depth=depth, admissible=admissible, inspected=inspected)


class _LeftmostRule:
    """Branch rule: a fixed admissible stem, then always the least admissible child."""

    def __init__(self, tree: PrunedTree, stem: tuple[int, ...]):
        self.tree = tree
        self.vals = list(stem)

    def __call__(self, n: int) -> int:
        vals = self.vals
        tree = self.tree
        while len(vals) <= n:
            prefix = tuple(vals)
            bound = tree.child_bound(prefix)
            for k in range(bound + 1):
                if tree.admits(prefix + (k,)):
                    vals.append(k)
                    break
            else:
                raise ChildSearchExhausted(prefix, f"(bound {bound})")
        return vals[n]


class DensePointFamily:
    """The family of leftmost branches indexed by sequence codes."""

    def __init__(self, tree: PrunedTree, scan_cap: int = 4096):
        if tree.depth_validated < 1:
            raise ValueError("validate the tree before building a dense family")
        self.tree = tree
        self.base_index = self._least_admissible(scan_cap)
        self._points: dict[int, BairePoint] = {}
        self._pn_cache: dict[tuple[int, int], Fraction] = {}

    def _least_admissible(self, cap: int) -> int:
        for s in range(cap):
            if self.tree.admits(decode(s)):
                return s
        raise EmptyTreeViolation(())

    def admissible(self, s: int) -> bool:
        return self.tree.admits(decode(s))

    def leftmost(self, s: int) -> BairePoint:
        """The dense point with index s (memoized per index)."""
        pt = self._points.get(s)
        if pt is not None:
            return pt
        u = decode(s)
        if not self.tree.admits(u):
            pt = self.leftmost(self.base_index)
        else:
            hint = self.tree.hint(u) if self.tree.hint is not None else None
            pt = BairePoint(_LeftmostRule(self.tree, u), tail_hint=hint,
                            label=f"{self.tree.label}[{s}]")
        self._points[s] = pt
        return pt

    def _reduce(self, s: int) -> int:
        return s if self.admissible(s) else self.base_index


def dense_equal(fam: DensePointFamily, s: int, t: int) -> bool:
    """Exact equality of the dense points with indices s and t.

    Inadmissible indices reduce to the base index; for admissible ones the
    branches are equal exactly when one coded stem is a prefix of the other
    and the longer stem lies on the shorter stem's leftmost branch.
    """
    return dense_pn_distance(fam, s, t) == 0


def first_disagreement(fam: DensePointFamily, s: int, t: int) -> int:
    """Least position where the (unequal) dense points s and t differ."""
    d = dense_pn_distance(fam, s, t)
    if d == 0:
        raise ValueError(f"dense points {s} and {t} are equal")
    return d.denominator - 1


def dense_pn_distance(fam: DensePointFamily, s: int, t: int) -> Fraction:
    """Exact first-disagreement distance of two dense points (memoized).

    Equality reduces to a finite prefix check, and unequal branches provably
    disagree within the longer of the two coded stems, so the scan below is
    total.
    """
    s, t = fam._reduce(s), fam._reduce(t)
    if s == t:
        return Fraction(0)
    if t < s:
        s, t = t, s
    cached = fam._pn_cache.get((s, t))
    if cached is not None:
        return cached
    us, ut = decode(s), decode(t)
    a, b = fam.leftmost(s), fam.leftmost(t)
    d = Fraction(0)
    for i in range(max(len(us), len(ut))):
        if a(i) != b(i):
            d = Fraction(1, i + 1)
            break
    fam._pn_cache[(s, t)] = d
    return d


def dense_distance_lt(fam: DensePointFamily, s: int, t: int, m: int, k: int) -> bool:
    """Decide distance(point s, point t) < m/(k+1) exactly."""
    if m == 0:
        return False
    d = dense_pn_distance(fam, s, t)
    if d == 0:
        return True
    i = d.denominator - 1
    return k + 1 < (i + 1) * m


def dense_distance_le(fam: DensePointFamily, s: int, t: int, m: int, k: int) -> bool:
    """Decide distance(point s, point t) <= m/(k+1) exactly."""
    d = dense_pn_distance(fam, s, t)
    if d == 0:
        return True
    i = d.denominator - 1
    return k + 1 <= (i + 1) * m


def enumerate_distinct(fam: DensePointFamily, count: int, cap: int = 100_000) -> list[int]:
    """First `count` admissible codes, in code order, naming distinct points."""
    found: list[int] = []
    for s in range(cap):
        if len(found) == count:
            return found
        if not fam.admissible(s):
            continue
        if any(dense_equal(fam, s, t) for t in found):
            continue
        found.append(s)
    if len(found) == count:
        return found
    raise InsufficientDensePoints(len(found), count, cap)


def iter_admissible(tree: PrunedTree, max_len: int) -> Iterator[tuple[int, ...]]:
    """All admissible sequences of length <= max_len, entries within bounds."""
    stack: list[tuple[int, ...]] = [()]
    while stack:
        u = stack.pop()
        if not tree.admits(u):
            continue
        yield u
        if len(u) < max_len:
            for k in range(tree.child_bound(u) + 1):
                stack.append(u + (k,))


# --- tree catalog -----------------------------------------------------------

def full_baire_tree() -> PrunedTree:
    """All of Baire space.  Child bound 0: the least-child search never moves."""
    return PrunedTree(lambda u: True, lambda u: 0,
                      hint=lambda u: (len(u), 1), label="full-baire")


def full_cantor_tree() -> PrunedTree:
    """All 0/1 sequences."""
    return PrunedTree(lambda u: all(x <= 1 for x in u), lambda u: 1,
                      hint=lambda u: (len(u), 1), label="full-cantor")


def constant_tree(c: int) -> PrunedTree:
    """The single branch c, c, c, ..."""
    return PrunedTree(lambda u: all(x == c for x in u), lambda u: c,
                      hint=lambda u: (len(u), 1), label=f"constant-{c}")


def cylinder_union_tree(prefixes: Iterable[Iterable[int]], label: str = "",
                        child_floor: int = 0) -> PrunedTree:
    """The union of the basic neighborhoods of the given finite prefixes.

    child_floor widens the child search ceiling beyond what the leftmost
    branch needs, so that validation and sampling walks see the whole
    alphabet of an instance rather than only the spine.
    """
    pres = tuple(tuple(p) for p in prefixes)
    if not pres:
        raise ValueError("at least one prefix is required")
    max_len = max(len(p) for p in pres)

    def admits(u: tuple[int, ...]) -> bool:
        n = len(u)
        for p in pres:
            m = min(n, len(p))
            if u[:m] == p[:m]:
                return True
        return False

    def child_bound(u: tuple[int, ...]) -> int:
        n = len(u)
        best = child_floor
        for p in pres:
            if len(p) > n and u == p[:n]:
                best = max(best, p[n])
        return best

    def hint(u: tuple[int, ...]) -> tuple[int, int]:
        return (max(len(u), max_len), 1)

    return PrunedTree(admits, child_bound, hint=hint,
                      label=label or f"cylinders-{len(pres)}")
