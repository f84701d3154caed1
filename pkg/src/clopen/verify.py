"""Verification suites: the runnable form of every contract the library makes.

Each check returns a CheckResult instead of raising, so the command line can
report all failures of an instance in one pass, deterministically ordered.
The acceptance tests drive the same functions at their full documented scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .baire import BairePoint, BelowThreshold, Exact, distance
from .codes import (check_metric_axioms, decode_metric, encode_metric, interleave,
                    validate_metric_table)
from .coding import decode, encode
from .instances import BuiltInstance
from .luzin import LuzinScheme
from .remetrize import (SumSpace, extension_certificate, membership_in_a,
                        epsilon_code, new_presentation, sum_distance, tag_of_index)
from .trees import (DensePointFamily, PrunedTree, dense_distance_le,
                    dense_distance_lt, dense_equal, dense_pn_distance,
                    enumerate_distinct, iter_admissible, validate_pruned)
from .witness import WitnessClosure


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "ok" if self.passed else "FAIL"
        return f"{status:4} {self.name}" + (f"  {self.detail}" if self.detail else "")


def _result(name: str, fn: Callable[[], Optional[str]]) -> CheckResult:
    try:
        detail = fn()
    except Exception as exc:  # noqa: BLE001 - verification must report, not crash
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")
    return CheckResult(name, True, detail or "")


# --- tree-level checks ---------------------------------------------------------

def check_tree_valid(tree: PrunedTree, depth: int, name: str = "") -> CheckResult:
    label = name or f"tree-valid:{tree.label}"

    def run():
        report = validate_pruned(tree, depth)
        return f"{report.admissible} admissible of {report.inspected} inspected"

    return _result(label, run)


def check_dense_family(fam: DensePointFamily, stem_len: int, prefix_depth: int,
                       name: str = "") -> CheckResult:
    """Leftmost branches pass through their stems and stay on the tree."""
    label = name or f"dense-family:{fam.tree.label}"

    def run():
        count = 0
        for u in iter_admissible(fam.tree, stem_len):
            s = encode(u)
            a = fam.leftmost(s)
            if a.prefix(len(u)) != u:
                raise AssertionError(f"branch of {list(u)} leaves its neighborhood")
            for n in range(prefix_depth + 1):
                if not fam.tree.admits(a.prefix(n)):
                    raise AssertionError(f"branch of {list(u)} leaves the tree at {n}")
            count += 1
        return f"{count} stems checked to depth {prefix_depth}"

    return _result(label, run)


def check_distance_oracle(fam: DensePointFamily, code_bound: int, budget: int,
                          name: str = "") -> CheckResult:
    """The exact comparison relations agree with the budgeted scan oracle."""
    label = name or f"distance-oracle:{fam.tree.label}"
    probes = ((0, 0), (1, 0), (1, 1), (1, 5), (2, 3), (3, 1))

    def run():
        for s in range(code_bound):
            for t in range(s, code_bound):
                d = dense_pn_distance(fam, s, t)
                res = distance(fam.leftmost(s), fam.leftmost(t), budget)
                if isinstance(res, Exact):
                    if res.value != d:
                        raise AssertionError(f"({s},{t}): scan {res.value} != exact {d}")
                elif isinstance(res, BelowThreshold):
                    if not d < res.threshold:
                        raise AssertionError(f"({s},{t}): exact {d} not below threshold")
                for m, k in probes:
                    want_lt = d < Fraction(m, k + 1)
                    want_le = d <= Fraction(m, k + 1)
                    if dense_distance_lt(fam, s, t, m, k) != want_lt:
                        raise AssertionError(f"lt({s},{t},{m},{k}) != {want_lt}")
                    if dense_distance_le(fam, s, t, m, k) != want_le:
                        raise AssertionError(f"le({s},{t},{m},{k}) != {want_le}")
        return f"{code_bound}x{code_bound} index pairs"

    return _result(label, run)


def check_dense_metric_axioms(fam: DensePointFamily, code_bound: int,
                              name: str = "") -> CheckResult:
    """Metric axioms for the branch distance on dense indices, exhaustively."""
    label = name or f"dense-metric:{fam.tree.label}"

    def run():
        check_metric_axioms(lambda i, j: dense_pn_distance(fam, i, j), code_bound,
                            equal=lambda i, j: dense_equal(fam, i, j))
        return f"triples below {code_bound}"

    return _result(label, run)


# --- summed-space checks --------------------------------------------------------

def check_sum_metric_axioms(sp: SumSpace, count: int, name: str = "") -> CheckResult:
    pres = new_presentation(sp)

    def run():
        def equal(i: int, j: int) -> bool:
            side_i, code_i = tag_of_index(sp, i)
            side_j, code_j = tag_of_index(sp, j)
            return side_i == side_j and dense_equal(sp.side(side_i).fam, code_i, code_j)

        check_metric_axioms(pres.dist, count, equal=equal)
        return f"triples below {count}"

    return _result(name or f"sum-metric:{sp.label}", run)


def check_clopen_sides(sp: SumSpace, count: int, name: str = "") -> CheckResult:
    """Side membership of every dense index recovered by the one-ball test."""

    def run():
        for t in range(count):
            side, _ = tag_of_index(sp, t)
            if membership_in_a(sp, tag_of_index(sp, t)) != (side == 0):
                raise AssertionError(f"ball test misclassifies index {t}")
        return f"{count} dense indices"

    return _result(name or f"clopen:{sp.label}", run)


def check_epsilon_code(sp: SumSpace, code_bound: int, name: str = "") -> CheckResult:
    """The combined parameter agrees with both node predicates."""
    from .baire import slice_point

    def run():
        eps = epsilon_code(sp)
        part0 = slice_point(eps, 0)
        part1 = slice_point(eps, 1)
        for s in range(code_bound):
            if part0(s) != (1 if sp.part_a.tree.node(s) else 0):
                raise AssertionError(f"set-side parameter wrong at {s}")
            if part1(s) != (1 if sp.part_c.tree.node(s) else 0):
                raise AssertionError(f"complement-side parameter wrong at {s}")
            u = decode(s)
            if not (len(u) == 2 and u[0] in (0, 1)) and eps(s) != 0:
                raise AssertionError(f"non-pair position {s} holds a 1")
        return f"codes below {code_bound}"

    return _result(name or f"epsilon:{sp.label}", run)


def certified_ball_list(sp: SumSpace, per_side: int = 6,
                        radii: Iterable[Fraction] = (Fraction(1, 2), Fraction(1, 4)),
                        cap: int = 20_000) -> list[tuple[int, int, int, Fraction]]:
    """(side, dense code, ambient center, radius) pairs with strict interiors.

    The list is the instance's certified extension catalog: for each listed
    pair the certificate must succeed.  Strictness of the interior is checked
    here with exact arithmetic; pairs that are not strictly interior are not
    certifiable and are left out.
    """
    out = []
    for side in (0, 1):
        rep = sp.side(side)
        codes = enumerate_distinct(rep.fam, per_side, cap=cap)
        for s in codes:
            x = rep.dense_image(s)
            for center in range(4):
                d0 = sp.ambient.dist_point(x, center)
                for radius in radii:
                    if d0 < radius:
                        out.append((side, s, center, radius))
    return out


def check_extension_certificates(sp: SumSpace, certified: list, sample_cap: int = 150,
                                 name: str = "") -> CheckResult:
    def run():
        for side, s, center, radius in certified:
            extension_certificate(sp, side, s, center, radius, sample_cap=sample_cap)
        return f"{len(certified)} certified balls"

    return _result(name or f"extension:{sp.label}", run)


def check_degenerate(built: BuiltInstance, sample: int = 40, name: str = "") -> CheckResult:
    """Degenerate instances re-present the ambient space unchanged."""

    def run():
        if built.sum_space is not None:
            raise AssertionError("instance is not degenerate")
        pres = built.presentation()
        amb = built.ambient
        for i in range(sample):
            for j in range(sample):
                if pres.dist(i, j) != amb.dist(i, j):
                    raise AssertionError(f"presentation differs from ambient at ({i},{j})")
        return f"{built.degenerate}; {sample}x{sample} distances identical"

    return _result(name or f"degenerate:{built.file.id}", run)


# --- continuity moduli -----------------------------------------------------------

def side_sample_branches(rep, count: int, walk_depth: int = 14) -> list[BairePoint]:
    """Distinct branch points of a side, collected by walking the tree.

    Tree walking reaches variation that a numeric code scan cannot afford:
    stems whose nonzero entries sit late have astronomically large codes
    under the canonical coding, but as stems they are a few steps away.
    """
    samples: list[tuple[int, BairePoint]] = []
    for u in iter_admissible(rep.tree, walk_depth):
        s = encode(u)
        if any(dense_equal(rep.fam, s, t) for t, _ in samples):
            continue
        samples.append((s, rep.fam.leftmost(s)))
        if len(samples) == count:
            break
    return [pt for _, pt in samples]


def _agree(p: BairePoint, q: BairePoint, length: int) -> bool:
    return all(p(t) == q(t) for t in range(length))


def check_two_sided_continuity(sp: SumSpace, per_side: int = 4,
                               precisions: Iterable[int] = (0, 1, 2, 3),
                               name: str = "") -> CheckResult:
    """Sampled soundness of both declared moduli on every side.

    Everything reduces to finite prefix agreement, exactly: branch distance
    below 1/(k+1) is agreement on k+1 positions, and ambient distance below
    1/(k+1) is agreement of the mapped points on k positions, the ambient
    metric being the rescaled first-disagreement distance.

    Forward: branch pairs agreeing past the map modulus land within the
    requested ambient precision.  Backward: pairs within the inverse
    modulus's ambient distance have branches within the target.
    """

    def run():
        pairs_checked = 0
        for side in (0, 1):
            rep = sp.side(side)
            branches = side_sample_branches(rep, per_side)
            images = [rep.map_point(b) for b in branches]
            for k in precisions:
                fwd = rep.map_modulus(k)
                for x_br, x_im in zip(branches, images):
                    inv = rep.inverse_modulus(x_br, k)
                    for y_br, y_im in zip(branches, images):
                        if _agree(x_br, y_br, fwd) and not _agree(x_im, y_im, k):
                            raise AssertionError(
                                f"map modulus unsound on side {side} at k={k}")
                        if _agree(x_im, y_im, inv) and not _agree(x_br, y_br, k + 1):
                            raise AssertionError(
                                f"inverse modulus unsound on side {side} at k={k}")
                        pairs_checked += 1
        return f"{pairs_checked} modulus samples"

    return _result(name or f"continuity:{sp.label}", run)


# --- scheme and witness checks ----------------------------------------------------

def check_luzin_scheme(scheme: LuzinScheme, depth: int, dense_count: int,
                       name: str = "") -> CheckResult:
    """Root, refinement, disjointness and shrinking diameters on dense probes."""
    pres = scheme.presentation

    def run():
        probes = [pres.dense_point(i) for i in range(dense_count)]
        for x in probes:
            if not scheme.cell_member_seq(x, ()):
                raise AssertionError("a probe escapes the root cell")
        # every probe refines into exactly one child cell, level by level
        for x in probes:
            cell: tuple[int, ...] = ()
            for _ in range(depth):
                bound = scheme.child_scan_bound(cell)
                hits = [i for i in range(bound + 1)
                        if scheme.cell_member_seq(x, cell + (i,))]
                if len(hits) != 1:
                    raise AssertionError(f"{len(hits)} child cells of {list(cell)} hold a probe")
                cell += (hits[0],)
        # diameters: same-cell dense pairs sit below the level bound
        embeds = {i: scheme.embed(pres.dense_point(i)) for i in range(dense_count)}
        for i in range(dense_count):
            for j in range(i + 1, dense_count):
                d = pres.dist(i, j)
                level = 0
                while level < depth and embeds[i].prefix(level + 1) == embeds[j].prefix(level + 1):
                    level += 1
                # the two points share a cell of depth `level`
                if not d < Fraction(1, 2 ** level):
                    raise AssertionError(f"cell diameter bound fails for ({i},{j})")
        return f"{dense_count} probes to depth {depth}"

    return _result(name or f"luzin:{pres.name}", run)


def check_embedding_injective(scheme: LuzinScheme, dense_count: int,
                              name: str = "") -> CheckResult:
    pres = scheme.presentation

    def run():
        embeds = {i: scheme.embed(pres.dense_point(i)) for i in range(dense_count)}
        for i in range(dense_count):
            for j in range(i + 1, dense_count):
                delta = pres.dist(i, j)
                if delta == 0:
                    continue
                depth = 0
                while Fraction(1, 2 ** depth) > delta:
                    depth += 1
                if embeds[i].prefix(depth + 1) == embeds[j].prefix(depth + 1):
                    raise AssertionError(f"images of {i} and {j} agree past the bound")
        return f"{dense_count} dense points pairwise separated"

    return _result(name or f"embed-injective:{pres.name}", run)


def check_image_tree_pruned(scheme: LuzinScheme, depth: int, name: str = "") -> CheckResult:
    tree = scheme.image_tree()

    def run():
        count = 0
        for u in iter_admissible(tree, depth - 1):
            if not any(tree.admits(u + (k,)) for k in range(tree.child_bound(u) + 1)):
                raise AssertionError(f"admissible image node {list(u)} has no child")
            count += 1
        return f"{count} admissible nodes extend"

    return _result(name or f"image-pruned:{scheme.presentation.name}", run)


def check_witness_matrix(closure: WitnessClosure, base_points: list[BairePoint],
                         depth: int, rng: random.Random, perturbations: int = 50,
                         name: str = "") -> CheckResult:
    """Closure membership, leastness refutations, and modulus soundness."""
    matrix = closure.matrix

    def run():
        for a in base_points:
            beta = closure.witness_point(a)
            if not closure.check_closure(a, beta, depth):
                raise AssertionError("the witness point fails its own closure")
            for n in range(depth):
                for delta in (-1, 1):
                    wrong = beta(n) + delta
                    if wrong < 0:
                        continue
                    fake = BairePoint(lambda i, n=n, wrong=wrong: wrong if i == n else beta(i))
                    if closure.check_closure(a, fake, n + 1):
                        raise AssertionError(f"perturbed witness at level {n} accepted")
            modulus = closure.continuity_modulus(a, depth)
            want = beta.prefix(depth)
            for _ in range(perturbations):
                pos = modulus + rng.randrange(0, 64)
                val = rng.randrange(0, 2)
                moved = BairePoint(lambda i, pos=pos, val=val: val if i == pos else a(i))
                if closure.witness_point(moved).prefix(depth) != want:
                    raise AssertionError(f"witness prefix moved under a tail change at {pos}")
        return f"{len(base_points)} base points, depth {depth}"

    return _result(name or f"witness:{matrix.label}", run)


# --- instance suite ---------------------------------------------------------------

def interleaved_table(built: BuiltInstance, count: Optional[int] = None):
    fam_a, fam_c = built.families()
    k = count if count is not None else built.file.bounds["table_size"]
    return interleave(fam_a, fam_c, k, cap=built.file.bounds["enumeration_cap"],
                      label=built.file.id)


def check_interleaved_table(built: BuiltInstance, count: Optional[int] = None,
                            name: str = "") -> CheckResult:
    def run():
        table = interleaved_table(built, count)
        validate_metric_table(table)
        code = encode_metric(table)
        probe = min(table.K, 6)
        for i in range(probe):
            for j in range(probe):
                if decode_metric(code, i, j, window=96) != table.dist(i, j):
                    raise AssertionError(f"code round trip differs at ({i},{j})")
        return f"K={table.K} validated, {probe}x{probe} bits round-tripped"

    return _result(name or f"interleave:{built.file.id}", run)


def check_code_matches_sum(built: BuiltInstance, matched: int = 12,
                           name: str = "") -> CheckResult:
    """Interleaved code distances equal summed-space distances on matched indices."""

    def run():
        table = interleaved_table(built, matched)
        sp = built.sum_space
        fam_a, fam_c = built.families()
        codes_a = enumerate_distinct(fam_a, (matched + 1) // 2,
                                     cap=built.file.bounds["enumeration_cap"])
        codes_c = enumerate_distinct(fam_c, matched // 2,
                                     cap=built.file.bounds["enumeration_cap"])
        for u in range(matched):
            for v in range(matched):
                tag_u = (u % 2, (codes_a if u % 2 == 0 else codes_c)[u // 2])
                tag_v = (v % 2, (codes_a if v % 2 == 0 else codes_c)[v // 2])
                if table.dist(u, v) != sum_distance(sp, tag_u, tag_v):
                    raise AssertionError(f"mismatch at matched indices ({u},{v})")
        return f"{matched}x{matched} matched indices agree"

    return _result(name or f"code-vs-sum:{built.file.id}", run)


def run_instance_suite(built: BuiltInstance, *, axiom_count: int = 60,
                       clopen_count: int = 60, seed: int = 0) -> list[CheckResult]:
    """Every applicable check for one built instance, deterministically ordered."""
    results: list[CheckResult] = []
    bounds = built.file.bounds
    if built.sum_space is None:
        results.append(check_degenerate(built))
        return sorted(results, key=lambda r: r.name)
    sp = built.sum_space
    for side_name, rep in (("a", sp.part_a), ("c", sp.part_c)):
        results.append(check_tree_valid(rep.tree, bounds["depth"],
                                        name=f"tree-valid:{side_name}"))
        results.append(check_dense_family(rep.fam, min(bounds["depth"], 3),
                                          2 * bounds["depth"],
                                          name=f"dense-family:{side_name}"))
        results.append(check_distance_oracle(rep.fam, 40, bounds["budget"],
                                             name=f"distance-oracle:{side_name}"))
    results.append(check_sum_metric_axioms(sp, axiom_count, name="sum-metric"))
    results.append(check_clopen_sides(sp, clopen_count, name="clopen-sides"))
    results.append(check_epsilon_code(sp, 300, name="epsilon-code"))
    # certificates need exact ambient point distances, i.e. tail hints on the
    # branch points; sides without them are not in the certified catalog
    if all(rep.kind == "identity" and rep.tree.hint is not None
           for rep in (sp.part_a, sp.part_c)):
        certified = certified_ball_list(sp, per_side=4)
        results.append(check_extension_certificates(sp, certified, name="extension"))
    results.append(check_two_sided_continuity(sp, per_side=4, name="continuity"))
    results.append(check_interleaved_table(built, name="interleave"))
    results.append(check_code_matches_sum(built, matched=min(8, bounds["table_size"]),
                                          name="code-vs-sum"))
    for side_name, rep in (("a", sp.part_a), ("c", sp.part_c)):
        if rep.closure is not None:
            rng = random.Random(seed)
            alphas = [rep.map_point(b) for b in side_sample_branches(rep, 4)]
            results.append(check_witness_matrix(rep.closure, alphas, depth=6,
                                                rng=rng, perturbations=10,
                                                name=f"witness:{side_name}"))
    return sorted(results, key=lambda r: r.name)
