import pytest

from clopen.baire import Exact, distance
from clopen.coding import encode
from clopen.trees import (ChildSearchExhausted, DensePointFamily,
                          DownwardClosureViolation, EmptyTreeViolation,
                          InsufficientDensePoints, PrunedTree, PrunednessViolation,
                          constant_tree, cylinder_union_tree, dense_distance_le,
                          dense_distance_lt, dense_equal, dense_pn_distance,
                          enumerate_distinct, first_disagreement, full_baire_tree,
                          full_cantor_tree, iter_admissible, validate_pruned)


def brute_force_leftmost(tree, stem, depth):
    """Independent oracle: extend by scanning children one position at a time."""
    vals = list(stem)
    while len(vals) < depth:
        for k in range(tree.child_bound(tuple(vals)) + 1):
            if tree.admits(tuple(vals) + (k,)):
                vals.append(k)
                break
        else:
            raise AssertionError("oracle found no child")
    return tuple(vals)


def validated(tree, depth=4):
    validate_pruned(tree, depth)
    return tree


def test_validate_full_tree():
    report = validate_pruned(full_baire_tree(), 5)
    assert report.admissible == report.inspected == 5


def test_validate_constant_tree():
    tree = constant_tree(3)
    report = validate_pruned(tree, 4)
    # oracle: admissible nodes are exactly the all-3 stems of length < 4
    assert report.admissible == 4
    assert tree.depth_validated == 4


def test_root_only_tree_is_not_pruned():
    tree = PrunedTree(lambda u: u == (), lambda u: 3)
    with pytest.raises(PrunednessViolation) as exc:
        validate_pruned(tree, 3)
    assert exc.value.node == ()


def test_empty_tree_rejected():
    with pytest.raises(EmptyTreeViolation):
        validate_pruned(PrunedTree(lambda u: False, lambda u: 0), 2)


def test_downward_closure_violation():
    # the zero spine is fine, but (1,0) hangs under the inadmissible (1)
    def admits(u):
        return all(x == 0 for x in u) or (len(u) >= 2 and u[0] == 1)

    tree = PrunedTree(admits, lambda u: 1)
    with pytest.raises(DownwardClosureViolation) as exc:
        validate_pruned(tree, 3)
    assert exc.value.node == (1,)
    assert exc.value.k == 0


def test_leftmost_full_tree():
    fam = DensePointFamily(validated(full_baire_tree()))
    assert fam.leftmost(0).prefix(5) == (0, 0, 0, 0, 0)
    assert fam.leftmost(encode((7,))).prefix(5) == (7, 0, 0, 0, 0)


def test_leftmost_constant_tree_matches_oracle():
    tree = validated(constant_tree(3))
    fam = DensePointFamily(tree)
    assert fam.leftmost(0).prefix(6) == brute_force_leftmost(tree, (), 6)
    assert fam.leftmost(0).prefix(6) == (3,) * 6


def test_leftmost_inadmissible_reduces_to_base():
    tree = validated(constant_tree(3))
    fam = DensePointFamily(tree)
    assert fam.base_index == 0
    assert fam.leftmost(encode((1,))) is fam.leftmost(0)


def test_leftmost_memoizes():
    fam = DensePointFamily(validated(full_cantor_tree()))
    assert fam.leftmost(5) is fam.leftmost(5)


def test_child_search_exhausted_beyond_contract():
    # caller asserts prunedness that does not actually hold
    tree = PrunedTree(lambda u: all(x == 5 for x in u), lambda u: 0)
    tree.depth_validated = 1
    fam = DensePointFamily(tree)
    with pytest.raises(ChildSearchExhausted):
        fam.leftmost(0)(0)


def test_dense_equal_cases():
    fam = DensePointFamily(validated(full_cantor_tree()))
    assert dense_equal(fam, encode((0,)), encode((0, 0)))
    assert not dense_equal(fam, encode((0,)), encode((1,)))
    for s in (0, 3, 9, 17):
        assert dense_equal(fam, s, s)


def test_dense_equal_mixed_admissibility():
    fam = DensePointFamily(validated(constant_tree(2)))
    bad = encode((5,))
    assert dense_equal(fam, bad, 0)
    assert dense_equal(fam, bad, encode((7, 7)))
    assert dense_equal(fam, bad, encode((2,)))


def test_first_disagreement_matches_scan():
    fam = DensePointFamily(validated(full_cantor_tree()))
    s, t = encode((0, 1, 1)), encode((0, 1, 0, 1))
    i = first_disagreement(fam, s, t)
    a, b = fam.leftmost(s), fam.leftmost(t)
    assert a(i) != b(i)
    assert all(a(j) == b(j) for j in range(i))


def test_dense_distance_relations():
    fam = DensePointFamily(validated(full_cantor_tree()))
    s, t = encode((0,)), encode((1,))
    # equal points and a positive threshold
    assert dense_distance_lt(fam, s, encode((0, 0)), 1, 0)
    # distance 1 against threshold 1/2
    assert not dense_distance_lt(fam, s, t, 1, 1)
    assert dense_distance_le(fam, s, t, 1, 0)
    # nothing is below zero
    assert not dense_distance_lt(fam, s, t, 0, 0)
    assert not dense_distance_lt(fam, s, s, 0, 3)
    # but distance zero is allowed by a zero threshold
    assert dense_distance_le(fam, s, s, 0, 3)


def test_dense_distance_agrees_with_budget_oracle():
    for tree in (full_cantor_tree(), cylinder_union_tree([[0, 1], [1]], child_floor=1)):
        fam = DensePointFamily(validated(tree))
        for s in range(60):
            for t in range(60):
                d = dense_pn_distance(fam, s, t)
                res = distance(fam.leftmost(s), fam.leftmost(t), 128)
                if isinstance(res, Exact):
                    assert res.value == d
                else:
                    assert d < res.threshold


def test_leftmost_stays_inside_neighborhood_and_tree():
    tree = validated(cylinder_union_tree([[0, 0], [1, 1]], child_floor=1))
    fam = DensePointFamily(tree)
    for u in iter_admissible(tree, 4):
        point = fam.leftmost(encode(u))
        assert point.prefix(len(u)) == u
        for n in range(9):
            assert tree.admits(point.prefix(n))


def test_enumerate_distinct_orders_and_dedupes():
    fam = DensePointFamily(validated(full_cantor_tree()))
    found = enumerate_distinct(fam, 8, cap=2000)
    assert found == sorted(found)
    for i, s in enumerate(found):
        for t in found[:i]:
            assert not dense_equal(fam, s, t)


def test_enumerate_distinct_insufficient():
    fam = DensePointFamily(validated(constant_tree(1)))
    with pytest.raises(InsufficientDensePoints):
        enumerate_distinct(fam, 2, cap=500)


def test_tree_error_carries_code():
    err = PrunednessViolation((1, 2))
    assert err.code == encode((1, 2))


def test_dense_metric_axioms_exhaustive():
    from clopen.codes import check_metric_axioms

    fam = DensePointFamily(validated(full_cantor_tree()))
    check_metric_axioms(lambda i, j: dense_pn_distance(fam, i, j), 200,
                        equal=lambda i, j: dense_equal(fam, i, j))
