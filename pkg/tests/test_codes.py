from fractions import Fraction

import pytest

from clopen.baire import BairePoint
from clopen.codes import (CauchyRateViolation, CompletionPoint, MalformedCode,
                          MetricAxiomViolation, RationalMetricTable, catalog_table,
                          check_metric_axioms, completion_distance,
                          constant_completion, decode_metric, encode_metric,
                          interleave, parse_code_file, pipeline, render_code_file,
                          validate_metric_table)
from clopen.coding import quad_code
from clopen.instances import build_instance, builtin_instance
from clopen.remetrize import sum_distance
from clopen.trees import dense_pn_distance


def representations(value, limit):
    """All (m, n) with m/(n+1) == value and m, n <= limit."""
    out = []
    for n in range(limit + 1):
        m = value * (n + 1)
        if m.denominator == 1 and 0 <= m.numerator <= limit:
            out.append((m.numerator, n))
    return out


def test_discrete_code_bits_follow_the_formula():
    code = encode_metric(catalog_table("discrete", k=4))
    for i in range(4):
        for j in range(4):
            for m in range(8):
                for n in range(8):
                    want = (i != j and m == n + 1) or (i == j and m == 0)
                    assert code.bit(i, j, m, n) == (1 if want else 0)


def test_zero_distance_is_witnessed_everywhere():
    code = encode_metric(catalog_table("discrete"))
    assert code.point(quad_code(0, 0, 0, 5)) == 1


def test_non_quadruple_positions_are_zero():
    code = encode_metric(catalog_table("discrete"))
    for t in (0, 1, 2, 3, 17):
        assert code.point(t) == 0


def test_representation_completeness():
    table = catalog_table("harmonic", k=6)
    code = encode_metric(table)
    for i in range(6):
        for j in range(6):
            for m, n in representations(table.dist(i, j), 40):
                assert code.bit(i, j, m, n) == 1


def test_decode_scan_order_and_round_trip():
    table = catalog_table("discrete", k=5)
    code = encode_metric(table)
    assert decode_metric(code, 0, 1) == 1  # first witness is (m, n) = (1, 0)
    assert decode_metric(code, 2, 2) == 0
    for i in range(5):
        for j in range(5):
            assert decode_metric(code, i, j) == table.dist(i, j)


def test_decode_strict_consistency():
    table = catalog_table("harmonic", k=5)
    code = encode_metric(table)
    for i in range(5):
        for j in range(5):
            assert decode_metric(code, i, j, window=48, strict=True) == table.dist(i, j)


def test_malformed_codes():
    witnesses = {quad_code(0, 1, 1, 0), quad_code(0, 1, 1, 1)}  # claims 1 and 1/2
    point = BairePoint(lambda t: 1 if t in witnesses else 0)
    with pytest.raises(MalformedCode):
        decode_metric(point, 0, 1, window=8, strict=True)
    empty = BairePoint(lambda t: 0)
    with pytest.raises(MalformedCode):
        decode_metric(empty, 0, 0, window=8)


def test_metric_axiom_violations_are_caught():
    bad = RationalMetricTable(
        dist=lambda i, j: Fraction(0) if i == j else Fraction(abs(i - j), 1),
        K=8, tail_rule="bad", label="bad")
    # one stretched distance breaks the triangle through any third point
    def broken(i, j):
        if i == j:
            return Fraction(0)
        return Fraction(3) if {i, j} == {0, 2} else Fraction(1)

    with pytest.raises(MetricAxiomViolation):
        check_metric_axioms(broken, 8)
    validate_metric_table(bad)  # |i - j| is a true metric


def test_completion_of_constant_sequences():
    table = catalog_table("discrete", k=6)
    lo, hi = completion_distance(table, constant_completion(0), constant_completion(1), 4)
    assert lo <= 1 <= hi
    assert hi - lo <= Fraction(1, 2 ** 4)
    lo, hi = completion_distance(table, constant_completion(2), constant_completion(2), 6)
    assert lo <= 0 <= hi


def test_completion_of_converging_sequence():
    table = catalog_table("harmonic", k=64)
    # k_r = 2^r - 1 heads toward the limit point of the harmonic enumeration
    point = CompletionPoint(index=lambda r: 2 ** min(r, 5) - 1)
    lo, hi = completion_distance(table, point, constant_completion(0), 2)
    true_gap = table.dist(31, 0)
    assert lo <= true_gap <= hi


def test_cauchy_rate_violation():
    table = catalog_table("discrete", k=4)
    hopping = CompletionPoint(index=lambda r: r % 2)
    with pytest.raises(CauchyRateViolation):
        completion_distance(table, hopping, constant_completion(0), 3)


def _families(name="cantor-split-0"):
    return build_instance(builtin_instance(name)).families()


def test_interleave_layout():
    fam_a, fam_c = _families()
    table = interleave(fam_a, fam_c, 12)
    for i in range(6):
        for j in range(6):
            assert table.dist(2 * i, 2 * j + 1) == 2
            assert table.dist(2 * j + 1, 2 * i) == 2
    # even-even distances are the set side's branch distances
    from clopen.trees import enumerate_distinct
    codes = enumerate_distinct(fam_a, 3)
    assert table.dist(0, 2) == dense_pn_distance(fam_a, codes[0], codes[1])
    validate_metric_table(table)


def test_interleave_extends_past_serialized_prefix():
    fam_a, fam_c = _families()
    table = interleave(fam_a, fam_c, 6)
    assert table.dist(10, 12) != 0  # indices beyond K come from the tail rule
    assert table.dist(10, 11) == 2


def test_pipeline_determinism_and_error_aggregation():
    fam_a, fam_c = _families()
    sparse_a, sparse_c = _families("witness-first-bit")
    jobs = [
        ("good", fam_a, fam_c, 12),
        ("starved", sparse_a, sparse_c, 40),  # far more points than the tree offers
    ]
    result = pipeline(jobs, cap=2000)
    assert set(result.codes) == {"good"}
    assert "starved" in result.errors
    assert "InsufficientDensePoints" in result.errors["starved"]
    text1 = render_code_file(result.codes["good"], "good")
    text2 = render_code_file(pipeline(jobs, cap=2000).codes["good"], "good")
    assert text1 == text2


def test_pipeline_empty_batch():
    result = pipeline([])
    assert result.codes == {} and result.errors == {}


def test_code_file_round_trip():
    fam_a, fam_c = _families()
    table = interleave(fam_a, fam_c, 8, label="roundtrip")
    code = encode_metric(table)
    text = render_code_file(code, "roundtrip")
    inst_id, k, entries, tail = parse_code_file(text)
    assert inst_id == "roundtrip" and k == 8 and tail == "interleave:roundtrip"
    for (i, j), value in entries.items():
        assert table.dist(i, j) == value
    assert len(entries) == 8 * 9 // 2


def test_interleaved_code_matches_sum_space():
    built = build_instance(builtin_instance("cantor-split-00"))
    fam_a, fam_c = built.families()
    from clopen.trees import enumerate_distinct
    codes_a = enumerate_distinct(fam_a, 6)
    codes_c = enumerate_distinct(fam_c, 6)
    table = interleave(fam_a, fam_c, 12)
    for u in range(12):
        for v in range(12):
            tag_u = (u % 2, (codes_a if u % 2 == 0 else codes_c)[u // 2])
            tag_v = (v % 2, (codes_a if v % 2 == 0 else codes_c)[v // 2])
            assert table.dist(u, v) == sum_distance(built.sum_space, tag_u, tag_v)
