"""Bit-exact codes of rational-valued metrics on the naturals.

A metric on the naturals with rational values is coded by the 0/1 point that
holds a 1 exactly at the positions coding a quadruple (i, j, m, n) with
d(i, j) = m/(n+1) -- at every representation of the value, not just the
reduced one.  Completed, such a code names a complete separable metric
space; the summed space of a re-metrized instance arrives here through the
interleaving of its two dense families.

Files carry the reduced-fraction table for indices below K plus a tail-rule
descriptor rather than raw code bits: the code is infinite and redundant,
the table is the minimal bit-exact carrier, and any individual bit stays
derivable on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .baire import BairePoint
from .coding import quad_code
from .trees import DensePointFamily, InsufficientDensePoints, enumerate_distinct


class MalformedCode(Exception):
    pass


class CauchyRateViolation(Exception):
    def __init__(self, r: int):
        self.r = r
        super().__init__(f"rate certificate fails at index {r}")


class MetricAxiomViolation(Exception):
    def __init__(self, kind: str, where: tuple[int, ...], detail: str = ""):
        self.kind, self.where = kind, where
        super().__init__(f"{kind} fails at {where} {detail}".rstrip())


@dataclass
class RationalMetricTable:
    """A rational-valued metric given as an oracle with a serialized prefix.

    dist must be total on all index pairs; the first K indices are the
    serialized, axiom-validated prefix and tail_rule names how the rest is
    generated.
    """

    dist: Callable[[int, int], Fraction]
    K: int
    tail_rule: str
    label: str = "table"

    def rows(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, self.dist(i, j)) for i in range(self.K) for j in range(i, self.K)]


def check_metric_axioms(dist: Callable[[int, int], Fraction], count: int,
                        equal: Optional[Callable[[int, int], bool]] = None) -> None:
    """Exhaustively verify the metric axioms on all index triples below count.

    equal decides which index pairs name the same point (identity on indices
    by default); identity of indiscernibles is checked relative to it.  The
    triangle inequality runs over integer cross-products, so the whole check
    is exact.
    """
    if equal is None:
        equal = lambda i, j: i == j
    num = [[0] * count for _ in range(count)]
    den = [[1] * count for _ in range(count)]
    for i in range(count):
        for j in range(i, count):
            d = dist(i, j)
            if d < 0:
                raise MetricAxiomViolation("nonnegativity", (i, j), f"value {d}")
            if (d == 0) != equal(i, j):
                raise MetricAxiomViolation("identity-of-indiscernibles", (i, j),
                                           f"value {d}")
            if i != j and dist(j, i) != d:
                raise MetricAxiomViolation("symmetry", (i, j))
            num[i][j] = num[j][i] = d.numerator
            den[i][j] = den[j][i] = d.denominator
    _check_triangle(num, den, count)


def _check_triangle(num: list[list[int]], den: list[list[int]], count: int) -> None:
    max_num = max(max(row) for row in num)
    max_den = max(max(row) for row in den)
    # d(i,k) <= d(i,j) + d(j,k), cross-multiplied to integers
    if max_num <= 1 << 10 and max_den <= 1 << 15 and count >= 8:
        import numpy as np

        p = np.array(num, dtype=np.int64)
        q = np.array(den, dtype=np.int64)
        lhs = p[:, None, :] * q[:, :, None] * q[None, :, :]
        rhs = (p[:, :, None] * q[None, :, :] + p[None, :, :] * q[:, :, None]) * q[:, None, :]
        bad = np.argwhere(lhs > rhs)
        if len(bad):
            i, j, k = (int(v) for v in bad[0])
            raise MetricAxiomViolation("triangle", (i, k), f"via {j}")
        return
    for i in range(count):
        for j in range(count):
            for k in range(count):
                lhs = num[i][k] * den[i][j] * den[j][k]
                rhs = (num[i][j] * den[j][k] + num[j][k] * den[i][j]) * den[i][k]
                if lhs > rhs:
                    raise MetricAxiomViolation("triangle", (i, k), f"via {j}")


def validate_metric_table(table: RationalMetricTable,
                          equal: Optional[Callable[[int, int], bool]] = None) -> None:
    check_metric_axioms(table.dist, table.K, equal=equal)


@dataclass
class SpaceCode:
    """The 0/1 point coding a rational metric, kept with its source table."""

    point: BairePoint
    table: RationalMetricTable

    def bit(self, i: int, j: int, m: int, n: int) -> int:
        return self.point(quad_code(i, j, m, n))


def encode_metric(table: RationalMetricTable) -> SpaceCode:
    """The lazily evaluated code point of a metric table.

    Position quad_code(i, j, m, n) is 1 exactly when d(i, j) = m/(n+1);
    positions not coding a quadruple are 0.
    """
    from .coding import decode

    dist = table.dist

    def rule(t: int) -> int:
        u = decode(t)
        if len(u) != 4:
            return 0
        i, j, m, n = u
        return 1 if dist(i, j) == Fraction(m, n + 1) else 0

    return SpaceCode(point=BairePoint(rule, label=f"code[{table.label}]"), table=table)


def decode_metric(code: SpaceCode | BairePoint, i: int, j: int,
                  window: int = 64, strict: bool = False) -> Fraction:
    """Read d(i, j) back off a code point.

    Scans the quadruple positions for (i, j) in increasing (m, n) order until
    a set bit appears.  In strict mode the whole window is swept and any
    second, inconsistent witness raises MalformedCode; no witness within the
    window is malformed either way.
    """
    point = code.point if isinstance(code, SpaceCode) else code
    found: Optional[Fraction] = None
    for m in range(window + 1):
        for n in range(window + 1):
            if point(quad_code(i, j, m, n)):
                value = Fraction(m, n + 1)
                if found is None:
                    found = value
                    if not strict:
                        return found
                elif value != found:
                    raise MalformedCode(
                        f"pair ({i},{j}) witnesses both {found} and {value}")
    if found is None:
        raise MalformedCode(f"no value witnessed for pair ({i},{j}) within window {window}")
    return found


@dataclass
class CompletionPoint:
    """A point of the completion: indices converging at the standard rate."""

    index: Callable[[int], int]
    label: str = "completion-point"


def constant_completion(i: int) -> CompletionPoint:
    return CompletionPoint(index=lambda r: i, label=f"const-{i}")


def certify_cauchy(table: RationalMetricTable, p: CompletionPoint, depth: int) -> None:
    """Check the pairwise rate d(k_r, k_m) <= 2^-r for r < m <= depth.

    The pairwise form (not just consecutive steps) is what bounds the
    distance to the limit by 2^-r, which the completion interval relies on.
    """
    idx = [p.index(r) for r in range(depth + 1)]
    for r in range(depth + 1):
        bound = Fraction(1, 2 ** r)
        for m in range(r + 1, depth + 1):
            if table.dist(idx[r], idx[m]) > bound:
                raise CauchyRateViolation(r)


def completion_distance(table: RationalMetricTable, p: CompletionPoint,
                        q: CompletionPoint, precision: int) -> tuple[Fraction, Fraction]:
    """An interval of width 2^-precision containing the completed distance."""
    r = precision + 2
    certify_cauchy(table, p, r)
    certify_cauchy(table, q, r)
    center = table.dist(p.index(r), q.index(r))
    slack = Fraction(1, 2 ** (r - 1))
    return (center - slack, center + slack)


def interleave(fam_a: DensePointFamily, fam_c: DensePointFamily, count: int,
               cap: int = 100_000, label: str = "interleaved") -> RationalMetricTable:
    """The summed space's metric on the interleaved distinct dense points.

    Even indices enumerate the set side, odd indices the complement side,
    both in increasing code order with duplicates removed, so all terms are
    distinct; the cross distance is 2.  The table extends past its serialized
    prefix by continuing the same enumerations on demand.
    """
    from .trees import dense_pn_distance

    sides = (fam_a, fam_c)
    codes: tuple[list[int], list[int]] = (
        enumerate_distinct(fam_a, (count + 1) // 2, cap=cap),
        enumerate_distinct(fam_c, count // 2, cap=cap),
    )

    def side_code(parity: int, idx: int) -> int:
        known = codes[parity]
        fam = sides[parity]
        while len(known) <= idx:
            start = known[-1] + 1 if known else 0
            from .trees import dense_equal
            for s in range(start, cap):
                if fam.admissible(s) and not any(dense_equal(fam, s, t) for t in known):
                    known.append(s)
                    break
            else:
                raise InsufficientDensePoints(len(known), idx + 1, cap)
        return known[idx]

    def dist(u: int, v: int) -> Fraction:
        pu, pv = u % 2, v % 2
        if pu != pv:
            return Fraction(2)
        return dense_pn_distance(sides[pu], side_code(pu, u // 2), side_code(pv, v // 2))

    return RationalMetricTable(dist=dist, K=count, tail_rule=f"interleave:{label}",
                               label=label)


@dataclass
class PipelineResult:
    codes: dict[str, SpaceCode] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)


def pipeline(jobs: Iterable[tuple[str, DensePointFamily, DensePointFamily, int]],
             cap: int = 100_000) -> PipelineResult:
    """Interleave and encode each (id, set family, complement family, K) job.

    Per-job failures are collected, not raised, so one bad instance cannot
    poison a batch; identical inputs always produce bit-identical codes.
    """
    result = PipelineResult()
    for job_id, fam_a, fam_c, count in jobs:
        try:
            table = interleave(fam_a, fam_c, count, cap=cap, label=job_id)
            validate_metric_table(table)
            result.codes[job_id] = encode_metric(table)
        except Exception as exc:  # noqa: BLE001 - aggregated by contract
            result.errors[job_id] = f"{type(exc).__name__}: {exc}"
    return result


# --- file format --------------------------------------------------------------

FORMAT_LINE = "format space-code/1"


def render_code_file(code: SpaceCode, instance_id: str) -> str:
    """The canonical textual form of a code: header, reduced table, tail rule."""
    table = code.table
    lines = [FORMAT_LINE, f"instance {instance_id}", f"K {table.K}"]
    for i, j, value in table.rows():
        lines.append(f"{i} {j} {value.numerator}/{value.denominator}")
    lines.append(f"tail {table.tail_rule}")
    return "\n".join(lines) + "\n"


def parse_code_file(text: str) -> tuple[str, int, dict[tuple[int, int], Fraction], str]:
    """Parse a rendered code file back into (instance id, K, table, tail rule)."""
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_LINE:
        raise MalformedCode("missing or unknown format line")
    instance_id = lines[1].removeprefix("instance ").strip()
    k = int(lines[2].removeprefix("K ").strip())
    entries: dict[tuple[int, int], Fraction] = {}
    tail = ""
    for line in lines[3:]:
        if line.startswith("tail "):
            tail = line.removeprefix("tail ").strip()
            continue
        i_s, j_s, frac = line.split()
        p_s, q_s = frac.split("/")
        entries[(int(i_s), int(j_s))] = Fraction(int(p_s), int(q_s))
    return instance_id, k, entries, tail


def catalog_table(name: str, k: int = 8) -> RationalMetricTable:
    """Small built-in tables used by tests and the malformed-code paths."""
    if name == "discrete":
        return RationalMetricTable(
            dist=lambda i, j: Fraction(0) if i == j else Fraction(1),
            K=k, tail_rule="discrete", label="discrete")
    if name == "harmonic":
        # d(i, j) = |1/(i+1) - 1/(j+1)|: the convergent sequence with its limit gap
        return RationalMetricTable(
            dist=lambda i, j: abs(Fraction(1, i + 1) - Fraction(1, j + 1)),
            K=k, tail_rule="harmonic", label="harmonic")
    raise KeyError(name)
