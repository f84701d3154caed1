"""Instance files: the JSON schema, its parser, and the built-in catalog.

An instance names an ambient sequence space, a set descriptor (a pair of
trees, a pair of least-witness matrices, or a catalog entry), and the bounds
that make every search total.  Parsing is strict: unknown kinds, missing
fields, non-positive bounds and malformed predicates are position-annotated
errors, and a parsed instance prints back to a canonical text that reparses
to an equal value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from . import dsl
from .baire import exact_distance
from .dsl import ParseError
from .remetrize import (SpacePresentation, SumSpace, identity_representation,
                        new_presentation, witness_representation)
from .trees import (DensePointFamily, PrunedTree, constant_tree,
                    cylinder_union_tree, full_baire_tree, full_cantor_tree,
                    validate_pruned)
from .witness import MATRIX_CATALOG, Pi02Matrix


class UnknownCatalogName(Exception):
    def __init__(self, name: str, kind: str = "catalog"):
        self.name = name
        super().__init__(f"unknown {kind} name {name!r}")


DEFAULT_BOUNDS = {
    "depth": 4,
    "budget": 256,
    "witness_bound": 64,
    "enumeration_cap": 100_000,
    "table_size": 32,
}


@dataclass
class InstanceFile:
    id: str
    ambient: dict[str, Any]
    set_desc: dict[str, Any]
    bounds: dict[str, int]
    expected: Optional[dict[str, Any]] = None

    def canonical_text(self) -> str:
        doc: dict[str, Any] = {
            "format": "instance/1",
            "id": self.id,
            "ambient": self.ambient,
            "set": self.set_desc,
            "bounds": self.bounds,
        }
        if self.expected is not None:
            doc["expected"] = self.expected
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


_TREE_RULES = {"full", "cantor", "constant", "cylinders", "dsl", "explicit", "empty"}
_SET_KINDS = {"tree-pair", "pi02-pair", "catalog"}
_AMBIENT_KINDS = {"cantor", "baire", "tree"}


def _err(msg: str) -> ParseError:
    return ParseError(0, 0, msg)


def _check_tree_desc(desc: Any, path: str) -> None:
    if not isinstance(desc, dict) or "rule" not in desc:
        raise _err(f"{path}: a tree descriptor needs a 'rule' field")
    rule = desc["rule"]
    if rule not in _TREE_RULES:
        raise UnknownCatalogName(str(rule), kind="tree rule")
    if rule == "constant" and not isinstance(desc.get("value"), int):
        raise _err(f"{path}: constant trees need an integer 'value'")
    if rule == "cylinders":
        prefixes = desc.get("prefixes")
        ok = (isinstance(prefixes, list) and prefixes
              and all(isinstance(p, list) and all(isinstance(x, int) and x >= 0 for x in p)
                      for p in prefixes))
        if not ok:
            raise _err(f"{path}: cylinder trees need a nonempty list of natural prefixes")
        floor = desc.get("child_bound", 0)
        if not isinstance(floor, int) or floor < 0:
            raise _err(f"{path}: 'child_bound' must be a natural number")
    if rule == "dsl":
        if not isinstance(desc.get("node"), str):
            raise _err(f"{path}: dsl trees need a 'node' predicate")
        dsl.parse_predicate(desc["node"])
        if not isinstance(desc.get("child_bound"), int) or desc["child_bound"] < 0:
            raise _err(f"{path}: dsl trees need a natural 'child_bound'")
    if rule == "explicit":
        if not isinstance(desc.get("nodes"), list) or not isinstance(desc.get("depth"), int):
            raise _err(f"{path}: explicit trees need 'nodes' and 'depth'")
        _check_tree_desc(desc.get("continuation"), f"{path}.continuation")


def _check_matrix_desc(desc: Any, path: str) -> None:
    if not isinstance(desc, dict) or "rule" not in desc:
        raise _err(f"{path}: a matrix descriptor needs a 'rule' field")
    rule = desc["rule"]
    if rule == "catalog":
        if desc.get("name") not in MATRIX_CATALOG:
            raise UnknownCatalogName(str(desc.get("name")), kind="matrix")
        return
    if rule != "dsl":
        raise UnknownCatalogName(str(rule), kind="matrix rule")
    for fld in ("r", "use_bound"):
        if not isinstance(desc.get(fld), str):
            raise _err(f"{path}: dsl matrices need a {fld!r} expression")
    dsl.parse_predicate(desc["r"])
    dsl.parse_arith(desc["use_bound"])
    budget = desc.get("per_n_budget")
    if not isinstance(budget, int) or budget < 0:
        raise _err(f"{path}: dsl matrices need a natural 'per_n_budget'")


def parse_instance(text: str) -> InstanceFile:
    """Parse and validate an instance document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from None
    if not isinstance(doc, dict):
        raise _err("instance document must be a JSON object")
    if doc.get("format") != "instance/1":
        raise _err(f"unknown format {doc.get('format')!r}")
    inst_id = doc.get("id")
    if not isinstance(inst_id, str) or not inst_id:
        raise _err("instance needs a nonempty string 'id'")

    ambient = doc.get("ambient")
    if not isinstance(ambient, dict) or ambient.get("kind") not in _AMBIENT_KINDS:
        raise UnknownCatalogName(str((ambient or {}).get("kind")), kind="ambient space")
    if ambient["kind"] == "tree":
        _check_tree_desc(ambient.get("tree"), "ambient.tree")

    set_desc = doc.get("set")
    if not isinstance(set_desc, dict) or set_desc.get("kind") not in _SET_KINDS:
        raise _err("set descriptor must have kind tree-pair, pi02-pair or catalog")
    if set_desc["kind"] == "tree-pair":
        _check_tree_desc(set_desc.get("a"), "set.a")
        _check_tree_desc(set_desc.get("complement"), "set.complement")
    elif set_desc["kind"] == "pi02-pair":
        _check_matrix_desc(set_desc.get("a"), "set.a")
        _check_matrix_desc(set_desc.get("complement"), "set.complement")
        ab = set_desc.get("alphabet_bound", 1)
        if not isinstance(ab, int) or ab < 0:
            raise _err("set.alphabet_bound must be a natural number")
    else:
        if set_desc.get("name") not in CATALOG:
            raise UnknownCatalogName(str(set_desc.get("name")))

    bounds = dict(DEFAULT_BOUNDS)
    for key, value in (doc.get("bounds") or {}).items():
        if key not in DEFAULT_BOUNDS:
            raise _err(f"unknown bound {key!r}")
        if not isinstance(value, int) or value <= 0:
            raise _err(f"bound {key!r} must be a positive integer")
        bounds[key] = value

    expected = doc.get("expected")
    if expected is not None and not isinstance(expected, dict):
        raise _err("'expected' must be an object when present")
    return InstanceFile(id=inst_id, ambient=ambient, set_desc=set_desc,
                        bounds=bounds, expected=expected)


def build_tree(desc: dict[str, Any], label: str = "") -> PrunedTree:
    rule = desc["rule"]
    if rule == "full":
        return full_baire_tree()
    if rule == "cantor":
        return full_cantor_tree()
    if rule == "constant":
        return constant_tree(desc["value"])
    if rule == "cylinders":
        return cylinder_union_tree(desc["prefixes"], label=label or "cylinders",
                                   child_floor=desc.get("child_bound", 0))
    if rule == "empty":
        return PrunedTree(lambda u: False, lambda u: 0, label=label or "empty")
    if rule == "dsl":
        return dsl_tree(desc["node"], desc["child_bound"], label=label or "dsl")
    if rule == "explicit":
        return explicit_tree(desc["nodes"], desc["depth"],
                             build_tree(desc["continuation"]), label=label or "explicit")
    raise UnknownCatalogName(str(rule), kind="tree rule")


def dsl_tree(node_src: str, child_bound: int, label: str = "dsl") -> PrunedTree:
    """A tree whose node predicate is a parsed expression over (s, len)."""
    expr = dsl.parse_predicate(node_src)

    def admits(u: tuple[int, ...]) -> bool:
        env = {"s": (lambda i: u[i] if 0 <= i < len(u) else 0), "len": len(u)}
        return bool(dsl.evaluate(expr, env))

    return PrunedTree(admits, lambda u: child_bound, label=label)


def explicit_tree(nodes: list[int], depth: int, continuation: PrunedTree,
                  label: str = "explicit") -> PrunedTree:
    """Admissible codes listed up to a depth, a catalog rule beyond it.

    Past the listed depth a stem is admitted when its listed prefix is and
    the continuation tree admits the suffix, so each listed leaf grows a copy
    of the continuation under it.
    """
    from .coding import decode

    listed = {decode(c) for c in nodes}

    def admits(u: tuple[int, ...]) -> bool:
        if len(u) <= depth:
            return u in listed
        return u[:depth] in listed and continuation.admits(u[depth:])

    def child_bound(u: tuple[int, ...]) -> int:
        if len(u) >= depth:
            return continuation.child_bound(u[depth:])
        best = 0
        for v in listed:
            if len(v) > len(u) and v[: len(u)] == u:
                best = max(best, v[len(u)])
        return best

    return PrunedTree(admits, child_bound, label=label)


def point_from_descriptor(desc: dict[str, Any]):
    """A point from its wire form.

    Eventually periodic points travel as {"pre": [...], "period": [...]};
    rule-based points as {"rule": "<arithmetic expression in n>"}.
    """
    from .baire import BairePoint, eventually_periodic

    if "rule" in desc:
        expr = dsl.parse_arith(desc["rule"])
        return BairePoint(lambda n: int(dsl.evaluate(expr, {"n": n})), label="dsl-point")
    pre, period = desc.get("pre", []), desc.get("period")
    ok = (isinstance(pre, list) and isinstance(period, list) and period
          and all(isinstance(x, int) and x >= 0 for x in list(pre) + list(period)))
    if not ok:
        raise _err("a point descriptor needs 'rule' or 'pre'/'period' lists")
    return eventually_periodic(pre, period)


def point_descriptor(point) -> dict[str, Any]:
    """The wire form of an eventually periodic point."""
    if point.tail_hint is None:
        raise ValueError("only points with a periodicity promise serialize")
    pre_len, per_len = point.tail_hint
    return {"pre": list(point.prefix(pre_len)),
            "period": [point(pre_len + i) for i in range(per_len)]}


def build_matrix(desc: dict[str, Any]) -> Pi02Matrix:
    if desc["rule"] == "catalog":
        return MATRIX_CATALOG[desc["name"]]()
    r_expr = dsl.parse_predicate(desc["r"])
    use_expr = dsl.parse_arith(desc["use_bound"])

    def r(a, n: int, m: int) -> bool:
        return bool(dsl.evaluate(r_expr, {"a": a, "n": n, "m": m}))

    def use_bound(n: int, m: int) -> int:
        return int(dsl.evaluate(use_expr, {"n": n, "m": m}))

    return Pi02Matrix(r=r, use_bound=use_bound, per_n_budget=desc["per_n_budget"],
                      label="dsl-matrix")


def ambient_presentation(fam: DensePointFamily, name: str) -> SpacePresentation:
    """The ambient space of an instance: its dense family with the rescaled
    branch metric and exact point-to-dense distances."""
    from .trees import dense_pn_distance

    def dist(i: int, j: int) -> Fraction:
        d = dense_pn_distance(fam, i, j)
        return d / (1 + d)

    def dist_point(x, i) -> Fraction:
        d = exact_distance(x, fam.leftmost(i))
        return d / (1 + d)

    return SpacePresentation(name=name, point=fam.leftmost, dist=dist,
                             dist_point=dist_point)


@dataclass
class BuiltInstance:
    """All runtime objects of one instance, ready for the pipelines."""

    file: InstanceFile
    ambient_fam: DensePointFamily
    ambient: SpacePresentation
    sum_space: Optional[SumSpace]
    degenerate: Optional[str] = None

    def presentation(self) -> SpacePresentation:
        """The re-metrized presentation; the ambient one on degenerate input."""
        if self.sum_space is None:
            return self.ambient
        return new_presentation(self.sum_space)

    def families(self) -> tuple[DensePointFamily, DensePointFamily]:
        if self.sum_space is None:
            raise ValueError(f"degenerate instance {self.file.id} has no side families")
        return self.sum_space.part_a.fam, self.sum_space.part_c.fam


def _ambient_tree(desc: dict[str, Any]) -> PrunedTree:
    if desc["kind"] == "cantor":
        return full_cantor_tree()
    if desc["kind"] == "baire":
        return full_baire_tree()
    return build_tree(desc["tree"], label="ambient")


def build_instance(inst: InstanceFile) -> BuiltInstance:
    """Construct and validate every runtime object the instance declares."""
    if inst.set_desc["kind"] == "catalog":
        return build_instance(builtin_instance(inst.set_desc["name"]))
    depth = inst.bounds["depth"]
    ambient_tree = _ambient_tree(inst.ambient)
    validate_pruned(ambient_tree, depth)
    ambient_fam = DensePointFamily(ambient_tree)
    ambient = ambient_presentation(ambient_fam, name=f"ambient[{inst.id}]")

    if inst.set_desc["kind"] == "tree-pair":
        tree_a = build_tree(inst.set_desc["a"], label=f"{inst.id}:a")
        tree_c = build_tree(inst.set_desc["complement"], label=f"{inst.id}:c")
        if not tree_a.admits(()):
            return BuiltInstance(inst, ambient_fam, ambient, None, degenerate="empty-set")
        if not tree_c.admits(()):
            return BuiltInstance(inst, ambient_fam, ambient, None,
                                 degenerate="empty-complement")
        validate_pruned(tree_a, depth)
        validate_pruned(tree_c, depth)
        part_a = identity_representation(tree_a)
        part_c = identity_representation(tree_c)
    else:
        bound = inst.set_desc.get("alphabet_bound", 1)
        part_a = witness_representation(build_matrix(inst.set_desc["a"]), bound)
        part_c = witness_representation(build_matrix(inst.set_desc["complement"]), bound)
    sum_space = SumSpace(part_a=part_a, part_c=part_c, ambient=ambient, label=inst.id)
    return BuiltInstance(inst, ambient_fam, ambient, sum_space)


# --- the built-in catalog -----------------------------------------------------

def _tree_pair(inst_id: str, ambient: dict, a: dict, c: dict, **bounds) -> dict:
    return {
        "format": "instance/1",
        "id": inst_id,
        "ambient": ambient,
        "set": {"kind": "tree-pair", "a": a, "complement": c},
        "bounds": bounds or None,
    }


_CANTOR = {"kind": "cantor"}

CATALOG: dict[str, dict[str, Any]] = {
    "cantor-split-0": _tree_pair(
        "cantor-split-0", _CANTOR,
        {"rule": "cylinders", "prefixes": [[0]], "child_bound": 1},
        {"rule": "cylinders", "prefixes": [[1]], "child_bound": 1},
    ),
    "cantor-split-00": _tree_pair(
        "cantor-split-00", _CANTOR,
        {"rule": "cylinders", "prefixes": [[0, 0]], "child_bound": 1},
        {"rule": "cylinders", "prefixes": [[1], [0, 1]], "child_bound": 1},
    ),
    "baire-split-0": _tree_pair(
        "baire-split-0",
        {"kind": "tree",
         "tree": {"rule": "cylinders", "prefixes": [[0], [1], [2], [3], [4]],
                  "child_bound": 4}},
        {"rule": "cylinders", "prefixes": [[0]], "child_bound": 4},
        {"rule": "cylinders", "prefixes": [[1], [2], [3], [4]], "child_bound": 4},
    ),
    "cantor-eq01": _tree_pair(
        "cantor-eq01", _CANTOR,
        {"rule": "cylinders", "prefixes": [[0, 0], [1, 1]], "child_bound": 1},
        {"rule": "cylinders", "prefixes": [[0, 1], [1, 0]], "child_bound": 1},
    ),
    "cantor-dsl-eq01": _tree_pair(
        "cantor-dsl-eq01", _CANTOR,
        {"rule": "dsl", "child_bound": 1,
         "node": "(all i < len : s(i) <= 1) and (len < 2 or s(0) == s(1))"},
        {"rule": "dsl", "child_bound": 1,
         "node": "(all i < len : s(i) <= 1) and (len < 2 or s(0) != s(1))"},
    ),
    "witness-first-bit": {
        "format": "instance/1",
        "id": "witness-first-bit",
        "ambient": _CANTOR,
        "set": {
            "kind": "pi02-pair",
            "a": {"rule": "catalog", "name": "first-value-0"},
            "complement": {"rule": "catalog", "name": "first-value-1"},
            "alphabet_bound": 1,
        },
        # pair-position codes grow fast, so the in-cap dense enumeration of a
        # pair tree is short; the table size reflects that honestly
        "bounds": {"table_size": 2, "enumeration_cap": 2000},
    },
    "degenerate-empty": _tree_pair(
        "degenerate-empty", _CANTOR,
        {"rule": "empty"},
        {"rule": "cantor"},
    ),
    "degenerate-full": _tree_pair(
        "degenerate-full", _CANTOR,
        {"rule": "cantor"},
        {"rule": "empty"},
    ),
}

INTERLEAVE_CATALOG = ("cantor-split-0", "cantor-split-00", "baire-split-0", "cantor-eq01")


def builtin_instance(name: str) -> InstanceFile:
    """The canned instance with the given name, via the ordinary parser."""
    doc = CATALOG.get(name)
    if doc is None:
        raise UnknownCatalogName(name)
    doc = {k: v for k, v in doc.items() if v is not None}
    return parse_instance(json.dumps(doc))
