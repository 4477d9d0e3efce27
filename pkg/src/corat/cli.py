"""Command line front end: structure files in, JSON reports out.

A structure file is one JSON document::

    {"ring": "Z/4",
     "objects": {"C": [4, 2]},
     "morphisms": {"delta": {"source": "C", "target": "C (x) C", "matrix": [[...]]}},
     "structures": {"zw": {"kind": "coalgebra", "carrier": "C", "comult": "delta", "counit": "eps"}}}

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 parse or
reference error, 3 enumeration bound exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import __version__
from .entwine import (
    EntwinedModule,
    Entwining,
    alpha_prime_family,
    alpha_prime_report,
    canonical_entwined_module,
    check_entwined_module,
    check_entwining,
    check_package,
    entwined_equivalence_roundtrip,
    representing_object,
    restrict_along_i,
    trivial_entwining,
    twist_entwining,
    xi_functor,
    zero_entwined_module,
)
from .errors import CoratError, InvalidMorphism, InvalidStructure, NotApplicable, TooLarge, TypeMismatch
from .exactscalar import BaseRing
from .finmod import (
    DEFAULT_BOUND,
    FinMod,
    ModMorphism,
    compose,
    direct_sum,
    dual,
    eval_morphism,
    hom_module,
    image_elements,
    identity,
    swap,
    tensor,
    tensor_mor,
)
from .pairing import LeftPairing, alpha_component, check_left_pairing, default_family, is_rational
from .rational import rat_oracle, rational_part, t_component
from .structures import (
    Algebra,
    Coalgebra,
    Comodule,
    ModuleAction,
    Report,
    base_algebra,
    check_algebra,
    check_coalgebra,
    check_comodule,
    check_module,
    comatrix,
    dual_algebra,
    group_like,
    product_algebra,
    regular_comodule,
    regular_module,
    zw_coalgebra_Z4,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BOUND = 0, 1, 2, 3
CORPUS_PREFIX = "corpus:"

log = logging.getLogger("corat")


class ParseError(CoratError):
    """Malformed file or unresolved reference; `where` names the field."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


# ------------------------------------------------------------------ rings

def parse_ring(value, where="ring") -> BaseRing:
    if isinstance(value, dict):
        value = value.get("modulus", "Q")
    if value is None or value in ("Q", "QQ"):
        return BaseRing.rationals()
    if isinstance(value, int) and not isinstance(value, bool):
        n = value
    elif isinstance(value, str):
        v = value.replace(" ", "")
        for pre, post in (("Z/", ""), ("GF(", ")"), ("F", "")):
            if v.startswith(pre) and v.endswith(post) and v[len(pre):len(v) - len(post)].isdigit():
                n = int(v[len(pre):len(v) - len(post)])
                break
        else:
            raise ParseError(f"unknown ring {value!r}", where)
    else:
        raise ParseError(f"unknown ring {value!r}", where)
    if n < 2:
        raise ParseError("modulus must be at least 2", where)
    return BaseRing.zmod(n)


def ring_name(ring: BaseRing) -> str:
    return "Q" if ring.is_rational else f"Z/{ring.modulus}"


# ------------------------------------------------------------ file model

# field name -> "module", "morphism" or the structure kinds it may reference
FIELDS = {
    "algebra": {"carrier": "module", "mult": "morphism", "unit": "morphism"},
    "coalgebra": {"carrier": "module", "comult": "morphism", "counit": "morphism"},
    "module": {"algebra": "algebra", "carrier": "module", "action": "morphism"},
    "comodule": {"coalgebra": "coalgebra", "carrier": "module", "coaction": "morphism"},
    "pairing": {"algebra": "algebra", "coalgebra": "coalgebra", "t": "morphism"},
    "entwining": {"algebra": "algebra", "coalgebra": "coalgebra", "lambda": "morphism"},
    "entwined_module": {"entwining": "entwining", "carrier": "module", "coaction": "morphism", "action": "morphism"},
    "dual_algebra": {"coalgebra": "coalgebra"},
    "eval_pairing": {"coalgebra": "coalgebra"},
    "trivial_entwining": {"coalgebra": "coalgebra"},
    "twist_entwining": {"algebra": "algebra", "coalgebra": "coalgebra"},
    "regular_module": {"algebra": "algebra"},
    "regular_comodule": {"coalgebra": "coalgebra"},
    "canonical_entwined_module": {"entwining": "entwining"},
    "zero_entwined_module": {"entwining": "entwining"},
    "builtin": {},
}

BUILTINS = {
    "group_like": ("coalgebra", lambda ring, p: group_like(ring)),
    "comatrix": ("coalgebra", lambda ring, p: comatrix(int(p.get("n", 2)), ring)),
    "zw_coalgebra_Z4": ("coalgebra", lambda ring, p: zw_coalgebra_Z4()),
    "base_algebra": ("algebra", lambda ring, p: base_algebra(ring)),
    "product_algebra": ("algebra", lambda ring, p: product_algebra(ring, int(p.get("k", 2)))),
}


def _kind_of(obj) -> str:
    for cls, name in ((Algebra, "algebra"), (Coalgebra, "coalgebra"), (ModuleAction, "module"),
                      (Comodule, "comodule"), (LeftPairing, "pairing"), (Entwining, "entwining"),
                      (EntwinedModule, "entwined_module")):
        if isinstance(obj, cls):
            return name
    raise TypeError(type(obj))


def _scalar_out(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return int(x)


def matrix_out(f: ModMorphism) -> list:
    return [[_scalar_out(x) for x in row] for row in f.tolist()]


def _scalar_in(x, ring, where):
    if isinstance(x, bool):
        raise ParseError("booleans are not matrix entries", where)
    if isinstance(x, int):
        return x
    if isinstance(x, str) and ring.is_rational:
        try:
            return Fraction(x)
        except ValueError:
            pass
    raise ParseError(f"bad matrix entry {x!r}", where)


@dataclass
class StructureFile:
    ring: BaseRing
    objects: dict[str, FinMod] = field(default_factory=dict)
    morphisms: dict[str, ModMorphism] = field(default_factory=dict)
    structures: dict[str, object] = field(default_factory=dict)
    specs: dict[str, dict] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def get(self, name: str, kind: str | None = None, where: str = ""):
        if name not in self.structures:
            raise ParseError(f"no structure named {name!r}", where or "--name")
        obj = self.structures[name]
        if kind is not None and _kind_of(obj) != kind:
            raise ParseError(f"{name!r} is a {_kind_of(obj)}, expected a {kind}", where or "--name")
        return obj


class _Parser:
    def __init__(self, doc: dict):
        if not isinstance(doc, dict):
            raise ParseError("top level must be a JSON object")
        self.doc = doc
        self.sf = StructureFile(parse_ring(doc.get("ring"), "ring"))
        self.raw_objects = self._section("objects")
        self.raw_morphisms = self._section("morphisms")
        self.raw_structures = self._section("structures")
        self._active: set[str] = set()

    def _section(self, key):
        val = self.doc.get(key, {})
        if not isinstance(val, dict):
            raise ParseError("must be an object mapping names to entries", key)
        return val

    def run(self) -> StructureFile:
        for name in self.raw_objects:
            self.object(name, f"objects.{name}")
        for name in self.raw_morphisms:
            self.morphism_named(name, f"morphisms.{name}")
        for name in self.raw_structures:
            self.structure(name, f"structures.{name}")
        return self.sf

    def _guard(self, key, where):
        if key in self._active:
            raise ParseError("circular reference", where)
        self._active.add(key)

    # modules ---------------------------------------------------------
    def object(self, name, where):
        sf = self.sf
        if name in sf.objects:
            return sf.objects[name]
        self._guard("o:" + name, where)
        sf.objects[name] = self.module(self.raw_objects[name], where)
        self._active.discard("o:" + name)
        return sf.objects[name]

    def module(self, expr, where) -> FinMod:
        ring = self.sf.ring
        if isinstance(expr, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in expr):
            try:
                return FinMod(ring, tuple(expr))
            except ValueError as exc:
                raise ParseError(str(exc), where) from None
        if isinstance(expr, list) and expr and isinstance(expr[0], str):
            op, args = expr[0], expr[1:]
            parts = [self.module(a, f"{where}[{k + 1}]") for k, a in enumerate(args)]
            if op == "tensor":
                return tensor(*parts) if parts else FinMod.unit(ring)
            if op == "sum":
                return direct_sum(*parts).module if parts else FinMod.zero(ring)
            if op == "hom" and len(parts) == 2:
                return hom_module(*parts)
            if op == "dual" and len(parts) == 1:
                return dual(parts[0])
            raise ParseError(f"unknown module operation {op!r}", where)
        if isinstance(expr, str):
            for sep in ("⊗", "(x)"):
                if sep in expr:
                    return tensor(*(self.module(p.strip(), where) for p in expr.split(sep)))
            expr = expr.strip()
            if expr == "R":
                return FinMod.unit(ring)
            if expr == "0":
                return FinMod.zero(ring)
            if expr in self.raw_objects:
                return self.object(expr, where)
            if expr in self.raw_structures:
                obj = self.structure(expr, where)
                if hasattr(obj, "carrier"):
                    return obj.carrier
            raise ParseError(f"unknown module {expr!r}", where)
        raise ParseError(f"cannot read a module from {expr!r}", where)

    # morphisms -------------------------------------------------------
    def morphism_named(self, name, where):
        sf = self.sf
        if name in sf.morphisms:
            return sf.morphisms[name]
        self._guard("m:" + name, where)
        sf.morphisms[name] = self.morphism(self.raw_morphisms[name], where)
        self._active.discard("m:" + name)
        return sf.morphisms[name]

    def morphism(self, entry, where) -> ModMorphism:
        if isinstance(entry, str):
            if entry not in self.raw_morphisms:
                raise ParseError(f"no morphism named {entry!r}", where)
            return self.morphism_named(entry, where)
        if not isinstance(entry, dict):
            raise ParseError("a morphism is a name or an object", where)
        kind = entry.get("kind", "matrix")
        if kind == "identity":
            return identity(self.module(entry.get("object"), where + ".object"))
        if kind == "swap":
            return swap(self.module(entry.get("left"), where + ".left"), self.module(entry.get("right"), where + ".right"))
        if kind in ("compose", "tensor"):
            maps = [self.morphism(m, f"{where}.maps[{k}]") for k, m in enumerate(entry.get("maps", []))]
            if not maps:
                raise ParseError("needs a non-empty 'maps' list", where)
            try:
                if kind == "tensor":
                    return tensor_mor(*maps)
                out = maps[-1]
                for g in reversed(maps[:-1]):
                    out = compose(g, out)
                return out
            except TypeMismatch as exc:
                raise ParseError(str(exc), where) from None
        if kind != "matrix":
            raise ParseError(f"unknown morphism kind {kind!r}", where)
        for key in ("source", "target", "matrix"):
            if key not in entry:
                raise ParseError(f"missing field {key!r}", where)
        src = self.module(entry["source"], where + ".source")
        tgt = self.module(entry["target"], where + ".target")
        rows = entry["matrix"]
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            raise ParseError("matrix must be a list of rows", where + ".matrix")
        if len(rows) != tgt.ngens or any(len(r) != src.ngens for r in rows):
            raise ParseError(f"matrix must be {tgt.ngens} x {src.ngens}", where + ".matrix")
        ring = self.sf.ring
        vals = [[_scalar_in(x, ring, where + ".matrix") for x in r] for r in rows]
        try:
            f = ModMorphism(src, tgt, vals if vals and src.ngens else _empty(tgt.ngens, src.ngens))
        except InvalidMorphism as exc:
            raise ParseError(str(exc), where + ".matrix") from None
        if ring.is_finite and f.tolist() != [[int(x) for x in r] for r in vals]:
            msg = f"{where}: entries reduced to canonical residues"
            self.sf.warnings.append(msg)
            log.warning(msg)
        return f

    # structures ------------------------------------------------------
    def structure(self, name, where):
        sf = self.sf
        if name in sf.structures:
            return sf.structures[name]
        if name not in self.raw_structures:
            raise ParseError(f"no structure named {name!r}", where)
        self._guard("s:" + name, where)
        entry = self.raw_structures[name]
        where = f"structures.{name}"
        if not isinstance(entry, dict) or "kind" not in entry:
            raise ParseError("a structure needs a 'kind'", where)
        kind = entry["kind"]
        if kind not in FIELDS:
            raise ParseError(f"unknown kind {kind!r}", where + ".kind")
        vals = {}
        for fname, ftype in FIELDS[kind].items():
            if fname not in entry:
                raise ParseError(f"missing field {fname!r}", where)
            fw = f"{where}.{fname}"
            if ftype == "module":
                vals[fname] = self.module(entry[fname], fw)
            elif ftype == "morphism":
                vals[fname] = self.morphism(entry[fname], fw)
            else:
                ref = entry[fname]
                if not isinstance(ref, str):
                    raise ParseError("must name a structure", fw)
                obj = self.structure(ref, fw)
                if _kind_of(obj) != ftype:
                    raise ParseError(f"{ref!r} is a {_kind_of(obj)}, expected a {ftype}", fw)
                vals[fname] = obj
        try:
            obj = self._build(kind, vals, entry, where)
        except (TypeMismatch, InvalidMorphism) as exc:
            raise ParseError(str(exc), where) from None
        sf.structures[name] = obj
        sf.specs[name] = {k: entry[k] for k in sorted(entry)}
        self._active.discard("s:" + name)
        return obj

    def _build(self, kind, v, entry, where):
        ring = self.sf.ring
        if kind == "builtin":
            bname = entry.get("name")
            if bname not in BUILTINS:
                raise ParseError(f"unknown builtin {bname!r}", where + ".name")
            obj = BUILTINS[bname][1](ring, entry)
            if obj.ring != ring:
                raise ParseError(f"builtin {bname} lives over {ring_name(obj.ring)}", where)
            return obj
        if kind == "algebra":
            X = v["carrier"]
            _endpoints(v["mult"], tensor(X, X), X, where + ".mult")
            _endpoints(v["unit"], FinMod.unit(ring), X, where + ".unit")
            return Algebra(X, v["mult"], v["unit"])
        if kind == "coalgebra":
            X = v["carrier"]
            _endpoints(v["comult"], X, tensor(X, X), where + ".comult")
            _endpoints(v["counit"], X, FinMod.unit(ring), where + ".counit")
            return Coalgebra(X, v["comult"], v["counit"])
        if kind == "module":
            A, X = v["algebra"], v["carrier"]
            _endpoints(v["action"], tensor(A.carrier, X), X, where + ".action")
            return ModuleAction(A, X, v["action"])
        if kind == "comodule":
            C, X = v["coalgebra"], v["carrier"]
            _endpoints(v["coaction"], X, tensor(C.carrier, X), where + ".coaction")
            return Comodule(C, X, v["coaction"])
        if kind == "pairing":
            A, C = v["algebra"], v["coalgebra"]
            _endpoints(v["t"], tensor(A.carrier, C.carrier), FinMod.unit(ring), where + ".t")
            return LeftPairing(A, C, v["t"])
        if kind == "entwining":
            A, C = v["algebra"], v["coalgebra"]
            _endpoints(v["lambda"], tensor(A.carrier, C.carrier), tensor(C.carrier, A.carrier), where + ".lambda")
            return Entwining(A, C, v["lambda"])
        if kind == "entwined_module":
            L, X = v["entwining"], v["carrier"]
            _endpoints(v["coaction"], X, tensor(L.coalgebra.carrier, X), where + ".coaction")
            _endpoints(v["action"], tensor(L.algebra.carrier, X), X, where + ".action")
            return EntwinedModule(L, X, v["coaction"], v["action"])
        if kind == "dual_algebra":
            return dual_algebra(v["coalgebra"], check=False)
        if kind == "eval_pairing":
            C = v["coalgebra"]
            return LeftPairing(dual_algebra(C, check=False), C, eval_pairing_map(C))
        if kind == "trivial_entwining":
            return trivial_entwining(v["coalgebra"])
        if kind == "twist_entwining":
            return twist_entwining(v["algebra"], v["coalgebra"])
        if kind == "regular_module":
            return regular_module(v["algebra"])
        if kind == "regular_comodule":
            return regular_comodule(v["coalgebra"])
        if kind == "canonical_entwined_module":
            return canonical_entwined_module(v["entwining"])
        if kind == "zero_entwined_module":
            return zero_entwined_module(v["entwining"])
        raise ParseError(f"unknown kind {kind!r}", where)


def eval_pairing_map(C: Coalgebra) -> ModMorphism:
    return eval_morphism(C.carrier, FinMod.unit(C.ring))


def _empty(rows, cols):
    return [[0] * cols for _ in range(rows)]


def _endpoints(f: ModMorphism, source: FinMod, target: FinMod, where: str):
    if f.source != source or f.target != target:
        raise ParseError(f"expected {source} -> {target}, got {f.source} -> {f.target}", where)


def parse(doc: dict) -> StructureFile:
    return _Parser(doc).run()


def resolve_path(path: str) -> Path:
    """A filesystem path, or corpus:<name> for a shipped corpus file."""
    if path.startswith(CORPUS_PREFIX):
        name = path[len(CORPUS_PREFIX):]
        if not name.endswith(".json"):
            name += ".json"
        return Path(str(resources.files("corat") / "corpus" / name))
    return Path(path)


def load_text(text: str) -> StructureFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse(doc)


def load(path: str) -> StructureFile:
    p = resolve_path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return load_text(text)


def corpus_files() -> list[str]:
    root = resources.files("corat") / "corpus"
    return sorted(CORPUS_PREFIX + p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


# ---------------------------------------------------------- serialisation

def serialize(sf: StructureFile) -> dict:
    """Canonical document: objects as generator orders, morphisms as reduced matrices."""
    return {
        "ring": ring_name(sf.ring),
        "objects": {k: list(v.orders) for k, v in sorted(sf.objects.items())},
        "morphisms": {
            k: {"source": list(f.source.orders), "target": list(f.target.orders), "matrix": matrix_out(f)}
            for k, f in sorted(sf.morphisms.items())
        },
        "structures": {k: _spec_out(v) for k, v in sorted(sf.specs.items())},
    }


def _spec_out(spec: dict) -> dict:
    return json.loads(json.dumps(spec, sort_keys=True))


def normalize(doc: dict) -> dict:
    return serialize(parse(doc))


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- commands

CHECKERS = {
    "algebra": check_algebra,
    "coalgebra": check_coalgebra,
    "module": check_module,
    "comodule": check_comodule,
    "pairing": check_left_pairing,
    "entwining": check_entwining,
    "entwined_module": check_entwined_module,
}


@dataclass
class Outcome:
    result: dict
    reports: list[Report]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)


def _validated(sf, name, kind) -> tuple[object, Report]:
    obj = sf.get(name, kind)
    return obj, CHECKERS[kind](obj)


def cmd_validate(sf: StructureFile, name: str | None = None, **_) -> Outcome:
    names = [name] if name else list(sf.structures)
    reports, per = [], {}
    for n in names:
        obj = sf.get(n)
        kind = _kind_of(obj)
        rep = CHECKERS[kind](obj)
        rep.title = f"{kind} {n}"
        reports.append(rep)
        per[n] = {"kind": kind, "report": rep.to_dict()}
    return Outcome({"structures": per}, reports)


def cmd_dual(sf: StructureFile, name: str, **_) -> Outcome:
    C, rep = _validated(sf, name, "coalgebra")
    reports = [rep]
    result = {"coalgebra": name, "coalgebra_report": rep.to_dict()}
    if rep.ok:
        A = dual_algebra(C, check=False)
        arep = check_algebra(A)
        reports.append(arep)
        result.update({"carrier": list(A.carrier.orders), "mult": matrix_out(A.mult),
                       "unit": matrix_out(A.unit), "report": arep.to_dict()})
    return Outcome(result, reports)


def cmd_rat(sf: StructureFile, name: str, module: str, bound: int = DEFAULT_BOUND, **_) -> Outcome:
    if not module:
        raise ParseError("rat needs --module", "--module")
    P, prep = _validated(sf, name, "pairing")
    M, mrep = _validated(sf, module, "module")
    reports = [prep, mrep]
    result = {"pairing": name, "module": module, "pairing_report": prep.to_dict(), "module_report": mrep.to_dict()}
    if not (prep.ok and mrep.ok):
        return Outcome(result, reports)
    if M.algebra != P.algebra:
        raise ParseError(f"{module!r} is not a module over the algebra of {name!r}", "--module")
    if P.ring.is_finite and M.carrier.size > bound:
        raise TooLarge(f"|M| = {M.carrier.size} exceeds the enumeration bound {bound}")
    rs = rational_part(P, M, check=False)
    rep = rs.report()
    result.update({
        "carrier": list(M.carrier.orders),
        "rat_carrier": list(rs.rat_carrier.orders),
        "rat_invariant_factors": list(rs.rat_carrier.invariant_factors),
        "inclusion": matrix_out(rs.inclusion),
        "proper": not rs.is_everything,
        "coaction": None if rs.coaction is None else matrix_out(rs.coaction),
        "coaction_unique": rs.coaction_unique,
        "notes": list(rs.notes),
    })
    if P.ring.is_finite:
        expected = rat_oracle(P, M, bound)
        got = image_elements(rs.inclusion, bound)
        rep.add("agrees with enumeration", got == expected, detail=f"{len(expected)} elements")
    else:
        rep.not_applicable("agrees with enumeration", "infinite ring")
    reports.append(rep)
    result["report"] = rep.to_dict()
    return Outcome(result, reports)


def cmd_entwine(sf: StructureFile, name: str, **_) -> Outcome:
    L, rep = _validated(sf, name, "entwining")
    result = {"entwining": name, "entwining_report": rep.to_dict()}
    reports = [rep]
    if not rep.ok:
        return Outcome(result, reports)
    pkg = representing_object(L, check=False)
    prep = check_package(pkg)
    reports.append(prep)
    arep = alpha_prime_report(pkg, alpha_prime_family(L))
    result.update({
        "E": list(pkg.E.orders),
        "mult": matrix_out(pkg.mult),
        "unit": matrix_out(pkg.unit),
        "i": matrix_out(pkg.i),
        "report": prep.to_dict(),
        "alpha_prime": {"mono_on_family": arep.ok, "report": arep.to_dict()},
    })
    return Outcome(result, reports)


def cmd_xi(sf: StructureFile, name: str, **_) -> Outcome:
    M, rep = _validated(sf, name, "entwined_module")
    result = {"entwined_module": name, "entwined_module_report": rep.to_dict()}
    reports = [rep]
    if not rep.ok:
        return Outcome(result, reports)
    L = M.entwining
    lrep = check_entwining(L)
    if not lrep.ok:
        reports.append(lrep)
        result["entwining_report"] = lrep.to_dict()
        return Outcome(result, reports)
    pkg = representing_object(L, check=False)
    N = xi_functor(pkg, M, check=False)
    xrep = Report("xi")
    xrep.extend(check_module(N), "E-module ")
    xrep.compare("restriction along i recovers the action", restrict_along_i(pkg, N).action, M.action)
    try:
        rt = entwined_equivalence_roundtrip(L, M, pkg=pkg)
        xrep.add("entwined round trip", rt)
        result["roundtrip"] = rt
    except NotApplicable as exc:
        xrep.not_applicable("entwined round trip", str(exc))
        result["roundtrip"] = "not-applicable"
    reports.append(xrep)
    result.update({"E": list(pkg.E.orders), "action": matrix_out(N.action), "report": xrep.to_dict()})
    return Outcome(result, reports)


def cmd_rational_report(sf: StructureFile, name: str, family: str | None = None, **_) -> Outcome:
    P, rep = _validated(sf, name, "pairing")
    result = {"pairing": name, "pairing_report": rep.to_dict()}
    reports = [rep]
    if not rep.ok:
        return Outcome(result, reports)
    if family:
        parser = _Parser({"ring": ring_name(sf.ring)})
        parser.sf = sf
        parser.raw_objects = {k: list(v.orders) for k, v in sf.objects.items()}
        fam = [_family_member(parser, x.strip()) for x in family.split(",") if x.strip()]
    else:
        fam = default_family(P)
    rr = is_rational(P, fam)
    cross = Report("alpha components")
    for Y in fam:
        cross.compare(f"two constructions of alpha at {Y}", alpha_component(P, Y), t_component(P, Y))
    reports.append(cross)
    result.update(rr.to_dict())
    result["report"] = cross.to_dict()
    return Outcome(result, reports)


def _family_member(parser, text: str) -> FinMod:
    # a bare divisor d stands for the cyclic module R/(d)
    if text.isdigit():
        d = int(text)
        try:
            return FinMod.cyclic(parser.sf.ring, d)
        except ValueError as exc:
            raise ParseError(str(exc), "--family") from None
    return parser.module(text, "--family")


COMMANDS = {
    "validate": cmd_validate,
    "dual": cmd_dual,
    "rat": cmd_rat,
    "entwine": cmd_entwine,
    "xi": cmd_xi,
    "rational-report": cmd_rational_report,
}


# ------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="corat", description="Check coalgebra, pairing and entwining data; compute rational parts.")
    ap.add_argument("--version", action="version", version=f"corat {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("--file", required=True, help=f"structure file, or {CORPUS_PREFIX}<name> for a shipped one")
        p.add_argument("--name", required=cmd != "validate", help="structure to act on")
        p.add_argument("--module", help="module name (rat)")
        p.add_argument("--family", help="comma separated object names, R, or divisors d for R/(d) (rational-report)")
        p.add_argument("--bound", type=int, default=None, help="enumeration bound (default $CORAT_BOUND or 65536)")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
        fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
        p.set_defaults(fmt="json")
    sub.add_parser("corpus", help="list shipped corpus files")
    return ap


def _bound(arg) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("CORAT_BOUND")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"CORAT_BOUND={env!r} is not an integer", "CORAT_BOUND") from None
    return DEFAULT_BOUND


def _envelope(command, file, status, code, warnings, result=None, error=None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": command,
           "file": file, "status": status, "exit_code": code, "warnings": list(warnings)}
    if result is not None:
        out["result"] = result
    if error is not None:
        out["error"] = error
    return out


def _render_text(env: dict) -> str:
    lines = [f"{env['command']} {env['file']}: {env['status']} (exit {env['exit_code']})"]
    for w in env["warnings"]:
        lines.append(f"warning: {w}")
    if "error" in env:
        lines.append(f"error: {env['error']}")

    def walk(node):
        if isinstance(node, dict):
            if "checks" in node and "title" in node:
                lines.append(f"[{node['title']}]")
                for c in node["checks"]:
                    extra = f"  ({c['detail']})" if c.get("detail") else ""
                    lines.append(f"  {c['status'].upper():15s} {c['name']}{extra}")
                return
            for v in node.values():
                walk(v)

    walk(env.get("result", {}))
    for key in ("E", "carrier", "rat_carrier", "proper", "verdict", "roundtrip"):
        if key in env.get("result", {}):
            lines.append(f"{key}: {env['result'][key]}")
    return "\n".join(lines) + "\n"


def run(argv=None) -> tuple[int, str]:
    """Run the CLI and return (exit code, rendered output)."""
    args = build_parser().parse_args(argv)
    if args.command == "corpus":
        return EXIT_OK, "\n".join(corpus_files()) + "\n"
    sf = None
    try:
        bound = _bound(args.bound)
        sf = load(args.file)
        out = COMMANDS[args.command](sf, name=args.name, module=args.module, family=args.family, bound=bound)
        code = EXIT_OK if out.ok else EXIT_FAIL
        env = _envelope(args.command, args.file, "pass" if out.ok else "fail", code, sf.warnings, out.result)
    except ParseError as exc:
        env = _envelope(args.command, args.file, "error", EXIT_PARSE, sf.warnings if sf else [], error=str(exc))
    except TooLarge as exc:
        env = _envelope(args.command, args.file, "resource-limit", EXIT_BOUND, sf.warnings if sf else [], error=str(exc))
    except (InvalidStructure, CoratError) as exc:
        env = _envelope(args.command, args.file, "fail", EXIT_FAIL, sf.warnings if sf else [],
                        error=f"{type(exc).__name__}: {exc}")
    text = _render_text(env) if args.fmt == "text" else dumps(env)
    return env["exit_code"], text


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="corat: %(levelname)s: %(message)s")
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
