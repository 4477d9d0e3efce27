"""Regenerate the shipped corpus under src/corat/corpus from the stock constructors.

Run from the repository root:  python scripts/make_corpus.py
"""
from __future__ import annotations

from pathlib import Path

from corat.cli import dumps, matrix_out, ring_name
from corat.entwine import canonical_entwined_module, cofree_entwined_module, twist_entwining
from corat.exactscalar import GF, BaseRing
from corat.finmod import FinMod, ModMorphism, identity, tensor, tensor_positions
from corat.pairing import eval_pairing
from corat.structures import (
    base_algebra,
    ModuleAction,
    Comodule,
    coinduced_module,
    comatrix,
    dual_algebra,
    group_like,
    grouplike_comodule,
    product_algebra,
    restrict_scalars,
    zw_coalgebra_Z4,
)

OUT = Path(__file__).resolve().parent.parent / "src" / "corat" / "corpus"


class Doc:
    def __init__(self, ring, description):
        self.ring = ring
        self.d = {"description": description, "ring": ring_name(ring), "objects": {}, "morphisms": {}, "structures": {}}

    def obj(self, name, M: FinMod):
        self.d["objects"][name] = list(M.orders)
        return name

    def mor(self, name, f: ModMorphism, source, target, matrix=None):
        self.d["morphisms"][name] = {"source": source, "target": target,
                                     "matrix": matrix if matrix is not None else matrix_out(f)}
        return name

    def struct(self, sname, **entry):
        self.d["structures"][sname] = entry
        return sname

    def coalgebra(self, name, C, carrier):
        self.obj(carrier, C.carrier)
        self.mor(f"{name}.comult", C.comult, carrier, ["tensor", carrier, carrier])
        self.mor(f"{name}.counit", C.counit, carrier, "R")
        return self.struct(name, kind="coalgebra", carrier=carrier, comult=f"{name}.comult", counit=f"{name}.counit")

    def algebra(self, name, A, carrier):
        self.obj(carrier, A.carrier)
        self.mor(f"{name}.mult", A.mult, ["tensor", carrier, carrier], carrier)
        self.mor(f"{name}.unit", A.unit, "R", carrier)
        return self.struct(name, kind="algebra", carrier=carrier, mult=f"{name}.mult", unit=f"{name}.unit")

    def module(self, name, M: ModuleAction, algebra, algebra_carrier, carrier):
        self.obj(carrier, M.carrier)
        self.mor(f"{name}.action", M.action, ["tensor", algebra_carrier, carrier], carrier)
        return self.struct(name, kind="module", algebra=algebra, carrier=carrier, action=f"{name}.action")

    def comodule(self, name, N: Comodule, coalgebra, coalgebra_carrier, carrier):
        self.obj(carrier, N.carrier)
        self.mor(f"{name}.coaction", N.coaction, carrier, ["tensor", coalgebra_carrier, carrier])
        return self.struct(name, kind="comodule", coalgebra=coalgebra, carrier=carrier, coaction=f"{name}.coaction")

    def entwined(self, name, M, entwining, A_carrier, C_carrier, carrier):
        self.obj(carrier, M.carrier)
        self.mor(f"{name}.coaction", M.coaction, carrier, ["tensor", C_carrier, carrier])
        self.mor(f"{name}.action", M.action, ["tensor", A_carrier, carrier], carrier)
        return self.struct(name, kind="entwined_module", entwining=entwining, carrier=carrier,
                           coaction=f"{name}.coaction", action=f"{name}.action")

    def write(self, fname):
        (OUT / fname).write_text(dumps(self.d), encoding="utf-8")


def row_comodule(C, n):
    """R^n with v_j |-> sum_i e_ji (x) v_i over the comatrix coalgebra."""
    V = FinMod.free(C.ring, n)
    pos = {p: k for k, p in enumerate(tensor_positions(C.carrier, V))}
    arr = [[0] * n for _ in range(len(pos))]
    for i in range(n):
        for j in range(n):
            arr[pos[(j * n + i, i)]][j] = 1
    return Comodule(C, V, ModMorphism(V, tensor(C.carrier, V), arr))


def character(A, k, index=0):
    """R as a module over R^k through the projection onto one factor."""
    R = FinMod.unit(A.ring)
    row = [[int(c == index) for c in range(k)]]
    return ModuleAction(A, R, ModMorphism(tensor(A.carrier, R), R, row))


def pairing_block(doc, C, cname="C"):
    doc.coalgebra(cname, C, "C0")
    doc.struct("Cstar", kind="dual_algebra", coalgebra=cname)
    doc.struct("P", kind="eval_pairing", coalgebra=cname)
    doc.struct("Cstar_regular", kind="regular_module", algebra="Cstar")
    doc.struct("C_regular", kind="regular_comodule", coalgebra=cname)


def grouplike_file(ring, fname):
    C = group_like(ring)
    doc = Doc(ring, f"group-like coalgebra over {ring_name(ring)} with its dual, pairing, modules and comodules")
    pairing_block(doc, C)
    A = dual_algebra(C)
    for d in sorted({d for d in ([ring.modulus] + [q for q in range(2, ring.modulus) if ring.modulus % q == 0])}):
        Y = FinMod.cyclic(ring, d)
        doc.comodule(f"N_{d}", grouplike_comodule(C, [1], Y), "C", "C0", f"Y{d}")
        doc.module(f"coind_{d}", coinduced_module(A, Y), "Cstar", ["dual", "C0"], f"H{d}")
    doc.write(fname)


def comatrix_file(ring, fname):
    C = comatrix(2, ring)
    doc = Doc(ring, f"2 x 2 comatrix coalgebra over {ring_name(ring)}")
    pairing_block(doc, C)
    A = dual_algebra(C)
    doc.comodule("row", row_comodule(C, 2), "C", "C0", "V2")
    M = coinduced_module(A, FinMod.unit(ring))
    doc.module("coind_R", M, "Cstar", ["dual", "C0"], "H")
    doc.write(fname)


def zw_file():
    ring = BaseRing.zmod(4)
    C = zw_coalgebra_Z4()
    doc = Doc(ring, "Z/4<g> + Z/2<x>, the non-projective coalgebra")
    pairing_block(doc, C)
    A = dual_algebra(C)
    aug = ModMorphism(A.carrier, FinMod.unit(ring), [[1, 0]])
    Z2 = FinMod.cyclic(ring, 2)
    # Z/2 through the augmentation g* |-> 1, x* |-> 0
    triv = restrict_scalars(ModuleAction(base_algebra(ring), Z2, identity(Z2)), aug, A)
    doc.module("aug", triv, "Cstar", ["dual", "C0"], "Z2")
    doc.module("coind_Z2", coinduced_module(A, Z2), "Cstar", ["dual", "C0"], "H2")
    doc.comodule("g_Z2", grouplike_comodule(C, [1, 0], Z2), "C", "C0", "Z2")
    doc.comodule("g_Z4", grouplike_comodule(C, [1, 0], FinMod.unit(ring)), "C", "C0", "Z4")
    doc.write("zw_z4.json")


def entwining_files():
    ring = GF(2)
    C = comatrix(2, ring)
    doc = Doc(ring, "trivial entwining on the 2 x 2 comatrix coalgebra over GF(2)")
    doc.coalgebra("C", C, "C0")
    doc.struct("R_alg", kind="builtin", name="base_algebra")
    doc.mor("lam", None, "C0", "C0", [[int(i == j) for j in range(4)] for i in range(4)])
    doc.struct("L", kind="entwining", algebra="R_alg", coalgebra="C", **{"lambda": "lam"})
    doc.struct("L_derived", kind="trivial_entwining", coalgebra="C")
    ident = lambda n: [[int(i == j) for j in range(n)] for i in range(n)]
    doc.mor("C_regular.action", None, "C0", "C0", ident(4))
    doc.struct("C_regular", kind="entwined_module", entwining="L", carrier="C0",
               coaction="C.comult", action="C_regular.action")
    N = row_comodule(C, 2)
    doc.obj("V2", N.carrier)
    doc.mor("row.coaction", N.coaction, "V2", "C0 (x) V2")
    doc.mor("row.action", None, "V2", "V2", ident(2))
    doc.struct("row", kind="entwined_module", entwining="L", carrier="V2", coaction="row.coaction", action="row.action")
    doc.struct("zero", kind="zero_entwined_module", entwining="L")
    doc.write("entwining_trivial_gf2.json")

    for ring, C, cdesc, fname in [(GF(2), comatrix(2, GF(2)), "the 2 x 2 comatrix coalgebra", "entwining_twist_gf2.json"),
                                  (BaseRing.zmod(4), group_like(BaseRing.zmod(4)), "the group-like coalgebra", "entwining_twist_z4.json")]:
        A = product_algebra(ring, 2)
        L = twist_entwining(A, C)
        doc = Doc(ring, f"twist entwining of R x R with {cdesc} over {ring_name(ring)}")
        doc.coalgebra("C", C, "C0")
        doc.algebra("A", A, "A0")
        doc.mor("lam", L.lam, "A0 (x) C0", "C0 (x) A0")
        doc.struct("L", kind="entwining", algebra="A", coalgebra="C", **{"lambda": "lam"})
        doc.struct("canonical", kind="canonical_entwined_module", entwining="L")
        doc.entwined("canonical_explicit", canonical_entwined_module(L), "L", "A0", "C0", "CA")
        for k in range(2):
            V = character(A, 2, k)
            doc.entwined(f"cofree_chi{k}", cofree_entwined_module(L, V), "L", "A0", "C0", f"CR{k}")
        doc.struct("zero", kind="zero_entwined_module", entwining="L")
        doc.write(fname)


def mutate(doc, mname, i, j):
    """Flip one GF(2) entry."""
    m = doc.d["morphisms"][mname]["matrix"]
    m[i][j] = 1 - m[i][j]


def failing_files():
    ring = GF(2)
    A = product_algebra(ring, 2)
    C = comatrix(2, ring)

    doc = Doc(ring, "known failure: multiplication of R x R with one entry changed")
    doc.algebra("A", A, "A0")
    mutate(doc, "A.mult", 0, 1)
    doc.write("fail_algebra.json")

    doc = Doc(ring, "known failure: comatrix counit with one entry changed")
    doc.coalgebra("C", C, "C0")
    mutate(doc, "C.counit", 0, 1)
    doc.write("fail_coalgebra.json")

    doc = Doc(ring, "known failure: a character of R x R with the wrong unit value")
    doc.algebra("A", A, "A0")
    doc.module("chi", character(A, 2, 0), "A", "A0", "R1")
    mutate(doc, "chi.action", 0, 1)
    doc.write("fail_module.json")

    doc = Doc(ring, "known failure: the row comodule with one coaction entry changed")
    doc.coalgebra("C", C, "C0")
    doc.comodule("row", row_comodule(C, 2), "C", "C0", "V2")
    mutate(doc, "row.coaction", 0, 0)
    doc.write("fail_comodule.json")

    doc = Doc(ring, "known failure: evaluation pairing with one entry changed")
    doc.coalgebra("C", C, "C0")
    doc.struct("Cstar", kind="dual_algebra", coalgebra="C")
    P = eval_pairing(C)
    doc.mor("t", P.t, ["dual", "C0"], "R", None)
    doc.d["morphisms"]["t"]["source"] = ["tensor", ["dual", "C0"], "C0"]
    mutate(doc, "t", 0, 1)
    doc.struct("P", kind="pairing", algebra="Cstar", coalgebra="C", t="t")
    doc.write("fail_pairing.json")

    L = twist_entwining(A, C)
    doc = Doc(ring, "known failure: the twist map with one entry changed")
    doc.coalgebra("C", C, "C0")
    doc.algebra("A", A, "A0")
    doc.mor("lam", L.lam, "A0 (x) C0", "C0 (x) A0")
    mutate(doc, "lam", 0, 1)
    doc.struct("L", kind="entwining", algebra="A", coalgebra="C", **{"lambda": "lam"})
    doc.write("fail_entwining.json")

    doc = Doc(ring, "known failure: canonical entwined module with one action entry changed")
    doc.coalgebra("C", C, "C0")
    doc.algebra("A", A, "A0")
    doc.mor("lam", L.lam, "A0 (x) C0", "C0 (x) A0")
    doc.struct("L", kind="entwining", algebra="A", coalgebra="C", **{"lambda": "lam"})
    doc.entwined("M", canonical_entwined_module(L), "L", "A0", "C0", "CA")
    mutate(doc, "M.action", 0, 1)
    doc.write("fail_entwined_module.json")

    doc = Doc(ring, "reference error: the counit names a morphism that does not exist")
    doc.coalgebra("C", C, "C0")
    del doc.d["morphisms"]["C.counit"]
    doc.write("dangling_reference.json")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    grouplike_file(BaseRing.zmod(4), "grouplike_z4.json")
    grouplike_file(GF(3), "grouplike_gf3.json")
    comatrix_file(GF(2), "comatrix_gf2.json")
    comatrix_file(GF(3), "comatrix_gf3.json")
    zw_file()
    entwining_files()
    failing_files()


if __name__ == "__main__":
    main()
