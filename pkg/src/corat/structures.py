"""Algebras, coalgebras, modules and comodules as structure tensors.

Every law check compares two composites matrix-wise and records the first
source generator on which they differ.  Tensor products are strictly
associative and unital under the finmod conventions, so no reindexing
morphisms appear in the composites below.

The convolution product on hom(C, R) is f*g = f o (g (x) I_C) o Delta,
i.e. (f*g)(c) = sum g(c_1) f(c_2).  The opposite convention would give the
opposite algebra.
"""
from __future__ import annotations

import dataclasses
import itertools
import random
from dataclasses import dataclass, field
from math import gcd

from .errors import InvalidModule, InvalidStructure, NotAMorphism, TypeMismatch
from .exactscalar import BaseRing
from .finmod import (
    FinMod,
    ModMorphism,
    compose,
    compose_all,
    curry,
    curry_left,
    direct_sum,
    element_to_morphism,
    enumerate_elements,
    eval_left,
    eval_morphism,
    hom_map_from,
    hom_module,
    identity,
    is_iso,
    kernel,
    lift,
    submodule,
    tensor,
    tensor_mor,
)


# ------------------------------------------------------------------ reports

@dataclass
class Check:
    name: str
    status: str  # "pass", "fail" or "not-applicable"
    witness: dict | None = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.ok

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name, passed, witness=None, detail="") -> Check:
        check = Check(name, "pass" if passed else "fail", witness, detail)
        self.checks.append(check)
        return check

    def not_applicable(self, name, detail="") -> Check:
        check = Check(name, "not-applicable", None, detail)
        self.checks.append(check)
        return check

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(dataclasses.replace(c, name=prefix + c.name))

    def compare(self, name: str, lhs: ModMorphism, rhs: ModMorphism) -> Check:
        """Record whether two parallel composites agree."""
        if (lhs.source, lhs.target) != (rhs.source, rhs.target):
            raise TypeMismatch(f"{name}: composites are not parallel ({lhs.source}->{lhs.target} vs {rhs.source}->{rhs.target})")
        return self.add(name, lhs == rhs, difference_witness(lhs, rhs))

    def to_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": [c.to_dict() for c in self.checks]}


def difference_witness(lhs: ModMorphism, rhs: ModMorphism):
    """First source generator where two parallel maps differ, or None."""
    for j in range(lhs.source.ngens):
        a, b = lhs.column(j), rhs.column(j)
        if a != b:
            return {"generator": j, "lhs": [str(x) for x in a], "rhs": [str(x) for x in b]}
    return None


def _expect(f: ModMorphism, source: FinMod, target: FinMod, what: str):
    if f.source != source or f.target != target:
        raise TypeMismatch(f"{what} must be {source} -> {target}, got {f.source} -> {f.target}")


# --------------------------------------------------------------- structures

@dataclass(frozen=True)
class Algebra:
    carrier: FinMod
    mult: ModMorphism
    unit: ModMorphism

    @property
    def ring(self) -> BaseRing:
        return self.carrier.ring


@dataclass(frozen=True)
class Coalgebra:
    carrier: FinMod
    comult: ModMorphism
    counit: ModMorphism

    @property
    def ring(self) -> BaseRing:
        return self.carrier.ring


@dataclass(frozen=True)
class ModuleAction:
    algebra: Algebra
    carrier: FinMod
    action: ModMorphism


@dataclass(frozen=True)
class Comodule:
    coalgebra: Coalgebra
    carrier: FinMod
    coaction: ModMorphism


def check_algebra(A: Algebra) -> Report:
    X, R = A.carrier, FinMod.unit(A.ring)
    _expect(A.mult, tensor(X, X), X, "multiplication")
    _expect(A.unit, R, X, "unit")
    I = identity(X)
    rep = Report("algebra")
    rep.compare("associativity", compose(A.mult, tensor_mor(A.mult, I)), compose(A.mult, tensor_mor(I, A.mult)))
    rep.compare("left unit", compose(A.mult, tensor_mor(A.unit, I)), I)
    rep.compare("right unit", compose(A.mult, tensor_mor(I, A.unit)), I)
    return rep


def check_coalgebra(C: Coalgebra) -> Report:
    X, R = C.carrier, FinMod.unit(C.ring)
    _expect(C.comult, X, tensor(X, X), "comultiplication")
    _expect(C.counit, X, R, "counit")
    I = identity(X)
    rep = Report("coalgebra")
    rep.compare("coassociativity", compose(tensor_mor(C.comult, I), C.comult), compose(tensor_mor(I, C.comult), C.comult))
    rep.compare("left counit", compose(tensor_mor(C.counit, I), C.comult), I)
    rep.compare("right counit", compose(tensor_mor(I, C.counit), C.comult), I)
    return rep


def check_module(M: ModuleAction) -> Report:
    A, V = M.algebra, M.carrier
    _expect(M.action, tensor(A.carrier, V), V, "action")
    h, IV = M.action, identity(V)
    rep = Report("module")
    rep.compare("action associativity",
                compose(h, tensor_mor(A.mult, IV)),
                compose(h, tensor_mor(identity(A.carrier), h)))
    rep.compare("action unit", compose(h, tensor_mor(A.unit, IV)), IV)
    return rep


def check_comodule(N: Comodule) -> Report:
    C, V = N.coalgebra, N.carrier
    _expect(N.coaction, V, tensor(C.carrier, V), "coaction")
    th, IV = N.coaction, identity(V)
    rep = Report("comodule")
    rep.compare("coaction coassociativity",
                compose(tensor_mor(C.comult, IV), th),
                compose(tensor_mor(identity(C.carrier), th), th))
    rep.compare("coaction counit", compose(tensor_mor(C.counit, IV), th), IV)
    return rep


def check_algebra_morphism(phi: ModMorphism, source: Algebra, target: Algebra) -> Report:
    _expect(phi, source.carrier, target.carrier, "algebra morphism")
    rep = Report("algebra morphism")
    rep.compare("multiplicative", compose(phi, source.mult), compose(target.mult, tensor_mor(phi, phi)))
    rep.compare("unital", compose(phi, source.unit), target.unit)
    return rep


def check_coalgebra_morphism(psi: ModMorphism, source: Coalgebra, target: Coalgebra) -> Report:
    _expect(psi, source.carrier, target.carrier, "coalgebra morphism")
    rep = Report("coalgebra morphism")
    rep.compare("comultiplicative", compose(target.comult, psi), compose(tensor_mor(psi, psi), source.comult))
    rep.compare("counital", compose(target.counit, psi), source.counit)
    return rep


def require(report: Report, exc=InvalidStructure):
    if not report.ok:
        names = ", ".join(c.name for c in report.failures())
        raise exc(f"{report.title} fails: {names}", report)
    return report


# ------------------------------------------------------------ constructors

def base_algebra(ring: BaseRing) -> Algebra:
    """R as an algebra over itself."""
    R = FinMod.unit(ring)
    return Algebra(R, identity(R), identity(R))


def product_algebra(ring: BaseRing, k: int = 2) -> Algebra:
    """R x ... x R with componentwise multiplication."""
    A = FinMod.free(ring, k)
    mult = [[int(a == i and b == i) for a in range(k) for b in range(k)] for i in range(k)]
    unit = [[1] for _ in range(k)]
    return Algebra(A, ModMorphism(tensor(A, A), A, mult), ModMorphism(FinMod.unit(ring), A, unit))


def group_like(ring: BaseRing) -> Coalgebra:
    """R with Delta(g) = g (x) g and epsilon(g) = 1."""
    R = FinMod.unit(ring)
    return Coalgebra(R, identity(R), identity(R))


def comatrix(n: int, ring: BaseRing) -> Coalgebra:
    """Basis e_ij (index i*n + j), Delta(e_ij) = sum_k e_ik (x) e_kj, eps(e_ij) = [i == j]."""
    if n < 1:
        raise ValueError("comatrix needs n >= 1")
    N = n * n
    C = FinMod.free(ring, N)
    delta = [[0] * N for _ in range(N * N)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                delta[(i * n + k) * N + (k * n + j)][i * n + j] = 1
    eps = [[int(i == j) for i in range(n) for j in range(n)]]
    return Coalgebra(C, ModMorphism(C, tensor(C, C), delta), ModMorphism(C, FinMod.unit(ring), eps))


def zw_coalgebra_Z4() -> Coalgebra:
    """Z/4<g> + Z/2<x>: Delta g = g(x)g, Delta x = x(x)g + g(x)x, eps g = 1, eps x = 0."""
    ring = BaseRing.zmod(4)
    C = FinMod(ring, (4, 2))
    CC = tensor(C, C)  # g(x)g, g(x)x, x(x)g, x(x)x
    delta = ModMorphism(C, CC, [[1, 0], [0, 1], [0, 1], [0, 0]])
    eps = ModMorphism(C, FinMod.unit(ring), [[1, 0]])
    return Coalgebra(C, delta, eps)


def dual_algebra(C: Coalgebra, check: bool = True) -> Algebra:
    """The convolution algebra on hom(C, R)."""
    if check:
        require(check_coalgebra(C))
    X, R = C.carrier, FinMod.unit(C.ring)
    A = hom_module(X, R)
    e = eval_morphism(X, R)
    IA = identity(A)
    composite = compose_all(e, tensor_mor(IA, e, identity(X)), tensor_mor(IA, IA, C.comult))
    mult = curry(composite, tensor(A, A), X)
    unit = curry(C.counit, R, X)
    return Algebra(A, mult, unit)


def regular_module(A: Algebra) -> ModuleAction:
    return ModuleAction(A, A.carrier, A.mult)


def regular_comodule(C: Coalgebra) -> Comodule:
    return Comodule(C, C.carrier, C.comult)


def cofree_comodule(C: Coalgebra, Y: FinMod) -> Comodule:
    """(C (x) Y, Delta (x) Y)."""
    return Comodule(C, tensor(C.carrier, Y), tensor_mor(C.comult, identity(Y)))


def zero_module(A: Algebra) -> ModuleAction:
    Z = FinMod.zero(A.ring)
    return ModuleAction(A, Z, ModMorphism(tensor(A.carrier, Z), Z, []))


def zero_comodule(C: Coalgebra) -> Comodule:
    Z = FinMod.zero(C.ring)
    return Comodule(C, Z, ModMorphism(Z, tensor(C.carrier, Z), []))


def grouplike_comodule(C: Coalgebra, g, Y: FinMod) -> Comodule:
    """Y with coaction y |-> g (x) y for a group-like element g of C."""
    R = FinMod.unit(C.ring)
    gmap = ModMorphism.from_columns(R, C.carrier, [C.carrier.reduce(g)])
    return Comodule(C, Y, tensor_mor(gmap, identity(Y)))


def coinduced_module(A: Algebra, Y: FinMod) -> ModuleAction:
    """hom(A, Y) with (a . phi)(a') = phi(a' a)."""
    H = hom_module(A.carrier, Y)
    F = compose(eval_left(A.carrier, Y), tensor_mor(A.mult, identity(H)))
    return ModuleAction(A, H, curry_left(F, A.carrier, tensor(A.carrier, H)))


def restrict_scalars(M: ModuleAction, phi: ModMorphism, source: Algebra) -> ModuleAction:
    """M viewed as a module over `source` through phi: source -> M.algebra."""
    return ModuleAction(source, M.carrier, compose(M.action, tensor_mor(phi, identity(M.carrier))))


def direct_sum_module(*mods: ModuleAction) -> ModuleAction:
    A = mods[0].algebra
    S = direct_sum(*(M.carrier for M in mods))
    IA = identity(A.carrier)
    parts = [compose_all(inj, M.action, tensor_mor(IA, proj))
             for M, inj, proj in zip(mods, S.injections, S.projections)]
    action = parts[0]
    for p in parts[1:]:
        action = action + p
    return ModuleAction(A, S.module, action)


def direct_sum_comodule(*comods: Comodule) -> Comodule:
    C = comods[0].coalgebra
    S = direct_sum(*(N.carrier for N in comods))
    IC = identity(C.carrier)
    parts = [compose_all(tensor_mor(IC, inj), N.coaction, proj)
             for N, inj, proj in zip(comods, S.injections, S.projections)]
    coaction = parts[0]
    for p in parts[1:]:
        coaction = coaction + p
    return Comodule(C, S.module, coaction)


def restrict_to_submodule(M: ModuleAction, iota: ModMorphism) -> ModuleAction:
    """The action on a submodule K (given by a mono iota: K -> M); InvalidModule if K is not stable."""
    K = iota.source
    h = lift(compose(M.action, tensor_mor(identity(M.algebra.carrier), iota)), iota)
    if h is None:
        raise InvalidModule("submodule is not closed under the action")
    return ModuleAction(M.algebra, K, h)


def generated_submodule(M: ModuleAction, vectors) -> ModMorphism:
    """Inclusion of the A-submodule generated by the given elements."""
    A = M.algebra.carrier
    R = FinMod.unit(A.ring)
    cols = []
    for v in vectors:
        vmap = ModMorphism.from_columns(R, M.carrier, [M.carrier.reduce(v)])
        orbit = compose(M.action, tensor_mor(identity(A), vmap))
        cols.extend(orbit.column(j) for j in range(orbit.source.ngens))
    return submodule(M.carrier, cols)[1]


# --------------------------------------------------------- morphism spaces

def module_morphism_space(M: ModuleAction, N: ModuleAction):
    """(K, inclusion into hom(V, W)) of the A-linear maps V -> W."""
    A = M.algebra.carrier
    IA = identity(A)

    def defect(f):
        return compose(N.action, tensor_mor(IA, f)) - compose(f, M.action)

    L = hom_map_from((M.carrier, N.carrier), (tensor(A, M.carrier), N.carrier), defect)
    return kernel(L)


def comodule_morphism_space(M: Comodule, N: Comodule):
    """(K, inclusion into hom(V, W)) of the C-colinear maps V -> W."""
    IC = identity(M.coalgebra.carrier)

    def defect(f):
        return compose(N.coaction, f) - compose(tensor_mor(IC, f), M.coaction)

    L = hom_map_from((M.carrier, N.carrier), (M.carrier, tensor(M.coalgebra.carrier, N.carrier)), defect)
    return kernel(L)


def is_module_morphism(f: ModMorphism, M: ModuleAction, N: ModuleAction) -> bool:
    return compose(N.action, tensor_mor(identity(M.algebra.carrier), f)) == compose(f, M.action)


def is_comodule_morphism(f: ModMorphism, M: Comodule, N: Comodule) -> bool:
    return compose(N.coaction, f) == compose(tensor_mor(identity(M.coalgebra.carrier), f), M.coaction)


# ---------------------------------------------------------------- mutations

def entry_alternatives(f: ModMorphism, i: int, j: int) -> list:
    """Every other value the entry (i, j) may take while keeping f well defined."""
    cur = f.matrix[i, j]
    if f.ring.is_rational:
        return [cur + 1]
    b = f.target.orders[i]
    step = b // gcd(f.source.orders[j], b)
    return [v for v in range(0, b, step) if v != int(cur)]


def single_entry_mutations(f: ModMorphism):
    """Yield (i, j, value, mutated morphism) for every single-entry change."""
    for i in range(f.target.ngens):
        for j in range(f.source.ngens):
            for v in entry_alternatives(f, i, j):
                arr = f.matrix.copy()
                arr[i, j] = v
                yield i, j, v, ModMorphism(f.source, f.target, arr)


def structure_mutations(obj, fields):
    """Yield (field, i, j, value, mutated structure) over the named morphism fields."""
    for name in fields:
        for i, j, v, g in single_entry_mutations(getattr(obj, name)):
            yield name, i, j, v, dataclasses.replace(obj, **{name: g})


# ------------------------------------------------------------------ search

def search_coalgebras(ring: BaseRing, orders, seed: int = 0, limit: int = 50, max_candidates: int = 20000):
    """Valid coalgebra structures on the carrier with the given orders.

    Candidates (counit, comultiplication) are drawn from the full hom-sets
    in an order fixed by the seed: the whole space is shuffled when it has
    at most max_candidates points, otherwise max_candidates random points
    are tried.  Yields at most `limit` passing structures.
    """
    if ring.is_rational:
        raise ValueError("search_coalgebras needs a finite ring")
    C = FinMod(ring, tuple(orders))
    R = FinMod.unit(ring)
    CC = tensor(C, C)
    eps_space = list(enumerate_elements(hom_module(C, R)))
    delta_H = hom_module(C, CC)
    total = len(eps_space) * delta_H.size
    rng = random.Random(seed)
    if total <= max_candidates:
        deltas = list(enumerate_elements(delta_H, None))
        candidates = list(itertools.product(range(len(eps_space)), range(len(deltas))))
        rng.shuffle(candidates)
        stream = ((eps_space[a], deltas[b]) for a, b in candidates)
    else:
        stream = ((rng.choice(eps_space), tuple(rng.randrange(d) for d in delta_H.orders))
                  for _ in range(max_candidates))
    found = 0
    for eps_vec, delta_vec in stream:
        cand = Coalgebra(C, element_to_morphism(C, CC, delta_vec), element_to_morphism(C, R, eps_vec))
        if check_coalgebra(cand).ok:
            yield cand
            found += 1
            if found >= limit:
                return


def transport_coalgebra(C: Coalgebra, phi: ModMorphism) -> Coalgebra:
    """The coalgebra structure moved along an isomorphism phi: C.carrier -> X."""
    ok, inv = is_iso(phi)
    if not ok:
        raise NotAMorphism("transport_coalgebra needs an isomorphism")
    return Coalgebra(phi.target, compose_all(tensor_mor(phi, phi), C.comult, inv), compose(C.counit, inv))
