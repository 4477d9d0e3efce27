"""Left pairings t: A (x) C -> R between an algebra and a coalgebra.

Functor-level data (the monad A (x) -, the comonad C (x) -, the maps
alpha and beta) are only ever computed as components at a given object.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidComodule, NotAMorphism, TypeMismatch
from .finmod import (
    FinMod,
    ModMorphism,
    compose,
    compose_all,
    curry,
    curry_left,
    divisors,
    dual,
    eval_morphism,
    hom_map_from,
    identity,
    is_epi,
    is_iso,
    is_mono,
    is_projective,
    swap,
    tensor,
    tensor_mor,
)
from .structures import (
    Algebra,
    Coalgebra,
    Comodule,
    ModuleAction,
    Report,
    check_algebra_morphism,
    check_coalgebra_morphism,
    check_comodule,
    dual_algebra,
    require,
)


@dataclass(frozen=True)
class LeftPairing:
    algebra: Algebra
    coalgebra: Coalgebra
    t: ModMorphism

    @property
    def ring(self):
        return self.algebra.ring


def check_left_pairing(P: LeftPairing) -> Report:
    A, C = P.algebra, P.coalgebra
    X, Y, R = A.carrier, C.carrier, FinMod.unit(A.ring)
    if P.t.source != tensor(X, Y) or P.t.target != R:
        raise TypeMismatch(f"pairing must be {X} (x) {Y} -> {R}")
    IA, IC = identity(X), identity(Y)
    rep = Report("left pairing")
    rep.compare("multiplication diagram",
                compose(P.t, tensor_mor(A.mult, IC)),
                compose_all(P.t, tensor_mor(IA, P.t, IC), tensor_mor(IA, IA, C.comult)))
    rep.compare("unit diagram", compose(P.t, tensor_mor(A.unit, IC)), C.counit)
    return rep


def eval_pairing(C: Coalgebra) -> LeftPairing:
    """(C*, C, evaluation)."""
    A = dual_algebra(C)
    return LeftPairing(A, C, eval_morphism(C.carrier, FinMod.unit(C.ring)))


def sigma_component(P: LeftPairing, Y: FinMod) -> ModMorphism:
    """t (x) Y : A (x) C (x) Y -> Y."""
    return tensor_mor(P.t, identity(Y))


def alpha_component(P: LeftPairing, Y: FinMod) -> ModMorphism:
    """C (x) Y -> hom(A, Y), c (x) y |-> [a |-> t(a (x) c) y]."""
    CY = tensor(P.coalgebra.carrier, Y)
    return curry_left(sigma_component(P, Y), P.algebra.carrier, CY)


def beta_map(P: LeftPairing, X: FinMod, Y: FinMod, f: ModMorphism) -> ModMorphism:
    """beta(f) = (t (x) Y) o (A (x) f) for f: X -> C (x) Y."""
    C = P.coalgebra.carrier
    if f.source != X or f.target != tensor(C, Y):
        raise TypeMismatch("beta_map needs f: X -> C (x) Y")
    return compose(sigma_component(P, Y), tensor_mor(identity(P.algebra.carrier), f))


def beta_hom_map(P: LeftPairing, X: FinMod, Y: FinMod) -> ModMorphism:
    """beta as a linear map hom(X, C (x) Y) -> hom(A (x) X, Y)."""
    C, A = P.coalgebra.carrier, P.algebra.carrier
    return hom_map_from((X, tensor(C, Y)), (tensor(A, X), Y), lambda f: beta_map(P, X, Y, f))


# ------------------------------------------------------------- rationality

def cyclic_family(ring) -> list[FinMod]:
    if ring.is_rational:
        return [FinMod.unit(ring)]
    return [FinMod.cyclic(ring, d) for d in divisors(ring.modulus) if d > 1]


def default_family(P: LeftPairing, extra=()) -> list[FinMod]:
    """R, C, C*, the algebra carrier, every cyclic R/(d), then `extra`."""
    ring = P.ring
    C = P.coalgebra.carrier
    cands = [FinMod.unit(ring), C, dual(C), P.algebra.carrier, *cyclic_family(ring), *extra]
    out = []
    for Y in cands:
        if Y not in out:
            out.append(Y)
    return out


@dataclass
class RationalityReport:
    family: list[FinMod]
    per_object: list[dict] = field(default_factory=list)
    verdict: bool = True
    projectivity: bool = True

    @property
    def agrees(self) -> bool:
        """Whether the family verdict matches the projectivity proxy."""
        return self.verdict == self.projectivity

    @property
    def all_iso(self) -> bool:
        return all(row["iso"] for row in self.per_object)

    def to_dict(self) -> dict:
        return {
            "verdict": "rational-on-family" if self.verdict else "not-rational",
            "projectivity": self.projectivity,
            "agrees_with_projectivity": self.agrees,
            "scope": "certified only on the listed family",
            "family": [
                {"object": list(row["object"].orders), "mono": row["mono"], "epi": row["epi"], "iso": row["iso"]}
                for row in self.per_object
            ],
        }


def is_rational(P: LeftPairing, family=None) -> RationalityReport:
    family = default_family(P) if family is None else list(family)
    rep = RationalityReport(family, projectivity=is_projective(P.coalgebra.carrier))
    for Y in family:
        a = alpha_component(P, Y)
        mono, epi = is_mono(a), is_epi(a)
        rep.per_object.append({"object": Y, "mono": mono, "epi": epi, "iso": mono and epi})
    rep.verdict = all(row["mono"] for row in rep.per_object)
    return rep


def phi_functor(P: LeftPairing, N: Comodule, check: bool = True) -> ModuleAction:
    """The A-module (V, (t (x) V) o (A (x) theta)) of a C-comodule."""
    if check:
        require(check_comodule(N), InvalidComodule)
    h = compose(sigma_component(P, N.carrier), tensor_mor(identity(P.algebra.carrier), N.coaction))
    return ModuleAction(P.algebra, N.carrier, h)


# ------------------------------------------------------- duality and purity

def gamma_of_pairing(P: LeftPairing) -> ModMorphism:
    """C -> A*, the transpose of t o swap(C, A)."""
    A, C = P.algebra.carrier, P.coalgebra.carrier
    return curry(compose(P.t, swap(C, A)), C, A)


def dual_tensor_map(A: FinMod, X: FinMod) -> ModMorphism:
    """A* (x) X -> hom(A, X), phi (x) x |-> [a |-> phi(a) x]."""
    R = FinMod.unit(A.ring)
    As = dual(A)
    f = compose(tensor_mor(identity(X), eval_morphism(A, R)), tensor_mor(swap(As, X), identity(A)))
    return curry(f, tensor(As, X), A)


def is_pure(g: ModMorphism, family) -> bool:
    return all(is_mono(tensor_mor(g, identity(X))) for X in family)


def nuclear_alpha(V: FinMod, X: FinMod) -> ModMorphism:
    """V (x) X -> hom(V*, X), v (x) x |-> [phi |-> phi(v) x]."""
    R = FinMod.unit(V.ring)
    Vs = dual(V)
    return curry_left(tensor_mor(eval_morphism(V, R), identity(X)), Vs, tensor(V, X))


def is_nuclear(V: FinMod, family=None) -> bool:
    family = ([FinMod.unit(V.ring), V, *cyclic_family(V.ring)] if family is None else family)
    return all(is_iso(nuclear_alpha(V, X))[0] for X in family)


def is_prenuclear(V: FinMod, family=None) -> bool:
    family = ([FinMod.unit(V.ring), V, *cyclic_family(V.ring)] if family is None else family)
    return all(is_mono(nuclear_alpha(V, X)) for X in family)


# --------------------------------------------------------------- transport

def transport_pairing_along_algebra_morphism(P: LeftPairing, source: Algebra, phi: ModMorphism) -> LeftPairing:
    """t' = t o (phi (x) C) for an algebra morphism phi: source -> P.algebra."""
    rep = check_algebra_morphism(phi, source, P.algebra)
    if not rep.ok:
        raise NotAMorphism("not an algebra morphism: " + ", ".join(c.name for c in rep.failures()))
    return LeftPairing(source, P.coalgebra, compose(P.t, tensor_mor(phi, identity(P.coalgebra.carrier))))


def transport_pairing_along_coalgebra_morphism(P: LeftPairing, source: Coalgebra, psi: ModMorphism) -> LeftPairing:
    """t' = t o (A (x) psi) for a coalgebra morphism psi: source -> P.coalgebra."""
    rep = check_coalgebra_morphism(psi, source, P.coalgebra)
    if not rep.ok:
        raise NotAMorphism("not a coalgebra morphism: " + ", ".join(c.name for c in rep.failures()))
    return LeftPairing(P.algebra, source, compose(P.t, tensor_mor(identity(P.algebra.carrier), psi)))
