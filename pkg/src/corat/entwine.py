"""Entwining structures lambda: A (x) C -> C (x) A and the algebra E = [C, A].

E carries the multiplication and unit obtained by factoring the composites
rho and tau below through the evaluation beta: E (x) C -> A; i: A -> E
sends a to c |-> eps(c) a.  Entwined modules become E-modules through
Xi, and rationality of the induced pairing is tested through alpha'.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import FactorizationFailed, InvalidEntwinedModule, NotApplicable, TypeMismatch
from .finmod import (
    FinMod,
    ModMorphism,
    coequaliser,
    compose,
    compose_all,
    curry,
    curry_left,
    descend,
    equaliser,
    eval_left,
    eval_morphism,
    hom_module,
    hom_pre,
    identity,
    is_iso,
    is_mono,
    lift,
    pullback,
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
    base_algebra,
    check_algebra,
    check_algebra_morphism,
    check_comodule,
    check_module,
    coinduced_module,
    regular_module,
    require,
)


@dataclass(frozen=True)
class Entwining:
    algebra: Algebra
    coalgebra: Coalgebra
    lam: ModMorphism

    @property
    def ring(self):
        return self.algebra.ring


@dataclass(frozen=True)
class EntwinedModule:
    entwining: Entwining
    carrier: FinMod
    coaction: ModMorphism
    action: ModMorphism

    def comodule(self) -> Comodule:
        return Comodule(self.entwining.coalgebra, self.carrier, self.coaction)

    def module(self) -> ModuleAction:
        return ModuleAction(self.entwining.algebra, self.carrier, self.action)


def check_entwining(L: Entwining) -> Report:
    A, C = L.algebra, L.coalgebra
    X, Y = A.carrier, C.carrier
    if L.lam.source != tensor(X, Y) or L.lam.target != tensor(Y, X):
        raise TypeMismatch(f"entwining map must be {X} (x) {Y} -> {Y} (x) {X}")
    IA, IC = identity(X), identity(Y)
    lam = L.lam
    rep = Report("entwining")
    rep.compare("unit", compose(lam, tensor_mor(A.unit, IC)), tensor_mor(IC, A.unit))
    rep.compare("counit", compose(tensor_mor(C.counit, IA), lam), tensor_mor(IA, C.counit))
    rep.compare("comultiplication",
                compose(tensor_mor(C.comult, IA), lam),
                compose_all(tensor_mor(IC, lam), tensor_mor(lam, IC), tensor_mor(IA, C.comult)))
    rep.compare("multiplication",
                compose(lam, tensor_mor(A.mult, IC)),
                compose_all(tensor_mor(IC, A.mult), tensor_mor(lam, IA), tensor_mor(IA, lam)))
    return rep


def check_entwined_module(M: EntwinedModule) -> Report:
    L = M.entwining
    V = M.carrier
    rep = Report("entwined module")
    rep.extend(check_comodule(M.comodule()))
    rep.extend(check_module(M.module()))
    IA, IC = identity(L.algebra.carrier), identity(L.coalgebra.carrier)
    rep.compare("mixed compatibility",
                compose(M.coaction, M.action),
                compose_all(tensor_mor(IC, M.action), tensor_mor(L.lam, identity(V)), tensor_mor(IA, M.coaction)))
    return rep


# -------------------------------------------------------------- stock data

def trivial_entwining(C: Coalgebra) -> Entwining:
    """A = R; lambda is the identity of C under R (x) C = C = C (x) R."""
    return Entwining(base_algebra(C.ring), C, identity(C.carrier))


def twist_entwining(A: Algebra, C: Coalgebra) -> Entwining:
    return Entwining(A, C, swap(A.carrier, C.carrier))


def canonical_entwined_module(L: Entwining) -> EntwinedModule:
    """(C (x) A, Delta (x) A, (C (x) m) o (lambda (x) A))."""
    return cofree_entwined_module(L, regular_module(L.algebra))


def cofree_entwined_module(L: Entwining, V: ModuleAction) -> EntwinedModule:
    """(C (x) V, Delta (x) V, (C (x) h) o (lambda (x) V))."""
    IC = identity(L.coalgebra.carrier)
    carrier = tensor(L.coalgebra.carrier, V.carrier)
    coaction = tensor_mor(L.coalgebra.comult, identity(V.carrier))
    action = compose(tensor_mor(IC, V.action), tensor_mor(L.lam, identity(V.carrier)))
    return EntwinedModule(L, carrier, coaction, action)


def comodule_as_entwined(L: Entwining, N: Comodule) -> EntwinedModule:
    """A comodule seen as an entwined module for the trivial entwining."""
    if L.algebra.carrier != FinMod.unit(L.ring):
        raise TypeMismatch("comodule_as_entwined needs the trivial entwining")
    return EntwinedModule(L, N.carrier, N.coaction, identity(N.carrier))


def zero_entwined_module(L: Entwining) -> EntwinedModule:
    Z = FinMod.zero(L.ring)
    return EntwinedModule(L, Z, ModMorphism(Z, tensor(L.coalgebra.carrier, Z), []),
                          ModMorphism(tensor(L.algebra.carrier, Z), Z, []))


# ----------------------------------------------------- representing algebra

@dataclass(frozen=True)
class EntwiningPackage:
    entwining: Entwining
    E: FinMod
    beta: ModMorphism
    unit: ModMorphism
    mult: ModMorphism
    i: ModMorphism
    hl: ModMorphism
    hr: ModMorphism

    @property
    def algebra(self) -> Algebra:
        return Algebra(self.E, self.mult, self.unit)


def beta_factor(f: ModMorphism, V: FinMod, C: FinMod) -> ModMorphism:
    """The unique V -> [C, A] whose composite with beta is f: V (x) C -> A."""
    return curry(f, V, C)


def representing_object(L: Entwining, check: bool = True) -> EntwiningPackage:
    if check:
        require(check_entwining(L))
    A, C = L.algebra, L.coalgebra
    X, Y = A.carrier, C.carrier
    R = FinMod.unit(L.ring)
    E = hom_module(Y, X)
    beta = eval_morphism(Y, X)
    IE, IC = identity(E), identity(Y)
    rho = compose_all(
        A.mult,
        tensor_mor(beta, identity(X)),
        tensor_mor(IE, L.lam),
        tensor_mor(IE, beta, IC),
        tensor_mor(IE, IE, C.comult),
    )
    mult = beta_factor(rho, tensor(E, E), Y)
    unit = beta_factor(compose(A.unit, C.counit), R, Y)
    i = beta_factor(tensor_mor(identity(X), C.counit), X, Y)
    hl = compose(mult, tensor_mor(i, IE))
    hr = compose(mult, tensor_mor(IE, i))
    return EntwiningPackage(L, E, beta, unit, mult, i, hl, hr)


def check_package(pkg: EntwiningPackage) -> Report:
    rep = Report("representing algebra")
    rep.extend(check_algebra(pkg.algebra), "E ")
    rep.extend(check_algebra_morphism(pkg.i, pkg.entwining.algebra, pkg.algebra), "i ")
    C = pkg.entwining.coalgebra.carrier
    rep.compare("beta factors through itself", beta_factor(pkg.beta, pkg.E, C), identity(pkg.E))
    return rep


# ----------------------------------------------------------------- functors

def xi_functor(pkg: EntwiningPackage, M: EntwinedModule, check: bool = True) -> ModuleAction:
    """(V, h o (beta (x) V) o (E (x) theta)) as an E-module."""
    if check:
        require(check_entwined_module(M), InvalidEntwinedModule)
    V = M.carrier
    act = compose_all(M.action, tensor_mor(pkg.beta, identity(V)), tensor_mor(identity(pkg.E), M.coaction))
    return ModuleAction(pkg.algebra, V, act)


def restrict_along_i(pkg: EntwiningPackage, N: ModuleAction) -> ModuleAction:
    A = pkg.entwining.algebra
    return ModuleAction(A, N.carrier, compose(N.action, tensor_mor(pkg.i, identity(N.carrier))))


@dataclass(frozen=True)
class InducedModule:
    module: ModuleAction      # E (x)_A V over E
    q: ModMorphism            # E (x) V -> E (x)_A V


@dataclass(frozen=True)
class CoinducedModule:
    module: ModuleAction      # {E, V}_A over E
    inclusion: ModMorphism    # {E, V}_A -> hom(E, V)


def induce_module(pkg: EntwiningPackage, V: ModuleAction) -> InducedModule:
    """E (x)_A V: the coequaliser of h^r (x) V and E (x) h_V."""
    IE, IV = identity(pkg.E), identity(V.carrier)
    _, q = coequaliser(tensor_mor(pkg.hr, IV), tensor_mor(IE, V.action))
    act = descend(compose(q, tensor_mor(pkg.mult, IV)), tensor_mor(IE, q))
    if act is None:
        raise FactorizationFailed("the E-action does not descend to E (x)_A V")
    return InducedModule(ModuleAction(pkg.algebra, q.target, act), q)


def induce_morphism(pkg: EntwiningPackage, f: ModMorphism, V: InducedModule, W: InducedModule) -> ModMorphism:
    """E (x)_A f between two induced modules."""
    u = descend(compose(W.q, tensor_mor(identity(pkg.E), f)), V.q)
    if u is None:
        raise FactorizationFailed("f is not A-linear")
    return u


def induce_unit(pkg: EntwiningPackage, V: ModuleAction, ind: InducedModule | None = None) -> ModMorphism:
    """V -> E (x)_A V, v |-> class of 1 (x) v."""
    ind = ind or induce_module(pkg, V)
    return compose(ind.q, tensor_mor(pkg.unit, identity(V.carrier)))


def induce_counit(pkg: EntwiningPackage, N: ModuleAction, ind: InducedModule | None = None) -> ModMorphism:
    """E (x)_A (restricted N) -> N induced by the E-action."""
    ind = ind or induce_module(pkg, restrict_along_i(pkg, N))
    k = descend(N.action, ind.q)
    if k is None:
        raise FactorizationFailed("the E-action is not A-balanced")
    return k


def hom_A_module(pkg: EntwiningPackage, V: ModuleAction) -> CoinducedModule:
    """{E, V}_A: the equaliser of {h^l, V} and the transpose k of h_V o (A (x) ev)."""
    A = pkg.entwining.algebra.carrier
    E, X = pkg.E, V.carrier
    H = hom_module(E, X)
    first = hom_pre(pkg.hl, X)
    k = curry_left(compose(V.action, tensor_mor(identity(A), eval_left(E, X))), tensor(A, E), H)
    _, e = equaliser(first, k)
    coind = coinduced_module(pkg.algebra, X)
    act = lift(compose(coind.action, tensor_mor(identity(E), e)), e)
    if act is None:
        raise FactorizationFailed("{E, V}_A is not stable under the E-action")
    return CoinducedModule(ModuleAction(pkg.algebra, e.source, act), e)


# ---------------------------------------------------------- induced pairing

def alpha_prime(pkg: EntwiningPackage, V: ModuleAction) -> ModMorphism:
    """C (x) V -> hom(E, V), the transpose of nu o (beta (x) V)."""
    C = pkg.entwining.coalgebra.carrier
    return curry_left(compose(V.action, tensor_mor(pkg.beta, identity(V.carrier))), pkg.E, tensor(C, V.carrier))


def alpha_entwined(pkg: EntwiningPackage, V: ModuleAction, coind: CoinducedModule | None = None) -> ModMorphism:
    """alpha: C (x) V -> {E, V}_A, the factorisation of alpha' through the equaliser."""
    coind = coind or hom_A_module(pkg, V)
    a = lift(alpha_prime(pkg, V), coind.inclusion)
    if a is None:
        raise FactorizationFailed("alpha' does not factor through {E, V}_A")
    return a


def comonad_module(L: Entwining, V: ModuleAction) -> ModuleAction:
    """The A-module (C (x) V, (C (x) h) o (lambda (x) V))."""
    M = cofree_entwined_module(L, V)
    return M.module()


def sigma_component(pkg: EntwiningPackage, V: ModuleAction) -> ModMorphism:
    """E (x)_A (C (x) V) -> V induced by nu o (beta (x) V)."""
    CV = comonad_module(pkg.entwining, V)
    ind = induce_module(pkg, CV)
    s = descend(compose(V.action, tensor_mor(pkg.beta, identity(V.carrier))), ind.q)
    if s is None:
        raise FactorizationFailed("nu o (beta (x) V) is not A-balanced")
    return s


@dataclass(frozen=True)
class EntwinedPairing:
    """Components of the pairing (E (x)_A -, C (x) -, sigma) attached to an entwining."""

    package: EntwiningPackage

    def monad(self, V: ModuleAction) -> InducedModule:
        return induce_module(self.package, V)

    def comonad(self, V: ModuleAction) -> ModuleAction:
        return comonad_module(self.package.entwining, V)

    def alpha(self, V: ModuleAction) -> ModMorphism:
        return alpha_entwined(self.package, V)

    def alpha_prime(self, V: ModuleAction) -> ModMorphism:
        return alpha_prime(self.package, V)

    def sigma(self, V: ModuleAction) -> ModMorphism:
        return sigma_component(self.package, V)


def pairing_of_entwining(L: Entwining) -> EntwinedPairing:
    return EntwinedPairing(representing_object(L))


def alpha_prime_family(L: Entwining, extra=()) -> list[ModuleAction]:
    """A-modules on which alpha' is tested: A itself, C (x) A, and `extra`."""
    A = regular_module(L.algebra)
    return [A, comonad_module(L, A), *extra]


def alpha_prime_report(pkg: EntwiningPackage, family) -> Report:
    rep = Report("alpha' monomorphism test")
    for k, V in enumerate(family):
        rep.add(f"alpha' mono at family member {k} ({V.carrier})", is_mono(alpha_prime(pkg, V)))
    return rep


def entwined_equivalence_roundtrip(L: Entwining, M: EntwinedModule, family=None, pkg=None) -> bool:
    """Xi(M) is rational for the induced pairing and gives back (theta, h) exactly.

    Raises NotApplicable when alpha' is not mono on the test family.
    """
    pkg = pkg or representing_object(L)
    family = alpha_prime_family(L, [M.module()]) if family is None else family
    if not alpha_prime_report(pkg, family).ok:
        raise NotApplicable("alpha' is not a monomorphism on the test family")
    N = xi_functor(pkg, M)
    if not check_module(N).ok:
        return False
    back = restrict_along_i(pkg, N)
    if back.action != M.action:
        return False
    coind = hom_A_module(pkg, back)
    E, V = pkg.E, M.carrier
    theta = lift(curry_left(N.action, E, V), coind.inclusion)
    if theta is None:
        return False
    alpha = alpha_entwined(pkg, back, coind)
    _, p1, p2 = pullback(theta, alpha)
    ok, inv = is_iso(p1)
    if not ok:
        return False
    return compose(p2, inv) == M.coaction
