"""The rational part of a module over the algebra of a left pairing.

For an A-module M, theta: M -> hom(A, M) sends v to [a |-> a.v] and
t_M: C (x) M -> hom(A, M) is the alpha component of the pairing.  Rat(M)
is the pullback of theta along t_M; its coaction is the unique x with
t o x = theta whenever t is injective on the relevant object.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import CoactionNotUnique, InvalidModule
from .finmod import (
    FinMod,
    ModMorphism,
    compose,
    curry_left,
    curry_left_unit,
    enumerate_elements,
    equaliser,
    hom_post,
    identity,
    image,
    in_image,
    is_epi,
    is_iso,
    is_mono,
    kernel,
    lift,
    preimage,
    pullback,
    same_image,
    tensor,
    tensor_mor,
)
from .pairing import LeftPairing, alpha_component, phi_functor, sigma_component
from .structures import Comodule, ModuleAction, Report, check_comodule, check_module, require, restrict_to_submodule

log = logging.getLogger(__name__)


def _module_check(P: LeftPairing, M: ModuleAction, check: bool):
    if M.algebra != P.algebra:
        raise InvalidModule("module is over a different algebra than the pairing")
    if check:
        require(check_module(M), InvalidModule)


def theta_canonical(P: LeftPairing, M: ModuleAction, check: bool = True) -> ModMorphism:
    """M -> hom(A, M), v |-> [a |-> a.v]."""
    _module_check(P, M, check)
    return curry_left(M.action, P.algebra.carrier, M.carrier)


def theta_via_unit(P: LeftPairing, M: ModuleAction) -> ModMorphism:
    """theta rebuilt as hom(A, h) after the unit M -> hom(A, A (x) M)."""
    A = P.algebra.carrier
    return compose(hom_post(A, M.action), curry_left_unit(A, M.carrier))


def t_component(P: LeftPairing, M) -> ModMorphism:
    """C (x) M -> hom(A, M) built as hom(A, t (x) M) after the unit of A (x) - -| hom(A, -).

    This is a second construction of alpha_component(P, M); the two are
    compared in the tests.
    """
    V = M.carrier if isinstance(M, ModuleAction) else M
    A = P.algebra.carrier
    CV = tensor(P.coalgebra.carrier, V)
    return compose(hom_post(A, sigma_component(P, V)), curry_left_unit(A, CV))


@dataclass
class RationalStructure:
    pairing: LeftPairing
    module: ModuleAction
    theta: ModMorphism
    tmap: ModMorphism
    pullback_object: FinMod
    p1: ModMorphism
    p2: ModMorphism
    inclusion: ModMorphism          # canonical mono Rat(M) -> M
    rat_module: ModuleAction        # the restricted action on Rat(M)
    coaction: ModMorphism | None    # x with t o x = theta on Rat(M)
    coaction_unique: bool
    notes: list[str] = field(default_factory=list)

    @property
    def rat_carrier(self) -> FinMod:
        return self.inclusion.source

    @property
    def is_everything(self) -> bool:
        return is_epi(self.inclusion)

    def comodule(self) -> Comodule:
        if self.coaction is None:
            raise CoactionNotUnique("no coaction was recovered", None)
        return Comodule(self.pairing.coalgebra, self.rat_carrier, self.coaction)

    def report(self) -> Report:
        """Checks on the computed data.  Uniqueness and injectivity of t are facts, not failures."""
        rep = Report("rational part")
        rep.compare("pullback square", compose(self.theta, self.p1), compose(self.tmap, self.p2))
        if is_mono(self.p1):
            rep.add("p1 mono", True)
        else:
            rep.not_applicable("p1 mono", "t_M is not injective; Rat(M) is taken as the image of p1")
        if self.coaction is None:
            rep.add("coaction recovered", False, detail="theta does not factor through t on Rat(M)")
            return rep
        rep.compare("coaction factors theta", compose(alpha_component(self.pairing, self.rat_carrier), self.coaction),
                    theta_canonical(self.pairing, self.rat_module, check=False))
        if not self.coaction_unique:
            rep.not_applicable("coaction unique", "t on Rat(M) has a kernel; comodule laws not asserted")
            return rep
        rep.add("coaction unique", True)
        laws = check_comodule(self.comodule())
        second = alpha_component(self.pairing, tensor(self.pairing.coalgebra.carrier, self.rat_carrier))
        if not laws.ok and not is_mono(second):
            failed = ", ".join(c.name for c in laws.failures())
            rep.not_applicable("recovered comodule laws",
                               f"t on C (x) Rat(M) has a kernel, so the laws are not forced; failing: {failed}")
            return rep
        rep.extend(laws, "recovered ")
        back = phi_functor(self.pairing, self.comodule(), check=False)
        rep.compare("action recovered from coaction", back.action, self.rat_module.action)
        return rep


def rational_part(P: LeftPairing, M: ModuleAction, strict: bool = False, check: bool = True) -> RationalStructure:
    """Rat(M) as the pullback of theta along t_M.

    The pullback is computed even when t_M is not injective.  In that case
    the coaction may fail to be unique; this is recorded in the result, and
    raised as CoactionNotUnique when strict is set.
    """
    theta = theta_canonical(P, M, check)
    tmap = alpha_component(P, M.carrier)
    Pb, p1, p2 = pullback(theta, tmap)
    _, _, incl = image(p1)
    if is_epi(incl):
        incl = identity(M.carrier)
    rat = restrict_to_submodule(M, incl)
    notes = []
    if not is_mono(p1):
        notes.append("t_M is not a monomorphism; the pairing is not rational at this module")
    theta_r = theta_canonical(P, rat, check=False)
    t_r = alpha_component(P, rat.carrier)
    x = lift(theta_r, t_r)
    unique = is_mono(t_r)
    if x is not None and not unique:
        K, iota = kernel(t_r)
        msg = f"t on Rat(M) has kernel {K}; the coaction is not unique"
        notes.append(msg)
        log.info(msg)
        if strict:
            raise CoactionNotUnique(msg, {"kernel_generator": list(iota.column(0))})
    return RationalStructure(P, M, theta, tmap, Pb, p1, p2, incl, rat, x, unique, notes)


def is_rational_module(P: LeftPairing, M: ModuleAction):
    """(True, x) when theta factors as t o x, else (False, None).

    When t_M is mono this is exactly the case p1 iso, and x = p2 o p1^-1.
    """
    theta = theta_canonical(P, M)
    tmap = alpha_component(P, M.carrier)
    Pb, p1, p2 = pullback(theta, tmap)
    ok, inv = is_iso(p1)
    if ok:
        return True, compose(p2, inv)
    x = lift(theta, tmap)
    return (x is not None), x


def rat_oracle(P: LeftPairing, M: ModuleAction, bound: int = 65536) -> set:
    """{v in M : theta(v) lies in the image of t_M}, by enumeration."""
    theta = theta_canonical(P, M)
    tmap = alpha_component(P, M.carrier)
    return {v for v in enumerate_elements(M.carrier, bound) if in_image(tmap, theta(v))}


def rat_idempotence_check(P: LeftPairing, M: ModuleAction) -> bool:
    """Rat(Rat(M)) = Rat(M) as submodules of M."""
    rs = rational_part(P, M)
    rs2 = rational_part(P, rs.rat_module, check=False)
    return same_image(compose(rs.inclusion, rs2.inclusion), rs.inclusion)


def rat_submodule_pullback_check(P: LeftPairing, M: ModuleAction, iota: ModMorphism,
                                 rat: RationalStructure | None = None) -> bool:
    """Rat(M0) = iota^{-1}(Rat(M)) for a submodule iota: M0 -> M.  `rat` may carry a precomputed Rat(M)."""
    M0 = restrict_to_submodule(M, iota)
    r0 = rational_part(P, M0, check=False)
    r = rational_part(P, M) if rat is None else rat
    return same_image(preimage(iota, r.inclusion), r0.inclusion)


def equivalence_roundtrip(P: LeftPairing, N: Comodule) -> bool:
    """Phi(N) is rational and its recovered coaction is N's, entry for entry."""
    M = phi_functor(P, N)
    rs = rational_part(P, M, check=False)
    if not rs.is_everything or rs.coaction is None or not rs.coaction_unique:
        return False
    ok, x = is_rational_module(P, M)
    return ok and x == N.coaction and rs.coaction == N.coaction


def rat_via_equaliser(P: LeftPairing, M: ModuleAction) -> ModMorphism:
    """Image in M of the equaliser of C (x) theta and (C (x) t_M) o (Delta (x) M), under eps (x) M.

    A second description of Rat(M) used as a cross-check.
    """
    C = P.coalgebra
    IC = identity(C.carrier)
    theta = theta_canonical(P, M)
    tmap = alpha_component(P, M.carrier)
    f = tensor_mor(IC, theta)
    g = compose(tensor_mor(IC, tmap), tensor_mor(C.comult, identity(M.carrier)))
    _, e = equaliser(f, g)
    return image(compose(tensor_mor(C.counit, identity(M.carrier)), e))[2]
