import itertools
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from corpus_helpers import structures
from corat.errors import InvalidEntwinedModule, NotApplicable, TypeMismatch
from corat.exactscalar import GF, BaseRing
from corat.finmod import (
    FinMod,
    compose,
    element_to_morphism,
    enumerate_elements,
    hom_module,
    identity,
    is_iso,
    is_mono,
    tensor,
    tensor_mor,
)
from corat.entwine import (
    EntwinedModule,
    Entwining,
    alpha_entwined,
    alpha_prime,
    alpha_prime_report,
    beta_factor,
    canonical_entwined_module,
    check_entwined_module,
    check_entwining,
    check_package,
    cofree_entwined_module,
    comodule_as_entwined,
    entwined_equivalence_roundtrip,
    hom_A_module,
    induce_counit,
    induce_module,
    induce_morphism,
    induce_unit,
    pairing_of_entwining,
    representing_object,
    restrict_along_i,
    sigma_component,
    trivial_entwining,
    twist_entwining,
    xi_functor,
    zero_entwined_module,
)
from corat.pairing import alpha_component, eval_pairing, phi_functor
from corat.rational import equivalence_roundtrip
from corat.structures import (
    ModuleAction,
    check_module,
    cofree_comodule,
    comatrix,
    direct_sum_module,
    dual_algebra,
    group_like,
    is_module_morphism,
    product_algebra,
    regular_comodule,
    regular_module,
    structure_mutations,
    zero_comodule,
    zero_module,
    zw_coalgebra_Z4,
)

Z4 = BaseRing.zmod(4)
GF2, GF3 = GF(2), GF(3)


@lru_cache(maxsize=None)
def package(L):
    return representing_object(L)


def twist_pp(ring, C=None):
    """R x R twisted with C (group-like by default)."""
    return twist_entwining(product_algebra(ring, 2), C or group_like(ring))


# ------------------------------------------------------------ checkers

@pytest.mark.parametrize("L", [twist_pp(GF2), twist_pp(GF2, comatrix(2, GF2)), twist_pp(Z4),
                               twist_entwining(dual_algebra(group_like(GF3)), comatrix(2, GF3)),
                               trivial_entwining(comatrix(2, GF3)), trivial_entwining(zw_coalgebra_Z4())],
                         ids=["pp_gl_gf2", "pp_comatrix_gf2", "pp_gl_z4", "dual_comatrix_gf3",
                              "trivial_gf3", "trivial_zw"])
def test_stock_entwinings_pass(L):
    assert check_entwining(L).ok
    pkg = package(L)
    assert check_package(pkg).ok


def test_mutated_twist_fails():
    L = twist_pp(GF3)
    n = 0
    for _, _, _, _, bad in structure_mutations(L, ("lam",)):
        rep = check_entwining(bad)
        assert not rep.ok and all(c.witness is not None for c in rep.failures())
        n += 1
    assert n == 4 * 2
    big = twist_pp(GF2, comatrix(2, GF2))
    for _, _, _, _, bad in itertools.islice(structure_mutations(big, ("lam",)), 12):
        assert not check_entwining(bad).ok


def test_entwining_endpoint_mismatch():
    L = twist_pp(GF2)
    with pytest.raises(TypeMismatch):
        check_entwining(Entwining(L.algebra, comatrix(2, GF2), L.lam))


def test_entwined_module_examples():
    L = twist_pp(GF2, comatrix(2, GF2))
    assert check_entwined_module(canonical_entwined_module(L)).ok
    assert check_entwined_module(zero_entwined_module(L)).ok
    M = canonical_entwined_module(L)
    broken = 0
    for _, _, _, _, bad in itertools.islice(structure_mutations(M, ("coaction",)), 20):
        rep = check_entwined_module(bad)
        assert not rep.ok and rep.failures()[0].witness is not None
        broken += 1
    assert broken == 20


# ------------------------------------------------------------ representing algebra

def trivial_cases():
    return [comatrix(2, GF2), comatrix(2, GF3), zw_coalgebra_Z4(), group_like(Z4), group_like(GF3)]


@pytest.mark.parametrize("C", trivial_cases(), ids=["comatrix2", "comatrix3", "zw", "gl_z4", "gl_gf3"])
def test_trivial_entwining_gives_dual_algebra(C):
    pkg = package(trivial_entwining(C))
    A = dual_algebra(C)
    assert pkg.E == A.carrier and pkg.mult == A.mult and pkg.unit == A.unit


@pytest.mark.parametrize("ring", [GF2, GF3, Z4], ids=str)
def test_twist_over_group_like_collapses_to_A(ring):
    L = twist_pp(ring)
    pkg = package(L)
    A = L.algebra
    assert pkg.E == A.carrier and pkg.mult == A.mult and pkg.unit == A.unit
    assert pkg.i == identity(A.carrier)


def test_beta_factor_of_beta_is_identity():
    for L in (twist_pp(GF2, comatrix(2, GF2)), trivial_entwining(zw_coalgebra_Z4())):
        pkg = package(L)
        assert beta_factor(pkg.beta, pkg.E, L.coalgebra.carrier) == identity(pkg.E)


def morphism(X, Y, draw):
    H = hom_module(X, Y)
    vec = [draw(st.integers(0, d - 1)) for d in H.orders]
    return element_to_morphism(X, Y, vec)


@settings(max_examples=25)
@given(st.data(), st.sampled_from([(GF2, (2,)), (GF2, (2, 2)), (Z4, (4, 2)), (Z4, (2,))]))
def test_beta_factorisation_exists_and_is_unique(data, case):
    ring, orders = case
    L = twist_pp(ring)
    if ring == GF2 and len(orders) == 2:
        L = twist_pp(GF2, comatrix(2, GF2))
    pkg = package(L)
    C = L.coalgebra.carrier
    V = FinMod(ring, orders)
    f = morphism(tensor(V, C), L.algebra.carrier, data.draw)
    g = beta_factor(f, V, C)
    assert compose(pkg.beta, tensor_mor(g, identity(C))) == f
    # any other V -> E gives a different composite
    other = morphism(V, pkg.E, data.draw)
    if other != g:
        assert compose(pkg.beta, tensor_mor(other, identity(C))) != f


# ------------------------------------------------------------ Xi

def test_xi_degenerates_to_phi():
    for C in trivial_cases():
        L = trivial_entwining(C)
        pkg = package(L)
        P = eval_pairing(C)
        for N in (regular_comodule(C), cofree_comodule(C, FinMod.unit(C.ring)), zero_comodule(C)):
            assert xi_functor(pkg, comodule_as_entwined(L, N)).action == phi_functor(P, N).action


def test_comodule_as_entwined_needs_trivial_entwining():
    L = twist_pp(GF2)
    with pytest.raises(TypeMismatch):
        comodule_as_entwined(L, regular_comodule(L.coalgebra))


def test_xi_of_zero_is_zero():
    pkg = package(twist_pp(GF2, comatrix(2, GF2)))
    N = xi_functor(pkg, zero_entwined_module(pkg.entwining))
    assert N.carrier.is_zero and N.action.source == tensor(pkg.E, N.carrier)


def test_xi_regression_gl_z4():
    # E = A = Z/4 x Z/4 and V = C (x) A = A: the action is the product of R x R
    L = twist_pp(Z4)
    N = xi_functor(package(L), canonical_entwined_module(L))
    assert N.action.tolist() == [[1, 0, 0, 0], [0, 0, 0, 1]]


def xi_by_hand(L, pkg):
    """f (x) (e_ij (x) u_a) |-> sum_k e_kj (x) f(e_ik) u_a for R x R twisted with the 2x2 comatrix coalgebra."""
    C, A = L.coalgebra.carrier, L.algebra.carrier
    V = tensor(C, A)
    cols = []
    for f_idx in range(pkg.E.ngens):
        f = element_to_morphism(C, A, pkg.E.basis_element(f_idx))
        for i, j, a in itertools.product(range(2), range(2), range(2)):
            out = [0] * V.ngens
            for k in range(2):
                value = f.column(2 * i + k)
                out[(2 * k + j) * 2 + a] += value[a]
            cols.append(tuple(x % 2 for x in out))
    return cols


def test_xi_of_canonical_twist_module_by_hand():
    L = twist_pp(GF2, comatrix(2, GF2))
    pkg = package(L)
    M = canonical_entwined_module(L)
    N = xi_functor(pkg, M)
    assert N.carrier == M.carrier and check_module(N).ok
    assert N.action.tolist() == [list(r) for r in zip(*xi_by_hand(L, pkg))]
    assert (len(N.action.tolist()), len(N.action.tolist()[0])) == (8, 64)


def test_xi_refuses_invalid_entwined_module():
    L = twist_pp(GF3)
    M = canonical_entwined_module(L)
    bad = EntwinedModule(L, M.carrier, M.coaction.scale(2), M.action)
    with pytest.raises(InvalidEntwinedModule):
        xi_functor(package(L), bad)


def entwined_morphisms(M, W):
    """Carrier maps that are comodule and module morphisms, by enumeration."""
    H = hom_module(M.carrier, W.carrier)
    IC = identity(M.entwining.coalgebra.carrier)
    IA = identity(M.entwining.algebra.carrier)
    out, rest = [], []
    for v in enumerate_elements(H):
        g = element_to_morphism(M.carrier, W.carrier, v)
        co = compose(W.coaction, g) == compose(tensor_mor(IC, g), M.coaction)
        mod = compose(W.action, tensor_mor(IA, g)) == compose(g, M.action)
        (out if co and mod else rest).append((g, co))
    return out, rest


@pytest.mark.parametrize("ring", [GF2, GF3, Z4], ids=str)
def test_xi_preserves_and_reflects_morphisms(ring):
    L = twist_pp(ring)
    pkg = package(L)
    A = regular_module(L.algebra)
    mods = [canonical_entwined_module(L), zero_entwined_module(L),
            cofree_entwined_module(L, direct_sum_module(A, A))]
    assert all(entwined_equivalence_roundtrip(L, M, pkg=pkg) for M in mods)
    for M, W in itertools.product(mods, repeat=2):
        if hom_module(M.carrier, W.carrier).size > 4096:
            continue
        good, rest = entwined_morphisms(M, W)
        XM, XW = xi_functor(pkg, M), xi_functor(pkg, W)
        for g, _ in good:
            assert is_module_morphism(g, XM, XW)
        # reflection: E-linear comodule maps are entwined morphisms
        for g, co in rest:
            assert not (co and is_module_morphism(g, XM, XW))


# ------------------------------------------------------------ base change

def base_change_cases():
    return [twist_pp(GF2), twist_pp(Z4), twist_pp(GF2, comatrix(2, GF2)), trivial_entwining(comatrix(2, GF2)),
            trivial_entwining(zw_coalgebra_Z4())]


IDS = ["pp_gl_gf2", "pp_gl_z4", "pp_comatrix_gf2", "trivial_comatrix", "trivial_zw"]


@pytest.mark.parametrize("L", base_change_cases(), ids=IDS)
def test_restrict_along_i(L):
    pkg = package(L)
    N = restrict_along_i(pkg, regular_module(pkg.algebra))
    assert check_module(N).ok and N.carrier == pkg.E
    assert N.action == compose(pkg.mult, tensor_mor(pkg.i, identity(pkg.E)))


@pytest.mark.parametrize("L", base_change_cases(), ids=IDS)
def test_induce_regular_is_E(L):
    pkg = package(L)
    A = regular_module(L.algebra)
    ind = induce_module(pkg, A)
    assert check_module(ind.module).ok
    assert ind.module.carrier.size == pkg.E.size
    # e |-> class of e (x) 1 is an isomorphism E -> E (x)_A A
    ok, _ = is_iso(compose(ind.q, tensor_mor(identity(pkg.E), L.algebra.unit)))
    assert ok


def test_induce_over_base_ring_is_plain_tensor():
    L = trivial_entwining(comatrix(2, GF2))
    pkg = package(L)
    for X in (FinMod.unit(GF2), FinMod(GF2, (2, 2))):
        V = ModuleAction(L.algebra, X, identity(X))
        ind = induce_module(pkg, V)
        assert is_iso(ind.q)[0] and restrict_along_i(pkg, ind.module).carrier.size == tensor(pkg.E, X).size


def A_linear_count(pkg, V):
    """|hom_A(E, V)| by enumerating hom(E, V) and testing f(a.e) = a.f(e)."""
    E = pkg.E
    H = hom_module(E, V.carrier)
    IA = identity(pkg.entwining.algebra.carrier)
    n = 0
    for v in enumerate_elements(H):
        f = element_to_morphism(E, V.carrier, v)
        n += compose(f, pkg.hl) == compose(V.action, tensor_mor(IA, f))
    return n


@pytest.mark.parametrize("L", [twist_pp(GF2), twist_pp(GF3), twist_pp(Z4), trivial_entwining(comatrix(2, GF2))],
                         ids=["gf2", "gf3", "z4", "trivial_comatrix"])
def test_hom_A_module_of_regular(L):
    pkg = package(L)
    A = regular_module(L.algebra)
    co = hom_A_module(pkg, A)
    assert check_module(co.module).ok and is_mono(co.inclusion)
    assert co.module.carrier.size == A_linear_count(pkg, A)


@pytest.mark.parametrize("L", base_change_cases(), ids=IDS)
def test_adjunction_triangles(L):
    pkg = package(L)
    A = regular_module(L.algebra)
    mods = [A, zero_module(L.algebra)]
    if pkg.E.ngens <= 4:
        # E (x)_A (E (x)_A (A + A)) is too slow to build for the larger packages
        mods.append(direct_sum_module(A, A))
    for V in mods:
        ind = induce_module(pkg, V)
        eta = induce_unit(pkg, V, ind)
        back = restrict_along_i(pkg, ind.module)
        assert is_module_morphism(eta, V, back)
        ind2 = induce_module(pkg, back)
        eps = induce_counit(pkg, ind.module, ind2)
        assert compose(eps, induce_morphism(pkg, eta, ind, ind2)) == identity(ind.module.carrier)
    for N in (regular_module(pkg.algebra), zero_module(pkg.algebra)):
        GN = restrict_along_i(pkg, N)
        ind = induce_module(pkg, GN)
        assert compose(induce_counit(pkg, N, ind), induce_unit(pkg, GN, ind)) == identity(N.carrier)


# ------------------------------------------------------------ alpha' and the induced pairing

@pytest.mark.parametrize("C", trivial_cases(), ids=["comatrix2", "comatrix3", "zw", "gl_z4", "gl_gf3"])
def test_alpha_prime_degenerates_to_alpha(C):
    L = trivial_entwining(C)
    pkg = package(L)
    P = eval_pairing(C)
    ds = [d for d in range(2, C.ring.modulus + 1) if C.ring.modulus % d == 0]
    for X in [FinMod.unit(C.ring), FinMod.zero(C.ring)] + [FinMod.cyclic(C.ring, d) for d in ds]:
        V = ModuleAction(L.algebra, X, identity(X))
        assert alpha_prime(pkg, V) == alpha_component(P, X)


def test_alpha_prime_of_zero():
    pkg = package(twist_pp(GF2, comatrix(2, GF2)))
    a = alpha_prime(pkg, zero_module(pkg.entwining.algebra))
    assert a.source.is_zero and a.target.is_zero


def test_alpha_prime_mono_for_comatrix_twist():
    L = twist_pp(GF2, comatrix(2, GF2))
    pkg = package(L)
    V = regular_module(L.algebra)
    assert is_mono(alpha_prime(pkg, V))
    # factorisation through {E, V}_A recovers alpha'
    co = hom_A_module(pkg, V)
    assert compose(co.inclusion, alpha_entwined(pkg, V, co)) == alpha_prime(pkg, V)


def test_pairing_of_entwining_components():
    L = twist_pp(GF2, comatrix(2, GF2))
    PL = pairing_of_entwining(L)
    V = regular_module(L.algebra)
    assert PL.alpha_prime(V) == alpha_prime(PL.package, V)
    assert PL.comonad(V).carrier == tensor(L.coalgebra.carrier, V.carrier)
    s = PL.sigma(V)
    assert s == sigma_component(PL.package, V) and s.target == V.carrier
    assert PL.monad(V).module.carrier.size == PL.package.E.size


# ------------------------------------------------------------ round trip

def test_roundtrip_examples():
    for L in (twist_pp(GF2, comatrix(2, GF2)), twist_pp(Z4), trivial_entwining(comatrix(2, GF3))):
        pkg = package(L)
        assert entwined_equivalence_roundtrip(L, canonical_entwined_module(L), pkg=pkg)
        assert entwined_equivalence_roundtrip(L, zero_entwined_module(L), pkg=pkg)


def test_roundtrip_reduces_to_rational_roundtrip():
    for C in (comatrix(2, GF2), comatrix(2, GF3), group_like(Z4)):
        L = trivial_entwining(C)
        P = eval_pairing(C)
        for N in (regular_comodule(C), cofree_comodule(C, FinMod.unit(C.ring))):
            assert entwined_equivalence_roundtrip(L, comodule_as_entwined(L, N), pkg=package(L))
            assert equivalence_roundtrip(P, N)


def test_roundtrip_not_applicable_when_alpha_prime_has_kernel():
    L = trivial_entwining(zw_coalgebra_Z4())
    pkg = package(L)
    X = FinMod.cyclic(Z4, 2)
    V = ModuleAction(L.algebra, X, identity(X))
    assert not alpha_prime_report(pkg, [V]).ok
    M = comodule_as_entwined(L, regular_comodule(L.coalgebra))
    with pytest.raises(NotApplicable):
        entwined_equivalence_roundtrip(L, M, family=[V], pkg=pkg)


def test_corpus_entwined_modules_roundtrip():
    seen = 0
    for _, _, M in structures("entwined_module"):
        assert check_entwined_module(M).ok
        assert entwined_equivalence_roundtrip(M.entwining, M, pkg=package(M.entwining))
        seen += 1
    assert seen >= 10
