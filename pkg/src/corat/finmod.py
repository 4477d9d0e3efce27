"""Finitely generated modules over Z/m or Q and the morphisms between them.

A module is a direct sum of cyclic modules R/(d) listed in a fixed
generator order.  Over Z/m each order d satisfies d >= 2 and d | m; over
Q every generator is free and its order is recorded as 0.

Morphism matrices have one row per target generator and one column per
source generator.  Entry (i, j) is the coefficient of target generator i
in the image of source generator j, reduced modulo the order of target
generator i.

Generator conventions that every other module relies on:

* tensor(M, N) lists pairs (i, j) left-factor-major and drops pairs with
  gcd(a_i, b_j) = 1.  Nested tensors therefore agree on the nose, so the
  associators and unitors are identity matrices.
* hom_module(M, N) lists pairs (j, i) source-major; the generator for
  (j, i) sends source generator j to (b_i / gcd(a_j, b_i)) times target
  generator i and every other source generator to 0.

Kernels, cokernels, images and everything built from them come back in
invariant-factor form (d_1 | d_2 | ...).  Tensor, hom and direct sums keep
the structural generator order above, which need not be a divisibility
chain; equality of modules is equality of the order tuples.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm, prod

import numpy as np

from .errors import InfiniteRing, InvalidMorphism, TooLarge, TypeMismatch
from .exactscalar import BaseRing, smith_form_full

DEFAULT_BOUND = 65536


@dataclass(frozen=True)
class FinMod:
    ring: BaseRing
    orders: tuple[int, ...] = ()

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        object.__setattr__(self, "orders", orders)
        m = self.ring.modulus
        for d in orders:
            if m is None:
                if d != 0:
                    raise ValueError("over Q every generator is free (order 0)")
            elif d < 2 or m % d:
                raise ValueError(f"generator order {d} must be >= 2 and divide {m}")

    @classmethod
    def zero(cls, ring):
        return cls(ring, ())

    @classmethod
    def cyclic(cls, ring, d):
        return cls(ring, () if d == 1 else (d,))

    @classmethod
    def free(cls, ring, n=1):
        return cls(ring, (ring.free_order,) * n)

    @classmethod
    def unit(cls, ring):
        """The base ring R as a module over itself."""
        return cls.free(ring, 1)

    @classmethod
    def from_invariant_factors(cls, ring, factors):
        """Build from a divisibility chain; a bare int over Q is a dimension."""
        if ring.is_rational:
            n = factors if isinstance(factors, int) else len(factors)
            return cls.free(ring, n)
        kept = [int(d) for d in factors if int(d) != 1]
        for a, b in zip(kept, kept[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain, got {kept}")
        return cls(ring, tuple(kept))

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def is_zero(self) -> bool:
        return not self.orders

    @property
    def size(self):
        """Number of elements, or None for a nonzero module over Q."""
        if self.ring.is_rational:
            return 1 if self.is_zero else None
        return prod(self.orders)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """The canonical divisibility chain of this module (dimension over Q)."""
        if self.ring.is_rational or self.is_canonical:
            return self.orders
        n = self.ngens
        _, _, D, _, _ = smith_form_full([[self.orders[i] if i == j else 0 for j in range(n)] for i in range(n)], False)
        return tuple(D[i][i] for i in range(n) if D[i][i] != 1)

    @property
    def is_canonical(self) -> bool:
        return all(b % a == 0 for a, b in zip(self.orders, self.orders[1:])) if self.ring.is_finite else True

    def is_isomorphic(self, other: "FinMod") -> bool:
        return self.ring == other.ring and self.invariant_factors == other.invariant_factors

    def reduce(self, vec) -> tuple:
        vec = tuple(vec)
        if len(vec) != self.ngens:
            raise TypeMismatch(f"element of length {len(vec)} for module with {self.ngens} generators")
        if self.ring.is_rational:
            return tuple(Fraction(x) for x in vec)
        return tuple(int(x) % d for x, d in zip(vec, self.orders))

    def zero_element(self) -> tuple:
        return self.reduce((0,) * self.ngens)

    def basis_element(self, j) -> tuple:
        return self.reduce(tuple(int(i == j) for i in range(self.ngens)))

    def __str__(self):
        if self.is_zero:
            return "0"
        if self.ring.is_rational:
            return f"Q^{self.ngens}"
        return " + ".join(f"Z/{d}" for d in self.orders)


def _same_ring(*mods):
    rings = {M.ring for M in mods}
    if len(rings) > 1:
        raise TypeMismatch(f"modules over different rings: {sorted(map(str, rings))}")


# ------------------------------------------------------------------ matrices

def _zeros(ring, rows, cols):
    if ring.is_rational:
        out = np.empty((rows, cols), dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros((rows, cols), dtype=np.int64)


def _asarray(ring, data, rows, cols):
    if isinstance(data, np.ndarray):
        arr = data
    else:
        data = [list(r) for r in data]
        if rows == 0 or cols == 0:
            return _zeros(ring, rows, cols)
        arr = np.array(data, dtype=object)
    if arr.shape != (rows, cols):
        if arr.size == 0 and rows * cols == 0:
            return _zeros(ring, rows, cols)
        raise TypeMismatch(f"matrix of shape {arr.shape}, expected {(rows, cols)}")
    if ring.is_rational:
        out = np.empty((rows, cols), dtype=object)
        for idx, x in np.ndenumerate(arr):
            out[idx] = Fraction(x)
        return out
    if arr.dtype == object:
        return np.array([[int(x) % ring.modulus for x in row] for row in arr], dtype=np.int64).reshape(rows, cols)
    return (arr.astype(np.int64) % ring.modulus)


def _matmul(ring, a, b):
    if ring.is_rational:
        if a.shape[1] == 0:
            return _zeros(ring, a.shape[0], b.shape[1])
        return a.dot(b)
    m = ring.modulus
    n = a.shape[1] * (m - 1) ** 2
    if n < 2 ** 52:
        # float BLAS is exact below 2^53 and far faster than integer matmul
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    if n >= 2 ** 62:
        out = a.astype(object).dot(b.astype(object)) % m
        return out.astype(np.int64)
    return a @ b


class ModMorphism:
    """A module map given by its matrix in canonical residue form."""

    def __init__(self, source: FinMod, target: FinMod, matrix, check: bool = True):
        _same_ring(source, target)
        self.source = source
        self.target = target
        ring = source.ring
        arr = _asarray(ring, matrix, target.ngens, source.ngens)
        if ring.is_finite and arr.size:
            b = np.array(target.orders, dtype=np.int64)[:, None]
            arr = arr % b
            if check:
                a = np.array(source.orders, dtype=np.int64)[None, :]
                bad = np.argwhere((arr * a) % b != 0)
                if len(bad):
                    i, j = (int(x) for x in bad[0])
                    raise InvalidMorphism(
                        f"entry ({i}, {j}) = {arr[i, j]} is not well defined: "
                        f"{source.orders[j]} * {arr[i, j]} != 0 mod {target.orders[i]}")
        arr.setflags(write=False)
        self.matrix = arr
        self._cache = {}

    @classmethod
    def from_columns(cls, source, target, columns):
        cols = [list(c) for c in columns]
        if len(cols) != source.ngens:
            raise TypeMismatch("wrong number of columns")
        rows = [[c[i] for c in cols] for i in range(target.ngens)]
        return cls(source, target, rows)

    @property
    def ring(self) -> BaseRing:
        return self.source.ring

    def tolist(self) -> list[list]:
        if self.ring.is_rational:
            return [[Fraction(x) for x in row] for row in self.matrix]
        return [[int(x) for x in row] for row in self.matrix]

    def column(self, j) -> tuple:
        col = self.matrix[:, j]
        return tuple(Fraction(x) for x in col) if self.ring.is_rational else tuple(int(x) for x in col)

    def __call__(self, vec) -> tuple:
        v = _asarray(self.ring, [list(self.source.reduce(vec))], 1, self.source.ngens)[0]
        out = _matmul(self.ring, self.matrix, v.reshape(-1, 1)).reshape(-1)
        return self.target.reduce(out.tolist())

    def __eq__(self, other):
        if not isinstance(other, ModMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.source, self.target, tuple(map(tuple, self.tolist()))))

    def _check_parallel(self, other):
        if self.source != other.source or self.target != other.target:
            raise TypeMismatch(f"morphisms {self.source}->{self.target} and {other.source}->{other.target} are not parallel")

    def __add__(self, other):
        self._check_parallel(other)
        return ModMorphism(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        self._check_parallel(other)
        return ModMorphism(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self):
        return ModMorphism(self.source, self.target, -self.matrix, check=False)

    def scale(self, c):
        c = self.ring.reduce(c)
        return ModMorphism(self.source, self.target, self.matrix * c, check=False)

    def __matmul__(self, other):
        return compose(self, other)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.matrix != 0)

    def __repr__(self):
        return f"ModMorphism({self.source} -> {self.target}, {self.tolist()})"


def compose(g: ModMorphism, f: ModMorphism) -> ModMorphism:
    """g after f."""
    if f.target != g.source:
        raise TypeMismatch(f"cannot compose {g.source}->{g.target} after {f.source}->{f.target}")
    return ModMorphism(f.source, g.target, _matmul(f.ring, g.matrix, f.matrix), check=False)


def compose_all(*fs: ModMorphism) -> ModMorphism:
    """compose_all(h, g, f) = h after g after f."""
    return reduce(compose, fs)


def identity(M: FinMod) -> ModMorphism:
    arr = _zeros(M.ring, M.ngens, M.ngens)
    for i in range(M.ngens):
        arr[i, i] = 1
    return ModMorphism(M, M, arr, check=False)


def zero_morphism(M: FinMod, N: FinMod) -> ModMorphism:
    return ModMorphism(M, N, _zeros(M.ring, N.ngens, M.ngens), check=False)


def scalar_morphism(M: FinMod, c) -> ModMorphism:
    """Multiplication by the scalar c on M."""
    return identity(M).scale(c)


# ------------------------------------------------------------- direct sums

@dataclass(frozen=True)
class Biproduct:
    module: FinMod
    injections: tuple[ModMorphism, ...]
    projections: tuple[ModMorphism, ...]


def direct_sum(*mods: FinMod) -> Biproduct:
    if not mods:
        raise TypeMismatch("direct_sum needs at least one summand")
    _same_ring(*mods)
    ring = mods[0].ring
    S = FinMod(ring, sum((M.orders for M in mods), ()))
    injections, projections = [], []
    offset = 0
    for M in mods:
        inj = _zeros(ring, S.ngens, M.ngens)
        for i in range(M.ngens):
            inj[offset + i, i] = 1
        injections.append(ModMorphism(M, S, inj, check=False))
        projections.append(ModMorphism(S, M, inj.T.copy(), check=False))
        offset += M.ngens
    return Biproduct(S, tuple(injections), tuple(projections))


def pair(*fs: ModMorphism) -> ModMorphism:
    """The map W -> X1 + X2 + ... with components fs (all with source W)."""
    src = fs[0].source
    if any(f.source != src for f in fs):
        raise TypeMismatch("pair needs a common source")
    tgt = direct_sum(*(f.target for f in fs)).module
    return ModMorphism(src, tgt, np.vstack([f.matrix for f in fs]), check=False)


def copair(*fs: ModMorphism) -> ModMorphism:
    """The map X1 + X2 + ... -> Z restricting to fs (all with target Z)."""
    tgt = fs[0].target
    if any(f.target != tgt for f in fs):
        raise TypeMismatch("copair needs a common target")
    src = direct_sum(*(f.source for f in fs)).module
    return ModMorphism(src, tgt, np.hstack([f.matrix for f in fs]), check=False)


def direct_sum_mor(*fs: ModMorphism) -> ModMorphism:
    T = direct_sum(*(f.target for f in fs))
    return copair(*(compose(inj, f) for inj, f in zip(T.injections, fs)))


# ----------------------------------------------------------------- tensor

@lru_cache(maxsize=None)
def tensor_positions(M: FinMod, N: FinMod) -> tuple[tuple[int, int], ...]:
    """Generator pairs (i, j) of M (x) N that survive, in generator order."""
    return tuple((i, j) for i, a in enumerate(M.orders) for j, b in enumerate(N.orders)
                 if M.ring.is_rational or gcd(a, b) > 1)


@lru_cache(maxsize=None)
def _tensor2(M: FinMod, N: FinMod) -> FinMod:
    _same_ring(M, N)
    return FinMod(M.ring, tuple(gcd(M.orders[i], N.orders[j]) for i, j in tensor_positions(M, N)))


@lru_cache(maxsize=None)
def _position_arrays(M: FinMod, N: FinMod):
    pos = tensor_positions(M, N)
    return (np.array([p[0] for p in pos], dtype=np.intp), np.array([p[1] for p in pos], dtype=np.intp))


def tensor(*mods: FinMod) -> FinMod:
    if not mods:
        raise TypeMismatch("tensor needs at least one factor")
    return reduce(_tensor2, mods)


def _tensor2_mor(f: ModMorphism, g: ModMorphism) -> ModMorphism:
    src = _tensor2(f.source, g.source)
    tgt = _tensor2(f.target, g.target)
    if not src.ngens or not tgt.ngens:
        return zero_morphism(src, tgt)
    ri, rj = _position_arrays(f.target, g.target)
    ci, cj = _position_arrays(f.source, g.source)
    block = f.matrix[np.ix_(ri, ci)] * g.matrix[np.ix_(rj, cj)]
    return ModMorphism(src, tgt, block, check=False)


def tensor_mor(*fs: ModMorphism) -> ModMorphism:
    """f1 (x) f2 (x) ... ; functorial because residues are exact."""
    return reduce(_tensor2_mor, fs)


def swap(M: FinMod, N: FinMod) -> ModMorphism:
    """The symmetry M (x) N -> N (x) M."""
    src, tgt = tensor(M, N), tensor(N, M)
    index = {p: k for k, p in enumerate(tensor_positions(N, M))}
    arr = _zeros(M.ring, tgt.ngens, src.ngens)
    for k, (i, j) in enumerate(tensor_positions(M, N)):
        arr[index[(j, i)], k] = 1
    return ModMorphism(src, tgt, arr, check=False)


def left_unitor(M: FinMod) -> ModMorphism:
    """R (x) M -> M; the generator conventions make this the identity matrix."""
    if tensor(FinMod.unit(M.ring), M) != M:
        raise AssertionError("unit law of the tensor conventions broken")
    return identity(M)


def right_unitor(M: FinMod) -> ModMorphism:
    if tensor(M, FinMod.unit(M.ring)) != M:
        raise AssertionError("unit law of the tensor conventions broken")
    return identity(M)


def associator(M: FinMod, N: FinMod, P: FinMod) -> ModMorphism:
    """(M (x) N) (x) P -> M (x) (N (x) P), an identity matrix by construction."""
    left, right = tensor(tensor(M, N), P), tensor(M, tensor(N, P))
    if left != right:
        raise AssertionError("associativity of the tensor conventions broken")
    return identity(left)


# --------------------------------------------------------------- internal hom

@lru_cache(maxsize=None)
def hom_positions(M: FinMod, N: FinMod) -> tuple[tuple[int, int, int, int], ...]:
    """Tuples (j, i, order, scale) for the generators of hom(M, N).

    The generator sends source generator j to scale * (target generator i).
    """
    out = []
    for j, a in enumerate(M.orders):
        for i, b in enumerate(N.orders):
            if M.ring.is_rational:
                out.append((j, i, 0, 1))
            else:
                g = gcd(a, b)
                if g > 1:
                    out.append((j, i, g, b // g))
    return tuple(out)


@lru_cache(maxsize=None)
def hom_module(M: FinMod, N: FinMod) -> FinMod:
    _same_ring(M, N)
    return FinMod(M.ring, tuple(g for _, _, g, _ in hom_positions(M, N)))


def dual(M: FinMod) -> FinMod:
    return hom_module(M, FinMod.unit(M.ring))


def morphism_to_element(f: ModMorphism) -> tuple:
    """Coordinates of f inside hom_module(f.source, f.target)."""
    H = hom_module(f.source, f.target)
    vals = []
    for j, i, g, s in hom_positions(f.source, f.target):
        x = f.matrix[i, j]
        vals.append(x if f.ring.is_rational else (int(x) // s) % g)
    return H.reduce(vals)


def element_to_morphism(M: FinMod, N: FinMod, vec) -> ModMorphism:
    H = hom_module(M, N)
    vec = H.reduce(vec)
    arr = _zeros(M.ring, N.ngens, M.ngens)
    for x, (j, i, g, s) in zip(vec, hom_positions(M, N)):
        arr[i, j] = x * s
    return ModMorphism(M, N, arr, check=False)


def hom_generator(M: FinMod, N: FinMod, k: int) -> ModMorphism:
    return element_to_morphism(M, N, hom_module(M, N).basis_element(k))


def hom_map_from(src_pair, tgt_pair, fn) -> ModMorphism:
    """The linear map hom(*src_pair) -> hom(*tgt_pair) sending phi to fn(phi)."""
    H1, H2 = hom_module(*src_pair), hom_module(*tgt_pair)
    cols = []
    for k in range(H1.ngens):
        phi = hom_generator(*src_pair, k)
        image_ = fn(phi)
        if (image_.source, image_.target) != tuple(tgt_pair):
            raise TypeMismatch("hom_map_from: function returned a map with the wrong endpoints")
        cols.append(morphism_to_element(image_))
    return ModMorphism.from_columns(H1, H2, cols)


def hom_post(M: FinMod, g: ModMorphism) -> ModMorphism:
    """hom(M, g): hom(M, N) -> hom(M, N'), phi |-> g phi."""
    return hom_map_from((M, g.source), (M, g.target), lambda phi: compose(g, phi))


def hom_pre(f: ModMorphism, N: FinMod) -> ModMorphism:
    """hom(f, N): hom(M', N) -> hom(M, N), phi |-> phi f, for f: M -> M'."""
    return hom_map_from((f.target, N), (f.source, N), lambda phi: compose(phi, f))


def eval_morphism(X: FinMod, Z: FinMod) -> ModMorphism:
    """The counit hom(X, Z) (x) X -> Z."""
    H = hom_module(X, Z)
    src = tensor(H, X)
    arr = _zeros(X.ring, Z.ngens, src.ngens)
    hp = hom_positions(X, Z)
    for col, (k, l) in enumerate(tensor_positions(H, X)):
        j, i, _, s = hp[k]
        if j == l:
            arr[i, col] = s
    return ModMorphism(src, Z, arr, check=False)


def eval_left(X: FinMod, Z: FinMod) -> ModMorphism:
    """X (x) hom(X, Z) -> Z."""
    return compose(eval_morphism(X, Z), swap(X, hom_module(X, Z)))


def _check_tensor_source(f, Y, X):
    if f.source != tensor(Y, X):
        raise TypeMismatch(f"source {f.source} is not {Y} (x) {X}")


def _transpose(f: ModMorphism, Y: FinMod, X: FinMod, column_of) -> ModMorphism:
    Z = f.target
    cols = []
    for l in range(Y.ngens):
        arr = _zeros(f.ring, Z.ngens, X.ngens)
        for k in range(X.ngens):
            c = column_of.get((l, k))
            if c is not None:
                arr[:, k] = f.matrix[:, c]
        cols.append(morphism_to_element(ModMorphism(X, Z, arr)))
    return ModMorphism.from_columns(Y, hom_module(X, Z), cols)


def curry(f: ModMorphism, Y: FinMod, X: FinMod) -> ModMorphism:
    """Transpose of f: Y (x) X -> Z to Y -> hom(X, Z)."""
    _check_tensor_source(f, Y, X)
    return _transpose(f, Y, X, {p: k for k, p in enumerate(tensor_positions(Y, X))})


def uncurry(g: ModMorphism, X: FinMod, Z: FinMod) -> ModMorphism:
    """Inverse of curry: g: Y -> hom(X, Z) gives Y (x) X -> Z."""
    if g.target != hom_module(X, Z):
        raise TypeMismatch(f"target {g.target} is not hom({X}, {Z})")
    return compose(eval_morphism(X, Z), tensor_mor(g, identity(X)))


def curry_left(f: ModMorphism, X: FinMod, Y: FinMod) -> ModMorphism:
    """Transpose of f: X (x) Y -> Z to Y -> hom(X, Z) (the left-closed form)."""
    _check_tensor_source(f, X, Y)
    return _transpose(f, Y, X, {(j, i): k for k, (i, j) in enumerate(tensor_positions(X, Y))})


def uncurry_left(g: ModMorphism, X: FinMod, Z: FinMod) -> ModMorphism:
    """Inverse of curry_left: g: Y -> hom(X, Z) gives X (x) Y -> Z."""
    return compose(eval_left(X, Z), tensor_mor(identity(X), g))


def curry_unit(Y: FinMod, X: FinMod) -> ModMorphism:
    """Unit Y -> hom(X, Y (x) X) of the adjunction - (x) X -| hom(X, -)."""
    return curry(identity(tensor(Y, X)), Y, X)


def curry_left_unit(X: FinMod, W: FinMod) -> ModMorphism:
    """Unit W -> hom(X, X (x) W) of X (x) - -| hom(X, -): w |-> [x |-> x (x) w]."""
    return curry_left(identity(tensor(X, W)), X, W)


# ------------------------------------------------------------ linear algebra
#
# Over Z/m a submodule of M = Z^k / diag(a) is described by the lattice L
# it pulls back to in Z^k.  Two Smith reductions present L / diag(a) Z^k
# in invariant-factor form together with a coordinate map.  Over Q plain
# Gaussian elimination does the same job.

def _mod_dot(a, b, m):
    """a.b reduced mod m, for integer object arrays."""
    a, b = a % m, b % m
    if m * m * (a.shape[1] + 1) < 2 ** 62:
        return (a.astype(np.int64) @ b.astype(np.int64) % m).astype(object)
    return a.dot(b) % m


class _LatticeSub:
    """Submodule of Z^k / diag(orders) generated by integer vectors."""

    def __init__(self, gens, orders):
        k, r = len(orders), len(gens)
        self.k, self.r = k, r
        R = [[int(g[i]) for g in gens] + [orders[i] if j == i else 0 for j in range(k)] for i in range(k)]
        U, Ui, S, V, _ = smith_form_full(R)
        s = [S[i][i] for i in range(k)]
        Rp = [[U[i][j] * orders[j] // s[i] for j in range(k)] for i in range(k)]
        U2, U2i, S2, _, _ = smith_form_full(Rp)
        s2 = [S2[i][i] for i in range(k)]
        keep = [i for i in range(k) if s2[i] != 1]
        self.orders = tuple(s2[i] for i in keep)
        self._s = np.array(s, dtype=object)
        self._U = np.array(U, dtype=object).reshape(k, k)
        self._U2 = np.array(U2, dtype=object).reshape(k, k)[keep, :]
        self._mods = np.array(self.orders, dtype=object)
        # only y mod s_i * lcm(orders) matters below, so reduced int64 copies suffice
        L = lcm(*self.orders) if self.orders else 1
        bound = [int(si) * L for si in s]
        if k and max(bound) ** 2 * (k + 1) < 2 ** 62:
            self._Ui64 = (self._U % np.array(bound, dtype=object)[:, None]).astype(np.int64)
            self._U2i64 = (self._U2 % L).astype(np.int64)
            self._s64 = np.array(s, dtype=np.int64)
            self._mods64 = np.array(self.orders, dtype=np.int64)
            self._L = L
        else:
            self._Ui64 = None
        # new generators: U^{-1} diag(s) U2^{-1}, columns in keep
        U2i = np.array(U2i, dtype=object).reshape(k, k)[:, keep]
        B = np.array(Ui, dtype=object).reshape(k, k) * self._s[None, :]
        mods = np.array(orders, dtype=object)[:, None]
        amb = lcm(*orders) if orders else 1
        self.basis = [list(col) for col in (_mod_dot(B % mods, U2i, amb) % mods).T] if keep else []
        # the same generators as combinations of the input vectors; amb kills every
        # input vector, so coefficients only matter modulo amb
        Vr = np.array([row[:k] for row in V[:r]], dtype=object).reshape(r, k)
        self.expr = [list(col) for col in _mod_dot(Vr, U2i, amb).T] if keep else []
        self.everything = all(x == 1 for x in s)

    def coords_many(self, X):
        """Coordinates of the columns of X (k x n), or None if some column falls outside."""
        X = np.asarray(X, dtype=object)
        if self.k == 0:
            return np.zeros((0, X.shape[1] if X.ndim == 2 else 1), dtype=object)
        if self._Ui64 is not None and X.size and int(np.abs(X).max()) ** 2 * (self.k + 1) < 2 ** 62:
            y = self._Ui64 @ X.astype(np.int64)
            if (y % self._s64[:, None]).any():
                return None
            z = self._U2i64 @ ((y // self._s64[:, None]) % self._L)
            return (z % self._mods64[:, None]).astype(object)
        y = self._U.dot(X)
        if (y % self._s[:, None]).any():
            return None
        z = self._U2.dot(y // self._s[:, None])
        return z % self._mods[:, None]

    def coords(self, x):
        out = self.coords_many(np.array([int(v) for v in x], dtype=object)[:, None])
        return None if out is None else [int(v) for v in out[:, 0]]


class _LatticeQuot:
    """Quotient of Z^k / diag(orders) by the span of integer vectors."""

    def __init__(self, gens, orders):
        k = len(orders)
        R = [[int(g[i]) for g in gens] + [orders[i] if j == i else 0 for j in range(k)] for i in range(k)]
        U, Ui, S, _, _ = smith_form_full(R)
        keep = [i for i in range(k) if S[i][i] != 1]
        self.orders = tuple(S[i][i] for i in keep)
        self.proj = [[U[i][j] % S[i][i] for j in range(k)] for i in keep]
        self.section = [[Ui[i][c] % orders[i] for i in range(k)] for c in keep]


def _integer_kernel(F, b, k):
    """Generators of {x in Z^k : F x in diag(b) Z^n}."""
    n = len(b)
    if n == 0:
        return [[int(i == j) for i in range(k)] for j in range(k)]
    R = [list(map(int, F[i])) + [b[i] if j == i else 0 for j in range(n)] for i in range(n)]
    _, _, S, V, _ = smith_form_full(R, track_inverses=False)
    rank = sum(1 for i in range(min(n, k + n)) if S[i][i] != 0)
    return [[V[i][c] for i in range(k)] for c in range(rank, k + n)]


def _rref(rows, ncols):
    """Row reduce a list of Fraction rows in place; return pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                q = rows[i][c]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


class _FieldSub:
    """Subspace of Q^k spanned by vectors: basis chosen among the inputs."""

    def __init__(self, gens, k):
        gens = [[Fraction(x) for x in g] for g in gens]
        r = len(gens)
        rows = [[g[i] for g in gens] for i in range(k)]
        piv = _rref(rows, r) if k else []
        self.orders = (0,) * len(piv)
        self.basis = [gens[c] for c in piv]
        self.expr = [[Fraction(int(i == c)) for i in range(r)] for c in piv]
        t = len(piv)
        # T with T * basis = [I; 0]
        aug = [[self.basis[c][i] for c in range(t)] + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
        _rref(aug, t)
        self._T = [row[t:] for row in aug]
        self._t = t
        self.everything = t == k
        self.k = k

    def coords(self, x):
        y = [sum(self._T[i][j] * Fraction(x[j]) for j in range(self.k)) for i in range(self.k)]
        if any(v != 0 for v in y[self._t:]):
            return None
        return y[:self._t]


class _FieldQuot:
    def __init__(self, gens, k):
        sub = _FieldSub(gens, k)
        t = sub._t
        T = sub._T
        self.orders = (0,) * (k - t)
        self.proj = [T[i] for i in range(t, k)]
        aug = [list(T[i]) + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
        _rref(aug, k)
        Tinv = [row[k:] for row in aug]
        self.section = [[Tinv[i][c] for i in range(k)] for c in range(t, k)]


def _field_kernel(F, k):
    rows = [[Fraction(x) for x in row] for row in F]
    piv = _rref(rows, k) if rows else []
    free = [c for c in range(k) if c not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * k
        v[f] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -rows[r][f]
        out.append(v)
    return out


def _columns(f: ModMorphism):
    return [f.column(j) for j in range(f.source.ngens)]


def _image_sub(f: ModMorphism):
    sub = f._cache.get("image")
    if sub is None:
        if f.ring.is_rational:
            sub = _FieldSub(_columns(f), f.target.ngens)
        else:
            sub = _LatticeSub(_columns(f), f.target.orders)
        f._cache["image"] = sub
    return sub


def _submodule_sub(M: FinMod, vectors):
    if M.ring.is_rational:
        return _FieldSub(vectors, M.ngens)
    return _LatticeSub(vectors, M.orders)


# -------------------------------------------------- limits and colimits

def kernel(f: ModMorphism) -> tuple[FinMod, ModMorphism]:
    M, N = f.source, f.target
    if f.ring.is_rational:
        gens = _field_kernel(f.tolist(), M.ngens)
    else:
        gens = _integer_kernel(f.tolist(), N.orders, M.ngens)
    sub = _submodule_sub(M, gens)
    K = FinMod(M.ring, sub.orders)
    iota = ModMorphism.from_columns(K, M, sub.basis)
    iota._cache["mono"] = True
    return K, iota


def cokernel(f: ModMorphism) -> tuple[FinMod, ModMorphism]:
    N = f.target
    if f.ring.is_rational:
        q = _FieldQuot(_columns(f), N.ngens)
    else:
        q = _LatticeQuot(_columns(f), N.orders)
    Q = FinMod(N.ring, q.orders)
    pi = ModMorphism(N, Q, q.proj if q.proj else _zeros(N.ring, 0, N.ngens))
    # set-theoretic lifts of the generators of Q; not a morphism in general
    pi._cache["section"] = _asarray(N.ring, [[c[i] for c in q.section] for i in range(N.ngens)], N.ngens, Q.ngens)
    pi._cache["epi"] = True
    return Q, pi


def image(f: ModMorphism) -> tuple[FinMod, ModMorphism, ModMorphism]:
    """(I, e, m) with f = m e, e epi onto I and m: I -> target mono."""
    sub = _image_sub(f)
    I = FinMod(f.ring, sub.orders)
    m = ModMorphism.from_columns(I, f.target, sub.basis)
    e = ModMorphism.from_columns(f.source, I, [sub.coords(c) for c in _columns(f)])
    m._cache["mono"] = True
    e._cache["epi"] = True
    return I, e, m


def equaliser(f: ModMorphism, g: ModMorphism):
    return kernel(f - g)


def coequaliser(f: ModMorphism, g: ModMorphism):
    return cokernel(f - g)


def pullback(f: ModMorphism, g: ModMorphism):
    """(P, p1, p2) with f p1 = g p2 for f: X -> Z and g: Y -> Z."""
    if f.target != g.target:
        raise TypeMismatch("pullback needs a common target")
    S = direct_sum(f.source, g.source)
    _, iota = kernel(copair(f, -g))
    P = iota.source
    return P, compose(S.projections[0], iota), compose(S.projections[1], iota)


def pushout(f: ModMorphism, g: ModMorphism):
    """(Q, q1, q2) with q1 f = q2 g for f: Z -> X and g: Z -> Y."""
    if f.source != g.source:
        raise TypeMismatch("pushout needs a common source")
    S = direct_sum(f.target, g.target)
    Q, pi = cokernel(pair(f, -g))
    return Q, compose(pi, S.injections[0]), compose(pi, S.injections[1])


def is_mono(f: ModMorphism) -> bool:
    if "mono" not in f._cache:
        sub = _image_sub(f)
        if f.ring.is_rational:
            f._cache["mono"] = len(sub.orders) == f.source.ngens
        else:
            f._cache["mono"] = prod(sub.orders) == prod(f.source.orders)
    return f._cache["mono"]


def is_epi(f: ModMorphism) -> bool:
    if "epi" not in f._cache:
        f._cache["epi"] = _image_sub(f).everything
    return f._cache["epi"]


def solve(f: ModMorphism, y):
    """Some x with f(x) = y, or None."""
    y = f.target.reduce(y)
    sub = _image_sub(f)
    c = sub.coords(y)
    if c is None:
        return None
    x = f.source.reduce([sum(e[i] * ci for e, ci in zip(sub.expr, c)) for i in range(f.source.ngens)])
    if f(x) != y:
        raise AssertionError("internal error: solve produced a wrong preimage")
    return x


def in_image(f: ModMorphism, y) -> bool:
    return _image_sub(f).coords(f.target.reduce(y)) is not None


def lift(h: ModMorphism, f: ModMorphism):
    """Some u with f u = h, or None.  Unique whenever f is mono."""
    if h.target != f.target:
        raise TypeMismatch("lift needs a common target")
    if is_mono(f):
        if h.source.ngens == 0:
            return zero_morphism(h.source, f.source)
        sub = _image_sub(f)
        if isinstance(sub, _LatticeSub):
            c = sub.coords_many(h.matrix.astype(object))
            if c is None:
                return None
            E = np.array(sub.expr, dtype=object).reshape(len(sub.expr), f.source.ngens).T
            u = ModMorphism(h.source, f.source, (E.dot(c) if len(sub.expr) else
                                                 np.zeros((f.source.ngens, h.source.ngens), dtype=object)))
            if compose(f, u) != h:
                raise AssertionError("internal error: lift produced a wrong factorisation")
            return u
        cols = []
        for j in range(h.source.ngens):
            x = solve(f, h.column(j))
            if x is None:
                return None
            cols.append(x)
        return ModMorphism.from_columns(h.source, f.source, cols)
    post = hom_post(h.source, f)
    x = solve(post, morphism_to_element(h))
    return None if x is None else element_to_morphism(h.source, f.source, x)


def _preimage_matrix(f: ModMorphism, Y):
    """Source-coordinate columns x with f(x) = each column of Y, assuming every column lies in the image."""
    sub = _image_sub(f)
    if isinstance(sub, _LatticeSub):
        c = sub.coords_many(Y)
        if not len(sub.expr):
            return np.zeros((f.source.ngens, Y.shape[1]), dtype=object)
        E = np.array(sub.expr, dtype=object).reshape(len(sub.expr), f.source.ngens).T
        m = f.ring.modulus
        return _matmul(f.ring, (E % m).astype(np.int64), (c % m).astype(np.int64))
    cols = [solve(f, [Y[i, j] for i in range(Y.shape[0])]) for j in range(Y.shape[1])]
    return _asarray(f.ring, [[c[i] for c in cols] for i in range(f.source.ngens)], f.source.ngens, Y.shape[1])


def descend(h: ModMorphism, p: ModMorphism):
    """Some u with u p = h, or None.  Unique whenever p is epi."""
    if h.source != p.source:
        raise TypeMismatch("descend needs a common source")
    section = p._cache.get("section")
    if section is None and is_epi(p):
        # any u with u p = h must send each generator to h of a preimage
        section = _preimage_matrix(p, np.identity(p.target.ngens, dtype=object))
    if section is not None:
        try:
            u = ModMorphism(p.target, h.target, _matmul(h.ring, h.matrix, section))
        except InvalidMorphism:
            return None
        return u if compose(u, p) == h else None
    pre = hom_pre(p, h.target)
    x = solve(pre, morphism_to_element(h))
    return None if x is None else element_to_morphism(p.target, h.target, x)


def is_iso(f: ModMorphism):
    """(True, inverse) when f is an isomorphism, else (False, None)."""
    if not (is_mono(f) and is_epi(f)):
        return False, None
    inv = lift(identity(f.target), f)
    return True, inv


# ---------------------------------------------------------- submodules

def submodule(M: FinMod, vectors) -> tuple[FinMod, ModMorphism]:
    """The submodule generated by the given elements, as (K, inclusion)."""
    sub = _submodule_sub(M, [M.reduce(v) for v in vectors])
    K = FinMod(M.ring, sub.orders)
    iota = ModMorphism.from_columns(K, M, sub.basis)
    iota._cache["mono"] = True
    return K, iota


def image_contained(f: ModMorphism, g: ModMorphism) -> bool:
    """im f is contained in im g (common target)."""
    if f.target != g.target:
        raise TypeMismatch("images live in different modules")
    return all(in_image(g, c) for c in _columns(f))


def same_image(f: ModMorphism, g: ModMorphism) -> bool:
    return image_contained(f, g) and image_contained(g, f)


def intersection(f: ModMorphism, g: ModMorphism) -> ModMorphism:
    """Inclusion of im f meet im g into the common target."""
    _, p1, _ = pullback(f, g)
    return image(compose(f, p1))[2]


def preimage(f: ModMorphism, g: ModMorphism) -> ModMorphism:
    """Inclusion of f^{-1}(im g) into f.source."""
    _, p1, _ = pullback(f, g)
    return image(p1)[2]


def image_elements(f: ModMorphism, bound: int = DEFAULT_BOUND) -> set:
    return {f(x) for x in enumerate_elements(f.source, bound)}


# ---------------------------------------------------------- enumeration

def enumerate_elements(M: FinMod, bound: int | None = DEFAULT_BOUND):
    """All elements of M, lexicographic in generator coordinates."""
    if M.ring.is_rational:
        if M.is_zero:
            return iter([()])
        raise InfiniteRing("a nonzero module over Q has infinitely many elements")
    if bound is not None and M.size > bound:
        raise TooLarge(f"module {M} has {M.size} elements, bound is {bound}")
    return itertools.product(*(range(d) for d in M.orders))


def is_projective(M: FinMod) -> bool:
    """Over Z/m: every order is a unitary divisor of m."""
    m = M.ring.modulus
    if m is None:
        return True
    return all(gcd(d, m // d) == 1 for d in M.orders)


# ---------------------------------------------------------- random data

def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def random_module(rng, ring: BaseRing, max_gens: int = 3, max_size: int | None = None) -> FinMod:
    """A random module with at most max_gens generators (rejection on size)."""
    while True:
        n = rng.randint(0, max_gens)
        if ring.is_rational:
            return FinMod.free(ring, n)
        ds = [d for d in divisors(ring.modulus) if d > 1]
        M = FinMod(ring, tuple(rng.choice(ds) for _ in range(n)))
        if max_size is None or M.size <= max_size:
            return M


def random_morphism(rng, M: FinMod, N: FinMod) -> ModMorphism:
    """A uniformly random element of hom(M, N)."""
    H = hom_module(M, N)
    if M.ring.is_rational:
        vec = [Fraction(rng.randint(-3, 3)) for _ in H.orders]
    else:
        vec = [rng.randrange(d) for d in H.orders]
    return element_to_morphism(M, N, vec)


def random_element(rng, M: FinMod) -> tuple:
    if M.ring.is_rational:
        return M.reduce([rng.randint(-3, 3) for _ in M.orders])
    return tuple(rng.randrange(d) for d in M.orders)
