"""Definite quaternion algebras over Q and their arithmetic.

An algebra (a, b) has basis (1, i, j, k) with i^2 = a, j^2 = b, ij = -ji = k.
The module provides Hilbert symbols and ramification, the algebra ramified
exactly at {p, oo}, maximal orders certified by reduced discriminant, finite
unit groups enumerated from the positive-definite norm form, centralizers,
and classification of the subalgebras that appear as endomorphism algebras.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from . import linalg
from .errors import (
    DomainError,
    InternalCheckError,
    NotEmbeddableError,
    UnsupportedPrimeError,
)
from .fields import factorize, is_prime, legendre_symbol, squarefree_part

INF = "inf"  # the archimedean place


@dataclass(frozen=True)
class QuaternionAlgebra:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a == 0 or self.b == 0:
            raise DomainError("quaternion algebra parameters must be nonzero")

    @property
    def is_definite(self) -> bool:
        return self.a < 0 and self.b < 0

    def quaternion(self, x0, x1=0, x2=0, x3=0) -> "Quaternion":
        return Quaternion(self, (Fraction(x0), Fraction(x1), Fraction(x2), Fraction(x3)))

    def from_coeffs(self, coeffs) -> "Quaternion":
        return self.quaternion(*coeffs)

    @property
    def one(self):
        return self.quaternion(1)

    @property
    def i(self):
        return self.quaternion(0, 1)

    @property
    def j(self):
        return self.quaternion(0, 0, 1)

    @property
    def k(self):
        return self.quaternion(0, 0, 0, 1)

    def __repr__(self):
        return f"({self.a},{self.b} / Q)"


@dataclass(frozen=True)
class Quaternion:
    algebra: QuaternionAlgebra
    coeffs: tuple[Fraction, Fraction, Fraction, Fraction]

    def _check(self, other: "Quaternion"):
        if self.algebra != other.algebra:
            raise DomainError("operands live in different quaternion algebras")

    def __add__(self, other):
        self._check(other)
        return Quaternion(self.algebra, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return Quaternion(self.algebra, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Quaternion(self.algebra, tuple(-x for x in self.coeffs))

    def scale(self, c) -> "Quaternion":
        c = Fraction(c)
        return Quaternion(self.algebra, tuple(c * x for x in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coeffs
        y0, y1, y2, y3 = other.coeffs
        return Quaternion(self.algebra, (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ))

    def conjugate(self) -> "Quaternion":
        x0, x1, x2, x3 = self.coeffs
        return Quaternion(self.algebra, (x0, -x1, -x2, -x3))

    def trd(self) -> Fraction:
        return 2 * self.coeffs[0]

    def nrd(self) -> Fraction:
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coeffs
        return x0 * x0 - a * x1 * x1 - b * x2 * x2 + a * b * x3 * x3

    def inverse(self) -> "Quaternion":
        n = self.nrd()
        if n == 0:
            raise DomainError("quaternion has reduced norm 0 and no inverse")
        return self.conjugate().scale(Fraction(1, 1) / n)

    def __pow__(self, e: int) -> "Quaternion":
        if e < 0:
            return self.inverse() ** (-e)
        out = self.algebra.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_one(self) -> bool:
        return self.coeffs == (1, 0, 0, 0)

    def multiplicative_order(self, cap: int = 64) -> int:
        x = self
        for n in range(1, cap + 1):
            if x.is_one():
                return n
            x = x * self
        raise DomainError("element has multiplicative order beyond the search cap")

    def __str__(self):
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // _gcd(den, c.denominator)
        nums = [int(c * den) for c in self.coeffs]
        terms = []
        for n, sym in zip(nums, ("", "i", "j", "k")):
            if n == 0:
                continue
            if sym == "":
                terms.append(f"{n}")
            elif abs(n) == 1:
                terms.append(f"{'-' if n < 0 else ''}{sym}")
            else:
                terms.append(f"{n}{sym}")
        if not terms:
            return "0"
        body = terms[0]
        for t in terms[1:]:
            body += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return body if den == 1 else f"({body})/{den}"


def _gcd(x, y):
    while y:
        x, y = y, x % y
    return x


# ---------------------------------------------------------------------------
# Hilbert symbols and ramification

def _two_adic_split(n: int) -> tuple[int, int]:
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v, n


def hilbert_symbol(a, b, v) -> int:
    """The Hilbert symbol (a, b)_v in {+1, -1} over Q_v.

    v is a prime or INF.  +1 iff z^2 = a x^2 + b y^2 has a nontrivial
    Q_v-point, by the classical local formulas.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise DomainError("hilbert symbol needs nonzero arguments")
    if v == INF:
        return -1 if a < 0 and b < 0 else 1
    if not isinstance(v, int) or not is_prime(v):
        raise DomainError(f"{v!r} is not a valid place")
    # replace by integers in the same square classes
    an = a.numerator * a.denominator
    bn = b.numerator * b.denominator
    if v == 2:
        alpha, u = _two_adic_split(abs(an))
        beta, w = _two_adic_split(abs(bn))
        u = u if an > 0 else -u
        w = w if bn > 0 else -w
        eps_u, eps_w = (u - 1) // 2, (w - 1) // 2
        omega_u, omega_w = (u * u - 1) // 8, (w * w - 1) // 8
        e = eps_u * eps_w + alpha * omega_w + beta * omega_u
        return -1 if e % 2 else 1
    alpha, u = 0, an
    while u % v == 0:
        u //= v
        alpha += 1
    beta, w = 0, bn
    while w % v == 0:
        w //= v
        beta += 1
    eps = (v - 1) // 2
    sign = (-1) ** (alpha * beta * eps)
    s = sign
    if beta % 2:
        s *= legendre_symbol(u, v)
    if alpha % 2:
        s *= legendre_symbol(w, v)
    return s


def ramified_places(algebra: QuaternionAlgebra) -> frozenset:
    """The finite set of places where the algebra is ramified (even cardinality)."""
    a, b = algebra.a, algebra.b
    candidates = {2}
    for n in (a.numerator, a.denominator, b.numerator, b.denominator):
        candidates.update(factorize(abs(n)))
    candidates.discard(1)
    out = set()
    if hilbert_symbol(a, b, INF) == -1:
        out.add(INF)
    for p in sorted(candidates):
        if hilbert_symbol(a, b, p) == -1:
            out.add(p)
    if len(out) % 2:
        raise InternalCheckError(f"odd number of ramified places for {algebra}")
    return frozenset(out)


@lru_cache(maxsize=None)
def build_bp_infinity(p: int) -> QuaternionAlgebra:
    """The quaternion algebra over Q ramified exactly at {p, oo}.

    The (a, b) pair is picked by congruence class of p and then certified by
    recomputing the ramified places; a bad recipe is a bug, not a domain error.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        alg = QuaternionAlgebra(Fraction(-1), Fraction(-1))
    elif p % 4 == 3:
        alg = QuaternionAlgebra(Fraction(-1), Fraction(-p))
    elif p % 8 == 5:
        alg = QuaternionAlgebra(Fraction(-2), Fraction(-p))
    else:  # p = 1 mod 8
        q = 3
        while not (is_prime(q) and q % 4 == 3 and legendre_symbol(p, q) == -1):
            q += 2
        alg = QuaternionAlgebra(Fraction(-p), Fraction(-q))
    if ramified_places(alg) != frozenset({p, INF}):
        raise InternalCheckError(f"recipe for B_{p},oo produced wrong ramification")
    return alg


# ---------------------------------------------------------------------------
# orders

@dataclass(frozen=True)
class QuatOrder:
    """A rank-4 lattice in a quaternion algebra that is a ring containing 1.

    The basis is stored in Hermite normal form (rows are generators in
    (1, i, j, k) coordinates), so equal lattices compare and hash equal.
    """

    algebra: QuaternionAlgebra
    basis: tuple[tuple[Fraction, Fraction, Fraction, Fraction], ...]

    @staticmethod
    def from_generators(algebra: QuaternionAlgebra, gens, check: bool = True) -> "QuatOrder":
        rows = [tuple(Fraction(x) for x in (g.coeffs if isinstance(g, Quaternion) else g))
                for g in gens]
        basis = _lattice_hnf(rows)
        order = QuatOrder(algebra, basis)
        if check and not _is_order(order):
            raise DomainError("lattice is not an order (ring with 1 and integral norms)")
        return order

    def basis_quaternions(self) -> tuple[Quaternion, ...]:
        return tuple(self.algebra.from_coeffs(row) for row in self.basis)

    def contains(self, x: Quaternion) -> bool:
        coords = _coords_in_basis(self, x.coeffs)
        return all(c.denominator == 1 for c in coords)

    def gram(self) -> tuple[tuple[Fraction, ...], ...]:
        """Gram matrix trd(e_r * conj(e_s)) of the basis."""
        bq = self.basis_quaternions()
        return tuple(tuple((e * f.conjugate()).trd() for f in bq) for e in bq)


def _lattice_hnf(rows) -> tuple:
    den = 1
    for row in rows:
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
    int_rows = [[int(x * den) for x in row] for row in rows]
    h = linalg.hnf(int_rows)
    return tuple(tuple(Fraction(x, den) for x in row) for row in h)


@lru_cache(maxsize=None)
def _basis_inverse(order: QuatOrder):
    return linalg.mat_inv(order.basis)


def _coords_in_basis(order: QuatOrder, coeffs) -> tuple:
    # row-vector convention: coeffs = coords . basis
    inv = _basis_inverse(order)
    return tuple(sum(coeffs[r] * inv[r][s] for r in range(4)) for s in range(4))


def _is_order(order: QuatOrder) -> bool:
    if not order.contains(order.algebra.one):
        return False
    gram = order.gram()
    for r in range(4):
        if gram[r][r].denominator != 1 or gram[r][r].numerator % 2:
            return False  # nrd(e_r) must be an integer
        for s in range(4):
            if gram[r][s].denominator != 1:
                return False
    bq = order.basis_quaternions()
    return all(order.contains(e * f) for e in bq for f in bq)


def reduced_discriminant(order: QuatOrder) -> int:
    """d with d^2 = |det Gram|; equals p for a maximal order in B_{p,oo}."""
    det = linalg.mat_det(order.gram())
    if det.denominator != 1:
        raise InternalCheckError("Gram determinant of an order must be an integer")
    n = abs(det.numerator)
    d = isqrt(n)
    if d * d != n:
        raise InternalCheckError("Gram determinant of an order must be a perfect square")
    return d


def algebra_discriminant(algebra: QuaternionAlgebra) -> int:
    """Product of the finite ramified primes."""
    out = 1
    for v in ramified_places(algebra):
        if v != INF:
            out *= v
    return out


def is_maximal(order: QuatOrder) -> bool:
    ram = ramified_places(order.algebra)
    if INF not in ram:
        raise DomainError("maximality certificate requires a definite algebra")
    return reduced_discriminant(order) == algebra_discriminant(order.algebra)


# --- saturation: grow an order until its reduced discriminant is minimal ---

def _integral_candidates(order: QuatOrder, ell: int):
    """Elements (sum c_r e_r)/ell, c in [0, ell)^4 nonzero, with integral trd and nrd."""
    bq = order.basis_quaternions()
    out = []
    for c in itertools.product(range(ell), repeat=4):
        if not any(c):
            continue
        x = order.algebra.quaternion(0)
        for cr, e in zip(c, bq):
            x = x + e.scale(Fraction(cr, ell))
        if x.trd().denominator == 1 and x.nrd().denominator == 1:
            out.append(x)
    return out


def _try_enlarge(order: QuatOrder, ell: int) -> QuatOrder | None:
    """Smallest superorder found inside (1/ell) * order, or None."""
    cands = _integral_candidates(order, ell)
    base = list(order.basis)
    for size in (1, 2, 3, 4):
        for combo in itertools.combinations(cands, size):
            rows = base + [x.coeffs for x in combo]
            lattice = QuatOrder(order.algebra, _lattice_hnf(rows))
            if lattice.basis == order.basis:
                continue
            if _is_order(lattice):
                return lattice
    return None


def saturate_order(order: QuatOrder) -> QuatOrder:
    """Grow an order to a maximal one; every step strictly shrinks the discriminant."""
    target = algebra_discriminant(order.algebra)
    d = reduced_discriminant(order)
    while d > target:
        progressed = False
        for ell in sorted(factorize(d // target)):
            bigger = _try_enlarge(order, ell)
            if bigger is not None:
                order = bigger
                d = reduced_discriminant(order)
                progressed = True
                break
        if not progressed:
            raise InternalCheckError(
                f"saturation stalled at reduced discriminant {d} (target {target})")
    return order


# --- unit groups ---

def unit_group(order: QuatOrder) -> list[Quaternion]:
    """All x in O with nrd(x) = 1, in lexicographic coordinate order.

    The reduced norm is positive definite, so integer basis coordinates of a
    unit lie in the box |c_r|^2 <= 2 (Gram^-1)_rr; the box is enumerated
    exhaustively, which makes the group provably complete.
    """
    if not order.algebra.is_definite:
        raise DomainError("unit group is infinite in an indefinite algebra")
    gram = order.gram()
    inv = linalg.mat_inv(gram)
    bounds = []
    for r in range(4):
        lim = 2 * inv[r][r]
        bounds.append(isqrt(lim.numerator // lim.denominator))
    g = [[int(x) for x in row] for row in gram]
    bq = order.basis_quaternions()
    units = []
    for c in itertools.product(*[range(-b, b + 1) for b in bounds]):
        acc = 0
        for r in range(4):
            cr = c[r]
            if cr:
                row = g[r]
                acc += cr * (row[0] * c[0] + row[1] * c[1] + row[2] * c[2] + row[3] * c[3])
        if acc == 2:  # c^T Gram c = 2 nrd = 2
            x = order.algebra.quaternion(0)
            for cr, e in zip(c, bq):
                if cr:
                    x = x + e.scale(cr)
            units.append(x)
    units.sort(key=lambda q: q.coeffs)
    return units


@dataclass(frozen=True)
class GroupLabel:
    kind: str  # "Cyclic", "Dicyclic", "BinaryTetrahedral"
    order: int

    def __str__(self):
        if self.kind == "BinaryTetrahedral":
            return "BinaryTetrahedral"
        return f"{self.kind}({self.order})"


def classify_group(elements: list[Quaternion]) -> GroupLabel:
    """Recognize a finite multiplicative group of quaternions by structure."""
    keyed = {q.coeffs: q for q in elements}
    n = len(elements)
    for x in elements:
        for y in elements:
            if (x * y).coeffs not in keyed:
                raise DomainError("element set is not closed under multiplication")
    orders = [x.multiplicative_order(cap=2 * n) for x in elements]
    abelian = all((x * y).coeffs == (y * x).coeffs for x in elements for y in elements)
    if abelian:
        if n in orders:
            return GroupLabel("Cyclic", n)
        raise InternalCheckError("abelian unit group without a generator")
    involutions = orders.count(2)
    if n == 24 and involutions == 1:
        return GroupLabel("BinaryTetrahedral", 24)
    if n % 4 == 0 and involutions == 1 and (n // 2) in orders:
        return GroupLabel("Dicyclic", n)
    raise InternalCheckError(f"unrecognized finite quaternion group of order {n}")


# --- maximal orders in B_{p,oo} ---

def _starting_order(algebra: QuaternionAlgebra) -> QuatOrder:
    one, i, j, k = algebra.one, algebra.i, algebra.j, algebra.k
    return QuatOrder.from_generators(algebra, [one, i, j, k])


def _norm_ell_ideals(order: QuatOrder, ell: int):
    """The left O-ideals of reduced norm ell, as canonical lattice bases."""
    bq = order.basis_quaternions()
    seen = {}
    for c in itertools.product(range(ell), repeat=4):
        gamma = order.algebra.quaternion(0)
        for cr, e in zip(c, bq):
            if cr:
                gamma = gamma + e.scale(cr)
        if gamma.nrd().numerator % ell:
            continue
        rows = [(e * gamma).coeffs for e in bq] + [e.scale(ell).coeffs for e in bq]
        basis = _lattice_hnf(rows)
        # an ideal of norm ell has index ell^2 in O
        idx = linalg.mat_det(basis) / linalg.mat_det(order.basis)
        if idx == ell * ell:
            seen[basis] = True
    return sorted(seen)


def _right_order_of_ideal(order: QuatOrder, ideal_basis, ell: int) -> QuatOrder | None:
    """O_R(I) = (1/ell) conj(I) I for an ideal I of reduced norm ell."""
    alg = order.algebra
    gens = [alg.from_coeffs(row) for row in ideal_basis]
    rows = []
    for x in gens:
        xc = x.conjugate()
        for y in gens:
            rows.append((xc * y).scale(Fraction(1, ell)).coeffs)
    candidate = QuatOrder(alg, _lattice_hnf(rows))
    if not _is_order(candidate) or not is_maximal(candidate):
        return None
    return candidate


@lru_cache(maxsize=None)
def maximal_order(p: int, basis: tuple | None = None) -> QuatOrder:
    """A maximal order in the algebra ramified exactly at {p, oo}.

    Starting from Z<1,i,j,k>, the lattice is saturated to a maximal order and
    the 2-neighbor graph is then walked a few steps; among the maximal orders
    found, the first one (breadth-first) with the fewest units is returned.
    Preferring the smallest unit group keeps the result aligned with the
    generic automorphism count whenever several conjugacy classes of maximal
    orders exist.  An explicit basis bypasses the walk and is only certified.
    """
    algebra = build_bp_infinity(p)
    if basis is not None:
        order = QuatOrder.from_generators(
            algebra, [algebra.from_coeffs(row) for row in basis])
        if not is_maximal(order):
            raise DomainError("supplied basis does not span a maximal order")
        return order
    try:
        root = saturate_order(_starting_order(algebra))
    except InternalCheckError as exc:
        raise UnsupportedPrimeError(
            f"no maximal order found for p={p}; pass an explicit basis") from exc
    if not is_maximal(root):
        raise InternalCheckError("saturation did not reach a maximal order")

    # Unit groups of maximal orders have order 2, 4, 6 (or 24/12 for p = 2, 3),
    # and classes with 4 or 6 units occur at most once each.  Their masses
    # 1/4 + 1/6 already exhaust (p-1)/24 when p <= 11, so no class with unit
    # group {+-1} exists there and the saturated root is already minimal.
    # For p >= 13 such a class exists and the connected 2-neighbor graph
    # reaches one.
    if p <= 11:
        return root
    if len(unit_group(root)) == 2:
        return root
    seen = {root.basis}
    frontier = [root]
    depth = 0
    while frontier and depth < 6 and len(seen) < 200:
        nxt = []
        for node in frontier:
            for ideal in _norm_ell_ideals(node, 2):
                neighbor = _right_order_of_ideal(node, ideal, 2)
                if neighbor is None or neighbor.basis in seen:
                    continue
                seen.add(neighbor.basis)
                nxt.append(neighbor)
                if len(unit_group(neighbor)) == 2:
                    return neighbor
        frontier = nxt
        depth += 1
    raise InternalCheckError(
        f"neighbor walk for p={p} found no order with unit group of size 2")


# --- subalgebra classification ---

@dataclass(frozen=True)
class SubalgebraLabel:
    kind: str  # "RationalsOnly", "QuadraticField", "FullQuaternion"
    d: int | None = None

    def __str__(self):
        if self.kind == "QuadraticField":
            return f"QuadraticField({self.d})"
        return self.kind


RATIONALS_ONLY = SubalgebraLabel("RationalsOnly")
FULL_QUATERNION = SubalgebraLabel("FullQuaternion")


def quadratic_field(d: int) -> SubalgebraLabel:
    return SubalgebraLabel("QuadraticField", d)


@dataclass(frozen=True)
class SubalgebraReport:
    dimension: int
    basis: tuple[Quaternion, ...]
    label: SubalgebraLabel

    def __post_init__(self):
        if self.dimension != len(self.basis):
            raise InternalCheckError("subalgebra dimension disagrees with basis length")


def classify_subalgebra(algebra: QuaternionAlgebra, vectors) -> SubalgebraReport:
    """Classify a Q-subalgebra given by a spanning set of coordinate vectors.

    The span must contain 1 (it always does for centralizers and twisted
    fixed algebras).  Dimension 1 is Q itself, dimension 2 a quadratic field
    Q(sqrt(d)) labeled by the squarefree discriminant part, dimension 4 the
    whole algebra; dimension 3 cannot be a subalgebra and raises.
    """
    rows = linalg.frac_rows([tuple(v) for v in vectors])
    reduced = linalg.rref(rows)
    dim = len(reduced)
    basis = tuple(algebra.from_coeffs(row) for row in reduced)
    if dim == 1:
        return SubalgebraReport(1, basis, RATIONALS_ONLY)
    if dim == 2:
        u = next(q for q in basis if q.coeffs[1:] != (0, 0, 0))
        disc = u.trd() ** 2 - 4 * u.nrd()
        d = squarefree_part(disc.numerator * disc.denominator)
        return SubalgebraReport(2, basis, quadratic_field(d))
    if dim == 4:
        return SubalgebraReport(4, basis, FULL_QUATERNION)
    raise InternalCheckError(f"a {dim}-dimensional subalgebra cannot exist")


def _left_mul_matrix(q: Quaternion):
    alg = q.algebra
    cols = [(q * e).coeffs for e in (alg.one, alg.i, alg.j, alg.k)]
    return tuple(tuple(cols[c][r] for c in range(4)) for r in range(4))


def _right_mul_matrix(q: Quaternion):
    alg = q.algebra
    cols = [(e * q).coeffs for e in (alg.one, alg.i, alg.j, alg.k)]
    return tuple(tuple(cols[c][r] for c in range(4)) for r in range(4))


def centralizer(algebra: QuaternionAlgebra, elements) -> SubalgebraReport:
    """The subalgebra {x : xs = sx for all s in S}, solved exactly over Q."""
    elements = list(elements)
    if not elements:
        raise DomainError("centralizer of an empty set is not defined")
    rows = []
    for s in elements:
        if s.algebra != algebra:
            raise DomainError("centralizer elements must lie in the given algebra")
        diff = linalg.mat_sub(_right_mul_matrix(s), _left_mul_matrix(s))
        rows.extend(diff)
    basis = linalg.nullspace(tuple(rows), 4)
    return classify_subalgebra(algebra, basis)


def embed_root_of_unity(order: QuatOrder, m: int) -> Quaternion:
    """The first unit of multiplicative order m in canonical unit order."""
    if m not in (3, 4, 6):
        raise DomainError("only roots of unity of order 3, 4 or 6 embed in a definite order")
    for u in unit_group(order):
        if u.multiplicative_order() == m:
            return u
    raise NotEmbeddableError(f"the unit group contains no element of order {m}")
