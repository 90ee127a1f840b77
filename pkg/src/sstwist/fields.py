"""Exact scalar arithmetic: integer helpers and small finite fields F_{p^a}.

Arbitrary-precision integers and rationals are Python's int and
fractions.Fraction; this module adds the number-theoretic operations built
on top of them and a deterministic finite-field implementation whose
elements are canonical coefficient tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, SizeError

# Deterministic Miller-Rabin witnesses, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

ENUMERATION_CAP = 10**7  # largest field size we will fully enumerate


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division (desk-scale inputs)."""
    if n < 1:
        raise DomainError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def legendre_symbol(n: int, p: int) -> int:
    """(n/p) in {-1, 0, 1} for an odd prime p."""
    if p == 2 or not is_prime(p):
        raise DomainError(f"legendre_symbol needs an odd prime, got {p}")
    r = pow(n % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def squarefree_part(n: int) -> int:
    """The squarefree d with n = d * m^2; sign of n is preserved."""
    if n == 0:
        raise DomainError("squarefree_part(0) is undefined")
    d = 1
    for q, e in factorize(abs(n)).items():
        if e % 2:
            d *= q
    return d if n > 0 else -d


def prime_power_split(q: int) -> tuple[int, int]:
    """q = p^a with p prime, a >= 1, else DomainError."""
    fac = factorize(q) if q > 1 else {}
    if len(fac) != 1:
        raise DomainError(f"{q} is not a prime power")
    (p, a), = fac.items()
    return p, a


# ---------------------------------------------------------------------------
# finite fields

def _poly_mul_mod(x, y, modulus, p):
    a = len(modulus) - 1
    prod = [0] * (2 * a - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                prod[i + j] = (prod[i + j] + xi * yj) % p
    # reduce by the monic modulus
    for i in range(len(prod) - 1, a - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(a):
                prod[i - a + j] = (prod[i - a + j] - c * modulus[j]) % p
    return tuple(prod[:a])


def _poly_pow_mod(x, e, modulus, p):
    a = len(modulus) - 1
    result = tuple([1] + [0] * (a - 1))
    base = x
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, modulus, p)
        base = _poly_mul_mod(base, base, modulus, p)
        e >>= 1
    return result


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Rabin's test for a monic polynomial given as (c_0, ..., c_{a-1}, 1)."""
    a = len(coeffs) - 1
    if a == 1:
        return True
    modulus = coeffs
    x = tuple(1 if i == 1 else 0 for i in range(a))
    xq = _poly_pow_mod(x, p**a, modulus, p)
    if xq != x:
        return False
    for r in factorize(a):
        # modulus must be coprime to x^{p^(a/r)} - x for every prime r | a
        d = a // r
        xd = _poly_pow_mod(x, p**d, modulus, p)
        diff = tuple((u - v) % p for u, v in zip(xd, x))
        if _poly_gcd_is_nontrivial(diff, modulus, p):
            return False
    return True


def _poly_gcd_is_nontrivial(f, modulus, p) -> bool:
    """True iff gcd(f, modulus) has positive degree (f given reduced mod modulus)."""
    a = [x % p for x in modulus]
    b = [x % p for x in f]
    while any(b):
        # a mod b
        db = max(i for i, x in enumerate(b) if x)
        inv = pow(b[db], p - 2, p)
        r = [x % p for x in a]
        for i in range(len(r) - 1, db - 1, -1):
            if i < len(r) and r[i]:
                c = r[i] * inv % p
                for j in range(db + 1):
                    r[i - db + j] = (r[i - db + j] - c * b[j]) % p
        while r and not r[-1]:
            r.pop()
        a, b = b, r
    da = max((i for i, x in enumerate(a) if x), default=0)
    return da > 0


@dataclass(frozen=True)
class FiniteField:
    """F_{p^a} with a fixed monic irreducible modulus of degree a.

    Elements are length-a tuples of ints in [0, p): the coefficients of the
    residue polynomial, constant term first.  All methods are pure; a field
    object can be shared freely across threads.
    """

    p: int
    a: int
    modulus: tuple[int, ...]  # (c_0, ..., c_{a-1}, 1), length a+1

    @property
    def order(self) -> int:
        return self.p**self.a

    def zero(self):
        return (0,) * self.a

    def one(self):
        return (1,) + (0,) * (self.a - 1)

    def from_int(self, n: int):
        """Embed an integer via the prime field."""
        return (n % self.p,) + (0,) * (self.a - 1)

    def element_from_index(self, n: int):
        """The n-th element in canonical order: base-p digits of n."""
        if not 0 <= n < self.order:
            raise DomainError(f"index {n} outside field of order {self.order}")
        digits = []
        for _ in range(self.a):
            digits.append(n % self.p)
            n //= self.p
        return tuple(digits)

    def element_index(self, x) -> int:
        n = 0
        for c in reversed(x):
            n = n * self.p + c
        return n

    def elements(self):
        if self.order > ENUMERATION_CAP:
            raise SizeError(f"will not enumerate a field of order {self.order}")
        return [self.element_from_index(n) for n in range(self.order)]

    def add(self, x, y):
        return tuple((u + v) % self.p for u, v in zip(x, y))

    def sub(self, x, y):
        return tuple((u - v) % self.p for u, v in zip(x, y))

    def neg(self, x):
        return tuple((-u) % self.p for u in x)

    def mul(self, x, y):
        if self.a == 1:
            return ((x[0] * y[0]) % self.p,)
        return _poly_mul_mod(x, y, self.modulus, self.p)

    def pow(self, x, e: int):
        if e < 0:
            return self.pow(self.inv(x), -e)
        if self.a == 1:
            return (pow(x[0], e, self.p),)
        return _poly_pow_mod(x, e, self.modulus, self.p)

    def inv(self, x):
        if x == self.zero():
            raise DomainError("inverse of zero")
        return self.pow(x, self.order - 2)

    def is_square(self, x) -> bool:
        """Quadratic-residue test; in characteristic 2 every element is a square."""
        if self.p == 2 or x == self.zero():
            return True
        return self.pow(x, (self.order - 1) // 2) == self.one()

    def trace_to_f2(self, x) -> int:
        """Absolute trace to F_2 (characteristic 2 only)."""
        if self.p != 2:
            raise DomainError("absolute F_2-trace needs characteristic 2")
        acc = self.zero()
        y = x
        for _ in range(self.a):
            acc = self.add(acc, y)
            y = self.mul(y, y)
        return acc[0]

    def __repr__(self):
        return f"FiniteField(p={self.p}, a={self.a})"


@lru_cache(maxsize=None)
def construct_field(p: int, a: int) -> FiniteField:
    """F_{p^a} with the deterministic modulus: the monic irreducible of
    degree a whose coefficient vector encodes the smallest integer in base p.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if not 1 <= a <= 8:
        raise DomainError(f"extension degree {a} outside supported range 1..8")
    if a == 1:
        return FiniteField(p, 1, (0, 1))
    for n in range(p**a):
        digits = []
        m = n
        for _ in range(a):
            digits.append(m % p)
            m //= p
        coeffs = tuple(digits) + (1,)
        if _is_irreducible(coeffs, p):
            return FiniteField(p, a, coeffs)
    raise DomainError(f"no irreducible modulus found for p={p}, a={a}")  # pragma: no cover


def element_order(field: FiniteField, x) -> int:
    """Multiplicative order of a nonzero element; divides p^a - 1."""
    if x == field.zero():
        raise DomainError("zero has no multiplicative order")
    n = field.order - 1
    order = n
    for q in factorize(n):
        while order % q == 0 and field.pow(x, order // q) == field.one():
            order //= q
    return order
