"""Arithmetic in small finite fields GF(p^k).

Elements are encoded as integers in ``[0, q)``: the residue polynomial
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` is stored as ``sum(c_i * p**i)``.
All operations are table lookups; tables are built once per field.

Reduction polynomials are fixed (see ``REDUCTION_POLYNOMIALS``) so that point
and line indices built on top of a field are identical on every machine.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

MAX_ORDER = 32

# (p, k) -> coefficients of the monic reduction polynomial, lowest degree first.
REDUCTION_POLYNOMIALS: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),  # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (2, 5): (1, 0, 1, 0, 0, 1),  # x^5 + x^2 + 1
    (3, 2): (1, 0, 1),  # x^2 + 1
    (3, 3): (1, 2, 0, 1),  # x^3 + 2x + 1
    (5, 2): (2, 0, 1),  # x^2 + 2
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``, or raise ``FieldError``."""
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1 or not is_prime(p):
                break
            return p, k
    raise FieldError(f"{q} is not a prime power")


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [c % p for c in a[:dm]] + [0] * max(0, dm - len(a))


def _is_irreducible(m: tuple[int, ...], p: int) -> bool:
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if all(c == 0 for c in _poly_mod(list(m), tuple(low) + (1,), p)):
                return False
    return True


class FieldElement:
    """An element of a specific :class:`Field`, with operator overloads."""

    __slots__ = ("field", "rep")

    def __init__(self, field: Field, rep: int):
        if not 0 <= rep < field.q:
            raise FieldError(f"{rep} is not an element of GF({field.q})")
        self.field = field
        self.rep = rep

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.rep
        if isinstance(other, int):
            return self.field.element(other).rep
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.rep, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.rep, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.rep))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.rep, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * FieldElement(self.field, self.field.inv(self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.rep))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.rep, e))

    def inv(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.rep))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, int):
            return 0 <= other < self.field.q and self.rep == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.rep))

    def __int__(self):
        return self.rep

    def __repr__(self):
        return f"GF({self.field.q})({self.rep})"


class Field:
    """The finite field GF(p^k) with precomputed operation tables.

    Integer-level methods (``add``, ``mul``, ...) take and return element
    encodings; :meth:`element` wraps an encoding as a :class:`FieldElement`.
    """

    def __init__(self, p: int, k: int = 1):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        q = p**k
        if q > MAX_ORDER:
            raise FieldError(f"GF({p}^{k}) has order {q} > {MAX_ORDER}")
        if k == 1:
            modulus: tuple[int, ...] = (0, 1)
        else:
            if (p, k) not in REDUCTION_POLYNOMIALS:
                raise FieldError(f"no reduction polynomial for GF({p}^{k})")
            modulus = REDUCTION_POLYNOMIALS[(p, k)]
            if not _is_irreducible(modulus, p):
                raise FieldError(f"reduction polynomial for GF({p}^{k}) is reducible")
        self.p, self.k, self.q = p, k, q
        self.reduction_poly = modulus
        digits = [self._digits(a) for a in range(q)]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self._encode([(x + y) % p for x, y in zip(digits[a], digits[b])])
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(digits[a]):
                    for j, y in enumerate(digits[b]):
                        prod[i + j] += x * y
                mul[a, b] = self._encode(_poly_mod(prod, modulus, p) if k > 1 else [prod[0] % p])
        neg = np.array([int(np.where(add[a] == 0)[0][0]) for a in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.where(mul[a] == 1)[0][0])
        for t in (add, mul, neg, inv):
            t.setflags(write=False)
        self.add_table, self.mul_table, self.neg_table, self.inv_table = add, mul, neg, inv
        # plain nested lists are faster than numpy scalars for pure-Python loops
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = neg.tolist()
        self._inv = inv.tolist()

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _encode(self, digits: list[int]) -> int:
        return sum(c * self.p**i for i, c in enumerate(digits))

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash(("GF", self.p, self.k))

    def __repr__(self):
        return f"Field(p={self.p}, k={self.k})"

    def element(self, rep: int) -> FieldElement:
        if self.k == 1:
            rep %= self.p
        return FieldElement(self, rep)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, a) for a in range(self.q)]

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self._mul[r][a]
            a = self._mul[a][a]
            e >>= 1
        return r

    def dot(self, u, v) -> int:
        add, mul = self._add, self._mul
        s = 0
        for a, b in zip(u, v):
            s = add[s][mul[a][b]]
        return s

    def squares(self) -> list[int]:
        """Nonzero squares, sorted."""
        return sorted({self._mul[a][a] for a in range(1, self.q)})

    def order_of(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldError("0 has no multiplicative order")
        r, n = a, 1
        while r != 1:
            r = self._mul[r][a]
            n += 1
        return n


@lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> Field:
    return Field(p, k)


def field_of_order(q: int) -> Field:
    p, k = prime_power(q)
    return field_make(p, k)
