"""Exact arithmetic in GF(p^k) for odd p.

Elements are stored as their canonical index: the coefficient sequence
``[c_0, ..., c_{k-1}]`` of the polynomial-basis representation read as a
base-p integer with ``c_0`` least significant.  The canonical order of
elements is the order of these integers.

Prime fields use plain modular arithmetic.  Extension fields use exp/log
tables over a primitive element and Zech logarithms for addition, so
every scalar operation is O(1).  The ``v*`` methods are the same
operations applied elementwise to numpy integer arrays.
"""

from __future__ import annotations

import functools
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DegreeOutOfRange,
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    NotEnoughNonsquares,
    NotPrime,
)

MAX_ORDER = 2**16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` into ``(p, k)`` with ``q == p**k``; raise NotPrime otherwise."""
    fs = prime_factors(q) if q > 1 else []
    if len(fs) != 1:
        raise NotPrime(f"{q} is not a prime power")
    p, k = fs[0], 0
    while q > 1:
        q //= p
        k += 1
    return p, k


# --- polynomials over GF(p) as coefficient lists, constant term first ---

def _digits(v: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        v, d = divmod(v, p)
        out.append(d)
    return out


def _undigits(ds: Sequence[int], p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def _polymod(a: list[int], mod: Sequence[int], p: int) -> list[int]:
    """Reduce ``a`` modulo monic ``mod``; result has length ``deg(mod)``."""
    k = len(mod) - 1
    a = list(a)
    for i in range(len(a) - 1, k - 1, -1):
        c = a[i] % p
        if c:
            for j in range(k + 1):
                a[i - k + j] -= c * mod[j]
    out = [x % p for x in a[:k]]
    return out + [0] * (k - len(out))


def _polymulmod(a: Sequence[int], b: Sequence[int], mod: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _polymod(prod, mod, p)


def _divides(d: Sequence[int], f: Sequence[int], p: int) -> bool:
    """True if monic ``d`` divides ``f`` over GF(p)."""
    return not any(_polymod(list(f), d, p))


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive factor check of a monic polynomial (coefficients low to high)."""
    k = len(poly) - 1
    if k < 1 or poly[-1] % p != 1:
        return False
    if k == 1:
        return True
    # a reducible polynomial has a monic factor of degree <= k/2
    for deg in range(1, k // 2 + 1):
        for v in range(p**deg):
            if _divides(_digits(v, p, deg) + [1], poly, p):
                return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """The monic irreducible of degree k whose low coefficients form the least base-p integer."""
    for v in range(p**k):
        poly = _digits(v, p, k) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # cannot happen


class Field:
    """GF(p^k) with a fixed monic irreducible modulus."""

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(int(c) % p for c in modulus)
        if len(self.modulus) != k + 1 or not is_irreducible(self.modulus, p):
            raise ValueError(f"modulus {list(modulus)} is not a monic irreducible of degree {k} over GF({p})")
        self._neg_one_log = (self.q - 1) // 2
        self._sqrt: dict[int, int] | None = None
        if k > 1:
            self._build_tables()

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        mod = self.modulus
        order = q - 1
        factors = prime_factors(order)

        def power(base: list[int], e: int) -> list[int]:
            acc = [1] + [0] * (k - 1)
            while e:
                if e & 1:
                    acc = _polymulmod(acc, base, mod, p)
                base = _polymulmod(base, base, mod, p)
                e >>= 1
            return acc

        one = [1] + [0] * (k - 1)
        for v in range(2, q):
            g = _digits(v, p, k)
            if all(power(g, order // f) != one for f in factors):
                break
        self.generator = v
        exp = [0] * order
        log = [0] * q
        cur = one
        for i in range(order):
            val = _undigits(cur, p)
            exp[i] = val
            log[val] = i
            cur = _polymulmod(cur, g, mod, p)
        # zech[n] = log(1 + g^n), or -1 when 1 + g^n == 0
        zech = [-1] * order
        for n in range(order):
            ds = _digits(exp[n], p, k)
            ds[0] = (ds[0] + 1) % p
            s = _undigits(ds, p)
            zech[n] = log[s] if s else -1
        self._exp, self._log, self._zech = exp, log, zech
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)
        self._zech_np = np.array(zech, dtype=np.int64)

    # --- identity -------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> "Field":
        return make_field(d["p"], d["k"], d.get("modulus"))

    # --- element construction --------------------------------------------

    def __call__(self, x) -> "FieldElement":
        """Integers embed as constants mod p; sequences are coefficient lists."""
        if isinstance(x, FieldElement):
            if x.field != self:
                raise FieldMismatch(f"{x!r} is not in {self}")
            return x
        if isinstance(x, (int, np.integer)):
            return FieldElement(self, int(x) % self.p)
        coeffs = list(x)
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        return FieldElement(self, _undigits([int(c) % self.p for c in coeffs], self.p))

    def from_index(self, i: int) -> "FieldElement":
        if not 0 <= i < self.q:
            raise ValueError(f"index {i} out of range for {self}")
        return FieldElement(self, i)

    def elements(self) -> Iterator["FieldElement"]:
        for i in range(self.q):
            yield FieldElement(self, i)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def coeffs(self, v: int) -> tuple[int, ...]:
        return tuple(_digits(v, self.p, self.k))

    # --- scalar arithmetic on canonical indices --------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self._exp[(la + z) % (self.q - 1)]

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if a == 0:
            return 0
        return self._exp[(self._log[a] + self._neg_one_log) % (self.q - 1)]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of zero in {self}")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[-self._log[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        acc = 1
        while e:
            if e & 1:
                acc = self.mul(acc, a)
            a = self.mul(a, a)
            e >>= 1
        return acc

    def is_square_value(self, a: int) -> bool:
        # Euler's criterion
        return a == 0 or self.pow(a, (self.q - 1) // 2) == 1

    def sqrt_value(self, a: int) -> int | None:
        """Canonically least square root of ``a``, or None for a nonsquare."""
        if self._sqrt is None:
            table: dict[int, int] = {}
            for x in range(self.q):
                table.setdefault(self.mul(x, x), x)
            self._sqrt = table
        return self._sqrt.get(a)

    # --- elementwise arithmetic on numpy arrays --------------------------

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        a, b = np.broadcast_arrays(a, b)
        la = self._log_np[a]
        z = self._zech_np[(self._log_np[b] - la) % (self.q - 1)]
        out = np.where(z < 0, 0, self._exp_np[(la + z) % (self.q - 1)])
        out = np.where(a == 0, b, out)
        return np.where(b == 0, a, out)

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return -a % self.p
        out = self._exp_np[(self._log_np[a] + self._neg_one_log) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return a * b % self.p
        out = self._exp_np[(self._log_np[a] + self._log_np[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)


@functools.lru_cache(maxsize=None)
def _make_field(p: int, k: int, modulus: tuple[int, ...] | None) -> Field:
    return Field(p, k, modulus if modulus is not None else least_irreducible(p, k))


def make_field(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> Field:
    """Return GF(p^k); the default modulus is the least monic irreducible."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if k < 1 or p**k > MAX_ORDER:
        raise DegreeOutOfRange(f"need k >= 1 and p^k <= {MAX_ORDER}, got p={p}, k={k}")
    return _make_field(p, k, tuple(modulus) if modulus is not None else None)


def field_of_order(q: int) -> Field:
    p, k = prime_power(q)
    return make_field(p, k)


class FieldElement:
    """An immutable element of a :class:`Field`."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def _wrap(self, v: int) -> "FieldElement":
        return FieldElement(self.field, v)

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.sub(b, self.value))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(self.value, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.field.div(b, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.field.inv(self.value))

    def is_square(self) -> bool:
        return self.field.is_square_value(self.value)

    def sqrt(self) -> "FieldElement | None":
        s = self.field.sqrt_value(self.value)
        return None if s is None else self._wrap(s)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.field == other.field
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.value))

    def __lt__(self, other: "FieldElement"):
        return self.value < other.value

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.value}"
        return f"{self.field}{list(self.coeffs)}"

    def to_json(self) -> list[int]:
        return list(self.coeffs)


# module-level spellings of the field operations

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def is_square(a: FieldElement) -> bool:
    return a.is_square()


def squares(field: Field) -> list[FieldElement]:
    return [x for x in field.elements() if x.is_square()]


def nonsquares(field: Field, count: int) -> list[FieldElement]:
    """The ``count`` least nonsquares of ``field`` in canonical order."""
    if count > (field.q - 1) // 2:
        raise NotEnoughNonsquares(f"{field} has only {(field.q - 1) // 2} nonsquares, {count} requested")
    out = []
    for x in field.elements():
        if len(out) == count:
            break
        if not x.is_square():
            out.append(x)
    return out


def element_from_json(field: Field, coeffs: Iterable[int]) -> FieldElement:
    elem = field(list(coeffs))
    if list(elem.coeffs) != list(coeffs):
        raise ValueError(f"non-canonical element encoding {list(coeffs)}")
    return elem
