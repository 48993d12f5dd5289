"""Finite fields GF(p^k) with tabulated arithmetic, and their involutions.

Elements are encoded as integers in ``[0, q)``: the coefficient vector of the
residue polynomial read as a base-p number, least significant coefficient
first.  So in GF(4) = GF(2)[x]/(x^2+x+1) the class of ``x`` encodes as 2 and
``x + 1`` as 3.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field as dc_field

import numpy as np

DEFAULT_ORDER_CAP = 256

# Irreducible moduli, coefficients listed from the constant term upwards.
MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),  # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),  # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (2, 5): (1, 0, 1, 0, 0, 1),  # x^5 + x^2 + 1
    (2, 6): (1, 1, 0, 0, 0, 0, 1),  # x^6 + x + 1
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),  # x^7 + x + 1
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),  # x^8 + x^4 + x^3 + x^2 + 1
    (3, 2): (1, 0, 1),  # x^2 + 1
    (3, 3): (1, 2, 0, 1),  # x^3 + 2x + 1
    (3, 4): (2, 0, 0, 2, 1),  # x^4 + 2x^3 + 2
    (3, 5): (1, 2, 0, 0, 0, 1),  # x^5 + 2x + 1
    (5, 2): (2, 0, 1),  # x^2 + 2
    (5, 3): (3, 3, 0, 1),  # x^3 + 3x + 3
    (7, 2): (1, 0, 1),  # x^2 + 1
    (11, 2): (1, 0, 1),  # x^2 + 1
    (13, 2): (2, 12, 1),  # x^2 + 12x + 2
}


class FieldError(ValueError):
    """Raised for unsupported or malformed field requests."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_mod(a: list[int], f: tuple[int, ...], p: int) -> list[int]:
    """Remainder of ``a`` modulo the polynomial ``f`` over GF(p)."""
    a = [c % p for c in a]
    df = len(f) - 1
    lead_inv = pow(f[-1], p - 2, p)
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] * lead_inv % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return a[:df] if len(a) >= df else a + [0] * (df - len(a))


def is_irreducible(f: tuple[int, ...], p: int) -> bool:
    """Trial division of ``f`` by every monic polynomial of degree <= deg(f)/2."""
    k = len(f) - 1
    if k < 1 or f[-1] % p == 0:
        return False
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            if not any(_poly_mod(list(f), divisor, p)):
                return False
    return True


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """A finite field GF(p^k) with complete addition and multiplication tables."""

    p: int
    k: int
    modulus: tuple[int, ...]
    add_table: np.ndarray = dc_field(repr=False)
    mul_table: np.ndarray = dc_field(repr=False)
    neg_table: np.ndarray = dc_field(repr=False)
    inv_table: np.ndarray = dc_field(repr=False)

    @property
    def order(self) -> int:
        return self.p**self.k

    q = order

    @property
    def name(self) -> str:
        return f"GF({self.order})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __str__(self) -> str:
        return self.name

    # Scalar arithmetic on encodings.
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + self.name)
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elements(self) -> range:
        return range(self.order)

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def coefficients(self, a: int) -> tuple[int, ...]:
        """Polynomial coefficients of an encoding, constant term first."""
        out = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)


def _build_tables(p: int, k: int, modulus: tuple[int, ...]):
    q = p**k
    digits = np.array([[(v // p**i) % p for i in range(k)] for v in range(q)], dtype=np.int64)
    weights = p ** np.arange(k, dtype=np.int64)

    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    neg = ((-digits) % p) @ weights

    # Multiplication by a fixed element is GF(p)-linear; column j of its
    # matrix is (a * x^j) mod f.
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        cols = []
        cur = list(digits[a])
        for _ in range(k):
            cols.append(cur)
            cur = _poly_mod([0] + cur, modulus, p)
        mat = np.array(cols, dtype=np.int64).T
        mul[a] = ((digits @ mat.T) % p) @ weights

    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        hits = np.nonzero(mul[a] == 1)[0]
        if len(hits) != 1:
            raise FieldError(f"modulus {modulus} does not define a field over GF({p})")
        inv[a] = hits[0]
    for t in (add, mul, neg, inv):
        t.setflags(write=False)
    return add, mul, neg, inv


@functools.lru_cache(maxsize=None)
def _field_cached(p: int, k: int) -> FieldSpec:
    modulus = (0, 1) if k == 1 else MODULI[(p, k)]
    if k > 1 and not is_irreducible(modulus, p):
        raise FieldError(f"tabulated modulus for GF({p}^{k}) is reducible")
    add, mul, neg, inv = _build_tables(p, k, modulus)
    return FieldSpec(p, k, modulus, add, mul, neg, inv)


def field_make(p: int, k: int = 1, cap: int = DEFAULT_ORDER_CAP) -> FieldSpec:
    """Return GF(p^k).  Instances are cached, so equal arguments share tables."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    if p**k > cap:
        raise FieldError(f"GF({p}^{k}) exceeds the order cap {cap}")
    if k > 1 and (p, k) not in MODULI:
        raise FieldError(f"no tabulated modulus for GF({p}^{k})")
    return _field_cached(p, k)


def field_from_order(q: int, cap: int = DEFAULT_ORDER_CAP) -> FieldSpec:
    for p in range(2, q + 1):
        if q % p == 0:
            k, rest = 0, q
            while rest % p == 0:
                rest //= p
                k += 1
            if rest != 1:
                break
            return field_make(p, k, cap)
    raise FieldError(f"{q} is not a prime power")


_FIELD_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*\)\s*$", re.IGNORECASE)


def parse_field(text: str, cap: int = DEFAULT_ORDER_CAP) -> FieldSpec:
    """Parse ``"GF(q)"``."""
    match = _FIELD_RE.match(text)
    if not match:
        raise FieldError(f"cannot parse field {text!r}; expected 'GF(q)'")
    return field_from_order(int(match.group(1)), cap)


class FieldElement:
    """An element of a FieldSpec; supports the usual arithmetic operators."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        if not 0 <= value < field.order:
            raise FieldError(f"{value} is not an element of {field.name}")
        self.field = field
        self.value = int(value)

    def _other(self, other: FieldElement | int) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed fields {self.field.name} and {other.field.name}")
            return other.value
        return FieldElement(self.field, other).value

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(self.field, self.field.power(self.value, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.field.name}[{self.value}]"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Apply ``op`` in {add, sub, mul, div, neg, inv}; ``b`` is ignored for unary ops."""
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if b is None:
        raise FieldError(f"operation {op!r} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise FieldError(f"unknown field operation {op!r}")


@dataclass(frozen=True, eq=False)
class Involution:
    """The identity or the order-2 Frobenius ``a -> a^(p^(k/2))`` of a field."""

    kind: str
    field: FieldSpec
    table: np.ndarray = dc_field(repr=False, compare=False)

    def __call__(self, a: int) -> int:
        return int(self.table[a])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Involution):
            return NotImplemented
        return self.kind == other.kind and self.field == other.field

    def __hash__(self) -> int:
        return hash((self.kind, self.field))

    @property
    def is_identity(self) -> bool:
        return self.kind == "identity"

    @property
    def short_name(self) -> str:
        return "id" if self.is_identity else "frob"


def make_involution(field: FieldSpec, kind: str = "identity") -> Involution:
    kind = {"id": "identity", "frob": "frobenius"}.get(kind, kind)
    if kind == "identity":
        table = np.arange(field.order, dtype=np.int64)
    elif kind == "frobenius":
        if field.k % 2:
            raise FieldError(f"Frobenius involution needs an even extension degree, {field.name} has k={field.k}")
        e = field.p ** (field.k // 2)
        table = np.array([field.power(a, e) for a in field.elements()], dtype=np.int64)
    else:
        raise FieldError(f"unknown involution kind {kind!r}")
    table.setflags(write=False)
    return Involution(kind, field, table)


def involution_apply(sigma: Involution, a: FieldElement | int) -> FieldElement:
    value = a.value if isinstance(a, FieldElement) else int(a)
    return FieldElement(sigma.field, sigma(value))


def fixed_subfield(sigma: Involution) -> list[int]:
    """Encodings of all elements fixed by ``sigma``, in increasing order."""
    return [a for a in sigma.field.elements() if sigma(a) == a]


@dataclass(frozen=True)
class Restrictions:
    r1: bool
    r2: bool

    @property
    def both(self) -> bool:
        return self.r1 and self.r2


def check_restrictions(sigma: Involution) -> Restrictions:
    """(R1): more than three fixed elements; (R2): no identity involution in characteristic 2.

    Finite fields are commutative, so the centre is the whole field and the
    first condition only counts fixed elements.
    """
    r1 = len(fixed_subfield(sigma)) > 3
    r2 = not (sigma.is_identity and sigma.field.p == 2)
    return Restrictions(r1, r2)
