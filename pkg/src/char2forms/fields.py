"""Exact arithmetic for towers of characteristic-2 fields.

Three kinds of fields are supported:

- ``GF2``: the prime field with two elements,
- ``GF2k``: Galois fields GF(2^k) given by an irreducible polynomial over GF(2),
- ``RationalFunctionField``: the rational-function extension F -> F(t), which
  can be iterated to produce non-perfect fields such as F2(t) and F2(t)(u).

Elements are immutable value objects carrying a reference to their field.
Rational functions are kept in canonical form (monic denominator, gcd one),
so equality is plain representational equality.  Every field also exposes the
decomposition of F as a vector space over its subfield of squares, which is
what degenerate/defect computations downstream are built on.
"""

from __future__ import annotations

import re
from typing import Iterator, Optional


class FieldError(Exception):
    pass


class DescriptorMismatch(FieldError):
    """Operands belong to different fields."""


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class ParseError(FieldError):
    def __init__(self, message: str, position: int = -1):
        super().__init__(message)
        self.position = position


# ---------------------------------------------------------------------------
# GF(2)[x] helpers on plain int bit masks (bit i = coefficient of x^i)

def _gf2x_degree(a: int) -> int:
    return a.bit_length() - 1


def _gf2x_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
    return r


def _gf2x_mod(a: int, m: int) -> int:
    dm = _gf2x_degree(m)
    da = _gf2x_degree(a)
    while da >= dm:
        a ^= m << (da - dm)
        da = _gf2x_degree(a)
    return a


def _gf2x_mulmod(a: int, b: int, m: int) -> int:
    return _gf2x_mod(_gf2x_mul(a, b), m)


def _gf2x_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _gf2x_mod(a, b)
    return a


def _gf2x_invmod(a: int, m: int) -> int:
    # extended Euclid on bit polynomials
    t0, t1 = 0, 1
    r0, r1 = m, a
    while r1:
        shift = _gf2x_degree(r0) - _gf2x_degree(r1)
        if shift < 0:
            r0, r1 = r1, r0
            t0, t1 = t1, t0
            continue
        r0 ^= r1 << shift
        t0 ^= t1 << shift
    if r0 != 1:
        raise DivisionByZero("element is not invertible")
    return t0


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def gf2_poly_is_irreducible(mask: int) -> bool:
    """Irreducibility of a polynomial over GF(2), given as a bit mask."""
    k = _gf2x_degree(mask)
    if k <= 0:
        return False
    if mask & 1 == 0:  # divisible by x
        return k == 1
    # x^(2^k) == x mod mask, and gcd(x^(2^(k/p)) + x, mask) == 1 for primes p|k
    x = 0b10
    frob = [x]
    cur = x
    for _ in range(k):
        cur = _gf2x_mulmod(cur, cur, mask)
        frob.append(cur)
    if frob[k] != x:
        return False
    for p in _prime_factors(k):
        if _gf2x_gcd(frob[k // p] ^ x, mask) != 1:
            return False
    return True


# ---------------------------------------------------------------------------

_ATOM_RE = re.compile(r"^(?:[01]|[a-z](?:\^[0-9]+)?)$")


def _wrap(s: str) -> str:
    return s if _ATOM_RE.match(s) else "(" + s + ")"


class FieldElement:
    """An element of one of the tower fields; immutable, canonical."""

    __slots__ = ("field", "payload")

    def __init__(self, field: "Field", payload):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "payload", payload)

    def __setattr__(self, name, value):
        raise AttributeError("field elements are immutable")

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DescriptorMismatch(
                    f"mixed fields: {self.field.describe()} vs {other.field.describe()}")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._add(self.payload, other.payload))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field._mul(self.payload, other.payload))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self
        if n < 0:
            base = self.inverse()
            n = -n
        result = self.field.one()
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero(f"inverse of zero in {self.field.describe()}")
        return FieldElement(self.field, self.field._inv(self.payload))

    def frobenius(self) -> "FieldElement":
        """The Frobenius endomorphism s -> s^2."""
        return self * self

    def sqrt(self) -> Optional["FieldElement"]:
        """A square root, or None when the element is not a square."""
        root = self.field._sqrt(self.payload)
        return None if root is None else FieldElement(self.field, root)

    def is_square(self) -> bool:
        return self.field._sqrt(self.payload) is not None

    def is_zero(self) -> bool:
        return self.field._is_zero(self.payload)

    def is_one(self) -> bool:
        return self == self.field.one()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.payload == other.payload

    def __hash__(self):
        return hash((self.field, self.payload))

    def __str__(self):
        return self.field._format(self.payload)

    __repr__ = __str__


class Field:
    """Base class: a field descriptor plus payload-level arithmetic."""

    characteristic = 2
    variables: tuple[str, ...] = ()
    order: Optional[int] = None  # None means infinite
    is_perfect = False

    # -- payload primitives supplied by subclasses -------------------------
    def _add(self, a, b):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _inv(self, a):
        raise NotImplementedError

    def _sqrt(self, a):
        raise NotImplementedError

    def _is_zero(self, a) -> bool:
        raise NotImplementedError

    def _format(self, a) -> str:
        raise NotImplementedError

    # -- common element-level interface ------------------------------------
    def zero(self) -> FieldElement:
        return self.from_int(0)

    def one(self) -> FieldElement:
        return self.from_int(1)

    def from_int(self, n: int) -> FieldElement:
        raise NotImplementedError

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field != self:
                raise DescriptorMismatch(
                    f"element of {x.field.describe()} used in {self.describe()}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot interpret {x!r} as an element of {self.describe()}")

    def is_unit(self, x: FieldElement) -> bool:
        return not x.is_zero()

    def describe(self) -> str:
        raise NotImplementedError

    def embed(self, a: FieldElement) -> FieldElement:
        """Lift an element of a field lower in this tower into this field."""
        if a.field == self:
            return a
        raise DescriptorMismatch(
            f"{a.field.describe()} does not embed into {self.describe()}")

    def variable_elements(self) -> dict[str, FieldElement]:
        return {}

    def elements(self) -> Iterator[FieldElement]:
        raise FieldError(f"{self.describe()} is not finite")

    def random_element(self, rng, size: int = 2) -> FieldElement:
        raise NotImplementedError

    def parse(self, text: str) -> FieldElement:
        return parse_expression(text, self.variable_elements(), self)

    # -- decomposition over the subfield of squares ------------------------
    def square_monomials(self) -> tuple[tuple[str, ...], ...]:
        """Basis monomials of F over F^2, as tuples of variable names."""
        raise NotImplementedError

    def monomial_value(self, monomial: tuple[str, ...]) -> FieldElement:
        value = self.one()
        for name in monomial:
            value = value * self.variable_elements()[name]
        return value

    def square_coordinates(self, a: FieldElement) -> tuple[FieldElement, ...]:
        """Elements e_m with a = sum over monomials m of m * e_m^2."""
        raise NotImplementedError

    def __ne__(self, other):
        return not self.__eq__(other)


class GF2(Field):
    """The prime field GF(2); payloads are the ints 0 and 1."""

    order = 2
    is_perfect = True

    def _add(self, a, b):
        return a ^ b

    def _mul(self, a, b):
        return a & b

    def _inv(self, a):
        return a

    def _sqrt(self, a):
        return a

    def _is_zero(self, a):
        return a == 0

    def _format(self, a):
        return str(a)

    def from_int(self, n):
        return FieldElement(self, n & 1)

    def describe(self):
        return "gf2"

    def elements(self):
        yield self.from_int(0)
        yield self.from_int(1)

    def random_element(self, rng, size=2):
        return self.from_int(rng.randrange(2))

    def square_monomials(self):
        return ((),)

    def square_coordinates(self, a):
        return (self.coerce(a),)

    def __eq__(self, other):
        return isinstance(other, GF2)

    def __hash__(self):
        return hash("gf2")


class GF2k(Field):
    """GF(2^k) as GF(2)[x]/(modulus); payloads are ints below 2^k.

    The residue class of x is exposed as the generator, written ``g``.
    """

    is_perfect = True
    variables = ("g",)

    def __init__(self, k: int, modulus: int):
        if not 1 <= k <= 16:
            raise FieldError("gf2k supports 1 <= k <= 16")
        if _gf2x_degree(modulus) != k:
            raise FieldError(f"modulus {modulus:#b} does not have degree {k}")
        if not gf2_poly_is_irreducible(modulus):
            raise FieldError(f"modulus {modulus:#b} is not irreducible over GF(2)")
        self.k = k
        self.modulus = modulus
        self.order = 1 << k

    def _add(self, a, b):
        return a ^ b

    def _mul(self, a, b):
        return _gf2x_mulmod(a, b, self.modulus)

    def _inv(self, a):
        return _gf2x_invmod(a, self.modulus)

    def _sqrt(self, a):
        # Frobenius is bijective; its inverse is k-1 further squarings.
        for _ in range(self.k - 1):
            a = self._mul(a, a)
        return a

    def _is_zero(self, a):
        return a == 0

    def _format(self, a):
        if a == 0:
            return "0"
        terms = []
        for d in range(_gf2x_degree(a), -1, -1):
            if (a >> d) & 1:
                if d == 0:
                    terms.append("1")
                elif d == 1:
                    terms.append("g")
                else:
                    terms.append(f"g^{d}")
        return "+".join(terms)

    def from_int(self, n):
        return FieldElement(self, n & 1)

    def from_bits(self, bits: int) -> FieldElement:
        if not 0 <= bits < self.order:
            raise FieldError(f"bit pattern {bits} out of range for {self.describe()}")
        return FieldElement(self, bits)

    @property
    def generator(self) -> FieldElement:
        return FieldElement(self, 0b10 if self.k > 1 else self.modulus ^ 0b10)

    def describe(self):
        return f"gf2k:{self.k}:{self.modulus}"

    def embed(self, a):
        if a.field == self:
            return a
        if isinstance(a.field, GF2):
            return FieldElement(self, a.payload)
        raise DescriptorMismatch(
            f"{a.field.describe()} does not embed into {self.describe()}")

    def variable_elements(self):
        return {"g": self.generator}

    def elements(self):
        for bits in range(self.order):
            yield FieldElement(self, bits)

    def random_element(self, rng, size=2):
        return FieldElement(self, rng.randrange(self.order))

    def square_monomials(self):
        return ((),)

    def square_coordinates(self, a):
        return (self.coerce(a).sqrt(),)

    def __eq__(self, other):
        return isinstance(other, GF2k) and self.k == other.k and self.modulus == other.modulus

    def __hash__(self):
        return hash(("gf2k", self.k, self.modulus))


class Poly:
    """Dense polynomial over a base field; coefficients low to high degree."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        coeffs = [field.coerce(c) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (field.one(),))

    @classmethod
    def x(cls, field):
        return cls(field, (field.zero(), field.one()))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> FieldElement:
        if self.is_zero():
            raise FieldError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> FieldElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero()

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self.coeff(i) + other.coeff(i) for i in range(n)])

    __sub__ = __add__

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    def scale(self, s: FieldElement) -> "Poly":
        return Poly(self.field, [c * s for c in self.coeffs])

    def shift(self, k: int) -> "Poly":
        if self.is_zero():
            return self
        return Poly(self.field, (self.field.zero(),) * k + self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        lead_inv = other.lead().inverse()
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return Poly.zero(self.field), self
        quot = [self.field.zero()] * (dq + 1)
        for i in range(dq, -1, -1):
            if len(rem) < len(other.coeffs) + i:
                continue
            c = rem[len(other.coeffs) + i - 1] * lead_inv
            if c.is_zero():
                if rem:
                    rem.pop()
                continue
            quot[i] = c
            for j, b in enumerate(other.coeffs):
                rem[i + j] = rem[i + j] + c * b
            rem.pop()
        return Poly(self.field, quot), Poly(self.field, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.lead().inverse())

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def sqrt(self) -> Optional["Poly"]:
        # p = q^2 in char 2 means odd coefficients vanish and even ones are squares
        roots = []
        for i, c in enumerate(self.coeffs):
            if i % 2:
                if not c.is_zero():
                    return None
            else:
                r = c.sqrt()
                if r is None:
                    return None
                roots.append(r)
        return Poly(self.field, roots)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def format(self, var: str) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for d in range(self.degree, -1, -1):
            c = self.coeffs[d]
            if c.is_zero():
                continue
            if d == 0:
                terms.append(str(c))
            else:
                power = var if d == 1 else f"{var}^{d}"
                terms.append(power if c.is_one() else _wrap(str(c)) + power)
        return "+".join(terms)

    def __repr__(self):
        return self.format("x")


class RationalFunctionField(Field):
    """The field F(t) of rational functions over a base field.

    Payloads are canonical pairs (numerator, denominator): the denominator is
    monic, gcd(num, den) = 1, and zero is (0, 1).  Variable names are single
    letters, distinct throughout the tower ('g' is reserved for gf2k towers).
    """

    def __init__(self, base: Field, var: str):
        if not (len(var) == 1 and var.isalpha() and var.islower()):
            raise FieldError(f"variable name must be a single lowercase letter: {var!r}")
        if var in base.variables or var == "g":
            raise FieldError(f"variable {var!r} already used in this tower")
        self.base = base
        self.var = var
        self.variables = base.variables + (var,)

    def _canonical(self, num: Poly, den: Poly):
        if den.is_zero():
            raise DivisionByZero(f"zero denominator in {self.describe()}")
        if num.is_zero():
            return (Poly.zero(self.base), Poly.one(self.base))
        if den.degree == 0:
            inv = den.coeffs[0].inverse()
            if inv.is_one():
                return (num, den)
            return (num.scale(inv), Poly.one(self.base))
        if num.degree > 0:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
        lead_inv = den.lead().inverse()
        if lead_inv.is_one():
            return (num, den)
        return (num.scale(lead_inv), den.scale(lead_inv))

    def from_fraction(self, num: Poly, den: Poly) -> FieldElement:
        return FieldElement(self, self._canonical(num, den))

    def _add(self, a, b):
        return self._canonical(a[0] * b[1] + b[0] * a[1], a[1] * b[1])

    def _mul(self, a, b):
        return self._canonical(a[0] * b[0], a[1] * b[1])

    def _inv(self, a):
        return self._canonical(a[1], a[0])

    def _sqrt(self, a):
        # num/den = (num*den)/den^2, so it suffices to take the root of num*den
        root = (a[0] * a[1]).sqrt()
        if root is None:
            return None
        return self._canonical(root, a[1])

    def _is_zero(self, a):
        return a[0].is_zero()

    def _format(self, a):
        num, den = a
        num_s = num.format(self.var)
        if den == Poly.one(self.base):
            return num_s
        return _wrap(num_s) + "/" + _wrap(den.format(self.var))

    def from_int(self, n):
        return FieldElement(self, (Poly(self.base, (self.base.from_int(n),)),
                                   Poly.one(self.base)))

    def describe(self):
        return f"ratfunc({self.base.describe()},{self.var})"

    def embed(self, a):
        if a.field == self:
            return a
        lifted = self.base.embed(a) if a.field != self.base else a
        return FieldElement(self, (Poly(self.base, (lifted,)), Poly.one(self.base)))

    @property
    def generator(self) -> FieldElement:
        return FieldElement(self, (Poly.x(self.base), Poly.one(self.base)))

    def variable_elements(self):
        mapping = {name: self.embed(el)
                   for name, el in self.base.variable_elements().items()}
        mapping[self.var] = self.generator
        return mapping

    def random_element(self, rng, size=2):
        def random_poly(max_deg, nonzero=False):
            while True:
                p = Poly(self.base, [self.base.random_element(rng)
                                     for _ in range(rng.randrange(max_deg + 1) + 1)])
                if not (nonzero and p.is_zero()):
                    return p
        num = random_poly(size)
        den = random_poly(size, nonzero=True) if rng.randrange(2) else Poly.one(self.base)
        return self.from_fraction(num, den)

    def square_monomials(self):
        base_monos = self.base.square_monomials()
        return base_monos + tuple(m + (self.var,) for m in base_monos)

    def square_coordinates(self, a):
        a = self.coerce(a)
        num, den = a.payload
        prod = num * den
        base_monos = self.base.square_monomials()
        width = len(base_monos)
        # coefficient lists for the polynomials P[m][eps], a = sum m*t^eps*(P/den)^2
        parts = [[[], []] for _ in range(width)]
        for i, c in enumerate(prod.coeffs):
            k, eps = divmod(i, 2)
            for m_idx, e in enumerate(self.base.square_coordinates(c)):
                lst = parts[m_idx][eps]
                while len(lst) <= k:
                    lst.append(self.base.zero())
                lst[k] = e
        coords = []
        for eps in (0, 1):
            for m_idx in range(width):
                p = Poly(self.base, parts[m_idx][eps])
                coords.append(self.from_fraction(p, den))
        return tuple(coords)

    def __eq__(self, other):
        return (isinstance(other, RationalFunctionField)
                and self.var == other.var and self.base == other.base)

    def __hash__(self):
        return hash(("ratfunc", hash(self.base), self.var))


# ---------------------------------------------------------------------------
# Linear algebra over the subfield of squares.
#
# square_coordinates is additive and satisfies coords(s^2 * a) = s * coords(a),
# so F^2-linear questions about elements translate into plain F-linear
# questions about their coordinate vectors.

def _coordinate_columns(elements) -> tuple[Field, list[list[FieldElement]]]:
    if not elements:
        raise FieldError("need at least one element")
    field = elements[0].field
    cols = []
    for el in elements:
        if el.field != field:
            raise DescriptorMismatch("span inputs come from different fields")
        cols.append(list(field.square_coordinates(el)))
    return field, cols


def _eliminate(rows: list[list[FieldElement]]) -> tuple[list[list[FieldElement]], list[int]]:
    """In-place row echelon form; returns (rows, pivot column indices)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x + f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def square_span_dimension(elements) -> int:
    """Dimension over F^2 of the F^2-span of the given elements of F."""
    field, cols = _coordinate_columns(list(elements))
    rows = [list(col) for col in cols]  # one row per element
    _, pivots = _eliminate(rows)
    return len(pivots)


def square_span_solve(target: FieldElement, basis) -> Optional[list[FieldElement]]:
    """Coefficients x_i with target = sum x_i^2 * basis_i, or None."""
    basis = list(basis)
    field, cols = _coordinate_columns([target] + basis)
    t_col, b_cols = cols[0], cols[1:]
    height = len(t_col)
    rows = [[b_cols[j][i] for j in range(len(b_cols))] + [t_col[i]]
            for i in range(height)]
    rows, pivots = _eliminate(rows)
    if len(b_cols) in pivots:
        return None
    solution = [field.zero()] * len(b_cols)
    for r, c in enumerate(pivots):
        solution[c] = rows[r][-1]
    return solution


def square_span_kernel(elements) -> list[list[FieldElement]]:
    """All F-linear dependencies x with sum x_i^2 * elements_i = 0 (a basis)."""
    elements = list(elements)
    field, cols = _coordinate_columns(elements)
    height = len(cols[0])
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(height)]
    rows, pivots = _eliminate(rows)
    free = [c for c in range(len(cols)) if c not in pivots]
    kernel = []
    for f in free:
        vec = [field.zero()] * len(cols)
        vec[f] = field.one()
        for r, c in enumerate(pivots):
            vec[c] = rows[r][f]
        kernel.append(vec)
    return kernel


# ---------------------------------------------------------------------------
# Element expressions.  One grammar serves parsing user input for every field
# in a tower (and, with an extra variable, for the quadratic algebras built on
# top): sums of monomials in the declared variables, `^` powers, juxtaposition
# or `*` for products, `/` for fractions, parentheses.

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>[0-9]+)|(?P<name>[a-zA-Z])|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group("int") is not None:
            tokens.append(("int", int(m.group("int")), m.start()))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start()))
        else:
            tokens.append(("op", m.group("op"), m.start()))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse_expression(text: str, variables: dict, ring):
    """Evaluate an element expression in `ring` with the given variable map."""
    tokens = _tokenize(text)
    idx = 0

    def peek():
        return tokens[idx]

    def advance():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def parse_sum():
        value = parse_product()
        while peek()[0] == "op" and peek()[1] in "+-":
            advance()
            value = value + parse_product()
        return value

    def parse_product():
        value = parse_factor()
        while True:
            kind, val, pos = peek()
            if kind == "op" and val in "*/":
                advance()
                rhs = parse_factor()
                if val == "*":
                    value = value * rhs
                else:
                    try:
                        value = value / rhs
                    except (DivisionByZero, ZeroDivisionError):
                        raise ParseError("division by zero", pos)
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                value = value * parse_factor()
            else:
                return value

    def parse_factor():
        value = parse_atom()
        if peek()[0] == "op" and peek()[1] == "^":
            advance()
            kind, val, pos = advance()
            if kind != "int":
                raise ParseError("exponent must be an integer", pos)
            value = value ** val
        return value

    def parse_atom():
        kind, val, pos = advance()
        if kind == "op" and val in "+-":  # unary sign; negation is identity
            return parse_atom()
        if kind == "int":
            return ring.from_int(val)
        if kind == "name":
            if val not in variables:
                raise ParseError(f"unknown variable {val!r}", pos)
            return variables[val]
        if kind == "op" and val == "(":
            value = parse_sum()
            kind, val, pos = advance()
            if not (kind == "op" and val == ")"):
                raise ParseError("expected ')'", pos)
            return value
        raise ParseError("expected an element expression", pos)

    value = parse_sum()
    kind, _, pos = peek()
    if kind != "end":
        raise ParseError("trailing input", pos)
    return value


# ---------------------------------------------------------------------------
# Field descriptor text format: gf2 | gf2k:<k>:<modulus> | ratfunc(<field>,<var>)

def parse_field(text: str) -> Field:
    text = text.strip()
    if text == "gf2":
        return GF2()
    if text.startswith("gf2k:"):
        parts = text.split(":")
        if len(parts) != 3:
            raise ParseError(f"bad gf2k descriptor: {text!r}")
        try:
            k = int(parts[1])
            modulus = int(parts[2], 0)
        except ValueError:
            raise ParseError(f"bad gf2k descriptor: {text!r}") from None
        return GF2k(k, modulus)
    if text.startswith("ratfunc(") and text.endswith(")"):
        inner = text[len("ratfunc("):-1]
        cut = inner.rfind(",")
        if cut < 0:
            raise ParseError(f"bad ratfunc descriptor: {text!r}")
        return RationalFunctionField(parse_field(inner[:cut]), inner[cut + 1:].strip())
    raise ParseError(f"unknown field descriptor: {text!r}")
