"""Exact arithmetic in GF(p**r) built on global exponent/log tables.

Elements are dense coefficient vectors over Z/p in ascending degree order
(c[0] is the constant term).  A coefficient vector doubles as a base-p
integer value sum(c[j] * p**j), which fixes a total order on elements and
an index into the lookup tables.  The modulus is the lexicographically
smallest monic irreducible of degree r under that value order, and the
generator is the smallest primitive element under the same order, so a
given (p, r) always produces the identical field layout.

Construction costs O(p**r * r**2) time and O(p**r * r) memory; after that
every product, inverse, power and trace is a table lookup.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    BadShape,
    ContextMismatch,
    DegreeTooLarge,
    DivisionByZero,
    InvariantViolation,
    NotPrime,
    ZeroElement,
)

SIZE_CAP = 2 ** 24

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the 2**24 size cap."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n by trial division, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# dense polynomial helpers over Z/p, used only at construction time
# ---------------------------------------------------------------------------

def _ptrim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return tuple(a[:i])


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, f, p):
    # remainder of a modulo monic f
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            for j in range(df):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
        a[i] = 0
    return _ptrim(a[:df])


def _pmulmod(a, b, f, p):
    return _pmod(_pmul(a, b, p), f, p)


def _ppowmod(a, e, f, p):
    out = (1,)
    base = _pmod(a, f, p)
    while e > 0:
        if e & 1:
            out = _pmulmod(out, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return out


def _psub(a, b, p):
    w = max(len(a), len(b))
    a = list(a) + [0] * (w - len(a))
    b = list(b) + [0] * (w - len(b))
    return _ptrim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a, b, p):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        lc_inv = pow(b[-1], -1, p)
        bm = tuple(c * lc_inv % p for c in b)
        a, b = bm, _pmod(a, bm, p)
    return a


def _is_irreducible(f, p, r, r_primes):
    # Rabin test: t**(p**r) == t mod f, and t**(p**(r/q)) - t coprime to f
    # for every prime q dividing r.
    t = (0, 1)
    x = t
    for _ in range(r):
        x = _ppowmod(x, p, f, p)
    if _ptrim(x) != t:
        return False
    for q in r_primes:
        y = t
        for _ in range(r // q):
            y = _ppowmod(y, p, f, p)
        g = _pgcd(_psub(y, t, p), f, p)
        if len(g) != 1:
            return False
    return True


class FieldElem:
    """Immutable element of a FieldCtx; supports +, -, *, /, ** operators."""

    __slots__ = ("ctx", "coeffs", "value")

    def __init__(self, ctx: "FieldCtx", coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs
        v = 0
        for c in reversed(coeffs):
            v = v * ctx.p + c
        self.value = v

    def __eq__(self, other):
        return (isinstance(other, FieldElem)
                and self.ctx.ctx_id == other.ctx.ctx_id
                and self.value == other.value)

    def __hash__(self):
        return hash((self.ctx.ctx_id, self.value))

    def __repr__(self):
        return f"FieldElem({self.value} in {self.ctx.ctx_id})"

    def __add__(self, other):
        return self.ctx.add(self, other)

    def __sub__(self, other):
        return self.ctx.sub(self, other)

    def __neg__(self):
        return self.ctx.neg(self)

    def __mul__(self, other):
        return self.ctx.mul(self, other)

    def __truediv__(self, other):
        return self.ctx.mul(self, self.ctx.inv(other))

    def __pow__(self, k):
        return self.ctx.pow(self, k)

    def is_zero(self) -> bool:
        return self.value == 0


class FieldCtx:
    """GF(p**r) with exponent/log/trace tables; build via build_field()."""

    def __init__(self, p: int, r: int):
        if not is_prime(p):
            raise NotPrime(f"p = {p} is not prime")
        if r < 1:
            raise BadShape(f"extension degree must be >= 1, got {r}")
        n = p ** r
        if n > SIZE_CAP:
            raise DegreeTooLarge(f"p**r = {n} exceeds cap {SIZE_CAP}")
        self.p = p
        self.r = r
        self.n = n
        self.modulus = self._find_modulus()
        self.ctx_id = f"GF({p}^{r})#{self._poly_value(self.modulus)}"
        self.coeff_dtype = (np.uint8 if p <= 0xFF else
                             np.uint16 if p <= 0xFFFF else np.int32)
        gen_coeffs = self._find_generator()
        self._build_tables(gen_coeffs)
        self.generator = (self.from_value(int(self.value_of_exp[1]))
                          if n > 2 else self.one)
        if self.generator.coeffs != gen_coeffs:
            raise InvariantViolation("generator table row mismatch")

    # -- construction ------------------------------------------------------

    def _poly_value(self, coeffs) -> int:
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + c
        return v

    def _value_coeffs(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.r):
            out.append(v % self.p)
            v //= self.p
        return tuple(out)

    def _find_modulus(self) -> tuple[int, ...]:
        p, r = self.p, self.r
        if r == 1:
            return (0, 1)
        r_primes = prime_factors(r)
        for c in range(p ** r):
            f = self._value_coeffs(c) + (1,)
            if _is_irreducible(f, p, r, r_primes):
                return f
        raise InvariantViolation("no irreducible polynomial found")

    def _find_generator(self) -> tuple[int, ...]:
        p, n, f = self.p, self.n, self.modulus
        if n == 2:
            return (1,)
        checks = [(n - 1) // q for q in prime_factors(n - 1)]
        one = (1,)
        for v in range(2, n):
            cand = self._value_coeffs(v)
            if all(_ppowmod(cand, e, f, p) != one for e in checks):
                return cand
        raise InvariantViolation("no generator found")

    def _reduction_rows(self) -> np.ndarray:
        # row j holds the coefficients of t**(r+j) mod f, j in [0, r-1)
        p, r, f = self.p, self.r, self.modulus
        rows = np.zeros((max(r - 1, 0), r), dtype=np.int64)
        cur = [(-c) % p for c in f[:r]]  # t**r mod f
        for j in range(r - 1):
            rows[j] = cur
            lead = cur[r - 1]
            cur = [0] + cur[:r - 1]
            if lead:
                for i in range(r):
                    cur[i] = (cur[i] - lead * f[i]) % p
        return rows

    def _block_mul(self, block, y, red):
        # multiply every row of block (coeff vectors) by the vector y
        p, r = self.p, self.r
        block = np.asarray(block, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64).ravel()
        full = np.zeros((block.shape[0], 2 * r - 1), dtype=np.int64)
        for j in range(r):
            if y[j]:
                full[:, j:j + r] += block * y[j]
        low = full[:, :r]
        if r > 1:
            low = low + full[:, r:] @ red
        return low % p

    def _build_tables(self, gen_coeffs) -> None:
        p, r, n = self.p, self.r, self.n
        red = self._reduction_rows()
        E = np.zeros((n - 1, r), dtype=np.int64)
        E[0, 0] = 1
        if n - 1 > 1:
            g = np.zeros(r, dtype=np.int64)
            g[:len(gen_coeffs)] = gen_coeffs
            E[1] = g
            filled = 2
            while filled < n - 1:
                take = min(filled, n - 1 - filled)
                yk = self._block_mul(E[filled - 1:filled], g, red)[0]
                E[filled:filled + take] = self._block_mul(E[:take], yk, red)
                filled += take
        self.exp_coeffs = E.astype(self.coeff_dtype)
        powers = np.int64(p) ** np.arange(r, dtype=np.int64)
        self.value_of_exp = (E @ powers).astype(np.int64)
        if (len(np.unique(self.value_of_exp)) != n - 1
                or np.any(self.value_of_exp == 0)):
            raise InvariantViolation("exponent table is not a bijection")
        self.log_of_value = np.full(n, -1, dtype=np.int64)
        self.log_of_value[self.value_of_exp] = np.arange(n - 1, dtype=np.int64)
        tr_basis = self._trace_basis()
        self.trace_of_exp = (E @ tr_basis) % p
        self.trace_of_value = np.zeros(n, dtype=np.int64)
        self.trace_of_value[self.value_of_exp] = self.trace_of_exp

    def _trace_basis(self) -> np.ndarray:
        # tr_basis[j] = Tr(t**j); the trace is linear in the coefficients
        p, r, f = self.p, self.r, self.modulus
        basis = np.zeros(r, dtype=np.int64)
        for j in range(r):
            total = [0] * r
            y = _ptrim([0] * j + [1])
            for i in range(r):
                for d, c in enumerate(y):
                    total[d] = (total[d] + c) % p
                if i < r - 1:
                    y = _ppowmod(y, p, f, p)
            if any(total[1:]):
                raise InvariantViolation("trace of basis monomial not scalar")
            basis[j] = total[0]
        return basis

    # -- element creation --------------------------------------------------

    def elem(self, coeffs) -> FieldElem:
        cs = [int(c) % self.p for c in coeffs]
        if len(cs) > self.r:
            if any(cs[self.r:]):
                raise BadShape(f"coefficient vector longer than degree {self.r}")
            cs = cs[:self.r]
        cs += [0] * (self.r - len(cs))
        return FieldElem(self, tuple(cs))

    def from_value(self, v: int) -> FieldElem:
        if not 0 <= v < self.n:
            raise BadShape(f"value {v} outside [0, {self.n})")
        return FieldElem(self, self._value_coeffs(v))

    def from_log(self, k: int) -> FieldElem:
        return self.from_value(int(self.value_of_exp[k % (self.n - 1)]))

    @property
    def zero(self) -> FieldElem:
        return self.from_value(0)

    @property
    def one(self) -> FieldElem:
        return self.from_value(1)

    def elements(self) -> list[FieldElem]:
        """All p**r elements in value order."""
        return [self.from_value(v) for v in range(self.n)]

    # -- arithmetic --------------------------------------------------------

    def _check(self, *xs):
        for x in xs:
            if not isinstance(x, FieldElem) or x.ctx.ctx_id != self.ctx_id:
                raise ContextMismatch(f"element does not belong to {self.ctx_id}")

    def add(self, a: FieldElem, b: FieldElem) -> FieldElem:
        self._check(a, b)
        return FieldElem(self, tuple((x + y) % self.p
                                     for x, y in zip(a.coeffs, b.coeffs)))

    def neg(self, a: FieldElem) -> FieldElem:
        self._check(a)
        return FieldElem(self, tuple((-x) % self.p for x in a.coeffs))

    def sub(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return self.add(a, self.neg(b))

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        self._check(a, b)
        if a.value == 0 or b.value == 0:
            return self.zero
        k = (int(self.log_of_value[a.value])
             + int(self.log_of_value[b.value])) % (self.n - 1)
        return self.from_log(k)

    def inv(self, a: FieldElem) -> FieldElem:
        self._check(a)
        if a.value == 0:
            raise DivisionByZero("zero has no inverse")
        return self.from_log(-int(self.log_of_value[a.value]))

    def pow(self, a: FieldElem, k: int) -> FieldElem:
        self._check(a)
        if a.value == 0:
            if k == 0:
                return self.one
            if k < 0:
                raise DivisionByZero("negative power of zero")
            return self.zero
        return self.from_log(int(self.log_of_value[a.value]) * k)

    def log(self, a: FieldElem) -> int:
        """Discrete log base the canonical generator."""
        self._check(a)
        if a.value == 0:
            raise ZeroElement("zero has no discrete log")
        return int(self.log_of_value[a.value])

    def trace(self, a: FieldElem) -> int:
        """Field trace down to GF(p), an integer in [0, p)."""
        self._check(a)
        return int(self.trace_of_value[a.value])

    def __repr__(self):
        return f"FieldCtx({self.ctx_id})"


def build_field(p: int, r: int) -> FieldCtx:
    """Construct GF(p**r) with canonical modulus, generator and tables."""
    return FieldCtx(p, r)
