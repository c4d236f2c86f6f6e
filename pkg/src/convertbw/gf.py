"""Exact arithmetic over small finite fields.

Field elements are plain Python ints in [0, q).  Two families are
supported:

- prime fields GF(p) for primes p <= 251, using modular arithmetic;
- binary extension fields GF(2^m) for m <= 8, using a polynomial basis
  over a fixed irreducible polynomial with exp/log lookup tables.

Each field also exposes vectorized kernels over numpy int64 arrays
(elementwise multiply, row update, matrix product) that the matrix
routines in :mod:`convertbw.linalg` build on.
"""

from __future__ import annotations

import numpy as np

PRIME_LIMIT = 251
BINARY_DEGREE_LIMIT = 8

# Irreducible polynomials over GF(2), one per degree.  Bit i is the
# coefficient of x^i; bit m (the degree) is always set.
_IRREDUCIBLE = {
    1: 0b11,         # x + 1
    2: 0b111,        # x^2 + x + 1
    3: 0b1011,       # x^3 + x + 1
    4: 0b10011,      # x^4 + x + 1
    5: 0b100101,     # x^5 + x^2 + 1
    6: 0b1000011,    # x^6 + x + 1
    7: 0b10000011,   # x^7 + x + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """Interface shared by both field families.

    Scalar operations take and return ints in [0, q).  The arr_* kernels
    operate on numpy int64 arrays whose entries are already reduced.
    """

    q: int
    characteristic: int
    degree: int

    def normalize(self, x: int) -> int:
        raise NotImplementedError

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def elements(self) -> range:
        return range(self.q)

    # Array kernels.

    def arr_normalize(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def arr_add(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def arr_mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def arr_scale(self, v: np.ndarray, c: int) -> np.ndarray:
        raise NotImplementedError

    def arr_submul(self, block: np.ndarray, row: np.ndarray,
                   coeffs: np.ndarray) -> np.ndarray:
        """Return block - coeffs[:, None] * row, the elimination update."""
        raise NotImplementedError

    def arr_matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self) -> str:
        if self.degree == 1:
            return f"GF({self.q})"
        return f"GF(2^{self.degree})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and type(self) is type(other) \
            and self.q == other.q

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.q))


class PrimeField(Field):
    """GF(p) for a prime p <= 251."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"field order {p} is not prime")
        if p > PRIME_LIMIT:
            raise ValueError(f"prime fields supported up to {PRIME_LIMIT}, got {p}")
        self.q = p
        self.characteristic = p
        self.degree = 1

    def normalize(self, x: int) -> int:
        return int(x) % self.q

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def inv(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return pow(a, -1, self.q)

    def arr_normalize(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(a, dtype=np.int64) % self.q

    def arr_add(self, u, v):
        return (u + v) % self.q

    def arr_mul(self, u, v):
        return (u * v) % self.q

    def arr_scale(self, v, c):
        return (v * c) % self.q

    def arr_submul(self, block, row, coeffs):
        return (block - coeffs[:, None] * row[None, :]) % self.q

    def arr_matmul(self, a, b):
        # Entries < 251 and inner dimensions stay desk-scale, so the
        # int64 accumulator cannot overflow.
        return (a @ b) % self.q


class BinaryField(Field):
    """GF(2^m) in a polynomial basis, m <= 8.

    Multiplication uses exp/log tables built from a primitive element;
    the table build doubles as a check that the modulus is irreducible.
    """

    def __init__(self, degree: int, poly: int | None = None):
        if not (1 <= degree <= BINARY_DEGREE_LIMIT):
            raise ValueError(
                f"binary extension degree must be in [1, {BINARY_DEGREE_LIMIT}], got {degree}")
        if poly is None:
            poly = _IRREDUCIBLE[degree]
        if not (poly >> degree) & 1:
            raise ValueError(f"modulus 0b{poly:b} does not have degree {degree}")
        self.q = 1 << degree
        self.characteristic = 2
        self.degree = degree
        self.poly = poly
        self._build_tables()

    def _poly_mul(self, a: int, b: int) -> int:
        result = 0
        while b:
            if b & 1:
                result ^= a
            b >>= 1
            a <<= 1
            if (a >> self.degree) & 1:
                a ^= self.poly
        return result

    def _build_tables(self) -> None:
        q = self.q
        if q == 2:
            gen = 1
        else:
            gen = None
            for cand in range(2, q):
                seen = set()
                x = 1
                for _ in range(q - 1):
                    seen.add(x)
                    x = self._poly_mul(x, cand)
                if len(seen) == q - 1:
                    gen = cand
                    break
            if gen is None:
                raise ValueError(
                    f"0b{self.poly:b} admits no primitive element; not irreducible?")
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._poly_mul(x, gen)
        exp[q - 1:] = exp[: q - 1]
        self._exp = exp
        self._log = log

    def normalize(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.q:
            raise ValueError(f"{x} is not an element of {self!r}")
        return x

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def neg(self, a: int) -> int:
        return a

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return int(self._exp[(self.q - 1) - self._log[a]])

    def arr_normalize(self, a: np.ndarray) -> np.ndarray:
        out = np.asarray(a, dtype=np.int64)
        if out.size and (out.min() < 0 or out.max() >= self.q):
            raise ValueError(f"entries outside [0, {self.q}) for {self!r}")
        return out

    def arr_add(self, u, v):
        return u ^ v

    def arr_mul(self, u, v):
        mask = (u != 0) & (v != 0)
        out = np.zeros(np.broadcast_shapes(u.shape, v.shape), dtype=np.int64)
        s = self._log[u] + self._log[v]
        np.copyto(out, self._exp[s], where=mask)
        return out

    def arr_scale(self, v, c):
        if c == 0:
            return np.zeros_like(v)
        out = np.zeros_like(v)
        mask = v != 0
        np.copyto(out, self._exp[self._log[v] + self._log[c]], where=mask)
        return out

    def arr_submul(self, block, row, coeffs):
        mask = (coeffs[:, None] != 0) & (row[None, :] != 0)
        prod = np.zeros((coeffs.shape[0], row.shape[0]), dtype=np.int64)
        s = self._log[coeffs][:, None] + self._log[row][None, :]
        np.copyto(prod, self._exp[s], where=mask)
        return block ^ prod

    def arr_matmul(self, a, b):
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for k in range(a.shape[1]):
            out = self.arr_submul(out, b[k, :], a[:, k])
        return out


_FIELD_CACHE: dict[int, Field] = {}


def field(q: int) -> Field:
    """Return the field of order q.

    Supported orders: primes up to 251 and powers of two up to 256.
    Other prime powers raise ValueError.
    """
    if q in _FIELD_CACHE:
        return _FIELD_CACHE[q]
    if q < 2:
        raise ValueError(f"field order must be >= 2, got {q}")
    if is_prime(q):
        f: Field = PrimeField(q)
    elif q & (q - 1) == 0:
        f = BinaryField(q.bit_length() - 1)
    else:
        raise ValueError(
            f"unsupported field order {q}: need a prime <= {PRIME_LIMIT} "
            f"or a power of two <= {1 << BINARY_DEGREE_LIMIT}")
    _FIELD_CACHE[q] = f
    return f
