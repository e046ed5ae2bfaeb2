"""Dense multivariate polynomial arithmetic over F_p modulo x_i^p = x_i.

Working in the quotient by the relations x_i^p - x_i keeps every polynomial
in its canonical representative: per-variable degree at most p-1.  A
polynomial in n variables is therefore exactly a table of p^n coefficients,
stored flat in mixed-radix order with x0 least significant: the coefficient
of x0^e0 * x1^e1 * ... sits at index e0 + e1*p + e2*p^2 + ...

Truth tables over F_p^n use the same indexing for input points, so
evaluating everywhere and interpolating are inverse axis-by-axis transforms
of one flat table (see ``Polynomial.values`` and ``oracle.interpolate``).

By the counting argument (p^(p^n) functions, p^(p^n) canonical tables) the
canonical representative agreeing with a given function is unique, which is
why coefficient equality of two canonical polynomials is the same thing as
equality as functions.
"""

from __future__ import annotations

from functools import lru_cache
import json
from typing import Iterable, Sequence

from .ff import PrimeField

#: Default cap on coefficient-table size p^n.  Dense tables plus exhaustive
#: verification are meant to stay desk-scale; raise explicitly if you know
#: what you are doing.
DEFAULT_MAX_TABLE_SIZE = 1 << 24


class RingMismatchError(ValueError):
    """Raised when operands from different rings (p or n differ) are mixed."""


class SizeGuardError(ValueError):
    """Raised when a requested table would exceed the configured size cap."""


@lru_cache(maxsize=None)
def vandermonde_rows(p: int) -> tuple[tuple[int, ...], ...]:
    """Row a holds (a^0, a^1, ..., a^(p-1)) mod p; maps coefficients to values."""
    return tuple(tuple(pow(a, e, p) for e in range(p)) for a in range(p))


def apply_axis_transform(vals: list[int], p: int, n: int, matrix) -> None:
    """Apply a p x p matrix along every axis of a flat mixed-radix table.

    ``vals`` is modified in place; ``matrix[new][old]`` gives the linear map
    used on each length-p fiber.  Cost O(n * p^(n+1)).
    """
    size = len(vals)
    if p == 2 and matrix == ((1, 0), (1, 1)):
        # Shared fast path: mod 2 the evaluation and interpolation matrices
        # coincide and the fiber update is a single xor butterfly.
        stride = 1
        while stride < size:
            period = stride * 2
            for start in range(0, size, period):
                for off in range(start, start + stride):
                    vals[off + stride] ^= vals[off]
            stride = period
        return
    rows = [tuple(row) for row in matrix]
    stride = 1
    for _axis in range(n):
        period = stride * p
        for start in range(0, size, period):
            for off in range(start, start + stride):
                fiber = [vals[off + e * stride] for e in range(p)]
                for a in range(p):
                    acc = 0
                    row = rows[a]
                    for e in range(p):
                        acc += row[e] * fiber[e]
                    vals[off + a * stride] = acc % p
        stride = period


class PolyRing:
    """The ring F_p[x0, ..., x_{n-1}] / (x_i^p - x_i) for a fixed (p, n)."""

    __slots__ = ("field", "p", "n", "size", "strides", "_exps")

    def __init__(self, p: int | PrimeField, n: int,
                 max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE):
        self.field = p if isinstance(p, PrimeField) else PrimeField(p)
        self.p = self.field.p
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError(f"variable count must be a positive int, got {n!r}")
        size = self.p**n
        if max_table_size is not None and size > max_table_size:
            raise SizeGuardError(
                f"table size p^n = {self.p}^{n} = {size} exceeds the cap of "
                f"{max_table_size} entries")
        self.n = n
        self.size = size
        self.strides = tuple(self.p**i for i in range(n))
        self._exps: list[tuple[int, ...]] | None = None

    def __repr__(self) -> str:
        return f"PolyRing(p={self.p}, n={self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and other.p == self.p and other.n == self.n

    def __hash__(self) -> int:
        return hash(("PolyRing", self.p, self.n))

    @property
    def exponents(self) -> list[tuple[int, ...]]:
        """Exponent vector of every table index, built once on first use."""
        if self._exps is None:
            p, n = self.p, self.n
            exps = []
            for idx in range(self.size):
                e = []
                for _ in range(n):
                    e.append(idx % p)
                    idx //= p
                exps.append(tuple(e))
            self._exps = exps
        return self._exps

    def index_of(self, exps: Sequence[int]) -> int:
        if len(exps) != self.n:
            raise ValueError(f"expected {self.n} exponents, got {len(exps)}")
        idx = 0
        for e, w in zip(exps, self.strides):
            if not 0 <= e < self.p:
                raise ValueError(f"exponent {e} out of range [0, {self.p})")
            idx += e * w
        return idx

    # -- constructors ------------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, (0,) * self.size)

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        table = [0] * self.size
        table[0] = c % self.p
        return Polynomial(self, table)

    def variable(self, i: int) -> "Polynomial":
        if not 0 <= i < self.n:
            raise ValueError(f"variable index {i} out of range [0, {self.n})")
        table = [0] * self.size
        table[self.strides[i]] = 1
        return Polynomial(self, table)

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        table = [0] * self.size
        table[self.index_of(exps)] = coeff % self.p
        return Polynomial(self, table)

    def univariate(self, i: int, coeffs: Sequence[int]) -> "Polynomial":
        """The polynomial sum_e coeffs[e] * x_i^e (len(coeffs) <= p)."""
        if not 0 <= i < self.n:
            raise ValueError(f"variable index {i} out of range [0, {self.n})")
        if len(coeffs) > self.p:
            raise ValueError("univariate coefficient row longer than p")
        table = [0] * self.size
        s = self.strides[i]
        for e, c in enumerate(coeffs):
            table[e * s] = c % self.p
        return Polynomial(self, table)

    def elementary_symmetric(self, i: int) -> "Polynomial":
        """e_i: the sum of all i-fold products of distinct variables; e_0 = 1."""
        if not 0 <= i <= self.n:
            raise ValueError(f"elementary symmetric index {i} out of range [0, {self.n}]")
        from itertools import combinations

        table = [0] * self.size
        for subset in combinations(range(self.n), i):
            table[sum(self.strides[j] for j in subset)] = 1
        return Polynomial(self, table)

    def from_coeffs(self, coeffs: Iterable[int]) -> "Polynomial":
        """Validated construction from a full canonical coefficient table."""
        table = list(coeffs)
        if len(table) != self.size:
            raise ValueError(
                f"coefficient table must have p^n = {self.size} entries, "
                f"got {len(table)}")
        for c in table:
            self.field.check(c)
        return Polynomial(self, table)

    def embed(self, f: "Polynomial") -> "Polynomial":
        """Reinterpret a polynomial on fewer variables inside this ring.

        With x0 least significant, indices below p^(f.n) keep their meaning,
        so the table is copied into the low slice unchanged.
        """
        if f.ring.p != self.p:
            raise RingMismatchError(
                f"cannot embed a mod-{f.ring.p} polynomial into a mod-{self.p} ring")
        if f.ring.n > self.n:
            raise RingMismatchError(
                f"cannot embed {f.ring.n} variables into a ring with {self.n}")
        table = [0] * self.size
        table[: f.ring.size] = f.coeffs
        return Polynomial(self, table)


class Polynomial:
    """Immutable canonical polynomial: a ring plus its flat coefficient table.

    Supports +, -, * (with plain ints coerced to constants) and ** with
    nonnegative integer exponents.  All results are canonical.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: PolyRing, coeffs: Sequence[int]):
        self.ring = ring
        self.coeffs = tuple(coeffs)
        if len(self.coeffs) != ring.size:
            raise ValueError("coefficient table length does not match the ring")

    # -- plumbing ----------------------------------------------------------

    def _same_ring(self, other: "Polynomial") -> PolyRing:
        if self.ring != other.ring:
            raise RingMismatchError(
                f"operands live in different rings: {self.ring} vs {other.ring}")
        return self.ring

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.ring.constant(other)
        return None

    def __repr__(self) -> str:
        nnz = sum(1 for c in self.coeffs if c)
        return f"Polynomial(p={self.ring.p}, n={self.ring.n}, terms={nnz})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def support(self) -> list[tuple[tuple[int, ...], int]]:
        """Nonzero terms as (exponent vector, coefficient), index-ordered."""
        exps = self.ring.exponents
        return [(exps[i], c) for i, c in enumerate(self.coeffs) if c]

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self._same_ring(other).p
        return Polynomial(self.ring,
                          [(a + b) % p for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self._same_ring(other).p
        return Polynomial(self.ring,
                          [(a - b) % p for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, [(-a) % p for a in self.coeffs])

    def scale(self, c: int) -> "Polynomial":
        c = c % self.ring.p
        if c == 1:
            return self
        if c == 0:
            return self.ring.zero()
        p = self.ring.p
        return Polynomial(self.ring, [(a * c) % p for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        ring = self._same_ring(other)
        p = ring.p
        a_items = [(i, c) for i, c in enumerate(self.coeffs) if c]
        b_items = [(j, c) for j, c in enumerate(other.coeffs) if c]
        out = [0] * ring.size
        if not a_items or not b_items:
            return ring.zero()
        if len(a_items) < len(b_items):
            a_items, b_items = b_items, a_items
        if p == 2:
            # Exponents are bits and x^2 = x, so indices combine by OR.
            for i, _ in a_items:
                for j, _ in b_items:
                    out[i | j] ^= 1
        else:
            exps = ring.exponents
            strides = ring.strides
            fold = p - 1  # x^(p+k) = x^(k+1): digit sums >= p drop by p-1
            for i, ca in a_items:
                ei = exps[i]
                for j, cb in b_items:
                    k = 0
                    for d1, d2, w in zip(ei, exps[j], strides):
                        d = d1 + d2
                        if d >= p:
                            d -= fold
                        k += d * w
                    out[k] = (out[k] + ca * cb) % p
        return Polynomial(ring, out)

    def __rmul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int) -> "Polynomial":
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial exponent must be a nonnegative int")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- evaluation ---------------------------------------------------------

    def eval(self, point: Sequence[int]) -> int:
        """Value at one point, by iterated Horner over the variables."""
        ring = self.ring
        p = ring.p
        if len(point) != ring.n:
            raise ValueError(f"expected a point of arity {ring.n}, got {len(point)}")
        for v in point:
            ring.field.check(v)
        table: Sequence[int] = self.coeffs
        for i in range(ring.n - 1, -1, -1):
            s = ring.strides[i]
            x = point[i]
            acc = list(table[(p - 1) * s: p * s])
            for e in range(p - 2, -1, -1):
                block = table[e * s: (e + 1) * s]
                acc = [(v * x + b) % p for v, b in zip(acc, block)]
            table = acc
        return table[0]

    def values(self) -> tuple[int, ...]:
        """Values at every point of F_p^n, in mixed-radix point order.

        Computed by applying the univariate evaluation matrix along each
        axis; O(n * p^(n+1)) instead of p^n separate Horner passes.
        """
        vals = list(self.coeffs)
        apply_axis_transform(vals, self.ring.p, self.ring.n, vandermonde_rows(self.ring.p))
        return tuple(vals)

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute subs[i] for x_i; result lives in the ring of the subs.

        All substituents must share one ring with the same modulus p.  The
        result is canonical, hence equal to the unique minimal-degree
        polynomial of the composed function.
        """
        ring = self.ring
        if len(subs) != ring.n:
            raise ValueError(f"expected {ring.n} substituents, got {len(subs)}")
        target = subs[0].ring
        for s in subs:
            if s.ring != target:
                raise RingMismatchError("substituents live in different rings")
        if target.p != ring.p:
            raise RingMismatchError(
                f"cannot substitute mod-{target.p} polynomials into a mod-{ring.p} one")
        max_deg = self.max_degree_per_variable()
        powers: list[list[Polynomial]] = []
        for i, s in enumerate(subs):
            row = [target.one()]
            for _ in range(max_deg[i]):
                row.append(row[-1] * s)
            powers.append(row)
        acc = target.zero()
        exps = ring.exponents
        for idx, c in enumerate(self.coeffs):
            if not c:
                continue
            term = target.constant(c)
            for i, e in enumerate(exps[idx]):
                if e:
                    term = term * powers[i][e]
            acc = acc + term
        return acc

    # -- inspection ---------------------------------------------------------

    def max_degree_per_variable(self) -> tuple[int, ...]:
        """Largest exponent of each variable over nonzero terms (0 for the
        zero polynomial, by convention)."""
        degs = [0] * self.ring.n
        exps = self.ring.exponents
        for idx, c in enumerate(self.coeffs):
            if c:
                for i, e in enumerate(exps[idx]):
                    if e > degs[i]:
                        degs[i] = e
        return tuple(degs)

    def total_degree(self) -> int:
        exps = self.ring.exponents
        return max((sum(exps[i]) for i, c in enumerate(self.coeffs) if c), default=0)

    def is_minimal_form(self) -> bool:
        """True iff every per-variable degree is at most p-1."""
        return all(d <= self.ring.p - 1 for d in self.max_degree_per_variable())

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.ring.p, "n": self.ring.n, "coeffs": list(self.coeffs)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_dict(data: dict,
                  max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> "Polynomial":
        try:
            p, n, coeffs = data["p"], data["n"], data["coeffs"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed polynomial record: {exc}") from exc
        ring = PolyRing(p, n, max_table_size=max_table_size)
        return ring.from_coeffs(coeffs)

    @staticmethod
    def from_json(text: str,
                  max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> "Polynomial":
        return Polynomial.from_dict(json.loads(text), max_table_size=max_table_size)


def format_terms(f: Polynomial) -> str:
    """Human-readable monomial listing in graded lexicographic order.

    Ordering is by total degree, then lexicographically with x0 weighted
    heaviest (so x0 prints before x1 within a degree); stable across runs
    and diffable.
    """
    parts = []
    for exps, c in sorted(f.support(),
                          key=lambda t: (sum(t[0]), [-e for e in t[0]])):
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}^{e}")
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts) if parts else "0"
