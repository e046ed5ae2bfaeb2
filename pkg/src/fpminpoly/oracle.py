"""Ground truth: integer-level reference semantics and exact interpolation.

Every function the library builds a polynomial for also exists here as a
plain-integer definition; comparison happens in the integers {0, ..., p-1},
arithmetic in F_p only at the boundary.  ``tabulate`` turns a function spec
into its full truth table, and ``interpolate`` turns any truth table into
the unique canonical polynomial agreeing with it everywhere.

Because the canonical polynomial is unique, "formula equals interpolation
of the semantics, coefficient for coefficient" is a complete correctness
check for every closed form in :mod:`fpminpoly.formulas`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import json
from typing import Sequence

from .ff import PrimeField
from .polyring import (DEFAULT_MAX_TABLE_SIZE, Polynomial, PolyRing, SizeGuardError,
                       apply_axis_transform)

#: Function kinds understood by tabulate() and the CLI.
KINDS = ("max", "min", "argmax_digit", "argmin_digit", "ismax", "nummax_digit",
         "carry", "ismax_2bit")


# -- integer-level semantics -------------------------------------------------

def max_sem(xs: Sequence[int]) -> int:
    if not xs:
        raise ValueError("max of an empty input is undefined")
    return max(xs)


def min_sem(xs: Sequence[int]) -> int:
    if not xs:
        raise ValueError("min of an empty input is undefined")
    return min(xs)


def argmax_sem(xs: Sequence[int]) -> int:
    """Least index attaining the maximum (ties break to the first)."""
    if not xs:
        raise ValueError("argmax of an empty input is undefined")
    return xs.index(max(xs)) if isinstance(xs, (list, tuple)) else list(xs).index(max(xs))


def argmin_sem(xs: Sequence[int]) -> int:
    if not xs:
        raise ValueError("argmin of an empty input is undefined")
    return list(xs).index(min(xs))


def argmax_digit_sem(xs: Sequence[int], r: int, p: int) -> int:
    """The r-th base-p digit of the least maximizing index."""
    return (argmax_sem(xs) // p**r) % p


def argmin_digit_sem(xs: Sequence[int], r: int, p: int) -> int:
    return (argmin_sem(xs) // p**r) % p


def ismax_sem(y: int, xs: Sequence[int]) -> int:
    """1 iff the maximum of xs equals y."""
    return 1 if max_sem(xs) == y else 0


def nummax_count(xs: Sequence[int]) -> int:
    """How many indices attain the maximum."""
    m = max_sem(xs)
    return sum(1 for v in xs if v == m)


def nummax_digit_sem(xs: Sequence[int], r: int, p: int) -> int:
    """The r-th base-p digit of the number of maximizing indices."""
    return (nummax_count(xs) // p**r) % p


def carry_sem(y0: int, y1: int, p: int) -> int:
    """1 iff two single base-p digits overflow into the next position."""
    return 1 if y0 + y1 >= p else 0


def ismax_2bit_sem(ybits: Sequence[int], xbits: Sequence[Sequence[int]]) -> int:
    """Two-bit ismax over F_2: bits pair up as value 2*high + low.

    ``ybits`` is (y_high, y_low); each entry of ``xbits`` likewise.
    """
    y1, y0 = ybits
    vals = [2 * hi + lo for hi, lo in xbits]
    return 1 if max_sem(vals) == 2 * y1 + y0 else 0


# -- truth tables -------------------------------------------------------------

def point_at(p: int, arity: int, index: int) -> tuple[int, ...]:
    """Decode a mixed-radix input index into a point (x0 least significant)."""
    out = []
    for _ in range(arity):
        out.append(index % p)
        index //= p
    return tuple(out)


@dataclass(frozen=True)
class TruthTable:
    """A total function F_p^arity -> F_p as a flat value array.

    Entry i is the value at ``point_at(p, arity, i)``; the point order
    matches polynomial coefficient order, so tables and coefficient tables
    are transforms of one another.
    """

    p: int
    arity: int
    values: tuple[int, ...]

    def __post_init__(self):
        field = PrimeField(self.p)
        if len(self.values) != self.p**self.arity:
            raise ValueError(
                f"truth table needs p^arity = {self.p**self.arity} values, "
                f"got {len(self.values)}")
        for v in self.values:
            field.check(v)

    def to_dict(self) -> dict:
        return {"p": self.p, "arity": self.arity, "values": list(self.values)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_dict(data: dict) -> "TruthTable":
        try:
            return TruthTable(data["p"], data["arity"], tuple(data["values"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed truth table record: {exc}") from exc

    @staticmethod
    def from_json(text: str) -> "TruthTable":
        return TruthTable.from_dict(json.loads(text))


@dataclass(frozen=True)
class FunctionSpec:
    """A named function plus its parameters (modulus, input count, digit).

    ``n`` counts logical inputs; the actual arity differs for kinds with
    auxiliary inputs (ismax takes y first, ismax_2bit takes bit pairs).
    """

    kind: str
    p: int
    n: int
    r: int = 0

    def __post_init__(self):
        PrimeField(self.p)
        if self.kind not in KINDS:
            raise ValueError(f"unknown function kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ValueError("input count must be at least 1")
        if self.r < 0:
            raise ValueError("digit index must be nonnegative")
        if self.kind == "carry" and self.n != 2:
            raise ValueError("carry takes exactly two digit inputs")
        if self.kind == "ismax_2bit" and self.p != 2:
            raise ValueError("two-bit ismax is defined over p = 2 only")

    @property
    def arity(self) -> int:
        if self.kind == "ismax":
            return self.n + 1
        if self.kind == "ismax_2bit":
            return 2 * self.n + 2
        return self.n

    def evaluate(self, point: Sequence[int]) -> int:
        """Integer-level value at one input point (variable order as tabulated)."""
        if len(point) != self.arity:
            raise ValueError(f"expected arity {self.arity}, got {len(point)}")
        kind = self.kind
        if kind == "max":
            return max_sem(point)
        if kind == "min":
            return min_sem(point)
        if kind == "argmax_digit":
            return argmax_digit_sem(point, self.r, self.p)
        if kind == "argmin_digit":
            return argmin_digit_sem(point, self.r, self.p)
        if kind == "ismax":
            return ismax_sem(point[0], point[1:])
        if kind == "nummax_digit":
            return nummax_digit_sem(point, self.r, self.p)
        if kind == "carry":
            return carry_sem(point[0], point[1], self.p)
        if kind == "ismax_2bit":
            pairs = [(point[2 + 2 * i], point[3 + 2 * i]) for i in range(self.n)]
            return ismax_2bit_sem((point[0], point[1]), pairs)
        raise AssertionError(f"unhandled kind {kind}")


def tabulate(spec: FunctionSpec,
             max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> TruthTable:
    """Evaluate the semantics at every input point, mixed-radix order."""
    p, arity = spec.p, spec.arity
    size = p**arity
    if max_table_size is not None and size > max_table_size:
        raise SizeGuardError(
            f"truth table of {size} entries exceeds the cap of {max_table_size}")
    values = tuple(spec.evaluate(point_at(p, arity, i)) for i in range(size))
    return TruthTable(p, arity, values)


# -- interpolation ------------------------------------------------------------

@lru_cache(maxsize=None)
def delta_basis_rows(p: int) -> tuple[tuple[int, ...], ...]:
    """Row e, column a: the x^e coefficient of 1 - (x - a)^(p-1).

    These univariate indicator polynomials are the interpolation basis; the
    expansion below is a plain coefficient convolution, independent of the
    polynomial-ring multiplication it is later used to check.
    """
    cols = []
    for a in range(p):
        power = [1]  # coefficients of (x - a)^k, built up by convolution
        for _ in range(p - 1):
            nxt = [0] * (len(power) + 1)
            for i, c in enumerate(power):
                nxt[i] = (nxt[i] + c * (-a)) % p
                nxt[i + 1] = (nxt[i + 1] + c) % p
            power = nxt
        power += [0] * (p - len(power))
        col = [(-c) % p for c in power]
        col[0] = (1 - power[0]) % p
        cols.append(col)
    return tuple(tuple(cols[a][e] for a in range(p)) for e in range(p))


def interpolate(table: TruthTable,
                max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """The unique canonical polynomial agreeing with the table everywhere.

    Equals the sum over all points of value * product of per-variable
    indicator polynomials, computed as an axis-by-axis basis change in
    O(n * p^(n+1)) instead of the literal O(p^(2n)) summation.
    """
    ring = PolyRing(table.p, table.arity, max_table_size=max_table_size)
    vals = list(table.values)
    apply_axis_transform(vals, table.p, table.arity, delta_basis_rows(table.p))
    return Polynomial(ring, vals)
