"""Closed-form minimal polynomial expressions, built symbolically.

Each constructor here assembles a known concise expression for one of the
comparison-style functions (max, min, argmax digits, ismax, nummax, digit
carry) as sums and products in :class:`~fpminpoly.polyring.PolyRing`.  The
quotient ring keeps everything canonical, so a constructor's output is the
unique minimal-degree polynomial of its function exactly when it agrees
with :func:`fpminpoly.oracle.interpolate` of the semantic truth table,
coefficient for coefficient.  ``verify_formula`` runs that check.

Nothing is hand-expanded: even forms printed as long monomial lists are
reproduced by machine from their factored shape.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence

from .oracle import FunctionSpec, interpolate, point_at, tabulate
from .polyring import (DEFAULT_MAX_TABLE_SIZE, Polynomial, PolyRing,
                       RingMismatchError)


class FormulaParamError(ValueError):
    """A formula was requested with parameters outside its constraints."""


# -- univariate building blocks ----------------------------------------------

def delta(p: int, t: int, *,
          max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Indicator of x = t as the univariate 1 - (x - t)^(p-1)."""
    ring = PolyRing(p, 1, max_table_size=max_table_size)
    ring.field.check(t)
    return 1 - (ring.variable(0) - t) ** (p - 1)


def lowpass(p: int, t: int, *,
            max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Indicator of x < t (integer ordering); t may run from 0 to p.

    The empty sum gives the zero polynomial for t = 0, and t = p yields the
    constant 1 since every residue is below p.
    """
    if not 0 <= t <= p:
        raise ValueError(f"lowpass threshold must lie in [0, {p}], got {t}")
    ring = PolyRing(p, 1, max_table_size=max_table_size)
    acc = ring.zero()
    for k in range(t):
        acc = acc + (1 - (ring.variable(0) - k) ** (p - 1))
    return acc


def _delta_list(ring: PolyRing, i: int) -> list[Polynomial]:
    """delta_t(x_i) for t = 0..p-1, inside an n-variable ring."""
    x = ring.variable(i)
    return [1 - (x - t) ** (ring.p - 1) for t in range(ring.p)]


def _lowpass_list(ring: PolyRing, i: int,
                  deltas: Sequence[Polynomial] | None = None) -> list[Polynomial]:
    """L_t(x_i) for t = 0..p (prefix sums of the deltas)."""
    if deltas is None:
        deltas = _delta_list(ring, i)
    lows = [ring.zero()]
    for t in range(ring.p):
        lows.append(lows[-1] + deltas[t])
    return lows


# -- max and min ---------------------------------------------------------------

def max_general(p: int, n: int, *,
                max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """max of n inputs for any prime p: sum over thresholds t >= 1 of the
    indicator that some input reaches t."""
    ring = PolyRing(p, n, max_table_size=max_table_size)
    lows = [_lowpass_list(ring, i) for i in range(n)]
    acc = ring.zero()
    for t in range(1, p):
        prod = ring.one()
        for i in range(n):
            prod = prod * lows[i][t]
        acc = acc + (1 - prod)
    return acc


def max_p2(n: int, *,
           max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """max over F_2: the product of (1 + x_i) minus 1 (an OR gate)."""
    ring = PolyRing(2, n, max_table_size=max_table_size)
    prod = ring.one()
    for i in range(n):
        prod = prod * (1 + ring.variable(i))
    return prod - 1


def min_p2(n: int, *,
           max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """min over F_2: the product of all inputs (an AND gate)."""
    ring = PolyRing(2, n, max_table_size=max_table_size)
    prod = ring.one()
    for i in range(n):
        prod = prod * ring.variable(i)
    return prod


def max_p3(n: int, *,
           max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """max over F_3 via elementary symmetric polynomials:
    (e_0 + e_2 + e_4 + ...) * (e_0 + ... + e_n) - 1."""
    ring = PolyRing(3, n, max_table_size=max_table_size)
    even = ring.zero()
    for i in range(0, n + 1, 2):
        even = even + ring.elementary_symmetric(i)
    full = ring.zero()
    for i in range(n + 1):
        full = full + ring.elementary_symmetric(i)
    return even * full - 1


def min_p3(n: int, *,
           max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """min over F_3: e_n * (1 + sum_i (-1)^i e_i + e_n)."""
    ring = PolyRing(3, n, max_table_size=max_table_size)
    alt = ring.one()
    for i in range(1, n + 1):
        e = ring.elementary_symmetric(i)
        alt = alt + (e if i % 2 == 0 else -e)
    return ring.elementary_symmetric(n) * (alt + ring.elementary_symmetric(n))


def max_p5_n2(*, max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """max of two inputs over F_5, in elementary symmetric polynomials."""
    ring = PolyRing(5, 2, max_table_size=max_table_size)
    e1 = ring.elementary_symmetric(1)
    e2 = ring.elementary_symmetric(2)
    return (1 + e1 + e2) * (1 + 2 * e1**2 * e2 + 4 * e1 * e2 + e2) - 1


def max_p5_n3(*, max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """max of three inputs over F_5, in elementary symmetric polynomials."""
    ring = PolyRing(5, 3, max_table_size=max_table_size)
    e1 = ring.elementary_symmetric(1)
    e2 = ring.elementary_symmetric(2)
    e3 = ring.elementary_symmetric(3)
    return (1 + e1 + e2 + e3) * (
        1 + 2 * e1**2 * e2 + e1 * e2 * e3 + 2 * e1 * e3**2 + e2**2 * e3
        + 2 * e2 * e3**2 + 4 * e1 * e2 + 3 * e1 * e3 + e2 * e3 + 3 * e3**2 + e2
    ) - 1


# -- argmax digits --------------------------------------------------------------

def argmax_digit_general(p: int, n: int, r: int, *,
                         max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Digit r (base p) of the least maximizing index, for any prime p.

    Sums, over candidate index i and candidate max value t, the indicator
    that x_i is the first input equal to the maximum t: everything before i
    stays below t and everything after stays below t + 1.
    """
    if r < 0:
        raise FormulaParamError("digit index must be nonnegative")
    ring = PolyRing(p, n, max_table_size=max_table_size)
    deltas = [_delta_list(ring, i) for i in range(n)]
    lows = [_lowpass_list(ring, i, deltas[i]) for i in range(n)]
    acc = ring.zero()
    for i in range(n):
        coeff = ring.field.digit(i, r)
        if coeff == 0:
            continue
        inner = ring.zero()
        for t in range(p):
            term = deltas[i][t]
            for j in range(i):
                term = term * lows[j][t]
            for k in range(i + 1, n):
                term = term * lows[k][t + 1]
            inner = inner + term
        acc = acc + inner.scale(coeff)
    return acc


def _prefix_products_p2(ring: PolyRing) -> list[Polynomial]:
    """P[m] = (1 + x_0) ... (1 + x_{m-1}) over F_2, with P[0] = 1."""
    prods = [ring.one()]
    for i in range(ring.n):
        prods.append(prods[-1] * (1 + ring.variable(i)))
    return prods


def argmax_p2(n: int, r: int, *,
              max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Digit r of the least maximizing index over F_2.

    A sum of prefix products (1 + x_0)...(1 + x_{m-1}) with m running over
    the multiples of 2^r up to the input length rounded up to an even
    multiple; inputs are implicitly zero-padded to that length, which never
    changes the least maximizing index, and truncated factors of padded
    positions are just 1.  Duplicate full-length terms cancel mod 2.
    """
    if r < 0:
        raise FormulaParamError("digit index must be nonnegative")
    ring = PolyRing(2, n, max_table_size=max_table_size)
    block = 2**r
    k = -(-n // (2 * block)) - 1  # pad to length (2k+2)*2^r
    prefix = _prefix_products_p2(ring)
    acc = ring.zero()
    for i in range(1, 2 * k + 3):
        acc = acc + prefix[min(i * block, n)]
    return acc


def argmax_p2_selector(n: int, r: int, *,
                       max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Digit r of the least maximizing index over F_2, inputs x_0..x_n.

    Same function as ``argmax_p2(n + 1, r)`` but assembled from an explicit
    index set: term i is the prefix product (1 + x_0)...(1 + x_i).  The set
    collects the index right before each half-period boundary of 2^(r+1),
    the index right before each full period, and the end of the last
    relevant period clamped to n.  When 2^r exceeds n the digit is
    identically zero and the empty sum is returned.
    """
    if n < 1:
        raise FormulaParamError("selector form needs at least inputs x_0, x_1")
    if r < 0:
        raise FormulaParamError("digit index must be nonnegative")
    ring = PolyRing(2, n + 1, max_table_size=max_table_size)
    block = 2**r
    if block > n:
        return ring.zero()
    period = 2 * block
    members = set()
    k = 0
    while k * period < n + 1 - block:
        members.add(period * k + block - 1)
        k += 1
    k = 1
    while k * period < n + 1 - block:
        members.add(period * k - 1)
        k += 1
    members.add(min(n, period * ((n - block) // period + 1) - 1))
    prefix = _prefix_products_p2(ring)
    acc = ring.zero()
    for i in sorted(members):
        acc = acc + prefix[i + 1]
    return acc


def argmax_p3_n3(*, max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """The least maximizing index of three inputs over F_3 (digit 0)."""
    ring = PolyRing(3, 3, max_table_size=max_table_size)
    x0, x1, x2 = ring.variable(0), ring.variable(1), ring.variable(2)
    inner = (x0 * x1**2 * x2 + x1**2 * x2**2 + x1**2 * x2 + 2 * x1 * x2**2
             + x0 * x1 + 2 * x0 * x2 + 2 * x1**2 + x1 * x2 + x2**2)
    return (2 * inner) * (x0 + 1)


def argmax_block_recurrence(p: int, n: int, r: int,
                            argmax0_builder: Optional[Callable[[int, int], Polynomial]] = None,
                            max_builder: Optional[Callable[[int, int], Polynomial]] = None,
                            *,
                            max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Digit r of argmax as digit 0 of the argmax over blockwise maxima.

    Inputs are split into blocks of size p^r (the tail block may be
    shorter, which is the same as zero-padding: appended zeros never become
    the unique maximum and never precede an existing one).  Digit r of the
    least maximizing index is digit 0 of the least maximizing block.
    """
    if r < 0:
        raise FormulaParamError("digit index must be nonnegative")
    if argmax0_builder is None:
        argmax0_builder = lambda pp, m: argmax_digit_general(
            pp, m, 0, max_table_size=max_table_size)
    if max_builder is None:
        max_builder = lambda pp, m: max_general(pp, m, max_table_size=max_table_size)
    ring = PolyRing(p, n, max_table_size=max_table_size)
    width = p**r
    nblocks = -(-n // width)
    block_maxima = []
    for b in range(nblocks):
        lo = b * width
        hi = min(lo + width, n)
        if hi - lo == 1:
            block_maxima.append(ring.variable(lo))
        else:
            block_max = max_builder(p, hi - lo)
            block_maxima.append(
                block_max.compose([ring.variable(j) for j in range(lo, hi)]))
    head = argmax0_builder(p, nblocks)
    return head.compose(block_maxima)


def argmax_extend_recursive(p: int, r: int, prefix_poly: Polynomial, n: int,
                            argmax0_2var: Polynomial | None = None,
                            max_prefix: Polynomial | None = None,
                            *,
                            max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Extend digit r of argmax from n inputs to n + 1.

    With A the indicator that the new input x_n strictly beats the running
    maximum, the digit becomes prefix * (1 - A) + digit_r(n) * A.
    """
    if prefix_poly.ring.p != p or prefix_poly.ring.n != n:
        raise RingMismatchError(
            f"prefix polynomial must live in PolyRing(p={p}, n={n}), "
            f"got {prefix_poly.ring}")
    if argmax0_2var is None:
        argmax0_2var = argmax0_n2(p, max_table_size=max_table_size)
    if max_prefix is None:
        max_prefix = max_general(p, n, max_table_size=max_table_size)
    if max_prefix.ring != prefix_poly.ring:
        raise RingMismatchError("running-maximum polynomial must match the prefix ring")
    big = PolyRing(p, n + 1, max_table_size=max_table_size)
    beats = argmax0_2var.compose([big.embed(max_prefix), big.variable(n)])
    new_digit = big.field.digit(n, r)
    return big.embed(prefix_poly) * (1 - beats) + beats.scale(new_digit)


# -- two-input forms for any p ---------------------------------------------------

def _falling(ring: PolyRing, i: int) -> list[Polynomial]:
    """F[m] = x_i (x_i - 1) ... (x_i - m + 1), for m = 0..p-1."""
    out = [ring.one()]
    x = ring.variable(i)
    for j in range(ring.p - 1):
        out.append(out[-1] * (x - j))
    return out


def carry(p: int, *,
          max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Indicator that two single base-p digits sum to p or more.

    The expression runs over the split point d: the first input covers at
    least d and the second at least p - d, detected by falling factorials
    with inverse weights.
    """
    ring = PolyRing(p, 2, max_table_size=max_table_size)
    f0 = _falling(ring, 0)
    f1 = _falling(ring, 1)
    acc = ring.zero()
    for d in range(1, p):
        coeff = ring.field.inverse(d)
        if d % 2 == 1:
            coeff = ring.field.neg(coeff)
        acc = acc + (f0[d] * f1[p - d]).scale(coeff)
    return acc


def argmax0_n2(p: int, *,
               max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Indicator that the second of two inputs is strictly larger.

    This is the carry of the involuted first input with the second: x0 < x1
    exactly when (p-1-x0) + x1 reaches p.  Written directly with rising
    factorials in x0 and falling factorials in x1.
    """
    ring = PolyRing(p, 2, max_table_size=max_table_size)
    rising = [ring.one()]
    x0 = ring.variable(0)
    for j in range(1, p):
        rising.append(rising[-1] * (x0 + j))
    f1 = _falling(ring, 1)
    acc = ring.zero()
    for d in range(1, p):
        acc = acc + (rising[d] * f1[p - d]).scale(ring.field.inverse(d))
    return acc


def max_n2(p: int, *,
           max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """max of two inputs for p >= 3, folded from the select-by-argmax form.

    The endpoint terms of the selection sum collapse (via Wilson's theorem)
    into the two indicator corrections that close the expression:
    x0 + (x0+1)^2 * delta_{p-1}(x1) + delta_0(x0) * x1^2.
    """
    if p == 2:
        raise FormulaParamError("two-input max over F_2 is max_p2(2); this form needs p >= 3")
    ring = PolyRing(p, 2, max_table_size=max_table_size)
    x0, x1 = ring.variable(0), ring.variable(1)
    rising = [ring.one()]
    for j in range(1, p):
        rising.append(rising[-1] * (x0 + j))
    f1 = _falling(ring, 1)
    middle = ring.zero()
    for d in range(2, p - 1):
        middle = middle + (rising[d] * f1[p - d]).scale(ring.field.inverse(d))
    return ((x1 - x0) * middle + x0
            + (x0 + 1) ** 2 * (1 - (x1 + 1) ** (p - 1))
            + (1 - x0 ** (p - 1)) * x1**2)


# -- ismax and nummax -------------------------------------------------------------

def ismax_general(p: int, n: int, *,
                  max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Indicator that max(x) equals the extra first input y (arity n + 1).

    Variable 0 is y; variables 1..n are the compared inputs.  For each
    candidate value t there is exactly one index where the first maximum
    can sit, so the inner sum is itself an indicator.
    """
    ring = PolyRing(p, n + 1, max_table_size=max_table_size)
    d_y = _delta_list(ring, 0)
    d_x = [_delta_list(ring, i + 1) for i in range(n)]
    l_x = [_lowpass_list(ring, i + 1, d_x[i]) for i in range(n)]
    acc = ring.zero()
    for t in range(p):
        inner = ring.zero()
        for i in range(n):
            term = d_x[i][t]
            for j in range(i):
                term = term * l_x[j][t]
            for k in range(i + 1, n):
                term = term * l_x[k][t + 1]
            inner = inner + term
        acc = acc + d_y[t] * inner
    return acc


def nummax0_general(p: int, n: int, *,
                    max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """The number of maximizing indices, reduced mod p (its lowest digit)."""
    ring = PolyRing(p, n, max_table_size=max_table_size)
    deltas = [_delta_list(ring, i) for i in range(n)]
    lows = [_lowpass_list(ring, i, deltas[i]) for i in range(n)]
    acc = ring.zero()
    for i in range(n):
        for t in range(p):
            term = deltas[i][t]
            for j in range(n):
                if j != i:
                    term = term * lows[j][t + 1]
            acc = acc + term
    return acc


def nummax_digit_subsets(p: int, n: int, r: int, *,
                         max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Digit r of the number of maximizing indices, by subset enumeration.

    For each count k with a nonzero digit, sums over all k-element index
    sets I the indicator that exactly the inputs in I sit at the common
    maximum t while everything outside stays below t.
    """
    if r < 0:
        raise FormulaParamError("digit index must be nonnegative")
    ring = PolyRing(p, n, max_table_size=max_table_size)
    deltas = [_delta_list(ring, i) for i in range(n)]
    lows = [_lowpass_list(ring, i, deltas[i]) for i in range(n)]
    acc = ring.zero()
    for k in range(1, n + 1):
        coeff = ring.field.digit(k, r)
        if coeff == 0:
            continue
        inner = ring.zero()
        for subset in combinations(range(n), k):
            chosen = set(subset)
            for t in range(p):
                term = ring.one()
                for i in subset:
                    term = term * deltas[i][t]
                for j in range(n):
                    if j not in chosen:
                        term = term * lows[j][t]
                inner = inner + term
        acc = acc + inner.scale(coeff)
    return acc


def ismax_p2(n: int, *,
             max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """ismax over F_2: y + (1 + x_0)...(1 + x_{n-1}), arity n + 1."""
    ring = PolyRing(2, n + 1, max_table_size=max_table_size)
    prod = ring.one()
    for i in range(n):
        prod = prod * (1 + ring.variable(i + 1))
    return ring.variable(0) + prod


def ismax_p3(n: int, *,
             max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """ismax over F_3, arity n + 1 with y first:
    -y^2 + y * (prod (1+x_i)^2 + prod (1-x_i^2) + 1) + prod (1-x_i^2)."""
    ring = PolyRing(3, n + 1, max_table_size=max_table_size)
    y = ring.variable(0)
    sq = ring.one()
    zero_ind = ring.one()
    for i in range(n):
        x = ring.variable(i + 1)
        sq = sq * (1 + x) ** 2
        zero_ind = zero_ind * (1 - x**2)
    return -(y**2) + y * (sq + zero_ind + 1) + zero_ind


def nummax_p2(n: int, r: int, *,
              max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Digit r of the number of maximizing indices over F_2.

    e_{2^r} picks up digit r of the popcount when some input is 1; the
    all-zero case is patched by digit_r(n) times the all-zero indicator.
    """
    if r < 0:
        raise FormulaParamError("digit index must be nonnegative")
    ring = PolyRing(2, n, max_table_size=max_table_size)
    idx = 2**r
    acc = ring.elementary_symmetric(idx) if idx <= n else ring.zero()
    nd = ring.field.digit(n, r)
    if nd:
        prod = ring.one()
        for i in range(n):
            prod = prod * (1 - ring.variable(i))
        acc = acc + prod.scale(nd)
    return acc


def ismax_2bit_p2(n: int, *,
                  max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Two-bit ismax over F_2: does max of n two-bit values equal y?

    Arity 2n + 2 with variable order (y_1, y_0, x_{0,1}, x_{0,0}, ...):
    the candidate's high bit, then low bit, then each input's high bit
    before its low bit.
    """
    ring = PolyRing(2, 2 * n + 2, max_table_size=max_table_size)
    y1, y0 = ring.variable(0), ring.variable(1)
    both = ring.one()     # no input has high and low set
    high = ring.one()     # no input has its high bit set
    all_zero = ring.one() # every bit of every input is zero
    for i in range(n):
        hi = ring.variable(2 + 2 * i)
        lo = ring.variable(3 + 2 * i)
        both = both * (1 + hi * lo)
        high = high * (1 + hi)
        all_zero = all_zero * (1 + hi) * (1 + lo)
    return y1 * y0 + y1 * both + (y1 + y0) * high + (y1 + 1) * all_zero


# -- duality -----------------------------------------------------------------------

def involution_conjugate(f: Polynomial) -> Polynomial:
    """Conjugate by the order-reversing involution x -> p-1-x.

    Substitutes p-1-x_i for every variable and reflects the output; this
    turns a max-type polynomial into the matching min-type one and swaps
    argmax with argmin.
    """
    ring = f.ring
    top = ring.p - 1
    subs = [top - ring.variable(i) for i in range(ring.n)]
    return top - f.compose(subs)


# -- catalog ------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    """One named formula with its parameter constraints."""

    name: str
    summary: str
    constraints: str
    fixed_p: int | None
    fixed_n: int | None
    allowed_n: tuple[int, ...] | None
    uses_r: bool
    min_p: int
    build: Callable[..., Polynomial]          # (p, n, r, max_table_size)
    spec_of: Callable[[int, int, int], FunctionSpec]
    verify_grid: tuple[tuple[int, int, int], ...]

    def resolve(self, p: int | None, n: int | None, r: int | None) -> tuple[int, int, int]:
        """Fill defaults and enforce this entry's parameter constraints."""
        if self.fixed_p is not None:
            if p is not None and p != self.fixed_p:
                raise FormulaParamError(
                    f"{self.name} is defined for p = {self.fixed_p} only, got p = {p}")
            p = self.fixed_p
        elif p is None:
            raise FormulaParamError(f"{self.name} needs a modulus p")
        if p < self.min_p:
            raise FormulaParamError(f"{self.name} needs p >= {self.min_p}, got p = {p}")
        if self.fixed_n is not None:
            if n is not None and n != self.fixed_n:
                raise FormulaParamError(
                    f"{self.name} is defined for n = {self.fixed_n} only, got n = {n}")
            n = self.fixed_n
        elif self.allowed_n is not None:
            if n is None or n not in self.allowed_n:
                raise FormulaParamError(
                    f"{self.name} is defined for n in {self.allowed_n}, got n = {n}")
        elif n is None:
            raise FormulaParamError(f"{self.name} needs an input count n")
        if n < 1:
            raise FormulaParamError(f"input count must be positive, got n = {n}")
        if self.uses_r:
            r = 0 if r is None else r
            if r < 0:
                raise FormulaParamError(f"digit index must be nonnegative, got r = {r}")
        else:
            if r not in (None, 0):
                raise FormulaParamError(f"{self.name} does not take a digit index r")
            r = 0
        return p, n, r


def _entry(name, summary, constraints, build, spec_of, *, fixed_p=None, fixed_n=None,
           allowed_n=None, uses_r=False, min_p=2, verify_grid=()):
    return CatalogEntry(name, summary, constraints, fixed_p, fixed_n, allowed_n,
                        uses_r, min_p, build, spec_of, tuple(verify_grid))


def _grid(ps, ns, rs=(0,)):
    return [(p, n, r) for p in ps for n in ns for r in rs]


CATALOG: dict[str, CatalogEntry] = {e.name: e for e in [
    _entry("max",
           "largest of n inputs; threshold-indicator sum",
           "any supported prime p; n >= 1",
           lambda p, n, r, mts: max_general(p, n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("max", p, n),
           verify_grid=_grid((2, 3), (1, 2, 3))),
    _entry("max2",
           "largest of n bits: prod(1 + x_i) - 1",
           "p = 2; n >= 1",
           lambda p, n, r, mts: max_p2(n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("max", 2, n),
           fixed_p=2, verify_grid=_grid((2,), range(1, 7))),
    _entry("min2",
           "smallest of n bits: prod(x_i)",
           "p = 2; n >= 1",
           lambda p, n, r, mts: min_p2(n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("min", 2, n),
           fixed_p=2, verify_grid=_grid((2,), range(1, 7))),
    _entry("max3",
           "largest of n inputs via elementary symmetric polynomials",
           "p = 3; n >= 1",
           lambda p, n, r, mts: max_p3(n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("max", 3, n),
           fixed_p=3, verify_grid=_grid((3,), range(1, 5))),
    _entry("min3",
           "smallest of n inputs via elementary symmetric polynomials",
           "p = 3; n >= 1",
           lambda p, n, r, mts: min_p3(n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("min", 3, n),
           fixed_p=3, verify_grid=_grid((3,), range(1, 5))),
    _entry("max5",
           "largest of 2 or 3 inputs via elementary symmetric polynomials",
           "p = 5; n in {2, 3}",
           lambda p, n, r, mts: (max_p5_n2(max_table_size=mts) if n == 2
                                 else max_p5_n3(max_table_size=mts)),
           lambda p, n, r: FunctionSpec("max", 5, n),
           fixed_p=5, allowed_n=(2, 3), verify_grid=_grid((5,), (2, 3))),
    _entry("maxn2",
           "largest of two inputs, closed form in falling factorials",
           "any prime p >= 3; n = 2",
           lambda p, n, r, mts: max_n2(p, max_table_size=mts),
           lambda p, n, r: FunctionSpec("max", p, 2),
           fixed_n=2, min_p=3, verify_grid=_grid((3, 5, 7), (2,))),
    _entry("argmax",
           "digit r of the least maximizing index; indicator sum",
           "any supported prime p; n >= 1; r >= 0",
           lambda p, n, r, mts: argmax_digit_general(p, n, r, max_table_size=mts),
           lambda p, n, r: FunctionSpec("argmax_digit", p, n, r),
           uses_r=True, verify_grid=_grid((2, 3), (1, 2, 3), (0, 1))),
    _entry("argmax2",
           "digit r of the least maximizing index via prefix products",
           "p = 2; n >= 1; r >= 0",
           lambda p, n, r, mts: argmax_p2(n, r, max_table_size=mts),
           lambda p, n, r: FunctionSpec("argmax_digit", 2, n, r),
           fixed_p=2, uses_r=True, verify_grid=_grid((2,), range(1, 9), (0, 1, 2))),
    _entry("argmax2sel",
           "digit r of the least maximizing index of x_0..x_n via an "
           "explicit prefix-product index set",
           "p = 2; inputs x_0..x_n (arity n + 1); r >= 0",
           lambda p, n, r, mts: argmax_p2_selector(n, r, max_table_size=mts),
           lambda p, n, r: FunctionSpec("argmax_digit", 2, n + 1, r),
           fixed_p=2, uses_r=True, verify_grid=_grid((2,), range(1, 8), (0, 1, 2))),
    _entry("argmax3n3",
           "least maximizing index of three inputs, compact factored form",
           "p = 3; n = 3",
           lambda p, n, r, mts: argmax_p3_n3(max_table_size=mts),
           lambda p, n, r: FunctionSpec("argmax_digit", 3, 3, 0),
           fixed_p=3, fixed_n=3, verify_grid=[(3, 3, 0)]),
    _entry("argmax0",
           "lowest digit of the least maximizing index (n = 2 uses the "
           "dedicated two-input closed form)",
           "any supported prime p; n >= 1",
           lambda p, n, r, mts: (argmax0_n2(p, max_table_size=mts) if n == 2
                                 else argmax_digit_general(p, n, 0, max_table_size=mts)),
           lambda p, n, r: FunctionSpec("argmax_digit", p, n, 0),
           verify_grid=_grid((2, 3, 5, 7), (2,)) + _grid((2, 3), (3,))),
    _entry("carry",
           "carry of adding two single base-p digits",
           "any supported prime p; inputs are the two digits (n = 2)",
           lambda p, n, r, mts: carry(p, max_table_size=mts),
           lambda p, n, r: FunctionSpec("carry", p, 2),
           fixed_n=2, verify_grid=_grid((2, 3, 5, 7, 11), (2,))),
    _entry("ismax",
           "indicator that max of the n inputs equals the extra input y",
           "any supported prime p; arity n + 1 (y first)",
           lambda p, n, r, mts: ismax_general(p, n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("ismax", p, n),
           verify_grid=_grid((2, 3), (1, 2))),
    _entry("ismax2",
           "ismax over F_2: y + prod(1 + x_i); arity n + 1",
           "p = 2; arity n + 1 (y first)",
           lambda p, n, r, mts: ismax_p2(n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("ismax", 2, n),
           fixed_p=2, verify_grid=_grid((2,), range(1, 7))),
    _entry("ismax3",
           "ismax over F_3 in squared-product indicators; arity n + 1",
           "p = 3; arity n + 1 (y first)",
           lambda p, n, r, mts: ismax_p3(n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("ismax", 3, n),
           fixed_p=3, verify_grid=_grid((3,), range(1, 4))),
    _entry("nummax0",
           "number of maximizing indices, mod p",
           "any supported prime p; n >= 1",
           lambda p, n, r, mts: nummax0_general(p, n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("nummax_digit", p, n, 0),
           verify_grid=_grid((2, 3), (1, 2, 3))),
    _entry("nummax",
           "digit r of the number of maximizing indices, subset sum",
           "any supported prime p; n >= 1; r >= 0",
           lambda p, n, r, mts: nummax_digit_subsets(p, n, r, max_table_size=mts),
           lambda p, n, r: FunctionSpec("nummax_digit", p, n, r),
           uses_r=True, verify_grid=_grid((2, 3), (1, 2, 3), (0, 1))),
    _entry("nummax2",
           "digit r of the number of maximizing indices over F_2",
           "p = 2; n >= 1; r >= 0",
           lambda p, n, r, mts: nummax_p2(n, r, max_table_size=mts),
           lambda p, n, r: FunctionSpec("nummax_digit", 2, n, r),
           fixed_p=2, uses_r=True, verify_grid=_grid((2,), range(1, 7), (0, 1, 2))),
    _entry("ismax2bit",
           "two-bit ismax over F_2; arity 2n + 2, order (y1, y0, x_i1, x_i0, ...)",
           "p = 2; n two-bit inputs plus the two-bit candidate y",
           lambda p, n, r, mts: ismax_2bit_p2(n, max_table_size=mts),
           lambda p, n, r: FunctionSpec("ismax_2bit", 2, n),
           fixed_p=2, verify_grid=_grid((2,), (1, 2, 3))),
]}


def resolve_params(name: str, p: int | None = None, n: int | None = None,
                   r: int | None = None) -> tuple[CatalogEntry, int, int, int]:
    try:
        entry = CATALOG[name]
    except KeyError:
        raise FormulaParamError(
            f"unknown formula {name!r}; known: {', '.join(sorted(CATALOG))}") from None
    rp, rn, rr = entry.resolve(p, n, r)
    return entry, rp, rn, rr


def build_formula(name: str, p: int | None = None, n: int | None = None,
                  r: int | None = None, *,
                  max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE) -> Polynomial:
    """Build a catalog formula by name, validating its parameters first."""
    entry, p, n, r = resolve_params(name, p, n, r)
    return entry.build(p, n, r, max_table_size)


def first_mismatch(a: Sequence[int], b: Sequence[int], workers: int = 1) -> int | None:
    """Index of the first disagreement between two value tables, else None.

    With workers > 1 the domain is split into chunks compared concurrently;
    taking the minimum found index keeps the result order-independent.
    """
    if len(a) != len(b):
        raise ValueError("cannot compare value tables of different sizes")
    size = len(a)
    if workers <= 1 or size < 4096:
        for i in range(size):
            if a[i] != b[i]:
                return i
        return None

    def scan(lo: int, hi: int) -> int | None:
        for i in range(lo, hi):
            if a[i] != b[i]:
                return i
        return None

    chunk = -(-size // workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(scan, lo, min(lo + chunk, size))
                   for lo in range(0, size, chunk)]
        hits = [f.result() for f in futures]
    hits = [h for h in hits if h is not None]
    return min(hits) if hits else None


def verify_formula(name: str, p: int | None = None, n: int | None = None,
                   r: int | None = None, *,
                   max_table_size: int | None = DEFAULT_MAX_TABLE_SIZE,
                   workers: int = 1) -> dict:
    """Check one closed form against interpolation of its semantics.

    Returns a report dict with coefficient_match (exact table identity,
    which by uniqueness is the minimality claim itself) and function_match
    (pointwise agreement of the closed form with the semantics).
    """
    entry, p, n, r = resolve_params(name, p, n, r)
    poly = entry.build(p, n, r, max_table_size)
    spec = entry.spec_of(p, n, r)
    table = tabulate(spec, max_table_size=max_table_size)
    reference = interpolate(table, max_table_size=max_table_size)
    closed_values = poly.values()
    mismatch = first_mismatch(closed_values, table.values, workers=workers)
    report = {
        "formula": name,
        "p": p,
        "n": n,
        "r": r,
        "points_checked": len(table.values),
        "coefficient_match": poly == reference,
        "function_match": mismatch is None,
    }
    if mismatch is not None:
        report["mismatch_point"] = list(point_at(p, spec.arity, mismatch))
        report["expected"] = table.values[mismatch]
        report["got"] = closed_values[mismatch]
    report["status"] = ("pass" if report["coefficient_match"] and report["function_match"]
                        else "mismatch")
    return report
