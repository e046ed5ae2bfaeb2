"""Arithmetic circuits over F_p: lowering, CSE, evaluation, cost metrics.

A circuit is a DAG of gates in topological order; gate kinds are input,
const, add, sub, mul and scale (multiplication by a constant).  The cost
model mirrors the usual leveled-homomorphic accounting: additions and
constant multiplications are depth-free, only products of two non-constant
wires grow the multiplicative depth.  Lowering therefore emits ``scale``
whenever one factor is a known constant, and ``mul`` only for real
wire-times-wire products.

Gates are plain tuples::

    ("input", i)     ("const", v)      ("add", a, b)
    ("sub", a, b)    ("mul", a, b)     ("scale", c, a)

where a, b are indices of earlier gates.
"""

from __future__ import annotations

from dataclasses import dataclass
import json
from typing import Sequence

from .ff import PrimeField
from .polyring import Polynomial

STRATEGIES = ("naive_monomial", "nested_horner")

_BINARY = ("add", "sub", "mul")


def _gate_args(gate: tuple) -> tuple[int, ...]:
    op = gate[0]
    if op in _BINARY:
        return (gate[1], gate[2])
    if op == "scale":
        return (gate[2],)
    return ()


@dataclass(frozen=True)
class Circuit:
    """An immutable gate list with a single designated output."""

    p: int
    n_inputs: int
    gates: tuple[tuple, ...]
    output: int

    def __post_init__(self):
        field = PrimeField(self.p)
        if self.n_inputs < 0:
            raise ValueError("input count must be nonnegative")
        for idx, gate in enumerate(self.gates):
            op = gate[0]
            if op == "input":
                if not 0 <= gate[1] < self.n_inputs:
                    raise ValueError(f"gate {idx}: input index {gate[1]} out of range")
            elif op == "const":
                field.check(gate[1])
            elif op in _BINARY:
                pass
            elif op == "scale":
                field.check(gate[1])
            else:
                raise ValueError(f"gate {idx}: unknown op {op!r}")
            for ref in _gate_args(gate):
                if not 0 <= ref < idx:
                    raise ValueError(
                        f"gate {idx} references gate {ref}, which is not earlier")
        if not 0 <= self.output < len(self.gates):
            raise ValueError("output reference out of range")

    def to_dict(self) -> dict:
        out = []
        for gate in self.gates:
            op = gate[0]
            if op == "input":
                out.append({"op": "input", "index": gate[1]})
            elif op == "const":
                out.append({"op": "const", "value": gate[1]})
            elif op == "scale":
                out.append({"op": "scale", "value": gate[1], "args": [gate[2]]})
            else:
                out.append({"op": op, "args": [gate[1], gate[2]]})
        return {"p": self.p, "inputs": self.n_inputs, "gates": out, "output": self.output}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_dict(data: dict) -> "Circuit":
        try:
            gates = []
            for g in data["gates"]:
                op = g["op"]
                if op == "input":
                    gates.append(("input", g["index"]))
                elif op == "const":
                    gates.append(("const", g["value"]))
                elif op == "scale":
                    gates.append(("scale", g["value"], g["args"][0]))
                elif op in _BINARY:
                    gates.append((op, g["args"][0], g["args"][1]))
                else:
                    raise ValueError(f"unknown op {op!r}")
            return Circuit(data["p"], data["inputs"], tuple(gates), data["output"])
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed circuit record: {exc}") from exc

    @staticmethod
    def from_json(text: str) -> "Circuit":
        return Circuit.from_dict(json.loads(text))


@dataclass(frozen=True)
class CostReport:
    """Gate counts plus multiplicative depth.

    ``add_count`` covers both add and sub gates; ``mul_depth`` is the
    longest mul-weighted path from any input to the output (scale and add
    contribute nothing).
    """

    mul_count: int
    add_count: int
    scale_count: int
    mul_depth: int

    def to_dict(self) -> dict:
        return {"mul_count": self.mul_count, "add_count": self.add_count,
                "scale_count": self.scale_count, "mul_depth": self.mul_depth}


class CircuitBuilder:
    """Append-only gate emitter with constant folding and identity elision.

    Folding keeps lowered circuits honest about the depth model: products
    with known constants become scale gates, and units/zeros disappear
    instead of inflating counts.  Deliberately no structural sharing of
    compound gates; that is the job of the separate CSE pass.
    """

    def __init__(self, p: int, n_inputs: int):
        self.field = PrimeField(p)
        self.p = self.field.p
        self.n_inputs = n_inputs
        self._gates: list[tuple] = []
        self._const_of: list[int | None] = []
        self._const_cache: dict[int, int] = {}
        self._input_cache: dict[int, int] = {}

    def _emit(self, gate: tuple, const_value: int | None = None) -> int:
        self._gates.append(gate)
        self._const_of.append(const_value)
        return len(self._gates) - 1

    def const_value(self, ref: int) -> int | None:
        """The known constant value of a wire, or None."""
        return self._const_of[ref]

    def input(self, i: int) -> int:
        if not 0 <= i < self.n_inputs:
            raise ValueError(f"input index {i} out of range [0, {self.n_inputs})")
        if i not in self._input_cache:
            self._input_cache[i] = self._emit(("input", i))
        return self._input_cache[i]

    def const(self, v: int) -> int:
        v %= self.p
        if v not in self._const_cache:
            self._const_cache[v] = self._emit(("const", v), v)
        return self._const_cache[v]

    def add(self, a: int, b: int) -> int:
        ca, cb = self._const_of[a], self._const_of[b]
        if ca is not None and cb is not None:
            return self.const(ca + cb)
        if ca == 0:
            return b
        if cb == 0:
            return a
        return self._emit(("add", a, b))

    def sub(self, a: int, b: int) -> int:
        ca, cb = self._const_of[a], self._const_of[b]
        if ca is not None and cb is not None:
            return self.const(ca - cb)
        if cb == 0:
            return a
        if ca == 0:
            return self.scale(self.p - 1, b)
        return self._emit(("sub", a, b))

    def mul(self, a: int, b: int) -> int:
        ca, cb = self._const_of[a], self._const_of[b]
        if ca is not None and cb is not None:
            return self.const(ca * cb)
        if ca is not None:
            return self.scale(ca, b)
        if cb is not None:
            return self.scale(cb, a)
        return self._emit(("mul", a, b))

    def scale(self, c: int, a: int) -> int:
        c %= self.p
        ca = self._const_of[a]
        if ca is not None:
            return self.const(c * ca)
        if c == 0:
            return self.const(0)
        if c == 1:
            return a
        return self._emit(("scale", c, a))

    def sum(self, refs: Sequence[int]) -> int:
        if not refs:
            return self.const(0)
        acc = refs[0]
        for ref in refs[1:]:
            acc = self.add(acc, ref)
        return acc

    def product(self, refs: Sequence[int]) -> int:
        """Balanced product tree: depth ceil(log2(len)) instead of a chain."""
        if not refs:
            return self.const(1)
        layer = list(refs)
        while len(layer) > 1:
            nxt = [self.mul(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    def power(self, ref: int, k: int) -> int:
        """ref**k by halving (x^k = x^ceil(k/2) * x^floor(k/2)).

        Squaring-based like classic square-and-multiply but balanced, so
        the depth is exactly ceil(log2 k) for every k >= 1.
        """
        if k < 1:
            raise ValueError("power expects a positive exponent")
        memo = {1: ref}

        def go(e: int) -> int:
            if e not in memo:
                memo[e] = self.mul(go((e + 1) // 2), go(e // 2))
            return memo[e]

        return go(k)

    def finish(self, output: int) -> Circuit:
        """Drop gates unreachable from the output and renumber in order."""
        needed = set()
        stack = [output]
        while stack:
            ref = stack.pop()
            if ref in needed:
                continue
            needed.add(ref)
            stack.extend(_gate_args(self._gates[ref]))
        remap: dict[int, int] = {}
        kept: list[tuple] = []
        for idx in range(len(self._gates)):
            if idx not in needed:
                continue
            gate = self._gates[idx]
            op = gate[0]
            if op in _BINARY:
                gate = (op, remap[gate[1]], remap[gate[2]])
            elif op == "scale":
                gate = ("scale", gate[1], remap[gate[2]])
            remap[idx] = len(kept)
            kept.append(gate)
        return Circuit(self.p, self.n_inputs, tuple(kept), remap[output])


def _lower_by_variable(b: CircuitBuilder, p: int, coeffs: Sequence[int], nvars: int) -> int:
    """Split off the most significant variable and recurse on its slices.

    Each slice g_e multiplies x^e (powers built by halving, at depth
    ceil(log2 e)); the pieces are then summed.  Constant slices fold into
    scale gates, so a univariate never pays wire-times-wire depth for its
    coefficients.
    """
    if nvars == 0:
        return b.const(coeffs[0])
    stride = p ** (nvars - 1)
    pieces = []
    for e in range(p):
        block = coeffs[e * stride:(e + 1) * stride]
        if not any(block):
            continue
        sub = _lower_by_variable(b, p, block, nvars - 1)
        if e == 0:
            pieces.append(sub)
        else:
            pieces.append(b.mul(sub, b.power(b.input(nvars - 1), e)))
    return b.sum(pieces)


def lower(f: Polynomial, strategy: str = "nested_horner") -> Circuit:
    """Lower a canonical polynomial to a circuit computing it everywhere.

    ``naive_monomial`` scales and sums one product subcircuit per nonzero
    term; ``nested_horner`` factors variable by variable, combining each
    variable's canonical powers once per slice.  No algebraic rewriting
    happens here: factored shapes must be reflected in the polynomial's
    construction, not recovered by the lowerer.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    ring = f.ring
    b = CircuitBuilder(ring.p, ring.n)
    if strategy == "naive_monomial":
        terms = []
        for exps, c in f.support():
            factors = [b.power(b.input(i), e) for i, e in enumerate(exps) if e]
            if factors:
                terms.append(b.scale(c, b.product(factors)))
            else:
                terms.append(b.const(c))
        out = b.sum(terms)
    else:
        out = _lower_by_variable(b, ring.p, f.coeffs, ring.n)
    return b.finish(out)


def eliminate_common_subexpressions(circuit: Circuit) -> Circuit:
    """Merge structurally identical gates (commutative operands sorted).

    Value-numbering in one forward pass; the result computes the same
    function with never more gates, and applying it twice changes nothing.
    """
    seen: dict[tuple, int] = {}
    remap: list[int] = []
    kept: list[tuple] = []
    for gate in circuit.gates:
        op = gate[0]
        if op in ("add", "mul"):
            a, c = remap[gate[1]], remap[gate[2]]
            if a > c:
                a, c = c, a
            key = (op, a, c)
        elif op == "sub":
            key = (op, remap[gate[1]], remap[gate[2]])
        elif op == "scale":
            key = (op, gate[1], remap[gate[2]])
        else:
            key = gate
        if key in seen:
            remap.append(seen[key])
        else:
            seen[key] = len(kept)
            remap.append(len(kept))
            kept.append(key)
    return Circuit(circuit.p, circuit.n_inputs, tuple(kept), remap[circuit.output])


def cost(circuit: Circuit) -> CostReport:
    """Gate counts and the multiplicative depth of the output wire."""
    depth = [0] * len(circuit.gates)
    muls = adds = scales = 0
    for idx, gate in enumerate(circuit.gates):
        op = gate[0]
        if op == "mul":
            muls += 1
            depth[idx] = max(depth[gate[1]], depth[gate[2]]) + 1
        elif op in ("add", "sub"):
            adds += 1
            depth[idx] = max(depth[gate[1]], depth[gate[2]])
        elif op == "scale":
            scales += 1
            depth[idx] = depth[gate[2]]
    return CostReport(muls, adds, scales, depth[circuit.output])


def run(circuit: Circuit, point: Sequence[int]) -> int:
    """Evaluate gate by gate at a single input point."""
    field = PrimeField(circuit.p)
    if len(point) != circuit.n_inputs:
        raise ValueError(
            f"expected {circuit.n_inputs} input values, got {len(point)}")
    for v in point:
        field.check(v)
    p = circuit.p
    vals: list[int] = []
    for gate in circuit.gates:
        op = gate[0]
        if op == "input":
            vals.append(point[gate[1]])
        elif op == "const":
            vals.append(gate[1])
        elif op == "add":
            vals.append((vals[gate[1]] + vals[gate[2]]) % p)
        elif op == "sub":
            vals.append((vals[gate[1]] - vals[gate[2]]) % p)
        elif op == "mul":
            vals.append((vals[gate[1]] * vals[gate[2]]) % p)
        else:
            vals.append((gate[1] * vals[gate[2]]) % p)
    return vals[circuit.output]


def _last_uses(circuit: Circuit) -> list[int]:
    last = list(range(len(circuit.gates)))
    for idx, gate in enumerate(circuit.gates):
        for ref in _gate_args(gate):
            last[ref] = idx
    last[circuit.output] = len(circuit.gates)
    return last


def run_all(circuit: Circuit) -> tuple[int, ...]:
    """Evaluate the circuit at every point of F_p^n, mixed-radix order.

    Gate semantics are identical to :func:`run`; the whole domain is just
    carried through each gate at once.  Mod 2 a wire's values across all
    2^n points pack into one big int (add is xor, mul is and), which keeps
    exhaustive checks at arity 14 quick.  Intermediate values are freed at
    their last use.
    """
    p, n = circuit.p, circuit.n_inputs
    size = p**n
    last = _last_uses(circuit)
    gates = circuit.gates

    if p == 2:
        full = (1 << size) - 1
        masks: list[int | None] = [None] * len(gates)
        for idx, gate in enumerate(gates):
            op = gate[0]
            if op == "input":
                s = 1 << gate[1]
                chunk = ((1 << s) - 1) << s
                masks[idx] = chunk * (full // ((1 << (2 * s)) - 1)) if 2 * s <= size else chunk
            elif op == "const":
                masks[idx] = full if gate[1] else 0
            elif op in ("add", "sub"):
                masks[idx] = masks[gate[1]] ^ masks[gate[2]]
            elif op == "mul":
                masks[idx] = masks[gate[1]] & masks[gate[2]]
            else:  # scale by 0 or 1
                masks[idx] = masks[gate[2]] if gate[1] else 0
            for ref in _gate_args(gate):
                if last[ref] == idx:
                    masks[ref] = None
        out = masks[circuit.output]
        return tuple((out >> a) & 1 for a in range(size))

    vecs: list[list[int] | None] = [None] * len(gates)
    for idx, gate in enumerate(gates):
        op = gate[0]
        if op == "input":
            s = p ** gate[1]
            pattern = [v for v in range(p) for _ in range(s)]
            vecs[idx] = pattern * (size // (s * p))
        elif op == "const":
            vecs[idx] = [gate[1]] * size
        elif op == "add":
            vecs[idx] = [(x + y) % p for x, y in zip(vecs[gate[1]], vecs[gate[2]])]
        elif op == "sub":
            vecs[idx] = [(x - y) % p for x, y in zip(vecs[gate[1]], vecs[gate[2]])]
        elif op == "mul":
            vecs[idx] = [(x * y) % p for x, y in zip(vecs[gate[1]], vecs[gate[2]])]
        else:
            c = gate[1]
            vecs[idx] = [(c * x) % p for x in vecs[gate[2]]]
        for ref in _gate_args(gate):
            if last[ref] == idx:
                vecs[ref] = None
    return tuple(vecs[circuit.output])
