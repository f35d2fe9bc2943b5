"""Example generators for the benchmark tasks.

Each generator produces observations from the task's semantics alone
(what the synthesized program must compute), never by running a
reference parameter setting through the model.  All draws come from the
numpy Generator passed in, so a fixed seed gives identical examples on
every platform.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..ir.instance import Example, IOExamples

BLANK = 2  # tape alphabet is {0, 1, blank}


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def _all_bit_tuples(width: int) -> list[tuple[int, ...]]:
    return [tuple((v >> (width - 1 - i)) & 1 for i in range(width))
            for v in range(2 ** width)]


def automaton(rng: np.random.Generator, consts: dict[str, int],
              n: int) -> IOExamples:
    """Second-order automaton traces under the OR update rule."""
    t_len = consts["T"]
    pairs = [(a, b) for a in (0, 1) for b in (0, 1)]
    _require(1 <= n <= len(pairs), f"automaton has {len(pairs)} distinct"
             f" inputs, asked for {n}")
    examples = []
    for a, b in pairs[:n]:
        tape = [a, b]
        for _ in range(t_len - 2):
            tape.append(tape[-2] | tape[-1])
        examples.append(Example({"initial": [a, b]}, {"final": tape[-1]}))
    return IOExamples(tuple(examples))


def parity_chain(rng: np.random.Generator, consts: dict[str, int],
                 n: int) -> IOExamples:
    """Adjacent parities of one hidden bit string drawn from the seed.

    The hidden string is the quantity being recovered, so every example
    repeats the same observation row.
    """
    k = consts["K"]
    bits = rng.integers(0, 2, size=k).tolist()
    obs = [bits[i] ^ bits[i + 1] for i in range(k - 1)]
    return IOExamples(tuple(
        Example({}, {"obs": list(obs)}) for _ in range(n)))


def _distinct_bit_rows(rng: np.random.Generator, width: int, n: int,
                       exclude_zero: bool = False) -> list[list[int]]:
    space = 2 ** width - (1 if exclude_zero else 0)
    _require(1 <= n <= space, f"only {space} distinct inputs, asked for {n}")
    seen: set[tuple[int, ...]] = set()
    rows = []
    while len(rows) < n:
        bits = tuple(int(b) for b in rng.integers(0, 2, size=width))
        if bits in seen or (exclude_zero and not any(bits)):
            continue
        seen.add(bits)
        rows.append(list(bits))
    return rows


def tm_invert(rng: np.random.Generator, consts: dict[str, int],
              n: int) -> IOExamples:
    """Flip every bit before the blank terminator."""
    width = consts["L"] - 1
    examples = []
    for bits in _distinct_bit_rows(rng, width, n):
        examples.append(Example(
            {"in_tape": bits + [BLANK]},
            {"out_tape": [1 - b for b in bits] + [BLANK]}))
    return IOExamples(tuple(examples))


def tm_prepend_zero(rng: np.random.Generator, consts: dict[str, int],
                    n: int) -> IOExamples:
    """Shift the string right by one and write 0 into the first cell."""
    width = consts["L"] - 1
    examples = []
    for bits in _distinct_bit_rows(rng, width, n):
        examples.append(Example(
            {"in_tape": bits + [BLANK]},
            {"out_tape": [0] + bits}))
    return IOExamples(tuple(examples))


def tm_binary_decrement(rng: np.random.Generator, consts: dict[str, int],
                        n: int) -> IOExamples:
    """Subtract one from a nonzero big-endian binary number."""
    width = consts["L"] - 1
    examples = []
    for bits in _distinct_bit_rows(rng, width, n, exclude_zero=True):
        value = int("".join(map(str, bits)), 2) - 1
        out = [(value >> (width - 1 - i)) & 1 for i in range(width)]
        examples.append(Example(
            {"in_tape": bits + [BLANK]},
            {"out_tape": out + [BLANK]}))
    return IOExamples(tuple(examples))


def controlled_shift(rng: np.random.Generator, consts: dict[str, int],
                     n: int) -> IOExamples:
    """Swap two bits when the control bit is set."""
    rows = _all_bit_tuples(3)
    _require(1 <= n <= len(rows), f"only {len(rows)} inputs, asked for {n}")
    examples = []
    for c, x1, x2 in rows[:n]:
        out = [x2, x1] if c else [x1, x2]
        examples.append(Example({"in_bits": [c, x1, x2]},
                                {"out_bits": out}))
    return IOExamples(tuple(examples))


def full_adder(rng: np.random.Generator, consts: dict[str, int],
               n: int) -> IOExamples:
    rows = _all_bit_tuples(3)
    _require(1 <= n <= len(rows), f"only {len(rows)} inputs, asked for {n}")
    examples = []
    for a, b, cin in rows[:n]:
        total = a + b + cin
        examples.append(Example({"in_bits": [a, b, cin]},
                                {"out_bits": [total & 1, total >> 1]}))
    return IOExamples(tuple(examples))


def adder_2bit(rng: np.random.Generator, consts: dict[str, int],
               n: int) -> IOExamples:
    """Two-bit add: inputs little-endian (a0, a1, b0, b1), three sum bits."""
    rows = _all_bit_tuples(4)
    _require(1 <= n <= len(rows), f"only {len(rows)} inputs, asked for {n}")
    examples = []
    for a0, a1, b0, b1 in rows[:n]:
        total = (a0 + 2 * a1) + (b0 + 2 * b1)
        out = [total & 1, (total >> 1) & 1, (total >> 2) & 1]
        examples.append(Example({"in_bits": [a0, a1, b0, b1]},
                                {"out_bits": out}))
    return IOExamples(tuple(examples))


def array_access(rng: np.random.Generator, consts: dict[str, int],
                 n: int) -> IOExamples:
    """Fetch the k-th element into heap cell 0; the rest is preserved."""
    m = consts["M"]
    examples = []
    for _ in range(n):
        heap = rng.integers(0, m, size=m).tolist()
        k = int(rng.integers(0, m))
        examples.append(Example(
            {"in_heap": heap, "in_r0": k, "in_r1": 0},
            {"out_heap": [heap[k]] + heap[1:]}))
    return IOExamples(tuple(examples))


def array_decrement(rng: np.random.Generator, consts: dict[str, int],
                    n: int) -> IOExamples:
    """Subtract one from every heap cell (values start at >= 1)."""
    m = consts["M"]
    examples = []
    for _ in range(n):
        heap = rng.integers(1, m, size=m).tolist()
        examples.append(Example(
            {"in_heap": heap, "in_r0": 0, "in_r1": 0},
            {"out_heap": [v - 1 for v in heap]}))
    return IOExamples(tuple(examples))


def list_k(rng: np.random.Generator, consts: dict[str, int], n: int,
           kmax: int = 3) -> IOExamples:
    """Follow successor pointers k times from a head node; the node
    reached lands in heap cell 0 and the pointer array is preserved."""
    m = consts["M"]
    _require(1 <= kmax, "kmax must be positive")
    examples = []
    for _ in range(n):
        heap = rng.integers(0, m, size=m).tolist()
        head = int(rng.integers(0, m))
        k = int(rng.integers(1, kmax + 1))
        p = head
        for _ in range(k):
            p = heap[p]
        examples.append(Example(
            {"in_heap": heap, "in_r0": head, "in_r1": k},
            {"out_heap": [p] + heap[1:]}))
    return IOExamples(tuple(examples))


GENERATORS: dict[str, Callable[..., IOExamples]] = {
    "automaton": automaton,
    "parity-chain": parity_chain,
    "tm-invert": tm_invert,
    "tm-prepend-zero": tm_prepend_zero,
    "tm-binary-decrement": tm_binary_decrement,
    "controlled-shift": controlled_shift,
    "full-adder": full_adder,
    "2-bit-adder": adder_2bit,
    "array-access": array_access,
    "array-decrement": array_decrement,
    "list-k": list_k,
}
