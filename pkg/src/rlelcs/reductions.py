"""Constructive reductions from the parity problem to LCS-length solvers.

Each reduction encodes a bit string into RLE gadgets whose LCS length
(decoded or encoded) reveals the XOR of the bits, and drives a supplied
solver accordingly.  The solvers are treated as exact; these functions
double as correctness tests for any solver plugged in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .rle import SEP_AT, SEP_HASH, RleString, Run

_A = ord("a")
_B = ord("b")
_C = ord("c")


class ReductionError(RuntimeError):
    """The supplied solver returned values the reduction cannot interpret."""


def _check_bits(bits: Sequence[int]) -> None:
    if len(bits) < 1:
        raise ValueError("bit string must be non-empty")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0 or 1")


def gadget_dl(bits: Sequence[int]) -> RleString:
    """Alternating a/b runs of length bit + 2; decoded length 2n + sum(bits)."""
    _check_bits(bits)
    runs = tuple(
        Run(_A if i % 2 == 0 else _B, b + 2) for i, b in enumerate(bits)
    )
    return RleString(runs)


def parity_via_dl(bits: Sequence[int], dl_solver: Callable[[RleString, RleString], int]) -> int:
    """Parity from one decoded-length query of the gadget against itself."""
    gadget = gadget_dl(bits)
    return dl_solver(gadget, gadget) % 2


def gadget_el(bits: Sequence[int], k: int, sep: int | str = SEP_AT) -> RleString:
    """Alternating a/b runs of length 2*bit + 2, a separator, then c^k."""
    _check_bits(bits)
    if k < 1:
        raise ValueError("k must be positive")
    if isinstance(sep, str):
        sep = ord(sep)
    if sep not in (SEP_AT, SEP_HASH):
        raise ValueError("separator must be one of '@', '#'")
    runs = tuple(Run(_A if i % 2 == 0 else _B, 2 * b + 2) for i, b in enumerate(bits))
    return RleString(runs + (Run(sep, 1), Run(_C, k)))


@dataclass(frozen=True)
class ElParityResult:
    parity: int
    solver_calls: int
    k_prime: int


def parity_via_el(
    bits: Sequence[int], el_solver: Callable[[RleString, RleString], int]
) -> ElParityResult:
    """Parity via binary search on k against an encoded-length solver.

    The solver sees the two gadgets with different separators; it answers 1
    once the c-block dominates and n while the bit block does.  The search
    finds the first k where the answer flips; the bit block's decoded
    length is even, so the flip point's second-lowest bit XOR the lowest
    bit of n is the parity.  A single bit is returned directly: with n = 1
    both answers are the single run count 1 and the query carries no
    information.
    """
    _check_bits(bits)
    n = len(bits)
    if n == 1:
        return ElParityResult(bits[0], 0, 0)
    calls = 0

    def dominated(k: int) -> bool:
        nonlocal calls
        calls += 1
        answer = el_solver(gadget_el(bits, k, SEP_AT), gadget_el(bits, k, SEP_HASH))
        if answer == 1:
            return True
        if answer == n:
            return False
        raise ReductionError(f"solver returned {answer}, expected 1 or {n}")

    lo, hi = 2 * n, 4 * n + 1  # first k with answer 1 lies in this range
    while lo < hi:
        mid = (lo + hi) // 2
        if dominated(mid):
            hi = mid
        else:
            lo = mid + 1
    k_prime = lo
    parity = ((k_prime >> 1) & 1) ^ (n & 1)
    return ElParityResult(parity, calls, k_prime)


def pad_interleave(a: RleString) -> RleString:
    """Interleave '@' after every decoded char, making the result incompressible."""
    if any(r.char == SEP_AT for r in a.runs):
        raise ValueError("input already contains '@'")
    runs: list[Run] = []
    for r in a.runs:
        for _ in range(r.length):
            runs.append(Run(r.char, 1))
            runs.append(Run(SEP_AT, 1))
    return RleString(tuple(runs))
