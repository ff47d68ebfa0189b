"""Brute-force ground-truth oracles and instance generators.

The only module allowed to materialize decoded strings.  The oracles are
deliberately naive (quadratic dynamic programming over decoded bytes) so
they can serve as trustworthy expectations for everything else.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .rle import RESERVED_SEPARATORS, RleString, Run, decode, encode


class ResourceLimitError(RuntimeError):
    """Decoded size exceeds the desk-scale bound for brute oracles."""


DESK_BOUND = 10_000_000


@dataclass(frozen=True)
class BruteLcs:
    length: int
    start_a: int  # 1-based decoded start, 0 when length == 0
    start_b: int
    encoded_length: int


@dataclass(frozen=True)
class BruteLrs:
    length: int
    start_1: int
    start_2: int


def brute_lcs(a: RleString, b: RleString, *, bound: int = DESK_BOUND) -> BruteLcs:
    """Exact decoded LCS by dynamic programming over decoded bytes."""
    if a.total * b.total > bound:
        raise ResourceLimitError(f"decoded product {a.total * b.total} exceeds bound {bound}")
    da, db = decode(a), decode(b)
    if not da or not db:
        return BruteLcs(0, 0, 0, 0)
    xa = np.frombuffer(da, dtype=np.uint8)
    xb = np.frombuffer(db, dtype=np.uint8)
    prev = np.zeros(len(xb) + 1, dtype=np.int64)
    best_len, best_end_a, best_end_b = 0, 0, 0
    for i in range(1, len(xa) + 1):
        cur = np.zeros(len(xb) + 1, dtype=np.int64)
        match = xb == xa[i - 1]
        cur[1:][match] = prev[:-1][match] + 1
        j = int(np.argmax(cur))
        if cur[j] > best_len:
            best_len, best_end_a, best_end_b = int(cur[j]), i, j
        prev = cur
    if best_len == 0:
        return BruteLcs(0, 0, 0, 0)
    start_a = best_end_a - best_len + 1
    start_b = best_end_b - best_len + 1
    sub = encode(da[start_a - 1 : best_end_a])
    return BruteLcs(best_len, start_a, start_b, sub.n)


def _max_equal_run(eq: np.ndarray) -> tuple[int, int]:
    """(length, end_index) of the longest run of True, vectorized."""
    if not eq.any():
        return 0, -1
    starts = np.flatnonzero(np.concatenate(([True], ~eq[:-1])) & eq)
    ends = np.flatnonzero(eq & np.concatenate((~eq[1:], [True])))
    lengths = ends - starts + 1
    j = int(np.argmax(lengths))
    return int(lengths[j]), int(ends[j])


def brute_lrs(a: RleString, *, bound: int = DESK_BOUND) -> BruteLrs:
    """Exact longest repeated substring (occurrences may overlap).

    Scans every start-offset shift and takes the longest run of positional
    equality between the string and its shifted self.
    """
    if a.total * a.total > bound:
        raise ResourceLimitError(f"decoded square {a.total ** 2} exceeds bound {bound}")
    data = decode(a)
    n = len(data)
    if n < 2:
        return BruteLrs(0, 0, 0)
    x = np.frombuffer(data, dtype=np.uint8)
    best_len, best_1, best_2 = 0, 0, 0
    for shift in range(1, n):
        eq = x[: n - shift] == x[shift:]
        length, end = _max_equal_run(eq)
        if length > best_len:
            best_len = length
            best_1 = end - length + 2  # 1-based start of first copy
            best_2 = best_1 + shift
    return BruteLrs(best_len, best_1, best_2)


DEFAULT_ALPHABET = (ord("a"), ord("b"), ord("c"), ord("d"))


def random_rle(
    rng: random.Random,
    n_runs: int,
    *,
    alphabet: tuple[int, ...] = DEFAULT_ALPHABET,
    max_len: int = 9,
) -> RleString:
    """Random RLE string drawn run by run (adjacent chars kept distinct)."""
    if any(c in RESERVED_SEPARATORS for c in alphabet):
        raise ValueError("alphabet may not contain reserved separators")
    runs: list[Run] = []
    prev = -1
    for _ in range(n_runs):
        choices = [c for c in alphabet if c != prev]
        c = rng.choice(choices)
        runs.append(Run(c, rng.randint(1, max_len)))
        prev = c
    return RleString(tuple(runs))


@dataclass(frozen=True)
class PlantedInstance:
    a: RleString
    b: RleString
    d_tilde: int  # decoded LCS length (verified when verify=True)
    encoded_length: int
    verified: bool


class ParameterError(ValueError):
    """Infeasible generator parameters."""


def plant_instance(
    n_runs: int,
    d_runs: int,
    d_tilde: int,
    seed: int,
    *,
    alphabet: tuple[int, ...] = DEFAULT_ALPHABET,
    max_len: int = 9,
    verify: bool = True,
    bound: int = DESK_BOUND,
) -> PlantedInstance:
    """Two random strings sharing a planted block of d_runs runs.

    The block's decoded length is at least d_tilde (run-length cap
    permitting); the junction chars next to the block differ between the
    two strings, so the planted occurrences cannot extend.  With
    verify=True the ground truth is re-derived with the brute oracle
    (mandatory before the truth is used in any assertion); at benchmark
    scale callers pass verify=False and use the constructed values.
    """
    if d_runs > n_runs:
        raise ParameterError("d_runs cannot exceed n_runs")
    if d_runs < 1 or n_runs < 1:
        raise ParameterError("n_runs and d_runs must be positive")
    if d_tilde > d_runs * max_len:
        raise ParameterError("d_tilde unreachable with this run-length cap")
    if len(alphabet) < 3:
        raise ParameterError("need at least 3 symbols to isolate the plant")
    rng = random.Random(seed)

    lengths = [rng.randint(1, max_len) for _ in range(d_runs)]
    deficit = d_tilde - sum(lengths)
    while deficit > 0:
        i = rng.randrange(d_runs)
        bump = min(max_len - lengths[i], deficit)
        lengths[i] += bump
        deficit -= bump
    block: list[Run] = []
    prev = -1
    for length in lengths:
        c = rng.choice([c for c in alphabet if c != prev])
        block.append(Run(c, length))
        prev = c

    # distinct junction chars on each side stop both-sided extension
    junctions = {}
    left_pair = rng.sample([c for c in alphabet if c != block[0].char], 2)
    right_pair = rng.sample([c for c in alphabet if c != block[-1].char], 2)
    junctions["a"] = (left_pair[0], right_pair[0])
    junctions["b"] = (left_pair[1], right_pair[1])

    def embed(which: str) -> RleString:
        jl, jr = junctions[which]
        spare = n_runs - d_runs
        use_left = spare >= 1
        use_right = spare >= 2
        flank_budget = spare - int(use_left) - int(use_right)
        left_n = rng.randint(0, flank_budget)
        right_n = flank_budget - left_n
        runs: list[Run] = []
        if left_n:
            runs.extend(random_rle(rng, left_n, alphabet=alphabet, max_len=max_len).runs)
        if use_left:
            if runs and runs[-1].char == jl:
                alt = rng.choice([c for c in alphabet if c not in (jl,)])
                runs[-1] = Run(alt, runs[-1].length)
            runs.append(Run(jl, rng.randint(1, max_len)))
        runs.extend(block)
        if use_right:
            runs.append(Run(jr, rng.randint(1, max_len)))
        if right_n:
            tail = list(random_rle(rng, right_n, alphabet=alphabet, max_len=max_len).runs)
            if tail[0].char == runs[-1].char:
                alt = rng.choice([c for c in alphabet if c != runs[-1].char])
                tail[0] = Run(alt, tail[0].length)
            runs.extend(tail)
        merged: list[Run] = []
        for r in runs:
            if merged and merged[-1].char == r.char:
                merged[-1] = Run(r.char, merged[-1].length + r.length)
            else:
                merged.append(r)
        return RleString(tuple(merged))

    a = embed("a")
    b = embed("b")
    planted_decoded = sum(lengths)
    if verify:
        truth = brute_lcs(a, b, bound=bound)
        if truth.length < planted_decoded:
            raise AssertionError("planted block lost; generator bug")
        return PlantedInstance(a, b, truth.length, truth.encoded_length, True)
    return PlantedInstance(a, b, planted_decoded, d_runs, False)
