"""Run-length encoded strings and decoded-domain comparisons.

Everything here works run-aligned: decoded strings are never materialized
(``decode`` exists for I/O and for the brute-force reference oracles, which
only run at desk scale).  Decoded positions and lengths are 1-based and may
be far larger than the run count, so all comparisons walk runs and stop at
the first divergence.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, NamedTuple

SEP_DOLLAR = ord("$")
SEP_AT = ord("@")
SEP_HASH = ord("#")

# Code points reserved for concatenation sentinels and reduction gadgets;
# user alphabets and instance generators must avoid them.
RESERVED_SEPARATORS = frozenset({SEP_DOLLAR, SEP_AT, SEP_HASH})


class ParseError(ValueError):
    """Malformed RLE text input."""


class Run(NamedTuple):
    char: int
    length: int


@dataclass(frozen=True)
class RleString:
    """A byte string stored as maximal (char, length) runs."""

    runs: tuple[Run, ...]

    def __post_init__(self):
        prev = -1
        total = 0
        for r in self.runs:
            if not 0 <= r.char <= 255:
                raise ValueError(f"run char outside byte range: {r.char}")
            if r.length < 1:
                raise ValueError(f"run length must be positive: {r!r}")
            if r.char == prev:
                raise ValueError("adjacent runs must have distinct chars")
            prev = r.char
            total += r.length
        object.__setattr__(self, "_total", total)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int | str, int]]) -> "RleString":
        runs = []
        for char, length in pairs:
            if isinstance(char, str):
                char = ord(char)
            runs.append(Run(char, length))
        return cls(tuple(runs))

    @property
    def n(self) -> int:
        """Encoded length (number of runs)."""
        return len(self.runs)

    @property
    def total(self) -> int:
        """Decoded length."""
        return self._total  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return len(self.runs)

    def __getitem__(self, i: int) -> Run:
        return self.runs[i]

    def __str__(self) -> str:
        return format_rle(self)


@dataclass(frozen=True)
class PrefixTable:
    """Cumulative run lengths: ``values[i]`` is where run i ends, decoded."""

    values: tuple[int, ...]

    def __post_init__(self):
        if not self.values or self.values[0] != 0:
            raise ValueError("prefix table must start at 0")
        for a, b in zip(self.values, self.values[1:]):
            if b <= a:
                raise ValueError("prefix table must be strictly increasing")

    @property
    def n(self) -> int:
        return len(self.values) - 1

    @property
    def total(self) -> int:
        return self.values[-1]

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def clamped(self, i: int) -> int:
        """Value with out-of-range indices clamped (0 below, total above)."""
        if i <= 0:
            return 0
        if i >= len(self.values):
            return self.values[-1]
        return self.values[i]

    def search(self, decoded_index: int) -> int:
        """Run index containing 1-based decoded position ``decoded_index``."""
        if not 1 <= decoded_index <= self.total:
            raise IndexError(f"decoded index {decoded_index} out of range 1..{self.total}")
        return bisect_left(self.values, decoded_index)


def encode(data: bytes) -> RleString:
    """Encode a byte string into maximal runs."""
    runs: list[Run] = []
    for b in data:
        if runs and runs[-1].char == b:
            runs[-1] = Run(b, runs[-1].length + 1)
        else:
            runs.append(Run(b, 1))
    return RleString(tuple(runs))


def decode(s: RleString) -> bytes:
    """Inverse of :func:`encode`.  Materializes the string; desk scale only."""
    return b"".join(bytes([r.char]) * r.length for r in s.runs)


def prefix_table(s: RleString) -> PrefixTable:
    values = [0]
    for r in s.runs:
        values.append(values[-1] + r.length)
    return PrefixTable(tuple(values))


def inverse_prefix(table: PrefixTable, decoded_index: int) -> int:
    """Run index i with ``table[i-1] < decoded_index <= table[i]``."""
    return table.search(decoded_index)


def ldcp_runs(a, b) -> int:
    """Length of the longest decoded common prefix of two run sequences.

    Works on anything indexable that yields runs. Stops at the first run
    pair that differs: equal chars contribute the shorter run, distinct
    chars contribute nothing (maximality makes this exact).
    """
    limit = min(len(a), len(b))
    total = 0
    for i in range(limit):
        ca, la = a[i]
        cb, lb = b[i]
        if ca != cb:
            return total
        if la != lb:
            return total + min(la, lb)
        total += la
    return total


def lex_compare_runs(a, b) -> int:
    """Three-way lexicographic comparison of the decoded forms (-1, 0, 1)."""
    limit = min(len(a), len(b))
    for i in range(limit):
        ca, la = a[i]
        cb, lb = b[i]
        if ca != cb:
            return -1 if ca < cb else 1
        if la != lb:
            if la < lb:
                # a's run ends first; its next char (if any) differs from ca
                if i + 1 == len(a):
                    return -1
                return -1 if a[i + 1][0] < cb else 1
            if i + 1 == len(b):
                return 1
            return -1 if ca < b[i + 1][0] else 1
    if len(a) == len(b):
        return 0
    return -1 if len(a) < len(b) else 1


def ldcp(s: RleString, t: RleString) -> int:
    return ldcp_runs(s, t)


def lex_compare_decoded(s: RleString, t: RleString) -> int:
    return lex_compare_runs(s, t)


def is_generalized_substring(s: RleString, t: RleString) -> bool:
    """True iff the decoding of ``s`` occurs inside the decoding of ``t``.

    Run-aligned reference semantics: interior runs must match exactly,
    boundary runs may sit inside longer runs of ``t``.
    """
    k = s.n
    if k == 0:
        return True
    if k == 1:
        c, length = s.runs[0]
        return any(r.char == c and r.length >= length for r in t.runs)
    first, last = s.runs[0], s.runs[-1]
    interior = s.runs[1:-1]
    for j in range(t.n - k + 1):
        tj = t.runs[j]
        if tj.char != first.char or tj.length < first.length:
            continue
        if tuple(t.runs[j + 1 : j + k - 1]) != interior:
            continue
        tl = t.runs[j + k - 1]
        if tl.char == last.char and tl.length >= last.length:
            return True
    return False


def concat_sep(a: RleString, b: RleString, sep: int | str = SEP_DOLLAR) -> tuple[RleString, int]:
    """Concatenate ``a``, a one-char separator run, and ``b``.

    Returns the combined string and the separator's run index (= a.n + 1).
    The separator must occur in neither input.
    """
    if isinstance(sep, str):
        sep = ord(sep)
    for s in (a, b):
        if any(r.char == sep for r in s.runs):
            raise ValueError(f"separator {sep!r} occurs in an input string")
    runs = a.runs + (Run(sep, 1),) + b.runs
    return RleString(runs), a.n + 1


def reverse(s: RleString) -> RleString:
    return RleString(tuple(reversed(s.runs)))


_PRINTABLE = set(range(0x21, 0x7F)) - {ord(","), ord(":"), ord("\\")}


def _format_char(c: int) -> str:
    if c in _PRINTABLE:
        return chr(c)
    return f"\\x{c:02x}"


def format_rle(s: RleString) -> str:
    """One-line text form: comma-separated ``char:count`` tokens."""
    return ",".join(f"{_format_char(r.char)}:{r.length}" for r in s.runs)


def parse_rle(line: str) -> RleString:
    """Parse the text form produced by :func:`format_rle`."""
    line = line.strip()
    if not line:
        return RleString(())
    runs = []
    for tok in line.split(","):
        tok = tok.strip()
        head, sep, tail = tok.rpartition(":")
        if not sep or not head or not tail:
            raise ParseError(f"malformed token {tok!r}")
        if head.startswith("\\x"):
            if len(head) != 4:
                raise ParseError(f"malformed escape {head!r}")
            try:
                char = int(head[2:], 16)
            except ValueError as exc:
                raise ParseError(f"malformed escape {head!r}") from exc
        elif len(head) == 1:
            char = ord(head)
        else:
            raise ParseError(f"malformed char {head!r}")
        try:
            length = int(tail)
        except ValueError as exc:
            raise ParseError(f"malformed count {tail!r}") from exc
        if length < 1:
            raise ParseError(f"count must be positive in {tok!r}")
        runs.append(Run(char, length))
    try:
        return RleString(tuple(runs))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
