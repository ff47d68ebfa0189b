"""Query-counted oracle access and classically-executed search primitives.

Every primitive runs an ordinary deterministic procedure but charges the
idealized quantum cost to a :class:`QueryLedger`.  Success probabilities are
1 classically, so probability boosting appears only as the cost multiplier
:func:`with_whp`.  Charges never depend on where (or whether) a satisfying
element lies, only on the search-space size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from .rle import PrefixTable, RleString, prefix_table


def ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    return math.isqrt(n - 1) + 1


@dataclass
class QueryLedger:
    """Per-run accounting: oracle query counters plus charged quantum cost."""

    run_queries: int = 0
    prefix_queries: int = 0
    charged_cost: float = 0.0

    def charge(self, amount: float) -> None:
        if amount < 0:
            raise ValueError("charges must be non-negative")
        self.charged_cost += amount

    def absorb_counters(self, other: "QueryLedger") -> None:
        self.run_queries += other.run_queries
        self.prefix_queries += other.prefix_queries

    def as_dict(self) -> dict[str, Any]:
        return {
            "run_queries": self.run_queries,
            "prefix_queries": self.prefix_queries,
            "charged_cost": self.charged_cost,
        }


@dataclass(frozen=True)
class CostModel:
    """Charge-formula constants.

    The leading powers are fixed by the algorithm; unquantifiable
    polylog / o(1) factors are flattened into these configurable
    constants (the same treatment the anchor-lookup charge gets).
    """

    grover_factor: float = 1.0
    minfind_factor: float = 1.0
    anchor_factor: float = 1.0
    whp_log_base: float = 2.0
    insert_comp_factor: float = 8.0
    setup_sort_factor: float = 2.0
    check_unit: float = 1.0
    d_min: int = 8
    r_const: float = 1.0
    step_budget_factor: float = 20.0
    desk_bound: int = 10_000_000

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"{f.name} must be positive")
        if self.whp_log_base <= 1:
            raise ValueError("whp_log_base must exceed 1")

    @classmethod
    def from_items(cls, items: dict[str, str], base: "CostModel | None" = None) -> "CostModel":
        model = base or cls()
        kwargs: dict[str, Any] = {}
        types = {f.name: f.type for f in fields(cls)}
        for key, raw in items.items():
            if key not in types:
                raise KeyError(f"unknown cost-model key: {key}")
            kwargs[key] = int(raw) if types[key] == "int" else float(raw)
        return replace(model, **kwargs)

    @classmethod
    def from_file(cls, path: str | Path, base: "CostModel | None" = None) -> "CostModel":
        """Load ``key=value`` lines; ``#`` starts a comment."""
        items: dict[str, str] = {}
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            items[key.strip()] = value.strip()
        return cls.from_items(items, base)


class OracleHandle:
    """Counted access to one RLE string and its prefix sums."""

    __slots__ = ("string", "prefix", "ledger")

    def __init__(self, string: RleString, ledger: QueryLedger, prefix: PrefixTable | None = None):
        self.string = string
        self.prefix = prefix if prefix is not None else prefix_table(string)
        if self.prefix.n != string.n:
            raise ValueError("prefix table does not match string")
        self.ledger = ledger

    @property
    def n(self) -> int:
        return self.string.n

    @property
    def total(self) -> int:
        return self.string.total

    def query_run(self, i: int):
        if not 1 <= i <= self.string.n:
            raise IndexError(f"run index {i} out of range 1..{self.string.n}")
        self.ledger.run_queries += 1
        return self.string.runs[i - 1]

    def query_prefix(self, i: int) -> int:
        if not 0 <= i <= self.string.n:
            raise IndexError(f"prefix index {i} out of range 0..{self.string.n}")
        self.ledger.prefix_queries += 1
        return self.prefix.values[i]

    def inverse_prefix(self, decoded_index: int) -> int:
        """Run index containing a decoded position, via O(log n) prefix probes."""
        if not 1 <= decoded_index <= self.total:
            raise IndexError(f"decoded index {decoded_index} out of range 1..{self.total}")
        lo, hi = 1, self.string.n
        while lo < hi:
            mid = (lo + hi) // 2
            if self.query_prefix(mid) >= decoded_index:
                hi = mid
            else:
                lo = mid + 1
        return lo


def make_handles(a: RleString, b: RleString, ledger: QueryLedger | None = None):
    """Build two handles sharing one ledger (the usual solver setup)."""
    ledger = ledger if ledger is not None else QueryLedger()
    return OracleHandle(a, ledger), OracleHandle(b, ledger), ledger


def grover_search(
    space_size: int,
    predicate: Callable[[int], bool],
    *,
    ledger: QueryLedger,
    model: CostModel,
    unit_cost: float = 1.0,
) -> Optional[int]:
    """First index in 1..space_size satisfying the predicate, or None.

    Charges ``grover_factor * ceil(sqrt(N)) * unit_cost`` up front,
    independent of where (or whether) a hit occurs.
    """
    if space_size < 1:
        raise ValueError("space_size must be >= 1")
    ledger.charge(model.grover_factor * ceil_sqrt(space_size) * unit_cost)
    for i in range(1, space_size + 1):
        if predicate(i):
            return i
    return None


def minimum_find(
    space_size: int,
    key: Callable[[int], Any],
    *,
    ledger: QueryLedger,
    model: CostModel,
    unit_cost: float = 1.0,
) -> int:
    """Argmin index in 1..space_size (ties break to the smallest index)."""
    if space_size < 1:
        raise ValueError("space_size must be >= 1")
    ledger.charge(model.minfind_factor * ceil_sqrt(space_size) * unit_cost)
    best_i = 1
    best = key(1)
    for i in range(2, space_size + 1):
        k = key(i)
        if k < best:
            best, best_i = k, i
    return best_i


def with_whp(inner_cost: float, n_scale: int, *, model: CostModel | None = None) -> float:
    """Cost of a subroutine boosted to high success probability."""
    if inner_cost < 0:
        raise ValueError("inner_cost must be >= 0")
    if n_scale < 2:
        raise ValueError("n_scale must be >= 2")
    base = model.whp_log_base if model is not None else 2.0
    reps = math.ceil(math.log(n_scale, base) - 1e-12)
    return inner_cost * reps


class WalkMode(str, Enum):
    FULLSET = "fullset"
    RANDOMWALK = "walk"
    COSTONLY = "costonly"


@dataclass
class WalkHooks:
    """Vertex-state operations for the walk driver.

    Executed modes measure each hook's charge on a scratch ledger; a hook
    may instead declare its per-call charge, which takes precedence and is
    the only source available to the no-execution mode.
    """

    setup: Callable[[Sequence[int], QueryLedger], Any] | None = None
    update: Callable[[Any, int, int, QueryLedger], None] | None = None
    check: Callable[[Any, QueryLedger], Any | None] | None = None
    setup_cost: float | None = None
    update_cost: float | None = None
    check_cost: float | None = None


def walk_search(
    m: int,
    r: int,
    delta_bound: float,
    hooks: WalkHooks,
    *,
    mode: WalkMode,
    ledger: QueryLedger,
    model: CostModel,
    rng=None,
    step_budget: int | None = None,
    stats_out: dict | None = None,
) -> Any | None:
    """Walk-search driver over r-subsets of an m-element set.

    All modes add ``s + (1/sqrt(delta)) * (sqrt(r_used) * u + c)`` to the
    ledger, with per-call hook charges measured during execution (or taken
    from the hooks' declared values).  Returns a marked-vertex report if any
    check reports one; always returns None when nothing is marked.
    """
    if not 1 <= r <= m:
        raise ValueError(f"need 1 <= r <= m, got r={r} m={m}")
    if not 0 < delta_bound <= 1:
        raise ValueError("delta_bound must be in (0, 1]")

    def finalize(s: float, u: float, c: float, r_used: int, report):
        total = s + (1.0 / math.sqrt(delta_bound)) * (math.sqrt(r_used) * u + c)
        ledger.charge(total)
        if stats_out is not None:
            stats_out.update(
                {"setup": s, "update": u, "check": c, "r_used": r_used, "total": total}
            )
        return report

    if mode is WalkMode.COSTONLY:
        return finalize(
            hooks.setup_cost or 0.0, hooks.update_cost or 0.0, hooks.check_cost or 0.0, r, None
        )

    if hooks.setup is None or hooks.check is None:
        raise ValueError("executed modes need setup and check hooks")

    scratch = QueryLedger()
    if mode is WalkMode.FULLSET:
        state = hooks.setup(tuple(range(1, m + 1)), scratch)
        s_meas = scratch.charged_cost
        report = hooks.check(state, scratch)
        c_meas = scratch.charged_cost - s_meas
        ledger.absorb_counters(scratch)
        s = hooks.setup_cost if hooks.setup_cost is not None else s_meas
        u = hooks.update_cost if hooks.update_cost is not None else 0.0
        c = hooks.check_cost if hooks.check_cost is not None else c_meas
        return finalize(s, u, c, m, report)

    if mode is WalkMode.RANDOMWALK:
        if hooks.update is None:
            raise ValueError("random-walk mode needs an update hook")
        import random as _random

        rng = rng if rng is not None else _random.Random(0)
        inside = set(rng.sample(range(1, m + 1), r))
        outside = [i for i in range(1, m + 1) if i not in inside]
        state = hooks.setup(tuple(sorted(inside)), scratch)
        s_meas = scratch.charged_cost
        budget = step_budget
        if budget is None:
            budget = int(
                model.step_budget_factor
                * math.ceil(m / r)
                * math.ceil(1.0 / math.sqrt(delta_bound))
            )
        swaps = math.isqrt(r - 1) + 1 if r > 1 else 1
        u_total, u_calls, c_total, c_calls = 0.0, 0, 0.0, 0
        report = None
        for _ in range(max(1, budget)):
            before = scratch.charged_cost
            report = hooks.check(state, scratch)
            c_total += scratch.charged_cost - before
            c_calls += 1
            if report is not None:
                break
            for _ in range(swaps):
                out_pos = rng.randrange(len(outside))
                removed = rng.choice(sorted(inside))
                added = outside[out_pos]
                before = scratch.charged_cost
                hooks.update(state, removed, added, scratch)
                u_total += scratch.charged_cost - before
                u_calls += 1
                inside.discard(removed)
                inside.add(added)
                outside[out_pos] = removed
        ledger.absorb_counters(scratch)
        s = hooks.setup_cost if hooks.setup_cost is not None else s_meas
        u = hooks.update_cost if hooks.update_cost is not None else (
            u_total / u_calls if u_calls else 0.0
        )
        c = hooks.check_cost if hooks.check_cost is not None else (
            c_total / c_calls if c_calls else 0.0
        )
        return finalize(s, u, c, r, report)

    raise ValueError(f"unknown mode {mode!r}")
