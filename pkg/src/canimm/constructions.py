"""Finite-horizon runs of the stage constructions, with replayable traces.

Each run is a pure function of its inputs and horizons, emits a set prefix
together with a trace, and ties are always broken toward the least
admissible value so that traces replay bit-for-bit.  None of the emitted
prefixes is claimed to have any infinite-horizon property; the runs
guarantee exactly the per-stage invariants the checkers re-verify.

Index conventions: pools are ordered, and the pool position e plays the
role of the index of the e-th numbering, with claims starting "from e" in
the checkers.  Stage pairing is the machine's Cantor pairing throughout,
and the threshold function f(i) = max over e <= i of pair(e, i) is
pair(i, i).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import programs as pg
from .finitesets import FiniteSet, SetPrefix, subset_of_string
from .machine import (
    eval_bounded,
    eval_total,
    pair,
    pair_bound,
    unpair,
    we_bounded,
    we_enumeration,
)
from .numberings import Numbering, Registry, even_odd_rule_code, witness_rule_from_table


class TruncationError(ValueError):
    """A decode asked for more positions than the prefix holds."""


@dataclass(frozen=True)
class TraceRecord:
    stage: int
    rule: str
    fields: tuple[int | str, ...] = ()


@dataclass
class ConstructionTrace:
    name: str
    meta: dict[str, object] = field(default_factory=dict)
    records: list[TraceRecord] = field(default_factory=list)

    def add(self, stage: int, rule: str, *fields_: int | str):
        self.records.append(TraceRecord(stage, rule, tuple(fields_)))


def _free_position(mask: int, start: int) -> int:
    """Least x >= start whose bit is clear in mask."""
    m = mask >> start
    t = (m + 1) & ~m
    return start + t.bit_length() - 1


# ---------------------------------------------------------------------------
# Limit-computable marker construction


def _pairs_at_level(n: int, pool_size: int):
    for e in range(min(n + 1, pool_size)):
        yield e, n
    if n < pool_size:
        for i in range(n):
            yield n, i


def delta2_prefix(pool: Sequence[int], stages: int, markers: int) -> tuple[SetPrefix, ConstructionTrace]:
    """Movable markers against stage approximations of raw codes.

    At stage s, marker n is the least value above marker n-1 avoiding every
    D_{e,s}(i) with pool position e and index i both at most n whose size
    exceeds i.  Since a stage value only changes at its settling step, the
    markers are recomputed exactly at those event stages; the trace records
    each move and which pool entries settled within the horizon.
    """
    if stages < 1 or markers < 1:
        raise ValueError("stage and marker horizons must be positive")
    settled: dict[tuple[int, int], tuple[int, int]] = {}
    unsettled: list[tuple[int, int]] = []
    for e, code in enumerate(pool):
        if e >= markers:
            break
        for i in range(markers):
            r = eval_bounded(code, (i,), stages)
            if r.converged:
                settled[(e, i)] = (r.steps, r.value)
            else:
                unsettled.append((e, i))
    events = sorted({0} | {steps for steps, _ in settled.values()})
    events = [s for s in events if s <= stages]

    trace = ConstructionTrace(
        "delta2",
        meta={
            "stages": stages,
            "markers": markers,
            "pool": list(pool),
            "settled": len(settled),
            "unsettled": sorted(unsettled),
        },
    )
    current: list[int] = []
    for s in events:
        mask = 0
        previous = -1
        stage_markers = []
        for n in range(markers):
            for e, i in _pairs_at_level(n, len(pool)):
                hit = settled.get((e, i))
                if hit is not None and hit[0] <= s and hit[1].bit_count() > i:
                    mask |= hit[1]
            x = _free_position(mask, previous + 1)
            stage_markers.append(x)
            previous = x
        for n, x in enumerate(stage_markers):
            if n >= len(current) or current[n] != x:
                trace.add(s, "set", n, x)
        current = stage_markers

    prefix = SetPrefix.from_members(current, current[-1] + 1)
    return prefix, trace


def replay_delta2(trace: ConstructionTrace) -> SetPrefix:
    markers: dict[int, int] = {}
    for rec in trace.records:
        if rec.rule == "set":
            n, x = rec.fields
            markers[n] = x
    values = [markers[n] for n in sorted(markers)]
    return SetPrefix.from_members(values, values[-1] + 1)


# ---------------------------------------------------------------------------
# Two-sided construction over the pair blocks I_p = {2p, 2p+1}


def pool_value_ceiling(pool: Sequence[Numbering], index_bound: int) -> int:
    """Largest element any pool numbering mentions up to the index bound."""
    top = 0
    for position, numbering in enumerate(pool):
        for i in range(position, index_bound + 1):
            value = numbering.value(i)
            if not value.is_empty:
                top = max(top, value.max_value())
    return top


def bci_run(
    pool: Sequence[Numbering], stages: int, fill_pairs: int | None = None
) -> tuple[SetPrefix, SetPrefix, ConstructionTrace]:
    """Two disjoint sets, each dodging every oversized pool value.

    Stage s = pair(e, i) acts only when i >= e and the e-th pool value at i
    has more than 4 f(i) + 3 elements; it then spoils that value for both
    sides by splitting two fresh pair blocks between them.  Unused pair
    blocks are finally split evens-to-R, odds-to-Q up to the fill horizon.
    """
    if stages < 1:
        raise ValueError("stage horizon must be positive")
    r_mask = q_mask = 0
    used_pairs: set[int] = set()
    trace = ConstructionTrace("bci", meta={"stages": stages, "pool_ids": [n.id for n in pool]})
    for s in range(stages):
        e, i = unpair(s)
        if e >= len(pool) or i < e:
            trace.add(s, "case1", e, i)
            continue
        value = pool[e].value(i)
        if len(value) <= 4 * pair_bound(i) + 3:
            trace.add(s, "case1", e, i)
            continue
        hits = [p for p in _pairs_hit(value) if p not in used_pairs]
        p_s, q_s = hits[0], hits[1]
        x = _least_in_pair(value, p_s)
        z = _least_in_pair(value, q_s)
        y = _partner(x)
        w = _partner(z)
        r_mask |= (1 << y) | (1 << z)
        q_mask |= (1 << x) | (1 << w)
        used_pairs.update((p_s, q_s))
        trace.add(s, "case2", e, i, p_s, q_s, x, y, z, w)

    if fill_pairs is None:
        fill_pairs = (max(used_pairs) + 1) if used_pairs else 1
    for p in range(fill_pairs):
        if p not in used_pairs:
            r_mask |= 1 << (2 * p)
            q_mask |= 1 << (2 * p + 1)
    trace.meta["fill_pairs"] = fill_pairs
    length = max(2 * fill_pairs, r_mask.bit_length(), q_mask.bit_length())
    return SetPrefix(r_mask, length), SetPrefix(q_mask, length), trace


def _pairs_hit(value: FiniteSet):
    # elements are sorted, so equal pair indices are adjacent
    out = []
    last = -1
    for x in value.elements:
        p = x // 2
        if p != last:
            out.append(p)
            last = p
    return out


def _least_in_pair(value: FiniteSet, p: int) -> int:
    if 2 * p in value:
        return 2 * p
    return 2 * p + 1


def _partner(x: int) -> int:
    return x ^ 1


def replay_bci(trace: ConstructionTrace) -> tuple[SetPrefix, SetPrefix]:
    r_mask = q_mask = 0
    used: set[int] = set()
    for rec in trace.records:
        if rec.rule == "case2":
            _, _, p_s, q_s, x, y, z, w = rec.fields
            r_mask |= (1 << y) | (1 << z)
            q_mask |= (1 << x) | (1 << w)
            used.update((p_s, q_s))
    fill_pairs = trace.meta["fill_pairs"]
    for p in range(fill_pairs):
        if p not in used:
            r_mask |= 1 << (2 * p)
            q_mask |= 1 << (2 * p + 1)
    length = max(2 * fill_pairs, r_mask.bit_length(), q_mask.bit_length())
    return SetPrefix(r_mask, length), SetPrefix(q_mask, length)


# ---------------------------------------------------------------------------
# Coding an arbitrary prefix into an immune-against-the-pool set


def choose_cofinal_positions(pool: Sequence[Numbering], count: int) -> list[int]:
    """Increasing p_n with both 2 p_n and 2 p_n + 1 avoiding the oversized
    pool values with indices up to n."""
    positions = []
    mask = 0
    p = 0
    for n in range(count):
        for e, i in _pairs_at_level(n, len(pool)):
            value = pool[e].value(i)
            if len(value) > i:
                mask |= value.code
        while (mask >> (2 * p)) & 3:
            p += 1
        positions.append(p)
        p += 1
    return positions


def cofinal_encode(pool: Sequence[Numbering], bits: str) -> tuple[SetPrefix, ConstructionTrace]:
    """Code the bit string into the avoided pair positions: bit n = 1 puts
    2 p_n into the set, bit n = 0 puts 2 p_n + 1."""
    if any(c not in "01" for c in bits):
        raise ValueError("bits must be over {0,1}")
    positions = choose_cofinal_positions(pool, len(bits))
    members = []
    trace = ConstructionTrace("cofinal", meta={"bits": bits, "pool_ids": [n.id for n in pool]})
    for n, (p, bit) in enumerate(zip(positions, bits)):
        member = 2 * p if bit == "1" else 2 * p + 1
        members.append(member)
        trace.add(n, "pick", p, member)
    length = (members[-1] + 1) if members else 0
    return SetPrefix.from_members(members, length), trace


def cofinal_decode(prefix: SetPrefix, expected_length: int | None = None) -> str:
    """Read the coded bits back off the member parities."""
    members = prefix.members()
    if expected_length is not None and len(members) < expected_length:
        raise TruncationError(f"prefix holds {len(members)} members, wanted {expected_length}")
    return "".join("1" if m % 2 == 0 else "0" for m in members)


def cofinal_carrier(pool: Sequence[Numbering], count: int) -> SetPrefix:
    """Both parities over the avoided positions (immune with modulus 2i+1)."""
    positions = choose_cofinal_positions(pool, count)
    members = [2 * p for p in positions] + [2 * p + 1 for p in positions]
    members.sort()
    return SetPrefix.from_members(members, members[-1] + 1 if members else 0)


def replay_cofinal(trace: ConstructionTrace) -> SetPrefix:
    members = [rec.fields[1] for rec in trace.records if rec.rule == "pick"]
    length = (members[-1] + 1) if members else 0
    return SetPrefix.from_members(members, length)


# ---------------------------------------------------------------------------
# Hyperimmune and canonically immune at once


def ci_hi_run(
    pool: Sequence[Numbering], fns: Sequence[int], stages: int
) -> tuple[SetPrefix, ConstructionTrace]:
    """Pick x_s above x_{s-1} and above f_s(s), avoiding every oversized
    pool value with both indices at most s.  Registered functions beyond
    the list are treated as zero (no growth constraint)."""
    if stages < 1:
        raise ValueError("stage horizon must be positive")
    trace = ConstructionTrace(
        "ci-hi", meta={"stages": stages, "pool_ids": [n.id for n in pool], "functions": list(fns)}
    )
    mask = 0
    previous = -1
    members = []
    for s in range(stages):
        for e, i in _pairs_at_level(s, len(pool)):
            value = pool[e].value(i)
            if len(value) > i:
                mask |= value.code
        bound = eval_total(fns[s], (s,)) if s < len(fns) else 0
        x = _free_position(mask, max(previous, bound) + 1)
        members.append(x)
        trace.add(s, "pick", x, bound)
        previous = x
    return SetPrefix.from_members(members, members[-1] + 1), trace


def replay_ci_hi(trace: ConstructionTrace) -> SetPrefix:
    members = [rec.fields[0] for rec in trace.records if rec.rule == "pick"]
    return SetPrefix.from_members(members, members[-1] + 1)


# ---------------------------------------------------------------------------
# Canonically immune but dominated on both sides


def ci_not_hi_run(
    pool: Sequence[Numbering], stages: int, fill_pairs: int | None = None
) -> tuple[SetPrefix, ConstructionTrace]:
    """One element from every pair block I_p, spoiling oversized values.

    Stage s = pair(e, i) with i >= e and the e-th value at i larger than
    2 f(i) withholds one element of that value from the set and inserts its
    pair partner; unused blocks contribute their even element, so both the
    set and its complement meet every block exactly once.
    """
    if stages < 1:
        raise ValueError("stage horizon must be positive")
    r_mask = 0
    used_pairs: set[int] = set()
    trace = ConstructionTrace("ci-not-hi", meta={"stages": stages, "pool_ids": [n.id for n in pool]})
    for s in range(stages):
        e, i = unpair(s)
        if e >= len(pool) or i < e:
            trace.add(s, "case1", e, i)
            continue
        value = pool[e].value(i)
        if len(value) <= 2 * pair_bound(i):
            trace.add(s, "case1", e, i)
            continue
        p_s = next(p for p in _pairs_hit(value) if p not in used_pairs)
        x = _least_in_pair(value, p_s)
        r_mask |= 1 << _partner(x)
        used_pairs.add(p_s)
        trace.add(s, "case2", e, i, p_s, x)

    if fill_pairs is None:
        fill_pairs = (max(used_pairs) + 1) if used_pairs else 1
    for p in range(fill_pairs):
        if p not in used_pairs:
            r_mask |= 1 << (2 * p)
    trace.meta["fill_pairs"] = fill_pairs
    return SetPrefix(r_mask, 2 * fill_pairs), trace


def replay_ci_not_hi(trace: ConstructionTrace) -> SetPrefix:
    r_mask = 0
    used: set[int] = set()
    for rec in trace.records:
        if rec.rule == "case2":
            _, _, p_s, x = rec.fields
            r_mask |= 1 << _partner(x)
            used.add(p_s)
    fill_pairs = trace.meta["fill_pairs"]
    for p in range(fill_pairs):
        if p not in used:
            r_mask |= 1 << (2 * p)
    return SetPrefix(r_mask, 2 * fill_pairs)


# ---------------------------------------------------------------------------
# Hyperimmune but refuted by a built-to-order numbering


def _h_block(f: int, n: int, previous_end: int) -> tuple[int, int]:
    """(start, end) of the n-th block for modulus f: min >= n, size f(2n)+1,
    consecutive and disjoint for a fixed f."""
    start = max(n, previous_end)
    return start, start + eval_total(f, (2 * n,)) + 1


def h_blocks(f: int, count: int) -> list[FiniteSet]:
    out = []
    end = 0
    for n in range(count):
        start, end = _h_block(f, n, end)
        out.append(FiniteSet(((1 << (end - start)) - 1) << start))
    return out


def h_block_at(f: int, n: int) -> FiniteSet:
    return h_blocks(f, n + 1)[n]


def h_even_rule_tree(f: int):
    """Total-tier rule tree for n -> code of the n-th block of modulus f."""
    from .machine import PrimRec, decode

    f_tree = decode(f)

    def f_at(t):
        return pg.comp(f_tree, t)

    # end recurrence: E(0) = f(0)+1; E(m+1) = max(m+1, E(m)) + f(2(m+1)) + 1
    base = pg.succ_(f_at(pg.c_(0)))
    idx = pg.succ_(pg.P0)
    step = pg.add_(pg.max_(idx, pg.P1), pg.succ_(f_at(pg.mul_(pg.c_(2), idx))))
    end_tree = PrimRec(base, step)

    end = pg.comp(end_tree, pg.P0)
    width = pg.succ_(f_at(pg.mul_(pg.c_(2), pg.P0)))
    return pg.interval_code_(pg.monus_(end, width), end)


@dataclass(frozen=True)
class HiNotCiResult:
    prefix: SetPrefix
    trace: ConstructionTrace
    target_index: int
    target_function: int
    witness_rule: int
    witness_positions: tuple[int, ...]


def hi_not_ci_run(fns: Sequence[int], pair_count: int, target_index: int = 0) -> HiNotCiResult:
    """Union of blocks chosen to outrun every listed function.

    The p-th selection, for p = pair(i, k), takes a block of the i-th
    function whose index exceeds f_i(s+1), where s counts the elements
    already placed; blocks are placed in increasing position order, so the
    block's minimum is the (s+1)-st element of the set, which therefore
    overtakes f_i at that position (and infinitely often in the limit
    reading).  The same blocks feed a numbering with D(2n) = block(n) of
    the target function, refuting that function as a modulus of immunity.
    Function indices beyond the list are treated as the zero function.
    """
    if pair_count < 1:
        raise ValueError("need at least one selection")
    trace = ConstructionTrace(
        "hi-not-ci",
        meta={"pair_count": pair_count, "functions": list(fns), "target_index": target_index},
    )
    mask = 0
    placed = 0
    chosen: dict[int, int] = {}
    for p in range(pair_count):
        fi, k = unpair(p)
        f = fns[fi] if fi < len(fns) else pg.zero_code()
        bound = eval_total(f, (placed + 1,))
        n = bound + 1
        top = mask.bit_length()
        while True:
            block_n = _materialized_block(f, n)
            if block_n.min_value() >= top:
                break
            n += 1
        assert mask & block_n.code == 0
        mask |= block_n.code
        if fi == target_index:
            chosen[n] = block_n.code
        trace.add(p, "select", fi, k, n, placed, bound, block_n.code)
        placed += len(block_n)

    target = fns[target_index]
    witness_rule = even_odd_rule_code(h_even_rule_tree(target))
    prefix = SetPrefix(mask, mask.bit_length())
    return HiNotCiResult(
        prefix=prefix,
        trace=trace,
        target_index=target_index,
        target_function=target,
        witness_rule=witness_rule,
        witness_positions=tuple(2 * n for n in sorted(chosen)),
    )


_BLOCK_CACHE: dict[tuple[int, int], FiniteSet] = {}


def _materialized_block(f: int, n: int) -> FiniteSet:
    key = (f, n)
    hit = _BLOCK_CACHE.get(key)
    if hit is None:
        hit = h_block_at(f, n)
        _BLOCK_CACHE[key] = hit
    return hit


def replay_hi_not_ci(trace: ConstructionTrace) -> SetPrefix:
    mask = 0
    for rec in trace.records:
        if rec.rule == "select":
            mask |= rec.fields[5]
    return SetPrefix(mask, mask.bit_length())


# ---------------------------------------------------------------------------
# Pumping oracle domains along string extensions

PUMP_FUEL_PER_BIT = 16


@dataclass(frozen=True)
class PumpResult:
    """Either the first witness extension in length-lex order, or an honest
    record that the bounded search ran out."""

    rho: str | None
    candidates_tried: int
    best_size: int

    @property
    def resolved(self) -> bool:
        return self.rho is not None


def pump_enumeration(sigma: str, e: int, target: int, max_candidates: int = 4096) -> PumpResult:
    """First extension rho of sigma (length-lex order) whose bounded oracle
    domain exceeds the target size, with per-candidate fuel
    PUMP_FUEL_PER_BIT * len(rho)."""
    tried = 0
    best = 0
    for extra in itertools.count(0):
        for suffix in itertools.product("01", repeat=extra):
            if tried >= max_candidates:
                return PumpResult(None, tried, best)
            rho = sigma + "".join(suffix)
            tried += 1
            size = len(we_bounded(e, PUMP_FUEL_PER_BIT * len(rho), rho))
            best = max(best, size)
            if size > target:
                return PumpResult(rho, tried, best)


def alpha_string(i: int) -> str:
    """The i-th binary string in length-lex order (empty string first)."""
    return bin(i + 1)[3:]


@dataclass(frozen=True)
class WitnessEntry:
    i: int
    n: int
    key: int
    target: int
    beta: str | None
    witness: FiniteSet | None

    @property
    def resolved(self) -> bool:
        return self.beta is not None


def build_2generic_witness(
    sigma: str,
    e: int,
    f: int,
    i_max: int,
    n_max: int,
    max_candidates: int = 4096,
) -> tuple[list[WitnessEntry], Numbering, ConstructionTrace]:
    """Pump the oracle domain along each branch sigma + alpha_i and collect
    witness sets H(i, n): the first f(2 pair(i,n)) + 1 elements enumerated
    into the pumped domain.  Unresolved pumps stay unresolved; their table
    entries are simply absent (never fabricated).  The resulting numbering
    has D(2 pair(i,n)) = H(i,n) and the standard numbering on odd indices.
    """
    entries = []
    table: dict[int, int] = {}
    trace = ConstructionTrace(
        "2generic-witness",
        meta={"sigma": sigma, "e": e, "f": f, "i_max": i_max, "n_max": n_max},
    )
    for i in range(i_max + 1):
        tau = sigma + alpha_string(i)
        for n in range(n_max + 1):
            key = pair(i, n)
            target = eval_total(f, (2 * key,))
            pump = pump_enumeration(tau, e, target, max_candidates)
            if not pump.resolved:
                entries.append(WitnessEntry(i, n, key, target, None, None))
                trace.add(key, "unresolved", i, n, target)
                continue
            rho = pump.rho
            order = we_enumeration(e, PUMP_FUEL_PER_BIT * len(rho), rho)
            first = [pos for _, pos in order[: target + 1]]
            witness = FiniteSet.from_elements(first)
            table[key] = witness.code
            beta = rho[len(tau):]
            entries.append(WitnessEntry(i, n, key, target, beta, witness))
            trace.add(key, "entry", i, n, target, witness.code)
    registry = Registry()
    numbering = registry.register(witness_rule_from_table(table), surjective=True, label="2generic-witness")
    return entries, numbering, trace


def replay_2generic(trace: ConstructionTrace) -> dict[int, int]:
    return {rec.stage: rec.fields[3] for rec in trace.records if rec.rule == "entry"}


def x_n_membership(sigma: str, numbering: Numbering, f: int, n: int, index_bound: int) -> bool:
    """Does some index i in [n, index_bound] witness the numbering against f
    inside sigma, i.e. D(i) inside the string and |D(i)| > f(i)?"""
    for i in range(n, index_bound + 1):
        value = numbering.value(i)
        if subset_of_string(value, sigma) and len(value) > eval_total(f, (i,)):
            return True
    return False


# ---------------------------------------------------------------------------
# Carving an effectively immune subset out of a given prefix


def effectivize_inside(
    prefix: SetPrefix, stages: int, budget: int, codes: Sequence[int] | None = None
) -> tuple[SetPrefix, ConstructionTrace]:
    """Run the classical effective-immunity construction inside the members.

    At each stage the least not-yet-acted index e at most the stage number
    whose bounded domain meets the members from position 2e onward acts
    once, removing the least such element.  At most one removal per index
    keeps at least half of every initial segment.  The e-th domain comes
    from codes[e]; by default index e is the raw code e itself (the same
    finite surrogate for a universal listing the marker construction uses).
    """
    members = prefix.members()
    if len(members) < 2 * stages:
        raise ValueError("prefix must hold at least 2 * stages members")
    if codes is None:
        codes = range(stages)
    member_mask = prefix.mask
    tail_masks = {}
    acted: set[int] = set()
    removed = 0
    trace = ConstructionTrace(
        "effectivize",
        meta={"stages": stages, "budget": budget, "base_mask": prefix.mask, "base_length": prefix.length},
    )
    domains: dict[int, int] = {}
    for s in range(stages):
        for e in range(min(s + 1, len(codes))):
            if e in acted:
                continue
            if e not in domains:
                domains[e] = we_bounded(codes[e], budget).code
            if 2 * e >= len(members):
                continue
            if 2 * e not in tail_masks:
                tail_masks[2 * e] = member_mask & ~((1 << members[2 * e]) - 1)
            hit = domains[e] & tail_masks[2 * e]
            if hit:
                y = (hit & -hit).bit_length() - 1
                removed |= 1 << y
                acted.add(e)
                trace.add(s, "act", e, y)
                break
    q_mask = prefix.mask & ~removed
    return SetPrefix(q_mask, prefix.length), trace


def replay_effectivize(trace: ConstructionTrace) -> SetPrefix:
    mask = trace.meta["base_mask"]
    for rec in trace.records:
        if rec.rule == "act":
            mask &= ~(1 << rec.fields[1])
    return SetPrefix(mask, trace.meta["base_length"])
