"""Computable Mathias conditions, dense-family transformers, generic builder.

A condition is a finite stem plus an infinite reservoir.  Reservoirs are
represented by total-tier programs enumerating them in strictly increasing
order, which makes infinitude structural (the characteristic-function
coding would leave it a two-quantifier question; a converter from that
coding is provided and requires an explicit scan bound as its infinitude
witness).  Each dense family of conditions is realized as a deterministic
condition-transformer: meeting the family means applying its transformer,
and every transformer's output extends its input under the three-clause
extension order, verified on enumerations truncated at a horizon.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from . import programs as pg
from . import schnorr
from .finitesets import FiniteSet, SetPrefix, code_of
from .machine import (
    decode,
    encode,
    eval_total,
    fixed_point,
    is_total_tier,
    smn,
    we_bounded,
    we_enumeration,
    NotTotalTierError,
)
from .numberings import Numbering
from .constructions import ConstructionTrace


class ExtensionOrderError(RuntimeError):
    """A schedule step produced a condition that does not extend its input."""


_ENUM_VALUES: dict[int, list[int]] = {}


@dataclass(frozen=True)
class ComputableSet:
    """Infinite computable set given by a strictly increasing enumerator."""

    enumerator: int

    def __post_init__(self):
        if not is_total_tier(self.enumerator):
            raise NotTotalTierError("reservoir enumerators must be total-tier")

    def values(self, count: int) -> list[int]:
        cache = _ENUM_VALUES.setdefault(self.enumerator, [])
        while len(cache) < count:
            cache.append(eval_total(self.enumerator, (len(cache),)))
        return cache[:count]

    def value(self, n: int) -> int:
        return self.values(n + 1)[n]

    def check_increasing(self, horizon: int = 16) -> None:
        vals = self.values(horizon + 1)
        for a, b in zip(vals, vals[1:]):
            if b <= a:
                raise ValueError(f"enumerator {self.enumerator} not strictly increasing at {a}")

    def first_index_with_value_above(self, x: int) -> int:
        idx = 0
        while self.value(idx) <= x:
            idx += 1
        return idx

    @classmethod
    def naturals(cls) -> "ComputableSet":
        return cls(pg.identity_code())

    @classmethod
    def evens(cls) -> "ComputableSet":
        return cls(encode(pg.mul_(pg.c_(2), pg.P0)))

    @classmethod
    def odds(cls) -> "ComputableSet":
        return cls(encode(pg.succ_(pg.mul_(pg.c_(2), pg.P0))))

    def shifted(self, k: int) -> "ComputableSet":
        if k == 0:
            return self
        tree = pg.comp(decode(self.enumerator), pg.add_(pg.P0, pg.c_(k)))
        return ComputableSet(encode(tree))

    def with_table_prefix(self, values: Sequence[int], tail_index: int) -> "ComputableSet":
        """Enumerator taking the given values first, then this enumerator
        from tail_index on.  The caller guarantees strict increase across
        the seam."""
        count = len(values)
        table = pg.packed_select_(list(values), pg.P0)
        past = pg.le_(pg.c_(count), pg.P0)
        tail_at = pg.add_(pg.monus_(pg.P0, pg.c_(count)), pg.c_(tail_index))
        tail = pg.comp(decode(self.enumerator), tail_at)
        tree = pg.add_(pg.mul_(pg.monus_(pg.c_(1), past), table), pg.mul_(past, tail))
        return ComputableSet(encode(tree))


def computable_set_from_characteristic(chi: int, scan_bound: int, count: int) -> ComputableSet:
    """Convert a 0/1-valued total program into an enumerator-backed set.

    scan_bound is the explicit infinitude witness: the characteristic
    program must show at least `count` ones below it.  The result is only
    trustworthy for the first `count` positions; past them it continues
    arithmetically above the scanned region.
    """
    if not is_total_tier(chi):
        raise NotTotalTierError("characteristic programs must be total-tier")
    ones = [n for n in range(scan_bound) if eval_total(chi, (n,)) == 1]
    if len(ones) < count:
        raise ValueError(f"only {len(ones)} ones below {scan_bound}, wanted {count}")
    prefix = ones[:count]
    tail_tree = pg.add_(pg.monus_(pg.P0, pg.c_(count)), pg.c_(prefix[-1] + 1))
    table = pg.packed_select_(prefix, pg.P0)
    past = pg.le_(pg.c_(count), pg.P0)
    tree = pg.add_(pg.mul_(pg.monus_(pg.c_(1), past), table), pg.mul_(past, tail_tree))
    return ComputableSet(encode(tree))


@dataclass(frozen=True)
class Condition:
    """Mathias condition [a, A]: finite stem below an infinite reservoir."""

    stem: FiniteSet
    reservoir: ComputableSet

    def __post_init__(self):
        if not self.stem.is_empty and self.stem.max_value() >= self.reservoir.value(0):
            raise ValueError("stem must lie strictly below the reservoir")

    @classmethod
    def empty(cls, reservoir: ComputableSet | None = None) -> "Condition":
        return cls(FiniteSet(0), reservoir or ComputableSet.naturals())

    def stem_size(self) -> int:
        return len(self.stem)

    def prefix(self) -> SetPrefix:
        members = self.stem.elements
        length = (members[-1] + 1) if members else 0
        return SetPrefix(self.stem.code, length)


def extends(child: Condition, parent: Condition, horizon: int = 1000) -> bool:
    """Three-clause extension order, reservoir clauses verified to horizon.

    Checks stem containment, that the new stem material comes from the
    parent reservoir, and that the first `horizon` child reservoir values
    all lie in the parent reservoir.
    """
    if parent.stem.code & ~child.stem.code:
        return False
    fresh = child.stem.code & ~parent.stem.code
    if fresh and not _values_inside(FiniteSet(fresh).elements, parent.reservoir):
        return False
    return _values_inside(child.reservoir.values(horizon), parent.reservoir)


def _values_inside(values, reservoir: ComputableSet) -> bool:
    idx = 0
    for v in values:
        while reservoir.value(idx) < v:
            idx += 1
        if reservoir.value(idx) != v:
            return False
    return True


# ---------------------------------------------------------------------------
# Dense-family transformers


def meet_size(cond: Condition, n: int) -> Condition:
    """Grow the stem to at least n elements by promoting least reservoir
    elements; a no-op when the stem is already big enough."""
    need = n - cond.stem_size()
    if need <= 0:
        return cond
    promoted = cond.reservoir.values(need)
    stem = FiniteSet(cond.stem.code | code_of(promoted))
    return Condition(stem, cond.reservoir.shifted(need))


@dataclass(frozen=True)
class ThinCertificate:
    """Finite-scale record that a thinning output realizes the size-bounding
    family for its numbering on [start, bound]: any value of the numbering
    there that fits inside visible_mask has at most its index many elements."""

    numbering_id: int
    start: int
    bound: int
    visible_mask: int
    ceiling: int

    def holds_for(self, numbering: Numbering) -> bool:
        for i in range(self.start, self.bound + 1):
            value = numbering.value(i)
            if value.issubset_mask(self.visible_mask) and len(value) > i:
                return False
        return True


def thin_for_numbering(cond: Condition, numbering: Numbering, count: int) -> tuple[Condition, ThinCertificate]:
    """Thin the reservoir so the numbering cannot fit oversized values.

    Walking the reservoir enumeration, the i-th kept element avoids every
    numbering value with index from the stem size up to i, so a value with
    index in [stem size, stem size + count] contained in the output can
    only use the stem and earlier kept elements: at most index many points.
    The unmaterialized tail is pushed above everything those values mention.
    """
    base = cond.stem_size()
    bound = base + count
    avoid = 0
    ceiling = 0
    for i in range(base, bound + 1):
        value = numbering.value(i)
        if not value.is_empty:
            ceiling = max(ceiling, value.max_value())
    kept: list[int] = []
    idx = 0
    union = numbering.value(base).code
    for i in range(base + 1, bound + 1):
        while True:
            x = cond.reservoir.value(idx)
            if (union >> x) & 1 == 0:
                break
            idx += 1
        kept.append(x)
        idx += 1
        union |= numbering.value(i).code
    tail_index = cond.reservoir.first_index_with_value_above(max(ceiling, kept[-1] if kept else 0))
    thinned = cond.reservoir.with_table_prefix(kept, tail_index)
    cert = ThinCertificate(
        numbering_id=numbering.id,
        start=base,
        bound=bound,
        visible_mask=cond.stem.code | code_of(kept),
        ceiling=ceiling,
    )
    return Condition(cond.stem, thinned), cert


@dataclass(frozen=True)
class AvoidanceRecord:
    missed_blocks: tuple[int, ...]
    kept_values: tuple[int, ...]


def meet_avoidance(cond: Condition, count: int) -> tuple[Condition, AvoidanceRecord]:
    """Thin the reservoir to dodge `count` of the consecutive blocks.

    Greedy: the next kept element is the least reservoir element above the
    current missed block, and the next missed block is the least one lying
    entirely above that element, so kept elements and missed blocks
    interleave.  The unmaterialized tail continues above the last kept
    element, hence above every missed block.
    """
    if count == 0:
        return cond, AvoidanceRecord((), ())
    top = cond.stem.max_value() if not cond.stem.is_empty else -1
    block_index = 1
    while schnorr.block(block_index).min_value() <= top:
        block_index += 1
    missed: list[int] = []
    kept: list[int] = []
    idx = 0
    for _ in range(count):
        missed.append(block_index)
        block_top = schnorr.block(block_index).max_value()
        while cond.reservoir.value(idx) <= block_top:
            idx += 1
        x = cond.reservoir.value(idx)
        kept.append(x)
        idx += 1
        while schnorr.block(block_index).min_value() <= x:
            block_index += 1
    thinned = cond.reservoir.with_table_prefix(kept, idx)
    return Condition(cond.stem, thinned), AvoidanceRecord(tuple(missed), tuple(kept))


@dataclass(frozen=True)
class MeetOutcome:
    """Met(condition, clause) or an honest Unresolved with the evidence."""

    condition: Condition | None
    clause: str | None
    evidence: dict

    @property
    def met(self) -> bool:
        return self.condition is not None


def _stem_string(stem_code: int) -> str:
    return FiniteSet(stem_code).characteristic_string()


def meet_D_eh(cond: Condition, e: int, h: int, budget: int, max_prefix: int = 16, max_rounds: int = 4) -> MeetOutcome:
    """Decide the effective-immunity dichotomy family for (e, h) at desk scale.

    Searches finite extensions b of the stem inside the reservoir for growth
    of the bounded oracle domain of e under the string of b.  Once the
    domain can be pumped past the needed size, a constant transformer built
    with smn freezes its first elements as a plain domain, the recursion
    theorem provides the self-referential index j, and the output condition
    commits to b with the reservoir moved above it; both halves of the
    first clause (the j-th domain sits inside the oracle domain and beats
    h(j)) are then re-verified by enumeration.  If no growth shows up
    within the budget, the largest domain size seen is returned as evidence
    toward the bounded clause.
    """
    stem_elements = list(cond.stem.elements)
    best_size = 0
    sizes: list[int] = []

    def oracle_domain(b_elements) -> FiniteSet:
        chi = _stem_string(code_of(b_elements))
        return we_bounded(e, budget, chi)

    def enumerated(b_elements):
        chi = _stem_string(code_of(b_elements))
        return [n for _, n in we_enumeration(e, budget, chi)]

    prefix_sizes = []
    for t in range(max_prefix + 1):
        b = stem_elements + cond.reservoir.values(t)
        size = len(oracle_domain(b))
        prefix_sizes.append(size)
        best_size = max(best_size, size)

    need = 1
    for _ in range(max_rounds):
        target_t = next((t for t, s in enumerate(prefix_sizes) if s >= need), None)
        if target_t is None:
            break
        used = cond.reservoir.values(target_t)
        b_elements = stem_elements + used
        first = enumerated(b_elements)[:need]
        rho_set = code_of(used)
        g = smn(pg.identity_code(), [pg.domain_program(first)])
        rho = smn(pg.identity_code(), [rho_set])
        fp = fixed_point(g)
        h_at_j = eval_total(h, (fp.code,))
        if need <= h_at_j:
            need = h_at_j + 1
            continue
        inner = 64 * (max(first, default=0) + len(first) + 2)
        w_j = we_bounded(fp.code, fp.prefix_cost + inner)
        if w_j.elements != tuple(sorted(first)):
            break
        if not w_j.issubset_mask(oracle_domain(b_elements).code):
            break
        tail_index = target_t
        if used:
            tail_index = cond.reservoir.first_index_with_value_above(max(used))
        met = Condition(FiniteSet(code_of(b_elements)), cond.reservoir.shifted(tail_index))
        return MeetOutcome(
            met,
            "clause1",
            {
                "j": fp.code,
                "g": g,
                "rho": rho,
                "witness_domain": w_j.code,
                "h_at_j": h_at_j,
                "oracle_budget": budget,
                "inner_budget": fp.prefix_cost + inner,
            },
        )
    return MeetOutcome(None, None, {"best_size": best_size, "prefix_sizes": prefix_sizes})


# ---------------------------------------------------------------------------
# Generic builder


@dataclass(frozen=True)
class ScheduleStep:
    name: str
    apply: Callable[[Condition], tuple[Condition, object]]


def size_step(n: int) -> ScheduleStep:
    return ScheduleStep(f"size-{n}", lambda c: (meet_size(c, n), None))


def thin_step(numbering: Numbering, count: int) -> ScheduleStep:
    return ScheduleStep(f"thin-D{numbering.id}", lambda c: thin_for_numbering(c, numbering, count))


def avoidance_step(count: int) -> ScheduleStep:
    return ScheduleStep(f"avoid-{count}", lambda c: meet_avoidance(c, count))


@dataclass
class GenericRun:
    chain: list[tuple[str, Condition]]
    prefix: SetPrefix
    thin_certificates: list[ThinCertificate]
    avoidance: AvoidanceRecord | None
    trace: ConstructionTrace


def build_generic(
    start: Condition,
    schedule: Sequence[ScheduleStep],
    *,
    horizon: int = 1000,
    grow: bool = True,
) -> GenericRun:
    """Fold the schedule into a condition chain and emit the stem reached.

    After each scheduled step the stem is grown to at least the number of
    steps taken so far (the size families make generics infinite; here they
    keep the stem moving).  Every link of the chain is checked against the
    extension order at the horizon and a violation aborts with the step
    named.  The final stem is the generic's finite approximation.
    """
    chain: list[tuple[str, Condition]] = [("start", start)]
    certificates: list[ThinCertificate] = []
    avoidance: AvoidanceRecord | None = None
    trace = ConstructionTrace("generic", meta={"horizon": horizon, "steps": [s.name for s in schedule]})
    current = start
    for number, step in enumerate(schedule, start=1):
        result, info = step.apply(current)
        if not extends(result, current, horizon):
            raise ExtensionOrderError(f"step {step.name} violated the extension order")
        chain.append((step.name, result))
        trace.add(number, "condition", step.name, result.stem.code, result.reservoir.enumerator)
        current = result
        if isinstance(info, ThinCertificate):
            certificates.append(info)
        elif isinstance(info, AvoidanceRecord):
            avoidance = info
        if grow:
            grown = meet_size(current, number)
            if grown is not current:
                if not extends(grown, current, horizon):
                    raise ExtensionOrderError(f"growth after {step.name} violated the extension order")
                chain.append((f"grow-{number}", grown))
                trace.add(number, "condition", f"grow-{number}", grown.stem.code, grown.reservoir.enumerator)
                current = grown
    prefix = current.prefix()
    trace.meta["stem"] = current.stem.code
    return GenericRun(chain, prefix, certificates, avoidance, trace)


def default_schedule(pool: Sequence[Numbering], thin_count: int, avoid_count: int, stem_target: int) -> list[ScheduleStep]:
    """Thin every pool numbering, dodge blocks, then grow the stem."""
    steps: list[ScheduleStep] = [thin_step(n, thin_count) for n in pool]
    if avoid_count:
        steps.append(avoidance_step(avoid_count))
    steps.append(size_step(stem_target))
    return steps
