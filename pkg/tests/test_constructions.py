import pytest

from canimm import checkers as ck
from canimm import constructions as C
from canimm import numberings as nb
from canimm import programs as pg
from canimm.finitesets import FiniteSet, SetPrefix
from canimm.machine import encode, unpair, we_bounded


def _rule(tree):
    return encode(tree)


# ---------------------------------------------------------------- delta2


def test_delta2_empty_pool_markers_are_initial_segment():
    prefix, _ = C.delta2_prefix([], 100, 6)
    assert prefix.members() == (0, 1, 2, 3, 4, 5)


def test_delta2_hand_simulated_pool():
    # one rule: D(0) = {0,1} (oversized at 0), everything else empty
    rule = _rule(pg.mul_(pg.c_(3), pg.iszero_(pg.P0)))
    prefix, _ = C.delta2_prefix([rule], 2000, 2)
    assert prefix.members() == (2, 3)
    # adding D(1) = {5} must not move anything: one element is within bound 1
    rule2 = _rule(pg.add_(pg.mul_(pg.c_(3), pg.iszero_(pg.P0)), pg.mul_(pg.c_(32), pg.eq_(pg.P0, pg.c_(1)))))
    prefix2, _ = C.delta2_prefix([rule2], 2000, 2)
    assert prefix2.members() == (2, 3)


def test_delta2_markers_move_when_slow_code_settles():
    # a partial-tier rule that burns ~200 steps searching before it reveals
    # the constant value {0, 1} at every index
    from canimm.machine import Mu

    slow = _rule(pg.comp(pg.c_(3), Mu(pg.monus_(pg.c_(60), pg.P0))))
    fast_prefix, _ = C.delta2_prefix([slow], 10, 2)
    assert fast_prefix.members() == (0, 1)  # not settled yet at 10 stages
    settled_prefix, trace = C.delta2_prefix([slow], 5000, 2)
    assert settled_prefix.members() == (2, 3)
    moved = [rec for rec in trace.records if rec.rule == "set"]
    assert len(moved) >= 4  # both markers recorded before and after the event
    assert trace.meta["unsettled"] == []


def test_delta2_trace_replays_bitwise(pool):
    prefix, trace = C.delta2_prefix(pool.codes(), 3000, 24)
    assert C.replay_delta2(trace).mask == prefix.mask
    again, _ = C.delta2_prefix(pool.codes(), 3000, 24)
    assert again.mask == prefix.mask


def test_delta2_unsettled_entries_are_reported():
    prefix, trace = C.delta2_prefix([pg.diverge_code()], 50, 3)
    assert trace.meta["unsettled"] == [(0, 0), (0, 1), (0, 2)]
    assert prefix.members() == (0, 1, 2)


# ---------------------------------------------------------------- bci


@pytest.fixture(scope="module")
def bci_big_pool():
    reg = nb.Registry()
    reg.register(_rule(pg.c_(255)), label="const-0..7")
    return reg


def test_bci_case2_hand_simulation(bci_big_pool):
    r, q, trace = C.bci_run(list(bci_big_pool), 1, fill_pairs=4)
    rec = next(rec for rec in trace.records if rec.rule == "case2")
    # least fresh pair, then least elements: p=0, q=1, x=0, y=1, z=2, w=3
    assert rec.fields == (0, 0, 0, 1, 0, 1, 2, 3)
    assert set(r.members()) == {1, 2, 4, 6}
    assert set(q.members()) == {0, 3, 5, 7}


def test_bci_stage_with_i_below_e_is_case1(pool):
    _, _, trace = C.bci_run(list(pool), 2, fill_pairs=2)
    stage1 = next(rec for rec in trace.records if rec.stage == 1)
    e, i = unpair(1)
    assert (e, i) == (1, 0)
    assert stage1.rule == "case1"


def _bci_invariants(trace):
    r_mask = q_mask = union = 0
    pairs = set()
    for rec in trace.records:
        if rec.rule == "case2":
            _, _, p_s, q_s, x, y, z, w = rec.fields
            assert {x, y} == {2 * p_s, 2 * p_s + 1}
            assert {z, w} == {2 * q_s, 2 * q_s + 1}
            r_mask |= (1 << y) | (1 << z)
            q_mask |= (1 << x) | (1 << w)
            pairs.update((p_s, q_s))
            union |= (0b11 << (2 * p_s)) | (0b11 << (2 * q_s))
        s = rec.stage
        assert len(pairs) <= 2 * (s + 1)
        assert r_mask & q_mask == 0
        assert r_mask | q_mask == union


def test_bci_per_stage_invariants(pool):
    _, _, trace = C.bci_run(list(pool), 400, fill_pairs=None)
    _bci_invariants(trace)


def test_bci_replay_and_partition(pool):
    r, q, trace = C.bci_run(list(pool), 300, fill_pairs=600)
    r2, q2 = C.replay_bci(trace)
    assert (r2.mask, q2.mask) == (r.mask, q.mask)
    assert r.mask & q.mask == 0
    assert r.mask | q.mask == (1 << 1200) - 1  # R and Q partition the horizon


# ---------------------------------------------------------------- cofinal


def test_cofinal_empty_pool_parity_coding():
    prefix, _ = C.cofinal_encode([], "1010")
    assert prefix.members() == (0, 3, 4, 7)
    assert C.cofinal_decode(prefix) == "1010"


def test_cofinal_roundtrip_against_pool(pool):
    import random

    rng = random.Random(7)
    for _ in range(20):
        bits = "".join(rng.choice("01") for _ in range(48))
        encoded, trace = C.cofinal_encode(list(pool), bits)
        assert C.cofinal_decode(encoded) == bits
        assert C.replay_cofinal(trace).mask == encoded.mask


def test_cofinal_positions_avoid_oversized_values(pool):
    positions = C.choose_cofinal_positions(list(pool), 32)
    assert positions == sorted(set(positions))
    forbidden = 0
    for n, p in enumerate(positions):
        for e in range(min(n + 1, len(pool))):
            for i in range(n + 1):
                value = pool[e].value(i)
                if len(value) > i:
                    forbidden |= value.code
        assert not (forbidden >> (2 * p)) & 3


def test_cofinal_decode_truncation_signal():
    prefix, _ = C.cofinal_encode([], "111")
    with pytest.raises(C.TruncationError):
        C.cofinal_decode(prefix, expected_length=4)
    assert C.cofinal_decode(prefix, expected_length=3) == "111"


def test_cofinal_carrier_immune_with_linear_modulus(pool):
    carrier = C.cofinal_carrier(list(pool), 40)
    h = encode(pg.succ_(pg.mul_(pg.c_(2), pg.P0)))  # 2i + 1
    verdict = ck.check_canonical_immunity(carrier, h, list(pool), 24)
    assert verdict.passed


# ---------------------------------------------------------------- ci-hi


def test_ci_hi_first_pick_clears_pool_and_bound():
    reg = nb.Registry()
    reg.register(_rule(pg.c_(3)), label="d0")  # D(0) = {0, 1}
    prefix, _ = C.ci_hi_run(list(reg), [pg.identity_code()], 1)
    assert prefix.members() == (2,)


def test_ci_hi_zero_functions_shift_by_one():
    prefix, _ = C.ci_hi_run([], [pg.zero_code()] * 4, 6)
    assert prefix.members() == (1, 2, 3, 4, 5, 6)


def test_ci_hi_outgrows_each_function_at_its_stage(pool):
    fns = [pg.identity_code(), pg.zero_code(), pg.succ_code(), pg.double_code()]
    prefix, trace = C.ci_hi_run(list(pool), fns, 24)
    members = prefix.members()
    for rec in trace.records:
        x, bound = rec.fields
        assert members[rec.stage] == x > bound
    assert C.replay_ci_hi(trace).mask == prefix.mask


# ---------------------------------------------------------------- ci-not-hi


def test_ci_not_hi_one_per_pair_and_bounded(pool):
    prefix, trace = C.ci_not_hi_run(list(pool), 400, fill_pairs=800)
    for p in range(800):
        assert (prefix.mask >> (2 * p)) & 0b11 in (0b01, 0b10)
    members = prefix.members()
    complement = prefix.complement_members()
    for k in range(1, len(members) + 1):
        assert members[k - 1] <= 2 * k
    for k in range(1, len(complement) + 1):
        assert complement[k - 1] <= 2 * k
    assert C.replay_ci_not_hi(trace).mask == prefix.mask


def test_ci_not_hi_case2_withholds_an_element(pool):
    _, trace = C.ci_not_hi_run(list(pool), 400, fill_pairs=800)
    case2 = [rec for rec in trace.records if rec.rule == "case2"]
    assert case2  # the wide-interval rule trips the threshold
    for rec in case2:
        e, i, p_s, x = rec.fields
        value = pool[e].value(i)
        assert x in value and x // 2 == p_s
        assert len(value) > 2 * C.pair_bound(i)


# ---------------------------------------------------------------- hi-not-ci


@pytest.fixture(scope="module")
def hinotci():
    fns = [pg.identity_code(), pg.zero_code(), pg.succ_code(), pg.double_code()]
    return C.hi_not_ci_run(fns, 6, target_index=0)


def test_hi_not_ci_block_properties():
    f = pg.identity_code()
    blocks = C.h_blocks(f, 12)
    union = 0
    for n, block in enumerate(blocks):
        assert len(block) == 2 * n + 1  # exceeds f(2n) = 2n
        assert block.min_value() >= n
        assert union & block.code == 0
        union |= block.code


def test_hi_not_ci_rule_matches_python_blocks():
    f = pg.succ_code()
    rule = nb.even_odd_rule_code(C.h_even_rule_tree(f))
    reg = nb.Registry()
    numbering = reg.register(rule, surjective=True)
    for n in range(10):
        assert numbering.value(2 * n).code == C.h_block_at(f, n).code
        assert numbering.value(2 * n + 1).code == n


def test_hi_not_ci_selections_outrun_target(hinotci):
    members = hinotci.prefix.members()
    for rec in hinotci.trace.records:
        fi, k, n, placed, bound, block_code = rec.fields
        block = FiniteSet(block_code)
        assert members[placed] == block.min_value()
        assert members[placed] >= n > bound
    assert C.replay_hi_not_ci(hinotci.trace).mask == hinotci.prefix.mask


def test_hi_not_ci_witness_numbering_refutes_target(hinotci):
    reg = nb.Registry()
    witness = reg.register(hinotci.witness_rule, surjective=True)
    verdict = ck.check_canonical_immunity(
        hinotci.prefix,
        hinotci.target_function,
        [witness],
        index_bound=max(hinotci.witness_positions),
        k_map={witness.id: 0},
    )
    assert verdict.failed
    hit = {i for (_, i, _, _) in verdict.violations}
    assert set(hinotci.witness_positions) <= hit
    assert len(hinotci.witness_positions) >= 3


# ---------------------------------------------------------------- pumping


def test_pump_finds_first_length_lex_witness():
    ones = pg.enumerate_oracle_ones_code()
    assert C.pump_enumeration("", ones, 2).rho == "111"
    assert C.pump_enumeration("1", ones, 0).rho == "1"


def test_pump_unresolved_is_a_value():
    result = C.pump_enumeration("0", pg.diverge_code(), 0, max_candidates=50)
    assert not result.resolved
    assert result.candidates_tried == 50
    assert result.best_size == 0


def test_alpha_enumeration_is_length_lex():
    strings = [C.alpha_string(i) for i in range(7)]
    assert strings == ["", "0", "1", "00", "01", "10", "11"]


def test_2generic_witness_postconditions():
    ones = pg.enumerate_oracle_ones_code()
    entries, numbering, trace = C.build_2generic_witness("", ones, pg.zero_code(), 2, 2)
    assert len(entries) == 9 and all(e.resolved for e in entries)
    for entry in entries:
        assert len(entry.witness) == entry.target + 1  # strictly beats the target
        rho = C.alpha_string(entry.i) + entry.beta
        domain = we_bounded(ones, C.PUMP_FUEL_PER_BIT * len(rho), rho)
        assert entry.witness.issubset_mask(domain.code)
        assert numbering.value(2 * entry.key).code == entry.witness.code
    assert C.replay_2generic(trace) == {e.key: e.witness.code for e in entries}


def test_2generic_witness_propagates_unresolved():
    entries, numbering, _ = C.build_2generic_witness("", pg.diverge_code(), pg.zero_code(), 1, 1, max_candidates=20)
    assert all(not e.resolved for e in entries)
    assert all(numbering.value(2 * e.key).is_empty for e in entries)


# ---------------------------------------------------------------- X_n membership


def test_x_n_membership_examples(pool):
    adv = pool[4]
    identity = pg.identity_code()
    assert not C.x_n_membership("0" * 64, adv, identity, 0, 12)
    block = adv.value(7)
    sigma = "".join("1" if i in block else "0" for i in range(block.max_value() + 1))
    assert C.x_n_membership(sigma, adv, identity, 0, 12)
    assert C.x_n_membership(sigma, adv, identity, 7, 7)
    assert not C.x_n_membership(sigma, adv, identity, 8, 12)
    assert not C.x_n_membership(sigma, adv, identity, 5, 3)  # empty index range


# ---------------------------------------------------------------- effectivize


def test_effectivize_no_removals_when_domains_are_empty():
    base = SetPrefix.from_members(range(40), 40)
    q, _ = C.effectivize_inside(base, 8, 16)  # tiny budget: raw codes never settle
    assert q.mask == base.mask


def test_effectivize_removes_minimum_of_crafted_domain():
    # explicit code pool: index 0 diverges everywhere, index 1 has domain {5}
    codes = [pg.diverge_code(), pg.domain_program([5])]
    base = SetPrefix.from_members(range(12), 12)
    q, trace = C.effectivize_inside(base, 6, 600, codes=codes)
    acts = {rec.fields[0]: rec.fields[1] for rec in trace.records if rec.rule == "act"}
    assert acts == {1: 5}
    assert 5 not in q.members()
    assert C.replay_effectivize(trace).mask == q.mask


def test_effectivize_density_and_one_act_per_index():
    base = SetPrefix.from_members(range(160), 160)
    q, trace = C.effectivize_inside(base, 80, 256)
    acted = [rec.fields[0] for rec in trace.records if rec.rule == "act"]
    assert len(acted) == len(set(acted))
    members = base.members()
    kept = set(q.members())
    for n in range(len(members)):
        assert 2 * sum(1 for m in members[: n + 1] if m in kept) >= n


def test_effectivize_requires_enough_members():
    with pytest.raises(ValueError):
        C.effectivize_inside(SetPrefix.from_members(range(9), 9), 5, 64)
