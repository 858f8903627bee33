import pytest

from canimm import mathias as mt
from canimm import numberings as nb
from canimm import programs as pg
from canimm.finitesets import FiniteSet, code_of
from canimm.machine import encode, we_bounded


def _set(*elements):
    return FiniteSet(code_of(elements))


def odds_above(k):
    # 2n + k for odd k
    return mt.ComputableSet(encode(pg.add_(pg.mul_(pg.c_(2), pg.P0), pg.c_(k))))


def test_reservoir_constructors_are_increasing():
    for cs in (mt.ComputableSet.naturals(), mt.ComputableSet.evens(), mt.ComputableSet.odds()):
        cs.check_increasing(64)


def test_reservoir_rejects_partial_enumerators():
    with pytest.raises(mt.NotTotalTierError):
        mt.ComputableSet(pg.diverge_code())


def test_reservoir_increase_check_catches_constants():
    with pytest.raises(ValueError):
        mt.ComputableSet(pg.zero_code()).check_increasing(4)


def test_condition_requires_stem_below_reservoir():
    with pytest.raises(ValueError):
        mt.Condition(_set(4), mt.ComputableSet.evens())


def test_extends_examples():
    parent = mt.Condition.empty(mt.ComputableSet.evens())
    assert mt.extends(parent, parent, 100)
    child = mt.Condition(_set(0, 2), mt.ComputableSet.evens().shifted(2))
    assert mt.extends(child, parent, 100)
    stray = mt.Condition(_set(1), mt.ComputableSet.evens().shifted(2))
    assert not mt.extends(stray, parent, 100)
    widened = mt.Condition(_set(0), mt.ComputableSet.naturals().shifted(1))
    assert not mt.extends(widened, parent, 50)  # reservoir leaves the parent


def test_meet_size_examples():
    whole = mt.Condition.empty()
    grown = mt.meet_size(whole, 2)
    assert grown.stem.elements == (0, 1)
    assert grown.reservoir.values(3) == [2, 3, 4]
    assert mt.meet_size(grown, 1) is grown
    odd = mt.Condition(_set(5), odds_above(7))
    bigger = mt.meet_size(odd, 3)
    assert bigger.stem.elements == (5, 7, 9)
    assert bigger.reservoir.values(2) == [11, 13]
    assert mt.extends(bigger, odd, 100)


def test_thin_singleton_rule_drops_zero():
    reg = nb.Registry()
    singleton = reg.register(nb.singleton_rule_code(), label="singleton")
    cond, cert = mt.thin_for_numbering(mt.Condition.empty(), singleton, 10)
    assert cond.reservoir.values(10) == list(range(1, 11))
    assert mt.extends(cond, mt.Condition.empty(), 200)
    assert cert.start == 0 and cert.bound == 10
    assert cert.holds_for(singleton)


def test_thin_certificates_for_every_pool_numbering(pool):
    current = mt.Condition.empty()
    for numbering in pool:
        current, cert = mt.thin_for_numbering(current, numbering, 12)
        assert mt.extends(current, mt.Condition.empty(), 400)
        assert cert.holds_for(numbering)
        # the implication is not vacuous: indices whose value escapes the
        # visible mask exist, and indices fully inside obey the size bound
        for i in range(cert.start, cert.bound + 1):
            value = numbering.value(i)
            if value.issubset_mask(cert.visible_mask):
                assert len(value) <= i


def test_thin_tail_clears_checked_values(pool):
    big = pool[3]
    cond, cert = mt.thin_for_numbering(mt.Condition.empty(), big, 8)
    tail_values = cond.reservoir.values(9)
    assert tail_values[-1] > cert.ceiling


def test_avoidance_example_blocks():
    cond, record = mt.meet_avoidance(mt.Condition.empty(), 3)
    assert record.kept_values == (1, 6, 15)
    assert record.missed_blocks == (1, 3, 5)
    assert cond.reservoir.values(4) == [1, 6, 15, 16]
    unchanged, empty_record = mt.meet_avoidance(mt.Condition.empty(), 0)
    assert empty_record.missed_blocks == () and unchanged.stem.is_empty


def test_avoidance_respects_stem_and_interleaves():
    from canimm import schnorr

    stem = _set(0, 4)
    cond = mt.Condition(stem, mt.ComputableSet.naturals().shifted(5))
    thinned, record = mt.meet_avoidance(cond, 4)
    assert list(record.missed_blocks) == sorted(set(record.missed_blocks))
    for index, kept in zip(record.missed_blocks, record.kept_values):
        block = schnorr.block(index)
        assert block.min_value() > stem.max_value()
        assert kept > block.max_value()
    # every block on record is disjoint from stem and kept values alike
    visible = stem.code | code_of(record.kept_values)
    for index in record.missed_blocks:
        assert schnorr.block(index).code & visible == 0


def test_meet_d_eh_met_on_oracle_ones():
    outcome = mt.meet_D_eh(mt.Condition.empty(), pg.enumerate_oracle_ones_code(), pg.zero_code(), budget=256)
    assert outcome.met and outcome.clause == "clause1"
    witness = FiniteSet(outcome.evidence["witness_domain"])
    assert len(witness) == 1  # h == 0 needs a single element
    j = outcome.evidence["j"]
    assert witness.code == we_bounded(j, outcome.evidence["inner_budget"]).code
    chi = outcome.condition.stem.characteristic_string()
    oracle_domain = we_bounded(pg.enumerate_oracle_ones_code(), 256, chi)
    assert witness.issubset_mask(oracle_domain.code)
    assert len(witness) > outcome.evidence["h_at_j"]
    assert mt.extends(outcome.condition, mt.Condition.empty(), 100)


def test_meet_d_eh_unresolved_on_diverger():
    outcome = mt.meet_D_eh(mt.Condition.empty(), pg.diverge_code(), pg.zero_code(), budget=128)
    assert not outcome.met
    assert outcome.evidence["best_size"] == 0


def test_meet_d_eh_unresolved_when_modulus_outruns_desk_scale():
    # h = identity demands more domain elements than the self-referential
    # index is numerically large, which no desk horizon can materialize
    outcome = mt.meet_D_eh(
        mt.Condition.empty(), pg.enumerate_oracle_ones_code(), pg.identity_code(), budget=128, max_rounds=2
    )
    assert not outcome.met
    assert outcome.evidence["best_size"] >= 1


def test_build_generic_trivial_schedules():
    start = mt.Condition.empty()
    run = mt.build_generic(start, [], horizon=50)
    assert [name for name, _ in run.chain] == ["start"]
    assert run.prefix.mask == 0
    run = mt.build_generic(start, [mt.size_step(1), mt.size_step(2)], horizon=50)
    assert run.prefix.members() == (0, 1)


def test_build_generic_rejects_violating_transformer():
    def escape(cond):
        return mt.Condition(_set(0), mt.ComputableSet.odds()), None

    with pytest.raises(mt.ExtensionOrderError) as err:
        mt.build_generic(mt.Condition.empty(mt.ComputableSet.evens()), [mt.ScheduleStep("rogue", escape)], horizon=40)
    assert "rogue" in str(err.value)


def test_generic_chain_extends_and_grows(generic_run):
    for (_, parent), (name, child) in zip(generic_run.chain, generic_run.chain[1:]):
        assert mt.extends(child, parent, 1000), name
    assert generic_run.prefix.mask == generic_run.chain[-1][1].stem.code
    assert len(generic_run.prefix.members()) >= 8


def test_generic_thin_certificates_cover_final_stem(generic_run, pool):
    assert len(generic_run.thin_certificates) == len(pool)
    for cert in generic_run.thin_certificates:
        assert cert.holds_for(pool[cert.numbering_id])


def test_generic_stem_persistence(generic_run):
    previous = 0
    for _, cond in generic_run.chain:
        assert previous & ~cond.stem.code == 0
        previous = cond.stem.code
    assert previous == generic_run.prefix.mask


def test_characteristic_converter():
    chi = encode(pg.parity_(pg.P0))  # the odd numbers
    converted = mt.computable_set_from_characteristic(chi, 40, 10)
    assert converted.values(10) == [1, 3, 5, 7, 9, 11, 13, 15, 17, 19]
    with pytest.raises(ValueError):
        mt.computable_set_from_characteristic(chi, 6, 10)  # witness too weak
    with pytest.raises(mt.NotTotalTierError):
        mt.computable_set_from_characteristic(pg.diverge_code(), 10, 2)
