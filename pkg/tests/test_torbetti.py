import pytest

from conftest import seeded_instances
from diffmod.dmcore import (
    RingContext,
    box_tensor,
    build_complex,
    compress,
    direct_sum,
    free_module,
    koszul,
    truncate,
    twist,
)
from diffmod.errors import UnsupportedOperation
from diffmod.harness import deg0_scorpion, fixtures_by_name, scorpion
from diffmod.homology import homology_summary, summaries_agree
from diffmod.structure import FlagOrder, build_flag
from diffmod.torbetti import (
    CancellationProvenance,
    betti,
    check_tor_inequality,
    high_low,
    tor_k,
)


def test_tor_of_free_rank_one(qq):
    ring = RingContext(d=2, field=qq)
    module = free_module(ring, [(0, 0)], (0, 0), {})
    assert tor_k(module).total_length == 1


def test_tor_of_deg0_scorpion(qq):
    assert tor_k(deg0_scorpion(qq)).total_length == 4


def test_tor_invariant_under_trimming(qq):
    # the trimmed module is quasi-isomorphic, and tor does not notice
    module = deg0_scorpion(qq)
    trimmed = high_low(module, 0).truncated
    assert tor_k(trimmed).total_length == 4
    resolution = koszul(module.ring, [0, 1])
    assert summaries_agree(box_tensor(resolution, module), box_tensor(resolution, trimmed))


def test_betti_requires_witness_for_nonzero_degree(qq):
    with pytest.raises(UnsupportedOperation, match="flag order"):
        betti(scorpion(qq))


def test_betti_both_methods_on_deg0_scorpion(qq):
    module = deg0_scorpion(qq)
    assert betti(module).value == 4
    # with a witness the tor value is recomputed and must agree
    reduced = betti(module, build_flag(module))
    assert reduced.value == 4
    assert reduced.method == "flag-reduction"
    assert reduced.degree_zero_rank == 0


def test_betti_scorpion_via_flag(qq):
    result = betti(scorpion(qq), FlagOrder((0, 1, 1, 2)))
    assert result.value == 2
    assert result.degree_zero_rank == 1


def test_betti_rejects_wrong_flag(qq):
    with pytest.raises(UnsupportedOperation, match="not valid"):
        betti(scorpion(qq), FlagOrder((0, 0, 0, 0)))


def test_betti_via_provenance(qq):
    fx = fixtures_by_name(qq)
    minimized = fx["minimized-scorpion"]
    result = betti(minimized.module, minimized.provenance)
    assert result.value == 2
    assert result.method == "provenance"


def test_provenance_must_reproduce_module(qq):
    provenance = CancellationProvenance(
        source=scorpion(qq), steps=((0, 3),), source_flag=FlagOrder((0, 1, 1, 2))
    )
    with pytest.raises(UnsupportedOperation, match="does not reproduce"):
        betti(deg0_scorpion(qq), provenance)


def test_betti_additive_on_direct_sums(qq):
    module = deg0_scorpion(qq)
    other = twist(module, (2, 0))
    assert betti(direct_sum(module, other)).value == 8


def test_high_low_deg0_scorpion(qq):
    decomposition = high_low(deg0_scorpion(qq), 0)
    assert (decomposition.low_value, decomposition.high_value) == (0, 0)
    assert decomposition.truncated.n == 2
    assert decomposition.low.ring.d == 1
    assert [g.shift for g in decomposition.low.generators] == [(0,), (1,)]
    assert decomposition.low == decomposition.high
    assert summaries_agree(deg0_scorpion(qq), decomposition.truncated)


def test_high_low_compressed_koszul(qq):
    ring = RingContext(d=2, field=qq)
    module = compress(koszul(ring, [0, 1]))
    decomposition = high_low(module, 1)
    assert (decomposition.low_value, decomposition.high_value) == (0, 0)
    assert decomposition.low == decomposition.high
    assert tor_k(decomposition.low).total_length == 2


def test_high_low_two_separate_values(qq):
    module = deg0_scorpion(qq)
    spread = direct_sum(module, twist(module, (-3, 0)))
    decomposition = high_low(spread, 0)
    assert (decomposition.low_value, decomposition.high_value) == (0, 3)
    assert decomposition.low != decomposition.high
    assert not homology_summary(decomposition.low).is_zero
    assert not homology_summary(decomposition.high).is_zero


def test_high_low_rejects_zero_homology(qq):
    ring = RingContext(d=2, field=qq)
    module = free_module(ring, [(0, 0), (0, 0)], (0, 0), {(0, 1): 1})
    with pytest.raises(UnsupportedOperation, match="zero"):
        high_low(module, 0)


def test_high_low_rejects_unbounded_direction(qq):
    ring = RingContext(d=2, field=qq)
    module = free_module(ring, [(0, 0)], (0, 0), {})
    with pytest.raises(UnsupportedOperation, match="unbounded"):
        high_low(module, 0)


def test_tor_inequality_examples(qq):
    report = check_tor_inequality(deg0_scorpion(qq), 0)
    assert (report.lhs, report.rhs_low, report.rhs_high) == (4, 2, 2)
    assert report.holds

    ring = RingContext(d=2, field=qq)
    report = check_tor_inequality(compress(koszul(ring, [0, 1])), 0)
    assert (report.lhs, report.rhs_low, report.rhs_high) == (4, 2, 2)

    # R <-x- R over one variable, compressed
    line = RingContext(d=1, field=qq)
    module = compress(build_complex(line, [([(0,)], []), ([(1,)], [[1]])]))
    report = check_tor_inequality(module, 0)
    assert (report.lhs, report.rhs_low, report.rhs_high) == (2, 1, 1)


def test_tor_inequality_on_random_instances(fp):
    checked = 0
    for module in seeded_instances(fp, 10, seed=8080):
        summary = homology_summary(module)
        if not summary.finite_length or summary.total_length == 0:
            continue
        for axis in range(module.ring.d):
            report = check_tor_inequality(module, axis)
            assert report.holds, (module, axis, report)
            checked += 1
    assert checked >= 4


def test_betti_at_most_rank_with_equality_when_minimal(qq, fp):
    fx = fixtures_by_name(qq)
    for name in ("deg0-scorpion", "scorpion", "koszul-1", "koszul-2", "koszul-3"):
        fixture = fx[name]
        witness = fixture.flag
        value = betti(fixture.module, witness).value
        assert value <= fixture.module.n
    for module in seeded_instances(fp, 6, seed=11213):
        order = build_flag(module)
        value = betti(module, order).value
        assert value <= module.n
        zero_free = all(
            module.coeffs[i][j] == module.ring.field.zero
            or any(e > 0 for e in module.exponent(i, j))
            for i in range(module.n)
            for j in range(module.n)
        )
        if zero_free:
            assert value == module.n


def test_tor_requires_degree_zero(qq):
    with pytest.raises(UnsupportedOperation):
        tor_k(scorpion(qq))
    with pytest.raises(UnsupportedOperation):
        check_tor_inequality(scorpion(qq), 0)


def test_tor_on_capped_module(qq):
    trimmed = truncate(deg0_scorpion(qq), 0, 0, "above")
    assert tor_k(trimmed).total_length == 4


def test_zero_variables_edge_case(qq):
    # over the ground field itself, tor is just homology
    ring = RingContext(d=0, field=qq)
    contractible = free_module(ring, [(), ()], (), {(0, 1): 1})
    assert betti(contractible).value == 0
    point = free_module(ring, [()], (), {})
    assert betti(point).value == 1  # meets the bound 2^0
