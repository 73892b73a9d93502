import itertools

import pytest

from conftest import seeded_instances
from diffmod.dmcore import (
    RingContext,
    box_tensor,
    change_basis,
    compress,
    compression_levels,
    degree_component,
    direct_sum,
    free_module,
    koszul,
    slice_at,
    truncate,
    twist,
    validate,
)
from diffmod.errors import DimensionMismatch, UnsupportedOperation
from diffmod.harness import Stream, deg0_scorpion, fixtures_by_name, scorpion
from diffmod.homology import homology_at, homology_summary, summaries_agree
from diffmod.torbetti import betti


def _ring2(field):
    return RingContext(d=2, field=field)


# -- validate --------------------------------------------------------------


def test_validate_accepts_deg0_scorpion(qq):
    assert validate(deg0_scorpion(qq)) == []


def test_validate_flags_broken_square(qq):
    # flipping the sign of the (2,4) entry makes delta^2(e4) = 2xy e1
    bad = free_module(
        _ring2(qq), [(0, 0), (1, 0), (0, 1), (1, 1)], (0, 0),
        {(0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 3): 1, (2, 3): 1},
    )
    violations = validate(bad)
    assert violations
    assert any(v.kind == "square" and v.degree == (1, 1) for v in violations)


def test_validate_flags_missing_monomial(qq):
    bad = free_module(_ring2(qq), [(1, 0), (0, 0)], (0, 0), {(0, 1): 1})
    violations = validate(bad)
    assert [v.kind for v in violations] == ["monomial"]


def test_validate_zero_differential(qq):
    module = free_module(_ring2(qq), [(0, 0), (5, -3)], (0, 0), {})
    assert validate(module) == []


# -- degree components -------------------------------------------------------


def test_component_at_origin(qq):
    comp = degree_component(deg0_scorpion(qq), (0, 0))
    assert comp.basis_mid == (0,)
    assert comp.outgoing.rows == 1 and comp.outgoing.cols == 1
    assert comp.outgoing.is_zero()


def test_component_at_1_0(qq):
    comp = degree_component(deg0_scorpion(qq), (1, 0))
    assert comp.basis_mid == (0, 1)
    assert comp.outgoing.to_rows() == [[0, 1], [0, 0]]


def test_component_below_support_is_empty(qq):
    comp = degree_component(deg0_scorpion(qq), (-2, -2))
    assert comp.basis_below == comp.basis_mid == comp.basis_above == ()
    assert comp.outgoing.rows == comp.outgoing.cols == 0


# -- twist, direct sum -------------------------------------------------------


def test_twist_identity_and_inverse(qq):
    module = deg0_scorpion(qq)
    assert twist(module, (0, 0)) == module
    assert twist(twist(module, (2, -1)), (-2, 1)) == module


def test_twist_moves_support(qq):
    shifted = twist(deg0_scorpion(qq), (1, 1))
    assert [g.shift for g in shifted.generators] == [(-1, -1), (0, -1), (-1, 0), (0, 0)]
    summary = homology_summary(shifted)
    assert summary.total_length == 1
    assert summary.support_box == ((-1, -1), (-1, -1))


def test_direct_sum_with_zero_module(qq):
    module = deg0_scorpion(qq)
    empty = free_module(_ring2(qq), [], (0, 0), {})
    assert direct_sum(module, empty).generators == module.generators


def test_direct_sum_adds_dimensions(qq):
    module = deg0_scorpion(qq)
    double = direct_sum(module, module)
    assert validate(double) == []
    for m in itertools.product(range(-1, 3), repeat=2):
        assert homology_at(double, m) == 2 * homology_at(module, m)
    assert homology_summary(double).total_length == 2
    assert betti(double).value == 8


def test_direct_sum_requires_matching_degree(qq):
    with pytest.raises(DimensionMismatch):
        direct_sum(deg0_scorpion(qq), scorpion(qq))


# -- change of basis ---------------------------------------------------------


def test_change_basis_identity(qq):
    module = deg0_scorpion(qq)
    eye = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    assert change_basis(module, eye) == module


def test_change_basis_preserves_summary(qq):
    module = deg0_scorpion(qq)
    g = [[1, 0, 0, 7], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    conjugated = change_basis(module, g)
    assert validate(conjugated) == []
    assert summaries_agree(module, conjugated)


def test_change_basis_random_property(fp):
    from diffmod.harness import random_conjugation

    rng = Stream(99)
    for module in seeded_instances(fp, 6, seed=303):
        conjugated = random_conjugation(module, rng)
        assert validate(conjugated) == []
        assert summaries_agree(module, conjugated)
        assert betti(conjugated).value == betti(module).value


def test_change_basis_rejects_bad_support(qq):
    module = deg0_scorpion(qq)
    g = [[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]  # (2,1) goes downhill
    with pytest.raises(UnsupportedOperation):
        change_basis(module, g)


def test_change_basis_rejects_singular(qq):
    module = deg0_scorpion(qq)
    g = [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    with pytest.raises(ZeroDivisionError):
        change_basis(module, g)


# -- koszul and compression ---------------------------------------------------


def test_koszul_empty_is_the_ring(qq):
    complex_ = koszul(_ring2(qq), [])
    assert complex_.ranks == (1,)
    module = compress(complex_)
    assert module.n == 1
    assert not homology_summary(module).finite_length  # homology is all of R


def test_koszul_two_variables(qq):
    complex_ = koszul(_ring2(qq), [0, 1])
    assert complex_.ranks == (1, 2, 1)
    module = compress(complex_)
    assert [g.shift for g in module.generators] == [(0, 0), (1, 0), (0, 1), (1, 1)]
    # degreewise brute force over the box [-1, 3]^2: single class at the origin
    dims = {m: homology_at(module, m) for m in itertools.product(range(-1, 4), repeat=2)}
    assert dims[(0, 0)] == 1
    assert sum(dims.values()) == 1


def test_koszul_three_variables(qq):
    ring = RingContext(d=3, field=qq)
    complex_ = koszul(ring, [0, 1, 2])
    assert complex_.ranks == (1, 3, 3, 1)
    module = compress(complex_)
    assert betti(module).value == 8


def test_compress_single_level_is_zero_differential(qq):
    ring = _ring2(qq)
    from diffmod.dmcore import build_complex

    complex_ = build_complex(ring, [([(0, 0), (2, 1)], [])])
    module = compress(complex_)
    assert all(c == qq.zero for row in module.coeffs for c in row)
    assert compression_levels(complex_) == (0, 0)


def test_minimal_complex_betti_is_total_rank(qq):
    # every entry of a Koszul differential has positive exponent, so the
    # compression's Betti number is the sum of the level ranks
    for d in (1, 2, 3):
        ring = RingContext(d=d, field=qq)
        complex_ = koszul(ring, range(d))
        assert betti(compress(complex_)).value == sum(complex_.ranks)


# -- box tensor ---------------------------------------------------------------


def test_box_tensor_with_free_rank_one(qq):
    ring = _ring2(qq)
    complex_ = koszul(ring, [0, 1])
    unit = free_module(ring, [(0, 0)], (0, 0), {})
    assert box_tensor(complex_, unit) == compress(complex_)


def test_box_tensor_distributes_over_direct_sum(qq):
    ring = _ring2(qq)
    complex_ = koszul(ring, [0, 1])
    a = deg0_scorpion(qq)
    b = twist(deg0_scorpion(qq), (1, 0))
    left = box_tensor(complex_, direct_sum(a, b))
    right = direct_sum(box_tensor(complex_, a), box_tensor(complex_, b))
    # same generators up to order, same homology everywhere
    assert sorted(left.generators, key=str) == sorted(right.generators, key=str)
    assert summaries_agree(left, right)


def test_box_tensor_associativity_as_dimensions(qq, fp):
    # koszul on a disjoint union of variable sets is the tensor product
    # of the koszul complexes, so X (x) Y can be realized directly
    ring = _ring2(qq)
    module = deg0_scorpion(qq)
    both = box_tensor(koszul(ring, [0, 1]), module)
    nested = box_tensor(koszul(ring, [0]), box_tensor(koszul(ring, [1]), module))
    assert summaries_agree(both, nested)
    for instance in seeded_instances(fp, 4, seed=71, d=3):
        ring3 = instance.ring
        both = box_tensor(koszul(ring3, [0, 2]), instance)
        nested = box_tensor(koszul(ring3, [0]), box_tensor(koszul(ring3, [2]), instance))
        assert summaries_agree(both, nested)


def test_box_tensor_requires_degree_zero(qq):
    with pytest.raises(UnsupportedOperation):
        box_tensor(koszul(_ring2(qq), [0, 1]), scorpion(qq))


def test_box_tensor_is_valid_on_capped_modules(qq):
    module = truncate(deg0_scorpion(qq), 0, 0, "above")
    tensored = box_tensor(koszul(_ring2(qq), [0, 1]), module)
    assert validate(tensored) == []


# -- slicing and truncation ----------------------------------------------------


def test_truncate_above_deg0_scorpion(qq):
    module = truncate(deg0_scorpion(qq), 0, 0, "above")
    assert [(g.shift, g.cap) for g in module.generators] == [
        ((0, 0), (0, None)),
        ((0, 1), (0, None)),
    ]
    assert module.coeffs[0][1] == qq.one
    assert validate(module) == []
    summary = homology_summary(module)
    assert summary.total_length == 1
    assert summary.support_box == ((0, 0), (0, 0))


def test_truncate_below_noop_and_annihilating(qq):
    module = deg0_scorpion(qq)
    assert truncate(module, 0, 0, "below") == module
    # beyond the cap there are no basis elements left at all
    capped = truncate(module, 0, 0, "above")
    assert truncate(capped, 0, 1, "below").n == 0


def test_slice_of_truncated_scorpion(qq):
    trimmed = truncate(deg0_scorpion(qq), 0, 0, "above")
    layer = slice_at(trimmed, 0, 0)
    assert layer.ring.d == 1
    assert [g.shift for g in layer.generators] == [(0,), (1,)]
    assert layer.coeffs[0][1] == qq.one
    assert validate(layer) == []


def test_slice_below_support_is_zero(qq):
    assert slice_at(deg0_scorpion(qq), 0, -5).n == 0


def test_slice_is_the_layer_with_its_full_differential(qq):
    # delta preserves each x-layer (its degree vanishes there), so the
    # slice keeps every coefficient; entries whose monomial had positive
    # x-exponent now join generators at different layer offsets
    module = deg0_scorpion(qq)
    layer = slice_at(module, 0, 1)
    assert layer.n == 4
    nonzero = {(i, j) for i in range(4) for j in range(4) if layer.coeffs[i][j] != qq.zero}
    assert nonzero == {(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)}
    assert validate(layer) == []
    # dimension check against the layer of the ambient module
    for y in range(-1, 4):
        assert homology_at(layer, (y,)) == homology_at(module, (1, y))


def test_slice_of_cap_zero_direction_keeps_homology(qq, fp):
    # a direction capped at zero has a single layer; slicing it away
    # changes nothing about the homology in the remaining coordinates
    for field in (qq, fp):
        trimmed = truncate(deg0_scorpion(field), 0, 0, "above")
        layer = slice_at(trimmed, 0, 0)
        for y in range(-2, 4):
            assert homology_at(layer, (y,)) == homology_at(trimmed, (0, y))


def test_truncate_requires_zero_degree_in_direction(qq):
    with pytest.raises(UnsupportedOperation):
        truncate(scorpion(qq), 0, 0, "above")
    with pytest.raises(UnsupportedOperation):
        slice_at(scorpion(qq), 1, 0)


def test_random_degreewise_square_zero(fp):
    # independent of the cell-representative check in validate: delta
    # composed with itself vanishes at randomly sampled degrees
    rng = Stream(2024)
    for module in seeded_instances(fp, 5, seed=88):
        lows = [min(g.shift[i] for g in module.generators) for i in range(2)]
        highs = [max(g.shift[i] for g in module.generators) + 2 for i in range(2)]
        for _ in range(50):
            m = tuple(rng.randint(lo - 1, hi) for lo, hi in zip(lows, highs))
            comp = degree_component(module, m)
            assert comp.outgoing.mul(comp.incoming).is_zero()


def test_validate_accepts_all_fixtures(qq):
    for fixture in fixtures_by_name(qq).values():
        assert validate(fixture.module) == [], fixture.name
