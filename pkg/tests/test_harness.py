import pytest

from diffmod.dmcore import validate
from diffmod.errors import DiffmodError
from diffmod.harness import (
    InstanceRecipe,
    derive_seed,
    fixtures,
    fixtures_by_name,
    generate,
    run_bound_experiment,
)
from diffmod.homology import homology_summary
from diffmod.serial import module_to_text
from diffmod.structure import build_flag, verify_flag
from diffmod.torbetti import betti


def test_fixture_expectations_hold(qq):
    for fixture in fixtures(qq):
        assert validate(fixture.module) == [], fixture.name
        assert fixture.module.n == fixture.rank
        summary = homology_summary(fixture.module)
        assert summary.total_length == fixture.homology_length, fixture.name
        if fixture.support is not None:
            assert summary.support_box == (fixture.support, fixture.support)
        witness = fixture.flag or fixture.provenance
        assert betti(fixture.module, witness).value == fixture.betti, fixture.name


def test_fixture_flags_verify(qq):
    for fixture in fixtures(qq):
        if fixture.flag is not None:
            assert verify_flag(fixture.module, fixture.flag), fixture.name


def test_expected_fixture_names(qq):
    names = set(fixtures_by_name(qq))
    assert {"deg0-scorpion", "scorpion", "minimized-scorpion",
            "koszul-1", "koszul-2", "koszul-3", "koszul-4"} == names


def test_generation_is_deterministic(fp):
    for strategy in ("compressed-random-complex", "conjugated-fixture",
                     "direct-sum", "koszul-product"):
        recipe = InstanceRecipe(d=2, field=fp, strategy=strategy, seed=777)
        assert module_to_text(generate(recipe)) == module_to_text(generate(recipe))


def test_different_seeds_differ(fp):
    texts = {
        module_to_text(generate(InstanceRecipe(
            d=2, field=fp, strategy="compressed-random-complex", seed=derive_seed(1, i))))
        for i in range(6)
    }
    assert len(texts) > 1


def test_generated_instances_are_valid_and_flaggable(fp):
    for d in (1, 2, 3):
        for idx in range(6):
            recipe = InstanceRecipe(
                d=d, field=fp,
                strategy=("compressed-random-complex", "koszul-product", "direct-sum")[idx % 3],
                seed=derive_seed(9000 + d, idx), width=2, levels=2,
            )
            module = generate(recipe)
            assert all(x == 0 for x in module.diff_degree)
            assert validate(module) == []
            assert verify_flag(module, build_flag(module))


def test_conjugated_fixture_keeps_summary(fp):
    base = fixtures_by_name(fp)["deg0-scorpion"].module
    recipe = InstanceRecipe(d=2, field=fp, strategy="conjugated-fixture",
                            seed=31337, fixture="deg0-scorpion")
    module = generate(recipe)
    assert homology_summary(module).total_length == homology_summary(base).total_length


def test_direct_sum_strategy_betti_is_additive(fp):
    recipe = InstanceRecipe(d=2, field=fp, strategy="direct-sum", seed=2222)
    module = generate(recipe)
    left = generate(InstanceRecipe(
        d=2, field=fp, strategy="compressed-random-complex",
        seed=derive_seed(2222, 1), levels=3, width=2, shift_span=2))
    right = generate(InstanceRecipe(
        d=2, field=fp, strategy="conjugated-fixture", seed=derive_seed(2222, 2)))
    assert betti(module).value == betti(left).value + betti(right).value


def test_bound_experiment_small_runs(fp):
    result = run_bound_experiment(12, 2, 42)
    assert result.violations == []
    assert result.min_betti == 4  # deg0-scorpion sits in the pool
    assert result.requested == 12
    checked = len(result.reports)
    assert checked + result.skipped_zero + result.skipped_infinite >= 12
    assert all(r.betti >= 4 for r in result.reports)

    one_var = run_bound_experiment(10, 1, 1)
    assert one_var.violations == []
    assert one_var.min_betti >= 2


def test_bound_experiment_rejects_zero_dimensions(fp):
    with pytest.raises(DiffmodError):
        run_bound_experiment(5, 0, 1)


def test_experiment_is_deterministic(fp):
    a = run_bound_experiment(8, 2, 123)
    b = run_bound_experiment(8, 2, 123)
    assert [(r.instance, r.betti, r.rank) for r in a.reports] == \
        [(r.instance, r.betti, r.rank) for r in b.reports]
