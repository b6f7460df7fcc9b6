import math
import random

import pytest

from sumcol import (
    Coloring,
    MemeticParams,
    Population,
    TabucolParams,
    TabuSearchParams,
    canonical_relabel,
    diversity_score,
    hamming_distance,
    is_proper,
    memetic_search,
    select_parents,
    update_population,
)


def quick_params(**overrides):
    base = dict(
        tabu=TabuSearchParams(exchange_idle_limit=40, relocate_idle_limit=80,
                              stall_limit=300, iteration_budget=800),
        init=TabucolParams(iteration_budget=20_000),
    )
    base.update(overrides)
    return MemeticParams(**base)


def test_params_validation():
    with pytest.raises(ValueError):
        MemeticParams(population_size=1)
    with pytest.raises(ValueError):
        MemeticParams(max_generations=0)
    with pytest.raises(ValueError):
        MemeticParams(replace_second_worst_probability=1.5)


def test_population_requires_distinct_members():
    a = Coloring.from_assignment([1, 2, 1])
    b = Coloring.from_assignment([1, 2, 2])
    Population([a, b])
    with pytest.raises(ValueError, match="distinct"):
        Population([a, Coloring.from_assignment([1, 2, 1])])


def test_population_membership_and_best():
    a = Coloring.from_assignment([1, 2, 1])  # sum 4
    b = Coloring.from_assignment([1, 2, 2])  # sum 5
    pop = Population([b, a])
    assert len(pop) == 2
    assert a in pop and Coloring.from_assignment([1, 2, 1]) in pop
    assert pop.best() is a


def test_select_parents_bounds():
    members = [Coloring.from_assignment([c, 1]) for c in (1, 2, 3)]
    pop = Population(members)
    rng = random.Random(0)
    chosen = select_parents(pop, 2, rng)
    assert len(chosen) == 2 and len({id(c) for c in chosen}) == 2
    with pytest.raises(ValueError):
        select_parents(pop, 1, rng)
    with pytest.raises(ValueError):
        select_parents(pop, 4, rng)


def test_diversity_score_formula():
    a = Coloring.from_assignment([1, 1, 1, 1])  # sum 4
    b = Coloring.from_assignment([1, 1, 1, 2])  # distance 1 from a
    c = Coloring.from_assignment([2, 2, 2, 2])  # distance 4 from a, 3 from b
    pool = [a, b, c]
    assert diversity_score(0, pool, 4) == pytest.approx(4 + math.exp(0.08 * 4 / 1))
    assert diversity_score(2, pool, 4) == pytest.approx(8 + math.exp(0.08 * 4 / 3))
    dup = [a, b, Coloring.from_assignment([1, 1, 1, 1])]
    assert diversity_score(0, dup, 4) == math.inf
    assert diversity_score(2, dup, 4) == math.inf


def test_update_population_discards_duplicates():
    members = [Coloring.from_assignment(x) for x in ([1, 1, 2], [1, 2, 1], [2, 1, 1])]
    pop = Population(members)
    clone = Coloring.from_assignment([1, 2, 1])
    assert update_population(pop, clone, random.Random(0), 1.0) is False
    assert [m.assignment for m in pop.members] == [[1, 1, 2], [1, 2, 1], [2, 1, 1]]


def test_update_population_replaces_scored_worst():
    # all pairs far apart, so the sums dominate the crowding terms
    good = Coloring.from_assignment([1, 1, 1, 1, 2])   # sum 6
    mid = Coloring.from_assignment([2, 2, 2, 1, 1])    # sum 8
    bad = Coloring.from_assignment([3, 3, 2, 2, 1])    # sum 11
    pop = Population([good, mid, bad])
    newcomer = Coloring.from_assignment([1, 1, 2, 2, 1])  # sum 7
    assert update_population(pop, newcomer, random.Random(0), 0.2) is True
    assert bad not in pop and newcomer in pop
    assert len(pop) == 3


def test_update_population_worst_offspring_needs_the_coin():
    good = Coloring.from_assignment([1, 1, 1, 1, 2])
    mid = Coloring.from_assignment([2, 2, 2, 1, 1])
    worst_member = Coloring.from_assignment([3, 3, 2, 2, 1])
    offspring = Coloring.from_assignment([3, 3, 3, 2, 2])  # sum 13, scored worst
    pop = Population([good, mid, worst_member])
    assert update_population(pop, offspring, random.Random(0), 0.0) is False
    assert offspring not in pop and worst_member in pop

    pop = Population([good, mid, worst_member])
    assert update_population(pop, offspring, random.Random(0), 1.0) is True
    assert offspring in pop and worst_member not in pop
    assert good in pop and mid in pop


def test_memetic_search_reaches_known_optimum(myciel3):
    best, best_sum = memetic_search(myciel3, quick_params(), random.Random(4), target=21)
    assert best_sum == 21 == best.sum
    assert is_proper(best, myciel3)
    assert best.assignment == canonical_relabel(best).assignment


def test_memetic_search_callbacks_and_stats(myciel4):
    from sumcol import SearchStats

    stats = SearchStats()
    improvements = []
    generations = []

    def on_gen(gen, population, best_sum):
        generations.append(gen)
        assert len(population) == 4
        keys = {tuple(m.assignment) for m in population.members}
        assert len(keys) == 4

    params = quick_params(population_size=4, max_generations=5)
    best, best_sum = memetic_search(
        myciel4, params, random.Random(12),
        on_improve=improvements.append, on_generation=on_gen, stats=stats,
    )
    assert generations == [1, 2, 3, 4, 5]
    assert improvements[0] >= best_sum
    assert improvements == sorted(improvements, reverse=True)
    assert improvements[-1] == best_sum
    assert stats.iterations == 5 * params.tabu.iteration_budget


def test_memetic_search_target_stops_early(myciel3):
    calls = []
    memetic_search(myciel3, quick_params(max_generations=50), random.Random(4),
                   target=21, on_generation=lambda g, p, b: calls.append(g))
    assert len(calls) < 50


def test_memetic_search_warm_start(myciel3):
    rng = random.Random(30)
    warm, warm_sum = memetic_search(myciel3, quick_params(max_generations=2), rng)
    improvements = []
    best, best_sum = memetic_search(
        myciel3, quick_params(max_generations=2), rng,
        warm_start=warm, on_improve=improvements.append,
    )
    assert best_sum <= warm_sum
    assert improvements[0] <= warm_sum  # warm member bounds the initial best


def test_memetic_search_rejects_improper_warm_start(myciel3):
    broken = Coloring.from_assignment([1] * myciel3.n)
    with pytest.raises(ValueError, match="proper"):
        memetic_search(myciel3, quick_params(), random.Random(0), warm_start=broken)
