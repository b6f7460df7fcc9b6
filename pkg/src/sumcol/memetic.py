"""Memetic minimization of the color sum.

A small population of distinct proper colorings evolves for a fixed number
of generations: each generation recombines a few parents into one offspring
(greedy partition crossover), improves it by tabu search, then decides
whether the offspring replaces a member.  Replacement scores every coloring
by quality plus a crowding penalty that grows as its nearest neighbor in
the population gets closer, so the pool keeps both good and mutually
distant members.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .coloring import Coloring, canonical_relabel, hamming_distance, is_proper
from .graph import Graph
from .tabu_search import SearchStats, TabuSearchParams, tabu_search
from .tabucol import TabucolParams, generate_population


@dataclass
class MemeticParams:
    population_size: int = 10
    max_generations: int = 50
    replace_second_worst_probability: float = 0.2
    tabu: TabuSearchParams = field(default_factory=TabuSearchParams)
    init: TabucolParams = field(default_factory=TabucolParams)

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        if not 0.0 <= self.replace_second_worst_probability <= 1.0:
            raise ValueError("replace_second_worst_probability must be in [0, 1]")


class Population:
    """Pairwise-distinct colorings (distinct partitions, members canonical)."""

    def __init__(self, members: Sequence[Coloring]):
        self.members: list[Coloring] = list(members)
        self._keys = {tuple(m.assignment) for m in self.members}
        if len(self._keys) != len(self.members):
            raise ValueError("population members must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, coloring: Coloring) -> bool:
        return tuple(coloring.assignment) in self._keys

    def best(self) -> Coloring:
        return min(self.members, key=lambda m: m.sum)

    def replace(self, index: int, coloring: Coloring) -> None:
        self._keys.discard(tuple(self.members[index].assignment))
        self.members[index] = coloring
        self._keys.add(tuple(coloring.assignment))


def choose_parent_count(n: int, k: int) -> int:
    """Number of crossover parents, driven by mean class size n/k: 2 below
    5, 3 up to 15, 4 beyond."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ratio = n / k
    if ratio < 5:
        return 2
    if ratio <= 15:
        return 3
    return 4


def select_parents(population: Population, count: int, rng: random.Random) -> list[Coloring]:
    """Uniform sample of ``count`` distinct members."""
    if not 2 <= count <= len(population):
        raise ValueError(f"parent count {count} outside 2..{len(population)}")
    return rng.sample(population.members, count)


def partition_crossover(parents: Sequence[Coloring], graph: Graph, rng: random.Random) -> Coloring:
    """Greedy multi-parent crossover building the offspring class by class.

    Offspring color 1, 2, ... each receive the largest class still present
    in any allowed parent (ties uniform over parent/class pairs); its
    vertices are then removed from every parent's copy, and the donating
    parent is barred from donating again for the next len(parents)//2
    colors.  Classes are inherited subsets, so properness is preserved; the
    offspring may use more classes than any parent.  Returns the offspring
    canonically relabeled.
    """
    if len(parents) < 2:
        raise ValueError("crossover needs at least two parents")
    n = parents[0].n
    if any(p.n != n for p in parents):
        raise ValueError("parents color different vertex sets")
    residual = [list(p.class_masks) for p in parents]
    barred_until = [0] * len(parents)  # parent j may donate color c iff barred_until[j] < c
    cooldown = len(parents) // 2
    assignment = [0] * n
    remaining = (1 << n) - 1
    color = 0
    while remaining:
        color += 1
        chosen = None
        best_size = 0
        ties = 0
        allowed = False
        for j, barred in enumerate(barred_until):
            if barred >= color:
                continue
            allowed = True
            for ci, m in enumerate(residual[j]):
                size = m.bit_count()
                if size > best_size:
                    best_size = size
                    chosen = (j, ci)
                    ties = 1
                elif size and size == best_size:
                    ties += 1
                    if rng.random() * ties < 1.0:
                        chosen = (j, ci)
        assert allowed, "allowed parent set empty"
        assert chosen is not None, "no nonempty class among allowed parents"
        j, ci = chosen
        class_mask = residual[j][ci]
        assert class_mask & ~remaining == 0, "vertex would be colored twice"
        m = class_mask
        while m:
            low = m & -m
            assignment[low.bit_length() - 1] = color
            m ^= low
        remaining &= ~class_mask
        for res in residual:
            for idx in range(len(res)):
                if res[idx] & class_mask:
                    res[idx] &= ~class_mask
        barred_until[j] = color + cooldown
    child = canonical_relabel(Coloring.from_assignment(assignment, k=color))
    assert is_proper(child, graph), "crossover produced an improper coloring"
    return child


def diversity_score(index: int, colorings: Sequence[Coloring], n: int) -> float:
    """Replacement score of one coloring within a pool: its sum plus
    exp(0.08 n / d) where d is the Hamming distance to its nearest other
    member.  Infinite for exact duplicates; higher is worse."""
    me = colorings[index]
    nearest = min(
        hamming_distance(me, other)
        for j, other in enumerate(colorings)
        if j != index
    )
    if nearest == 0:
        return math.inf
    return me.sum + math.exp(0.08 * n / nearest)


def update_population(
    population: Population,
    offspring: Coloring,
    rng: random.Random,
    replace_second_worst_probability: float = 0.2,
) -> bool:
    """Decide whether ``offspring`` (canonical) joins the population.

    Offspring duplicating a member is always discarded.  Otherwise the
    worst-scored coloring of the pool-plus-offspring leaves; when that is
    the offspring itself, with the given probability the worst existing
    member leaves instead and the offspring stays.  Returns True iff the
    offspring entered.  Population size is invariant.
    """
    if offspring in population:
        return False
    pool: list[Coloring] = population.members + [offspring]
    n = offspring.n
    scores = [diversity_score(i, pool, n) for i in range(len(pool))]
    worst = _argmax_random_ties(scores, rng)
    last = len(pool) - 1
    if worst != last:
        population.replace(worst, offspring)
        return True
    if rng.random() < replace_second_worst_probability:
        worst_existing = _argmax_random_ties(scores[:last], rng)
        population.replace(worst_existing, offspring)
        return True
    return False


def _argmax_random_ties(values: Sequence[float], rng: random.Random) -> int:
    best = None
    chosen = -1
    ties = 0
    for i, value in enumerate(values):
        if best is None or value > best:
            best = value
            chosen = i
            ties = 1
        elif value == best:
            ties += 1
            if rng.random() * ties < 1.0:
                chosen = i
    return chosen


def memetic_search(
    graph: Graph,
    params: MemeticParams,
    rng: random.Random,
    warm_start: Coloring | None = None,
    target: int | None = None,
    validate: bool = False,
    on_improve: Callable[[int], None] | None = None,
    on_generation: Callable[[int, Population, int], None] | None = None,
    stats: SearchStats | None = None,
) -> tuple[Coloring, int]:
    """Full memetic run; returns (best coloring, its sum).

    ``warm_start`` injects one externally supplied proper coloring into the
    initial population.  ``target`` stops the run as soon as the best sum
    reaches it; since the incumbent never worsens, a run that would reach
    the target anyway returns the same result either way.  ``on_improve``
    fires with each new best sum (including the initial one),
    ``on_generation`` after each population update.
    """
    if warm_start is not None:
        if not is_proper(warm_start, graph):
            raise ValueError("warm start coloring is not proper")
        warm_start = canonical_relabel(warm_start)
    members = generate_population(graph, params.population_size, params.init, rng, include=warm_start)
    population = Population(members)
    best = population.best().copy()
    best_sum = best.sum
    if on_improve is not None:
        on_improve(best_sum)
    for generation in range(1, params.max_generations + 1):
        if target is not None and best_sum <= target:
            break
        smallest_k = min(m.k for m in population.members)
        count = min(choose_parent_count(graph.n, smallest_k), len(population))
        parents = select_parents(population, count, rng)
        child = partition_crossover(parents, graph, rng)
        improved = tabu_search(
            child, graph, params.tabu, rng, validate=validate, stats=stats
        )
        if improved.sum < best_sum:
            best = improved.copy()
            best_sum = improved.sum
            if on_improve is not None:
                on_improve(best_sum)
        update_population(population, improved, rng, params.replace_second_worst_probability)
        if on_generation is not None:
            on_generation(generation, population, best_sum)
    return best, best_sum
