import random

import pytest

from sumcol import (
    Coloring,
    ExchangeMove,
    Graph,
    RelocateMove,
    TabuState,
    apply_move,
    enumerate_exchange_moves,
    enumerate_relocate_moves,
    is_proper,
    perturb,
    select_move,
)

import oracles


def random_pair(rng, n_max=10, p=0.4):
    n = rng.randint(2, n_max)
    edges = oracles.random_gnp(n, p, rng)
    graph = Graph.from_edges(n, edges)
    assignment = oracles.random_proper_assignment(n, edges, rng)
    k = max(assignment) + (1 if rng.random() < 0.3 else 0)  # sometimes a spare empty class
    return graph, edges, Coloring.from_assignment(assignment, k=k)


def test_exchange_moves_match_oracle():
    rng = random.Random(17)
    for _ in range(40):
        graph, edges, coloring = random_pair(rng)
        ours = {
            (frozenset(m.vertices()), m.color_a, m.color_b, m.delta)
            for m in enumerate_exchange_moves(coloring, graph)
        }
        reference = oracles.naive_exchange_moves(graph.n, edges, coloring.assignment)
        assert ours == reference


def test_exchange_move_counts_are_consistent():
    rng = random.Random(19)
    for _ in range(20):
        graph, _, coloring = random_pair(rng)
        for m in enumerate_exchange_moves(coloring, graph):
            members = m.vertices()
            in_a = sum(1 for v in members if coloring.assignment[v] == m.color_a)
            assert m.count_a == in_a
            assert m.count_b == len(members) - in_a
            assert m.count_a >= 1 and m.count_b >= 1
            assert m.delta == (m.color_b - m.color_a) * (m.count_a - m.count_b)


def test_relocate_moves_match_oracle():
    rng = random.Random(23)
    for _ in range(40):
        graph, edges, coloring = random_pair(rng)
        ours = {
            (m.vertex, m.source, m.target, m.delta)
            for m in enumerate_relocate_moves(coloring, graph)
        }
        reference = oracles.naive_relocate_moves(graph.n, edges, coloring.assignment, coloring.k)
        assert ours == reference


def test_applied_moves_keep_properness_and_deltas():
    rng = random.Random(31)
    for _ in range(15):
        graph, _, coloring = random_pair(rng, n_max=12)
        tabu = TabuState()
        for _ in range(30):
            moves = enumerate_exchange_moves(coloring, graph) + enumerate_relocate_moves(coloring, graph)
            if not moves:
                break
            move = rng.choice(moves)
            before = coloring.sum
            apply_move(coloring, move, tabu, rng)
            assert coloring.sum == before + move.delta
            assert coloring.sum == oracles.naive_sum(coloring.assignment)
            assert is_proper(coloring, graph)


def test_exchange_is_self_inverse():
    graph = Graph.from_edges(3, [(0, 1), (1, 2)])
    coloring = Coloring.from_assignment([1, 2, 1])
    (move,) = enumerate_exchange_moves(coloring, graph)
    assert move.vertices() == (0, 1, 2)
    rng = random.Random(0)
    apply_move(coloring, move, TabuState(), rng)
    assert coloring.assignment == [2, 1, 2]
    apply_move(coloring, move, TabuState(), rng)
    assert coloring.assignment == [1, 2, 1]


def test_tabu_state_expiry_semantics():
    tabu = TabuState()
    tabu.pair_until[(1, 2)] = 5
    assert tabu.exchange_tabu(1, 2, at=5)
    assert tabu.exchange_tabu(2, 1, at=5)
    assert not tabu.exchange_tabu(1, 2, at=6)
    tabu.vertex_until[(7, 2)] = 3
    assert tabu.relocate_tabu(7, 1, 2, at=3)
    assert tabu.relocate_tabu(7, 4, 2, at=3)
    assert not tabu.relocate_tabu(7, 1, 2, at=4)
    assert not tabu.relocate_tabu(7, 1, 3, at=3)


def test_class_locks_block_both_neighborhoods():
    tabu = TabuState()
    tabu.class_until[3] = 4
    assert tabu.exchange_tabu(1, 3, at=4)
    assert tabu.exchange_tabu(3, 5, at=4)
    assert not tabu.exchange_tabu(1, 2, at=4)
    assert tabu.relocate_tabu(0, 3, 1, at=4)
    assert tabu.relocate_tabu(0, 1, 3, at=4)
    assert not tabu.relocate_tabu(0, 1, 2, at=4)
    assert not tabu.exchange_tabu(1, 3, at=5)


def test_apply_move_records_tenure_in_range():
    rng = random.Random(2)
    for _ in range(50):
        coloring = Coloring.from_assignment([1, 1, 2, 3], k=3)
        tabu = TabuState()
        tabu.iteration = 10
        move = RelocateMove(0, 1, 2, 1)
        apply_move(coloring, move, tabu, rng)
        assert 11 <= tabu.vertex_until[(0, 1)] <= 11 + coloring.k - 1


def test_select_move_picks_minimum_delta():
    moves = [
        RelocateMove(0, 3, 2, -1),
        RelocateMove(1, 3, 1, -2),
        RelocateMove(2, 1, 2, 1),
    ]
    chosen = select_move(moves, TabuState(), best_sum=10, current_sum=10, rng=random.Random(0))
    assert chosen == moves[1]


def test_select_move_respects_tabu_and_aspiration():
    move = RelocateMove(0, 2, 1, -1)
    tabu = TabuState()
    tabu.vertex_until[(0, 1)] = 1  # active at the next iteration
    # aspiration: current == best, so a -1 move would beat the best
    assert select_move([move], tabu, best_sum=10, current_sum=10, rng=random.Random(0)) == move
    # no aspiration: the best is already 5 below the current sum
    assert select_move([move], tabu, best_sum=5, current_sum=10, rng=random.Random(0)) is None


def test_select_move_breaks_ties_uniformly():
    a = RelocateMove(0, 2, 1, -1)
    b = RelocateMove(1, 2, 1, -1)
    rng = random.Random(77)
    picks = {a: 0, b: 0}
    for _ in range(400):
        picks[select_move([a, b], TabuState(), 10, 10, rng)] += 1
    assert picks[a] > 120 and picks[b] > 120


def test_perturb_splits_largest_class():
    base = Coloring.from_assignment([1, 1, 1, 1, 1, 1, 2, 2, 3])
    tabu = TabuState()
    tabu.iteration = 100
    moved = perturb(base, tabu, random.Random(6))
    assert base.assignment == [1, 1, 1, 1, 1, 1, 2, 2, 3]  # input untouched
    assert moved.k == 4
    movers = [v for v in range(9) if moved.assignment[v] == 4]
    assert len(movers) == 2  # a third of the six-vertex class
    assert all(base.assignment[v] == 1 for v in movers)
    assert set(tabu.class_until) == {1, 4}
    for expiry in tabu.class_until.values():
        assert 100 <= expiry <= 100 + moved.k - 1


def test_perturb_on_tiny_class_allocates_empty_class():
    base = Coloring.from_assignment([1, 1, 2])
    tabu = TabuState()
    moved = perturb(base, tabu, random.Random(1))
    assert moved.k == 3
    assert moved.assignment == base.assignment  # 2 // 3 == 0 vertices move
    assert set(tabu.class_until) == {1, 3}


def test_perturb_preserves_properness():
    rng = random.Random(41)
    for _ in range(20):
        graph, _, coloring = random_pair(rng, n_max=12)
        moved = perturb(coloring, TabuState(), rng)
        assert is_proper(moved, graph)
        assert moved.sum == oracles.naive_sum(moved.assignment)
