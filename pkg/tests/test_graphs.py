import itertools

import numpy as np
import pytest

from ncselftest.graphs import (Graph, StabilizerGroup, fix_global_phase, graph_state_vector,
                               stabilizer_expectation, stabilizer_generators,
                               stabilizer_state_vector)
from ncselftest.pauli import PauliString, embed, product, random_pauli, to_dense

S8 = 1 / np.sqrt(8)
K3_SIGNS = np.array([1, 1, 1, -1, 1, -1, -1, -1])
PATH3_SIGNS = np.array([1, 1, 1, -1, 1, 1, -1, 1])


def dense_expectation(vec, p):
    return np.vdot(vec, to_dense(p) @ vec).real


def test_complete_graph_fixture():
    v = graph_state_vector(Graph.complete(3))
    assert np.allclose(v, K3_SIGNS * S8, atol=1e-12)


def test_path_graph_fixture():
    v = graph_state_vector(Graph.named("path:3"))
    assert np.allclose(v, PATH3_SIGNS * S8, atol=1e-12)
    # the star centred at 2 is the path 1-2-3
    assert np.allclose(v, graph_state_vector(Graph.star(3, center=2)), atol=1e-12)


def test_star_centre_one_is_qubit_swap_of_path():
    star = graph_state_vector(Graph.star(3))
    perm = [((b & 1) << 1) | ((b >> 1) & 1) | (b & 4) for b in range(8)]
    assert np.allclose(star[perm], PATH3_SIGNS * S8, atol=1e-12)


def test_star_state_is_stabilized_by_generators():
    v = graph_state_vector(Graph.star(3))
    for lit in ("XZZ", "ZXI", "ZIX"):
        p = PauliString.parse(lit)
        assert np.allclose(to_dense(p) @ v, v)


@pytest.mark.parametrize("name", ["complete:3", "path:4", "star:5", "complete:6"])
def test_generators_stabilize_vector(name):
    g = Graph.named(name)
    v = graph_state_vector(g)
    for gen in stabilizer_generators(g).generators:
        assert np.allclose(to_dense(gen) @ v, v)


@pytest.mark.parametrize("name", ["complete:4", "path:4", "star:4", "complete:3"])
def test_expectation_all_strings(name):
    g = Graph.named(name)
    v = graph_state_vector(g)
    s = stabilizer_generators(g)
    for chars in itertools.product("IXYZ", repeat=g.n):
        p = PauliString.parse("".join(chars))
        assert stabilizer_expectation(s, p) == pytest.approx(dense_expectation(v, p), abs=1e-12)
        assert stabilizer_expectation(s, -p) == pytest.approx(-dense_expectation(v, p), abs=1e-12)


def test_expectation_random_strings(rng):
    for n in range(5, 11):
        g = Graph.complete(n) if n % 2 else Graph.path(n)
        v = graph_state_vector(g)
        s = stabilizer_generators(g)
        ops = [random_pauli(n, rng, hermitian=True) for _ in range(10_000 if n <= 7 else 1000)]
        # bias towards group members, otherwise almost all answers are 0
        gens = s.generators
        for _ in range(500):
            pick = [gens[i] for i in range(n) if rng.random() < 0.5]
            ops.append(product(pick, n=n) if pick else PauliString.identity(n))
        ops = [p for p in ops if p.is_hermitian]
        vals = [stabilizer_expectation(s, p) for p in ops]
        dense = [dense_expectation(v, p) for p in ops[:2000]] + [dense_expectation(v, p) for p in ops[-500:]]
        assert np.allclose(vals[:2000] + vals[-500:], dense, atol=1e-12)


def test_complete_graph_large_triples():
    # every B_S with |S| odd containing a triple: <X_i X_j X_k Z_rest> = -1 on K_n
    for n in (16, 64, 256):
        s = stabilizer_generators(Graph.complete(n))
        for (i, j, k) in [(1, 2, 3), (2, n // 2, n), (n - 2, n - 1, n)]:
            ops = [embed("X" if q in (i, j, k) else "Z", q, n) for q in range(1, n + 1)]
            assert stabilizer_expectation(s, product(ops, n=n)) == -1
        ops = [embed("X" if q == 1 else "Z", q, n) for q in range(1, n + 1)]
        assert stabilizer_expectation(s, product(ops, n=n)) == 1


def test_projector_oracle():
    for name in ("complete:4", "star:4", "path:5"):
        g = Graph.named(name)
        assert np.allclose(stabilizer_state_vector(stabilizer_generators(g)),
                           graph_state_vector(g), atol=1e-12)


def test_group_validation():
    with pytest.raises(ValueError):
        StabilizerGroup([PauliString.parse("XI"), PauliString.parse("ZI")])  # anticommute
    with pytest.raises(ValueError):
        StabilizerGroup([PauliString.parse("XX"), PauliString.parse("XX")])  # dependent
    with pytest.raises(ValueError):
        StabilizerGroup([PauliString.parse("iXI"), PauliString.parse("IZ")])  # not Hermitian


def test_non_hermitian_query_rejected():
    s = stabilizer_generators(Graph.complete(3))
    with pytest.raises(ValueError):
        stabilizer_expectation(s, PauliString.parse("iXZZ"))


def test_disconnected_graph_warns():
    with pytest.warns(UserWarning):
        stabilizer_generators(Graph.from_edges(4, [(1, 2)]))


def test_graph_json_round_trip():
    g = Graph.star(5, center=3)
    assert Graph.from_json(g.to_json()) == g


def test_fix_global_phase():
    v = graph_state_vector(Graph.complete(3)) * np.exp(0.7j)
    assert np.allclose(fix_global_phase(v), K3_SIGNS * S8)


def test_bad_graphs():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 4)])
    with pytest.raises(ValueError):
        Graph.named("wheel:5")
