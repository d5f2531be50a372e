from math import comb

import numpy as np
import pytest

from ncselftest.graphs import Graph, StabilizerGroup, graph_state_vector, stabilizer_generators
from ncselftest.inequality import Label, build
from ncselftest.pauli import CapacityError, PauliString, embed, product, to_dense
from ncselftest.realization import (ALT3_OBSERVABLES, CompatibilityError, Realization,
                                    alternative_realization_3, compatibility_report, correlator,
                                    evaluate, ideal_realization, statistics_of, term_values)

PAIRS = [(p, q) for p in "XYZ" for q in "XYZ" if p != q]


def random_local_clifford(rng, n, graph):
    """Graph-state realization conjugated by a random local Clifford, as symbolic strings.

    Qubit j is mapped by X -> s1 P, Z -> s2 Q for a random anticommuting pair.
    """
    maps = []
    for _ in range(n):
        p, q = PAIRS[rng.integers(len(PAIRS))]
        s1, s2 = rng.choice([1, -1], size=2)
        maps.append((p, q, int(s1), int(s2)))

    def image(kind, site):
        p, q, s1, s2 = maps[site - 1]
        op = embed(p if kind == "X" else q, site, n)
        return op if (s1 if kind == "X" else s2) == 1 else -op

    obs = {}
    for i in range(1, n + 1):
        obs[Label("A", i)] = image("X", i)
        obs[Label("B", i)] = image("Z", i)
    gens = []
    for i in range(1, n + 1):
        factors = [image("X", i)] + [image("Z", j) for j in graph.neighbors(i)]
        gens.append(product(factors, n=n))
    return Realization(n, obs, StabilizerGroup(gens), name="clifford")


def random_graph(rng, n):
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < 0.5]
    return Graph.from_edges(n, edges)


def test_ideal_dense_values():
    for n in (3, 4, 5, 6):
        v = evaluate(build(n), ideal_realization(n, "dense"))
        assert abs(v - 4 * comb(n, 3)) <= 1e-9


def test_ideal_symbolic_values():
    for n in (3, 4, 5, 10, 20):
        assert evaluate(build(n), ideal_realization(n)) == 4 * comb(n, 3)


def test_ideal_term_values_saturate():
    ineq = build(6)
    vals = term_values(ineq, ideal_realization(6))
    assert all(v == (1 if c > 0 else -1) for v, c in zip(vals, ineq.coeffs))


def test_local_clifford_symbolic_equals_dense(rng):
    for trial in range(40):
        n = int(rng.integers(3, 7))
        g = Graph.complete(n) if trial % 4 == 0 else random_graph(rng, n)
        r = random_local_clifford(rng, n, g)
        ineq = build(n)
        sym = term_values(ineq, r)
        dense = term_values(ineq, r.to_dense())
        assert np.allclose(sym, dense, atol=1e-12)
        if trial % 4 == 0:
            assert evaluate(ineq, r) == 4 * comb(n, 3)


def test_correlator_single_term():
    r = ideal_realization(4)
    t = build(4).terms[-1]
    assert correlator(r, t) == -1
    assert correlator(r, ("A1", "A2", "A3", "B4")) == -1
    assert correlator(r, ("A1", "B2", "B3", "B4")) == 1


def test_alternative_realization():
    r = alternative_realization_3()
    rep = compatibility_report(r)
    assert rep.admissible and rep.max_commutator() == 0.0
    assert all(v == 0.0 for v in rep.anticommutators_on_state.values())
    assert abs(evaluate(build(3), r) - 4) <= 1e-12


def test_alternative_observables_on_path_state_do_not_saturate():
    obs = {k: to_dense(PauliString.parse(v)) for k, v in ALT3_OBSERVABLES.items()}
    r = Realization(3, obs, graph_state_vector(Graph.path(3)))
    assert evaluate(build(3), r) < 4 - 1e-6


def test_compatibility_detects_violation():
    obs = {f"A{i}": embed("X", i, 3) for i in (1, 2, 3)}
    obs.update({f"B{i}": embed("Z", i, 3) for i in (1, 2, 3)})
    obs["B2"] = embed("Z", 1, 3)  # anticommutes with A1
    r = Realization(3, obs, stabilizer_generators(Graph.complete(3)))
    assert not compatibility_report(r).admissible


def test_non_hermitian_product_raises():
    obs = {f"A{i}": embed("X", i, 3) for i in (1, 2, 3)}
    obs.update({f"B{i}": embed("Z", i, 3) for i in (1, 2, 3)})
    obs["B2"] = embed("X", 1, 3) * embed("Z", 1, 3) * PauliString.parse("iIII")  # Y on qubit 1
    r = Realization(3, obs, stabilizer_generators(Graph.complete(3)))
    with pytest.raises(CompatibilityError):
        correlator(r, ("A1", "B2", "B3"))


def test_dense_validation():
    r = ideal_realization(3, "dense")
    bad = dict(r.observables)
    bad[Label("A", 1)] = 2 * bad[Label("A", 1)]
    with pytest.raises(ValueError):
        Realization(3, bad, r.state)
    with pytest.raises(ValueError):
        Realization(3, r.observables, 2 * r.state)


def test_dense_cap():
    with pytest.raises(CapacityError):
        ideal_realization(13, "dense")


@pytest.mark.parametrize("backend", ["symbolic", "dense"])
def test_json_round_trip(backend):
    r = ideal_realization(4, backend)
    again = Realization.from_json(r.to_json())
    assert again.backend == backend
    assert evaluate(build(4), again) == evaluate(build(4), r)


def test_statistics_of_ideal():
    s = statistics_of(build(3), ideal_realization(3))
    assert s == {("A1", "B2", "B3"): 1.0, ("B1", "A2", "B3"): 1.0,
                 ("B1", "B2", "A3"): 1.0, ("A1", "A2", "A3"): -1.0}
