import pytest
import sympy

from gph.corpus import de_bruijn_covering, graph_corpus, random_whiskering
from gph.cycles import BasedCycle, enumerate_cycles
from gph.errors import PreconditionError
from gph.graph import (
    Graph,
    GraphMorphism,
    bouquet,
    coproduct,
    cycle_graph,
    cycle_wrap,
    identity,
    path_graph,
)
from gph.poly import IntegerPolynomial, TruncatedSeries
from gph.zeta import (
    PrimeCensus,
    adjacency_matrix,
    census_from_primes,
    char_poly,
    check_acyclic_preserves_zeta,
    check_covering_divides,
    cycle_counts,
    enumerate_primes,
    euler_product,
    is_almost_isospectral,
    is_isospectral,
    mobius,
    prime_census,
    reversed_char_poly,
    zeta_series,
)

WHISKERED_C3 = Graph.from_arcs(4, [(0, 1), (1, 2), (2, 0), (1, 3)])


# -- cycles ----------------------------------------------------------------------

def test_enumerate_cycles_examples():
    assert len(enumerate_cycles(cycle_graph(3), 3)) == 3
    assert all(enumerate_cycles(path_graph(2), n) == [] for n in range(1, 6))
    loops = enumerate_cycles(bouquet(2), 2)
    assert [c.arcs for c in loops] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_based_cycle_shift_and_period():
    c = BasedCycle.from_arcs(bouquet(2), [0, 1, 0, 1])
    assert c.period() == 2 and not c.is_prime()
    assert c.shift(1).arcs == (1, 0, 1, 0)
    p = BasedCycle.from_arcs(cycle_graph(3), [1, 2, 0])
    assert p.nodes == (1, 2, 0) and p.is_prime()
    with pytest.raises(ValueError):
        BasedCycle.from_arcs(cycle_graph(3), [0, 2])


def test_cycle_counts_equal_enumeration():
    for g in graph_corpus(count=15):
        counts = cycle_counts(g, 5)
        assert counts == [len(enumerate_cycles(g, n)) for n in range(1, 6)], g


# -- matrices and polynomials ------------------------------------------------------

def test_adjacency_examples():
    assert adjacency_matrix(bouquet(5)) == [[5]]
    assert adjacency_matrix(path_graph(1)) == [[0, 0], [1, 0]]
    a = adjacency_matrix(cycle_graph(3))
    assert sorted(map(sum, a)) == [1, 1, 1] and all(a[i][i] == 0 for i in range(3))


def test_cycle_count_examples():
    assert cycle_counts(bouquet(2), 5) == [2, 4, 8, 16, 32]
    assert cycle_counts(path_graph(5), 6) == [0] * 6
    assert cycle_counts(cycle_graph(3), 6) == [0, 0, 3, 0, 0, 3]


def test_char_poly_examples():
    assert char_poly(bouquet(4)) == IntegerPolynomial([-4, 1])
    assert char_poly(cycle_graph(3)) == IntegerPolynomial([-1, 0, 0, 1])
    assert char_poly(path_graph(2)) == IntegerPolynomial([0, 0, 0, 1])
    assert reversed_char_poly(bouquet(3)) == IntegerPolynomial([1, -3])
    assert reversed_char_poly(cycle_graph(3)) == IntegerPolynomial([1, 0, 0, -1])
    assert reversed_char_poly(path_graph(2)) == IntegerPolynomial([1])
    assert char_poly(Graph.from_arcs(0)) == IntegerPolynomial([1])


def test_char_poly_matches_sympy():
    x = sympy.symbols("x")
    for g in graph_corpus(seed=3, count=25):
        if g.n_nodes == 0:
            continue
        ref = sympy.Matrix(adjacency_matrix(g)).charpoly(x).all_coeffs()
        assert char_poly(g).coeffs == tuple(int(c) for c in reversed(ref)), g


# -- zeta and primes ---------------------------------------------------------------

def test_zeta_examples():
    assert zeta_series(bouquet(2), 5).integers() == [1, 2, 4, 8, 16, 32]
    assert zeta_series(path_graph(4), 6).integers() == [1, 0, 0, 0, 0, 0, 0]
    assert zeta_series(cycle_graph(3), 7).integers() == [1, 0, 0, 1, 0, 0, 1, 0]


def test_census_examples():
    census = prime_census(bouquet(2), 4)
    assert [census[k] for k in range(1, 5)] == [2, 1, 2, 3]
    assert prime_census(cycle_graph(3), 9).nonzero() == {3: 1}
    assert census.to_json() == {"1": "2", "2": "1", "3": "2", "4": "3"}


def test_census_matches_necklace_formula():
    for n in (2, 3, 5):
        census = prime_census(bouquet(n), 12)
        for k in range(1, 13):
            expected = sum(sympy.mobius(d) * n ** (k // d) for d in sympy.divisors(k)) // k
            assert census[k] == expected


def test_mobius_matches_sympy():
    assert [mobius(k) for k in range(1, 60)] == [int(sympy.mobius(k)) for k in range(1, 60)]


def test_enumerate_primes_examples():
    primes = enumerate_primes(bouquet(2), 2)
    assert [c.arcs for c in primes[1]] == [(0,), (1,)]
    assert [c.arcs for c in primes[2]] == [(0, 1)]
    c6 = enumerate_primes(cycle_graph(6), 6)
    assert {k: len(v) for k, v in c6.items() if v} == {6: 1}
    assert not any(enumerate_primes(path_graph(3), 5).values())
    assert census_from_primes(primes, 2).counts == (2, 1)


def test_euler_product_examples():
    assert euler_product(prime_census(bouquet(2), 3), 3).integers() == [1, 2, 4, 8]
    empty = PrimeCensus(5, (0,) * 5)
    assert euler_product(empty, 5) == TruncatedSeries.one(5)
    assert euler_product(prime_census(cycle_graph(3), 7), 7).integers() == [1, 0, 0, 1, 0, 0, 1, 0]
    with pytest.raises(ValueError):
        euler_product(prime_census(bouquet(2), 3), 5)


# -- spectral predicates --------------------------------------------------------------

def test_isospectrality_examples():
    x = cycle_graph(4)
    plus = coproduct([x, Graph.from_arcs(1)]).apex
    assert is_almost_isospectral(x, plus) and not is_isospectral(x, plus)
    assert is_almost_isospectral(cycle_graph(3), WHISKERED_C3)
    assert not is_almost_isospectral(cycle_graph(2), cycle_graph(3))
    assert not is_isospectral(cycle_graph(2), cycle_graph(3))


def test_covering_divides_examples():
    chk = check_covering_divides(cycle_wrap(4, 2))
    assert chk.divides and chk.quotient == IntegerPolynomial([1, 0, 1]) and not chk.remainder
    assert check_covering_divides(identity(bouquet(2))).quotient == IntegerPolynomial([1])
    db = check_covering_divides(de_bruijn_covering())
    assert db.divides
    assert db.quotient * char_poly(bouquet(2)) == char_poly(de_bruijn_covering().dom)


def test_covering_divides_precondition():
    s = GraphMorphism(Graph.from_arcs(1), path_graph(1), [0], [])
    with pytest.raises(PreconditionError):
        check_covering_divides(s)


def test_acyclic_preserves_zeta(rng):
    for _ in range(10):
        assert check_acyclic_preserves_zeta(random_whiskering(rng, cycle_graph(3)), 10)
    assert check_acyclic_preserves_zeta(identity(bouquet(3)), 10)


def test_de_bruijn_zeta_agrees_but_map_is_not_acyclic():
    f = de_bruijn_covering()
    assert zeta_series(f.dom, 10) == zeta_series(f.cod, 10)
    assert zeta_series(f.dom, 10).integers() == [2**k for k in range(11)]
    with pytest.raises(PreconditionError):
        check_acyclic_preserves_zeta(f, 10)
