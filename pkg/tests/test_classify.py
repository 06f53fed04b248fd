import pytest

from gph.classify import (
    is_acyclic,
    is_acyclic_bounded,
    is_acyclic_fibration,
    is_covering,
    is_folding,
    is_injecting,
    is_rooted_forest,
    is_rooted_tree,
    is_surjecting,
    is_whiskering,
)
from gph.corpus import curated_morphisms, de_bruijn_covering, random_whiskering, two_loops_to_one
from gph.cycles import BasedCycle
from gph.factorization import attach_forest, find_injectivity_violation, fold_generator, source_generator
from gph.graph import (
    Graph,
    GraphMorphism,
    bouquet,
    coproduct,
    cycle_graph,
    cycle_shift,
    cycle_wrap,
    identity,
    path_graph,
)

S = source_generator()
FOLD = fold_generator()


def test_surjecting_examples():
    assert is_surjecting(identity(bouquet(2)))
    v = is_surjecting(S)
    assert not v and v.witness == {"node": 0, "missing_arc": 0}
    assert is_surjecting(cycle_wrap(4, 2))


def test_injecting_examples():
    v = is_injecting(FOLD)
    assert not v and v.witness == {"node": 0, "arcs": [0, 1], "image": 0}
    assert is_injecting(S)
    assert is_injecting(cycle_wrap(4, 2))


def test_covering_examples():
    assert is_covering(cycle_wrap(4, 2))
    v = is_covering(S)
    assert not v and v.witness["kind"] == "not-surjective"
    assert is_covering(de_bruijn_covering())
    assert is_covering(FOLD).witness["kind"] == "not-injective"


def test_whiskering_examples():
    v = is_whiskering(S)
    assert v
    assert len(v.data.trees) == 1 and v.data.extra_arcs == 1
    assert is_whiskering(cycle_shift(4, 1))
    assert is_whiskering(identity(bouquet(3))).data.extra_arcs == 0
    x = cycle_graph(2)
    add_loop = coproduct([x, cycle_graph(1)]).legs[0]
    assert not is_whiskering(add_loop)
    assert not is_whiskering(FOLD)


def test_whiskering_of_attached_forest():
    forest = Graph.from_arcs(5, [(0, 1), (1, 2), (3, 4)])
    w = attach_forest(cycle_graph(3), forest, {0: 1, 3: 1})
    v = is_whiskering(w)
    assert v and v.data.extra_arcs == 3
    assert sorted(len(t.nodes) for t in v.data.trees) == [3]


def test_rooted_trees_and_forests():
    t = is_rooted_tree(path_graph(4))
    assert t and t.data == 0
    assert not is_rooted_tree(cycle_graph(3))
    f = is_rooted_forest(coproduct([path_graph(1), path_graph(2)]).apex)
    assert f and f.data == [0, 2]
    assert not is_rooted_forest(Graph.from_arcs(2, [(0, 1), (0, 1)]))


def test_bounded_examples():
    assert is_acyclic_bounded(identity(bouquet(2)), 7)
    w = attach_forest(cycle_graph(3), path_graph(2), {0: 0})
    assert is_acyclic_bounded(w, 6)
    v = is_acyclic_bounded(two_loops_to_one(), 1)
    assert not v and v.witness["n"] == 1 and v.witness["kind"] == "collision"


def test_bounded_counting_route_agrees_with_enumeration():
    f = de_bruijn_covering()
    by_enum = is_acyclic_bounded(f, 12)
    by_count = is_acyclic_bounded(f, 12, enum_limit=0)
    assert not by_enum and not by_count
    assert by_enum.witness["n"] == by_count.witness["n"] == 1
    w = attach_forest(bouquet(2), path_graph(3), {0: 0})
    assert is_acyclic_bounded(w, 20, enum_limit=0)


def test_acyclic_examples():
    v = is_acyclic(two_loops_to_one())
    assert not v and v.witness["part"] == "injectivity"
    assert is_acyclic(S)
    assert is_acyclic(identity(cycle_graph(4)))


def test_acyclic_spectrum_part():
    v = is_acyclic(cycle_wrap(4, 2))
    assert not v and v.witness["part"] == "injectivity"
    inc = GraphMorphism(Graph.from_arcs(1), cycle_graph(1), [0], [])
    v = is_acyclic(inc)
    assert not v and v.witness["part"] == "spectrum"


def test_de_bruijn_covering_is_not_acyclic():
    f = de_bruijn_covering()
    assert is_covering(f)
    v = is_acyclic(f)
    assert not v and v.witness["part"] == "injectivity"
    assert not is_acyclic_fibration(f)


def test_acyclic_fibration_examples():
    assert is_acyclic_fibration(identity(bouquet(2)))
    v = is_acyclic_fibration(S)
    assert not v and v.witness["failed"] == "surjecting"


def test_folding_examples():
    assert is_folding(FOLD)
    assert is_folding(identity(cycle_graph(3)))
    assert not is_folding(S)
    assert is_folding(curated_morphisms()["bouquet4_2"])


def test_injectivity_violation_examples():
    assert find_injectivity_violation(identity(bouquet(2))) is None
    c1, c2 = find_injectivity_violation(two_loops_to_one())
    assert {c1, c2} == {BasedCycle((0,), (0,)), BasedCycle((1,), (1,))}
    c1, c2 = find_injectivity_violation(de_bruijn_covering())
    assert c1 != c2 and c1.image(de_bruijn_covering()) == c2.image(de_bruijn_covering())


def test_whiskerings_are_acyclic(rng):
    for _ in range(30):
        w = random_whiskering(rng, Graph.from_arcs(3, [(0, 1), (1, 0), (1, 2), (2, 2)]))
        assert is_whiskering(w) and is_acyclic(w)
