from fractions import Fraction

import numpy as np
import pytest

from trilab.gadgets import (
    Graph,
    GraphFormatError,
    clique_number,
    complete_graph,
    cycle_graph,
    find_3coloring,
    format_graph,
    maximal_cliques,
    motzkin_straus_value,
    parse_graph,
    path_graph,
    petersen_graph,
    star_graph,
    three_colorable,
)

from corpus import corpus_graphs
from oracles import clique_number_bruteforce, projected_gradient_edge_form


def test_parse_and_format_roundtrip():
    text = "4 3\n1 2\n# a comment\n2 3\n\n3 4\n"
    g = parse_graph(text)
    assert g.n == 4 and g.m == 3
    assert parse_graph(format_graph(g)) == g


def test_parse_errors_carry_positions():
    with pytest.raises(GraphFormatError, match="line 1"):
        parse_graph("")
    with pytest.raises(GraphFormatError, match="line 2.*column 3"):
        parse_graph("2 1\n1 x\n")
    with pytest.raises(GraphFormatError, match="line 2"):
        parse_graph("2 1\n1 1\n")
    with pytest.raises(GraphFormatError, match="line 2"):
        parse_graph("2 1\n1 3\n")
    with pytest.raises(GraphFormatError, match="declared 2 edges"):
        parse_graph("2 2\n1 2\n")
    with pytest.raises(GraphFormatError, match="duplicate"):
        parse_graph("3 2\n1 2\n2 1\n")


def test_graph_invariants():
    with pytest.raises(ValueError, match="loop"):
        Graph(2, ((0, 0),))
    with pytest.raises(ValueError, match="duplicate"):
        Graph(3, ((0, 1), (1, 0)))
    with pytest.raises(ValueError, match="out of range"):
        Graph(2, ((0, 2),))


def test_edges_sorted_canonically():
    g = Graph(4, ((3, 2), (1, 0), (2, 0)))
    assert g.edges == ((0, 1), (0, 2), (2, 3))


def test_clique_number_vs_bruteforce():
    rng = np.random.default_rng(0)
    for _ in range(10):
        n = int(rng.integers(2, 8))
        edges = tuple(
            (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5
        )
        g = Graph(n, edges)
        assert clique_number(g) == clique_number_bruteforce(n, edges)


def test_clique_number_examples():
    assert clique_number(complete_graph(3)) == 3
    assert clique_number(Graph(4, ())) == 1
    assert clique_number(cycle_graph(5)) == 2
    assert clique_number(petersen_graph()) == 2


def test_maximal_cliques_k4_minus_edge():
    g = Graph(4, ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3)))  # K4 minus {2,3}
    assert maximal_cliques(g) == [[0, 1, 2], [0, 1, 3]]


def test_motzkin_examples():
    assert motzkin_straus_value(complete_graph(3)) == Fraction(1, 3)
    assert motzkin_straus_value(Graph(4, ())) == Fraction(0)
    assert motzkin_straus_value(cycle_graph(5)) == Fraction(1, 4)


def test_motzkin_identity_exact_on_corpus():
    for name, g in corpus_graphs():
        omega = clique_number(g)
        assert 2 * motzkin_straus_value(g) == 1 - Fraction(1, omega), name


def test_motzkin_vs_projected_gradient():
    for g in (complete_graph(4), cycle_graph(5), petersen_graph()):
        exact = float(motzkin_straus_value(g))
        approx = projected_gradient_edge_form(g.adjacency(), seed=1)
        assert approx == pytest.approx(exact, abs=2e-5)


def test_three_coloring_oracle():
    assert three_colorable(complete_graph(3))
    assert not three_colorable(complete_graph(4))
    assert three_colorable(cycle_graph(5))
    assert three_colorable(petersen_graph())
    col = find_3coloring(cycle_graph(5))
    for i, j in cycle_graph(5).edges:
        assert col[i] != col[j]


def test_exact_caps():
    big = Graph(17, ())
    with pytest.raises(ValueError):
        clique_number(big)
    with pytest.raises(ValueError):
        motzkin_straus_value(big)
