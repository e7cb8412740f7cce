from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ibmtest.errors import (
    DimensionMismatchError,
    DirectednessMismatchError,
    DuplicateEdgeError,
    IndexRangeError,
    MalformedLineError,
    SelfLoopError,
)
from ibmtest.graph import Network, SignedNetwork, degree_stats, diff, dump_edge_list, load_edge_list

from conftest import cycle


def test_load_undirected_symmetrizes():
    g = load_edge_list("0 1\n1 2\n")
    assert g.n == 3
    assert g.edges == {(0, 1), (1, 0), (1, 2), (2, 1)}


def test_load_skips_comments_and_blanks():
    g = load_edge_list(b"# header\n\n0 1\n  \n# more\n2 3\n", directed=True)
    assert g.edges == {(0, 1), (2, 3)}


def test_load_one_based():
    g = load_edge_list("1 2\n", one_based=True)
    assert g.n == 2 and (0, 1) in g.edges


def test_reverse_pair_is_same_undirected_edge():
    assert load_edge_list("0 1\n1 0\n").nnz == 2


@pytest.mark.parametrize(
    "text, n, err",
    [
        ("0 0\n", None, SelfLoopError),
        ("0 1\n0 1\n", None, DuplicateEdgeError),
        ("0 5\n", 3, IndexRangeError),
        ("0 1 2\n", None, MalformedLineError),
        ("a b\n", None, MalformedLineError),
        ("-1 2\n", None, MalformedLineError),
        ("# nothing\n", None, MalformedLineError),
    ],
)
def test_load_rejects(text, n, err):
    with pytest.raises(err):
        load_edge_list(text, n=n)


def test_dump_round_trip():
    g = Network.from_pairs(6, [(0, 1), (2, 5), (3, 4)], False)
    assert load_edge_list(dump_edge_list(g), n=6) == g
    d = Network.from_pairs(4, [(0, 1), (1, 0), (3, 2)], True)
    assert load_edge_list(dump_edge_list(d, one_based=True), n=4, directed=True, one_based=True) == d


def test_network_is_immutable():
    g = cycle(4)
    with pytest.raises(ValueError):
        g.src[0] = 3


def test_diff_signs():
    a = Network.from_pairs(3, [(0, 1)], False)
    b = Network.from_pairs(3, [(1, 2)], False)
    d = diff(a, b)
    assert d.entries == {(0, 1): 1, (1, 0): 1, (1, 2): -1, (2, 1): -1}
    assert diff(a, a).nnz == 0


def test_diff_mismatches():
    with pytest.raises(DimensionMismatchError):
        diff(cycle(4), cycle(5))
    with pytest.raises(DirectednessMismatchError):
        diff(cycle(4), cycle(4, directed=True))


def test_degree_stats():
    star = Network.from_pairs(5, [(0, i) for i in range(1, 5)], False)
    s = degree_stats(star)
    assert s.avg_degree == Fraction(8, 5) and s.max_degree == 4


def test_signed_from_dense_infers_direction():
    x = np.array([[0, 1, 0], [1, 0, -1], [0, -1, 0]])
    s = SignedNetwork.from_dense(x)
    assert not s.directed
    assert np.array_equal(s.to_dense(), x)
    assert np.array_equal((-s).to_dense(), -x)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 9), st.data())
def test_permute_round_trip(n, data):
    pairs = data.draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                              .filter(lambda p: p[0] < p[1]), max_size=12))
    g = Network.from_pairs(n, pairs, False)
    perm = np.array(data.draw(st.permutations(range(n))))
    inv = np.argsort(perm)
    assert g.permute(perm).permute(inv) == g
