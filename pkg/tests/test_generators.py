import networkx as nx
import pytest

from hornmaxsat.generators import (PhpParams, UrqParams, combine, gen_php, gen_urq, php_pigeon_counts,
                                   php_var, suite, urq_graph)
from oracles import brute_sat, glucose_sat


def test_php_layout():
    f, layout = gen_php(PhpParams(2))
    assert f.num_vars == 6 and len(f.clauses) == 3 + 2 * 3
    assert f.clauses[0] == (1, 2)
    assert layout["x[3,2]"] == php_var(2, 3, 2) == 6
    assert layout.name_of(4) == "x[2,2]"


@pytest.mark.parametrize("enc", ["pairwise", "seqcounter"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_php_unsat(enc, m):
    f, _ = gen_php(PhpParams(m, enc))
    if f.num_vars <= 16:
        assert brute_sat(f.num_vars, f.clauses) is None
    assert not glucose_sat(f.clauses)


def test_seqcounter_variant_grows_linearly():
    sizes = [len(gen_php(PhpParams(m, "seqcounter"))[0].clauses) for m in (10, 20)]
    assert sizes[1] < 5 * sizes[0]


def test_bad_params():
    with pytest.raises(ValueError):
        PhpParams(0)
    with pytest.raises(ValueError):
        PhpParams(2, "ladder")
    with pytest.raises(ValueError):
        UrqParams(2)


def test_urq_graph_is_connected_5_regular():
    edges, charges = urq_graph(UrqParams(4, 3, 2))
    g = nx.MultiGraph()
    g.add_edges_from(edges)
    assert g.number_of_nodes() == 2 * 4 * 4
    assert all(d == 5 for _, d in g.degree())
    assert nx.is_connected(g)
    assert sum(charges) % 2 == 1


def test_urq_unsat_and_flip_sat():
    u = UrqParams(3, 1, 1)
    assert not glucose_sat(gen_urq(u).clauses)
    assert glucose_sat(gen_urq(u, flip_node=5).clauses)


def test_urq_seed_and_index_change_the_instance():
    a = gen_urq(UrqParams(3, 1, 1)).clauses
    assert a == gen_urq(UrqParams(3, 1, 1)).clauses
    assert a != gen_urq(UrqParams(3, 1, 2)).clauses
    assert a != gen_urq(UrqParams(3, 2, 1)).clauses


def test_combine_selector():
    php, _ = gen_php(PhpParams(1))
    urq = gen_urq(UrqParams(3))
    f = combine(php, urq)
    s = f.num_vars
    assert f.num_vars == php.num_vars + urq.num_vars + 1
    assert all(c[-1] == s for c in f.clauses[: len(php.clauses)])
    assert all(c[-1] == -s for c in f.clauses[len(php.clauses):])


def test_suite_parameters():
    counts = php_pigeon_counts()
    assert len(counts) == 46 and counts[0] == 5 and counts[-1] == 100
    assert [s.m for s in suite("php-pw")][:2] == [4, 6]
    with pytest.raises(ValueError):
        list(suite("nope"))
