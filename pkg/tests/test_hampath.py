import random
from itertools import combinations

import pytest

from bubblestar.cayley import bubble_sort_star, canonical_matchings, cross_edges
from bubblestar.graph import FaultSet, apply_faults, canon
from bubblestar.hampath import (
    FOUND,
    PARITY_OBSTRUCTION,
    ConstructionError,
    HamPath,
    Rejection,
    decompose_fault,
    ham_path,
    parity_obstructed,
    pm_from_path,
    random_structured_fault,
    stitched_path,
    stitched_pm,
    structured_fault,
    verify_path,
)
from bubblestar.matching import PERFECT, verify_matching
from bubblestar.permcore import Transposition
from bubblestar.preclusion import is_preclusion_set


def test_ham_path_example(bs4):
    a, b = bs4.index("1234"), bs4.index("2134")
    res = ham_path(bs4, a, b)
    assert res.status == FOUND and res.path.verify()
    assert res.path.vertices[0] == a and res.path.vertices[-1] == b
    assert len(res.path) == 24 and len(res.path.edges()) == 23
    assert res.path.labels()[0] == "1234"


def test_ham_path_parity_obstruction(bs4):
    a, b = bs4.index("1234"), bs4.index("2314")  # both even
    res = ham_path(bs4, a, b)
    assert res.status == PARITY_OBSTRUCTION and not res and res.nodes == 0


def test_ham_path_bad_endpoints(bs3):
    with pytest.raises(ValueError):
        ham_path(bs3, 0, 0)
    view = apply_faults(bs3, FaultSet.of_vertices([1]))
    with pytest.raises(ValueError):
        ham_path(view, 1, 2)


@pytest.mark.parametrize("n", [3, 4])
def test_every_opposite_pair_is_joined(n):
    g = bubble_sort_star(n)
    for a, b in combinations(range(g.order), 2):
        res = ham_path(g, a, b)
        if g.side[a] == g.side[b]:
            assert res.status == PARITY_OBSTRUCTION
        else:
            assert res.status == FOUND and res.path.verify()


def test_parity_obstruction_with_deleted_vertex(bs4):
    # 23 vertices: endpoints must both lie in the larger class
    view = apply_faults(bs4, FaultSet.of_vertices([0]))
    odd = [v for v in range(24) if bs4.side[v] != bs4.side[0]]
    even = [v for v in range(1, 24) if bs4.side[v] == bs4.side[0]]
    assert not parity_obstructed(view, odd[0], odd[1])
    assert parity_obstructed(view, odd[0], even[0])
    res = ham_path(view, odd[0], odd[1])
    assert res.status == FOUND and verify_path(view, res.path.vertices)


def test_verify_path_rejects():
    g = bubble_sort_star(3)
    assert not verify_path(g, [0, 1, 2])
    assert not verify_path(g, [0, 0, 1, 2, 3, 4])


def test_pm_from_path(bs4):
    path = ham_path(bs4, 0, 1).path
    m = pm_from_path(path)
    assert len(m) == 12 and verify_matching(bs4, m, PERFECT)
    assert pm_from_path([5, 7]).edges == {(5, 7)}
    with pytest.raises(ValueError):
        pm_from_path([1, 2, 3])
    with pytest.raises(ValueError):
        pm_from_path(HamPath((0, 1, 2), bs4))


def test_decompose_fault_round_trip(bs5):
    rng = random.Random(3)
    for _ in range(30):
        sf = random_structured_fault(bs5, rng)
        f = sf.faults()
        assert len(f) == 7
        assert decompose_fault(bs5, f) == sf
        assert not sf.trivial and not is_preclusion_set(bs5, f)


def test_decompose_fault_trivial_flag(bs5):
    sf = random_structured_fault(bs5, random.Random(0), trivial=True)
    assert sf.trivial
    assert decompose_fault(bs5, sf.faults()).trivial
    assert sf.faults() == FaultSet.of_edges((sf.u, w) for w in bs5.neighbors(sf.u))
    with pytest.raises(ValueError):
        stitched_path(bs5, sf)


def test_decompose_fault_rejections(bs4, bs5):
    plus, minus = canonical_matchings(bs5)
    u = 0
    inner = [canon(u, w) for w in bs5.neighbors(u) if bs5.last(w) == bs5.last(u)]
    pe = plus.sorted_edges()[5]
    spare = [e for e in bs5.edges if e not in plus.edges and e not in minus.edges and e not in inner]
    r = decompose_fault(bs5, FaultSet.of_edges(inner + [pe, spare[-1]]))
    assert isinstance(r, Rejection) and not r and "M-" in r.reason
    me = minus.sorted_edges()[5]
    r = decompose_fault(bs5, FaultSet.of_edges(inner + [me, spare[-1]]))
    assert "M+" in r.reason
    assert "expected" in decompose_fault(bs5, FaultSet.of_edges(inner)).reason
    assert not decompose_fault(bs5, FaultSet.of_vertices([0]))
    assert not decompose_fault(bubble_sort_star(3), FaultSet())


def test_structured_fault_trivial_when_both_edges_at_u(bs5):
    u = 17
    pe = canon(u, bs5.step(u, Transposition(1, 5)))
    me = canon(u, bs5.step(u, Transposition(4, 5)))
    assert structured_fault(bs5, u, pe, me).trivial


def test_stitched_pm_many_faults(bs5):
    rng = random.Random(2024)
    for _ in range(100):
        sf = random_structured_fault(bs5, rng)
        m = stitched_pm(bs5, sf)
        view = apply_faults(bs5, sf.faults())
        assert verify_matching(view, m, PERFECT)
        assert len(m) == 60


def test_stitched_path_shape(bs5):
    sf = random_structured_fault(bs5, random.Random(9))
    hp = stitched_path(bs5, sf)
    assert hp.vertices[0] == sf.u and hp.verify()
    copies = [bs5.last(v) for v in hp.vertices[1:]]
    # after leaving u the walk visits each copy in one contiguous run, ending in u's copy
    runs = [c for k, c in enumerate(copies) if k == 0 or copies[k - 1] != c]
    assert sorted(runs) == [1, 2, 3, 4, 5] and runs[-1] == sf.copy_index


def test_stitched_construction_needs_n5(bs4):
    sf = structured_fault(bs4, 0, canonical_matchings(bs4)[0].sorted_edges()[3],
                          canonical_matchings(bs4)[1].sorted_edges()[3])
    with pytest.raises(ValueError):
        stitched_path(bs4, sf)


def test_tiny_retry_cap_raises(bs5):
    sf = random_structured_fault(bs5, random.Random(1))
    with pytest.raises(ConstructionError, match="stitching") as info:
        stitched_path(bs5, sf, budget=1, retry_cap=1)
    assert info.value.copy_index in range(1, 6)


def test_cross_edge_supply(bs5):
    plus, minus = canonical_matchings(bs5)
    for i, j in combinations(range(1, 6), 2):
        es = set(cross_edges(bs5, i, j))
        assert len(es & plus.edges) == 6 and len(es & minus.edges) == 6
