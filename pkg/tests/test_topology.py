import itertools

import pytest

from rhombusnet.topology import (
    ChainSpec,
    InvalidHostError,
    InvalidSpecError,
    automorphism_check,
    build_branch,
    build_chain,
    host_random_connected,
    host_single_node,
    host_triangle,
    parse_host,
)


def brute_chain_edges(orders):
    """Independent enumeration of the construction rule: junction k sits at
    k + sum(orders[:k]); interiors of block r fill the gap and link to both
    flanking junctions."""
    junctions = [k + sum(orders[:k]) for k in range(len(orders) + 1)]
    edges = set()
    for r, n in enumerate(orders):
        interiors = range(junctions[r] + 1, junctions[r] + 1 + n)
        for node in interiors:
            edges.add((junctions[r], node))
            edges.add((node, junctions[r + 1]))
    return {(min(i, j), max(i, j)) for i, j in edges}


def test_node_and_edge_counts_examples():
    t = build_chain([3, 2, 4])
    assert t.node_count == 13
    assert t.edge_count == 18

    t = build_chain([1])
    assert t.node_count == 3
    assert t.edge_count == 2

    t = build_chain([2, 2])
    assert t.node_count == 7
    assert t.edge_count == 8


def test_smallest_chain_is_a_path():
    t = build_chain([1])
    assert set(t.edges) == {(0, 1), (1, 2)}


def test_edge_set_matches_brute_enumeration():
    for orders in ([2, 2], [3, 2, 4], [1, 5], [4], [1, 1, 1, 1]):
        t = build_chain(orders)
        assert set(t.edges) == brute_chain_edges(orders)


def test_junction_numbering_convention():
    spec = ChainSpec((3, 2, 4))
    t = build_chain(spec)
    assert t.junctions == (0, 4, 7, 12)
    for k, node in enumerate(t.junctions):
        assert node == k + spec.cumulative_order(k)
        assert t.roles[node] == ("junction", k)
    for r, block in enumerate(t.interiors):
        assert len(block) == spec.orders[r]
        for node in block:
            assert t.roles[node] == ("interior", r)


def test_orbit_count_and_sizes():
    for orders in ([2, 2], [3, 2, 4], [1, 1, 1], [5]):
        t = build_chain(orders)
        assert t.orbit_count == 2 * len(orders)
        sizes = [t.orbits.count(k) for k in range(t.orbit_count)]
        expected = [n for pair in zip(orders, orders) for n in pair]
        assert sizes == expected


def test_orbit_edges_share_junction_and_side():
    t = build_chain([3, 2, 4])
    for orbit in range(t.orbit_count):
        members = [e for e, o in zip(t.edges, t.orbits) if o == orbit]
        block = orbit // 2
        junction = t.junctions[block + (orbit % 2)]
        for i, j in members:
            assert junction in (i, j)
            interior = j if i == junction else i
            assert interior in t.interiors[block]


@pytest.mark.parametrize(
    "orders",
    [[2, 2], [3, 2, 4], [1], [10, 1, 10], [2, 3, 4, 5], [1, 2, 3, 4, 5, 6]],
)
def test_count_formulas_hold(orders):
    t = build_chain(orders)
    assert t.node_count == len(orders) + 1 + sum(orders)
    assert t.edge_count == 2 * sum(orders)


def test_automorphism_check_on_built_chains():
    for orders in itertools.product((1, 2, 3, 4), repeat=2):
        assert automorphism_check(build_chain(list(orders)))
    assert automorphism_check(build_chain([3, 2, 4]))
    assert automorphism_check(build_chain([10, 9, 10, 2]))


def test_automorphism_check_fails_with_deleted_edge():
    import dataclasses

    t = build_chain([3, 2, 4])
    # drop one edge of a multi-edge orbit; the swap no longer preserves edges
    victim = t.interiors[0][0]
    keep = [(e, o) for e, o in zip(t.edges, t.orbits) if e != (0, victim)]
    broken = dataclasses.replace(
        t,
        edges=tuple(e for e, _ in keep),
        orbits=tuple(o for _, o in keep),
    )
    assert not automorphism_check(broken)


def test_invalid_specs_rejected():
    with pytest.raises(InvalidSpecError):
        ChainSpec(())
    with pytest.raises(InvalidSpecError):
        ChainSpec((3, 0))
    with pytest.raises(InvalidSpecError):
        ChainSpec.from_text("")
    with pytest.raises(InvalidSpecError):
        ChainSpec.from_text("2,x")


def test_spec_text_and_dict_roundtrip():
    spec = ChainSpec.from_text("3, 2, 4")
    assert spec.orders == (3, 2, 4)
    assert spec.to_text() == "3,2,4"
    assert spec.as_dict() == {"orders": [3, 2, 4]}


def test_topology_export_shape():
    t = build_chain([2, 2])
    d = t.as_dict()
    assert d["node_count"] == 7
    assert len(d["edges"]) == 8
    assert all(len(e) == 3 for e in d["edges"])     # (i, j, orbit)
    assert {r["kind"] for r in d["roles"]} == {"junction", "interior"}


def test_branch_counts():
    b = build_branch([3, 2, 4], host_single_node())
    assert b.node_count == 14
    assert len(b.edges) == 19

    b = build_branch([2], host_triangle())
    assert b.node_count == 4 + 3
    assert len(b.edges) == 4 + 3 + 1


def test_branch_of_path_is_longer_path():
    b = build_branch([1], host_single_node())
    assert set(b.edges) == {(0, 1), (1, 2), (2, 3)}


def test_bridge_leaves_far_junction():
    b = build_branch([2, 2], host_triangle(), attach=1)
    assert b.bridge[0] == b.chain.junctions[-1]
    assert b.bridge[1] == b.chain.node_count + 1


def test_branch_parameter_slots():
    b = build_branch([2, 2], host_triangle())
    assert b.parameter_count == 4 + 1 + 3
    slots = [s for _, _, s in b.parameter_edges()]
    assert sorted(set(slots)) == list(range(8))


def test_disconnected_host_rejected():
    bad = parse_host("random:6:0.0:1")     # tree, connected
    assert bad.is_connected()
    from rhombusnet.topology import HostGraph

    disconnected = HostGraph(4, ((0, 1), (2, 3)))
    with pytest.raises(InvalidHostError):
        build_branch([2], disconnected)
    with pytest.raises(InvalidHostError):
        build_branch([2], host_triangle(), attach=7)


def test_host_parsing_and_generation():
    assert parse_host("node").node_count == 1
    assert parse_host("triangle").edges == ((0, 1), (1, 2), (0, 2))
    g = parse_host("random:8:0.3:42")
    assert g.node_count == 8 and g.is_connected()
    assert parse_host("random:8:0.3:42").edges == g.edges   # seed-deterministic
    assert host_random_connected(1, 0.5, 0).node_count == 1
    with pytest.raises(InvalidHostError):
        parse_host("pentagon")
