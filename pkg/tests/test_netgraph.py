"""Network validation, compilation to transfer matrices, and realization."""

from __future__ import annotations

import random

import pytest

from lmuc.fixtures import NETWORK_FIXTURES, load_json, load_lmuc, load_network
from lmuc.gf import canonical_field, mat_from_rows
from lmuc.netgraph import (
    Edge,
    Network,
    NetworkCode,
    compile_network,
    network_from_json,
    network_to_json,
    realize,
    validate_network,
)
from conftest import random_lmuc

GF2 = canonical_field(2, 1)
GF3 = canonical_field(3, 1)
GF5 = canonical_field(5, 1)
GF11 = canonical_field(11, 1)

EX8_F = [[1, 0, 2, 3], [0, 4, 5, 0], [6, 7, 0, 0]]
EEE1_F = [[1, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]]
EEE2_F = [[1, 1, 1], [1, 1, 0], [1, 0, 1]]


def chain_network() -> tuple[Network, NetworkCode]:
    net = Network(
        vertices=("S1", "V", "T1"),
        edges=(Edge("e1", "S1", "V"), Edge("e2", "V", "T1")),
        sources=("S1",),
        terminals=("T1",),
    )
    return net, NetworkCode({"V": mat_from_rows([[1]], GF2)})


class TestValidate:
    @pytest.mark.parametrize("name", NETWORK_FIXTURES)
    def test_fixture_networks_pass(self, name):
        net, _, _ = load_network(name)
        report = validate_network(net)
        assert report.ok, report.violations

    def test_figure1_shape(self):
        net, _, _ = load_network("fig1_network")
        assert net.n == 2
        assert len(net.intermediates()) == 8
        assert len(net.edges) == 16

    def test_two_cycle_fails_acyclicity(self):
        net = Network(
            vertices=("S1", "A", "B", "T1"),
            edges=(
                Edge("e1", "S1", "A"),
                Edge("e2", "A", "B"),
                Edge("e3", "B", "A"),
                Edge("e4", "B", "T1"),
            ),
            sources=("S1",),
            terminals=("T1",),
        )
        report = validate_network(net)
        assert not report.ok
        assert any(v.startswith("(A)") for v in report.violations)

    def test_edge_into_source_fails_g(self):
        net, _, _ = load_network("fig1_network")
        bad = Network(
            vertices=net.vertices,
            edges=net.edges + (Edge("bad", net.sources[1], net.sources[0]),),
            sources=net.sources,
            terminals=net.terminals,
        )
        report = validate_network(bad)
        assert not report.ok
        assert any(v.startswith("(G)") and "S" in v for v in report.violations)

    def test_source_terminal_overlap_fails_e(self):
        net = Network(("A", "B"), (Edge("e", "A", "B"),), ("A", "B"), ("B", "A"))
        assert any(
            v.startswith("(E)") for v in validate_network(net).violations
        )

    def test_unreachable_terminal_fails_f(self):
        net = Network(
            vertices=("S1", "T1"),
            edges=(),
            sources=("S1",),
            terminals=("T1",),
        )
        report = validate_network(net)
        assert any(v.startswith("(F)") for v in report.violations)

    def test_stranded_vertex_fails_h(self):
        net, code = chain_network()
        bad = Network(
            net.vertices + ("W",), net.edges, net.sources, net.terminals
        )
        report = validate_network(bad)
        assert any(v.startswith("(H)") and "W" in v for v in report.violations)

    def test_edge_list_must_be_linear_extension(self):
        net, _ = chain_network()
        reordered = Network(
            net.vertices, (net.edges[1], net.edges[0]), net.sources, net.terminals
        )
        report = validate_network(reordered)
        assert any("(order)" in v for v in report.violations)


class TestCompile:
    def test_trivial_relay(self):
        net, code = chain_network()
        lmuc = compile_network(net, code, GF2)
        assert (lmuc.n, lmuc.s, lmuc.t) == (1, (1,), (1,))
        assert lmuc.F.entries == (1,)

    def test_figure2_code_f1_blocks(self):
        net, code, fld = load_network("fig2_network_f1")
        lmuc = compile_network(net, code, fld)
        assert fld.q == 3
        assert lmuc.block(0, 0).row_list() == [(1, 0), (0, 1)]
        assert lmuc.block(1, 1).row_list() == [(1, 0), (0, 1)]
        assert lmuc.block(0, 1).row_list() == [(0, 0), (0, 0)]
        assert lmuc.block(1, 0).row_list() == [(1, 1), (1, 1)]
        assert lmuc.F.entries == load_lmuc("ex4_lmuc_l1").F.entries

    def test_figure2_code_f2_blocks(self):
        net, code, fld = load_network("fig2_network_f2")
        lmuc = compile_network(net, code, fld)
        assert lmuc.block(1, 0).row_list() == [(1, 1), (1, 2)]
        assert lmuc.F.entries == load_lmuc("ex4_lmuc_l2").F.entries

    def test_example8_both_codes_induce_same_matrix(self):
        ref = load_lmuc("ex8_lmuc")
        assert ref.F.row_list() == [tuple(r) for r in EX8_F]
        for name in ("fig3_network_ex8a", "fig3_network_ex8b"):
            net, code, fld = load_network(name)
            lmuc = compile_network(net, code, fld)
            assert lmuc.F.entries == ref.F.entries
            assert (lmuc.s, lmuc.t) == (ref.s, ref.t)

    def test_figure4_and_figure5_match_example_channels(self):
        net, code, fld = load_network("fig4_network")
        assert compile_network(net, code, fld).F.row_list() == [
            tuple(r) for r in EEE1_F
        ]
        net, code, fld = load_network("fig5_network")
        assert compile_network(net, code, fld).F.row_list() == [
            tuple(r) for r in EEE2_F
        ]

    def test_missing_local_matrix_names_vertex(self):
        net, _ = chain_network()
        with pytest.raises(ValueError, match="V"):
            compile_network(net, NetworkCode({}), GF2)

    def test_shape_mismatch_names_vertex(self):
        net, _ = chain_network()
        bad = NetworkCode({"V": mat_from_rows([[1, 1]], GF2)})
        with pytest.raises(ValueError, match="V"):
            compile_network(net, bad, GF2)

    def test_compile_is_deterministic(self):
        net, code, fld = load_network("fig2_network_f2")
        a = compile_network(net, code, fld)
        b = compile_network(net, code, fld)
        assert a.F.entries == b.F.entries


def _random_linear_extension(net: Network, rng: random.Random) -> list[Edge]:
    """A fresh topological edge order: random vertex topological sort, edges
    keyed by tail position with random tie-breaks."""
    indeg = {v: 0 for v in net.vertices}
    for e in net.edges:
        indeg[e.head] += 1
    ready = sorted(v for v, d in indeg.items() if d == 0)
    pos: dict[str, int] = {}
    while ready:
        v = ready.pop(rng.randrange(len(ready)))
        pos[v] = len(pos)
        for e in net.edges:
            if e.tail == v:
                indeg[e.head] -= 1
                if indeg[e.head] == 0:
                    ready.append(e.head)
    return sorted(net.edges, key=lambda e: (pos[e.tail], rng.random()))


def _permuted_network(
    net: Network, code: NetworkCode, rng: random.Random
) -> tuple[Network, NetworkCode]:
    """The same network under a different linear extension, local matrices
    re-indexed to the new incoming/outgoing edge orders."""
    new_edges = tuple(_random_linear_extension(net, rng))
    new_net = Network(net.vertices, new_edges, net.sources, net.terminals)
    new_code = {}
    for v, m in code.matrices.items():
        old_in = [e.id for e in net.in_edges(v)]
        old_out = [e.id for e in net.out_edges(v)]
        new_in = [e.id for e in new_net.in_edges(v)]
        new_out = [e.id for e in new_net.out_edges(v)]
        rows = [
            [m[old_in.index(ei), old_out.index(eo)] for eo in new_out]
            for ei in new_in
        ]
        new_code[v] = mat_from_rows(rows, m.field)
    return new_net, NetworkCode(new_code)


class TestEdgeOrderInvariance:
    @pytest.mark.parametrize("name", NETWORK_FIXTURES)
    def test_recompile_under_any_linear_extension(self, name, rng):
        net, code, fld = load_network(name)
        base = compile_network(net, code, fld)
        for _ in range(5):
            new_net, new_code = _permuted_network(net, code, rng)
            assert validate_network(new_net).ok
            other = compile_network(new_net, new_code, fld)
            # source/terminal edge orders may permute; map coordinates back
            row_map, col_map = [], []
            for i, src in enumerate(net.sources):
                old = [e.id for e in net.out_edges(src)]
                off = sum(base.s[:i])
                row_map += [off + old.index(e.id) for e in new_net.out_edges(src)]
            for j, term in enumerate(net.terminals):
                old = [e.id for e in net.in_edges(term)]
                off = sum(base.t[:j])
                col_map += [off + old.index(e.id) for e in new_net.in_edges(term)]
            for r in range(other.F.rows):
                for c in range(other.F.cols):
                    assert other.F[r, c] == base.F[row_map[r], col_map[c]]


class TestRealize:
    def test_trivial_round_trip(self):
        trivial = random_lmuc(random.Random(1), GF2, 1, 1, 1, True)
        net, code = realize(trivial)
        assert compile_network(net, code, GF2).F.entries == trivial.F.entries

    def test_example8_round_trip(self):
        lmuc = load_lmuc("ex8_lmuc")
        net, code = realize(lmuc)
        assert validate_network(net).ok
        back = compile_network(net, code, lmuc.field)
        assert back.F.entries == lmuc.F.entries
        assert (back.s, back.t) == (lmuc.s, lmuc.t)

    def test_zero_diagonal_block_rejected(self):
        from lmuc.channel import Lmuc

        F = mat_from_rows([[0, 1], [1, 0]], GF3)
        lmuc = Lmuc(GF3, 2, (1, 1), (1, 1), F)
        with pytest.raises(ValueError, match="diagonal block"):
            realize(lmuc)

    def test_random_round_trip(self, rng):
        for _ in range(100):
            lmuc = random_lmuc(rng, GF5, 2, nonzero_diagonal=True)
            net, code = realize(lmuc)
            assert validate_network(net).ok
            back = compile_network(net, code, GF5)
            assert back.F.entries == lmuc.F.entries
            assert (back.s, back.t) == (lmuc.s, lmuc.t)


class TestJsonInterchange:
    def test_round_trip(self):
        obj = load_json("fig2_network_f1")
        net, code, fld = network_from_json(obj)
        again = network_to_json(net, code, fld)
        net2, code2, fld2 = network_from_json(again)
        assert net2 == net
        assert code2.matrices == code.matrices
        assert fld2 == fld

    def test_code_on_non_intermediate_rejected(self):
        obj = load_json("fig2_network_f1")
        obj["code"]["S1"] = {"rows": 1, "cols": 1, "entries": [1]}
        with pytest.raises(ValueError, match="S1"):
            network_from_json(obj)
