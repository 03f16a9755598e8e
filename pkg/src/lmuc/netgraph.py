"""Multiple-unicast networks, fixed linear codes on them, and the
compilation to / realization from end-to-end transfer matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .channel import Lmuc
from .gf import FieldSpec, Mat, field_from_json, mat_from_json, mat_from_rows, vec_mat_mul


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Network:
    """Directed acyclic multigraph. The edge list position is the global
    edge order and must be a linear extension of the edge partial order."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    sources: tuple[str, ...]
    terminals: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.sources)

    def in_edges(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.head == v]

    def out_edges(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.tail == v]

    def intermediates(self) -> list[str]:
        endpoints = set(self.sources) | set(self.terminals)
        return [v for v in self.vertices if v not in endpoints]


@dataclass(frozen=True)
class NetworkCode:
    """One local coding matrix per intermediate vertex; row order = incoming
    edges by global edge order, column order = outgoing edges likewise."""

    matrices: dict[str, Mat]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]


def _reachable_from(net: Network, start: str) -> set[str]:
    adj: dict[str, list[str]] = {v: [] for v in net.vertices}
    for e in net.edges:
        adj[e.tail].append(e.head)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _find_cycle(net: Network) -> list[str] | None:
    adj: dict[str, list[str]] = {v: [] for v in net.vertices}
    for e in net.edges:
        adj[e.tail].append(e.head)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in net.vertices}
    stack: list[str] = []

    def dfs(v: str) -> list[str] | None:
        color[v] = GRAY
        stack.append(v)
        for w in adj[v]:
            if color[w] == GRAY:
                return stack[stack.index(w):] + [w]
            if color[w] == WHITE:
                cycle = dfs(w)
                if cycle:
                    return cycle
        color[v] = BLACK
        stack.pop()
        return None

    for v in net.vertices:
        if color[v] == WHITE:
            cycle = dfs(v)
            if cycle:
                return cycle
    return None


def validate_network(net: Network) -> ValidationReport:
    """Check conditions (A)-(H) plus edge-order linear extension.

    Violations are reported as data; nothing raises.
    """
    violations: list[str] = []
    vset = set(net.vertices)
    for e in net.edges:
        if e.tail not in vset or e.head not in vset:
            violations.append(f"(A) edge {e.id} references unknown vertex")
    if len(set(e.id for e in net.edges)) != len(net.edges):
        violations.append("(A) duplicate edge ids")
    cycle = _find_cycle(net)
    if cycle:
        violations.append(f"(A) directed cycle: {' -> '.join(cycle)}")
    if net.n < 1:
        violations.append("(B) need at least one source-terminal pair")
    if len(set(net.sources)) != len(net.sources):
        violations.append("(C) sources are not distinct")
    if len(set(net.terminals)) != len(net.terminals):
        violations.append("(D) terminals are not distinct")
    if len(net.sources) != len(net.terminals):
        violations.append("(B) source and terminal counts differ")
    overlap = set(net.sources) & set(net.terminals)
    if overlap:
        violations.append(f"(E) vertices both source and terminal: {sorted(overlap)}")

    if not cycle:
        reach = {s: _reachable_from(net, s) for s in net.sources}
        for i, (s, t) in enumerate(zip(net.sources, net.terminals), start=1):
            if t not in reach.get(s, set()):
                violations.append(f"(F) no directed path from {s} to {t} (pair {i})")

        for s in net.sources:
            if net.in_edges(s):
                violations.append(f"(G) source {s} has incoming edges")
        for t in net.terminals:
            if net.out_edges(t):
                violations.append(f"(G) terminal {t} has outgoing edges")

        hits_terminal = set()
        for t in net.terminals:
            rev = Network(
                net.vertices,
                tuple(Edge(e.id, e.head, e.tail) for e in net.edges),
                net.sources,
                net.terminals,
            )
            hits_terminal |= _reachable_from(rev, t)
        from_source = set().union(*reach.values()) if reach else set()
        for v in net.vertices:
            if v not in from_source or v not in hits_terminal:
                violations.append(f"(H) vertex {v} is on no source-terminal path")

        # linear extension: if head(e) reaches tail(e'), e must precede e'
        reach_v = {v: _reachable_from(net, v) for v in net.vertices}
        for idx, e in enumerate(net.edges):
            for jdx in range(idx):
                earlier = net.edges[jdx]
                if earlier.tail in reach_v[e.head]:
                    violations.append(
                        f"(order) edge {earlier.id} must follow edge {e.id} in the edge list"
                    )
    return ValidationReport(ok=not violations, violations=tuple(violations))


def compile_network(net: Network, code: NetworkCode, fld: FieldSpec) -> Lmuc:
    """Propagate per-edge global coding vectors in edge order and read the
    transfer matrix off the terminals' incoming edges."""
    report = validate_network(net)
    if not report.ok:
        raise ValueError("invalid network: " + "; ".join(report.violations))

    s = [len(net.out_edges(src)) for src in net.sources]
    t = [len(net.in_edges(term)) for term in net.terminals]
    s_total = sum(s)
    s_offset = [sum(s[:i]) for i in range(len(s))]

    for v in net.intermediates():
        if v not in code.matrices:
            raise ValueError(f"no local matrix for intermediate vertex {v}")
        m = code.matrices[v]
        a, b = len(net.in_edges(v)), len(net.out_edges(v))
        if (m.rows, m.cols) != (a, b):
            raise ValueError(
                f"local matrix at {v} has shape {m.rows}x{m.cols}, expected {a}x{b}"
            )

    src_index = {v: i for i, v in enumerate(net.sources)}
    coding: dict[str, tuple[int, ...]] = {}
    for e in net.edges:
        if e.tail in src_index:
            i = src_index[e.tail]
            out_pos = [x.id for x in net.out_edges(e.tail)].index(e.id)
            vec = [0] * s_total
            vec[s_offset[i] + out_pos] = 1
            coding[e.id] = tuple(vec)
        else:
            m = code.matrices[e.tail]
            ins = net.in_edges(e.tail)
            col = [x.id for x in net.out_edges(e.tail)].index(e.id)
            vec = (0,) * s_total
            for r, ein in enumerate(ins):
                coeff = m[r, col]
                if coeff:
                    vec = fld.vec_add(vec, fld.vec_scale(coeff, coding[ein.id]))
            coding[e.id] = tuple(vec)

    # column (j, b) of F is the coding vector of T_j's b-th incoming edge
    columns: list[tuple[int, ...]] = []
    for term in net.terminals:
        for e in net.in_edges(term):
            columns.append(coding[e.id])
    f_rows = [[col[r] for col in columns] for r in range(s_total)]
    F = mat_from_rows(f_rows, fld, cols=len(columns))
    return Lmuc(field=fld, n=net.n, s=tuple(s), t=tuple(t), F=F)


def realize(lmuc: Lmuc) -> tuple[Network, NetworkCode]:
    """A canonical network/code pair whose compilation is lmuc.F exactly.

    Left relays carry the transfer-matrix coefficients; right relays sum.
    Zero rows/columns of F are wired with coefficient-0 edges so every
    vertex stays on a source-terminal path.
    """
    fld = lmuc.field
    for i in range(lmuc.n):
        block = lmuc.block(i, i)
        if all(e == 0 for e in block.entries):
            raise ValueError(
                f"diagonal block ({i + 1},{i + 1}) is zero; no S{i + 1}->T{i + 1} "
                "path is realizable by this construction"
            )

    sources = tuple(f"S{i + 1}" for i in range(lmuc.n))
    terminals = tuple(f"T{j + 1}" for j in range(lmuc.n))
    left = [[f"L{i + 1}_{a + 1}" for a in range(lmuc.s[i])] for i in range(lmuc.n)]
    right = [[f"R{j + 1}_{b + 1}" for b in range(lmuc.t[j])] for j in range(lmuc.n)]

    edges: list[Edge] = []
    for i in range(lmuc.n):
        for a in range(lmuc.s[i]):
            edges.append(Edge(f"src{i + 1}_{a + 1}", sources[i], left[i][a]))

    # middle edges, with 0-coefficient repairs for zero rows/columns
    middle: list[tuple[int, int, int, int, int]] = []  # (i, a, j, b, coeff)
    row_off = [sum(lmuc.s[:i]) for i in range(lmuc.n)]
    col_off = [sum(lmuc.t[:j]) for j in range(lmuc.n)]
    for i in range(lmuc.n):
        for a in range(lmuc.s[i]):
            row = lmuc.F.row(row_off[i] + a)
            hits = [
                (i, a, j, b, row[col_off[j] + b])
                for j in range(lmuc.n)
                for b in range(lmuc.t[j])
                if row[col_off[j] + b] != 0
            ]
            if not hits:
                hits = [(i, a, i, 0, 0)]
            middle.extend(hits)
    fed_columns = {(j, b) for (_, _, j, b, _) in middle}
    for j in range(lmuc.n):
        for b in range(lmuc.t[j]):
            if (j, b) not in fed_columns:
                middle.append((j, 0, j, b, 0))
    middle.sort(key=lambda h: (h[0], h[1], h[2], h[3]))
    for i, a, j, b, _ in middle:
        edges.append(Edge(f"m{i + 1}_{a + 1}__{j + 1}_{b + 1}", left[i][a], right[j][b]))
    for j in range(lmuc.n):
        for b in range(lmuc.t[j]):
            edges.append(Edge(f"snk{j + 1}_{b + 1}", right[j][b], terminals[j]))

    vertices = (
        list(sources)
        + [v for grp in left for v in grp]
        + [v for grp in right for v in grp]
        + list(terminals)
    )
    net = Network(tuple(vertices), tuple(edges), sources, terminals)

    matrices: dict[str, Mat] = {}
    for i in range(lmuc.n):
        for a in range(lmuc.s[i]):
            coeffs = [h[4] for h in middle if (h[0], h[1]) == (i, a)]
            matrices[left[i][a]] = mat_from_rows([coeffs], fld)
    for j in range(lmuc.n):
        for b in range(lmuc.t[j]):
            indeg = sum(1 for h in middle if (h[2], h[3]) == (j, b))
            matrices[right[j][b]] = mat_from_rows([[1]] * indeg, fld)
    return net, NetworkCode(matrices)


# ----------------------------------------------------------------------
# JSON interchange


def network_from_json(obj: dict) -> tuple[Network, NetworkCode, FieldSpec]:
    fld = field_from_json(obj["field"])
    net = Network(
        vertices=tuple(obj["vertices"]),
        edges=tuple(Edge(e["id"], e["from"], e["to"]) for e in obj["edges"]),
        sources=tuple(obj["sources"]),
        terminals=tuple(obj["terminals"]),
    )
    code = NetworkCode(
        {v: mat_from_json(m, fld) for v, m in obj.get("code", {}).items()}
    )
    extra = set(code.matrices) - set(net.intermediates())
    if extra:
        raise ValueError(f"code given for non-intermediate vertices: {sorted(extra)}")
    return net, code, fld


def network_to_json(net: Network, code: NetworkCode, fld: FieldSpec) -> dict:
    return {
        "field": fld.to_json(),
        "vertices": list(net.vertices),
        "edges": [{"id": e.id, "from": e.tail, "to": e.head} for e in net.edges],
        "sources": list(net.sources),
        "terminals": list(net.terminals),
        "code": {v: m.to_json() for v, m in sorted(code.matrices.items())},
    }
