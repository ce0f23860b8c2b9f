"""Simple undirected graphs: parsing, cliques, and the simplex edge form.

Vertices are 0-based internally; the text file format is 1-based
("n m" header, then one "i j" line per edge, '#' comments and blank
lines ignored).  Edges are kept sorted lexicographically so every gadget
built from a graph is reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class GraphFormatError(ValueError):
    """Malformed graph file; the message carries line/column positions."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j in self.edges:
            A[i, j] = A[j, i] = 1.0
        return A

    def neighbors(self, v: int) -> list[int]:
        out = []
        for i, j in self.edges:
            if i == v:
                out.append(j)
            elif j == v:
                out.append(i)
        return sorted(out)


def graph_from_edges(n: int, edges_1based) -> Graph:
    return Graph(n, tuple((i - 1, j - 1) for i, j in edges_1based))


def parse_graph(text: str) -> Graph:
    header = None
    edges = []
    n = m = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {raw.strip()!r}")
        for tok in tokens:
            try:
                int(tok)
            except ValueError:
                col = line.index(tok) + 1
                raise GraphFormatError(
                    f"line {lineno}, column {col}: {tok!r} is not an integer"
                ) from None
        a, b = int(tokens[0]), int(tokens[1])
        if header is None:
            header = (a, b)
            n, m = a, b
            if n < 1:
                raise GraphFormatError(f"line {lineno}: vertex count must be positive")
            if m < 0:
                raise GraphFormatError(f"line {lineno}: edge count must be nonnegative")
        else:
            if not (1 <= a <= n and 1 <= b <= n):
                raise GraphFormatError(f"line {lineno}: vertex out of range 1..{n}")
            if a == b:
                raise GraphFormatError(f"line {lineno}: loops are not allowed")
            edges.append((a, b))
    if header is None:
        raise GraphFormatError("line 1: missing 'n m' header")
    if len(edges) != m:
        raise GraphFormatError(f"header declared {m} edges but {len(edges)} were listed")
    try:
        return graph_from_edges(n, edges)
    except ValueError as e:
        raise GraphFormatError(str(e)) from e


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{i + 1} {j + 1}" for i, j in g.edges]
    return "\n".join(lines) + "\n"


def load_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph(fh.read())


# -- constructors -------------------------------------------------------------


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, tuple(outer + spokes + inner))


def induced_subgraph(g: Graph, vertices) -> Graph:
    keep = sorted(set(vertices))
    index = {v: i for i, v in enumerate(keep)}
    edges = tuple(
        (index[i], index[j]) for i, j in g.edges if i in index and j in index
    )
    return Graph(len(keep), edges)


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    edges = tuple(
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    )
    return Graph(n, edges)


# -- cliques and the Motzkin-Straus value -------------------------------------

_EXACT_CAP = 16


def _adj_masks(g: Graph) -> list[int]:
    masks = [0] * g.n
    for i, j in g.edges:
        masks[i] |= 1 << j
        masks[j] |= 1 << i
    return masks


def clique_number(g: Graph) -> int:
    """Exact clique number by exhaustive branch-and-bound (n <= 16)."""
    if g.n > _EXACT_CAP:
        raise ValueError(f"exact clique search capped at {_EXACT_CAP} vertices")
    masks = _adj_masks(g)
    best = 1

    def grow(candidates: int, size: int):
        nonlocal best
        if size + candidates.bit_count() <= best:
            return
        if candidates == 0:
            best = max(best, size)
            return
        while candidates:
            v = (candidates & -candidates).bit_length() - 1
            candidates &= candidates - 1
            if size + 1 + (candidates & masks[v]).bit_count() > best:
                grow(candidates & masks[v], size + 1)

    grow((1 << g.n) - 1, 0)
    return best


def maximal_cliques(g: Graph) -> list[list[int]]:
    """All maximal cliques (Bron-Kerbosch), sorted for determinism."""
    masks = _adj_masks(g)
    out = []

    def bk(r: int, p: int, x: int):
        if p == 0 and x == 0:
            out.append(sorted(v for v in range(g.n) if r >> v & 1))
            return
        pivot_pool = p | x
        pivot = (pivot_pool & -pivot_pool).bit_length() - 1
        cand = p & ~masks[pivot]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            bk(r | 1 << v, p & masks[v], x & masks[v])
            p &= ~(1 << v)
            x |= 1 << v

    bk(0, (1 << g.n) - 1, 0)
    return sorted(out)


def motzkin_straus_value(g: Graph) -> Fraction:
    """Max of the edge form sum_{ij in E} x_i x_j over the simplex, exactly.

    Candidate supports are cliques with uniform weights: a clique of size
    s scores (s-1)/(2s), so the maximum lands on a maximum clique.  The
    projected-gradient oracle in the tests validates this enumeration.
    """
    if g.n > _EXACT_CAP:
        raise ValueError(f"exact enumeration capped at {_EXACT_CAP} vertices")
    best = Fraction(0)
    for clique in maximal_cliques(g):
        s = len(clique)
        value = Fraction(s - 1, 2 * s)
        if value > best:
            best = value
    return best


# -- 3-colorability oracle ----------------------------------------------------


def find_3coloring(g: Graph) -> list[int] | None:
    """A proper 3-coloring as a list of {0,1,2}, or None (exhaustive)."""
    adj = [g.neighbors(v) for v in range(g.n)]
    colors = [-1] * g.n

    def place(v: int) -> bool:
        if v == g.n:
            return True
        for c in range(3):
            if all(colors[u] != c for u in adj[v] if colors[u] >= 0):
                colors[v] = c
                if place(v + 1):
                    return True
                colors[v] = -1
        return False

    return colors[:] if place(0) else None


def three_colorable(g: Graph) -> bool:
    return find_3coloring(g) is not None
