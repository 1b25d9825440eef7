"""Bipartite alignment graphs and the three optimal-subgraph solvers.

Constraint classes over the complete bipartite graph of source and target
units:

``perfect``
    Every node has degree exactly one.  The smaller partition is padded
    with empty nodes (weight = big everywhere) to square the matrix; links
    to padding are stripped from the output, which lets the model abstain.

``edgecover``
    Every node has degree at least one.  Solved exactly by reduction to a
    perfect matching on a mirrored auxiliary graph: left partition
    U_s + U_t', right partition U_t + U_s', original weights in the two
    off-diagonal blocks and 2 * (minimum incident weight) on the self
    cells.  The auxiliary matching costs twice the optimal cover.

``total``
    Every source node links to its maximally similar target node; target
    degrees are unconstrained.  Row-independent, hence globally optimal.

All solvers are deterministic: ties are broken toward the lexicographically
smallest link set under (source index, target index) ordering, computed on
the tight-cell graph of the assignment duals (for ``edgecover`` the
canonicalization applies to the auxiliary matching before decoding).
Zero-similarity links forced by degree constraints are retained with
sim = 0.0; projection drops them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lap
from .errors import DegenerateGraphError, ValidationError
from .similarity import SimilarityMatrix, to_weights

CLASSES = ("perfect", "edgecover", "total")

COST_ATOL = 1e-9


@dataclass(frozen=True)
class AlignmentGraph:
    sim: SimilarityMatrix
    weights: np.ndarray = field(compare=False)  # padded for perfect matching
    big: float
    n_src_real: int
    n_tgt_real: int
    padding_side: str  # "none" | "src" | "tgt"


@dataclass(frozen=True)
class Link:
    src: int  # unit id on the source side
    tgt: int
    sim: float


@dataclass(frozen=True)
class SemanticAlignment:
    links: tuple[Link, ...]  # sorted by (src, tgt); padding links already stripped
    constraint_class: str
    cost: float  # objective value (perfect: over the padded square instance)

    def link_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((l.src, l.tgt) for l in self.links)

    def targets_of(self, src_unit: int) -> tuple[int, ...]:
        return tuple(l.tgt for l in self.links if l.src == src_unit)


def build_graph(m: SimilarityMatrix, big: float, for_class: str) -> AlignmentGraph:
    if for_class not in CLASSES:
        raise ValueError(f"unknown constraint class {for_class!r}")
    n, mt = m.sim.shape
    if n == 0 or mt == 0:
        raise DegenerateGraphError("alignment graph needs units on both sides")
    wm = to_weights(m, big)
    weights = wm.weight
    padding_side = "none"
    if for_class == "perfect" and n != mt:
        size = max(n, mt)
        padded = np.full((size, size), float(big))
        padded[:n, :mt] = weights
        weights = padded
        padding_side = "src" if n < mt else "tgt"
    return AlignmentGraph(m, weights, float(big), n, mt, padding_side)


def links_from_pairs(g: AlignmentGraph, pairs) -> tuple[Link, ...]:
    sims = g.sim.sim
    out = []
    for i, j in sorted(pairs):
        out.append(Link(g.sim.src_units[i], g.sim.tgt_units[j], float(sims[i, j])))
    return tuple(out)


def solve_perfect_matching(g: AlignmentGraph) -> SemanticAlignment:
    """Minimum-weight perfect matching; padding links stripped from the result."""
    W = g.weights
    if W.shape[0] != W.shape[1]:
        raise ValidationError("perfect matching needs a square (padded) matrix")
    col_of_row, u, v = lap.solve_lap(W)
    adm = lap.admissible_cells(W, u, v)
    col_of_row = lap.lexmin_perfect_matching(adm, col_of_row)
    cost = float(W[np.arange(len(col_of_row)), col_of_row].sum())
    pairs = [
        (i, j)
        for i, j in enumerate(col_of_row)
        if i < g.n_src_real and j < g.n_tgt_real
    ]
    return SemanticAlignment(links_from_pairs(g, pairs), "perfect", cost)


def _edge_cover_aux(W: np.ndarray):
    """Mirrored auxiliary matrix for the cover-to-matching reduction."""
    n, m = W.shape
    delta_row = W.min(axis=1)
    delta_col = W.min(axis=0)
    # The sentinel for absent cells must exceed any feasible matching cost;
    # the all-self matching bounds that by 2 * (sum of all deltas).
    forbidden = 2.0 * (delta_row.sum() + delta_col.sum()) + 1.0
    size = n + m
    aux = np.full((size, size), forbidden)
    aux[:n, :m] = W
    aux[n:, m:] = W.T
    aux[np.arange(n), m + np.arange(n)] = 2.0 * delta_row
    aux[n + np.arange(m), np.arange(m)] = 2.0 * delta_col
    return aux, forbidden


def solve_edge_cover(g: AlignmentGraph) -> SemanticAlignment:
    """Minimum-weight edge cover via reduction to a perfect matching."""
    if g.padding_side != "none":
        raise ValidationError("edge cover expects an unpadded matrix")
    W = g.weights
    n, m = W.shape
    aux, forbidden = _edge_cover_aux(W)
    col_of_row, u, v = lap.solve_lap(aux)
    adm = lap.admissible_cells(aux, u, v)
    col_of_row = lap.lexmin_perfect_matching(adm, col_of_row)

    pairs = set()
    for r, c in enumerate(col_of_row):
        if aux[r, c] >= forbidden:
            raise ValidationError("edge cover reduction selected a forbidden cell")
        if r < n:
            if c < m:
                pairs.add((r, c))
            else:  # source self cell: take the cheapest incident edge
                pairs.add((r, int(np.argmin(W[r]))))
        else:
            t = r - n
            if c < m:  # target self cell
                pairs.add((int(np.argmin(W[:, t])), t))
            else:  # mirror block cell decodes to the original edge
                pairs.add((c - m, t))

    pairs = _strip_redundant_links(W, pairs)
    _check_cover(n, m, pairs)
    cost = float(sum(W[i, j] for i, j in pairs))
    return SemanticAlignment(links_from_pairs(g, pairs), "edgecover", cost)


def _strip_redundant_links(W: np.ndarray, pairs: set) -> set:
    """Remove links whose endpoints are both covered elsewhere.

    An optimal cover can contain such a link only when it has (near-)zero
    weight; dropping it preserves cost and restores the property that no
    link is many-to-many.  Largest links are dropped first so the surviving
    set stays lexicographically small.
    """
    pairs = set(pairs)
    while True:
        deg_s, deg_t = {}, {}
        for i, j in pairs:
            deg_s[i] = deg_s.get(i, 0) + 1
            deg_t[j] = deg_t.get(j, 0) + 1
        redundant = [(i, j) for i, j in pairs if deg_s[i] >= 2 and deg_t[j] >= 2]
        if not redundant:
            return pairs
        removable = [p for p in redundant if W[p] <= COST_ATOL]
        if not removable:
            raise ValidationError(
                "edge cover decode produced a positive-weight many-to-many link"
            )
        pairs.remove(max(removable))


def _check_cover(n: int, m: int, pairs) -> None:
    covered_s = {i for i, _ in pairs}
    covered_t = {j for _, j in pairs}
    if covered_s != set(range(n)) or covered_t != set(range(m)):
        raise ValidationError("edge cover decode left a unit uncovered")


def solve_total(g: AlignmentGraph) -> SemanticAlignment:
    """Per-source argmax similarity link; lowest target index wins ties."""
    if g.padding_side != "none":
        raise ValidationError("total alignment expects an unpadded matrix")
    sims = g.sim.sim
    cols = np.argmax(sims, axis=1)
    pairs = [(i, int(j)) for i, j in enumerate(cols)]
    cost = float(g.weights[np.arange(len(pairs)), cols].sum())
    return SemanticAlignment(links_from_pairs(g, pairs), "total", cost)


def solve(g: AlignmentGraph, constraint_class: str) -> SemanticAlignment:
    if constraint_class == "perfect":
        return solve_perfect_matching(g)
    if constraint_class == "edgecover":
        return solve_edge_cover(g)
    if constraint_class == "total":
        return solve_total(g)
    raise ValueError(f"unknown constraint class {constraint_class!r}")


def dump_weight_table(g: AlignmentGraph, alignment: SemanticAlignment | None = None) -> str:
    """TSV debug table: rows = source units, columns = target units.

    Chosen cells are marked with a trailing ``*``.
    """
    chosen = set()
    if alignment is not None:
        index_of_src = {u: i for i, u in enumerate(g.sim.src_units)}
        index_of_tgt = {u: j for j, u in enumerate(g.sim.tgt_units)}
        chosen = {(index_of_src[l.src], index_of_tgt[l.tgt]) for l in alignment.links}
    header = "unit\t" + "\t".join(str(u) for u in g.sim.tgt_units)
    lines = [header]
    W = g.weights[: g.n_src_real, : g.n_tgt_real]
    for i, src_unit in enumerate(g.sim.src_units):
        cells = []
        for j in range(g.n_tgt_real):
            mark = "*" if (i, j) in chosen else ""
            cells.append(f"{W[i, j]:.6g}{mark}")
        lines.append(f"{src_unit}\t" + "\t".join(cells))
    return "\n".join(lines) + "\n"
