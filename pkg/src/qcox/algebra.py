"""Graded structure of the quotient of a path algebra by homogeneous
relations: dimension tables per degree, the q-weighted Cartan matrix, and
graded dimension vectors of simples, projectives and injectives.

The degree-d component between a fixed pair of vertices is spanned by the
length-d paths between them, modulo the span of all products p*r*s where r
is a generating relation, p runs over paths into r's source and s over
paths out of r's target, with total length d.  Because relations are
homogeneous with fixed endpoints, that span splits into independent
(source, target, degree) blocks, and each block needs one exact rank
computation.

Degrees are processed in ascending order and stop at the first degree
d >= 1 whose total dimension vanishes: the quotient is generated in
degrees <= 1, so every later degree vanishes too (the next degree is
recomputed and asserted zero on every run as a self-check).  If no such
degree exists below the cap, DegreeCapExceeded is raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import DegreeCapExceeded
from .polyring import Polynomial, PolyMatrix, rank_rational
from .quiverdsl import BoundQuiver, Path, Quiver

DEFAULT_DEGREE_CAP = 64


@dataclass(frozen=True)
class GradedDimTable:
    """dim of the (i, j) graded component per degree; zero entries omitted."""

    n: int
    max_degree: int
    dims: Mapping[tuple[int, int, int], int]

    def dim(self, i: int, j: int, degree: int) -> int:
        return self.dims.get((i, j, degree), 0)

    def total_at(self, degree: int) -> int:
        return sum(v for (_, _, d), v in self.dims.items() if d == degree)

    def to_json_obj(self, vertex_names: Sequence[str] | None = None) -> dict:
        def label(v: int):
            return vertex_names[v] if vertex_names is not None else v
        entries = [{"source": label(i), "target": label(j), "degree": d, "dim": value}
                   for (i, j, d), value in sorted(self.dims.items())]
        return {"dims": entries, "max_degree": self.max_degree}


def _extend_paths(quiver: Quiver, frontier: list[Path],
                  out_arrows: list[list[int]]) -> list[Path]:
    nxt = []
    for p in frontier:
        for idx in out_arrows[p.target]:
            nxt.append(Path(p.arrows + (idx,), p.source, quiver.arrows[idx].target))
    return nxt


def _out_arrows(quiver: Quiver) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(quiver.n)]
    for idx, a in enumerate(quiver.arrows):
        out[a.source].append(idx)
    return out


def iter_paths_by_degree(quiver: Quiver) -> Iterator[list[Path]]:
    """Yield all paths of length 0, 1, 2, ... in lexicographic arrow order."""
    out = _out_arrows(quiver)
    frontier = [Path.trivial(v) for v in range(quiver.n)]
    while True:
        yield frontier
        frontier = _extend_paths(quiver, frontier, out)


def enumerate_paths(quiver: Quiver, source: int, target: int, length: int) -> list[Path]:
    """All length-d paths source -> target, lexicographic in arrow indices."""
    if length < 0:
        raise ValueError("path length must be non-negative")
    out = _out_arrows(quiver)
    frontier = [Path.trivial(source)]
    for _ in range(length):
        frontier = _extend_paths(quiver, frontier, out)
    return [p for p in frontier if p.target == target]


def _block_dims(quiver: Quiver, relations, paths_by_degree: list[list[Path]],
                degree: int) -> dict[tuple[int, int], int]:
    """Dimensions of every (source, target) block at one degree."""
    # basis per block, with column lookup by arrow tuple
    blocks: dict[tuple[int, int], list[Path]] = {}
    for p in paths_by_degree[degree]:
        blocks.setdefault((p.source, p.target), []).append(p)
    col_of: dict[tuple[int, int], dict[tuple[int, ...], int]] = {
        key: {p.arrows: c for c, p in enumerate(paths)} for key, paths in blocks.items()}
    span_rows: dict[tuple[int, int], list[list]] = {key: [] for key in blocks}
    for rel in relations:
        gap = degree - rel.length
        if gap < 0:
            continue
        for head_len in range(gap + 1):
            tail_len = gap - head_len
            heads = [p for p in paths_by_degree[head_len] if p.target == rel.source]
            tails = [p for p in paths_by_degree[tail_len] if p.source == rel.target]
            for head in heads:
                for tail in tails:
                    key = (head.source, tail.target)
                    cols = col_of[key]
                    row = [0] * len(cols)
                    for coeff, mid in rel.terms:
                        row[cols[head.arrows + mid.arrows + tail.arrows]] += coeff
                    span_rows[key].append(row)
    return {key: len(paths) - rank_rational(span_rows[key])
            for key, paths in blocks.items()}


def graded_dims(bq: BoundQuiver, degree_cap: int = DEFAULT_DEGREE_CAP) -> GradedDimTable:
    """Graded dimension table of the quotient algebra, computed degreewise."""
    quiver = bq.quiver
    if degree_cap < 2:
        raise ValueError("degree_cap must be at least 2")
    paths_iter = iter_paths_by_degree(quiver)
    paths_by_degree = [next(paths_iter)]
    dims: dict[tuple[int, int, int], int] = {(v, v, 0): 1 for v in range(quiver.n)}
    for degree in range(1, degree_cap + 1):
        paths_by_degree.append(next(paths_iter))
        block = _block_dims(quiver, bq.relations, paths_by_degree, degree)
        total = 0
        for (i, j), value in block.items():
            if value:
                dims[(i, j, degree)] = value
                total += value
        if total == 0:
            # generation in degree <= 1 forces every later degree to vanish;
            # recompute the next degree and check
            paths_by_degree.append(next(paths_iter))
            follow_up = _block_dims(quiver, bq.relations, paths_by_degree, degree + 1)
            assert all(v == 0 for v in follow_up.values()), \
                "dimension reappeared after a vanishing degree"
            return GradedDimTable(quiver.n, degree, dims)
    raise DegreeCapExceeded(degree_cap)


def cartan_matrix(bq: BoundQuiver, degree_cap: int = DEFAULT_DEGREE_CAP) -> PolyMatrix:
    """q-weighted Cartan matrix: entry (i, j) counts the graded dimensions
    of the component from i to j, one power of q per degree."""
    table = graded_dims(bq, degree_cap)
    n = bq.quiver.n
    coeffs = [[[0] * (table.max_degree + 1) for _ in range(n)] for _ in range(n)]
    for (i, j, d), value in table.dims.items():
        coeffs[i][j][d] = value
    return PolyMatrix([[Polynomial(cs) for cs in row] for row in coeffs])


KINDS = ("simple", "projective", "injective")


def dim_vector(bq: BoundQuiver, kind: str, vertex: int,
               degree_cap: int = DEFAULT_DEGREE_CAP,
               cartan: PolyMatrix | None = None) -> tuple[Polynomial, ...]:
    """Graded dimension vector of the simple, projective or injective module
    at a vertex: the standard basis vector, a Cartan row, or a Cartan column.
    """
    n = bq.quiver.n
    if not 0 <= vertex < n:
        raise ValueError(f"vertex index {vertex} out of range")
    if kind == "simple":
        return tuple(Polynomial([int(i == vertex)]) for i in range(n))
    if cartan is None:
        cartan = cartan_matrix(bq, degree_cap)
    if kind == "projective":
        return tuple(cartan.rows[vertex])
    if kind == "injective":
        return cartan.column(vertex)
    raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")


@dataclass(frozen=True)
class DetCheck:
    det: Polynomial
    unimodular: bool

    def to_json_obj(self) -> dict:
        return {"det": self.det.to_coeff_strings(), "unimodular": self.unimodular}


def cartan_det_check(bq: BoundQuiver, degree_cap: int = DEFAULT_DEGREE_CAP) -> DetCheck:
    """Determinant of the Cartan matrix and whether it is +1 or -1.

    A determinant outside {1, -1} rules the quiver out of the reflection
    machinery; a determinant inside it does not by itself certify anything
    stronger, so this is a gate, not a classification.
    """
    det = cartan_matrix(bq, degree_cap).det()
    return DetCheck(det, det == 1 or det == -1)
