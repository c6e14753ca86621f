"""Component groups of Neron models from metrized dual graphs.

An edge of width w in the dual graph stands for a chain of w - 1
rational curves in the minimal regular model, so the graph is first
subdivided into unit edges.  The component group is then the critical
group of the subdivided graph: the cokernel of the reduced integer
Laplacian, read off its Smith normal form.  Every call cross-checks the
group order against the spanning-tree count obtained independently by a
fraction-free determinant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class MetrizedGraph:
    vertices: tuple
    edges: tuple  # (u, v, length)

    @classmethod
    def build(cls, vertices, edges):
        vertices = tuple(vertices)
        seen = set(vertices)
        if len(seen) != len(vertices):
            raise GraphError("duplicate vertex names")
        norm = []
        for u, v, length in edges:
            if u not in seen or v not in seen:
                raise GraphError("edge endpoint not a vertex")
            if u == v:
                raise GraphError("loops are not allowed")
            if length < 1:
                raise GraphError("edge lengths must be >= 1")
            norm.append((u, v, int(length)))
        return cls(vertices, tuple(norm))

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = {v: [] for v in self.vertices}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


def subdivide(graph: MetrizedGraph) -> MetrizedGraph:
    """Replace each edge of length w by a path of w unit edges."""
    vertices = list(graph.vertices)
    edges = []
    for idx, (u, v, w) in enumerate(graph.edges):
        if w == 1:
            edges.append((u, v, 1))
            continue
        chain = [u]
        for j in range(1, w):
            name = "%s|%s#%d.%d" % (u, v, idx, j)
            vertices.append(name)
            chain.append(name)
        chain.append(v)
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b, 1))
    return MetrizedGraph.build(vertices, edges)


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d_1 | d_2 | ... | d_r, each >= 2."""

    factors: tuple

    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.factors

    def __post_init__(self):
        prev = None
        for d in self.factors:
            if d < 2:
                raise GraphError("invariant factors must be >= 2")
            if prev is not None and d % prev:
                raise GraphError("divisibility chain broken")
            prev = d

    def describe(self) -> str:
        if not self.factors:
            return "trivial"
        return " x ".join("Z/%d" % d for d in self.factors)


def smith_normal_form_diagonal(matrix) -> list:
    """Diagonal of the Smith normal form of an integer matrix.

    Plain elementary-operation reduction with a smallest-pivot choice;
    Python integers make overflow a non-issue.
    """
    m = [list(row) for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    diag = []
    top = 0
    while top < min(rows, cols):
        # locate the entry of least nonzero magnitude in the block
        pivot = None
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = abs(m[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        m[top], m[pi] = m[pi], m[top]
        for row in m:
            row[top], row[pj] = row[pj], row[top]
        while True:
            reduced = False
            for i in range(top + 1, rows):
                if m[i][top]:
                    q = m[i][top] // m[top][top]
                    for j in range(top, cols):
                        m[i][j] -= q * m[top][j]
                    if m[i][top]:
                        m[top], m[i] = m[i], m[top]
                        reduced = True
            for j in range(top + 1, cols):
                if m[top][j]:
                    q = m[top][j] // m[top][top]
                    for i in range(top, rows):
                        m[i][j] -= q * m[i][top]
                    if m[top][j]:
                        for row in m:
                            row[top], row[j] = row[j], row[top]
                        reduced = True
            if not reduced:
                break
        # the pivot must divide every remaining entry
        fixed = True
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if m[i][j] % m[top][top]:
                    for jj in range(top, cols):
                        m[top][jj] += m[i][jj]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        diag.append(abs(m[top][top]))
        top += 1
    return diag


def _reduced_laplacian(graph: MetrizedGraph):
    index = {v: i for i, v in enumerate(graph.vertices)}
    n = len(graph.vertices)
    lap = [[0] * n for _ in range(n)]
    for u, v, w in graph.edges:
        if w != 1:
            raise GraphError("reduced Laplacian expects a unit-length graph")
        i, j = index[u], index[v]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    return [row[:-1] for row in lap[:-1]]


def spanning_tree_count(graph: MetrizedGraph) -> int:
    """Kirchhoff count by a fraction-free (Bareiss) determinant."""
    reduced = _reduced_laplacian(graph)
    n = len(reduced)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in reduced]
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for i in range(col, n):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = m[col][col]
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] / inv
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    assert det.denominator == 1
    return abs(int(det))


def component_group(graph: MetrizedGraph) -> AbelianInvariants:
    """Invariant factors of the critical group of the subdivided graph.

    The product of the invariant factors is asserted equal to the
    spanning-tree count of the subdivision on every call.
    """
    if not graph.is_connected():
        raise GraphError("graph must be connected")
    unit = subdivide(graph)
    reduced = _reduced_laplacian(unit)
    diag = smith_normal_form_diagonal(reduced)
    if 0 in diag or len(diag) < len(reduced):
        raise GraphError("reduced Laplacian is singular on a connected graph")
    factors = tuple(d for d in diag if d > 1)
    invariants = AbelianInvariants(factors)
    trees = spanning_tree_count(unit)
    assert invariants.order() == trees, (
        "Smith normal form order %d disagrees with the spanning-tree "
        "count %d" % (invariants.order(), trees)
    )
    return invariants


def banana_order(lengths) -> int:
    """Order of the critical group of two vertices joined by paths of the
    given lengths: (prod l_i) * (sum 1/l_i)."""
    total = Fraction(0)
    prod = 1
    for l in lengths:
        prod *= l
        total += Fraction(1, l)
    value = prod * total
    assert value.denominator == 1
    return int(value)


def fiber_metrized_graph(fiber) -> MetrizedGraph:
    """MetrizedGraph view of a Cartan-family FiberGraph."""
    if not fiber.incidence_complete:
        raise GraphError(
            "no metrized graph: incidence for family %r is not fully "
            "specified" % fiber.family
        )
    return MetrizedGraph.build(
        [v.name for v in fiber.vertices],
        [(a, b, w) for a, b, w, _ in fiber.edges],
    )


@dataclass
class PredictionCheck:
    """Outcome of the nonsplit-normalizer component-group prediction."""

    p: int
    invariants: AbelianInvariants
    expected: AbelianInvariants
    verdict: str  # "match" | "mismatch" | "vacuous-trivial" | "trivial"


def expected_invariants_nsplus(p: int, s: int):
    """(Z/8nZ) x (Z/8Z)^(S-2) with n = num((p-1)/12), for p = 1 mod 4
    and S >= 2; None marks the degenerate S <= 1 case."""
    if p % 4 != 1:
        return AbelianInvariants(())
    if s <= 1:
        return None
    n = Fraction(p - 1, 12).numerator
    return AbelianInvariants(tuple([8] * (s - 2) + [8 * n]))


def component_group_prediction(p: int) -> PredictionCheck:
    from .atlas import special_fiber

    fiber = special_fiber("ns+", p)
    invariants = component_group(fiber_metrized_graph(fiber))
    expected = expected_invariants_nsplus(p, fiber.supersingular.s)
    if p % 4 == 3:
        verdict = "trivial" if invariants.is_trivial() else "mismatch"
        expected = AbelianInvariants(())
    elif expected is None:
        verdict = "vacuous-trivial" if invariants.is_trivial() else "mismatch"
        expected = AbelianInvariants(())
    else:
        verdict = "match" if invariants == expected else "mismatch"
    return PredictionCheck(p, invariants, expected, verdict)
