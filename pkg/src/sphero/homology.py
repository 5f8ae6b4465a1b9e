"""Exact integral simplicial homology via Smith normal form.

Boundary matrices are kept as sparse integer columns.  Large matrices go
through a unit-pivot column reduction whose leftover core (empty on
torsion-free instances) falls back to a dense Smith normal form over Python
integers, so no overflow is possible.  The dense routine also certifies its
unimodular transforms by re-multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass

Column = dict[int, int]


class HomologyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# chain complexes


@dataclass(frozen=True)
class ChainComplex:
    """Ordered simplex bases per dimension and integer boundary columns.

    boundaries[d] maps dimension-d basis elements (d >= 1) to integer
    combinations of dimension-(d-1) basis elements.
    """

    basis: tuple[tuple[tuple, ...], ...]
    boundaries: tuple[tuple[Column, ...], ...]  # index d-1 holds boundary of dim d

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    def n_cells(self, d: int) -> int:
        if 0 <= d < len(self.basis):
            return len(self.basis[d])
        return 0

    def boundary_columns(self, d: int) -> list[Column]:
        """Columns of the boundary map from dimension d, empty beyond range."""
        if 1 <= d <= self.dim:
            return [dict(c) for c in self.boundaries[d - 1]]
        return []

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * self.n_cells(d) for d in range(self.dim + 1))

    def dump_matrices(self) -> str:
        """Boundary matrices as text: a dimension header, then row-major integers."""
        lines = []
        for d in range(1, self.dim + 1):
            rows = self.n_cells(d - 1)
            cols = self.n_cells(d)
            lines.append(f"dim {d} {rows}x{cols}")
            table = [[0] * cols for _ in range(rows)]
            for j, col in enumerate(self.boundaries[d - 1]):
                for r, v in col.items():
                    table[r][j] = v
            lines.extend(" ".join(str(x) for x in row) for row in table)
        return "\n".join(lines) + "\n"

    def check_boundary_squared(self) -> None:
        for d in range(2, self.dim + 1):
            lower = self.boundaries[d - 2]
            for j, col in enumerate(self.boundaries[d - 1]):
                acc: Column = {}
                for r, v in col.items():
                    for rr, vv in lower[r].items():
                        nv = acc.get(rr, 0) + v * vv
                        if nv:
                            acc[rr] = nv
                        else:
                            acc.pop(rr, None)
                if acc:
                    raise HomologyError(f"boundary squared nonzero at dim {d}, column {j}")


def complex_from_simplices(simplices_by_dim: list[list[tuple]]) -> ChainComplex:
    """Build boundary columns from sorted simplex lists (vertex tuples sorted)."""
    basis = tuple(tuple(s) for s in simplices_by_dim)
    boundaries = []
    for d in range(1, len(basis)):
        index = {s: i for i, s in enumerate(basis[d - 1])}
        cols = []
        for s in basis[d]:
            col: Column = {}
            for j in range(len(s)):
                face = s[:j] + s[j + 1:]
                col[index[face]] = (-1) ** j
            cols.append(col)
        boundaries.append(tuple(cols))
    return ChainComplex(basis, tuple(boundaries))


def flag_complex(vertices: list, edges: list[tuple], max_dim: int) -> ChainComplex:
    """Clique complex of a simple graph, truncated above max_dim."""
    verts = sorted(set(vertices))
    vindex = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    adj = [0] * n
    for a, b in edges:
        i, j = vindex[a], vindex[b]
        if i == j:
            raise HomologyError("loops are not allowed")
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    by_dim: list[list[tuple]] = [[(v,) for v in verts]]
    frontier = [((i,), adj[i] & ~((1 << (i + 1)) - 1)) for i in range(n)]
    d = 0
    while d < max_dim:
        nxt = []
        cells = []
        for clique, allowed in frontier:
            m = allowed
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                bigger = clique + (j,)
                cells.append(tuple(verts[k] for k in bigger))
                nxt.append((bigger, allowed & adj[j] & ~((1 << (j + 1)) - 1)))
        if not cells:
            break
        by_dim.append(sorted(cells))
        frontier = sorted(nxt)
        d += 1
    return complex_from_simplices(by_dim)


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(matrix: list[list[int]], with_transforms: bool = True):
    """Invariant factors of an integer matrix.

    Returns (factors, rank) or, with transforms, (factors, rank, P, Q) where
    P @ matrix @ Q is the diagonal of factors; the transforms are certified by
    re-multiplication before returning.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    a = [list(row) for row in matrix]
    P = [[int(i == j) for j in range(m)] for i in range(m)] if with_transforms else None
    Q = [[int(i == j) for j in range(n)] for i in range(n)] if with_transforms else None

    def row_op(i, j, c):  # row i -= c * row j
        a[i] = [x - c * y for x, y in zip(a[i], a[j])]
        if P is not None:
            P[i] = [x - c * y for x, y in zip(P[i], P[j])]

    def col_op(i, j, c):  # col i -= c * col j
        for row in a:
            row[i] -= c * row[j]
        if Q is not None:
            for row in Q:
                row[i] -= c * row[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if P is not None:
            P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if Q is not None:
            for row in Q:
                row[i], row[j] = row[j], row[i]

    factors: list[int] = []
    t = 0
    while t < min(m, n):
        # find a nonzero entry of minimal absolute value in the active block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        swap_rows(t, bi)
        swap_cols(t, bj)
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    qv = a[i][t] // a[t][t]
                    row_op(i, t, qv)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    qv = a[t][j] // a[t][t]
                    col_op(j, t, qv)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility into the remaining block
        piv = a[t][t]
        fixup = False
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % piv:
                    row_op(t, i, -1)  # add row i to row t, then restart pivot work
                    fixup = True
                    break
            if fixup:
                break
        if fixup:
            continue
        if piv < 0:
            a[t] = [-x for x in a[t]]
            if P is not None:
                P[t] = [-x for x in P[t]]
        factors.append(a[t][t])
        t += 1

    rank = len(factors)
    if with_transforms:
        _certify_snf(matrix, factors, P, Q)
        return factors, rank, P, Q
    return factors, rank


def _certify_snf(matrix, factors, P, Q):
    m, n = len(P), len(Q)
    prod = [[sum(P[i][k] * matrix[k][j] for k in range(m)) for j in range(n)] for i in range(m)]
    prod = [[sum(prod[i][k] * Q[k][j] for k in range(n)) for j in range(n)] for i in range(m)]
    for i in range(m):
        for j in range(n):
            want = factors[i] if i == j and i < len(factors) else 0
            if prod[i][j] != want:
                raise HomologyError("Smith normal form certificate failed")


def _divisibility_chain(diag: list[int]) -> list[int]:
    """Invariant factors of a diagonal matrix via pairwise gcd/lcm fixups."""
    import math as _math

    d = [abs(x) for x in diag]
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                if d[j] % d[i]:
                    g = _math.gcd(d[i], d[j])
                    d[i], d[j] = g, d[i] // g * d[j]
                    changed = True
    return sorted(d)


def _sparse_snf_full(columns: list[Column]) -> tuple[list[int], int]:
    """Sparse integer diagonalization with smallest-entry pivoting.

    Unit pivots eliminate for free; otherwise Euclidean row/column steps
    shrink the pivot until it divides its row and column, keeping coefficient
    growth under control.  Returns the invariant factors and the rank.
    """
    colmap: dict[int, Column] = {j: dict(c) for j, c in enumerate(columns) if c}
    rowidx: dict[int, set[int]] = {}
    for j, col in colmap.items():
        for r in col:
            rowidx.setdefault(r, set()).add(j)

    def set_entry(j: int, r: int, v: int) -> None:
        col = colmap[j]
        if v:
            if r not in col:
                rowidx.setdefault(r, set()).add(j)
            col[r] = v
        elif r in col:
            del col[r]
            rowidx[r].discard(j)

    def col_op(j_dst: int, j_src: int, f: int) -> None:
        # column j_dst -= f * column j_src
        for r, v in list(colmap[j_src].items()):
            set_entry(j_dst, r, colmap[j_dst].get(r, 0) - f * v)
        if not colmap[j_dst]:
            del colmap[j_dst]

    def row_op(r_dst: int, r_src: int, f: int) -> None:
        # row r_dst -= f * row r_src
        for j in list(rowidx.get(r_src, ())):
            v = colmap[j].get(r_src, 0)
            set_entry(j, r_dst, colmap[j].get(r_dst, 0) - f * v)

    diag: list[int] = []
    while colmap:
        best = None
        for j, col in colmap.items():
            for r, v in col.items():
                a = abs(v)
                cost = (a != 1, (len(rowidx[r]) - 1) * (len(col) - 1), a)
                if best is None or cost < best[0]:
                    best = (cost, r, j)
            if best is not None and best[0][0] is False and best[0][1] == 0:
                break
        _, r, j = best
        while True:
            piv = colmap[j][r]
            off_col = [rr for rr in colmap[j] if rr != r and colmap[j][rr] % piv]
            if off_col:
                rr = off_col[0]
                q = colmap[j][rr] // piv
                row_op(rr, r, q)  # leaves a remainder of smaller absolute value
                r = rr
                continue
            off_row = [jj for jj in rowidx[r] if jj != j and colmap[jj][r] % piv]
            if off_row:
                jj = off_row[0]
                q = colmap[jj][r] // piv
                col_op(jj, j, q)
                j = jj
                continue
            break
        piv = colmap[j][r]
        for rr in [x for x in colmap[j] if x != r]:
            row_op(rr, r, colmap[j][rr] // piv)
        for jj in [x for x in list(rowidx[r]) if x != j]:
            col_op(jj, j, colmap[jj][r] // piv)
        for rr in colmap[j]:
            rowidx[rr].discard(j)
        del colmap[j]
        diag.append(abs(piv))
    return _divisibility_chain(diag), len(diag)


def sparse_invariant_factors(columns: list[Column]) -> tuple[list[int], int]:
    """Invariant factors and rank from sparse integer columns.

    Unit-pivot reduction on the lowest row of each column is attempted first;
    when every column reduces to zero or to a unit low the matrix has unit
    factors only.  Otherwise the original matrix goes to the full sparse
    routine, whose Euclidean pivoting avoids the coefficient blowup of the
    fast path.
    """
    pivots: dict[int, Column] = {}
    parked = False
    for col0 in columns:
        col = dict(col0)
        while col:
            low = max(col)
            p = pivots.get(low)
            if p is None:
                break
            f = col[low] * p[low]  # p[low] is +-1
            for r, v in p.items():
                nv = col.get(r, 0) - f * v
                if nv:
                    col[r] = nv
                else:
                    col.pop(r, None)
        if not col:
            continue
        low = max(col)
        if abs(col[low]) == 1:
            pivots[low] = col
        else:
            parked = True
            break
    if not parked:
        return [1] * len(pivots), len(pivots)
    return _sparse_snf_full(columns)


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyResult:
    """Reduced integral homology: per dimension a Betti number and torsion list."""

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def is_trivial_through(self, k: int) -> bool:
        return all(self.betti[d] == 0 and not self.torsion[d] for d in range(k + 1))

    def rows(self):
        for d in range(len(self.betti)):
            yield d, self.betti[d], list(self.torsion[d])


def reduced_homology(cx: ChainComplex, through_dim: int, check: bool = True) -> HomologyResult:
    """Reduced homology in degrees 0..through_dim (degree 0 via augmentation)."""
    if check:
        cx.check_boundary_squared()
    n0 = cx.n_cells(0)
    rank: dict[int, int] = {}
    factors: dict[int, list[int]] = {}
    rank[0] = 1 if n0 else 0  # augmentation
    for d in range(1, through_dim + 2):
        cols = cx.boundary_columns(d)
        if cols:
            f, r = sparse_invariant_factors(cols)
        else:
            f, r = [], 0
        factors[d], rank[d] = f, r
    betti, torsion = [], []
    for d in range(0, through_dim + 1):
        nd = cx.n_cells(d)
        b = nd - rank[d] - rank[d + 1]
        betti.append(b)
        torsion.append(tuple(x for x in factors[d + 1] if x > 1))
    return HomologyResult(tuple(betti), tuple(torsion))


def is_k_acyclic(cx: ChainComplex, k: int) -> tuple[bool, HomologyResult]:
    """Whether reduced homology vanishes in degrees 0..k, with the certificate.

    For k < 0 the condition degenerates to nonemptiness.
    """
    res = reduced_homology(cx, max(k, 0))
    if k < 0:
        return cx.n_cells(0) > 0, res
    return res.is_trivial_through(k), res


# ---------------------------------------------------------------------------
# bounded fundamental group search


def pi1_report(cx: ChainComplex, budget: int = 5000) -> dict:
    """Three-valued simple-connectivity report from the edge-path group.

    "trivial" is only answered when the presentation simplifies to nothing
    within budget; "nontrivial" only with an abelianization witness, so a
    "trivial" answer is always sound.
    """
    n0 = cx.n_cells(0)
    if n0 == 0:
        raise HomologyError("empty complex")
    verts = list(cx.basis[0])
    vid = {v: i for i, v in enumerate(verts)}
    edges = list(cx.basis[1]) if cx.dim >= 1 else []
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n0)}
    for ei, (a, b) in enumerate(edges):
        adj[vid[(a,)]].append((vid[(b,)], ei))
        adj[vid[(b,)]].append((vid[(a,)], ei))
    # spanning tree by BFS
    parent_edge: dict[int, int] = {}
    seen = {0}
    queue = [0]
    while queue:
        x = queue.pop(0)
        for y, ei in adj[x]:
            if y not in seen:
                seen.add(y)
                parent_edge[y] = ei
                queue.append(y)
    if len(seen) != n0:
        raise HomologyError("pi1 report requires a connected complex")
    tree = set(parent_edge.values())
    gen_of_edge = {ei: g for g, ei in enumerate(sorted(e for e in range(len(edges)) if e not in tree))}
    if not gen_of_edge:
        return {"status": "trivial", "generators": 0, "relators": 0}

    def edge_word(a, b) -> tuple[int, ...]:
        ei = eindex[(a, b) if a < b else (b, a)]
        if ei in tree:
            return ()
        g = gen_of_edge[ei]
        return (g + 1,) if a < b else (-(g + 1),)

    eindex = {e: i for i, e in enumerate(edges)}
    relators = []
    if cx.dim >= 2:
        for (a, b, c) in cx.basis[2]:
            w = edge_word(a, b) + edge_word(b, c) + tuple(-x for x in reversed(edge_word(a, c)))
            relators.append(_free_reduce(w))
    h1 = reduced_homology(cx, 1, check=False)
    if h1.betti[1] > 0 or h1.torsion[1]:
        return {"status": "nontrivial", "h1_betti": h1.betti[1], "h1_torsion": list(h1.torsion[1])}
    status = _tietze_trivializes(len(gen_of_edge), relators, budget)
    return {"status": "trivial" if status else "unknown",
            "generators": len(gen_of_edge), "relators": len(relators)}


def _free_reduce(word: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if x == 0:
            continue
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _cyc_reduce(word: tuple[int, ...]) -> tuple[int, ...]:
    w = _free_reduce(word)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def _tietze_trivializes(ngens: int, relators: list[tuple[int, ...]], budget: int) -> bool:
    """Budgeted generator elimination; True only if all generators die.

    The budget counts work units (relator letters rewritten), so large
    presentations degrade to "unknown" rather than stalling.
    """
    gens = set(range(1, ngens + 1))
    rels = [_cyc_reduce(r) for r in relators]
    steps = 0
    while gens and steps < budget:
        steps += max(1, sum(map(len, rels)) // 64)
        rels = [r for r in (_cyc_reduce(r) for r in rels) if r]
        # a generator occurring exactly once in some relator can be eliminated
        pick = None
        for r in sorted(rels, key=len):
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for x in r:
                if counts[abs(x)] == 1 and abs(x) in gens:
                    pick = (r, abs(x))
                    break
            if pick:
                break
        if pick is None:
            return False
        rel, g = pick
        i = next(k for k, x in enumerate(rel) if abs(x) == g)
        rest = rel[i + 1:] + rel[:i]  # rel ~ g * rest or g^-1 * rest cyclically
        if rel[i] > 0:
            sub = tuple(-x for x in reversed(rest))  # g = rest^-1
        else:
            sub = rest  # g^-1 = rest^-1, so g = rest
        new_rels = []
        for r in rels:
            if r is rel:
                continue
            w: list[int] = []
            for x in r:
                if x == g:
                    w.extend(sub)
                elif x == -g:
                    w.extend(-y for y in reversed(sub))
                else:
                    w.append(x)
            new_rels.append(_free_reduce(tuple(w)))
        gens.remove(g)
        rels = new_rels
    return not gens


def simplicial_join(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Join of two simplicial complexes (independent oracle for category joins).

    Vertices of the two inputs are tagged to stay disjoint; simplices are all
    unions of a simplex from each side (or from one side alone).
    """
    def tagged(cx: ChainComplex, tag: str):
        out = [[] for _ in range(cx.dim + 1)]
        for d in range(cx.dim + 1):
            for s in cx.basis[d]:
                out[d].append(tuple((tag, v) for v in s))
        return out

    sa, sb = tagged(a, "a"), tagged(b, "b")
    max_dim = (len(sa) - 1) + (len(sb) - 1) + 1
    by_dim: list[set] = [set() for _ in range(max_dim + 1)]
    for d, cells in enumerate(sa):
        for s in cells:
            by_dim[d].add(s)
    for d, cells in enumerate(sb):
        for s in cells:
            by_dim[d].add(s)
    for da, cells_a in enumerate(sa):
        for db, cells_b in enumerate(sb):
            for s in cells_a:
                for t in cells_b:
                    by_dim[da + db + 1].add(tuple(sorted(s + t)))
    listed = [sorted(cells) for cells in by_dim if cells]
    return complex_from_simplices(listed)
