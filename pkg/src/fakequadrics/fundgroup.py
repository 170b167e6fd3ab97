"""First homology of an unmixed pair via its fiber-product subgroup.

The fundamental group of the quotient surface is the fiber product of the
two polygonal (orbifold) groups over the common finite quotient.  It has
index |G| in the direct product, so it is reachable with an explicit coset
table (one coset per group element, no enumeration needed), a
Reidemeister-Schreier rewrite, and an integer Smith normal form of the
resulting exponent matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

from .branching import Signature, UnmixedPair

__all__ = [
    "FPGroup",
    "CosetTable",
    "AbelianInvariants",
    "SNFResult",
    "polygonal_presentation",
    "product_presentation",
    "fiber_coset_table",
    "reidemeister_schreier",
    "smith_normal_form",
    "abelianization",
    "h1_surface",
]

Word = tuple[int, ...]  # signed 1-based generator indices, freely reduced


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for letter in word:
        if letter == 0:
            raise ValueError("0 is not a valid letter")
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


@dataclass(frozen=True)
class FPGroup:
    """A finite presentation; relators are freely reduced words."""

    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        reduced = tuple(free_reduce(r) for r in self.relators)
        if reduced != self.relators:
            object.__setattr__(self, "relators", reduced)
        ngens = len(self.generator_names)
        for r in self.relators:
            if any(abs(x) > ngens for x in r):
                raise ValueError(f"relator {r} uses an undeclared generator")

    @property
    def ngens(self) -> int:
        return len(self.generator_names)

    def relator_strings(self) -> list[str]:
        out = []
        for rel in self.relators:
            parts = []
            for letter in rel:
                name = self.generator_names[abs(letter) - 1]
                parts.append(name if letter > 0 else f"{name}^-1")
            out.append("*".join(parts) if parts else "1")
        return out


def polygonal_presentation(signature: Signature) -> FPGroup:
    """Orbifold group of the line with branch multiplicities ``signature``:
    one generator per branch point, power relators, and the product relator."""
    r = signature.r
    names = tuple(f"x{i + 1}" for i in range(r))
    relators = [(i + 1,) * m for i, m in enumerate(signature.multiplicities)]
    relators.append(tuple(range(1, r + 1)))
    return FPGroup(generator_names=names, relators=tuple(relators))


def product_presentation(sig1: Signature, sig2: Signature) -> FPGroup:
    """Presentation of the direct product of two polygonal groups: both sets
    of polygonal relators plus all pairwise commutators."""
    r, s = sig1.r, sig2.r
    names = tuple(f"x{i + 1}" for i in range(r)) + tuple(f"y{j + 1}" for j in range(s))
    relators: list[Word] = [(i + 1,) * m for i, m in enumerate(sig1.multiplicities)]
    relators.append(tuple(range(1, r + 1)))
    relators += [(r + j + 1,) * m for j, m in enumerate(sig2.multiplicities)]
    relators.append(tuple(range(r + 1, r + s + 1)))
    for i in range(1, r + 1):
        for j in range(r + 1, r + s + 1):
            relators.append((-i, -j, i, j))
    return FPGroup(generator_names=names, relators=tuple(relators))


@dataclass(frozen=True)
class CosetTable:
    """Complete coset table for a subgroup of ``fpgroup``.

    ``table[c][2t]`` is the image of coset ``c`` under generator ``t``,
    ``table[c][2t + 1]`` under its inverse.  Construction verifies
    completeness, generator/inverse compatibility, and that every relator
    traces back to its starting coset from every coset.
    """

    fpgroup: FPGroup
    table: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        n = len(self.table)
        g = self.fpgroup.ngens
        for c, row in enumerate(self.table):
            if len(row) != 2 * g:
                raise RuntimeError(f"coset {c}: row width {len(row)} != {2 * g}")
            for entry in row:
                if not 0 <= entry < n:
                    raise RuntimeError(f"coset {c}: entry {entry} out of range")
        for c in range(n):
            for t in range(g):
                if self.table[self.table[c][2 * t]][2 * t + 1] != c:
                    raise RuntimeError(
                        f"generator {t + 1} and its inverse disagree at coset {c}"
                    )
        for rel in self.fpgroup.relators:
            for c in range(n):
                if self.trace(c, rel) != c:
                    raise RuntimeError(
                        f"relator {rel} does not close at coset {c}: "
                        "internal consistency failure"
                    )

    @property
    def index(self) -> int:
        return len(self.table)

    def step(self, coset: int, letter: int) -> int:
        t = abs(letter) - 1
        return self.table[coset][2 * t if letter > 0 else 2 * t + 1]

    def trace(self, coset: int, word: Sequence[int]) -> int:
        for letter in word:
            coset = self.step(coset, letter)
        return coset


def fiber_coset_table(pair: UnmixedPair) -> CosetTable:
    """Coset table of the fiber-product subgroup inside the product of the
    two polygonal groups, with one coset per group element (identity first).

    The generator for branch point i of the first cover sends the coset of
    g to the coset of v_i^-1 g; a generator of the second cover sends g to
    g w_j.  The stabilizer of the identity coset is exactly the fiber
    product of the two monodromy epimorphisms.
    """
    group = pair.group
    fp = product_presentation(pair.gv1.signature, pair.gv2.signature)
    n = group.order
    r = pair.gv1.signature.r
    cols: list[list[int]] = []
    for v in pair.gv1.elements:
        iv = group.inv(group.index(v))
        cols.append([group.mul(iv, g) for g in range(n)])
        cols.append([group.mul(group.index(v), g) for g in range(n)])
    for w in pair.gv2.elements:
        iw = group.index(w)
        cols.append([group.mul(g, iw) for g in range(n)])
        cols.append([group.mul(g, group.inv(iw)) for g in range(n)])
    assert len(cols) == 2 * fp.ngens == 2 * (r + pair.gv2.signature.r)
    table = tuple(
        tuple(cols[k][c] for k in range(2 * fp.ngens)) for c in range(n)
    )
    return CosetTable(fpgroup=fp, table=table)


def reidemeister_schreier(fp: FPGroup, table: CosetTable) -> FPGroup:
    """Subgroup presentation on Schreier generators.

    A breadth-first spanning tree of the coset graph supplies the Schreier
    transversal; tree edges yield trivial generators and are dropped.  Each
    relator of ``fp`` is rewritten starting at every coset; the output
    relators are freely reduced.
    """
    if table.fpgroup is not fp and table.fpgroup != fp:
        raise ValueError("coset table does not belong to this presentation")
    n = table.index
    g = fp.ngens

    # BFS spanning tree; tree edges stored in positive form (coset, gen, image)
    tree: set[tuple[int, int]] = set()  # (coset, t) positive edges in the tree
    visited = [False] * n
    visited[0] = True
    queue = [0]
    while queue:
        c = queue.pop(0)
        for col in range(2 * g):
            nxt = table.table[c][col]
            if not visited[nxt]:
                visited[nxt] = True
                t = col // 2
                if col % 2 == 0:
                    tree.add((c, t))
                else:
                    tree.add((nxt, t))
                queue.append(nxt)
    if not all(visited):
        raise RuntimeError("coset graph is not connected")

    sgen_index: dict[tuple[int, int], int] = {}
    for c in range(n):
        for t in range(g):
            if (c, t) not in tree:
                sgen_index[(c, t)] = len(sgen_index) + 1
    names = tuple(f"s{i}" for i in range(1, len(sgen_index) + 1))

    def rewrite(relator: Word, start: int) -> Word:
        out: list[int] = []
        c = start
        for letter in relator:
            t = abs(letter) - 1
            if letter > 0:
                nxt = table.table[c][2 * t]
                if (c, t) not in tree:
                    out.append(sgen_index[(c, t)])
            else:
                nxt = table.table[c][2 * t + 1]
                if (nxt, t) not in tree:
                    out.append(-sgen_index[(nxt, t)])
            c = nxt
        if c != start:
            raise RuntimeError("relator trace did not close during rewriting")
        return free_reduce(out)

    relators = []
    for rel in fp.relators:
        for c in range(n):
            w = rewrite(rel, c)
            if w:
                relators.append(w)
    return FPGroup(generator_names=names, relators=tuple(relators))


@dataclass(frozen=True)
class AbelianInvariants:
    """Finitely generated abelian group in invariant-factor form."""

    free_rank: int
    torsion: tuple[int, ...]  # d_1 | d_2 | ... , each >= 2

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError(f"invariant factors {self.torsion} violate divisibility")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion factors must be >= 2")

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class SNFResult:
    invariant_factors: tuple[int, ...]  # nonzero diagonal, ascending divisibility
    ncols: int
    nrows: int
    transforms: tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]] | None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def abelian_invariants(self) -> AbelianInvariants:
        """Cokernel of the matrix as a map into Z^ncols (columns are the
        abelian group's generators, rows its relations)."""
        return AbelianInvariants(
            free_rank=self.ncols - self.rank,
            torsion=tuple(d for d in self.invariant_factors if d > 1),
        )


def smith_normal_form(
    matrix: Sequence[Sequence[int]],
    ncols: int | None = None,
    with_transforms: bool = False,
) -> SNFResult:
    """Smith normal form over the integers, exact for any input size.

    Pivoting picks the smallest nonzero entry in absolute value and fully
    reduces its row and column; a pivot is only recorded once it divides
    every remaining entry, so the invariant factors come out in a
    divisibility chain.  Arithmetic is arbitrary-precision throughout.

    When ``with_transforms`` is set, unimodular ``(U, V)`` with
    ``U M V = diag(invariant factors)`` are returned and verified (meant
    for audits on small matrices; it stores dense transforms).
    """
    nrows = len(matrix)
    if ncols is None:
        ncols = len(matrix[0]) if nrows else 0
    rows: dict[int, dict[int, int]] = {}
    colindex: dict[int, set[int]] = {}
    for i, row in enumerate(matrix):
        if len(row) != ncols:
            raise ValueError(f"row {i} has length {len(row)}, expected {ncols}")
        entries = {j: int(v) for j, v in enumerate(row) if v}
        if entries:
            rows[i] = entries
            for j in entries:
                colindex.setdefault(j, set()).add(i)

    U = [[int(i == j) for j in range(nrows)] for i in range(nrows)] if with_transforms else None
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)] if with_transforms else None

    def set_entry(i: int, j: int, v: int) -> None:
        if v:
            rows.setdefault(i, {})[j] = v
            colindex.setdefault(j, set()).add(i)
        else:
            if i in rows and j in rows[i]:
                del rows[i][j]
                if not rows[i]:
                    del rows[i]
                colindex[j].discard(i)
                if not colindex[j]:
                    del colindex[j]

    def add_row(dst: int, src: int, factor: int) -> None:
        # row_dst += factor * row_src
        if factor == 0:
            return
        for j, v in list(rows.get(src, {}).items()):
            set_entry(dst, j, rows.get(dst, {}).get(j, 0) + factor * v)
        if U is not None:
            for k in range(nrows):
                U[dst][k] += factor * U[src][k]

    def add_col(dst: int, src: int, factor: int) -> None:
        if factor == 0:
            return
        for i in list(colindex.get(src, set())):
            set_entry(i, dst, rows.get(i, {}).get(dst, 0) + factor * rows[i][src])
        if V is not None:
            for k in range(ncols):
                V[k][dst] += factor * V[k][src]

    def negate_row(i: int) -> None:
        for j in list(rows.get(i, {})):
            rows[i][j] = -rows[i][j]
        if U is not None:
            U[i] = [-x for x in U[i]]

    pivots: list[tuple[int, int, int]] = []  # (row, col, value)
    frozen_rows: set[int] = set()
    frozen_cols: set[int] = set()

    while True:
        best = None
        for i, entries in rows.items():
            if i in frozen_rows:
                continue
            for j, v in entries.items():
                if j in frozen_cols:
                    continue
                key = (abs(v), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, pi, pj = best

        while True:
            p = rows[pi][pj]
            if p < 0:
                negate_row(pi)
                p = -p
            # clear the pivot column; division leaves remainders in [0, p)
            for i in sorted(colindex.get(pj, set())):
                if i == pi or i in frozen_rows:
                    continue
                q = rows[i][pj] // p
                if q:
                    add_row(i, pi, -q)
            col_rest = [
                i for i in colindex.get(pj, ()) if i != pi and i not in frozen_rows
            ]
            if col_rest:
                # strictly smaller entries appeared; move the pivot there
                pi = min(col_rest, key=lambda i: (abs(rows[i][pj]), i))
                continue
            # clear the pivot row
            for j in sorted(rows.get(pi, {})):
                if j == pj or j in frozen_cols:
                    continue
                q = rows[pi][j] // p
                if q:
                    add_col(j, pj, -q)
            row_rest = [
                j for j in rows.get(pi, {}) if j != pj and j not in frozen_cols
            ]
            if row_rest:
                pj = min(row_rest, key=lambda j: (abs(rows[pi][j]), j))
                continue
            # pivot must divide everything that remains
            offender = None
            for i, entries in rows.items():
                if i in frozen_rows or i == pi:
                    continue
                for j, v in entries.items():
                    if j in frozen_cols:
                        continue
                    if v % p != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(pi, offender, 1)

        p = rows[pi][pj]
        pivots.append((pi, pj, p))
        frozen_rows.add(pi)
        frozen_cols.add(pj)

    factors = tuple(p for _, _, p in pivots)
    for a, b in zip(factors, factors[1:]):
        if b % a != 0:
            raise RuntimeError(f"invariant factors {factors} violate divisibility")

    transforms = None
    if with_transforms:
        # reorder rows/cols so the pivots land on the leading diagonal
        row_order = [i for i, _, _ in pivots] + [
            i for i in range(nrows) if i not in frozen_rows
        ]
        col_order = [j for _, j, _ in pivots] + [
            j for j in range(ncols) if j not in frozen_cols
        ]
        U2 = tuple(tuple(U[i]) for i in row_order)
        V2 = tuple(tuple(V[k][j] for j in col_order) for k in range(ncols))
        check = _mat_mul(_mat_mul(U2, tuple(tuple(r) for r in matrix)), V2)
        for i in range(nrows):
            for j in range(ncols):
                expected = factors[i] if i == j and i < len(factors) else 0
                if check[i][j] != expected:
                    raise RuntimeError("transform certificate failed verification")
        transforms = (U2, V2)

    return SNFResult(
        invariant_factors=factors, ncols=ncols, nrows=nrows, transforms=transforms
    )


def _mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        row = out[i]
        for t in range(k):
            v = ai[t]
            if v:
                bt = b[t]
                for j in range(m):
                    row[j] += v * bt[j]
    return tuple(tuple(r) for r in out)


def abelianization(fp: FPGroup) -> AbelianInvariants:
    """Abelian invariants of a presentation, via the exponent matrix."""
    matrix = []
    for rel in fp.relators:
        row = [0] * fp.ngens
        for letter in rel:
            row[abs(letter) - 1] += 1 if letter > 0 else -1
        matrix.append(row)
    return smith_normal_form(matrix, ncols=fp.ngens).abelian_invariants


def h1_surface(pair: UnmixedPair) -> AbelianInvariants:
    """First integral homology of the quotient surface of a free pair,
    by abelianizing the fiber-product subgroup presentation."""
    table = fiber_coset_table(pair)
    sub = reidemeister_schreier(table.fpgroup, table)
    invariants = abelianization(sub)
    if invariants.free_rank != 0:
        raise ValueError(
            f"first Betti number is {invariants.free_rank}, not 0: "
            "the family is not a rational-homology quadric"
        )
    return invariants
