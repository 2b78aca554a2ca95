"""Exact sparse linear algebra over the rationals.

Everything downstream (homology dimensions, residue oracles, kernel
searches) funnels through the three primitives here: rank, kernel_basis
and quotient_dim.  All arithmetic is exact (fractions.Fraction); pivoting
is deterministic (lowest row, then lowest column) so repeated runs are
bit-identical.
"""

from fractions import Fraction
from math import gcd


class SparseMat:
    """Immutable sparse matrix with Fraction entries.

    entries: dict (row, col) -> Fraction, zero entries never stored.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        ent = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise IndexError(f"entry ({r},{c}) out of range {rows}x{cols}")
                v = Fraction(v)
                if v:
                    ent[(r, c)] = v
        self.entries = ent

    @classmethod
    def from_rows(cls, rowlist, cols=None):
        """Build from a list of dense rows (lists of numbers)."""
        rows = len(rowlist)
        if cols is None:
            cols = len(rowlist[0]) if rowlist else 0
        entries = {}
        for r, row in enumerate(rowlist):
            for c, v in enumerate(row):
                if v:
                    entries[(r, c)] = Fraction(v)
        return cls(rows, cols, entries)

    @classmethod
    def from_columns(cls, collist, rows):
        """Build from a list of sparse columns (dicts row -> value)."""
        entries = {}
        for c, col in enumerate(collist):
            for r, v in col.items():
                if v:
                    entries[(r, c)] = Fraction(v)
        return cls(rows, len(collist), entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def get(self, r, c):
        return self.entries.get((r, c), Fraction(0))

    def to_rows(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        entries = dict(self.entries)
        for (r, c), v in other.entries.items():
            entries[(r, c + self.cols)] = v
        return SparseMat(self.rows, self.cols + other.cols, entries)

    def __repr__(self):
        return f"SparseMat({self.rows}x{self.cols}, {len(self.entries)} entries)"


def _eliminate(mat):
    """Fraction-free (Bareiss) forward elimination.

    Returns (pivot columns, echelon rows) where echelon rows are dicts
    col -> value for the nonzero rows of an upper-echelon form.  Pivot
    selection is deterministic: scan columns left to right, take the
    lowest-index available row with a nonzero entry in that column.
    """
    # rows as sparse dicts
    rows = [dict() for _ in range(mat.rows)]
    for (r, c), v in mat.entries.items():
        rows[r][c] = v
    rows = [r for r in rows]
    pivots = []
    echelon = []
    prev_pivot = Fraction(1)
    live = list(range(len(rows)))
    for col in range(mat.cols):
        pr = None
        for idx in live:
            if rows[idx].get(col):
                pr = idx
                break
        if pr is None:
            continue
        live.remove(pr)
        prow = rows[pr]
        p = prow[col]
        for idx in live:
            row = rows[idx]
            f = row.get(col)
            if not f:
                continue
            # Bareiss step: new = (p*row - f*prow)/prev_pivot (exact division)
            new = {}
            for c2 in set(row) | set(prow):
                if c2 < col:
                    continue
                v = (p * row.get(c2, 0) - f * prow.get(c2, 0)) / prev_pivot
                if v:
                    new[c2] = v
            rows[idx] = new
        prev_pivot = p
        pivots.append(col)
        echelon.append(prow)
        if not live:
            break
    return pivots, echelon


def rank(mat):
    """Rank over Q, by fraction-free elimination."""
    pivots, _ = _eliminate(mat)
    return len(pivots)


def rank_fast(mat):
    """Rank over Q for large sparse matrices.

    Rows are scaled to integers (rank-preserving), then eliminated with
    integer cross-multiplication and per-row gcd reduction; the pivot row
    is chosen deterministically as the sparsest candidate (ties by index)
    to limit fill-in.
    """
    rows = []
    for r in range(mat.rows):
        rows.append({})
    for (r, c), v in mat.entries.items():
        rows[r][c] = v
    irows = []
    for row in rows:
        if not row:
            continue
        den = 1
        for v in row.values():
            den = den * v.denominator // gcd(den, v.denominator)
        irow = {c: int(v * den) for c, v in row.items()}
        g = 0
        for v in irow.values():
            g = gcd(g, v)
        if g > 1:
            irow = {c: v // g for c, v in irow.items()}
        irows.append(irow)
    rk = 0
    live = irows
    while live:
        # deterministic sparsest-pivot-row selection
        best = min(range(len(live)), key=lambda i: (len(live[i]), i))
        prow = live.pop(best)
        pcol = min(prow)
        p = prow[pcol]
        rk += 1
        nxt = []
        for row in live:
            f = row.get(pcol)
            if f is None:
                nxt.append(row)
                continue
            new = {}
            for c in row.keys() | prow.keys():
                if c == pcol:
                    continue
                v = p * row.get(c, 0) - f * prow.get(c, 0)
                if v:
                    new[c] = v
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                if g > 1:
                    new = {c: v // g for c, v in new.items()}
                nxt.append(new)
        live = nxt
    return rk


RANK_PRIME = (1 << 61) - 1


def _cols_to_int_rows(cols):
    """Scale sparse Fraction columns to integer elimination rows."""
    out = []
    for col in cols:
        den = 1
        for v in col.values():
            den = den * v.denominator // gcd(den, v.denominator)
        row = {c: int(v * den) for c, v in col.items()}
        g = 0
        for v in row.values():
            g = gcd(g, v)
        if g > 1:
            row = {c: v // g for c, v in row.items()}
        if row:
            out.append(row)
    return out


def rank_cols_exact(cols):
    """Exact rank over Q of a list of sparse columns (dicts row -> value).

    Same elimination as rank_fast, but operating directly on the column
    dicts (rank is transpose-invariant, and boundary-matrix columns are
    much sparser than rows).
    """
    live = _cols_to_int_rows(cols)
    rk = 0
    while live:
        best = min(range(len(live)), key=lambda i: (len(live[i]), i))
        prow = live.pop(best)
        pcol = min(prow)
        p = prow[pcol]
        rk += 1
        nxt = []
        for row in live:
            f = row.get(pcol)
            if f is None:
                nxt.append(row)
                continue
            new = {}
            for c in row.keys() | prow.keys():
                if c == pcol:
                    continue
                v = p * row.get(c, 0) - f * prow.get(c, 0)
                if v:
                    new[c] = v
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                if g > 1:
                    new = {c: v // g for c, v in new.items()}
                nxt.append(new)
        live = nxt
    return rk


def rank_cols_mod(cols, p=RANK_PRIME):
    """Rank of sparse columns over F_p.

    This is always a lower bound for the rank over Q (a maximal nonzero
    minor over F_p lifts to a nonzero minor over Q), with equality unless
    p divides every maximal minor.  Deterministic: fixed prime, fixed
    sparsest-row pivot order.
    """
    live = []
    for row in _cols_to_int_rows(cols):
        row = {c: v % p for c, v in row.items() if v % p}
        if row:
            live.append(row)
    rk = 0
    while live:
        best = min(range(len(live)), key=lambda i: (len(live[i]), i))
        prow = live.pop(best)
        pcol = min(prow)
        pv = prow[pcol]
        rk += 1
        nxt = []
        for row in live:
            f = row.get(pcol)
            if f is None:
                nxt.append(row)
                continue
            new = {}
            for c in row.keys() | prow.keys():
                if c == pcol:
                    continue
                v = (pv * row.get(c, 0) - f * prow.get(c, 0)) % p
                if v:
                    new[c] = v
            if new:
                nxt.append(new)
        live = nxt
    return rk


def kernel_basis(mat):
    """Basis of the null space of mat, in deterministic reduced form.

    Returns a list of length-cols Fraction vectors; one vector per free
    column, with entry 1 in the free column and 0 in the other free
    columns (reduced echelon convention).
    """
    pivots, echelon = _eliminate(mat)
    pivset = set(pivots)
    free = [c for c in range(mat.cols) if c not in pivset]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * mat.cols
        vec[fc] = Fraction(1)
        # back substitution over the echelon rows (pivot cols ascending)
        for prow, pcol in zip(reversed(echelon), reversed(pivots)):
            s = Fraction(0)
            for c, v in prow.items():
                if c != pcol:
                    s += v * vec[c]
            vec[pcol] = -s / prow[pcol]
        basis.append(vec)
    return basis


def quotient_dim(cycles, boundaries):
    """dim(span of cycle columns / span of boundary columns).

    Raises ValueError("boundary not a cycle") when the boundary columns
    are not contained in the cycle span -- this doubles as the d^2 = 0
    sentinel for homology computations.
    """
    if cycles.rows != boundaries.rows:
        raise ValueError("ambient dimension mismatch")
    rc = rank(cycles)
    if boundaries.cols:
        joint = rank(cycles.hstack(boundaries))
        if joint != rc:
            raise ValueError("boundary not a cycle")
        rb = rank(boundaries)
    else:
        rb = 0
    return rc - rb


def in_span(cols_mat, vec):
    """Is the dense vector vec in the column span of cols_mat?"""
    v = {r: Fraction(x) for r, x in enumerate(vec) if x}
    extra = SparseMat(cols_mat.rows, 1, {(r, 0): x for r, x in v.items()})
    return rank(cols_mat.hstack(extra)) == rank(cols_mat)


def solve(mat, rhs):
    """One solution x of mat @ x = rhs, or None when inconsistent.

    Free variables are set to 0; deterministic.
    """
    aug = mat.hstack(SparseMat(mat.rows, 1, {(r, 0): Fraction(v) for r, v in enumerate(rhs) if v}))
    pivots, echelon = _eliminate(aug)
    if mat.cols in pivots:
        return None
    x = [Fraction(0)] * (mat.cols + 1)
    x[mat.cols] = Fraction(-1)
    for prow, pcol in zip(reversed(echelon), reversed(pivots)):
        s = Fraction(0)
        for c, v in prow.items():
            if c != pcol:
                s += v * x[c]
        x[pcol] = -s / prow[pcol]
    return x[: mat.cols]


def bernoulli(n):
    """Bernoulli number B_n with the B_1 = -1/2 convention.

    Standard recurrence sum_{k=0}^{n} C(n+1,k) B_k = 0; kept independent
    of any series machinery so it can serve as an oracle for the circle
    integrals.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    from math import comb

    for m in range(1, n + 1):
        s = Fraction(0)
        for k in range(m):
            s += comb(m + 1, k) * B[k]
        B[m] = -s / (m + 1)
    return B[n]
