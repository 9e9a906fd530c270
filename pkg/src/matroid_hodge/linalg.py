"""Exact linear algebra over the rationals and the integers.

Matrices are lists of rows; sparse vectors are dicts mapping a column
index to a nonzero coefficient.  Nothing here touches floating point.
"""

from fractions import Fraction
from math import gcd


def _content(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    return g


def _to_integer_row(row):
    """Scale a sparse rational row to a primitive integer row."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    out = {c: int(v * den) for c, v in row.items() if v}
    g = _content(out)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


class SparseEchelon:
    """Row space of a sparse matrix, reduced with a fixed column priority.

    ``order`` lists the columns from most to least preferred as pivots.
    The pivot set is therefore the greedy one along ``order`` and the
    non-pivot columns form a basis of the quotient of the coordinate space
    by the row space.  ``normal_form`` projects any vector onto that basis
    along the row space.
    """

    def __init__(self, rows, order):
        self.order = list(order)
        position = {c: k for k, c in enumerate(self.order)}
        work = {}
        by_col = {}
        for k, row in enumerate(rows):
            r = _to_integer_row(row)
            if not r:
                continue
            work[k] = r
            for c in r:
                by_col.setdefault(c, set()).add(k)

        echelon = []
        for c in self.order:
            holders = by_col.get(c)
            if not holders:
                continue
            pid = min(holders, key=lambda k: (len(work[k]), k))
            prow = work.pop(pid)
            for c2 in prow:
                by_col[c2].discard(pid)
            pv = prow[c]
            for k in list(by_col[c]):
                row = work[k]
                rv = row[c]
                g = gcd(pv, rv)
                a, b = pv // g, rv // g
                new = {x: a * v for x, v in row.items()}
                for x, v in prow.items():
                    nv = new.get(x, 0) - b * v
                    if nv:
                        new[x] = nv
                    else:
                        new.pop(x, None)
                for x in row:
                    if x not in new:
                        by_col[x].discard(k)
                for x in new:
                    if x not in row:
                        by_col.setdefault(x, set()).add(k)
                if new:
                    g = _content(new)
                    if g > 1:
                        new = {x: v // g for x, v in new.items()}
                    work[k] = new
                else:
                    del work[k]
            echelon.append((c, prow))

        # back substitution: every pivot row ends up free of other pivots
        self.pivots = {}
        for c, prow in reversed(echelon):
            pv = prow[c]
            row = {x: Fraction(v, pv) for x, v in prow.items() if x != c}
            for x in [x for x in row if x in self.pivots]:
                coef = row.pop(x)
                for y, v in self.pivots[x].items():
                    nv = row.get(y, 0) + coef * v
                    if nv:
                        row[y] = nv
                    else:
                        row.pop(y, None)
            # stored as: e_c == sum(row[y] * e_y) in the quotient, with sign
            self.pivots[c] = {y: -v for y, v in row.items()}
        self.rank = len(self.pivots)
        self.basis = sorted((c for c in self.order if c not in self.pivots),
                            key=lambda c: position[c], reverse=True)

    def normal_form(self, vec):
        out = {}
        for c, v in vec.items():
            if not v:
                continue
            image = self.pivots.get(c)
            if image is None:
                out[c] = out.get(c, 0) + v
            else:
                for y, w in image.items():
                    out[y] = out.get(y, 0) + v * w
        return {c: v for c, v in out.items() if v}


def bareiss_rank(matrix):
    """Rank by fraction-free elimination; entries may be ints or Fractions."""
    rows = [_dense_integer_row(r) for r in matrix]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            a = rows[i][col]
            rows[i] = [(p * rows[i][j] - a * rows[rank][j]) // prev
                       for j in range(ncols)]
        prev = p
        rank += 1
        if rank == len(rows):
            break
    return rank


def _dense_integer_row(row):
    den = 1
    for v in row:
        if isinstance(v, Fraction):
            den = den * v.denominator // gcd(den, v.denominator)
    return [int(v * den) for v in row]


def determinant(matrix):
    """Exact determinant by Bareiss elimination over the rationals."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(v) for v in row] for row in matrix]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rref(matrix):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    a = [[Fraction(v) for v in row] for row in matrix]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(matrix, ncols=None):
    """Basis of {x : matrix x = 0} over Q, as a list of Fraction lists."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    rows, pivots = rref(matrix) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(matrix, rhs):
    """One rational solution of matrix x = rhs, or None if inconsistent."""
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(rows, pivots):
        x[p] = row[ncols]
    return x


def mat_vec(matrix, vec):
    return [sum(a * b for a, b in zip(row, vec)) for row in matrix]


def transpose(matrix):
    return [list(col) for col in zip(*matrix)]


# --- integer lattices -------------------------------------------------------

def integer_kernel(matrix, ncols):
    """A Z-basis of the integer vectors x with matrix x = 0.

    Column operations on the matrix stacked over the identity; columns whose
    top part vanishes carry the kernel.
    """
    m = len(matrix)
    cols = [[matrix[i][j] for i in range(m)] + [int(i == j) for i in range(ncols)]
            for j in range(ncols)]
    lead = 0
    for i in range(m):
        # gather a gcd in column `lead` among remaining columns on row i
        while True:
            nz = [j for j in range(lead, ncols) if cols[j][i]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][i]))
            cols[lead], cols[j0] = cols[j0], cols[lead]
            done = True
            for j in range(lead + 1, ncols):
                if cols[j][i]:
                    q = cols[j][i] // cols[lead][i]
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[lead])]
                    if cols[j][i]:
                        done = False
            if done:
                lead += 1
                break
    return [c[m:] for c in cols[lead:]]


def smith_form(matrix, ncols):
    """Smith normal form data of an integer matrix.

    Returns ``(invariants, inverse_columns)`` where ``invariants`` are the
    nonzero diagonal entries and ``inverse_columns`` is the inverse of the
    accumulated column transform: for D = P A C, its rows are C^{-1}.  The
    quotient Z^ncols / rowspace(A) has free generators given by the rows of
    C^{-1} with index >= len(invariants).
    """
    a = [list(r) for r in matrix if any(r)]
    cinv = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    invariants = []
    t = 0
    while True:
        entries = [(abs(a[i][j]), i, j) for i in range(t, len(a))
                   for j in range(t, ncols) if a[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        a[t], a[i0] = a[i0], a[t]
        _swap_cols(a, cinv, t, j0)
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, len(a)):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // p
                    _add_col(a, cinv, j, t, -q)
                    if a[t][j]:
                        clean = False
            if clean:
                # divisibility of the remaining block
                bad = next(((i, j) for i in range(t + 1, len(a))
                            for j in range(t + 1, ncols) if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            entries = [(abs(a[i][t]), i, t) for i in range(t, len(a)) if a[i][t]]
            entries += [(abs(a[t][j]), t, j) for j in range(t, ncols) if a[t][j]]
            _, i0, j0 = min(entries)
            a[t], a[i0] = a[i0], a[t]
            _swap_cols(a, cinv, t, j0)
        invariants.append(abs(a[t][t]))
        t += 1
        if t == len(a) or t == ncols:
            break
    return invariants, cinv


def _swap_cols(a, cinv, i, j):
    if i == j:
        return
    for row in a:
        row[i], row[j] = row[j], row[i]
    cinv[i], cinv[j] = cinv[j], cinv[i]


def _add_col(a, cinv, j, i, f):
    """col_j += f * col_i, tracking C^{-1} (row_i -= f * row_j)."""
    for row in a:
        row[j] += f * row[i]
    cinv[i] = [x - f * y for x, y in zip(cinv[i], cinv[j])]


def integral_quotient(rows, ncols):
    """Structure of Z^ncols modulo the span of sparse integer ``rows``.

    Returns ``(torsion, generators)``: the invariant factors larger than one,
    and integer vectors (dicts) whose classes form a basis of the free part.
    Unit pivots are eliminated greedily first; only the residue goes through
    a dense Smith computation.
    """
    work = [dict(r) for r in rows if r]
    alive = set(range(ncols))
    while True:
        hit = None
        for k, r in enumerate(work):
            for c, v in r.items():
                if v in (1, -1):
                    hit = (k, c)
                    break
            if hit:
                break
        if hit is None:
            break
        k, c = hit
        prow = work.pop(k)
        pv = prow[c]
        rest = []
        for r in work:
            v = r.get(c)
            if v:
                f = v * pv
                for x, w in prow.items():
                    nv = r.get(x, 0) - f * w
                    if nv:
                        r[x] = nv
                    else:
                        r.pop(x, None)
            if r:
                rest.append(r)
        work = rest
        alive.discard(c)
    cols = sorted(alive)
    if not work:
        return [], [{c: 1} for c in cols]
    index = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in work]
    for i, r in enumerate(work):
        for c, v in r.items():
            dense[i][index[c]] = v
    invariants, cinv = smith_form(dense, len(cols))
    torsion = [d for d in invariants if d != 1]
    gens = []
    for row in cinv[len(invariants):]:
        gens.append({cols[k]: v for k, v in enumerate(row) if v})
    return torsion, gens


# --- symmetric forms ------------------------------------------------------

def signature(matrix):
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Congruence diagonalization: pivot on the largest-magnitude diagonal
    entry.  When the remaining diagonal vanishes but an off-diagonal entry
    a_ij does not, the congruence e_i -> e_i + e_j creates the nonzero
    diagonal entry 2 a_ij and elimination resumes.
    """
    a = [[Fraction(v) for v in row] for row in matrix]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        diag = [i for i in active if a[i][i]]
        if diag:
            p = max(diag, key=lambda i: abs(a[i][i]))
            d = a[p][p]
            pos += d > 0
            neg += d < 0
            active.remove(p)
            for i in active:
                if a[i][p]:
                    f = a[i][p] / d
                    for j in active:
                        a[i][j] -= f * a[p][j]
            continue
        pair = next(((i, j) for i in active for j in active
                     if i < j and a[i][j]), None)
        if pair is None:
            break
        i, j = pair
        # replace e_i by e_i + e_j so that the new diagonal entry is 2 a_ij
        for k in range(n):
            a[i][k] += a[j][k]
        for k in range(n):
            a[k][i] += a[k][j]
    return pos, neg, n - pos - neg


def is_positive_definite(matrix):
    """Sylvester's criterion: all leading principal minors positive.

    Elimination without pivoting produces the ratios of consecutive leading
    minors as its pivots, so one pass suffices.
    """
    a = [[Fraction(v) for v in row] for row in matrix]
    n = len(a)
    for k in range(n):
        pivot = a[k][k]
        if pivot <= 0:
            return False
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / pivot
                row_k = a[k]
                row_i = a[i]
                for j in range(k + 1, n):
                    if row_k[j]:
                        row_i[j] -= f * row_k[j]
    return True


# --- linear programming -------------------------------------------------------

def maximize(c, a_ub, b_ub):
    """Maximize c.x subject to a_ub x <= b_ub and x >= 0, exactly.

    Requires b_ub >= 0 so the origin is feasible.  Bland's rule keeps the
    simplex method from cycling.  Returns (optimum, x) or (None, None)
    when the objective is unbounded.
    """
    m, n = len(a_ub), len(c)
    assert all(b >= 0 for b in b_ub)
    # tableau columns: x_0..x_{n-1}, slacks, rhs
    t = [[Fraction(v) for v in row] + [Fraction(int(i == k)) for k in range(m)]
         + [Fraction(b)] for i, (row, b) in enumerate(zip(a_ub, b_ub))]
    z = [Fraction(-v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]
    width = n + m
    while True:
        enter = next((j for j in range(width) if z[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if t[i][enter] > 0:
                ratio = t[i][-1] / t[i][enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return None, None
        r = best[1]
        pv = t[r][enter]
        t[r] = [v / pv for v in t[r]]
        for i in range(m):
            if i != r and t[i][enter]:
                f = t[i][enter]
                t[i] = [x - f * y for x, y in zip(t[i], t[r])]
        if z[enter]:
            f = z[enter]
            z = [x - f * y for x, y in zip(z, t[r])]
        basis[r] = enter
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = t[i][-1]
    return z[-1], x
