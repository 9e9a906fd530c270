"""Hodge-Riemann forms built from Lefschetz maps, with exact HL/HR certification."""

from fractions import Fraction
from math import comb

from .chow import ChowElement, chow_ring
from .errors import InputError
from .fan import (PLFunction, build_fan, convexity_witness, describe_filter, full_filter,
                  submodular_to_class)
from .linalg import determinant, is_positive_definite, nullspace, signature

SCHEMA_VERSION = 1


def _power(ell, k, one):
    out = one
    for _ in range(k):
        out = out * ell
    return out


def _as_class(ring, ell):
    if isinstance(ell, ChowElement):
        if ell.degree != 1:
            raise InputError("wrong-degree", "ell must have degree 1")
        return ell
    if isinstance(ell, PLFunction):
        return ring.linear(ell.values)
    return ring.linear(list(ell))


def _images(ring, ell, q, k):
    """Coordinates of ell^k * b in the degree q+k basis, for each basis b."""
    ell = _as_class(ring, ell)
    power = _power(ell, k, ring.one())
    target = {c: i for i, c in enumerate(ring.basis(q + k))}
    cols = []
    for b in ring.basis(q):
        image = ring.from_cones(q, {b: 1}) * power
        col = [Fraction(0)] * len(target)
        for c, v in image.terms.items():
            col[target[c]] = v
        cols.append(col)
    return cols


def lefschetz_matrix(ring, ell, q):
    """Matrix (rows: A^(r-q) basis, columns: A^q basis) of ell^(r-2q)."""
    r = ring.r
    if not 0 <= 2 * q <= r:
        raise InputError("wrong-degree", f"q must lie in 0..{r // 2}")
    cols = _images(ring, ell, q, r - 2 * q)
    rows = len(ring.basis(r - q))
    return [[cols[j][i] for j in range(len(cols))] for i in range(rows)]


class SymmetricForm:
    def __init__(self, q, gram):
        self.q = q
        self.gram = gram
        n = len(gram)
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise ValueError(f"Gram matrix is not symmetric at ({i}, {j})")
        self.signature = signature(gram) if n else (0, 0, 0)

    @property
    def dim(self):
        return len(self.gram)

    def restricted(self, vectors):
        g = self.gram
        gv = [[sum(row[k] * v[k] for k in range(len(v)) if v[k]) for row in g] for v in vectors]
        return [[sum(u[k] * w[k] for k in range(len(u)) if u[k]) for w in gv] for u in vectors]

    def __call__(self, a, b):
        return sum(a[i] * self.gram[i][j] * b[j]
                   for i in range(len(a)) if a[i] for j in range(len(b)) if b[j])


def hodge_riemann_form(ring, ell, q):
    """(a, b) -> (-1)^q deg(a ell^(r-2q) b) on the chosen basis of A^q."""
    lmat = lefschetz_matrix(ring, ell, q)
    pairing = ring.pairing_matrix(q)
    sign = -1 if q % 2 else 1
    n = len(pairing)
    m = len(lmat)
    gram = [[sign * sum(pairing[i][k] * lmat[k][j] for k in range(m) if lmat[k][j])
             for j in range(n)] for i in range(n)]
    return SymmetricForm(q, gram)


def expected_signature_difference(hilbert, q):
    """sum over p <= q of (-1)^(q-p) (dim A^p - dim A^(p-1))."""
    def dim(p):
        return hilbert[p] if 0 <= p < len(hilbert) else 0
    return sum((-1) ** (q - p) * (dim(p) - dim(p - 1)) for p in range(q + 1))


def primitive_subspace(ring, ell, q):
    """Basis of the kernel of ell^(r-2q+1) on A^q, in basis coordinates."""
    k = ring.r - 2 * q + 1
    cols = _images(ring, ell, q, k)
    rows = len(ring.basis(q + k)) if q + k <= ring.r else 0
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(rows)]
    n = len(cols)
    if not matrix:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return nullspace(matrix, n)


class HodgeReport:
    def __init__(self, matroid, filter_id, ell_id, levels):
        self.matroid = matroid
        self.filter = filter_id
        self.ell = ell_id
        self.levels = levels

    @property
    def hl(self):
        return all(lv["hl"] for lv in self.levels)

    @property
    def hr(self):
        return all(lv["hr"] for lv in self.levels)

    @property
    def consistent(self):
        """HR implies HL, and both HR routes agree, at every level."""
        return all((not lv["hr"] or lv["hl"]) and lv["hr"] == lv["primitive_positive"]
                   for lv in self.levels)

    def to_json(self):
        return {"schema_version": SCHEMA_VERSION, "matroid": self.matroid,
                "filter": self.filter, "ell": self.ell, "levels": self.levels,
                "hl": self.hl, "hr": self.hr}


def certify(ring, ell, nef=False, ell_id="custom"):
    """Certify HL and HR for ``ell`` on every degree q <= r/2.

    A PLFunction is checked for strict convexity on the non-reduced fan of
    the same filter first; pass ``nef=True`` to skip that requirement (the
    function must then still be convex).
    """
    fan = ring.fan
    m = fan.matroid
    if isinstance(ell, PLFunction):
        whole = build_fan(m, fan.filter, reduced=False, check=False)
        values = PLFunction(whole, [ell.values[fan.ray_index[lab]] for lab in whole.labels])
        witness = convexity_witness(whole, values, strict=not nef)
        if witness is not None:
            raise InputError("not-ample",
                             f"ell is not {'convex' if nef else 'strictly convex'} "
                             f"around cone {witness}")
    hilbert = [ring.dim(p) for p in range(ring.r + 1)]
    levels = []
    for q in range(ring.r // 2 + 1):
        form = hodge_riemann_form(ring, ell, q)
        pos, neg, zero = form.signature
        hl = zero == 0
        hr = hl and pos - neg == expected_signature_difference(hilbert, q)
        prim = primitive_subspace(ring, ell, q)
        positive = is_positive_definite(form.restricted(prim)) if prim else True
        levels.append({"q": q, "dim": form.dim, "hl": hl, "signature": [pos, neg, zero],
                       "hr": hr, "primitive_dim": len(prim),
                       "primitive_positive": positive})
    return HodgeReport(m.name, describe_filter(m, fan.filter), ell_id, levels)


def default_ell(ring, c=None):
    """The ample class used by default on a ring of a matroid.

    On the full filter this is the submodular class of ``c`` (default
    |I|(|E|-|I|)); other filters get a class transported along flips.
    """
    fan = ring.fan
    m = fan.matroid
    if fan.filter == full_filter(m):
        return submodular_to_class(fan, c)
    from .flips import ample_class_along_chain
    ell = ample_class_along_chain(m, fan.filter)
    return PLFunction(fan, [ell.values[ell.fan.ray_index[lab]] for lab in fan.labels])


def certify_matroid(m, flats=None, c=None):
    ring = chow_ring(m, flats)
    ell = default_ell(ring, c)
    return certify(ring, ell, ell_id="default" if c is None else "custom")


def product_hr_oracle(r1, r2, q):
    """Sign check (-1)^(q(q+1)/2) det[C(r1+r2-2q, r1-i-j)] > 0.

    Returns (passes, determinant).
    """
    if not 0 <= q <= r1 <= r2:
        raise InputError("wrong-degree", "need 0 <= q <= r1 <= r2")
    total = r1 + r2 - 2 * q

    def binom(k):
        return comb(total, k) if 0 <= k <= total else 0

    matrix = [[binom(r1 - i - j) for j in range(q + 1)] for i in range(q + 1)]
    det = determinant(matrix)
    sign = -1 if (q * (q + 1) // 2) % 2 else 1
    return sign * det > 0, det


def nef_degree_inequality(ring, ell1, ell2):
    """deg(l1 l1 l2^(r-2)) deg(l2^r) <= deg(l1 l2^(r-1))^2.

    Returns (holds, (left degree, right degree, mixed degree)).
    """
    r = ring.r
    if r < 2:
        raise InputError("rank-too-small", "the inequality needs r >= 2")
    a = _as_class(ring, ell1)
    b = _as_class(ring, ell2)
    base = _power(b, r - 2, ring.one())
    d11 = ring.degree(a * a * base)
    d22 = ring.degree(b * b * base)
    d12 = ring.degree(a * b * base)
    return d11 * d22 <= d12 * d12, (d11, d22, d12)
