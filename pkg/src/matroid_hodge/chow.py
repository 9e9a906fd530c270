"""Graded Chow rings of unimodular fans, with normal forms and degree maps.

Degree q of the ring is spanned by the square-free monomials x_sigma of the
q-dimensional cones sigma (sorted tuples of ray indices).  The linear
relations in degree q come from pairs (tau, m) with tau a (q-1)-cone and m
an integer functional vanishing on tau.  The basis of each degree is the
lexicographically smallest set of cone monomials independent modulo those
relations; every element is stored as its coordinates in that basis.
"""

import random
from fractions import Fraction

from .errors import InputError, VerificationError
from .fan import BergmanFan, build_fan, dot, flip_order, full_filter, validate_filter
from .linalg import SparseEchelon, integer_kernel, integral_quotient, solve
from .matroid import bits, lowest


class ChowElement:
    """A homogeneous element in normal form: basis cone -> rational."""

    __slots__ = ("ring", "degree", "terms")

    def __init__(self, ring, degree, terms):
        self.ring = ring
        self.degree = degree
        self.terms = {c: Fraction(v) for c, v in terms.items() if v}

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, ChowElement):
            if self.is_zero() and other.is_zero():
                return True
            return self.degree == other.degree and self.terms == other.terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def _check(self, other):
        if other.ring is not self.ring:
            raise ValueError("elements of different rings")
        if other.degree != self.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("adding elements of different degrees")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for c, v in other.terms.items():
            out[c] = out.get(c, 0) + v
        deg = self.degree if self.terms else other.degree
        return ChowElement(self.ring, deg, out)

    def __neg__(self):
        return ChowElement(self.ring, self.degree, {c: -v for c, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, ChowElement):
            return self.ring.multiply(self, other)
        return ChowElement(self.ring, self.degree,
                           {c: v * other for c, v in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def vector(self):
        """Coordinates in the chosen basis of its degree."""
        return [self.terms.get(c, Fraction(0)) for c in self.ring.basis(self.degree)]

    def __repr__(self):
        return f"ChowElement(deg {self.degree}, {len(self.terms)} terms)"


class _Degree:
    """Per-degree monomials together with their relations and reduction map."""

    def __init__(self, ring, q):
        fan = ring.fan
        self.monomials = fan.cones_by_dim[q] if q <= fan.dim else []
        self.index = {c: k for k, c in enumerate(self.monomials)}
        self.rows = ring.relation_rows(q) if self.monomials else []
        order = range(len(self.monomials) - 1, -1, -1)
        self.echelon = SparseEchelon(self.rows, order)
        self.basis = [self.monomials[k] for k in sorted(self.echelon.basis)]


class ChowRing:
    """The Chow ring of a unimodular fan, over the rationals."""

    def __init__(self, fan, degree_weights=None, chain=None):
        self.fan = fan
        self._degrees = {}
        self._reduced = {}
        self._perp = {}
        self._weights = degree_weights
        self._chain = chain
        matroid = getattr(fan, "matroid", None)
        self.r = matroid.r if matroid is not None else fan.dim

    # --- structure --------------------------------------------------------

    def _data(self, q):
        d = self._degrees.get(q)
        if d is None:
            d = _Degree(self, q)
            self._degrees[q] = d
        return d

    def monomials(self, q):
        return self._data(q).monomials

    def basis(self, q):
        return self._data(q).basis

    def dim(self, q):
        if q < 0 or q > self.fan.dim:
            return 0
        return len(self._data(q).basis)

    def hilbert(self):
        dims = [self.dim(q) for q in range(self.fan.dim + 1)]
        while len(dims) > 1 and dims[-1] == 0:
            dims.pop()
        return dims

    def perp_basis(self, cone):
        """Z-basis of the integer functionals vanishing on the cone."""
        b = self._perp.get(cone)
        if b is None:
            n = self.fan.ambient_dim
            if cone:
                b = integer_kernel([list(self.fan.rays[k]) for k in cone], n)
            else:
                b = [[int(i == j) for j in range(n)] for i in range(n)]
            self._perp[cone] = b
        return b

    def relation_rows(self, q):
        """Sparse integer relations among degree-q cone monomials."""
        fan = self.fan
        if q < 1 or q > fan.dim:
            return []
        index = {c: k for k, c in enumerate(fan.cones_by_dim[q])}
        rows = []
        for tau in fan.cones_by_dim[q - 1]:
            link = fan.link_rays(tau)
            if not link:
                continue
            for m in self.perp_basis(tau):
                row = {}
                for f in link:
                    v = dot(fan.rays[f], m)
                    if v:
                        row[index[tuple(sorted(tau + (f,)))]] = v
                if row:
                    rows.append(row)
        return rows

    # --- elements ---------------------------------------------------------

    def zero(self, q=0):
        return ChowElement(self, q, {})

    def one(self):
        return ChowElement(self, 0, {(): 1})

    def from_cones(self, q, vec):
        """Normal form of a combination of degree-q cone monomials."""
        d = self._data(q)
        idx = {}
        for c, v in vec.items():
            c = tuple(sorted(c))
            if c not in d.index:
                continue  # not a cone: zero in the ring
            k = d.index[c]
            idx[k] = idx.get(k, 0) + v
        nf = d.echelon.normal_form(idx)
        return ChowElement(self, q, {d.monomials[k]: v for k, v in nf.items()})

    def variable(self, label):
        """x_e for a ray label; labels that are not rays give zero."""
        k = self.fan.ray_index.get(label)
        if k is None:
            return self.zero(1)
        return self.from_cones(1, {(k,): 1})

    def linear(self, coefficients):
        """Sum of c_e x_e over rays, from a per-ray coefficient list."""
        return self.from_cones(1, {(k,): c for k, c in enumerate(coefficients) if c})

    def monomial(self, labels):
        """Product of the variables for the given ray labels (with repeats)."""
        exps = {}
        for lab in labels:
            k = self.fan.ray_index.get(lab)
            if k is None:
                return self.zero(len(labels))
            exps[k] = exps.get(k, 0) + 1
        return self.reduce(exps)

    # --- reduction --------------------------------------------------------

    def reduce(self, exponents, rule="largest-first", rng=None):
        """Normal form of the monomial prod x_e^k for an exponent map.

        ``rule`` picks the ray to substitute among those of largest exponent:
        ``"largest-first"`` (smallest index), ``"largest-last"`` (largest
        index) or ``"random"``.  ``rng`` also randomizes the functional m by
        adding a random functional vanishing on the support.
        """
        for k in exponents:
            if not 0 <= k < len(self.fan.rays):
                raise InputError("ray-not-in-fan", f"ray {k} is not in the fan")
        key = tuple(sorted((k, e) for k, e in exponents.items() if e))
        q = sum(e for _, e in key)
        if rule == "largest-first" and rng is None:
            terms = self._reduce_cached(key)
        else:
            terms = self._reduce_free(key, rule, rng or random.Random(0), rng is not None)
        return ChowElement(self, q, terms)

    def _support_ok(self, key):
        return tuple(k for k, _ in key) in self.fan.cone_set

    def _functional(self, support, e):
        """Rational m with m(e) = -1 and m = 0 on the rest of the support."""
        rows = [list(self.fan.rays[k]) for k in support]
        rhs = [Fraction(-1) if k == e else Fraction(0) for k in support]
        m = solve(rows, rhs)
        if m is None:
            raise VerificationError("identity-violation", "support rays are dependent")
        return m

    def _square_free(self, key):
        q = len(key)
        d = self._data(q)
        k = d.index[tuple(c for c, _ in key)]
        nf = d.echelon.normal_form({k: 1})
        return {d.monomials[j]: v for j, v in nf.items()}

    def _reduce_cached(self, key):
        hit = self._reduced.get(key)
        if hit is not None:
            return hit
        if not self._support_ok(key):
            out = {}
        elif all(e == 1 for _, e in key):
            out = self._square_free(key)
        else:
            top = max(e for _, e in key)
            e = min(k for k, x in key if x == top)
            out = self._substitute(key, e, None, self._reduce_cached)
        self._reduced[key] = out
        return out

    def _reduce_free(self, key, rule, rng, perturb):
        if not self._support_ok(key):
            return {}
        if all(e == 1 for _, e in key):
            return self._square_free(key)
        top = max(e for _, e in key)
        cands = [k for k, x in key if x == top]
        if rule == "largest-first":
            e = min(cands)
        elif rule == "largest-last":
            e = max(cands)
        elif rule == "random":
            e = rng.choice(cands)
        else:
            raise ValueError(f"unknown rule {rule!r}")
        return self._substitute(key, e, rng if perturb else None,
                                lambda k2: self._reduce_free(k2, rule, rng, perturb))

    def _substitute(self, key, e, rng, recurse):
        support = tuple(k for k, _ in key)
        m = self._functional(support, e)
        if rng is not None:
            for v in self.perp_basis(support):
                c = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                m = [a + c * b for a, b in zip(m, v)]
        rest = dict(key)
        rest[e] -= 1
        out = {}
        for f in self.fan.link_rays(support):
            coef = dot(self.fan.rays[f], m)
            if not coef:
                continue
            new = dict(rest)
            new[f] = 1
            sub = recurse(tuple(sorted((k, x) for k, x in new.items() if x)))
            for c, v in sub.items():
                out[c] = out.get(c, 0) + coef * v
        return {c: v for c, v in out.items() if v}

    def multiply(self, a, b):
        out = {}
        for s, u in a.terms.items():
            for t, v in b.terms.items():
                exps = {}
                for k in s:
                    exps[k] = exps.get(k, 0) + 1
                for k in t:
                    exps[k] = exps.get(k, 0) + 1
                key = tuple(sorted(exps.items()))
                for c, w in self._reduce_cached(key).items():
                    out[c] = out.get(c, 0) + u * v * w
        return ChowElement(self, a.degree + b.degree, out)

    # --- matroid classes ----------------------------------------------------

    def _require_full(self):
        fan = self.fan
        if not isinstance(fan, BergmanFan) or fan.filter != full_filter(fan.matroid):
            raise InputError("wrong-ring", "alpha and beta live on the full Bergman fan")

    def alpha(self, i=0):
        self._require_full()
        return self.from_cones(1, {(k,): 1 for k, (kind, f) in enumerate(self.fan.labels)
                                   if kind == "flat" and f >> i & 1})

    def beta(self, i=0):
        self._require_full()
        return self.from_cones(1, {(k,): 1 for k, (kind, f) in enumerate(self.fan.labels)
                                   if kind == "flat" and not f >> i & 1})

    def alpha_beta(self, i=0):
        return self.alpha(i), self.beta(i)

    # --- degree -----------------------------------------------------------

    def degree_weights(self):
        """deg of each basis monomial of the top degree r."""
        if self._weights is None:
            self._weights = _degree_weights(self, self._chain)
        return self._weights

    def degree(self, a):
        if a.is_zero():
            return Fraction(0)
        if a.degree != self.r:
            raise InputError("wrong-degree", f"degree map needs degree {self.r}, got {a.degree}")
        w = self.degree_weights()
        return sum(v * w[c] for c, v in a.terms.items())

    def degree_of_product(self, s, t):
        """deg(x_s x_t) for cone monomials whose degrees add up to r."""
        exps = {}
        for k in s + t:
            exps[k] = exps.get(k, 0) + 1
        key = tuple(sorted(exps.items()))
        w = self.degree_weights()
        return sum(v * w[c] for c, v in self._reduce_cached(key).items())

    def pairing_matrix(self, q, left=None, right=None):
        """Gram matrix of (a, b) -> deg(a b) for cone-monomial bases of
        degrees q and r - q (defaults: the chosen bases)."""
        left = self.basis(q) if left is None else left
        right = self.basis(self.r - q) if right is None else right
        return [[self.degree_of_product(s, t) for t in right] for s in left]

    def integral_basis(self, q):
        """(torsion, Z-basis of the free part as {cone: int} combinations)."""
        d = self._data(q)
        torsion, gens = integral_quotient(d.rows, len(d.monomials))
        return torsion, [{d.monomials[k]: v for k, v in g.items()} for g in gens]

    def integral_pairing_matrix(self, q):
        t1, left = self.integral_basis(q)
        t2, right = self.integral_basis(self.r - q)
        if t1 or t2:
            raise VerificationError("torsion", f"torsion {t1 or t2} in the Chow group")
        out = []
        for g in left:
            row = []
            for h in right:
                row.append(sum(u * v * self.degree_of_product(s, t)
                               for s, u in g.items() for t, v in h.items()))
            out.append(row)
        return out


# --- rings of matroids ------------------------------------------------------

_RINGS = {}


def chow_ring(m, flats=None, reduced=True, chain=None):
    """Chow ring of the Bergman fan of ``m`` and an order filter (cached)."""
    if flats is None:
        flats = full_filter(m)
    flats = frozenset(flats)
    key = (id(m), flats, reduced, tuple(chain) if chain else None)
    hit = _RINGS.get(key)
    if hit is not None and hit[0] is m:
        return hit[1]
    fan = build_fan(m, flats, reduced)
    ring = ChowRing(fan, chain=chain)
    _RINGS[key] = (m, ring)
    return ring


def clear_cache():
    _RINGS.clear()


def _degree_weights(ring, chain):
    fan = ring.fan
    top = ring.basis(ring.r) if ring.r <= fan.dim else []
    if not isinstance(fan, BergmanFan):
        raise InputError("wrong-ring", "degree map needs a Bergman fan")
    m = fan.matroid
    if fan.filter == full_filter(m):
        return {c: Fraction(1) for c in top}
    if not fan.reduced:
        red = chow_ring(m, fan.filter, reduced=True, chain=chain)
        out = {}
        for c in top:
            out[c] = red.degree(red.from_cones(ring.r, {c: 1})) if c in red.fan.cone_set \
                else Fraction(0)
        return out
    order = list(chain) if chain else flip_order(m, fan.filter)
    z = order[0]
    plus_filter = fan.filter | {z}
    validate_filter(m, plus_filter)
    plus = chow_ring(m, plus_filter, reduced=True, chain=order[1:] or None)
    return {c: plus.degree(pullback_monomial(ring, plus, z, c)) for c in top}


def pullback_monomial(minus, plus, z, cone):
    """Image of x_cone under x_F -> x_F, x_i -> x_i + x_Z (i in Z)."""
    fan = minus.fan
    z_ray = plus.fan.ray_index[("flat", z)]
    factors = []
    for k in cone:
        kind, v = fan.labels[k]
        options = []
        if kind == "element":
            own = plus.fan.ray_index.get(("element", v))
            if own is not None:
                options.append(own)
            if z >> v & 1:
                options.append(z_ray)
        else:
            options.append(plus.fan.ray_index[("flat", v)])
        factors.append(options)
    out = plus.zero(len(cone))
    partial = [{}]
    for options in factors:
        nxt = []
        for exps in partial:
            for k in options:
                e = dict(exps)
                e[k] = e.get(k, 0) + 1
                nxt.append(e)
        partial = nxt
    for exps in partial:
        out = out + plus.reduce(exps)
    if out.is_zero():
        return plus.zero(len(cone))
    return out


# --- identities --------------------------------------------------------------

def flags_up_to(m, length):
    """All flags of nonempty proper flats with at most ``length`` members."""
    flats = m.proper_flats()
    out = []
    stack = [(f,) for f in flats]
    while stack:
        flag = stack.pop()
        out.append(flag)
        if len(flag) < length:
            for g in flats:
                if g != flag[-1] and g & flag[-1] == flag[-1]:
                    stack.append(flag + (g,))
    return sorted(out, key=lambda fl: (len(fl), [bits(f) for f in fl]))


def flag_monomial(ring, flag):
    return ring.monomial([("flat", f) for f in flag])


def fundamental_class_checks(ring, max_length=3):
    """x_F1...x_Fk alpha^(r-k) is alpha^r for initial flags, 0 otherwise."""
    ring._require_full()
    m = ring.fan.matroid
    r = ring.r
    alpha = ring.alpha()
    alpha_powers = [ring.one()]
    for _ in range(r):
        alpha_powers.append(alpha_powers[-1] * alpha)
    report = {"initial": 0, "vanishing": 0}
    for flag in flags_up_to(m, min(r, max_length)):
        k = len(flag)
        prod = flag_monomial(ring, flag) * alpha_powers[r - k]
        initial = all(m.rk(f) == j + 1 for j, f in enumerate(flag))
        if initial:
            if prod != alpha_powers[r]:
                raise VerificationError("identity-violation",
                                        f"initial flag {[bits(f) for f in flag]} fails")
            report["initial"] += 1
        else:
            if not prod.is_zero():
                raise VerificationError("identity-violation",
                                        f"flag {[bits(f) for f in flag]} does not vanish")
            report["vanishing"] += 1
    return report


def descending_flags(m, k):
    """k-step flags with min F_1 > ... > min F_k > 0 (no rank condition)."""
    out = []
    for flag in flags_up_to(m, k):
        if len(flag) != k:
            continue
        mins = [lowest(f) for f in flag]
        if mins[-1] > 0 and all(a > b for a, b in zip(mins, mins[1:])):
            out.append(flag)
    return out


def beta_power_identity(ring, k):
    ring._require_full()
    m = ring.fan.matroid
    lhs = ring.beta() ** k
    rhs = ring.zero(k)
    for flag in descending_flags(m, k):
        rhs = rhs + flag_monomial(ring, flag)
    return lhs == rhs


def poincare_pairing(ring, q):
    return ring.pairing_matrix(q)
