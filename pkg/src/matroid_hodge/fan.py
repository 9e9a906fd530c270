"""Bergman fans of matroids and generic simplicial-fan machinery.

Lattice coordinates: N_E = Z^E / <e_E> is identified with Z^n (n = |E| - 1)
by dropping the coordinate of element 0, so e_0 = -(e_1 + ... + e_n).  The
vector of a subset S is the indicator of S when 0 is not in S and minus the
indicator of its complement otherwise.  Linear functionals are integer
vectors in the dual basis and pair with rays by the dot product.
"""

from fractions import Fraction
from itertools import combinations

from .errors import InputError, VerificationError
from .linalg import SparseEchelon, maximize, nullspace, smith_form, solve
from .matroid import bits, flat_key, popcount


def subset_vector(mask, size):
    if mask & 1:
        mask = ((1 << size) - 1) & ~mask
        return tuple(-(mask >> e & 1) for e in range(1, size))
    return tuple(mask >> e & 1 for e in range(1, size))


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


class Fan:
    """A simplicial fan given by ray vectors and cones as sorted index tuples.

    ``cones`` must be closed under taking faces and contain the empty cone.
    """

    def __init__(self, ambient_dim, rays, labels, cones):
        self.ambient_dim = ambient_dim
        self.rays = [tuple(r) for r in rays]
        self.labels = list(labels)
        self.ray_index = {lab: k for k, lab in enumerate(self.labels)}
        self.cone_set = frozenset(tuple(sorted(c)) for c in cones)
        top = max(len(c) for c in self.cone_set)
        self.cones_by_dim = [sorted(c for c in self.cone_set if len(c) == k)
                             for k in range(top + 1)]
        self._links = {}
        for c in self.cone_set:
            for k in range(len(c)):
                face = c[:k] + c[k + 1:]
                self._links.setdefault(face, set()).add(c[k])

    @property
    def dim(self):
        return len(self.cones_by_dim) - 1

    def __contains__(self, cone):
        return tuple(sorted(cone)) in self.cone_set

    def link_rays(self, cone):
        """Rays f outside ``cone`` with cone + f again a cone."""
        return sorted(self._links.get(tuple(sorted(cone)), ()))

    def maximal_cones(self):
        return sorted((c for c in self.cone_set if not self._links.get(c)),
                      key=lambda c: (len(c), c))

    def is_pure(self, d):
        return all(len(c) == d for c in self.maximal_cones())

    def geometric_cones(self):
        """Cones as frozensets of ray vectors, for label-free comparison."""
        return {frozenset(self.rays[k] for k in c) for c in self.cone_set}

    def unimodular(self, cone):
        if not cone:
            return True
        invariants, _ = smith_form([list(self.rays[k]) for k in cone], self.ambient_dim)
        return len(invariants) == len(cone) and all(d == 1 for d in invariants)

    def to_json(self):
        return {
            "rays": [{"label": _label_json(lab), "vector": list(v)}
                     for lab, v in zip(self.labels, self.rays)],
            "cones": {str(k): [list(c) for c in row]
                      for k, row in enumerate(self.cones_by_dim)},
        }


def _label_json(label):
    kind, value = label
    if kind == "element":
        return {"element": value}
    if kind == "flat":
        return {"flat": bits(value)}
    return {kind: [_label_json(v) for v in value]}


# --- order filters ------------------------------------------------------------

def validate_filter(m, flats):
    flats = frozenset(flats)
    proper = set(m.proper_flats())
    for f in flats:
        if f not in proper:
            raise InputError("not-an-order-filter", f"{bits(f)} is not a nonempty proper flat")
    for f in flats:
        for g in proper:
            if g & f == f and g not in flats:
                raise InputError("not-an-order-filter",
                                 f"{bits(g)} contains {bits(f)} but is missing")
    return flats


def full_filter(m):
    return frozenset(m.proper_flats())


def flip_order(m, flats=()):
    """Flats outside the filter in the order they are added by flips:
    decreasing rank, ties broken lexicographically by element list."""
    rank_of = m.lattice.rank_of
    rest = [f for f in m.proper_flats() if f not in flats]
    return sorted(rest, key=lambda f: (-rank_of[f], flat_key(f)))


def chain_filter(m, steps=None):
    """The order filter reached after ``steps`` flips from the empty filter.

    The default stops halfway along the chain.
    """
    order = flip_order(m)
    if steps is None:
        steps = len(order) // 2
    return frozenset(order[:steps])


def named_filter(m, name):
    if name == "full":
        return full_filter(m)
    if name == "empty":
        return frozenset()
    if name == "chain":
        return chain_filter(m)
    if name.startswith("chain:"):
        try:
            steps = int(name.split(":", 1)[1])
        except ValueError:
            raise InputError("malformed-input", f"bad filter descriptor {name!r}") from None
        return chain_filter(m, steps)
    raise InputError("malformed-input", f"unknown filter {name!r}")


def describe_filter(m, flats):
    if flats == full_filter(m):
        return "full"
    if not flats:
        return "empty"
    order = flip_order(m)
    k = len(flats)
    if frozenset(order[:k]) == flats:
        return f"chain:{k}"
    return "custom:" + ";".join(",".join(map(str, bits(f)))
                                for f in sorted(flats, key=flat_key))


# --- Bergman fans -----------------------------------------------------------

class BergmanFan(Fan):
    """The fan of compatible pairs I < F for a matroid and an order filter.

    Rays are labelled ``("element", i)`` or ``("flat", mask)``; element rays
    come first, then flats by rank and element list, which fixes the
    lexicographic order used for monomials.
    """

    def __init__(self, m, flats, reduced=False):
        self.matroid = m
        self.filter = frozenset(flats)
        self.reduced = reduced
        size = m.size
        top = m.full
        rank_of = m.lattice.rank_of
        in_hat = self.filter | {top}

        elements = [i for i in range(size) if m.closure(1 << i) not in in_hat]
        flat_list = sorted(self.filter, key=lambda f: (rank_of[f], flat_key(f)))
        labels = [("element", i) for i in elements] + [("flat", f) for f in flat_list]
        subsets = [1 << i for i in elements] + flat_list
        rays = [subset_vector(s, size) for s in subsets]
        elem_idx = {i: k for k, i in enumerate(elements)}
        flat_idx = {f: len(elements) + k for k, f in enumerate(flat_list)}
        self.ray_subsets = subsets

        above = {f: [g for g in flat_list if g != f and g & f == f] for f in flat_list}
        flags = [()]
        stack = [(f,) for f in flat_list]
        while stack:
            flag = stack.pop()
            flags.append(flag)
            for g in above[flag[-1]]:
                stack.append(flag + (g,))

        closure_ok = {}

        def allowed(i_mask):
            v = closure_ok.get(i_mask)
            if v is None:
                v = m.closure(i_mask) not in in_hat
                closure_ok[i_mask] = v
            return v

        cones = []
        for flag in flags:
            low = flag[0] if flag else top
            cand = [i for i in elements if low >> i & 1]
            flag_rays = [flat_idx[f] for f in flag]
            if reduced:
                limit = rank_of[low] - 1
                sizes = range(min(limit, len(cand)) + 1)
            else:
                sizes = range(len(cand) + 1)
            for k in sizes:
                for sub in combinations(cand, k):
                    i_mask = sum(1 << i for i in sub)
                    if i_mask == low or not allowed(i_mask):
                        continue
                    cones.append(tuple(sorted([elem_idx[i] for i in sub] + flag_rays)))
        super().__init__(size - 1, rays, labels, cones)

    def ray_of(self, label):
        if isinstance(label, int):
            label = ("element", label)
        try:
            return self.ray_index[label]
        except KeyError:
            raise InputError("ray-not-in-fan", f"{label} is not a ray of this fan") from None

    def pair_of(self, cone):
        """(I mask, flag tuple) of a cone."""
        i_mask = 0
        flag = []
        for k in cone:
            kind, v = self.labels[k]
            if kind == "element":
                i_mask |= 1 << v
            else:
                flag.append(v)
        return i_mask, tuple(sorted(flag, key=popcount))


def build_fan(m, flats, reduced=False, check=True):
    flats = validate_filter(m, flats)
    fan = BergmanFan(m, flats, reduced)
    if check:
        check_fan(fan)
        if reduced and not fan.is_pure(m.r):
            raise VerificationError("fan-property-violation",
                                    f"reduced fan is not pure of dimension {m.r}")
    return fan


PAIRWISE_LIMIT = 64


def check_fan(fan, pairwise=None):
    """Unimodularity of maximal cones plus the fan property.

    For Bergman fans every cone is first certified to be a cone of the
    Boolean fan of the generated filter of subsets, whose relative interiors
    are disjoint (a point is located by its superlevel sets).  The exact
    pairwise overlap test runs when ``pairwise`` is true; by default it runs
    for fans with at most ``PAIRWISE_LIMIT`` maximal cones.
    """
    maximal = fan.maximal_cones()
    for c in maximal:
        if not fan.unimodular(c):
            raise VerificationError("fan-property-violation", f"cone {c} is not unimodular")
    if isinstance(fan, BergmanFan):
        for c in fan.cone_set:
            if not boolean_cone(fan, c):
                raise VerificationError("fan-property-violation",
                                        f"cone {c} is not a cone of the ambient Boolean fan")
    if pairwise is None:
        pairwise = len(maximal) <= PAIRWISE_LIMIT
    if pairwise:
        for a, b in combinations(maximal, 2):
            if not cones_meet_properly(fan, a, b):
                raise VerificationError("fan-property-violation",
                                        f"cones {a} and {b} overlap improperly")
    return True


def boolean_cone(fan, cone):
    """Whether the cone is I < F with I containing no filter flat."""
    i_mask, flag = fan.pair_of(cone)
    low = flag[0] if flag else fan.matroid.full
    if i_mask & low != i_mask or i_mask == low:
        return False
    if any(a & b != a for a, b in zip(flag, flag[1:])):
        return False
    return not any(f & i_mask == f for f in fan.filter)


def locate(fan, point):
    """The Boolean-fan cone whose relative interior holds ``point``.

    ``point`` is a rational vector in N coordinates.  Returns ``(I, flag)``
    as masks; the superlevel sets lying in the generated filter form the
    flag and the remaining top part is I.
    """
    size = fan.matroid.size
    coords = [Fraction(0)] + [Fraction(v) for v in point]
    base = min(coords)
    coords = [v - base for v in coords]
    levels = sorted(set(coords))
    flag = []
    i_mask = 0
    for t in levels[1:]:
        s = sum(1 << j for j in range(size) if coords[j] >= t)
        if any(f & s == f for f in fan.filter):
            flag.append(s)
        else:
            i_mask = s
            break
    return i_mask, tuple(sorted(flag, key=popcount))


def cones_meet_properly(fan, a, b):
    """Whether the two simplicial cones intersect in their common face."""
    common = sorted(set(a) & set(b))
    only_a = [k for k in a if k not in common]
    only_b = [k for k in b if k not in common]
    if not only_a or not only_b:
        return True
    vecs = [fan.rays[k] for k in a] + [fan.rays[k] for k in only_b]
    invariants, _ = smith_form([list(v) for v in vecs], fan.ambient_dim)
    if len(invariants) == len(vecs):
        return True
    # maximize the weight a point of both cones puts on non-shared rays:
    # sum a_r r - sum b_s s + sum (d+ - d-) c = 0, a, b, d+, d- >= 0
    cols = ([fan.rays[k] for k in only_a] + [tuple(-x for x in fan.rays[k]) for k in only_b]
            + [fan.rays[k] for k in common] + [tuple(-x for x in fan.rays[k]) for k in common])
    nvar = len(cols)
    a_ub, b_ub = [], []
    for coord in range(fan.ambient_dim):
        row = [col[coord] for col in cols]
        a_ub.append(row)
        b_ub.append(0)
        a_ub.append([-x for x in row])
        b_ub.append(0)
    a_ub.append([1] * (len(only_a) + len(only_b)) + [0] * (2 * len(common)))
    b_ub.append(1)
    objective = [1] * (len(only_a) + len(only_b)) + [0] * (2 * len(common))
    best, _ = maximize(objective, a_ub, b_ub)
    # with d unbounded the LP stays bounded: weights on a, b are capped at 1
    assert nvar == len(objective)
    return best == 0


# --- stars ------------------------------------------------------------------------

def star(fan, label):
    """Factor the star of a ray as a product of Bergman fans.

    Returns ``(restriction_fan, contraction_fan)`` for a flat ray and the
    single contraction fan for an element ray.  The cone-by-cone bijection
    induced by the split of the quotient lattice is checked.
    """
    m = fan.matroid
    k = fan.ray_of(label)
    kind, value = fan.labels[k]
    if kind == "flat":
        flat = value
        res = m.restriction(flat)
        con = m.contraction(flat)
        res_labels = bits(flat)
        con_labels = bits(m.full & ~flat)
        res_filter = frozenset(_pull(g, res_labels) for g in fan.filter
                               if g & flat == g and g != flat)
        fan_res = build_fan(res, res_filter, fan.reduced, check=False)
        fan_con = build_fan(con, full_filter(con), fan.reduced, check=False)
        _check_star_bijection(fan, k, [(fan_res, res_labels, flat), (fan_con, con_labels, None)])
        return fan_res, fan_con
    i = value
    if m.closure(1 << i) != 1 << i:
        raise InputError("ray-not-in-fan", f"{{{i}}} is not a flat")
    con = m.contraction(1 << i)
    con_labels = bits(m.full & ~(1 << i))
    con_filter = frozenset(_pull(g & ~(1 << i), con_labels) for g in fan.filter if g >> i & 1)
    fan_con = build_fan(con, con_filter, fan.reduced, check=False)
    _check_star_bijection(fan, k, [(fan_con, con_labels, None)])
    return fan_con


def _pull(mask, labels):
    return sum(1 << k for k, e in enumerate(labels) if mask >> e & 1)


def _check_star_bijection(fan, center, factors):
    """Map each cone through the center to a tuple of factor cones."""
    lookup = []
    for sub_fan, labels, _ in factors:
        table = {}
        full = sub_fan.matroid.full
        for idx, s in enumerate(sub_fan.ray_subsets):
            table[s] = idx
        lookup.append((table, labels, full))
    images = set()
    for cone in fan.cone_set:
        if center not in cone:
            continue
        parts = [[] for _ in factors]
        for k in cone:
            if k == center:
                continue
            s = fan.ray_subsets[k]
            placed = 0
            for slot, (table, labels, full) in enumerate(lookup):
                local = _pull(s, labels)
                if local in (0, full):
                    continue
                if local not in table:
                    raise VerificationError("fan-property-violation",
                                            f"ray {fan.labels[k]} has no image in the star")
                parts[slot].append(table[local])
                placed += 1
            if placed != 1:
                raise VerificationError("fan-property-violation",
                                        f"ray {fan.labels[k]} does not split cleanly")
        image = tuple(tuple(sorted(p)) for p in parts)
        for (sub_fan, _, _), p in zip(factors, image):
            if p not in sub_fan.cone_set:
                raise VerificationError("fan-property-violation",
                                        f"cone {cone} maps outside the star factors")
        images.add(image)
    expected = 1
    for sub_fan, _, _ in factors:
        expected *= len(sub_fan.cone_set)
    if len(images) != expected:
        raise VerificationError("fan-property-violation",
                                f"star has {len(images)} cones, product has {expected}")


# --- stellar subdivision ----------------------------------------------------

def stellar_subdivide(fan, cone):
    cone = tuple(sorted(cone))
    if cone not in fan.cone_set:
        raise InputError("cone-not-in-fan", f"{cone} is not a cone of the fan")
    if len(cone) <= 1:
        return fan
    new_vec = tuple(sum(fan.rays[k][c] for k in cone) for c in range(fan.ambient_dim))
    new_idx = len(fan.rays)
    s = set(cone)
    cones = [c for c in fan.cone_set if not s <= set(c)]
    for c in fan.cone_set:
        if s <= set(c):
            for k in range(len(c) + 1):
                for face in combinations(c, k):
                    if not s <= set(face):
                        cones.append(face + (new_idx,))
    label = ("sum", tuple(fan.labels[k] for k in cone))
    return Fan(fan.ambient_dim, fan.rays + [new_vec], fan.labels + [label], cones)


# --- piecewise linear functions -------------------------------------------

class PLFunction:
    """A piecewise linear function, by its values on the rays of a fan."""

    def __init__(self, fan, values):
        self.fan = fan
        self.values = tuple(Fraction(v) for v in values)
        if len(self.values) != len(fan.rays):
            raise ValueError("one value per ray expected")

    def __sub__(self, other):
        return PLFunction(self.fan, [a - b for a, b in zip(self.values, other.values)])

    def scaled(self, t):
        return PLFunction(self.fan, [t * v for v in self.values])

    def to_json(self):
        return [[_label_json(lab), str(v)] for lab, v in zip(self.fan.labels, self.values)]


def linear_function(fan, m):
    """The restriction of a linear functional to the fan."""
    return PLFunction(fan, [dot(r, m) for r in fan.rays])


def default_submodular(size):
    return lambda mask: popcount(mask) * (size - popcount(mask))


def check_strictly_submodular(size, c, exhaustive_limit=10, samples=20000, seed=0):
    """Return a violating pair (I, J) or None.  c is a function on masks."""
    full = (1 << size) - 1

    def val(s):
        return 0 if s in (0, full) else c(s)

    if size <= exhaustive_limit:
        values = [val(s) for s in range(full + 1)]
        for a in range(1, full):
            for b in range(a + 1, full):
                if a & b in (a, b):
                    continue
                if values[a] + values[b] <= values[a & b] + values[a | b]:
                    return a, b
        return None
    import random
    rng = random.Random(seed)
    for _ in range(samples):
        a, b = rng.randrange(1, full), rng.randrange(1, full)
        if a & b in (a, b):
            continue
        if val(a) + val(b) <= val(a & b) + val(a | b):
            return a, b
    return None


def submodular_to_class(fan, c=None):
    """The class sum c_F x_F (element rays get c of the element's closure)."""
    m = fan.matroid
    if c is None:
        c = default_submodular(m.size)
    bad = check_strictly_submodular(m.size, c)
    if bad is not None:
        raise InputError("not-strictly-submodular",
                         f"c fails strict submodularity at {bits(bad[0])}, {bits(bad[1])}")
    values = []
    for kind, v in fan.labels:
        values.append(c(v) if kind == "flat" else c(m.closure(1 << v)))
    return PLFunction(fan, values)


def is_convex_around(fan, ell, cone, strict=False):
    """Exact test for a functional m with ell - m zero on the cone and
    nonnegative (positive when strict) on its link rays.

    Returns ``(verdict, m)`` with m a witness functional when one exists.
    """
    cone = tuple(sorted(cone))
    if cone not in fan.cone_set:
        raise InputError("cone-not-in-fan", f"{cone} is not a cone of the fan")
    n = fan.ambient_dim
    rows = [list(fan.rays[k]) for k in cone]
    rhs = [ell.values[k] for k in cone]
    if rows:
        m0 = solve(rows, rhs)
        kernel = nullspace(rows, n)
    else:
        m0 = [Fraction(0)] * n
        kernel = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    link = fan.link_rays(cone)
    if not link:
        return True, m0
    gaps = [ell.values[f] - dot(fan.rays[f], m0) for f in link]
    low = min(min(gaps), 0)
    # variables: z+ (len kernel), z- (len kernel), s' ; s = s' + low
    a_ub, b_ub = [], []
    for f, g in zip(link, gaps):
        coeffs = [dot(fan.rays[f], kv) for kv in kernel]
        a_ub.append(coeffs + [-x for x in coeffs] + [1])
        b_ub.append(g - low)
    a_ub.append([0] * (2 * len(kernel)) + [1])
    b_ub.append(1 - low)
    objective = [0] * (2 * len(kernel)) + [1]
    best, x = maximize(objective, a_ub, b_ub)
    s = best + low
    verdict = s > 0 if strict else s >= 0
    if not verdict:
        return False, None
    z = [x[j] - x[len(kernel) + j] for j in range(len(kernel))]
    m = [m0[i] + sum(z[j] * kernel[j][i] for j in range(len(kernel))) for i in range(n)]
    return True, m


def convexity_witness(fan, ell, strict=True):
    """First cone around which ell fails (strict) convexity, else None."""
    for row in fan.cones_by_dim:
        for cone in row:
            ok, _ = is_convex_around(fan, ell, cone, strict)
            if not ok:
                return cone
    return None


def is_strictly_convex(fan, ell):
    return convexity_witness(fan, ell, strict=True) is None


def is_convex(fan, ell):
    return convexity_witness(fan, ell, strict=False) is None


# --- Minkowski weights ----------------------------------------------------

def balancing_rows(fan, k):
    """Sparse balancing constraints on weights of k-cones."""
    if k == 0:
        return []
    index = {c: j for j, c in enumerate(fan.cones_by_dim[k])}
    n = fan.ambient_dim
    rows = []
    for tau in fan.cones_by_dim[k - 1]:
        vecs = [list(fan.rays[j]) for j in tau]
        perp = nullspace(vecs, n) if vecs else [
            [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for m in perp:
            row = {}
            for f in fan.link_rays(tau):
                v = dot(fan.rays[f], m)
                if v:
                    row[index[tuple(sorted(tau + (f,)))]] = v
            if row:
                rows.append(row)
    return rows


def minkowski_weights(fan, k):
    """Basis of MW_k as dicts from k-cones to rationals."""
    if k < 0 or k > fan.dim:
        return []
    cones = fan.cones_by_dim[k]
    echelon = SparseEchelon(balancing_rows(fan, k), range(len(cones)))
    basis = []
    for free in echelon.basis:
        w = {cones[free]: Fraction(1)}
        for p, image in echelon.pivots.items():
            v = image.get(free)
            if v:
                w[cones[p]] = v
        basis.append(w)
    return basis


def is_balanced(fan, weights, k):
    """Direct check that a weight on k-cones satisfies balancing."""
    n = fan.ambient_dim
    for tau in fan.cones_by_dim[k - 1] if k else []:
        total = [Fraction(0)] * n
        for f in fan.link_rays(tau):
            w = weights.get(tuple(sorted(tau + (f,))), 0)
            total = [a + w * b for a, b in zip(total, fan.rays[f])]
        vecs = [list(fan.rays[j]) for j in tau]
        if vecs:
            if solve([list(col) for col in zip(*vecs)], total) is None:
                return False
        elif any(total):
            return False
    return True
