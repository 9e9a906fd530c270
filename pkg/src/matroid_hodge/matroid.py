"""Matroids on small ground sets, with subsets encoded as bitmasks.

Elements are the integers ``0..size-1``; bit ``i`` of a mask stands for
element ``i``.  Rank oracles are tabulated when the ground set is small
enough and memoized otherwise, so rank queries are cheap everywhere.
"""

import json
import random
from functools import cached_property
from itertools import combinations

from .errors import InputError, VerificationError
from .polynomial import IntPolynomial

MAX_GROUND = 16
TABLE_LIMIT = 12
SAMPLED_PAIRS = 10_000


def bits(mask):
    """Elements of a mask in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def to_mask(elements):
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def popcount(mask):
    return bin(mask).count("1")


def lowest(mask):
    """Smallest element of a nonempty mask."""
    return (mask & -mask).bit_length() - 1


def flat_key(mask):
    """Sort key: lexicographic on the sorted element list."""
    return tuple(bits(mask))


class Matroid:
    """A matroid given by its rank function.

    ``validation`` records how the rank axioms were checked:
    ``"exhaustive"``, ``"sampled"`` or ``"none"``.
    """

    def __init__(self, size, rank_fn, *, name=None, validate=True,
                 allow_loops=False, seed=0):
        if not 1 <= size <= MAX_GROUND:
            raise InputError(
                "size-cap-exceeded",
                f"ground set size {size} outside the supported range 1..{MAX_GROUND}")
        self.size = size
        self.full = (1 << size) - 1
        self.name = name
        if size <= TABLE_LIMIT:
            self._table = [rank_fn(s) for s in range(1 << size)]
            self._fn = None
        else:
            self._table = None
            self._fn = rank_fn
            self._memo = {}
        self.rank = self.rk(self.full)
        self.validation = "none"
        if validate:
            self._validate(allow_loops, seed)

    def rk(self, mask):
        if self._table is not None:
            return self._table[mask]
        r = self._memo.get(mask)
        if r is None:
            r = self._fn(mask)
            self._memo[mask] = r
        return r

    def _validate(self, allow_loops, seed):
        rk = self.rk
        if rk(0) != 0:
            raise InputError("axiom-violation", "rank of the empty set is not zero")
        n = self.size
        if self._table is not None:
            t = self._table
            for s in range(1 << n):
                r = t[s]
                outside = [1 << e for e in range(n) if not s >> e & 1]
                for a in outside:
                    if t[s | a] - r not in (0, 1):
                        raise InputError(
                            "axiom-violation",
                            f"rank jumps by {t[s | a] - r} adding an element to {bits(s)}")
                # local submodularity plus unit increase implies submodularity
                for a, b in combinations(outside, 2):
                    if t[s | a] + t[s | b] < r + t[s | a | b]:
                        raise InputError(
                            "axiom-violation",
                            f"submodularity fails at {bits(s | a)}, {bits(s | b)}")
            self.validation = "exhaustive"
        else:
            rng = random.Random(seed)
            for _ in range(SAMPLED_PAIRS):
                i, j = rng.getrandbits(n), rng.getrandbits(n)
                if rk(i) + rk(j) < rk(i & j) + rk(i | j):
                    raise InputError(
                        "axiom-violation",
                        f"submodularity fails at {bits(i)}, {bits(j)}")
                e = 1 << rng.randrange(n)
                if rk(i | e) - rk(i) not in (0, 1):
                    raise InputError("axiom-violation",
                                     f"rank jumps adding an element to {bits(i)}")
            self.validation = "sampled"
        if not allow_loops:
            for e in range(n):
                if rk(1 << e) == 0:
                    raise InputError("loop-present", f"element {e} is a loop")

    # --- basic structure -------------------------------------------------

    def closure(self, mask):
        r = self.rk(mask)
        out = mask
        for e in range(self.size):
            b = 1 << e
            if not mask & b and self.rk(mask | b) == r:
                out |= b
        return out

    def is_flat(self, mask):
        return self.closure(mask) == mask

    def corank(self, mask):
        return self.rank - self.rk(mask)

    @cached_property
    def lattice(self):
        return FlatLattice(self)

    @property
    def r(self):
        """One less than the rank: the dimension of the Bergman fan."""
        return self.rank - 1

    def proper_flats(self):
        """Nonempty proper flats, sorted by rank then element list."""
        return [f for k in range(1, self.rank) for f in self.lattice.flats_by_rank[k]]

    def is_simple(self):
        return all(self.rk((1 << a) | (1 << b)) == 2
                   for a, b in combinations(range(self.size), 2))

    def __eq__(self, other):
        if not isinstance(other, Matroid) or other.size != self.size:
            return False
        return all(self.rk(s) == other.rk(s) for s in range(1 << self.size))

    def __hash__(self):
        return hash((self.size, self.rank))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<Matroid{label} rank {self.rank} on {self.size} elements>"

    # --- polynomials ------------------------------------------------------

    def char_poly(self, method="subset-sum"):
        top = self.rank
        coeffs = [0] * (top + 1)
        if method == "subset-sum":
            for s in range(1 << self.size):
                sign = -1 if popcount(s) % 2 else 1
                coeffs[top - self.rk(s)] += sign
        elif method == "mobius":
            lat = self.lattice
            for f, mu in lat.mobius.items():
                coeffs[top - lat.rank_of[f]] += mu
        else:
            raise ValueError(f"unknown method {method!r}")
        return IntPolynomial(coeffs)

    def reduced_char_poly(self):
        quotient, remainder = self.char_poly().divide_linear(1)
        if remainder:
            raise VerificationError(
                "nonzero-remainder",
                f"characteristic polynomial has remainder {remainder} at 1")
        return quotient

    def mu_sequence(self):
        """(mu^0, ..., mu^r): absolute coefficients of the reduced polynomial."""
        c = self.reduced_char_poly().coefficients
        r = self.r
        return tuple((-1) ** k * c[r - k] for k in range(r + 1))

    def whitney_sequence(self):
        """(w_0, ..., w_{r+1}): absolute coefficients of the characteristic polynomial."""
        c = self.char_poly().coefficients
        top = self.rank
        return tuple(abs(c[top - k]) for k in range(top + 1))

    def independent_counts(self):
        counts = [0] * (self.rank + 1)
        for s in range(1 << self.size):
            k = popcount(s)
            if self.rk(s) == k:
                counts[k] += 1
        return tuple(counts)

    def descending_initial_flags(self, k):
        """Flags F_1 < ... < F_k with rk F_m = m and min F_1 > ... > min F_k > 0."""
        if not 1 <= k <= self.r:
            raise ValueError(f"k must lie in 1..{self.r}")
        lat = self.lattice
        out = []

        def extend(flag):
            m = len(flag)
            if m == k:
                out.append(tuple(flag))
                return
            last = flag[-1]
            for g in lat.covers[last]:
                if lat.rank_of[g] == m + 1 and 0 < lowest(g) < lowest(last):
                    extend(flag + [g])

        for f in lat.flats_by_rank[1]:
            if lowest(f) > 0:
                extend([f])
        return sorted(out, key=lambda fl: [flat_key(f) for f in fl])

    # --- constructions ----------------------------------------------------

    def restriction(self, flat):
        if not self.is_flat(flat):
            raise InputError("not-a-flat", f"{bits(flat)} is not a flat")
        if flat == 0:
            raise InputError("not-a-flat", "restriction to the empty flat")
        labels = bits(flat)
        return _relabelled(self, labels, lambda s: self.rk(_lift(s, labels)),
                           f"{self.name}|{labels}" if self.name else None)

    def contraction(self, flat):
        if not self.is_flat(flat):
            raise InputError("not-a-flat", f"{bits(flat)} is not a flat")
        if flat == self.full:
            raise InputError("not-a-flat", "contraction by the whole ground set")
        labels = bits(self.full & ~flat)
        base = self.rk(flat)
        return _relabelled(self, labels, lambda s: self.rk(_lift(s, labels) | flat) - base,
                           f"{self.name}/{bits(flat)}" if self.name else None)

    def minor(self, flat, kind):
        if kind == "restriction":
            return self.restriction(flat)
        if kind == "contraction":
            return self.contraction(flat)
        raise ValueError(f"unknown minor kind {kind!r}")

    def simplify(self):
        """Returns (simple matroid, element map pi, section iota)."""
        points = sorted(self.lattice.flats_by_rank[1], key=lowest)
        index = {}
        for k, p in enumerate(points):
            for e in bits(p):
                index[e] = k
        pi = tuple(index[e] for e in range(self.size))
        iota = tuple(lowest(p) for p in points)

        def rank_fn(s):
            return self.rk(_lift(s, iota))

        simple = Matroid(len(points), rank_fn, name=self.name and f"simple({self.name})")
        return simple, pi, iota

    def dual(self, allow_loops=True):
        top = self.rank
        full = self.full
        return Matroid(self.size, lambda s: popcount(s) - top + self.rk(full & ~s),
                       name=self.name and f"dual({self.name})", allow_loops=allow_loops)

    def truncate(self):
        if self.rank < 2:
            raise InputError("rank-too-small", "cannot truncate a matroid of rank below 2")
        cap = self.rank - 1
        return Matroid(self.size, lambda s: min(self.rk(s), cap),
                       name=self.name and f"tr({self.name})")

    def free_extension(self, allow_loops=True):
        """Add a new element (the last one) in general position."""
        n = self.size
        p = 1 << n
        top = self.rank

        def rank_fn(s):
            base = self.rk(s & ~p)
            return min(base + 1, top) if s & p else base

        return Matroid(n + 1, rank_fn, name=self.name and f"({self.name})+p",
                       allow_loops=allow_loops)

    def free_dual_extension(self):
        """(M* + p)*: the new element is the last one."""
        if self.size + 1 > MAX_GROUND:
            raise InputError("size-cap-exceeded",
                             f"free dual extension needs {self.size + 1} elements, cap {MAX_GROUND}")
        ext = self.dual().free_extension().dual(allow_loops=False)
        ext.name = self.name and f"({self.name})xp"
        return ext

    def relabel(self, perm):
        """Matroid in which element ``perm[i]`` plays the role of ``i``."""
        inverse = [0] * self.size
        for i, j in enumerate(perm):
            inverse[j] = i
        return Matroid(self.size, lambda s: self.rk(to_mask(inverse[e] for e in bits(s))),
                       name=self.name)

    # --- serialization ------------------------------------------------------

    def bases(self):
        return [s for s in range(1 << self.size)
                if popcount(s) == self.rank and self.rk(s) == self.rank]

    def to_json(self):
        return {
            "format": "bases",
            "n": self.size,
            "bases": sorted(bits(b) for b in self.bases()),
        }


def _lift(mask, labels):
    out = 0
    for k in bits(mask):
        out |= 1 << labels[k]
    return out


def _relabelled(parent, labels, rank_fn, name):
    return Matroid(len(labels), rank_fn, name=name,
                   validate=parent.validation != "none")


class FlatLattice:
    """The lattice of flats with its covering relation and Moebius values."""

    def __init__(self, m):
        bottom = m.closure(0)
        rank_of = {bottom: 0}
        covers = {}
        frontier = [bottom]
        while frontier:
            nxt = []
            for f in frontier:
                ups = set()
                for e in range(m.size):
                    if not f >> e & 1:
                        ups.add(m.closure(f | 1 << e))
                covers[f] = sorted(ups, key=flat_key)
                for g in ups:
                    if g not in rank_of:
                        rank_of[g] = m.rk(g)
                        nxt.append(g)
            frontier = nxt
        self.rank_of = rank_of
        self.covers = covers
        self.flats_by_rank = [[] for _ in range(m.rank + 1)]
        for f, k in rank_of.items():
            self.flats_by_rank[k].append(f)
        for row in self.flats_by_rank:
            row.sort(key=flat_key)
        self.flats = [f for row in self.flats_by_rank for f in row]
        self.mobius = self._mobius()

    def _mobius(self):
        mu = {}
        for f in self.flats:
            if not mu:
                mu[f] = 1
                continue
            mu[f] = -sum(v for g, v in mu.items() if g & f == g and g != f)
        return mu

    def counts(self):
        return [len(row) for row in self.flats_by_rank]


# --- constructors -----------------------------------------------------------

def uniform(rank, size, name=None):
    return Matroid(size, lambda s: min(popcount(s), rank), name=name or f"u{rank}{size}")


def boolean(size, name=None):
    return Matroid(size, popcount, name=name or f"boolean{size}")


def from_bases(size, bases, name=None):
    bases = [to_mask(b) if not isinstance(b, int) else b for b in bases]
    if not bases:
        raise InputError("malformed-input", "basis list is empty")
    ranks = {popcount(b) for b in bases}
    if len(ranks) != 1:
        raise InputError("axiom-violation", "bases have different cardinalities")
    if any(b >> size for b in bases):
        raise InputError("malformed-input", "basis element outside the ground set")
    top = ranks.pop()
    if size <= TABLE_LIMIT:
        indep = bytearray(1 << size)
        for b in bases:
            indep[b] = 1
        table = [0] * (1 << size)
        for s in range((1 << size) - 1, -1, -1):
            if indep[s]:
                for e in bits(s):
                    indep[s & ~(1 << e)] = 1
        for s in range(1 << size):
            if indep[s]:
                table[s] = popcount(s)
            else:
                table[s] = max(table[s & ~(1 << e)] for e in bits(s))
        m = Matroid(size, table.__getitem__, name=name)
    else:
        m = Matroid(size, lambda s: max(popcount(s & b) for b in bases), name=name)
    actual = set(m.bases())
    if actual != set(bases) or m.rank != top:
        raise InputError("axiom-violation", "basis exchange fails for the given basis list")
    return m


def from_flats(size, flats, name=None):
    """Matroid from a family of flats whose intersection closure is the lattice.

    Passing the hyperplanes suffices; the whole set is added automatically.
    """
    full = (1 << size) - 1
    family = {to_mask(f) if not isinstance(f, int) else f for f in flats} | {full}
    changed = True
    while changed:
        changed = False
        for a, b in combinations(list(family), 2):
            if a & b not in family:
                family.add(a & b)
                changed = True
    members = sorted(family, key=popcount)
    height = {}
    for f in members:
        below = [height[g] for g in height if g & f == g and g != f]
        height[f] = 1 + max(below) if below else 0

    def rank_fn(s):
        return min(height[f] for f in members if f & s == s)

    m = Matroid(size, rank_fn, name=name)
    if set(m.lattice.flats) != family:
        raise InputError("axiom-violation", "the flat family is not a matroid lattice")
    return m


def graphic(vertices, edges, name=None):
    edges = [tuple(e) for e in edges]
    for u, v in edges:
        if u == v:
            raise InputError("loop-edge", f"edge ({u}, {v}) is a loop")
        if not (0 <= u < vertices and 0 <= v < vertices):
            raise InputError("malformed-input", f"edge ({u}, {v}) has a vertex outside 0..{vertices - 1}")
    if not edges:
        raise InputError("malformed-input", "graphic matroid needs at least one edge")

    def rank_fn(s):
        parent = list(range(vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        r = 0
        for k in bits(s):
            a, b = find(edges[k][0]), find(edges[k][1])
            if a != b:
                parent[a] = b
                r += 1
        return r

    return Matroid(len(edges), rank_fn, name=name)


def build(description, name=None):
    """Construct a matroid from a JSON-style description dict."""
    if not isinstance(description, dict) or "format" not in description:
        raise InputError("malformed-input", "matroid description needs a 'format' field")
    fmt = description["format"]
    try:
        if fmt == "uniform":
            return uniform(int(description["rank"]), int(description["n"]), name=name)
        if fmt == "boolean":
            return boolean(int(description["n"]), name=name)
        if fmt == "bases":
            return from_bases(int(description["n"]), description["bases"], name=name)
        if fmt == "flats":
            return from_flats(int(description["n"]), description["flats"], name=name)
        if fmt == "graph":
            return graphic(int(description["vertices"]), description["edges"], name=name)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError("malformed-input", f"bad {fmt!r} description: {exc}") from exc
    raise InputError("malformed-input", f"unknown matroid format {fmt!r}")


def dumps(m):
    return json.dumps(m.to_json(), sort_keys=True, separators=(",", ":"))
