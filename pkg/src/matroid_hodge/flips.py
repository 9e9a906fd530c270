"""Matroidal flips: pullbacks, Gysin maps, the decomposition check and the
transport of ample classes from one order filter to the next."""

from fractions import Fraction

from .chow import ChowElement, chow_ring, pullback_monomial
from .errors import InputError, VerificationError
from .fan import (PLFunction, build_fan, convexity_witness, dot, flip_order, full_filter,
                  is_convex_around, validate_filter)
from .linalg import SparseEchelon
from .matroid import bits


class FlipStep:
    """The flip adding the flat ``center`` to the order filter ``minus``."""

    def __init__(self, m, minus, center):
        minus = validate_filter(m, minus)
        if center in minus:
            raise InputError("not-a-flip", f"{bits(center)} already lies in the filter")
        for f in m.proper_flats():
            if f != center and f & center == center and f not in minus:
                raise InputError("not-a-flip",
                                 f"{bits(center)} is not maximal outside the filter")
        self.matroid = m
        self.center = center
        self.filter_minus = minus
        self.filter_plus = validate_filter(m, minus | {center})
        self.center_rank = m.rk(center)

    @property
    def minus(self):
        return chow_ring(self.matroid, self.filter_minus)

    @property
    def plus(self):
        return chow_ring(self.matroid, self.filter_plus)

    @property
    def contraction(self):
        """Chow ring of the contraction by the center (full filter)."""
        c = self.matroid.contraction(self.center)
        return chow_ring(_canonical(c), None)

    @property
    def restriction(self):
        """Chow ring of the restriction to the center (full filter)."""
        return chow_ring(_canonical(self.matroid.restriction(self.center)), None)

    @property
    def contraction_labels(self):
        return bits(self.matroid.full & ~self.center)

    def lift_contraction_flat(self, local):
        out = self.center
        for k, e in enumerate(self.contraction_labels):
            if local >> k & 1:
                out |= 1 << e
        return out


_CONTRACTIONS = {}


def _canonical(matroid):
    """Share ring caches between equal minors built at different times."""
    key = (matroid.size, tuple(matroid.rk(s) for s in range(1 << matroid.size)))
    return _CONTRACTIONS.setdefault(key, matroid)


def flip_chain(m, start=frozenset(), order=None):
    """FlipSteps from ``start`` up to the full filter."""
    order = list(order) if order is not None else flip_order(m, start)
    steps = []
    current = frozenset(start)
    for z in order:
        steps.append(FlipStep(m, current, z))
        current = current | {z}
    if current != full_filter(m):
        raise InputError("not-a-flip", "the flat order does not reach the full filter")
    return steps


def pullback(step, a):
    plus = step.plus
    out = plus.zero(a.degree)
    for cone, coef in a.terms.items():
        out = out + coef * pullback_monomial(step.minus, plus, step.center, cone)
    return out


def gysin(step, p, a):
    """x_G1...x_Gk in the contraction ring -> x_Z^p x_(G1+Z)...x_(Gk+Z)."""
    if p < 1:
        raise ValueError("p must be positive")
    plus = step.plus
    contr = step.contraction
    z_ray = plus.fan.ray_index[("flat", step.center)]
    out = plus.zero(a.degree + p)
    for cone, coef in a.terms.items():
        exps = {z_ray: p}
        for k in cone:
            _, local = contr.fan.labels[k]
            g = step.lift_contraction_flat(local)
            exps[plus.fan.ray_index[("flat", g)]] = 1
        out = out + coef * plus.reduce(exps)
    return out


def _columns(elements, ring, q):
    basis_index = {c: k for k, c in enumerate(ring.basis(q))}
    cols = []
    for e in elements:
        cols.append({basis_index[c]: v for c, v in e.terms.items()})
    return cols


def column_rank(columns):
    if not columns:
        return 0
    width = 1 + max((k for col in columns for k in col), default=0)
    return SparseEchelon(columns, range(width)).rank


def verify_decomposition(step, q):
    """Matrix of pullback plus Gysin summands in degree q, and its rank."""
    minus, plus, contr = step.minus, step.plus, step.contraction
    pullback_cols = [pullback(step, minus.from_cones(q, {b: 1})) for b in minus.basis(q)]
    summands = [("pullback", pullback_cols)]
    for p in range(1, step.center_rank):
        src = q - p
        if src < 0:
            continue
        images = [gysin(step, p, contr.from_cones(src, {b: 1})) for b in contr.basis(src)]
        summands.append((f"gysin:{p}", images))
    report = {"q": q, "dim_plus": plus.dim(q), "summands": []}
    all_cols = []
    ok = True
    for name, images in summands:
        cols = _columns(images, plus, q)
        rank = column_rank(cols)
        report["summands"].append({"map": name, "dim": len(cols), "rank": rank})
        ok &= rank == len(cols)
        all_cols += cols
    total_rank = column_rank(all_cols)
    report["total_dim"] = len(all_cols)
    report["total_rank"] = total_rank
    ok &= total_rank == len(all_cols) == plus.dim(q)
    report["pass"] = bool(ok)
    return report


def require_decomposition(step, q):
    report = verify_decomposition(step, q)
    if not report["pass"]:
        raise VerificationError("decomposition-violation",
                                f"flip at {bits(step.center)} fails in degree {q}")
    return report


# --- ample classes ----------------------------------------------------------

def nonreduced_fan(m, flats):
    return build_fan(m, flats, reduced=False)


def _normalized(fan, ell, cone):
    ok, m = is_convex_around(fan, ell, cone, strict=True)
    if not ok:
        return None
    return [v - dot(r, m) for v, r in zip(ell.values, fan.rays)]


def flip_bound(step, ell_minus):
    """Exact upper bound on t below which pullback(ell) - t x_Z stays ample."""
    m = step.matroid
    z = step.center
    fan_minus = ell_minus.fan
    fan_plus = nonreduced_fan(m, step.filter_plus)
    z_ray = fan_plus.ray_index[("flat", z)]
    bound = None
    for cone in fan_plus.cone_set:
        i_mask, flag = fan_plus.pair_of(cone)
        if z not in flag:
            # only the value at e_Z changes, so cones away from it impose nothing
            if tuple(sorted(cone + (z_ray,))) not in fan_plus.cone_set:
                continue
            target = tuple(sorted(fan_minus.ray_index[fan_plus.labels[k]] for k in cone))
            values = _normalized(fan_minus, ell_minus, target)
            if values is None:
                raise InputError("not-ample-input", f"ell is not strictly convex around {target}")
            b = sum(values[fan_minus.ray_index[("element", i)]]
                    for i in bits(z & ~i_mask))
        else:
            rest = [f for f in flag if f != z]
            target = sorted([fan_minus.ray_index[("element", i)] for i in bits(z)]
                            + [fan_minus.ray_index[("flat", f)] for f in rest])
            target = tuple(target)
            values = _normalized(fan_minus, ell_minus, target)
            if values is None:
                raise InputError("not-ample-input", f"ell is not strictly convex around {target}")
            flats = [values[k] for k in fan_minus.link_rays(target)
                     if fan_minus.labels[k][0] == "flat"]
            if not flats:
                continue
            b = min(flats)
        if bound is None or b < bound:
            bound = b
    return bound, fan_plus


def flipped_function(step, ell_minus, t, fan_plus=None):
    """pullback(ell) - t x_Z as a function on the plus fan."""
    fan_plus = fan_plus or nonreduced_fan(step.matroid, step.filter_plus)
    fan_minus = ell_minus.fan
    values = []
    for kind, v in fan_plus.labels:
        if kind == "flat" and v == step.center:
            values.append(sum(ell_minus.values[fan_minus.ray_index[("element", i)]]
                              for i in bits(v)) - t)
        else:
            values.append(ell_minus.values[fan_minus.ray_index[(kind, v)]])
    return PLFunction(fan_plus, values)


def ample_after_flip(step, ell_minus, t=None, check_input=True):
    """Returns (ell_plus, t, bound).  With ``t`` omitted, t is half the bound.

    ``ell_minus`` lives on the non-reduced fan of the minus filter.
    """
    if check_input:
        witness = convexity_witness(ell_minus.fan, ell_minus, strict=True)
        if witness is not None:
            raise InputError("not-ample-input",
                             f"input is not strictly convex around cone {witness}")
    bound, fan_plus = flip_bound(step, ell_minus)
    if t is None:
        t = bound / 2 if bound is not None else Fraction(1)
        ell_plus = flipped_function(step, ell_minus, Fraction(t), fan_plus)
        witness = convexity_witness(fan_plus, ell_plus, strict=True)
        if witness is not None:
            raise VerificationError("not-ample",
                                    f"flipped class fails strict convexity around {witness}")
    else:
        ell_plus = flipped_function(step, ell_minus, Fraction(t), fan_plus)
    return ell_plus, Fraction(t), bound


def simplex_class(m):
    """Sum of the element variables on the fan of the empty filter."""
    fan = nonreduced_fan(m, frozenset())
    return PLFunction(fan, [1] * len(fan.rays))


def ample_class_along_chain(m, flats):
    """A strictly convex function on the fan of ``flats``, built by flips."""
    ell = simplex_class(m)
    current = frozenset()
    for z in flip_order(m)[:]:
        if current == flats:
            break
        if z not in flats:
            continue
        step = FlipStep(m, current, z)
        ell, _, _ = ample_after_flip(step, ell, check_input=False)
        current = current | {z}
    if current != frozenset(flats):
        raise InputError("not-an-order-filter", "filter is not reached by the flip order")
    return ell


# --- identities ---------------------------------------------------------------

def minimal_flat_relation(step, i=None):
    """x_i x_Z + x_Z^2 + x_Z beta(M_Z) in the plus ring (should vanish)."""
    m = step.matroid
    z = step.center
    plus = step.plus
    if i is None:
        i = bits(z)[0]
    j = bits(m.full & ~z)[0]
    out = plus.monomial([("element", i), ("flat", z)]) if ("element", i) in plus.fan.ray_index \
        else plus.zero(2)
    out = out + plus.monomial([("flat", z), ("flat", z)])
    for f in m.proper_flats():
        if f != z and f & z == z and not f >> j & 1:
            out = out + plus.monomial([("flat", z), ("flat", f)])
    return out


def alpha_relation(ring, z, cover):
    """x_Z x_W (x_Z + alpha of the restriction to Z) for W covering Z.

    ``cover`` may be the whole ground set, in which case x_W is dropped.
    """
    m = ring.fan.matroid
    i = bits(z)[0]
    extra = [] if cover == m.full else [("flat", cover)]
    out = ring.monomial([("flat", z), ("flat", z)] + extra)
    for f in m.proper_flats():
        if f != z and f & z == f and f >> i & 1:
            out = out + ring.monomial([("flat", f), ("flat", z)] + extra)
    return out


def push_through_chain(m, a, start, order=None):
    """Apply the pullbacks of every flip from ``start`` to the full filter."""
    for step in flip_chain(m, start, order):
        a = pullback(step, a)
    return a


def degree_via_chain(m, flats, a, order):
    """deg of a top-degree element of A(M, flats) along a given flat order."""
    if not isinstance(a, ChowElement):
        raise TypeError("expected a ChowElement")
    top = push_through_chain(m, a, flats, order)
    return chow_ring(m).degree(top)


def admissible_orders(m, flats=frozenset(), limit=2):
    """Up to ``limit`` distinct flip orders (the default one and reversals
    of ties within each rank)."""
    base = flip_order(m, flats)
    orders = [base]
    rank_of = m.lattice.rank_of
    alt = sorted(base, key=lambda f: (-rank_of[f], tuple(-e for e in reversed(bits(f)))))
    if alt != base:
        orders.append(alt)
    return orders[:limit]


def flip_report(m, start=frozenset(), order=None):
    steps = flip_chain(m, start, order)
    out = []
    ok = True
    for step in steps:
        degrees = [verify_decomposition(step, q) for q in range(1, m.r + 1)]
        ok &= all(d["pass"] for d in degrees)
        out.append({"center": bits(step.center), "center_rank": step.center_rank,
                    "degrees": degrees})
    return {"steps": out, "pass": bool(ok)}
