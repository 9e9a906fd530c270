import random

import pytest

from matroid_hodge import InputError, catalog
from matroid_hodge.chow import chow_ring
from matroid_hodge.fan import (PLFunction, chain_filter, check_strictly_submodular,
                               submodular_to_class)
from matroid_hodge.hodge import (SymmetricForm, certify, certify_matroid, default_ell,
                                 expected_signature_difference, hodge_riemann_form,
                                 lefschetz_matrix, nef_degree_inequality,
                                 primitive_subspace, product_hr_oracle)
from matroid_hodge.linalg import bareiss_rank
from matroid_hodge.matroid import popcount

import oracles

FLAGSHIP = ["u24", "u34", "boolean4", "k4", "fano", "nonfano", "vamos"]
SMALL = ["u23", "u24", "u34", "boolean3", "boolean4", "k4", "fano", "nonfano"]


def level(report, q):
    return next(lv for lv in report.levels if lv["q"] == q)


# --- Lefschetz maps -----------------------------------------------------------------

def test_lefschetz_shapes_and_zero_class():
    ring = chow_ring(catalog.get("boolean4"))
    ell = default_ell(ring)
    assert len(lefschetz_matrix(ring, ell, 0)) == 1
    mat = lefschetz_matrix(ring, ell, 1)
    assert (len(mat), len(mat[0])) == (11, 11)
    assert bareiss_rank(mat) == 11
    zero = lefschetz_matrix(ring, [0] * len(ring.fan.rays), 1)
    assert all(v == 0 for row in zero for v in row)
    with pytest.raises(InputError) as err:
        lefschetz_matrix(ring, ell, 2)
    assert err.value.code == "wrong-degree"


def test_boolean3_form_signature():
    ring = chow_ring(catalog.get("boolean3"))
    form = hodge_riemann_form(ring, default_ell(ring), 1)
    assert form.signature == (3, 1, 0)
    assert expected_signature_difference(ring.hilbert(), 1) == 2
    # cross-check the eigenvalue counts with the characteristic polynomial
    assert form.signature == oracles.descartes_signature(form.gram)


def test_zero_class_fails_both_routes():
    ring = chow_ring(catalog.get("boolean4"))
    report = certify(ring, [0] * len(ring.fan.rays))
    assert not report.hl and not report.hr
    lv = level(report, 1)
    assert lv["signature"] == [0, 0, 11] and not lv["primitive_positive"]


# --- the flagship certification ------------------------------------------------------

@pytest.mark.parametrize("name", FLAGSHIP)
def test_default_class_satisfies_hl_and_hr(name):
    m = catalog.get(name)
    report = certify_matroid(m)
    assert report.hl and report.hr and report.consistent
    hilbert = chow_ring(m).hilbert()
    for lv in report.levels:
        pos, neg, zero = lv["signature"]
        assert zero == 0 and pos - neg == expected_signature_difference(hilbert, lv["q"])
        assert lv["primitive_positive"]


@pytest.mark.parametrize("name", SMALL)
def test_primitive_dimensions(name):
    ring = chow_ring(catalog.get(name))
    ell = default_ell(ring)
    hilbert = ring.hilbert()
    for q in range(ring.r // 2 + 1):
        expected = hilbert[q] - (hilbert[q - 1] if q else 0)
        assert len(primitive_subspace(ring, ell, q)) == expected


@pytest.mark.parametrize("name", ["fano", "k4", "boolean4", "u34"])
def test_intermediate_filters_satisfy_hr(name):
    m = catalog.get(name)
    for flats in (frozenset(), chain_filter(m, 1), chain_filter(m)):
        report = certify_matroid(m, flats)
        assert report.hl and report.hr and report.consistent


def test_other_strictly_submodular_function():
    # c'(S) = |S| (2|E| - |S|) is another strictly submodular choice
    for name in ["fano", "boolean4", "k4"]:
        m = catalog.get(name)
        n = m.size

        def c(s):
            return popcount(s) * (2 * n - popcount(s))
        assert check_strictly_submodular(n, c) is None
        report = certify_matroid(m, c=c)
        assert report.hr and report.ell == "custom"


@pytest.mark.parametrize("name", ["fano", "k4", "boolean4"])
def test_two_routes_agree_on_random_classes(name):
    m = catalog.get(name)
    ring = chow_ring(m)
    fan = ring.fan
    rng = random.Random(13)
    outcomes = set()
    for trial in range(8):
        if trial % 2:
            a, b = rng.randint(0, 3), rng.randint(0, 3)
            n = m.size

            def c(s, a=a, b=b):
                return popcount(s) * (n - popcount(s)) + a * m.rk(s) + b * min(popcount(s), 2)
            report = certify(ring, submodular_to_class(fan, c))
        else:
            report = certify(ring, [rng.randint(-3, 3) for _ in fan.rays])
        prim = all(lv["primitive_positive"] for lv in report.levels)
        assert report.hr == prim
        outcomes.add(report.hr)
    assert outcomes == {True, False}


def test_certify_rejects_non_ample_function():
    m = catalog.get("fano")
    ring = chow_ring(m)
    fan = ring.fan
    flat = PLFunction(fan, [0] * len(fan.rays))
    with pytest.raises(InputError) as err:
        certify(ring, flat)
    assert err.value.code == "not-ample"
    # a convex but not strictly convex function passes the nef gate
    report = certify(ring, flat, nef=True)
    assert not report.hl


def test_report_json_shape():
    data = certify_matroid(catalog.get("u34")).to_json()
    assert set(data) == {"schema_version", "matroid", "filter", "ell", "levels", "hl", "hr"}
    assert data["filter"] == "full" and data["ell"] == "default"
    assert set(data["levels"][0]) == {"q", "dim", "hl", "signature", "hr", "primitive_dim",
                                     "primitive_positive"}


# --- forms --------------------------------------------------------------------------------

@pytest.mark.parametrize("name", SMALL)
def test_gram_matrices_symmetric(name):
    ring = chow_ring(catalog.get(name))
    ell = default_ell(ring)
    for q in range(ring.r // 2 + 1):
        gram = hodge_riemann_form(ring, ell, q).gram
        assert all(gram[i][j] == gram[j][i] for i in range(len(gram)) for j in range(len(gram)))


def test_symmetric_form_rejects_asymmetric_gram():
    with pytest.raises(ValueError):
        SymmetricForm(0, [[1, 2], [3, 4]])


def test_lefschetz_decomposition_is_orthogonal():
    ring = chow_ring(catalog.get("boolean4"))
    ell = default_ell(ring)
    form = hodge_riemann_form(ring, ell, 1)
    ell_vec = ring.linear(ell.values).vector()
    prim = primitive_subspace(ring, ell, 1)
    assert bareiss_rank(prim + [ell_vec]) == len(prim) + 1 == ring.dim(1)
    for p in prim:
        assert form(p, ell_vec) == 0
    # ell itself pairs negatively in degree one
    assert form(ell_vec, ell_vec) < 0


# --- product oracle ------------------------------------------------------------------------

def test_product_oracle_all_small_cases():
    for r2 in range(7):
        for r1 in range(r2 + 1):
            for q in range(r1 + 1):
                ok, det = product_hr_oracle(r1, r2, q)
                assert ok and det != 0
                gram = oracles.product_form(r1, r2, q)
                # anti-diagonal reversal turns the monomial pairing into the binomial matrix
                assert abs(oracles.det(gram)) == abs(det)


def test_product_oracle_examples():
    assert product_hr_oracle(1, 1, 1) == (True, -1)
    assert product_hr_oracle(2, 2, 0)[1] == 6
    with pytest.raises(InputError):
        product_hr_oracle(3, 2, 1)


def test_product_form_signature_matches_mixed_hr():
    # on P^r1 x P^r2 the form of (x + y) has the signature predicted by HR
    for r1, r2 in [(1, 1), (1, 2), (2, 2), (2, 3)]:
        hilbert = [sum(1 for i in range(r1 + 1) if 0 <= k - i <= r2)
                   for k in range(r1 + r2 + 1)]
        for q in range((r1 + r2) // 2 + 1):
            if q > r1:
                continue
            gram = oracles.product_form(r1, r2, q)
            gram = [[(-1) ** q * v for v in row] for row in gram]
            rows = [i for i in range(q + 1) if q - i <= r2]
            gram = [[gram[i][j] for j in rows] for i in rows]
            pos, neg, zero = oracles.descartes_signature(gram)
            assert zero == 0
            assert pos - neg == expected_signature_difference(hilbert, q)


# --- nef inequality -------------------------------------------------------------------------

@pytest.mark.parametrize("name,degrees", [("fano", (1, 8, 6)), ("u34", (1, 3, 3))])
def test_alpha_beta_inequality(name, degrees):
    ring = chow_ring(catalog.get(name))
    ok, got = nef_degree_inequality(ring, ring.alpha(), ring.beta())
    assert ok and got == degrees


def test_inequality_equality_case_and_rank_guard():
    ring = chow_ring(catalog.get("k4"))
    ok, (a, b, c) = nef_degree_inequality(ring, ring.alpha(), ring.alpha())
    assert ok and a * b == c * c
    with pytest.raises(InputError) as err:
        nef_degree_inequality(chow_ring(catalog.get("u23")), [0, 0, 0], [0, 0, 0])
    assert err.value.code == "rank-too-small"


def test_class_degree_check():
    ring = chow_ring(catalog.get("fano"))
    with pytest.raises(InputError) as err:
        nef_degree_inequality(ring, ring.alpha() * ring.alpha(), ring.beta())
    assert err.value.code == "wrong-degree"
