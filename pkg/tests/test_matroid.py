import json
import random

import pytest

from matroid_hodge import InputError, Matroid, build, catalog
from matroid_hodge.matroid import (bits, boolean, dumps, from_bases, graphic, to_mask,
                                   uniform)

import oracles

CATALOG = catalog.names()


def flats_as_lists(m, k):
    return [bits(f) for f in m.lattice.flats_by_rank[k]]


# --- construction -----------------------------------------------------------------

def test_uniform_u23_flats():
    m = uniform(2, 3)
    assert m.rank == 2
    assert flats_as_lists(m, 0) == [[]]
    assert flats_as_lists(m, 1) == [[0], [1], [2]]
    assert flats_as_lists(m, 2) == [[0, 1, 2]]


def test_graph_k4_matches_spanning_forest_rank():
    m = catalog.get("k4")
    assert (m.size, m.rank) == (6, 3)
    rank = oracles.rank_from_graph(4, catalog.K4_EDGES)
    assert all(m.rk(s) == rank(s) for s in range(64))


def test_fano_from_lines():
    m = catalog.get("fano")
    assert m.rank == 3
    assert len(m.proper_flats()) == 14
    bases = [t for t in __import__("itertools").combinations(range(7), 3)
             if t not in catalog.FANO_LINES]
    rank = oracles.rank_from_bases(bases)
    assert all(m.rk(s) == rank(s) for s in range(128))
    assert len(oracles.brute_flats(7, rank)) - 2 == 14


@pytest.mark.parametrize("name", CATALOG)
def test_json_round_trip(name):
    m = catalog.get(name)
    again = build(json.loads(dumps(m)))
    assert again == m
    assert dumps(again) == dumps(m)


def test_rejects_bad_rank_function():
    with pytest.raises(InputError) as err:
        Matroid(3, lambda s: 2 * bin(s).count("1"))
    assert err.value.code == "axiom-violation"
    # unit increase holds, submodularity fails at {0,1,2}, {0,1,3}
    with pytest.raises(InputError) as err:
        Matroid(4, lambda s: 3 if s == 0b1111 else min(2, bin(s).count("1")))
    assert err.value.code == "axiom-violation"


def test_rejects_loops():
    with pytest.raises(InputError) as err:
        Matroid(2, lambda s: bin(s & 1).count("1"))
    assert err.value.code == "loop-present"
    with pytest.raises(InputError) as err:
        graphic(2, [(0, 0), (0, 1)])
    assert err.value.code == "loop-edge"


@pytest.mark.parametrize("description", [
    {"format": "nope"}, {"n": 3}, {"format": "uniform", "n": "x", "rank": 1},
    {"format": "bases", "n": 3, "bases": []}, [1, 2],
])
def test_malformed_descriptions(description):
    with pytest.raises(InputError) as err:
        build(description)
    assert err.value.code == "malformed-input"


def test_size_cap():
    with pytest.raises(InputError) as err:
        uniform(2, 17)
    assert err.value.code == "size-cap-exceeded"


def test_sampled_validation_above_table_limit():
    m = uniform(3, 13)
    assert m.validation == "sampled"
    assert uniform(3, 6).validation == "exhaustive"


# --- closure and lattice ------------------------------------------------------------

def test_closure_examples():
    assert uniform(2, 3).closure(0b001) == 0b001
    fano = catalog.get("fano")
    assert fano.closure(0b011) == 0b111
    for name in CATALOG:
        m = catalog.get(name)
        assert m.closure(m.full) == m.full


@pytest.mark.parametrize("name", [n for n in CATALOG if catalog.get(n).size <= 10])
def test_closure_is_idempotent_and_rank_preserving(name):
    m = catalog.get(name)
    for s in range(1 << m.size):
        c = m.closure(s)
        assert m.rk(c) == m.rk(s)
        assert m.closure(c) == c


@pytest.mark.parametrize("name,counts", [
    ("boolean3", [1, 3, 3, 1]), ("fano", [1, 7, 7, 1]), ("u34", [1, 4, 6, 1]),
])
def test_lattice_counts(name, counts):
    assert catalog.get(name).lattice.counts() == counts


@pytest.mark.parametrize("name", CATALOG)
def test_lattice_matches_brute_force_flats(name):
    m = catalog.get(name)
    assert sorted(m.lattice.flats) == sorted(oracles.brute_flats(m.size, m.rk))


@pytest.mark.parametrize("name", CATALOG)
def test_mobius_and_cover_partition(name):
    m = catalog.get(name)
    lat = m.lattice
    assert lat.mobius[0] == 1
    for f in lat.flats:
        if f:
            assert sum(v for g, v in lat.mobius.items() if g & f == g) == 0
        if f != m.full:
            parts = [g & ~f for g in lat.covers[f]]
            union = 0
            for p in parts:
                assert union & p == 0
                union |= p
            assert union == m.full & ~f


# --- characteristic polynomials -----------------------------------------------------

@pytest.mark.parametrize("name,coeffs", [
    ("u23", [2, -3, 1]), ("fano", [-8, 14, -7, 1]), ("k4", [-6, 11, -6, 1]),
    ("u34", [-3, 6, -4, 1]),
])
def test_char_poly_examples(name, coeffs):
    m = catalog.get(name)
    assert list(m.char_poly().coefficients) == coeffs
    assert list(m.char_poly("mobius").coefficients) == coeffs


def test_k4_char_poly_from_chromatic_oracle():
    chrom = oracles.chromatic_deletion_contraction(4, catalog.K4_EDGES)
    # chi_G = lambda^(components) chi_M
    assert list(catalog.get("k4").char_poly().coefficients) == chrom[1:]


@pytest.mark.parametrize("name", CATALOG)
def test_char_poly_two_methods_and_oracle(name):
    m = catalog.get(name)
    brute = oracles.brute_charpoly(m.size, m.rk)
    assert list(m.char_poly("subset-sum").coefficients) == brute
    assert m.char_poly("mobius") == m.char_poly("subset-sum")
    assert m.char_poly()(1) == 0
    assert m.char_poly().coefficients[-1] == 1


@pytest.mark.parametrize("name,reduced,mu", [
    ("u23", [-2, 1], (1, 2)), ("fano", [8, -6, 1], (1, 6, 8)), ("u34", [3, -3, 1], (1, 3, 3)),
])
def test_reduced_char_poly_examples(name, reduced, mu):
    m = catalog.get(name)
    assert list(m.reduced_char_poly().coefficients) == reduced
    assert m.mu_sequence() == mu
    quotient, remainder = oracles.poly_divide_by_x_minus_1(oracles.brute_charpoly(m.size, m.rk))
    assert remainder == 0 and quotient == reduced


@pytest.mark.parametrize("name", CATALOG)
def test_mu_positive_and_truncation_invariant(name):
    m = catalog.get(name)
    mu = m.mu_sequence()
    assert all(v > 0 for v in mu)
    if m.rank >= 3:
        t = m.truncate()
        assert t.mu_sequence()[: m.r - 1] == mu[: m.r - 1]


@pytest.mark.parametrize("name", ["fano", "k4", "nonfano", "u34"])
def test_mu_independent_of_labelling(name):
    m = catalog.get(name)
    rng = random.Random(7)
    for _ in range(3):
        perm = list(range(m.size))
        rng.shuffle(perm)
        p = m.relabel(perm)
        assert p.mu_sequence() == m.mu_sequence()
        assert [len(p.descending_initial_flags(k)) for k in range(1, p.r + 1)] == \
            list(m.mu_sequence()[1:])


# --- minors and derived matroids -------------------------------------------------------

def test_fano_contracted_by_point():
    m = catalog.get("fano")
    c = m.contraction(0b1)
    assert (c.size, c.rank) == (6, 2)
    simple, pi, iota = c.simplify()
    assert simple == uniform(2, 3)
    # the lines through the point pair up the other six elements
    assert sorted(len([e for e in range(6) if pi[e] == k]) for k in range(3)) == [2, 2, 2]


def test_minor_edge_cases():
    fano = catalog.get("fano")
    point = fano.restriction(0b1)
    assert (point.size, point.rank) == (1, 1)
    k4 = catalog.get("k4")
    parallel = k4.restriction(k4.lattice.flats_by_rank[1][0])
    assert parallel.rank == 1
    hyperplane = fano.lattice.flats_by_rank[2][0]
    assert fano.contraction(hyperplane).rank == 1
    with pytest.raises(InputError) as err:
        fano.contraction(0b011)
    assert err.value.code == "not-a-flat"
    with pytest.raises(InputError):
        fano.restriction(0b011)


def test_simplify():
    m = catalog.get("fano")
    simple, pi, iota = m.simplify()
    assert simple == m and pi == tuple(range(7)) and iota == tuple(range(7))
    simple, pi, iota = catalog.get("u23_parallel").simplify()
    assert simple == uniform(2, 3)
    assert pi == (0, 1, 2, 2)
    rank_one = uniform(1, 4)
    assert rank_one.simplify()[0] == uniform(1, 1)


def test_dual_truncate_extension():
    assert catalog.get("u34").truncate() == uniform(2, 4)
    assert uniform(2, 3).dual() == uniform(1, 3)
    ext = uniform(2, 3).free_dual_extension()
    assert (ext.size, ext.rank) == (4, 3)
    with pytest.raises(InputError) as err:
        uniform(1, 3).truncate()
    assert err.value.code == "rank-too-small"
    with pytest.raises(InputError) as err:
        uniform(3, 16).free_dual_extension()
    assert err.value.code == "size-cap-exceeded"


def test_dual_rank_formula_oracle():
    m = catalog.get("nonfano")
    d = m.dual()
    for s in range(1 << m.size):
        assert d.rk(s) == bin(s).count("1") - m.rank + m.rk(m.full & ~s)


@pytest.mark.parametrize("name", CATALOG)
def test_double_dual(name):
    m = catalog.get(name)
    assert m.dual().dual(allow_loops=False) == m


@pytest.mark.parametrize("name,counts", [
    ("u23", (1, 3, 3)), ("fano", (1, 7, 21, 28)), ("boolean3", (1, 3, 3, 1)),
])
def test_independent_counts(name, counts):
    m = catalog.get(name)
    assert m.independent_counts() == counts
    assert list(counts) == oracles.brute_independent_counts(m.size, m.rk)


def test_descending_initial_flags_examples():
    u23 = uniform(2, 3)
    assert [[bits(f) for f in fl] for fl in u23.descending_initial_flags(1)] == [[[1]], [[2]]]
    assert len(catalog.get("fano").descending_initial_flags(2)) == 8
    with pytest.raises(ValueError):
        u23.descending_initial_flags(2)


@pytest.mark.parametrize("name", CATALOG)
def test_descending_flags_count_mu(name):
    m = catalog.get(name)
    mu = m.mu_sequence()
    for k in range(1, m.r + 1):
        assert len(m.descending_initial_flags(k)) == mu[k]
    simple = m.simplify()[0]
    points = [f for f in simple.lattice.flats_by_rank[1] if not f & 1]
    if m.r >= 1:
        assert len(m.descending_initial_flags(1)) == len(points)


def test_boolean_all_subsets_closed():
    m = boolean(3)
    assert sorted(m.lattice.flats) == list(range(8))


def test_from_bases_rejects_unequal_sizes():
    with pytest.raises(InputError) as err:
        from_bases(3, [[0, 1], [2]])
    assert err.value.code == "axiom-violation"


def test_to_mask_bits_round_trip():
    assert bits(to_mask([4, 0, 2])) == [0, 2, 4]
