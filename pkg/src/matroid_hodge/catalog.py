"""Named matroids shipped with the library."""

from functools import lru_cache
from itertools import combinations

from .errors import InputError
from .matroid import Matroid, build, popcount, to_mask

FANO_LINES = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
# the four pairs of the Vamos matroid; every union of two pairs except the
# last two is a dependent hyperplane
VAMOS_PAIRS = [(0, 1), (2, 3), (4, 5), (6, 7)]


def _triples_off(lines, size):
    lines = {tuple(sorted(l)) for l in lines}
    return [list(t) for t in combinations(range(size), 3) if t not in lines]


def _vamos_bases():
    planes = {tuple(sorted(VAMOS_PAIRS[i] + VAMOS_PAIRS[j]))
              for i, j in combinations(range(4), 2) if (i, j) != (2, 3)}
    return [list(q) for q in combinations(range(8), 4) if q not in planes]


DESCRIPTIONS = {
    "u12": {"format": "uniform", "n": 2, "rank": 1},
    "u23": {"format": "uniform", "n": 3, "rank": 2},
    "u24": {"format": "uniform", "n": 4, "rank": 2},
    "u34": {"format": "uniform", "n": 4, "rank": 3},
    "boolean3": {"format": "boolean", "n": 3},
    "boolean4": {"format": "boolean", "n": 4},
    "k4": {"format": "graph", "vertices": 4, "edges": [list(e) for e in K4_EDGES]},
    "fano": {"format": "flats", "n": 7, "flats": [list(l) for l in FANO_LINES]},
    "nonfano": {"format": "bases", "n": 7, "bases": _triples_off(FANO_LINES[:-1], 7)},
    "vamos": {"format": "bases", "n": 8, "bases": _vamos_bases()},
}

SUMMARIES = {
    "u12": "uniform matroid of rank 1 on 2 elements",
    "u23": "uniform matroid of rank 2 on 3 elements",
    "u24": "uniform matroid of rank 2 on 4 elements",
    "u34": "uniform matroid of rank 3 on 4 elements",
    "boolean3": "free matroid on 3 elements",
    "boolean4": "free matroid on 4 elements",
    "k4": "cycle matroid of the complete graph on 4 vertices",
    "fano": "Fano plane",
    "nonfano": "Fano plane with one line relaxed",
    "vamos": "Vamos matroid (not representable over any field)",
    "u23_parallel": "U(2,3) with element 2 doubled by a parallel element 3",
}


def names():
    return list(SUMMARIES)


def description(name):
    if name == "u23_parallel":
        # no compact format expresses parallel elements except bases
        return get(name).to_json()
    try:
        return DESCRIPTIONS[name]
    except KeyError:
        raise InputError("malformed-input", f"unknown catalog matroid {name!r}") from None


@lru_cache(maxsize=None)
def get(name):
    if name == "u23_parallel":
        return Matroid(4, lambda s: min(popcount(s & 0b0011) + (1 if s & 0b1100 else 0), 2),
                       name=name)
    return build(description(name), name=name)


def fano_lines():
    return [to_mask(l) for l in FANO_LINES]
