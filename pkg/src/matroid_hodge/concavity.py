"""Log-concavity certificates for matroid invariants and chromatic polynomials."""

from .chow import chow_ring
from .errors import InputError, VerificationError
from .matroid import graphic
from .polynomial import IntPolynomial

SCHEMA_VERSION = 1


def log_concave_verdicts(seq):
    """a[k-1] a[k+1] <= a[k]^2 for each interior k, as a list of booleans."""
    return [seq[k - 1] * seq[k + 1] <= seq[k] * seq[k] for k in range(1, len(seq) - 1)]


def is_log_concave(seq):
    return all(log_concave_verdicts(seq))


def is_unimodal(seq):
    k = 0
    while k + 1 < len(seq) and seq[k] <= seq[k + 1]:
        k += 1
    while k + 1 < len(seq) and seq[k] >= seq[k + 1]:
        k += 1
    return k == len(seq) - 1


def convolve(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


class ConcavityReport:
    def __init__(self, subject):
        self.subject = subject
        self.sequences = {}

    def add(self, name, values, route):
        values = tuple(int(v) for v in values)
        positive = all(v > 0 for v in values)
        verdicts = log_concave_verdicts(values)
        self.sequences[name] = {
            "values": list(values),
            "route": route,
            "log_concave": verdicts,
            "log_concave_all": all(verdicts),
            "unimodal": is_unimodal(values),
            # log-concave positive sequences are unimodal
            "unimodal_from_log_concavity": positive and all(verdicts),
        }

    @property
    def passed(self):
        return all(s["log_concave_all"] and s["unimodal"] for s in self.sequences.values())

    def to_json(self):
        return {"schema_version": SCHEMA_VERSION, "subject": self.subject,
                "sequences": self.sequences, "pass": self.passed}


def mu_by_shelling(m):
    """|D_k| for k = 0..r: descending flags of flats of ranks 1..k."""
    return tuple([1] + [len(m.descending_initial_flags(k)) for k in range(1, m.r + 1)])


def mu_by_degrees(m):
    """deg(alpha^(r-k) beta^k) for k = 0..r in the Chow ring of m."""
    ring = chow_ring(m)
    r = ring.r
    alpha, beta = ring.alpha(), ring.beta()
    alpha_powers = [ring.one()]
    beta_powers = [ring.one()]
    for _ in range(r):
        alpha_powers.append(alpha_powers[-1] * alpha)
        beta_powers.append(beta_powers[-1] * beta)
    out = []
    for k in range(r + 1):
        d = ring.degree(alpha_powers[r - k] * beta_powers[k])
        if d.denominator != 1:
            raise VerificationError("route-disagreement", f"non-integral degree {d}")
        out.append(int(d))
    return tuple(out)


def mu_routes(m):
    return {"reduced-charpoly": m.mu_sequence(),
            "shelling": mu_by_shelling(m),
            "degree": mu_by_degrees(m)}


def certify_matroid(m):
    if any(m.rk(1 << i) == 0 for i in range(m.size)):
        raise InputError("matroid-has-loops", "log-concavity needs a loopless matroid")
    routes = mu_routes(m)
    values = set(routes.values())
    if len(values) != 1:
        raise VerificationError("route-disagreement", f"mu routes disagree: {routes}")
    mu = routes["reduced-charpoly"]
    w = m.whitney_sequence()
    if convolve(mu, (1, 1)) != w:
        raise VerificationError("route-disagreement",
                                f"w={w} is not mu={mu} convolved with (1, 1)")
    report = ConcavityReport(m.name)
    report.add("mu", mu, "reduced-charpoly = shelling = degree")
    report.add("w", w, "charpoly = mu * (1, 1)")
    return report


def certify_independent_sets(m):
    ext = m.free_dual_extension()
    via_extension = ext.mu_sequence()
    direct = m.independent_counts()
    if tuple(via_extension) != tuple(direct):
        raise VerificationError("route-disagreement",
                                f"f from extension {via_extension} != direct count {direct}")
    report = ConcavityReport(m.name)
    report.add("f", direct, "free dual extension = direct count")
    return report


def certify_all(m):
    report = certify_matroid(m)
    report.sequences.update(certify_independent_sets(m).sequences)
    return report


# --- graphs -------------------------------------------------------------------

def parse_edge_list(text, simplify=False):
    """Edge-list text ("u v" per line, '#' comments) -> (vertex count, edges).

    Vertex names are arbitrary tokens, numbered in order of appearance.
    """
    names = {}
    edges = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            names.setdefault(parts[0], len(names))
            continue
        if len(parts) != 2:
            raise InputError("malformed-input", f"line {lineno}: expected 'u v', got {line!r}")
        u, v = (names.setdefault(p, len(names)) for p in parts)
        edges.append((u, v))
    if simplify:
        seen = set()
        unique = []
        for u, v in edges:
            key = (min(u, v), max(u, v))
            if key not in seen:
                seen.add(key)
                unique.append((u, v))
        edges = unique
    return len(names), edges


def components(vertices, edges):
    parent = list(range(vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(x) for x in range(vertices)})


def chromatic(vertices, edges):
    """(chromatic polynomial, ConcavityReport) of a multigraph."""
    if vertices < 1:
        raise InputError("malformed-input", "a graph needs at least one vertex")
    for u, v in edges:
        if u == v:
            raise InputError("loop-edge", f"edge ({u}, {v}) is a loop")
    n_components = components(vertices, edges)
    if edges:
        poly = graphic(vertices, edges).char_poly().shift(n_components)
    else:
        poly = IntPolynomial([0] * vertices + [1])
    nonzero = [abs(c) for c in reversed(poly.coefficients)]
    while nonzero and nonzero[-1] == 0:
        nonzero.pop()
    report = ConcavityReport("graph")
    report.add("chromatic", nonzero, "graphic charpoly * lambda^components")
    return poly, report
