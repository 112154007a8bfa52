"""Random fixtures shared by the test modules."""

import random
from fractions import Fraction

from defcalc.algebras import associative_corpus
from defcalc.artinian import tensor_algebras, tensor_with_ideal, truncated_polynomial
from defcalc.defcomplexes import HochschildComplex, hochschild_linfty
from defcalc.graded import ChainComplex, GradedSpace
from defcalc.linalg import SparseMatrix
from defcalc.linfty import TableLInfty, end_lie_algebra
from defcalc.mc import _closed, gauge_action, orders


def random_complex(rng: random.Random, max_dim: int = 4, degrees=(-1, 0, 1, 2)) -> ChainComplex:
    """Sum of random acyclic pairs and single vectors, conjugated by elementary basis changes."""
    n = rng.randint(1, max_dim)
    degs, pairs = [], []
    while len(degs) < n:
        d = rng.choice(degrees)
        if len(degs) + 2 <= n and rng.random() < 0.5:
            pairs.append((len(degs), len(degs) + 1))
            degs += [d, d + 1]
        else:
            degs.append(d)
    D = [[Fraction(0)] * n for _ in range(n)]
    for a, b in pairs:
        D[b][a] = Fraction(rng.choice([1, 2, -3]))
    for _ in range(3):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j or degs[i] != degs[j]:
            continue
        c = Fraction(rng.choice([-2, -1, 1, 2]))
        # new basis e_i' = e_i + c e_j: D <- E^{-1} D E with E = 1 + c E_ji
        for r in range(n):
            D[r][i] += c * D[r][j]
        for col in range(n):
            D[j][col] -= c * D[i][col]
    order = sorted(range(n), key=lambda k: degs[k])
    comps: dict = {}
    for k in order:
        comps.setdefault(degs[k], []).append(f"x{k}")
    pos = {k: p for p, k in enumerate(order)}
    entries = [(pos[r], pos[c], D[r][c]) for r in range(n) for c in range(n) if D[r][c]]
    return ChainComplex(GradedSpace(comps), SparseMatrix.from_entries(n, n, entries))


def cubic_toy() -> TableLInfty:
    """``e`` in degree 1 and ``f`` in degree 2 with ``l_3(e, e, e) = f`` only."""
    return TableLInfty([1, 2], [0, 0], ["e", "f"], {1: {}, 2: {}, 3: {(0, 0, 0): {1: Fraction(1)}}}, 3,
                       "cubic")


def _random_vec(rng, indices, k=3):
    idx = rng.sample(indices, min(k, len(indices)))
    return {i: Fraction(rng.choice([-2, -1, 1, 2, 3]), rng.choice([1, 1, 2])) for i in idx}


def _gauge_pair(rng, g, R):
    G = tensor_with_ideal(g, R)
    order = orders(G)
    top = max(order)
    deg1_top = [i for i in range(G.dim) if G.degrees[i] == 1 and order[i] == top]
    cycles = _closed(G, deg1_top) if deg1_top else []
    tau = {}
    for z in rng.sample(cycles, min(2, len(cycles))):
        scale = rng.choice([1, -1, 2])
        for i, c in z.items():
            tau[i] = tau.get(i, 0) + scale * c
    deg0 = [i for i in range(G.dim) if G.degrees[i] == 0]
    if deg0:
        tau = gauge_action(G, _random_vec(rng, deg0), tau)
    return G, {i: c for i, c in tau.items() if c}


def random_nilpotent_pair(rng: random.Random):
    """A nilpotent L-infinity algebra ``g (x) m_R`` and a nonzero MC element of it."""
    while True:
        G, tau = _nilpotent_pair(rng)
        if tau:
            return G, tau


def _nilpotent_pair(rng: random.Random):
    kind = rng.choice(["end", "end", "hochschild", "cubic"])
    if kind == "end":
        X = random_complex(rng, 3)
        R = truncated_polynomial(rng.choice([2, 3, 4]))
        return _gauge_pair(rng, end_lie_algebra(X), R)
    if kind == "hochschild":
        A = rng.choice(associative_corpus()[:3])
        g = hochschild_linfty(HochschildComplex(A, "ge1", 3))
        return _gauge_pair(rng, g, truncated_polynomial(3))
    # cubic toy over K[s,t,u]/(s^2,t^2,u^2): e (x) (a s + b t + c u) is MC when
    # at most two of a, b, c are nonzero, yet l_3(tau, -, -) survives twisting
    R = three_square_zero()
    G = tensor_with_ideal(cubic_toy(), R)
    gens = rng.sample(range(3), 2)
    tau = {G.index[(0, R.labels.index(v))]: Fraction(rng.choice([-1, 1, 2]))
           for v in (["s", "t", "u"][k] for k in gens)}
    return G, tau


def three_square_zero():
    D = [truncated_polynomial(2, v) for v in "stu"]
    return tensor_algebras(tensor_algebras(D[0], D[1]), D[2])


def end_element(G, X, entries, power):
    """Vector of ``End(X) (x) m_R`` from ``{(source, target): c}`` at ``t^power``."""
    from defcalc.graded import hom_space

    _, pairs = hom_space(X.space, X.space)
    labels = X.space.flat_labels()
    index = {(labels[j], labels[i]): k for k, (i, j) in enumerate(pairs)}
    return {G.index[(index[st], power - 1)]: Fraction(c) for st, c in entries.items()}


def _sum(*vs):
    out = {}
    for v in vs:
        for i, c in v.items():
            out[i] = out.get(i, 0) + c
    return {i: c for i, c in out.items() if c}


def homotopy_fixtures():
    """``(name, G, vertices, expected partition)`` over ``K[t]/(t^3)``.

    Expected partitions are derived by hand from the gauge action.
    """
    from defcalc.algebras import dual_numbers_algebra

    R = truncated_polynomial(3)
    out = []
    # End(V), V = e0 + e1[-1], d = 0: tau = a(t) E with E: e0 -> e1, and
    # exp(lambda) multiplies a(t) by a unit of 1 + m, so a = t + b t^2 ~ t
    V = ChainComplex(GradedSpace({0: ("e0",), 1: ("e1",)}), SparseMatrix.zero(2, 2))
    G = tensor_with_ideal(end_lie_algebra(V), R)
    E = lambda c, p: end_element(G, V, {("e0", "e1"): c}, p)
    verts = [{}, E(1, 2), E(2, 2), E(1, 1), _sum(E(1, 1), E(1, 2)), _sum(E(1, 1), E(-3, 2)), E(2, 1)]
    out.append(("End(V)", G, verts, [[0], [1], [2], [3, 4, 5], [6]]))
    # Hochschild >= 1 of K[x]/(x^2): phi(x, x) = 1 deforms to x^2 = t
    H = HochschildComplex(dual_numbers_algebra(), "ge1", 3)
    G = tensor_with_ideal(hochschild_linfty(H), R)
    phi = H.element(2, {(1, 1): {0: 1}})
    lam = H.element(1, {(1,): {1: Fraction(1, 2)}, (0,): {1: 1}})
    P = lambda v, c, p: {G.index[(i, p - 1)]: c * a for i, a in v.items()}
    v0 = P(phi, 1, 1)
    verts = [{}, v0, P(phi, 2, 1), _sum(v0, P(phi, 1, 2)), gauge_action(G, P(lam, 1, 1), v0),
             gauge_action(G, P(lam, 1, 1), {}), P(phi, 1, 2)]
    out.append(("HH>=1(K[x]/x^2)", G, verts, [[0, 5], [1, 3, 4], [2], [6]]))
    # End(X), X = (a -> b) + c + e[-1]: c -> e carries H^1, c -> b is exact
    X = ChainComplex(GradedSpace({0: ("a", "c"), 1: ("b", "e")}), SparseMatrix.from_entries(4, 4, [(2, 0, 1)]))
    G = tensor_with_ideal(end_lie_algebra(X), R)
    ce = lambda c, p: end_element(G, X, {("c", "e"): c}, p)
    cb = lambda c, p: end_element(G, X, {("c", "b"): c}, p)
    lam = end_element(G, X, {("a", "a"): 1, ("c", "c"): -1, ("e", "e"): 2, ("c", "a"): 1}, 1)
    verts = [{}, cb(1, 1), ce(1, 1), _sum(ce(1, 1), cb(1, 2)), ce(2, 1), gauge_action(G, lam, ce(1, 1))]
    out.append(("End(X)", G, verts, [[0, 1], [2, 3, 5], [4]]))
    return out
