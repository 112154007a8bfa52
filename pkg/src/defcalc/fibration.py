"""The fiber sequence ``g^psi -> g+^psi -> End(X)``, the identification of
the Di convolution algebra with ``End(X)``, and long exact sequences of
short exact sequences of complexes."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping

from .convolution import ConvolutionAlgebra, structure_element
from .graded import ChainComplex, hom_space
from .linalg import SparseMatrix, kernel_basis, rank, solve, vec_add
from .linfty import LInftyAlgebra, check_strict_morphism, end_lie_algebra, mc_defect, twist
from .operads import Cooperad, koszul_dual_cooperad

ONE = Fraction(1)


def _by_degree(degrees) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for i, d in enumerate(degrees):
        out.setdefault(d, []).append(i)
    return out


class _Cohomology:
    """Cocycles and coboundaries of ``(g, l_1)`` in flat coordinates."""

    def __init__(self, g: LInftyAlgebra):
        self.g = g
        self.D = g.l1_matrix()
        self.index = _by_degree(g.degrees)
        cols = self.D.columns()
        self.cycles: dict[int, list[dict]] = {}
        self.boundaries: dict[int, list[dict]] = {}
        for d, idx in self.index.items():
            block = SparseMatrix.from_columns(self.D.rows, [cols[i] for i in idx])
            self.cycles[d] = [{idx[j]: c for j, c in v.items()} for v in kernel_basis(block)]
        for d in self.index:
            self.boundaries[d] = [cols[i] for i in self.index.get(d - 1, []) if cols[i]]

    def dim(self, d: int) -> int:
        return len(self.cycles.get(d, [])) - self.boundary_rank(d)

    def boundary_rank(self, d: int) -> int:
        b = self.boundaries.get(d, [])
        return rank(SparseMatrix.from_columns(self.g.dim, b)) if b else 0


def _induced_rank(images: list[dict], boundaries: list[dict], n: int, base_rank: int) -> int:
    cols = [v for v in boundaries + images if v]
    if not cols:
        return 0
    return rank(SparseMatrix.from_columns(n, cols)) - base_rank


def _apply(f: Callable[[int], dict], v: Mapping[int, Fraction]) -> dict:
    out: dict = {}
    for i, c in v.items():
        vec_add(out, f(i), c)
    return out


def short_exact_sequence(A: LInftyAlgebra, B: LInftyAlgebra, C: LInftyAlgebra,
                         i: Callable[[int], dict], p: Callable[[int], dict],
                         lift: Callable[[int], dict] | None = None) -> dict:
    """Check ``0 -> A -> B -> C -> 0`` degreewise and its long exact sequence.

    ``i`` and ``p`` give images of basis vectors; ``lift`` is a linear section
    of ``p`` on basis vectors of C (solved for when absent).  Returns a report
    with per-degree dimensions, ranks of ``i_*``, ``p_*`` and the connecting
    map, and exactness flags at the three spots.
    """
    I = SparseMatrix.from_columns(B.dim, [i(a) for a in range(A.dim)])
    P = SparseMatrix.from_columns(C.dim, [p(b) for b in range(B.dim)])
    problems = []
    if not (P @ I).is_zero():
        problems.append("p o i != 0")
    for a in range(A.dim):
        for b in i(a):
            if B.degrees[b] != A.degrees[a]:
                problems.append(f"i changes the degree of {A.labels[a]}")
    for b in range(B.dim):
        for c in p(b):
            if C.degrees[c] != B.degrees[b]:
                problems.append(f"p changes the degree of {B.labels[b]}")
    all_degrees = sorted(set(A.degrees) | set(B.degrees) | set(C.degrees))
    per_degree = {}
    iA, iB, iC = _by_degree(A.degrees), _by_degree(B.degrees), _by_degree(C.degrees)
    Icols, Pcols = I.columns(), P.columns()
    for d in all_degrees:
        a_idx, b_idx, c_idx = iA.get(d, []), iB.get(d, []), iC.get(d, [])
        ri = rank(SparseMatrix.from_columns(B.dim, [Icols[a] for a in a_idx])) if a_idx else 0
        rp = rank(SparseMatrix.from_columns(C.dim, [Pcols[b] for b in b_idx])) if b_idx else 0
        ok = ri == len(a_idx) and rp == len(c_idx) and len(b_idx) - rp == ri
        per_degree[d] = {"dims": [len(a_idx), len(b_idx), len(c_idx)], "exact": ok}
        if not ok:
            problems.append(f"not short exact in degree {d}")
    if lift is None:
        def lift(c):
            x = solve(P, {c: ONE})
            if x is None:
                raise ValueError("p is not surjective")
            return x

    HA, HB, HC = _Cohomology(A), _Cohomology(B), _Cohomology(C)
    les = {}
    rank_cache = {}

    def base(H, d):
        key = (id(H), d)
        if key not in rank_cache:
            rank_cache[key] = H.boundary_rank(d)
        return rank_cache[key]

    def connecting(z):
        y = _apply(lift, z)
        dy = _apply(lambda b: B.sorted_bracket(1, (b,)), y)
        x = solve(I, dy)
        if x is None:
            raise AssertionError("l_1 of a lift does not come from A")
        return x

    ranks = {}
    for d in all_degrees:
        ri = _induced_rank([_apply(i, z) for z in HA.cycles.get(d, [])], HB.boundaries.get(d, []),
                           B.dim, base(HB, d))
        rp = _induced_rank([_apply(p, z) for z in HB.cycles.get(d, [])], HC.boundaries.get(d, []),
                           C.dim, base(HC, d))
        rd = _induced_rank([connecting(z) for z in HC.cycles.get(d, [])], HA.boundaries.get(d + 1, []),
                           A.dim, base(HA, d + 1))
        ranks[d] = (ri, rp, rd)
    for d in all_degrees:
        ri, rp, rd = ranks[d]
        rd_prev = ranks.get(d - 1, (0, 0, 0))[2]
        hA, hB, hC = HA.dim(d), HB.dim(d), HC.dim(d)
        exact = {"A": hA == ri + rd_prev, "B": hB == ri + rp, "C": hC == rp + rd}
        les[d] = {"H": [hA, hB, hC], "rank_i": ri, "rank_p": rp, "rank_delta": rd, "exact": exact}
        if not all(exact.values()):
            problems.append(f"long exact sequence fails in degree {d}")
    chi = [sum((-1) ** (d % 2) * v["dims"][k] for d, v in per_degree.items()) for k in range(3)]
    if chi[1] != chi[0] + chi[2]:
        problems.append("Euler characteristics are not additive")
    return {"ok": not problems, "problems": problems, "degrees": per_degree, "long_exact": les,
            "euler": chi}


class FiberSequence:
    """``g^psi -> g+^psi -> End(X)`` for a cooperad C, a complex X and an MC element psi."""

    def __init__(self, C: Cooperad, X: ChainComplex, psi: Mapping[int, Fraction] | None = None,
                 cap: int | None = None, budget: int | None = None):
        self.g = ConvolutionAlgebra(C, X, cap=cap, plus=False, budget=budget)
        self.gp = ConvolutionAlgebra(C, X, cap=cap, plus=True, budget=budget)
        psi = {} if psi is None else {i: Fraction(c) for i, c in psi.items() if c}
        if mc_defect(self.g, psi):
            raise ValueError("psi is not a Maurer-Cartan element")
        self.psi = psi
        self.psi_plus = _apply(self.include, psi)
        self.fiber = twist(self.g, psi)
        self.total = twist(self.gp, self.psi_plus)
        self.base = end_lie_algebra(X)
        _, pairs = hom_space(X.space, X.space)
        self._pair_index = {pq: k for k, pq in enumerate(pairs)}
        self._end_to_plus = {}
        gp = self.gp
        unit = gp.Q.unit
        for idx, (r, j) in enumerate(gp.elements):
            if r != 1:
                continue
            q, e = gp.H.unpack(1, gp.bases[1].keys[j])
            if q == unit:
                (J, k) = gp.E.basis(1)[e]
                self._end_to_plus[self._pair_index[(k, J[0])]] = idx
        self._plus_to_end = {v: k for k, v in self._end_to_plus.items()}

    def include(self, i: int) -> dict:
        r, j = self.g.elements[i]
        key = self.g.bases[r].keys[j]
        basis = self.gp.bases[r]
        return {self.gp.offsets[r] + basis.keys.index(key): ONE}

    def project(self, b: int) -> dict:
        k = self._plus_to_end.get(b)
        return {} if k is None else {k: ONE}

    def lift(self, c: int) -> dict:
        return {self._end_to_plus[c]: ONE}

    def report(self, morphisms: bool = True) -> dict:
        rep = short_exact_sequence(self.fiber, self.total, self.base, self.include, self.project, self.lift)
        if morphisms:
            bad = check_strict_morphism(self.include, self.fiber, self.total)
            bad += check_strict_morphism(self.project, self.total, self.base)
            rep["morphism_problems"] = bad[:10]
            if bad:
                rep["ok"] = False
                rep["problems"].append("maps are not strict morphisms")
        return rep


def fiber_sequence(C: Cooperad, X: ChainComplex, psi=None, cap: int | None = None) -> FiberSequence:
    return FiberSequence(C, X, psi, cap)


def algebra_fiber_sequence(alg, cap: int = 4) -> FiberSequence:
    """Fiber sequence at the structure element of an algebra of kind ass/com/lie/pois1."""
    names = {"ass": "Ass", "com": "Com", "lie": "Lie", "pois1": "Pois1"}
    C = koszul_dual_cooperad(names[alg.kind], cap)
    g = ConvolutionAlgebra(C, alg.X, cap=cap)
    return FiberSequence(C, alg.X, structure_element(g, alg), cap=cap)


def di_convolution_is_end(X: ChainComplex, cap: int = 2) -> dict:
    """Compare the Di convolution algebra (trivial structure) with ``End(X)``.

    The isomorphism sends ``e (x) (e_j -> e_i)`` to the elementary map
    ``e_j -> e_i``; differentials and brackets are compared on all basis
    vectors and pairs.
    """
    from .defcomplexes import oracle_compare

    g = ConvolutionAlgebra(koszul_dual_cooperad("Di", cap), X, cap=1)
    E = end_lie_algebra(X)
    _, pairs = hom_space(X.space, X.space)
    index = {pq: k for k, pq in enumerate(pairs)}
    phi = []
    for r, j in g.elements:
        q, e = g.H.unpack(1, g.bases[1].keys[j])
        J, k = g.E.basis(1)[e]
        phi.append((index[(k, J[0])], 1))
    rep = oracle_compare(g, E, phi)
    rep["dims"] = [g.dim, E.dim]
    return rep


def di_delta_from_mc(g: ConvolutionAlgebra, tau: Mapping[int, Fraction]) -> SparseMatrix:
    """The operator ``delta = -tau`` of the Di-algebra encoded by an MC element."""
    n = g.X.space.dim()
    entries = []
    for i, c in tau.items():
        r, v = g.h_vector(i)
        for key, a in v.items():
            q, e = g.H.unpack(1, key)
            J, k = g.E.basis(1)[e]
            if a == 1:
                entries.append((k, J[0], -c))
    return SparseMatrix.from_entries(n, n, entries)
