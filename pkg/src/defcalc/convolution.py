"""Convolution L-infinity algebras ``Hom_Sigma(C, End_X)``.

With ``Q`` the operad dual to the cooperad ``C``, maps ``C(r) -> End_X(r)``
are elements of ``Q(r) (x) End_X(r)`` and equivariant maps are the invariants
of the arity-wise tensor product operad ``H = Q (x)_H End_X`` under the
diagonal action.  On invariants the pre-Lie product is

    F * G = sum over s-subsets S of {0..n-1} of (F o_0 G) . sigma_S

(the orbit sum of ``F o_0 G`` over shuffles), the bracket is its graded
commutator and ``l_1`` is the differential of ``H``.  The arity-r part has
weight ``r - 1``; in the plus version arity one (including the unit of Q)
is added in weight 0.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .graded import ChainComplex
from .linalg import SparseMatrix, kernel_basis, vec_add
from .linfty import LInftyAlgebra
from .operads import Cooperad, EndOperad, HadamardOperad, SizeError, default_size_budget

ONE = Fraction(1)


def _generators(r: int):
    if r < 2:
        return []
    swap = tuple([1, 0] + list(range(2, r)))
    cycle = tuple(list(range(1, r)) + [0])
    return [swap] if r == 2 else [swap, cycle]


def shuffle_permutations(n: int, s: int):
    """``sigma_S`` listing S (sorted) then its complement, for every s-subset S."""
    for S in itertools.combinations(range(n), s):
        rest = [p for p in range(n) if p not in S]
        yield tuple(list(S) + rest)


class InvariantBasis:
    """Basis of the Sigma_r-invariants of an arity component of an operad."""

    def __init__(self, H, r: int, allowed: list[int] | None = None, budget: int | None = None):
        self.r = r
        dim = H.dim(r)
        budget = default_size_budget() if budget is None else budget
        if dim > budget:
            raise SizeError(f"arity {r} component has dimension {dim}, above the budget {budget}")
        self.vectors: list[dict] = []
        self.keys: list[int] = []   # coordinate of basis vector j = value at keys[j]
        gens = _generators(r)
        if allowed is not None:
            for a in allowed:
                self.vectors.append({a: ONE})
                self.keys.append(a)
            return
        if self._monomial(H, r, gens, dim):
            self._orbits(H, r, gens, dim)
        else:
            self._kernel(H, r, gens, dim)

    @staticmethod
    def _monomial(H, r, gens, dim):
        for a in range(dim):
            for g in gens:
                v = H.act(r, a, g)
                if len(v) != 1 or abs(next(iter(v.values()))) != 1:
                    return False
        return True

    def _orbits(self, H, r, gens, dim):
        seen = set()
        for a in range(dim):
            if a in seen:
                continue
            signs = {a: 1}
            queue = [a]
            consistent = True
            while queue:
                x = queue.pop()
                for g in gens:
                    (y, c), = H.act(r, x, g).items()
                    s = signs[x] * int(c)
                    if y in signs:
                        if signs[y] != s:
                            consistent = False
                    else:
                        signs[y] = s
                        queue.append(y)
            seen.update(signs)
            if consistent:
                self.vectors.append({y: Fraction(s) for y, s in signs.items()})
                self.keys.append(a)

    def _kernel(self, H, r, gens, dim):
        # the action graph splits into components; solve each one separately
        images = [[H.act(r, a, g) for g in gens] for a in range(dim)]
        parent = list(range(dim))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in range(dim):
            for img in images[a]:
                for b in img:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[ra] = rb
        comps: dict[int, list[int]] = {}
        for a in range(dim):
            comps.setdefault(find(a), []).append(a)
        for members in comps.values():
            local = {a: i for i, a in enumerate(members)}
            n = len(members)
            entries = []
            for k in range(len(gens)):
                for a in members:
                    for b, c in images[a][k].items():
                        entries.append((k * n + local[b], local[a], c))
                    entries.append((k * n + local[a], local[a], -ONE))
            basis = kernel_basis(SparseMatrix.from_entries(len(gens) * n, n, entries))
            for v in basis:
                # free column of the kernel basis: the unique vector with a 1 there
                key = min(i for i, c in v.items() if c == 1 and all(i not in w for w in basis if w is not v))
                self.vectors.append({members[i]: c for i, c in v.items()})
                self.keys.append(members[key])

    def __len__(self):
        return len(self.vectors)

    def coordinates(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out = {}
        for j, key in enumerate(self.keys):
            c = vec.get(key)
            if c:
                out[j] = c
        return out

    def is_invariant(self, H, vec: Mapping[int, Fraction]) -> bool:
        recon: dict = {}
        for j, c in self.coordinates(vec).items():
            vec_add(recon, self.vectors[j], c)
        return recon == {k: v for k, v in vec.items() if v}


class ConvolutionAlgebra(LInftyAlgebra):
    """The convolution dg Lie algebra of a cooperad ``C`` and a complex ``X``."""

    def __init__(self, C: Cooperad, X: ChainComplex, cap: int | None = None, plus: bool = False,
                 budget: int | None = None, name: str | None = None):
        Q = C.dual_operad()
        N = Q.cap if cap is None else min(cap, Q.cap)
        self.C, self.Q, self.X, self.N, self.plus = C, Q, X, N, plus
        self.E = EndOperad(X.space.flat_degrees(), X.differential, cap=N, budget=budget,
                           labels=X.space.flat_labels())
        self.H = HadamardOperad(Q, self.E, cap=N)
        self.bases: dict[int, InvariantBasis] = {}
        self.elements: list[tuple[int, int]] = []   # flat index -> (arity, index in basis)
        self.offsets: dict[int, int] = {}
        degrees, weights, labels = [], [], []
        for r in range(1, N + 1):
            if r == 1:
                unit = Q.unit
                qs = [a for a in range(Q.dim(1)) if plus or a != unit]
                allowed = [self.H.pack(1, a, b) for a in qs for b in range(self.E.dim(1))]
                basis = InvariantBasis(self.H, 1, allowed=allowed, budget=budget)
            else:
                basis = InvariantBasis(self.H, r, budget=budget)
            self.bases[r] = basis
            self.offsets[r] = len(self.elements)
            for j, v in enumerate(basis.vectors):
                key = basis.keys[j]
                self.elements.append((r, j))
                degrees.append(self.H.degree(r, key))
                weights.append(r - 1)
                labels.append(f"w{r - 1}:{self.H.label(r, key)}")
        super().__init__(degrees, weights, labels, bracket_cap=2,
                         name=name or f"conv({C.name},X){'+' if plus else ''}")

    # conversion between flat coordinates and H vectors
    def h_vector(self, i: int) -> tuple[int, dict]:
        r, j = self.elements[i]
        return r, self.bases[r].vectors[j]

    def to_h(self, vec: Mapping[int, Fraction]) -> dict[int, dict]:
        out: dict[int, dict] = {}
        for i, c in vec.items():
            r, v = self.h_vector(i)
            vec_add(out.setdefault(r, {}), v, c)
        return {r: v for r, v in out.items() if v}

    def from_h(self, r: int, hvec: Mapping[int, Fraction], check: bool = False) -> dict:
        if r not in self.bases:
            return {}
        basis = self.bases[r]
        if check and not basis.is_invariant(self.H, hvec):
            raise ValueError(f"vector in arity {r} is not Sigma-invariant")
        off = self.offsets[r]
        return {off + j: c for j, c in basis.coordinates(hvec).items()}

    def pre_lie_h(self, r: int, F: dict, s: int, G: dict) -> dict:
        n = r + s - 1
        if n > self.N:
            return {}
        comp = self.H.compose_vec(r, F, s, G, 0)
        if not comp:
            return {}
        out: dict = {}
        for sigma in shuffle_permutations(n, s):
            vec_add(out, self.H.act_vec(n, comp, sigma))
        return out

    def _sorted_bracket(self, k, tup):
        if k == 1:
            r, v = self.h_vector(tup[0])
            return self.from_h(r, self.H.differential_vec(r, v))
        if k == 2:
            a, b = tup
            r, F = self.h_vector(a)
            s, G = self.h_vector(b)
            n = r + s - 1
            if n > self.N:
                return {}
            out = dict(self.pre_lie_h(r, F, s, G))
            sign = -1 if (self.degrees[a] * self.degrees[b]) % 2 else 1
            vec_add(out, self.pre_lie_h(s, G, r, F), -sign)
            return self.from_h(n, out)
        return {}

    def pre_lie(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict:
        out: dict = {}
        hx, hy = self.to_h(x), self.to_h(y)
        for r, F in hx.items():
            for s, G in hy.items():
                n = r + s - 1
                if n <= self.N:
                    vec_add(out, self.from_h(n, self.pre_lie_h(r, F, s, G)))
        return out


def convolution_algebra(C: Cooperad, X: ChainComplex, cap: int | None = None, budget: int | None = None):
    return ConvolutionAlgebra(C, X, cap=cap, plus=False, budget=budget)


def plus_convolution_algebra(C: Cooperad, X: ChainComplex, cap: int | None = None, budget: int | None = None):
    return ConvolutionAlgebra(C, X, cap=cap, plus=True, budget=budget)


def _binary_end_vector(E: EndOperad, table: Mapping[tuple, Mapping[int, Fraction]]) -> dict:
    out: dict = {}
    for (i, j), v in table.items():
        for k, c in v.items():
            vec_add(out, {E.index(2, (i, j), k): Fraction(c)})
    return out


def structure_element(g: ConvolutionAlgebra, alg) -> dict:
    """The degree-1 element of ``g`` encoding the structure maps of ``alg``.

    The Sigma_2-equivariant map out of ``C(2)`` sends the dual generators to
    the product and/or bracket; for Di-algebras the unary map sends the
    generator to ``-delta``.  Raises ``ValueError`` when the kind does not
    match the cooperad or the element is not invariant.
    """
    kind = g.C.name.split("^")[0].lower()
    if kind != alg.kind and not (kind == "di" and alg.kind == "di"):
        raise ValueError(f"algebra of kind {alg.kind} does not fit the cooperad {g.C.name}")
    H, E, Q = g.H, g.E, g.Q
    if kind == "di":
        if alg.delta is None:
            raise ValueError("Di-algebra without delta")
        hv = {}
        for r, c, v in alg.delta.entries():
            vec_add(hv, {H.pack(1, 1, E.index(1, (c,), r)): -v})
        return g.from_h(1, hv, check=True)
    m = _binary_end_vector(E, alg.product)
    b = _binary_end_vector(E, alg.bracket)
    hv: dict = {}

    def put(q, evec, scale=ONE):
        for e, c in evec.items():
            vec_add(hv, {H.pack(2, q, e): scale * c})

    if kind == "ass":
        put(0, m)
        put(1, E.act_vec(2, m, (1, 0)), -ONE)
    elif kind == "com":
        put(0, m)
    elif kind == "lie":
        put(0, b)
    elif kind == "pois1":
        put(0, b)
        put(1, m)
    else:
        raise ValueError(f"no structure element for kind {alg.kind}")
    if Q.dim(2) and not hv and (m or b):
        raise ValueError("structure maps vanish in the convolution algebra")
    return g.from_h(2, hv, check=True)
