"""Directly coded deformation complexes: Hochschild (with the Gerstenhaber
bracket), Gerstenhaber-Schack, and the Poisson complexes, together with the
cross-checks against the convolution algebras."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

from .algebras import Algebra, InputError, verify
from .graded import cohomology_from_blocks, differential_blocks
from .linalg import SparseMatrix, vec_add
from .operads import EndOperad, SizeError, default_size_budget

ONE = Fraction(1)

HOCHSCHILD_BOUNDS = {"full": 0, "ge1": 1, "ge2": 2}


class StructureError(ValueError):
    """The input algebra fails its defining relations."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


def _require(alg: Algebra, kinds):
    if alg.kind not in kinds:
        raise InputError(f"expected an algebra of kind {'/'.join(kinds)}, got {alg.kind}")
    bad = verify(alg)
    if bad:
        first = bad[0]
        raise StructureError(f"{first['relation']} fails on {tuple(first['basis'])}", bad)


def _sgn(x: int) -> int:
    return -1 if x % 2 else 1


class _Cochains:
    """Basis ``(m, J, k)`` of ``prod_m Hom(A^{(x) m}, A)`` for ``lo <= m <= W``.

    ``J`` is a tuple of basis indices of A (the inputs) and ``k`` the output;
    the flat index runs through ``m`` and then ``J`` and ``k`` lexicographically.
    """

    def __init__(self, degrees: list[int], lo: int, W: int, budget: int | None):
        self.xdeg = degrees
        self.n = n = len(degrees)
        self.lo, self.W = lo, W
        budget = default_size_budget() if budget is None else budget
        total = sum(n ** (m + 1) for m in range(lo, W + 1))
        if total > budget:
            raise SizeError(f"cochains up to weight {W} on a {n}-dimensional algebra have dimension "
                            f"{total}, above the budget {budget}")
        self.offsets = {}
        pos = 0
        for m in range(lo, W + 1):
            self.offsets[m] = pos
            pos += n ** (m + 1)
        self.dim = pos

    def index(self, m: int, J: tuple, k: int) -> int:
        code = 0
        for j in J:
            code = code * self.n + j
        return self.offsets[m] + code * self.n + k

    def basis(self):
        for m in range(self.lo, self.W + 1):
            for J in itertools.product(range(self.n), repeat=m):
                for k in range(self.n):
                    yield m, J, k

    def internal_degree(self, J, k) -> int:
        return self.xdeg[k] - sum(self.xdeg[j] for j in J)


class HochschildComplex:
    """``Hom(A^{(x) m}, A)`` for ``m`` from the variant bound up to ``W``.

    The differential is the bar differential of the product plus the
    internal differential of A:

        (delta f)(a_1..a_{m+1}) = (-1)^{|a_1||f|} a_1 f(a_2..) + sum_i (-1)^i f(.., a_i a_{i+1}, ..)
                                   + (-1)^{m+1} f(a_1..a_m) a_{m+1}
        D f = d f - (-1)^{|f|} sum_i f(.., d a_i, ..) + (-1)^{|f|} delta f

    with ``|f|`` the internal degree.  ``degrees`` is the Hochschild grading
    ``m + |f|``; ``shifted_degrees`` is ``m - 1 + |f|``, the grading of the
    Lie algebra ``Hom(A^{(x) *}, A)[1]``.  Components of weight ``W`` have
    their differential truncated, so cohomology is reliable in Hochschild
    degrees below ``W`` (plus the internal degrees of A).
    """

    def __init__(self, A: Algebra, variant: str = "full", W: int = 4, budget: int | None = None,
                 check: bool = True):
        if variant not in HOCHSCHILD_BOUNDS:
            raise ValueError(f"unknown Hochschild variant {variant!r}")
        if check:
            _require(A, ("ass", "com", "pois1", "bialg"))
        self.A, self.variant, self.W = A, variant, W
        self.lo = HOCHSCHILD_BOUNDS[variant]
        self.cochains = C = _Cochains(A.degrees, self.lo, W, budget)
        self.labels, self.degrees, self.weights, self.arity = [], [], [], []
        names = A.labels
        for m, J, k in C.basis():
            self.labels.append(f"{''.join(names[j] for j in J) or '1'}->{names[k]}")
            self.degrees.append(m + C.internal_degree(J, k))
            self.arity.append(m)
        self.shifted_degrees = [d - 1 for d in self.degrees]
        self._pre = self._inverse_product()
        self._D = None

    @property
    def dim(self) -> int:
        return self.cochains.dim

    def _inverse_product(self):
        pre: dict[int, list] = {}
        for (x, y), v in self.A.product.items():
            for t, c in v.items():
                pre.setdefault(t, []).append((x, y, c))
        return pre

    def bar_differential(self, m: int, J: tuple, k: int) -> dict:
        """Bar part ``delta f`` of a basis cochain (no internal differential)."""
        A, C = self.A, self.cochains
        if m + 1 > self.W:
            return {}
        deg = A.degrees
        fdeg = C.internal_degree(J, k)
        out: dict = {}
        for x in range(C.n):
            for t, c in A.product.get((x, k), {}).items():
                vec_add(out, {C.index(m + 1, (x,) + J, t): _sgn(deg[x] * fdeg) * c})
            for t, c in A.product.get((k, x), {}).items():
                vec_add(out, {C.index(m + 1, J + (x,), t): _sgn(m + 1) * c})
        for i in range(1, m + 1):
            for x, y, c in self._pre.get(J[i - 1], ()):
                vec_add(out, {C.index(m + 1, J[:i - 1] + (x, y) + J[i:], k): _sgn(i) * c})
        return out

    def internal_differential(self, m: int, J: tuple, k: int) -> dict:
        A, C = self.A, self.cochains
        D = A.X.differential
        if D.is_zero():
            return {}
        deg = A.degrees
        fdeg = C.internal_degree(J, k)
        out: dict = {}
        for t, c in D.column(k).items():
            vec_add(out, {C.index(m, J, t): c})
        rows = self._drows()
        for p in range(m):
            pre = sum(deg[j] for j in J[:p])
            for x, c in rows.get(J[p], {}).items():
                vec_add(out, {C.index(m, J[:p] + (x,) + J[p + 1:], k): -_sgn(fdeg) * _sgn(pre) * c})
        return out

    def _drows(self):
        if not hasattr(self, "_rows"):
            rows: dict = {}
            for r, c, v in self.A.X.differential.entries():
                rows.setdefault(r, {})[c] = v
            self._rows = rows
        return self._rows

    def differential_vec(self, m: int, J: tuple, k: int) -> dict:
        out = self.internal_differential(m, J, k)
        vec_add(out, self.bar_differential(m, J, k), _sgn(self.cochains.internal_degree(J, k)))
        return out

    def differential(self) -> SparseMatrix:
        if self._D is None:
            cols = [self.differential_vec(m, J, k) for m, J, k in self.cochains.basis()]
            self._D = SparseMatrix.from_columns(self.dim, cols)
        return self._D

    def blocks(self, shifted: bool = False):
        degrees = self.shifted_degrees if shifted else self.degrees
        return differential_blocks(degrees, self.differential())

    def dims(self, shifted: bool = False) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in (self.shifted_degrees if shifted else self.degrees):
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def cohomology(self, shifted: bool = False) -> dict[int, int]:
        return cohomology_from_blocks(self.dims(shifted), self.blocks(shifted))

    def stable_degree(self) -> int:
        """Largest Hochschild degree whose cohomology is unaffected by the weight cap."""
        return self.W - 1 + min(self.A.degrees) - max(self.A.degrees)

    def element(self, m: int, table: Mapping[tuple, Mapping[int, Fraction]]) -> dict:
        """Cochain of arity ``m`` from a table ``{J: {k: c}}``."""
        return {self.cochains.index(m, tuple(J), k): Fraction(c) for J, v in table.items() for k, c in v.items()
                if c}

    def product_cochain(self) -> dict:
        return self.element(2, self.A.product)

    def bracket(self, f: Mapping[int, Fraction], g: Mapping[int, Fraction]) -> dict:
        return gerstenhaber_bracket(self, f, g, truncate=True)


def hochschild_complex(A: Algebra, variant: str = "full", W: int = 4, budget: int | None = None) -> HochschildComplex:
    return HochschildComplex(A, variant, W, budget)


# ---------------------------------------------------------------------------
# Gerstenhaber bracket through the suspension A[1]

def suspension_sign(degrees: list[int], J: tuple) -> int:
    """Sign relating ``f`` and ``s f (s^{-1})^{(x) m}`` on the basis map ``J -> k``."""
    m = len(J)
    return _sgn(sum((m - 1 - p) * (degrees[j] - 1) for p, j in enumerate(J)))


class _Suspended:
    def __init__(self, H: HochschildComplex):
        self.H = H
        self.E = EndOperad([d - 1 for d in H.A.degrees], cap=H.W, budget=10 ** 12)

    def split(self, f: Mapping[int, Fraction]) -> dict[int, dict]:
        """Cochain -> {arity: End_{A[1]} vector}."""
        H, deg = self.H, self.H.A.degrees
        out: dict[int, dict] = {}
        basis = list(H.cochains.basis()) if not hasattr(H, "_basis_list") else H._basis_list
        H._basis_list = basis
        for i, c in f.items():
            m, J, k = basis[i]
            vec_add(out.setdefault(m, {}), {self.E.index(m, J, k): c * suspension_sign(deg, J)})
        return out

    def join(self, m: int, vec: Mapping[int, Fraction]) -> dict:
        H, deg = self.H, self.H.A.degrees
        out: dict = {}
        for e, c in vec.items():
            J, k = self.E.basis(m)[e]
            out[H.cochains.index(m, J, k)] = c * suspension_sign(deg, J)
        return out


def gerstenhaber_bracket(H: HochschildComplex, f: Mapping[int, Fraction], g: Mapping[int, Fraction],
                         truncate: bool = False) -> dict:
    """``[f, g] = f o g - (-1)^{|f||g|} g o f`` with ``f o g = sum_i f o_i g``
    computed in ``End_{A[1]}`` (shifted degrees ``|f|``)."""
    if not hasattr(H, "_susp"):
        H._susp = _Suspended(H)
    S = H._susp
    E = S.E
    fs, gs = S.split(f), S.split(g)
    out: dict = {}

    def circle(xs, ys, scale):
        for r, F in xs.items():
            for s, G in ys.items():
                t = r + s - 1
                if t > H.W or t < H.lo:
                    if not truncate and t > H.W:
                        raise SizeError(f"bracket lands in weight {t} above the cap {H.W}")
                    continue
                acc: dict = {}
                for i in range(r):
                    for a, u in F.items():
                        for b, w in G.items():
                            for e, v in E.compose(r, a, s, b, i).items():
                                vec_add(acc, {e: u * w * v})
                vec_add(out, S.join(t, acc), scale)

    def sdeg(vecs):
        degs = {E.degree(r, e) for r, v in vecs.items() for e in v}
        if len(degs) > 1:
            raise ValueError("bracket arguments must be homogeneous")
        return degs.pop() if degs else 0

    circle(fs, gs, ONE)
    circle(gs, fs, -_sgn(sdeg(fs) * sdeg(gs)))
    return out


# ---------------------------------------------------------------------------
# L-infinity views and the comparison harness

def hochschild_linfty(H: HochschildComplex):
    """``(C, D, [-, -])`` as a dg Lie algebra in the shifted grading."""
    from .linfty import FunctionLInfty

    cols = H.differential().columns()

    def fn(k, tup):
        if k == 1:
            return dict(cols[tup[0]])
        if k == 2:
            return H.bracket({tup[0]: ONE}, {tup[1]: ONE})
        return {}

    weights = [max(m - 1, 0) for m in H.arity]
    return FunctionLInfty(H.shifted_degrees, weights, H.labels, fn, bracket_cap=2,
                          name=f"C^(>={H.lo})({H.A.name})")


def convolution_base_change(H: HochschildComplex, g) -> list[tuple[int, int]]:
    """Image of each Hochschild basis cochain in the convolution algebra over
    coAss{1}: the invariant with key ``x_0..x_{m-1} (x) f`` and sign
    ``-(-1)^{m(m+1)/2 + (m+1)|f|}`` (``|f|`` the internal degree); the product
    goes to the structure element."""
    out = []
    HH = g.H
    for m, J, k in H.cochains.basis():
        if m not in g.bases:
            raise ValueError(f"arity {m} is missing from the convolution algebra")
        key = HH.pack(m, 0, g.E.index(m, J, k))
        basis = g.bases[m]
        if not hasattr(basis, "_key_index"):
            basis._key_index = {x: j for j, x in enumerate(basis.keys)}
        j = basis._key_index[key]
        f = H.cochains.internal_degree(J, k)
        out.append((g.offsets[m] + j, -_sgn(m * (m + 1) // 2 + (m + 1) * f)))
    return out


def oracle_compare(g1, g2, phi: list[tuple[int, int]], max_k: int = 2, brackets: tuple = (1, 2),
                   max_mismatches: int = 20) -> dict:
    """Compare two L-infinity algebras through a signed bijection of bases.

    ``phi[i] = (j, s)`` sends basis vector ``i`` of ``g1`` to ``s`` times basis
    vector ``j`` of ``g2``.  Degrees and the brackets ``l_k`` for ``k`` in
    ``brackets`` are compared on all sorted basis tuples.
    """
    mismatches = []
    checked = 0
    targets = [j for j, _ in phi]
    if len(phi) != g1.dim or sorted(targets) != list(range(g2.dim)):
        return {"match": False, "checked": 0, "mismatch_count": 1,
                "mismatches": [{"kind": "basis", "detail": f"dimensions {g1.dim} and {g2.dim} or map not bijective"}]}

    def push(v):
        out = {}
        for i, c in v.items():
            j, s = phi[i]
            out[j] = s * c
        return out

    def record(kind, basis, lhs, rhs):
        if len(mismatches) < max_mismatches:
            mismatches.append({"kind": kind, "basis": [g1.labels[i] for i in basis],
                               "expected": {g2.labels[j]: str(c) for j, c in sorted(lhs.items())},
                               "found": {g2.labels[j]: str(c) for j, c in sorted(rhs.items())}})

    n_bad = 0
    for i, (j, _) in enumerate(phi):
        checked += 1
        if g1.degrees[i] != g2.degrees[j]:
            n_bad += 1
            record("degree", (i,), {}, {})
    for k in brackets:
        if k > max_k:
            continue
        for tup in g1.sorted_tuples(k):
            checked += 1
            lhs = push(g1.sorted_bracket(k, tup))
            rhs = g2.bracket(*[{phi[i][0]: Fraction(phi[i][1])} for i in tup])
            if lhs != rhs:
                n_bad += 1
                record(f"l{k}", tup, lhs, rhs)
    return {"match": n_bad == 0, "checked": checked, "mismatch_count": n_bad, "mismatches": mismatches}


def hochschild_semidirect(A: Algebra, W: int = 4, budget: int | None = None):
    """``End(A) |x C^(>=2)(A, A)`` with the action by the Gerstenhaber bracket.

    Returns ``(semidirect, ge1_linfty, phi)`` where ``phi`` maps the basis of
    the semidirect product to the basis of the ``>= 1`` complex.  The part of
    ``D x`` landing in weight >= 2 (that is ``[mu, x]``) enters as the mixed
    ``l_1`` term.
    """
    from .linfty import end_lie_algebra, semidirect_product
    from .graded import hom_space

    H1 = HochschildComplex(A, "ge1", W, budget)
    H2 = HochschildComplex(A, "ge2", W, budget)
    g1 = hochschild_linfty(H1)
    h = hochschild_linfty(H2)
    E = end_lie_algebra(A.X)
    _, pairs = hom_space(A.X.space, A.X.space)
    n = A.dim
    shift = n * n   # number of arity-one cochains

    def up_end(x):
        i, j = pairs[x]
        return H1.cochains.index(1, (j,), i)

    def restrict(v):
        out = {}
        for t, c in v.items():
            if t >= shift:
                out[t - shift] = c
            elif c:
                raise AssertionError("bracket left the weight >= 2 part")
        return out

    def action(x, a):
        return restrict(H1.bracket({up_end(x): ONE}, {a + shift: ONE}))

    def l1_extra(x):
        col = H1.differential().column(up_end(x))
        return {t - shift: c for t, c in col.items() if t >= shift}

    sd = semidirect_product(E, h, action, verify=False, l1_extra=l1_extra)
    phi = [(up_end(x), 1) for x in range(E.dim)] + [(a + shift, 1) for a in range(h.dim)]
    return sd, g1, phi


# ---------------------------------------------------------------------------
# Poisson complexes

POIS_VARIANTS = ("full", "gt0", "gt1")


class PoisComplex:
    """Deformation complexes of a Pois1-algebra in the convolution grading.

    ``gt0`` is the plus convolution algebra over the Koszul dual cooperad
    twisted by the structure, ``gt1`` the kernel of its projection onto
    ``Hom(A, A)`` (the ordinary convolution algebra) and ``full`` adds the
    unit part ``A`` (in degrees ``|a| - 1``) with differential
    ``a -> -d a + [a, -]``.  The full variant only carries ``l_1``.
    """

    def __init__(self, A: Algebra, n: int = 1, variant: str = "gt0", W: int = 4, budget: int | None = None):
        from .convolution import ConvolutionAlgebra, structure_element
        from .fibration import FiberSequence
        from .operads import koszul_dual_cooperad

        if n != 1:
            raise InputError("only n = 1 is supported")
        if variant not in POIS_VARIANTS:
            raise InputError(f"unknown Pois variant {variant!r}")
        _require(A, ("pois1",))
        self.A, self.variant, self.W = A, variant, W
        C = koszul_dual_cooperad("Pois1", W)
        g = ConvolutionAlgebra(C, A.X, cap=W, budget=budget)
        self.sequence = FiberSequence(C, A.X, structure_element(g, A), cap=W, budget=budget)
        if variant == "gt1":
            self.linfty = self.sequence.fiber
        elif variant == "gt0":
            self.linfty = self.sequence.total
        else:
            self.linfty = self._full()

    def unit_differential(self, i: int) -> dict:
        """``[a_i, -]`` as an element of the ``gt0`` complex."""
        A, seq = self.A, self.sequence
        out: dict = {}
        for j in range(A.dim):
            for k, c in A.br({i: ONE}, {j: ONE}).items():
                vec_add(out, seq.lift(seq._pair_index[(k, j)]), c)
        return out

    def _full(self):
        from .linfty import FunctionLInfty

        A, total = self.A, self.sequence.total
        n = A.dim

        def fn(k, tup):
            if k != 1:
                return {}
            i = tup[0]
            if i >= n:
                return {t + n: c for t, c in total.sorted_bracket(1, (i - n,)).items()}
            out = {t: -c for t, c in A.d({i: ONE}).items()}
            vec_add(out, {t + n: c for t, c in self.unit_differential(i).items()})
            return out

        degrees = [d - 1 for d in A.degrees] + list(total.degrees)
        weights = [0] * n + list(total.weights)
        labels = [f"unit:{lab}" for lab in A.labels] + list(total.labels)
        return FunctionLInfty(degrees, weights, labels, fn, bracket_cap=1, name=f"CH_Pois({A.name})")

    @property
    def dim(self) -> int:
        return self.linfty.dim

    def differential(self) -> SparseMatrix:
        return self.linfty.l1_matrix()

    def dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.linfty.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def stable_degree(self) -> int:
        """Largest degree whose cohomology is unaffected by the cap ``W``.

        Arity ``r`` sits in degree ``r - 1`` shifted by the algebra degrees,
        and the top arity lacks its outgoing differential.
        """
        return self.W - 2 + min(self.A.degrees) - max(self.A.degrees)

    def cohomology(self) -> dict[int, int]:
        return dict(sorted(self.linfty.cohomology().items()))

    def truncation_report(self) -> dict:
        """``gt1 -> gt0 -> Hom(A, A)``: degreewise exactness, strictness and the long exact sequence."""
        return self.sequence.report()


def pois_complex(A: Algebra, n: int = 1, variant: str = "gt0", W: int = 4, budget: int | None = None) -> PoisComplex:
    return PoisComplex(A, n, variant, W, budget)


# ---------------------------------------------------------------------------
# Gerstenhaber-Schack bicomplex

class GSComplex:
    """``prod_{1 <= m, n <= W} Hom(B^(x)m, B^(x)n)`` of a bialgebra ``B``.

    ``d_h`` is the Hochschild differential with coefficients in the bimodule
    ``B^(x)n`` (``B`` acting through the iterated coproduct), ``d_v`` the
    co-Hochschild differential with coefficients in the bicomodule ``B^(x)m``
    (coacting through the iterated product), twisted by ``(-1)^m`` so that the
    two anticommute.  The component ``(m, n)`` sits in total degree ``m + n``;
    ``max_degree`` optionally drops the components above a total degree.
    """

    def __init__(self, B: Algebra, W: int = 3, budget: int | None = None, max_degree: int | None = None):
        _require(B, ("bialg",))
        self.B, self.W = B, W
        self.max_degree = 2 * W if max_degree is None else max_degree
        b = B.dim
        self.offsets: dict[tuple, int] = {}
        self.labels: list[str] = []
        self.degrees: list[int] = []
        self.bidegrees: list[tuple] = []
        total = 0
        for m in range(1, W + 1):
            for n in range(1, W + 1):
                if m + n > self.max_degree:
                    continue
                self.offsets[(m, n)] = total
                total += b ** (m + n)
        budget = default_size_budget() if budget is None else budget
        if total > budget:
            raise SizeError(f"GS complex has dimension {total}, above the budget {budget}")
        self.dim = total
        for (m, n), off in self.offsets.items():
            for J in itertools.product(range(b), repeat=m):
                for K in itertools.product(range(b), repeat=n):
                    self.labels.append(f"{''.join(B.labels[j] for j in J)}->{''.join(B.labels[k] for k in K)}")
                    self.degrees.append(m + n)
                    self.bidegrees.append((m, n))
        self._factor = {}
        for x in range(b):
            for y in range(b):
                for z, c in B.mul({x: ONE}, {y: ONE}).items():
                    self._factor.setdefault(z, []).append((x, y, c))
        self._dh = self._dv = None
        self._coaction_index: dict[int, dict] = {}

    def index(self, J: tuple, K: tuple) -> int:
        b = self.B.dim
        code = 0
        for x in J + K:
            code = code * b + x
        return self.offsets[(len(J), len(K))] + code

    # tensor-power helpers on dicts keyed by tuples
    def _mul_tensors(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for s, a in u.items():
            for t, c in v.items():
                term = {(): a * c}
                for x, y in zip(s, t):
                    nxt: dict = {}
                    for pre, e in term.items():
                        for z, f in self.B.mul({x: ONE}, {y: ONE}).items():
                            vec_add(nxt, {pre + (z,): e * f})
                    term = nxt
                vec_add(out, term)
        return out

    def _coproduct_power(self, x: int, n: int) -> dict:
        """Iterated coproduct ``B -> B^(x)n``."""
        term = {(x,): ONE}
        for _ in range(n - 1):
            nxt: dict = {}
            for t, c in term.items():
                for (y, z), e in self.B.coproduct.get(t[-1], {}).items():
                    vec_add(nxt, {t[:-1] + (y, z): c * e})
            term = nxt
        return term

    def _coactions(self, I: tuple) -> tuple[dict, dict]:
        """Left and right coactions of ``B`` on ``B^(x)m`` at the basis tensor ``I``:
        ``{(z, rest): c}`` and ``{(rest, z): c}``."""
        split = {((), ()): ONE}
        for x in I:
            nxt: dict = {}
            for (xs, ys), c in split.items():
                for (y, z), e in self.B.coproduct.get(x, {}).items():
                    vec_add(nxt, {(xs + (y,), ys + (z,)): c * e})
            split = nxt
        left: dict = {}
        right: dict = {}
        for (xs, ys), c in split.items():
            for z, e in self._product(xs).items():
                vec_add(left, {(z, ys): c * e})
            for z, e in self._product(ys).items():
                vec_add(right, {(xs, z): c * e})
        return left, right

    def _product(self, xs: tuple) -> dict:
        out = {xs[0]: ONE}
        for x in xs[1:]:
            out = self.B.mul(out, {x: ONE})
        return out

    def _dh_column(self, J: tuple, K: tuple) -> dict:
        B, m, n = self.B, len(J), len(K)
        out: dict = {}
        if (m + 1, n) not in self.offsets:
            return out
        for a in range(B.dim):
            for outK, c in self._mul_tensors(self._coproduct_power(a, n), {K: ONE}).items():
                vec_add(out, {self.index((a,) + J, outK): c})
            for outK, c in self._mul_tensors({K: ONE}, self._coproduct_power(a, n)).items():
                vec_add(out, {self.index(J + (a,), outK): _sgn(m + 1) * c})
        for i in range(1, m + 1):
            for x, y, c in self._factor.get(J[i - 1], []):
                vec_add(out, {self.index(J[:i - 1] + (x, y) + J[i:], K): _sgn(i) * c})
        return out

    def _dv_column(self, J: tuple, K: tuple) -> dict:
        B, m, n = self.B, len(J), len(K)
        out: dict = {}
        if (m, n + 1) not in self.offsets:
            return out
        for I, z, left, c in self._coactions_onto(m).get(J, ()):
            if left:
                vec_add(out, {self.index(I, (z,) + K): c})
            else:
                vec_add(out, {self.index(I, K + (z,)): _sgn(n + 1) * c})
        for i in range(1, n + 1):
            for (y, z), c in B.coproduct.get(K[i - 1], {}).items():
                vec_add(out, {self.index(J, K[:i - 1] + (y, z) + K[i:]): _sgn(i) * c})
        return {k: _sgn(m) * c for k, c in out.items()}

    def _coactions_onto(self, m: int) -> dict:
        """``{rest: [(I, z, is_left, c)]}`` inverting the coactions on ``B^(x)m``."""
        if m not in self._coaction_index:
            index: dict = {}
            for I in itertools.product(range(self.B.dim), repeat=m):
                left, right = self._coactions(I)
                for (z, rest), c in left.items():
                    index.setdefault(rest, []).append((I, z, True, c))
                for (rest, z), c in right.items():
                    index.setdefault(rest, []).append((I, z, False, c))
            self._coaction_index[m] = index
        return self._coaction_index[m]

    def _basis(self):
        b = self.B.dim
        for m, n in self.offsets:
            for J in itertools.product(range(b), repeat=m):
                for K in itertools.product(range(b), repeat=n):
                    yield J, K

    def horizontal(self) -> SparseMatrix:
        if self._dh is None:
            self._dh = SparseMatrix.from_columns(self.dim, [self._dh_column(J, K) for J, K in self._basis()])
        return self._dh

    def vertical(self) -> SparseMatrix:
        """The sign-twisted vertical differential ``(-1)^m d_v``."""
        if self._dv is None:
            self._dv = SparseMatrix.from_columns(self.dim, [self._dv_column(J, K) for J, K in self._basis()])
        return self._dv

    def differential(self) -> SparseMatrix:
        return self.horizontal() + self.vertical()

    def check(self) -> dict:
        h, v = self.horizontal(), self.vertical()
        D = h + v
        return {"dh2": (h @ h).is_zero(), "dv2": (v @ v).is_zero(),
                "anticommute": (h @ v + v @ h).is_zero(), "d2": (D @ D).is_zero()}

    def dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def stable_degree(self) -> int:
        """Total degrees up to this value are unaffected by the caps."""
        return min(self.W, self.max_degree - 1)

    def cohomology(self) -> dict[int, int]:
        blocks = differential_blocks(self.degrees, self.differential())
        return dict(sorted(cohomology_from_blocks(self.dims(), blocks).items()))


def gs_complex(B: Algebra, W: int = 3, budget: int | None = None) -> GSComplex:
    return GSComplex(B, W, budget)


# ---------------------------------------------------------------------------
# Cross-checks against the convolution route

def hochschild_vs_convolution(A: Algebra, variant: str = "ge2", W: int = 4, budget: int | None = None) -> dict:
    """Compare the Hochschild complex with the twisted convolution algebra over coAss{1}.

    ``ge2`` is compared with ``g^psi`` and ``ge1`` with the plus algebra.
    """
    from .convolution import ConvolutionAlgebra, structure_element
    from .linfty import twist
    from .operads import koszul_dual_cooperad

    if variant not in ("ge1", "ge2"):
        raise InputError("the convolution comparison needs variant ge1 or ge2")
    H = HochschildComplex(A, variant, W, budget)
    g = ConvolutionAlgebra(koszul_dual_cooperad("Ass", W), A.X, cap=W, plus=variant == "ge1", budget=budget)
    gt = twist(g, structure_element(g, A))
    rep = oracle_compare(hochschild_linfty(H), gt, convolution_base_change(H, g))
    rep["dims"] = [H.dim, gt.dim]
    return rep


def semidirect_vs_hochschild(A: Algebra, W: int = 4, budget: int | None = None) -> dict:
    """Compare ``End(A) |x C^(>=2)`` with the ``>= 1`` Hochschild complex."""
    sd, g1, phi = hochschild_semidirect(A, W, budget)
    rep = oracle_compare(sd, g1, phi)
    rep["dims"] = [sd.dim, g1.dim]
    return rep
