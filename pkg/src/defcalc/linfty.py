"""L-infinity algebras given by bracket structure constants.

An algebra has a flat basis with a degree and a weight per basis vector.
``l_k`` is determined by its values on weakly increasing index tuples; values
on other tuples follow from graded antisymmetry

    l_k(.., x_i, x_{i+1}, ..) = -(-1)^{|x_i||x_{i+1}|} l_k(.., x_{i+1}, x_i, ..)

so that ``l_k(x_{p_0}, ..) = koszul_sign(p, antisymmetric=True) l_k(sorted)``.

Generalized Jacobi identities are checked in the form

    sum_{i=1}^{k} sum_{sigma in Sh(i, k-i)} (-1)^{i} chi(sigma)
        l_{k-i+1}(l_i(x_sigma(1), .., x_sigma(i)), x_sigma(i+1), .., x_sigma(k)) = 0

with ``chi`` the antisymmetric Koszul sign.  Maurer-Cartan elements and
twisting use ``sum 1/k! l_k(tau, .., tau)`` and
``l_k^tau(x) = sum_i 1/i! l_{k+i}(tau^i, x)`` verbatim.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .graded import ChainComplex, GradedSpace, cohomology_from_blocks, differential_blocks, koszul_sign
from .linalg import SparseMatrix, vec_add

ONE = Fraction(1)


def sort_with_sign(indices: Sequence[int], degrees: Sequence[int]) -> tuple[tuple, int]:
    """Sorted tuple and the antisymmetric Koszul sign relating it to ``indices``."""
    perm = sorted(range(len(indices)), key=lambda p: indices[p])
    sign = koszul_sign(perm, [degrees[i] for i in indices], antisymmetric=True)
    return tuple(indices[p] for p in perm), sign


class LInftyAlgebra:
    """Base class; subclasses implement ``_sorted_bracket``."""

    def __init__(self, degrees: Sequence[int], weights: Sequence[int] | None = None,
                 labels: Sequence[str] | None = None, bracket_cap: int = 4, name: str = "g"):
        self.degrees = list(degrees)
        self.weights = list(weights) if weights is not None else [0] * len(self.degrees)
        self.labels = list(labels) if labels is not None else [f"v{i}" for i in range(len(self.degrees))]
        self.bracket_cap = bracket_cap
        self.name = name
        self._cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def _sorted_bracket(self, k: int, tup: tuple) -> dict:
        raise NotImplementedError

    def sorted_bracket(self, k: int, tup: tuple) -> dict:
        key = (k, tup)
        val = self._cache.get(key)
        if val is None:
            if k > self.bracket_cap or any(
                    tup[p] == tup[p + 1] and self.degrees[tup[p]] % 2 == 0 for p in range(k - 1)):
                val = {}
            else:
                val = self._sorted_bracket(k, tup)
            self._cache[key] = val
        return val

    def bracket_basis(self, k: int, indices: Sequence[int]) -> dict:
        tup, sign = sort_with_sign(indices, self.degrees)
        val = self.sorted_bracket(k, tup)
        if sign == 1 or not val:
            return val
        return {i: -v for i, v in val.items()}

    def bracket(self, *vectors: Mapping[int, Fraction]) -> dict:
        """Multilinear extension of ``l_k`` with ``k = len(vectors)``."""
        k = len(vectors)
        out: dict = {}
        if k > self.bracket_cap:
            return out
        for combo in itertools.product(*(list(v.items()) for v in vectors)):
            coeff = ONE
            for _, c in combo:
                coeff *= c
            vec_add(out, self.bracket_basis(k, [i for i, _ in combo]), coeff)
        return out

    def power_bracket(self, k: int, tau: Mapping[int, Fraction], rest: Sequence[int] = ()) -> dict:
        """``l_{k+len(rest)}(tau, .., tau, x_rest)`` with ``k`` copies of ``tau``.

        Requires every component of ``tau`` to have odd degree, which makes the
        bracket symmetric in the ``tau`` slots and allows summing over multisets.
        """
        n = k + len(rest)
        out: dict = {}
        if n > self.bracket_cap or n == 0:
            return out
        items = sorted(tau.items())
        for combo in itertools.combinations_with_replacement(range(len(items)), k):
            coeff = Fraction(math.factorial(k))
            for j, m in _multiplicities(combo).items():
                coeff *= items[j][1] ** m / math.factorial(m)
            idx = [items[j][0] for j in combo] + list(rest)
            vec_add(out, self.bracket_basis(n, idx), coeff)
        return out

    def l1_matrix(self) -> SparseMatrix:
        cols = [self.sorted_bracket(1, (i,)) for i in range(self.dim)]
        return SparseMatrix.from_columns(self.dim, cols)

    def graded_space(self) -> GradedSpace:
        comps: dict[int, list[str]] = {}
        for d, lab in zip(self.degrees, self.labels):
            comps.setdefault(d, []).append(lab)
        return GradedSpace(comps)

    def cohomology(self) -> dict[int, int]:
        dims: dict[int, int] = {}
        for d in self.degrees:
            dims[d] = dims.get(d, 0) + 1
        blocks = differential_blocks(self.degrees, self.l1_matrix())
        return cohomology_from_blocks(dims, blocks)

    def degree_indices(self, d: int) -> list[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def vector_degree(self, v: Mapping[int, Fraction]) -> int | None:
        degs = {self.degrees[i] for i in v}
        if len(degs) > 1:
            raise ValueError(f"vector is not homogeneous: degrees {sorted(degs)}")
        return next(iter(degs)) if degs else None

    def table(self, max_k: int | None = None) -> "TableLInfty":
        """Materialize all bracket constants up to ``max_k``."""
        max_k = self.bracket_cap if max_k is None else max_k
        tables: dict = {}
        for k in range(1, max_k + 1):
            tk = {}
            for tup in self.sorted_tuples(k):
                v = self.sorted_bracket(k, tup)
                if v:
                    tk[tup] = dict(v)
            tables[k] = tk
        return TableLInfty(self.degrees, self.weights, self.labels, tables, max_k, self.name)

    def sorted_tuples(self, k: int, weight_cap: int | None = None) -> Iterable[tuple]:
        """Weakly increasing k-tuples, skipping repeats of even-degree vectors."""
        for tup in itertools.combinations_with_replacement(range(self.dim), k):
            if any(tup[p] == tup[p + 1] and self.degrees[tup[p]] % 2 == 0 for p in range(k - 1)):
                continue
            if weight_cap is not None and sum(self.weights[i] for i in tup) > weight_cap:
                continue
            yield tup

    def to_json(self) -> dict:
        from .linalg import fraction_str

        t = self.table()
        return {
            "basis": [{"label": l, "degree": d, "weight": w} for l, d, w in zip(self.labels, self.degrees, self.weights)],
            "brackets": {
                str(k): [[list(tup), [[i, fraction_str(c)] for i, c in sorted(v.items())]]
                         for tup, v in sorted(tk.items())]
                for k, tk in t.tables.items()
            },
        }


def _multiplicities(combo) -> dict:
    out: dict = {}
    for j in combo:
        out[j] = out.get(j, 0) + 1
    return out


class TableLInfty(LInftyAlgebra):
    def __init__(self, degrees, weights, labels, tables: Mapping[int, Mapping[tuple, Mapping[int, Fraction]]],
                 bracket_cap: int | None = None, name="g"):
        cap = bracket_cap if bracket_cap is not None else max(tables, default=1)
        super().__init__(degrees, weights, labels, cap, name)
        self.tables = {k: {tuple(t): dict(v) for t, v in tk.items()} for k, tk in tables.items()}
        for k, tk in self.tables.items():
            for tup, v in tk.items():
                if list(tup) != sorted(tup):
                    raise ValueError(f"bracket key {tup} is not sorted")
                if v and any(tup[p] == tup[p + 1] and self.degrees[tup[p]] % 2 == 0 for p in range(k - 1)):
                    raise ValueError(f"l_{k}{tup} repeats an even vector but is nonzero (antisymmetry)")
                for i in v:
                    expected = sum(self.degrees[j] for j in tup) + 2 - k
                    if self.degrees[i] != expected:
                        raise ValueError(f"l_{k}{tup} has a component of degree {self.degrees[i]}, "
                                         f"expected {expected}")

    def _sorted_bracket(self, k, tup):
        return self.tables.get(k, {}).get(tup, {})

    @classmethod
    def from_json(cls, obj) -> "TableLInfty":
        basis = obj["basis"]
        tables = {}
        for k, entries in obj.get("brackets", {}).items():
            tables[int(k)] = {tuple(tup): {int(i): Fraction(c) for i, c in vec} for tup, vec in entries}
        return cls([b["degree"] for b in basis], [b.get("weight", 0) for b in basis],
                   [b.get("label", f"v{i}") for i, b in enumerate(basis)], tables)


class FunctionLInfty(LInftyAlgebra):
    """Brackets supplied by a callable ``f(k, sorted_tuple) -> vector``."""

    def __init__(self, degrees, weights, labels, fn: Callable[[int, tuple], dict], bracket_cap=4, name="g"):
        super().__init__(degrees, weights, labels, bracket_cap, name)
        self.fn = fn

    def _sorted_bracket(self, k, tup):
        return self.fn(k, tup)


def dg_lie(degrees, differential: Callable[[int], dict] | None, bracket: Callable[[int, int], dict],
           weights=None, labels=None, name="g") -> FunctionLInfty:
    """L-infinity algebra with only ``l_1`` and ``l_2``."""

    def fn(k, tup):
        if k == 1:
            return differential(tup[0]) if differential else {}
        if k == 2:
            return bracket(*tup)
        return {}

    return FunctionLInfty(degrees, weights, labels, fn, bracket_cap=2, name=name)


# ---------------------------------------------------------------------------
# Jacobi identities

def _unshuffles(k: int, i: int):
    for first in itertools.combinations(range(k), i):
        rest = tuple(p for p in range(k) if p not in first)
        yield first + rest


def jacobi_sum(g: LInftyAlgebra, indices: Sequence[int]) -> dict:
    """Left-hand side of the k-th generalized Jacobi identity on basis vectors."""
    k = len(indices)
    degs = [g.degrees[j] for j in indices]
    out: dict = {}
    for i in range(1, k + 1):
        j = k - i + 1
        if i > g.bracket_cap or j > g.bracket_cap:
            continue
        for perm in _unshuffles(k, i):
            chi = koszul_sign(perm, degs, antisymmetric=True)
            sign = chi * (-1 if i % 2 else 1)
            inner = g.bracket_basis(i, [indices[p] for p in perm[:i]])
            if not inner:
                continue
            tail = [indices[p] for p in perm[i:]]
            for x, c in inner.items():
                vec_add(out, g.bracket_basis(j, [x] + tail), sign * c)
    return out


def check_linfty(g: LInftyAlgebra, max_k: int | None = None, weight_cap: int | None = None,
                 max_violations: int = 20, tuples: Iterable[tuple] | None = None) -> dict:
    """Report graded-antisymmetry, degree and Jacobi violations.

    Jacobi identities are checked on weakly increasing basis tuples for
    ``k <= max_k`` (default ``2 * bracket_cap - 1``, the largest k with a
    nonzero term).  ``weight_cap`` skips tuples whose total weight exceeds it.
    """
    if max_k is None:
        max_k = 2 * g.bracket_cap - 1
    violations: list[dict] = []
    checked = 0
    for k in range(1, g.bracket_cap + 1):
        for tup in g.sorted_tuples(k, weight_cap):
            expected = sum(g.degrees[i] for i in tup) + 2 - k
            if any(g.degrees[i] != expected for i in g.sorted_bracket(k, tup)):
                violations.append({"kind": "degree", "k": k, "basis": [g.labels[i] for i in tup]})
    source = tuples
    for k in range(1, max_k + 1):
        it = source if source is not None else g.sorted_tuples(k, weight_cap)
        for tup in it:
            if source is not None and len(tup) != k:
                continue
            checked += 1
            val = jacobi_sum(g, tup)
            if val:
                violations.append({"kind": "jacobi", "k": k, "basis": [g.labels[i] for i in tup],
                                   "defect": {g.labels[i]: str(c) for i, c in sorted(val.items())}})
                if len(violations) >= max_violations:
                    return {"valid": False, "checked": checked, "violations": violations}
    return {"valid": not violations, "checked": checked, "violations": violations}


# ---------------------------------------------------------------------------
# Maurer-Cartan elements and twisting

def _check_tau(g: LInftyAlgebra, tau: Mapping[int, Fraction]):
    for i in tau:
        if g.degrees[i] != 1:
            raise ValueError(f"tau has a component {g.labels[i]} of degree {g.degrees[i]}, expected 1")


def mc_defect(g: LInftyAlgebra, tau: Mapping[int, Fraction]) -> dict:
    """Curvature ``sum_k 1/k! l_k(tau, .., tau)``.

    Brackets above ``bracket_cap`` vanish, so the sum is finite.
    """
    tau = {i: Fraction(c) for i, c in tau.items() if c}
    _check_tau(g, tau)
    out: dict = {}
    for k in range(1, g.bracket_cap + 1):
        term = g.power_bracket(k, tau)
        vec_add(out, term, Fraction(1, math.factorial(k)))
    return out


class MCElement:
    """A degree-1 vector with its (zero) Maurer-Cartan defect as certificate."""

    def __init__(self, g: LInftyAlgebra, tau: Mapping[int, Fraction]):
        self.algebra = g
        self.element = {i: Fraction(c) for i, c in tau.items() if c}
        self.certificate = mc_defect(g, self.element)
        if self.certificate:
            raise ValueError("not a Maurer-Cartan element: nonzero defect "
                             + ", ".join(f"{g.labels[i]}:{c}" for i, c in sorted(self.certificate.items())[:5]))

    def certificate_hash(self) -> str:
        import hashlib

        payload = repr(sorted((i, str(c)) for i, c in self.element.items())).encode()
        return hashlib.sha256(payload).hexdigest()[:16]

    def to_json(self) -> dict:
        from .linalg import fraction_str

        return {"element": [[i, fraction_str(c)] for i, c in sorted(self.element.items())],
                "defect": [], "certificate": self.certificate_hash()}


class TwistedLInfty(LInftyAlgebra):
    """``l_k^tau(x) = sum_{i>=0} 1/i! l_{k+i}(tau^i, x)``."""

    def __init__(self, g: LInftyAlgebra, tau: Mapping[int, Fraction], check_mc: bool = True):
        super().__init__(g.degrees, g.weights, g.labels, g.bracket_cap, name=f"{g.name}^tau")
        self.base = g
        self.tau = {i: Fraction(c) for i, c in tau.items() if c}
        _check_tau(g, self.tau)
        if check_mc:
            defect = mc_defect(g, self.tau)
            if defect:
                raise ValueError("twisting element is not Maurer-Cartan")

    def _sorted_bracket(self, k, tup):
        out: dict = {}
        for i in range(0, self.base.bracket_cap - k + 1):
            if i == 0:
                vec_add(out, self.base.bracket_basis(k, list(tup)))
            elif self.tau:
                vec_add(out, self.base.power_bracket(i, self.tau, tup), Fraction(1, math.factorial(i)))
        return out


def twist(g: LInftyAlgebra, tau, check_mc: bool = True) -> TwistedLInfty:
    if isinstance(tau, MCElement):
        tau = tau.element
    return TwistedLInfty(g, tau, check_mc)


# ---------------------------------------------------------------------------
# Morphisms, sums, semidirect products

def check_strict_morphism(f: Callable[[int], dict], source: LInftyAlgebra, target: LInftyAlgebra,
                          max_k: int | None = None, weight_cap: int | None = None) -> list[str]:
    """Verify ``f(l_k(x)) = l_k(f x_1, .., f x_k)`` on basis tuples."""
    max_k = max(source.bracket_cap, target.bracket_cap) if max_k is None else max_k
    bad = []
    for k in range(1, max_k + 1):
        for tup in source.sorted_tuples(k, weight_cap):
            lhs: dict = {}
            for i, c in source.sorted_bracket(k, tup).items():
                vec_add(lhs, f(i), c)
            rhs = target.bracket(*[f(i) for i in tup])
            if lhs != rhs:
                bad.append(f"l_{k} not preserved on {[source.labels[i] for i in tup]}")
    return bad


class DirectSumLInfty(LInftyAlgebra):
    """``g (+) h`` with brackets of each summand plus optional mixed terms.

    ``mixed(k, tup)`` receives sorted tuples touching both summands (indices
    in the sum's numbering: g first, then h) and returns a vector.
    """

    def __init__(self, g: LInftyAlgebra, h: LInftyAlgebra, mixed=None, name="g+h", l1_extra=None):
        super().__init__(g.degrees + h.degrees, g.weights + h.weights,
                         [f"g:{l}" for l in g.labels] + [f"h:{l}" for l in h.labels],
                         max(g.bracket_cap, h.bracket_cap), name)
        self.g, self.h, self.mixed = g, h, mixed
        self.l1_extra = l1_extra
        self.n = g.dim

    def _sorted_bracket(self, k, tup):
        n = self.n
        if all(i < n for i in tup):
            out = dict(self.g.sorted_bracket(k, tup)) if k <= self.g.bracket_cap else {}
            if k == 1 and self.l1_extra is not None:
                vec_add(out, {i + n: c for i, c in self.l1_extra(tup[0]).items()})
            return out
        if all(i >= n for i in tup):
            v = self.h.sorted_bracket(k, tuple(i - n for i in tup)) if k <= self.h.bracket_cap else {}
            return {i + n: c for i, c in v.items()}
        return self.mixed(k, tup) if self.mixed else {}


def semidirect_product(g: LInftyAlgebra, h: LInftyAlgebra, action: Callable[[int, int], dict],
                       verify: bool = True, l1_extra: Callable[[int], dict] | None = None) -> DirectSumLInfty:
    """``g`` (a dg Lie algebra) acting on ``h`` by derivations.

    ``action(x, a)`` is the image of the basis vector ``a`` of ``h`` under the
    derivation attached to the basis vector ``x`` of ``g``.  The mixed bracket
    is ``l_2((x, 0), (0, a)) = action(x, a)``; all higher mixed brackets vanish.
    ``l1_extra(x)``, a vector of ``h``, is added to ``l_1(x)``: this is the
    case of an action that is a chain map only up to ``[l1_extra(x), -]``,
    e.g. the action of ``End(A)`` on the deformation complex of a structure
    twisted by an MC element.
    """
    if g.bracket_cap > 2:
        raise ValueError("the acting algebra must be a dg Lie algebra")
    n = g.dim

    def mixed(k, tup):
        if k != 2:
            return {}
        x, a = tup
        return {i + n: c for i, c in action(x, a - n).items()}

    if verify:
        bad = check_action(g, h, action, l1_extra)
        if bad:
            raise ValueError("action is not a morphism to derivations: " + "; ".join(bad[:3]))
    return DirectSumLInfty(g, h, mixed, name=f"{g.name}|x{h.name}", l1_extra=l1_extra)


def check_action(g: LInftyAlgebra, h: LInftyAlgebra, action: Callable[[int, int], dict],
                 l1_extra: Callable[[int], dict] | None = None) -> list[str]:
    """Leibniz rule for each ``action(x, -)`` and compatibility with ``l_1`` and ``l_2`` of g."""
    bad = []
    hd, gd = h.degrees, g.degrees

    def act(x, v):
        out: dict = {}
        for a, c in v.items():
            vec_add(out, action(x, a), c)
        return out

    for x in range(g.dim):
        for a in range(h.dim):
            v = action(x, a)
            for i in v:
                if hd[i] != gd[x] + hd[a]:
                    bad.append(f"action of {g.labels[x]} on {h.labels[a]} has wrong degree")
    # derivation of every bracket of h: rho(x) l_k(a..) = sum (+-) l_k(.., rho(x) a_j, ..)
    for x in range(g.dim):
        for k in range(1, h.bracket_cap + 1):
            for tup in h.sorted_tuples(k):
                lhs = act(x, h.sorted_bracket(k, tup))
                # l_1 of g enters through the k = 1 relation: [l1, rho(x)] = rho(l1 x)
                rhs: dict = {}
                pre = 0
                for j, a in enumerate(tup):
                    sign = -1 if (gd[x] * pre) % 2 else 1
                    args = [{b: ONE} for b in tup]
                    args[j] = action(x, a)
                    vec_add(rhs, h.bracket(*args), sign)
                    pre += hd[a]
                if k == 1:
                    # d_h rho(x) - (-1)^{|x|} rho(x) d_h = rho(l1 x)
                    a = tup[0]
                    lhs1 = h.bracket(action(x, a))
                    sign = -1 if gd[x] % 2 else 1
                    vec_add(lhs1, act(x, h.sorted_bracket(1, (a,))), -sign)
                    rho_dx: dict = {}
                    for y, c in g.sorted_bracket(1, (x,)).items():
                        vec_add(rho_dx, action(y, a), c)
                    if l1_extra is not None:
                        vec_add(rho_dx, h.bracket(l1_extra(x), {a: ONE}))
                    if lhs1 != rho_dx:
                        bad.append(f"action not a chain map at {g.labels[x]}, {h.labels[a]}")
                elif lhs != rhs:
                    bad.append(f"{g.labels[x]} is not a derivation of l_{k} on {[h.labels[a] for a in tup]}")
    # rho([x, y]) = [rho(x), rho(y)]
    for x in range(g.dim):
        for y in range(g.dim):
            for a in range(h.dim):
                lhs: dict = {}
                for z, c in g.bracket_basis(2, [x, y]).items():
                    vec_add(lhs, action(z, a), c)
                rhs = act(x, action(y, a))
                s = -1 if (gd[x] * gd[y]) % 2 else 1
                vec_add(rhs, act(y, action(x, a)), -s)
                if lhs != rhs:
                    bad.append(f"action does not preserve the bracket of {g.labels[x]}, {g.labels[y]}")
    return bad


def adjoint_action(g: LInftyAlgebra) -> Callable[[int, int], dict]:
    return lambda x, a: g.bracket_basis(2, [x, a])


# ---------------------------------------------------------------------------
# End(X) with the commutator bracket

def end_lie_algebra(X: ChainComplex) -> FunctionLInfty:
    """``Hom(X, X)`` with ``l_1 = [d, -]`` and the graded commutator."""
    from .graded import hom_complex, hom_space

    H = hom_complex(X, X)
    _, pairs = hom_space(X.space, X.space)
    index = {p: k for k, p in enumerate(pairs)}
    degs = H.space.flat_degrees()
    cols = H.differential.columns()

    def bracket(a, b):
        i, j = pairs[a]
        k, l = pairs[b]
        out: dict = {}
        if j == k:
            vec_add(out, {index[(i, l)]: ONE})
        if l == i:
            s = -1 if (degs[a] * degs[b]) % 2 else 1
            vec_add(out, {index[(k, j)]: Fraction(-s)})
        return out

    return dg_lie(degs, lambda a: cols[a], bracket, weights=[0] * len(degs),
                  labels=H.space.flat_labels(), name="End(X)")


def linfty_chain_complex(g: LInftyAlgebra) -> ChainComplex:
    """Underlying complex ``(g, l_1)`` with basis reordered by degree."""
    order = sorted(range(g.dim), key=lambda i: (g.degrees[i], i))
    pos = {i: p for p, i in enumerate(order)}
    entries = []
    for i in range(g.dim):
        for j, c in g.sorted_bracket(1, (i,)).items():
            entries.append((pos[j], pos[i], c))
    comps: dict[int, list[str]] = {}
    for i in order:
        comps.setdefault(g.degrees[i], []).append(g.labels[i])
    space = GradedSpace(comps)
    return ChainComplex(space, SparseMatrix.from_entries(g.dim, g.dim, entries))
