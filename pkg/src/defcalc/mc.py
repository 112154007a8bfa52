"""Maurer-Cartan sets over Artinian rings: enumeration, gauge action,
1-simplices of the Sullivan nerve, homotopy classes and formal deformations.

Equations are solved order by order in the filtration of the maximal ideal.
At order ``k`` the unknowns are the order-``k`` coordinates together with
closed corrections of the order ``k - 1`` part; both enter linearly.  Over a
ring whose ideal has two orders (such as ``K[t]/(t^3)``) this covers every
choice made at lower order, so a failing linear system certifies that no
solution exists.  Beyond that a failure is reported as inconclusive.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .artinian import ArtinianAlgebra, TensorLInfty, tensor_with_ideal, truncated_polynomial
from .forms import SullivanForms
from .linalg import LinearReducer, SparseMatrix, fraction_str, image_basis, kernel_basis, rank, solve, vec_add
from .linfty import LInftyAlgebra, mc_defect
from .operads import SizeError, default_size_budget

ONE = Fraction(1)


def _clean(v: Mapping) -> dict:
    return {k: Fraction(c) for k, c in v.items() if c}


def _sub(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    vec_add(out, b, -1)
    return out


def _plus(a: Mapping, b: Mapping, scale=ONE) -> dict:
    out = dict(a)
    vec_add(out, b, scale)
    return out


def _vec_json(v: Mapping) -> list:
    return [[i, fraction_str(c)] for i, c in sorted(v.items())]


class _System:
    """Sparse linear system with hashable row keys."""

    def __init__(self):
        self.rows: dict = {}
        self.columns: list[dict] = []

    def _row(self, key) -> int:
        return self.rows.setdefault(key, len(self.rows))

    def add_column(self, col: Mapping) -> None:
        self.columns.append({self._row(k): c for k, c in col.items() if c})

    def solve(self, rhs: Mapping) -> dict | None:
        b = {self._row(k): c for k, c in rhs.items() if c}
        return solve(self.matrix(), b)

    def matrix(self) -> SparseMatrix:
        return SparseMatrix.from_columns(len(self.rows), self.columns)

    def null_dim(self) -> int:
        return len(self.columns) - rank(self.matrix()) if self.columns else 0


def orders(G: TensorLInfty) -> list[int]:
    """Filtration order of each basis vector of ``g (x) m_R``."""
    return [G.R.order[a] for _, a in G.pairs]


def _part(v: Mapping, order: Sequence[int], k: int) -> dict:
    return {i: c for i, c in v.items() if order[i] == k}


def _closed(G: LInftyAlgebra, indices: list[int]) -> list[dict]:
    """Basis of the l_1-cycles spanned by the given basis vectors."""
    if not indices:
        return []
    cols = [G.sorted_bracket(1, (i,)) for i in indices]
    kernel = kernel_basis(SparseMatrix.from_columns(G.dim, cols))
    return [{indices[j]: c for j, c in v.items()} for v in kernel]


# ---------------------------------------------------------------------------
# Gauge action

def _require_dg_lie(G: LInftyAlgebra):
    if G.bracket_cap > 2:
        g = getattr(G, "g", None)
        if g is None or g.bracket_cap > 2:
            raise ValueError("the gauge action is only implemented for dg Lie algebras")


def gauge_action(G: LInftyAlgebra, lam: Mapping[int, Fraction], tau: Mapping[int, Fraction],
                 max_terms: int = 64) -> dict:
    """``exp(lam) . tau = e^{ad lam} tau - ((e^{ad lam} - 1)/ad lam)(d lam)`` for nilpotent ``lam``."""
    _require_dg_lie(G)
    lam = _clean(lam)
    out = _clean(tau)
    if not lam:
        return out
    term = dict(out)
    n = 1
    while term:
        if n > max_terms:
            raise ValueError("ad(lambda) is not nilpotent on tau")
        term = {i: c / n for i, c in G.bracket(lam, term).items()}
        vec_add(out, term)
        n += 1
    term = G.bracket(lam)
    n = 1
    while term:
        if n > max_terms:
            raise ValueError("ad(lambda) is not nilpotent on d(lambda)")
        vec_add(out, term, Fraction(-1, math.factorial(n)))
        term = G.bracket(lam, term)
        n += 1
    return out


def gauge_equivalent(G: TensorLInfty, tau0: Mapping, tau1: Mapping) -> dict:
    """Search ``lam`` in degree 0 with ``exp(lam) . tau0 = tau1``.

    Returns ``{"status": "equivalent" | "distinct" | "inconclusive", "gauge", "order"}``.
    """
    _require_dg_lie(G)
    tau0, tau1 = _clean(tau0), _clean(tau1)
    order = orders(G)
    top = max(order, default=0)
    deg0 = [i for i in range(G.dim) if G.degrees[i] == 0]
    lam: dict = {}
    for k in range(1, top + 1):
        base = gauge_action(G, lam, tau0)
        rhs = _part(_sub(tau1, base), order, k)
        if not rhs:
            continue
        sys = _System()
        unknowns = [{i: ONE} for i in deg0 if order[i] == k]
        for e in unknowns:
            sys.add_column(_part({i: -c for i, c in G.bracket(e).items()}, order, k))
        corrections = _closed(G, [i for i in deg0 if order[i] == k - 1]) if k > 1 else []
        for z in corrections:
            sys.add_column(_part(_sub(gauge_action(G, _plus(lam, z), tau0), base), order, k))
        x = sys.solve(rhs)
        if x is None:
            status = "distinct" if k <= 2 else "inconclusive"
            return {"status": status, "gauge": None, "order": k}
        for j, c in x.items():
            vec_add(lam, (unknowns + corrections)[j], c)
    if gauge_action(G, lam, tau0) != tau1:
        return {"status": "inconclusive", "gauge": None, "order": top}
    return {"status": "equivalent", "gauge": lam, "order": top}


# ---------------------------------------------------------------------------
# Sullivan 1-simplices

class FormsTensor:
    """``G (x) Omega_1`` on elements ``{(x, form_key): c}``.

    ``l_k(x_1 w_1, .., x_k w_k) = (-1)^{sum_{i<j} |w_i||x_j|} l_k(x_1, .., x_k) w_1 .. w_k``
    and ``l_1`` gains ``(-1)^{|x|} x (x) d w``.
    """

    def __init__(self, G: LInftyAlgebra, D: int = 4):
        self.G, self.O = G, SullivanForms(1, D)

    def degree(self, key) -> int:
        x, w = key
        return self.G.degrees[x] + len(w[1])

    def bracket_basis(self, keys: Sequence) -> dict:
        G, O = self.G, self.O
        k = len(keys)
        form = O.one()
        for _, w in keys:
            form = O.mul(form, {w: ONE})
            if not form:
                return {}
        sign = 1
        for i in range(k):
            for j in range(i + 1, k):
                if len(keys[i][1][1]) * G.degrees[keys[j][0]] % 2:
                    sign = -sign
        out: dict = {}
        for y, c in G.bracket_basis(k, [x for x, _ in keys]).items():
            for w, e in form.items():
                vec_add(out, {(y, w): sign * c * e})
        if k == 1:
            x, w = keys[0]
            s = -1 if G.degrees[x] % 2 else 1
            for w2, e in O.d({w: ONE}).items():
                vec_add(out, {(x, w2): s * e})
        return out

    def l1(self, v: Mapping) -> dict:
        out: dict = {}
        for key, c in v.items():
            vec_add(out, self.bracket_basis([key]), c)
        return out

    def l2(self, a: Mapping, b: Mapping) -> dict:
        out: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                vec_add(out, self.bracket_basis([ka, kb]), ca * cb)
        return out

    def mc_defect(self, alpha: Mapping) -> dict:
        """``sum_k 1/k! l_k(alpha, .., alpha)`` for ``alpha`` of total degree 1."""
        items = sorted(alpha.items())
        out = self.l1(alpha)
        for k in range(2, self.G.bracket_cap + 1):
            for combo in itertools.combinations_with_replacement(range(len(items)), k):
                coeff = ONE
                for j in set(combo):
                    m = combo.count(j)
                    coeff *= items[j][1] ** m / math.factorial(m)
                vec_add(out, self.bracket_basis([items[j][0] for j in combo]), coeff)
        return out

    def endpoint(self, vertex: int, alpha: Mapping) -> dict:
        out: dict = {}
        for (x, w), c in alpha.items():
            val = self.O.vertex(vertex, {w: ONE})
            if val:
                vec_add(out, {x: c * val})
        return out

    def unknowns(self, indices: Iterable[int], D: int) -> list:
        keys = []
        for x in indices:
            for p in range(D + 1):
                for dts in ((), (1,)):
                    if self.G.degrees[x] + len(dts) == 1:
                        keys.append((x, ((p,), dts)))
        return keys


def _max_s_degree(v: Mapping) -> int:
    return max((w[0][0] for _, w in v), default=0)


def find_edge(G: TensorLInfty, tau0: Mapping, tau1: Mapping, D: int = 4) -> dict:
    """Search a 1-simplex of the Sullivan nerve from ``tau0`` to ``tau1``.

    The simplex is an MC element of ``G (x) Omega_1`` with polynomial degree at
    most ``D`` restricting to the two vertices.  Returns ``{"status":
    "edge" | "disconnected" | "inconclusive", "simplex", "order"}``.
    """
    tau0, tau1 = _clean(tau0), _clean(tau1)
    F = FormsTensor(G, D)
    order = orders(G)
    top = max(order, default=0)
    deg0 = [i for i in range(G.dim) if G.degrees[i] == 0]
    ds = ((0,), (1,))
    alpha: dict = {}

    def key_order(key):
        return order[key[0]]

    for k in range(1, top + 1):
        defect = {key: c for key, c in F.mc_defect(alpha).items() if key_order(key) == k}
        rhs = {("mc",) + key: -c for key, c in defect.items()}
        for v, tau in ((0, tau0), (1, tau1)):
            for x, c in _part(tau, order, k).items():
                rhs[("v", v, x)] = c
        corrections = [{(x, ds): c for x, c in z.items()}
                       for z in _closed(G, [i for i in deg0 if order[i] == k - 1])] if k > 1 else []
        corr_cols = []
        for w in corrections:
            col = {("mc",) + key: c for key, c in F.l2(alpha, w).items() if key_order(key) == k}
            corr_cols.append(col)
        cells = [i for i in range(G.dim) if order[i] == k]
        found = None
        needed = max(D, _max_s_degree(defect) + 1)
        for trunc in sorted(set(range(1, D + 1)) | {needed}):
            sys = _System()
            keys = F.unknowns(cells, trunc)
            for key in keys:
                col = {("mc",) + kk: c for kk, c in F.l1({key: ONE}).items()}
                for v in (0, 1):
                    for x, c in F.endpoint(v, {key: ONE}).items():
                        col[("v", v, x)] = c
                sys.add_column(col)
            for col in corr_cols:
                sys.add_column(col)
            x = sys.solve(rhs)
            if x is not None:
                found = (trunc, keys, x)
                break
        if found is None:
            status = "disconnected" if k <= 2 else "inconclusive"
            return {"status": status, "simplex": None, "order": k}
        trunc, keys, x = found
        if trunc > D:
            return {"status": "inconclusive", "simplex": None, "order": k,
                    "reason": f"needs polynomial degree {trunc} > {D}"}
        for j, c in x.items():
            if j < len(keys):
                vec_add(alpha, {keys[j]: c})
            else:
                vec_add(alpha, corrections[j - len(keys)], c)
    ok = (not F.mc_defect(alpha) and F.endpoint(0, alpha) == tau0 and F.endpoint(1, alpha) == tau1)
    if not ok:
        return {"status": "inconclusive", "simplex": None, "order": top}
    return {"status": "edge", "simplex": alpha, "order": top}


def _partition(n: int, related) -> tuple[list[list[int]], list]:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    unresolved = []
    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            status = related(i, j)
            if status is True:
                parent[find(j)] = find(i)
            elif status is None:
                unresolved.append((i, j))
    classes: dict = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    open_pairs = [(i, j) for i, j in unresolved if find(i) != find(j)]
    return sorted(classes.values()), open_pairs


def homotopy_classes(G: TensorLInfty, vertices: Sequence[Mapping], D: int = 4) -> dict:
    """pi_0 of the Sullivan nerve restricted to the given MC vertices."""
    for v in vertices:
        if mc_defect(G, v):
            raise ValueError("vertex is not a Maurer-Cartan element")
    edges = []

    def related(i, j):
        res = find_edge(G, vertices[i], vertices[j], D)
        if res["status"] == "edge":
            edges.append((i, j))
            return True
        return False if res["status"] == "disconnected" else None

    classes, open_pairs = _partition(len(vertices), related)
    return {"classes": classes, "edges": edges, "inconclusive": open_pairs, "conclusive": not open_pairs}


def gauge_orbits(G: TensorLInfty, vertices: Sequence[Mapping]) -> dict:
    """Partition MC vertices into gauge orbits."""

    def related(i, j):
        res = gauge_equivalent(G, vertices[i], vertices[j])
        if res["status"] == "equivalent":
            return True
        return False if res["status"] == "distinct" else None

    classes, open_pairs = _partition(len(vertices), related)
    return {"classes": classes, "inconclusive": open_pairs, "conclusive": not open_pairs}


# ---------------------------------------------------------------------------
# Enumeration

def enumerate_mc(g: LInftyAlgebra, R: ArtinianAlgebra) -> dict:
    """Describe ``MC(g (x) m_R)``.

    If ``m_R^2 = 0`` the equation is linear and the solution space is the
    kernel of ``l_1`` in degree 1.  Otherwise the first-order slice is given
    together with the quadratic obstruction forms at the next order; a
    nonzero form marks a stratum that is not resolved here.
    """
    G = tensor_with_ideal(g, R)
    order = orders(G)
    deg1 = [i for i in range(G.dim) if G.degrees[i] == 1]
    if R.nilpotency() <= 2:
        return {"ring": R.name, "linear": True, "basis": _closed(G, deg1), "strata": []}
    low = min((order[i] for i in deg1), default=1)
    first = _closed(G, [i for i in deg1 if order[i] == low])
    # obstruction forms: class of l_2(v_i, v_j) modulo l_1 of the next order
    nxt = [i for i in range(G.dim) if order[i] == 2 * low and G.degrees[i] == 1]
    red = LinearReducer()
    for i in nxt:
        red.add(G.sorted_bracket(1, (i,)))
    strata = []
    for a, b in itertools.combinations_with_replacement(range(len(first)), 2):
        val = G.bracket(first[a], first[b])
        rest = red.reduce({i: c for i, c in val.items() if order[i] == 2 * low})
        if rest:
            strata.append({"pair": [a, b], "obstruction": rest})
    return {"ring": R.name, "linear": not strata, "basis": first, "strata": strata}


def enumerate_mc_box(g: LInftyAlgebra, values: Sequence = (-1, 0, 1), budget: int | None = None) -> list[dict]:
    """All MC elements of ``g`` whose degree-1 coordinates lie in ``values``.

    Brackets are summed up to ``bracket_cap``; the search space must stay
    below the size budget.
    """
    deg1 = [i for i in range(g.dim) if g.degrees[i] == 1]
    budget = default_size_budget() if budget is None else budget
    if len(values) ** len(deg1) > budget:
        raise SizeError(f"{len(values)}^{len(deg1)} candidates exceed the budget {budget}")
    out = []
    for coords in itertools.product([Fraction(v) for v in values], repeat=len(deg1)):
        tau = {i: c for i, c in zip(deg1, coords) if c}
        if not mc_defect(g, tau):
            out.append(tau)
    return out


# ---------------------------------------------------------------------------
# Cohomology classes and formal deformations

class CohomologyClasses:
    """Class map ``Z^d -> H^d`` of ``(g, l_1)`` for a chosen complement of ``B^d``."""

    def __init__(self, g: LInftyAlgebra, d: int):
        self.g, self.d = g, d
        idx = [i for i in range(g.dim) if g.degrees[i] == d]
        prev = [i for i in range(g.dim) if g.degrees[i] == d - 1]
        cols = [g.sorted_bracket(1, (i,)) for i in prev]
        self.boundaries = image_basis([c for c in cols if c], g.dim) if any(cols) else []
        self.cycles = _closed(g, idx)
        red = LinearReducer()
        for b in self.boundaries:
            red.add(b)
        self.representatives = [z for z in self.cycles if red.add(z)]
        self._M = SparseMatrix.from_columns(g.dim, self.boundaries + self.representatives)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def classify(self, v: Mapping) -> dict | None:
        """Coordinates of the class of a cycle (``None`` if not a cycle)."""
        x = solve(self._M, dict(v))
        if x is None:
            return None
        nb = len(self.boundaries)
        return {j - nb: c for j, c in x.items() if j >= nb}


def _ideal_vector(G: TensorLInfty, v: Mapping, a: int) -> dict:
    return {G.pairs[i][0]: c for i, c in v.items() if G.pairs[i][1] == a}


def formal_deformation(g: LInftyAlgebra, n: int = 3, branches: Sequence[Mapping] | None = None) -> dict:
    """Lift first-order MC elements of ``g`` through ``K[t]/(t^{n+1})``.

    Each branch starts at a degree-1 cocycle (default: a basis of ``H^1``).
    At order ``k`` the equation ``l_1 tau_k = -(order-k defect)`` is solved,
    allowing cocycle corrections of ``tau_{k-1}`` for ``k >= 3``; when it has
    no solution the obstruction class in ``H^2`` is recorded.  The order-2
    entry of ``obstructions`` gives the span of the classes of
    ``l_2(v_i, v_j)`` over ``H^1``, the space all quadratic obstructions lie in.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    R = truncated_polynomial(n + 1)
    G = tensor_with_ideal(g, R)
    H1, H2 = CohomologyClasses(g, 1), CohomologyClasses(g, 2)
    if branches is None:
        branches = H1.representatives
    deg1 = [i for i in range(g.dim) if g.degrees[i] == 1]
    cycles1 = H1.cycles
    results = []
    for b, v in enumerate(branches):
        v = _clean(v)
        if g.bracket(v):
            raise ValueError(f"branch {b} is not a cocycle")
        tau = G.embed(v, 0)
        reached, obstruction, dims = 1, None, []
        for k in range(2, n + 1):
            defect = _ideal_vector(G, mc_defect(G, tau), k - 1)
            sys = _System()
            unknowns = [{G.index[(i, k - 1)]: ONE} for i in deg1]
            for e in unknowns:
                sys.add_column(_ideal_vector(G, G.bracket(e), k - 1))
            corrections = [G.embed(z, k - 2) for z in cycles1] if k >= 3 else []
            base = mc_defect(G, tau)
            for z in corrections:
                sys.add_column(_ideal_vector(G, _sub(mc_defect(G, _plus(tau, z)), base), k - 1))
            x = sys.solve({i: -c for i, c in defect.items()})
            if x is None:
                cls = H2.classify(defect)
                red = LinearReducer()
                for z in corrections:
                    cz = H2.classify(_ideal_vector(G, _sub(mc_defect(G, _plus(tau, z)), base), k - 1))
                    red.add(cz or {})
                obstruction = {"order": k, "class": red.reduce(cls or {}), "representative": defect}
                break
            for j, c in x.items():
                vec_add(tau, (unknowns + corrections)[j], c)
            reached = k
            dims.append({"order": k, "solution_dim": sys.null_dim()})
        lift = {k: _ideal_vector(G, tau, k - 1) for k in range(1, reached + 1)}
        results.append({"first_order": v, "reached": reached, "lift": lift if obstruction is None else None,
                        "obstruction": obstruction, "orders": dims})
    # quadratic obstruction space
    red = LinearReducer()
    first_rep = None
    for a, c in itertools.combinations_with_replacement(range(len(H1.representatives)), 2):
        val = g.bracket(H1.representatives[a], H1.representatives[c])
        cls = H2.classify(val) if val else {}
        if cls and red.add(cls) and first_rep is None:
            first_rep = val
    obstructions = []
    if red.dim:
        obstructions.append({"order": 2, "class_dim": red.dim, "representative": first_rep})
    for r in results:
        ob = r["obstruction"]
        if ob and ob["order"] > 2 and ob["class"]:
            obstructions.append({"order": ob["order"], "class_dim": 1, "representative": ob["representative"]})
    return {"ring": R.name, "h1": H1.dim, "h2": H2.dim, "branches": results, "obstructions": obstructions}


def mc_report(ring: str, vertices: Sequence[Mapping], classes: list[list[int]], obstructions: list[dict]) -> dict:
    """The JSON report ``{"ring", "vertices", "classes", "obstructions"}``."""
    return {"ring": ring,
            "vertices": [_vec_json(v) for v in vertices],
            "classes": classes,
            "obstructions": [{"order": o["order"], "class_dim": o["class_dim"],
                              "representative": _vec_json(o["representative"] or {})} for o in obstructions]}
