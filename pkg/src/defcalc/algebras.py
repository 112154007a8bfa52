"""Finite-dimensional algebra structures on complexes: input format,
verification of the defining relations, and built-in fixtures."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .graded import ChainComplex, GradedSpace
from .linalg import SparseMatrix, fraction_str, to_fraction, vec_add

ONE = Fraction(1)

KINDS = ("ass", "com", "lie", "pois1", "bialg", "di")


class InputError(ValueError):
    """Malformed algebra specification."""


def _sign(b: bool) -> int:
    return -1 if b else 1


@dataclass
class Algebra:
    """A complex ``X`` with structure maps on its flat basis.

    ``product[(i, j)]`` and ``bracket[(i, j)]`` are vectors (binary maps of
    degree 0), ``coproduct[i]`` maps to vectors over pairs ``(j, k)``, and
    ``delta`` is a degree-1 matrix for Di-algebras.
    """

    X: ChainComplex
    kind: str = "ass"
    product: dict = field(default_factory=dict)
    bracket: dict = field(default_factory=dict)
    coproduct: dict = field(default_factory=dict)
    delta: SparseMatrix | None = None
    name: str = "A"

    @property
    def degrees(self) -> list[int]:
        return self.X.space.flat_degrees()

    @property
    def labels(self) -> list[str]:
        return self.X.space.flat_labels()

    @property
    def dim(self) -> int:
        return self.X.space.dim()

    # multilinear helpers on flat bases
    def mul(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction], table=None) -> dict:
        table = self.product if table is None else table
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                vec_add(out, table.get((i, j), {}), a * b)
        return out

    def br(self, u, v):
        return self.mul(u, v, self.bracket)

    def d(self, u: Mapping[int, Fraction]) -> dict:
        return self.X.differential.apply(u)

    def unit(self) -> dict | None:
        """Two-sided unit of the product, if there is one (solved exactly)."""
        from .linalg import solve

        n = self.dim
        # unknown u = sum u_k e_k; equations u e_j = e_j and e_j u = e_j
        entries, rhs = [], {}
        r = 0
        for j in range(n):
            for side in (0, 1):
                for t in range(n):
                    for k in range(n):
                        prod = self.product.get((k, j) if side == 0 else (j, k), {})
                        if prod.get(t):
                            entries.append((r, k, prod[t]))
                    if t == j:
                        rhs[r] = ONE
                    r += 1
        M = SparseMatrix.from_entries(r, n, entries)
        return solve(M, rhs)

    # serialization
    def to_json(self) -> dict:
        def tbl(t):
            return [[i, j, k, fraction_str(c)] for (i, j), v in sorted(t.items()) for k, c in sorted(v.items())]

        out = {"kind": self.kind, "name": self.name,
               "dims": {str(d): n for d, n in self.X.space.dims().items()},
               "labels": self.labels}
        if self.product:
            out["product"] = tbl(self.product)
        if self.bracket:
            out["bracket"] = tbl(self.bracket)
        if self.coproduct:
            out["coproduct"] = [[i, j, k, fraction_str(c)] for i, v in sorted(self.coproduct.items())
                                for (j, k), c in sorted(v.items())]
        if not self.X.differential.is_zero():
            out["differential"] = [[r, c, fraction_str(v)] for r, c, v in self.X.differential.entries()]
        if self.delta is not None:
            out["delta"] = [[r, c, fraction_str(v)] for r, c, v in self.delta.entries()]
        return out


def _space(dims: Mapping[int, int], labels=None) -> GradedSpace:
    space = GradedSpace.from_dims(dims)
    if labels:
        if len(labels) != space.dim():
            raise InputError(f"{len(labels)} labels for a space of dimension {space.dim()}")
        comps, pos = {}, 0
        for d, n in sorted(dims.items()):
            if n:
                comps[d] = tuple(labels[pos:pos + n])
                pos += n
        space = GradedSpace(comps)
    return space


def make_algebra(dims: Mapping[int, int], kind="ass", product=None, bracket=None, coproduct=None,
                 differential=None, delta=None, labels=None, name="A") -> Algebra:
    """Build an :class:`Algebra` from sparse entry lists ``[i, j, k, c]``
    (meaning ``e_i . e_j`` has coefficient ``c`` on ``e_k``)."""
    space = _space(dims, labels)
    n = space.dim()

    def table(entries):
        t: dict = {}
        for i, j, k, c in entries or []:
            for x in (i, j, k):
                if not 0 <= int(x) < n:
                    raise InputError(f"basis index {x} out of range (dim {n})")
            vec_add(t.setdefault((int(i), int(j)), {}), {int(k): to_fraction(c)})
        return {k: v for k, v in t.items() if v}

    D = SparseMatrix.from_entries(n, n, [(int(r), int(c), to_fraction(v)) for r, c, v in differential or []])
    try:
        X = ChainComplex(space, D)
    except ValueError as exc:
        raise InputError(f"differential: {exc}") from None
    cop: dict = {}
    for i, j, k, c in coproduct or []:
        cop.setdefault(int(i), {})
        key = (int(j), int(k))
        cop[int(i)][key] = cop[int(i)].get(key, 0) + to_fraction(c)
    dl = None
    if delta is not None:
        dl = SparseMatrix.from_entries(n, n, [(int(r), int(c), to_fraction(v)) for r, c, v in delta])
    alg = Algebra(X, kind, table(product), table(bracket), cop, dl, name)
    _check_degrees(alg)
    return alg


def _check_degrees(alg: Algebra):
    deg = alg.degrees
    for name, t in (("product", alg.product), ("bracket", alg.bracket)):
        for (i, j), v in t.items():
            for k in v:
                if deg[k] != deg[i] + deg[j]:
                    raise InputError(f"{name} entry {alg.labels[i]}.{alg.labels[j]} -> {alg.labels[k]} "
                                     f"is not of degree 0")
    for i, v in alg.coproduct.items():
        for (j, k) in v:
            if deg[j] + deg[k] != deg[i]:
                raise InputError(f"coproduct entry of {alg.labels[i]} is not of degree 0")
    if alg.delta is not None:
        for r, c, _ in alg.delta.entries():
            if deg[r] != deg[c] + 1:
                raise InputError("delta must have degree +1")


def parse_algebra(obj) -> Algebra:
    """Load the JSON input format (a dict or a JSON string)."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON: {exc}") from None
    if not isinstance(obj, dict) or "dims" not in obj:
        raise InputError("algebra specification must be an object with a 'dims' field")
    try:
        dims = {int(d): int(n) for d, n in obj["dims"].items()}
        kind = obj.get("kind", "ass")
        if kind not in KINDS:
            raise InputError(f"unknown kind {kind!r}")
        return make_algebra(dims, kind, obj.get("product"), obj.get("bracket"), obj.get("coproduct"),
                            obj.get("differential"), obj.get("delta"), obj.get("labels"), obj.get("name", "A"))
    except InputError:
        raise
    except (TypeError, ValueError, KeyError, ZeroDivisionError) as exc:
        raise InputError(f"invalid algebra specification: {exc}") from None


# ---------------------------------------------------------------------------
# Relation checks.  Each returns a list of defects {relation, basis, defect}.

def _defect(relation, labels, vec, names):
    return {"relation": relation, "basis": list(labels),
            "defect": {names[k]: fraction_str(c) for k, c in sorted(vec.items())}}


def _chain_map_defects(alg: Algebra, table, name) -> list[dict]:
    """``d(x y) = dx y + (-1)^{|x|} x dy`` for a binary operation of degree 0."""
    out = []
    deg, n = alg.degrees, alg.dim
    for i in range(n):
        for j in range(n):
            lhs = alg.d(alg.mul({i: ONE}, {j: ONE}, table))
            rhs = alg.mul(alg.d({i: ONE}), {j: ONE}, table)
            vec_add(rhs, alg.mul({i: ONE}, alg.d({j: ONE}), table), _sign(deg[i] % 2))
            vec_add(lhs, rhs, -1)
            if lhs:
                out.append(_defect(f"{name} is not compatible with d", (alg.labels[i], alg.labels[j]), lhs,
                                   alg.labels))
    return out


def associativity_defects(alg: Algebra) -> list[dict]:
    out = []
    n = alg.dim
    for i, j, k in itertools.product(range(n), repeat=3):
        a, b, c = {i: ONE}, {j: ONE}, {k: ONE}
        v = alg.mul(alg.mul(a, b), c)
        vec_add(v, alg.mul(a, alg.mul(b, c)), -1)
        if v:
            out.append(_defect("associativity", (alg.labels[i], alg.labels[j], alg.labels[k]), v, alg.labels))
    return out


def commutativity_defects(alg: Algebra, table=None, anti=False, name="commutativity") -> list[dict]:
    table = alg.product if table is None else table
    out = []
    deg, n = alg.degrees, alg.dim
    for i in range(n):
        for j in range(i, n):
            s = _sign((deg[i] * deg[j]) % 2) * (-1 if anti else 1)
            v = dict(table.get((i, j), {}))
            vec_add(v, table.get((j, i), {}), -s)
            if v:
                out.append(_defect(name, (alg.labels[i], alg.labels[j]), v, alg.labels))
    return out


def jacobi_defects(alg: Algebra) -> list[dict]:
    out = []
    deg, n = alg.degrees, alg.dim
    for i, j, k in itertools.combinations_with_replacement(range(n), 3):
        x, y, z = {i: ONE}, {j: ONE}, {k: ONE}
        # [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
        v = alg.br(x, alg.br(y, z))
        vec_add(v, alg.br(alg.br(x, y), z), -1)
        vec_add(v, alg.br(y, alg.br(x, z)), -_sign((deg[i] * deg[j]) % 2))
        if v:
            out.append(_defect("Jacobi", (alg.labels[i], alg.labels[j], alg.labels[k]), v, alg.labels))
    return out


def leibniz_defects(alg: Algebra) -> list[dict]:
    """``[x, yz] = [x, y] z + (-1)^{|x||y|} y [x, z]``."""
    out = []
    deg, n = alg.degrees, alg.dim
    for i, j, k in itertools.product(range(n), repeat=3):
        x, y, z = {i: ONE}, {j: ONE}, {k: ONE}
        v = alg.br(x, alg.mul(y, z))
        vec_add(v, alg.mul(alg.br(x, y), z), -1)
        vec_add(v, alg.mul(y, alg.br(x, z)), -_sign((deg[i] * deg[j]) % 2))
        if v:
            out.append(_defect("Leibniz", (alg.labels[i], alg.labels[j], alg.labels[k]), v, alg.labels))
    return out


def _tensor_index(n):
    return lambda j, k: j * n + k


def coproduct_vec(alg: Algebra, u: Mapping[int, Fraction]) -> dict:
    out: dict = {}
    for i, a in u.items():
        for key, c in alg.coproduct.get(i, {}).items():
            vec_add(out, {key: c * a})
    return out


def bialgebra_defects(alg: Algebra) -> list[dict]:
    """Coassociativity and ``Delta(xy) = Delta(x) Delta(y)`` (degree-0 bialgebra)."""
    out = []
    n = alg.dim
    labels = alg.labels
    if any(d != 0 for d in alg.degrees) or not alg.X.differential.is_zero():
        out.append({"relation": "bialgebras must be concentrated in degree 0 with zero differential",
                    "basis": [], "defect": {}})
        return out
    for i in range(n):
        lhs: dict = {}
        rhs: dict = {}
        for (j, k), c in alg.coproduct.get(i, {}).items():
            for (a, b), e in alg.coproduct.get(j, {}).items():
                vec_add(lhs, {(a, b, k): c * e})
            for (a, b), e in alg.coproduct.get(k, {}).items():
                vec_add(rhs, {(j, a, b): c * e})
        vec_add(lhs, rhs, -1)
        if lhs:
            out.append({"relation": "coassociativity", "basis": [labels[i]],
                        "defect": {"*".join(labels[t] for t in key): fraction_str(c) for key, c in sorted(lhs.items())}})
    for i in range(n):
        for j in range(n):
            lhs = coproduct_vec(alg, alg.mul({i: ONE}, {j: ONE}))
            rhs: dict = {}
            for (a, b), c in alg.coproduct.get(i, {}).items():
                for (p, q), e in alg.coproduct.get(j, {}).items():
                    for s, f in alg.product.get((a, p), {}).items():
                        for t, g in alg.product.get((b, q), {}).items():
                            vec_add(rhs, {(s, t): c * e * f * g})
            vec_add(lhs, rhs, -1)
            if lhs:
                out.append({"relation": "compatibility", "basis": [labels[i], labels[j]],
                            "defect": {"*".join(labels[t] for t in key): fraction_str(c)
                                       for key, c in sorted(lhs.items())}})
    return out


def di_defects(alg: Algebra) -> list[dict]:
    """``delta^2 = d delta + delta d`` (equivalently ``(d - delta)^2 = 0``)."""
    if alg.delta is None:
        return [{"relation": "missing delta", "basis": [], "defect": {}}]
    D, dl = alg.X.differential, alg.delta
    lhs = dl @ dl - (D @ dl + dl @ D)
    return [{"relation": "twisting equation", "basis": [alg.labels[c]],
             "defect": {alg.labels[r]: fraction_str(v)}} for r, c, v in lhs.entries()]


def verify(alg: Algebra) -> list[dict]:
    """All defining relations for ``alg.kind``; empty list means valid."""
    kind = alg.kind
    out: list[dict] = []
    if kind in ("ass", "com", "pois1", "bialg"):
        out += associativity_defects(alg) + _chain_map_defects(alg, alg.product, "product")
    if kind in ("com", "pois1"):
        out += commutativity_defects(alg)
    if kind in ("lie", "pois1"):
        out += commutativity_defects(alg, alg.bracket, anti=True, name="antisymmetry")
        out += jacobi_defects(alg) + _chain_map_defects(alg, alg.bracket, "bracket")
    if kind == "pois1":
        out += leibniz_defects(alg)
    if kind == "bialg":
        out += bialgebra_defects(alg)
    if kind == "di":
        out += di_defects(alg)
    return out


# ---------------------------------------------------------------------------
# Fixtures

def ground_field(kind="ass") -> Algebra:
    return make_algebra({0: 1}, kind, product=[[0, 0, 0, 1]] if kind != "lie" else None,
                        coproduct=[[0, 0, 0, 1]] if kind == "bialg" else None, labels=["1"], name="K")


def dual_numbers_algebra() -> Algebra:
    """``K[x]/(x^2)`` with basis 1, x."""
    return make_algebra({0: 2}, "ass", product=[[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]],
                        labels=["1", "x"], name="K[x]/(x^2)")


def product_field_algebra() -> Algebra:
    """``K x K`` with orthogonal idempotents."""
    return make_algebra({0: 2}, "ass", product=[[0, 0, 0, 1], [1, 1, 1, 1]], labels=["p", "q"], name="K^2")


def upper_triangular_algebra() -> Algebra:
    """Upper-triangular 2x2 matrices, basis e11, e12, e22."""
    return make_algebra({0: 3}, "ass",
                        product=[[0, 0, 0, 1], [0, 1, 1, 1], [1, 2, 1, 1], [2, 2, 2, 1]],
                        labels=["e11", "e12", "e22"], name="T2")


def group_bialgebra_z2() -> Algebra:
    """``K[Z/2]`` with group-like basis 1, g."""
    return make_algebra({0: 2}, "bialg", product=[[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1]],
                        coproduct=[[0, 0, 0, 1], [1, 1, 1, 1]], labels=["1", "g"], name="K[Z/2]")


def poisson_fixtures() -> list[Algebra]:
    zero = make_algebra({0: 1}, "pois1", product=[[0, 0, 0, 1]], labels=["1"], name="K")
    dual = make_algebra({0: 2}, "pois1", product=[[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]],
                        labels=["1", "x"], name="K[x]/(x^2)")
    solv = make_algebra({0: 2}, "pois1", bracket=[[0, 1, 1, 1], [1, 0, 1, -1]], labels=["x", "y"],
                        name="aff")
    return [zero, dual, solv]


def associative_corpus() -> list[Algebra]:
    """Associative algebras of dimension at most 2 used across the test suite."""
    zero1 = make_algebra({0: 1}, "ass", labels=["x"], name="K0")
    zero2 = make_algebra({0: 2}, "ass", labels=["x", "y"], name="K0^2")
    nil = make_algebra({0: 2}, "ass", product=[[0, 0, 1, 1]], labels=["x", "x2"], name="xK[x]/(x^3)")
    left = make_algebra({0: 2}, "ass", product=[[0, 0, 0, 1], [0, 1, 1, 1]], labels=["e", "n"],
                        name="left-unit")
    return [ground_field(), dual_numbers_algebra(), product_field_algebra(), zero1, zero2, nil, left]


def acceptance_algebras() -> list[Algebra]:
    return [ground_field(), dual_numbers_algebra(), product_field_algebra(), upper_triangular_algebra()]


def algebra_structure_from_constants(kind: str, X: ChainComplex, product=None, bracket=None, coproduct=None,
                                     delta=None) -> dict:
    """Build and verify; returns ``{"valid", "algebra", "violations"}``."""
    alg = Algebra(X, kind, product or {}, bracket or {}, coproduct or {}, delta)
    _check_degrees(alg)
    bad = verify(alg)
    return {"valid": not bad, "algebra": alg if not bad else None, "violations": bad}
