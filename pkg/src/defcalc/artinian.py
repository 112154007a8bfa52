"""Artinian test algebras, given through their maximal ideal, and
coefficient extension of L-infinity algebras."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import vec_add
from .linfty import LInftyAlgebra

ONE = Fraction(1)


class ArtinianAlgebra:
    """Augmented graded-commutative dg algebra ``K (+) m`` with ``m`` nilpotent.

    Only the maximal ideal is stored: ``mult[(i, j)]`` is the product of basis
    vectors ``i`` and ``j`` of ``m`` and ``diff[i]`` the differential.
    ``order[i]`` is a filtration degree (>= 1) used as weight.
    """

    def __init__(self, labels: Sequence[str], degrees: Sequence[int], mult: Mapping[tuple, Mapping[int, Fraction]],
                 diff: Mapping[int, Mapping[int, Fraction]] | None = None, order: Sequence[int] | None = None,
                 name: str = "R", validate: bool = True):
        self.labels = list(labels)
        self.degrees = list(degrees)
        self.mult = {tuple(k): {i: Fraction(c) for i, c in v.items() if c} for k, v in mult.items()}
        self.mult = {k: v for k, v in self.mult.items() if v}
        self.diff = {i: {j: Fraction(c) for j, c in v.items() if c} for i, v in (diff or {}).items()}
        self.diff = {i: v for i, v in self.diff.items() if v}
        self.order = list(order) if order is not None else [1] * len(self.labels)
        self.name = name
        if validate:
            bad = self.check()
            if bad:
                raise ValueError(f"{name} is not an Artinian cdga: " + "; ".join(bad[:3]))

    @property
    def dim(self) -> int:
        return len(self.labels)

    def product(self, i: int, j: int) -> dict:
        return self.mult.get((i, j), {})

    def product_vec(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                vec_add(out, self.product(i, j), a * b)
        return out

    def d(self, i: int) -> dict:
        return self.diff.get(i, {})

    def d_vec(self, u: Mapping[int, Fraction]) -> dict:
        out: dict = {}
        for i, a in u.items():
            vec_add(out, self.d(i), a)
        return out

    def nilpotency(self) -> int:
        """Smallest n with m^n = 0."""
        n = 1
        current = [{i: ONE} for i in range(self.dim)]
        while any(current):
            nxt = []
            for v in current:
                for j in range(self.dim):
                    w = self.product_vec(v, {j: ONE})
                    if w:
                        nxt.append(w)
            current = nxt
            n += 1
            if n > self.dim + 2:
                raise ValueError("maximal ideal is not nilpotent")
        return n

    def check(self) -> list[str]:
        bad = []
        n = self.dim
        for (i, j), v in self.mult.items():
            if any(self.degrees[k] != self.degrees[i] + self.degrees[j] for k in v):
                bad.append(f"product {self.labels[i]}*{self.labels[j]} has wrong degree")
        for i, v in self.diff.items():
            if any(self.degrees[k] != self.degrees[i] + 1 for k in v):
                bad.append(f"d({self.labels[i]}) has wrong degree")
        for i in range(n):
            if self.d_vec(self.d(i)):
                bad.append(f"d^2 != 0 on {self.labels[i]}")
            for j in range(n):
                s = -1 if (self.degrees[i] * self.degrees[j]) % 2 else 1
                if self.product(i, j) != {k: s * c for k, c in self.product(j, i).items()}:
                    bad.append(f"not graded commutative on {self.labels[i]}, {self.labels[j]}")
                lhs = self.d_vec(self.product(i, j))
                rhs = self.product_vec(self.d(i), {j: ONE})
                vec_add(rhs, self.product_vec({i: ONE}, self.d(j)), -1 if self.degrees[i] % 2 else 1)
                if lhs != rhs:
                    bad.append(f"Leibniz fails on {self.labels[i]}, {self.labels[j]}")
                for k in range(n):
                    if self.product_vec(self.product(i, j), {k: ONE}) != self.product_vec({i: ONE}, self.product(j, k)):
                        bad.append(f"not associative on {self.labels[i]}, {self.labels[j]}, {self.labels[k]}")
        if not bad:
            try:
                self.nilpotency()
            except ValueError as exc:
                bad.append(str(exc))
        return bad

    def to_json(self) -> dict:
        from .linalg import fraction_str

        return {"name": self.name, "labels": self.labels, "degrees": self.degrees,
                "product": [[i, j, [[k, fraction_str(c)] for k, c in sorted(v.items())]]
                            for (i, j), v in sorted(self.mult.items())],
                "differential": [[i, [[k, fraction_str(c)] for k, c in sorted(v.items())]]
                                 for i, v in sorted(self.diff.items())]}


def truncated_polynomial(n: int, var: str = "t") -> ArtinianAlgebra:
    """``K[t]/(t^n)``; the maximal ideal has basis ``t, .., t^{n-1}``."""
    if n < 1:
        raise ValueError("need n >= 1")
    labels = [f"{var}^{a}" if a > 1 else var for a in range(1, n)]
    mult = {}
    for a in range(1, n):
        for b in range(1, n):
            if a + b < n:
                mult[(a - 1, b - 1)] = {a + b - 1: ONE}
    return ArtinianAlgebra(labels, [0] * (n - 1), mult, order=list(range(1, n)), name=f"K[{var}]/({var}^{n})")


def dual_numbers() -> ArtinianAlgebra:
    return truncated_polynomial(2)


def square_zero(m: int) -> ArtinianAlgebra:
    """``K (+) K[m]``: one generator in degree ``-m`` with square zero."""
    return ArtinianAlgebra(["eps"], [-m], {}, name=f"K+K[{m}]")


def exterior(k: int) -> ArtinianAlgebra:
    """Exterior algebra on ``k`` generators of degree 1 (maximal ideal)."""
    subsets = [s for r in range(1, k + 1) for s in itertools.combinations(range(k), r)]
    index = {s: i for i, s in enumerate(subsets)}
    mult = {}
    for a, s in enumerate(subsets):
        for b, t in enumerate(subsets):
            if set(s) & set(t):
                continue
            merged = s + t
            perm = sorted(range(len(merged)), key=lambda p: merged[p])
            from .graded import permutation_sign

            mult[(a, b)] = {index[tuple(sorted(merged))]: Fraction(permutation_sign(perm))}
    labels = ["e" + "".join(str(i + 1) for i in s) for s in subsets]
    return ArtinianAlgebra(labels, [len(s) for s in subsets], mult, order=[len(s) for s in subsets],
                           name=f"Lambda({k})")


def tensor_algebras(R: ArtinianAlgebra, S: ArtinianAlgebra) -> ArtinianAlgebra:
    """Maximal ideal of ``R (x) S``: ``m_R (+) m_S (+) m_R (x) m_S``."""
    nR, nS = R.dim, S.dim
    # basis: ("r", i), ("s", j), ("rs", i, j)
    basis = [("r", i) for i in range(nR)] + [("s", j) for j in range(nS)] + \
            [("rs", i, j) for i in range(nR) for j in range(nS)]
    index = {b: k for k, b in enumerate(basis)}

    def parts(b):
        """(R part or None, S part or None)"""
        if b[0] == "r":
            return b[1], None
        if b[0] == "s":
            return None, b[1]
        return b[1], b[2]

    def deg(p, which):
        if p is None:
            return 0
        return (R if which == "r" else S).degrees[p]

    def make(rp: dict | None, sp: dict | None) -> dict:
        """Element r (x) s with r, s in K (+) m given as vectors with key None for the unit."""
        out: dict = {}
        for i, a in rp.items():
            for j, b in sp.items():
                if i is None and j is None:
                    continue  # unit part is not in the maximal ideal
                key = ("rs", i, j) if i is not None and j is not None else (("r", i) if j is None else ("s", j))
                vec_add(out, {index[key]: a * b})
        return out

    def rmul(i, j):
        if i is None:
            return {j: ONE}
        if j is None:
            return {i: ONE}
        return R.product(i, j)

    def smul(i, j):
        if i is None:
            return {j: ONE}
        if j is None:
            return {i: ONE}
        return S.product(i, j)

    mult = {}
    for x, bx in enumerate(basis):
        r1, s1 = parts(bx)
        for y, by in enumerate(basis):
            r2, s2 = parts(by)
            # (r1 s1)(r2 s2) = (-1)^{|s1||r2|} r1 r2 s1 s2
            sign = -1 if (deg(s1, "s") * deg(r2, "r")) % 2 else 1
            rp = rmul(r1, r2)
            sp = smul(s1, s2)
            v = make(rp, sp)
            if v:
                mult[(x, y)] = {k: sign * c for k, c in v.items()}
    diff = {}
    for x, bx in enumerate(basis):
        r1, s1 = parts(bx)
        out: dict = {}
        if r1 is not None:
            vec_add(out, make(R.d(r1), {s1: ONE}))
        if s1 is not None:
            sign = -1 if deg(r1, "r") % 2 else 1
            vec_add(out, make({r1: ONE}, S.d(s1)), sign)
        if out:
            diff[x] = out
    labels, degrees, order = [], [], []
    for b in basis:
        r1, s1 = parts(b)
        lab = "*".join(x for x in ((R.labels[r1] if r1 is not None else None),
                                    (S.labels[s1] if s1 is not None else None)) if x)
        labels.append(lab)
        degrees.append(deg(r1, "r") + deg(s1, "s"))
        order.append((R.order[r1] if r1 is not None else 0) + (S.order[s1] if s1 is not None else 0))
    return ArtinianAlgebra(labels, degrees, mult, diff, order, name=f"{R.name}(x){S.name}")


class TensorLInfty(LInftyAlgebra):
    """``g (x) m_R`` with

    ``l_k(x_1 a_1, .., x_k a_k) = (-1)^{sum_{i<j} |a_i||x_j|} l_k(x_1, .., x_k) a_1 .. a_k``

    and the extra term ``(-1)^{|x|} x (x) d a`` in ``l_1``.
    """

    def __init__(self, g: LInftyAlgebra, R: ArtinianAlgebra):
        self.g, self.R = g, R
        pairs = [(x, a) for x in range(g.dim) for a in range(R.dim)]
        self.pairs = pairs
        self.index = {p: k for k, p in enumerate(pairs)}
        cap = min(g.bracket_cap, max(1, R.nilpotency() - 1))
        super().__init__([g.degrees[x] + R.degrees[a] for x, a in pairs],
                         [g.weights[x] + R.order[a] for x, a in pairs],
                         [f"{g.labels[x]}@{R.labels[a]}" for x, a in pairs], cap, name=f"{g.name}(x){R.name}")

    def _sorted_bracket(self, k, tup):
        xs = [self.pairs[t][0] for t in tup]
        as_ = [self.pairs[t][1] for t in tup]
        # product a_1 ... a_k
        prod = {as_[0]: ONE}
        for a in as_[1:]:
            prod = self.R.product_vec(prod, {a: ONE})
            if not prod:
                break
        out: dict = {}
        if prod:
            sign = 1
            for i in range(k):
                for j in range(i + 1, k):
                    if (self.R.degrees[as_[i]] * self.g.degrees[xs[j]]) % 2:
                        sign = -sign
            val = self.g.bracket_basis(k, xs)
            for x, c in val.items():
                for a, e in prod.items():
                    vec_add(out, {self.index[(x, a)]: sign * c * e})
        if k == 1:
            x, a = xs[0], as_[0]
            sign = -1 if self.g.degrees[x] % 2 else 1
            for b, e in self.R.d(a).items():
                vec_add(out, {self.index[(x, b)]: sign * e})
        return out

    def embed(self, x_vec: Mapping[int, Fraction], a: int) -> dict:
        return {self.index[(x, a)]: c for x, c in x_vec.items()}


def tensor_with_ideal(g: LInftyAlgebra, R: ArtinianAlgebra) -> TensorLInfty:
    return TensorLInfty(g, R)
