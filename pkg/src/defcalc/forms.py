"""Polynomial differential forms on the standard simplices.

``Omega_n`` is generated by ``t_0..t_n`` and ``dt_0..dt_n`` modulo
``t_0 + .. + t_n = 1`` and ``dt_0 + .. + dt_n = 0``.  Forms are stored in the
reduced coordinates ``t_1..t_n`` (``t_0`` eliminated) as dictionaries
``(exponents, dts) -> coefficient`` with ``dts`` a sorted tuple of indices in
``1..n``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Mapping

ONE = Fraction(1)


def _add(out: dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _wedge_sign(a: tuple, b: tuple):
    """Sign and merged tuple of ``dt_a ^ dt_b`` (None when they share an index)."""
    if set(a) & set(b):
        return 0, None
    merged = a + b
    inversions = sum(1 for i in range(len(merged)) for j in range(i + 1, len(merged)) if merged[i] > merged[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(merged))


class SullivanForms:
    """``Omega_n`` with basis truncated at polynomial degree ``D``."""

    def __init__(self, n: int, D: int = 4):
        if n < 0 or D < 0:
            raise ValueError("need n >= 0 and D >= 0")
        self.n, self.D = n, D

    # element constructors
    def one(self) -> dict:
        return {((0,) * self.n, ()): ONE}

    def t(self, i: int) -> dict:
        """Barycentric coordinate ``t_i`` (``t_0 = 1 - t_1 - .. - t_n``)."""
        n = self.n
        unit = lambda j: tuple(1 if k == j - 1 else 0 for k in range(n))
        if i == 0:
            out = self.one()
            for j in range(1, n + 1):
                _add(out, (unit(j), ()), -ONE)
            return out
        return {(unit(i), ()): ONE}

    def dt(self, i: int) -> dict:
        return self.d(self.t(i))

    def basis(self, degree: int | None = None) -> list[tuple]:
        """Monomial keys of polynomial degree <= D (optionally of one form degree)."""
        n = self.n
        out = []
        for total in range(self.D + 1):
            for exps in _compositions(total, n):
                for k in range(n + 1):
                    if degree is not None and k != degree:
                        continue
                    for dts in itertools.combinations(range(1, n + 1), k):
                        out.append((exps, dts))
        return out

    @staticmethod
    def degree(key) -> int:
        return len(key[1])

    # algebra
    def mul(self, a: Mapping, b: Mapping) -> dict:
        out: dict = {}
        for (ea, da), ca in a.items():
            for (eb, db), cb in b.items():
                s, merged = _wedge_sign(da, db)
                if not s:
                    continue
                _add(out, (tuple(x + y for x, y in zip(ea, eb)), merged), s * ca * cb)
        return out

    def d(self, a: Mapping) -> dict:
        out: dict = {}
        for (e, dts), c in a.items():
            for i in range(self.n):
                if e[i] == 0 or (i + 1) in dts:
                    continue
                s, merged = _wedge_sign((i + 1,), dts)
                e2 = tuple(x - 1 if k == i else x for k, x in enumerate(e))
                _add(out, (e2, merged), s * c * e[i])
        return out

    def add(self, a: Mapping, b: Mapping, scale=ONE) -> dict:
        out = dict(a)
        for k, c in b.items():
            _add(out, k, scale * c)
        return out

    # simplicial structure
    def substitute(self, a: Mapping, images: list[dict], target: "SullivanForms") -> dict:
        """Pull back along the map sending ``t_j`` (j = 1..n) to ``images[j-1]``."""
        dimages = [target.d(x) for x in images]
        out: dict = {}
        for (e, dts), c in a.items():
            term = target.one()
            for j, p in enumerate(e):
                for _ in range(p):
                    term = target.mul(term, images[j])
            for j in dts:
                term = target.mul(term, dimages[j - 1])
            for k, v in term.items():
                _add(out, k, c * v)
        return out

    def face(self, i: int, a: Mapping) -> dict:
        """``d_i``: restriction to the face opposite vertex ``i`` (``t_i = 0``)."""
        if self.n == 0:
            raise ValueError("Omega_0 has no faces")
        tgt = SullivanForms(self.n - 1, self.D)
        images = []
        for j in range(1, self.n + 1):
            if j < i:
                images.append(tgt.t(j))
            elif j == i:
                images.append({})
            else:
                images.append(tgt.t(j - 1))
        return self.substitute(a, images, tgt)

    def degeneracy(self, i: int, a: Mapping) -> dict:
        """``s_i``: pull back along the map collapsing vertices ``i, i+1``."""
        tgt = SullivanForms(self.n + 1, self.D)
        images = []
        for j in range(1, self.n + 1):
            if j < i:
                images.append(tgt.t(j))
            elif j == i:
                images.append(tgt.add(tgt.t(i), tgt.t(i + 1)))
            else:
                images.append(tgt.t(j + 1))
        return self.substitute(a, images, tgt)

    def vertex(self, i: int, a: Mapping) -> Fraction:
        """Value of a 0-form at vertex ``i``."""
        out = Fraction(0)
        for (e, dts), c in a.items():
            # at vertex i only powers of t_i survive (vertex 0: constants)
            if not dts and all(x == 0 for k, x in enumerate(e) if k != i - 1):
                out += c
        return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
