"""Freeze golden cohomology tables from an independent direct-rank oracle.

Hochschild and Gerstenhaber-Schack complexes are rebuilt here from the raw
structure constants of the serialized algebras, with their own differentials,
and ranks come from sympy's ``DomainMatrix`` over QQ.  The Pois tables use the
package's differential but sympy ranks; the Pois complex is only reachable
up to degree 3 (weight cap 5).

Run ``python tests/golden/freeze_golden.py`` to rewrite ``cohomology.json``.
"""

import itertools
import json
from fractions import Fraction
from pathlib import Path

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

MAX_DEGREE = 6
POIS_WEIGHT = 5
GOLDEN = Path(__file__).with_name("cohomology.json")


def _structure(alg_json, key):
    out = {}
    for i, j, k, c in alg_json.get(key, []):
        out.setdefault((i, j), {})
        out[(i, j)][k] = out[(i, j)].get(k, 0) + Fraction(c)
    return out


def _coproduct(alg_json):
    out = {}
    for x, y, z, c in alg_json.get("coproduct", []):
        out.setdefault(x, {})[(y, z)] = Fraction(c)
    return out


def _rank(rows, n_rows, n_cols):
    if not n_rows or not n_cols:
        return 0
    data = {r: {c: QQ(v.numerator, v.denominator) for c, v in row.items() if v} for r, row in rows.items()}
    data = {r: row for r, row in data.items() if row}
    return DomainMatrix(data, (n_rows, n_cols), QQ).rank()


def _add(rows, r, c, v):
    if v:
        row = rows.setdefault(r, {})
        row[c] = row.get(c, 0) + v


def _cohomology(dims, ranks, top):
    """``dims[d]`` and ``ranks[d]`` (rank of the map out of degree d) for d <= top."""
    return {d: dims.get(d, 0) - ranks.get(d, 0) - ranks.get(d - 1, 0) for d in range(min(dims), top + 1)}


# ---------------------------------------------------------------------------
# Hochschild: C^n = Hom(A^n, A), n >= 0, for algebras in degree 0

def hochschild_table(alg_json, top=MAX_DEGREE):
    b = sum(alg_json["dims"].values())
    assert set(alg_json["dims"]) == {"0"}
    mul = _structure(alg_json, "product")

    def cochains(n):
        return {(J, k): i for i, (J, k) in enumerate(
            (J, k) for J in itertools.product(range(b), repeat=n) for k in range(b))}

    bases = {n: cochains(n) for n in range(top + 2)}
    ranks = {}
    for n in range(top + 1):
        src, tgt = bases[n], bases[n + 1]
        rows = {}
        for I in itertools.product(range(b), repeat=n + 1):
            for k in range(b):
                # a_0 f(a_1..a_n)
                for (x, y), prod in mul.items():
                    if x == I[0] and prod.get(k):
                        _add(rows, tgt[(I, k)], src[(I[1:], y)], prod[k])
                for i in range(1, n + 1):
                    for z, c in mul.get((I[i - 1], I[i]), {}).items():
                        J = I[:i - 1] + (z,) + I[i + 1:]
                        _add(rows, tgt[(I, k)], src[(J, k)], (-1) ** i * c)
                # f(a_0..a_{n-1}) a_n
                for (x, y), prod in mul.items():
                    if y == I[-1] and prod.get(k):
                        _add(rows, tgt[(I, k)], src[(I[:-1], x)], (-1) ** (n + 1) * prod[k])
        ranks[n] = _rank(rows, len(tgt), len(src))
    dims = {n: len(bases[n]) for n in range(top + 2)}
    return _cohomology(dims, ranks, top)


# ---------------------------------------------------------------------------
# Gerstenhaber-Schack: C^{p,q} = Hom(B^p, B^q), p, q >= 1, total degree p + q

def gs_table(alg_json, top=MAX_DEGREE):
    b = sum(alg_json["dims"].values())
    mul = _structure(alg_json, "product")
    cop = _coproduct(alg_json)

    def product_of(xs):
        vec = {xs[0]: Fraction(1)}
        for x in xs[1:]:
            nxt = {}
            for y, c in vec.items():
                for z, e in mul.get((y, x), {}).items():
                    nxt[z] = nxt.get(z, 0) + c * e
            vec = nxt
        return vec

    def coproduct_power(a, q):
        vec = {(a,): Fraction(1)}
        for _ in range(q - 1):
            nxt = {}
            for t, c in vec.items():
                for (y, z), e in cop.get(t[-1], {}).items():
                    key = t[:-1] + (y, z)
                    nxt[key] = nxt.get(key, 0) + c * e
            vec = nxt
        return vec

    def componentwise(u, v):
        # (x_1..x_q)(y_1..y_q) in B^q
        out = {(): Fraction(1)}
        for x, y in zip(u, v):
            nxt = {}
            for t, c in out.items():
                for z, e in mul.get((x, y), {}).items():
                    nxt[t + (z,)] = nxt.get(t + (z,), 0) + c * e
            out = nxt
        return out

    def split(I):
        # sum of (first legs, second legs) of the coproducts of each factor
        out = {((), ()): Fraction(1)}
        for x in I:
            nxt = {}
            for (xs, ys), c in out.items():
                for (y, z), e in cop.get(x, {}).items():
                    key = (xs + (y,), ys + (z,))
                    nxt[key] = nxt.get(key, 0) + c * e
            out = nxt
        return out

    cells = [(p, q) for p in range(1, top + 1) for q in range(1, top + 1) if p + q <= top + 1]
    index = {}
    for d in range(2, top + 2):
        i = 0
        for p, q in cells:
            if p + q != d:
                continue
            for J in itertools.product(range(b), repeat=p):
                for K in itertools.product(range(b), repeat=q):
                    index[(J, K)] = i
                    i += 1
    dims = {}
    for J, K in index:
        dims[len(J) + len(K)] = dims.get(len(J) + len(K), 0) + 1

    def differential(d):
        rows = {}
        for p, q in cells:
            if p + q != d + 1:
                continue
            for I in itertools.product(range(b), repeat=p):
                for L in itertools.product(range(b), repeat=q):
                    r = index[(I, L)]
                    if p >= 2:
                        # Hochschild part from C^{p-1,q}
                        for K in itertools.product(range(b), repeat=q):
                            col = index[(I[1:], K)]
                            for D, c in coproduct_power(I[0], q).items():
                                _add(rows, r, col, c * componentwise(D, K).get(L, 0))
                            col = index[(I[:-1], K)]
                            for D, c in coproduct_power(I[-1], q).items():
                                _add(rows, r, col, (-1) ** p * c * componentwise(K, D).get(L, 0))
                        for i in range(1, p):
                            for z, c in mul.get((I[i - 1], I[i]), {}).items():
                                _add(rows, r, index[(I[:i - 1] + (z,) + I[i + 1:], L)], (-1) ** i * c)
                    if q >= 2:
                        # coHochschild part from C^{p,q-1}, twisted by (-1)^p
                        tw = (-1) ** p
                        for (xs, ys), c in split(I).items():
                            for z, e in product_of(xs).items():
                                if z == L[0]:
                                    _add(rows, r, index[(ys, L[1:])], tw * c * e)
                            for z, e in product_of(ys).items():
                                if z == L[-1]:
                                    _add(rows, r, index[(xs, L[:-1])], tw * (-1) ** q * c * e)
                        for i in range(1, q):
                            K = L[:i - 1] + L[i + 1:]
                            for y in range(b):
                                e = cop.get(y, {}).get((L[i - 1], L[i]), 0)
                                if e:
                                    _add(rows, r, index[(I, K[:i - 1] + (y,) + K[i - 1:])], tw * (-1) ** i * e)
        return rows

    ranks = {}
    mats = {}
    for d in range(2, top + 1):
        mats[d] = differential(d)
        ranks[d] = _rank(mats[d], dims[d + 1], dims[d])
    # d^2 = 0 on the reachable range
    for d in range(2, top):
        A = DomainMatrix({r: {c: QQ(v.numerator, v.denominator) for c, v in row.items()} for r, row in mats[d].items()},
                         (dims[d + 1], dims[d]), QQ)
        B = DomainMatrix({r: {c: QQ(v.numerator, v.denominator) for c, v in row.items()} for r, row in mats[d + 1].items()},
                         (dims[d + 2], dims[d + 1]), QQ)
        assert (B * A).to_sdm() == {}, f"GS oracle d^2 != 0 in degree {d}"
    return _cohomology(dims, ranks, top)


# ---------------------------------------------------------------------------
# Pois: the package's differential, ranked by sympy

def pois_tables(alg, W=POIS_WEIGHT):
    from defcalc.defcomplexes import PoisComplex

    P = PoisComplex(alg, 1, "full", W)
    top = P.stable_degree()
    out = {}
    for variant, linfty in (("full", P.linfty), ("gt0", P.sequence.total), ("gt1", P.sequence.fiber)):
        degrees = linfty.degrees
        M = linfty.l1_matrix()
        pos = {}
        by_deg = {}
        for i, d in enumerate(degrees):
            pos[i] = len(by_deg.setdefault(d, []))
            by_deg[d].append(i)
        ranks = {}
        for d in by_deg:
            rows = {}
            for r, row in M.data.items():
                if degrees[r] != d + 1:
                    continue
                for c, v in row.items():
                    assert degrees[c] == d
                    _add(rows, pos[r], pos[c], v)
            ranks[d] = _rank(rows, len(by_deg.get(d + 1, [])), len(by_deg[d]))
        dims = {d: len(v) for d, v in by_deg.items()}
        coh = {d: dims[d] - ranks.get(d, 0) - ranks.get(d - 1, 0) for d in sorted(dims) if d <= top}
        out[variant] = coh
    return out, top


def _strkeys(table):
    return {str(k): v for k, v in table.items()}


def main():
    from defcalc.algebras import associative_corpus, ground_field, group_bialgebra_z2, poisson_fixtures

    golden = {"max_degree": MAX_DEGREE, "hochschild": {}, "gs": {}, "pois": {}}
    for alg in associative_corpus():
        if alg.dim <= 2:
            golden["hochschild"][alg.name] = _strkeys(hochschild_table(alg.to_json()))
    for B in (ground_field("bialg"), group_bialgebra_z2()):
        golden["gs"][B.name] = _strkeys(gs_table(B.to_json()))
    for alg in poisson_fixtures():
        tables, top = pois_tables(alg)
        golden["pois"][alg.name] = {"weight_cap": POIS_WEIGHT, "stable_degree": top,
                                    **{v: _strkeys(t) for v, t in tables.items()}}
    GOLDEN.write_text(json.dumps(golden, indent=1, sort_keys=True) + "\n")
    print(json.dumps(golden, indent=1, sort_keys=True))


if __name__ == "__main__":
    main()
