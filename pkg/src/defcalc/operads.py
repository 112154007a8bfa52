"""Arity-truncated operads and cooperads given by structure constants.

Conventions (all indices 0-based):

* ``compose(r, a, s, b, i)`` is ``a o_i b``: basis element ``b`` of arity ``s``
  is plugged into input ``i`` of ``a``; inputs of the result are the first
  ``i`` inputs of ``a``, then those of ``b``, then the remaining ones of ``a``.
* ``act(r, a, sigma)`` is the right action ``(a.sigma)(x_0..) = a(x_sigma(0), ..)``
  so that ``(a.sigma).tau = a.(compose_perm(tau, sigma))``.
* Elements are sparse vectors ``{basis index: Fraction}``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .graded import GradedSpace, compose_perm, koszul_sign, permutation_sign
from .linalg import vec_add

ONE = Fraction(1)


class SizeError(RuntimeError):
    """Raised when a construction would exceed the configured size budget."""


class Operad:
    """Abstract truncated operad; subclasses supply the structure constants."""

    name = "operad"
    cap: int
    unit: int | None = None

    def dim(self, r: int) -> int:
        raise NotImplementedError

    def degree(self, r: int, a: int) -> int:
        raise NotImplementedError

    def label(self, r: int, a: int) -> str:
        return f"{self.name}({r})[{a}]"

    def compose(self, r: int, a: int, s: int, b: int, i: int) -> dict:
        raise NotImplementedError

    def act(self, r: int, a: int, sigma: tuple) -> dict:
        raise NotImplementedError

    def differential(self, r: int, a: int) -> dict:
        return {}

    @property
    def has_differential(self) -> bool:
        return False

    def unit_vec(self) -> dict | None:
        return None if self.unit is None else {self.unit: ONE}

    def space(self, r: int) -> GradedSpace:
        comps: dict[int, list[str]] = {}
        for a in range(self.dim(r)):
            comps.setdefault(self.degree(r, a), []).append(self.label(r, a))
        return GradedSpace(comps)

    # linear extensions
    def compose_vec(self, r: int, f: dict, s: int, g: dict, i: int) -> dict:
        out: dict = {}
        for a, x in f.items():
            for b, y in g.items():
                vec_add(out, self.compose(r, a, s, b, i), x * y)
        return out

    def act_vec(self, r: int, f: dict, sigma: tuple) -> dict:
        out: dict = {}
        for a, x in f.items():
            vec_add(out, self.act(r, a, sigma), x)
        return out

    def differential_vec(self, r: int, f: dict) -> dict:
        out: dict = {}
        for a, x in f.items():
            vec_add(out, self.differential(r, a), x)
        return out


class TableOperad(Operad):
    """Operad stored as explicit tables."""

    def __init__(self, name, cap, labels, degrees, comp, action, unit=0, diff=None):
        self.name = name
        self.cap = cap
        self.labels = labels          # r -> list[str]
        self.degrees = degrees        # r -> list[int]
        self.comp = comp              # (r, a, s, b, i) -> vec
        self.action = action          # (r, a, sigma) -> vec
        self.unit = unit
        self.diff = diff or {}        # (r, a) -> vec

    def dim(self, r):
        return len(self.labels.get(r, ()))

    def degree(self, r, a):
        return self.degrees[r][a]

    def label(self, r, a):
        return self.labels[r][a]

    def compose(self, r, a, s, b, i):
        return self.comp.get((r, a, s, b, i), {})

    def act(self, r, a, sigma):
        sigma = tuple(sigma)
        if sigma == tuple(range(r)):
            return {a: ONE}
        return self.action[(r, a, sigma)]

    def differential(self, r, a):
        return self.diff.get((r, a), {})

    @property
    def has_differential(self):
        return bool(self.diff)

    @classmethod
    def from_operad(cls, op: Operad, name=None) -> "TableOperad":
        """Materialize all structure constants of ``op`` within its cap."""
        N = op.cap
        labels = {r: [op.label(r, a) for a in range(op.dim(r))] for r in range(1, N + 1)}
        degrees = {r: [op.degree(r, a) for a in range(op.dim(r))] for r in range(1, N + 1)}
        comp = {}
        for r in range(1, N + 1):
            for s in range(1, N + 2 - r):
                for a in range(op.dim(r)):
                    for b in range(op.dim(s)):
                        for i in range(r):
                            v = op.compose(r, a, s, b, i)
                            if v:
                                comp[(r, a, s, b, i)] = dict(v)
        action = {}
        for r in range(1, N + 1):
            for sigma in itertools.permutations(range(r)):
                for a in range(op.dim(r)):
                    action[(r, a, sigma)] = dict(op.act(r, a, sigma))
        diff = {}
        for r in range(1, N + 1):
            for a in range(op.dim(r)):
                v = op.differential(r, a)
                if v:
                    diff[(r, a)] = dict(v)
        unit = op.unit
        uv = op.unit_vec()
        if unit is None and uv is not None and len(uv) == 1 and next(iter(uv.values())) == 1:
            unit = next(iter(uv))
        return cls(name or op.name, N, labels, degrees, comp, action, unit, diff)

    def to_json(self) -> dict:
        from .linalg import fraction_str

        def sv(v):
            return [[k, fraction_str(x)] for k, x in sorted(v.items())]

        return {
            "name": self.name,
            "arity_cap": self.cap,
            "unit": self.unit,
            "arities": {
                str(r): {"labels": self.labels[r], "degrees": self.degrees[r]}
                for r in range(1, self.cap + 1)
            },
            "action": [[r, a, list(sig), sv(v)] for (r, a, sig), v in sorted(self.action.items())
                       if sig != tuple(range(r))],
            "compositions": [[r, a, s, b, i, sv(v)] for (r, a, s, b, i), v in sorted(self.comp.items())],
            "differential": [[r, a, sv(v)] for (r, a), v in sorted(self.diff.items())],
        }

    @classmethod
    def from_json(cls, obj) -> "TableOperad":
        def vec(pairs):
            return {int(k): Fraction(x) for k, x in pairs if Fraction(x)}

        N = int(obj["arity_cap"])
        labels = {int(r): list(v["labels"]) for r, v in obj["arities"].items()}
        degrees = {int(r): [int(d) for d in v["degrees"]] for r, v in obj["arities"].items()}
        for r in range(1, N + 1):
            labels.setdefault(r, [])
            degrees.setdefault(r, [])
        action = {}
        for r in range(1, N + 1):
            for sigma in itertools.permutations(range(r)):
                if sigma != tuple(range(r)):
                    for a in range(len(labels[r])):
                        action[(r, a, sigma)] = {}
        for r, a, sig, v in obj.get("action", []):
            action[(r, a, tuple(sig))] = vec(v)
        comp = {(r, a, s, b, i): vec(v) for r, a, s, b, i, v in obj.get("compositions", [])}
        diff = {(r, a): vec(v) for r, a, v in obj.get("differential", [])}
        return cls(obj.get("name", "user"), N, labels, degrees, comp, action, obj.get("unit"), diff)


# ---------------------------------------------------------------------------
# Associative operad

def ass_operad(N: int) -> TableOperad:
    if N < 2:
        raise ValueError("Ass needs arity cap N >= 2")
    words = {r: list(itertools.permutations(range(r))) for r in range(1, N + 1)}
    index = {r: {w: k for k, w in enumerate(ws)} for r, ws in words.items()}
    labels = {r: ["x" + "".join(str(c) for c in w) for w in ws] for r, ws in words.items()}
    degrees = {r: [0] * len(ws) for r, ws in words.items()}
    comp = {}
    for r in range(1, N + 1):
        for s in range(1, N + 2 - r):
            for a, w in enumerate(words[r]):
                for b, v in enumerate(words[s]):
                    for i in range(r):
                        out = []
                        for c in w:
                            if c < i:
                                out.append(c)
                            elif c > i:
                                out.append(c + s - 1)
                            else:
                                out.extend(i + x for x in v)
                        comp[(r, a, s, b, i)] = {index[r + s - 1][tuple(out)]: ONE}
    action = {}
    for r in range(1, N + 1):
        for sigma in itertools.permutations(range(r)):
            for a, w in enumerate(words[r]):
                action[(r, a, sigma)] = {index[r][tuple(sigma[c] for c in w)]: ONE}
    return TableOperad("Ass", N, labels, degrees, comp, action, unit=0)


def com_operad(N: int) -> TableOperad:
    if N < 2:
        raise ValueError("Com needs arity cap N >= 2")
    labels = {r: ["m" + "".join(str(c) for c in range(r))] for r in range(1, N + 1)}
    degrees = {r: [0] for r in range(1, N + 1)}
    comp = {(r, 0, s, 0, i): {0: ONE} for r in range(1, N + 1) for s in range(1, N + 2 - r) for i in range(r)}
    action = {(r, 0, sigma): {0: ONE} for r in range(1, N + 1) for sigma in itertools.permutations(range(r))}
    return TableOperad("Com", N, labels, degrees, comp, action, unit=0)


# ---------------------------------------------------------------------------
# Free Poisson model: Lie words are multilinear Lie polynomials represented by
# their expansion in the free associative algebra.  The left-normed bracket
# [[x_m, x_p1], ..., x_pk] with m the smallest variable is the unique basis
# element whose expansion contains the word (m, p1, ..., pk); all other words
# of it start with a different letter.  Coordinates of a Lie polynomial are
# therefore its coefficients on words starting with the smallest variable.

@lru_cache(maxsize=None)
def _lie_expansion(word: tuple) -> dict:
    poly = {(word[0],): ONE}
    for v in word[1:]:
        new: dict = {}
        for w, c in poly.items():
            vec_add(new, {w + (v,): c})
            vec_add(new, {(v,) + w: -c})
        poly = new
    return poly


def _lie_coordinates(poly: dict) -> dict:
    if not poly:
        return {}
    m = min(next(iter(poly)))
    return {w: c for w, c in poly.items() if w[0] == m}


@lru_cache(maxsize=None)
def _lie_bracket_words(u: tuple, v: tuple) -> tuple:
    """[u, v] for canonical Lie words on disjoint variables, in canonical words."""
    pu, pv = _lie_expansion(u), _lie_expansion(v)
    prod: dict = {}
    for w1, c1 in pu.items():
        for w2, c2 in pv.items():
            vec_add(prod, {w1 + w2: c1 * c2})
            vec_add(prod, {w2 + w1: -c1 * c2})
    return tuple(sorted(_lie_coordinates(prod).items()))


def _monomial(words) -> tuple:
    return tuple(sorted(words, key=lambda w: w[0]))


def _pois_bracket(f: dict, g: dict) -> dict:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            for a, u in enumerate(m1):
                rest1 = m1[:a] + m1[a + 1:]
                for b, v in enumerate(m2):
                    rest2 = m2[:b] + m2[b + 1:]
                    for w, c in _lie_bracket_words(u, v):
                        key = _monomial(rest1 + rest2 + (w,))
                        vec_add(out, {key: c1 * c2 * c})
    return out


def _pois_product(f: dict, g: dict) -> dict:
    out: dict = {}
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            vec_add(out, {_monomial(m1 + m2): c1 * c2})
    return out


def _pois_evaluate(monomial: tuple, subst: dict) -> dict:
    """Evaluate a Poisson monomial with variables replaced by Poisson elements."""
    result = {(): ONE}
    for word in monomial:
        val = subst[word[0]]
        for v in word[1:]:
            val = _pois_bracket(val, subst[v])
        result = _pois_product(result, val)
    return result


def _set_partitions(elements):
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def _pois_basis(r: int, lie_only: bool = False, com_only: bool = False) -> list[tuple]:
    basis = []
    for part in _set_partitions(list(range(r))):
        if lie_only and len(part) != 1:
            continue
        if com_only and any(len(b) != 1 for b in part):
            continue
        blocks = sorted(sorted(b) for b in part)
        choices = [[(b[0],) + p for p in itertools.permutations(b[1:])] for b in blocks]
        for words in itertools.product(*choices):
            basis.append(_monomial(words))
    return sorted(basis, key=lambda m: (-len(m), m))


def _word_label(word):
    if len(word) == 1:
        return f"x{word[0]}"
    inner = f"x{word[0]}"
    for v in word[1:]:
        inner = f"[{inner},x{v}]"
    return inner


def _free_poisson_operad(name: str, N: int, lie_only=False) -> TableOperad:
    bases = {r: _pois_basis(r, lie_only=lie_only) for r in range(1, N + 1)}
    index = {r: {m: k for k, m in enumerate(b)} for r, b in bases.items()}
    labels = {r: ["*".join(_word_label(w) for w in m) for m in b] for r, b in bases.items()}
    degrees = {r: [0] * len(b) for r, b in bases.items()}

    def to_vec(r, elt):
        out = {}
        for m, c in elt.items():
            if m not in index[r]:
                raise AssertionError(f"{m} outside the basis of arity {r}")
            out[index[r][m]] = c
        return out

    def var(v):
        return {((v,),): ONE}

    comp = {}
    for r in range(1, N + 1):
        for s in range(1, N + 2 - r):
            for a, m in enumerate(bases[r]):
                for i in range(r):
                    subst = {p: var(p) for p in range(i)}
                    subst.update({p: var(p + s - 1) for p in range(i + 1, r)})
                    for b, g in enumerate(bases[s]):
                        gs = {_monomial(tuple(tuple(i + x for x in w) for w in mono)): c
                              for mono, c in {g: ONE}.items()}
                        subst[i] = gs
                        comp[(r, a, s, b, i)] = to_vec(r + s - 1, _pois_evaluate(m, subst))
    action = {}
    for r in range(1, N + 1):
        for sigma in itertools.permutations(range(r)):
            subst = {p: var(sigma[p]) for p in range(r)}
            for a, m in enumerate(bases[r]):
                action[(r, a, sigma)] = to_vec(r, _pois_evaluate(m, subst))
    return TableOperad(name, N, labels, degrees, comp, action, unit=0)


def lie_operad(N: int) -> TableOperad:
    if N < 2:
        raise ValueError("Lie needs arity cap N >= 2")
    return _free_poisson_operad("Lie", N, lie_only=True)


def pois1_operad(N: int) -> TableOperad:
    if N < 2:
        raise ValueError("Pois1 needs arity cap N >= 2")
    return _free_poisson_operad("Pois1", N)


def pois_basis_words(r: int) -> list[tuple]:
    """Monomials (tuples of canonical Lie words) indexing the Pois1(r) basis."""
    return _pois_basis(r)


# ---------------------------------------------------------------------------
# Operad of differentials, truncated by word length in the generator

def di_operad(N: int) -> TableOperad:
    """Unary operad spanned by powers ``delta^k`` (k < N) of a degree-1 generator.

    ``d(delta) = delta o delta`` extends as a derivation, so
    ``d(delta^k) = delta^{k+1}`` for odd ``k`` and 0 for even ``k``.  Words of
    length ``>= N`` form a dg operad ideal, which is what is quotiented out.
    """
    if N < 1:
        raise ValueError("Di needs arity cap N >= 1")
    labels = {1: ["id" if k == 0 else ("delta" if k == 1 else f"delta^{k}") for k in range(N)]}
    degrees = {1: list(range(N))}
    for r in range(2, N + 1):
        labels[r], degrees[r] = [], []
    comp = {(1, a, 1, b, 0): {a + b: ONE} for a in range(N) for b in range(N) if a + b < N}
    action = {(1, a, (0,)): {a: ONE} for a in range(N)}
    diff = {(1, k): {k + 1: ONE} for k in range(1, N - 1, 2)}
    return TableOperad("Di", N, labels, degrees, comp, action, unit=0, diff=diff)


def idem_operad(N: int) -> TableOperad:
    """Unary operad spanned by the unit and an idempotent ``e`` (``e o e = e``).

    Its linear dual is the cooperad with ``Delta(u) = u (x) u`` on the
    coaugmentation ideal, whose cobar construction is the operad of
    differentials."""
    labels = {1: ["id", "e"]}
    degrees = {1: [0, 0]}
    for r in range(2, N + 1):
        labels[r], degrees[r] = [], []
    comp = {(1, 0, 1, 0, 0): {0: ONE}, (1, 0, 1, 1, 0): {1: ONE},
            (1, 1, 1, 0, 0): {1: ONE}, (1, 1, 1, 1, 0): {1: ONE}}
    action = {(1, a, (0,)): {a: ONE} for a in range(2)}
    return TableOperad("Idem", N, labels, degrees, comp, action, unit=0)


BUILTIN = {"Ass": ass_operad, "Com": com_operad, "Lie": lie_operad, "Pois1": pois1_operad, "Di": di_operad}


@lru_cache(maxsize=None)
def builtin_operad(name: str, N: int) -> TableOperad:
    try:
        factory = BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown operad {name!r}; expected one of {sorted(BUILTIN)}") from None
    return factory(N)


# ---------------------------------------------------------------------------
# Endomorphism operad

def default_size_budget() -> int:
    import os

    return int(os.environ.get("DEFCALC_SIZE_BUDGET", "1000000"))


class EndOperad(Operad):
    """``End_X(r) = Hom(X^{(x) r}, X)`` with basis ``E[J -> k]``.

    ``J`` is a tuple of basis indices of X (the input slots) and ``k`` the
    output index; the degree is ``|k| - sum |J|``.
    """

    def __init__(self, degrees: list[int], differential=None, cap: int = 4, budget: int | None = None,
                 labels: list[str] | None = None):
        self.name = "End"
        self.xdeg = list(degrees)
        self.n = len(degrees)
        self.cap = cap
        budget = default_size_budget() if budget is None else budget
        if self.n ** (cap + 1) > budget:
            raise SizeError(f"End_X with dim X = {self.n} at arity cap {cap} needs "
                            f"{self.n ** (cap + 1)} basis maps, above the budget {budget}")
        self.xlabels = labels or [f"e{j}" for j in range(self.n)]
        # differential as columns: j -> {i: coeff} meaning d(e_j) = sum coeff e_i
        self.dcols: list[dict] = [{} for _ in range(self.n)]
        self.drows: list[dict] = [{} for _ in range(self.n)]
        if differential is not None:
            for r, c, v in differential.entries():
                self.dcols[c][r] = v
                self.drows[r][c] = v
        self.unit = None
        self._index: dict[int, dict] = {}
        self._basis: dict[int, list] = {}

    def basis(self, r):
        if r not in self._basis:
            items = [(J, k) for J in itertools.product(range(self.n), repeat=r) for k in range(self.n)]
            self._basis[r] = items
            self._index[r] = {x: a for a, x in enumerate(items)}
        return self._basis[r]

    def index(self, r, J, k):
        self.basis(r)
        return self._index[r][(tuple(J), k)]

    def dim(self, r):
        return self.n ** (r + 1)

    def degree(self, r, a):
        J, k = self.basis(r)[a]
        return self.xdeg[k] - sum(self.xdeg[j] for j in J)

    def label(self, r, a):
        J, k = self.basis(r)[a]
        return f"{''.join(self.xlabels[j] for j in J)}->{self.xlabels[k]}"

    def unit_vec(self):
        return self.identity_vec()

    def identity_vec(self) -> dict:
        return {self.index(1, (j,), j): ONE for j in range(self.n)}

    def compose(self, r, a, s, b, i):
        J, k = self.basis(r)[a]
        J2, k2 = self.basis(s)[b]
        if J[i] != k2:
            return {}
        gdeg = self.xdeg[k2] - sum(self.xdeg[j] for j in J2)
        pre = sum(self.xdeg[j] for j in J[:i])
        sign = -1 if (gdeg * pre) % 2 else 1
        return {self.index(r + s - 1, J[:i] + J2 + J[i + 1:], k): Fraction(sign)}

    def act(self, r, a, sigma):
        J, k = self.basis(r)[a]
        inv = [0] * r
        for p, q in enumerate(sigma):
            inv[q] = p
        y = tuple(J[inv[m]] for m in range(r))
        sign = koszul_sign(sigma, [self.xdeg[j] for j in y])
        return {self.index(r, y, k): Fraction(sign)}

    @property
    def has_differential(self):
        return any(self.dcols)

    def differential(self, r, a):
        """``D f = d f - (-1)^{|f|} sum_i f o_i d``."""
        J, k = self.basis(r)[a]
        fdeg = self.degree(r, a)
        out: dict = {}
        for k2, v in self.dcols[k].items():
            vec_add(out, {self.index(r, J, k2): v})
        sgn = 1 if fdeg % 2 else -1
        for i in range(r):
            pre = sum(self.xdeg[j] for j in J[:i])
            inner = -1 if pre % 2 else 1  # d has degree 1
            for c, v in self.drows[J[i]].items():
                vec_add(out, {self.index(r, J[:i] + (c,) + J[i + 1:], k): sgn * inner * v})
        return out

    def evaluate(self, r, f: dict, inputs: tuple) -> dict:
        """Apply ``f`` to a tuple of basis vectors of X; result in X coordinates."""
        out: dict = {}
        for a, c in f.items():
            J, k = self.basis(r)[a]
            if tuple(J) == tuple(inputs):
                vec_add(out, {k: c})
        return out


def end_operad(X, cap: int = 4, budget: int | None = None) -> EndOperad:
    """Endomorphism operad of a ChainComplex ``X``."""
    return EndOperad(X.space.flat_degrees(), X.differential, cap, budget, X.space.flat_labels())


# ---------------------------------------------------------------------------
# Hadamard products, suspension, linear duals

class HadamardOperad(Operad):
    """Arity-wise tensor product with ``(p(x)e) o_i (p'(x)e') = (-1)^{|e||p'|} (p o_i p') (x) (e o_i e')``."""

    def __init__(self, P: Operad, E: Operad, cap: int | None = None, name=None):
        self.P, self.E = P, E
        self.cap = min(P.cap, E.cap) if cap is None else cap
        self.name = name or f"{P.name}(x){E.name}"
        self.unit = None
        self._cache: dict = {}

    def unit_vec(self):
        pu, eu = self.P.unit_vec(), self.E.unit_vec()
        if pu is None or eu is None:
            return None
        return {self.pack(1, a, b): u * w for a, u in pu.items() for b, w in eu.items()}

    def pack(self, r, a, b):
        return a * self.E.dim(r) + b

    def unpack(self, r, x):
        return divmod(x, self.E.dim(r))

    def dim(self, r):
        return self.P.dim(r) * self.E.dim(r)

    def degree(self, r, x):
        a, b = self.unpack(r, x)
        return self.P.degree(r, a) + self.E.degree(r, b)

    def label(self, r, x):
        a, b = self.unpack(r, x)
        return f"{self.P.label(r, a)}|{self.E.label(r, b)}"

    def compose(self, r, x, s, y, i):
        key = (r, x, s, y, i)
        if key in self._cache:
            return self._cache[key]
        a, b = self.unpack(r, x)
        c, d = self.unpack(s, y)
        out: dict = {}
        ev = self.E.compose(r, b, s, d, i)
        if ev:
            pv = self.P.compose(r, a, s, c, i)
            if pv:
                sign = -1 if (self.E.degree(r, b) * self.P.degree(s, c)) % 2 else 1
                t = r + s - 1
                for p, u in pv.items():
                    for e, w in ev.items():
                        out[self.pack(t, p, e)] = sign * u * w
        self._cache[key] = out
        return out

    def act(self, r, x, sigma):
        a, b = self.unpack(r, x)
        out = {}
        for p, u in self.P.act(r, a, sigma).items():
            for e, w in self.E.act(r, b, sigma).items():
                out[self.pack(r, p, e)] = u * w
        return out

    @property
    def has_differential(self):
        return self.P.has_differential or self.E.has_differential

    def differential(self, r, x):
        a, b = self.unpack(r, x)
        out: dict = {}
        for p, u in self.P.differential(r, a).items():
            vec_add(out, {self.pack(r, p, b): u})
        sign = -1 if self.P.degree(r, a) % 2 else 1
        for e, w in self.E.differential(r, b).items():
            vec_add(out, {self.pack(r, a, e): sign * w})
        return out


def _sign_operad(N: int, odd: bool, normalize: bool) -> TableOperad:
    """One-dimensional operad ``End`` of a line in degree -1 (or +1).

    With ``odd`` the arity-r generator has degree ``r-1`` (resp. ``1-r``) and
    Sigma acts by the sign; ``normalize`` rescales the generators by
    ``(-1)^{(r-1)(r-2)/2}`` so that suspending by +1 then -1 is the identity on
    structure constants.
    """
    E = EndOperad([-1 if not normalize else 1], cap=N, budget=10 ** 9)
    T = TableOperad.from_operad(E, name="Lambda" if not normalize else "Lambda^-1")
    if normalize:
        def c(r):
            return -1 if ((r - 1) * (r - 2) // 2) % 2 else 1
        T.comp = {(r, a, s, b, i): {k: v * c(r) * c(s) * c(r + s - 1) for k, v in vec.items()}
                  for (r, a, s, b, i), vec in T.comp.items()}
    return T


@lru_cache(maxsize=None)
def suspension_operad(N: int, sign: int) -> TableOperad:
    """Operad used for one step of operadic suspension (``sign`` = +1 or -1)."""
    return _sign_operad(N, True, normalize=(sign < 0))


def operad_suspension(P: Operad, n: int) -> Operad:
    """``P{n}``: iterated arity-wise tensor with the sign operad; arity r shifts degree by ``n(r-1)``."""
    out = P
    for _ in range(abs(n)):
        out = TableOperad.from_operad(HadamardOperad(out, suspension_operad(P.cap, 1 if n > 0 else -1)),
                                      name=f"{out.name}{{{'+' if n > 0 else '-'}1}}")
        out.labels = {r: [lab.split("|")[0] for lab in labs] for r, labs in out.labels.items()}
    return out


class Cooperad:
    """Finite cooperad stored via the operad of its linear dual.

    ``decompose(n, c)`` returns the infinitesimal cocomposition of the basis
    element ``c`` as ``{(r, a, s, b, i): coeff}``: the transposed composition
    constants of the dual operad.
    """

    def __init__(self, dual: Operad, name=None):
        self._dual = dual
        self.cap = dual.cap
        self.name = name or f"{dual.name}*"
        self._decomp = None

    def dual_operad(self) -> Operad:
        return self._dual

    def dim(self, r):
        return self._dual.dim(r)

    def degree(self, r, a):
        return -self._dual.degree(r, a)

    def label(self, r, a):
        return self._dual.label(r, a) + "*"

    def coaugmentation_unit(self):
        return self._dual.unit

    def _build(self):
        dec: dict = {}
        P = self._dual
        N = P.cap
        for r in range(1, N + 1):
            for s in range(1, N + 2 - r):
                for a in range(P.dim(r)):
                    for b in range(P.dim(s)):
                        for i in range(r):
                            for c, v in P.compose(r, a, s, b, i).items():
                                dec.setdefault((r + s - 1, c), {})[(r, a, s, b, i)] = v
        self._decomp = dec

    def decompose(self, n, c) -> dict:
        if self._decomp is None:
            self._build()
        return self._decomp.get((n, c), {})

    def act(self, r, a, sigma) -> dict:
        """Dual (contragredient) action: transpose of the inverse permutation."""
        P = self._dual
        inv = [0] * r
        for p, q in enumerate(sigma):
            inv[q] = p
        inv = tuple(inv)
        out = {}
        for b in range(P.dim(r)):
            v = P.act(r, b, inv).get(a)
            if v:
                out[b] = v
        return out


def linear_dual(P) -> "Cooperad | Operad":
    """Dual of an operad (a cooperad) or of a cooperad (its operad)."""
    if isinstance(P, Cooperad):
        return P.dual_operad()
    return Cooperad(P)


def operadic_suspension(C, n: int):
    """Suspension of an operad or a cooperad.

    For operads arity-r degrees rise by ``n(r-1)``; for cooperads the
    suspension is dual to that of the dual operad, so degrees drop by
    ``n(r-1)``.
    """
    if n == 0:
        return C
    if isinstance(C, Cooperad):
        return Cooperad(operad_suspension(C.dual_operad(), n), name=f"{C.name}{{{n}}}")
    return operad_suspension(C, n)


def koszul_dual_cooperad(name: str, N: int) -> Cooperad:
    """Cooperad whose convolution algebra with ``End_X`` classifies ``name``-algebras."""
    partner = {"Ass": "Ass", "Com": "Lie", "Lie": "Com", "Pois1": "Pois1"}
    if name == "Di":
        return Cooperad(idem_operad(N), name="Di^!")
    if name not in partner:
        raise ValueError(f"no Koszul dual data for {name!r}")
    Q = operad_suspension(builtin_operad(partner[name], N), 1)
    return Cooperad(Q, name=f"{name}^!")


# ---------------------------------------------------------------------------
# Axiom checks

def _vec_eq(u, v):
    return {k: x for k, x in u.items() if x} == {k: x for k, x in v.items() if x}


def check_operad_axioms(P: Operad, N: int | None = None, stop_after: int | None = None) -> list[str]:
    """Exhaustively check the operad axioms within arity ``N``; returns violations."""
    N = P.cap if N is None else N
    bad: list[str] = []

    def report(msg):
        bad.append(msg)
        return stop_after is not None and len(bad) >= stop_after

    dims = {r: P.dim(r) for r in range(1, N + 1)}
    # unit
    e = P.unit_vec()
    if e is not None:
        for r in range(1, N + 1):
            for a in range(dims[r]):
                if not _vec_eq(P.compose_vec(1, e, r, {a: ONE}, 0), {a: ONE}):
                    if report(f"left unit fails on arity {r} element {a}"):
                        return bad
                for i in range(r):
                    if not _vec_eq(P.compose_vec(r, {a: ONE}, 1, e, i), {a: ONE}):
                        if report(f"right unit fails on arity {r} element {a} slot {i}"):
                            return bad
    # action is a right action
    for r in range(2, N + 1):
        perms = list(itertools.permutations(range(r)))
        gens = [perms[1], tuple(list(range(1, r)) + [0])]
        for a in range(dims[r]):
            for sigma in gens:
                for tau in perms:
                    lhs = P.act_vec(r, P.act(r, a, sigma), tau)
                    rhs = P.act(r, a, compose_perm(tau, sigma))
                    if not _vec_eq(lhs, rhs):
                        if report(f"action not associative at arity {r} element {a} {sigma} {tau}"):
                            return bad
    # associativity
    for r in range(1, N + 1):
        for s in range(1, N + 2 - r):
            for t in range(1, N + 3 - r - s):
                for a in range(dims[r]):
                    for b in range(dims[s]):
                        for c in range(dims[t]):
                            for i in range(r):
                                fg = P.compose(r, a, s, b, i)
                                for k in range(s):
                                    lhs = P.compose_vec(r + s - 1, fg, t, {c: ONE}, i + k)
                                    rhs = P.compose_vec(r, {a: ONE}, s + t - 1, P.compose(s, b, t, c, k), i)
                                    if not _vec_eq(lhs, rhs):
                                        if report(f"sequential associativity fails: ({r},{a}) o_{i} "
                                                  f"({s},{b}) o_{k} ({t},{c})"):
                                            return bad
                                for j in range(i + 1, r):
                                    lhs = P.compose_vec(r + s - 1, fg, t, {c: ONE}, j + s - 1)
                                    fh = P.compose(r, a, t, c, j)
                                    rhs = P.compose_vec(r + t - 1, fh, s, {b: ONE}, i)
                                    if (P.degree(s, b) * P.degree(t, c)) % 2:
                                        rhs = {k2: -v for k2, v in rhs.items()}
                                    if not _vec_eq(lhs, rhs):
                                        if report(f"parallel associativity fails: ({r},{a}) slots {i},{j} "
                                                  f"with ({s},{b}), ({t},{c})"):
                                            return bad
    # equivariance
    for r in range(1, N + 1):
        for s in range(1, N + 2 - r):
            n = r + s - 1
            for sigma in itertools.permutations(range(r)):
                inv = [0] * r
                for p, q in enumerate(sigma):
                    inv[q] = p
                for i in range(r):
                    j = inv[i]

                    def ex(m):
                        return m if m < i else m + s - 1

                    rho = []
                    for p in range(n):
                        if p < j:
                            rho.append(ex(sigma[p]))
                        elif p < j + s:
                            rho.append(i + p - j)
                        else:
                            rho.append(ex(sigma[p - s + 1]))
                    rho = tuple(rho)
                    for a in range(dims[r]):
                        fs = P.act(r, a, sigma)
                        for b in range(dims[s]):
                            lhs = P.compose_vec(r, fs, s, {b: ONE}, i)
                            rhs = P.act_vec(n, P.compose(r, a, s, b, j), rho)
                            if not _vec_eq(lhs, rhs):
                                if report(f"equivariance fails: ({r},{a}).{sigma} o_{i} ({s},{b})"):
                                    return bad
            for tau in itertools.permutations(range(s)):
                for i in range(r):
                    rho = tuple(list(range(i)) + [i + t for t in tau] + list(range(i + s, n)))
                    for a in range(dims[r]):
                        for b in range(dims[s]):
                            lhs = P.compose_vec(r, {a: ONE}, s, P.act(s, b, tau), i)
                            rhs = P.act_vec(n, P.compose(r, a, s, b, i), rho)
                            if not _vec_eq(lhs, rhs):
                                if report(f"equivariance fails: ({r},{a}) o_{i} ({s},{b}).{tau}"):
                                    return bad
    # differential
    if P.has_differential:
        for r in range(1, N + 1):
            for a in range(dims[r]):
                if P.differential_vec(r, P.differential(r, a)):
                    if report(f"d^2 != 0 on arity {r} element {a}"):
                        return bad
                for sigma in itertools.permutations(range(r)):
                    if not _vec_eq(P.differential_vec(r, P.act(r, a, sigma)),
                                   P.act_vec(r, P.differential(r, a), sigma)):
                        if report(f"d not equivariant at arity {r} element {a}"):
                            return bad
            for s in range(1, N + 2 - r):
                for a in range(dims[r]):
                    for b in range(dims[s]):
                        for i in range(r):
                            lhs = P.differential_vec(r + s - 1, P.compose(r, a, s, b, i))
                            rhs = P.compose_vec(r, P.differential(r, a), s, {b: ONE}, i)
                            sign = -1 if P.degree(r, a) % 2 else 1
                            vec_add(rhs, P.compose_vec(r, {a: ONE}, s, P.differential(s, b), i), sign)
                            if not _vec_eq(lhs, rhs):
                                if report(f"d not a derivation: ({r},{a}) o_{i} ({s},{b})"):
                                    return bad
    return bad


def check_cooperad_axioms(C: Cooperad, N: int | None = None) -> list[str]:
    """Coassociativity and counit of ``C`` by brute-force expansion of the
    iterated decompositions, compared term by term with the transposed
    associativity of the dual constants."""
    N = C.cap if N is None else N
    bad = []
    # sequential coassociativity: (Delta o_i id) Delta vs (id o_i Delta) Delta on every basis element
    for n in range(1, N + 1):
        for x in range(C.dim(n)):
            lhs: dict = {}
            rhs: dict = {}
            for (r, a, s, b, i), v in C.decompose(n, x).items():
                # split the left factor a further
                for (r1, a1, s1, b1, i1), w in C.decompose(r, a).items():
                    # a = a1 o_{i1} b1; if the slot i of a lies inside b1 -> sequential
                    if i1 <= i < i1 + s1:
                        key = ("seq", r1, a1, s1, b1, i1, i - i1, s, b)
                        vec_add(lhs, {key: v * w})
                # split the right factor b further
                for (r2, a2, s2, b2, i2), w in C.decompose(s, b).items():
                    key = ("seq", r, a, r2, a2, i, i2, s2, b2)
                    vec_add(rhs, {key: v * w})
            if not _vec_eq(lhs, rhs):
                bad.append(f"coassociativity fails on arity {n} element {x}")
    unit = C.coaugmentation_unit()
    if unit is not None:
        for n in range(1, N + 1):
            for x in range(C.dim(n)):
                dec = C.decompose(n, x)
                if dec.get((1, unit, n, x, 0)) != ONE:
                    bad.append(f"left counit fails on arity {n} element {x}")
                for i in range(n):
                    if dec.get((n, x, 1, unit, i)) != ONE:
                        bad.append(f"right counit fails on arity {n} element {x}")
    return bad


def operads_equal(P: Operad, Q: Operad) -> bool:
    """Identical structure constants (same bases)."""
    if P.cap != Q.cap:
        return False
    N = P.cap
    for r in range(1, N + 1):
        if P.dim(r) != Q.dim(r):
            return False
        if any(P.degree(r, a) != Q.degree(r, a) for a in range(P.dim(r))):
            return False
        for sigma in itertools.permutations(range(r)):
            if any(not _vec_eq(P.act(r, a, sigma), Q.act(r, a, sigma)) for a in range(P.dim(r))):
                return False
        for s in range(1, N + 2 - r):
            for a in range(P.dim(r)):
                for b in range(P.dim(s)):
                    for i in range(r):
                        if not _vec_eq(P.compose(r, a, s, b, i), Q.compose(r, a, s, b, i)):
                            return False
    return True


__all__ = [
    "Operad", "TableOperad", "EndOperad", "HadamardOperad", "Cooperad", "SizeError",
    "builtin_operad", "ass_operad", "com_operad", "lie_operad", "pois1_operad", "di_operad", "idem_operad",
    "end_operad", "linear_dual", "operadic_suspension", "operad_suspension", "koszul_dual_cooperad",
    "check_operad_axioms", "check_cooperad_axioms", "operads_equal", "permutation_sign",
]
