"""Graded vector spaces, graded maps, chain complexes and Koszul signs.

Grading is cohomological.  Every sign produced by permuting graded symbols
comes from :func:`koszul_sign`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .linalg import SparseMatrix, rank


def koszul_sign(perm: Sequence[int], degrees: Sequence[int], antisymmetric: bool = False) -> int:
    """Sign of reordering graded symbols.

    ``perm[p]`` is the input position of the symbol placed at output position
    ``p`` and ``degrees`` are the input degrees.  The sign is accumulated over
    adjacent transpositions (bubble sort), each contributing
    ``(-1)^{|a||b|}``; with ``antisymmetric`` every transposition carries an
    extra ``-1``.
    """
    if len(perm) != len(degrees):
        raise ValueError(f"permutation of length {len(perm)} but {len(degrees)} degrees")
    if sorted(perm) != list(range(len(perm))):
        raise ValueError(f"not a permutation: {perm}")
    # bubble sort the current arrangement back to identity
    arr = list(perm)
    sign = 1
    n = len(arr)
    for i in range(n):
        for j in range(n - 1 - i):
            if arr[j] > arr[j + 1]:
                a, b = arr[j], arr[j + 1]
                if degrees[a] % 2 and degrees[b] % 2:
                    sign = -sign
                if antisymmetric:
                    sign = -sign
                arr[j], arr[j + 1] = b, a
    return sign


def permutation_sign(perm: Sequence[int]) -> int:
    return koszul_sign(perm, [0] * len(perm), antisymmetric=True)


def compose_perm(sigma: Sequence[int], tau: Sequence[int]) -> tuple[int, ...]:
    """``(sigma o tau)(p) = sigma[tau[p]]``."""
    return tuple(sigma[t] for t in tau)


def inverse_perm(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for p, s in enumerate(sigma):
        inv[s] = p
    return tuple(inv)


@dataclass(frozen=True)
class GradedSpace:
    """Finite-dimensional graded space; ``components`` maps degree to labels."""

    components: Mapping[int, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        comps = {int(d): tuple(labels) for d, labels in sorted(self.components.items()) if labels}
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_dims(cls, dims: Mapping[int, int], prefix: str = "e") -> "GradedSpace":
        comps = {}
        for d, n in sorted(dims.items()):
            comps[d] = tuple(f"{prefix}{d}_{i}" for i in range(n))
        return cls(comps)

    def dim(self, d: int | None = None) -> int:
        if d is None:
            return sum(len(v) for v in self.components.values())
        return len(self.components.get(d, ()))

    def dims(self) -> dict[int, int]:
        return {d: len(v) for d, v in self.components.items()}

    def degrees(self) -> list[int]:
        return list(self.components)

    def basis(self) -> list[tuple[int, int]]:
        """Flat basis as (degree, index) pairs, degree-ascending."""
        return [(d, i) for d, labels in self.components.items() for i in range(len(labels))]

    def flat_degrees(self) -> list[int]:
        return [d for d, _ in self.basis()]

    def flat_labels(self) -> list[str]:
        return [lab for labels in self.components.values() for lab in labels]

    def offset(self, d: int) -> int:
        off = 0
        for e, labels in self.components.items():
            if e == d:
                return off
            off += len(labels)
        return off

    def to_json(self) -> dict:
        return {"components": {str(d): {"dim": len(l), "labels": list(l)} for d, l in self.components.items()}}

    @classmethod
    def from_json(cls, obj) -> "GradedSpace":
        comps = {}
        for d, entry in obj["components"].items():
            labels = entry.get("labels") or [f"e{d}_{i}" for i in range(entry["dim"])]
            if len(labels) != entry["dim"]:
                raise ValueError(f"degree {d}: {entry['dim']} dims but {len(labels)} labels")
            comps[int(d)] = tuple(labels)
        return cls(comps)


def tensor(A: GradedSpace, B: GradedSpace) -> GradedSpace:
    """Degree-d part is the sum of A_p (x) B_q, ordered by (p, i, j)."""
    comps: dict[int, list[str]] = {}
    for p, la in A.components.items():
        for q, lb in B.components.items():
            comps.setdefault(p + q, []).extend(f"{a}*{b}" for a in la for b in lb)
    return GradedSpace(comps)


def shift(A: GradedSpace, n: int) -> GradedSpace:
    """``A[n]_d = A_{d+n}``."""
    return GradedSpace({d - n: labels for d, labels in A.components.items()})


@dataclass(frozen=True)
class GradedMap:
    """A map of fixed degree, stored as one sparse matrix on flat bases."""

    source: GradedSpace
    target: GradedSpace
    degree: int
    matrix: SparseMatrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.target.dim(), self.source.dim()):
            raise ValueError("matrix shape does not match source/target dimensions")
        sdeg = self.source.flat_degrees()
        tdeg = self.target.flat_degrees()
        for r, c, _ in self.matrix.entries():
            if tdeg[r] != sdeg[c] + self.degree:
                raise ValueError(f"entry ({r},{c}) does not have degree {self.degree}")

    @classmethod
    def from_blocks(cls, source: GradedSpace, target: GradedSpace, degree: int,
                    blocks: Mapping[int, SparseMatrix]) -> "GradedMap":
        entries = []
        for d, block in blocks.items():
            so, to = source.offset(d), target.offset(d + degree)
            if (block.rows, block.cols) != (target.dim(d + degree), source.dim(d)):
                raise ValueError(f"block at degree {d} has wrong shape")
            entries.extend((to + r, so + c, v) for r, c, v in block.entries())
        return cls(source, target, degree, SparseMatrix.from_entries(target.dim(), source.dim(), entries))

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, degree: int) -> "GradedMap":
        return cls(source, target, degree, SparseMatrix.zero(target.dim(), source.dim()))

    def block(self, d: int) -> SparseMatrix:
        so, sn = self.source.offset(d), self.source.dim(d)
        to, tn = self.target.offset(d + self.degree), self.target.dim(d + self.degree)
        entries = [(r - to, c - so, v) for r, c, v in self.matrix.entries()
                   if so <= c < so + sn and to <= r < to + tn]
        return SparseMatrix.from_entries(tn, sn, entries)

    def then(self, other: "GradedMap") -> "GradedMap":
        """``other o self``."""
        return GradedMap(self.source, other.target, self.degree + other.degree, other.matrix @ self.matrix)

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "degree": self.degree,
            "blocks": {str(d): self.block(d).to_json() for d in self.source.degrees()},
        }


@dataclass(frozen=True)
class ChainComplex:
    space: GradedSpace
    differential: SparseMatrix

    def __post_init__(self):
        n = self.space.dim()
        if (self.differential.rows, self.differential.cols) != (n, n):
            raise ValueError("differential has wrong shape")
        # degree check through GradedMap
        GradedMap(self.space, self.space, 1, self.differential)
        if not (self.differential @ self.differential).is_zero():
            raise ValueError("differential does not square to zero")

    @classmethod
    def zero_differential(cls, space: GradedSpace) -> "ChainComplex":
        return cls(space, SparseMatrix.zero(space.dim(), space.dim()))

    def block(self, d: int) -> SparseMatrix:
        return GradedMap(self.space, self.space, 1, self.differential).block(d)


def differential_blocks(degrees: Sequence[int], D: SparseMatrix) -> dict[int, SparseMatrix]:
    """Split a degree +1 matrix on a basis with given flat degrees into blocks
    ``d -> d+1`` (degrees need not be sorted)."""
    index: dict[int, list[int]] = {}
    for i, d in enumerate(degrees):
        index.setdefault(d, []).append(i)
    pos = {}
    for d, idx in index.items():
        for k, i in enumerate(idx):
            pos[i] = k
    entries: dict[int, list] = {d: [] for d in index}
    for r, c, v in D.entries():
        dc = degrees[c]
        if degrees[r] != dc + 1:
            raise ValueError(f"entry ({r},{c}) is not of degree +1")
        entries[dc].append((pos[r], pos[c], v))
    return {d: SparseMatrix.from_entries(len(index.get(d + 1, ())), len(idx), entries[d])
            for d, idx in index.items()}


def cohomology_from_blocks(dims: Mapping[int, int], blocks: Mapping[int, SparseMatrix],
                           check: bool = True) -> dict[int, int]:
    ranks = {d: rank(b) for d, b in blocks.items()}
    if check:
        for d, b in blocks.items():
            nxt = blocks.get(d + 1)
            if nxt is not None and b.rows and not (nxt @ b).is_zero():
                raise ValueError(f"d^2 != 0 at degree {d}")
    return {d: n - ranks.get(d, 0) - ranks.get(d - 1, 0) for d, n in sorted(dims.items()) if n}


def cohomology_dims(C: ChainComplex) -> dict[int, int]:
    """``dim H^d = dim ker d_d - rank d_{d-1}`` for every nonzero degree."""
    blocks = {d: C.block(d) for d in C.space.degrees()}
    return cohomology_from_blocks(C.space.dims(), blocks)


def euler_characteristic(dims: Mapping[int, int]) -> int:
    return sum((-1) ** (d % 2) * n for d, n in dims.items())


def hom_space(X: GradedSpace, Y: GradedSpace) -> tuple[GradedSpace, list[tuple[int, int]]]:
    """Graded space of linear maps X -> Y with the elementary-matrix basis.

    Returns the space and, in flat order, the (target index, source index)
    pair of each basis map.
    """
    xdeg, ydeg = X.flat_degrees(), Y.flat_degrees()
    xl, yl = X.flat_labels(), Y.flat_labels()
    by_deg: dict[int, list[tuple[int, int]]] = {}
    for j, dx in enumerate(xdeg):
        for i, dy in enumerate(ydeg):
            by_deg.setdefault(dy - dx, []).append((i, j))
    comps, pairs = {}, []
    for d in sorted(by_deg):
        comps[d] = tuple(f"{xl[j]}->{yl[i]}" for i, j in by_deg[d])
        pairs.extend(by_deg[d])
    return GradedSpace(comps), pairs


def hom_complex(X: ChainComplex, Y: ChainComplex) -> ChainComplex:
    """Maps X -> Y with ``D f = d_Y f - (-1)^{|f|} f d_X``."""
    H, pairs = hom_space(X.space, Y.space)
    index = {p: k for k, p in enumerate(pairs)}
    xdeg, ydeg = X.space.flat_degrees(), Y.space.flat_degrees()
    dY_cols = Y.differential.columns()
    dX_rows = X.differential.data
    entries = []
    for k, (i, j) in enumerate(pairs):
        fdeg = ydeg[i] - xdeg[j]
        # d_Y o E_ij = sum_r dY[r,i] E_rj
        for r, v in dY_cols[i].items():
            entries.append((index[(r, j)], k, v))
        # E_ij o d_X = sum_c dX[j,c] E_ic
        sign = -1 if fdeg % 2 == 0 else 1
        for c, v in dX_rows.get(j, {}).items():
            entries.append((index[(i, c)], k, sign * v))
    D = SparseMatrix.from_entries(H.dim(), H.dim(), entries)
    return ChainComplex(H, D)
