"""Cyclic bar modules: tensor powers of an algebra with faces, degeneracies
and the signed cyclic operator, plus the complexes built from them.

Conventions, fixed once for the whole package:
  X_n = A^{(n+1)}, so the cyclic group acting on X_n has order n+1.
  tau_n rotates the last tensor slot to the front; t_n = (-1)^n tau_n.
  d_i multiplies slots i, i+1 for i < n; d_n multiplies the last slot onto
  the front: d_n(a_0 ... a_n) = (a_n a_0) a_1 ... a_{n-1}.
  s_j inserts the unit after slot j, 0 <= j <= n.
  N_n = sum of t_n^i over i = 0..n.
  b = sum (-1)^i d_i (all faces); b' drops the last face.

Two implementations of the operators coexist: ExactMatrix columns (general,
exact, used by the homology pipelines) and a vectorized integer engine on
tuple arrays (used to sweep operator identities at sizes where building the
matrices one column at a time would blow the time budget).  Tests pin the
two against each other on small modules.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra
from .complexes import ChainComplex
from .matrix import ExactMatrix
from .rings import BaseRing, Scalar, ZZ


# ---------------------------------------------------------------------------
# exact-matrix cyclic modules


class CyclicModule:
    """Simplicial module with a signed cyclic operator, one matrix per op.

    Operator matrices are produced lazily and memoized; everything handed
    out is an immutable ExactMatrix, so concurrent readers are safe and
    duplicate inserts of the same key are harmless.
    """

    def __init__(self, base: BaseRing, rank_fn, face_fn, degeneracy_fn, cyclic_fn):
        self.base = base
        self._rank_fn = rank_fn
        self._face_fn = face_fn
        self._degeneracy_fn = degeneracy_fn
        self._cyclic_fn = cyclic_fn
        self._ranks: dict[int, int] = {}
        self._faces: dict[tuple[int, int], ExactMatrix] = {}
        self._degens: dict[tuple[int, int], ExactMatrix] = {}
        self._cyclics: dict[int, ExactMatrix] = {}
        self._norms: dict[int, ExactMatrix] = {}

    def rank(self, n: int) -> int:
        if n < 0:
            return 0
        if n not in self._ranks:
            self._ranks[n] = self._rank_fn(n)
        return self._ranks[n]

    def face(self, n: int, i: int) -> ExactMatrix:
        if n < 1:
            raise ValueError("faces start at degree 1")
        if not (0 <= i <= n):
            raise ValueError(f"face index {i} outside 0..{n}")
        if (n, i) not in self._faces:
            self._faces[(n, i)] = self._face_fn(n, i)
        return self._faces[(n, i)]

    def degeneracy(self, n: int, j: int) -> ExactMatrix:
        if not (0 <= j <= n):
            raise ValueError(f"degeneracy index {j} outside 0..{n}")
        if (n, j) not in self._degens:
            self._degens[(n, j)] = self._degeneracy_fn(n, j)
        return self._degens[(n, j)]

    def cyclic(self, n: int) -> ExactMatrix:
        """The signed operator t_n = (-1)^n tau_n."""
        if n not in self._cyclics:
            self._cyclics[n] = self._cyclic_fn(n)
        return self._cyclics[n]

    def norm(self, n: int) -> ExactMatrix:
        """N_n = sum_{i=0}^{n} t_n^i."""
        if n not in self._norms:
            t = self.cyclic(n)
            acc = ExactMatrix.identity(self.base, self.rank(n))
            out = acc
            for _ in range(n):
                acc = t.mul(acc)
                out = out.add(acc)
            self._norms[n] = out
        return self._norms[n]

    def hochschild_boundary(self, n: int) -> ExactMatrix:
        """b = sum (-1)^i d_i : X_n -> X_{n-1}."""
        if n == 0:
            return ExactMatrix.zero(self.base, 0, self.rank(0))
        out = self.face(n, 0)
        for i in range(1, n + 1):
            term = self.face(n, i)
            out = out.add(term) if i % 2 == 0 else out.sub(term)
        return out

    def bar_boundary(self, n: int) -> ExactMatrix:
        """b' = sum_{i<n} (-1)^i d_i : X_n -> X_{n-1}."""
        if n == 0:
            return ExactMatrix.zero(self.base, 0, self.rank(0))
        out = self.face(n, 0)
        for i in range(1, n):
            term = self.face(n, i)
            out = out.add(term) if i % 2 == 0 else out.sub(term)
        return out

    def extra_degeneracy(self, n: int) -> ExactMatrix:
        """s_{-1} = tau_{n+1} s_n : X_n -> X_{n+1}, inserts the unit in front.

        Contracts the bar complex: b' s_{-1} + s_{-1} b' = id.
        """
        tau = self.cyclic(n + 1).scale(
            self.base.coerce(1 if (n + 1) % 2 == 0 else -1)
        )
        return tau.mul(self.degeneracy(n, n))

    def connes_B(self, n: int) -> ExactMatrix:
        """B = (1 - t_{n+1}) s_{-1} N_n : X_n -> X_{n+1}."""
        sN = self.extra_degeneracy(n).mul(self.norm(n))
        t1 = self.cyclic(n + 1)
        return sN.sub(t1.mul(sN))


def cyclic_bar_module(A: Algebra, n_max: int | None = None) -> CyclicModule:
    """The cyclic bar construction of A; n_max is advisory only.

    Basis of X_n: tuples of basis indices, encoded big-endian base dim(A)
    (slot 0 is the most significant digit).
    """
    base = A.base
    d = A.dim

    def decode(n: int, code: int) -> list[int]:
        digits = []
        for _ in range(n + 1):
            digits.append(code % d)
            code //= d
        digits.reverse()
        return digits

    def encode(digits) -> int:
        code = 0
        for x in digits:
            code = code * d + x
        return code

    def rank_fn(n: int) -> int:
        return d ** (n + 1)

    def face_fn(n: int, i: int) -> ExactMatrix:
        rows, cols = d**n, d ** (n + 1)
        entries: dict[tuple[int, int], Scalar] = {}
        for col in range(cols):
            a = decode(n, col)
            if i < n:
                prod = A.basis_product(a[i], a[i + 1])
                rest = a[:i] + [0] + a[i + 2 :]
                slot = i
            else:
                prod = A.basis_product(a[n], a[0])
                rest = [0] + a[1:n]
                slot = 0
            for k, c in prod.items():
                rest[slot] = k
                row = encode(rest)
                prev = entries.get((row, col))
                entries[(row, col)] = c if prev is None else base.add(prev, c)
        return ExactMatrix(base, rows, cols, entries)

    def degeneracy_fn(n: int, j: int) -> ExactMatrix:
        rows, cols = d ** (n + 2), d ** (n + 1)
        entries: dict[tuple[int, int], Scalar] = {}
        for col in range(cols):
            a = decode(n, col)
            for u, c in enumerate(A.unit):
                if c == 0:
                    continue
                row = encode(a[: j + 1] + [u] + a[j + 1 :])
                entries[(row, col)] = c
        return ExactMatrix(base, rows, cols, entries)

    def cyclic_fn(n: int) -> ExactMatrix:
        size = d ** (n + 1)
        sign = base.coerce(1 if n % 2 == 0 else -1)
        entries = {}
        for col in range(size):
            a = decode(n, col)
            entries[(encode([a[n]] + a[:n]), col)] = sign
        return ExactMatrix(base, size, size, entries)

    return CyclicModule(base, rank_fn, face_fn, degeneracy_fn, cyclic_fn)


_bar_memo: dict[Algebra, CyclicModule] = {}


def bar_module(A: Algebra) -> CyclicModule:
    """Memoized cyclic_bar_module; overlapping windows share matrices."""
    if A not in _bar_memo:
        _bar_memo[A] = cyclic_bar_module(A)
    return _bar_memo[A]


def hochschild_complex(X: CyclicModule, n_max: int) -> ChainComplex:
    ranks = {n: X.rank(n) for n in range(n_max + 1)}
    diffs = {n: X.hochschild_boundary(n) for n in range(1, n_max + 1)}
    return ChainComplex(X.base, ranks, diffs)


def bar_complex(X: CyclicModule, n_max: int) -> ChainComplex:
    ranks = {n: X.rank(n) for n in range(n_max + 1)}
    diffs = {n: X.bar_boundary(n) for n in range(1, n_max + 1)}
    return ChainComplex(X.base, ranks, diffs)


# ---------------------------------------------------------------------------
# normalized bar modules

# Only b and B descend to the quotient by degenerate elements; t, N and the
# individual faces do not (tau s_{n-1} escapes the degenerate subspace), so
# the normalized object is a mixed complex, not a cyclic module.


class NormalizedBarModule:
    """Quotient of the bar module by degeneracy images.

    Needs the algebra's unit to be basis vector 0; then the degenerate
    subspace in degree n is spanned by the basis tuples carrying index 0
    in some slot >= 1, and the quotient has the complementary tuples as a
    basis: rank dim(A) * (dim(A)-1)^n.
    """

    def __init__(self, A: Algebra):
        if not A.unit_is_basis_zero:
            A = A.with_unit_first()
        if A.dim < 1:
            raise ValueError("algebra must have positive dimension")
        self.algebra = A
        self.base = A.base
        self.raw = bar_module(A)
        self._bnd: dict[int, ExactMatrix] = {}
        self._connes: dict[int, ExactMatrix] = {}

    def rank(self, n: int) -> int:
        if n < 0:
            return 0
        return self.algebra.dim * (self.algebra.dim - 1) ** n

    # tuple <-> index, mixed radix: slot 0 in 0..d-1, slots 1..n in 1..d-1

    def decode(self, n: int, code: int) -> list[int]:
        d = self.algebra.dim
        tail = []
        for _ in range(n):
            tail.append(code % (d - 1) + 1)
            code //= d - 1
        tail.append(code)
        tail.reverse()
        return tail

    def encode(self, digits) -> int:
        d = self.algebra.dim
        code = digits[0]
        for x in digits[1:]:
            code = code * (d - 1) + (x - 1)
        return code

    def _raw_code(self, digits) -> int:
        d = self.algebra.dim
        code = 0
        for x in digits:
            code = code * d + x
        return code

    def inclusion(self, n: int) -> ExactMatrix:
        """Section X-bar_n -> X_n picking the non-degenerate basis tuples."""
        entries = {}
        for col in range(self.rank(n)):
            entries[(self._raw_code(self.decode(n, col)), col)] = self.base.one
        return ExactMatrix(self.base, self.raw.rank(n), self.rank(n), entries)

    def projection(self, n: int) -> ExactMatrix:
        """Quotient map X_n -> X-bar_n killing degenerate basis tuples."""
        d = self.algebra.dim
        entries = {}
        for col in range(self.raw.rank(n)):
            digits = []
            code = col
            for _ in range(n + 1):
                digits.append(code % d)
                code //= d
            digits.reverse()
            if any(x == 0 for x in digits[1:]):
                continue
            entries[(self.encode(digits), col)] = self.base.one
        return ExactMatrix(self.base, self.rank(n), self.raw.rank(n), entries)

    def boundary(self, n: int) -> ExactMatrix:
        """Induced Hochschild differential b-bar : X-bar_n -> X-bar_{n-1}."""
        if n not in self._bnd:
            if n <= 0:
                self._bnd[n] = ExactMatrix.zero(self.base, 0, self.rank(max(n, 0)))
            else:
                self._bnd[n] = self._induced_boundary(n)
        return self._bnd[n]

    def _induced_boundary(self, n: int) -> ExactMatrix:
        # computed tuple-wise rather than by three matrix products; the
        # intermediate raw rank d^(n+1) would dwarf the quotient ranks
        A = self.algebra
        base = self.base
        entries: dict[tuple[int, int], Scalar] = {}
        for col in range(self.rank(n)):
            a = self.decode(n, col)
            for i in range(n + 1):
                sign = base.coerce(1 if i % 2 == 0 else -1)
                if i < n:
                    prod = A.basis_product(a[i], a[i + 1])
                    head, tail = a[:i], a[i + 2 :]
                else:
                    prod = A.basis_product(a[n], a[0])
                    head, tail = [], a[1:n]
                for k, c in prod.items():
                    digits = head + [k] + tail
                    if any(x == 0 for x in digits[1:]):
                        continue  # lands on a degenerate tuple
                    row = self.encode(digits)
                    v = base.add(entries.get((row, col), base.zero), base.mul(sign, c))
                    if v == 0:
                        entries.pop((row, col), None)
                    else:
                        entries[(row, col)] = v
        return ExactMatrix(base, self.rank(n - 1), self.rank(n), entries)

    def connes(self, n: int) -> ExactMatrix:
        """Induced Connes operator B-bar : X-bar_n -> X-bar_{n+1}.

        On the quotient the (1 - t) factor's t-part dies (it lands on
        degenerate tuples), leaving B-bar(a) = sum_i (-1)^{ni} of the
        cyclic rotations of a with the unit stuck in front; rotations
        that put the original a_0 into an interior slot survive only
        when a_0 is not the unit.
        """
        if n not in self._connes:
            base = self.base
            entries: dict[tuple[int, int], Scalar] = {}
            for col in range(self.rank(n)):
                a = self.decode(n, col)
                for i in range(n + 1):
                    rotated = [0] + a[i:] + a[:i]
                    if any(x == 0 for x in rotated[1:]):
                        continue
                    sign = base.coerce(1 if (n * i) % 2 == 0 else -1)
                    row = self.encode(rotated)
                    v = base.add(entries.get((row, col), base.zero), sign)
                    if v == 0:
                        entries.pop((row, col), None)
                    else:
                        entries[(row, col)] = v
            self._connes[n] = ExactMatrix(base, self.rank(n + 1), self.rank(n), entries)
        return self._connes[n]

    def hochschild_complex(self, n_max: int) -> ChainComplex:
        ranks = {n: self.rank(n) for n in range(n_max + 1)}
        diffs = {n: self.boundary(n) for n in range(1, n_max + 1)}
        return ChainComplex(self.base, ranks, diffs)


_normalized_memo: dict[Algebra, NormalizedBarModule] = {}


def normalized(A: Algebra) -> NormalizedBarModule:
    if A not in _normalized_memo:
        _normalized_memo[A] = NormalizedBarModule(A)
    return _normalized_memo[A]


# ---------------------------------------------------------------------------
# mixed complexes


@dataclass
class MixedComplex:
    """Degreewise modules with d (degree -1) and B (degree +1).

    Modules are free of the given ranks unless a degree appears in
    relations, in which case that degree is the cokernel of the relation
    matrix (needed for the Z/n target of the comparison display).
    """

    base: BaseRing
    lo: int
    hi: int
    ranks: dict[int, int]
    d: dict[int, ExactMatrix] = field(default_factory=dict)
    B: dict[int, ExactMatrix] = field(default_factory=dict)
    relations: dict[int, ExactMatrix] = field(default_factory=dict)

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d_at(self, n: int) -> ExactMatrix:
        return self.d.get(n) or ExactMatrix.zero(self.base, self.rank(n - 1), self.rank(n))

    def B_at(self, n: int) -> ExactMatrix:
        return self.B.get(n) or ExactMatrix.zero(self.base, self.rank(n + 1), self.rank(n))

    def validate(self) -> list[str]:
        problems = []
        for n in range(self.lo, self.hi + 1):
            if not self._lands_in_relations(self.d_at(n).mul(self.d_at(n + 1)), n - 1):
                problems.append(f"d o d != 0 into degree {n - 1}")
            if not self._lands_in_relations(self.B_at(n + 1).mul(self.B_at(n)), n + 2):
                problems.append(f"B o B != 0 out of degree {n}")
            anti = self.d_at(n + 1).mul(self.B_at(n)).add(self.B_at(n - 1).mul(self.d_at(n)))
            if not self._lands_in_relations(anti, n):
                problems.append(f"dB + Bd != 0 at degree {n}")
        return problems

    def _lands_in_relations(self, M: ExactMatrix, n: int) -> bool:
        if M.is_zero():
            return True
        rel = self.relations.get(n)
        if rel is None or rel.ncols == 0:
            return False
        from .linalg import integer_solve, solve_field

        try:
            if self.base.is_field:
                solve_field(rel, M)
            else:
                integer_solve(rel, M)
            return True
        except ValueError:
            return False


@dataclass
class MixedMap:
    source: MixedComplex
    target: MixedComplex
    components: dict[int, ExactMatrix]

    def component(self, n: int) -> ExactMatrix:
        return self.components.get(n) or ExactMatrix.zero(
            self.source.base, self.target.rank(n), self.source.rank(n)
        )


def mixed_complex_from_display(n: int):
    """The comparison display for one cyclic group order.

    Source: Z in degrees 0 and -1, d = 0, B = multiplication by n.
    Target: Z/n in degree 0 (free cover Z with relation n), zero operators.
    Map: canonical surjection in degree 0.  Returns (source, target, map).
    """
    if n < 1:
        raise ValueError("group order must be >= 1")
    source = MixedComplex(
        base=ZZ,
        lo=-1,
        hi=0,
        ranks={0: 1, -1: 1},
        d={},
        B={-1: ExactMatrix(ZZ, 1, 1, {(0, 0): n})},
    )
    target = MixedComplex(
        base=ZZ,
        lo=0,
        hi=0,
        ranks={0: 1},
        relations={0: ExactMatrix(ZZ, 1, 1, {(0, 0): n})},
    )
    the_map = MixedMap(source, target, {0: ExactMatrix.identity(ZZ, 1)})
    return source, target, the_map


# ---------------------------------------------------------------------------
# vectorized operator engine

# Operators as maps on arrays of basis tuples.  A state is (src, tup, coeff):
# src tags which basis vector of the domain each row came from, tup is the
# current tuple of basis indices, coeff the integer coefficient.  Applying
# an operator may split rows (structure constants with several terms).
# Integer arithmetic throughout; over F_p coefficients are compared mod p.


class TupleState:
    __slots__ = ("src", "tup", "coeff")

    def __init__(self, src: np.ndarray, tup: np.ndarray, coeff: np.ndarray):
        self.src = src
        self.tup = tup
        self.coeff = coeff

    @property
    def slots(self) -> int:
        return self.tup.shape[1]


class TupleOps:
    """The bar module's operators acting on whole basis enumerations."""

    def __init__(self, A: Algebra):
        self.A = A
        self.d = A.dim
        C = np.zeros((self.d, self.d, self.d), dtype=np.int64)
        for i in range(self.d):
            for j in range(self.d):
                for k, c in A.structure[i][j]:
                    C[i, j, k] = _as_int(c)
        self.C = C
        self.unit = np.array([_as_int(u) for u in A.unit], dtype=np.int64)
        self.p = A.base.p if A.base.kind == "Fp" else None

    def identity_state(self, n: int) -> TupleState:
        size = self.d ** (n + 1)
        src = np.arange(size, dtype=np.int64)
        tup = np.zeros((size, n + 1), dtype=np.int64)
        code = src.copy()
        for slot in range(n, -1, -1):
            tup[:, slot] = code % self.d
            code //= self.d
        return TupleState(src, tup, np.ones(size, dtype=np.int64))

    def face(self, s: TupleState, i: int) -> TupleState:
        n = s.slots - 1
        if n < 1:
            raise ValueError("faces start at degree 1")
        if not (0 <= i <= n):
            raise ValueError(f"face index {i} outside 0..{n}")
        if i < n:
            prods = self.C[s.tup[:, i], s.tup[:, i + 1]]  # (M, d)
            keep = np.delete(s.tup, i + 1, axis=1)
            slot = i
        else:
            prods = self.C[s.tup[:, n], s.tup[:, 0]]
            keep = s.tup[:, :n].copy()
            slot = 0
        rows, ks = np.nonzero(prods)
        tup = keep[rows]
        tup[:, slot] = ks
        return TupleState(
            s.src[rows], tup, self._reduce(s.coeff[rows] * prods[rows, ks])
        )

    def degeneracy(self, s: TupleState, j: int) -> TupleState:
        n = s.slots - 1
        if not (0 <= j <= n):
            raise ValueError(f"degeneracy index {j} outside 0..{n}")
        (us,) = np.nonzero(self.unit)
        parts = []
        for u in us:
            tup = np.insert(s.tup, j + 1, u, axis=1)
            parts.append(
                TupleState(s.src, tup, self._reduce(s.coeff * self.unit[u]))
            )
        return _concat(parts)

    def cyclic(self, s: TupleState) -> TupleState:
        n = s.slots - 1
        tup = np.roll(s.tup, 1, axis=1)
        coeff = s.coeff if n % 2 == 0 else -s.coeff
        return TupleState(s.src, tup, coeff)

    def norm(self, s: TupleState) -> TupleState:
        parts = [s]
        cur = s
        for _ in range(s.slots - 1):
            cur = self.cyclic(cur)
            parts.append(cur)
        return _concat(parts)

    def one_minus_cyclic(self, s: TupleState) -> TupleState:
        t = self.cyclic(s)
        return _concat([s, TupleState(t.src, t.tup, -t.coeff)])

    def scaled(self, s: TupleState, c: int) -> TupleState:
        return TupleState(s.src, s.tup, self._reduce(s.coeff * c))

    def _reduce(self, coeff: np.ndarray) -> np.ndarray:
        return coeff % self.p if self.p is not None else coeff

    def canonical(self, s: TupleState) -> tuple[np.ndarray, np.ndarray]:
        """Collapse duplicates, drop zeros; key = src composed with tuple.

        Key fits int64: src < d^{n+1} and the tuple code < d^{n+2}, so the
        combined key stays under d^{2n+3} <= 4^21 for the sizes swept here.
        """
        key = s.src.copy()
        for slot in range(s.slots):
            key = key * self.d + s.tup[:, slot]
        order = np.argsort(key, kind="stable")
        key = key[order]
        coeff = s.coeff[order]
        if len(key):
            boundaries = np.empty(len(key), dtype=bool)
            boundaries[0] = True
            boundaries[1:] = key[1:] != key[:-1]
            (starts,) = np.nonzero(boundaries)
            sums = np.add.reduceat(coeff, starts)
            sums = self._reduce(sums)
            keys = key[starts]
            keep = sums != 0
            return keys[keep], sums[keep]
        return key, coeff

    def equal(self, a: TupleState, b: TupleState) -> bool:
        if a.slots != b.slots:
            return False
        ka, ca = self.canonical(a)
        kb, cb = self.canonical(b)
        return len(ka) == len(kb) and bool(np.all(ka == kb)) and bool(np.all(ca == cb))

    def is_zero(self, s: TupleState) -> bool:
        k, _ = self.canonical(s)
        return len(k) == 0


def _concat(parts: list[TupleState]) -> TupleState:
    return TupleState(
        np.concatenate([p.src for p in parts]),
        np.concatenate([p.tup for p in parts]),
        np.concatenate([p.coeff for p in parts]),
    )


def _as_int(c: Scalar) -> int:
    v = int(c)
    if v != c:
        raise ValueError("vectorized engine needs integer structure constants")
    return v


# Identity programs.  A program is a list of op codes applied left to right
# (so [("s", j), ("d", i)] is the composite d_i s_j); both engines interpret
# the same list, which keeps the reference and the fast sweep in sync.


def identity_programs(n: int):
    """Yield (name, lhs_program, rhs_program) at degree n; rhs None means 0."""
    ident: list = []
    if n >= 2:
        for j in range(1, n + 1):
            for i in range(j):
                yield (f"d_{i} d_{j} = d_{j-1} d_{i} @ n={n}", [("d", j), ("d", i)], [("d", i), ("d", j - 1)])
    for j in range(n + 1):
        for i in range(j + 1):
            yield (f"s_{i} s_{j} = s_{j+1} s_{i} @ n={n}", [("s", j), ("s", i)], [("s", i), ("s", j + 1)])
    for j in range(n + 1):
        for i in range(n + 2):
            lhs = [("s", j), ("d", i)]
            if i < j:
                yield (f"d_{i} s_{j} = s_{j-1} d_{i} @ n={n}", lhs, [("d", i), ("s", j - 1)])
            elif i in (j, j + 1):
                yield (f"d_{i} s_{j} = id @ n={n}", lhs, ident)
            else:
                yield (f"d_{i} s_{j} = s_{j} d_{i-1} @ n={n}", lhs, [("d", i - 1), ("s", j)])
    yield (f"t^{n + 1} = id @ n={n}", [("t", None)] * (n + 1), ident)
    if n >= 1:
        for i in range(1, n + 1):
            yield (
                f"d_{i} t = -t d_{i-1} @ n={n}",
                [("t", None), ("d", i)],
                [("d", i - 1), ("t", None), ("scale", -1)],
            )
        yield (
            f"d_0 t = (-1)^n d_n @ n={n}",
            [("t", None), ("d", 0)],
            [("d", n), ("scale", 1 if n % 2 == 0 else -1)],
        )
        for j in range(1, n + 1):
            yield (
                f"s_{j} t = -t s_{j-1} @ n={n}",
                [("t", None), ("s", j)],
                [("s", j - 1), ("t", None), ("scale", -1)],
            )
        yield (
            f"s_0 t = (-1)^n t^2 s_n @ n={n}",
            [("t", None), ("s", 0)],
            [("s", n), ("t", None), ("t", None), ("scale", 1 if n % 2 == 0 else -1)],
        )
    yield (f"N(1-t) = 0 @ n={n}", [("omt", None), ("N", None)], None)
    yield (f"(1-t)N = 0 @ n={n}", [("N", None), ("omt", None)], None)


def _run_program(engine, state, program):
    for op, arg in program:
        if op == "d":
            state = engine.face(state, arg)
        elif op == "s":
            state = engine.degeneracy(state, arg)
        elif op == "t":
            state = engine.cyclic(state)
        elif op == "N":
            state = engine.norm(state)
        elif op == "omt":
            state = engine.one_minus_cyclic(state)
        elif op == "scale":
            state = engine.scaled(state, arg)
        else:  # pragma: no cover - program lists are internal
            raise ValueError(f"unknown op {op!r}")
    return state


def cyclic_identity_report(A: Algebra, n_max: int) -> list[str]:
    """Sweep the simplicial and signed cyclic identities up to degree n_max.

    Returns failure descriptions; empty means every identity held exactly.
    """
    ops = TupleOps(A)
    bad: list[str] = []
    for n in range(n_max + 1):
        x = ops.identity_state(n)
        for name, lhs_prog, rhs_prog in identity_programs(n):
            lhs = _run_program(ops, x, lhs_prog)
            if rhs_prog is None:
                ok = ops.is_zero(lhs)
            else:
                ok = ops.equal(lhs, _run_program(ops, x, rhs_prog))
            if not ok:
                bad.append(f"{name} fails")
    return bad


# ---------------------------------------------------------------------------
# fast multibase sweep

class _CodeBranches:
    """Linear-map image of every basis tuple, packed as digit codes.

    ``parts`` is a list of ``(codes, coeffs)`` pairs of shape ``(d**k,)``
    int32 arrays: row ``r`` of every part is one summand of the image of
    the basis tuple whose code is ``r`` (big-endian base-d digits).  The
    row index staying implicit lets every operator run as flat integer
    arithmetic; the digit count ``slots`` rides along because a code alone
    does not determine it.  Codes stay below d**11 and coefficients below
    a few hundred, so int32 is safe throughout.
    """

    __slots__ = ("slots", "parts")

    def __init__(self, slots, parts):
        self.slots = slots
        self.parts = parts


class FastOps:
    """Integer-table twin of TupleOps built for the full identity sweep.

    Works over an integral structure table, so one sweep settles every
    base at once: reducing table entries mod p is a ring map, hence the
    mod-p residuals of an identity equal the residuals computed over the
    entrywise mod-p algebra.  Requires every basis product to have at most
    two terms, which covers the whole catalog; TupleOps stays as the
    general engine and the two are pinned against each other in tests.
    """

    MAX_TERMS = 2

    def __init__(self, A: Algebra):
        d = A.dim
        K = np.zeros((self.MAX_TERMS, d * d), dtype=np.int32)
        C = np.zeros((self.MAX_TERMS, d * d), dtype=np.int32)
        for i in range(d):
            for j in range(d):
                terms = A.structure[i][j]
                if len(terms) > self.MAX_TERMS:
                    raise ValueError("product has more than two terms; use TupleOps")
                for m, (k, c) in enumerate(terms):
                    K[m, i * d + j] = k
                    C[m, i * d + j] = _as_int(c)
        self.dim = d
        self.K = K
        self.C = C
        self.unit_terms = [(k, _as_int(u)) for k, u in enumerate(A.unit) if _as_int(u) != 0]

    def identity_state(self, n: int) -> _CodeBranches:
        rows = self.dim ** (n + 1)
        codes = np.arange(rows, dtype=np.int32)
        return _CodeBranches(n + 1, [(codes, np.ones(rows, dtype=np.int32))])

    def _zero_part(self, rows):
        z = np.zeros(rows, dtype=np.int32)
        return (z, z.copy())

    def face(self, s: _CodeBranches, i: int) -> _CodeBranches:
        k, d = s.slots, self.dim
        n = k - 1
        if n < 1:
            raise ValueError("faces start at degree 1")
        out = []
        for codes, coeffs in s.parts:
            if i < n:
                p = d ** (k - 2 - i)
                q = codes // p
                y = q % d
                q //= d
                x = q % d
                head = (q // d) * (p * d) + codes % p
            else:
                p = d ** (n - 1)
                x = codes % d
                y = codes // (d ** n)
                head = (codes // d) % p
            pair = x * d + y
            for m in range(self.MAX_TERMS):
                c = coeffs * self.C[m][pair]
                if c.any():
                    out.append((head + self.K[m][pair] * p, c))
        if not out:
            out.append(self._zero_part(s.parts[0][0].shape[0]))
        return _CodeBranches(k - 1, out)

    def degeneracy(self, s: _CodeBranches, j: int) -> _CodeBranches:
        k, d = s.slots, self.dim
        p = d ** (k - 1 - j)
        out = []
        for codes, coeffs in s.parts:
            head = (codes // p) * (p * d) + codes % p
            for uk, uc in self.unit_terms:
                out.append((head + uk * p, coeffs if uc == 1 else coeffs * uc))
        return _CodeBranches(k + 1, out)

    def cyclic(self, s: _CodeBranches) -> _CodeBranches:
        k, d = s.slots, self.dim
        top = d ** (k - 1)
        flip = (k - 1) % 2 == 1
        parts = [
            ((codes % d) * top + codes // d, -coeffs if flip else coeffs)
            for codes, coeffs in s.parts
        ]
        return _CodeBranches(k, parts)

    def norm(self, s: _CodeBranches) -> _CodeBranches:
        parts = list(s.parts)
        rot = s
        for _ in range(s.slots - 1):
            rot = self.cyclic(rot)
            parts.extend(rot.parts)
        return _CodeBranches(s.slots, parts)

    def one_minus_cyclic(self, s: _CodeBranches) -> _CodeBranches:
        rot = self.cyclic(s)
        parts = list(s.parts) + [(codes, -coeffs) for codes, coeffs in rot.parts]
        return _CodeBranches(s.slots, parts)

    def scaled(self, s: _CodeBranches, c: int) -> _CodeBranches:
        return _CodeBranches(s.slots, [(codes, coeffs * c) for codes, coeffs in s.parts])


# optimal compare-exchange schedules for tiny row widths
_SORT_NETWORKS = {
    2: ((0, 1),),
    3: ((0, 2), (0, 1), (1, 2)),
    4: ((0, 1), (2, 3), (0, 2), (1, 3), (1, 2)),
}


def _residual_coeffs(lhs: _CodeBranches, rhs: _CodeBranches | None) -> np.ndarray:
    """Per-segment coefficient sums of lhs - rhs, grouped by output tuple.

    The difference map is zero iff every returned entry is zero, and holds
    mod p iff every entry is divisible by p.  Summands with coefficient 0
    need no special handling: they add nothing to whichever segment their
    code lands in.
    """
    parts = list(lhs.parts)
    if rhs is not None:
        parts += [(codes, -coeffs) for codes, coeffs in rhs.parts]
    w = len(parts)
    if w == 1:
        return parts[0][1]
    rows = parts[0][0].shape[0]
    codes = np.empty((rows, w), dtype=np.int32)
    coeffs = np.empty((rows, w), dtype=np.int32)
    for idx, (cd, cf) in enumerate(parts):
        codes[:, idx] = cd
        coeffs[:, idx] = cf
    if w in _SORT_NETWORKS:
        for a, b in _SORT_NETWORKS[w]:
            ca, cb = codes[:, a], codes[:, b]
            swap = ca > cb
            ca2 = np.where(swap, cb, ca)
            cb2 = np.where(swap, ca, cb)
            codes[:, a], codes[:, b] = ca2, cb2
            va, vb = coeffs[:, a], coeffs[:, b]
            va2 = np.where(swap, vb, va)
            vb2 = np.where(swap, va, vb)
            coeffs[:, a], coeffs[:, b] = va2, vb2
    else:
        order = np.argsort(codes, axis=1, kind="stable")
        codes = np.take_along_axis(codes, order, axis=1)
        coeffs = np.take_along_axis(coeffs, order, axis=1)
    sums = np.cumsum(coeffs, axis=1)
    ends = np.empty(codes.shape, dtype=bool)
    ends[:, -1] = True
    ends[:, :-1] = codes[:, 1:] != codes[:, :-1]
    # telescoping: segment sums are differences of prefix sums at segment
    # ends, and all of them vanish iff all end prefixes do
    return sums[ends]


def cyclic_identity_multibase_report(
    A: Algebra, moduli: Sequence[int | None], n_max: int
) -> dict[int | None, list[str]]:
    """Sweep the cyclic-module identities over several bases in one pass.

    ``A`` must have integral structure constants (catalog algebras over Q
    or Z do).  Both sides of every identity are integer combinations of the
    table entries, and reducing entries mod p is a ring map, so judging the
    integer residuals mod a prime p reproduces the sweep over the entrywise
    mod-p algebra verbatim, while ``None`` asks for exact vanishing and
    settles Z and Q at once.  Returns, per modulus, the failing identities.
    """
    ops = FastOps(A)
    bad: dict[int | None, list[str]] = {m: [] for m in moduli}
    for n in range(n_max + 1):
        x = ops.identity_state(n)
        first: dict[tuple, _CodeBranches] = {}
        for name, lhs_prog, rhs_prog in identity_programs(n):
            lhs = _run_cached(ops, x, lhs_prog, first)
            rhs = _run_cached(ops, x, rhs_prog, first) if rhs_prog is not None else None
            residual = _residual_coeffs(lhs, rhs)
            for m in moduli:
                ok = not (residual % m).any() if m else not residual.any()
                if not ok:
                    bad[m].append(f"{name} fails")
    return bad


def _run_cached(engine, state, program, first):
    if program:
        key = program[0]
        hit = first.get(key)
        if hit is None:
            hit = first[key] = _run_program(engine, state, program[:1])
        state = hit
        program = program[1:]
    return _run_program(engine, state, program)
