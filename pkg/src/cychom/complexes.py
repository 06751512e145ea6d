"""Chain complexes over exact rings, homology, and induced maps.

A ChainComplex stores finitely many degrees with a differential that
lowers degree by one.  Homology over a field is computed by ranks; over
Z a presentation ker/im is reduced to Smith form.  Both paths fix
canonical bases (reduced echelon kernels, deterministic Smith pivoting)
so induced maps on homology are reproducible across runs, which the
stabilization towers rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import integer_kernel_basis, integer_solve, rank, rank_kernel, rref, solve_field
from .matrix import ExactMatrix
from .rings import BaseRing, Scalar, ZZ
from .snf import smith_normal_form


# ---------------------------------------------------------------------------
# homology groups


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated homology group in invariant-factor form.

    torsion lists the invariant factors > 1, each dividing the next.
    Over a field torsion is always empty and free_rank is the dimension.
    """

    base: BaseRing
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.base.is_field and self.torsion:
            raise ValueError("torsion over a field")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a chain: {self.torsion}")

    @property
    def dimension(self) -> int:
        if not self.base.is_field:
            raise ValueError("dimension is only defined over a field")
        return self.free_rank

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def label(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z" if self.base == ZZ else self.base.label())
        elif self.free_rank > 1:
            parts.append(("Z" if self.base == ZZ else self.base.label()) + f"^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


# ---------------------------------------------------------------------------
# complexes


class ChainComplex:
    """Bounded complex ... -> C_{d} -> C_{d-1} -> ... of free modules.

    ranks maps degree -> rank; diffs maps degree d to the matrix of
    C_d -> C_{d-1}.  Degrees outside ranks are zero.
    """

    def __init__(self, ring: BaseRing, ranks: dict[int, int], diffs: dict[int, ExactMatrix]):
        self.ring = ring
        self.ranks = {d: r for d, r in ranks.items()}
        self.diffs = dict(diffs)
        for d, M in self.diffs.items():
            if M.ring != ring:
                raise ValueError("differential over wrong ring")

    @property
    def degrees(self) -> list[int]:
        return sorted(self.ranks)

    def rank(self, d: int) -> int:
        return self.ranks.get(d, 0)

    def diff(self, d: int) -> ExactMatrix:
        M = self.diffs.get(d)
        if M is None:
            return ExactMatrix.zero(self.ring, self.rank(d - 1), self.rank(d))
        return M

    def validate(self) -> "ComplexReport":
        problems = []
        for d, M in self.diffs.items():
            if (M.nrows, M.ncols) != (self.rank(d - 1), self.rank(d)):
                problems.append(
                    f"differential at degree {d} has shape {M.nrows}x{M.ncols}, "
                    f"expected {self.rank(d - 1)}x{self.rank(d)}"
                )
        if not problems:
            for d in sorted(self.diffs):
                if (d + 1) in self.diffs:
                    if not (self.diff(d) * self.diff(d + 1)).is_zero():
                        problems.append(f"d o d != 0 from degree {d + 1}")
        return ComplexReport(ok=not problems, problems=problems)

    def homology(self, d: int) -> HomologyGroup:
        return complex_homology(self, d)


@dataclass
class ComplexReport:
    ok: bool
    problems: list[str] = field(default_factory=list)


def validate_complex(C: ChainComplex) -> ComplexReport:
    return C.validate()


def complex_homology(C: ChainComplex, d: int) -> HomologyGroup:
    """H_d(C) as a HomologyGroup (dimension over fields, invariant factors over Z)."""
    ring = C.ring
    if ring.is_field:
        n = C.rank(d)
        rank_out = rank(C.diff(d)) if C.rank(d - 1) and n else 0
        rank_in = rank(C.diff(d + 1)) if C.rank(d + 1) and n else 0
        return HomologyGroup(ring, n - rank_out - rank_in)
    return _integer_presentation(C, d).group


# ---------------------------------------------------------------------------
# canonical presentations of H_d, used for induced maps


class _FieldPresentation:
    def __init__(self, C: ChainComplex, d: int):
        self.ring = C.ring
        self.ambient = C.rank(d)
        _, K = rank_kernel(C.diff(d)) if C.rank(d - 1) else (0, ExactMatrix.identity(C.ring, self.ambient))
        self.kernel = K  # ambient x k
        k = K.ncols
        if C.rank(d + 1):
            X = solve_field(K, C.diff(d + 1))  # image of the incoming differential in kernel coords
        else:
            X = ExactMatrix.zero(C.ring, k, 0)
        E, pivots = rref(X.transpose())
        self.reducers = [E[r] for r in range(len(pivots))]  # reduced spanning vectors of im, length-k rows
        self.pivots = pivots
        pivset = set(pivots)
        self.coords = [i for i in range(k) if i not in pivset]
        self.group = HomologyGroup(self.ring, len(self.coords))

    def class_of(self, cycle: ExactMatrix) -> ExactMatrix:
        """Coordinates of a cycle's class in the canonical quotient basis (column vector)."""
        ring = self.ring
        x = solve_field(self.kernel, cycle)  # raises if not a cycle
        col = {i: x.entry(i, 0) for i in range(x.nrows)}
        for row, p in zip(self.reducers, self.pivots):
            c = col.get(p, ring.zero)
            if c != 0:
                for k, v in enumerate(row):
                    if v != 0:
                        s = ring.sub(col.get(k, ring.zero), ring.mul(c, v))
                        if s == 0:
                            col.pop(k, None)
                        else:
                            col[k] = s
        entries = {}
        for j, i in enumerate(self.coords):
            v = col.get(i, ring.zero)
            if v != 0:
                entries[(j, 0)] = v
        return ExactMatrix(ring, len(self.coords), 1, entries, _normalized=True)

    def representative(self, j: int) -> ExactMatrix:
        """A cycle representing the j-th canonical basis class (column vector)."""
        e = ExactMatrix(self.ring, self.kernel.ncols, 1, {(self.coords[j], 0): self.ring.one})
        return self.kernel * e


class _IntegerPresentation:
    def __init__(self, C: ChainComplex, d: int):
        self.ring = ZZ
        if C.rank(d - 1):
            K = integer_kernel_basis(C.diff(d))
        else:
            K = ExactMatrix.identity(ZZ, C.rank(d))
        self.kernel = K
        k = K.ncols
        if C.rank(d + 1) and k:
            X = integer_solve(K, C.diff(d + 1))
        else:
            X = ExactMatrix.zero(ZZ, k, C.rank(d + 1))
        U, D, _ = smith_normal_form(X)
        self.U = U
        diag = [D.entry(i, i) for i in range(min(D.nrows, D.ncols))]
        diag = [int(v) for v in diag if v != 0]
        self.diag = diag
        # presentation coordinates: torsion coords (d_i > 1) then free coords
        self.torsion_coords = [(i, di) for i, di in enumerate(diag) if di > 1]
        self.free_coords = list(range(len(diag), k))
        self.group = HomologyGroup(
            ZZ, len(self.free_coords), tuple(di for _, di in self.torsion_coords)
        )

    def class_of(self, cycle: ExactMatrix) -> ExactMatrix:
        x = integer_solve(self.kernel, cycle)
        y = self.U * x
        entries = {}
        row = 0
        for i, di in self.torsion_coords:
            v = int(y.entry(i, 0)) % di
            if v:
                entries[(row, 0)] = v
            row += 1
        for i in self.free_coords:
            v = int(y.entry(i, 0))
            if v:
                entries[(row, 0)] = v
            row += 1
        n = len(self.torsion_coords) + len(self.free_coords)
        return ExactMatrix(ZZ, n, 1, entries, _normalized=True)

    def representative(self, j: int) -> ExactMatrix:
        coords = [i for i, _ in self.torsion_coords] + self.free_coords
        if not hasattr(self, "_Uinv"):
            self._Uinv = integer_solve(self.U, ExactMatrix.identity(ZZ, self.U.nrows))
        e = ExactMatrix(ZZ, self.U.nrows, 1, {(coords[j], 0): 1})
        return self.kernel * (self._Uinv * e)


def homology_presentation(C: ChainComplex, d: int):
    if C.ring.is_field:
        return _FieldPresentation(C, d)
    return _IntegerPresentation(C, d)


def _integer_presentation(C: ChainComplex, d: int) -> _IntegerPresentation:
    return _IntegerPresentation(C, d)


# ---------------------------------------------------------------------------
# chain maps and induced maps on homology


@dataclass
class ChainMap:
    """Degreewise matrices f_d : C_d -> D_d commuting with the differentials."""

    source: ChainComplex
    target: ChainComplex
    components: dict[int, ExactMatrix]

    def component(self, d: int) -> ExactMatrix:
        M = self.components.get(d)
        if M is None:
            return ExactMatrix.zero(self.source.ring, self.target.rank(d), self.source.rank(d))
        return M

    def validate(self) -> ComplexReport:
        problems = []
        degrees = set(self.source.ranks) | set(self.components)
        for d in sorted(degrees):
            f_d = self.component(d)
            if (f_d.nrows, f_d.ncols) != (self.target.rank(d), self.source.rank(d)):
                problems.append(f"component at degree {d} has the wrong shape")
                continue
            lhs = self.component(d - 1) * self.source.diff(d)
            rhs = self.target.diff(d) * f_d
            if lhs != rhs:
                problems.append(f"square at degree {d} does not commute")
        return ComplexReport(ok=not problems, problems=problems)


def homology_map(f: ChainMap, d: int) -> tuple[ExactMatrix, HomologyGroup, HomologyGroup]:
    """Matrix of H_d(f) in the canonical presentation bases.

    Over Z the column entries are presentation coordinates of the image
    classes (torsion coordinates are reduced mod their invariant
    factor).  Returns (matrix, H_d(source), H_d(target)).
    """
    src = homology_presentation(f.source, d)
    tgt = homology_presentation(f.target, d)
    n_src = src.group.free_rank + len(src.group.torsion)
    n_tgt = tgt.group.free_rank + len(tgt.group.torsion)
    entries: dict[tuple[int, int], Scalar] = {}
    f_d = f.component(d)
    for j in range(n_src):
        z = src.representative(j)
        w = f_d * z
        col = tgt.class_of(w)
        for (i, _), v in col.entries.items():
            entries[(i, j)] = v
    M = ExactMatrix(f.source.ring, n_tgt, n_src, entries, _normalized=True)
    return M, src.group, tgt.group


def is_homology_iso(M: ExactMatrix, src: HomologyGroup, tgt: HomologyGroup) -> bool:
    """Decide whether an induced map (field coefficients) is an isomorphism."""
    if not src.base.is_field:
        raise ValueError("iso detection implemented for field coefficients")
    if src.dimension != tgt.dimension:
        return False
    if src.dimension == 0:
        return True
    return rank(M) == src.dimension


# ---------------------------------------------------------------------------
# presented complexes (quotient modules such as Z/n in each degree)


class PresentedChainComplex:
    """Complex of presented Z-modules coker(rel_d : Z^{r_d} -> Z^{f_d}).

    Differentials are given on the free covers and must carry relations
    into relations.  Relation matrices must be injective (true for all
    uses here: relation blocks are n * identity).  Homology is computed
    from the free total complex of the two-row resolution bicomplex.
    """

    def __init__(
        self,
        ranks: dict[int, int],
        diffs: dict[int, ExactMatrix],
        relations: dict[int, ExactMatrix] | None = None,
    ):
        self.ring = ZZ
        self.ranks = dict(ranks)
        self.diffs = dict(diffs)
        self.relations = dict(relations or {})

    def rank(self, d: int) -> int:
        return self.ranks.get(d, 0)

    def relation(self, d: int) -> ExactMatrix:
        R = self.relations.get(d)
        if R is None:
            return ExactMatrix.zero(ZZ, self.rank(d), 0)
        return R

    def diff(self, d: int) -> ExactMatrix:
        M = self.diffs.get(d)
        if M is None:
            return ExactMatrix.zero(ZZ, self.rank(d - 1), self.rank(d))
        return M

    def to_free_total(self) -> ChainComplex:
        degrees = sorted(set(self.ranks) | {d + 1 for d in self.relations})
        ranks = {}
        for d in degrees:
            ranks[d] = self.rank(d) + self.relation(d - 1).ncols
        diffs: dict[int, ExactMatrix] = {}
        lifts: dict[int, ExactMatrix] = {}
        for d in degrees:
            R = self.relation(d)
            if R.ncols and self.rank(d - 1):
                # lift of the differential to relation covers: diff o rel = rel o lift
                R_prev = self.relation(d - 1)
                Y = self.diff(d) * R
                if R_prev.ncols:
                    lifts[d] = integer_solve(R_prev, Y)
                elif not Y.is_zero():
                    raise ValueError(f"differential at degree {d} does not preserve relations")
        for d in degrees:
            f, r_prev = self.rank(d), self.relation(d - 1).ncols
            f_lo, r_lo = self.rank(d - 1), self.relation(d - 2).ncols
            entries: dict[tuple[int, int], int] = {}
            for (i, j), v in self.diff(d).entries.items():
                entries[(i, j)] = v
            for (i, j), v in self.relation(d - 1).entries.items():
                entries[(i, j + f)] = v
            L = lifts.get(d - 1)
            if L is not None:
                for (i, j), v in L.entries.items():
                    entries[(f_lo + i, f + j)] = -v
            diffs[d] = ExactMatrix(ZZ, f_lo + r_lo, f + r_prev, entries)
        return ChainComplex(ZZ, ranks, diffs)

    def homology(self, d: int) -> HomologyGroup:
        return complex_homology(self.to_free_total(), d)
