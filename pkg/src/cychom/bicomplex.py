"""The 2-periodic cyclic double complex and the theories read off from it.

Layout conventions, fixed here and relied on everywhere below:
  entry(p, q) = X_q sits in total degree p + q; columns are indexed by p.
  The horizontal differential lowers p: out of even columns it is the norm
  N_q, out of odd columns 1 - t_q.  The vertical differential lowers q:
  b on even columns, -b' on odd ones.  The three square-zero and
  anticommutation identities tie these choices together; build_window
  checks them and a deliberately wrong sign is caught as a failing square.

Three column regions of the plane are computed from:
  "plane" (all p)  - direct-sum totalization, the 2-periodic theory;
  "left"  (p <= 0) - its negative-cyclic part;
  "first" (p >= 0) - the first-quadrant quotient, which is classical HC.

A direct-sum total complex has, in each total degree, one summand per row
q, so truncating to rows q <= q_max gives a subcomplex with finitely many
summands per degree, and the full theory is the colimit of these along
the evident inclusions.  There is no a priori bound where the colimit
settles; towers therefore carry explicit verdicts (stabilized at some
truncation with a persistence horizon, or not stabilized within the
schedule) instead of silently picking a cutoff.

Stages are reduced with the sparse Gaussian engine from `reduction`,
which over a field cancels everything cancellable, so surviving cells
count homology and tower maps are composites
  reduced(Q) --lift--> truncation(Q) --include--> truncation(Q')
             --project--> reduced(Q'),
realized by replaying the cancellation log.  For homogeneous chains only
log entries whose cancelled pair touches the chain's degree act, which is
what makes long towers affordable.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

from .complexes import ChainComplex, ChainMap, ComplexReport, HomologyGroup
from .cyclic import CyclicModule
from .linalg import rank
from .matrix import ExactMatrix
from .reduction import MorseReduction
from .rings import BaseRing


class WindowError(ValueError):
    """A constructed window violates one of the three plane identities."""


_REGIONS = ("plane", "left", "first")


def _check_region(region: str) -> None:
    if region not in _REGIONS:
        raise ValueError(f"unknown region {region!r}; expected one of {_REGIONS}")


# ---------------------------------------------------------------------------
# operator columns, cached per cyclic module

def _matrix_columns(M: ExactMatrix) -> list[dict[int, object]]:
    cols: list[dict[int, object]] = [{} for _ in range(M.ncols)]
    for (i, j), c in M.entries.items():
        cols[j][i] = c
    return cols


class _OperatorColumns:
    """Column-wise views of the four plane operators, memoized per row.

    Every stage of every tower over the same cyclic module shares these,
    so each operator matrix is materialized once per q.
    """

    def __init__(self, X: CyclicModule):
        self.X = X
        self.ring = X.base
        self._memo: dict[tuple[str, int], list[dict[int, object]]] = {}

    def rank(self, q: int) -> int:
        return self.X.rank(q)

    def cols(self, kind: str, q: int) -> list[dict[int, object]]:
        key = (kind, q)
        hit = self._memo.get(key)
        if hit is None:
            X = self.X
            if kind == "b":
                M = X.hochschild_boundary(q)
            elif kind == "b'":
                M = X.bar_boundary(q)
            elif kind == "N":
                M = X.norm(q)
            elif kind == "1-t":
                M = ExactMatrix.identity(X.base, X.rank(q)).sub(X.cyclic(q))
            else:  # pragma: no cover - internal kinds only
                raise ValueError(kind)
            hit = self._memo[key] = _matrix_columns(M)
        return hit


def _op_columns(X: CyclicModule) -> _OperatorColumns:
    ops = getattr(X, "_plane_columns", None)
    if ops is None:
        ops = X._plane_columns = _OperatorColumns(X)
    return ops


# ---------------------------------------------------------------------------
# windows

class PeriodicBicomplexWindow:
    """A finite rectangle p_lo <= p <= p_hi, 0 <= q <= q_max of the plane.

    flip_bprime_sign replaces -b' by +b' on odd columns; it exists as a
    negative control, since validation must catch exactly this mistake.
    """

    def __init__(
        self,
        X: CyclicModule,
        p_lo: int,
        p_hi: int,
        q_max: int,
        *,
        flip_bprime_sign: bool = False,
    ):
        if p_lo > p_hi:
            raise ValueError("empty column interval")
        if q_max < 0:
            raise ValueError("q_max must be >= 0")
        self.X = X
        self.ring = X.base
        self.p_lo = p_lo
        self.p_hi = p_hi
        self.q_max = q_max
        self.flip_bprime_sign = flip_bprime_sign

    def _check_inside(self, p: int, q: int) -> None:
        if not (self.p_lo <= p <= self.p_hi and 0 <= q <= self.q_max):
            raise ValueError(f"({p}, {q}) is outside the window")

    def entry_rank(self, p: int, q: int) -> int:
        self._check_inside(p, q)
        return self.X.rank(q)

    def d_h(self, p: int, q: int) -> ExactMatrix:
        self._check_inside(p, q)
        if p % 2 == 0:
            return self.X.norm(q)
        return ExactMatrix.identity(self.ring, self.X.rank(q)).sub(self.X.cyclic(q))

    def d_v(self, p: int, q: int) -> ExactMatrix:
        self._check_inside(p, q)
        if q < 1:
            raise ValueError("vertical differentials start at q = 1")
        if p % 2 == 0:
            return self.X.hochschild_boundary(q)
        M = self.X.bar_boundary(q)
        return M if self.flip_bprime_sign else M.scale(self.ring.coerce(-1))

    def validate(self) -> ComplexReport:
        """Check d_h^2 = 0, d_v^2 = 0 and d_h d_v + d_v d_h = 0 squarewise.

        The composites only depend on the parity of p, so each is computed
        once per (parity, q) and failures are then listed for every column
        of that parity inside the window.
        """
        problems: list[str] = []
        parities = sorted({p % 2 for p in range(self.p_lo, self.p_hi + 1)})

        def columns(par: int, need_left: int) -> list[int]:
            lo = self.p_lo + need_left
            return [p for p in range(lo, self.p_hi + 1) if p % 2 == par]

        for q in range(self.q_max + 1):
            for par in parities:
                ps = columns(par, 1)
                if ps:
                    p0 = ps[0]
                    if not (self.d_h(p0 - 1, q) * self.d_h(p0, q)).is_zero():
                        problems += [f"d_h d_h != 0 at (p={p}, q={q})" for p in ps]
        for q in range(2, self.q_max + 1):
            for par in parities:
                ps = columns(par, 0)
                if ps:
                    p0 = ps[0]
                    if not (self.d_v(p0, q - 1) * self.d_v(p0, q)).is_zero():
                        problems += [f"d_v d_v != 0 at (p={p}, q={q})" for p in ps]
        for q in range(1, self.q_max + 1):
            for par in parities:
                ps = columns(par, 1)
                if ps:
                    p0 = ps[0]
                    mixed = self.d_h(p0, q - 1) * self.d_v(p0, q)
                    mixed = mixed.add(self.d_v(p0 - 1, q) * self.d_h(p0, q))
                    if not mixed.is_zero():
                        problems += [
                            f"d_h d_v + d_v d_h != 0 at (p={p}, q={q})" for p in ps
                        ]
        return ComplexReport(ok=not problems, problems=sorted(problems))


def build_window(
    X: CyclicModule,
    p_lo: int,
    p_hi: int,
    q_max: int,
    *,
    flip_bprime_sign: bool = False,
) -> PeriodicBicomplexWindow:
    """Materialize a window and verify the three identities on it."""
    w = PeriodicBicomplexWindow(X, p_lo, p_hi, q_max, flip_bprime_sign=flip_bprime_sign)
    report = w.validate()
    if not report.ok:
        raise WindowError(
            "window validation failed:\n" + "\n".join(report.problems[:12])
        )
    return w


# ---------------------------------------------------------------------------
# row-truncated total complexes (materialized form)

def _row_range(region: str, d: int, q_max: int) -> range:
    lo = max(0, d) if region == "left" else 0
    hi = min(q_max, d) if region == "first" else q_max
    return range(lo, hi + 1)


class _Layout:
    """Summand bookkeeping for one total degree: rows q and their offsets."""

    def __init__(self, ops: _OperatorColumns, region: str, d: int, q_max: int):
        self.qs = list(_row_range(region, d, q_max))
        self.offsets: dict[int, int] = {}
        start = 0
        for q in self.qs:
            self.offsets[q] = start
            start += ops.rank(q)
        self.total = start
        self._starts = [self.offsets[q] for q in self.qs]

    def locate(self, index: int) -> tuple[int, int]:
        """(q, index within the row) of a global summand index."""
        k = bisect_right(self._starts, index) - 1
        q = self.qs[k]
        return q, index - self.offsets[q]


def _degree_boundary_columns(
    ops: _OperatorColumns,
    region: str,
    d: int,
    layout: "_Layout",
    layout_below: "_Layout",
) -> list[dict[int, object]]:
    """Columns of the total differential from degree d to d - 1."""
    ring = ops.ring
    minus_one = ring.coerce(-1)
    cols: list[dict[int, object]] = [{} for _ in range(layout.total)]
    for q in layout.qs:
        p = d - q
        base = layout.offsets[q]
        even = p % 2 == 0
        if region != "first" or p > 0:
            off = layout_below.offsets[q]
            op = ops.cols("N" if even else "1-t", q)
            for j in range(ops.rank(q)):
                col = cols[base + j]
                for i, c in op[j].items():
                    col[off + i] = c
        if q >= 1:
            off = layout_below.offsets[q - 1]
            if even:
                op = ops.cols("b", q)
                for j in range(ops.rank(q)):
                    col = cols[base + j]
                    for i, c in op[j].items():
                        col[off + i] = c
            else:
                op = ops.cols("b'", q)
                for j in range(ops.rank(q)):
                    col = cols[base + j]
                    for i, c in op[j].items():
                        col[off + i] = ring.mul(minus_one, c)
    return cols


def row_truncated_total(
    X: CyclicModule,
    q_max: int,
    degrees: tuple[int, int],
    region: str = "plane",
) -> ChainComplex:
    """The total complex of rows q <= q_max of a region, in a degree band.

    The differential out of the lowest requested degree is dropped (a hard
    truncation), so homology is only meaningful strictly inside the band.
    """
    _check_region(region)
    lo, hi = degrees
    if lo > hi:
        raise ValueError("empty degree interval")
    ops = _op_columns(X)
    layouts = {d: _Layout(ops, region, d, q_max) for d in range(lo, hi + 1)}
    ranks = {d: layouts[d].total for d in layouts}
    diffs: dict[int, ExactMatrix] = {}
    for d in range(lo + 1, hi + 1):
        cols = _degree_boundary_columns(ops, region, d, layouts[d], layouts[d - 1])
        entries = {
            (i, j): c for j, col in enumerate(cols) for i, c in col.items()
        }
        diffs[d] = ExactMatrix(
            X.base, ranks[d - 1], ranks[d], entries, _normalized=True
        )
    return ChainComplex(X.base, ranks, diffs)


def truncation_inclusion(
    X: CyclicModule,
    q_from: int,
    q_to: int,
    degrees: tuple[int, int],
    region: str = "plane",
) -> ChainMap:
    """The subcomplex inclusion of the q <= q_from truncation into q <= q_to.

    Row layouts list q in increasing order, so on shared rows the inclusion
    is the identity on leading summands.
    """
    if q_from > q_to:
        raise ValueError("q_from must be <= q_to")
    src = row_truncated_total(X, q_from, degrees, region)
    tgt = row_truncated_total(X, q_to, degrees, region)
    ops = _op_columns(X)
    lo, hi = degrees
    components = {}
    one = X.base.one
    for d in range(lo, hi + 1):
        sl = _Layout(ops, region, d, q_from)
        tl = _Layout(ops, region, d, q_to)
        entries = {}
        for q in sl.qs:
            so, to = sl.offsets[q], tl.offsets[q]
            for j in range(ops.rank(q)):
                entries[(to + j, so + j)] = one
        components[d] = ExactMatrix(
            X.base, tl.total, sl.total, entries, _normalized=True
        )
    return ChainMap(source=src, target=tgt, components=components)


# ---------------------------------------------------------------------------
# reduced stages and towers

class _TotalStage:
    """One row truncation, Morse-reduced over a degree window.

    Materializes total degrees [lo-1, hi+1]; the hard truncation at the
    window edges only corrupts homology in the edge degrees themselves, so
    groups and maps are read off for degrees in [lo, hi] only.  Requires a
    field: then the reduction is exact and surviving cells are a homology
    basis.
    """

    def __init__(
        self, ops: _OperatorColumns, region: str, q_max: int, lo: int, hi: int
    ):
        if not ops.ring.is_field:
            raise ValueError("tower stages require field coefficients")
        self.ops = ops
        self.region = region
        self.q_max = q_max
        self.lo = lo
        self.hi = hi
        self.ring = ops.ring
        degs = range(lo - 1, hi + 2)
        self.layouts = {d: _Layout(ops, region, d, q_max) for d in degs}
        red = MorseReduction(self.ring)
        ids: dict[tuple[int, int], int] = {}
        rev: list[tuple[int, int]] = []
        for d in degs:
            for j in range(self.layouts[d].total):
                ids[(d, j)] = red.add_cell(d)
                rev.append((d, j))
        for d in degs:
            if (d - 1) not in self.layouts:
                continue
            cols = _degree_boundary_columns(
                ops, region, d, self.layouts[d], self.layouts[d - 1]
            )
            for j, col in enumerate(cols):
                if col:
                    red.set_boundary(
                        ids[(d, j)], {ids[(d - 1, k)]: c for k, c in col.items()}
                    )
        red.reduce()
        if not red.is_exactly_reduced():  # pragma: no cover - field guarantee
            raise RuntimeError("field reduction left residual boundary entries")
        self.red = red
        self.ids = ids
        self.rev = rev
        # cancellation log filtered by the degree it can act on.  For a
        # homogeneous degree-d chain, projection is affected by entries
        # whose lower cell has degree d (the rewrite) and by those whose
        # upper cell does (the forced coordinate drop); lifting only by
        # entries whose upper cell has degree d.  Relative log order must
        # survive the filtering.
        self._down_by_deg: dict[int, list] = {}
        self._up_by_deg: dict[int, list] = {}
        for entry in red.log:
            a, b = entry[0], entry[1]
            self._down_by_deg.setdefault(red.degree[a], []).append(entry)
            self._down_by_deg.setdefault(red.degree[b], []).append(entry)
            self._up_by_deg.setdefault(red.degree[b], []).append(entry)

    def alive(self, d: int) -> list[int]:
        return self.red.alive(d)

    def group(self, d: int) -> HomologyGroup:
        if not (self.lo <= d <= self.hi):
            raise ValueError(f"degree {d} is outside the trusted window")
        return HomologyGroup(self.ring, len(self.red.alive(d)))

    def lift(self, cell: int) -> dict[int, object]:
        """A truncation chain projecting to a surviving cell (degree-filtered)."""
        ring = self.ring
        d = self.red.degree[cell]
        v: dict[int, object] = {cell: ring.one}
        for a, b, lam, _, row_items in reversed(self._up_by_deg.get(d, ())):
            acc = ring.zero
            for y, c_ya in row_items:
                vy = v.get(y)
                if vy is not None:
                    acc = ring.add(acc, ring.mul(c_ya, vy))
            if acc != 0:
                coeff = ring.neg(ring.mul(acc, ring.inv(lam)))
                new = ring.add(v.get(b, ring.zero), coeff)
                if new == 0:
                    v.pop(b, None)
                else:
                    v[b] = new
        return v

    def project(self, chain: dict[int, object], d: int) -> dict[int, object]:
        """Image of a homogeneous degree-d chain among surviving cells."""
        ring = self.ring
        v = {i: c for i, c in chain.items() if c != 0}
        for a, b, lam, col_items, _ in self._down_by_deg.get(d, ()):
            va = v.pop(a, None)
            if va is not None:
                factor = ring.neg(ring.mul(va, ring.inv(lam)))
                for x, c in col_items:
                    if x == a:
                        continue
                    new = ring.add(v.get(x, ring.zero), ring.mul(factor, c))
                    if new == 0:
                        v.pop(x, None)
                    else:
                        v[x] = new
            v.pop(b, None)
        return v


def _stage_map(src: _TotalStage, dst: _TotalStage, d: int) -> ExactMatrix:
    """Matrix of H_d(inclusion) between two reduced truncations.

    Row layouts are increasing in q, so a summand keeps its (degree, index)
    address in every later truncation and the chain-level inclusion is an
    id-relabeling.
    """
    if src.q_max > dst.q_max:
        raise ValueError("src truncation must sit inside dst")
    ring = src.ring
    rows_alive = dst.alive(d)
    cols_alive = src.alive(d)
    row_pos = {cell: r for r, cell in enumerate(rows_alive)}
    entries = {}
    for j, y in enumerate(cols_alive):
        lifted = src.lift(y)
        moved = {dst.ids[src.rev[cell]]: c for cell, c in lifted.items()}
        down = dst.project(moved, d)
        for cell, c in down.items():
            entries[(row_pos[cell], j)] = c
    return ExactMatrix(
        ring, len(rows_alive), len(cols_alive), entries, _normalized=True
    )


# ---------------------------------------------------------------------------
# verdicts and tables

@dataclass
class StabilizationReport:
    """Progress of one degree along a truncation (or S-) tower.

    stages pair the tower coordinate with the homology group found there;
    maps[i] is the induced matrix stages[i] -> stages[i+1].  Two
    certificates can settle a degree:

    "stabilized": `persistence` consecutive maps were isomorphisms, so the
    groups themselves became constant.  "stabilized-persistent": the ranks
    of all composites spanning `persistence` consecutive steps agreed over
    `persistence` consecutive windows; the persistent classes then have
    settled even though each stage may carry transient ones near its
    truncation edge (a finite truncation of the 2-periodic plane always
    ends in a raw top row, and classes supported there are born and killed
    periodically - constancy of stage dimensions is the wrong signal in
    exactly those degrees, which is why the composite-rank certificate
    exists).  The reported value is the persistent rank.

    "not-stabilized" means the schedule ran out first; the last group is
    then still reported as a lower bound when every observed map was
    injective, and as unresolved otherwise.
    """

    degree: int
    persistence: int
    stages: list[tuple[int, HomologyGroup]] = field(default_factory=list)
    maps: list[ExactMatrix] = field(default_factory=list)
    verdict: str = "not-stabilized"
    q_star: int | None = None
    value: HomologyGroup | None = None
    value_kind: str = "unresolved"
    dying: list[str] = field(default_factory=list)

    def label(self) -> str:
        if self.verdict == "stabilized":
            return f"stabilized-at({self.q_star})"
        if self.verdict == "stabilized-persistent":
            return f"stabilized-persistent-at({self.q_star})"
        return "not-stabilized"

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "verdict": self.label(),
            "value": None if self.value is None else self.value.to_json(),
            "value_kind": self.value_kind,
            "stages": [
                {"at": q, "group": g.to_json()} for q, g in self.stages
            ],
            "dying": list(self.dying),
        }


@dataclass
class HomologyTable:
    """Per-degree results of one theory over one base."""

    theory: str
    base: BaseRing
    groups: dict[int, HomologyGroup | None]
    reports: dict[int, StabilizationReport] = field(default_factory=dict)

    def dimension(self, d: int) -> int | None:
        g = self.groups.get(d)
        return None if g is None else g.dimension

    def to_json(self) -> dict:
        degrees = {}
        for d in sorted(self.groups):
            g = self.groups[d]
            degrees[str(d)] = None if g is None else g.to_json()
        out = {"theory": self.theory, "base": self.base.label(), "degrees": degrees}
        if self.reports:
            out["verdicts"] = {
                str(d): self.reports[d].to_json() for d in sorted(self.reports)
            }
        return out


def default_q_schedule(hi: int) -> list[int]:
    """Truncation schedule d_hi + 4, +8, ..., +24: two periods per step."""
    return [hi + 4 + 4 * k for k in range(6)]


def _composite_rank(maps: list[ExactMatrix], start: int) -> int:
    """Rank of maps[-1] * ... * maps[start], the stage-start image downstream."""
    comp = maps[start]
    for t in range(start + 1, len(maps)):
        comp = maps[t] * comp
    return rank(comp) if comp.nrows and comp.ncols else 0


def _persistent_rank(maps: list[ExactMatrix], h: int) -> int | None:
    """Common downstream-image rank anchored at the h latest eligible stages.

    A class seen at stage i contributes to the newest stage exactly when
    it lies outside the kernel of the composite maps[i] .. maps[-1]; that
    rank counts classes from stage i still alive now.  Only anchors at
    least h steps back are eligible, so every counted class has survived a
    full persistence window, and the h most recent eligible anchors must
    agree; transient truncation-edge classes (born and killed between
    anchors) then cancel out of the count.  Returns None when the anchors
    disagree.
    """
    n = len(maps)
    common = None
    for i in range(n - 2 * h + 1, n - h + 1):
        r = _composite_rank(maps, i)
        if common is None:
            common = r
        elif r != common:
            return None
    return common


def _run_truncation_tower(
    ops: _OperatorColumns,
    region: str,
    degrees: tuple[int, int],
    q_schedule,
    persistence: int,
) -> dict[int, StabilizationReport]:
    lo, hi = degrees
    if lo > hi:
        raise ValueError("empty degree interval")
    schedule = list(q_schedule)
    if schedule != sorted(set(schedule)):
        raise ValueError("q_schedule must be strictly increasing")
    if persistence < 2:
        raise ValueError("persistence must be >= 2")
    if len(schedule) < 2:
        raise ValueError("q_schedule needs at least two stages")
    reports = {
        d: StabilizationReport(degree=d, persistence=persistence)
        for d in range(lo, hi + 1)
    }
    runs = {d: 0 for d in reports}
    pending = set(reports)
    prev: _TotalStage | None = None
    for Q in schedule:
        if not pending:
            break
        stage = _TotalStage(ops, region, Q, lo, hi)
        for d in sorted(pending):
            rep = reports[d]
            rep.stages.append((Q, stage.group(d)))
            if prev is not None:
                M = _stage_map(prev, stage, d)
                rep.maps.append(M)
                src_dim = M.ncols
                r = rank(M) if src_dim and M.nrows else 0
                if r < src_dim:
                    rep.dying.append(
                        f"{src_dim - r} class(es) of H_{d} at q_max={prev.q_max} "
                        f"die in q_max={Q}"
                    )
                iso = src_dim == M.nrows and r == src_dim
                runs[d] = runs[d] + 1 if iso else 0
                # an iso run alone can be a plateau between two deaths of a
                # truncation-edge class; demand the base of the tower still
                # see the full current group through the composite
                if (
                    runs[d] >= persistence
                    and _composite_rank(rep.maps, 0) == rep.stages[-1][1].dimension
                ):
                    rep.verdict = "stabilized"
                    rep.q_star = rep.stages[len(rep.stages) - 1 - persistence][0]
                    rep.value = rep.stages[-1][1]
                    rep.value_kind = "stabilized"
                    pending.discard(d)
                elif len(rep.maps) >= 2 * persistence - 1:
                    r = _persistent_rank(rep.maps, persistence)
                    if r is not None:
                        rep.verdict = "stabilized-persistent"
                        rep.q_star = rep.stages[len(rep.maps) - 2 * persistence + 1][0]
                        rep.value = HomologyGroup(stage.ring, r)
                        rep.value_kind = "stabilized"
                        pending.discard(d)
        prev = stage
    for d, rep in reports.items():
        if rep.value_kind == "unresolved":
            injective = all(
                (rank(M) if M.ncols and M.nrows else 0) == M.ncols or M.ncols == 0
                for M in rep.maps
            )
            if injective and rep.stages:
                rep.value = rep.stages[-1][1]
                rep.value_kind = "lower-bound"
    return reports


def _table_from_reports(
    theory: str, base: BaseRing, reports: dict[int, StabilizationReport]
) -> HomologyTable:
    groups = {
        d: (rep.value if rep.value_kind == "stabilized" else None)
        for d, rep in reports.items()
    }
    return HomologyTable(theory=theory, base=base, groups=groups, reports=reports)


def hp_poly(
    X: CyclicModule,
    degrees: tuple[int, int],
    q_schedule=None,
    persistence: int = 3,
) -> HomologyTable:
    """Direct-sum 2-periodic homology via the row-truncation colimit.

    Values are only filled in for degrees whose tower stabilized; all other
    degrees stay None with the verdict explaining why.
    """
    if q_schedule is None:
        q_schedule = default_q_schedule(degrees[1])
    ops = _op_columns(X)
    reports = _run_truncation_tower(ops, "plane", degrees, q_schedule, persistence)
    return _table_from_reports("HPpoly", X.base, reports)


def hc_minus_poly(
    X: CyclicModule,
    degrees: tuple[int, int],
    q_schedule=None,
    persistence: int = 3,
) -> HomologyTable:
    """Direct-sum negative-cyclic homology: the columns p <= 0, truncated."""
    if q_schedule is None:
        q_schedule = default_q_schedule(degrees[1])
    ops = _op_columns(X)
    reports = _run_truncation_tower(ops, "left", degrees, q_schedule, persistence)
    return _table_from_reports("HC-poly", X.base, reports)


def hc(X: CyclicModule, d_max: int) -> HomologyTable:
    """Cyclic homology: the first-quadrant totalization, degrees 0..d_max.

    Finite in each degree (rows q <= d suffice), so this is exact and
    carries no stabilization reports.
    """
    if d_max < 0:
        raise ValueError("d_max must be >= 0")
    ops = _op_columns(X)
    stage = _TotalStage(ops, "first", d_max + 1, 0, d_max)
    groups = {d: stage.group(d) for d in range(d_max + 1)}
    return HomologyTable(theory="HC", base=X.base, groups=groups)


# ---------------------------------------------------------------------------
# the S-tower

def _s_map_on_stage(stage: _TotalStage, n: int) -> ExactMatrix:
    """H_n -> H_{n-2} induced by deleting the two leftmost columns.

    The quotient of the first quadrant by columns p in {0, 1} is again the
    first-quadrant complex, shifted two columns left; on summands the map
    keeps (p, q) with p >= 2 as (p - 2, q) and kills the rest.  Row index
    within a summand is untouched.
    """
    ring = stage.ring
    rows_alive = stage.alive(n - 2)
    cols_alive = stage.alive(n)
    row_pos = {cell: r for r, cell in enumerate(rows_alive)}
    entries = {}
    for j, y in enumerate(cols_alive):
        lifted = stage.lift(y)
        shifted: dict[int, object] = {}
        for cell, c in lifted.items():
            d_cell, index = stage.rev[cell]
            q, i = stage.layouts[d_cell].locate(index)
            if d_cell - q >= 2:
                tgt = stage.layouts[d_cell - 2].offsets[q] + i
                shifted[stage.ids[(d_cell - 2, tgt)]] = c
        down = stage.project(shifted, n - 2)
        for cell, c in down.items():
            entries[(row_pos[cell], j)] = c
    return ExactMatrix(
        ring, len(rows_alive), len(cols_alive), entries, _normalized=True
    )


def sbi_S_map(
    X: CyclicModule, d: int, k: int
) -> tuple[ExactMatrix, HomologyGroup, HomologyGroup]:
    """The periodicity map HC_{d+2k} -> HC_{d+2k-2} in canonical bases."""
    n = d + 2 * k
    if n < 2:
        raise ValueError("need d + 2k >= 2 so both groups exist")
    ops = _op_columns(X)
    stage = _TotalStage(ops, "first", n + 1, max(0, n - 2), n)
    return _s_map_on_stage(stage, n), stage.group(n), stage.group(n - 2)


def _check_tower_depth(d: int, K: int, persistence: int) -> None:
    if K < persistence:
        raise ValueError("K must be at least the persistence horizon")
    if d + 2 * (K - persistence) < 0:
        # groups below the quadrant are zero and their maps vacuous isos;
        # a persistence run must not be allowed to live down there
        raise ValueError("K too small: deepest persistence maps leave the quadrant")


def _s_tower_run(
    stage: _TotalStage,
    window_lo: int,
    d: int,
    K: int,
    persistence: int,
    s_maps: dict[int, ExactMatrix] | None = None,
) -> StabilizationReport:
    """Walk HC_{d+2K} -> ... -> HC_d on a prepared stage, deepest map first.

    The limit along the tower is determined by its tail, so the verdict
    demands the deepest `persistence` maps be isomorphisms and reports the
    deep group as the value.  `s_maps` memoizes S-maps across degrees that
    share the stage.
    """
    rep = StabilizationReport(degree=d, persistence=persistence)

    def group_at(m: int) -> HomologyGroup:
        return stage.group(m) if m >= window_lo else HomologyGroup(stage.ring, 0)

    for j in range(K, -1, -1):
        rep.stages.append((d + 2 * j, group_at(d + 2 * j)))
    run = 0
    run_alive = True
    for j in range(K, 0, -1):
        n = d + 2 * j
        if s_maps is not None and n in s_maps:
            M = s_maps[n]
        else:
            if n >= 2:
                M = _s_map_on_stage(stage, n)
            else:
                M = ExactMatrix.zero(
                    stage.ring, group_at(n - 2).dimension, group_at(n).dimension
                )
            if s_maps is not None:
                s_maps[n] = M
        rep.maps.append(M)
        src_dim, tgt_dim = M.ncols, M.nrows
        r = rank(M) if src_dim and tgt_dim else 0
        if r < src_dim:
            rep.dying.append(
                f"{src_dim - r} class(es) die along S: HC_{n} -> HC_{n - 2}"
            )
        iso = src_dim == tgt_dim and r == src_dim
        if run_alive and iso:
            run += 1
            if run == persistence:
                rep.verdict = "stabilized"
                rep.q_star = d + 2 * K
                rep.value = rep.stages[0][1]
                rep.value_kind = "stabilized"
        elif run_alive and not iso:
            run_alive = False
    return rep


def hp_via_S_tower(
    X: CyclicModule, d: int, K: int, persistence: int = 3
) -> tuple[HomologyGroup | None, StabilizationReport]:
    """2-periodic homology of degree d as the limit of the periodicity tower.

    Computes HC_{d+2K} -> ... -> HC_d inside one reduced first-quadrant
    complex.  The limit is pro-constant exactly when the deepest maps are
    isomorphisms; the verdict demands this for the first `persistence`
    maps, and the stable deep value is then reported.
    """
    _check_tower_depth(d, K, persistence)
    n_top = d + 2 * K
    ops = _op_columns(X)
    lo = max(0, d)
    stage = _TotalStage(ops, "first", n_top + 1, lo, n_top)
    rep = _s_tower_run(stage, lo, d, K, persistence)
    return (rep.value if rep.verdict == "stabilized" else None), rep


def hp_s_tower_table(
    X: CyclicModule,
    degrees: tuple[int, int],
    K: int | None = None,
    persistence: int = 3,
) -> HomologyTable:
    """S-tower limits over a degree range, sharing one reduced complex.

    With K=None each degree gets the shallowest depth whose persistence
    run stays inside the first quadrant.  All towers read groups and maps
    off a single Morse-reduced first-quadrant window, so this is much
    cheaper than one hp_via_S_tower call per degree.
    """
    lo_d, hi_d = degrees
    if lo_d > hi_d:
        raise ValueError("empty degree interval")
    depths = {}
    for d in range(lo_d, hi_d + 1):
        k = K if K is not None else persistence + max(0, -(d // 2))
        _check_tower_depth(d, k, persistence)
        depths[d] = k
    n_max = max(d + 2 * depths[d] for d in depths)
    ops = _op_columns(X)
    stage = _TotalStage(ops, "first", n_max + 1, 0, n_max)
    cache: dict[int, ExactMatrix] = {}
    reports = {
        d: _s_tower_run(stage, 0, d, depths[d], persistence, s_maps=cache)
        for d in range(lo_d, hi_d + 1)
    }
    return _table_from_reports("HP", X.base, reports)


# ---------------------------------------------------------------------------
# conjugate-filtration dimension bookkeeping

@dataclass
class ConjugateReport:
    """Outcome of the dimension comparison dim HP^poly_d vs sum of HH dims.

    rows hold (degree, left side or None, right side, status) where status
    is "equal", "violated" (left exceeds right - the asserted inequality
    fails), "smaller" (strict, inequality fine but equality not observed),
    or "unresolved" (tower verdict withheld a value).
    """

    refused: bool
    reason: str | None
    hh_bound: int | None
    hh_dims: dict[int, int]
    rows: list[tuple[int, int | None, int, str]]

    @property
    def ok(self) -> bool:
        return not self.refused and all(s == "equal" for _, _, _, s in self.rows)


def conjugate_dimension_check(
    A,
    degrees: tuple[int, int],
    q_schedule=None,
    persistence: int = 3,
    hh_margin: int = 2,
    hp_table: HomologyTable | None = None,
) -> ConjugateReport:
    """Compare stabilized HP^poly dimensions with folded Hochschild ones.

    Over the prime field the twist entering the graded comparison preserves
    dimensions, so for bounded HH the prediction in degree d is
    sum_i dim HH_{d+2i}.  HH dimensions come from the normalized complex;
    boundedness is checked empirically: the top `hh_margin` computed
    degrees must vanish, otherwise the check refuses rather than folding a
    possibly infinite sum.

    A caller who already ran the tower for this algebra can pass its table
    as hp_table; it must cover `degrees` and is trusted to belong to A.
    """
    from .cyclic import cyclic_bar_module, normalized

    if not A.base.is_field or A.base.characteristic == 0:
        raise ValueError("the comparison is a positive-characteristic statement")
    lo, hi = degrees
    q_check = max(hi, 0) + hh_margin + 2
    nb = normalized(A)
    hh_cx = nb.hochschild_complex(q_check + 1)
    hh_dims = {q: hh_cx.homology(q).dimension for q in range(q_check + 1)}
    nonzero = [q for q, v in hh_dims.items() if v]
    bound = max(nonzero) if nonzero else -1
    if bound > q_check - hh_margin:
        return ConjugateReport(
            refused=True,
            reason=(
                f"HH is nonzero in degree {bound}, too close to the computed "
                f"horizon {q_check}; cannot certify boundedness"
            ),
            hh_bound=None,
            hh_dims=hh_dims,
            rows=[],
        )
    table = hp_table
    if table is None:
        table = hp_poly(cyclic_bar_module(A), degrees, q_schedule, persistence)
    elif any(d not in table.groups for d in range(lo, hi + 1)):
        raise ValueError("provided hp_table does not cover the requested degrees")
    rows = []
    for d in range(lo, hi + 1):
        rhs = sum(v for q, v in hh_dims.items() if q <= bound and (q - d) % 2 == 0)
        lhs = table.dimension(d)
        if lhs is None:
            status = "unresolved"
        elif lhs == rhs:
            status = "equal"
        elif lhs > rhs:
            status = "violated"
        else:
            status = "smaller"
        rows.append((d, lhs, rhs, status))
    return ConjugateReport(
        refused=False, reason=None, hh_bound=bound, hh_dims=hh_dims, rows=rows
    )
