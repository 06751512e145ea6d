"""Sparse Gaussian chain reduction with bidirectional chain transport.

Cancels invertible boundary entries (a, b) pairwise, shrinking a complex
to a homotopy-equivalent one while recording enough data to transport
chains in both directions afterwards.  Over a field a full reduction
leaves the zero differential, so surviving cells per degree count
homology; the transports realize the induced maps along truncation
towers without ever materializing a homology presentation.

Cancelling a pair (a in degree d, b in degree d+1) with unit pivot
lam = <db, a> rewrites every other degree-(d+1) boundary as
dy - <dy, a> lam^{-1} db and simply drops b-coordinates in degree d+2
(forced: the dropped coordinate is determined by d o d = 0).  The
corresponding maps are, per logged cancellation,

  down (original -> reduced):  v |-> v - v[a] lam^{-1} (db snapshot),
                               then delete the b coordinate;
  up   (reduced -> original):  v |-> v - lam^{-1} (sum_y <dy,a> v[y]) b,

replayed forward (down) or backward (up) over the log.  Pivots are
chosen by Markowitz score with deterministic tie-breaking so repeated
runs reduce identically.
"""

from __future__ import annotations

import heapq

from .rings import BaseRing


class MorseReduction:
    """Reduction state for one chain complex.

    Cells are dense integer ids grouped by degree; boundaries are dicts
    id -> coefficient over `ring`.  Usage: add cells, set boundaries,
    call reduce(), then read survivors / transport chains.
    """

    def __init__(self, ring: BaseRing):
        self.ring = ring
        self.degree: list[int] = []
        self.cols: list[dict[int, object] | None] = []  # boundary of each cell
        self.rows: list[set[int]] = []  # rows[i]: cells whose boundary hits i
        self.alive_flags: list[bool] = []
        # log entries: (a, b, lam, col_items, row_items) with snapshots as tuples
        self.log: list[tuple] = []
        self._reduced = False

    # -- construction -------------------------------------------------------

    def add_cell(self, degree: int) -> int:
        i = len(self.degree)
        self.degree.append(degree)
        self.cols.append({})
        self.rows.append(set())
        self.alive_flags.append(True)
        return i

    def set_boundary(self, i: int, boundary: dict[int, object]) -> None:
        if self.cols[i]:
            raise ValueError("boundary already set")
        col = {j: c for j, c in boundary.items() if c != 0}
        self.cols[i] = col
        for j in col:
            self.rows[j].add(i)

    # -- reduction ----------------------------------------------------------

    def _score(self, b: int, a: int) -> tuple[int, int, int]:
        return ((len(self.rows[a]) - 1) * (len(self.cols[b]) - 1), b, a)

    def reduce(self) -> None:
        if self._reduced:
            return
        ring = self.ring
        heap: list[tuple[int, int, int]] = []
        for b, col in enumerate(self.cols):
            for a, c in col.items():
                if ring.is_unit(c):
                    heap.append(self._score(b, a))
        heapq.heapify(heap)
        while heap:
            score, b, a = heapq.heappop(heap)
            if not (self.alive_flags[a] and self.alive_flags[b]):
                continue
            lam = self.cols[b].get(a)
            if lam is None or not ring.is_unit(lam):
                continue
            current = self._score(b, a)
            if current[0] > score:
                heapq.heappush(heap, current)
                continue
            self._cancel(a, b, lam, heap)
        self._reduced = True

    def _cancel(self, a: int, b: int, lam, heap) -> None:
        ring = self.ring
        cols, rows = self.cols, self.rows
        col_b = cols[b]
        row_a = [(y, cols[y][a]) for y in rows[a] if y != b]
        self.log.append((a, b, lam, tuple(col_b.items()), tuple(row_a)))
        lam_inv = ring.inv(lam)

        # detach a and b before rewriting
        self.alive_flags[a] = False
        self.alive_flags[b] = False
        for x in col_b:
            rows[x].discard(b)
        for y in rows[a]:
            if y != b:
                del cols[y][a]
        rows[a] = set()
        for x in cols[a]:
            rows[x].discard(a)
        cols[a] = None
        for z in rows[b]:  # degree d+2 boundaries lose their b coordinate
            del cols[z][b]
        rows[b] = set()

        col_b_rest = [(x, c) for x, c in col_b.items() if x != a]
        cols[b] = None
        for y, c_ya in row_a:
            mu = ring.neg(ring.mul(c_ya, lam_inv))
            col_y = cols[y]
            for x, c in col_b_rest:
                delta = ring.mul(mu, c)
                old = col_y.get(x)
                if old is None:
                    col_y[x] = delta
                    rows[x].add(y)
                    if ring.is_unit(delta):
                        heapq.heappush(heap, self._score(y, x))
                else:
                    new = ring.add(old, delta)
                    if new == 0:
                        del col_y[x]
                        rows[x].discard(y)
                    else:
                        col_y[x] = new
                        if ring.is_unit(new) and not ring.is_unit(old):
                            heapq.heappush(heap, self._score(y, x))

    # -- results ------------------------------------------------------------

    def alive(self, degree: int | None = None) -> list[int]:
        if degree is None:
            return [i for i, ok in enumerate(self.alive_flags) if ok]
        return [
            i for i, ok in enumerate(self.alive_flags) if ok and self.degree[i] == degree
        ]

    def residual_boundary(self, i: int) -> dict[int, object]:
        if not self.alive_flags[i]:
            raise ValueError("cell was cancelled")
        return dict(self.cols[i])

    def is_exactly_reduced(self, degree: int | None = None) -> bool:
        """True when no residual boundary entries remain (always, over a field)."""
        for i in self.alive(degree):
            if self.cols[i]:
                return False
        return True

    # -- chain transport -----------------------------------------------------

    def transport_down(self, chain: dict[int, object]) -> dict[int, object]:
        """Image of an original chain in the reduced complex (replays forward)."""
        ring = self.ring
        v = {i: c for i, c in chain.items() if c != 0}
        for a, b, lam, col_items, _ in self.log:
            va = v.pop(a, None)
            if va is not None:
                factor = ring.neg(ring.mul(va, ring.inv(lam)))
                for x, c in col_items:
                    if x == a:
                        continue
                    add = ring.mul(factor, c)
                    new = ring.add(v.get(x, ring.zero), add)
                    if new == 0:
                        v.pop(x, None)
                    else:
                        v[x] = new
            v.pop(b, None)
        return v

    def transport_up(self, chain: dict[int, object]) -> dict[int, object]:
        """A chain of the original complex mapping onto a reduced chain (replays backward)."""
        ring = self.ring
        v = {i: c for i, c in chain.items() if c != 0}
        for a, b, lam, _, row_items in reversed(self.log):
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


def residual_complex(red: MorseReduction):
    """Surviving cells as a ChainComplex, with the id <-> index dictionaries."""
    from .complexes import ChainComplex
    from .matrix import ExactMatrix

    by_degree: dict[int, list[int]] = {}
    for i in red.alive():
        by_degree.setdefault(red.degree[i], []).append(i)
    index = {}
    for d, cells in by_degree.items():
        cells.sort()
        for k, i in enumerate(cells):
            index[i] = k
    ranks = {d: len(cells) for d, cells in by_degree.items()}
    diffs = {}
    for d, cells in by_degree.items():
        if (d - 1) not in by_degree:
            if any(red.cols[i] for i in cells):
                raise ValueError("residual boundary leaves the surviving degrees")
            continue
        entries = {}
        for i in cells:
            for j, c in red.cols[i].items():
                entries[(index[j], index[i])] = c
        diffs[d] = ExactMatrix(red.ring, ranks[d - 1], ranks[d], entries)
    return ChainComplex(red.ring, ranks, diffs), by_degree, index


def homology_via_reduction(red: MorseReduction, d: int):
    """H_d of the reduced (hence of the original) complex."""
    from .complexes import HomologyGroup, complex_homology

    if red.ring.is_field and red.is_exactly_reduced():
        return HomologyGroup(red.ring, len(red.alive(d)))
    C, _, _ = residual_complex(red)
    return complex_homology(C, d)


def reduce_chain_complex(ring: BaseRing, ranks: dict[int, int], boundaries) -> tuple[MorseReduction, dict]:
    """Feed a rank/boundary description into a MorseReduction and run it.

    boundaries: callable (degree, index_in_degree) -> dict[(degree-1 index) -> coeff].
    Returns the reduction and the id table {(degree, index): cell id}.
    """
    red = MorseReduction(ring)
    ids: dict[tuple[int, int], int] = {}
    for d in sorted(ranks):
        for j in range(ranks[d]):
            ids[(d, j)] = red.add_cell(d)
    for d in sorted(ranks):
        if (d - 1) not in ranks:
            continue
        for j in range(ranks[d]):
            col = boundaries(d, j)
            if col:
                red.set_boundary(ids[(d, j)], {ids[(d - 1, k)]: c for k, c in col.items()})
    red.reduce()
    return red, ids
