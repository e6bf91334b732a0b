"""Slice-encoded permutation charts and braid charts.

A chart is presented by a generic horizontal sweep: the sweep line meets the
chart in a word of labeled strand points, and the chart is the ordered list of
events transforming that word, starting and ending empty (the chart closes up
in the sphere).  Event kinds and their effect on the word at ``position`` p:

  black    valency-1 vertex; inserts one strand (insert=True) or deletes the
           strand at p (insert=False); carries the branch point
  cup/cap  a strand minimum/maximum; inserts/removes two adjacent points of
           one edge (opposite signs when oriented)
  crossing valency-4 vertex; swaps adjacent strands labeled (i, j), |i-j| > 1
  white    valency-6 vertex; rewrites strands (i, j, i) -> (j, i, j),
           |i-j| = 1, realizing the defining relation of the label group

Unoriented charts induce permutation monodromies through i -> (i i+1);
oriented charts carry a sign per strand and induce braid monodromies through
i -> i-th generator.  The sign patterns admitted at an oriented white vertex
are exactly the six rotational readings of the relator, tabulated in
``white_sign_patterns``.

Monodromy convention: the base point sits at the end of the sweep; the
meridian entry of a black event with prefix word P and letter x is P x P^-1,
multiplied left to right like everything in this package.  In oriented
charts the black event's sign is the meridian exponent; the strand born by
an insertion carries the opposite sign in the word, which is exactly what
makes the entries of a closed sweep multiply to the identity.  Positions and
event indices are 0-based.
"""

from __future__ import annotations

import dataclasses
import functools
import random
from typing import Callable, Optional, Sequence

from . import permutations
from .braids import BraidWord
from .hurwitz import BRAID, PERMUTATION, HurwitzSystem
from .permutations import Permutation

EVENT_KINDS = ("black", "white", "crossing", "cup", "cap")

# (consumed, produced) strand counts per kind; black depends on insert.
_ARITY = {"white": (3, 3), "crossing": (2, 2), "cup": (0, 2), "cap": (2, 0)}


class ChartError(ValueError):
    pass


class MoveError(ChartError):
    pass


@dataclasses.dataclass(frozen=True)
class ChartEvent:
    kind: str
    position: int
    labels: tuple[int, ...]
    insert: Optional[bool] = None  # black only
    sign: Optional[int] = None  # oriented charts: black letter / cup upper twin

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ChartError(f"unknown event kind {self.kind!r}")
        if self.kind == "black" and self.insert is None:
            raise ChartError("black events need insert=True or insert=False")
        if self.sign is not None and self.sign not in (1, -1):
            raise ChartError(f"sign must be +1 or -1, got {self.sign!r}")
        want = {"black": 1, "cup": 1, "cap": 1, "crossing": 2, "white": 2}[self.kind]
        if len(self.labels) != want:
            raise ChartError(f"{self.kind} event needs {want} label(s)")

    def arity(self) -> tuple[int, int]:
        if self.kind == "black":
            return (0, 1) if self.insert else (1, 0)
        return _ARITY[self.kind]


def black(label: int, position: int, insert: bool, sign: Optional[int] = None) -> ChartEvent:
    return ChartEvent("black", position, (label,), insert, sign)


def white(i: int, j: int, position: int) -> ChartEvent:
    return ChartEvent("white", position, (i, j))


def crossing(i: int, j: int, position: int) -> ChartEvent:
    return ChartEvent("crossing", position, (i, j))


def cup(label: int, position: int, sign: Optional[int] = None) -> ChartEvent:
    return ChartEvent("cup", position, (label,), sign=sign)


def cap(label: int, position: int) -> ChartEvent:
    return ChartEvent("cap", position, (label,))


@dataclasses.dataclass(frozen=True)
class Chart:
    degree: int
    oriented: bool
    events: tuple[ChartEvent, ...]

    def __post_init__(self):
        if self.degree < 2:
            raise ChartError("charts need degree >= 2")
        if self.degree > permutations.MAX_DEGREE:
            raise ChartError(
                f"degree {self.degree} exceeds the configured cap {permutations.MAX_DEGREE}"
            )

    def black_count(self) -> int:
        return sum(1 for e in self.events if e.kind == "black")


@functools.lru_cache(maxsize=None)
def white_sign_patterns(i: int, j: int) -> dict[tuple[int, int, int], tuple[int, int, int]]:
    """Admissible oriented readings of a white vertex with labels (i, j).

    Keys are the signs of the consumed strands (i, j, i); values are the signs
    of the produced strands (j, i, j).  Derived from the six rotations of the
    relator read around the vertex: consumed letters left to right, produced
    letters reversed with signs flipped.
    """
    out: dict[tuple[int, int, int], tuple[int, int, int]] = {}
    base_signs = (1, 1, 1, -1, -1, -1)
    for first in (i, j):
        second = j if first == i else i
        labels = (first, second) * 3
        for r in range(6):
            lab = labels[r:] + labels[:r]
            sgn = base_signs[r:] + base_signs[:r]
            if lab[:3] != (i, j, i):
                continue
            consumed = sgn[:3]
            produced = tuple(-s for s in reversed(sgn[3:]))
            out[consumed] = produced
    return out


Strand = tuple[int, int, int]  # (label, sign, segment id)


@dataclasses.dataclass
class SweepRecord:
    """Full strand bookkeeping of one sweep, shared by the chart algorithms."""

    words: list[tuple[Strand, ...]]  # words[t] before event t; words[-1] final
    event_io: list[tuple[tuple[int, ...], tuple[int, ...]]]  # segment ids in/out
    segment_label: dict[int, int]
    segment_sign: dict[int, int]  # sign carried in the word (oriented charts)
    edge_of: dict[int, int]  # segment -> edge class (segments merged at cups/caps)

    def edges(self) -> dict[int, list[int]]:
        by_edge: dict[int, list[int]] = {}
        for seg in sorted(self.segment_label):
            by_edge.setdefault(self.edge_of[seg], []).append(seg)
        return by_edge


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _sweep(chart: Chart, collect: bool = False) -> SweepRecord:
    """Run the sweep, validating every event; raises ChartError on violation.

    With collect=True the full SweepRecord is built; otherwise only the word
    evolution is checked (cheaper, same validation).
    """
    d = chart.degree
    word: list[Strand] = []
    next_seg = 0
    record = SweepRecord([], [], {}, {}, {})
    edge_union = _UnionFind()

    def fail(idx: int, msg: str):
        raise ChartError(f"event {idx}: {msg}")

    def new_segment(label: int, sign: int) -> int:
        nonlocal next_seg
        seg = next_seg
        next_seg += 1
        record.segment_label[seg] = label
        record.segment_sign[seg] = sign
        edge_union.find(seg)
        return seg

    for idx, ev in enumerate(chart.events):
        if collect:
            record.words.append(tuple(word))
        p = ev.position
        n_in, _ = ev.arity()
        for lab in ev.labels:
            if not (1 <= lab <= d - 1):
                fail(idx, f"label {lab} out of range 1..{d - 1}")
        if ev.kind == "crossing" and abs(ev.labels[0] - ev.labels[1]) <= 1:
            fail(idx, f"crossing labels {ev.labels} must differ by more than 1")
        if ev.kind == "white" and abs(ev.labels[0] - ev.labels[1]) != 1:
            fail(idx, f"white labels {ev.labels} must be adjacent")
        if not (0 <= p <= len(word) - n_in):
            fail(idx, f"position {p} out of range for word length {len(word)}")
        consumed = tuple(word[p + t][2] for t in range(n_in))

        if ev.kind == "black":
            lab = ev.labels[0]
            if ev.insert:
                # The event sign is the meridian exponent; the strand it
                # births crosses slices with the opposite sign (that is what
                # makes the total monodromy of a closed sweep trivial).
                if chart.oriented and ev.sign is None:
                    fail(idx, "oriented black insert needs a sign")
                strand_sign = -ev.sign if (chart.oriented and ev.sign is not None) else 1
                word.insert(p, (lab, strand_sign, new_segment(lab, strand_sign)))
            else:
                got_lab, got_sign, _seg = word[p]
                if got_lab != lab:
                    fail(idx, f"strand at {p} has label {got_lab}, expected {lab}")
                if chart.oriented and ev.sign is not None and ev.sign != got_sign:
                    fail(idx, f"strand at {p} has sign {got_sign}, expected {ev.sign}")
                del word[p]
        elif ev.kind == "cup":
            lab = ev.labels[0]
            sign = ev.sign if ev.sign is not None else 1
            a = new_segment(lab, sign)
            b = new_segment(lab, -sign if chart.oriented else sign)
            edge_union.union(a, b)
            word[p:p] = [(lab, sign, a), (lab, -sign if chart.oriented else sign, b)]
        elif ev.kind == "cap":
            lab = ev.labels[0]
            (la, sa, ga), (lb, sb, gb) = word[p], word[p + 1]
            if la != lab or lb != lab:
                fail(idx, f"cap labels ({la}, {lb}) do not match {lab}")
            if chart.oriented and sa != -sb:
                fail(idx, "cap needs opposite strand signs")
            edge_union.union(ga, gb)
            del word[p : p + 2]
        elif ev.kind == "crossing":
            i, j = ev.labels
            (la, sa, _), (lb, sb, _) = word[p], word[p + 1]
            if (la, lb) != (i, j):
                fail(idx, f"strands at {p} are ({la}, {lb}), expected ({i}, {j})")
            segs = (new_segment(j, sb), new_segment(i, sa))
            word[p : p + 2] = [(j, sb, segs[0]), (i, sa, segs[1])]
        elif ev.kind == "white":
            i, j = ev.labels
            labs = tuple(word[p + t][0] for t in range(3))
            if labs != (i, j, i):
                fail(idx, f"strands at {p} are {labs}, expected ({i}, {j}, {i})")
            signs = tuple(word[p + t][1] for t in range(3))
            if chart.oriented:
                table = white_sign_patterns(i, j)
                if signs not in table:
                    fail(idx, f"sign pattern {signs} not admissible at a white vertex")
                out_signs = table[signs]
            else:
                out_signs = (1, 1, 1)
            segs = tuple(new_segment(l, s) for l, s in zip((j, i, j), out_signs))
            word[p : p + 3] = [
                (j, out_signs[0], segs[0]),
                (i, out_signs[1], segs[1]),
                (j, out_signs[2], segs[2]),
            ]
        record.event_io.append((consumed, _produced_of(word, ev, p)))

    if word:
        raise ChartError(
            f"event {len(chart.events)}: sweep ends with nonempty word "
            f"{tuple((l, s) for l, s, _ in word)}"
        )
    if collect:
        record.words.append(tuple(word))
        record.edge_of = {seg: edge_union.find(seg) for seg in record.segment_label}
    return record


def _produced_of(word: list[Strand], ev: ChartEvent, p: int) -> tuple[int, ...]:
    _, n_out = ev.arity()
    return tuple(word[p + t][2] for t in range(n_out))


@dataclasses.dataclass(frozen=True)
class ChartReport:
    valid: bool
    error: Optional[str] = None
    event_index: Optional[int] = None
    black_count: int = 0


def validate_chart(chart: Chart) -> ChartReport:
    """Check sweep validity and the per-event label constraints.

    Never raises; the report carries the first violation and its event index.
    """
    try:
        _sweep(chart)
    except ChartError as exc:
        msg = str(exc)
        idx = None
        if msg.startswith("event "):
            idx = int(msg.split(":", 1)[0].split()[1])
        return ChartReport(False, msg, idx, 0)
    return ChartReport(True, None, None, chart.black_count())


def sweep_record(chart: Chart) -> SweepRecord:
    """Validated full sweep bookkeeping (words, segments, edges)."""
    return _sweep(chart, collect=True)


def chart_hurwitz_system(chart: Chart) -> HurwitzSystem:
    """Meridian images of the black vertices, in sweep order."""
    d = chart.degree
    entries: list = []
    record = sweep_record(chart)
    for ev, word in zip(chart.events, record.words):
        if ev.kind != "black":
            continue
        p = ev.position
        prefix = word[:p]
        lab = ev.labels[0]
        if chart.oriented:
            # Meridian exponent: the declared sign for an insertion, the
            # strand's own sign for a deletion (they agree when declared).
            if ev.insert:
                sign = ev.sign if ev.sign is not None else 1
            else:
                sign = word[p][1]
            pw = BraidWord(d, tuple(l * s for l, s, _ in prefix))
            entries.append(pw * BraidWord(d, (lab * sign,)) * pw.inverse())
        else:
            pw = permutations.product(
                (Permutation.adjacent(d, l) for l, _, _ in prefix), degree=d
            )
            entries.append(pw * Permutation.adjacent(d, lab) * pw.inverse())
    flavor = BRAID if chart.oriented else PERMUTATION
    return HurwitzSystem(d, tuple(entries), flavor)


def forget_orientation(chart: Chart) -> Chart:
    """Strip all signs; a braid chart becomes a permutation chart."""
    events = tuple(
        dataclasses.replace(ev, sign=None) for ev in chart.events
    )
    return Chart(chart.degree, False, events)


# -- chart moves ---------------------------------------------------------
#
# Every move produces a valid chart whose monodromy is HC-equivalent to the
# original's; the monodromy-preservation property test is the ground truth
# for the move set.  Moves touching no black vertex leave the system equal
# on the nose (the word before and after the rewritten patch is unchanged).


def _replace_events(chart: Chart, start: int, end: int, new_events: Sequence[ChartEvent]) -> Chart:
    events = chart.events[:start] + tuple(new_events) + chart.events[end:]
    out = Chart(chart.degree, chart.oriented, events)
    report = validate_chart(out)
    if not report.valid:
        raise MoveError(f"move produces an invalid chart: {report.error}")
    return out


def cup_cap_cancel(chart: Chart, at: int) -> Chart:
    """Remove an adjacent cup followed by the cap closing it at the same spot."""
    if at + 1 >= len(chart.events):
        raise MoveError("no event pair at this index")
    a, b = chart.events[at], chart.events[at + 1]
    if not (a.kind == "cup" and b.kind == "cap" and a.position == b.position and a.labels == b.labels):
        raise MoveError("events are not a cancelling cup/cap pair")
    return _replace_events(chart, at, at + 2, [])


def cup_cap_insert(chart: Chart, at: int, position: int, label: int, sign: int = 1) -> Chart:
    """Insert a trivial circle: cup then cap at the same position."""
    return _replace_events(
        chart, at, at,
        [cup(label, position, sign if chart.oriented else None), cap(label, position)],
    )


def white_pair_cancel(chart: Chart, at: int) -> Chart:
    """Remove a white vertex immediately undone by its mirror."""
    if at + 1 >= len(chart.events):
        raise MoveError("no event pair at this index")
    a, b = chart.events[at], chart.events[at + 1]
    if not (
        a.kind == "white"
        and b.kind == "white"
        and a.position == b.position
        and a.labels == tuple(reversed(b.labels))
    ):
        raise MoveError("events are not a cancelling white pair")
    return _replace_events(chart, at, at + 2, [])


def white_pair_insert(chart: Chart, at: int, position: int, i: int, j: int) -> Chart:
    """Insert a white vertex and its mirror; needs strands (i, j, i) there."""
    return _replace_events(chart, at, at, [white(i, j, position), white(j, i, position)])


def crossing_pair_cancel(chart: Chart, at: int) -> Chart:
    if at + 1 >= len(chart.events):
        raise MoveError("no event pair at this index")
    a, b = chart.events[at], chart.events[at + 1]
    if not (
        a.kind == "crossing"
        and b.kind == "crossing"
        and a.position == b.position
        and a.labels == tuple(reversed(b.labels))
    ):
        raise MoveError("events are not a cancelling crossing pair")
    return _replace_events(chart, at, at + 2, [])


def crossing_pair_insert(chart: Chart, at: int, position: int, i: int, j: int) -> Chart:
    return _replace_events(chart, at, at, [crossing(i, j, position), crossing(j, i, position)])


def event_swap(chart: Chart, at: int) -> Chart:
    """Reorder two consecutive events acting on disjoint strand windows."""
    if at + 1 >= len(chart.events):
        raise MoveError("no event pair at this index")
    a, b = chart.events[at], chart.events[at + 1]
    a_in, a_out = a.arity()
    b_in, b_out = b.arity()
    delta_a = a_out - a_in
    if b.position + b_in <= a.position:
        # b's window sits strictly left of a's.
        new_a = dataclasses.replace(a, position=a.position + (b_out - b_in))
        return _replace_events(chart, at, at + 2, [b, new_a])
    if b.position >= a.position + a_out:
        new_b = dataclasses.replace(b, position=b.position - delta_a)
        return _replace_events(chart, at, at + 2, [new_b, a])
    raise MoveError("event windows overlap; the pair cannot be reordered")


def black_through_crossing(chart: Chart, at: int) -> Chart:
    """Slide a black vertex through a crossing on a commuting label."""
    if at + 1 >= len(chart.events):
        raise MoveError("no event pair at this index")
    a, b = chart.events[at], chart.events[at + 1]
    if a.kind == "black" and b.kind == "crossing":
        i, j = b.labels
        p = b.position
        if a.insert and a.position == p and a.labels[0] == i:
            return _replace_events(chart, at, at + 2, [dataclasses.replace(a, position=p + 1)])
        if a.insert and a.position == p + 1 and a.labels[0] == j:
            return _replace_events(chart, at, at + 2, [dataclasses.replace(a, position=p)])
    if a.kind == "crossing" and b.kind == "black" and not b.insert:
        i, j = a.labels
        p = a.position
        if b.position == p + 1 and b.labels[0] == i:
            return _replace_events(chart, at, at + 2, [dataclasses.replace(b, position=p)])
        if b.position == p and b.labels[0] == j:
            return _replace_events(chart, at, at + 2, [dataclasses.replace(b, position=p + 1)])
    raise MoveError("events are not a black vertex passing through a crossing")


def black_into_white(chart: Chart, at: int) -> Chart:
    """Absorb a black vertex across a white vertex (label changes i <-> j)."""
    if at + 1 >= len(chart.events):
        raise MoveError("no event pair at this index")
    a, b = chart.events[at], chart.events[at + 1]
    if a.kind == "black" and b.kind == "white":
        i, j = b.labels
        p = b.position
        if a.insert and a.labels[0] == i and a.position == p:
            return _replace_events(
                chart, at, at + 2, [dataclasses.replace(a, labels=(j,), position=p + 2)]
            )
        if a.insert and a.labels[0] == i and a.position == p + 2:
            return _replace_events(
                chart, at, at + 2, [dataclasses.replace(a, labels=(j,), position=p)]
            )
    if a.kind == "white" and b.kind == "black" and not b.insert:
        i, j = a.labels
        p = a.position
        if b.labels[0] == j and b.position == p:
            return _replace_events(
                chart, at, at + 2, [dataclasses.replace(b, labels=(i,), position=p + 2)]
            )
        if b.labels[0] == j and b.position == p + 2:
            return _replace_events(
                chart, at, at + 2, [dataclasses.replace(b, labels=(i,), position=p)]
            )
    raise MoveError("events are not a black vertex meeting a white vertex")


def patch_rewrite(chart: Chart, start: int, end: int, replacement: Sequence[ChartEvent]) -> Chart:
    """Replace a black-free event slice by another with the same word effect.

    This is the in-a-disk rewriting move: because no branch point is touched
    and the boundary word is preserved, the monodromy is unchanged exactly.
    """
    if not (0 <= start <= end <= len(chart.events)):
        raise MoveError("bad event slice")
    if any(ev.kind == "black" for ev in chart.events[start:end]):
        raise MoveError("patch may not contain black vertices")
    if any(ev.kind == "black" for ev in replacement):
        raise MoveError("replacement may not contain black vertices")
    record = sweep_record(chart)
    before, after = record.words[start], record.words[end]
    out = _replace_events(chart, start, end, replacement)
    new_record = sweep_record(out)
    new_before = new_record.words[start]
    new_after = new_record.words[start + len(replacement)]

    def strip(w):
        return tuple((l, s) for l, s, _ in w)
    if strip(new_before) != strip(before) or strip(new_after) != strip(after):
        raise MoveError("replacement does not reproduce the boundary words")
    return out


MOVES: dict[str, Callable] = {
    "cup-cap-cancel": cup_cap_cancel,
    "cup-cap-insert": cup_cap_insert,
    "white-cancel": white_pair_cancel,
    "white-insert": white_pair_insert,
    "crossing-cancel": crossing_pair_cancel,
    "crossing-insert": crossing_pair_insert,
    "swap": event_swap,
    "black-through-crossing": black_through_crossing,
    "black-into-white": black_into_white,
}


def apply_chart_move(chart: Chart, move: str, **site) -> Chart:
    """Apply a named move at a site given by keyword arguments.

    Raises MoveError when the move does not exist or does not apply there.
    """
    try:
        fn = MOVES[move]
    except KeyError:
        raise MoveError(f"unknown move {move!r}; known: {sorted(MOVES)}") from None
    try:
        return fn(chart, **site)
    except TypeError as exc:
        raise MoveError(f"bad site for {move}: {exc}") from exc


# -- orientability -------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class OrientationResult:
    orientable: bool
    witness: Optional[Chart] = None
    segment_signs: Optional[dict[int, int]] = None


def chart_orientable(chart: Chart) -> OrientationResult:
    """Search for strand signs turning an unoriented chart into a braid chart.

    Complete backtracking over the segment sign assignment: cups/caps force
    opposite signs on their twins, crossings propagate signs, white vertices
    admit only the tabulated patterns.  Returns the lexicographically least
    witness (by segment id, + before -) or a certified negative.
    """
    if chart.oriented:
        raise ChartError("chart is already oriented")
    record = sweep_record(chart)

    # Parity union-find: sign(seg) = sign(root) * parity.
    parent: dict[int, int] = {}
    parity: dict[int, int] = {}

    def find(x: int) -> tuple[int, int]:
        parent.setdefault(x, x)
        parity.setdefault(x, 1)
        if parent[x] == x:
            return x, 1
        root, par = find(parent[x])
        parent[x] = root
        parity[x] = parity[x] * par
        return root, parity[x]

    def union(a: int, b: int, rel: int) -> bool:
        ra, pa = find(a)
        rb, pb = find(b)
        if ra == rb:
            return pa * pb == rel
        parent[ra] = rb
        parity[ra] = pa * pb * rel
        return True

    whites: list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, int]]] = []
    for ev, (cons, prod) in zip(chart.events, record.event_io):
        if ev.kind in ("cup", "cap"):
            if not union(cons[0] if ev.kind == "cap" else prod[0],
                         cons[1] if ev.kind == "cap" else prod[1], -1):
                return OrientationResult(False)
        elif ev.kind == "crossing":
            ok = union(cons[1], prod[0], 1) and union(cons[0], prod[1], 1)
            if not ok:
                return OrientationResult(False)
        elif ev.kind == "white":
            whites.append((cons, prod, ev.labels))

    allowed: list[set[tuple[int, ...]]] = []
    for cons, prod, (i, j) in whites:
        table = white_sign_patterns(i, j)
        allowed.append({c + p for c, p in table.items()})

    segments = sorted(record.segment_label)
    roots = []
    seen_roots = set()
    for seg in segments:
        r, _ = find(seg)
        if r not in seen_roots:
            seen_roots.add(r)
            roots.append((seg, r))  # keyed by least segment in the class

    assignment: dict[int, int] = {}

    def seg_sign(seg: int) -> Optional[int]:
        r, par = find(seg)
        if r not in assignment:
            return None
        return assignment[r] * par

    def whites_consistent() -> bool:
        for (cons, prod, _), combos in zip(whites, allowed):
            segs = cons + prod
            signs = [seg_sign(s) for s in segs]
            if any(s is None for s in signs):
                candidates = [
                    combo
                    for combo in combos
                    if all(s is None or s == c for s, c in zip(signs, combo))
                ]
                if not candidates:
                    return False
            elif tuple(signs) not in combos:
                return False
        return True

    def backtrack(k: int) -> bool:
        if k == len(roots):
            return True
        least_seg, root = roots[k]
        _, par = find(least_seg)
        for value in (par, -par):  # least segment tries +1 first
            assignment[root] = value
            if whites_consistent() and backtrack(k + 1):
                return True
        del assignment[root]
        return False

    if not whites_consistent() or not backtrack(0):
        return OrientationResult(False)

    signs = {seg: seg_sign(seg) for seg in segments}
    witness = _orient_with(chart, record, signs)
    return OrientationResult(True, witness, signs)


def _orient_with(chart: Chart, record: SweepRecord, signs: dict[int, int]) -> Chart:
    events = []
    for ev, (cons, prod) in zip(chart.events, record.event_io):
        if ev.kind == "black":
            if ev.insert:
                events.append(dataclasses.replace(ev, sign=-signs[prod[0]]))
            else:
                events.append(dataclasses.replace(ev, sign=signs[cons[0]]))
        elif ev.kind == "cup":
            events.append(dataclasses.replace(ev, sign=signs[prod[0]]))
        else:
            events.append(ev)
    return Chart(chart.degree, True, tuple(events))


# -- random charts -------------------------------------------------------


def random_chart(
    degree: int,
    size: int,
    rng: random.Random,
    oriented: bool = False,
) -> Chart:
    """A random valid closed chart with roughly ``size`` events."""
    events: list[ChartEvent] = []
    word: list[tuple[int, int]] = []  # (label, sign)

    def admissible_whites():
        out = []
        for p in range(len(word) - 2):
            (a, sa), (b, sb), (c, sc) = word[p : p + 3]
            if a == c and abs(a - b) == 1:
                if not oriented or (sa, sb, sc) in white_sign_patterns(a, b):
                    out.append((p, a, b))
        return out

    def admissible_crossings():
        return [
            p
            for p in range(len(word) - 1)
            if abs(word[p][0] - word[p + 1][0]) > 1
        ]

    def admissible_caps():
        out = []
        for p in range(len(word) - 1):
            (a, sa), (b, sb) = word[p], word[p + 1]
            if a == b and ((sa == -sb) if oriented else True):
                out.append(p)
        return out

    while len(events) < size or word:
        growing = len(events) < size - len(word) - 1
        choices = []
        if growing:
            choices += ["black-insert"] * 3 + ["cup"] * 2
        whites_ok = admissible_whites()
        crossings_ok = admissible_crossings()
        caps_ok = admissible_caps()
        if word:
            choices += ["black-delete"] * (1 if growing else 4)
        if caps_ok:
            choices += ["cap"] * (1 if growing else 4)
        if whites_ok and len(events) < size:
            choices += ["white"] * 2
        if crossings_ok and len(events) < size:
            choices += ["crossing"] * 2
        if not choices:
            choices = ["black-insert", "cup"]
        kind = rng.choice(choices)
        if kind == "black-insert":
            lab = rng.randrange(1, degree)
            p = rng.randrange(len(word) + 1)
            sign = rng.choice([1, -1]) if oriented else None
            events.append(black(lab, p, True, sign))
            word.insert(p, (lab, -sign if sign is not None else 1))
        elif kind == "black-delete":
            p = rng.randrange(len(word))
            lab, sign = word[p]
            events.append(black(lab, p, False, sign if oriented else None))
            del word[p]
        elif kind == "cup":
            lab = rng.randrange(1, degree)
            p = rng.randrange(len(word) + 1)
            sign = rng.choice([1, -1]) if oriented else None
            events.append(cup(lab, p, sign))
            s = sign if sign is not None else 1
            word[p:p] = [(lab, s), (lab, -s if oriented else s)]
        elif kind == "cap":
            p = rng.choice(caps_ok)
            events.append(cap(word[p][0], p))
            del word[p : p + 2]
        elif kind == "white":
            p, i, j = rng.choice(whites_ok)
            events.append(white(i, j, p))
            signs = tuple(s for _, s in word[p : p + 3])
            out_signs = white_sign_patterns(i, j)[signs] if oriented else (1, 1, 1)
            word[p : p + 3] = [(j, out_signs[0]), (i, out_signs[1]), (j, out_signs[2])]
        elif kind == "crossing":
            p = rng.choice(crossings_ok)
            (i, si), (j, sj) = word[p], word[p + 1]
            events.append(crossing(i, j, p))
            word[p : p + 2] = [(j, sj), (i, si)]
    return Chart(degree, oriented, tuple(events))


# -- serialization and rendering ------------------------------------------


def chart_to_json(chart: Chart) -> dict:
    events = []
    for ev in chart.events:
        item: dict = {"kind": ev.kind, "position": ev.position, "labels": list(ev.labels)}
        if ev.insert is not None:
            item["insert"] = ev.insert
        if ev.sign is not None:
            item["sign"] = ev.sign
        events.append(item)
    return {"degree": chart.degree, "oriented": chart.oriented, "events": events}


def chart_from_json(data: dict) -> Chart:
    try:
        degree = data["degree"]
        oriented = bool(data["oriented"])
        raw = data["events"]
    except (KeyError, TypeError) as exc:
        raise ChartError(f"chart file needs degree/oriented/events: {exc}") from exc
    events = []
    for k, item in enumerate(raw):
        try:
            events.append(
                ChartEvent(
                    item["kind"],
                    item["position"],
                    tuple(item["labels"]),
                    item.get("insert"),
                    item.get("sign"),
                )
            )
        except (KeyError, TypeError, ChartError) as exc:
            raise ChartError(f"event {k}: {exc}") from exc
    return Chart(degree, oriented, tuple(events))


def chart_to_dot(chart: Chart) -> str:
    """The chart graph: vertices (black/white/crossing) and its labeled edges."""
    record = sweep_record(chart)
    lines = ["graph chart {", "  node [fontsize=10];"]
    vertex_names: dict[int, str] = {}
    counter = {"black": 0, "white": 0, "crossing": 0}
    seg_ends: dict[int, list[str]] = {seg: [] for seg in record.segment_label}
    for idx, (ev, (cons, prod)) in enumerate(zip(chart.events, record.event_io)):
        if ev.kind in ("black", "white", "crossing"):
            counter[ev.kind] += 1
            name = f"{ev.kind[0]}{counter[ev.kind]}"
            vertex_names[idx] = name
            shape = {"black": "point", "white": "circle", "crossing": "diamond"}[ev.kind]
            label = "" if ev.kind == "black" else ev.kind[0].upper()
            lines.append(f'  {name} [shape={shape}, label="{label}"];')
            for seg in cons + prod:
                seg_ends[seg].append(name)
    by_edge = record.edges()
    for edge_id, segs in sorted(by_edge.items()):
        ends = [v for seg in segs for v in seg_ends[seg]]
        lab = record.segment_label[segs[0]]
        if len(ends) == 2:
            lines.append(f'  {ends[0]} -- {ends[1]} [label="{lab}"];')
        elif len(ends) == 1:
            lines.append(f'  {ends[0]} -- {ends[0]} [label="{lab}"];')
        elif not ends:
            lines.append(f'  free{edge_id} [shape=plaintext, label="O{lab}"];')
    lines.append("}")
    return "\n".join(lines)


_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def chart_to_svg(chart: Chart, cell: int = 36) -> str:
    """Sweep picture: time runs right, strand positions run up."""
    record = sweep_record(chart)
    width = (len(chart.events) + 2) * cell
    height = (max((len(w) for w in record.words), default=0) + 2) * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]

    def xy(t: int, pos: int) -> tuple[int, int]:
        return (t + 1) * cell, height - (pos + 1) * cell - cell // 2

    # Strand polylines per slice transition.
    for t, word in enumerate(record.words[:-1]):
        ev = chart.events[t]
        p = ev.position
        n_in, n_out = ev.arity()
        delta = n_out - n_in
        for pos, (lab, sign, seg) in enumerate(word):
            color = _PALETTE[(lab - 1) % len(_PALETTE)]
            if p <= pos < p + n_in:
                continue  # consumed strands drawn as event geometry
            npos = pos + (delta if pos >= p + n_in else 0)
            x1, y1 = xy(t, pos)
            x2, y2 = xy(t + 1, npos)
            parts.append(
                f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                f'stroke="{color}" stroke-width="2"/>'
            )
        color = _PALETTE[(ev.labels[0] - 1) % len(_PALETTE)]
        mid_x = xy(t, p)[0] + cell // 2
        if ev.kind == "black":
            bx, by = (xy(t + 1, p) if ev.insert else xy(t, p))
            parts.append(f'<circle cx="{bx}" cy="{by}" r="4" fill="black"/>')
        elif ev.kind in ("white", "crossing"):
            for k in range(n_in):
                x1, y1 = xy(t, p + k)
                x2, y2 = xy(t + 1, p + (n_in - 1 - k))
                c = _PALETTE[(word[p + k][0] - 1) % len(_PALETTE)]
                parts.append(
                    f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{c}" stroke-width="2"/>'
                )
            cy = (xy(t, p)[1] + xy(t, p + n_in - 1)[1]) // 2
            if ev.kind == "white":
                parts.append(
                    f'<circle cx="{mid_x}" cy="{cy}" r="5" fill="white" stroke="black"/>'
                )
        elif ev.kind == "cup":
            x2, y2 = xy(t + 1, p)
            x3, y3 = xy(t + 1, p + 1)
            parts.append(
                f'<path d="M {x2} {y2} C {x2 - cell} {y2}, {x3 - cell} {y3}, {x3} {y3}" '
                f'fill="none" stroke="{color}" stroke-width="2"/>'
            )
        elif ev.kind == "cap":
            x1, y1 = xy(t, p)
            x2, y2 = xy(t, p + 1)
            parts.append(
                f'<path d="M {x1} {y1} C {x1 + cell} {y1}, {x2 + cell} {y2}, {x2} {y2}" '
                f'fill="none" stroke="{color}" stroke-width="2"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts)
