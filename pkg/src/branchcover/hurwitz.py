"""Hurwitz systems over S_d and B_d, their moves, and HC-equivalence.

A Hurwitz system is an ordered tuple of group elements (the meridian images of
a branched-covering monodromy along a chosen generating system).  The two
moves are

  forward at k:   (..., a_k, a_{k+1}, ...) -> (..., a_{k+1}, a_{k+1}^-1 a_k a_{k+1}, ...)
  inverse at k:   (..., a_k, a_{k+1}, ...) -> (..., a_k a_{k+1} a_k^-1, a_k, ...)

plus entrywise conjugation by a group element.  Positions are 0-based here;
products read left to right as everywhere in this package.

The normal form for simple transitive closing permutation systems is
((12), ..., (12), (23), (23), (34), (34), ..., (d-1 d), (d-1 d)) with a
positive even number of (12) entries.  ``hc_normal_form`` produces it together
with a replayable move trace.
"""

from __future__ import annotations

import dataclasses
import enum
import heapq
import itertools
from collections import deque
from typing import Iterable, Sequence, Union

from . import braids, permutations
from .braids import BraidWord, braid_product, canonical_key, parse_braid, word_string
from .permutations import Permutation, cycle_string, parse_permutation

Entry = Union[Permutation, BraidWord]

PERMUTATION = "permutation"
BRAID = "braid"

DEFAULT_EQUIV_BUDGET = 100_000
DEFAULT_CONJUGACY_DEPTH = 6


class HurwitzError(ValueError):
    pass


class NonSimpleSystemError(HurwitzError):
    pass


class IntransitiveSystemError(HurwitzError):
    pass


class NonClosingSystemError(HurwitzError):
    pass


class Simplicity(enum.Enum):
    SIMPLE = "simple"
    NOT_SIMPLE = "not_simple"
    UNDETERMINED = "undetermined"


class Equivalence(enum.Enum):
    EQUIVALENT = "equivalent"
    DISTINCT = "distinct"
    UNKNOWN = "unknown"


@dataclasses.dataclass(frozen=True)
class HurwitzSystem:
    """Ordered tuple of meridian images, all of one flavor and degree."""

    degree: int
    entries: tuple[Entry, ...]
    flavor: str = PERMUTATION

    def __post_init__(self):
        if self.flavor not in (PERMUTATION, BRAID):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        want = Permutation if self.flavor == PERMUTATION else BraidWord
        for e in self.entries:
            if not isinstance(e, want):
                raise ValueError(
                    f"{self.flavor} system cannot hold {type(e).__name__} entries"
                )
            if e.degree != self.degree:
                raise ValueError(
                    f"entry degree {e.degree} does not match system degree {self.degree}"
                )
        if self.flavor == PERMUTATION:
            permutations._check_degree(self.degree)
        elif self.degree < 2:
            raise ValueError("braid systems need degree >= 2")

    def __len__(self) -> int:
        return len(self.entries)

    @staticmethod
    def of_permutations(entries: Sequence[Permutation], degree: int | None = None) -> "HurwitzSystem":
        if degree is None:
            if not entries:
                raise ValueError("empty system needs an explicit degree")
            degree = entries[0].degree
        return HurwitzSystem(degree, tuple(entries), PERMUTATION)

    @staticmethod
    def of_braids(entries: Sequence[BraidWord], degree: int | None = None) -> "HurwitzSystem":
        if degree is None:
            if not entries:
                raise ValueError("empty system needs an explicit degree")
            degree = entries[0].degree
        return HurwitzSystem(degree, tuple(entries), BRAID)

    def key(self):
        """Hashable identity up to group equality of the entries."""
        if self.flavor == PERMUTATION:
            return tuple(e.images for e in self.entries)
        return tuple(canonical_key(e) for e in self.entries)

    def __str__(self) -> str:
        body = ", ".join(str(e) for e in self.entries)
        return f"[{self.flavor} d={self.degree}: {body}]"


def _identity(degree: int, flavor: str) -> Entry:
    if flavor == PERMUTATION:
        return Permutation.identity(degree)
    return BraidWord.identity(degree)


def _conj(a: Entry, g: Entry) -> Entry:
    return a ** g


def hurwitz_move(s: HurwitzSystem, k: int, direction: str = "forward") -> HurwitzSystem:
    """One move at 0-based position k (acting on entries k and k+1).

    The total product is unchanged; forward and inverse at the same k undo
    each other.
    """
    n = len(s.entries)
    if not (0 <= k <= n - 2):
        raise IndexError(f"move position {k} out of range for {n} entries")
    a, b = s.entries[k], s.entries[k + 1]
    if direction == "forward":
        pair = (b, _conj(a, b))
    elif direction == "inverse":
        pair = (_conj(b, a.inverse()), a)
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', not {direction!r}")
    entries = s.entries[:k] + pair + s.entries[k + 2 :]
    return HurwitzSystem(s.degree, entries, s.flavor)


def conjugate_system(s: HurwitzSystem, g: Entry) -> HurwitzSystem:
    """Entrywise conjugation (a_1, ..., a_n) -> (g^-1 a_1 g, ..., g^-1 a_n g)."""
    want = Permutation if s.flavor == PERMUTATION else BraidWord
    if not isinstance(g, want):
        raise ValueError(f"conjugator flavor does not match {s.flavor} system")
    if g.degree != s.degree:
        raise ValueError(f"conjugator degree {g.degree} != system degree {s.degree}")
    return HurwitzSystem(s.degree, tuple(_conj(e, g) for e in s.entries), s.flavor)


def total_monodromy(s: HurwitzSystem) -> Entry:
    """Ordered product a_1 a_2 ... a_n (identity for the empty system)."""
    if s.flavor == PERMUTATION:
        return permutations.product(s.entries, degree=s.degree)
    return braid_product(s.entries, degree=s.degree)


def is_closing(s: HurwitzSystem) -> bool:
    return total_monodromy(s).is_identity()


# -- simplicity ----------------------------------------------------------


def braid_simplicity(
    w: BraidWord, max_conjugator_length: int = DEFAULT_CONJUGACY_DEPTH
) -> Simplicity:
    """Is w a conjugate of some generator or inverse generator?

    Exponent sum and projection give certified negatives; a bounded conjugacy
    search (conjugators up to the given generator length) gives certified
    positives.  Exhaustion without a certificate is UNDETERMINED, which is
    deliberately distinct from NOT_SIMPLE.
    """
    if braids.exponent_sum(w) not in (1, -1):
        return Simplicity.NOT_SIMPLE
    if not permutations.is_transposition(braids.project(w)):
        return Simplicity.NOT_SIMPLE
    d = w.degree
    targets = set()
    for i in range(1, d):
        targets.add(canonical_key(BraidWord(d, (i,))))
        targets.add(canonical_key(BraidWord(d, (-i,))))
    start = canonical_key(w)
    if start in targets:
        return Simplicity.SIMPLE
    seen = {start}
    frontier = [w]
    conjugators = [BraidWord(d, (i,)) for i in range(1, d)] + [
        BraidWord(d, (-i,)) for i in range(1, d)
    ]
    for _ in range(max_conjugator_length):
        next_frontier = []
        for u in frontier:
            for g in conjugators:
                v = _conj(u, g)
                key = canonical_key(v)
                if key in seen:
                    continue
                if key in targets:
                    return Simplicity.SIMPLE
                seen.add(key)
                next_frontier.append(v)
        frontier = next_frontier
        if not frontier:
            break
    return Simplicity.UNDETERMINED


def entry_simplicity_verdicts(
    s: HurwitzSystem, max_conjugator_length: int = DEFAULT_CONJUGACY_DEPTH
) -> list[Simplicity]:
    """Per-entry verdicts; permutation entries are never undetermined."""
    if s.flavor == PERMUTATION:
        return [
            Simplicity.SIMPLE if permutations.is_transposition(e) else Simplicity.NOT_SIMPLE
            for e in s.entries
        ]
    return [braid_simplicity(e, max_conjugator_length) for e in s.entries]


def is_simple_system(
    s: HurwitzSystem, max_conjugator_length: int = DEFAULT_CONJUGACY_DEPTH
) -> bool:
    """True iff every entry is certified simple (see entry_simplicity_verdicts)."""
    return all(
        v is Simplicity.SIMPLE
        for v in entry_simplicity_verdicts(s, max_conjugator_length)
    )


def is_transitive(s: HurwitzSystem) -> bool:
    """Does the monodromy group act transitively on the sheets?"""
    perms = _as_permutations(s)
    return permutations.is_transitive(perms, s.degree)


def _as_permutations(s: HurwitzSystem) -> list[Permutation]:
    if s.flavor == PERMUTATION:
        return list(s.entries)
    return [braids.project(e) for e in s.entries]


def orbit_partition(s: HurwitzSystem) -> list[frozenset[int]]:
    return permutations.orbits(_as_permutations(s), s.degree)


# -- normal form ---------------------------------------------------------

Trace = list[tuple]  # ("H", k, "forward"|"inverse") or ("C", Entry)


def replay_trace(s: HurwitzSystem, trace: Iterable[tuple]) -> HurwitzSystem:
    """Apply a recorded move sequence to a system."""
    for step in trace:
        if step[0] == "H":
            s = hurwitz_move(s, step[1], step[2])
        elif step[0] == "C":
            s = conjugate_system(s, step[1])
        else:
            raise ValueError(f"unknown trace step {step!r}")
    return s


class _Worker:
    """Mutable system plus its accumulating move trace."""

    def __init__(self, s: HurwitzSystem):
        self.degree = s.degree
        self.entries: list[Permutation] = list(s.entries)
        self.trace: Trace = []

    def system(self) -> HurwitzSystem:
        return HurwitzSystem.of_permutations(self.entries, self.degree)

    def fwd(self, k: int) -> None:
        a, b = self.entries[k], self.entries[k + 1]
        self.entries[k], self.entries[k + 1] = b, a ** b
        self.trace.append(("H", k, "forward"))

    def inv(self, k: int) -> None:
        a, b = self.entries[k], self.entries[k + 1]
        self.entries[k], self.entries[k + 1] = b ** a.inverse(), a
        self.trace.append(("H", k, "inverse"))

    def conj(self, g: Permutation) -> None:
        self.entries = [e ** g for e in self.entries]
        self.trace.append(("C", g))

    def push_right(self, j: int, target: int) -> None:
        """Move the entry at j to position target > j; it is conjugated en route."""
        for k in range(j, target):
            self.fwd(k)

    def key(self) -> tuple:
        return tuple(e.images for e in self.entries)


def _count_letter(entries: Sequence[Permutation], ell: int, end: int) -> int:
    return sum(1 for e in entries[:end] if ell in e.support())


def _gather_letter(w: _Worker, ell: int, end: int) -> int:
    """Push every entry moving ell to the tail of entries[:end]; returns the count."""
    target = end - 1
    while target >= 0:
        j = None
        for k in range(target, -1, -1):
            if ell in w.entries[k].support():
                j = k
                break
        if j is None:
            break
        w.push_right(j, target)
        target -= 1
    return end - 1 - target


# Merge policies: (forward?, leftmost?).  A forward merge at site k keeps the
# right entry (moved to k) and turns the left one into a non-ell leftover at
# k+1; an inverse merge keeps the left entry (moved to k+1) with the leftover
# at k.  When a state repeats we rotate to the next policy.
_MERGE_POLICIES = ((True, True), (False, False), (True, False), (False, True))


def _reduce_letter_constructive(w: _Worker, ell: int, end: int, max_rounds: int) -> bool:
    """Drive the count of ell-entries in the active block down to two.

    Returns True on success; False if the policy loop detected it was cycling
    (the complete search fallback then takes over).
    """
    seen: set[tuple] = set()
    policy = 0
    for _ in range(max_rounds):
        count = _count_letter(w.entries, ell, end)
        if count <= 2:
            return True
        _gather_letter(w, ell, end)
        state = (tuple(w.entries[k].images for k in range(end)), policy)
        if state in seen:
            policy += 1
            if policy >= len(_MERGE_POLICIES):
                return False
        seen.add(state)
        start = end - count
        sites = [
            k
            for k in range(start, end - 1)
            if w.entries[k] != w.entries[k + 1]
        ]
        if sites:
            use_forward, leftmost = _MERGE_POLICIES[policy % len(_MERGE_POLICIES)]
            k = sites[0] if leftmost else sites[-1]
            if use_forward:
                w.fwd(k)
            else:
                w.inv(k)
        else:
            # All tail entries equal (x ell): convert one x-carrying prefix
            # entry into an ell-entry by sliding it into the tail.
            x = min(w.entries[start].support() - {ell})
            j = None
            for k in range(start - 1, -1, -1):
                if x in w.entries[k].support():
                    j = k
                    break
            if j is None:
                return False
            w.push_right(j, start - 1)
            w.fwd(start - 1)
    return False


def _reduce_letter_search(w: _Worker, ell: int, end: int) -> None:
    """Complete best-first fallback over the move graph of the active block.

    States are entry tuples; moves are Hurwitz moves inside the block plus
    conjugations by transpositions of {1..ell-1} (these fix the finalized
    letters).  The classification theorem guarantees a state with exactly two
    ell-entries is reachable, and the state space at fixed (d, n) is finite.
    """
    d = w.degree
    start_state = tuple(w.entries[:end])
    conjugators = [
        Permutation.transposition(d, i, j)
        for i, j in itertools.combinations(range(1, ell), 2)
    ]

    def neighbors(state):
        for k in range(len(state) - 1):
            a, b = state[k], state[k + 1]
            yield ("H", k, "forward"), state[:k] + (b, a ** b) + state[k + 2 :]
            yield ("H", k, "inverse"), state[:k] + (b ** a.inverse(), a) + state[k + 2 :]
        for g in conjugators:
            yield ("C", g), tuple(e ** g for e in state)

    def count(state):
        return sum(1 for e in state if ell in e.support())

    def skey(state):
        return tuple(e.images for e in state)

    came: dict[tuple, tuple] = {skey(start_state): (None, None, start_state)}
    heap = [(count(start_state), 0, 0, start_state)]
    tick = 0
    goal = None
    while heap:
        c, _, _, state = heapq.heappop(heap)
        if c <= 2:
            goal = state
            break
        for move, nxt in neighbors(state):
            k = skey(nxt)
            if k in came:
                continue
            came[k] = (skey(state), move, nxt)
            tick += 1
            heapq.heappush(heap, (count(nxt), len(came), tick, nxt))
    if goal is None:
        raise HurwitzError("normal form search exhausted the move graph")
    path = []
    k = skey(goal)
    while came[k][0] is not None:
        prev, move, _ = came[k]
        path.append(move)
        k = prev
    for move in reversed(path):
        if move[0] == "H":
            if move[2] == "forward":
                w.fwd(move[1])
            else:
                w.inv(move[1])
        else:
            w.conj(move[1])


def _check_normal_preconditions(s: HurwitzSystem) -> None:
    if s.flavor != PERMUTATION:
        raise HurwitzError("normal form is defined for permutation systems")
    verdicts = entry_simplicity_verdicts(s)
    if any(v is not Simplicity.SIMPLE for v in verdicts):
        bad = next(i for i, v in enumerate(verdicts) if v is not Simplicity.SIMPLE)
        raise NonSimpleSystemError(f"entry {bad} is not a transposition")
    if not is_closing(s):
        raise NonClosingSystemError(
            f"total monodromy {total_monodromy(s)} is not the identity"
        )
    if not is_transitive(s):
        raise IntransitiveSystemError(
            f"monodromy group is intransitive: orbits {[sorted(o) for o in orbit_partition(s)]}"
        )


def hc_normal_form(s: HurwitzSystem) -> tuple[HurwitzSystem, Trace]:
    """Normal form of a simple transitive closing permutation system.

    Returns the normal form together with the move trace realizing it:
    ``replay_trace(s, trace)`` equals the returned system.  Raises
    NonSimpleSystemError / NonClosingSystemError / IntransitiveSystemError
    when the preconditions fail.
    """
    _check_normal_preconditions(s)
    d, n = s.degree, len(s.entries)
    if d == 1:
        return s, []

    w = _Worker(s)
    end = n
    for ell in range(d, 2, -1):
        max_rounds = 40 * (n + d) + 200
        if not _reduce_letter_constructive(w, ell, end, max_rounds):
            _reduce_letter_search(w, ell, end)
        _gather_letter(w, ell, end)
        pair = w.entries[end - 2 : end]
        if pair[0] != pair[1] or ell not in pair[0].support():
            raise HurwitzError("letter reduction failed to produce an equal tail pair")
        x = min(pair[0].support() - {ell})
        if x != ell - 1:
            w.conj(Permutation.transposition(d, x, ell - 1))
        end -= 2

    tau1 = Permutation.adjacent(d, 1)
    if any(e != tau1 for e in w.entries[:end]):
        raise HurwitzError("leading block failed to reduce to (1 2) entries")
    m = end
    if m < 2 or m % 2 != 0 or m != n - 2 * (d - 2):
        raise HurwitzError(f"normal form has malformed (1 2) block of size {m}")
    return w.system(), w.trace


def normal_form_template(degree: int, n: int) -> HurwitzSystem:
    """The expected normal form for a given degree and length."""
    m = n - 2 * (degree - 2)
    if degree < 2 or m < 2 or m % 2 != 0:
        raise ValueError(f"no normal form of degree {degree} and length {n}")
    entries = [Permutation.adjacent(degree, 1)] * m
    for i in range(2, degree):
        entries += [Permutation.adjacent(degree, i)] * 2
    return HurwitzSystem.of_permutations(entries, degree)


# -- HC-equivalence ------------------------------------------------------


def _entry_class_invariant(e: Entry):
    if isinstance(e, Permutation):
        return e.cycle_type()
    return (braids.exponent_sum(e), braids.project(e).cycle_type())


def _screen_distinct(s: HurwitzSystem, t: HurwitzSystem) -> bool:
    """Cheap HC-invariants that certify two systems are inequivalent."""
    if len(s) != len(t):
        return True
    if sorted(_entry_class_invariant(e) for e in s.entries) != sorted(
        _entry_class_invariant(e) for e in t.entries
    ):
        return True
    if _entry_class_invariant(total_monodromy(s)) != _entry_class_invariant(
        total_monodromy(t)
    ):
        return True
    if sorted(map(len, orbit_partition(s))) != sorted(map(len, orbit_partition(t))):
        return True
    return False


def _neighbors(s: HurwitzSystem) -> Iterable[HurwitzSystem]:
    n = len(s.entries)
    for k in range(n - 1):
        yield hurwitz_move(s, k, "forward")
        yield hurwitz_move(s, k, "inverse")
    if s.flavor == PERMUTATION:
        for i in range(1, s.degree):
            yield conjugate_system(s, Permutation.adjacent(s.degree, i))
    else:
        for i in range(1, s.degree):
            yield conjugate_system(s, BraidWord(s.degree, (i,)))
            yield conjugate_system(s, BraidWord(s.degree, (-i,)))


def _bidirectional_search(
    s: HurwitzSystem, t: HurwitzSystem, budget: int
) -> Equivalence:
    skey, tkey = s.key(), t.key()
    if skey == tkey:
        return Equivalence.EQUIVALENT
    sides = [
        {skey: s},
        {tkey: t},
    ]
    frontiers = [deque([s]), deque([t])]
    explored = 0
    while explored < budget:
        if not frontiers[0] or not frontiers[1]:
            # One component is fully explored without meeting the other.
            return Equivalence.DISTINCT
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        current = frontiers[side].popleft()
        for nxt in _neighbors(current):
            key = nxt.key()
            if key in sides[side]:
                continue
            if key in sides[1 - side]:
                return Equivalence.EQUIVALENT
            sides[side][key] = nxt
            frontiers[side].append(nxt)
            explored += 1
            if explored >= budget:
                return Equivalence.UNKNOWN
    return Equivalence.UNKNOWN


def hc_equivalent(
    s: HurwitzSystem, t: HurwitzSystem, budget: int = DEFAULT_EQUIV_BUDGET
) -> Equivalence:
    """Decide HC-equivalence.

    Permutation systems satisfying the normal-form preconditions are decided
    completely through their normal forms.  Everything else falls back to a
    bounded bidirectional search over the move graph, which reports UNKNOWN
    when the budget is exhausted.
    """
    if s.degree != t.degree or s.flavor != t.flavor:
        raise HurwitzError("systems must share degree and flavor")
    if _screen_distinct(s, t):
        return Equivalence.DISTINCT
    if s.flavor == PERMUTATION:
        try:
            nf_s, _ = hc_normal_form(s)
            nf_t, _ = hc_normal_form(t)
        except HurwitzError:
            pass
        else:
            return (
                Equivalence.EQUIVALENT
                if nf_s.entries == nf_t.entries
                else Equivalence.DISTINCT
            )
    return _bidirectional_search(s, t, budget)


# -- enumeration (shared by tests and the covering classification) --------


def iter_simple_closing_systems(
    degree: int, n: int, transitive_only: bool = True
) -> Iterable[HurwitzSystem]:
    """All length-n transposition systems with identity product, one by one.

    The last entry is forced (it must invert the prefix product), so this
    walks (#transpositions)^(n-1) prefixes.
    """
    if n <= 0:
        return
    trans = permutations.all_transpositions(degree)
    identity = Permutation.identity(degree)

    def rec(prefix: list[Permutation], prod: Permutation):
        if len(prefix) == n - 1:
            last = prod.inverse()
            if permutations.is_transposition(last):
                entries = prefix + [last]
                if not transitive_only or permutations.is_transitive(entries, degree):
                    yield HurwitzSystem.of_permutations(entries, degree)
            return
        for t in trans:
            prefix.append(t)
            yield from rec(prefix, permutations.compose(prod, t))
            prefix.pop()

    yield from rec([], identity)


# -- JSON files ----------------------------------------------------------


def system_to_json(s: HurwitzSystem) -> dict:
    if s.flavor == PERMUTATION:
        entries = [cycle_string(e) for e in s.entries]
    else:
        entries = [word_string(e) for e in s.entries]
    return {"degree": s.degree, "flavor": s.flavor, "entries": entries}


def system_from_json(data: dict) -> HurwitzSystem:
    try:
        degree = data["degree"]
        flavor = data["flavor"]
        raw = data["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"system file needs degree/flavor/entries: {exc}") from exc
    if flavor == PERMUTATION:
        entries = tuple(parse_permutation(text, degree) for text in raw)
    elif flavor == BRAID:
        entries = tuple(parse_braid(text, degree) for text in raw)
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    return HurwitzSystem(degree, entries, flavor)
