"""Verify and search maximal green / reddening sequences; explore mutation classes.

Verification frames the input quiver internally, replays the sequence, and
checks the green/red pattern; a successful reddening additionally matches the
final quiver against the coframed quiver and reports the mutable-vertex
bijection.  Searches are breadth-first with canonical-form deduplication of
the full framed state, lowest vertex index first, so results are
deterministic and found sequences are shortest.  Budget exhaustion yields
``Unknown``; ``No`` is only ever reported on proven closure.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Sequence

from .canonical import canonical_form
from .errors import InvariantViolation
from .quiver import Quiver, acyclicity

MutationSequence = tuple[int, ...]


@dataclass(frozen=True)
class SearchLimits:
    """Bounded-search budget; exhaustion yields Unknown, never a wrong answer."""

    max_depth: int = 12
    max_states: int = 1_000_000
    max_millis: int = 60_000

    def __post_init__(self) -> None:
        if self.max_depth <= 0 or self.max_states <= 0 or self.max_millis <= 0:
            raise ValueError("all search limits must be positive")


DEFAULT_LIMITS = SearchLimits()


class Outcome(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    """Result of replaying a candidate sequence on the framed quiver.

    When ``ok``, every mutable vertex of ``final_quiver`` is red and
    ``permutation`` maps it onto the coframed quiver: ``permutation[j-1]`` is
    the frozen companion that ended up pointing at ``j``.
    """

    ok: bool
    final_quiver: Quiver
    permutation: tuple[int, ...] | None = None
    failure_reason: str | None = None


@dataclass(frozen=True)
class Exploration:
    """Transcript of a breadth-first exploration.

    ``states`` are the distinct states in discovery order with the mutation
    sequence that first reached each; ``closed`` means the frontier emptied
    within limits, i.e. the listing is complete.
    """

    root: Quiver
    states: tuple[tuple[Quiver, MutationSequence], ...]
    closed: bool
    states_seen: int

    @property
    def representatives(self) -> tuple[Quiver, ...]:
        return tuple(q for q, _ in self.states)

    @property
    def sequences(self) -> tuple[MutationSequence, ...]:
        return tuple(s for _, s in self.states)


@dataclass(frozen=True)
class TriState:
    """Yes/No/Unknown with machine-checkable evidence.

    ``sequence`` backs Yes answers from sequence searches, ``transcript``
    backs No answers (closure) and records partial progress on Unknown, and
    ``limits`` echoes the budget that produced the answer.
    """

    value: Outcome
    sequence: MutationSequence | None = None
    transcript: Exploration | None = None
    limits: SearchLimits | None = None

    def __bool__(self) -> bool:
        return self.value is Outcome.YES


class _Budget:
    """Shared countdown over states and wall time."""

    def __init__(self, lim: SearchLimits):
        self.lim = lim
        self.states_left = lim.max_states
        self.deadline = time.monotonic() + lim.max_millis / 1000.0

    def take_state(self) -> bool:
        if self.states_left <= 0:
            return False
        self.states_left -= 1
        return True

    def timed_out(self) -> bool:
        return time.monotonic() > self.deadline


# -- verification ------------------------------------------------------------


def _check_sequence(q: Quiver, seq: Sequence[int]) -> MutationSequence:
    seq = tuple(seq)
    for k in seq:
        if not isinstance(k, int) or not (1 <= k <= q.n_mutable):
            raise ValueError(f"invalid mutation index {k!r} (mutable range 1..{q.n_mutable})")
    return seq


def _finish_reddening(original: Quiver, final: Quiver) -> Verdict:
    """Check the all-red condition and the isomorphism with the coframe."""
    n = original.n_mutable
    for k in range(1, n + 1):
        if final.vertex_status(k) == "green":
            return Verdict(False, final, None, f"vertex {k} green")
    # All red: sign-coherence forces each c-vector to be minus a unit vector,
    # and relabeling by that permutation must recover the coframed quiver.
    m = final.frozen_arrow_matrix()
    sigma = [0] * n
    for j in range(n):
        col = [m[i][j] for i in range(n)]
        negs = [i for i, v in enumerate(col) if v != 0]
        if len(negs) != 1 or col[negs[0]] != -1:
            raise InvariantViolation(
                f"all-red state has non-permutation c-vector at vertex {j + 1}: {col}"
            )
        sigma[j] = negs[0] + 1
    if sorted(sigma) != list(range(1, n + 1)):
        raise InvariantViolation(f"c-vector pattern is not a permutation: {sigma}")
    relabeled = final.relabel(sigma, sigma)
    if relabeled.b != original.frame(co=True).b:
        raise InvariantViolation(
            "all-red state is not isomorphic to the coframed quiver via the "
            f"c-vector permutation {sigma}"
        )
    return Verdict(True, final, tuple(sigma), None)


def verify_reddening(q: Quiver, seq: Sequence[int]) -> Verdict:
    """Is ``seq`` a reddening sequence for ``q``?  Framing is internal."""
    if q.n_frozen:
        raise ValueError("verify_reddening expects a quiver without frozen vertices")
    seq = _check_sequence(q, seq)
    final = q.frame().apply_sequence(seq)
    return _finish_reddening(q, final)


def verify_maximal_green(q: Quiver, seq: Sequence[int]) -> Verdict:
    """Is ``seq`` a maximal green sequence (every step at a green vertex)?"""
    if q.n_frozen:
        raise ValueError("verify_maximal_green expects a quiver without frozen vertices")
    seq = _check_sequence(q, seq)
    state = q.frame()
    for step, k in enumerate(seq, 1):
        if state.vertex_status(k) == "red":
            return Verdict(False, state, None, f"step {step}: vertex {k} red")
        state = state.mutate(k)
    return _finish_reddening(q, state)


def acyclic_mgs(q: Quiver) -> MutationSequence:
    """Verified maximal green sequence for an acyclic quiver (topological order)."""
    res = acyclicity(q)
    if not res.is_acyclic:
        raise ValueError(f"quiver is not acyclic (cycle {res.cycle})")
    order = res.order
    assert order is not None
    verdict = verify_maximal_green(q, order)
    if not verdict.ok:
        raise InvariantViolation(
            f"topological order {order} failed green verification: {verdict.failure_reason}"
        )
    return order


# -- breadth-first searches over framed states --------------------------------


def _all_red(state: Quiver) -> bool:
    return all(state.vertex_status(k) == "red" for k in range(1, state.n_mutable + 1))


def _green_moves(state: Quiver) -> list[int]:
    return [k for k in range(1, state.n_mutable + 1) if state.vertex_status(k) == "green"]


def _all_moves(state: Quiver) -> list[int]:
    return list(range(1, state.n_mutable + 1))


def _bfs_to_all_red(
    q: Quiver, lim: SearchLimits, moves: Callable[[Quiver], list[int]]
) -> TriState:
    if q.n_mutable == 0:
        return TriState(Outcome.YES, sequence=(), limits=lim)
    start = q.frame()
    budget = _Budget(lim)
    budget.take_state()
    seen = {canonical_form(start)}
    queue: deque[tuple[Quiver, MutationSequence]] = deque([(start, ())])
    trail: list[tuple[Quiver, MutationSequence]] = [(start, ())]
    closed = True
    while queue:
        if budget.timed_out():
            closed = False
            break
        state, seq = queue.popleft()
        if len(seq) >= lim.max_depth:
            closed = False
            continue
        for k in moves(state):
            nxt = state.mutate(k)
            nseq = seq + (k,)
            if _all_red(nxt):
                return TriState(Outcome.YES, sequence=nseq, limits=lim)
            key = canonical_form(nxt)
            if key in seen:
                continue
            if not budget.take_state():
                closed = False
                queue.clear()
                break
            seen.add(key)
            queue.append((nxt, nseq))
            trail.append((nxt, nseq))
    transcript = Exploration(q, tuple(trail), closed, len(trail))
    return TriState(Outcome.NO if closed else Outcome.UNKNOWN, transcript=transcript, limits=lim)


def search_maximal_green(q: Quiver, lim: SearchLimits = DEFAULT_LIMITS) -> TriState:
    """Shortest maximal green sequence by BFS over green mutations, or No on
    proven closure of the green-move state space, or Unknown on exhausted limits."""
    if q.n_frozen:
        raise ValueError("search_maximal_green expects a quiver without frozen vertices")
    result = _bfs_to_all_red(q, lim, _green_moves)
    if result.value is Outcome.YES:
        assert result.sequence is not None
        if not verify_maximal_green(q, result.sequence).ok:
            raise InvariantViolation(f"search produced unverifiable sequence {result.sequence}")
    return result


def search_reddening(q: Quiver, lim: SearchLimits = DEFAULT_LIMITS) -> TriState:
    """As :func:`search_maximal_green` but mutations at red vertices are allowed."""
    if q.n_frozen:
        raise ValueError("search_reddening expects a quiver without frozen vertices")
    result = _bfs_to_all_red(q, lim, _all_moves)
    if result.value is Outcome.YES:
        assert result.sequence is not None
        if not verify_reddening(q, result.sequence).ok:
            raise InvariantViolation(f"search produced unverifiable sequence {result.sequence}")
    return result


# -- mutation-class exploration ------------------------------------------------


def _class_bfs(q: Quiver, lim: SearchLimits) -> Iterator[tuple[Quiver, MutationSequence] | None]:
    """Yield one first-seen representative per isomorphism class, BFS order.

    A trailing ``None`` is yielded iff the class closed within limits.
    """
    budget = _Budget(lim)
    budget.take_state()
    seen = {canonical_form(q)}
    queue: deque[tuple[Quiver, MutationSequence]] = deque([(q, ())])
    yield (q, ())
    while queue:
        if budget.timed_out():
            return
        state, seq = queue.popleft()
        if len(seq) >= lim.max_depth:
            return
        for k in range(1, q.n_mutable + 1):
            nxt = state.mutate(k)
            key = canonical_form(nxt)
            if key in seen:
                continue
            if not budget.take_state():
                return
            seen.add(key)
            nseq = seq + (k,)
            queue.append((nxt, nseq))
            yield (nxt, nseq)
    yield None


def explore_mutation_class(q: Quiver, lim: SearchLimits = DEFAULT_LIMITS) -> Exploration:
    """Enumerate the mutation class up to isomorphism, within limits."""
    if q.n_frozen:
        raise ValueError("explore_mutation_class expects a quiver without frozen vertices")
    states: list[tuple[Quiver, MutationSequence]] = []
    closed = False
    for item in _class_bfs(q, lim):
        if item is None:
            closed = True
        else:
            states.append(item)
    return Exploration(q, tuple(states), closed, len(states))


def is_mutation_acyclic(q: Quiver, lim: SearchLimits = DEFAULT_LIMITS) -> TriState:
    """Yes with a witness sequence to an acyclic representative, No on closure
    of a fully cyclic class, Unknown otherwise."""
    states: list[tuple[Quiver, MutationSequence]] = []
    closed = False
    for item in _class_bfs(q, lim):
        if item is None:
            closed = True
            break
        rep, seq = item
        states.append(item)
        if acyclicity(rep).is_acyclic:
            if not acyclicity(q.apply_sequence(seq)).is_acyclic:
                raise InvariantViolation(f"witness sequence {seq} does not replay")
            return TriState(Outcome.YES, sequence=seq, limits=lim)
    transcript = Exploration(q, tuple(states), closed, len(states))
    return TriState(
        Outcome.NO if closed else Outcome.UNKNOWN, transcript=transcript, limits=lim
    )


def decide_reddening_small(q: Quiver, lim: SearchLimits = DEFAULT_LIMITS) -> TriState:
    """Decide reddening existence for quivers on at most three mutable vertices,
    where it is equivalent to mutation-acyclicity."""
    if q.n_mutable > 3:
        raise ValueError("decide_reddening_small requires at most 3 mutable vertices")
    return is_mutation_acyclic(q, lim)
