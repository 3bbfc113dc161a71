"""Quivers with frozen vertices: exact representation, mutation, framing.

A quiver is a finite directed multigraph without loops or 2-cycles, with a
distinguished set of frozen vertices that are never mutated.  It is stored as
a signed multiplicity matrix ``b`` of shape ``(n_mutable + n_frozen) x
n_mutable`` with ``b[i][j] = #arrows(i -> j) - #arrows(j -> i)``; arrows
between two frozen vertices are not representable, matching the convention
that mutation discards them.

Vertex indices are 1-based everywhere in the public API.  Frozen vertices
occupy indices ``n_mutable + 1 .. n_mutable + n_frozen``.  All operations are
pure: quivers are immutable values, safe to share between tasks.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .errors import InvariantViolation, ParseError

VertexStatus = Literal["green", "red"]


@dataclass(frozen=True)
class Quiver:
    """Immutable quiver on ``n_mutable`` mutable and ``n_frozen`` frozen vertices."""

    n_mutable: int
    n_frozen: int
    b: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        n, f = self.n_mutable, self.n_frozen
        if n < 0 or f < 0:
            raise ValueError("vertex counts must be nonnegative")
        if len(self.b) != n + f or any(len(row) != n for row in self.b):
            raise ValueError(f"b must have shape ({n + f}, {n})")
        for i in range(n):
            if self.b[i][i] != 0:
                raise ValueError(f"loop at vertex {i + 1}")
            for j in range(n):
                if self.b[i][j] != -self.b[j][i]:
                    raise ValueError(f"b not skew-symmetric at ({i + 1},{j + 1})")
        if self.labels is not None and len(self.labels) != n + f:
            raise ValueError("labels must name every vertex")

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_arrows(
        n_mutable: int,
        n_frozen: int = 0,
        arrows: Iterable[tuple[int, int] | tuple[int, int, int]] = (),
        labels: Sequence[str] | None = None,
    ) -> "Quiver":
        """Build a quiver from 1-based ``(source, target[, multiplicity])`` arrows."""
        total = n_mutable + n_frozen
        counts: dict[tuple[int, int], int] = {}
        for arrow in arrows:
            i, j = arrow[0], arrow[1]
            mult = arrow[2] if len(arrow) == 3 else 1
            if mult <= 0:
                raise ValueError(f"arrow {i}->{j} has nonpositive multiplicity")
            if not (1 <= i <= total and 1 <= j <= total):
                raise ValueError(f"arrow {i}->{j} out of range (1..{total})")
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if i > n_mutable and j > n_mutable:
                raise ValueError(f"arrow {i}->{j} connects two frozen vertices")
            if (j, i) in counts:
                raise ValueError(f"arrows {i}->{j} and {j}->{i} form a 2-cycle")
            counts[(i, j)] = counts.get((i, j), 0) + mult
        b = [[0] * n_mutable for _ in range(total)]
        for (i, j), mult in counts.items():
            if j <= n_mutable:
                b[i - 1][j - 1] += mult
            if i <= n_mutable:
                b[j - 1][i - 1] -= mult
        return Quiver(
            n_mutable,
            n_frozen,
            tuple(tuple(row) for row in b),
            tuple(labels) if labels is not None else None,
        )

    # -- basic queries -----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self.n_mutable + self.n_frozen

    def arrows(self) -> list[tuple[int, int, int]]:
        """All arrows as 1-based ``(source, target, multiplicity)``, sorted."""
        n, total = self.n_mutable, self.n_vertices
        out: list[tuple[int, int, int]] = []
        for i in range(n):
            for j in range(n):
                if self.b[i][j] > 0:
                    out.append((i + 1, j + 1, self.b[i][j]))
        for f in range(n, total):
            for j in range(n):
                v = self.b[f][j]
                if v > 0:
                    out.append((f + 1, j + 1, v))
                elif v < 0:
                    out.append((j + 1, f + 1, -v))
        out.sort()
        return out

    def arrow_mult(self, i: int, j: int) -> int:
        """Number of arrows ``i -> j`` (0 if none, also if the pair is reversed)."""
        n = self.n_mutable
        if j <= n:
            v = self.b[i - 1][j - 1]
            return v if v > 0 else 0
        if i <= n:
            v = self.b[j - 1][i - 1]
            return -v if v < 0 else 0
        return 0

    def is_mutable(self, k: int) -> bool:
        return 1 <= k <= self.n_mutable

    def _check_mutable(self, k: int) -> int:
        if not isinstance(k, int):
            raise ValueError(f"vertex index must be an integer, got {k!r}")
        if k < 1 or k > self.n_vertices:
            raise ValueError(f"vertex {k} out of range (1..{self.n_vertices})")
        if k > self.n_mutable:
            raise ValueError(f"vertex {k} is frozen and cannot be mutated")
        return k - 1

    # -- mutation ----------------------------------------------------------

    def mutate(self, k: int) -> "Quiver":
        """Mutated quiver at mutable vertex ``k``; ``self`` is unchanged.

        Uses the matrix rule: entries in row/column ``k`` flip sign, and
        ``b[i][j]`` gains one arrow ``i -> j`` per path ``i -> k -> j``.
        2-cycle cancellation and frozen-frozen deletion are implicit in the
        signed-matrix encoding.
        """
        kk = self._check_mutable(k)
        n, total = self.n_mutable, self.n_vertices
        b = self.b
        row_k = b[kk]
        new: list[tuple[int, ...]] = []
        for i in range(total):
            if i == kk:
                new.append(tuple(-v for v in row_k))
                continue
            bik = b[i][kk]
            old = b[i]
            if bik == 0:
                new.append(old)
                continue
            row = list(old)
            row[kk] = -bik
            if bik > 0:
                for j in range(n):
                    if j != kk and row_k[j] > 0:
                        row[j] = old[j] + bik * row_k[j]
            else:
                for j in range(n):
                    if j != kk and row_k[j] < 0:
                        row[j] = old[j] - bik * row_k[j]
            new.append(tuple(row))
        return Quiver(self.n_mutable, self.n_frozen, tuple(new), self.labels)

    def apply_sequence(self, seq: Sequence[int]) -> "Quiver":
        """Left-to-right composition of :meth:`mutate`."""
        q = self
        for k in seq:
            q = q.mutate(k)
        return q

    # -- framing -----------------------------------------------------------

    def frame(self, co: bool = False) -> "Quiver":
        """Framed quiver (one frozen companion per vertex, arrows ``i -> i'``),
        or the coframed quiver (arrows ``i' -> i``) when ``co`` is true.
        """
        if self.n_frozen:
            raise ValueError("quiver already has frozen vertices; cannot frame again")
        n = self.n_mutable
        sign = 1 if co else -1
        rows = list(self.b)
        for i in range(n):
            rows.append(tuple(sign if j == i else 0 for j in range(n)))
        labels = None
        if self.labels is not None:
            labels = self.labels + tuple(f"{name}'" for name in self.labels)
        return Quiver(n, n, tuple(rows), labels)

    def vertex_status(self, k: int) -> VertexStatus:
        """``"green"`` (no incoming frozen arrows) or ``"red"`` (no outgoing).

        Raises :class:`InvariantViolation` when the vertex has frozen arrows
        in both directions or none at all; on quivers reached from a framed
        quiver that is a sign-coherence violation, i.e. a bug upstream.
        """
        kk = self._check_mutable(k)
        n, total = self.n_mutable, self.n_vertices
        has_in = has_out = False
        for f in range(n, total):
            v = self.b[f][kk]
            if v > 0:
                has_in = True
            elif v < 0:
                has_out = True
        if has_in and has_out:
            raise InvariantViolation(
                f"vertex {k} has both incoming and outgoing frozen arrows "
                "(sign-coherence violation)"
            )
        if not has_in and not has_out:
            raise InvariantViolation(f"vertex {k} has no frozen arrows; status undefined")
        return "red" if has_in else "green"

    def frozen_arrow_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Signed frozen-arrow matrix ``M`` with ``M[i][j] = #(j -> i') - #(i' -> j)``.

        For a freshly framed quiver this is the identity; its columns are the
        c-vectors of the mutable vertices.
        """
        n, total = self.n_mutable, self.n_vertices
        return tuple(
            tuple(-self.b[f][j] for j in range(n)) for f in range(n, total)
        )

    # -- restriction and relabeling ----------------------------------------

    def induced_subquiver(self, vertices: Iterable[int]) -> tuple["Quiver", dict[int, int]]:
        """Subquiver induced on ``vertices`` plus the old->new index map.

        Mutable and frozen vertices are compacted separately, preserving
        relative order.
        """
        vs = sorted(set(vertices))
        for v in vs:
            if not (1 <= v <= self.n_vertices):
                raise ValueError(f"unknown vertex {v}")
        mut = [v for v in vs if v <= self.n_mutable]
        fro = [v for v in vs if v > self.n_mutable]
        index_map = {v: i + 1 for i, v in enumerate(mut)}
        index_map.update({v: len(mut) + i + 1 for i, v in enumerate(fro)})
        rows = tuple(
            tuple(self.b[v - 1][w - 1] for w in mut) for v in mut + fro
        )
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[v - 1] for v in mut + fro)
        return Quiver(len(mut), len(fro), rows, labels), index_map

    def relabel(
        self,
        perm_mutable: Sequence[int],
        perm_frozen: Sequence[int] | None = None,
    ) -> "Quiver":
        """Relabeled quiver; ``perm_mutable[i-1]`` is the new index of mutable ``i``.

        Frozen vertices are permuted by ``perm_frozen`` over ``1..n_frozen``
        (identity if omitted).  Mutable and frozen classes never mix.
        """
        n, f = self.n_mutable, self.n_frozen
        if sorted(perm_mutable) != list(range(1, n + 1)):
            raise ValueError("perm_mutable is not a permutation of the mutable vertices")
        if perm_frozen is None:
            perm_frozen = tuple(range(1, f + 1))
        if sorted(perm_frozen) != list(range(1, f + 1)):
            raise ValueError("perm_frozen is not a permutation of the frozen vertices")
        pos = [0] * (n + f)
        for i in range(n):
            pos[i] = perm_mutable[i] - 1
        for i in range(f):
            pos[n + i] = n + perm_frozen[i] - 1
        rows = [[0] * n for _ in range(n + f)]
        for i in range(n + f):
            for j in range(n):
                rows[pos[i]][pos[j]] = self.b[i][j]
        labels = None
        if self.labels is not None:
            lab = [""] * (n + f)
            for i in range(n + f):
                lab[pos[i]] = self.labels[i]
            labels = tuple(lab)
        return Quiver(n, f, tuple(tuple(r) for r in rows), labels)

    # -- serialization -----------------------------------------------------

    def to_text(self) -> str:
        """Line-oriented text form; deterministic (arrows sorted by source, target)."""
        lines = [f"vertices: {self.n_mutable} {self.n_frozen}"]
        for i, j, mult in self.arrows():
            lines.append(f"arrow: {i} {j}" if mult == 1 else f"arrow: {i} {j} {mult}")
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return self.to_text()


def parse_quiver(text: str) -> Quiver:
    """Parse the line-oriented quiver format.

    Grammar: one ``vertices: <n_mutable> <n_frozen>`` line, then zero or more
    ``arrow: <from> <to> [mult]`` lines.  ``#`` starts a comment; blank lines
    are ignored.  Declared loops, 2-cycles, and frozen-frozen arrows are
    rejected.
    """
    n_mutable: int | None = None
    n_frozen = 0
    arrows: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices:"):
            if n_mutable is not None:
                raise ParseError(f"line {lineno}: duplicate vertices line")
            parts = line[len("vertices:"):].split()
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'vertices: <mutable> <frozen>'")
            try:
                n_mutable, n_frozen = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"line {lineno}: vertex counts must be integers") from None
            if n_mutable < 0 or n_frozen < 0:
                raise ParseError(f"line {lineno}: vertex counts must be nonnegative")
        elif line.startswith("arrow:"):
            if n_mutable is None:
                raise ParseError(f"line {lineno}: arrow before vertices line")
            parts = line[len("arrow:"):].split()
            if len(parts) not in (2, 3):
                raise ParseError(f"line {lineno}: expected 'arrow: <from> <to> [mult]'")
            try:
                nums = [int(p) for p in parts]
            except ValueError:
                raise ParseError(f"line {lineno}: arrow fields must be integers") from None
            i, j = nums[0], nums[1]
            mult = nums[2] if len(nums) == 3 else 1
            if mult <= 0:
                raise ParseError(f"line {lineno}: multiplicity must be positive")
            arrows.append((i, j, mult))
        else:
            raise ParseError(f"line {lineno}: unrecognized line {line.split()[0]!r}")
    if n_mutable is None:
        raise ParseError("missing vertices line")
    try:
        return Quiver.from_arrows(n_mutable, n_frozen, arrows)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- free-function spellings of the core operations -------------------------

def mutate(q: Quiver, k: int) -> Quiver:
    return q.mutate(k)


def apply_sequence(q: Quiver, seq: Sequence[int]) -> Quiver:
    return q.apply_sequence(seq)


def frame(q: Quiver, co: bool = False) -> Quiver:
    return q.frame(co)


def induced_subquiver(q: Quiver, vertices: Iterable[int]) -> tuple[Quiver, dict[int, int]]:
    return q.induced_subquiver(vertices)


def vertex_status(q: Quiver, k: int) -> VertexStatus:
    return q.vertex_status(k)


# -- structural queries on the mutable part ---------------------------------

def _mutable_adjacency(q: Quiver) -> list[list[int]]:
    """0-based successor lists over the mutable part, neighbors ascending."""
    n = q.n_mutable
    return [[j for j in range(n) if q.b[i][j] > 0] for i in range(n)]


@dataclass(frozen=True)
class Acyclicity:
    """Either a topological order of the mutable part or a witness cycle."""

    order: tuple[int, ...] | None
    cycle: tuple[int, ...] | None

    @property
    def is_acyclic(self) -> bool:
        return self.order is not None


def acyclicity(q: Quiver) -> Acyclicity:
    """Topological order (lexicographically smallest) or a directed cycle.

    Frozen vertices are ignored.
    """
    n = q.n_mutable
    adj = _mutable_adjacency(q)
    indeg = [0] * n
    for i in range(n):
        for j in adj[i]:
            indeg[j] += 1
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order: list[int] = []
    indeg = list(indeg)
    while heap:
        i = heapq.heappop(heap)
        order.append(i + 1)
        for j in adj[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    if len(order) == n:
        return Acyclicity(tuple(order), None)
    # find a cycle deterministically: DFS from the smallest vertex, smallest
    # neighbor first
    color = [0] * n  # 0 unvisited, 1 on stack, 2 done
    stack: list[int] = []

    def dfs(v: int) -> tuple[int, ...] | None:
        color[v] = 1
        stack.append(v)
        for w in adj[v]:
            if color[w] == 1:
                cyc = stack[stack.index(w):]
                return tuple(x + 1 for x in cyc)
            if color[w] == 0:
                found = dfs(w)
                if found is not None:
                    return found
        stack.pop()
        color[v] = 2
        return None

    for v in range(n):
        if color[v] == 0:
            cyc = dfs(v)
            if cyc is not None:
                return Acyclicity(None, cyc)
    raise AssertionError("Kahn found a cycle but DFS did not")


@dataclass(frozen=True)
class Condensation:
    """Strongly connected components of the mutable part and the induced DAG.

    ``components`` are 1-based vertex tuples sorted by smallest member;
    ``edges`` are pairs of component indices (0-based into ``components``).
    """

    components: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]


def condensation(q: Quiver) -> Condensation:
    """Tarjan SCCs over the mutable part plus the condensation DAG."""
    n = q.n_mutable
    adj = _mutable_adjacency(q)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = [0]
    comps: list[list[int]] = []

    def strongconnect(v: int) -> None:
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack[v] = True
        for w in adj[v]:
            if index[w] == -1:
                strongconnect(w)
                low[v] = min(low[v], low[w])
            elif on_stack[w]:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack[w] = False
                comp.append(w)
                if w == v:
                    break
            comps.append(sorted(comp))

    for v in range(n):
        if index[v] == -1:
            strongconnect(v)

    comps.sort(key=lambda c: c[0])
    comp_of = [0] * n
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    edges = set()
    for v in range(n):
        for w in adj[v]:
            if comp_of[v] != comp_of[w]:
                edges.add((comp_of[v], comp_of[w]))
    return Condensation(
        tuple(tuple(v + 1 for v in comp) for comp in comps),
        tuple(sorted(edges)),
    )


def sources_and_sinks(q: Quiver) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Sources (no incoming mutable arrows) and sinks (no outgoing), 1-based."""
    n = q.n_mutable
    sources = tuple(
        k + 1 for k in range(n) if all(q.b[j][k] <= 0 for j in range(n))
    )
    sinks = tuple(
        k + 1 for k in range(n) if all(q.b[k][j] <= 0 for j in range(n))
    )
    return sources, sinks
