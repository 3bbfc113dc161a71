"""Canonical forms of quivers up to separate relabeling of mutable and frozen vertices.

Color-preserving canonical labeling: iterated neighborhood refinement over
arrow multiplicities, with individualization backtracking across every member
of the first non-singleton cell.  The canonical form is the minimum encoding
over all leaf labelings, which is a labeling-invariant of the quiver.  Quivers
here are tiny, so the exhaustive branch is affordable and correctness is easy
to argue.
"""

from __future__ import annotations

from typing import Iterator

from .quiver import Quiver

CanonicalForm = bytes


def _weights(q: Quiver) -> list[list[int]]:
    """Arrow-count matrix over all vertices (frozen-frozen entries stay 0)."""
    n, total = q.n_mutable, q.n_vertices
    w = [[0] * total for _ in range(total)]
    for i in range(n):
        for j in range(n):
            if q.b[i][j] > 0:
                w[i][j] = q.b[i][j]
    for f in range(n, total):
        for j in range(n):
            v = q.b[f][j]
            if v > 0:
                w[f][j] = v
            elif v < 0:
                w[j][f] = -v
    return w


def _refine(w: list[list[int]], colors: list[int]) -> list[int]:
    """Stable neighborhood refinement; new colors are ranks of sorted signatures."""
    total = len(colors)
    while True:
        sigs = []
        for v in range(total):
            out_sig = sorted((colors[u], w[v][u]) for u in range(total) if w[v][u])
            in_sig = sorted((colors[u], w[u][v]) for u in range(total) if w[u][v])
            sigs.append((colors[v], tuple(out_sig), tuple(in_sig)))
        ranking = {sig: rank for rank, sig in enumerate(sorted(set(sigs)))}
        new = [ranking[sig] for sig in sigs]
        if new == colors:
            return colors
        colors = new


def _leaf_labelings(w: list[list[int]], colors: list[int]) -> Iterator[list[int]]:
    """All discrete colorings reachable by individualization-refinement."""
    colors = _refine(w, colors)
    total = len(colors)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
    if target is None:
        yield colors
        return
    for v in target:
        branched = [2 * c for c in colors]
        branched[v] -= 1
        yield from _leaf_labelings(w, branched)


def canonical_labeling(q: Quiver) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Permutations ``(perm_mutable, perm_frozen)`` realizing the canonical form.

    Applying them via :meth:`Quiver.relabel` yields the canonical
    representative of the isomorphism class.
    """
    _, perms = _canonicalize(q)
    return perms


def canonical_form(q: Quiver) -> CanonicalForm:
    """Deterministic encoding equal for two quivers iff they are isomorphic
    (mutable and frozen vertices are never interchanged)."""
    enc, _ = _canonicalize(q)
    return enc


def _canonicalize(q: Quiver) -> tuple[bytes, tuple[tuple[int, ...], tuple[int, ...]]]:
    n, total = q.n_mutable, q.n_vertices
    w = _weights(q)
    init = [0 if v < n else 1 for v in range(total)]
    best: tuple[tuple[tuple[int, int, int], ...], list[int]] | None = None
    for leaf in _leaf_labelings(w, init):
        # mutable cells always rank before frozen cells, so positions 0..n-1
        # are mutable
        arrows = tuple(
            sorted(
                (leaf[i], leaf[j], w[i][j])
                for i in range(total)
                for j in range(total)
                if w[i][j]
            )
        )
        if best is None or arrows < best[0]:
            best = (arrows, leaf)
    assert best is not None
    arrows, leaf = best
    enc = repr((n, q.n_frozen, arrows)).encode()
    perm_mutable = tuple(leaf[v] + 1 for v in range(n))
    perm_frozen = tuple(leaf[n + i] - n + 1 for i in range(q.n_frozen))
    return enc, (perm_mutable, perm_frozen)


def is_isomorphic(q1: Quiver, q2: Quiver) -> bool:
    if (q1.n_mutable, q1.n_frozen) != (q2.n_mutable, q2.n_frozen):
        return False
    return canonical_form(q1) == canonical_form(q2)


def isomorphism_between(
    q1: Quiver, q2: Quiver
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """A vertex bijection sending ``q1`` onto ``q2``, or ``None``.

    Returned as ``(perm_mutable, perm_frozen)`` with ``perm_mutable[i-1]``
    the image in ``q2`` of mutable vertex ``i`` of ``q1``.
    """
    if not is_isomorphic(q1, q2):
        return None
    pm1, pf1 = canonical_labeling(q1)
    pm2, pf2 = canonical_labeling(q2)
    inv_m2 = [0] * len(pm2)
    for i, img in enumerate(pm2):
        inv_m2[img - 1] = i + 1
    inv_f2 = [0] * len(pf2)
    for i, img in enumerate(pf2):
        inv_f2[img - 1] = i + 1
    perm_m = tuple(inv_m2[pm1[i] - 1] for i in range(len(pm1)))
    perm_f = tuple(inv_f2[pf1[i] - 1] for i in range(len(pf1)))
    if q1.relabel(perm_m, perm_f).b != q2.b:  # cheap safety net
        return None
    return perm_m, perm_f
