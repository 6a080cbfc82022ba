"""Exact game values, relabeling-invariant hashing, and small-graph isomorphism.

The solver is a boolean negamax over join/cut moves with a transposition
table keyed by the canonical hash, shareable across calls. It is meant for
oracle duty on small graphs; budget overruns raise rather than grind.
"""

from __future__ import annotations

from typing import Optional

from .errors import ResourceLimitError
from .shannon import GameStatus, Player, ShannonGraph, _bits

_M64 = (1 << 64) - 1


def _mix(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


_COLOR_TERMINAL = _mix(11)
_COLOR_PLAYABLE = _mix(23)


def _wl_hash(adj: list[int], alive: int) -> int:
    """Weisfeiler-Leman refinement hash over the alive subgraph. Terminals
    share one starting color, so the hash is invariant under swapping them
    as well as under any relabeling of playable nodes."""
    nodes = list(_bits(alive))
    color = {v: (_COLOR_TERMINAL if v < 2 else _COLOR_PLAYABLE) for v in nodes}
    signature = sorted(color.values())
    for _ in range(len(nodes)):
        nxt = {}
        for v in nodes:
            agg = 0
            x = 0
            for u in _bits(adj[v] & alive):
                m = _mix(color[u])
                agg = (agg + m) & _M64
                x ^= m
            nxt[v] = _mix(color[v] ^ _mix(agg) ^ _mix(x ^ 0xD6E8FEB86659FD93))
        color = nxt
        new_signature = sorted(color.values())
        if new_signature == signature:
            break
        signature = new_signature
    h = _mix(len(nodes))
    for c in signature:
        h = _mix(h ^ c)
    h = _mix(h ^ _mix(color.get(0, 0) if (alive & 1) else 0) ^ _mix(color.get(1, 0) if (alive >> 1 & 1) else 0))
    return h


def canonical_hash(graph: ShannonGraph) -> int:
    """Structure hash: equal for any relabeling of the same graph, and equal
    hashes are a precondition for isomorphism (not a proof)."""
    alive = (1 << graph.num_nodes) - 1
    return _wl_hash(graph.adj, alive)


def _status_masks(adj: list[int], alive: int) -> GameStatus:
    if adj[0] >> 1 & 1:
        return GameStatus.SHORT_WINS
    reach = 1
    frontier = 1
    while frontier:
        nxt = 0
        for u in _bits(frontier):
            nxt |= adj[u]
        nxt &= ~reach
        if nxt >> 1 & 1:
            return GameStatus.ONGOING
        reach |= nxt
        frontier = nxt
    return GameStatus.CUT_WINS


def _clique_masks(adj: list[int], mask: int) -> bool:
    m = mask
    while m:
        low = m & -m
        u = low.bit_length() - 1
        if (mask & ~low) & ~adj[u]:
            return False
        m ^= low
    return True


def _prune_masks(adj: list[int], alive: int) -> tuple[list[int], int]:
    """In-search dead/captured reduction (same rules as prune_dead_captured,
    on the mask representation). Value-preserving; used only when the caller
    opts in."""
    adj = list(adj)
    todo = [v for v in _bits(alive) if v >= 2]
    while todo:
        affected: set[int] = set()

        def delete(v: int) -> None:
            nonlocal alive
            for u in _bits(adj[v]):
                adj[u] &= ~(1 << v)
            adj[v] = 0
            alive &= ~(1 << v)

        for v in todo:
            if not (alive >> v & 1):
                continue
            nv = adj[v]
            if _clique_masks(adj, nv):
                affected.update(_bits(nv))
                delete(v)
                continue
            captured = False
            if nv:
                first = (nv & -nv).bit_length() - 1
                for n in _bits((1 << first) | adj[first]):
                    if n == v or n < 2:
                        continue
                    if (nv & ~(1 << n)) == (adj[n] & ~(1 << v)):
                        affected.update(_bits(nv & ~(1 << n)))
                        for u in _bits(nv):
                            adj[u] |= nv & ~(1 << u)
                        delete(v)
                        delete(n)
                        captured = True
                        break
            if captured:
                continue
            for n in _bits(nv):
                if n < 2:
                    continue
                if _clique_masks(adj, nv & ~(1 << n)) and _clique_masks(adj, adj[n] & ~(1 << v)):
                    affected.update(_bits((nv | adj[n]) & ~((1 << v) | (1 << n))))
                    delete(v)
                    delete(n)
                    break
        todo = [v for v in sorted(affected) if v >= 2 and (alive >> v & 1)]
    return adj, alive


def _solve_masks(
    adj: list[int],
    alive: int,
    to_move: Player,
    tt: dict,
    use_pruning: bool,
) -> bool:
    """True iff the side to move wins."""
    status = _status_masks(adj, alive)
    if status is GameStatus.SHORT_WINS:
        return to_move is Player.SHORT
    if status is GameStatus.CUT_WINS:
        return to_move is Player.CUT
    if use_pruning:
        adj, alive = _prune_masks(adj, alive)
        status = _status_masks(adj, alive)
        if status is GameStatus.SHORT_WINS:
            return to_move is Player.SHORT
        if status is GameStatus.CUT_WINS:
            return to_move is Player.CUT

    # Nodes adjacent to both terminals are one-move wins for Short.
    both = [v for v in _bits(alive) if v >= 2 and (adj[v] & 1) and (adj[v] >> 1 & 1)]
    if to_move is Player.SHORT and both:
        return True
    if to_move is Player.CUT and len(both) >= 2:
        return False

    key = (_wl_hash(adj, alive), to_move)
    hit = tt.get(key)
    if hit is not None:
        return hit

    if to_move is Player.CUT and len(both) == 1:
        moves = both  # forced: anything else loses to the double threat
    else:
        moves = sorted(
            (v for v in _bits(alive) if v >= 2),
            key=lambda v: -(adj[v]).bit_count(),
        )
    win = False
    for v in moves:
        child = list(adj)
        child_alive = alive & ~(1 << v)
        m = child[v]
        if to_move is Player.SHORT:
            for u in _bits(m):
                child[u] = (child[u] | m) & ~(1 << u) & ~(1 << v)
        else:
            for u in _bits(m):
                child[u] &= ~(1 << v)
        child[v] = 0
        if not _solve_masks(child, child_alive, to_move.opponent, tt, use_pruning):
            win = True
            break
    tt[key] = win
    return win


def solve(
    graph: ShannonGraph,
    max_playable: Optional[int] = 20,
    tt: Optional[dict] = None,
    use_pruning: bool = False,
) -> GameStatus:
    """Exact value of the position for the player to move.

    `max_playable` bounds the playable-node count (None disables the check);
    `tt` may be shared between calls to reuse subgame results; `use_pruning`
    shrinks every searched position with the dead/captured reduction first.
    """
    if max_playable is not None and graph.num_playable > max_playable:
        raise ResourceLimitError(
            f"graph has {graph.num_playable} playable nodes, budget is {max_playable}"
        )
    if tt is None:
        tt = {}
    alive = (1 << graph.num_nodes) - 1
    mover_wins = _solve_masks(list(graph.adj), alive, graph.to_move, tt, use_pruning)
    if mover_wins:
        return GameStatus.SHORT_WINS if graph.to_move is Player.SHORT else GameStatus.CUT_WINS
    return GameStatus.CUT_WINS if graph.to_move is Player.SHORT else GameStatus.SHORT_WINS


def is_isomorphic(a: ShannonGraph, b: ShannonGraph, max_playable: int = 12) -> bool:
    """Exact isomorphism test with terminals mapped to terminals (swap
    allowed). Permutation search with WL-color pruning; small graphs only."""
    if max(a.num_playable, b.num_playable) > max_playable:
        raise ResourceLimitError(
            f"isomorphism budget is {max_playable} playable nodes"
        )
    if a.num_nodes != b.num_nodes or a.edge_count() != b.edge_count():
        return False
    if sorted(m.bit_count() for m in a.adj) != sorted(m.bit_count() for m in b.adj):
        return False
    if canonical_hash(a) != canonical_hash(b):
        return False

    def wl_colors(g: ShannonGraph) -> list[int]:
        colors = [_COLOR_TERMINAL if v < 2 else _COLOR_PLAYABLE for v in range(g.num_nodes)]
        for _ in range(g.num_nodes):
            nxt = []
            for v in range(g.num_nodes):
                agg = 0
                x = 0
                for u in _bits(g.adj[v]):
                    m = _mix(colors[u])
                    agg = (agg + m) & _M64
                    x ^= m
                nxt.append(_mix(colors[v] ^ _mix(agg) ^ _mix(x ^ 0xD6E8FEB86659FD93)))
            if sorted(nxt) == sorted(colors):
                break
            colors = nxt
        return colors

    ca, cb = wl_colors(a), wl_colors(b)
    if sorted(ca) != sorted(cb):
        return False

    order = sorted(range(a.num_nodes), key=lambda v: (v >= 2, -a.adj[v].bit_count()))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        u = order[i]
        for v in range(b.num_nodes):
            if v in used or ca[u] != cb[v] or (u < 2) != (v < 2):
                continue
            ok = True
            for w, x in mapping.items():
                if bool(a.adj[u] >> w & 1) != bool(b.adj[v] >> x & 1):
                    ok = False
                    break
            if not ok:
                continue
            mapping[u] = v
            used.add(v)
            if extend(i + 1):
                return True
            del mapping[u]
            used.discard(v)
        return False

    return extend(0)
