"""Maximum bipartite matching and Hall condition diagnostics.

Vertices are integer indices: left side 0..len(adjacency)-1, right side
0..n_right-1. The solver calls this in its inner pruning loop, so the
implementation sticks to flat lists and deques.
"""

from __future__ import annotations

from collections import deque

_INF = float("inf")


def hopcroft_karp(adjacency: list[list[int]], n_right: int) -> dict[int, int]:
    """Maximum matching of a bipartite graph, as a {left: right} dict."""
    n_left = len(adjacency)
    match_l: list[int] = [-1] * n_left
    match_r: list[int] = [-1] * n_right
    dist: list[float] = [0.0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adjacency[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in range(n_left):
            if match_l[u] == -1:
                dfs(u)
    return {u: v for u, v in enumerate(match_l) if v != -1}


def hall_violator(adjacency: list[list[int]], n_right: int, matching: dict[int, int]) -> list[int]:
    """A left subset W with |N(W)| < |W|, given a non-saturating maximum matching.

    Standard alternating reachability from the unmatched left vertices:
    forward along any edge, backward along matched edges. The reachable left
    set violates Hall's condition by exactly the number of unmatched seeds.
    """
    match_r: dict[int, int] = {v: u for u, v in matching.items()}
    seeds = [u for u in range(len(adjacency)) if u not in matching]
    if not seeds:
        return []
    seen_l = set(seeds)
    seen_r: set[int] = set()
    queue = deque(seeds)
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if v in seen_r:
                continue
            seen_r.add(v)
            w = match_r.get(v, -1)
            if w != -1 and w not in seen_l:
                seen_l.add(w)
                queue.append(w)
    return sorted(seen_l)
