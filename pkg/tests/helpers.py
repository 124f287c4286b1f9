"""Shared brute-force helpers, kept independent of the package internals."""

import itertools

from cosetalg import Margins, OffDiagonalType


def naive_classify(g, n):
    """Intersection recount with explicit sets; independent of oracle.classify."""
    blocks, start = [], 0
    for size in n:
        blocks.append(set(range(start, start + size)))
        start += size
    nu = len(n)
    return tuple(
        tuple(len({g[x] for x in blocks[i]} & blocks[j]) for j in range(nu))
        for i in range(nu)
    )


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def naive_tables(n):
    """All margin matrices by filtering row compositions on their column sums."""
    nu = len(n)
    out = []
    for rows in itertools.product(*(_compositions(n[i], nu) for i in range(nu))):
        if all(sum(rows[i][j] for i in range(nu)) == n[j] for j in range(nu)):
            out.append(tuple(rows))
    return out


def balanced_types(nu, entry_max, star_caps=None):
    """All balanced off-diagonal types with entries <= entry_max, sorted."""
    cells = [(i, j) for i in range(nu) for j in range(nu) if i != j]
    found = []
    for values in itertools.product(range(entry_max + 1), repeat=len(cells)):
        grid = [[0] * nu for _ in range(nu)]
        for (i, j), v in zip(cells, values):
            grid[i][j] = v
        ok = True
        for j in range(nu):
            col = sum(grid[i][j] for i in range(nu) if i != j)
            row = sum(grid[j][i] for i in range(nu) if i != j)
            if col != row or (star_caps is not None and col > star_caps[j]):
                ok = False
                break
        if ok:
            found.append(OffDiagonalType(tuple(tuple(r) for r in grid)))
    found.sort(key=lambda t: t.entries)
    return found


def margins_of(*n):
    return Margins(tuple(n))
