"""Numpy implementation of the reflection-word ball enumeration."""

from __future__ import annotations

import numpy as np


def bfs_ball(gens: np.ndarray, max_len: int):
    """Enumerate distinct products of ``gens`` (int64, shape (G, n, n)) up to ``max_len``.

    Returns ``(elements, parent, gen, length)``: ``elements`` has shape (M, n, n),
    element 0 is the identity, and element ``i > 0`` equals
    ``elements[parent[i]] @ gens[gen[i]]`` with word length ``length[i]``.
    Elements are listed in BFS order, so each one is reached by a shortest word.
    """
    gens = np.ascontiguousarray(gens, dtype=np.int64)
    n_gens, n, _ = gens.shape
    ident = np.eye(n, dtype=np.int64)
    elems = [ident]
    parent = [-1]
    gen_idx = [-1]
    length = [0]
    seen = {ident.tobytes(): 0}
    frontier = np.arange(1)
    stack = ident[None]
    for depth in range(1, max_len + 1):
        if frontier.size == 0:
            break
        prods = np.einsum("kij,gjl->kgil", stack, gens).reshape(-1, n, n)
        new_ids = []
        for flat, mat in enumerate(prods):
            key = mat.tobytes()
            if key in seen:
                continue
            idx = len(elems)
            seen[key] = idx
            elems.append(mat)
            parent.append(int(frontier[flat // n_gens]))
            gen_idx.append(flat % n_gens)
            length.append(depth)
            new_ids.append(idx)
        frontier = np.array(new_ids, dtype=np.int64)
        stack = np.array([elems[i] for i in new_ids], dtype=np.int64).reshape(-1, n, n)
    return (np.array(elems, dtype=np.int64), np.array(parent, dtype=np.int64),
            np.array(gen_idx, dtype=np.int64), np.array(length, dtype=np.int64))
