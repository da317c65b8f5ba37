"""Index vectors of string modules and their transport under a flip.

For a string module ``M`` and an internal arc ``j`` the index entry is
``dim Ext^1(S_j, M) - dim Hom(S_j, M)``, the difference of the
multiplicities of the injective hulls ``I(j)`` in the two terms of a
minimal injective copresentation.  Both numbers come from the projective
resolution ``P_j <- (+)_a P_t(a) <- (+)_rel P_u`` of the simple ``S_j``:
applying ``Hom(-, M)`` gives

    M_j --d0--> (+)_{a: j->t} M_t --d1--> (+)_{ba in I} M_u

and in a gentle algebra ``d1`` is diagonal in the arrows ``a``, so

    ind_j = sum_a dim ker(b_a on M_t) - dim M_j.
"""
from __future__ import annotations

import numpy as np

from .strings import RIGHT, StringWord, canonical_submodules, submodule_dims, validate_string
from .surface import QuiverWithRelations, Triangulation, quiver_of


def _acting_arrows(w: StringWord, q: QuiverWithRelations) -> set[tuple[int, int]]:
    """Pairs ``(arrow id, position)`` such that the arrow is nonzero on that basis vector."""
    acts = set()
    for i, d in enumerate(w.directions):
        src, dst = (i, i + 1) if d == RIGHT else (i + 1, i)
        a = q.arrow_in(w.via[i], w.vertices[src], w.vertices[dst])
        acts.add((a, src))
    return acts


def index_of(w: StringWord, t: Triangulation, validate: bool = True) -> np.ndarray:
    """Index of the string object; frozen coordinates are zero.

    The empty word at arc ``i`` gives ``e_i``.
    """
    m = t.m
    out = np.zeros(m, dtype=np.int64)
    if w.is_empty():
        out[w.arc] = 1
        return out
    if validate:
        validate_string(w, t)
    q = quiver_of(t)
    acts = _acting_arrows(w, q)
    partner = {a: b for a, b in q.relations}
    for j in range(t.n):
        dim_j = sum(1 for x in w.vertices if x == j)
        kernel = 0
        for a in q.arrows_from(j):
            head = q.arrows[a].head
            beta = partner.get(a)
            for p, x in enumerate(w.vertices):
                if x == head and (beta is None or (beta, p) not in acts):
                    kernel += 1
        out[j] = kernel - dim_j
    return out


def hom_simple(w: StringWord, t: Triangulation, j: int) -> int:
    """``dim Hom(S_j, M(w))``: positions labelled ``j`` that no arrow moves."""
    if w.is_empty():
        return 0
    q = quiver_of(t)
    movers = {p for _, p in _acting_arrows(w, q)}
    return sum(1 for p, x in enumerate(w.vertices) if x == j and p not in movers)


def ext1_simple(w: StringWord, t: Triangulation, j: int) -> int:
    if w.is_empty():
        return 0
    return int(index_of(w, t)[j]) + hom_simple(w, t, j)


def frozen_normalization(w: StringWord, b: np.ndarray, n: int) -> np.ndarray:
    """Frozen part making the expansion polynomial, not divisible, in frozen variables.

    Returns ``-min_U (B_fr dim U)`` taken coordinatewise over the canonical
    submodules.
    """
    b = np.asarray(b, dtype=np.int64)
    m = b.shape[0]
    subs = canonical_submodules(w)
    dims = submodule_dims(w, subs, m)[:, :n] if not w.is_empty() else np.zeros((1, n), dtype=np.int64)
    return -(dims @ b[n:].T).min(axis=0)


def extended_index(w: StringWord, t: Triangulation, b: np.ndarray) -> np.ndarray:
    """Index with the frozen coordinates fixed by the tropical normalization."""
    g = index_of(w, t)
    g[t.n :] = frozen_normalization(w, b, t.n)
    return g


def epsilon_matrix(b, k: int, eps: int) -> np.ndarray:
    """``E_eps``: identity off column ``k``, ``-1`` at ``(k, k)``, ``[eps b_ik]_+`` above and below."""
    b = np.asarray(b, dtype=np.int64)
    m = b.shape[0]
    e = np.eye(m, dtype=np.int64)
    e[:, k] = np.maximum(eps * b[:, k], 0)
    e[k, k] = -1
    return e


def transport_index(ind, b, k: int) -> np.ndarray:
    """Apply ``E_eps`` with ``eps`` the sign of entry ``k`` (``+`` at zero)."""
    ind = np.asarray(ind, dtype=np.int64)
    eps = 1 if ind[k] >= 0 else -1
    return epsilon_matrix(b, k, eps) @ ind
