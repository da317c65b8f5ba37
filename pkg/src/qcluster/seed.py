"""Compatible pairs, quantum seeds and the mutation oracle.

Indices are 0-based throughout: mutable directions are ``0..n-1`` and the
frozen rows of ``B`` are ``n..m-1``.  A pair ``(B, lam)`` is compatible when
``lam`` is skew-symmetric and ``lam @ (-B)`` is the identity on top of a
zero block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import NoIntegralSolution, NotCompatible, NotSkew
from .qtorus import QTElement, exact_divide, generators, normalized_monomial


def _frozen(arr) -> np.ndarray:
    a = np.array(arr, dtype=np.int64)
    a.setflags(write=False)
    return a


def check_compatible(b, lam) -> None:
    """Raise ``NotSkew`` or ``NotCompatible`` unless ``lam(-B) = [I; 0]``."""
    b = np.asarray(b, dtype=np.int64)
    lam = np.asarray(lam, dtype=np.int64)
    m, n = b.shape
    if lam.shape != (m, m):
        raise NotCompatible(f"lambda has shape {lam.shape}, expected {(m, m)}")
    if not np.array_equal(lam.T, -lam):
        bad = np.argwhere(lam.T != -lam)[0]
        raise NotSkew(f"lambda is not skew-symmetric at entry {tuple(bad.tolist())}")
    prod = lam @ (-b)
    want = np.zeros((m, n), dtype=np.int64)
    want[:n, :n] = np.eye(n, dtype=np.int64)
    if not np.array_equal(prod, want):
        top = prod[:n]
        block = "top" if not np.array_equal(top, want[:n]) else "frozen"
        raise NotCompatible(f"lambda(-B) differs from [I; 0] in the {block} block: {prod.tolist()}")


@dataclass(frozen=True)
class CompatiblePair:
    """Exchange matrix ``b`` (m x n) and skew form ``lam`` (m x m)."""

    b: np.ndarray
    lam: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", _frozen(self.b))
        object.__setattr__(self, "lam", _frozen(self.lam))
        if self.b.ndim != 2 or self.b.shape[0] < self.b.shape[1]:
            raise ValueError("B must be m x n with m >= n")
        check_compatible(self.b, self.lam)

    @property
    def m(self) -> int:
        return self.b.shape[0]

    @property
    def n(self) -> int:
        return self.b.shape[1]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CompatiblePair)
            and np.array_equal(self.b, other.b)
            and np.array_equal(self.lam, other.lam)
        )

    def __hash__(self) -> int:
        return hash((self.b.tobytes(), self.b.shape, self.lam.tobytes()))

    def key(self) -> tuple:
        return (tuple(map(tuple, self.b.tolist())), tuple(map(tuple, self.lam.tolist())))


def mutate_matrix(b, k: int) -> np.ndarray:
    """Matrix mutation of an extended exchange matrix in direction ``k``."""
    b = np.asarray(b, dtype=np.int64)
    out = b.copy()
    col = b[:, k]
    row = b[k, :]
    out += np.maximum(col, 0)[:, None] * row[None, :] + col[:, None] * np.maximum(-row, 0)[None, :]
    out[:, k] = -col
    out[k, :] = -row
    return out


def exchange_basis(b, k: int) -> np.ndarray:
    """Matrix whose column ``k`` is ``-e_k + sum_l [b_lk]_+ e_l``, identity elsewhere."""
    b = np.asarray(b, dtype=np.int64)
    m = b.shape[0]
    e = np.eye(m, dtype=np.int64)
    e[:, k] = np.maximum(b[:, k], 0)
    e[k, k] = -1
    return e


def mutate_pair(pair: CompatiblePair, k: int) -> CompatiblePair:
    if not 0 <= k < pair.n:
        raise ValueError(f"direction {k} outside 0..{pair.n - 1}")
    e = exchange_basis(pair.b, k)
    lam = e.T @ pair.lam @ e
    return CompatiblePair(mutate_matrix(pair.b, k), lam)


@lru_cache(maxsize=512)
def _solve_lambda_cached(shape: tuple[int, int], flat: tuple[int, ...]) -> tuple[int, ...]:
    from sympy import Matrix, zeros
    from sympy.matrices.normalforms import smith_normal_decomp

    m, n = shape
    bt = Matrix(m, n, list(flat))
    s, u, v = smith_normal_decomp(bt)
    if any(s[i, i] != 1 for i in range(n)):
        # B^T lam = [I | 0] forces B^T to be onto Z^n
        raise NoIntegralSolution("the maximal minors of B are not coprime")
    # M = U^{-1} diag(V^{-1}, I) is unimodular with first n columns equal to B
    block = zeros(m, m)
    block[:n, :n] = v.inv()
    for i in range(n, m):
        block[i, i] = 1
    mm = u.inv() * block
    # in the basis of M the form is [[B, C_top], [-C_top^T, 0]]
    top = mm[:n, :]
    lam_p = zeros(m, m)
    lam_p[:n, :] = top
    lam_p[:, :n] = -top.T
    lam_p[:n, :n] = top[:, :n]
    minv = mm.inv()
    lam = minv.T * lam_p * minv
    return tuple(int(t) for t in lam)


def solve_lambda(b) -> np.ndarray:
    """An integer skew form compatible with ``b``.

    A Smith decomposition of ``b`` completes it to a unimodular basis; in
    that basis the compatible forms are explicit, and the one whose
    lower-right block vanishes is returned.
    """
    b = np.asarray(b, dtype=np.int64)
    m, n = b.shape
    if np.linalg.matrix_rank(b.astype(float)) < n:
        raise NoIntegralSolution("B does not have full column rank")
    flat = _solve_lambda_cached((m, n), tuple(int(t) for t in b.ravel()))
    lam = np.array(flat, dtype=np.int64).reshape(m, m)
    check_compatible(b, lam)
    return lam


@dataclass(frozen=True)
class QuantumSeed:
    pair: CompatiblePair
    variables: tuple[QTElement, ...]
    history: tuple[int, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def m(self) -> int:
        return self.pair.m

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuantumSeed)
            and self.pair == other.pair
            and self.variables == other.variables
        )

    def __hash__(self) -> int:
        return hash((self.pair, self.variables))


def initial_seed(pair: CompatiblePair | None = None, b=None, lam=None) -> QuantumSeed:
    """Seed whose variables are the generators ``X^{e_i}`` of its own torus."""
    if pair is None:
        if b is None:
            raise ValueError("need a pair or a matrix B")
        pair = CompatiblePair(b, solve_lambda(b) if lam is None else lam)
    return QuantumSeed(pair, tuple(generators(pair.lam)))


def exchange_exponents(b, k: int) -> tuple[np.ndarray, np.ndarray]:
    """The two exchange exponents ``-e_k + [b_k]_+`` and ``-e_k + [b_k]_-``."""
    col = np.asarray(b, dtype=np.int64)[:, k]
    plus = np.maximum(col, 0)
    minus = np.maximum(-col, 0)
    plus[k] -= 1
    minus[k] -= 1
    return plus, minus


def mutate_seed(s: QuantumSeed, k: int) -> QuantumSeed:
    """Mutate in direction ``k``; the new variable is computed in the initial torus."""
    pair = s.pair
    if not 0 <= k < pair.n:
        raise ValueError(f"direction {k} outside 0..{pair.n - 1}")
    lam = pair.lam
    col = pair.b[:, k]
    num = None
    # X^{-e_k + p} X_k = q^{lam(p, e_k)/2} X^p in the current frame
    for p in (np.maximum(col, 0), np.maximum(-col, 0)):
        term = normalized_monomial(p.tolist(), s.variables, lam).qshift(int(p @ lam[:, k]))
        num = term if num is None else num + term
    new_var = exact_divide(num, s.variables[k])
    variables = list(s.variables)
    variables[k] = new_var
    return QuantumSeed(mutate_pair(pair, k), tuple(variables), s.history + (k,))


def variable_along_path(initial: QuantumSeed, path: Sequence[int], target: int) -> QTElement:
    """Mutate along ``path`` and return variable ``target``: the oracle."""
    s = initial
    for k in path:
        s = mutate_seed(s, int(k))
    return s.variables[target]


def seed_along_path(initial: QuantumSeed, path: Sequence[int]) -> QuantumSeed:
    s = initial
    for k in path:
        s = mutate_seed(s, int(k))
    return s


def principal_pair(b0) -> CompatiblePair:
    """Principal coefficients ``[B0; I]`` with ``lam = [[0, -I], [I, -B0]]``."""
    b0 = np.asarray(b0, dtype=np.int64)
    n = b0.shape[0]
    eye = np.eye(n, dtype=np.int64)
    b = np.vstack([b0, eye])
    lam = np.block([[np.zeros((n, n), dtype=np.int64), -eye], [eye, -b0]])
    return CompatiblePair(b, lam)
