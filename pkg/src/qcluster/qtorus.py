"""Exact arithmetic in a based quantum torus.

A quantum torus is fixed by an integer skew-symmetric matrix ``lam``; its
basis elements multiply as ``X^g X^h = q^{lam(g, h)/2} X^{g+h}``.  All
q-exponents are stored as integer counts of ``q^{1/2}``.

Elements are immutable; ``QTElement.terms`` maps an exponent tuple to a
``QCoeff``.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import DivisionFailure, NonMonomialInverse, TorusMismatch

_INT64_SAFE = 1 << 62


class QCoeff:
    """Laurent polynomial in ``q^{1/2}`` with integer coefficients."""

    __slots__ = ("_c",)

    def __init__(self, data: Mapping[int, int] | None = None) -> None:
        self._c: dict[int, int] = {int(h): int(c) for h, c in (data or {}).items() if c}

    @classmethod
    def monomial(cls, half: int = 0, coeff: int = 1) -> "QCoeff":
        return cls({half: coeff})

    def items(self):
        return sorted(self._c.items())

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = QCoeff({0: other})
        return isinstance(other, QCoeff) and self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "QCoeff") -> "QCoeff":
        out = dict(self._c)
        for h, c in other._c.items():
            out[h] = out.get(h, 0) + c
        return QCoeff(out)

    def __neg__(self) -> "QCoeff":
        return QCoeff({h: -c for h, c in self._c.items()})

    def __sub__(self, other: "QCoeff") -> "QCoeff":
        return self + (-other)

    def __mul__(self, other: "QCoeff") -> "QCoeff":
        out: dict[int, int] = {}
        for h1, c1 in self._c.items():
            for h2, c2 in other._c.items():
                out[h1 + h2] = out.get(h1 + h2, 0) + c1 * c2
        return QCoeff(out)

    def shift(self, half: int) -> "QCoeff":
        """Multiply by ``q^{half/2}``."""
        return QCoeff({h + half: c for h, c in self._c.items()})

    def bar(self) -> "QCoeff":
        return QCoeff({-h: c for h, c in self._c.items()})

    def at_one(self) -> int:
        return sum(self._c.values())

    def is_positive(self) -> bool:
        return all(c > 0 for c in self._c.values())

    def divide_exact(self, other: "QCoeff") -> "QCoeff":
        """Return ``r`` with ``r * other == self`` or raise ``DivisionFailure``."""
        if not other:
            raise DivisionFailure("division by zero coefficient")
        if not self:
            return QCoeff()
        lo = min(self._c) - min(other._c)
        top_b = max(other._c)
        cb = other._c[top_b]
        rem = dict(self._c)
        out: dict[int, int] = {}
        while rem:
            top = max(rem)
            e = top - top_b
            if e < lo or rem[top] % cb:
                raise DivisionFailure("coefficient not divisible")
            c = rem[top] // cb
            out[e] = c
            for h, cc in other._c.items():
                v = rem.get(h + e, 0) - c * cc
                if v:
                    rem[h + e] = v
                else:
                    rem.pop(h + e, None)
        return QCoeff(out)

    def to_json(self) -> dict[str, int]:
        return {str(h): c for h, c in self.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "QCoeff":
        return cls({int(h): int(c) for h, c in data.items()})

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for h, c in self.items():
            parts.append(f"{c}" if h == 0 else f"{c}*q^({h}/2)")
        return " + ".join(parts)


def _as_lam(lam) -> np.ndarray:
    arr = np.array(lam, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("lambda must be a square matrix")
    arr.setflags(write=False)
    return arr


def pairing(lam: np.ndarray, g: Sequence[int], h: Sequence[int]) -> int:
    """The skew form ``lam(g, h) = g^T lam h`` as a Python int."""
    return int(np.asarray(g, dtype=np.int64) @ lam @ np.asarray(h, dtype=np.int64))


class QTElement:
    """Finite sum of ``q^{h/2} X^g`` in the torus of ``lam``."""

    __slots__ = ("lam", "_t", "_arrays")

    def __init__(self, lam, terms: Mapping[tuple[int, ...], Mapping[int, int] | QCoeff] | None = None):
        self.lam = lam if isinstance(lam, np.ndarray) and not lam.flags.writeable else _as_lam(lam)
        m = self.lam.shape[0]
        t: dict[tuple[int, ...], dict[int, int]] = {}
        for g, coeff in (terms or {}).items():
            key = tuple(int(x) for x in g)
            if len(key) != m:
                raise ValueError(f"exponent {key} has wrong length for rank {m}")
            raw = coeff._c if isinstance(coeff, QCoeff) else coeff
            cleaned = {int(h): int(c) for h, c in raw.items() if c}
            if cleaned:
                t[key] = cleaned
        self._t = t
        self._arrays = None

    # -- construction -------------------------------------------------------

    @classmethod
    def _raw(cls, lam: np.ndarray, t: dict) -> "QTElement":
        obj = cls.__new__(cls)
        obj.lam = lam
        obj._t = t
        obj._arrays = None
        return obj

    @property
    def rank(self) -> int:
        return self.lam.shape[0]

    @property
    def terms(self) -> dict[tuple[int, ...], QCoeff]:
        return {g: QCoeff(c) for g, c in self._t.items()}

    def coefficient(self, g: Sequence[int]) -> QCoeff:
        return QCoeff(self._t.get(tuple(g), {}))

    def support(self) -> list[tuple[int, ...]]:
        return sorted(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_monomial(self) -> bool:
        if len(self._t) != 1:
            return False
        (c,) = self._t.values()
        return len(c) == 1 and abs(next(iter(c.values()))) == 1

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "QTElement") -> None:
        if self.lam is not other.lam and not np.array_equal(self.lam, other.lam):
            raise TorusMismatch("elements live in different quantum tori")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QTElement):
            return NotImplemented
        return np.array_equal(self.lam, other.lam) and self._t == other._t

    def __hash__(self) -> int:
        return hash(tuple(sorted((g, frozenset(c.items())) for g, c in self._t.items())))

    def __add__(self, other: "QTElement") -> "QTElement":
        self._check(other)
        out = {g: dict(c) for g, c in self._t.items()}
        for g, c in other._t.items():
            slot = out.setdefault(g, {})
            for h, v in c.items():
                nv = slot.get(h, 0) + v
                if nv:
                    slot[h] = nv
                else:
                    slot.pop(h, None)
            if not slot:
                del out[g]
        return QTElement._raw(self.lam, out)

    def __neg__(self) -> "QTElement":
        return QTElement._raw(self.lam, {g: {h: -v for h, v in c.items()} for g, c in self._t.items()})

    def __sub__(self, other: "QTElement") -> "QTElement":
        return self + (-other)

    def qshift(self, half: int) -> "QTElement":
        """Multiply by the central scalar ``q^{half/2}``."""
        return QTElement._raw(self.lam, {g: {h + half: v for h, v in c.items()} for g, c in self._t.items()})

    def bar(self) -> "QTElement":
        """The bar involution ``q^{1/2} -> q^{-1/2}`` on the standard basis."""
        return QTElement._raw(self.lam, {g: {-h: v for h, v in c.items()} for g, c in self._t.items()})

    def _as_arrays(self):
        if self._arrays is None:
            m = self.rank
            rows, qs, cs = [], [], []
            for g, c in self._t.items():
                for h, v in c.items():
                    rows.append(g)
                    qs.append(h)
                    cs.append(v)
            e = np.array(rows, dtype=np.int64).reshape(len(rows), m)
            self._arrays = (e, np.array(qs, dtype=np.int64), np.array(cs, dtype=np.int64))
        return self._arrays

    def _max_abs(self) -> int:
        return max((abs(v) for c in self._t.values() for v in c.values()), default=0)

    def __mul__(self, other: "QTElement") -> "QTElement":
        self._check(other)
        if not self._t or not other._t:
            return QTElement._raw(self.lam, {})
        n = min(len(self._t), len(other._t))
        bound = self._max_abs() * other._max_abs() * max(n, 1)
        if bound >= _INT64_SAFE:
            return _mul_python(self, other)
        ea, qa, ca = self._as_arrays()
        eb, qb, cb = other._as_arrays()
        exps, qs, cs = _kernels.term_products(ea, qa, ca, eb, qb, cb, self.lam)
        out: dict[tuple[int, ...], dict[int, int]] = {}
        for g, h, v in zip(map(tuple, exps.tolist()), qs.tolist(), cs.tolist()):
            slot = out.setdefault(g, {})
            slot[h] = slot.get(h, 0) + v
        return QTElement._raw(self.lam, _prune(out))

    def __pow__(self, e: int) -> "QTElement":
        if e < 0:
            return inverse_monomial(self) ** (-e)
        result = one(self.lam)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- order --------------------------------------------------------------

    def leading(self) -> tuple[tuple[int, ...], QCoeff]:
        """Term with the lexicographically largest exponent."""
        if not self._t:
            raise ValueError("zero element has no leading term")
        g = max(self._t)
        return g, QCoeff(self._t[g])

    def sorted_terms(self) -> list[tuple[tuple[int, ...], QCoeff]]:
        return [(g, QCoeff(self._t[g])) for g in sorted(self._t)]

    # -- specialisation and serialisation ------------------------------------

    def at_q1(self) -> dict[tuple[int, ...], int]:
        out = {}
        for g, c in self._t.items():
            s = sum(c.values())
            if s:
                out[g] = s
        return out

    def is_positive(self) -> bool:
        return all(v > 0 for c in self._t.values() for v in c.values())

    def to_json(self) -> dict:
        return {
            "lambda": self.lam.tolist(),
            "terms": [{"exponent": list(g), "coeff": QCoeff(c).to_json()} for g, c in sorted(self._t.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "QTElement":
        lam = _as_lam(data["lambda"])
        terms = {tuple(t["exponent"]): QCoeff.from_json(t["coeff"]) for t in data["terms"]}
        return cls(lam, terms)

    def __repr__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for g, c in self.sorted_terms():
            parts.append(f"({c!r})X^{list(g)}")
        return " + ".join(parts)


def _prune(out: dict) -> dict:
    clean = {}
    for g, c in out.items():
        c2 = {h: v for h, v in c.items() if v}
        if c2:
            clean[g] = c2
    return clean


def _mul_python(a: QTElement, b: QTElement) -> QTElement:
    lam = a.lam.tolist()
    m = a.rank
    out: dict[tuple[int, ...], dict[int, int]] = {}
    for g, cg in a._t.items():
        lg = [sum(g[r] * lam[r][c] for r in range(m)) for c in range(m)]
        for h, ch in b._t.items():
            shift = sum(lg[c] * h[c] for c in range(m))
            key = tuple(x + y for x, y in zip(g, h))
            slot = out.setdefault(key, {})
            for e1, v1 in cg.items():
                for e2, v2 in ch.items():
                    slot[e1 + e2 + shift] = slot.get(e1 + e2 + shift, 0) + v1 * v2
    return QTElement._raw(a.lam, _prune(out))


# ---------------------------------------------------------------------------
# constructors


def zero(lam) -> QTElement:
    return QTElement(lam)


def one(lam) -> QTElement:
    lam = lam if isinstance(lam, np.ndarray) and not lam.flags.writeable else _as_lam(lam)
    return QTElement._raw(lam, {(0,) * lam.shape[0]: {0: 1}})


def monomial(lam, g: Sequence[int], half: int = 0, coeff: int = 1) -> QTElement:
    """The basis element ``coeff * q^{half/2} X^g``."""
    return QTElement(lam, {tuple(g): {half: coeff}})


def generators(lam) -> list[QTElement]:
    m = np.asarray(lam).shape[0]
    lam = _as_lam(lam)
    return [monomial(lam, tuple(int(i == j) for j in range(m))) for i in range(m)]


def inverse_monomial(x: QTElement) -> QTElement:
    """Inverse of ``±q^{c/2} X^g``, namely ``±q^{-c/2} X^{-g}``."""
    if not x.is_monomial():
        raise NonMonomialInverse("only unit monomials are invertible")
    ((g, c),) = x._t.items()
    ((h, v),) = c.items()
    return QTElement._raw(x.lam, {tuple(-e for e in g): {-h: v}})


def normalized_monomial(a: Sequence[int], variables: Sequence[QTElement], frame_lam) -> QTElement:
    """``q^{-sum_{i<j} a_i a_j L_ij / 2} X_1^{a_1} ... X_m^{a_m}``.

    ``variables`` are the cluster variables of a seed expressed in some
    common torus and ``frame_lam`` is that seed's own skew form ``L``.
    Negative entries need the matching variable to be a unit monomial.
    """
    a = [int(x) for x in a]
    fl = np.asarray(frame_lam, dtype=np.int64)
    if len(a) != len(variables) or fl.shape[0] != len(a):
        raise ValueError("exponent, variables and frame must share a rank")
    correction = 0
    for i in range(len(a)):
        if a[i]:
            for j in range(i + 1, len(a)):
                correction -= a[i] * a[j] * int(fl[i, j])
    result = one(variables[0].lam)
    for i, e in enumerate(a):
        if e:
            result = result * (variables[i] ** e)
    return result.qshift(correction)


def from_terms(lam, items: Iterable[tuple[Sequence[int], int, int]]) -> QTElement:
    """Build an element from ``(exponent, half_q, coeff)`` triples."""
    out: dict[tuple[int, ...], dict[int, int]] = {}
    for g, h, c in items:
        slot = out.setdefault(tuple(int(x) for x in g), {})
        slot[int(h)] = slot.get(int(h), 0) + int(c)
    return QTElement(lam, out)


# ---------------------------------------------------------------------------
# division


def exact_divide(n: QTElement, d: QTElement) -> QTElement:
    """Left quotient: the unique ``r`` with ``r * d == n``.

    Leading-term elimination in lexicographic order.  Each candidate
    quotient exponent must lie in the box cut out by the coordinatewise
    extremes of ``n`` and ``d``; leaving it, or a coefficient that does not
    divide, raises ``DivisionFailure``.
    """
    n._check(d)
    if not d:
        raise DivisionFailure("division by zero")
    if not n:
        return zero(n.lam)
    m = n.rank
    lo = [min(g[i] for g in n._t) - min(g[i] for g in d._t) for i in range(m)]
    hi = [max(g[i] for g in n._t) - max(g[i] for g in d._t) for i in range(m)]
    h, cd = d.leading()
    lam = n.lam
    rem = n
    quot: dict[tuple[int, ...], dict[int, int]] = {}
    while rem:
        g, cr = rem.leading()
        e = tuple(x - y for x, y in zip(g, h))
        if any(e[i] < lo[i] or e[i] > hi[i] for i in range(m)):
            raise DivisionFailure("quotient leaves the Newton box")
        c = cr.shift(-pairing(lam, e, h)).divide_exact(cd)
        term = QTElement._raw(lam, {e: dict(c._c)})
        rem = rem - term * d
        quot[e] = dict(c._c)
    return QTElement._raw(lam, quot)


def specialize_q1(a: QTElement) -> dict[tuple[int, ...], int]:
    """Commutative Laurent polynomial obtained at ``q = 1``."""
    return a.at_q1()
