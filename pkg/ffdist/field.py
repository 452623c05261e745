#!/usr/bin/env python3
"""
Finite field arithmetic for F_q, q = p^l with p an odd prime.

Elements are handled by rank: a = c_0 + c_1 t + ... + c_{l-1} t^{l-1} in
Z_p[t]/(modulus) has rank c_0 + c_1 p + ... + c_{l-1} p^{l-1}. Rank 0 is
the additive identity and rank 1 the multiplicative identity.

Every FieldCtx operation accepts either a Python int or a numpy array of
ranks and answers in kind, so inner loops elsewhere stay vectorized.
"""

import cmath
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from ffdist import config

logger = logging.getLogger(__name__)

Rank = Union[int, np.ndarray]


def tolerance(n_terms: int) -> float:
    """Comparison tolerance for a sum of n_terms unit-modulus values."""
    return max(1e-6, n_terms * 2.0 ** -48)


# ============================================================================
# POLYNOMIALS OVER Z_p (coefficients low-to-high)
# ============================================================================

def _mulmod(a: Tuple[int, ...], b: Tuple[int, ...], modulus: Tuple[int, ...], p: int) -> Tuple[int, ...]:
    l = len(modulus) - 1
    prod = [0] * (2 * l - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p

    # modulus is monic, so each step clears the leading coefficient
    for k in range(2 * l - 2, l - 1, -1):
        c = prod[k]
        if c:
            for j in range(l + 1):
                prod[k - l + j] = (prod[k - l + j] - c * modulus[j]) % p
    return tuple(prod[:l])


def _powmod(a: Tuple[int, ...], n: int, modulus: Tuple[int, ...], p: int) -> Tuple[int, ...]:
    l = len(modulus) - 1
    result = (1,) + (0,) * (l - 1)
    base = a
    while n:
        if n & 1:
            result = _mulmod(result, base, modulus, p)
        base = _mulmod(base, base, modulus, p)
        n >>= 1
    return result


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over Z_p (coefficients low-to-high)."""
    if len(modulus) - 1 <= 1:
        return True
    return bool(gf_irreducible_p([int(c) for c in reversed(modulus)], p, ZZ))


def default_modulus(p: int, l: int) -> Tuple[int, ...]:
    """
    Lexicographically smallest monic irreducible of degree l over Z_p,
    comparing the low-degree coefficients first.
    """
    for low in product(range(p), repeat=l):
        candidate = tuple(low) + (1,)
        if is_irreducible(candidate, p):
            return candidate
    raise ValueError(f"no irreducible polynomial of degree {l} over Z_{p}")


# ============================================================================
# FIELD CONTEXT
# ============================================================================

@dataclass(frozen=True, eq=False, repr=False)
class FieldCtx:
    """
    Immutable description of F_q with every lookup table precomputed.

    Contexts compare and hash by identity; make_field caches them, so two
    calls with the same parameters return the same object.
    """

    p: int
    l: int
    q: int
    modulus: Tuple[int, ...]
    primitive: int
    place: np.ndarray
    digits: np.ndarray
    exp_table: np.ndarray
    log_table: np.ndarray
    neg_table: np.ndarray
    inv_table: np.ndarray
    sq_table: np.ndarray
    trace_table: np.ndarray
    psi_table: np.ndarray
    chi_table: np.ndarray
    add_table: Optional[np.ndarray] = field(default=None)

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q}, p={self.p}, l={self.l}, modulus={self.modulus})"

    # ------------------------------------------------------------------
    # helpers
    # ------------------------------------------------------------------

    @staticmethod
    def _ranks(x: Rank) -> np.ndarray:
        return np.asarray(x, dtype=np.int64)

    @staticmethod
    def _out(x) -> Rank:
        x = np.asarray(x)
        return int(x) if x.ndim == 0 else x

    def elements(self) -> np.ndarray:
        """All ranks 0..q-1."""
        return np.arange(self.q, dtype=np.int64)

    def nonzero(self) -> np.ndarray:
        return np.arange(1, self.q, dtype=np.int64)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------

    def add(self, a: Rank, b: Rank) -> Rank:
        a, b = self._ranks(a), self._ranks(b)
        if self.l == 1:
            return self._out((a + b) % self.p)
        if self.add_table is not None:
            return self._out(self.add_table[a, b])
        return self._out(((self.digits[a] + self.digits[b]) % self.p) @ self.place)

    def neg(self, a: Rank) -> Rank:
        return self._out(self.neg_table[self._ranks(a)])

    def sub(self, a: Rank, b: Rank) -> Rank:
        return self.add(a, self.neg(b))

    def mul(self, a: Rank, b: Rank) -> Rank:
        a, b = self._ranks(a), self._ranks(b)
        if self.l == 1:
            return self._out((a * b) % self.p)
        out = self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)]
        return self._out(np.where((a == 0) | (b == 0), 0, out))

    def inv(self, a: Rank) -> Rank:
        a = self._ranks(a)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._out(self.inv_table[a])

    def div(self, a: Rank, b: Rank) -> Rank:
        return self.mul(a, self.inv(b))

    def power(self, a: Rank, n: int) -> Rank:
        """a^n for any integer n (negative n inverts first)."""
        a = self._ranks(a)
        if n < 0:
            a = self._ranks(self.inv(a))
            n = -n
        if n == 0:
            return self._out(np.ones_like(a))
        e = n % (self.q - 1)
        out = self.exp_table[(self.log_table[a] * e) % (self.q - 1)]
        return self._out(np.where(a == 0, 0, out))

    def square(self, a: Rank) -> Rank:
        return self._out(self.sq_table[self._ranks(a)])

    def sqrt(self, a: int) -> Optional[int]:
        """Smallest-rank square root of a, or None for non-squares."""
        a = int(a)
        if a == 0:
            return 0
        if self.psi_table[a] != 1:
            return None
        root = int(self.exp_table[int(self.log_table[a]) // 2])
        return min(root, int(self.neg_table[root]))

    def from_int(self, n: Rank) -> Rank:
        """Image of the integer n in the prime subfield."""
        return self._out(self._ranks(n) % self.p)

    # ------------------------------------------------------------------
    # characters
    # ------------------------------------------------------------------

    def trace(self, a: Rank) -> Rank:
        return self._out(self.trace_table[self._ranks(a)])

    def add_char(self, a: Rank):
        """Canonical additive character exp(2 pi i Tr(a) / p)."""
        values = self.chi_table[self._ranks(a)]
        return complex(values) if np.ndim(values) == 0 else values

    def quad_char(self, a: Rank) -> Rank:
        """Quadratic character, extended by psi(0) = 0."""
        return self._out(self.psi_table[self._ranks(a)])

    @property
    def psi_minus_one(self) -> int:
        """psi(-1): +1 exactly when q = 1 (mod 4)."""
        return int(self.psi_table[self.neg_table[1]])

    # ------------------------------------------------------------------
    # enumeration
    # ------------------------------------------------------------------

    def element_at(self, rank: int) -> "FieldElement":
        if not 0 <= int(rank) < self.q:
            raise ValueError(f"rank {rank} outside [0, {self.q})")
        return FieldElement(self, int(rank))

    def index_of(self, a: "FieldElement") -> int:
        if a.ctx is not self:
            raise ValueError("element belongs to a different field")
        return a.rank

    def digits_of(self, rank: int) -> Tuple[int, ...]:
        """Coefficient vector (c_0, ..., c_{l-1}) of an element."""
        return tuple(int(c) for c in self.digits[int(rank)])


@dataclass(frozen=True)
class FieldElement:
    """Element of F_q as a rank; arithmetic is delegated to its FieldCtx."""

    ctx: FieldCtx
    rank: int

    def __post_init__(self):
        if not 0 <= self.rank < self.ctx.q:
            raise ValueError(f"rank {self.rank} outside [0, {self.ctx.q})")

    def _wrap(self, r: int) -> "FieldElement":
        return FieldElement(self.ctx, int(r))

    def _rank_of(self, other) -> int:
        if isinstance(other, FieldElement):
            return other.rank
        return self.ctx.from_int(int(other))

    def __add__(self, other):
        return self._wrap(self.ctx.add(self.rank, self._rank_of(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.ctx.sub(self.rank, self._rank_of(other)))

    def __rsub__(self, other):
        return self._wrap(self.ctx.sub(self._rank_of(other), self.rank))

    def __mul__(self, other):
        return self._wrap(self.ctx.mul(self.rank, self._rank_of(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._wrap(self.ctx.div(self.rank, self._rank_of(other)))

    def __neg__(self):
        return self._wrap(self.ctx.neg(self.rank))

    def __pow__(self, n: int):
        return self._wrap(self.ctx.power(self.rank, n))

    def __int__(self) -> int:
        return self.rank

    def __bool__(self) -> bool:
        return self.rank != 0

    def __repr__(self) -> str:
        return f"F{self.ctx.q}({self.rank})"

    def inverse(self) -> "FieldElement":
        return self._wrap(self.ctx.inv(self.rank))

    def trace(self) -> int:
        return self.ctx.trace(self.rank)

    def add_char(self) -> complex:
        return self.ctx.add_char(self.rank)

    def quad_char(self) -> int:
        return self.ctx.quad_char(self.rank)


# ============================================================================
# CONSTRUCTION
# ============================================================================

def _find_primitive(p: int, l: int, modulus: Tuple[int, ...], q: int, place: np.ndarray) -> Tuple[int, ...]:
    one = (1,) + (0,) * (l - 1)
    cofactors = [(q - 1) // r for r in factorint(q - 1)]
    for rank in range(2 if q > 2 else 1, q):
        g = tuple(int(c) for c in (rank // place) % p)
        if all(_powmod(g, e, modulus, p) != one for e in cofactors):
            return g
    raise ValueError(f"no primitive element found in F_{q}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _build_field(p: int, l: int, modulus: Tuple[int, ...]) -> FieldCtx:
    q = p ** l
    logger.debug(f"Building F_{q} (p={p}, l={l}, modulus={modulus})")

    place = p ** np.arange(l, dtype=np.int64)
    ranks = np.arange(q, dtype=np.int64)
    digits = (ranks[:, None] // place[None, :]) % p

    # log/antilog tables from a primitive element
    g = _find_primitive(p, l, modulus, q, place)
    exp_table = np.empty(q - 1, dtype=np.int64)
    current = (1,) + (0,) * (l - 1)
    for k in range(q - 1):
        exp_table[k] = int(np.dot(current, place))
        current = _mulmod(current, g, modulus, p)
    log_table = np.full(q, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(q - 1, dtype=np.int64)

    neg_table = ((-digits) % p) @ place
    inv_table = np.zeros(q, dtype=np.int64)
    inv_table[1:] = exp_table[(-log_table[1:]) % (q - 1)]

    sq_table = np.where(ranks == 0, 0, exp_table[(2 * log_table) % (q - 1)])

    # Tr(t^j) = sum_i (t^j)^{p^i}; the trace is Z_p-linear in the digits
    basis_traces = np.zeros(l, dtype=np.int64)
    for j in range(l):
        basis = tuple(1 if i == j else 0 for i in range(l))
        total = [0] * l
        for i in range(l):
            conj = _powmod(basis, p ** i, modulus, p)
            total = [(x + y) % p for x, y in zip(total, conj)]
        if any(total[1:]):
            raise ValueError(f"trace of t^{j} left the prime subfield; modulus {modulus} is invalid")
        basis_traces[j] = total[0]
    trace_table = (digits @ basis_traces) % p

    is_square = np.zeros(q, dtype=bool)
    is_square[sq_table[1:]] = True
    psi_table = np.where(ranks == 0, 0, np.where(is_square, 1, -1)).astype(np.int64)
    chi_table = np.exp(2j * np.pi * trace_table / p)

    add_table = None
    if l > 1 and q <= config.FIELD_TABLE_LIMIT:
        add_table = np.empty((q, q), dtype=np.int64)
        for a in range(q):
            add_table[a] = ((digits[a] + digits) % p) @ place
        add_table = _frozen(add_table)

    ctx = FieldCtx(
        p=p,
        l=l,
        q=q,
        modulus=modulus,
        primitive=int(np.dot(g, place)),
        place=_frozen(place),
        digits=_frozen(digits),
        exp_table=_frozen(exp_table),
        log_table=_frozen(log_table),
        neg_table=_frozen(neg_table),
        inv_table=_frozen(inv_table),
        sq_table=_frozen(sq_table),
        trace_table=_frozen(trace_table),
        psi_table=_frozen(psi_table),
        chi_table=_frozen(chi_table),
        add_table=add_table,
    )
    logger.debug(f"✅ {ctx} ready (primitive element rank {ctx.primitive})")
    return ctx


def make_field(p: int, l: int = 1, modulus: Optional[Sequence[int]] = None, force: bool = False) -> FieldCtx:
    """
    Build (or fetch from cache) the context for F_{p^l}.

    Args:
        p: Odd prime characteristic
        l: Extension degree
        modulus: Monic irreducible of degree l, coefficients low-to-high.
            Defaults to the lexicographically smallest one.
        force: Skip the field-size guard

    Returns:
        FieldCtx shared by every caller asking for the same field

    Raises:
        ValueError: Non-prime or even p, bad l, malformed or reducible modulus
        ResourceGuardError: q above FFDIST_MAX_Q without force
    """
    p, l = int(p), int(l)
    if p == 2:
        raise ValueError("characteristic 2 is not supported; p must be an odd prime")
    if p < 2 or not isprime(p):
        raise ValueError(f"p = {p} is not prime")
    if l < 1:
        raise ValueError(f"extension degree l = {l} must be positive")

    config.check_guard("q", p ** l, config.MAX_Q, force)

    if modulus is None:
        mod = default_modulus(p, l)
    else:
        mod = tuple(int(c) for c in modulus)
        if len(mod) != l + 1:
            raise ValueError(f"modulus {list(mod)} must have degree {l} ({l + 1} coefficients, low-to-high)")
        if mod[-1] != 1:
            raise ValueError(f"modulus {list(mod)} is not monic")
        if any(not 0 <= c < p for c in mod):
            raise ValueError(f"modulus coefficients must lie in [0, {p})")
        if not is_irreducible(mod, p):
            raise ValueError(f"modulus {list(mod)} is reducible over Z_{p}")

    return _build_field(p, l, mod)


def field_from_q(q: int, modulus: Optional[Sequence[int]] = None, force: bool = False) -> FieldCtx:
    """Factor q = p^l and build F_q."""
    q = int(q)
    if q < 3:
        raise ValueError(f"q = {q} is not an odd prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise ValueError(f"q = {q} is not a prime power")
    (p, l), = factors.items()
    return make_field(int(p), int(l), modulus, force=force)


def gauss_closed_form(ctx: FieldCtx) -> complex:
    """(-1)^{l-1} sqrt(q) for p = 1 (mod 4), (-1)^{l-1} i^l sqrt(q) otherwise."""
    sign = -1 if (ctx.l - 1) % 2 else 1
    root = cmath.sqrt(ctx.q)
    if ctx.p % 4 == 1:
        return sign * root
    return sign * (1, 1j, -1, -1j)[ctx.l % 4] * root
