"""Ordinals below epsilon_0 in Cantor normal form, and closed-form ranks of
well-orders and of Z-indexed sums.

An ordinal is a tuple of ``(exponent, coefficient)`` terms with strictly
decreasing exponents, each exponent again a :class:`CNFOrdinal`.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field

from .errors import InputError, ParseError


@functools.total_ordering
class CNFOrdinal:
    __slots__ = ("terms", "_key", "_hash")

    def __init__(self, terms=()):
        terms = tuple((e, int(c)) for e, c in terms)
        for i, (e, c) in enumerate(terms):
            if not isinstance(e, CNFOrdinal):
                raise TypeError("exponents must be CNFOrdinal")
            if c < 1:
                raise InputError("CNF coefficients must be positive")
            if i and not e < terms[i - 1][0]:
                raise InputError("CNF exponents must be strictly decreasing")
        self.terms = terms
        self._key = tuple((e._key, c) for e, c in terms)
        self._hash = hash(self._key)

    @classmethod
    def nat(cls, n: int) -> "CNFOrdinal":
        if n < 0:
            raise InputError("ordinals are non-negative")
        return cls(((ZERO, n),)) if n else ZERO

    @classmethod
    def omega_power(cls, e: "CNFOrdinal", c: int = 1) -> "CNFOrdinal":
        return cls(((e, c),))

    # -- comparison ---------------------------------------------------------

    @staticmethod
    def _cmp_keys(a, b) -> int:
        for (ea, ca), (eb, cb) in zip(a, b):
            c = CNFOrdinal._cmp_keys(ea, eb)
            if c:
                return c
            if ca != cb:
                return -1 if ca < cb else 1
        return (len(a) > len(b)) - (len(a) < len(b))

    def __eq__(self, other):
        if isinstance(other, int):
            other = CNFOrdinal.nat(other) if other >= 0 else None
        return isinstance(other, CNFOrdinal) and self._key == other._key

    def __lt__(self, other):
        if isinstance(other, int):
            other = CNFOrdinal.nat(other)
        return CNFOrdinal._cmp_keys(self._key, other._key) < 0

    def __hash__(self):
        return self._hash

    # -- shape ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def finite_value(self) -> int:
        if not self.is_finite():
            raise InputError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def finite_part(self) -> int:
        if self.terms and self.terms[-1][0].is_zero():
            return self.terms[-1][1]
        return 0

    @property
    def leading_exponent(self) -> "CNFOrdinal":
        if not self.terms:
            raise InputError("0 has no leading term")
        return self.terms[0][0]

    @property
    def leading_coefficient(self) -> int:
        if not self.terms:
            raise InputError("0 has no leading term")
        return self.terms[0][1]

    # -- arithmetic ---------------------------------------------------------------

    def __add__(self, other):
        return cnf_add(self, _coerce(other))

    def __radd__(self, other):
        return cnf_add(_coerce(other), self)

    def __mul__(self, other):
        return cnf_mul(self, _coerce(other))

    def __rmul__(self, other):
        return cnf_mul(_coerce(other), self)

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"CNFOrdinal({format_ordinal(self)!r})"


def _coerce(x) -> CNFOrdinal:
    if isinstance(x, CNFOrdinal):
        return x
    if isinstance(x, int):
        return CNFOrdinal.nat(x)
    raise TypeError(f"cannot use {x!r} as an ordinal")


ZERO = CNFOrdinal.__new__(CNFOrdinal)
ZERO.terms = ()
ZERO._key = ()
ZERO._hash = hash(())
ONE = CNFOrdinal(((ZERO, 1),))
OMEGA = CNFOrdinal(((ONE, 1),))


def cnf_cmp(a: CNFOrdinal, b: CNFOrdinal) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    return CNFOrdinal._cmp_keys(a._key, b._key)


def cnf_add(a: CNFOrdinal, b: CNFOrdinal) -> CNFOrdinal:
    """Ordinal sum; terms of ``a`` below the leading exponent of ``b`` are absorbed."""
    if b.is_zero():
        return a
    e = b.leading_exponent
    kept = [(x, c) for x, c in a.terms if x > e]
    same = [c for x, c in a.terms if x == e]
    head = (e, b.terms[0][1] + (same[0] if same else 0))
    return CNFOrdinal(kept + [head] + list(b.terms[1:]))


def cnf_mul_nat(a: CNFOrdinal, m: int) -> CNFOrdinal:
    """``a * m`` for a natural ``m``: only the leading coefficient scales."""
    if m < 0:
        raise InputError("multiplier must be a natural number")
    if m == 0 or a.is_zero():
        return ZERO
    (e, c), rest = a.terms[0], a.terms[1:]
    return CNFOrdinal(((e, c * m),) + rest)


def cnf_mul(a: CNFOrdinal, b: CNFOrdinal) -> CNFOrdinal:
    """General ordinal product ``a * b``."""
    if a.is_zero() or b.is_zero():
        return ZERO
    out = ZERO
    e1 = a.leading_exponent
    for f, d in b.terms:
        if f.is_zero():
            piece = cnf_mul_nat(a, d)
        else:
            piece = CNFOrdinal.omega_power(cnf_add(e1, f), d)
        out = cnf_add(out, piece)
    return out


def cnf_pow(a: CNFOrdinal, b: CNFOrdinal) -> CNFOrdinal:
    """``a ** b`` when ``a`` is omega or ``b`` is finite."""
    if a == OMEGA:
        return CNFOrdinal.omega_power(b)
    if not b.is_finite():
        if a.is_finite():
            raise InputError("powers of a finite base with infinite exponent are not supported")
        raise InputError("only omega may be raised to an infinite power")
    out = ONE
    for _ in range(b.finite_value()):
        out = cnf_mul(out, a)
    return out


def left_subtract(a: CNFOrdinal, b: CNFOrdinal) -> CNFOrdinal:
    """The unique ``d`` with ``a + d = b`` (needs ``a <= b``)."""
    if b < a:
        raise InputError(f"cannot subtract {a} from the smaller {b}")
    for i, (tb, cb) in enumerate(b.terms):
        if i >= len(a.terms):
            return CNFOrdinal(b.terms[i:])
        ta, ca = a.terms[i]
        if ta == tb and ca == cb:
            continue
        if ta == tb:
            return CNFOrdinal(((tb, cb - ca),) + b.terms[i + 1:])
        return CNFOrdinal(b.terms[i:])
    return ZERO


def successor(a: CNFOrdinal) -> CNFOrdinal:
    return cnf_add(a, ONE)


def one_plus(a: CNFOrdinal) -> CNFOrdinal:
    """``1 + a``: equals ``a + 1`` for finite ``a`` and ``a`` otherwise."""
    return cnf_add(ONE, a)


def omega_times(a: CNFOrdinal) -> CNFOrdinal:
    return cnf_mul(OMEGA, a)


def floor_log2(n: int) -> int:
    if n < 1:
        raise InputError("log2 of a non-positive number")
    return n.bit_length() - 1


# -- parsing and formatting -------------------------------------------------------


class _Parser:
    """expr := term ('+' term)*; term := factor ('*' factor)*;
    factor := atom ('^' factor)?; atom := 'w' | digits | '(' expr ')'."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> CNFOrdinal:
        if not self.peek():
            raise ParseError("empty ordinal expression", 0)
        value = self.expr()
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return value

    def expr(self):
        value = self.term()
        while self.peek() == "+":
            self.pos += 1
            value = cnf_add(value, self.term())
        return value

    def term(self):
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = cnf_mul(value, self.factor())
        return value

    def factor(self):
        start = self.pos
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            exp = self.factor()
            try:
                return cnf_pow(base, exp)
            except InputError as exc:
                raise ParseError(str(exc), start) from None
        return base

    def atom(self):
        ch = self.peek()
        if ch in ("w", "ω"):
            self.pos += 1
            return OMEGA
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return CNFOrdinal.nat(int(self.text[start:self.pos]))
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return value
        if not ch:
            raise ParseError("unexpected end of expression", self.pos)
        raise ParseError(f"unexpected {ch!r}", self.pos)


def parse_ordinal(text: str) -> CNFOrdinal:
    """Parse expressions such as ``w^2*3+w*5`` or ``w^(w+1)``."""
    return _Parser(text).parse()


def _is_atomic(e: CNFOrdinal) -> bool:
    return e.is_finite() or e == OMEGA


def format_ordinal(a: CNFOrdinal) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        if e == ONE:
            head = "w"
        elif _is_atomic(e):
            head = f"w^{format_ordinal(e)}"
        else:
            head = f"w^({format_ordinal(e)})"
        parts.append(head if c == 1 else f"{head}*{c}")
    return "+".join(parts)


def as_ordinal(x) -> CNFOrdinal:
    if isinstance(x, str):
        return parse_ordinal(x)
    return _coerce(x)


# -- rank values ---------------------------------------------------------------------


@functools.total_ordering
@dataclass(frozen=True)
class RankValue:
    """A rank: an ordinal (naturals included) or infinity, above every ordinal."""

    ordinal: CNFOrdinal | None = None

    @classmethod
    def finite(cls, n: int) -> "RankValue":
        return cls(CNFOrdinal.nat(n))

    @property
    def is_infinity(self) -> bool:
        return self.ordinal is None

    def _norm(self, other):
        if isinstance(other, RankValue):
            return other
        return RankValue(_coerce(other))

    def __eq__(self, other):
        try:
            other = self._norm(other)
        except TypeError:
            return NotImplemented
        return self.ordinal == other.ordinal

    def __lt__(self, other):
        other = self._norm(other)
        if self.is_infinity:
            return False
        if other.is_infinity:
            return True
        return self.ordinal < other.ordinal

    def __hash__(self):
        return hash(self.ordinal)

    def __str__(self):
        return "inf" if self.is_infinity else format_ordinal(self.ordinal)


INFINITY = RankValue(None)


# -- closed-form ranks ------------------------------------------------------------------


def rank_of_ordinal(alpha: CNFOrdinal) -> CNFOrdinal:
    """Rank of the well-order ``alpha``.

    ``floor(log2(alpha+1))`` for finite ``alpha``; for ``alpha`` with leading
    term ``w^b * c`` it is ``w*b + floor(log2 c)``.
    """
    alpha = as_ordinal(alpha)
    if alpha.is_finite():
        return CNFOrdinal.nat(floor_log2(alpha.finite_value() + 1))
    return cnf_add(omega_times(alpha.leading_exponent), CNFOrdinal.nat(floor_log2(alpha.leading_coefficient)))


def rank_of_reversed(alpha: CNFOrdinal) -> CNFOrdinal:
    """Rank of the reverse of the well-order ``alpha``: reversal does not change rank."""
    return rank_of_ordinal(alpha)


def rank_of_Z_times(alpha: CNFOrdinal) -> CNFOrdinal:
    """Rank of ``alpha`` consecutive copies of the integers.

    ``w + floor(log2(m+1))`` for finite ``m``; otherwise
    ``w*(1+b) + floor(log2 c)`` for leading term ``w^b * c``.
    """
    alpha = as_ordinal(alpha)
    if alpha.is_zero():
        raise InputError("Z*0 is empty; its rank is not defined here")
    if alpha.is_finite():
        return cnf_add(OMEGA, CNFOrdinal.nat(floor_log2(alpha.finite_value() + 1)))
    return cnf_add(
        omega_times(one_plus(alpha.leading_exponent)),
        CNFOrdinal.nat(floor_log2(alpha.leading_coefficient)),
    )


def hausdorff_vd(alpha: CNFOrdinal) -> CNFOrdinal:
    """Condensation rank of an infinite ordinal: its leading exponent.

    Asserts ``rank = w * VD + floor(log2 c1)``.
    """
    alpha = as_ordinal(alpha)
    if alpha.is_finite():
        raise InputError("condensation rank is only used here for infinite ordinals")
    vd = alpha.leading_exponent
    identity = cnf_add(omega_times(vd), CNFOrdinal.nat(floor_log2(alpha.leading_coefficient)))
    if identity != rank_of_ordinal(alpha):
        raise AssertionError(f"rank identity fails for {alpha}")
    return vd


def hausdorff_vd_Z(alpha: CNFOrdinal) -> CNFOrdinal:
    """Condensation rank of ``Z * alpha``: ``1 + b`` for leading exponent ``b``.

    Asserts ``rank(Z*alpha) = w * VD + floor(log2 c)`` with ``c = m+1`` for
    finite ``alpha = m`` and ``c = c1`` otherwise.
    """
    alpha = as_ordinal(alpha)
    if alpha.is_zero():
        raise InputError("Z*0 is empty")
    if alpha.is_finite():
        vd, c = ONE, alpha.finite_value() + 1
    else:
        vd, c = one_plus(alpha.leading_exponent), alpha.leading_coefficient
    if cnf_add(omega_times(vd), CNFOrdinal.nat(floor_log2(c))) != rank_of_Z_times(alpha):
        raise AssertionError(f"rank identity fails for Z*{alpha}")
    return vd


def h_recurrence(m: int) -> CNFOrdinal:
    """Rank of ``w + Z*m + w*`` through its cut recursion.

    ``h(0) = w``; ``h(m)`` is the successor of the maximum over cuts in the
    ``j``-th copy of ``min(h(j), h(m-j-1))``.  Expected: ``w + floor(log2(m+1))``.
    """
    if m < 0:
        raise InputError("m must be >= 0")
    h = [OMEGA]
    for k in range(1, m + 1):
        best = max(min(h[j], h[k - j - 1]) for j in range(k))
        h.append(successor(best))
    return h[m]


# -- certificates for the finite layer -------------------------------------------------


def _cut_candidates(delta: CNFOrdinal):
    """Block-boundary cuts ``prefix + w^b_i * j`` for ``0 <= j < c_i``."""
    prefix = ZERO
    for e, c in delta.terms:
        block = CNFOrdinal.omega_power(e)
        for j in range(c):
            yield cnf_add(prefix, cnf_mul_nat(block, j)) if j else prefix
        prefix = cnf_add(prefix, CNFOrdinal.omega_power(e, c))


def tail_after(delta: CNFOrdinal, c: CNFOrdinal) -> CNFOrdinal:
    """Order type of the points of ``delta`` strictly above ``c``."""
    return left_subtract(successor(c), delta)


@dataclass
class SuccessorCertificate:
    alpha: CNFOrdinal
    rank: CNFOrdinal
    limit_part: CNFOrdinal
    steps: int
    cuts: list[dict] = field(default_factory=list)
    pigeonhole: dict = field(default_factory=dict)
    passed: bool = True
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "rank": str(self.rank),
            "limit_part": str(self.limit_part),
            "steps": self.steps,
            "cuts": self.cuts,
            "pigeonhole": self.pigeonhole,
            "passed": self.passed,
            "notes": self.notes,
        }


def certify_successor_steps(alpha: CNFOrdinal) -> SuccessorCertificate:
    """Certify the finite ``+k`` above the limit part of the rank of ``alpha``.

    Writing the closed form as ``g + k`` with ``g = w*b1``, a piece of order
    type ``d`` is shown to have rank ``>= g + level`` by a cut whose left part
    and tail both reach ``g + level - 1``, recursing down to ``level = 0``,
    where ``rank >= g`` is taken from the closed form.  Cuts are reported in
    the coordinates of ``alpha``.  The pigeonhole upper bound is checked as
    arithmetic: ``2^n > c1`` forces the closed form below ``g + n``.
    """
    alpha = as_ordinal(alpha)
    if alpha.is_finite():
        raise InputError("successor certification needs an infinite ordinal")
    rank = rank_of_ordinal(alpha)
    gamma = omega_times(alpha.leading_exponent)
    k = floor_log2(alpha.leading_coefficient)
    cert = SuccessorCertificate(alpha, rank, gamma, k)
    cert.notes.append(f"rank >= {gamma} for each leaf piece is taken from the closed form")

    def reaches(delta: CNFOrdinal, level: int) -> bool:
        return rank_of_ordinal(delta) >= cnf_add(gamma, CNFOrdinal.nat(level))

    def certify(delta: CNFOrdinal, offset: CNFOrdinal, level: int) -> bool:
        if level == 0:
            return reaches(delta, 0)
        for c in _cut_candidates(delta):
            left, right = c, tail_after(delta, c)
            if not (reaches(left, level - 1) and reaches(right, level - 1)):
                continue
            entry = {
                "level": level,
                "piece": str(delta),
                "piece_offset": str(offset),
                "cut": str(cnf_add(offset, c)),
                "left": str(left),
                "right": str(right),
            }
            mark = len(cert.cuts)
            cert.cuts.append(entry)
            if certify(left, offset, level - 1) and certify(right, cnf_add(offset, successor(c)), level - 1):
                return True
            del cert.cuts[mark:]
        return False

    if cnf_add(gamma, CNFOrdinal.nat(k)) != rank or not certify(alpha, ZERO, k):
        cert.passed = False
        cert.notes.append("no cut tree found")
    n = k + 1
    bound = cnf_add(gamma, CNFOrdinal.nat(n))
    ok = 2 ** n > alpha.leading_coefficient and rank < bound
    cert.pigeonhole = {"n": n, "copies": alpha.leading_coefficient, "bound": str(bound), "holds": ok}
    cert.passed = cert.passed and ok
    return cert


def concatenation_bound(ranks) -> CNFOrdinal:
    """Upper bound for the rank of a finite sum from the ranks of its summands."""
    ranks = [as_ordinal(r) for r in ranks]
    if not ranks:
        return ZERO
    bound = ranks[0]
    for r in ranks[1:]:
        bound = successor(max(bound, r))
    return bound


def finite_concatenation_check(ranks, gamma) -> bool:
    """A finite sum of orders of rank below the limit ``gamma`` stays below it."""
    gamma = as_ordinal(gamma)
    if not gamma.is_limit():
        raise InputError(f"{gamma} is not a limit ordinal")
    ranks = [as_ordinal(r) for r in ranks]
    for r in ranks:
        if not r < gamma:
            raise InputError(f"summand rank {r} is not below {gamma}")
    return concatenation_bound(ranks) < gamma


# -- rank property -------------------------------------------------------------------------


def split_rank(gamma: CNFOrdinal) -> tuple[CNFOrdinal, int]:
    """Write ``gamma = w*d + k``; returns ``(d, k)``."""
    gamma = as_ordinal(gamma)
    k = gamma.finite_part()
    limit = CNFOrdinal(gamma.terms[:-1]) if k else gamma
    # w^e = w * w^(-1+e) for e >= 1
    d = CNFOrdinal(tuple((left_subtract(ONE, e), c) for e, c in limit.terms))
    if omega_times(d) != limit:
        raise AssertionError(f"could not divide {limit} by w")
    return d, k


def rank_property_witness(gamma: CNFOrdinal) -> CNFOrdinal:
    """A well-order of rank exactly ``gamma``.

    Finite ``k``: the chain with ``2^k - 1`` points.  Otherwise
    ``gamma = w*d + k`` with ``d >= 1`` and the witness is ``w^d * 2^k``.
    """
    gamma = as_ordinal(gamma)
    d, k = split_rank(gamma)
    if d.is_zero():
        return CNFOrdinal.nat(2 ** k - 1)
    return CNFOrdinal.omega_power(d, 2 ** k)


# -- random ordinals for property suites -------------------------------------------------


def random_ordinal(rng: random.Random, max_exp: int = 4, max_terms: int = 4, max_coeff: int = 64) -> CNFOrdinal:
    """Random ordinal below ``w^(max_exp+1)`` with finite exponents."""
    k = rng.randint(0, max_terms)
    exps = sorted(rng.sample(range(max_exp + 1), min(k, max_exp + 1)), reverse=True)
    return CNFOrdinal(tuple((CNFOrdinal.nat(e), rng.randint(1, max_coeff)) for e in exps))

