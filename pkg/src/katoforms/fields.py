"""Exact arithmetic in F_p(x_1, ..., x_m).

Elements are reduced fractions of sparse multivariate polynomials over a
prime field.  Everything downstream (differential forms, certificates,
the bounded solvers) reduces to the operations here, most importantly the
Frobenius decomposition f = sum_j g_j^p x^j over exponent vectors
j in {0, ..., p-1}^m, which is unique because the variables form a p-basis
of the field over its subfield of p-th powers.

Canonical conventions: graded-lexicographic term order, monic denominators,
zero represented as 0/1.  Values are immutable after construction, so every
operation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

from .errors import FieldMismatch, ZeroDenominator
from .kernels import poly_add, poly_mul


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p; all scalar arithmetic is mod p."""

    p: int

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True)
class PBasis:
    """Ordered variable list; the variables are p-independent by construction."""

    vars: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")

    def index(self, name: str) -> int:
        return self.vars.index(name)

    def __len__(self) -> int:
        return len(self.vars)


@dataclass(frozen=True)
class FunctionField:
    """The rational function field F_p(x_1, ..., x_m) with its fixed p-basis."""

    prime: PrimeField
    basis: PBasis

    @staticmethod
    def make(p: int, names: Iterable[str]) -> "FunctionField":
        return FunctionField(PrimeField(p), PBasis(tuple(names)))

    @property
    def p(self) -> int:
        return self.prime.p

    @property
    def vars(self) -> tuple[str, ...]:
        return self.basis.vars

    @property
    def nvars(self) -> int:
        return len(self.basis.vars)

    def zero_poly(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def const_poly(self, c: int) -> "MultiPoly":
        c %= self.p
        if c == 0:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    def var_poly(self, i: int) -> "MultiPoly":
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): 1})

    def monomial(self, exps: tuple[int, ...], c: int = 1) -> "MultiPoly":
        c %= self.p
        if c == 0:
            return MultiPoly(self, {})
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        return MultiPoly(self, {tuple(exps): c})

    def zero(self) -> "RatFunc":
        return RatFunc(self, self.zero_poly(), self.const_poly(1))

    def one(self) -> "RatFunc":
        return RatFunc(self, self.const_poly(1), self.const_poly(1))

    def const(self, c: int) -> "RatFunc":
        return RatFunc(self, self.const_poly(c), self.const_poly(1))

    def var(self, i: int) -> "RatFunc":
        return RatFunc(self, self.var_poly(i), self.const_poly(1))

    def var_named(self, name: str) -> "RatFunc":
        return self.var(self.basis.index(name))

    def __repr__(self) -> str:
        return f"F{self.p}({','.join(self.vars)})"


def _grlex_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


class MultiPoly:
    """Sparse polynomial in F_p[x_1, ..., x_m]; no zero coefficients stored."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: FunctionField, terms: dict):
        self.field = field
        self.terms = terms
        self._hash: Optional[int] = None

    # -- basic structure -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(all(e == 0 for e in exp) for exp in self.terms)

    def const_value(self) -> int:
        if self.is_zero():
            return 0
        if not self.is_const():
            raise ValueError("not a constant")
        return next(iter(self.terms.values()))

    def leading(self) -> tuple[tuple[int, ...], int]:
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def degree_in(self, i: int) -> int:
        if self.is_zero():
            return -1
        return max(exp[i] for exp in self.terms)

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        return max(sum(exp) for exp in self.terms)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        return MultiPoly(self.field, poly_add(self.terms, other.terms, self.field.p))

    def __neg__(self) -> "MultiPoly":
        p = self.field.p
        return MultiPoly(self.field, {e: (-c) % p for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        return MultiPoly(self.field, poly_mul(self.terms, other.terms, self.field.p))

    def scale(self, c: int) -> "MultiPoly":
        c %= self.field.p
        if c == 0:
            return self.field.zero_poly()
        if c == 1:
            return self
        p = self.field.p
        return MultiPoly(self.field, {e: (c * k) % p for e, k in self.terms.items()})

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = self.field.const_poly(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def monic(self) -> "MultiPoly":
        if self.is_zero():
            return self
        _, lc = self.leading()
        return self.scale(self.field.prime.inv(lc))

    def partial(self, i: int) -> "MultiPoly":
        p = self.field.p
        out: dict = {}
        for exp, c in self.terms.items():
            k = exp[i] % p
            if k == 0:
                continue
            e = list(exp)
            e[i] -= 1
            te = tuple(e)
            s = (out.get(te, 0) + c * k) % p
            if s:
                out[te] = s
            else:
                out.pop(te, None)
        return MultiPoly(self.field, out)

    def frobenius_power(self) -> "MultiPoly":
        """Raise to the p-th power (exponents scale, coefficients fixed)."""
        p = self.field.p
        return MultiPoly(
            self.field, {tuple(e * p for e in exp): c for exp, c in self.terms.items()}
        )

    def substitute(self, images: Mapping[int, "RatFunc"], target: FunctionField) -> "RatFunc":
        """Evaluate under x_i -> images[i]; every variable must be mapped."""
        out = target.zero()
        for exp, c in self.terms.items():
            term = target.const(c)
            for i, e in enumerate(exp):
                if e:
                    term = term * (images[i] ** e)
            out = out + term
        return out

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exp]
            factors = []
            if c != 1 or all(e == 0 for e in exp):
                factors.append(str(c))
            for name, e in zip(self.field.vars, exp):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)


# -- division and gcd ----------------------------------------------------


def poly_exact_div(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Quotient a/b when b divides a; raises ValueError otherwise."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    field = a.field
    p = field.p
    if b.is_const():
        return a.scale(field.prime.inv(b.const_value()))
    lead_b, lc_b = b.leading()
    inv_lcb = field.prime.inv(lc_b)
    quo: dict = {}
    rem = a
    while not rem.is_zero():
        lead_r, lc_r = rem.leading()
        q_exp = tuple(er - eb for er, eb in zip(lead_r, lead_b))
        if any(e < 0 for e in q_exp):
            raise ValueError("inexact polynomial division")
        q_c = (lc_r * inv_lcb) % p
        quo[q_exp] = q_c
        rem = rem - MultiPoly(field, {q_exp: q_c}) * b
    return MultiPoly(field, quo)


def _main_var(a: MultiPoly, b: MultiPoly) -> Optional[int]:
    for i in reversed(range(a.field.nvars)):
        if a.degree_in(i) > 0 or b.degree_in(i) > 0:
            return i
    return None


def _coeffs_in(a: MultiPoly, i: int) -> dict[int, MultiPoly]:
    """View of a as a univariate polynomial in x_i with MultiPoly coefficients."""
    field = a.field
    out: dict[int, dict] = {}
    for exp, c in a.terms.items():
        d = exp[i]
        e = list(exp)
        e[i] = 0
        out.setdefault(d, {})[tuple(e)] = c
    return {d: MultiPoly(field, t) for d, t in out.items()}


def _from_coeffs(field: FunctionField, i: int, coeffs: dict[int, MultiPoly]) -> MultiPoly:
    terms: dict = {}
    for d, poly in coeffs.items():
        for exp, c in poly.terms.items():
            e = list(exp)
            e[i] = d
            terms[tuple(e)] = c
    return MultiPoly(field, terms)


def _content(a: MultiPoly, i: int) -> MultiPoly:
    """GCD of the x_i-coefficients of a (a polynomial free of x_i)."""
    g = a.field.zero_poly()
    for coeff in _coeffs_in(a, i).values():
        g = poly_gcd(g, coeff)
        if g.is_const() and not g.is_zero():
            break
    return g


def _prem(a: MultiPoly, b: MultiPoly, i: int) -> MultiPoly:
    """Pseudo-remainder of a by b in the variable x_i."""
    field = a.field
    cb = _coeffs_in(b, i)
    db = max(cb)
    lc_b = cb[db]
    mono = [0] * field.nvars
    rem = a
    while not rem.is_zero():
        cr = _coeffs_in(rem, i)
        dr = max(cr)
        if dr < db:
            break
        mono[i] = dr - db
        shift = MultiPoly(field, {tuple(mono): 1})
        rem = rem * lc_b - b * shift * cr[dr]
    return rem


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic GCD via content/primitive-part recursion with a primitive PRS.

    Correctness over speed: inputs here stay desk-scale.
    """
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    field = a.field
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return field.const_poly(1)
    i = _main_var(a, b)
    if i is None:
        return field.const_poly(1)
    if a.degree_in(i) == 0 or b.degree_in(i) == 0:
        # one operand is free of the main variable: gcd divides its content
        free, other = (a, b) if a.degree_in(i) == 0 else (b, a)
        return poly_gcd(free, _content(other, i)).monic()
    cont_a = _content(a, i)
    cont_b = _content(b, i)
    cont_g = poly_gcd(cont_a, cont_b)
    pa = poly_exact_div(a, cont_a)
    pb = poly_exact_div(b, cont_b)
    if pa.degree_in(i) < pb.degree_in(i):
        pa, pb = pb, pa
    while True:
        r = _prem(pa, pb, i)
        if r.is_zero():
            g = pb
            break
        if r.degree_in(i) == 0:
            g = field.const_poly(1)
            break
        pa, pb = pb, poly_exact_div(r, _content(r, i))
    if not g.is_const():
        g = poly_exact_div(g, _content(g, i))
    return (cont_g * g).monic()


# -- rational functions ----------------------------------------------------


class RatFunc:
    """Reduced fraction num/den with monic denominator; zero is 0/1."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: FunctionField, num: MultiPoly, den: MultiPoly):
        self.field = field
        self.num = num
        self.den = den
        self._hash: Optional[int] = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.field.const_poly(1) and self.den == self.field.const_poly(1)

    def is_poly(self) -> bool:
        return self.den.is_const()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RatFunc)
            and self.field == other.field
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def _check(self, other: "RatFunc") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "RatFunc") -> "RatFunc":
        self._check(other)
        return ratfunc_normalize(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(self.field, -self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        self._check(other)
        return ratfunc_normalize(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        self._check(other)
        if other.is_zero():
            raise ZeroDenominator("division by zero")
        return ratfunc_normalize(self.num * other.den, self.den * other.num)

    def inv(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDenominator("inverse of zero")
        return ratfunc_normalize(self.den, self.num)

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return self.inv() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: int) -> "RatFunc":
        return ratfunc_normalize(self.num.scale(c), self.den)

    def frobenius_power(self) -> "RatFunc":
        """p-th power; exact because coefficients live in F_p."""
        return RatFunc(self.field, self.num.frobenius_power(), self.den.frobenius_power())

    def substitute(self, images: Mapping[int, "RatFunc"], target: FunctionField) -> "RatFunc":
        num = self.num.substitute(images, target)
        den = self.den.substitute(images, target)
        if den.is_zero():
            raise ZeroDenominator("substitution sends denominator to zero")
        return num / den

    def __repr__(self) -> str:
        if self.den.is_const() and self.den.const_value() == 1:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def ratfunc_normalize(num: MultiPoly, den: MultiPoly) -> RatFunc:
    """Canonical reduced form: gcd removed, denominator monic, zero = 0/1."""
    if num.field != den.field:
        raise FieldMismatch(f"{num.field} vs {den.field}")
    field = num.field
    if den.is_zero():
        raise ZeroDenominator("zero denominator")
    if num.is_zero():
        return RatFunc(field, field.zero_poly(), field.const_poly(1))
    g = poly_gcd(num, den)
    if not (g.is_const() and g.const_value() == 1):
        num = poly_exact_div(num, g)
        den = poly_exact_div(den, g)
    _, lc = den.leading()
    if lc != 1:
        inv = field.prime.inv(lc)
        num = num.scale(inv)
        den = den.scale(inv)
    return RatFunc(field, num, den)


# -- derivations and Frobenius structure ----------------------------------


def partial(f: RatFunc, i: int) -> RatFunc:
    """Formal partial derivative d/dx_i via the quotient rule."""
    if not 0 <= i < f.field.nvars:
        raise IndexError(f"variable index {i} out of range")
    num = f.num.partial(i) * f.den - f.num * f.den.partial(i)
    return ratfunc_normalize(num, f.den * f.den)


def frobenius_decompose(f: RatFunc) -> dict[tuple[int, ...], RatFunc]:
    """Unique expansion f = sum_j g_j^p x^j over j in {0..p-1}^m; zeros omitted.

    Denominators are cleared by writing f = (num * den^(p-1)) / den^p, after
    which the polynomial case applies monomial by monomial (coefficients in
    F_p are their own p-th roots).
    """
    field = f.field
    p = field.p
    if f.is_zero():
        return {}
    weighted = f.num * (f.den ** (p - 1))
    buckets: dict[tuple[int, ...], dict] = {}
    for exp, c in weighted.terms.items():
        j = tuple(e % p for e in exp)
        root = tuple(e // p for e in exp)
        buckets.setdefault(j, {})[root] = c
    out: dict[tuple[int, ...], RatFunc] = {}
    for j, terms in buckets.items():
        g = ratfunc_normalize(MultiPoly(field, terms), f.den)
        if not g.is_zero():
            out[j] = g
    return out


def frobenius_compose(field: FunctionField, parts: Mapping[tuple[int, ...], RatFunc]) -> RatFunc:
    """Inverse of frobenius_decompose: sum_j g_j^p x^j."""
    out = field.zero()
    for j, g in parts.items():
        out = out + g.frobenius_power() * RatFunc(
            field, field.monomial(j), field.const_poly(1)
        )
    return out


def pth_root(f: RatFunc) -> Optional[RatFunc]:
    """g with g^p = f, or None when f is not a p-th power."""
    parts = frobenius_decompose(f)
    zero_j = (0,) * f.field.nvars
    if any(j != zero_j for j in parts):
        return None
    if not parts:
        return f.field.zero()
    return parts[zero_j]


def subfield_membership(f: RatFunc, names: Iterable[str]) -> bool:
    """Membership in F^p(x_S): the Frobenius support must stay inside S."""
    field = f.field
    allowed = set()
    for name in names:
        allowed.add(field.basis.index(name))
    for j in frobenius_decompose(f):
        for i, e in enumerate(j):
            if e and i not in allowed:
                return False
    return True


# -- randomized element generation (test support) --------------------------


def random_poly(field: FunctionField, rng, max_degree: int, terms: int) -> MultiPoly:
    """Deterministic-for-seed sparse polynomial with per-variable degrees bounded."""
    out: dict = {}
    for _ in range(terms):
        exp = tuple(rng.randint(0, max_degree) for _ in range(field.nvars))
        c = rng.randint(1, field.p - 1)
        s = (out.get(exp, 0) + c) % field.p
        if s:
            out[exp] = s
        else:
            out.pop(exp, None)
    return MultiPoly(field, out)


def random_ratfunc(
    field: FunctionField,
    rng,
    max_degree: int = 2,
    terms: int = 3,
    den_pool: Optional[list[MultiPoly]] = None,
    nonzero: bool = False,
) -> RatFunc:
    """Random reduced fraction; denominator drawn from den_pool (default 1)."""
    while True:
        num = random_poly(field, rng, max_degree, terms)
        den = rng.choice(den_pool) if den_pool else field.const_poly(1)
        f = ratfunc_normalize(num, den)
        if not (nonzero and f.is_zero()):
            return f


def all_monomials(field: FunctionField, max_total_degree: int) -> Iterator[MultiPoly]:
    """All monomials of total degree <= bound, in graded-lex order."""

    def rec(prefix: list[int], remaining: int, budget: int):
        if remaining == 0:
            yield tuple(prefix)
            return
        for e in range(budget + 1):
            yield from rec(prefix + [e], remaining - 1, budget - e)

    exps = sorted(rec([], field.nvars, max_total_degree), key=_grlex_key)
    for exp in exps:
        yield field.monomial(exp)
