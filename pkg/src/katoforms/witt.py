"""Quadratic and bilinear form calculus in characteristic 2.

Quadratic forms are stored as upper-triangular coefficient matrices with
q(v) = v^T M v; the polar form M + M^T is alternating and nonsingularity
means its determinant is nonzero.  Witt-class equality is never decided:
hyperbolicity and metabolicity are always *certified* — by an explicit
chain of isometry matrices ending in a Lagrangian basis, or by an isotropic
vector in dimension two.

The restriction-kernel generators mirror the differential-form ones: for
extension data (b_1, m_1), ..., (b_r, m_r) the kernel of the quadratic Witt
group restriction is generated (as a module over the bilinear Witt ring) by
the two-fold Pfister forms << s, s b_j ]] and << s, s^(2^t) b^k(t) ]], with
the same (t, k) pattern constraints as the form-class generators, and the
bilinear kernel by the diagonal forms <1, x> for x a square in the extended
field, detected by Frobenius support.

``kato_e`` and ``kato_f`` are the symbol-level maps from Pfister symbols to
logarithmic differential forms; they are transported maps only, with no
well-definedness check across isometric symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .certificates import monomial
from .errors import (
    CertificateFailed,
    FieldMismatch,
    UnsupportedExtension,
)
from .extensions import ExtensionSpec
from .fields import FunctionField, RatFunc, pth_root, subfield_membership
from .forms import DiffForm, dlog, wedge
from .generators import power_patterns
from .oracle import SearchBounds, artin_schreier_search

Matrix = list  # list of list of RatFunc


class Singular(CertificateFailed):
    """Quadratic form with singular polar form where nonsingularity is needed."""


# -- matrix helpers -----------------------------------------------------------


def _mat_zero(field: FunctionField, n: int, m: int) -> Matrix:
    return [[field.zero() for _ in range(m)] for _ in range(n)]


def _mat_mul(a: Matrix, b: Matrix, field: FunctionField) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = _mat_zero(field, n, m)
    for i in range(n):
        for l in range(k):
            if a[i][l].is_zero():
                continue
            for j in range(m):
                if not b[l][j].is_zero():
                    out[i][j] = out[i][j] + a[i][l] * b[l][j]
    return out


def _mat_transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def _mat_det(a: Matrix, field: FunctionField) -> RatFunc:
    n = len(a)
    m = [row[:] for row in a]
    det = field.one()
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            return field.zero()
        if piv != col:
            m[piv], m[col] = m[col], m[piv]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inv()
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            f = m[r][col] * inv
            for c in range(col, n):
                m[r][c] = m[r][c] - f * m[col][c]
    return det


def _mat_vec(a: Matrix, v: Sequence[RatFunc], field: FunctionField) -> list[RatFunc]:
    return [
        sum((a[i][j] * v[j] for j in range(len(v)) if not v[j].is_zero()),
            field.zero())
        for i in range(len(a))
    ]


def _vec_rank(vectors: Sequence[Sequence[RatFunc]], field: FunctionField) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if not rows[r][col].is_zero()), None)
        if piv is None:
            continue
        rows[piv], rows[rank] = rows[rank], rows[piv]
        inv = rows[rank][col].inv()
        rows[rank] = [c * inv for c in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not rows[r][col].is_zero():
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


# -- forms -------------------------------------------------------------------


class QuadForm:
    """Quadratic form v -> v^T M v, stored with M upper-triangular."""

    __slots__ = ("field", "dim", "matrix")

    def __init__(self, field: FunctionField, dim: int, matrix: Matrix):
        if len(matrix) != dim or any(len(row) != dim for row in matrix):
            raise ValueError("matrix shape mismatch")
        folded = _mat_zero(field, dim, dim)
        for i in range(dim):
            for j in range(dim):
                if i <= j:
                    folded[i][j] = folded[i][j] + matrix[i][j]
                else:
                    folded[j][i] = folded[j][i] + matrix[i][j]
        self.field = field
        self.dim = dim
        self.matrix = folded

    @staticmethod
    def binary(field: FunctionField, e: RatFunc, f: RatFunc) -> "QuadForm":
        """[e, f]: the form e X^2 + X Y + f Y^2."""
        return QuadForm(field, 2, [[e, field.one()], [field.zero(), f]])

    @staticmethod
    def hyperbolic_plane(field: FunctionField) -> "QuadForm":
        return QuadForm.binary(field, field.zero(), field.zero())

    def evaluate(self, v: Sequence[RatFunc]) -> RatFunc:
        mv = _mat_vec(self.matrix, v, self.field)
        return sum((vi * wi for vi, wi in zip(v, mv)), self.field.zero())

    def polar_matrix(self) -> Matrix:
        mt = _mat_transpose(self.matrix)
        return [
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, mt)
        ]

    def polar(self, u: Sequence[RatFunc], v: Sequence[RatFunc]) -> RatFunc:
        bv = _mat_vec(self.polar_matrix(), v, self.field)
        return sum((ui * wi for ui, wi in zip(u, bv)), self.field.zero())

    def is_nonsingular(self) -> bool:
        if self.dim % 2:
            return False
        return not _mat_det(self.polar_matrix(), self.field).is_zero()

    def perp(self, other: "QuadForm") -> "QuadForm":
        if self.field != other.field:
            raise FieldMismatch("orthogonal sum over different fields")
        n = self.dim + other.dim
        m = _mat_zero(self.field, n, n)
        for i in range(self.dim):
            for j in range(self.dim):
                m[i][j] = self.matrix[i][j]
        for i in range(other.dim):
            for j in range(other.dim):
                m[self.dim + i][self.dim + j] = other.matrix[i][j]
        return QuadForm(self.field, n, m)

    def scale(self, c: RatFunc) -> "QuadForm":
        return QuadForm(
            self.field, self.dim,
            [[c * e for e in row] for row in self.matrix],
        )

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, QuadForm)
            and self.field == other.field
            and self.dim == other.dim
            and self.matrix == other.matrix
        )

    def __repr__(self) -> str:
        return f"QuadForm(dim={self.dim})"


class BilForm:
    """Symmetric bilinear form given by its Gram matrix."""

    __slots__ = ("field", "dim", "matrix")

    def __init__(self, field: FunctionField, dim: int, matrix: Matrix):
        if len(matrix) != dim or any(len(row) != dim for row in matrix):
            raise ValueError("matrix shape mismatch")
        for i in range(dim):
            for j in range(i + 1, dim):
                if matrix[i][j] != matrix[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.field = field
        self.dim = dim
        self.matrix = [row[:] for row in matrix]

    @staticmethod
    def diagonal(field: FunctionField, entries: Sequence[RatFunc]) -> "BilForm":
        n = len(entries)
        m = _mat_zero(field, n, n)
        for i, e in enumerate(entries):
            m[i][i] = e
        return BilForm(field, n, m)

    def evaluate(self, u: Sequence[RatFunc], v: Sequence[RatFunc]) -> RatFunc:
        mv = _mat_vec(self.matrix, v, self.field)
        return sum((ui * wi for ui, wi in zip(u, mv)), self.field.zero())

    def is_nondegenerate(self) -> bool:
        return not _mat_det(self.matrix, self.field).is_zero()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BilForm)
            and self.field == other.field
            and self.dim == other.dim
            and self.matrix == other.matrix
        )

    def __repr__(self) -> str:
        return f"BilForm(dim={self.dim})"


# -- Pfister builders ------------------------------------------------------------


@dataclass(frozen=True)
class PfisterSymbol:
    """Slots a_1, ..., a_n (nonzero) and optional quadratic tail b."""

    slots: tuple[RatFunc, ...]
    tail: Optional[RatFunc] = None

    def __post_init__(self) -> None:
        if any(a.is_zero() for a in self.slots):
            raise ValueError("Pfister slots must be nonzero")


def pfister_bil(sym: PfisterSymbol) -> BilForm:
    """<< a_1, ..., a_n >>_b of dimension 2^n (char 2: <1, a> blocks)."""
    if not sym.slots:
        raise ValueError("bilinear Pfister form needs at least one slot")
    field = sym.slots[0].field
    entries = [field.one()]
    for a in sym.slots:
        entries = entries + [e * a for e in entries]
    return BilForm.diagonal(field, entries)


def pfister_quad(sym: PfisterSymbol) -> QuadForm:
    """<< a_1, ..., a_n, b ]] of dimension 2^(n+1): iterated q -> q perp a q."""
    if sym.tail is None:
        raise ValueError("quadratic Pfister form needs a tail")
    field = sym.tail.field
    q = QuadForm.binary(field, field.one(), sym.tail)
    for a in sym.slots:
        q = q.perp(q.scale(a))
    return q


# -- invariants and certificates ----------------------------------------------------


def arf(q: QuadForm) -> RatFunc:
    """Arf invariant representative via symplectic block reduction.

    Returns sum a_i b_i for a reduction to perp [a_i, b_i]; equality of the
    class in F/wp(F) is only ever tested through the bounded solver.
    """
    field = q.field
    if field.p != 2:
        raise ValueError("Arf invariant lives in characteristic 2")
    if q.dim % 2 or not q.is_nonsingular():
        raise Singular("Arf invariant needs a nonsingular even-dimensional form")
    basis = [
        [field.one() if i == j else field.zero() for j in range(q.dim)]
        for i in range(q.dim)
    ]
    total = field.zero()
    while basis:
        v = basis[0]
        w_idx = next(
            (i for i in range(1, len(basis)) if not q.polar(v, basis[i]).is_zero()),
            None,
        )
        if w_idx is None:
            raise Singular("polar form degenerate on the remaining space")
        scale = q.polar(v, basis[w_idx]).inv()
        w = [scale * c for c in basis[w_idx]]
        total = total + q.evaluate(v) * q.evaluate(w)
        rest = []
        for i, z in enumerate(basis):
            if i == 0 or i == w_idx:
                continue
            z1 = [
                zc + q.polar(z, w) * vc + q.polar(z, v) * wc
                for zc, vc, wc in zip(z, v, w)
            ]
            rest.append(z1)
        basis = rest
    return total


@dataclass(frozen=True)
class IsometryCert:
    """Invertible T with q2(v) = q1(T v) as a polynomial identity."""

    matrix: tuple


def is_isometry(q1: QuadForm, q2: QuadForm, cert: IsometryCert) -> bool:
    """Check T^T M1 T = M2 modulo alternating matrices, T invertible."""
    if q1.dim != q2.dim or q1.field != q2.field:
        return False
    field = q1.field
    t = [list(row) for row in cert.matrix]
    if len(t) != q1.dim or any(len(row) != q1.dim for row in t):
        return False
    if _mat_det(t, field).is_zero():
        return False
    delta = _mat_mul(_mat_mul(_mat_transpose(t), q1.matrix, field), t, field)
    for i in range(q1.dim):
        for j in range(q1.dim):
            delta[i][j] = delta[i][j] - q2.matrix[i][j]
    # alternating: symmetric with zero diagonal (char 2)
    for i in range(q1.dim):
        if not delta[i][i].is_zero():
            return False
        for j in range(i + 1, q1.dim):
            if delta[i][j] != delta[j][i]:
                return False
    return True


@dataclass(frozen=True)
class LagrangianCert:
    """Half-dimensional totally singular subspace, given by a basis."""

    basis: tuple


def lagrangian_check(q: QuadForm, cert: LagrangianCert) -> bool:
    """q vanishes on the span: q(v_i) = 0, polar(v_i, v_j) = 0, independent."""
    vecs = [list(v) for v in cert.basis]
    if len(vecs) * 2 != q.dim:
        return False
    if any(len(v) != q.dim for v in vecs):
        return False
    if _vec_rank(vecs, q.field) != len(vecs):
        return False
    for i, v in enumerate(vecs):
        if not q.evaluate(v).is_zero():
            return False
        for w in vecs[i + 1 :]:
            if not q.polar(v, w).is_zero():
                return False
    return True


def hyperbolic_lagrangian(q: QuadForm) -> LagrangianCert:
    """Lagrangian for a literal orthogonal sum of hyperbolic planes [0,0]."""
    field = q.field
    if q.dim % 2:
        raise Singular("odd dimension")
    hh = QuadForm.hyperbolic_plane(field)
    expected = hh
    for _ in range(q.dim // 2 - 1):
        expected = expected.perp(hh)
    if q != expected:
        raise CertificateFailed("form is not a literal sum of hyperbolic planes")
    basis = []
    for i in range(q.dim // 2):
        v = [field.zero()] * q.dim
        v[2 * i] = field.one()
        basis.append(tuple(v))
    return LagrangianCert(tuple(basis))


# -- kernel generators ------------------------------------------------------------


@dataclass(frozen=True)
class WittGenerator:
    """One quadratic kernel generator << s, tail ]] with its pattern data."""

    kind: str
    pairs: tuple[tuple[RatFunc, int], ...]
    s: RatFunc
    j: Optional[int]
    t: Optional[int]
    k: Optional[tuple[int, ...]]
    tail: RatFunc
    form: QuadForm

    @property
    def symbol(self) -> PfisterSymbol:
        return PfisterSymbol(slots=(self.s,), tail=self.tail)


def quad_kernel_generators(
    pairs: Sequence[tuple[RatFunc, int]], s_list: Sequence[RatFunc]
) -> list[WittGenerator]:
    """Generators << s, s b_j ]] and << s, s^(2^t) b^k(t) ]] for all patterns."""
    pairs = tuple(pairs)
    field = pairs[0][0].field
    if field.p != 2:
        raise ValueError("quadratic Witt kernel generators live in characteristic 2")
    bs = [b for b, _ in pairs]
    out = []
    for s in s_list:
        if s.is_zero():
            raise ValueError("s must be nonzero")
        for j in range(len(pairs)):
            tail = s * bs[j]
            form = pfister_quad(PfisterSymbol((s,), tail))
            out.append(WittGenerator("linear", pairs, s, j, None, None, tail, form))
        for t, k in power_patterns(pairs, 2):
            tail = s ** (2**t) * monomial(field, bs, k)
            form = pfister_quad(PfisterSymbol((s,), tail))
            out.append(WittGenerator("power", pairs, s, None, t, k, tail, form))
    return out


@dataclass(frozen=True)
class HyperbolicityChain:
    """Chain of verified isometries ending in a Lagrangian.

    steps are triples (lhs, rhs, T) with rhs = lhs o T; the first rhs is the
    restricted generator and the last lhs carries the Lagrangian.
    """

    restricted: QuadForm
    steps: tuple[tuple[QuadForm, QuadForm, IsometryCert], ...]
    final_form: QuadForm
    lagrangian: LagrangianCert

    def verify(self) -> bool:
        if self.steps and self.steps[0][1] != self.restricted:
            return False
        for (lhs, rhs, cert), nxt in zip(self.steps, self.steps[1:]):
            if nxt[1] != lhs:
                return False
        for lhs, rhs, cert in self.steps:
            if not is_isometry(lhs, rhs, cert):
                return False
        if self.steps and self.steps[-1][0] != self.final_form:
            return False
        return lagrangian_check(self.final_form, self.lagrangian)


def restrict_quad(q: QuadForm, ext: ExtensionSpec) -> QuadForm:
    return QuadForm(
        ext.target, q.dim, [[ext.apply(e) for e in row] for row in q.matrix]
    )


def _generator_slots(g: WittGenerator, ext: ExtensionSpec) -> list[int]:
    if ext.adapted is None:
        raise UnsupportedExtension("hyperbolicity chains need an adapted extension")
    source = ext.source
    slots = []
    for b, m in g.pairs:
        idx = next(
            (i for i in range(source.nvars) if b == source.var(i)), None
        )
        if idx is None or ext.adapted.exponent_of(idx) != m:
            raise UnsupportedExtension(
                "generator data is not among the distinguished variables"
            )
        slots.append(idx)
    return slots


def hyperbolicity_certificate(
    g: WittGenerator, ext: ExtensionSpec
) -> HyperbolicityChain:
    """Verified hyperbolicity of a kernel generator over the extension.

    Over E the tail becomes w^(2^t) with w = s g0^2 a square multiple of s
    (g0 collects the roots of the b_i).  The chain is: an Arf twist
    [1, w^(2^t)] ~ [1, w] on both blocks, then a represented-value move on
    the first block and a scaling absorption on the second, landing on
    [s, g0^2] perp [g0^2, s], which carries the diagonal Lagrangian
    {(1,0,0,1), (0,1,1,0)}.
    """
    slots = _generator_slots(g, ext)
    target = ext.target
    one = target.one()
    zero = target.zero()
    q_e = restrict_quad(g.form, ext)
    s_e = ext.apply(g.s)
    t = 0 if g.kind == "linear" else g.t
    k = (
        tuple(1 if l == g.j else 0 for l in range(len(g.pairs)))
        if g.kind == "linear"
        else g.k
    )
    g0 = one
    for slot, ki, (_, mi) in zip(slots, k, g.pairs):
        eps = (2**mi * ki) // (2 ** (t + 1))
        g0 = g0 * target.var(slot) ** eps
    w = s_e * g0 * g0
    # sanity: the restricted tail really is w^(2^t)
    tail_e = ext.apply(g.tail)
    if tail_e != w ** (2**t):
        raise CertificateFailed("restricted tail does not match w^(2^t)")
    phi0 = QuadForm.binary(target, one, tail_e).perp(
        QuadForm.binary(target, one, tail_e).scale(s_e)
    )
    if phi0 != q_e:
        raise CertificateFailed("restricted generator is not the expected Pfister form")
    steps = []
    # step 1: Arf twist with h = sum_{j<t} w^(2^j) on both blocks
    h = zero
    cur = w
    for _ in range(t):
        h = h + cur
        cur = cur * cur
    phi1 = QuadForm.binary(target, one, w).perp(
        QuadForm.binary(target, one, w).scale(s_e)
    )
    t1 = IsometryCert(
        (
            (one, h, zero, zero),
            (zero, one, zero, zero),
            (zero, zero, one, h),
            (zero, zero, zero, one),
        )
    )
    steps.append((phi1, q_e, t1))
    # step 2, recorded from the phi2 side: [s, g0^2] o T_a = [1, s g0^2]
    # with the involution T_a: (x, y) -> (g0 y, x/g0) on the first block,
    # and [g0^2, s] o T_b = s[1, s g0^2] with T_b: (x, y) -> (s y, x) on the
    # second (the scaling absorption read backwards).
    g0_inv = g0.inv()
    phi2 = QuadForm.binary(target, s_e, g0 * g0).perp(
        QuadForm.binary(target, g0 * g0, s_e)
    )
    t2 = IsometryCert(
        (
            (zero, g0, zero, zero),
            (g0_inv, zero, zero, zero),
            (zero, zero, zero, s_e),
            (zero, zero, one, zero),
        )
    )
    steps.append((phi2, phi1, t2))
    lagr = LagrangianCert(((one, zero, zero, one), (zero, one, one, zero)))
    chain = HyperbolicityChain(
        restricted=q_e, steps=tuple(steps), final_form=phi2, lagrangian=lagr
    )
    if not chain.verify():
        raise CertificateFailed("hyperbolicity chain failed to verify")
    return chain


@dataclass(frozen=True)
class BilGenerator:
    """Bilinear kernel generator <1, x> with its isotropic vector over E."""

    x: RatFunc
    form: BilForm
    vector: tuple


def bilinear_kernel_generators(
    ext: ExtensionSpec, x_list: Sequence[RatFunc]
) -> list[BilGenerator]:
    """Forms <1, x> for x in F^2(distinguished)*, with verified isotropic vectors.

    The membership gate is the Frobenius-support test; the vector (y, 1)
    with y the square root of the restricted x satisfies B(v, v) = y^2 + x
    = 0 over E.
    """
    if ext.adapted is None:
        raise UnsupportedExtension("bilinear kernel generators need adapted data")
    source = ext.source
    names = [source.vars[i] for i in ext.adapted.indices]
    out = []
    for x in x_list:
        if x.is_zero():
            raise CertificateFailed("x must be nonzero")
        if not subfield_membership(x, names):
            raise CertificateFailed(
                f"{x!r} is not in F^{source.p}({', '.join(names)})"
            )
        y = pth_root(ext.apply(x))
        if y is None:
            raise CertificateFailed("restricted x is unexpectedly not a p-th power")
        form = BilForm.diagonal(source, [source.one(), x])
        vector = (y, ext.target.one())
        form_e = BilForm.diagonal(ext.target, [ext.target.one(), ext.apply(x)])
        if not form_e.evaluate(vector, vector).is_zero():
            raise CertificateFailed("isotropic vector failed to verify")
        out.append(BilGenerator(x=x, form=form, vector=vector))
    return out


# -- symbol maps -----------------------------------------------------------------


def kato_e(sym: PfisterSymbol) -> DiffForm:
    """Symbol map on bilinear Pfister symbols: dlog a_1 ^ ... ^ dlog a_n."""
    if sym.tail is not None:
        raise ValueError("kato_e takes a symbol without tail")
    if not sym.slots:
        raise ValueError("empty symbol")
    field = sym.slots[0].field
    out = DiffForm.scalar(field, field.one())
    for a in sym.slots:
        out = wedge(out, dlog(a))
    return out


def kato_f(sym: PfisterSymbol) -> DiffForm:
    """Symbol map on quadratic Pfister symbols: b dlog a_1 ^ ... ^ dlog a_n.

    With no slots this is the degree-0 identification through the Arf
    invariant: the symbol [1, b] maps to the scalar b.
    """
    if sym.tail is None:
        raise ValueError("kato_f takes a symbol with tail")
    field = sym.tail.field
    out = DiffForm.scalar(field, sym.tail)
    for a in sym.slots:
        out = wedge(out, dlog(a))
    return out


def artin_schreier_solve(c: RatFunc, bounds: SearchBounds) -> Optional[RatFunc]:
    """Bounded search for u with u^p - u = c; absence is bound-relative."""
    return artin_schreier_search(c, bounds)
