"""The BRST derivation Q on V^k(a) and the matrix-element maps T~_pq.

Q is given on generator states by explicit (-1)-product expressions.  It is
extended to all of V^k(a) as an odd operator with ``[Q, u_(n)] = (Q u)_(n)``
for every generator state ``u``: on a PBW monomial ``u t^p w`` this reads

    Q(u t^p w) = (Q u)_(p) w + (-1)^|u| u t^p Q(w).

Expressions are dicts mapping tuples of modes (outermost first, not
necessarily normal ordered) to coefficients; a mode ``u t^(-1-d)`` stands for
the generator ``u`` differentiated ``d`` times and divided by ``d!``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from fractions import Fraction

from .coeff import K, Scalar, as_scalar
from .liealg import Shape, embed, unembed
from .vertex import VState, _addto

__all__ = ["ODD_RULES", "QSpec", "check_q_squared", "check_q_translation", "check_q_derivation", "intertwining_failures", "ordered_principal_q_expr", "BRST", "principal_q_expr", "rectangular_q_expr", "tmap_tilde",
           "tilde_expr"]


@dataclass(frozen=True)
class QSpec:
    """Shape and level of a BRST operator; ``alpha = level + n(l-1)``."""

    shape: Shape
    level: Scalar = field(default=K)

    @property
    def alpha(self):
        return as_scalar(self.level) + self.shape.n * (self.shape.l - 1)

    def principal(self):
        """Spec of the principal comparison algebra at the shifted level."""
        n, l = self.shape.n, self.shape.l
        return QSpec(Shape(1, l), as_scalar(self.level) + (n - 1) * (l - 1))


def _add_word(expr, word, c):
    v = expr.get(word, 0) + c
    if v:
        expr[word] = v
    else:
        expr.pop(word, None)


def principal_q_expr(x, l, alpha):
    """Q of the generator ``x = (parity, -1, j, i)`` of the principal algebra of gl_l.

    Direct transcription of the principal-case commutation relations; labels
    out of range (``psi_ab`` with ``a <= b`` or an index outside ``1..l``) vanish.
    """
    par, _, j, i = x
    psi = lambda a, b: 1 <= b < a <= l
    expr = {}
    if par == 0:
        for a in range(i, j):
            if psi(j, a):
                _add_word(expr, ((0, -1, a, i), (1, -1, j, a)), 1)
        for a in range(i + 1, j + 1):
            if psi(a, i):
                _add_word(expr, ((1, -1, a, i), (0, -1, j, a)), -1)
        if psi(j, i):
            _add_word(expr, ((1, -2, j, i),), alpha)
        if psi(j + 1, i):
            _add_word(expr, ((1, -1, j + 1, i),), 1)
        if psi(j, i - 1):
            _add_word(expr, ((1, -1, j, i - 1),), -1)
    else:
        half = Fraction(1, 2)
        for r in range(i + 1, j):
            _add_word(expr, ((1, -1, j, r), (1, -1, r, i)), half)
            _add_word(expr, ((1, -1, r, i), (1, -1, j, r)), -half)
    return expr


ODD_RULES = ("natural", "transported")


def rectangular_q_expr(x, shape, alpha, odd_rule="natural"):
    """Q of the generator ``x = (parity, -1, J, I)`` with gl_N labels, tensor form.

    ``(J, I)`` is read as ``e_ji (x) e_pq`` and the relations are written with
    explicit sums over the gl_n index, independently of :func:`principal_q_expr`.

    For odd generators two index placements are available.  ``"natural"`` is
    ``psi_JR psi_RI`` summed over intermediate gl_N labels ``R``, antisymmetrized;
    ``"transported"`` attaches ``e_sq`` to the left factor and ``e_ps`` to the right
    one, which is what ``T~_qp`` of the principal relation gives.  They agree
    when ``n = 1`` or ``l <= 2``; only ``"natural"`` squares to zero in general.
    """
    if odd_rule not in ODD_RULES:
        raise ValueError(f"unknown odd rule {odd_rule!r}")
    n, l = shape.n, shape.l
    par, _, J, I = x
    j, i, p, q = unembed((J, I), n)
    psi = lambda a, b: 1 <= b < a <= l
    E = lambda a, b, c, d: embed((a, b, c, d), n)
    expr = {}
    if par == 0:
        for a in range(i, j):
            for r in range(1, n + 1):
                if psi(j, a):
                    _add_word(expr, ((0, -1) + E(a, i, r, q), (1, -1) + E(j, a, p, r)), 1)
        for a in range(i + 1, j + 1):
            for r in range(1, n + 1):
                if psi(a, i):
                    _add_word(expr, ((1, -1) + E(a, i, r, q), (0, -1) + E(j, a, p, r)), -1)
        if psi(j, i):
            _add_word(expr, ((1, -2) + E(j, i, p, q),), alpha)
        if psi(j + 1, i):
            _add_word(expr, ((1, -1) + E(j + 1, i, p, q),), 1)
        if psi(j, i - 1):
            _add_word(expr, ((1, -1) + E(j, i - 1, p, q),), -1)
    else:
        half = Fraction(1, 2)
        for r in range(i + 1, j):
            for s in range(1, n + 1):
                if odd_rule == "natural":
                    _add_word(expr, ((1, -1) + E(j, r, p, s), (1, -1) + E(r, i, s, q)), half)
                    _add_word(expr, ((1, -1) + E(r, i, s, q), (1, -1) + E(j, r, p, s)), -half)
                else:
                    _add_word(expr, ((1, -1) + E(j, r, s, q), (1, -1) + E(r, i, p, s)), half)
                    _add_word(expr, ((1, -1) + E(r, i, s, q), (1, -1) + E(j, r, p, s)), -half)
    return expr


class BRST:
    """Q acting on a :class:`VertexAlgebra`; results are memoized per monomial."""

    def __init__(self, algebra, spec=None, odd_rule="natural"):
        if odd_rule not in ODD_RULES:
            raise ValueError(f"unknown odd rule {odd_rule!r}")
        self.algebra = algebra
        self.odd_rule = odd_rule
        self.spec = spec or QSpec(algebra.shape, algebra.level)
        if self.spec.shape != algebra.shape or as_scalar(self.spec.level) != algebra.level:
            raise ValueError("spec does not match the algebra")
        self.alpha = self.spec.alpha
        self._gen = {}
        self._cache = {}

    def q_expr(self, x):
        """The expression for Q of the generator mode ``x``."""
        return rectangular_q_expr(x, self.spec.shape, self.alpha, self.odd_rule)

    def _q_gen(self, u):
        hit = self._gen.get(u)
        if hit is None:
            hit = self.algebra.evaluate(self.q_expr(u)).terms
            self._gen[u] = hit
        return hit

    def q_on_generator(self, g):
        """Q of a generator state ``e[-1]|0>`` or ``psi[0]|0>``."""
        if len(g.terms) != 1:
            raise ValueError("not a generator state")
        (mono, c), = g.terms.items()
        if len(mono) != 1 or mono[0][1] != -1:
            raise ValueError("not a generator state")
        self.algebra._check_mode(mono[0])
        return VState._wrap({m: v * c for m, v in self._q_gen(mono[0]).items()})

    def _q(self, mono):
        hit = self._cache.get(mono)
        if hit is not None:
            return hit
        res = {}
        if mono:
            A = self.algebra
            x, rest = mono[0], mono[1:]
            par, p, i, j = x
            for m, c in self._q_gen((par, -1, i, j)).items():
                for m2, c2 in A._nprod(m, p, rest).items():
                    _addto(res, m2, c * c2)
            sign = -1 if par else 1
            for m, c in self._q(rest).items():
                for m2, c2 in A._act(x, m).items():
                    _addto(res, m2, sign * c * c2)
        self._cache[mono] = res
        return res

    def q_apply(self, v):
        out = {}
        for m, c in v.terms.items():
            for m2, c2 in self._q(m).items():
                _addto(out, m2, c * c2)
        return VState._wrap(out)

    __call__ = q_apply

    def is_closed(self, v):
        """True iff ``v`` in V^k(b) satisfies ``Q v = 0``."""
        if not v.is_even_only():
            raise ValueError("not in V^k(b)")
        return not self.q_apply(v)


def tilde_expr(p, q, expr, n):
    """Apply ``T~_pq`` to an expression over principal gl_l labels.

    Each generator maps as ``u -> u (x) e_qp`` and products of ``k`` factors
    expand through the matrix-element rule into ``n^(k-1)`` chains; the empty
    word (vacuum) maps to ``delta_pq``.
    """
    out = {}
    for word, c in expr.items():
        if not word:
            if p == q:
                _add_word(out, (), c)
            continue
        for mids in itertools.product(range(1, n + 1), repeat=len(word) - 1):
            chain = (p,) + mids + (q,)
            # T~_ab(u) = u (x) e_ba
            new = tuple((par, r) + embed((i, j, chain[s + 1], chain[s]), n)
                        for s, (par, r, i, j) in enumerate(word))
            _add_word(out, new, c)
    return out


def tmap_tilde(p, q, a, target):
    """``T~_pq(a)`` evaluated in the rectangular algebra ``target``.

    ``a`` is a principal-algebra :class:`VState` (each PBW monomial read as a
    right-normalized product of differentiated generators) or an expression.
    """
    n = target.shape.n
    if not (1 <= p <= n and 1 <= q <= n):
        raise ValueError(f"index ({p},{q}) out of range 1..{n}")
    expr = dict(a.terms) if isinstance(a, VState) else a
    return target.evaluate(tilde_expr(p, q, expr, n))


def ordered_principal_q_expr(x, l, alpha):
    """Like :func:`principal_q_expr` but with odd images written as ``-psi_ri psi_jr``.

    Over the principal algebra this is the same state; the two words differ
    only by anticommuting the odd factors, which ``T~`` does not respect when
    ``n > 1``.
    """
    par, _, j, i = x
    if par == 0:
        return principal_q_expr(x, l, alpha)
    expr = {}
    for r in range(i + 1, j):
        _add_word(expr, ((1, -1, r, i), (1, -1, j, r)), -1)
    return expr


def intertwining_failures(target, odd_form="ordered", brst=None):
    """Compare ``Q T~_pq(a)`` with ``T~_pq(Qbar a)`` on principal generators ``a``.

    ``target`` is the rectangular algebra at level ``k``; ``Qbar`` is taken at the
    shifted level, whose alpha coincides with the rectangular one.  Returns the
    list of ``(generator, p, q)`` where the two sides differ.
    """
    shape = target.shape
    n, l = shape.n, shape.l
    Q = brst or BRST(target)
    bar = QSpec(shape, target.level).principal()
    rule = {"ordered": ordered_principal_q_expr, "symmetric": principal_q_expr}[odd_form]
    gens = [(0, -1, i, j) for i in range(1, l + 1) for j in range(1, i + 1)]
    gens += [(1, -1, i, j) for i in range(1, l + 1) for j in range(1, i)]
    bad = []
    for g in gens:
        qbar = rule(g, l, bar.alpha)
        for p in range(1, n + 1):
            for q in range(1, n + 1):
                lhs = Q(tmap_tilde(p, q, {(g,): 1}, target))
                rhs = tmap_tilde(p, q, qbar, target)
                if lhs != rhs:
                    bad.append((g, p, q))
    return bad


def check_q_squared(brst, v):
    return not brst.q_apply(brst.q_apply(v))


def check_q_translation(brst, v):
    """``Q D v = D Q v``."""
    D = brst.algebra.translate
    return brst.q_apply(D(v)) == D(brst.q_apply(v))


def check_q_derivation(brst, a, b, n=-1):
    """``Q(a_(n)b) = (Qa)_(n)b + (-1)^|a| a_(n)(Qb)`` for homogeneous ``a``."""
    A = brst.algebra
    sign = -1 if a.parity() else 1
    lhs = brst.q_apply(A.nth_product(a, n, b))
    rhs = A.nth_product(brst.q_apply(a), n, b) + A.nth_product(a, n, brst.q_apply(b)) * sign
    return lhs == rhs
