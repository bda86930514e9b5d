"""gl_N as gl_l (x) gl_n: basis, brackets, the good grading and invariant forms.

Basis elements of gl_N are plain ``(i, j)`` tuples, 1-based.  A tensor basis
element ``e_ij (x) e_pq`` of gl_l (x) gl_n is a :class:`TensorBasis` and sits in
gl_N at ``((i-1)n + p, (j-1)n + q)``.

The grading on gl_N is the principal grading of the gl_l factor, so the degree
of ``(I, J)`` is ``block(J) - block(I)``.  With that grading

* ``b`` is the sum of the non-positive components (block lower triangular),
* ``m`` is the sum of the negative components, an ideal of ``b``,
* ``l`` is the degree-zero component (block diagonal).
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

from .coeff import K, ONE, ZERO, as_scalar

__all__ = [
    "Shape", "TensorBasis", "LieElem", "embed", "unembed", "bracket",
    "basis_bracket", "grading_degree", "project", "kappa", "kappa_b",
    "kappa_b_trace", "trace_identity_check", "basis_b", "basis_m", "basis_l",
]


@dataclass(frozen=True)
class Shape:
    """Rectangular Jordan type ``(l^n)``: ``n`` blocks of size ``l``."""

    n: int
    l: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and isinstance(self.l, int)):
            raise TypeError("shape parameters must be integers")
        if self.n < 1 or self.l < 1:
            raise ValueError(f"invalid shape n={self.n}, l={self.l}")

    @property
    def N(self):
        return self.n * self.l

    @property
    def alpha(self):
        """The constant ``k + n(l-1)`` on the diagonal of the matrix B."""
        return K + self.n * (self.l - 1)

    @property
    def shifted_level(self):
        """Level ``k + (n-1)(l-1)`` of the principal comparison algebra."""
        return K + (self.n - 1) * (self.l - 1)

    def __str__(self):
        return f"({self.n},{self.l})"


TensorBasis = namedtuple("TensorBasis", "i j p q")


def embed(t, n):
    """Map ``e_ij (x) e_pq`` to its gl_N basis label."""
    i, j, p, q = t
    return ((i - 1) * n + p, (j - 1) * n + q)


def unembed(x, n):
    I, J = x
    return TensorBasis((I - 1) // n + 1, (J - 1) // n + 1, (I - 1) % n + 1, (J - 1) % n + 1)


def _block(i, n):
    return (i - 1) // n + 1


def grading_degree(x, shape):
    """Degree of the basis element ``x = (I, J)`` in the good grading."""
    return _block(x[1], shape.n) - _block(x[0], shape.n)


def in_b(x, shape):
    return grading_degree(x, shape) <= 0


def in_m(x, shape):
    return grading_degree(x, shape) < 0


def basis_gl(N):
    return [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]


def basis_b(shape):
    return [x for x in basis_gl(shape.N) if in_b(x, shape)]


def basis_m(shape):
    return [x for x in basis_gl(shape.N) if in_m(x, shape)]


def basis_l(shape):
    return [x for x in basis_gl(shape.N) if grading_degree(x, shape) == 0]


def basis_bracket(x, y):
    """``[e_ij, e_kl] = delta_jk e_il - delta_li e_kj`` as a dict of ints."""
    (i, j), (k, l) = x, y
    out = {}
    if j == k:
        out[(i, l)] = 1
    if l == i:
        key = (k, j)
        c = out.get(key, 0) - 1
        if c:
            out[key] = c
        else:
            out.pop(key, None)
    return out


class LieElem:
    """Finite linear combination of gl_N basis elements with Scalar coefficients."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N, coeffs=None):
        self.N = N
        self.coeffs = {}
        for x, c in (coeffs or {}).items():
            if not (1 <= x[0] <= N and 1 <= x[1] <= N):
                raise ValueError(f"basis element {x} outside gl_{N}")
            c = as_scalar(c)
            if c:
                self.coeffs[x] = c

    @classmethod
    def basis(cls, i, j, N):
        return cls(N, {(i, j): ONE})

    def _check(self, other):
        if not isinstance(other, LieElem):
            raise TypeError("expected a LieElem")
        if other.N != self.N:
            raise ValueError(f"mismatched ambient algebras gl_{self.N} and gl_{other.N}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for x, c in other.coeffs.items():
            out[x] = out.get(x, ZERO) + c
        return LieElem(self.N, out)

    def __neg__(self):
        return LieElem(self.N, {x: -c for x, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = as_scalar(c)
        return LieElem(self.N, {x: c * v for x, v in self.coeffs.items()})

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if not isinstance(other, LieElem):
            return NotImplemented
        return self.N == other.N and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __iter__(self):
        return iter(sorted(self.coeffs.items()))

    def matrix(self):
        """Dense N x N matrix of (Scalar) entries."""
        M = [[ZERO] * self.N for _ in range(self.N)]
        for (i, j), c in self.coeffs.items():
            M[i - 1][j - 1] = c
        return M

    def trace(self):
        out = ZERO
        for (i, j), c in self.coeffs.items():
            if i == j:
                out = out + c
        return out

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})e_{i}{j}" for (i, j), c in sorted(self.coeffs.items()))


def bracket(x, y):
    x._check(y)
    out = {}
    for a, ca in x.coeffs.items():
        for b, cb in y.coeffs.items():
            for c, v in basis_bracket(a, b).items():
                out[c] = out.get(c, ZERO) + v * ca * cb
    return LieElem(x.N, out)


def project(x, target, shape):
    """Keep the ``'l'`` (degree 0) or ``'m'`` (degree < 0) component of ``x``."""
    if target in ("l", "p0", "l-part"):
        keep = lambda d: d == 0
    elif target in ("m", "p+", "m-part"):
        keep = lambda d: d < 0
    else:
        raise ValueError(f"unknown projection target {target!r}")
    return LieElem(x.N, {b: c for b, c in x.coeffs.items()
                         if keep(grading_degree(b, shape))})


def _matmul_trace(x, y):
    # tr(xy) for coefficient dicts
    out = ZERO
    for (i, j), a in x.coeffs.items():
        b = y.coeffs.get((j, i))
        if b is not None:
            out = out + a * b
    return out


def kappa(x, y, N=None, level=K):
    """``level * (tr(xy) - tr(x) tr(y) / N)``."""
    x._check(y)
    if N is not None and N != x.N:
        raise ValueError(f"elements live in gl_{x.N}, not gl_{N}")
    level = as_scalar(level)
    return level * (_matmul_trace(x, y) - x.trace() * y.trace() * Fraction(1, x.N))


def _kappa_b_basis(a, b, shape, level):
    n, l = shape.n, shape.l
    (i, i1, p, q) = unembed(a, n)
    (j, j1, r, s) = unembed(b, n)
    if i != i1 or j != j1:
        return ZERO
    d = lambda u, v: 1 if u == v else 0
    N = n * l
    first = (level + N) * (d(i, j) * d(p, s) * d(q, r) - Fraction(d(p, q) * d(r, s), N))
    second = n * d(i, j) * (d(p, s) * d(q, r) - Fraction(d(p, q) * d(r, s), n))
    return first - second


def _check_b(x, shape):
    for a in x.coeffs:
        if not in_b(a, shape):
            raise ValueError(f"not in b: e_{a[0]}{a[1]}")


def kappa_b(x, y, shape, level=K):
    """Closed form of the invariant form on b (bilinear extension)."""
    _check_b(x, shape)
    _check_b(y, shape)
    level = as_scalar(level)
    out = ZERO
    for a, ca in x.coeffs.items():
        for b, cb in y.coeffs.items():
            v = _kappa_b_basis(a, b, shape, level)
            if v:
                out = out + v * ca * cb
    return out


def _ad_ad_trace(x, y, basis, keep=None):
    """Trace of ``u -> keep([x, [y, u]])`` over ``basis``."""
    N = x.N
    out = ZERO
    for u in basis:
        ue = LieElem.basis(u[0], u[1], N)
        w = bracket(x, bracket(y, ue))
        c = w.coeffs.get(u)
        if c is not None and (keep is None or keep(u)):
            out = out + c
    return out


def kappa_b_trace(x, y, shape, level=K):
    """The form on b computed from its trace definition.

    ``kappa(x, y) + tr_g(ad x ad y)/2 - tr_{g_0} p_0(ad x ad y)/2``, each trace
    taken by brute force over a basis.  Independent of :func:`kappa_b`.
    """
    _check_b(x, shape)
    _check_b(y, shape)
    N = shape.N
    full = _ad_ad_trace(x, y, basis_gl(N))
    zero_part = _ad_ad_trace(x, y, basis_l(shape))
    return kappa(x, y, level=level) + full * Fraction(1, 2) - zero_part * Fraction(1, 2)


def trace_identity_check(i, j, p, q, shape):
    """Brute-force trace over m of ``p_+ ad(e_ij (x) e_qp) ad(e_ji (x) e_pq)``.

    The operator sends ``u`` in m to the m-component of
    ``[e_ij (x) e_qp, [e_ji (x) e_pq, u]]``; its trace is ``n(l+i-j-1)`` for
    every ``p, q``.  For ``p == q`` the two tensor factors coincide.
    """
    if not (1 <= i < j <= shape.l):
        raise ValueError(f"need 1 <= i < j <= l, got i={i}, j={j}")
    if not (1 <= p <= shape.n and 1 <= q <= shape.n):
        raise ValueError("gl_n index out of range")
    N, n = shape.N, shape.n
    lower = LieElem(N, {embed((j, i, p, q), n): ONE})
    upper = LieElem(N, {embed((i, j, q, p), n): ONE})
    return _ad_ad_trace(upper, lower, basis_m(shape))
