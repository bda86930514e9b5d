"""Generators of rectangular W-algebras and the checks run on them.

``extract_generators`` expands the column determinant of B, applies the
matrix-element maps T_ij and reads off the coefficients of powers of
``alpha * tau``.  The remaining functions verify the resulting elements: BRST
closure, the Miura factorization, leading terms and, for the shape (2,2), the
Virasoro relations of the conformal vector.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .brst import BRST
from .coeff import K, ONE, ZERO, as_scalar
from .liealg import LieElem, Shape, bracket, embed, grading_degree
from .pbw import ENVELOPING, FREE, AlgElem, build_B, cdet, tmap
from .vertex import VertexAlgebra, VState

__all__ = [
    "Check", "Report", "GeneratorSet", "max_rank", "extract_generators",
    "verify_closure", "miura", "miura_product", "verify_miura_factorization",
    "leading_term", "verify_centralizer_basis", "conformal_vector_22",
    "virasoro_checks", "reference_l3_22", "kw_central_charge", "L_VARIANTS",
]

MAX_N_ENV = "WGEN_MAX_N"
DEFAULT_MAX_N = 6


@dataclass
class Check:
    name: str
    passed: bool
    witness: str = ""
    seconds: float = 0.0


@dataclass
class Report:
    """A named list of checks; passes iff every check passes."""

    title: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, passed, witness="", seconds=0.0):
        self.checks.append(Check(name, bool(passed), witness, seconds))

    def extend(self, other):
        self.checks.extend(other.checks)

    def lines(self, timing=False):
        out = []
        for c in self.checks:
            line = f"{'PASS' if c.passed else 'FAIL'}  {c.name}"
            if timing:
                line += f"  ({c.seconds:.2f}s)"
            if c.witness and not c.passed:
                line += f"  -- {c.witness}"
            out.append(line)
        return out


def max_rank():
    """Largest N = n*l accepted, overridable through ``WGEN_MAX_N``."""
    raw = os.environ.get(MAX_N_ENV)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{MAX_N_ENV} must be an integer, got {raw!r}") from None


@dataclass
class GeneratorSet:
    """``W[(i, j, r)]`` for ``1 <= i, j <= n`` and ``1 <= r <= l``."""

    shape: Shape
    W: dict
    full: dict = field(default_factory=dict, repr=False)

    def get(self, i, j, r):
        if r == 0:
            return AlgElem.one() if i == j else AlgElem()
        return self.W[(i, j, r)]

    def keys(self):
        n, l = self.shape.n, self.shape.l
        return [(i, j, r) for r in range(1, l + 1)
                for i in range(1, n + 1) for j in range(1, n + 1)]

    def items(self):
        return [(key, self.W[key]) for key in self.keys()]

    def reconstruct(self, i, j):
        """``sum_r W_ij^(r) (alpha tau)^(l-r)`` with tau on the right."""
        shape = self.shape
        at = AlgElem.tau() * shape.alpha
        out = AlgElem()
        for r in range(0, shape.l + 1):
            out = out + self.get(i, j, r) * at ** (shape.l - r)
        return out


def extract_generators(shape, flavor=None):
    """Compute every ``W_ij^(r)`` from ``T_ij(cdet B)``."""
    if shape.N > max_rank():
        raise ValueError(f"resource bound exceeded: N={shape.N} > {max_rank()} "
                         f"(set {MAX_N_ENV} to raise it)")
    c = cdet(build_B(shape, flavor))
    n, l = shape.n, shape.l
    alpha = shape.alpha
    W, full = {}, {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            t = tmap(i, j, c, shape)
            full[(i, j)] = t
            for r in range(1, l + 1):
                W[(i, j, r)] = t.tau_coefficient(l - r) / alpha ** (l - r)
    return GeneratorSet(shape, W, full)


def verify_closure(gens, brst=None):
    """Check ``Q W = 0`` for every generator."""
    shape = gens.shape
    if brst is None:
        brst = BRST(VertexAlgebra(shape))
    alg = brst.algebra
    rep = Report(f"BRST closure {shape}")
    for (i, j, r), w in gens.items():
        t0 = time.perf_counter()
        q = brst.q_apply(alg.embed_alg(w))
        rep.add(f"Q W_{i}{j}^({r}) = 0 {shape}", not q,
                "" if not q else q.format()[:200], time.perf_counter() - t0)
    return rep


def _degree(letter, shape):
    return grading_degree(letter[1:], shape)


def miura(a, shape):
    """Image under the projection b -> l: drop monomials containing an m-mode."""
    if a.flavor != ENVELOPING:
        raise ValueError("miura expects an enveloping-flavor element")
    return AlgElem({key: c for key, c in a.terms.items()
                    if all(_degree(x, shape) == 0 for x in key[0])})


def miura_product(shape):
    """``(alpha tau + e_11[-1]) ... (alpha tau + e_ll[-1])`` before T_ij."""
    flavor = ENVELOPING if shape.n == 1 else FREE
    at = AlgElem.tau(flavor) * shape.alpha
    out = AlgElem.one(flavor)
    for i in range(1, shape.l + 1):
        out = out * (at + AlgElem.mode(i, i, 1, flavor))
    return out


def verify_miura_factorization(shape, gens=None):
    """Compare ``sum_r nu(W_ij^(r))(alpha tau)^(l-r)`` with T_ij of the product."""
    gens = gens or extract_generators(shape)
    prod = miura_product(shape)
    n, l = shape.n, shape.l
    at = AlgElem.tau() * shape.alpha
    rep = Report(f"Miura factorization {shape}")
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            t0 = time.perf_counter()
            rhs = tmap(i, j, prod, shape)
            lhs = AlgElem()
            for r in range(0, l + 1):
                lhs = lhs + miura(gens.get(i, j, r), shape) * at ** (l - r)
            witness = ""
            if lhs != rhs:
                for a in range(l + 1):
                    x, y = lhs.tau_coefficient(a), rhs.tau_coefficient(a)
                    if x != y:
                        witness = f"tau^{a}: {x} != {y}"
                        break
            rep.add(f"nu-factorization T_{i}{j} {shape}", lhs == rhs, witness,
                    time.perf_counter() - t0)
    return rep


def leading_term(a, shape):
    """Lowest-degree component; a word's degree is the sum of its letters' degrees."""
    best, out = None, {}
    for (w, t), c in a.terms.items():
        d = sum(_degree(x, shape) for x in w)
        if best is None or d < best:
            best, out = d, {}
        if d == best:
            out[(w, t)] = c
    return AlgElem(out, a.flavor)


def _principal_f(shape):
    n, l = shape.n, shape.l
    return LieElem(shape.N, {embed((i + 1, i, p, p), n): ONE
                             for i in range(1, l) for p in range(1, n + 1)})


def _rank(rows):
    """Rank of a list of {key: Scalar} rows by Gaussian elimination."""
    rows = [dict(r) for r in rows if r]
    rank = 0
    while rows:
        piv = rows.pop()
        if not piv:
            continue
        key, c = next(iter(piv.items()))
        rank += 1
        nxt = []
        for r in rows:
            f = r.get(key)
            if f:
                r = dict(r)
                for k2, v in piv.items():
                    nv = r.get(k2, ZERO) - f / c * v
                    if nv:
                        r[k2] = nv
                    else:
                        r.pop(k2, None)
            if r:
                nxt.append(r)
        rows = nxt
    return rank


def verify_centralizer_basis(shape, gens=None):
    """Leading terms are ``T_ij(sum_s e_{r+s-1,s}[-1])`` and span the centralizer of f."""
    gens = gens or extract_generators(shape)
    n, l, N = shape.n, shape.l, shape.N
    f = _principal_f(shape)
    rep = Report(f"leading terms {shape}")
    elems = []
    for (i, j, r), w in gens.items():
        lt = leading_term(w, shape)
        expected = {embed((r + s - 1, s, j, i), n): ONE for s in range(1, l - r + 2)}
        linear = all(len(word) == 1 and word[0][0] == 1 for word, _ in lt.words())
        got = {word[0][1:]: c for word, c in lt.words()} if linear else None
        rep.add(f"leading term W_{i}{j}^({r}) {shape}", got == expected,
                "" if got == expected else lt.format())
        if linear:
            x = LieElem(N, got)
            elems.append(x.coeffs)
            rep.add(f"[f, lt W_{i}{j}^({r})] = 0 {shape}", not bracket(f, x))
    rk = _rank(elems)
    rep.add(f"rank {rk} = l*n^2 = {l * n * n} {shape}", rk == l * n * n)
    return rep


# -- the conformal vector for (2,2) -------------------------------------------

L_VARIANTS = ("reference", "virasoro")


def reference_l3_22():
    """Reference value of the fourth-order pole of L(z)L(w) for (2,2): ``-(12k^2+41k+32)/(2(k+4)^2)``."""
    return -(12 * K ** 2 + 41 * K + 32) / (2 * (K + 4) ** 2)


def kw_central_charge(shape, level=K):
    """Central charge of the W-algebra of sl_N for the rectangular nilpotent.

    ``dim g_0 - 12 |rho - (k+N) x|^2 / (k+N)`` with ``x`` the even Dynkin
    grading element (no half-integer part for rectangular f).  The centre of
    gl_N is a null current for the invariant form used here, so it adds nothing.
    """
    n, l, N = shape.n, shape.l, shape.N
    kk = as_scalar(level) + N
    rho = [Fraction(N - 1, 2) - a for a in range(N)]
    x = [Fraction(l - 1, 2) - a // n for a in range(N)]
    dim0 = n * n * l - 1
    rr = sum(r * r for r in rho)
    rx = sum(r * y for r, y in zip(rho, x))
    xx = sum(y * y for y in x)
    return dim0 - (rr * ONE - 2 * rx * kk + xx * kk * kk) * 12 / kk


def conformal_vector_22(algebra=None, gens=None, prime="translate", variant="reference"):
    """The state L of the (2,2) W-algebra, built from (-1)-products of generators.

    ``variant="reference"`` is ``(-2(W11^(2) + W22^(2)) + W12 W21 + 3/4 (W11 W11 +
    W22 W22) - 1/2 W11 W22 - (k+2)(W11 + W22)' - (W11 - W22)') / (2(k+4))`` with
    ``Wij = Wij^(1)`` in the products.  It is Q-closed but not a Virasoro vector
    with the form used here.  ``"virasoro"`` replaces
    ``W12 W21`` by ``2 W21 W12`` and flips the sign of ``(k+2)(W11 + W22)'``;
    that state satisfies all Virasoro relations with :func:`kw_central_charge`.

    ``prime="translate"`` applies D to the linear generators;
    ``prime="tau"`` uses ``[tau, W]`` on the associative side instead.
    """
    shape = Shape(2, 2)
    if variant not in L_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    V = algebra or VertexAlgebra(shape)
    if V.shape != shape:
        raise ValueError("the conformal vector is only built for shape (2,2)")
    gens = gens or extract_generators(shape)
    if V.level != K:
        from .coeff import scalar_eval
        ev = lambda c: as_scalar(scalar_eval(c, V.level.constant()))
        st = {key: V.embed_alg(w.map_coeffs(ev)) for key, w in gens.items()}
    else:
        st = {key: V.embed_alg(w) for key, w in gens.items()}
    W = lambda i, j, r: st[(i, j, r)]

    def d(sign):
        # (W11^(1) + sign * W22^(1))'
        if prime == "translate":
            return V.translate(W(1, 1, 1) + W(2, 2, 1) * sign)
        if prime == "tau":
            if V.level != K:
                raise ValueError("prime='tau' needs the symbolic level")
            t = AlgElem.tau()
            w = gens.get(1, 1, 1) + gens.get(2, 2, 1) * sign
            return V.embed_alg(t * w - w * t)
        raise ValueError(f"unknown prime rule {prime!r}")

    k = V.level
    body = (W(1, 1, 2) + W(2, 2, 2)) * -2
    if variant == "reference":
        body = body + V.nop(W(1, 2, 1), W(2, 1, 1))
    else:
        body = body + V.nop(W(2, 1, 1), W(1, 2, 1)) * 2
    body = body + (V.nop(W(1, 1, 1), W(1, 1, 1)) + V.nop(W(2, 2, 1), W(2, 2, 1))) * as_scalar(3) / 4
    body = body - V.nop(W(1, 1, 1), W(2, 2, 1)) / 2
    centre = d(1) * (k + 2)
    body = body - centre if variant == "reference" else body + centre
    body = body - d(-1)
    return body / (2 * (k + 4))


def virasoro_checks(algebra, L, c_half, title="Virasoro OPE"):
    """``L_(0)L = DL``, ``L_(1)L = 2L``, ``L_(2)L = 0``, ``L_(3)L = c_half |0>``, no higher poles."""
    V = algebra
    rep = Report(title)
    expected = {0: V.translate(L), 1: L * 2, 2: VState(), 3: VState.vacuum() * c_half}
    names = {0: "L_(0)L = DL", 1: "L_(1)L = 2L", 2: "L_(2)L = 0", 3: f"L_(3)L = {c_half} |0>"}
    for n in (3, 2, 1, 0):
        t0 = time.perf_counter()
        got = V.nth_product(L, n, L)
        ok = got == expected[n]
        rep.add(names[n], ok, "" if ok else got.format()[:200], time.perf_counter() - t0)
    t0 = time.perf_counter()
    higher = [n for n in range(4, 8) if V.nth_product(L, n, L)]
    rep.add("L_(n)L = 0 for 4 <= n < 8", not higher, str(higher), time.perf_counter() - t0)
    return rep
