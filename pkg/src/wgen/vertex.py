"""The vertex superalgebra V^k(a) generated by currents of b and odd fields of m.

Internally every mode is written with its actual power of ``t``:

* even ``x t^r`` for ``x`` in b, displayed as ``e_ij[r]``;
* odd ``y t^r`` for ``y`` in m, displayed as ``psi_ij[r+1]``.

A mode is the tuple ``(parity, r, i, j)``.  States are combinations of PBW
monomials: tuples of creation modes (``r <= -1``) in increasing tuple order
(even before odd, deeper before shallower, then by row and column), applied
to the vacuum.  The relations are

    [x t^r, y t^s]   = [x, y] t^(r+s) + r delta_{r+s,0} kappa_b(x, y)
    [x t^r, psi_y t^s] = psi_[x,y] t^(r+s)
    [psi, psi']      = 0

and all non-negative modes kill the vacuum.  Each generator state ``u t^-1|0>``
has field ``sum_n u t^n z^(-n-1)``, so ``u_(n) = u t^n``.  Products with
composite left arguments are computed by the iterate (Borcherds) formula on
the leftmost mode of each monomial.  Every generator has weight 1 for the
grading by ``-t``-degree, which bounds all the sums involved.
"""

from __future__ import annotations

from functools import lru_cache

from .coeff import K, ONE, Scalar, as_scalar
from .liealg import basis_b, basis_bracket, in_b, in_m, kappa_b, LieElem
from .pbw import AlgElem, format_terms

__all__ = [
    "VState", "VertexAlgebra", "emode", "psimode", "gbinom", "random_monomial",
    "random_state", "check_skew_symmetry", "check_commutator", "check_associativity",
    "check_translation",
]


def emode(i, j, r):
    """Even mode ``e_ij[r] = e_ij t^r``."""
    return (0, r, i, j)


def psimode(i, j, m):
    """Odd mode ``psi_ij[m] = e_ij t^(m-1)``."""
    return (1, m - 1, i, j)


@lru_cache(maxsize=None)
def gbinom(p, j):
    """Binomial coefficient ``C(p, j)`` for any integer ``p`` and ``j >= 0``."""
    num, den = 1, 1
    for t in range(j):
        num *= p - t
        den *= t + 1
    return num // den


def _sign(e):
    return -1 if e & 1 else 1


def _addto(acc, key, c):
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _weight(mono):
    return -sum(x[1] for x in mono)


def _parity(mono):
    return sum(x[0] for x in mono) & 1


def _fmt_mode(x, latex=False):
    par, r, i, j = x
    idx = f"{i}{j}" if i < 10 and j < 10 else f"{i},{j}"
    if latex:
        return f"\\psi_{{{idx}}}[{r + 1}]" if par else f"e_{{{idx}}}[{r}]"
    return f"psi_{idx}[{r + 1}]" if par else f"e_{idx}[{r}]"


class VState:
    """A vector of V^k(a): PBW monomials (tuples of modes) with Scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for mono, c in (terms or {}).items():
            c = as_scalar(c)
            if c:
                v = self.terms.get(mono)
                v = c if v is None else v + c
                if v:
                    self.terms[mono] = v
                else:
                    del self.terms[mono]

    @classmethod
    def _wrap(cls, raw):
        obj = object.__new__(cls)
        obj.terms = {m: (c if isinstance(c, Scalar) else Scalar(c))
                     for m, c in raw.items() if c}
        return obj

    @classmethod
    def vacuum(cls):
        return cls({(): ONE})

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            _addto(out, m, c)
        return VState._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return VState._wrap({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = as_scalar(c)
        return VState._wrap({m: v * c for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (ONE / as_scalar(c))

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, VState):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def parity(self):
        """0 or 1 for a homogeneous state; ``None`` if mixed."""
        ps = {_parity(m) for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def weight(self):
        return max((_weight(m) for m in self.terms), default=0)

    def is_even_only(self):
        return all(x[0] == 0 for m in self.terms for x in m)

    def map_coeffs(self, f):
        return VState({m: f(c) for m, c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (-_weight(kv[0]), len(kv[0]), kv[0]))

    def format(self, latex=False):
        vac = "|0\\rangle" if latex else "|0>"
        items = []
        for mono, c in self.sorted_terms():
            ws = " ".join(_fmt_mode(x, latex) for x in mono)
            items.append((c, f"{ws} {vac}" if ws else vac))
        return format_terms(items, None, latex)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"VState({self.format()})"


class VertexAlgebra:
    """V^k(a) for a rectangular shape at a given level (default the symbol k).

    All products are memoized per instance, so keep one instance per
    (shape, level) and reuse it.
    """

    def __init__(self, shape, level=K):
        self.shape = shape
        self.level = as_scalar(level)
        self.N = shape.N
        N = self.N
        self.b_labels = basis_b(shape)
        self._kappa = {}
        for a in self.b_labels:
            for b in self.b_labels:
                v = kappa_b(LieElem.basis(*a, N), LieElem.basis(*b, N), shape, self.level)
                if v:
                    self._kappa[(a, b)] = v
        self._act_cache = {}
        self._nprod_cache = {}
        self._d_cache = {}
        self._bracket_cache = {}

    def __repr__(self):
        return f"VertexAlgebra(shape={self.shape}, level={self.level})"

    # -- labels and states ---------------------------------------------------
    def is_even_label(self, x):
        return in_b(x, self.shape)

    def is_odd_label(self, x):
        return in_m(x, self.shape)

    def _check_mode(self, x):
        par, r, i, j = x
        if not (1 <= i <= self.N and 1 <= j <= self.N):
            raise ValueError(f"label ({i},{j}) outside gl_{self.N}")
        if par == 0 and not self.is_even_label((i, j)):
            raise ValueError(f"e_{i}{j} is not in b")
        if par == 1 and not self.is_odd_label((i, j)):
            raise ValueError(f"psi_{i}{j} is not in m")

    def vacuum(self):
        return VState.vacuum()

    def even(self, i, j, depth=1):
        """The state ``e_ij[-depth]|0>``."""
        x = emode(i, j, -depth)
        self._check_mode(x)
        return VState({(x,): ONE})

    def odd(self, i, j, m=0):
        """The state ``psi_ij[m]|0>`` (``m <= 0``)."""
        x = psimode(i, j, m)
        self._check_mode(x)
        if x[1] >= 0:
            return VState()
        return VState({(x,): ONE})

    def generators(self):
        """All generator states: ``x[-1]|0>`` for x in b and ``psi_y[0]|0>`` for y in m."""
        gens = [self.even(*x) for x in self.b_labels]
        gens += [self.odd(*x) for x in self.b_labels if self.is_odd_label(x)]
        return gens

    def monomial(self, modes, coeff=ONE):
        """Normal-ordered product of ``modes`` (outermost first) on the vacuum."""
        for x in modes:
            self._check_mode(x)
        return self.evaluate({tuple(modes): coeff})

    def evaluate(self, words):
        """Apply each tuple of modes right-to-left to the vacuum and sum."""
        out = {}
        for word, c in words.items():
            acc = {(): 1}
            for x in reversed(word):
                nxt = {}
                for m, v in acc.items():
                    for m2, v2 in self._act(x, m).items():
                        _addto(nxt, m2, v * v2)
                acc = nxt
            for m, v in acc.items():
                _addto(out, m, v * c)
        return VState._wrap(out)

    # -- the mode algebra ------------------------------------------------------
    def _bracket(self, x, y):
        key = (x, y)
        hit = self._bracket_cache.get(key)
        if hit is not None:
            return hit
        px, rx, ix, jx = x
        py, ry, iy, jy = y
        r = rx + ry
        central = None
        if px and py:
            brk = {}
        elif not px and not py:
            brk = {(0, r) + z: c for z, c in basis_bracket((ix, jx), (iy, jy)).items()}
            if r == 0 and rx:
                kv = self._kappa.get(((ix, jx), (iy, jy)))
                if kv:
                    central = kv * rx
        elif not px:
            brk = {(1, r) + z: c for z, c in basis_bracket((ix, jx), (iy, jy)).items()}
        else:
            brk = {(1, r) + z: -c for z, c in basis_bracket((iy, jy), (ix, jx)).items()}
        self._bracket_cache[key] = (brk, central)
        return brk, central

    def _act(self, x, mono):
        key = (x, mono)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        if not mono:
            res = {} if x[1] >= 0 else {(x,): 1}
        else:
            y = mono[0]
            if x[1] < 0 and x <= y:
                res = {} if (x == y and x[0]) else {(x,) + mono: 1}
            else:
                rest = mono[1:]
                res = {}
                brk, central = self._bracket(x, y)
                if central is not None:
                    _addto(res, rest, central)
                for z, c in brk.items():
                    for w, c2 in self._act(z, rest).items():
                        _addto(res, w, c * c2)
                sign = -1 if (x[0] and y[0]) else 1
                for w, c in self._act(x, rest).items():
                    for w2, c2 in self._act(y, w).items():
                        _addto(res, w2, sign * c * c2)
        self._act_cache[key] = res
        return res

    def mode_apply(self, x, v):
        """Apply the mode ``x = (parity, r, i, j)`` to the state ``v``."""
        self._check_mode(x)
        out = {}
        for m, c in v.terms.items():
            for m2, c2 in self._act(x, m).items():
                _addto(out, m2, c * c2)
        return VState._wrap(out)

    # -- n-th products -------------------------------------------------------
    def _nprod(self, amono, n, bmono):
        key = (amono, n, bmono)
        hit = self._nprod_cache.get(key)
        if hit is not None:
            return hit
        if not amono:
            res = {bmono: 1} if n == -1 else {}
        else:
            par, p, i, j = amono[0]
            w = amono[1:]
            if not w:
                # u t^p |0> = D^m u / m! with m = -p-1, and (D^m u / m!)_(n) = (-1)^m C(n, m) u_(n-m)
                m = -p - 1
                c = gbinom(n, m) * _sign(m)
                res = {}
                if c:
                    for m2, c2 in self._act((par, n - m, i, j), bmono).items():
                        _addto(res, m2, c * c2)
            else:
                res = {}
                dw, db = _weight(w), _weight(bmono)
                eps = -1 if (par and _parity(w)) else 1
                for jj in range(0, dw + db - n):
                    c = gbinom(p, jj) * _sign(jj)
                    if not c:
                        continue
                    x = (par, p - jj, i, j)
                    for m1, c1 in self._nprod(w, n + jj, bmono).items():
                        for m2, c2 in self._act(x, m1).items():
                            _addto(res, m2, c * c1 * c2)
                sign = -eps * _sign(p)
                for jj in range(0, db + 1):
                    c = sign * gbinom(p, jj) * _sign(jj)
                    if not c:
                        continue
                    for m1, c1 in self._act((par, jj, i, j), bmono).items():
                        for m2, c2 in self._nprod(w, p + n - jj, m1).items():
                            _addto(res, m2, c * c1 * c2)
        self._nprod_cache[key] = res
        return res

    def nth_product(self, a, n, b):
        """``a_(n) b`` for states ``a`` and ``b`` and any integer ``n``."""
        out = {}
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                c0 = ca * cb
                for m, c in self._nprod(ma, n, mb).items():
                    _addto(out, m, c0 * c)
        return VState._wrap(out)

    def nop(self, *states):
        """Right-normalized (-1)-product ``a1_(-1)(a2_(-1)(... an))``."""
        acc = states[-1]
        for a in reversed(states[:-1]):
            acc = self.nth_product(a, -1, acc)
        return acc

    # -- translation ----------------------------------------------------------
    def _d(self, mono):
        hit = self._d_cache.get(mono)
        if hit is not None:
            return hit
        res = {}
        if mono:
            par, r, i, j = mono[0]
            rest = mono[1:]
            for m, c in self._act((par, r - 1, i, j), rest).items():
                _addto(res, m, -r * c)
            for m, c in self._d(rest).items():
                for m2, c2 in self._act(mono[0], m).items():
                    _addto(res, m2, c * c2)
        self._d_cache[mono] = res
        return res

    def translate(self, a):
        """The translation operator D."""
        out = {}
        for m, c in a.terms.items():
            for m2, c2 in self._d(m).items():
                _addto(out, m2, c * c2)
        return VState._wrap(out)

    # -- the enveloping algebra of negative even modes ------------------------
    def embed_alg(self, a):
        """Send a tau-free element of U(b[t^-1]t^-1) to ``a|0>``."""
        if not isinstance(a, AlgElem):
            raise TypeError("expected an AlgElem")
        out = {}
        for (word, t), c in a.terms.items():
            if t:
                raise ValueError("element contains tau")
            mono = tuple((0, -d, i, j) for (d, i, j) in word)
            for x in mono:
                self._check_mode(x)
            out[mono] = c
        return VState._wrap(out)

    def to_alg(self, v):
        """Inverse of :meth:`embed_alg` on the V^k(b) subspace."""
        terms = {}
        for mono, c in v.terms.items():
            if any(x[0] for x in mono):
                raise ValueError("not in V^k(b)")
            terms[(tuple((-r, i, j) for (_, r, i, j) in mono), 0)] = c
        return AlgElem(terms)

    def cache_size(self):
        return len(self._act_cache) + len(self._nprod_cache) + len(self._d_cache)


# -- random states and the vertex-algebra axioms -----------------------------

def random_monomial(alg, rng, max_depth=4, odd=True):
    """A random normal-ordered monomial of total depth at most ``max_depth``."""
    evens = alg.b_labels
    odds = [x for x in evens if alg.is_odd_label(x)] if odd else []
    budget = rng.randint(1, max_depth)
    modes = []
    while budget > 0:
        d = rng.randint(1, budget)
        budget -= d
        if odds and rng.random() < 0.35:
            modes.append((1, -d) + rng.choice(odds))
        else:
            modes.append((0, -d) + rng.choice(evens))
    return alg.evaluate({tuple(modes): ONE})


def random_state(alg, rng, max_depth=4, terms=2, odd=True, parity=None):
    """Sum of a few random monomials with small integer coefficients.

    With ``parity`` set, only monomials of that parity are kept (possibly
    leaving a single one), so the result is homogeneous.
    """
    out = VState()
    tries = 0
    while tries < 50 and (not out or len(out) < terms):
        tries += 1
        m = random_monomial(alg, rng, max_depth, odd)
        if parity is not None and m.parity() != parity:
            continue
        out = out + m * rng.choice([1, -1, 2, -3])
    return out


def _pbinom_sign(a, b):
    return -1 if (a and b) else 1


def _dpow(alg, v, j):
    """``D^j v / j!``."""
    for t in range(1, j + 1):
        v = alg.translate(v) / t
    return v


def check_skew_symmetry(alg, a, b, n):
    """``b_(n)a = -(-1)^{|a||b|} sum_j (-1)^(n+j) D^(j)(a_(n+j)b)``."""
    eps = _pbinom_sign(a.parity(), b.parity())
    lhs = alg.nth_product(b, n, a)
    rhs = VState()
    top = a.weight() + b.weight() - n
    for j in range(0, max(top, 0) + 1):
        rhs = rhs + _dpow(alg, alg.nth_product(a, n + j, b), j) * (-eps * _sign(n + j))
    return lhs == rhs


def check_commutator(alg, a, b, c, m, n):
    """``a_(m) b_(n) c - (-1)^{|a||b|} b_(n) a_(m) c = sum_j C(m,j) (a_(j)b)_(m+n-j) c``."""
    eps = _pbinom_sign(a.parity(), b.parity())
    lhs = alg.nth_product(a, m, alg.nth_product(b, n, c)) \
        - alg.nth_product(b, n, alg.nth_product(a, m, c)) * eps
    rhs = VState()
    for j in range(0, a.weight() + b.weight() + 1):
        co = gbinom(m, j)
        if co:
            rhs = rhs + alg.nth_product(alg.nth_product(a, j, b), m + n - j, c) * co
    return lhs == rhs


def check_associativity(alg, a, b, c, m, n):
    """Iterate formula ``(a_(m)b)_(n)c = sum_j (-1)^j C(m,j)[a_(m-j) b_(n+j) c - (-1)^m eps b_(m+n-j) a_(j) c]``."""
    eps = _pbinom_sign(a.parity(), b.parity())
    lhs = alg.nth_product(alg.nth_product(a, m, b), n, c)
    rhs = VState()
    for j in range(0, max(b.weight() + c.weight() - n, 0) + 1):
        co = gbinom(m, j) * _sign(j)
        if co:
            rhs = rhs + alg.nth_product(a, m - j, alg.nth_product(b, n + j, c)) * co
    for j in range(0, a.weight() + c.weight() + 1):
        co = gbinom(m, j) * _sign(j) * _sign(m) * eps
        if co:
            rhs = rhs - alg.nth_product(b, m + n - j, alg.nth_product(a, j, c)) * co
    return lhs == rhs


def check_translation(alg, a, b, n):
    """``D`` is a derivation of every product and ``(Da)_(n) = -n a_(n-1)``."""
    D = alg.translate
    ab = alg.nth_product(a, n, b)
    left = D(ab) == alg.nth_product(D(a), n, b) + alg.nth_product(a, n, D(b))
    right = alg.nth_product(D(a), n, b) == alg.nth_product(a, n - 1, b) * (-n)
    return left and right
