"""Associative algebras of negative modes with an adjoined ``tau``.

Two flavours of :class:`AlgElem` are supported:

``enveloping``
    U(b[t^-1]t^-1) (x) C[tau].  Letters are gl_N labels ``(depth, i, j)``
    standing for ``e_ij[-depth]``; words are kept in PBW order using
    ``[x[-r], y[-s]] = [x, y][-r-s]``.
``free``
    T(gl_{l,<=0}[t^-1]t^-1) (x) C[tau].  Letters are gl_l labels and words
    are arbitrary.

In both flavours ``[tau, x[-m]] = m x[-m-1]``, and ``tau`` is always moved to
the right end of a word, so a term is ``(word, tau_power) -> Scalar``.

The PBW order on letters sorts by depth (deepest first), then row, then
column.  Any fixed total order gives a basis; this one fixes how output reads.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb

from .coeff import ONE, ZERO, as_scalar
from .liealg import basis_bracket, embed

ENVELOPING = "enveloping"
FREE = "free"
TAU = "tau"

__all__ = [
    "AlgElem", "NCMatrix", "ENVELOPING", "FREE", "TAU", "normalize", "straighten",
    "cdet", "rdet", "build_B", "minor_D", "tmap", "letter_key",
]


def letter_key(x):
    return (-x[0], x[1], x[2])


def _is_sorted(word):
    return all(letter_key(word[t]) <= letter_key(word[t + 1]) for t in range(len(word) - 1))


def _bracket_letters(x, y):
    # [x[-r], y[-s]] = [x,y][-r-s]; no central term since all modes are negative
    d = x[0] + y[0]
    return {(d,) + z: c for z, c in basis_bracket(x[1:], y[1:]).items()}


def _addto(acc, key, c):
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


@lru_cache(maxsize=None)
def _env_lmul(x, word):
    """``x * word`` in PBW form, for a letter ``x`` and a PBW word."""
    if not word or letter_key(x) <= letter_key(word[0]):
        return {(x,) + word: 1}
    y, rest = word[0], word[1:]
    out = {}
    # x y rest = y (x rest) + [x, y] rest
    for w, c in _env_lmul(x, rest).items():
        for w2, c2 in _env_lmul(y, w).items():
            _addto(out, w2, c * c2)
    for z, c in _bracket_letters(x, y).items():
        for w, c2 in _env_lmul(z, rest).items():
            _addto(out, w, c * c2)
    return out


@lru_cache(maxsize=None)
def _env_normal(word):
    """PBW normal form of an arbitrary word of letters."""
    if _is_sorted(word):
        return {word: 1}
    acc = {(): 1}
    for x in reversed(word):
        nxt = {}
        for w, c in acc.items():
            for w2, c2 in _env_lmul(x, w).items():
                _addto(nxt, w2, c * c2)
        acc = nxt
    return acc


def _word_mul(u, v, flavor):
    if flavor == FREE:
        return {u + v: 1}
    if not u:
        return {v: 1}
    acc = {v: 1}
    for x in reversed(u):
        nxt = {}
        for w, c in acc.items():
            for w2, c2 in _env_lmul(x, w).items():
                _addto(nxt, w2, c * c2)
        acc = nxt
    return acc


@lru_cache(maxsize=None)
def _derive(word, flavor, times=1):
    """``D^times(word)`` where ``D(x[-m]) = m x[-m-1]`` acts as a derivation."""
    if times == 0:
        return {word: 1}
    if times > 1:
        out = {}
        for w, c in _derive(word, flavor, times - 1).items():
            for w2, c2 in _derive(w, flavor, 1).items():
                _addto(out, w2, c * c2)
        return out
    out = {}
    for t, x in enumerate(word):
        shifted = word[:t] + ((x[0] + 1, x[1], x[2]),) + word[t + 1:]
        if flavor == ENVELOPING:
            for w, c in _env_normal(shifted).items():
                _addto(out, w, x[0] * c)
        else:
            _addto(out, shifted, x[0])
    return out


def _fmt_letter(x, latex=False):
    d, i, j = x
    idx = f"{i}{j}" if i < 10 and j < 10 else f"{i},{j}"
    if latex:
        return f"e_{{{idx}}}[-{d}]"
    return f"e_{idx}[-{d}]"


def _has_top_level_sum(s):
    depth = 0
    for t, ch in enumerate(s):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif depth == 0 and t > 0 and ch in "+-" and s[t - 1] == " ":
            return True
    return False


def _fmt_coeff(c, latex):
    s = c.format(latex=latex)
    if s == "1":
        return "", False
    if s == "-1":
        return "-", False
    if _has_top_level_sum(s):
        return f"({s})", True
    return s, True


def format_terms(items, fmt_word, latex=False, tau_power=None):
    """Shared pretty printer: ``items`` is a list of (coeff, word-string)."""
    parts = []
    for coeff, wstr in items:
        cs, needs_space = _fmt_coeff(coeff, latex)
        if not wstr:
            body = coeff.format(latex=latex)
        else:
            sep = " " if needs_space else ""
            body = f"{cs}{sep}{wstr}"
        if parts:
            if body.startswith("-"):
                parts.append(f"- {body[1:]}")
            else:
                parts.append(f"+ {body}")
        else:
            parts.append(body)
    return " ".join(parts) if parts else "0"


class AlgElem:
    """Element of U(b[t^-1]t^-1) (x) C[tau] or of the free-tensor analogue.

    ``terms`` maps ``(word, tau_power)`` to a nonzero :class:`Scalar`.
    """

    __slots__ = ("terms", "flavor")

    def __init__(self, terms=None, flavor=ENVELOPING):
        if flavor not in (ENVELOPING, FREE):
            raise ValueError(f"unknown flavor {flavor!r}")
        self.flavor = flavor
        self.terms = {}
        for (word, a), c in (terms or {}).items():
            c = as_scalar(c)
            if not c:
                continue
            word = tuple(tuple(x) for x in word)
            if flavor == ENVELOPING and not _is_sorted(word):
                for w, c2 in _env_normal(word).items():
                    self._add((w, a), c * c2)
            else:
                self._add((word, a), c)

    def _add(self, key, c):
        v = self.terms.get(key)
        v = c if v is None else v + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    @classmethod
    def _from_dict(cls, terms, flavor):
        obj = object.__new__(cls)
        obj.flavor = flavor
        obj.terms = terms
        return obj

    # constructors
    @classmethod
    def one(cls, flavor=ENVELOPING):
        return cls({((), 0): ONE}, flavor)

    @classmethod
    def scalar(cls, c, flavor=ENVELOPING):
        return cls({((), 0): c}, flavor)

    @classmethod
    def mode(cls, i, j, depth=1, flavor=ENVELOPING):
        if depth < 1:
            raise ValueError("mode depth must be >= 1")
        return cls({(((depth, i, j),), 0): ONE}, flavor)

    @classmethod
    def tau(cls, flavor=ENVELOPING):
        return cls({((), 1): ONE}, flavor)

    # algebra
    def _coerce(self, other):
        if isinstance(other, AlgElem):
            if other.flavor != self.flavor:
                raise ValueError("mixed algebra flavors")
            return other
        return AlgElem.scalar(as_scalar(other), self.flavor)

    def __add__(self, other):
        other = self._coerce(other)
        out = AlgElem._from_dict(dict(self.terms), self.flavor)
        for key, c in other.terms.items():
            out._add(key, c)
        return out

    __radd__ = __add__

    def __neg__(self):
        return AlgElem._from_dict({k: -c for k, c in self.terms.items()}, self.flavor)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, AlgElem):
            c = as_scalar(other)
            if not c:
                return AlgElem(flavor=self.flavor)
            return AlgElem._from_dict({k: v * c for k, v in self.terms.items()}, self.flavor)
        other = self._coerce(other)
        out = AlgElem._from_dict({}, self.flavor)
        fl = self.flavor
        for (u, a), cu in self.terms.items():
            for (v, b), cv in other.terms.items():
                c0 = cu * cv
                # u tau^a v tau^b = sum_c C(a,c) u D^c(v) tau^(a-c+b)
                for s in range(a + 1):
                    binom = comb(a, s)
                    for dv, cd in _derive(v, fl, s).items():
                        for w, cw in _word_mul(u, dv, fl).items():
                            out._add((w, a - s + b), c0 * (binom * cd * cw))
        return out

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, c):
        return self * as_scalar(c).inverse()

    def __pow__(self, e):
        out = AlgElem.one(self.flavor)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgElem):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return self.flavor == other.flavor and self.terms == other.terms

    def __hash__(self):
        return hash((self.flavor, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # structure
    def max_tau(self):
        return max((a for (_, a) in self.terms), default=0)

    def is_tau_free(self):
        return all(a == 0 for (_, a) in self.terms)

    def tau_coefficient(self, a):
        """The tau-free element multiplying ``tau^a``."""
        return AlgElem({(w, 0): c for (w, b), c in self.terms.items() if b == a}, self.flavor)

    def words(self):
        """Iterate ``(word, coeff)`` for a tau-free element."""
        for (w, a), c in self.terms.items():
            if a:
                raise ValueError("element contains tau")
            yield w, c

    def map_coeffs(self, f):
        return AlgElem({k: f(c) for k, c in self.terms.items()}, self.flavor)

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (-kv[0][1], len(kv[0][0]), [letter_key(x) for x in kv[0][0]]))

    def format(self, latex=False, alpha=None):
        items = []
        for (w, a), c in self.sorted_terms():
            ws = " ".join(_fmt_letter(x, latex) for x in w)
            if a:
                t = "\\tau" if latex else "tau"
                ts = t if a == 1 else (f"{t}^{{{a}}}" if latex else f"{t}^{a}")
                ws = f"{ws} {ts}" if ws else ts
            items.append((c, ws))
        return format_terms(items, None, latex)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"AlgElem({self.format()}, {self.flavor})"


def normalize(raw, flavor=ENVELOPING):
    """Canonical form of ``sum coeff * letters`` where letters may include TAU.

    ``raw`` maps tuples of letters (``(depth, i, j)`` or :data:`TAU`) to
    coefficients.
    """
    out = AlgElem(flavor=flavor)
    for letters, c in raw.items():
        term = AlgElem.scalar(c, flavor)
        for x in letters:
            term = term * (AlgElem.tau(flavor) if x == TAU else
                           AlgElem({((tuple(x),), 0): ONE}, flavor))
        out = out + term
    return out


def straighten(raw, strategy="leftmost", flavor=ENVELOPING):
    """Rewrite raw words into normal form by local moves.

    Repeatedly picks the ``leftmost`` or ``rightmost`` adjacent pair that is
    out of order and applies ``y x = x y - [x, y]`` or moves ``tau`` right via
    ``tau x[-m] = x[-m] tau + m x[-m-1]``.  Used as an independent check on
    :func:`normalize`.
    """
    todo = dict(raw)
    done = {}
    while todo:
        word, c = todo.popitem()
        if not c:
            continue
        spots = [t for t in range(len(word) - 1) if _out_of_order(word[t], word[t + 1], flavor)]
        if not spots:
            taus = sum(1 for x in word if x == TAU)
            letters = tuple(x for x in word if x != TAU)
            key = (letters, taus)
            done[key] = done.get(key, ZERO) + c
            continue
        t = spots[0] if strategy == "leftmost" else spots[-1]
        x, y = word[t], word[t + 1]
        pre, post = word[:t], word[t + 2:]
        swapped = pre + (y, x) + post
        todo[swapped] = todo.get(swapped, ZERO) + c
        if x == TAU:
            extra = {((y[0] + 1, y[1], y[2]),): y[0]}
        else:
            extra = {(z,): v for z, v in _bracket_letters(x, y).items()}
        for mid, v in extra.items():
            w = pre + mid + post
            todo[w] = todo.get(w, ZERO) + c * v
    return AlgElem({k: v for k, v in done.items()}, flavor)


def _out_of_order(x, y, flavor):
    if x == TAU:
        return y != TAU
    if y == TAU:
        return False
    return flavor == ENVELOPING and letter_key(x) > letter_key(y)


# -- matrices and determinants ----------------------------------------------

class NCMatrix:
    """Square matrix with :class:`AlgElem` entries of one flavor."""

    def __init__(self, rows, flavor=None):
        self.rows = [list(r) for r in rows]
        self.size = len(self.rows)
        if any(len(r) != self.size for r in self.rows):
            raise ValueError("matrix must be square")
        flavors = {e.flavor for r in self.rows for e in r}
        if len(flavors) > 1:
            raise ValueError("entries of mixed flavor")
        if flavor is not None and flavors - {flavor}:
            raise ValueError("entries do not match the declared flavor")
        self.flavor = flavors.pop() if flavors else (flavor or ENVELOPING)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def trailing(self, p):
        return NCMatrix([r[self.size - p:] for r in self.rows[self.size - p:]], self.flavor)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for s in range(len(perm)):
        if seen[s]:
            continue
        t, length = s, 0
        while not seen[t]:
            seen[t] = True
            t = perm[t]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _perm_sum(M, column_order):
    n = M.size
    total = AlgElem(flavor=M.flavor)
    if n == 0:
        return AlgElem.one(M.flavor)

    def entry(pos, choice):
        return M[choice, pos] if column_order else M[pos, choice]

    # depth-first over positions, skipping zero entries
    def walk(pos, used, perm, acc):
        nonlocal total
        if pos == n:
            total = total + acc * _perm_sign(perm)
            return
        for choice in range(n):
            if choice in used:
                continue
            e = entry(pos, choice)
            if not e:
                continue
            walk(pos + 1, used | {choice}, perm + [choice], acc * e)

    walk(0, frozenset(), [], AlgElem.one(M.flavor))
    return total


def cdet(M):
    """Column determinant: sum over sigma of sgn(sigma) a_{s(1)1} ... a_{s(N)N}."""
    return _perm_sum(M, column_order=True)


def rdet(M):
    """Row determinant: sum over sigma of sgn(sigma) a_{1s(1)} ... a_{Ns(N)}."""
    return _perm_sum(M, column_order=False)


def minor_D(M, p):
    """Column determinant of the trailing ``p x p`` submatrix; ``D^(0) = 1``."""
    if not 0 <= p <= M.size:
        raise ValueError(f"minor size {p} out of range 0..{M.size}")
    return cdet(M.trailing(p))


def build_B(shape, flavor=None):
    """The ``l x l`` matrix with ``alpha tau + e_ii[-1]`` on the diagonal.

    Superdiagonal entries are ``-1`` and entries below the diagonal are
    ``e_ij[-1]``.  By default, for ``n = 1`` the entries live in the enveloping
    algebra of b; otherwise in the free tensor algebra over gl_l labels.
    """
    if flavor is None:
        flavor = ENVELOPING if shape.n == 1 else FREE
    elif flavor not in (ENVELOPING, FREE):
        raise ValueError(f"unknown flavor {flavor!r}")
    elif flavor == ENVELOPING and shape.n != 1:
        raise ValueError("enveloping entries need n = 1")
    alpha = shape.alpha
    l = shape.l
    rows = []
    for i in range(1, l + 1):
        row = []
        for j in range(1, l + 1):
            if i == j:
                e = AlgElem.tau(flavor) * alpha + AlgElem.mode(i, i, 1, flavor)
            elif j == i + 1:
                e = AlgElem.scalar(-1, flavor)
            elif i > j:
                e = AlgElem.mode(i, j, 1, flavor)
            else:
                e = AlgElem(flavor=flavor)
            row.append(e)
        rows.append(row)
    return NCMatrix(rows)


# -- the matrix-element homomorphism T_ij -----------------------------------

@lru_cache(maxsize=None)
def _tmap_word(i, j, word, n):
    """``T_ij(word)`` as a dict of PBW words over gl_N labels."""
    if not word:
        return {(): 1} if i == j else {}
    out = {}
    m = len(word)
    for mids in itertools.product(range(1, n + 1), repeat=m - 1):
        chain = (i,) + mids + (j,)
        # T_ab(x) = x (x) e_ba
        letters = tuple(
            (x[0],) + embed((x[1], x[2], chain[s + 1], chain[s]), n)
            for s, x in enumerate(word)
        )
        for w, c in _env_normal(letters).items():
            _addto(out, w, c)
    return out


def tmap(i, j, a, shape):
    """Apply ``T_ij`` to a free-tensor element; the result is enveloping."""
    n = shape.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"T index ({i},{j}) out of range 1..{n}")
    if a.flavor == ENVELOPING:
        if n != 1:
            raise ValueError("T_ij expects a free-tensor element")
        return a
    if a.flavor != FREE:
        raise ValueError(f"unknown flavor {a.flavor!r}")
    out = AlgElem._from_dict({}, ENVELOPING)
    for (w, t), c in a.terms.items():
        for w2, c2 in _tmap_word(i, j, w, n).items():
            out._add((w2, t), c * c2)
    return out
