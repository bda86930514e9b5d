"""Command-line interface: ``wgen <command> --n N --l L [options]``.

Exit status is 0 when everything requested passes, 1 when a verification
fails and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from math import gcd

from .brst import (BRST, ODD_RULES, check_q_derivation, check_q_squared, check_q_translation,
                   intertwining_failures)
from .coeff import K, Scalar, as_scalar, scalar_eval
from .liealg import LieElem, Shape, basis_b, embed, kappa_b, unembed
from .pbw import AlgElem
from .vertex import (VertexAlgebra, check_associativity, check_commutator,
                     check_skew_symmetry, check_translation, random_state)
from .walgebra import (L_VARIANTS, Report, conformal_vector_22, extract_generators,
                       kw_central_charge, max_rank, miura, reference_l3_22,
                       verify_centralizer_basis, verify_closure,
                       verify_miura_factorization, virasoro_checks)

SUITES = ("brst", "miura", "axioms", "q-squared", "intertwine", "leading")


class UsageError(Exception):
    pass


# -- serialization --------------------------------------------------------------

def scalar_to_json(c):
    """Integer coefficient lists for numerator and denominator, low degree first.

    Both lists are cleared of fractions together and divided by their common
    content, and the leading denominator coefficient is positive, so equal
    scalars always serialize identically.
    """
    c = as_scalar(c)
    num = [Fraction(int(x.numerator), int(x.denominator)) for x in c.num]
    den = [Fraction(int(x.numerator), int(x.denominator)) for x in c.den]
    m = 1
    for x in num + den:
        m = m * x.denominator // gcd(m, x.denominator)
    num = [int(x * m) for x in num]
    den = [int(x * m) for x in den]
    g = 0
    for x in num + den:
        g = gcd(g, x)
    return {"num": [x // g for x in num], "den": [x // g for x in den]}


def scalar_from_json(d):
    try:
        num, den = d["num"], d["den"]
        if not all(isinstance(x, int) for x in list(num) + list(den)):
            raise TypeError
    except (KeyError, TypeError):
        raise UsageError(f"malformed coefficient {d!r}") from None
    if not any(den):
        raise UsageError("zero denominator")
    return Scalar.from_polys(num, den)


def _label_to_json(i, j, n):
    if n == 1:
        return {"i": i, "j": j, "p": None, "q": None}
    t = unembed((i, j), n)
    return {"i": t.i, "j": t.j, "p": t.p, "q": t.q}


def _label_from_json(w, n):
    try:
        i, j, p, q = w["i"], w["j"], w.get("p"), w.get("q")
    except (KeyError, TypeError):
        raise UsageError(f"malformed word entry {w!r}") from None
    if p is None and q is None:
        return i, j
    if p is None or q is None:
        raise UsageError("p and q must both be given or both be null")
    return embed((i, j, p, q), n)


def element_to_json(x, shape):
    """JSON form of an :class:`AlgElem` (enveloping) or a :class:`VState`."""
    n = shape.n
    terms = []
    if isinstance(x, AlgElem):
        for (w, t), c in x.sorted_terms():
            word = [dict(_label_to_json(i, j, n), depth=d, odd=False) for (d, i, j) in w]
            terms.append({"coeff": scalar_to_json(c), "word": word, "tau": t})
    else:
        for mono, c in x.sorted_terms():
            word = []
            for par, r, i, j in mono:
                depth = -(r + 1) if par else -r
                word.append(dict(_label_to_json(i, j, n), depth=depth, odd=bool(par)))
            terms.append({"coeff": scalar_to_json(c), "word": word, "tau": 0})
    return {"terms": terms}


def state_from_json(d, alg):
    """Parse a state; words are read outermost mode first and normal ordered."""
    n = alg.shape.n
    if not isinstance(d, dict) or not isinstance(d.get("terms"), list):
        raise UsageError("expected an object with a 'terms' list")
    words = {}
    for t in d["terms"]:
        if t.get("tau", 0):
            raise UsageError("states cannot contain tau")
        modes = []
        for w in t.get("word", []):
            i, j = _label_from_json(w, n)
            depth = w.get("depth")
            if not isinstance(depth, int):
                raise UsageError(f"malformed depth in {w!r}")
            x = (1, -depth - 1, i, j) if w.get("odd") else (0, -depth, i, j)
            try:
                alg._check_mode(x)
            except ValueError as e:
                raise UsageError(str(e)) from None
            if x[1] >= 0:
                raise UsageError(f"annihilation mode in state file: {w!r}")
            modes.append(x)
        key = tuple(modes)
        words[key] = words.get(key, 0) + scalar_from_json(t.get("coeff"))
    return alg.evaluate(words)


def alg_from_json(d, shape):
    n = shape.n
    terms = {}
    for t in d["terms"]:
        word = []
        for w in t["word"]:
            if w.get("odd"):
                raise UsageError("odd modes are not allowed here")
            i, j = _label_from_json(w, n)
            word.append((w["depth"], i, j))
        terms[(tuple(word), t.get("tau", 0))] = scalar_from_json(t["coeff"])
    return AlgElem(terms)


# -- level handling --------------------------------------------------------------

def parse_level(text):
    if text in (None, "k", "K"):
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"level must be 'k' or a rational number, got {text!r}") from None


def _special(c, level):
    if level is None:
        return c
    try:
        return as_scalar(scalar_eval(c, level))
    except ZeroDivisionError:
        raise UsageError(f"level {level} is a pole of {c}") from None


def _special_elem(x, level):
    if level is None:
        return x
    return x.map_coeffs(lambda c: _special(c, level))


def _fmt(c, fmt):
    return c.format(latex=(fmt == "latex"))


# -- commands ----------------------------------------------------------------------

def _shape(args):
    try:
        shape = Shape(args.n, args.l)
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from None
    if shape.N > max_rank():
        raise UsageError(f"shape too large: N={shape.N} > {max_rank()}")
    return shape


def _gen_name(i, j, r, shape, latex=False):
    if latex:
        return f"W^{{({r})}}" if shape.n == 1 else f"W_{{{i}{j}}}^{{({r})}}"
    return f"W^({r})" if shape.n == 1 else f"W_{i}{j}^({r})"


def _emit_table(rows, shape, fmt, out):
    """rows: list of (name_text, name_latex, element, key)."""
    if fmt == "json":
        data = [{"name": key, "element": element_to_json(x, shape)} for _, _, x, key in rows]
        out.write(json.dumps(data, sort_keys=True) + "\n")
        return
    for text, latex, x, _ in rows:
        if fmt == "latex":
            out.write(f"{latex} &= {x.format(latex=True)},\\\\\n")
        else:
            out.write(f"{text} = {x.format()}\n")


def cmd_generators(args, out):
    shape = _shape(args)
    level = parse_level(args.level)
    gens = extract_generators(shape)
    rows = []
    for (i, j, r), w in gens.items():
        rows.append((_gen_name(i, j, r, shape), _gen_name(i, j, r, shape, True),
                     _special_elem(w, level), _gen_name(i, j, r, shape)))
    _emit_table(rows, shape, args.format, out)
    return 0


def cmd_miura(args, out):
    shape = _shape(args)
    level = parse_level(args.level)
    gens = extract_generators(shape)
    rows = []
    for (i, j, r), w in gens.items():
        name = _gen_name(i, j, r, shape)
        rows.append((f"nu({name})", f"\\nu({_gen_name(i, j, r, shape, True)})",
                     _special_elem(miura(w, shape), level), f"nu({name})"))
    _emit_table(rows, shape, args.format, out)
    rep = verify_miura_factorization(shape, gens)
    if args.format != "json":
        _write_report(rep, out, args.format)
    return 0 if rep.passed else 1


def _parse_basis(text, N):
    labels = []
    for tok in text.split(","):
        tok = tok.strip()
        if "." in tok:
            a, b = tok.split(".", 1)
        elif len(tok) == 2:
            a, b = tok[0], tok[1]
        else:
            raise UsageError(f"cannot read basis label {tok!r} (use 'ij' or 'i.j')")
        try:
            labels.append((int(a), int(b)))
        except ValueError:
            raise UsageError(f"cannot read basis label {tok!r}") from None
    return labels


def _default_basis(shape):
    if (shape.n, shape.l) == (2, 2):
        return [(1, 1), (2, 2), (3, 3), (4, 4), (1, 2), (2, 1), (3, 4), (4, 3)]
    b = basis_b(shape)
    return [x for x in b if x[0] == x[1]] + [x for x in b if x[0] != x[1]]


def kappa_table(shape, basis, level=None):
    """``rows[y][x] = kappa_b(x, y)``: columns are x, rows are y."""
    N = shape.N
    out = []
    for y in basis:
        row = []
        for x in basis:
            v = kappa_b(LieElem.basis(*x, N), LieElem.basis(*y, N), shape)
            row.append(_special(v, level))
        out.append(row)
    return out


def cmd_kappa_table(args, out):
    shape = _shape(args)
    level = parse_level(args.level)
    basis = _parse_basis(args.basis, shape.N) if args.basis else _default_basis(shape)
    try:
        table = kappa_table(shape, basis, level)
    except ValueError as e:
        raise UsageError(str(e)) from None
    names = [f"e_{i}{j}" if i < 10 and j < 10 else f"e_{i},{j}" for i, j in basis]
    if args.format == "json":
        data = {"basis": [list(x) for x in basis],
                "rows": [[scalar_to_json(c) for c in row] for row in table]}
        out.write(json.dumps(data, sort_keys=True) + "\n")
    elif args.format == "latex":
        out.write("\\begin{tabular}{|c|" + "c|" * len(basis) + "}\n\\hline\n")
        out.write(" & " + " & ".join(f"${n.replace('_', '_{')}}}$" for n in names) + " \\\\\n\\hline\n")
        for nm, row in zip(names, table):
            cells = " & ".join(f"${c.format(latex=True)}$" for c in row)
            out.write(f"${nm.replace('_', '_{')}}}$ & {cells} \\\\\n\\hline\n")
        out.write("\\end{tabular}\n")
    else:
        cells = [[c.format() for c in row] for row in table]
        width = max([len(n) for n in names] + [len(c) for row in cells for c in row])
        out.write(" " * (width + 2) + "  ".join(n.rjust(width) for n in names) + "\n")
        for nm, row in zip(names, cells):
            out.write(nm.rjust(width) + "  " + "  ".join(c.rjust(width) for c in row) + "\n")
    return 0


def _algebra(shape, level):
    return VertexAlgebra(shape, K if level is None else as_scalar(level))


def _specialized_gens(gens, level):
    if level is None:
        return gens
    from .walgebra import GeneratorSet
    return GeneratorSet(gens.shape, {key: _special_elem(w, level) for key, w in gens.W.items()})


def suite_axioms(alg, rng, samples, depth):
    rep = Report("vertex axioms")
    names = ("quasi-associativity", "skew-symmetry", "commutator formula", "D-derivation")
    fails = {n: [] for n in names}
    t0 = time.perf_counter()
    for idx in range(samples):
        a = random_state(alg, rng, depth, 2, parity=rng.randint(0, 1))
        b = random_state(alg, rng, depth, 2, parity=rng.randint(0, 1))
        c = random_state(alg, rng, depth, 2)
        m, n = rng.randint(-2, 3), rng.randint(-2, 3)
        if not check_associativity(alg, a, b, c, m, n):
            fails[names[0]].append(idx)
        if not check_skew_symmetry(alg, a, b, n):
            fails[names[1]].append(idx)
        if not check_commutator(alg, a, b, c, abs(m), n):
            fails[names[2]].append(idx)
        if not check_translation(alg, a, b, n):
            fails[names[3]].append(idx)
    dt = time.perf_counter() - t0
    for nm in names:
        rep.add(f"{nm} on {samples} random instances {alg.shape}", not fails[nm],
                f"failing samples {fails[nm][:5]}", dt / len(names))
    return rep


def suite_q(brst, rng, samples, depth):
    alg = brst.algebra
    rep = Report("BRST properties")
    f = {"Q^2 = 0": [], "[Q, D] = 0": [], "Q derivation": []}
    t0 = time.perf_counter()
    for g in alg.generators():
        if not check_q_squared(brst, g):
            f["Q^2 = 0"].append(str(g))
    for idx in range(samples):
        v = random_state(alg, rng, depth, 2)
        if not check_q_squared(brst, v):
            f["Q^2 = 0"].append(idx)
        if not check_q_translation(brst, v):
            f["[Q, D] = 0"].append(idx)
        a = random_state(alg, rng, max(depth - 1, 1), 1, parity=rng.randint(0, 1))
        b = random_state(alg, rng, max(depth - 1, 1), 1)
        if not check_q_derivation(brst, a, b, rng.randint(-2, 1)):
            f["Q derivation"].append(idx)
    dt = time.perf_counter() - t0
    for nm, bad in f.items():
        rep.add(f"{nm} on generators and {samples} random states {alg.shape}", not bad,
                f"failing {bad[:5]}", dt / 3)
    return rep


def run_suite(name, shape, level, seed, samples, depth, odd_rule="natural"):
    rng = random.Random(seed)
    if name == "brst":
        gens = _specialized_gens(extract_generators(shape), level)
        return verify_closure(gens, BRST(_algebra(shape, level), odd_rule=odd_rule))
    if name == "miura":
        return verify_miura_factorization(shape)
    if name == "leading":
        return verify_centralizer_basis(shape)
    if name == "axioms":
        return suite_axioms(_algebra(shape, level), rng, samples, depth)
    if name == "q-squared":
        alg = _algebra(shape, level)
        return suite_q(BRST(alg, odd_rule=odd_rule), rng, samples, depth)
    if name == "intertwine":
        alg = _algebra(shape, level)
        rep = Report("intertwining")
        t0 = time.perf_counter()
        bad = intertwining_failures(alg, "ordered", BRST(alg, odd_rule=odd_rule))
        rep.add(f"[Q, T~_pq(a)] = T~_pq([Qbar, a]) for all generators a, all p,q {shape}",
                not bad, str(bad[:5]), time.perf_counter() - t0)
        return rep
    raise UsageError(f"unknown suite {name!r}")


def _write_report(rep, out, fmt):
    if fmt == "json":
        data = {"title": rep.title, "passed": rep.passed,
                "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness}
                           for c in rep.checks]}
        out.write(json.dumps(data, sort_keys=True) + "\n")
    else:
        for line in rep.lines():
            out.write(line + "\n")


def cmd_verify(args, out):
    shape = _shape(args)
    level = parse_level(args.level)
    suites = args.suite or ["brst"]
    if "all" in suites:
        suites = list(SUITES)
    total = Report("verify")
    for s in suites:
        rep = run_suite(s, shape, level, args.seed, args.samples, args.depth_bound, args.odd_rule)
        total.extend(rep)
    _write_report(total, out, args.format)
    return 0 if total.passed else 1


def _parse_range(text):
    try:
        if ":" in text:
            a, b = text.split(":", 1)
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad range {text!r}; use 'a:b' or a comma list") from None


def _read_state(path, alg):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e.msg})") from None
    return state_from_json(data, alg)


def cmd_ope(args, out):
    shape = _shape(args)
    level = parse_level(args.level)
    alg = _algebra(shape, level)
    a = _read_state(args.a, alg)
    b = _read_state(args.b, alg)
    results = [(n, alg.nth_product(a, n, b)) for n in _parse_range(args.range)]
    if args.format == "json":
        out.write(json.dumps([{"n": n, "element": element_to_json(v, shape)} for n, v in results],
                             sort_keys=True) + "\n")
    else:
        latex = args.format == "latex"
        for n, v in results:
            lhs = f"a_{{({n})}}b" if latex else f"a_({n})b"
            out.write(f"{lhs} = {v.format(latex=latex)}\n")
    return 0


def cmd_conformal(args, out):
    if (args.n, args.l) != (2, 2):
        raise UsageError("the conformal vector is only available for --n 2 --l 2")
    shape = _shape(args)
    level = parse_level(args.level)
    alg = _algebra(shape, level)
    L = conformal_vector_22(alg, variant=args.variant)
    expected = reference_l3_22() if args.variant == "reference" else kw_central_charge(shape) / 2
    rep = virasoro_checks(alg, L, _special(expected, level), f"Virasoro OPE, {args.variant} L")
    latex = args.format == "latex"
    if args.format == "json":
        data = {"L": element_to_json(L, shape),
                "products": [{"n": n, "element": element_to_json(alg.nth_product(L, n, L), shape)}
                             for n in range(4)]}
        out.write(json.dumps(data, sort_keys=True) + "\n")
        _write_report(rep, out, "json")
    else:
        out.write(f"L = {L.format(latex=latex)}\n")
        for n in (3, 2, 1, 0):
            out.write(f"L_({n})L = {alg.nth_product(L, n, L).format(latex=latex)}\n")
        _write_report(rep, out, "text")
    return 0 if rep.passed else 1


# -- entry point ---------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="wgen", description="Generators of rectangular W-algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=True):
        sp.add_argument("--n", type=int, default=1, help="number of Jordan blocks")
        sp.add_argument("--l", type=int, default=2, help="size of each Jordan block")
        sp.add_argument("--level", default="k", help="'k' (symbolic) or a rational value")
        if fmt:
            sp.add_argument("--format", choices=("text", "json", "latex"), default="text")

    common(sub.add_parser("generators", help="print all W_ij^(r)"))
    common(sub.add_parser("miura", help="Miura images and the factorization check"))
    kt = sub.add_parser("kappa-table", help="the form kappa_b on a basis of b")
    common(kt)
    kt.add_argument("--basis", help="comma list of labels, e.g. 11,22,12 or 10.3")
    v = sub.add_parser("verify", help="run verification suites")
    common(v)
    v.add_argument("--suite", action="append", choices=SUITES + ("all",))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--depth-bound", type=int, default=4)
    v.add_argument("--odd-rule", choices=ODD_RULES, default="natural")
    o = sub.add_parser("ope", help="n-th products of two states read from JSON files")
    common(o)
    o.add_argument("--a", required=True, help="JSON file with the left state")
    o.add_argument("--b", required=True, help="JSON file with the right state")
    o.add_argument("--range", default="0:3", help="values of n, 'a:b' or comma list")
    c = sub.add_parser("conformal", help="the conformal vector for (2,2) and its OPE")
    common(c)
    c.set_defaults(n=2, l=2)
    c.add_argument("--variant", choices=L_VARIANTS, default="reference")
    return p


COMMANDS = {
    "generators": cmd_generators, "miura": cmd_miura, "kappa-table": cmd_kappa_table,
    "verify": cmd_verify, "ope": cmd_ope, "conformal": cmd_conformal,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"wgen: error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"wgen: error: {e}", file=sys.stderr)
        return 2
    except ZeroDivisionError:
        print(f"wgen: error: level {args.level} is a pole", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
