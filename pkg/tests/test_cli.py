import io
import json
import random

import pytest
from hypothesis import given, strategies as st

from wgen.cli import (alg_from_json, element_to_json, kappa_table, main, scalar_from_json,
                      scalar_to_json, state_from_json)
from wgen.coeff import K, Scalar
from wgen.liealg import Shape
from wgen.vertex import VertexAlgebra, random_state
from wgen.walgebra import extract_generators


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_generators_text_22():
    code, text = run("generators", "--n", "2", "--l", "2", "--format", "text")
    assert code == 0
    lines = text.splitlines()
    assert len(lines) == 8
    assert "W_11^(2) = (k + 2) e_33[-2] + e_31[-1] + e_11[-1] e_33[-1] + e_21[-1] e_34[-1]" in lines
    assert "W_12^(1) = e_21[-1] + e_43[-1]" in lines


def test_generators_json_round_trip():
    shape = Shape(2, 2)
    code, text = run("generators", "--n", "2", "--l", "2", "--format", "json")
    assert code == 0
    data = json.loads(text)
    gens = extract_generators(shape)
    for item, ((i, j, r), w) in zip(data, gens.items()):
        assert item["name"] == f"W_{i}{j}^({r})"
        assert alg_from_json(item["element"], shape) == w
    word = data[0]["element"]["terms"][0]["word"][0]
    assert set(word) == {"i", "j", "p", "q", "depth", "odd"}


def test_principal_json_has_null_tensor_labels():
    code, text = run("generators", "--n", "1", "--l", "2", "--format", "json")
    w = json.loads(text)[1]["element"]["terms"][0]["word"][0]
    assert w["p"] is None and w["q"] is None


def test_output_is_byte_identical():
    for argv in (["generators", "--n", "2", "--l", "2", "--format", "json"],
                 ["kappa-table", "--n", "2", "--l", "2"],
                 ["verify", "--n", "1", "--l", "3", "--suite", "axioms", "--samples", "5", "--seed", "4"]):
        assert run(*argv) == run(*argv)


def test_numeric_level():
    code, text = run("generators", "--n", "1", "--l", "2", "--level", "3/2")
    assert code == 0
    assert "W^(2) = 5/2 e_22[-2] + e_21[-1] + e_11[-1] e_22[-1]" in text


def test_kappa_table_default_basis():
    code, text = run("kappa-table", "--n", "2", "--l", "2", "--format", "json")
    data = json.loads(text)
    assert data["basis"][:4] == [[1, 1], [2, 2], [3, 3], [4, 4]]
    assert scalar_from_json(data["rows"][0][0]) == (3 * K + 8) / 4
    assert scalar_from_json(data["rows"][4][5]) == K + 2


def test_kappa_table_custom_basis_and_latex():
    code, text = run("kappa-table", "--n", "1", "--l", "3", "--basis", "11,22,31", "--format", "latex")
    assert code == 0 and text.startswith("\\begin{tabular}")
    assert run("kappa-table", "--n", "1", "--l", "3", "--basis", "13")[0] == 2
    assert run("kappa-table", "--n", "1", "--l", "3", "--basis", "1x")[0] == 2


def test_kappa_table_at_numeric_level():
    rows = kappa_table(Shape(2, 2), [(1, 1), (1, 2), (2, 1)], 0)
    assert rows[0][0] == 2 and rows[1][2] == 2


def test_miura_command():
    code, text = run("miura", "--n", "2", "--l", "2")
    assert code == 0
    assert "nu(W_11^(2)) = (k + 2) e_33[-2] + e_11[-1] e_33[-1] + e_21[-1] e_34[-1]" in text
    assert "PASS  nu-factorization T_22 (2,2)" in text


def test_verify_brst_12():
    code, text = run("verify", "--n", "1", "--l", "2", "--suite", "brst")
    assert code == 0 and text.count("PASS") == 2


def test_verify_failure_exits_1():
    code, text = run("verify", "--n", "2", "--l", "3", "--suite", "q-squared",
                     "--odd-rule", "transported", "--samples", "3")
    assert code == 1 and "FAIL  Q^2 = 0" in text


def test_verify_json():
    code, text = run("verify", "--n", "2", "--l", "2", "--suite", "intertwine", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["passed"] and len(data["checks"]) == 1


def test_usage_errors(tmp_path):
    assert run("generators", "--n", "3", "--l", "3")[0] == 2
    assert run("generators", "--n", "0")[0] == 2
    assert run("generators", "--level", "abc")[0] == 2
    assert run("generators", "--bogus")[0] == 2
    assert run("conformal", "--n", "1", "--l", "2")[0] == 2
    assert run("conformal", "--level", "-4")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("ope", "--n", "1", "--l", "2", "--a", str(bad), "--b", str(bad))[0] == 2
    assert run("ope", "--n", "1", "--l", "2", "--a", str(tmp_path / "none"), "--b", str(bad))[0] == 2
    odd = tmp_path / "odd.json"
    odd.write_text(json.dumps({"terms": [{"coeff": {"num": [1], "den": [1]}, "tau": 0,
                                          "word": [{"i": 1, "j": 2, "p": None, "q": None,
                                                    "depth": 1, "odd": False}]}]}))
    assert run("ope", "--n", "1", "--l", "2", "--a", str(odd), "--b", str(odd))[0] == 2


def _state_file(tmp_path, name, state, shape):
    p = tmp_path / name
    p.write_text(json.dumps(element_to_json(state, shape)))
    return str(p)


def test_ope_command(tmp_path):
    shape = Shape(2, 2)
    V = VertexAlgebra(shape)
    a = _state_file(tmp_path, "a.json", V.even(1, 2), shape)
    b = _state_file(tmp_path, "b.json", V.even(2, 1), shape)
    code, text = run("ope", "--n", "2", "--l", "2", "--a", a, "--b", b, "--range", "0:2")
    assert code == 0
    assert text.splitlines() == ["a_(0)b = e_11[-1] |0> - e_22[-1] |0>", "a_(1)b = (k + 2) |0>", "a_(2)b = 0"]
    code, text = run("ope", "--n", "2", "--l", "2", "--a", a, "--b", b, "--range", "1", "--format", "json")
    data = json.loads(text)
    assert data[0]["n"] == 1
    assert state_from_json(data[0]["element"], V) == V.vacuum() * (K + 2)


def test_conformal_command():
    code, text = run("conformal", "--variant", "virasoro", "--level", "3")
    assert code == 0 and "FAIL" not in text
    code, text = run("conformal", "--variant", "reference")
    assert code == 1 and "FAIL  L_(1)L = 2L" in text


@pytest.mark.parametrize("shape", [Shape(1, 3), Shape(2, 2)])
def test_state_json_round_trip(shape):
    V = VertexAlgebra(shape)
    rng = random.Random(9)
    for _ in range(30):
        v = random_state(V, rng, 4, 3) * ((K + 1) / 3)
        data = json.loads(json.dumps(element_to_json(v, shape)))
        assert state_from_json(data, V) == v


polys = st.lists(st.integers(-9, 9), min_size=1, max_size=4)


@given(polys, polys.filter(any), st.integers(1, 12))
def test_scalar_json_canonical(num, den, scale):
    a = Scalar.from_polys(num, den)
    j = scalar_to_json(a)
    assert scalar_from_json(j) == a
    # a different presentation of the same scalar serializes identically
    b = Scalar.from_polys([x * scale for x in num], [x * scale for x in den])
    assert scalar_to_json(b) == j
    if a:
        assert j["den"][-1] > 0


def test_scalar_json_examples():
    assert scalar_to_json((3 * K + 8) / 4) == {"num": [8, 3], "den": [4]}
    assert scalar_to_json(K + 2) == {"num": [2, 1], "den": [1]}
    assert scalar_to_json(Scalar(0)) == {"num": [], "den": [1]}
