import pytest

from oracles import random_allen_qcn
from qualadapt.qcn import QCN, ParamKind, var
from qualadapt.textformat import ParseError, format_qcn, parse_qcn


def test_dk_fixture(risotto, indu):
    q = parse_qcn((risotto / "dk.qcn").read_text())
    assert q.algebra is indu
    assert [str(v) for v in q.variables] == ["cook(carrot)", "cook(rice)", "serve"]
    assert q.label(var("cook", "rice"), var("cook", "carrot")) == indu.expand_shortcut("?<")
    assert q.label(var("cook", "rice"), var("serve")) == indu.expand_shortcut("m?")


def test_empty_network(allen):
    q = parse_qcn("algebra allen\n")
    assert q == QCN(allen)


def test_comments_and_declarations():
    q = parse_qcn("""# header
algebra allen
abstract x
abstract y placeholder
var cook(x)   # trailing
cook(y) {b, m} serve
""")
    kinds = {p.name: p.kind for v in q.variables for p in v.params}
    assert kinds == {"x": ParamKind.TEMPLATE, "y": ParamKind.PLACEHOLDER}


def test_missing_comma_position():
    with pytest.raises(ParseError) as err:
        parse_qcn("algebra allen\nA {b m} B\n")
    assert (err.value.line, err.value.column) == (2, 5)


def test_unknown_relation_position():
    with pytest.raises(ParseError) as err:
        parse_qcn("algebra indu\nA {m<, d>} B\n")
    assert (err.value.line, err.value.column) == (2, 8)


@pytest.mark.parametrize("text, line", [
    ("A {b} B\n", 1),
    ("algebra rcc8\n", 1),
    ("algebra allen\nA {b} \n", 2),
    ("algebra allen\nA b B\n", 2),
    ("algebra allen\nalgebra allen\n", 2),
    ("algebra allen\nA {b} A\n", 2),
    ("algebra allen\nabstract x concrete\n", 2),
    ("", 1),
])
def test_malformed(text, line):
    with pytest.raises(ParseError) as err:
        parse_qcn(text)
    assert err.value.line == line


def test_algebra_override_must_match():
    with pytest.raises(ParseError):
        parse_qcn("algebra allen\n", algebra="indu")
    assert parse_qcn("algebra allen\n", algebra="allen").algebra.name == "allen"


def test_empty_label_is_contradictory():
    q = parse_qcn("algebra allen\nA {} B\n")
    assert q.contradictory


def test_round_trip(allen, indu, rng, risotto):
    for _ in range(30):
        q = random_allen_qcn(rng, allen, rng.randint(1, 5))
        assert parse_qcn(format_qcn(q)) == q
    for name in ("dk", "source", "target"):
        q = parse_qcn((risotto / f"{name}.qcn").read_text())
        assert parse_qcn(format_qcn(q)) == q
    q = parse_qcn("algebra indu\nabstract x placeholder\ncook(x) {f<, m?} cook(rice)\n")
    assert parse_qcn(format_qcn(q)) == q
