import pytest
from hypothesis import given, settings, strategies as st

from mvlsync.dsl import network_source, parse_expr, parse_network
from mvlsync.errors import ParseError
from mvlsync.examples import example_source, load_example
from mvlsync.logic import And, Confirm, Const, ModAdd, Not, Or, Rotate, Var

from test_logic import exprs


def test_example1_parses():
    net = load_example("example1")
    assert (net.k, net.n) == (5, 3)
    assert net.z_rules[2] == Rotate(Var("x2"))


def test_precedence():
    e = parse_expr("!x1 & z1 | x1", 3, 1)
    assert e == Or(And(Not(Var("x1")), Var("z1")), Var("x1"))


def test_left_fold():
    assert parse_expr("x1 | x2 | x3", 2, 3) == Or(Or(Var("x1"), Var("x2")), Var("x3"))


def test_functions_and_constants():
    e = parse_expr("add(conf(2, x1), rot(#3))", 4, 1)
    assert e == ModAdd(Confirm(2, Var("x1")), Rotate(Const(3)))


def test_comments():
    src = "# header\nk = 2  # two-valued\nsystem X:\n  x1' = #1 # const then comment\nsystem Z:\n  z1' = x1\n"
    net = parse_network(src)
    assert net.x_rules == (Const(1),)


def test_empty_input():
    with pytest.raises(ParseError):
        parse_network("")


def test_node_count_mismatch():
    src = "k = 3\nsystem X:\n x1' = x1\n x2' = x2\n x3' = x3\nsystem Z:\n z1' = z1\n z2' = z2\n"
    with pytest.raises(ParseError, match="3 nodes but system Z has 2"):
        parse_network(src)


def test_k_too_small():
    with pytest.raises(ParseError, match="k must be"):
        parse_network("k = 1\nsystem X:\n x1' = x1\nsystem Z:\n z1' = z1\n")


@pytest.mark.parametrize("src,line,col", [
    ("k = 2\nsystem X:\n  x1' = x1 &\nsystem Z:\n  z1' = z1\n", 3, 13),
    ("k = 2\nsystem X:\n  x1' = y1\nsystem Z:\n  z1' = z1\n", 3, 9),
    ("k = 2\nsystem X:\n  x1' = x1 $ x1\nsystem Z:\n  z1' = z1\n", 3, 12),
    ("k = 2\nsystem X:\n  x1' = #3\nsystem Z:\n  z1' = z1\n", 3, 9),
])
def test_error_positions(src, line, col):
    with pytest.raises(ParseError) as info:
        parse_network(src)
    assert (info.value.line, info.value.column) == (line, col)
    assert f"line {line}, column {col}" in str(info.value)


def test_unknown_identifier_beyond_n():
    with pytest.raises(ParseError, match="unknown identifier"):
        parse_network("k = 2\nsystem X:\n x1' = x2\nsystem Z:\n z1' = z1\n")


def test_wrong_system_prefix():
    with pytest.raises(ParseError, match="must define x"):
        parse_network("k = 2\nsystem X:\n z1' = x1\nsystem Z:\n z1' = z1\n")


def test_duplicate_node():
    with pytest.raises(ParseError, match="twice"):
        parse_network("k = 2\nsystem X:\n x1' = x1\n x1' = x1\nsystem Z:\n z1' = z1\n")


def test_missing_node():
    with pytest.raises(ParseError, match="missing node x2"):
        parse_network("k = 2\nsystem X:\n x1' = x1\n x3' = x1\nsystem Z:\n z1' = z1\n z2' = z1\n")


@pytest.mark.parametrize("name", ["example1", "example2", "example3", "example4"])
def test_source_roundtrip(name):
    net = load_example(name)
    assert parse_network(network_source(net)) == net
    assert example_source(name).startswith("#")


@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_render_parse_roundtrip(data):
    k = data.draw(st.integers(2, 5))
    e = data.draw(exprs(k))
    assert parse_expr(str(e), k, 3) == e
