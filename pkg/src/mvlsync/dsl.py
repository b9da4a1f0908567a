"""Parser for the coupled-network source format.

Example::

    k = 5
    system X:
      x1' = x1 | !x3 | z1
      x2' = x1 | !x2
      x3' = z2
    system Z:
      z1' = x1 | z1 | !z3
      z2' = z1 | !z2
      z3' = rot(x2)

Operators by binding strength: ``!`` (negation), ``&`` (conjunction),
``|`` (disjunction). Function forms: ``add(a, b)``, ``conf(i, a)``,
``rot(a)``. ``#i`` is the constant of level ``i``. A ``#`` at the start of a
line, or after whitespace and not followed by a digit, opens a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .logic import And, Confirm, Const, Expr, ModAdd, Not, Or, Rotate, Var

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<const>\#\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[!&|(),=:'])
    """,
    re.VERBOSE,
)

_FUNCS = {"add", "conf", "rot"}
_NODE = re.compile(r"([xz])([1-9]\d*)$")


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _strip_comment(line: str) -> str:
    if line.lstrip().startswith("#"):
        return ""
    for m in re.finditer(r"(?<=\s)#(?!\d)", line):
        return line[:m.start()]
    return line


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return toks


class _ExprParser:
    def __init__(self, toks: list[_Tok], lineno: int, line_len: int):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.end_col = line_len + 1

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def _err(self, msg, tok=None):
        col = tok.col if tok is not None else self.end_col
        raise ParseError(msg, self.lineno, col)

    def _expect(self, text):
        tok = self._peek()
        if tok is None or tok.text != text:
            self._err(f"expected {text!r}", tok)
        self.i += 1
        return tok

    def parse(self) -> Expr:
        e = self._or()
        tok = self._peek()
        if tok is not None:
            self._err(f"unexpected {tok.text!r}", tok)
        return e

    def _or(self):
        e = self._and()
        while (tok := self._peek()) is not None and tok.text == "|":
            self.i += 1
            e = Or(e, self._and())
        return e

    def _and(self):
        e = self._unary()
        while (tok := self._peek()) is not None and tok.text == "&":
            self.i += 1
            e = And(e, self._unary())
        return e

    def _unary(self):
        tok = self._peek()
        if tok is not None and tok.text == "!":
            self.i += 1
            return Not(self._unary())
        return self._atom()

    def _atom(self):
        tok = self._peek()
        if tok is None:
            self._err("unexpected end of expression")
        self.i += 1
        if tok.kind == "const":
            return _ConstTok(int(tok.text[1:]), tok.col)
        if tok.text == "(":
            e = self._or()
            self._expect(")")
            return e
        if tok.kind == "ident":
            if tok.text in _FUNCS:
                self._expect("(")
                if tok.text == "add":
                    a = self._or()
                    self._expect(",")
                    b = self._or()
                    e = ModAdd(a, b)
                elif tok.text == "conf":
                    itok = self._peek()
                    if itok is None or itok.kind != "int":
                        self._err("conf() needs an integer index first", itok)
                    self.i += 1
                    self._expect(",")
                    e = _ConfTok(int(itok.text), itok.col, self._or())
                else:
                    e = Rotate(self._or())
                self._expect(")")
                return e
            return _VarTok(tok.text, tok.col)
        self._err(f"unexpected {tok.text!r}", tok)


# Position-carrying leaves, resolved once k and n are known.
class _VarTok:
    def __init__(self, name, col):
        self.name, self.col = name, col


class _ConstTok:
    def __init__(self, level, col):
        self.level, self.col = level, col


class _ConfTok:
    def __init__(self, index, col, arg):
        self.index, self.col, self.arg = index, col, arg


def _resolve(e: Expr, k: int, n: int, lineno: int) -> Expr:
    """Validate leaves against ``k``/``n`` and strip parser bookkeeping."""
    if isinstance(e, _VarTok):
        m = _NODE.match(e.name)
        if m is None or int(m.group(2)) > n:
            raise ParseError(f"unknown identifier {e.name!r}", lineno, e.col)
        return Var(e.name)
    if isinstance(e, _ConstTok):
        if not 1 <= e.level <= k:
            raise ParseError(f"constant #{e.level} outside [1, {k}]", lineno, e.col)
        return Const(e.level)
    if isinstance(e, _ConfTok):
        if not 1 <= e.index <= k:
            raise ParseError(f"confirmor index {e.index} outside [1, {k}]", lineno, e.col)
        return Confirm(e.index, _resolve(e.arg, k, n, lineno))
    if isinstance(e, Not):
        return Not(_resolve(e.arg, k, n, lineno))
    if isinstance(e, Rotate):
        return Rotate(_resolve(e.arg, k, n, lineno))
    if isinstance(e, (And, Or, ModAdd)):
        return type(e)(_resolve(e.left, k, n, lineno), _resolve(e.right, k, n, lineno))
    raise AssertionError(f"unexpected node {e!r}")


def parse_expr(text: str, k: int, n: int) -> Expr:
    """Parse a single expression over ``x1..xn, z1..zn``."""
    toks = _tokenize(text, 1)
    if not toks:
        raise ParseError("empty expression", 1, 1)
    return _resolve(_ExprParser(toks, 1, len(text)).parse(), k, n, 1)


def parse_network(text: str):
    """Parse network source into a :class:`~mvlsync.network.Network`."""
    from .network import Network

    k = None
    k_line = None
    systems: dict[str, dict[int, tuple[Expr, int]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        toks = _tokenize(line, lineno)
        if not toks:
            continue
        head = toks[0]
        if head.text == "k" and len(toks) > 1 and toks[1].text == "=":
            if k is not None:
                raise ParseError("k declared twice", lineno, head.col)
            if len(toks) != 3 or toks[2].kind != "int":
                raise ParseError("expected 'k = <int>'", lineno, head.col)
            k, k_line = int(toks[2].text), lineno
            if k < 2:
                raise ParseError(f"k must be >= 2, got {k}", lineno, toks[2].col)
            continue
        if head.text == "system":
            if (len(toks) != 3 or toks[1].text not in ("X", "Z") or toks[2].text != ":"):
                raise ParseError("expected 'system X:' or 'system Z:'", lineno, head.col)
            current = toks[1].text
            if current in systems:
                raise ParseError(f"system {current} declared twice", lineno, head.col)
            if k is None:
                raise ParseError("'k = <int>' must precede the systems", lineno, head.col)
            systems[current] = {}
            continue
        # rule: name ' = expr
        if head.kind != "ident" or len(toks) < 3 or toks[1].text != "'" or toks[2].text != "=":
            raise ParseError("expected a rule of the form \"name' = expr\"", lineno, head.col)
        if current is None:
            raise ParseError("rule outside a 'system' block", lineno, head.col)
        m = _NODE.match(head.text)
        prefix = current.lower()
        if m is None or m.group(1) != prefix:
            raise ParseError(f"system {current} rules must define {prefix}<i> nodes, got {head.text!r}",
                             lineno, head.col)
        idx = int(m.group(2))
        if idx in systems[current]:
            raise ParseError(f"node {head.text} defined twice", lineno, head.col)
        if len(toks) == 3:
            raise ParseError("missing expression", lineno, len(line) + 1)
        expr = _ExprParser(toks[3:], lineno, len(line)).parse()
        systems[current][idx] = (expr, lineno)

    if k is None and not systems:
        raise ParseError("empty input: expected 'k = <int>'", 1, 1)
    if k is None:
        raise ParseError("missing 'k = <int>'", 1, 1)
    for name in ("X", "Z"):
        if name not in systems:
            raise ParseError(f"missing 'system {name}:' block", k_line, 1)
    nx, nz = len(systems["X"]), len(systems["Z"])
    if nx != nz:
        raise ParseError(f"system X has {nx} nodes but system Z has {nz}")
    if nx == 0:
        raise ParseError("systems must declare at least one node")
    n = nx
    rules = {}
    for name in ("X", "Z"):
        block = systems[name]
        prefix = name.lower()
        gaps = sorted(set(range(1, n + 1)) - set(block))
        if gaps:
            raise ParseError(f"system {name} is missing node {prefix}{gaps[0]}")
        rules[name] = tuple(_resolve(block[i][0], k, n, block[i][1]) for i in range(1, n + 1))
    return Network(k=k, n=n, x_rules=rules["X"], z_rules=rules["Z"])


def network_source(net) -> str:
    """Render a network back to source text."""
    lines = [f"k = {net.k}", "system X:"]
    lines += [f"  x{i + 1}' = {e}" for i, e in enumerate(net.x_rules)]
    lines.append("system Z:")
    lines += [f"  z{i + 1}' = {e}" for i, e in enumerate(net.z_rules)]
    return "\n".join(lines) + "\n"
