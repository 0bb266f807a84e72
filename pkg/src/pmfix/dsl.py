"""The ``.pmspec`` configuration language.

A config is a list of statements ``space = ...``, ``map = ...``,
``sample = ...`` and ``params = ...``::

    # the first worked example, written out by hand
    space = pmetric {
        when x <= 0 and y <= 0: abs(x - y);
        otherwise: abs(x - y) + 1;
    }
    map = map { when x <= 0: x / 2; otherwise: 1; }
    sample = union(range(-2, 0, 0.5), list(0.5, 1, 2))
    params = { alpha: 0.75; epsilon1: 0.5; }

Cases are tried in order and the last one must be ``otherwise``.  Spaces
and maps may instead be ``catalog("id")`` or an explicit ``table { ... }``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Optional

from . import catalog
from .errors import EvalError, ParseError, ValidationError
from .orbits import SelfMap, table_map
from .spaces import PMetricSpace, SampleSet, finite_space

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Cmp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class BoolOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Case:
    pred: Optional[object]  # None for ``otherwise``
    expr: object


@dataclass(frozen=True)
class PiecewiseExpr:
    kind: str  # "pmetric" or "map"
    cases: tuple
    pos: tuple = field(default=(0, 0), compare=False, repr=False)
    end: tuple = field(default=(0, 0), compare=False, repr=False)

    @property
    def variables(self) -> tuple:
        return ("x", "y") if self.kind == "pmetric" else ("x",)


@dataclass(frozen=True)
class CatalogRef:
    id: str
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Table:
    rows: tuple  # tuple of tuples of expressions
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Generator:
    kind: str  # list | range | geometric | union
    args: tuple  # expressions, or Generators for union
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Params:
    items: tuple  # ((key, expr), ...)
    positions: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class Stmt:
    key: str
    value: object
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


# ---------------------------------------------------------------------------
# tokens

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<str>"[^"\n]*")
  | (?P<op><=|>=|==|[-+*/(){},;:=<>])
""", re.VERBOSE)

_CMP_OPS = ("<=", "<", "==", ">=", ">")
FUNCTIONS = {"abs": (1, 1), "max": (2, None), "min": (2, None)}
GENERATORS = ("list", "range", "geometric", "union")
STATEMENTS = ("space", "map", "sample", "params")
PARAM_KEYS = {
    "alpha": float, "epsilon1": float, "Q": int, "q_cap": int, "max_iter": int,
    "tol": float, "tail": int, "power": int,
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    toks = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            ch = text[pos]
            if ch == '"':
                raise ParseError("unterminated string", line, col)
            raise ParseError(f"unexpected character {ch!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind not in ("ws", "comment"):
                toks.append(Token(kind, s, line, col))
            col += len(s)
        pos = m.end()
    toks.append(Token("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected):
        tok = self.tok
        shown = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(f"unexpected {shown}", tok.line, tok.column, expected)

    def at(self, *texts) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text in texts

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail([text])
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def config(self) -> tuple:
        stmts = []
        while self.tok.kind != "eof":
            tok = self.tok
            if not (tok.kind == "ident" and tok.text in STATEMENTS):
                self.fail(STATEMENTS)
            self.i += 1
            self.expect("=")
            value = self.params() if tok.text == "params" else self.value()
            self.accept(";")
            stmts.append(Stmt(tok.text, value, tok.line, tok.column))
        if not stmts:
            self.fail(STATEMENTS)
        return tuple(stmts)

    def value(self):
        tok = self.tok
        nxt = self.toks[self.i + 1] if tok.kind != "eof" else tok
        if tok.kind == "ident":
            if tok.text == "catalog":
                return self.catalogref()
            if tok.text in ("pmetric", "map") and nxt.text == "{":
                return self.piecewise()
            if tok.text == "table":
                return self.table()
            if tok.text in GENERATORS:
                return self.generator()
        self.fail(("catalog", "pmetric", "map", "table") + GENERATORS)

    def catalogref(self) -> CatalogRef:
        head = self.expect("catalog")
        self.expect("(")
        tok = self.tok
        if tok.kind != "str":
            self.fail(["STRING"])
        self.i += 1
        self.expect(")")
        return CatalogRef(tok.text[1:-1], (head.line, head.column))

    def piecewise(self) -> PiecewiseExpr:
        head = self.tok
        self.i += 1
        self.expect("{")
        cases = []
        while not self.at("}"):
            if self.accept("otherwise"):
                pred = None
            elif self.accept("when"):
                pred = self.pred()
            else:
                self.fail(["when", "otherwise", "}"])
            self.expect(":")
            expr = self.expr()
            self.expect(";")
            cases.append(Case(pred, expr))
        close = self.expect("}")
        return PiecewiseExpr(head.text, tuple(cases), (head.line, head.column),
                             (close.line, close.column))

    def table(self) -> Table:
        head = self.expect("table")
        self.expect("{")
        rows = []
        while not self.at("}"):
            row = [self.expr()]
            while self.accept(","):
                row.append(self.expr())
            self.expect(";")
            rows.append(tuple(row))
        self.expect("}")
        return Table(tuple(rows), (head.line, head.column))

    def generator(self) -> Generator:
        head = self.tok
        if not (head.kind == "ident" and head.text in GENERATORS):
            self.fail(GENERATORS)
        self.i += 1
        self.expect("(")
        item = self.generator if head.text == "union" else self.expr
        args = [item()]
        while self.accept(","):
            args.append(item())
        self.expect(")")
        return Generator(head.text, tuple(args), (head.line, head.column))

    def params(self) -> Params:
        self.expect("{")
        items, where = [], []
        while not self.at("}"):
            tok = self.tok
            if tok.kind != "ident":
                self.fail(["IDENT", "}"])
            self.i += 1
            self.expect(":")
            items.append((tok.text, self.expr()))
            where.append((tok.line, tok.column))
            self.expect(";")
        self.expect("}")
        return Params(tuple(items), tuple(where))

    # predicates and expressions

    def pred(self):
        node = self.conj()
        while self.accept("or"):
            node = BoolOp("or", node, self.conj())
        return node

    def conj(self):
        node = self.comparison()
        while self.accept("and"):
            node = BoolOp("and", node, self.comparison())
        return node

    def comparison(self):
        left = self.expr()
        if self.tok.kind == "op" and self.tok.text in _CMP_OPS:
            op = self.tok.text
            self.i += 1
            return Cmp(op, left, self.expr())
        self.fail(_CMP_OPS + ("+", "-", "*", "/"))

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in ("+", "-"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in ("*", "/"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        return self.atom()

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            value = float(tok.text)
            if not math.isfinite(value):
                raise ValidationError(f"numeric literal {tok.text} out of range",
                                      tok.line, tok.column)
            return Num(value)
        if tok.kind == "ident" and tok.text not in _KEYWORDS:
            self.i += 1
            if self.accept("("):
                args = [self.expr()]
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
                return Call(tok.text, tuple(args), (tok.line, tok.column))
            return Var(tok.text, (tok.line, tok.column))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.fail(["NUMBER", "IDENT", "(", "-"])


_KEYWORDS = frozenset(("when", "otherwise", "and", "or"))


# ---------------------------------------------------------------------------
# evaluation


def eval_expr(node, bindings: dict) -> float:
    """Evaluate an expression, predicate, or whole piecewise definition."""
    if isinstance(node, PiecewiseExpr):
        for case in node.cases:
            if case.pred is None or eval_expr(case.pred, bindings):
                return eval_expr(case.expr, bindings)
        raise EvalError("no case matched")
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return bindings[node.name]
        except KeyError:
            raise EvalError(f"unbound variable {node.name!r}") from None
    if isinstance(node, Neg):
        return -eval_expr(node.operand, bindings)
    if isinstance(node, BinOp):
        a = eval_expr(node.left, bindings)
        b = eval_expr(node.right, bindings)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0:
            raise EvalError("division by zero")
        return a / b
    if isinstance(node, Call):
        args = [eval_expr(a, bindings) for a in node.args]
        if node.fn == "abs":
            return abs(args[0])
        if node.fn == "max":
            return max(args)
        if node.fn == "min":
            return min(args)
        raise EvalError(f"unknown function {node.fn!r}")
    if isinstance(node, Cmp):
        a = eval_expr(node.left, bindings)
        b = eval_expr(node.right, bindings)
        return {"<=": a <= b, "<": a < b, "==": a == b, ">=": a >= b, ">": a > b}[node.op]
    if isinstance(node, BoolOp):
        if node.op == "and":
            return eval_expr(node.left, bindings) and eval_expr(node.right, bindings)
        return eval_expr(node.left, bindings) or eval_expr(node.right, bindings)
    raise EvalError(f"cannot evaluate {type(node).__name__}")


def _where(node, default=(0, 0)) -> tuple:
    """Source position of ``node`` or of its first positioned descendant."""
    pos = getattr(node, "pos", None)
    if pos and pos != (0, 0):
        return pos
    for child in _children(node):
        found = _where(child, None)
        if found:
            return found
    return default


def _children(node):
    if isinstance(node, (BinOp, Cmp, BoolOp)):
        return (node.left, node.right)
    if isinstance(node, Neg):
        return (node.operand,)
    if isinstance(node, (Call, Generator)):
        return node.args
    return ()


def _check_names(node, allowed, what):
    """Reject free variables outside ``allowed`` and functions with bad arity."""
    if isinstance(node, Var):
        if node.name not in allowed:
            line, col = _where(node)
            names = ", ".join(allowed) if allowed else "no variables"
            raise ValidationError(f"{what} may only use {names}; found {node.name!r}", line, col)
    elif isinstance(node, Call):
        line, col = _where(node)
        if node.fn not in FUNCTIONS:
            raise ValidationError(f"unknown function {node.fn!r}", line, col, FUNCTIONS)
        lo, hi = FUNCTIONS[node.fn]
        if len(node.args) < lo or (hi is not None and len(node.args) > hi):
            raise ValidationError(f"{node.fn}() takes {lo}{'' if hi else '+'} argument(s), "
                                  f"got {len(node.args)}", line, col)
        for a in node.args:
            _check_names(a, allowed, what)
    elif isinstance(node, (BinOp, Cmp, BoolOp)):
        _check_names(node.left, allowed, what)
        _check_names(node.right, allowed, what)
    elif isinstance(node, Neg):
        _check_names(node.operand, allowed, what)
    elif isinstance(node, PiecewiseExpr):
        for case in node.cases:
            if case.pred is not None:
                _check_names(case.pred, allowed, what)
            _check_names(case.expr, allowed, what)


def _const(node, what="constant", at=(0, 0)) -> float:
    _check_names(node, (), what)
    try:
        return float(eval_expr(node, {}))
    except EvalError as exc:
        line, col = _where(node, at)
        raise ValidationError(f"{what}: {exc}", line, col) from None


def parse_expr(text: str, variables=("x",)):
    """Parse a bare arithmetic expression (handy for tests and the REPL)."""
    p = _Parser(text)
    node = p.expr()
    if p.tok.kind != "eof":
        p.fail(["+", "-", "*", "/", "end of input"])
    _check_names(node, tuple(variables), "expression")
    return node


# ---------------------------------------------------------------------------
# resolution


@dataclass(frozen=True, eq=False)
class SpaceSpec:
    """A resolved config; ``source`` is the statement list it came from.

    Two specs are equal when their sources are structurally equal.
    """

    space: PMetricSpace
    map: SelfMap
    sample: SampleSet
    params: dict
    source: tuple

    def __eq__(self, other):
        return isinstance(other, SpaceSpec) and self.source == other.source

    __hash__ = None


def _validate_piecewise(pw: PiecewiseExpr):
    for case in pw.cases[:-1]:
        if case.pred is None:
            raise ValidationError("otherwise case must come last", *_where(case.expr, pw.pos))
    if not pw.cases or pw.cases[-1].pred is not None:
        raise ValidationError("missing otherwise case", *pw.end)
    what = "pmetric" if pw.kind == "pmetric" else "map"
    _check_names(pw, pw.variables, what)


def _sample_points(gen: Generator) -> list:
    line, col = gen.pos
    if gen.kind == "union":
        pts = []
        for g in gen.args:
            pts += _sample_points(g)
        return pts
    vals = [_const(a, f"{gen.kind}() argument", gen.pos) for a in gen.args]
    if gen.kind == "list":
        return vals
    if len(vals) != 3:
        raise ValidationError(f"{gen.kind}() takes 3 arguments, got {len(vals)}", line, col)
    if gen.kind == "range":
        a, b, step = vals
        if step <= 0:
            raise ValidationError("range() step must be positive", line, col)
        count = math.floor((b - a) / step + 1e-9) + 1
        if count > 100_000:
            raise ValidationError("range() produces too many points", line, col)
        return [a + i * step for i in range(max(count, 0))]
    a, ratio, count = vals
    if count < 0 or not float(count).is_integer() or count > 100_000:
        raise ValidationError("geometric() count must be a nonnegative integer", line, col)
    return [a * ratio ** i for i in range(int(count))]


def _resolve(stmts: tuple) -> SpaceSpec:
    seen = {}
    for st in stmts:
        if st.key in seen:
            raise ValidationError(f"duplicate {st.key!r} statement", st.line, st.column)
        seen[st.key] = st
    if "space" not in seen:
        last = stmts[-1]
        raise ValidationError("missing space statement", last.line, last.column)

    st = seen["space"]
    val = st.value
    entry = None
    if isinstance(val, CatalogRef):
        entry = _catalog_entry(val)
        space = entry.space
    elif isinstance(val, PiecewiseExpr) and val.kind == "pmetric":
        _validate_piecewise(val)
        space = PMetricSpace("config", _pmetric_fn(val))
    elif isinstance(val, Table):
        rows = [[_const(v, "table entry", val.pos) for v in row] for row in val.rows]
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValidationError("space table must be a nonempty square matrix", st.line, st.column)
        space = finite_space(rows, "config-table")
    else:
        raise ValidationError("space must be catalog(...), pmetric {...} or table {...}",
                              st.line, st.column)

    if "map" in seen:
        st_m = seen["map"]
        val = st_m.value
        if isinstance(val, CatalogRef):
            T = _catalog_entry(val).map
        elif isinstance(val, PiecewiseExpr) and val.kind == "map":
            _validate_piecewise(val)
            T = SelfMap("config-map", _map_fn(val))
        elif isinstance(val, Table):
            if len(val.rows) != 1:
                raise ValidationError("map table must be a single row of images",
                                      st_m.line, st_m.column)
            T = table_map([_const(v, "table entry", val.pos) for v in val.rows[0]], "config-map")
        else:
            raise ValidationError("map must be catalog(...), map {...} or table {...}",
                                  st_m.line, st_m.column)
    elif entry is not None:
        T = entry.map
    else:
        raise ValidationError("missing map statement", st.line, st.column)

    if "sample" in seen:
        st_s = seen["sample"]
        val = st_s.value
        if isinstance(val, CatalogRef):
            sample = _catalog_entry(val).space.sample
        elif isinstance(val, Generator):
            pts = _sample_points(val)
            if not pts:
                raise ValidationError("empty sample", st_s.line, st_s.column)
            sample = SampleSet.of(pts, pretty_value(val))
        else:
            raise ValidationError("sample must be list(...), range(...), geometric(...), "
                                  "union(...) or catalog(...)", st_s.line, st_s.column)
    elif space.sample is not None:
        sample = space.sample
    else:
        raise ValidationError("missing sample statement", st.line, st.column)

    params = {}
    if "params" in seen:
        pv = seen["params"].value
        for (key, expr), (line, col) in zip(pv.items, pv.positions):
            if key not in PARAM_KEYS:
                raise ValidationError(f"unknown parameter {key!r}", line, col, PARAM_KEYS)
            v = _const(expr, f"parameter {key}", (line, col))
            if PARAM_KEYS[key] is int:
                if not float(v).is_integer():
                    raise ValidationError(f"parameter {key} must be an integer", line, col)
                v = int(v)
            _check_param_range(key, v, line, col)
            params[key] = v
    if "power" in params and params["power"] > 1:
        T = T.power(params["power"])
    return SpaceSpec(space, T, sample, params, stmts)


def _check_param_range(key, v, line, col):
    ok = {
        "alpha": 0 <= v < 1,
        "epsilon1": v > 0,
        "tol": v > 0,
    }.get(key, v >= 1)
    if not ok:
        raise ValidationError(f"parameter {key}={v} out of range", line, col)


def _catalog_entry(ref: CatalogRef):
    try:
        return catalog.get(ref.id)
    except KeyError:
        line, col = ref.pos
        raise ValidationError(f"unknown catalog id {ref.id!r}", line, col,
                              catalog.CATALOG_IDS) from None


def _pmetric_fn(pw):
    def p(x, y):
        return eval_expr(pw, {"x": x, "y": y})
    return p


def _map_fn(pw):
    def f(x):
        return eval_expr(pw, {"x": x})
    return f


def parse_space_config(text: str) -> SpaceSpec:
    """Parse and resolve a ``.pmspec`` document.

    Raises :class:`ParseError` for syntax problems and
    :class:`ValidationError` for well-formed input that makes no sense;
    both carry line and column.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc.reason}", 1, exc.start + 1) from None
    try:
        return _resolve(_Parser(text).config())
    except RecursionError:
        raise ValidationError("expression nesting too deep", 1, 1) from None


def load_space_config(path) -> SpaceSpec:
    with open(path, "rb") as fh:
        return parse_space_config(fh.read())


# ---------------------------------------------------------------------------
# pretty printing


def _fmt_num(v: float) -> str:
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 4


def pretty_expr(node) -> str:
    """Render with the fewest parentheses that keep the tree shape."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        inner = pretty_expr(node.operand)
        return f"-{inner}" if _prec(node.operand) >= 3 else f"-({inner})"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left, right = pretty_expr(node.left), pretty_expr(node.right)
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}"
    if isinstance(node, Call):
        return f"{node.fn}({', '.join(pretty_expr(a) for a in node.args)})"
    if isinstance(node, Cmp):
        return f"{pretty_expr(node.left)} {node.op} {pretty_expr(node.right)}"
    if isinstance(node, BoolOp):
        return f"{pretty_expr(node.left)} {node.op} {pretty_expr(node.right)}"
    raise TypeError(f"not an expression: {node!r}")


def pretty_value(value) -> str:
    if isinstance(value, CatalogRef):
        return f'catalog("{value.id}")'
    if isinstance(value, PiecewiseExpr):
        lines = [f"{value.kind} {{"]
        for case in value.cases:
            head = "otherwise" if case.pred is None else f"when {pretty_expr(case.pred)}"
            lines.append(f"    {head}: {pretty_expr(case.expr)};")
        lines.append("}")
        return "\n".join(lines)
    if isinstance(value, Table):
        rows = [f"    {', '.join(pretty_expr(v) for v in row)};" for row in value.rows]
        return "\n".join(["table {"] + rows + ["}"])
    if isinstance(value, Generator):
        inner = ", ".join(pretty_value(a) if isinstance(a, Generator) else pretty_expr(a)
                          for a in value.args)
        return f"{value.kind}({inner})"
    if isinstance(value, Params):
        body = " ".join(f"{k}: {pretty_expr(v)};" for k, v in value.items)
        return f"{{ {body} }}"
    raise TypeError(f"not a statement value: {value!r}")


def pretty(spec_or_stmts) -> str:
    """Render a spec (or its statements) back into ``.pmspec`` text."""
    stmts = spec_or_stmts.source if isinstance(spec_or_stmts, SpaceSpec) else spec_or_stmts
    return "\n".join(f"{st.key} = {pretty_value(st.value)}" for st in stmts) + "\n"
