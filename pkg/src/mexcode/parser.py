"""Tokenizer and recursive-descent parser for plain infix expressions.

Grammar, loosest binding first::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary | <juxtaposed> unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | IDENT | FUNC "(" expr ")" | "(" expr ")"

``a - b`` is stored as ``Add(a, Neg(b))`` and chains of ``+`` or ``*`` are
flattened into a single N-ary node, including chains split by parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import (
    EmptyExpression,
    MalformedNumber,
    UnbalancedParens,
    UnexpectedToken,
    UnknownCharacter,
)
from .expr import FUNCTIONS, Add, Ast, Div, Func, Mul, Neg, Num, Pow, Sym

GREEK = (
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu", "nu", "xi", "omicron", "pi", "rho",
    "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
)

# longest first so "epsilon" wins over "psi", "theta" over "eta"
_WORDS = sorted(FUNCTIONS + GREEK, key=len, reverse=True)
_NUMBER = re.compile(r"[0-9]+(\.[0-9]+)?")


class TokenKind(Enum):
    NUMBER = "NUMBER"
    IDENT = "IDENT"
    FUNC = "FUNC"
    PLUS = "PLUS"
    MINUS = "MINUS"
    STAR = "STAR"
    SLASH = "SLASH"
    CARET = "CARET"
    LPAREN = "LPAREN"
    RPAREN = "RPAREN"


_PUNCT = {
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "*": TokenKind.STAR,
    "/": TokenKind.SLASH,
    "^": TokenKind.CARET,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
}

_FACTOR_START = (TokenKind.NUMBER, TokenKind.IDENT, TokenKind.FUNC, TokenKind.LPAREN)


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    position: int

    def __repr__(self) -> str:
        return f"{self.kind.value} {self.text!r}@{self.position}"


def tokenize(source: str) -> list[Token]:
    if not source.strip():
        raise EmptyExpression("expression is empty")
    tokens: list[Token] = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
        elif c in _PUNCT:
            tokens.append(Token(_PUNCT[c], c, i))
            i += 1
        elif c.isdigit() or c == ".":
            m = _NUMBER.match(source, i)
            end = m.end() if m else i
            if m is None or (end < n and source[end] == "."):
                raise MalformedNumber("malformed number", i)
            tokens.append(Token(TokenKind.NUMBER, m.group(), i))
            i = end
        elif c.isascii() and c.isalpha():
            word = next((w for w in _WORDS if source.startswith(w, i)), None)
            if word is None:
                tokens.append(Token(TokenKind.IDENT, c, i))
                i += 1
            else:
                kind = TokenKind.FUNC if word in FUNCTIONS else TokenKind.IDENT
                tokens.append(Token(kind, word, i))
                i += len(word)
        elif c.isalpha():
            # a single non-ASCII letter such as a Greek glyph
            tokens.append(Token(TokenKind.IDENT, c, i))
            i += 1
        else:
            raise UnknownCharacter(f"unknown character {c!r}", i)
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        last = tokens[-1] if tokens else None
        self.end = last.position + len(last.text) if last else 0

    def peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, tok: Token | None) -> UnexpectedToken:
        if tok is None:
            return UnexpectedToken("unexpected end of input", self.end)
        return UnexpectedToken(f"unexpected {tok.text!r}", tok.position)

    def parse(self) -> Ast:
        if not self.tokens:
            raise EmptyExpression("expression is empty")
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            if tok.kind is TokenKind.RPAREN:
                raise UnbalancedParens("unmatched ')'", tok.position)
            raise self.fail(tok)
        return node

    def expr(self) -> Ast:
        terms = [self.term()]
        while (tok := self.peek()) is not None and tok.kind in (TokenKind.PLUS, TokenKind.MINUS):
            self.advance()
            rhs = self.term()
            terms.append(rhs if tok.kind is TokenKind.PLUS else Neg(rhs))
        return _nary(Add, terms)

    def term(self) -> Ast:
        factors = [self.unary()]
        while (tok := self.peek()) is not None:
            if tok.kind is TokenKind.STAR:
                self.advance()
                factors.append(self.unary())
            elif tok.kind is TokenKind.SLASH:
                self.advance()
                factors = [Div(_nary(Mul, factors), self.unary())]
            elif tok.kind in _FACTOR_START:
                factors.append(self.unary())
            else:
                break
        return _nary(Mul, factors)

    def unary(self) -> Ast:
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.MINUS:
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Ast:
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok.kind is TokenKind.CARET:
            self.advance()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Ast:
        tok = self.peek()
        if tok is None:
            raise self.fail(None)
        if tok.kind is TokenKind.NUMBER:
            self.advance()
            return Num(tok.text)
        if tok.kind is TokenKind.IDENT:
            self.advance()
            return Sym(tok.text)
        if tok.kind is TokenKind.FUNC:
            self.advance()
            nxt = self.peek()
            if nxt is None or nxt.kind is not TokenKind.LPAREN:
                raise self.fail(nxt)
            return Func(tok.text, self.group())
        if tok.kind is TokenKind.LPAREN:
            return self.group()
        if tok.kind is TokenKind.RPAREN:
            raise UnbalancedParens("unmatched ')'", tok.position)
        raise self.fail(tok)

    def group(self) -> Ast:
        open_tok = self.advance()
        nxt = self.peek()
        if nxt is not None and nxt.kind is TokenKind.RPAREN:
            raise EmptyExpression("empty parentheses", open_tok.position)
        inner = self.expr()
        close = self.peek()
        if close is None:
            raise UnbalancedParens("unclosed '('", open_tok.position)
        if close.kind is not TokenKind.RPAREN:
            raise self.fail(close)
        self.advance()
        return inner


def _nary(kind: type, items: list[Ast]) -> Ast:
    if len(items) == 1:
        return items[0]
    flat: list[Ast] = []
    for it in items:
        if isinstance(it, kind):
            flat.extend(it.children)
        else:
            flat.append(it)
    return kind(tuple(flat))


def parse(tokens: list[Token]) -> Ast:
    return _Parser(list(tokens)).parse()


def parse_expression(source: str) -> Ast:
    """Tokenize and parse ``source`` in one step."""
    return parse(tokenize(source))


# binding levels used by unparse
_ADD, _MUL, _NEG, _POW, _ATOM = 1, 2, 3, 4, 5


def _level(node: Ast) -> int:
    if isinstance(node, Add):
        return _ADD
    if isinstance(node, (Mul, Div)):
        return _MUL
    if isinstance(node, Neg):
        return _NEG
    if isinstance(node, Pow):
        return _POW
    return _ATOM


def unparse(node: Ast) -> str:
    """Render an AST as infix text that parses back to the same tree.

    Every product is written with an explicit ``*``; parentheses appear
    only where the grammar needs them.
    """

    def wrap(n: Ast, need: int) -> str:
        s = render(n)
        return f"({s})" if _level(n) < need else s

    def render(n: Ast) -> str:
        if isinstance(n, Num):
            return n.text
        if isinstance(n, Sym):
            return n.name
        if isinstance(n, Func):
            return f"{n.name}({render(n.child)})"
        if isinstance(n, Neg):
            return "-" + wrap(n.child, _NEG)
        if isinstance(n, Pow):
            return wrap(n.base, _ATOM) + "^" + wrap(n.exponent, _NEG)
        if isinstance(n, Div):
            return wrap(n.numerator, _MUL) + "/" + wrap(n.denominator, _NEG)
        if isinstance(n, Mul):
            parts = [wrap(n.children[0], _MUL)]
            for c in n.children[1:]:
                parts.append(f"({render(c)})" if isinstance(c, Neg) else wrap(c, _NEG))
            return "*".join(parts)
        if isinstance(n, Add):
            first = n.children[0]
            out = render(first) if isinstance(first, Neg) else wrap(first, _MUL)
            for c in n.children[1:]:
                if isinstance(c, Neg):
                    out += "-" + wrap(c.child, _MUL)
                else:
                    out += "+" + wrap(c, _MUL)
            return out
        raise TypeError(f"not an expression node: {n!r}")

    return render(node)
