#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2025 fracsub contributors
"""
Tokenizer and Pratt parser for coefficient expressions.

Grammar (EBNF):

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = primary [ "^" ( "-" unary | power ) ] ;
    primary = number | variable | "pi" | call | "(" expr ")" ;
    call    = name "(" expr { "," expr } ")" ;
    number  = digits [ "." digits ] [ exponent ] | "." digits [ exponent ] ;

"^" is right associative and binds tighter than unary minus, so -2^2 = -4.
Juxtaposition is not multiplication: "(t+1)(x+1)" is a syntax error.
Offsets in errors are byte offsets into the UTF-8 source.
"""

import logging
import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Union

from ..errors import ExpressionError
from .nodes import CONSTANTS, FUNCTIONS, VARIABLES, Binary, Call, Const, Expr, Neg, Number, Var

logger = logging.getLogger(__name__)

MAX_DEPTH = 200

_TOKEN_RE = re.compile(
    rb"(?P<ws>\s+)"
    rb"|(?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    rb"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    rb"|(?P<op>[-+*/^(),])"
)

# left binding powers
_LBP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_UNARY_BP = 25

_OPERAND_START = frozenset({"number", "identifier", "(", "-"})
_AFTER_OPERAND = frozenset({"+", "-", "*", "/", "^", ")", ",", "end of input"})


@dataclass(frozen=True)
class Token:
    kind: str  # number | name | op | end
    text: str
    offset: int


def _to_bytes(src: Union[str, bytes]) -> bytes:
    if isinstance(src, str):
        return src.encode("utf-8", errors="surrogatepass")
    data = bytes(src)
    try:
        data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ExpressionError("invalid UTF-8 in expression", offset=exc.start) from None
    return data


def tokenize(src: Union[str, bytes]) -> List[Token]:
    """Split an expression into tokens; the list always ends with an 'end' token."""
    data = _to_bytes(src)
    tokens: List[Token] = []
    pos = 0
    while pos < len(data):
        match = _TOKEN_RE.match(data, pos)
        if match is None:
            char = data[pos:pos + 1]
            shown = chr(char[0]) if char[0] < 128 else f"\\x{char[0]:02x}"
            raise ExpressionError(
                f"unexpected character '{shown}'",
                offset=pos,
                expected=_OPERAND_START | _AFTER_OPERAND,
            )
        kind = match.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, match.group().decode("ascii"), pos))
        pos = match.end()
    tokens.append(Token("end", "", len(data)))
    return tokens


class Parser:
    """
    Pratt parser over a token list.

    Args:
        tokens: output of ``tokenize``
        variables: identifiers accepted as variables
    """

    def __init__(self, tokens: List[Token], variables: Iterable[str] = VARIABLES):
        self.tokens = tokens
        self.pos = 0
        self.variables = frozenset(variables)
        self.depth = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def error(
        self,
        message: str,
        tok: Optional[Token] = None,
        expected: Optional[FrozenSet[str]] = None,
    ):
        tok = tok or self.token
        return ExpressionError(message, offset=tok.offset, expected=expected)

    def expect(self, text: str) -> Token:
        if self.token.kind == "op" and self.token.text == text:
            return self.advance()
        raise self.error(
            f"expected '{text}', found {_describe(self.token)}", expected=frozenset({text})
        )

    def parse(self) -> Expr:
        expr = self.expression(0)
        if self.token.kind != "end":
            raise self._trailing_error()
        return expr

    def expression(self, rbp: int) -> Expr:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error(f"expression nested deeper than {MAX_DEPTH} levels")
        try:
            left = self.nud(self.advance())
            while True:
                tok = self.token
                if tok.kind != "op" or tok.text not in _LBP:
                    if tok.kind in ("number", "name") or (tok.kind == "op" and tok.text == "("):
                        raise self.error(
                            "implicit multiplication is not supported; write '*'",
                            expected=_AFTER_OPERAND,
                        )
                    break
                if _LBP[tok.text] <= rbp:
                    break
                self.advance()
                left = self.led(tok, left)
            return left
        finally:
            self.depth -= 1

    def nud(self, tok: Token) -> Expr:
        if tok.kind == "number":
            return Number(float(tok.text), tok.offset)
        if tok.kind == "name":
            return self._identifier(tok)
        if tok.kind == "op" and tok.text == "-":
            return Neg(self.expression(_UNARY_BP), tok.offset)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        raise self.error(f"expected an operand, found {_describe(tok)}", tok, _OPERAND_START)

    def led(self, tok: Token, left: Expr) -> Expr:
        if tok.text == "^":
            # right associative
            right = self.expression(_LBP["^"] - 1)
        else:
            right = self.expression(_LBP[tok.text])
        return Binary(tok.text, left, right, tok.offset)

    def _identifier(self, tok: Token) -> Expr:
        name = tok.text
        if name in FUNCTIONS:
            return self._call(tok)
        if self.token.kind == "op" and self.token.text == "(":
            if name in self.variables or name in CONSTANTS:
                raise self.error(
                    "implicit multiplication is not supported; write '*'",
                    expected=_AFTER_OPERAND,
                )
            raise self.error(f"unknown function '{name}'", tok, frozenset(FUNCTIONS))
        if name in CONSTANTS:
            return Const(name, tok.offset)
        if name in self.variables:
            return Var(name, tok.offset)
        raise self.error(
            f"unknown identifier '{name}'",
            tok,
            self.variables | CONSTANTS | frozenset(FUNCTIONS),
        )

    def _call(self, tok: Token) -> Call:
        name = tok.text
        if not (self.token.kind == "op" and self.token.text == "("):
            raise self.error(
                f"function '{name}' must be called with '('", expected=frozenset({"("})
            )
        self.advance()
        args = [self.expression(0)]
        while self.token.kind == "op" and self.token.text == ",":
            self.advance()
            args.append(self.expression(0))
        self.expect(")")
        arity = FUNCTIONS[name]
        if len(args) != arity:
            raise ExpressionError(
                f"function '{name}' takes {arity} argument{'s' if arity != 1 else ''}, "
                f"got {len(args)}",
                offset=tok.offset,
            )
        return Call(name, tuple(args), tok.offset)

    def _trailing_error(self) -> ExpressionError:
        tok = self.token
        if tok.kind == "op" and tok.text == ")":
            return self.error("unmatched ')'", expected=_AFTER_OPERAND - {")"})
        return self.error(f"unexpected {_describe(tok)}", expected=_AFTER_OPERAND)


def _describe(tok: Token) -> str:
    if tok.kind == "end":
        return "end of input"
    return f"'{tok.text}'"


def parse(src: Union[str, bytes], variables: Iterable[str] = VARIABLES) -> Expr:
    """
    Parse an expression into an AST.

    Raises:
        ExpressionError: syntax error, unknown identifier or arity mismatch,
            with the byte offset and the expected token set
    """
    try:
        return Parser(tokenize(src), variables).parse()
    except RecursionError:
        raise ExpressionError("expression nested too deeply") from None
