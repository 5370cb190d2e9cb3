"""Minimal Boolean expression language: identifiers, 0/1, ! & ^ | and parens.

Precedence from tightest to loosest: !, &, ^, |. This is the single
evaluator behind both the netlist oracle and truth-table verification.
"""

from __future__ import annotations

import re

_TOKEN = re.compile(r"[a-z][a-z0-9_]*|[01!&^|()]")


class ExprError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError(f"bad character {text[pos]!r} in expression {text!r}")
        tokens.append(m.group(0))
        pos = m.end()
    return tokens


def parse_expr(text: str):
    """Parse to a nested-tuple AST: ("var", name) | ("const", bool) |
    ("not", e) | ("and"|"xor"|"or", lhs, rhs)."""
    tokens = tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            raise ExprError(f"unexpected end of expression {text!r}")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            raise ExprError(f"expected {expected!r}, found {tok!r} in {text!r}")
        pos += 1
        return tok

    def atom():
        tok = peek()
        if tok == "(":
            take()
            node = or_level()
            take(")")
            return node
        if tok == "!":
            take()
            return ("not", atom())
        if tok in ("0", "1"):
            take()
            return ("const", tok == "1")

        if tok is None or not tok[0].isalpha():
            raise ExprError(f"expected operand, found {tok!r} in {text!r}")
        take()
        return ("var", tok)

    def and_level():
        node = atom()
        while peek() == "&":
            take()
            node = ("and", node, atom())
        return node

    def xor_level():
        node = and_level()
        while peek() == "^":
            take()
            node = ("xor", node, and_level())
        return node

    def or_level():
        node = xor_level()
        while peek() == "|":
            take()
            node = ("or", node, xor_level())
        return node

    node = or_level()
    if pos != len(tokens):
        raise ExprError(f"trailing tokens {tokens[pos:]} in {text!r}")
    return node


def expr_names(node) -> set[str]:
    kind = node[0]
    if kind == "var":
        return {node[1]}
    if kind == "const":
        return set()
    if kind == "not":
        return expr_names(node[1])
    return expr_names(node[1]) | expr_names(node[2])


def eval_expr(node, env: dict[str, bool]) -> bool:
    kind = node[0]
    if kind == "var":
        if node[1] not in env:
            raise ExprError(f"unknown identifier {node[1]!r}")
        return bool(env[node[1]])
    if kind == "const":
        return node[1]
    if kind == "not":
        return not eval_expr(node[1], env)
    a = eval_expr(node[1], env)
    b = eval_expr(node[2], env)
    if kind == "and":
        return a and b
    if kind == "xor":
        return a != b
    return a or b


def evaluate(text: str, env: dict[str, bool]) -> bool:
    return eval_expr(parse_expr(text), env)
