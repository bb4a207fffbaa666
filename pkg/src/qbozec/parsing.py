"""Small recursive-descent parsers for the CLI text syntaxes: rational
functions in q, weight expressions like ``2*i,1*j``, and dominant-weight
assignments like ``i=1,j=0``.  Errors carry the offending position."""

from __future__ import annotations

from .scalars import (
    LaurentPolynomial,
    RationalFunction,
    RF_ONE,
)


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


class _Tokens:
    def __init__(self, text: str, symbols: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.toks.append(("int", text[i:j], i))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("name", text[i:j], i))
                i = j
            elif ch in symbols:
                self.toks.append((ch, ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", text, i)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else ("eof", "", len(self.text))

    def next(self):
        t = self.peek()
        if t[0] != "eof":
            self.pos += 1
        return t

    def expect(self, kind: str):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", self.text, t[2])
        return t


def parse_scalar(text: str) -> RationalFunction:
    """Parse expressions like ``1/(1-q^2)`` or ``q^-3 + 2*q`` exactly."""
    toks = _Tokens(text, "+-*/^()")

    def parse_expr() -> RationalFunction:
        out = parse_term()
        while toks.peek()[0] in "+-":
            op = toks.next()[0]
            rhs = parse_term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def parse_term() -> RationalFunction:
        out = parse_unary()
        while toks.peek()[0] in "*/":
            op = toks.next()[0]
            rhs = parse_unary()
            if op == "*":
                out = out * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", text, toks.peek()[2])
                out = out / rhs
        return out

    def parse_unary() -> RationalFunction:
        if toks.peek()[0] == "-":
            toks.next()
            return -parse_unary()
        return parse_power()

    def parse_power() -> RationalFunction:
        base = parse_atom()
        if toks.peek()[0] == "^":
            toks.next()
            sign = 1
            if toks.peek()[0] == "-":
                toks.next()
                sign = -1
            t = toks.expect("int")
            e = sign * int(t[1])
            if e >= 0:
                out = RF_ONE
                for _ in range(e):
                    out = out * base
                return out
            if base.is_zero():
                raise ParseError("zero to a negative power", text, t[2])
            out = RF_ONE
            for _ in range(-e):
                out = out / base
            return out
        return base

    def parse_atom() -> RationalFunction:
        kind, val, pos = toks.next()
        if kind == "int":
            return RationalFunction.from_rational(int(val))
        if kind == "name":
            if val == "q":
                return RationalFunction.from_laurent(LaurentPolynomial.q_power(1))
            raise ParseError(f"unknown symbol {val!r}", text, pos)
        if kind == "(":
            inner = parse_expr()
            toks.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r}", text, pos)

    out = parse_expr()
    t = toks.peek()
    if t[0] != "eof":
        raise ParseError(f"trailing input {t[1]!r}", text, t[2])
    return out


def parse_weight(text: str, indices: tuple[str, ...]) -> tuple[int, ...]:
    """``2*i,1*j`` -> multiplicity vector over the datum's index order.
    A bare index name counts once; repeated names accumulate."""
    toks = _Tokens(text, "*,")
    coords = [0] * len(indices)

    def parse_item():
        t = toks.next()
        if t[0] == "int":
            mult = int(t[1])
            toks.expect("*")
            name_tok = toks.expect("name")
        elif t[0] == "name":
            mult, name_tok = 1, t
        else:
            raise ParseError(f"expected a term, found {t[1]!r}", text, t[2])
        name = name_tok[1]
        if name not in indices:
            raise ParseError(f"unknown index {name!r}", text, name_tok[2])
        coords[indices.index(name)] += mult

    parse_item()
    while toks.peek()[0] == ",":
        toks.next()
        parse_item()
    t = toks.peek()
    if t[0] != "eof":
        raise ParseError(f"trailing input {t[1]!r}", text, t[2])
    return tuple(coords)


def parse_dominant_weight(text: str, indices: tuple[str, ...]) -> tuple[int, ...]:
    """``i=1,j=0`` -> values of the weight on each coroot; omitted names
    default to 0, duplicates are rejected."""
    coords = [0] * len(indices)
    if not text.strip():
        return tuple(coords)
    toks = _Tokens(text, "=,")
    seen: set[str] = set()

    def parse_item():
        name_tok = toks.expect("name")
        name = name_tok[1]
        if name not in indices:
            raise ParseError(f"unknown index {name!r}", text, name_tok[2])
        if name in seen:
            raise ParseError(f"duplicate index {name!r}", text, name_tok[2])
        seen.add(name)
        toks.expect("=")
        val_tok = toks.expect("int")
        coords[indices.index(name)] = int(val_tok[1])

    parse_item()
    while toks.peek()[0] == ",":
        toks.next()
        parse_item()
    t = toks.peek()
    if t[0] != "eof":
        raise ParseError(f"trailing input {t[1]!r}", text, t[2])
    return tuple(coords)
