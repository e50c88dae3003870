"""Exact rationals in text form ("num/den") for JSON and the command line."""
from __future__ import annotations

from fractions import Fraction


def fmt(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse(text: str | int) -> Fraction:
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a 'num/den' string, got {type(text).__name__}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def fmt_point(p: tuple[Fraction, Fraction]) -> list[str]:
    return [fmt(p[0]), fmt(p[1])]


def parse_point(data) -> tuple[Fraction, Fraction]:
    if not isinstance(data, (list, tuple)) or len(data) != 2:
        raise ValueError(f"point must be a pair, got {data!r}")
    return parse(data[0]), parse(data[1])
