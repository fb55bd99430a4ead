"""Numeric literal parsing for CLI flags.

Accepts plain decimals (``0.5``, ``1e-9``), rationals (``15/16``) and simple
closed forms (``2*(sqrt(2)-1)``, ``1/sqrt(2)``) so the figure presets can be
typed exactly. Anything that is not a finite real constant is rejected.
"""

from __future__ import annotations

import math
import re

import sympy

from fracdamp.errors import LiteralParseError

_BLOCKED_PATTERNS = re.compile(
    r"(__import__|exec\s*\(|eval\s*\(|compile\s*\(|open\s*\("
    r"|os\.|sys\.|subprocess|import\s|from\s.*import"
    r"|globals|locals|getattr|setattr|delattr"
    r"|__builtins__|__class__|__subclasses__"
    r"|lambda|Popen|system\(|popen)",
    re.IGNORECASE,
)

# Only arithmetic on numbers and a few named functions/constants.
_ALLOWED_CHARS = re.compile(r"^[0-9eE.+\-*/()^\s a-z]*$")

_LOCALS = {
    "sqrt": sympy.sqrt,
    "pi": sympy.pi,
    "exp": sympy.exp,
    "log": sympy.log,
}

_PLAIN_FLOAT = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _validate_input(value: str) -> bool:
    """Safety check on a literal before it reaches sympify."""
    if not value or len(value) > 100:
        return False
    if "\x00" in value:
        return False
    if _BLOCKED_PATTERNS.search(value):
        return False
    return bool(_ALLOWED_CHARS.match(value))


def parse_number(raw: str, field: str = "value") -> float:
    """Parse a decimal, rational or closed-form literal into a float."""
    text = raw.strip()
    if _PLAIN_FLOAT.match(text):
        return float(text)
    if not _validate_input(text):
        raise LiteralParseError(field, raw, "not a numeric literal")
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals=_LOCALS)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise LiteralParseError(field, raw, f"cannot parse ({exc})") from exc
    if expr.free_symbols:
        raise LiteralParseError(field, raw, "contains free symbols")
    try:
        value = complex(sympy.N(expr, 30))
    except (TypeError, ValueError) as exc:
        raise LiteralParseError(field, raw, "not a finite real number") from exc
    if value.imag != 0 or not math.isfinite(value.real):
        raise LiteralParseError(field, raw, "not a finite real number")
    return value.real
