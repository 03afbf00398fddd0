"""Text front end for rotation numbers and lists of N."""

from __future__ import annotations

import re
from fractions import Fraction

from rotdisc.cf import NAMES, _NAMED, anchor_sample, named_rho, rotation_from_cf, table_for
from rotdisc.core import MAX_TERMS, Rotation


class SpecError(ValueError):
    """Unparseable rho or N text; ``position`` is a 0-based offset."""

    def __init__(self, message, text, position):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


#: In-fill used by ``anchors:N_MAX:density``.
DENSITY_PER_GAP = 8

_INT = re.compile(r"\s*([+-]?\d+)\s*")
_DECIMAL = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")


def _parse_cf(text, offset):
    """Rotation for ``2,40,40,(2)`` or ``[2,40,40,2,2,...]``."""
    if text[offset:].startswith("["):
        return named_rho(text)
    prefix, period = [], []
    pos = offset
    in_period = False
    closed = False
    for piece in text[offset:].split(","):
        start = pos
        stripped = piece.strip()
        if closed:
            raise SpecError("digits after the repeating block", text, start)
        if stripped.startswith("("):
            if in_period:
                raise SpecError("nested '('", text, start)
            in_period = True
            stripped = stripped[1:].strip()
        if stripped.endswith(")"):
            if not in_period:
                raise SpecError("unmatched ')'", text, start + len(piece) - 1)
            stripped = stripped[:-1].strip()
            closed = True
        if not stripped.isdigit():
            raise SpecError("expected a positive integer digit", text, start)
        digit = int(stripped)
        if digit < 1:
            raise SpecError("continued-fraction digits must be >= 1", text, start)
        (period if in_period else prefix).append(digit)
        pos += len(piece) + 1
    if in_period and not closed:
        raise SpecError("unterminated '('", text, len(text))
    if not prefix and not period:
        raise SpecError("empty continued fraction", text, offset)
    return rotation_from_cf(prefix, period, label="cf:" + text[offset:])


def parse_rho(spec: str) -> Rotation:
    """Parse a rotation number.

    Accepted forms: a decimal literal (``0.618``), a fraction (``16/113``),
    a name (``golden``, ``pi_m3``, ...), or a continued fraction
    ``cf:2,40,40,(2)`` whose parenthesised tail repeats forever.  Values
    outside [0, 1) are reduced mod 1 with a warning.
    """
    if spec is None or not spec.strip():
        raise SpecError("empty rotation spec", spec or "", 0)
    text = spec.strip()
    if text in _NAMED:
        return named_rho(text)
    if text.startswith("cf:"):
        return _parse_cf(text, 3)
    if "/" in text:
        num, _, den = text.partition("/")
        if not _INT.fullmatch(num):
            raise SpecError("bad numerator", text, 0)
        if not _INT.fullmatch(den):
            raise SpecError("bad denominator", text, len(num) + 1)
        if int(den) == 0:
            raise SpecError("zero denominator", text, len(num) + 1)
        return Rotation.from_fraction(Fraction(int(num), int(den)), label=text)
    m = _DECIMAL.match(text)
    if m is None or m.end() != len(text):
        pos = 0 if m is None else m.end()
        raise SpecError(f"expected a number, fraction, cf: spec or one of {', '.join(NAMES)}",
                        text, pos)
    return Rotation.from_value(float(text), source="decimal", label=text)


def _check_n(n, text, pos):
    if not 1 <= n <= MAX_TERMS:
        raise SpecError(f"N={n} outside 1..2**26", text, pos)
    return n


def parse_nspec(spec: str, rho=None):
    """Expand an N expression into a list of integers.

    Comma-separated items, each one of ``610``, ``2..1000`` (inclusive),
    ``113*1..10`` (multiples) or ``anchors:N_MAX[:PER_GAP]`` (convergent
    anchors of ``rho``; ``density`` as PER_GAP means 8).  Duplicates are
    dropped, first occurrence wins.
    """
    if spec is None or not str(spec).strip():
        raise SpecError("empty N spec", str(spec or ""), 0)
    text = str(spec).strip()
    out = []
    pos = 0
    for item in text.split(","):
        where = pos + len(item) - len(item.lstrip())
        pos += len(item) + 1
        item = item.strip()
        if item.startswith("anchors:"):
            parts = item.split(":")
            if len(parts) == 3 and parts[2] == "density":
                parts[2] = str(DENSITY_PER_GAP)
            if len(parts) not in (2, 3) or not all(p.isdigit() for p in parts[1:]):
                raise SpecError("expected anchors:N_MAX or anchors:N_MAX:PER_GAP", text, where)
            if rho is None:
                raise SpecError("anchors need a rotation number", text, where)
            n_max = _check_n(int(parts[1]), text, where)
            per_gap = int(parts[2]) if len(parts) == 3 else 0
            out.extend(anchor_sample(table_for(rho, n_max), n_max, per_gap))
            continue
        m = re.fullmatch(r"(?:(\d+)\*)?(\d+)(?:\.\.(\d+))?", item)
        if m is None:
            raise SpecError("expected N, A..B, Q*A..B or anchors:N_MAX", text, where)
        mult, lo, hi = m.groups()
        lo = int(lo)
        hi = int(hi) if hi is not None else lo
        if hi < lo:
            raise SpecError("empty range", text, where)
        step = int(mult) if mult is not None else 1
        for k in range(lo, hi + 1):
            out.append(_check_n(k * step, text, where))
    seen = set()
    uniq = []
    for n in out:
        if n not in seen:
            seen.add(n)
            uniq.append(n)
    return uniq
