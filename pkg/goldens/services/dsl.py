"""
Plain-text table DSL: parser and emitters (DSL, LaTeX, JSON, text).

One entry is a header followed by ";"-separated terms:

    [vnotch90 primal j=1 h=0 f=0]
      1 sin 2/3 ; 0+1/3r3 cos 2/3

"r3" marks the √3 part of a coefficient and the trailing fraction is the
frequency, so "0+1/3r3 cos 2/3" is (√3/3)·cos(2φ/3). "#" starts a comment;
a line starting with "## " labels the entries that follow.
"""
import enum
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from algebra.services.exactnum import ExtScalar, ZERO, format_rational
from algebra.services.trigpoly import TrigPoly
from shadows.services.geometry import GEOMETRIES, get_geometry
from shadows.services.recursion import Kind, ShadowKey


class ParseError(ValueError):
    def __init__(self, message, line, column, expected=None):
        self.line = line
        self.column = column
        self.expected = expected
        detail = f"line {line}, column {column}: {message}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class EmitFormat(str, enum.Enum):
    DSL = 'dsl'
    LATEX = 'latex'
    JSON = 'json'
    TEXT = 'text'


FORMAT_CHOICES = [
    ('text', 'Plain text'),
    ('latex', 'LaTeX'),
    ('json', 'JSON'),
    ('dsl', 'Table DSL'),
]


@dataclass(frozen=True)
class GoldenEntry:
    geometry: str
    kind: Kind
    h: int
    j: int
    f: int
    poly: TrigPoly
    source: str = field(default='', compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'kind', Kind(self.kind))
        g = get_geometry(self.geometry)
        if self.poly.freq_den != g.freq_den:
            raise ValueError(f"{self.geometry} entries live on the 1/{g.freq_den} lattice")

    @property
    def key(self):
        return ShadowKey(self.kind, self.h, self.j, self.f)

    @property
    def corpus_key(self):
        return (self.geometry, self.kind.value, self.j, self.h, self.f)

    @classmethod
    def from_solution(cls, geometry, key, poly, source='generated'):
        return cls(str(geometry), key.kind, key.h, key.j, key.f, poly, source)


# -- parsing -----------------------------------------------------------------

_TOKEN_PATTERNS = {
    'header': re.compile(r'\[\s*(\w+)\s+(\w+)\s+j\s*=\s*(\d+)\s+h\s*=\s*(\d+)\s+f\s*=\s*(\d+)\s*\]'),
    'coef': re.compile(r'(-?\d+(?:/\d+)?)(?:([+-])(\d+(?:/\d+)?)r3)?'),
    'trig': re.compile(r'(sin|cos)\b'),
    'freq': re.compile(r'(\d+)\s*/\s*(\d+)'),
    'sep': re.compile(r';'),
}


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.section = ''

    def location(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count('\n', 0, pos) + 1
        column = pos - (self.text.rfind('\n', 0, pos) + 1) + 1
        return line, column

    def error(self, message, expected=None, pos=None):
        line, column = self.location(pos)
        return ParseError(message, line, column, expected)

    def skip(self):
        """Skip whitespace and comments, picking up "## " section labels."""
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == '#':
                end = text.find('\n', self.pos)
                end = len(text) if end < 0 else end
                comment = text[self.pos:end]
                if comment.startswith('## '):
                    self.section = comment[3:].strip()
                self.pos = end
            else:
                break

    def at_end(self):
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, name):
        self.skip()
        return _TOKEN_PATTERNS[name].match(self.text, self.pos)

    def expect(self, name, expected):
        match = self.peek(name)
        if match is None:
            found = self.text[self.pos:self.pos + 12].split('\n')[0] or 'end of input'
            raise self.error(f"unexpected {found!r}", expected)
        self.pos = match.end()
        return match


def _rational(scanner, match, group):
    text = match.group(group)
    _, slash, den = text.partition('/')
    if slash and int(den) == 0:
        raise scanner.error(f"zero denominator in {text!r}", pos=match.start(group))
    return Fraction(text)


def _parse_entry(scanner):
    start = scanner.pos
    header = scanner.expect('header', '"[<geometry> <kind> j=<int> h=<int> f=<int>]"')
    geometry, kind, j, h, f = header.groups()
    if geometry not in GEOMETRIES:
        raise scanner.error(f"unknown geometry {geometry!r}", ' or '.join(GEOMETRIES), header.start(1))
    try:
        kind = Kind(kind)
    except ValueError:
        raise scanner.error(f"unknown kind {kind!r}", 'primal or dual', header.start(2)) from None
    j, h, f = int(j), int(h), int(f)
    if j < 1 or h % 2:
        raise scanner.error("j must be >= 1 and h even", pos=start)
    q = GEOMETRIES[geometry].freq_den

    acc = {}
    first = True
    while True:
        coef_match = scanner.expect('coef', 'coefficient "<rat>[(+|-)<rat>r3]"')
        a = _rational(scanner, coef_match, 1)
        b = Fraction(0)
        if coef_match.group(3) is not None:
            b = _rational(scanner, coef_match, 3)
            if coef_match.group(2) == '-':
                b = -b
        coef = ExtScalar(a, b)

        trig = scanner.peek('trig')
        if trig is None:
            # A bare "0" stands for the empty polynomial.
            if first and not coef and coef_match.group(3) is None and (scanner.at_end() or scanner.peek('header')):
                break
            raise scanner.error("missing trigonometric factor", '"sin" or "cos"')
        scanner.pos = trig.end()
        freq_match = scanner.expect('freq', 'frequency "<num>/<den>"')
        num, den = int(freq_match.group(1)), int(freq_match.group(2))
        if den == 0:
            raise scanner.error("zero frequency denominator", pos=freq_match.start(2))
        scaled = Fraction(num, den) * q
        if scaled.denominator != 1:
            raise scanner.error(f"frequency {num}/{den} is off the 1/{q} lattice", pos=freq_match.start())
        k = scaled.numerator
        s0, c0 = acc.get(k, (ZERO, ZERO))
        if trig.group(1) == 'sin':
            acc[k] = (s0 + coef, c0)
        else:
            acc[k] = (s0, c0 + coef)

        first = False
        if scanner.peek('sep') is None:
            break
        scanner.pos += 1

    return GoldenEntry(geometry, kind, h, j, f, TrigPoly(q, acc), scanner.section)


def parse_document(text, source=''):
    """Parse every entry of a DSL document, in file order."""
    scanner = _Scanner(text)
    scanner.section = source
    entries = []
    while not scanner.at_end():
        entries.append(_parse_entry(scanner))
    return entries


def parse_entry(text):
    scanner = _Scanner(text)
    if scanner.at_end():
        raise scanner.error("empty input", 'an entry header')
    entry = _parse_entry(scanner)
    if not scanner.at_end():
        raise scanner.error("trailing text after entry", 'end of input')
    return entry


# -- emission ----------------------------------------------------------------

def _dsl_term(q, k, trig, coef):
    return f"{coef} {trig} {k}/{q}"


def _dsl(entry):
    header = f"[{entry.geometry} {entry.kind.value} j={entry.j} h={entry.h} f={entry.f}]"
    q = entry.poly.freq_den
    body = ' ; '.join(_dsl_term(q, k, trig, coef) for k, trig, coef in entry.poly.iter_terms())
    return f"{header}\n  {body or '0'}"


def _latex_rational(value, with_sqrt3=False):
    """Unsigned LaTeX for |value|, times √3 if asked; '' stands for a bare 1."""
    value = abs(value)
    root = r'\sqrt{3}' if with_sqrt3 else ''
    if value.denominator == 1:
        if value.numerator == 1:
            return root
        return f"{value.numerator}{root}"
    return rf"\frac{{{value.numerator}{root}}}{{{value.denominator}}}"


def _latex_coefficient(coef):
    """(sign, body) with body '' meaning a unit coefficient."""
    a, b = coef.a, coef.b
    if b == 0:
        return ('-' if a < 0 else '+'), _latex_rational(a)
    if a == 0:
        return ('-' if b < 0 else '+'), _latex_rational(b, with_sqrt3=True)
    inner_sign = '-' if b < 0 else '+'
    lead = ('-' if a < 0 else '') + (_latex_rational(a) or '1')
    inner = f"{lead} {inner_sign} {_latex_rational(b, with_sqrt3=True)}"
    return '+', rf"\left({inner}\right)"


def _latex_angle(k, q):
    freq = Fraction(k, q)
    if freq.denominator == 1:
        return r'\varphi' if freq.numerator == 1 else rf"{freq.numerator}\varphi"
    num = '' if freq.numerator == 1 else freq.numerator
    return rf"\frac{{{num}\varphi }}{{{freq.denominator}}}"


def latex_poly(poly):
    pieces = []
    for k, trig, coef in poly.iter_terms():
        sign, body = _latex_coefficient(coef)
        if k == 0:
            term = body or '1'
        else:
            term = f"{body}\\{trig} {_latex_angle(k, poly.freq_den)}"
        if not pieces:
            pieces.append(term if sign == '+' else f"-{term}")
        else:
            pieces.append(f"{sign} {term}")
    return ' '.join(pieces) or '0'


def _latex_symbol(entry):
    name = r'\phi' if entry.kind is Kind.PRIMAL else r'\psi'
    return f"{name}_{{{entry.h},{entry.j},{entry.f}}}"


def _latex(entry):
    return f"{_latex_symbol(entry)} &= {latex_poly(entry.poly)}"


def entry_to_json(entry):
    data = {
        'geometry': entry.geometry,
        'kind': entry.kind.value,
        'h': entry.h,
        'j': entry.j,
        'f': entry.f,
    }
    data.update(entry.poly.to_json())
    return data


def entry_from_json(data, source='json'):
    return GoldenEntry(
        data['geometry'], data['kind'], data['h'], data['j'], data['f'],
        TrigPoly.from_json(data), source,
    )


def _text_coefficient(coef):
    if coef.b == 0:
        return format_rational(coef.a)
    if coef.a == 0:
        return f"{format_rational(coef.b)}*sqrt3"
    sign = '-' if coef.b < 0 else '+'
    return f"({format_rational(coef.a)} {sign} {format_rational(abs(coef.b))}*sqrt3)"


def _text(entry):
    q = entry.poly.freq_den
    terms = []
    for k, trig, coef in entry.poly.iter_terms():
        if k == 0:
            terms.append(_text_coefficient(coef))
        else:
            terms.append(f"{_text_coefficient(coef)}*{trig}({format_rational(Fraction(k, q))}*phi)")
    symbol = ('phi' if entry.kind is Kind.PRIMAL else 'psi') + f"_{{{entry.h},{entry.j},{entry.f}}}"
    return f"{symbol} = {' + '.join(terms) or '0'}"


def emit_entry(entry, fmt=EmitFormat.DSL):
    fmt = EmitFormat(fmt)
    if fmt is EmitFormat.DSL:
        return _dsl(entry)
    if fmt is EmitFormat.LATEX:
        return _latex(entry)
    if fmt is EmitFormat.JSON:
        return json.dumps(entry_to_json(entry), indent=2)
    return _text(entry)


def _ordered(entries):
    return sorted(entries, key=lambda e: (e.geometry, e.kind.value, e.j, e.h, e.f))


def emit_document(entries, fmt=EmitFormat.DSL):
    """
    Render a whole table. Entries are ordered by (geometry, kind, j, h, f), so
    output is byte-identical for identical input sets.
    """
    fmt = EmitFormat(fmt)
    entries = _ordered(entries)
    if fmt is EmitFormat.JSON:
        return json.dumps({'entries': [entry_to_json(e) for e in entries]}, indent=2) + '\n'
    if fmt is EmitFormat.LATEX:
        blocks = []
        groups = {}
        for entry in entries:
            groups.setdefault((entry.geometry, entry.kind.value, entry.j, entry.h), []).append(entry)
        for (geometry, kind, j, h), group in groups.items():
            lines = ' \\\\\n'.join(_latex(e) for e in group)
            blocks.append(f"% {geometry} {kind} j={j} h={h}\n\\begin{{align*}}\n{lines}\n\\end{{align*}}\n")
        return '\n'.join(blocks)
    if fmt is EmitFormat.TEXT:
        return ''.join(_text(e) + '\n' for e in entries)
    return ''.join(_dsl(e) + '\n' for e in entries)
