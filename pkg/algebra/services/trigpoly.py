"""
Exact trigonometric polynomials Σ s_k sin(kφ/q) + c_k cos(kφ/q).

Frequencies are stored as nonnegative integer numerators k over a fixed
denominator q (2 for the crack, 3 for the 90° notch). Coefficients live in
Q(√3). Angles handed to the exact evaluator are rational multiples of π.
"""
import enum
import math
from fractions import Fraction
from types import MappingProxyType

from .exactnum import ExtScalar, ZERO, as_rational

# sin(nπ/6) for n = 0..11
_HALF = Fraction(1, 2)
_SIN_SIXTHS = (
    ExtScalar(0), ExtScalar(_HALF), ExtScalar(0, _HALF), ExtScalar(1),
    ExtScalar(0, _HALF), ExtScalar(_HALF), ExtScalar(0), ExtScalar(-_HALF),
    ExtScalar(0, -_HALF), ExtScalar(-1), ExtScalar(0, -_HALF), ExtScalar(-_HALF),
)

MINUS_PI = Fraction(-1)
HALF_PI = Fraction(1, 2)
PI = Fraction(1)
SUPPORTED_ENDPOINTS = (MINUS_PI, HALF_PI, PI)


class FreqDenMismatch(ValueError):
    """Raised when combining polynomials on different frequency lattices."""


class UnsupportedEndpoint(ValueError):
    """Raised for exact evaluation away from −π, π/2 and π."""


class ElemFactor(enum.Enum):
    COS = 'cos'
    SIN = 'sin'
    COS2 = 'cos2'
    SINCOS = 'sincos'

    def value_at(self, phi):
        if self is ElemFactor.COS:
            return math.cos(phi)
        if self is ElemFactor.SIN:
            return math.sin(phi)
        if self is ElemFactor.COS2:
            return math.cos(phi) ** 2
        return math.sin(phi) * math.cos(phi)


def _sixths(turns):
    """Index n with turns·π = nπ/6, or UnsupportedEndpoint."""
    scaled = Fraction(turns) * 6
    if scaled.denominator != 1:
        raise UnsupportedEndpoint(f"{turns}·pi is not a multiple of pi/6")
    return scaled.numerator


def sin_pi(turns):
    """Exact sin(turns·π) for turns a multiple of 1/6."""
    return _SIN_SIXTHS[_sixths(turns) % 12]


def cos_pi(turns):
    """Exact cos(turns·π) for turns a multiple of 1/6."""
    return _SIN_SIXTHS[(_sixths(turns) + 3) % 12]


class TrigPoly:
    """
    Immutable canonical trigonometric polynomial.

    ``terms`` maps k to (sin coefficient, cos coefficient). Canonical form
    drops terms whose coefficients are both zero and the sin part of k = 0.
    """
    __slots__ = ('_q', '_terms', '_hash')

    def __init__(self, freq_den, terms=None):
        if freq_den <= 0:
            raise ValueError(f"freq_den must be positive, got {freq_den}")
        canonical = {}
        for k, (s, c) in (terms or {}).items():
            if k < 0:
                raise ValueError(f"negative frequency numerator {k}; fold before building")
            s = ExtScalar.coerce(s)
            c = ExtScalar.coerce(c)
            if k == 0:
                s = ZERO
            if s or c:
                canonical[int(k)] = (s, c)
        self._q = int(freq_den)
        self._terms = dict(sorted(canonical.items()))
        self._hash = None

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, freq_den):
        return cls(freq_den)

    @classmethod
    def sin(cls, freq_den, k, coef=1):
        return cls._single(freq_den, k, coef, sin=True)

    @classmethod
    def cos(cls, freq_den, k, coef=1):
        return cls._single(freq_den, k, coef, sin=False)

    @classmethod
    def _single(cls, freq_den, k, coef, sin):
        coef = ExtScalar.coerce(coef)
        if k < 0:
            k = -k
            if sin:
                coef = -coef
        pair = (coef, ZERO) if sin else (ZERO, coef)
        return cls(freq_den, {k: pair})

    # -- inspection --------------------------------------------------------

    @property
    def freq_den(self):
        return self._q

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def frequencies(self):
        """Frequency numerators in ascending order."""
        return list(self._terms)

    def max_frequency(self):
        """Largest frequency as an exact rational k/q (0 for the empty polynomial)."""
        if not self._terms:
            return Fraction(0)
        return Fraction(max(self._terms), self._q)

    def coefficient(self, k):
        return self._terms.get(k, (ZERO, ZERO))

    def iter_terms(self):
        """Yield (k, 'sin'|'cos', coefficient) ascending in k, sines first."""
        for k, (s, c) in self._terms.items():
            if s:
                yield k, 'sin', s
            if c:
                yield k, 'cos', c

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return sum(1 for _ in self.iter_terms())

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self._q == other._q and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, '_hash', hash((self._q, tuple(self._terms.items()))))
        return self._hash

    def __repr__(self):
        body = ' ; '.join(f"{coef} {kind} {k}/{self._q}" for k, kind, coef in self.iter_terms())
        return f"TrigPoly(q={self._q}: {body or '0'})"

    # -- arithmetic ----------------------------------------------------------

    def _check_lattice(self, other):
        if self._q != other._q:
            raise FreqDenMismatch(f"freq_den {self._q} vs {other._q}")

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        self._check_lattice(other)
        merged = dict(self._terms)
        for k, (s, c) in other._terms.items():
            s0, c0 = merged.get(k, (ZERO, ZERO))
            merged[k] = (s0 + s, c0 + c)
        return TrigPoly(self._q, merged)

    def __neg__(self):
        return TrigPoly(self._q, {k: (-s, -c) for k, (s, c) in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, coef):
        coef = ExtScalar.coerce(coef)
        if not coef:
            return TrigPoly(self._q)
        return TrigPoly(self._q, {k: (s * coef, c * coef) for k, (s, c) in self._terms.items()})

    def __mul__(self, coef):
        if isinstance(coef, (ExtScalar, int, Fraction)):
            return self.scale(coef)
        return NotImplemented

    __rmul__ = __mul__

    def _times_trig(self, shift, kind):
        """
        Multiply by cos(shift·φ/q) or sin(shift·φ/q) with product-to-sum,
        folding negative frequencies.
        """
        acc = {}

        def put(k, s, c):
            if k < 0:
                k, s = -k, -s
            s0, c0 = acc.get(k, (ZERO, ZERO))
            acc[k] = (s0 + s, c0 + c)

        half = Fraction(1, 2)
        for k, (s, c) in self._terms.items():
            s = s * half
            c = c * half
            if kind == 'cos':
                # sin a cos b = [sin(a+b) + sin(a−b)]/2 ; cos a cos b = [cos(a+b) + cos(a−b)]/2
                put(k + shift, s, c)
                put(k - shift, s, c)
            else:
                # sin a sin b = [cos(a−b) − cos(a+b)]/2 ; cos a sin b = [sin(a+b) − sin(a−b)]/2
                put(k + shift, c, -s)
                put(k - shift, -c, s)
        return TrigPoly(self._q, acc)

    def mul_elem(self, factor):
        factor = ElemFactor(factor)
        q = self._q
        if factor is ElemFactor.COS:
            return self._times_trig(q, 'cos')
        if factor is ElemFactor.SIN:
            return self._times_trig(q, 'sin')
        if factor is ElemFactor.COS2:
            # cos²φ = (1 + cos 2φ)/2
            return (self + self._times_trig(2 * q, 'cos')).scale(Fraction(1, 2))
        # sinφ cosφ = sin(2φ)/2
        return self._times_trig(2 * q, 'sin').scale(Fraction(1, 2))

    def diff(self, order=1):
        result = self
        for _ in range(order):
            q = result._q
            terms = {}
            for k, (s, c) in result._terms.items():
                w = Fraction(k, q)
                terms[k] = (-c * w, s * w)
            result = TrigPoly(q, terms)
        return result

    # -- evaluation ----------------------------------------------------------

    def eval_exact(self, endpoint):
        """Exact value at endpoint·π, endpoint one of −1, 1/2, 1."""
        endpoint = as_rational(endpoint)
        if endpoint not in SUPPORTED_ENDPOINTS:
            raise UnsupportedEndpoint(f"exact evaluation only at -pi, pi/2, pi (got {endpoint}·pi)")
        total = ZERO
        for k, (s, c) in self._terms.items():
            turns = endpoint * Fraction(k, self._q)
            if s:
                total = total + s * sin_pi(turns)
            if c:
                total = total + c * cos_pi(turns)
        return total

    def eval_float(self, phi):
        total = 0.0
        for k, (s, c) in self._terms.items():
            x = k * phi / self._q
            total += float(s) * math.sin(x) + float(c) * math.cos(x)
        return total

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {
            'freq_den': self._q,
            'terms': [
                {'num': k, 'sin': list(s.to_pair()), 'cos': list(c.to_pair())}
                for k, (s, c) in self._terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data):
        return cls(data['freq_den'], {
            term['num']: (ExtScalar.from_pair(term['sin']), ExtScalar.from_pair(term['cos']))
            for term in data['terms']
        })


def tp_add(p, r):
    return p + r


def tp_scale(p, c):
    return p.scale(c)


def tp_mul_elem(p, factor):
    return p.mul_elem(factor)


def tp_diff(p, order=1):
    return p.diff(order)


def tp_eval_exact(p, endpoint):
    return p.eval_exact(endpoint)


def tp_eval_float(p, phi):
    return p.eval_float(phi)
