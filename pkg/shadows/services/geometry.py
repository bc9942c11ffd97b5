"""
Wedge geometries near the circular edge and their Neumann eigenpairs.

Angles are exact rational multiples of π. Eigenvalues are expressed both as
rationals (α_j) and as frequency numerators over the geometry's lattice q.
"""
from dataclasses import dataclass
from fractions import Fraction

from algebra.services.trigpoly import TrigPoly, sin_pi, cos_pi


class UnknownGeometry(ValueError):
    pass


@dataclass(frozen=True)
class Geometry:
    name: str
    phi1: Fraction  # in units of π
    phi2: Fraction
    freq_den: int

    def __post_init__(self):
        if not self.phi1 < self.phi2:
            raise ValueError(f"{self.name}: phi1 must be below phi2")

    @property
    def opening(self):
        """ω / π."""
        return self.phi2 - self.phi1

    @property
    def eigen_step(self):
        """Spacing π/ω of the Neumann spectrum."""
        return 1 / self.opening

    @property
    def endpoints(self):
        return (self.phi1, self.phi2)

    def to_numerator(self, value):
        """Numerator of ``value`` over freq_den; ValueError off the lattice."""
        scaled = Fraction(value) * self.freq_den
        if scaled.denominator != 1:
            raise ValueError(f"{value} is not on the 1/{self.freq_den} lattice")
        return scaled.numerator

    def __str__(self):
        return self.name


CRACK = Geometry('crack', Fraction(-1), Fraction(1), 2)
VNOTCH90 = Geometry('vnotch90', Fraction(-1), Fraction(1, 2), 3)

GEOMETRIES = {g.name: g for g in (CRACK, VNOTCH90)}

GEOMETRY_CHOICES = [
    ('crack', 'Penny-shaped crack (opening 2π)'),
    ('vnotch90', '90° V-notch (opening 3π/2)'),
]


def get_geometry(name):
    if isinstance(name, Geometry):
        return name
    try:
        return GEOMETRIES[name]
    except KeyError:
        raise UnknownGeometry(f"unknown geometry {name!r}; expected one of {', '.join(GEOMETRIES)}") from None


def eigenvalue(g, j):
    """α_j = jπ/ω: j/2 for the crack, 2j/3 for the notch."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    return j * g.eigen_step


def eigenfunction(g, j):
    """
    Neumann eigenfunction cos(α_j(φ − φ₁)) written as A sin(α_j φ) + B cos(α_j φ),
    normalized so the sine coefficient is 1 when present, else the cosine one.
    """
    alpha = eigenvalue(g, j)
    turns = alpha * g.phi1
    a = sin_pi(turns)
    b = cos_pi(turns)
    lead = a if a else b
    k = g.to_numerator(alpha)
    return TrigPoly(g.freq_den, {k: (a / lead, b / lead)})


def is_neumann_eigen(g, lam):
    """True iff λ = nπ/ω for an integer n ≥ 0."""
    lam = Fraction(lam)
    if lam < 0:
        return False
    return (lam / g.eigen_step).denominator == 1
