"""
Shadow hierarchy solver.

Each angular profile y = φ_{h,j,f} (primal) or ψ_{h,j,f} (dual) solves

    λ² y + y'' = rhs,   y'(φ₁) = y'(φ₂) = 0,   λ = ±α_j + h + f,

where rhs is assembled from already solved neighbours (h, f−1), (h, f−2)
and (h−2, f). The particular solution comes from undetermined coefficients
and the Neumann closure adds the homogeneous pair at frequency |λ|.
"""
import enum
import logging
from dataclasses import dataclass
from fractions import Fraction

from algebra.services.exactnum import ExtScalar, ZERO
from algebra.services.trigpoly import TrigPoly, ElemFactor
from shadows.services.geometry import get_geometry, eigenvalue, eigenfunction, is_neumann_eigen

logger = logging.getLogger(__name__)


class Kind(str, enum.Enum):
    PRIMAL = 'primal'
    DUAL = 'dual'

    def __str__(self):
        return self.value


KIND_CHOICES = [
    ('primal', 'Primal (exponent +α_j)'),
    ('dual', 'Dual (exponent −α_j)'),
]


class Layout(str, enum.Enum):
    """Shape of the (h, f) window a family is solved on."""
    TRIANGULAR = 'triangular'
    RECTANGULAR = 'rectangular'

    @classmethod
    def default_for(cls, kind):
        # Primal tables are printed as triangles h + f <= N, dual tables as full rectangles.
        return cls.TRIANGULAR if Kind(kind) is Kind.PRIMAL else cls.RECTANGULAR


LAYOUT_CHOICES = [
    ('triangular', 'Triangular (h + f <= max(max_h, max_f))'),
    ('rectangular', 'Rectangular (every h <= max_h, f <= max_f)'),
]


@dataclass(frozen=True)
class ShadowKey:
    kind: Kind
    h: int
    j: int
    f: int

    def __post_init__(self):
        object.__setattr__(self, 'kind', Kind(self.kind))
        if self.h < 0 or self.h % 2:
            raise ValueError(f"h must be even and >= 0, got {self.h}")
        if self.j < 1:
            raise ValueError(f"j must be >= 1, got {self.j}")
        if self.f < 0:
            raise ValueError(f"f must be >= 0, got {self.f}")

    def exponent(self, g):
        alpha = eigenvalue(g, self.j)
        return alpha if self.kind is Kind.PRIMAL else -alpha

    def frequency(self, g):
        """The ODE frequency λ (may be negative for duals)."""
        return self.exponent(g) + self.h + self.f

    def shifted(self, dh=0, df=0):
        return ShadowKey(self.kind, self.h + dh, self.j, self.f + df)

    def dependencies(self):
        deps = []
        if self.f >= 1:
            deps.append(self.shifted(df=-1))
        if self.h >= 2 and self.f >= 2:
            deps.append(self.shifted(df=-2))
        if self.h >= 2:
            deps.append(self.shifted(dh=-2))
        return deps

    @property
    def sort_key(self):
        return (self.kind.value, self.j, self.h, self.f)

    @property
    def symbol(self):
        name = 'phi' if self.kind is Kind.PRIMAL else 'psi'
        return f"{name}_{{{self.h},{self.j},{self.f}}}"

    def __str__(self):
        return f"{self.kind.value} j={self.j} h={self.h} f={self.f}"


@dataclass(frozen=True)
class SolveRecord:
    degenerate: bool = False
    kernel_dropped: bool = False


class SolverError(Exception):
    """Base class for failures of the shadow solve; carries the offending key."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key

    def __str__(self):
        message = super().__str__()
        if self.key is not None:
            return f"{message} [{self.key}]"
        return message


class MissingDependency(SolverError):
    pass


class ResonantTerm(SolverError):
    def __init__(self, message, key=None, frequency=None):
        super().__init__(message, key)
        self.frequency = frequency


class IncompatibleBC(SolverError):
    pass


class SingularSystem(SolverError):
    pass


class ResidualCheckFailed(SolverError):
    pass


class ShadowTable:
    """
    Memo of solved profiles for one geometry. Entries are write-once.
    """

    def __init__(self, geometry):
        self.geometry = get_geometry(geometry)
        self._entries = {}
        self.solve_log = {}

    def __contains__(self, key):
        return key in self._entries

    def __getitem__(self, key):
        try:
            return self._entries[key]
        except KeyError:
            raise MissingDependency(f"{key.symbol} not in table", key) from None

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self.keys())

    def get(self, key, default=None):
        return self._entries.get(key, default)

    def keys(self):
        return sorted(self._entries, key=lambda k: k.sort_key)

    def items(self):
        return [(key, self._entries[key]) for key in self.keys()]

    def insert(self, key, poly, record=None):
        existing = self._entries.get(key)
        if existing is not None:
            if existing != poly:
                raise ValueError(f"{key.symbol} already stored with a different value")
            return
        if poly.freq_den != self.geometry.freq_den:
            raise ValueError(f"{key.symbol}: lattice 1/{poly.freq_den} does not match {self.geometry}")
        self._entries[key] = poly
        if record is not None:
            self.solve_log[key] = record

    def merge(self, other):
        if other.geometry != self.geometry:
            raise ValueError("cannot merge tables of different geometries")
        for key, poly in other.items():
            self.insert(key, poly, other.solve_log.get(key))
        return self

    def closure_violations(self):
        """Keys whose (h, f−1) or (h−2, f) neighbour is absent."""
        missing = []
        for key in self._entries:
            if key.f > 0 and key.shifted(df=-1) not in self._entries:
                missing.append(key)
            elif key.h > 0 and key.shifted(dh=-2) not in self._entries:
                missing.append(key)
        return sorted(missing, key=lambda k: k.sort_key)


def build_rhs(key, table):
    g = table.geometry
    q = g.freq_den
    if key.h == 0 and key.f == 0:
        return TrigPoly.zero(q)

    s = key.exponent(g)
    f = key.f
    cos, sin = ElemFactor.COS, ElemFactor.SIN

    if key.h == 0:
        y = table[key.shifted(df=-1)]
        dy = y.diff()
        total = (y.mul_elem(cos).scale((s + f) * (s + f - 1))
                 - dy.mul_elem(sin)
                 + dy.diff().mul_elem(cos))
        return -total

    lam = key.frequency(g)
    rhs = -table[key.shifted(dh=-2)]
    if f >= 1:
        y = table[key.shifted(df=-1)]
        dy = y.diff()
        rhs = (rhs
               + y.mul_elem(cos).scale(-(lam - 1) * (2 * lam - 1))
               + dy.mul_elem(sin)
               + dy.diff().mul_elem(cos).scale(-2))
    if f >= 2:
        y = table[key.shifted(df=-2)]
        dy = y.diff()
        rhs = (rhs
               + y.mul_elem(ElemFactor.COS2).scale(-(lam - 2) * (lam - 1))
               + dy.mul_elem(ElemFactor.SINCOS)
               - dy.diff().mul_elem(ElemFactor.COS2))
    return rhs


def helmholtz_particular(lam, rhs, key=None):
    """Undetermined coefficients for λ² y + y'' = rhs, term by term."""
    lam = Fraction(lam)
    q = rhs.freq_den
    lam_sq = lam * lam
    terms = {}
    for k, (s, c) in rhs.terms.items():
        m = Fraction(k, q)
        if m == abs(lam):
            raise ResonantTerm(f"right-hand side has a term at the operator frequency {m}", key, m)
        inv = 1 / (lam_sq - m * m)
        terms[k] = (s * inv, c * inv)
    return TrigPoly(q, terms)


def neumann_closure(lam, particular, g, key=None):
    """
    Add A sin(|λ|φ) + B cos(|λ|φ) so that y' vanishes at both faces.

    Returns the closed polynomial together with the SolveRecord.
    """
    g = get_geometry(g)
    q = g.freq_den
    freq = abs(Fraction(lam))
    k = g.to_numerator(freq)

    dp = particular.diff()
    rhs = [-dp.eval_exact(g.phi1), -dp.eval_exact(g.phi2)]
    d_sin = TrigPoly.sin(q, k).diff()
    d_cos = TrigPoly.cos(q, k).diff()
    matrix = [[d_sin.eval_exact(e), d_cos.eval_exact(e)] for e in g.endpoints]

    if not is_neumann_eigen(g, freq):
        det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
        if not det:
            raise SingularSystem(f"boundary system singular at non-eigen frequency {freq}", key)
        a = (rhs[0] * matrix[1][1] - matrix[0][1] * rhs[1]) / det
        b = (matrix[0][0] * rhs[1] - matrix[1][0] * rhs[0]) / det
        record = SolveRecord(degenerate=False, kernel_dropped=False)
    else:
        # One-dimensional kernel: move along the row space only.
        direction = matrix[0] if (matrix[0][0] or matrix[0][1]) else matrix[1]
        if not rhs[0] and not rhs[1]:
            a = b = ZERO
        else:
            image = [row[0] * direction[0] + row[1] * direction[1] for row in matrix]
            i = 0 if image[0] else 1
            if not image[i]:
                raise IncompatibleBC(f"no boundary correction available at eigen frequency {freq}", key)
            c = rhs[i] / image[i]
            other = 1 - i
            if c * image[other] != rhs[other]:
                raise IncompatibleBC(f"boundary equations inconsistent at eigen frequency {freq}", key)
            a, b = c * direction[0], c * direction[1]
        record = SolveRecord(degenerate=True, kernel_dropped=True)
        logger.debug(f"Degenerate closure at |lambda|={freq} for {key}")

    closed = particular + TrigPoly(q, {k: (ExtScalar.coerce(a), ExtScalar.coerce(b))})
    return closed, record


def apply_neumann(lam, particular, g, key=None):
    closed, _ = neumann_closure(lam, particular, g, key)
    return closed


def _check_solution(key, g, lam, y, rhs):
    residual = y.scale(lam * lam) + y.diff(2) - rhs
    if residual:
        raise ResidualCheckFailed(f"ODE residual not zero: {residual}", key)
    dy = y.diff()
    for endpoint in g.endpoints:
        if dy.eval_exact(endpoint):
            raise ResidualCheckFailed(f"Neumann residual not zero at {endpoint}*pi", key)


def solve_shadow(key, g, table):
    """Solve ``key`` (and any missing dependencies), memoize in ``table`` and return it."""
    g = get_geometry(g)
    if g != table.geometry:
        raise ValueError(f"table holds {table.geometry}, asked to solve on {g}")
    if key in table:
        return table[key]

    for dep in key.dependencies():
        if dep not in table:
            solve_shadow(dep, g, table)

    if key.h == 0 and key.f == 0:
        y = eigenfunction(g, key.j)
        table.insert(key, y, SolveRecord())
        return y

    lam = key.frequency(g)
    try:
        rhs = build_rhs(key, table)
        particular = helmholtz_particular(lam, rhs, key)
        y, record = neumann_closure(lam, particular, g, key)
        _check_solution(key, g, lam, y, rhs)
    except SolverError as exc:
        if exc.key is None:
            exc.key = key
        logger.error(f"Solve failed for {key} on {g}: {exc}")
        raise

    table.insert(key, y, record)
    logger.debug(f"Solved {key.symbol} on {g}: {len(y)} terms")
    return y


def family_keys(kind, j, max_h, max_f, max_order=None, layout=None):
    """
    Keys of one (kind, j) family in dependency order: h ascending, then f.

    An explicit ``max_order`` bounds h + f directly. Otherwise the layout decides:
    triangular keeps h + f <= max(max_h, max_f), rectangular keeps the whole window.
    The default layout follows the kind (see ``Layout.default_for``).
    """
    if max_order is None:
        layout = Layout(layout) if layout is not None else Layout.default_for(kind)
        if layout is Layout.TRIANGULAR:
            max_order = max(max_h, max_f)
    keys = []
    for h in range(0, max_h + 1, 2):
        for f in range(0, max_f + 1):
            if max_order is not None and h + f > max_order:
                break
            keys.append(ShadowKey(Kind(kind), h, j, f))
    return keys


def build_table(g, kind, j_list, max_h, max_f, max_order=None, table=None, layout=None):
    """
    Solve every key of ``family_keys`` for each j: h ≤ max_h (even), f ≤ max_f,
    cut to the triangle for primal families unless ``layout`` says otherwise.
    """
    g = get_geometry(g)
    if max_h < 0 or max_h % 2:
        raise ValueError(f"max_h must be even and >= 0, got {max_h}")
    if max_f < 0:
        raise ValueError(f"max_f must be >= 0, got {max_f}")
    if table is None:
        table = ShadowTable(g)
    wanted = []
    for j in j_list:
        wanted.extend(family_keys(kind, j, max_h, max_f, max_order, layout))
    for key in wanted:
        solve_shadow(key, g, table)

    # Dependencies outside the requested window (e.g. (h, f−2) past max_order) are dropped.
    result = ShadowTable(g)
    for key in wanted:
        result.insert(key, table[key], table.solve_log.get(key))
    logger.info(f"Built {len(result)} {Kind(kind).value} entries on {g} for j={list(j_list)}")
    return result
