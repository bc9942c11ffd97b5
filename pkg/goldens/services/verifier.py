"""
Exact comparison of generated tables against the golden corpus, and the
substitution check that tells transcription errors from solver errors.
"""
import logging
from dataclasses import dataclass, field

from shadows.services.geometry import get_geometry
from shadows.services.recursion import (
    ShadowTable, MissingDependency, build_rhs, solve_shadow,
)
from goldens.errata import erratum_for
from .corpus import group_by_geometry
from .dsl import GoldenEntry

logger = logging.getLogger(__name__)


@dataclass
class Mismatch:
    entry: GoldenEntry
    actual: object  # TrigPoly, or None when the table lacks the key
    first_difference: str

    @property
    def corpus_key(self):
        return self.entry.corpus_key

    @property
    def expected(self):
        return self.entry.poly

    def describe(self):
        geometry, kind, j, h, f = self.corpus_key
        return f"[{geometry} {kind} j={j} h={h} f={f}] {self.first_difference}"


@dataclass
class VerifyReport:
    total: int = 0
    matched: int = 0
    mismatched: int = 0
    mismatches: list = field(default_factory=list)
    excluded: list = field(default_factory=list)
    unexpected_matches: list = field(default_factory=list)

    @property
    def ok(self):
        return self.mismatched == 0

    def combine(self, other):
        return VerifyReport(
            total=self.total + other.total,
            matched=self.matched + other.matched,
            mismatched=self.mismatched + other.mismatched,
            mismatches=self.mismatches + other.mismatches,
            excluded=self.excluded + other.excluded,
            unexpected_matches=self.unexpected_matches + other.unexpected_matches,
        )

    def summary(self):
        return {
            'total': self.total,
            'matched': self.matched,
            'mismatched': self.mismatched,
            'excluded': len(self.excluded),
            'mismatch_keys': [list(m.corpus_key) for m in self.mismatches],
            'excluded_keys': [list(m.corpus_key) for m in self.excluded],
            'unexpected_matches': [list(k) for k in self.unexpected_matches],
        }

    def render(self):
        lines = [f"total={self.total} matched={self.matched} mismatched={self.mismatched} excluded={len(self.excluded)}"]
        for mismatch in self.mismatches:
            lines.append(f"MISMATCH {mismatch.describe()}")
        for mismatch in self.excluded:
            erratum = erratum_for(mismatch.corpus_key)
            lines.append(f"ERRATUM  {mismatch.describe()} ({erratum.category}: {erratum.note})")
        for key in self.unexpected_matches:
            lines.append(f"STALE    {key} is registered as an erratum but matches")
        return '\n'.join(lines) + '\n'


def first_differing_term(expected, actual):
    """First (frequency, sin|cos) at which the two polynomials differ, as text."""
    if actual is None:
        return "missing from generated table"
    q = expected.freq_den
    for k in sorted(set(expected.frequencies()) | set(actual.frequencies())):
        e_sin, e_cos = expected.coefficient(k)
        a_sin, a_cos = actual.coefficient(k)
        if e_sin != a_sin:
            return f"sin {k}/{q}: expected {e_sin}, got {a_sin}"
        if e_cos != a_cos:
            return f"cos {k}/{q}: expected {e_cos}, got {a_cos}"
    return None


def verify(table, corpus, strict=False):
    """
    Compare ``table`` with the corpus entries of its geometry.

    Registered errata that mismatch are moved to ``excluded`` unless ``strict``.
    """
    geometry = str(table.geometry)
    report = VerifyReport()
    for entry in corpus:
        if entry.geometry != geometry:
            raise ValueError(f"corpus entry {entry.corpus_key} is not on {geometry}")
        actual = table.get(entry.key)
        difference = first_differing_term(entry.poly, actual)
        erratum = None if strict else erratum_for(entry.corpus_key)
        if difference is None:
            if erratum is not None:
                report.unexpected_matches.append(entry.corpus_key)
            report.total += 1
            report.matched += 1
            continue
        mismatch = Mismatch(entry, actual, difference)
        if erratum is not None:
            report.excluded.append(mismatch)
            logger.warning(f"Known erratum {entry.corpus_key}: {difference}")
            continue
        report.total += 1
        report.mismatched += 1
        report.mismatches.append(mismatch)
    return report


def solve_for_corpus(geometry, entries, table=None):
    """Solve every key the corpus entries name, sharing one memo table."""
    g = get_geometry(geometry)
    table = table if table is not None else ShadowTable(g)
    for entry in entries:
        solve_shadow(entry.key, g, table)
    return table


def verify_corpus(corpus, strict=False):
    """Solve and verify a corpus that may span both geometries."""
    report = VerifyReport()
    for geometry, entries in sorted(group_by_geometry(corpus).items()):
        table = solve_for_corpus(geometry, entries)
        report = report.combine(verify(table, entries, strict=strict))
    logger.info(f"Verified {report.total} entries: {report.matched} matched, {report.mismatched} mismatched, {len(report.excluded)} excluded")
    return report


# -- substitution check --------------------------------------------------------

@dataclass
class SubstitutionResult:
    entry: GoldenEntry
    ode_ok: bool
    neumann_ok: bool
    missing: list = field(default_factory=list)

    @property
    def ok(self):
        return self.ode_ok and self.neumann_ok

    @property
    def checked(self):
        return not self.missing


def golden_table(geometry, entries):
    """A ShadowTable holding the printed entries themselves."""
    table = ShadowTable(geometry)
    for entry in entries:
        table.insert(entry.key, entry.poly)
    return table


def substitution_check(entry, table):
    """
    Insert the printed entry into its own equation, with the right-hand side
    built from printed neighbours only.
    """
    g = table.geometry
    key = entry.key
    y = entry.poly
    try:
        rhs = build_rhs(key, table)
    except MissingDependency as exc:
        return SubstitutionResult(entry, True, True, missing=[exc.key])
    lam = key.frequency(g)
    ode_ok = not (y.scale(lam * lam) + y.diff(2) - rhs)
    dy = y.diff()
    neumann_ok = all(not dy.eval_exact(endpoint) for endpoint in g.endpoints)
    return SubstitutionResult(entry, ode_ok, neumann_ok)


def substitution_failures(corpus):
    """Entries that fail the substitution check (skipping those with missing neighbours)."""
    failures = []
    for geometry, entries in sorted(group_by_geometry(corpus).items()):
        table = golden_table(geometry, entries)
        for entry in entries:
            result = substitution_check(entry, table)
            if result.checked and not result.ok:
                failures.append(result)
    return failures
