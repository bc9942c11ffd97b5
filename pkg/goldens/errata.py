"""
Published table entries that disagree with the recursion.

A ``typo`` entry fails the substitution check on its own: inserted into its
equation with the right-hand side built from the printed neighbours, the ODE
or the Neumann residual is nonzero. A ``propagated`` entry passes that check
against its printed neighbours but was derived from a ``typo`` entry, so it
differs from the exact solution.
"""
from dataclasses import dataclass

TYPO = 'typo'
PROPAGATED = 'propagated'

ERRATUM_CHOICES = [
    (TYPO, 'Fails the substitution check'),
    (PROPAGATED, 'Inherited from an upstream typo'),
]


@dataclass(frozen=True)
class Erratum:
    geometry: str
    kind: str
    j: int
    h: int
    f: int
    category: str
    note: str

    @property
    def corpus_key(self):
        return (self.geometry, self.kind, self.j, self.h, self.f)


def _typo(geometry, kind, j, h, f, note):
    return Erratum(geometry, kind, j, h, f, TYPO, note)


def _propagated(geometry, kind, j, h, f, source):
    return Erratum(geometry, kind, j, h, f, PROPAGATED, f"derived from the printed {source}")


KNOWN_ERRATA = (
    _typo('crack', 'primal', 17, 2, 0, "ODE residual nonzero; the sin(17phi/2) coefficient is printed +1/38, solver gives -1/38"),

    _typo('vnotch90', 'primal', 2, 6, 1, "Neumann residual nonzero; homogeneous terms at the non-eigen frequency missing"),
    _typo('vnotch90', 'primal', 2, 8, 1, "Neumann residual nonzero; homogeneous terms at the non-eigen frequency missing"),
    _propagated('vnotch90', 'primal', 2, 6, 2, "phi_{6,2,1}"),
    _propagated('vnotch90', 'primal', 2, 6, 3, "phi_{6,2,1}"),
    _propagated('vnotch90', 'primal', 2, 6, 4, "phi_{6,2,1}"),
    _propagated('vnotch90', 'primal', 2, 8, 2, "phi_{8,2,1} and phi_{6,2,2}"),

    _typo('vnotch90', 'primal', 4, 2, 1, "Neumann residual nonzero; homogeneous terms at the non-eigen frequency missing"),
    _typo('vnotch90', 'primal', 4, 2, 3, "Neumann residual nonzero; homogeneous terms at the non-eigen frequency missing"),
    _typo('vnotch90', 'primal', 4, 2, 5, "Neumann residual nonzero; homogeneous terms at the non-eigen frequency missing"),
    _typo('vnotch90', 'primal', 4, 6, 1, "Neumann residual nonzero; homogeneous terms at the non-eigen frequency missing"),
    _typo('vnotch90', 'primal', 4, 6, 3, "Neumann residual nonzero; homogeneous terms at the non-eigen frequency missing"),
    _typo('vnotch90', 'primal', 4, 8, 1, "Neumann residual nonzero; homogeneous terms at the non-eigen frequency missing"),
    _propagated('vnotch90', 'primal', 4, 2, 2, "phi_{2,4,1}"),
    _propagated('vnotch90', 'primal', 4, 2, 4, "phi_{2,4,3}"),
    _propagated('vnotch90', 'primal', 4, 2, 6, "phi_{2,4,5}"),
    _propagated('vnotch90', 'primal', 4, 4, 1, "h=2 row of j=4"),
    _propagated('vnotch90', 'primal', 4, 4, 2, "h=2 row of j=4"),
    _propagated('vnotch90', 'primal', 4, 4, 3, "h=2 row of j=4"),
    _propagated('vnotch90', 'primal', 4, 4, 4, "h=2 row of j=4"),
    _propagated('vnotch90', 'primal', 4, 4, 5, "h=2 row of j=4"),
    _propagated('vnotch90', 'primal', 4, 6, 2, "phi_{6,4,1}"),
)

ERRATA_BY_KEY = {erratum.corpus_key: erratum for erratum in KNOWN_ERRATA}


def erratum_for(corpus_key):
    return ERRATA_BY_KEY.get(tuple(corpus_key))


def typo_keys():
    return {e.corpus_key for e in KNOWN_ERRATA if e.category == TYPO}
