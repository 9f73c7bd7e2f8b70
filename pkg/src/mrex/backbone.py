"""Backbone literals: literals true in every model of a formula."""

from __future__ import annotations

from .formula import CnfFormula, FormulaError
from .solver import SatSession


class UnsatisfiableError(FormulaError):
    """The formula has no models, so every literal is vacuously entailed."""


def compute_backbone(kb: CnfFormula) -> tuple[int, ...]:
    """All literals entailed by kb, sorted by variable.

    Model refinement: each model rules out candidates it falsifies, and
    variables absent from every clause can never be backbone.  Each survivor
    is confirmed by one solve under the opposing assumption.
    """
    session = SatSession(kb.num_vars)
    for c in kb.clauses:
        session.add_hard(c)
    first = session.solve()
    if not first.satisfiable:
        raise UnsatisfiableError("formula is unsatisfiable; backbone is undefined")

    occurring = {abs(l) for c in kb.clauses for l in c}
    candidates = {
        v if first.model[v] else -v
        for v in range(1, kb.num_vars + 1)
        if v in occurring
    }
    backbone: list[int] = []
    for lit in sorted(candidates, key=abs):
        if lit not in candidates:
            continue
        res = session.solve([-lit])
        if res.satisfiable:
            candidates.discard(lit)
            for other in list(candidates):
                if res.model[abs(other)] != (other > 0):
                    candidates.discard(other)
        else:
            backbone.append(lit)
    return tuple(sorted(backbone, key=abs))
