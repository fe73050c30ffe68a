"""Character-level minimum-cost alignment between two unit sequences.

The alignment is the substrate for edit extraction and edit-level scoring.
Costs default to the unit scheme (sub = ins = del = 1, match = 0);
phonetic/glyph-aware substitution costs are deliberately out of scope, and
all scorer fixtures are written against this scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import UsageError
from .textnorm import UnitSeq

# Brute-force oracle refuses above this combined length (exponential search).
ORACLE_MAX_TOTAL_UNITS = 12


class OpKind(Enum):
    MATCH = "match"
    SUB = "sub"
    INS = "ins"
    DEL = "del"


@dataclass(frozen=True)
class AlignOp:
    """One step of an alignment path.

    src_index/tgt_index are the cursor positions *before* the op: match and
    sub consume src[src_index] and tgt[tgt_index]; del consumes only the
    source unit; ins consumes only the target unit.
    """

    kind: OpKind
    src_index: int
    tgt_index: int


@dataclass(frozen=True)
class CostScheme:
    """Per-operation costs. Match is always free; the rest must be positive."""

    substitution: float = 1.0
    insertion: float = 1.0
    deletion: float = 1.0

    def __post_init__(self) -> None:
        for field_name in ("substitution", "insertion", "deletion"):
            if getattr(self, field_name) <= 0:
                raise UsageError(f"{field_name} cost must be > 0")


UNIT_COSTS = CostScheme()


@dataclass(frozen=True)
class AlignmentPath:
    """A monotone op path from (0,0) to (n,m) over src and tgt."""

    src: UnitSeq
    tgt: UnitSeq
    ops: tuple[AlignOp, ...]
    total_cost: float

    def __post_init__(self) -> None:
        i = j = 0
        for op in self.ops:
            if (op.src_index, op.tgt_index) != (i, j):
                raise UsageError(f"op {op} breaks monotone traversal at ({i},{j})")
            if op.kind in (OpKind.MATCH, OpKind.SUB):
                if op.kind is OpKind.MATCH and self.src.units[i] != self.tgt.units[j]:
                    raise UsageError(f"match op at ({i},{j}) joins unequal units")
                i, j = i + 1, j + 1
            elif op.kind is OpKind.DEL:
                i += 1
            else:
                j += 1
        if (i, j) != (len(self.src), len(self.tgt)):
            raise UsageError(f"path ends at ({i},{j}), expected ({len(self.src)},{len(self.tgt)})")


def align(src: UnitSeq, tgt: UnitSeq, costs: CostScheme = UNIT_COSTS) -> AlignmentPath:
    """Globally minimum-cost alignment with a deterministic tie-break.

    Ties are resolved by walking forward from (0,0) along optimal
    continuations, preferring match > substitution > deletion > insertion at
    each step. This pins the exact op sequence (e.g. in a run of equal units
    the matches come first and the deletion lands at the end of the run), so
    extraction downstream is reproducible.
    """
    s, t = src.units, tgt.units
    n, m = len(s), len(t)
    c_sub, c_ins, c_del = costs.substitution, costs.insertion, costs.deletion

    # suffix[i][j] = min cost of aligning s[i:] with t[j:]
    suffix = [[0.0] * (m + 1) for _ in range(n + 1)]
    for j in range(m - 1, -1, -1):
        suffix[n][j] = suffix[n][j + 1] + c_ins
    for i in range(n - 1, -1, -1):
        suffix[i][m] = suffix[i + 1][m] + c_del
        row, below = suffix[i], suffix[i + 1]
        si = s[i]
        for j in range(m - 1, -1, -1):
            diag = below[j + 1] + (0.0 if si == t[j] else c_sub)
            up = below[j] + c_del
            left = row[j + 1] + c_ins
            best = diag
            if up < best:
                best = up
            if left < best:
                best = left
            row[j] = best

    ops: list[AlignOp] = []
    i = j = 0
    while i < n or j < m:
        here = suffix[i][j]
        if i < n and j < m and s[i] == t[j] and suffix[i + 1][j + 1] == here:
            ops.append(AlignOp(OpKind.MATCH, i, j))
            i, j = i + 1, j + 1
        elif i < n and j < m and s[i] != t[j] and suffix[i + 1][j + 1] + c_sub == here:
            ops.append(AlignOp(OpKind.SUB, i, j))
            i, j = i + 1, j + 1
        elif i < n and suffix[i + 1][j] + c_del == here:
            ops.append(AlignOp(OpKind.DEL, i, j))
            i += 1
        else:
            ops.append(AlignOp(OpKind.INS, i, j))
            j += 1

    return AlignmentPath(src=src, tgt=tgt, ops=tuple(ops), total_cost=suffix[0][0])


def oracle_min_cost(src: UnitSeq, tgt: UnitSeq, costs: CostScheme = UNIT_COSTS) -> float:
    """Minimum alignment cost by plain brute-force recursion (no memoization).

    Test oracle only: refuses pairs with more than ORACLE_MAX_TOTAL_UNITS
    combined units.
    """
    s, t = src.units, tgt.units
    n, m = len(s), len(t)
    if n + m > ORACLE_MAX_TOTAL_UNITS:
        raise UsageError(
            f"oracle_min_cost refuses {n}+{m} units (limit {ORACLE_MAX_TOTAL_UNITS})"
        )
    c_sub, c_ins, c_del = costs.substitution, costs.insertion, costs.deletion

    def go(i: int, j: int) -> float:
        if i == n:
            return (m - j) * c_ins
        if j == m:
            return (n - i) * c_del
        best = go(i + 1, j + 1) + (0.0 if s[i] == t[j] else c_sub)
        del_cost = go(i + 1, j) + c_del
        if del_cost < best:
            best = del_cost
        ins_cost = go(i, j + 1) + c_ins
        if ins_cost < best:
            best = ins_cost
        return best

    return go(0, 0)
