"""
Published iteration counts of two transient FSI benchmarks, kept as data.

"strong" is the high density-ratio case (grid 6 x 6), "weak" the low
density-ratio case (N_s in {1, 2, 3, inf}). Each also carries the adaptive
policy results. Counts are totals over the whole run. The strong table lists a
few totals that are not the sum of their single-field counts; they are kept
verbatim and reported by ``identity_violations``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from ..errors import ContractViolationError
from .results import SweepResultRow

INF = math.inf
AXIS_STRONG: list[int | float] = [1, 2, 3, 4, 5, INF]
AXIS_WEAK_S: list[int | float] = [1, 2, 3, INF]

# n_f -> per n_s: (coupling, newton_total, newton_f, newton_s)
_STRONG: dict[int | float, list[tuple[int, int, int, int]]] = {
    1: [(617, 1166, 617, 567), (567, 1316, 567, 549), (583, 1499, 583, 549),
        (605, 1622, 605, 549), (573, 1546, 573, 549), (573, 1546, 573, 549)],
    2: [(497, 1488, 994, 494), (460, 1613, 919, 694), (438, 1667, 875, 792),
        (460, 1836, 919, 917), (461, 1837, 922, 915), (461, 1837, 922, 915)],
    3: [(468, 1872, 1404, 468), (366, 1708, 1097, 611), (366, 1843, 1098, 745),
        (374, 1974, 1122, 852), (381, 2014, 1143, 871), (381, 2016, 1143, 873)],
    4: [(407, 2011, 1604, 407), (342, 1939, 1342, 597), (335, 2043, 1315, 728),
        (352, 2225, 1386, 839), (352, 2240, 1386, 854), (352, 2240, 1386, 854)],
    5: [(414, 2300, 1886, 414), (335, 2108, 1523, 585), (336, 2264, 1528, 736),
        (352, 2441, 1602, 839), (355, 2460, 1604, 856), (355, 2460, 1604, 856)],
    INF: [(412, 2410, 1998, 412), (343, 2237, 1639, 589), (333, 2333, 1609, 724),
          (355, 2565, 1713, 852), (354, 2547, 1700, 847), (354, 2547, 1700, 847)],
}

# n_f -> per n_s: (coupling, newton_total, newton_f, newton_s)
_WEAK: dict[int | float, list[tuple[int, int, int, int]]] = {
    1: [(1083, 2109, 1083, 1026), (1083, 2548, 1083, 1465),
        (1083, 2611, 1083, 1528), (1083, 2611, 1083, 1528)],
    2: [(901, 2702, 1802, 900), (901, 3142, 1802, 1340),
        (901, 3205, 1802, 1403), (901, 3205, 1802, 1403)],
    3: [(721, 2884, 2163, 721), (721, 3324, 2163, 1161),
        (721, 3386, 2163, 1223), (721, 3386, 2163, 1223)],
    4: [(718, 3485, 2767, 718), (718, 3925, 2767, 1158),
        (718, 3988, 2767, 1221), (718, 3988, 2767, 1221)],
    5: [(718, 3867, 3149, 718), (718, 4307, 3149, 1158),
        (718, 4370, 3149, 1221), (718, 4370, 3149, 1221)],
    INF: [(718, 4014, 3296, 718), (718, 4454, 3296, 1158),
          (718, 4517, 3296, 1221), (718, 4517, 3296, 1221)],
}

# policy -> (coupling, newton_total, newton_f, newton_s)
_ADAPTIVE: dict[str, dict[str, tuple[int, int, int, int]]] = {
    "strong": {
        "N1-CC": (417, 945, 528, 417),
        "N3-CC": (355, 1799, 1071, 728),
        "CID": (572, 1720, 928, 792),
    },
    "weak": {
        "N1-CC": (768, 1637, 869, 768),
        "N3-CC": (720, 3384, 2161, 1223),
        "CID": (1083, 3182, 1880, 1302),
    },
}

REFERENCE_CASES = ("strong", "weak")
_GRIDS = {"strong": (_STRONG, AXIS_STRONG), "weak": (_WEAK, AXIS_WEAK_S)}


def _row(
    counts: tuple[int, int, int, int],
    n_f: int | float | None = None,
    n_s: int | float | None = None,
    policy: str = "",
) -> SweepResultRow:
    coupling, total, newton_f, newton_s = counts
    return SweepResultRow(
        n_f=n_f,
        n_s=n_s,
        policy=policy,
        coupling_iters=coupling,
        newton_f=newton_f,
        newton_s=newton_s,
        newton_total=total,
        cost=float(total),
        converged=True,
    )


def grid_rows(case: str) -> list[SweepResultRow]:
    """Fixed-budget rows, row-major over (n_f, n_s)."""
    if case in _GRIDS:
        table, axis = _GRIDS[case]
        return [
            _row(counts, n_f, n_s)
            for n_f, cells in table.items()
            for n_s, counts in zip(axis, cells, strict=True)
        ]
    raise ContractViolationError(f"Unknown reference case {case!r}; expected one of {REFERENCE_CASES}")


def policy_rows(case: str) -> list[SweepResultRow]:
    if case not in _ADAPTIVE:
        raise ContractViolationError(f"Unknown reference case {case!r}; expected one of {REFERENCE_CASES}")
    return [_row(counts, policy=name) for name, counts in _ADAPTIVE[case].items()]


def reference_rows(case: str) -> list[SweepResultRow]:
    return grid_rows(case) + policy_rows(case)


def identity_violations(rows: Sequence[SweepResultRow]) -> list[str]:
    """Labels of rows whose newton_total differs from newton_f + newton_s."""
    return [r.label for r in rows if not r.identity_holds()]
