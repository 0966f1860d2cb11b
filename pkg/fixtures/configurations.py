"""
Test Data
Module configurations exercised by the test suites
"""
from typing import List, NamedTuple


class ModuleConfig(NamedTuple):
    cartan_type: str
    m: int
    denominator: int

    @property
    def id(self) -> str:
        return f"{self.cartan_type}-m{self.m}-N{self.denominator}"


def admissible(m: int, denominator: int) -> bool:
    """N-torsion points lie in X_m exactly when N divides m^2 - 1 (any N for m = 1)"""
    return m == 1 or (m * m - 1) % denominator == 0


def acceptance_grid() -> List[ModuleConfig]:
    """Rank-two types with m = 1, 2, 3 and every admissible N up to 6, plus A3 and B3 at m = 1"""
    grid = [
        ModuleConfig(t, m, n)
        for t in ("A1xA1", "A2", "B2", "G2")
        for m in (1, 2, 3)
        for n in range(1, 7)
        if admissible(m, n)
    ]
    grid.extend(ModuleConfig(t, 1, n) for t in ("A3", "B3") for n in (1, 2))
    return grid


# Small configurations for the fast runs
SMOKE_CONFIGS = [
    ModuleConfig("A1", 1, 1),
    ModuleConfig("A1", 2, 3),
    ModuleConfig("A1", 1, 2),
    ModuleConfig("A2", 1, 1),
    ModuleConfig("A2", 1, 2),
    ModuleConfig("A1xA1", 1, 2),
    ModuleConfig("B2", 3, 2),
]

ACCEPTANCE_CONFIGS = acceptance_grid()

# Transport is compared against the direct action on rank <= 2 and A3 at N = 2
ORACLE_CONFIGS = [c for c in ACCEPTANCE_CONFIGS if c.cartan_type not in ("A3", "B3")] + [ModuleConfig("A3", 1, 2)]

# Finite-field characteristics
FIELD_CHARACTERISTICS = [3, 5, 7, 11]
