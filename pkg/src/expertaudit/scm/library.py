"""Reference models M1 and M2 as parametric factories."""
from __future__ import annotations

from .expr import Max, Min, Noise, Ref
from .model import ScmSpec


def m1(p: float = 0.5) -> ScmSpec:
    """Hidden context U drives both the action and the outcome."""
    return ScmSpec(
        variables=("U", "A", "Y"),
        equations={
            "U": Noise("U"),
            "A": Max((Ref("U"), Noise("A"))),
            "Y": Min((Ref("A"), Max((Ref("U"), Noise("Y"))))),
        },
        noise={"U": p, "A": p, "Y": p},
        name="M1",
    )


def m2(p: float = 0.5) -> ScmSpec:
    """Same (A, Y) distribution as ``m1(p)`` without any hidden context."""
    return ScmSpec(
        variables=("A", "Y"),
        equations={"A": Noise("A"), "Y": Min((Noise("Y"), Ref("A")))},
        noise={"A": 2 * p - p**2, "Y": (p**2 - p - 1) / (p - 2)},
        name="M2",
    )


def observational_ay_table(p: float) -> dict[tuple[int, int], float]:
    """Closed-form observational (A, Y) distribution shared by M1 and M2."""
    return {
        (0, 0): p**2 - 2 * p + 1,
        (0, 1): 0.0,
        (1, 0): p**3 - 2 * p**2 + p,
        (1, 1): -(p**3) + p**2 + p,
    }
