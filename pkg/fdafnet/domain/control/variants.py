from __future__ import annotations

import re
from dataclasses import dataclass

from ..shared.errors import InvalidConfigError


@dataclass(frozen=True)
class MaskedVariant:
    """
    One row of the masked step-size family. A mask that is not learned is
    fixed to `fixed_mu` / `fixed_e` in every bin.
    """

    name: str
    learns_mu: bool
    learns_e: bool
    fixed_mu: float
    fixed_e: float
    lambda_p: float
    mu_max: float

    @property
    def uses_network(self) -> bool:
        return self.learns_mu or self.learns_e


MASKED_VARIANTS: dict[str, MaskedVariant] = {
    "ea_fdaf": MaskedVariant("ea_fdaf", False, False, 1.0, 1.0, lambda_p=0.5, mu_max=0.75),
    "dnn_fdaf_no_me": MaskedVariant("dnn_fdaf_no_me", True, False, 1.0, 0.0, lambda_p=0.0, mu_max=1.0),
    "dnn_fdaf_mmu1": MaskedVariant("dnn_fdaf_mmu1", False, True, 1.0, 1.0, lambda_p=0.0, mu_max=0.5),
    "dnn_fdaf": MaskedVariant("dnn_fdaf", True, True, 1.0, 1.0, lambda_p=0.0, mu_max=1.0),
}

FDAF = "fdaf"
KALMAN = "kalman"
_KALMAN_PATTERN = re.compile(r"^kalman(?:_a(?P<a>\d*\.?\d+))?$")


def parse_kalman_name(name: str) -> float | None:
    """Returns the A encoded in `kalman_a<A>`, None for plain `kalman`; raises for other names."""
    match = _KALMAN_PATTERN.match(name)
    if not match:
        raise InvalidConfigError(f"not a Kalman controller name: {name}")
    value = match.group("a")
    return float(value) if value else None


def is_kalman(name: str) -> bool:
    return bool(_KALMAN_PATTERN.match(name))


def validate_controller_name(name: str) -> str:
    if name == FDAF or name in MASKED_VARIANTS or is_kalman(name):
        return name
    known = ", ".join([FDAF, KALMAN, "kalman_a<A>", *MASKED_VARIANTS])
    raise InvalidConfigError(f"unknown controller '{name}', expected one of: {known}")


def requires_network(name: str) -> bool:
    variant = MASKED_VARIANTS.get(name)
    return bool(variant and variant.uses_network)
