from __future__ import annotations

import enum
from dataclasses import dataclass


class PolicyError(ValueError):
    """Raised for parameters outside a policy family's domain."""


class Family(str, enum.Enum):
    FR = "fr"
    DPR = "dpr"
    TAPERED_DPR = "tdpr"
    RPR = "rpr"
    GSNR = "gsnr"
    CRPR = "crpr"


# smallest legal parameter per family
MIN_PARAM = {
    Family.FR: 1,
    Family.DPR: 1,
    Family.TAPERED_DPR: 1,
    Family.RPR: 0,
    Family.GSNR: 1,
    Family.CRPR: 8,
}

# numeric tags used by the binary column format
FAMILY_TAGS = {
    Family.FR: 1,
    Family.DPR: 2,
    Family.TAPERED_DPR: 3,
    Family.RPR: 4,
    Family.GSNR: 5,
    Family.CRPR: 6,
}
TAG_FAMILIES = {tag: fam for fam, tag in FAMILY_TAGS.items()}


@dataclass(frozen=True)
class PolicySpec:
    """A retention policy family plus its single integer parameter.

    ``param`` is the resolution ``r`` for FR, DPR, tapered DPR and RPR, the
    number of hierarchy levels ``a`` for GSNR, and the retained-item cap
    ``c`` for CRPR.
    """

    family: Family
    param: int

    def __post_init__(self) -> None:
        try:
            fam = Family(self.family)
        except ValueError:
            raise PolicyError(f"unknown policy family {self.family!r}") from None
        object.__setattr__(self, "family", fam)
        if isinstance(self.param, bool) or not isinstance(self.param, int):
            raise PolicyError(f"policy parameter must be an integer, got {self.param!r}")
        if self.param < MIN_PARAM[fam]:
            raise PolicyError(
                f"{fam.value} requires param >= {MIN_PARAM[fam]}, got {self.param}"
            )

    @classmethod
    def parse(cls, text: str) -> PolicySpec:
        """Parse the ``family:param`` shorthand, e.g. ``rpr:3``."""
        name, sep, value = text.partition(":")
        if not sep:
            raise PolicyError(f"expected FAMILY:PARAM, got {text!r}")
        try:
            param = int(value)
        except ValueError:
            raise PolicyError(f"non-integer policy parameter in {text!r}") from None
        return cls(name.strip().lower(), param)

    def __str__(self) -> str:
        return f"{self.family.value}:{self.param}"
