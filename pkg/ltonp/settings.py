"""
Runtime configuration.

Defaults live on the Settings dataclass; a JSON file (see
settings/ltonp.json) and command-line flags are layered on top.
"""
import json
import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Tuple, Union

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Settings:
    # acceptance threshold for verification residuals
    tol: float = 1e-8
    # relative residual target of the Stein solver
    stein_tol: float = 1e-13
    # posdef_tol = posdef_factor * max(1, ||Lambda||)
    posdef_factor: float = 1e-10
    # rho(Z)*rho(alpha) above which the Stein solver uses the dense solve
    doubling_switch: float = 0.95
    max_doubling: int = 64
    # largest n*m handed to the dense Kronecker Stein solve
    dense_cap: int = 2500
    truncation_cap: int = 100000
    circle_points: int = 128
    disc_points: int = 64
    disc_radii: Tuple[float, ...] = (0.3, 0.7, 0.95)
    entropy_start: int = 8
    entropy_cap: int = 512
    entropy_tol: float = 1e-10
    szego_nodes: int = 4096
    # random Schur parameters drawn by verify_solution for the entropy comparison
    entropy_samples: int = 4
    contraction_slack: float = 1e-12
    lifting_tol: float = 1e-10
    seed: int = 0

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "Settings":
        """Load overrides from a JSON object; unknown keys are an error"""
        with open(path) as handle:
            data = json.load(handle)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown settings keys: {sorted(unknown)}")
        if "disc_radii" in data:
            data["disc_radii"] = tuple(float(r) for r in data["disc_radii"])
        logger.debug("loaded settings overrides from %s: %s", path, data)
        return replace(cls(), **data)

    def with_overrides(self, **overrides) -> "Settings":
        """Return a copy with every non-None override applied"""
        applied = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **applied) if applied else self


DEFAULT_SETTINGS = Settings()
