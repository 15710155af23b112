"""Configuration defaults for modva.

Everything here can be overridden from the environment; CLI flags override
the environment in turn.
"""

import os


def _as_bool(value: str, default: bool = False) -> bool:
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "on"}


# Default worker count for degree- and suite-parallel runs
DEFAULT_WORKERS = int(os.environ.get("MODVA_WORKERS", "1"))

# Ground field and truncation
DEFAULT_PRIME = int(os.environ.get("MODVA_PRIME", "5"))
DEFAULT_MAX_DEGREE = int(os.environ.get("MODVA_MAX_DEGREE", "6"))

DEFAULT_SEED = int(os.environ.get("MODVA_SEED", "0"))
DEFAULT_FORMAT = os.environ.get("MODVA_FORMAT", "text")
OUTPUT_FORMATS = ("json", "csv", "text")

# HTTP server
DEFAULT_HOST = os.environ.get("HOST", "0.0.0.0")
DEFAULT_PORT = int(os.environ.get("PORT", "5000"))
DEFAULT_RELOAD = _as_bool(os.environ.get("RELOAD"), default=False)

# Carriers built into the CLI; anything else after "affine:" is a Lie spec path
BUILTIN_CARRIERS = ("affine:sl2", "affine:abelian1", "virasoro")

# ── Suite bounds ───────────────────────────────────────────────

DEFAULT_SUITE_SETTINGS = {
    # hopf-axioms: exhaustive below the bound, sampled up to sample_bound
    "hopf_bound": 4,
    "hopf_sample_bound": 8,
    "hopf_samples": 40,
    # module-lie / laurent-example
    "divided_power_bound": 4,
    "mode_bound": 4,
    "laurent_exponent_bound": 5,
    # series identities (orders in z and z0)
    "series_order": 3,
    "series_degree": 4,
    # skew-symmetry / invariance on composite vectors
    "composite_degree": 2,
    # invariance generator modes |m| <= mode bound, basis degrees <= invariance_degree
    "invariance_mode_bound": 5,
    "invariance_degree": 4,
    # dual-module window
    "dual_window": 3,
    # how many failures a report keeps (minimal first)
    "max_failures": 20,
}
