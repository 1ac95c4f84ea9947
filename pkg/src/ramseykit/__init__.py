"""ramseykit: exact threshold Ramsey multiplicity computations for small graphs."""

__version__ = "0.1.0"

from .graphs import (  # noqa: F401
    PatternGraph,
    SimpleGraph,
    TwoColoring,
    count_copies,
    cycle_spectrum,
    decode,
    encode,
    mono_counts,
)


def __getattr__(name):
    # heavier submodule entry points, loaded on first use
    if name in ("multiplicity", "ramsey_number", "threshold_multiplicity", "SearchBudget"):
        from . import search

        return getattr(search, name)
    if name in ("chi", "extremal_parameter", "case2_lower_bound"):
        from . import extremal

        return getattr(extremal, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
