"""Cyberbullying severity pipeline: intensity labeling, features, models, explanations.

The heavy lifting lives in the compiled ``_core`` extension. When installed as
a wheel the extension and a copy of the lexicon data sit inside this package;
when working from a source checkout the extension is picked up from the CMake
build directory if it is on ``sys.path``.
"""

import os as _os

_pkg_data = _os.path.join(_os.path.dirname(_os.path.abspath(__file__)), "data")
if _os.path.isdir(_pkg_data):
    # Point the core library at the packaged lexicons unless the caller
    # already chose a data directory.
    _os.environ.setdefault("BULLYRANK_DATA", _pkg_data)

try:
    from ._core import (  # type: ignore[attr-defined]
        Network,
        classify_intensity,
        encode_user,
        polarity_score,
        porter_stem,
        preprocess,
        run_stage,
        sentiment,
        tabular_feature_names,
        vulnerability_factor,
        __version__,
    )
except ImportError:
    # Source-checkout fallback: the extension was built by CMake outside the
    # package (e.g. build/_core*.so) and is importable as a top-level module.
    from _core import (  # type: ignore[no-redef]
        Network,
        classify_intensity,
        encode_user,
        polarity_score,
        porter_stem,
        preprocess,
        run_stage,
        sentiment,
        tabular_feature_names,
        vulnerability_factor,
        __version__,
    )

__all__ = [
    "Network",
    "classify_intensity",
    "encode_user",
    "polarity_score",
    "porter_stem",
    "preprocess",
    "run_stage",
    "sentiment",
    "tabular_feature_names",
    "vulnerability_factor",
    "__version__",
]
