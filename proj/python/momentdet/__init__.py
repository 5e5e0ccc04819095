"""Moment determinacy analysis from windowed data.

Thin wrappers over the C++ core: sequence regularization, the windowed
series conditions with three-valued verdicts, Hankel positivity, Carleman
and Stieltjes determinacy checks, Gauss quadrature from raw moments, the
compactly supported witness construction, and the tensor-level determining
analysis.
"""

try:
    from ._momentdet import *  # noqa: F401,F403
    from ._momentdet import (
        analyze_multi,
        bump_witness,
        carleman_check,
        hankel_psd,
        integral_identity,
        is_log_convex,
        qa_conditions,
        quadrature_from_moments,
        realize,
        regularize,
        stieltjes_check,
        version,
    )
except ImportError:  # pragma: no cover - build-tree layout
    from _momentdet import *  # noqa: F401,F403
    from _momentdet import (
        analyze_multi,
        bump_witness,
        carleman_check,
        hankel_psd,
        integral_identity,
        is_log_convex,
        qa_conditions,
        quadrature_from_moments,
        realize,
        regularize,
        stieltjes_check,
        version,
    )

__all__ = [
    "analyze_multi",
    "bump_witness",
    "carleman_check",
    "hankel_psd",
    "integral_identity",
    "is_log_convex",
    "qa_conditions",
    "quadrature_from_moments",
    "realize",
    "regularize",
    "stieltjes_check",
    "version",
]
