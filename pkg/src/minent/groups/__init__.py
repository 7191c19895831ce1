"""Group presentations, word problems, growth series and growth verdicts."""

from __future__ import annotations

from .auto import auto_backend, make_backend
from .backends import (Backend, DirectProduct, Free, FreeAbelian, FreeProduct, Homomorphism,
                       SmallCancellation, normal_form)
from .classify import (GrowthVerdict, Exponential, Polynomial, Unknown, classify_growth,
                       quotient_entropy_check, thickness_check)
from .growth import EntropyEstimate, GrowthSeries, SubgroupSpec, ball_counts, entropy_estimate
from .presentation import Presentation, surface_presentation
from .smallcancel import Dehn, dehn_reduce, small_cancellation_check
from .stallings import StallingsGraph, stallings_rank

__all__ = [
    "Backend", "DirectProduct", "Free", "FreeAbelian", "FreeProduct", "Homomorphism",
    "SmallCancellation", "normal_form", "GrowthVerdict", "Exponential", "Polynomial", "Unknown",
    "classify_growth", "quotient_entropy_check", "thickness_check", "EntropyEstimate",
    "GrowthSeries", "SubgroupSpec", "ball_counts", "entropy_estimate", "Presentation",
    "surface_presentation", "Dehn", "dehn_reduce", "small_cancellation_check",
    "StallingsGraph", "stallings_rank", "auto_backend", "make_backend",
]
