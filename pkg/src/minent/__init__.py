"""Volume entropy, Cayley growth and collapsing experiments on finite simplicial complexes."""

from __future__ import annotations

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .collapse import (CollapseConfig, CollapseReport, CollapseVerdict, build_gt,
                       check_collapsing, run_collapse)
from .complex import (HomologyGroup, MetricComplex, SimplicialComplex, SimplicialMap, Subcomplex,
                      connected_fiber_quotient, fiber, homology, pullback_gram, simplex_volume,
                      total_volume, validate)
from .covers import Cover, cover_growth_tagging, nerve, pullback_cover, star_cover, width_upper_bound
from .entropy import (Pi1Model, count_loops, entropy_volume_product, pi1_presentation,
                      volume_entropy_estimate)
from .errors import (BudgetExceeded, DimensionTooHigh, Disconnected, EmptyFiber, InvalidSpec,
                     MinentError, MismatchedGenerators, NonRealizable, NotSmallCancellation,
                     Unsupported)
from .groups import (Presentation, ball_counts, classify_growth, entropy_estimate, make_backend,
                     surface_presentation)
from .margulis import (chain_check, margulis_constant, prop_diament_check, prop_entL_check,
                       short_loop_generators)
from .zoo import ZooSpec, build, verify

__all__ = [name for name in dir() if not name.startswith("_")]
