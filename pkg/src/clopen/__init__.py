"""Finite-approximation re-metrization toolkit.

Closed subsets of the space of natural-number sequences as pruned trees,
zero-dimensional spaces embedded through refining clopen schemes, sets of
forall-exists form carried by least-witness closures, the summed metric that
makes a designated set clopen while extending the topology, and bit-exact
codes of the resulting rational metrics.
"""

from .baire import (BairePoint, BelowThreshold, DistanceResult, Exact, constant,
                    distance, eventually_periodic, exact_distance, from_rule,
                    in_basic_nbhd, pair_points, query, slice_point)
from .coding import (SeqCode, append, decode, encode, index_of_rational, is_prefix,
                     lh, pair_code, proj, quad_code, rational_of_index)
from .codes import (CompletionPoint, RationalMetricTable, SpaceCode,
                    completion_distance, constant_completion, decode_metric,
                    encode_metric, interleave, pipeline, render_code_file)
from .luzin import (ImagePresentation, LuzinScheme, ZeroDimPresentation,
                    baire_closed_presentation, cantor_presentation,
                    discrete_presentation, image_presentation, rescale)
from .remetrize import (ClosedRepresentation, SpacePresentation, SumSpace,
                        epsilon_code, extension_certificate, identity_representation,
                        membership_in_a, new_presentation, open_ball_distance,
                        pullback_distance, sum_distance, witness_representation)
from .trees import (DensePointFamily, PrunedTree, dense_distance_le,
                    dense_distance_lt, dense_equal, dense_pn_distance,
                    validate_pruned)
from .witness import Pi02Matrix, WitnessClosure

__version__ = "0.1.0"
