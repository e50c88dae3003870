"""Exact finite models of plane dendroids built over the middle-thirds Cantor set."""
from ._accel import BACKEND
from .cantor import ClopenSet, Cylinder, Partition, diameter, mesh, refines, respects
from .comb import figure1_model, remark13_build
from .dendroid import DendroidApprox
from .fans import (MultiplierSchedule, StepFunction, cantor_fan_profile, endpoint_density_check,
                   fan_geometry, lelek_profile)
from .partition import NullPartitionRequest, null_partition
from .probes import (degree_stats, delta_quasicomponents, endpoint_height_usc_check,
                     radially_convex_check)
from .quotient import (Band, Decomposition, example20_build, gehman_decomposition, quotient_tree,
                       usc_decomposition_check)
from .raster import RasterScene, accessibility_probe, rasterize
from .separation import SeparationCurve, separation_curve, verify_separation

__version__ = "0.1.0"
