"""termesh: polygonal meshes from triangulations via terminal-edge regions.

A triangulation's edges are classified by the longest-edge relation, the
resulting frontier edges delimit regions, each region's boundary is walked
into one polygon, and non-simple polygons are split until every polygon is
simple. Runs on a sequential or a worker-pool backend with identical
canonical output.
"""

from .backend import SEQUENTIAL, Backend, ReservationCounter, for_each_chunk, for_each_index, parallel, reserve
from .errors import ParseError, StructuralError, TermeshError, ValidationError
from .io_formats import (TriangleFileSet, generate_random_delaunay, read_polymesh,
                         read_triangulation, write_polymesh, write_svg,
                         write_triangulation)
from .labeling import EdgeLabels, label_all, label_frontiers, label_max, label_seeds
from .mesh_core import (BORDER, Triangulation, ValidationReport, compute_trivertex,
                        edge_endpoints, next_halfedge, prev_halfedge, signed_areas,
                        squared_length, twin, validate)
from .oracle import (RegionPartition, boundary_polygon_of_region, canonicalize,
                     check_simple, regions_by_union_find)
from .pipeline import (PhaseStats, PipelineConfig, RandomInput, bench, execute,
                       load_input, run_pipeline)
from .reparation import (RoundResult, TipRecord, find_barrier_tip,
                         middle_internal_edge, repair_all, repair_round)
from .traversal import (PolygonMesh, build_polygon_mesh, enclosed_signed_areas,
                        find_start_frontier, next_frontier, poly_construction)

__version__ = "0.1.0"
