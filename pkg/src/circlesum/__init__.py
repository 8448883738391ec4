"""circlesum: lattice points in circles, desk-scale analytic number theory.

Exact counting of integer points in disks, a planar Euler-Maclaurin
summation formula for convex lattice polygons, Bessel-sum and quadrature
approximations of the counting function, near/far-circle oscillatory sums,
and an experiment harness for the error term P(t) - pi t.
"""

__version__ = "0.1.0"

from .counting import (BACKEND, CountResult, count_lattice, discrepancy,
                       divisibility_kernel, kernel_count_identity)
from .diskapprox import (ApproximationReport, TruncationParams, bessel_sum,
                         disk_quadrature_sum, disk_wave_integral,
                         polygon_vs_disk)
from .geometry import (Edge, LatticePoint, LatticePolygon, disk_hull,
                       edge_integral, isqrt, lattice_weight, vertex_weight)
from .nearfar import (NearFarReport, SplitParams, angular_integral, bump,
                      circle_phase_sum, circle_sum_residual, near_circle_sum,
                      sawtooth_circle_sum)
from .quadrature import (QuadratureError, QuadratureResult, integrate_1d,
                         integrate_disk)
from .special import (bessel_j, cosine_integral, cosine_over_r_integral,
                      dirichlet_sum, e2pi, periodic_bernoulli,
                      periodic_bernoulli_fourier, sawtooth, sawtooth_floor,
                      sawtooth_fourier, sine_integral)
from .summation import (Field2D, PolygonReport, edge_constant,
                        euler_maclaurin, euler_maclaurin_expansion,
                        kernel_field, monomial_field, plane_wave_field,
                        polygon_functional)
