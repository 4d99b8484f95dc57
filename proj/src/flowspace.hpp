#pragma once

// Horizontal flow space: generalized geodesics of the tree carrying a fixed
// fiber vector, the time-shift flow, the exponentially weighted integral
// metric with certified error bars, periodic-orbit counts, and the probes
// built on top of them.

#include "geometry.hpp"

namespace horolab {

/// Only three kinds occur among the images of the embedding, the flow and the
/// group action: constants, rays falling toward the distinguished end, and
/// vertical lines through the end (parameterized upward).
enum class GeodesicKind { Constant, RayToEnd, LineThroughEnd };

struct HorizontalGeodesic {
  GeodesicKind kind = GeodesicKind::Constant;
  TreePoint anchor;      // Constant: the value; Ray: value on (-inf, c_minus];
                         // Line: position at time 0
  double c_minus = 0.0;  // Ray: plateau end (c_plus = +inf)
  RingFraction line;     // Line: the defining element of the vertical line
  Vec fiber;
};

HorizontalGeodesic constant_geodesic(const TreePoint& z, const Vec& w);
/// The embedding: constant equal to z before time 0, unit-speed fall toward
/// the end afterwards.
HorizontalGeodesic psi(const TreePoint& z, const Vec& w);
/// Bi-infinite vertical geodesic along the line of b, ascending with time;
/// at time 0 it sits at height h0.
HorizontalGeodesic line_geodesic(const FieldDescriptor& f, const RingFraction& b, double h0,
                                 const Vec& w);

double geodesic_height(const HorizontalGeodesic& c, double t);
TreePoint geodesic_eval(const FieldDescriptor& f, const HorizontalGeodesic& c, double t);

HorizontalGeodesic flow(const FieldDescriptor& f, const HorizontalGeodesic& c, double tau);
HorizontalGeodesic act_geodesic(const FieldDescriptor& f, const FiberForms& forms,
                                const GammaElement& g, const HorizontalGeodesic& c);
/// Flowed embedding Psi_tau = Phi_tau o Psi.
HorizontalGeodesic psi_tau(const FieldDescriptor& f, const TreePoint& z, const Vec& w, double tau);

/// Height of the junction vertex of the two carrying chains (+big when the
/// chains coincide); the tree distance between positions at time t is then
/// y1 + y2 - 2 min(fJ, y1, y2).
double junction_height(const FieldDescriptor& f, const HorizontalGeodesic& a,
                       const HorizontalGeodesic& b);

struct QuadratureSpec {
  int nodes = 240;      // midpoint panels across [-t_max, t_max]
  double t_max = 12.0;
  int tail_mode = 0;    // 0: endpoint-linear-growth bound
};

struct IntervalValue {
  double value = 0.0;
  double error = 0.0;
};

IntervalValue fs_distance(const FieldDescriptor& f, const FiberForms& forms,
                          const HorizontalGeodesic& c1, const HorizontalGeodesic& c2,
                          const QuadratureSpec& q, const DistParams& par);

struct LipschitzReport {
  IntervalValue base, flowed;
  double tau = 0.0;
  bool pass = false;
  bool inconclusive = false;
};

LipschitzReport lipschitz_check(const FieldDescriptor& f, const FiberForms& forms,
                                const HorizontalGeodesic& c1, const HorizontalGeodesic& c2,
                                double tau, const QuadratureSpec& q, const DistParams& par);

struct PeriodicCount {
  Int lattice_solutions;
  Int total;
};

/// Horizontal periodic curves of period m: |det(A_x^m - I)| lattice solutions
/// (Smith normal form), times d^m branch choices.
PeriodicCount periodic_count(const FieldDescriptor& f, long m);

/// Brute-force lattice solution count over the (1/q)-grid; test oracle.
Int periodic_count_bruteforce(const FieldDescriptor& f, long m, const Int& q);

struct LparReport {
  long threshold_n = 0;
  bool achieved = false;
  int t_const = 0;        // first integer > ln(4/eps), recomputed
  double beta_hat = 1.0;  // arc-control constant for t_const, recomputed
  double worst_tail_fs = 0.0;
  double worst_tail_dx = 0.0;
};

LparReport lpar_probe(const FieldDescriptor& f, const FiberForms& forms, const TreePoint& z0,
                      const Vec& w1, const Vec& w2, double eps, long n_max,
                      const QuadratureSpec& q, const DistParams& par, Rng& rng);

}  // namespace horolab
