#pragma once

// The model space T_d x R^n with the mapping-torus metric: flat fiber form at
// height 0, pullback forms at integer heights, linear interpolation between.
// Distances are certified sandwiches (lower, upper): the lower bound combines
// the tree distance, height variation and the best fiber form available in a
// height window; the upper bound optimizes fiber breakpoints over candidate
// height profiles (tree arc plus integer overshoots).

#include <vector>

#include "ideals.hpp"
#include "numberfield.hpp"
#include "tree.hpp"

namespace horolab {

using Vec = std::vector<double>;

/// Precomputed Gram matrices G_h of the fiber form at integer heights,
/// Q_h(u) = || u A_x^{-h} ||^2 = u G_h u^T, from exact rational powers.
class FiberForms {
public:
  FiberForms() = default;
  FiberForms(const FieldDescriptor& f, long half_range);

  std::size_t dim() const { return n_; }
  long h_min() const { return -half_range_; }
  long h_max() const { return half_range_; }

  /// u G_h u^T at an integer height (clamped heights throw).
  double quad(long h, const Vec& u) const;
  /// Interpolated form at a real height.
  double quad_at(double f, const Vec& u) const;
  /// Gram matrix at a real height (linear interpolation).
  std::vector<double> gram_at(double f) const;
  /// sqrt of the smallest eigenvalue of G_h, minimized over integer h in
  /// [lo, hi]; a lower bound for the unit fiber cost anywhere in the window.
  /// O(1) via a sparse range-minimum table.
  double sigma_min_window(long lo, long hi) const;

  /// w * A_x^k + translation, in doubles (for the isometric group action).
  Vec affine(const FieldDescriptor& f, const GammaElement& g, const Vec& w) const;

private:
  std::size_t n_ = 0;
  long half_range_ = 0;
  std::vector<std::vector<double>> gram_;  // index h + half_range_
  std::vector<double> lambda_min_;
  std::vector<std::vector<double>> rmq_;   // sparse table over lambda_min_
};

/// The [OP] fiber_form view: height and matrix.
struct FiberFormView {
  double f = 0.0;
  std::vector<double> matrix;  // row-major n x n
};
FiberFormView fiber_form(const FiberForms& forms, double f);

// ---------------------------------------------------------------------------
// Points

/// Point of the tree continuum: vertex plus offset t in [0,1) toward the
/// parent, so its height is anchor.height - t.
struct TreePoint {
  TreeVertex anchor;
  double t = 0.0;
};

double height_of(const TreePoint& p);
TreePoint tree_point(const TreeVertex& v, double t = 0.0);

struct ModelPoint {
  TreePoint z;
  Vec w;
};

/// Heights of the two tree positions and of their meet.
struct PairFrame {
  double f1 = 0, f2 = 0, fmeet = 0;
};
PairFrame pair_frame(const FieldDescriptor& f, const TreePoint& a, const TreePoint& b);
double tree_point_distance(const FieldDescriptor& f, const TreePoint& a, const TreePoint& b);

ModelPoint act_point(const FieldDescriptor& f, const FiberForms& forms, const GammaElement& g,
                     const ModelPoint& p);

// ---------------------------------------------------------------------------
// Certified distances

struct Interval {
  double lo = 0, hi = 0;
  bool flagged = false;  // budget boundary touched
};

struct DistParams {
  int overshoot = 8;    // integer heights above both endpoints
  int undershoot = 2;   // integer heights below the meet
  int window = 64;      // lower-bound window radius
  double opt_tol = 1e-9;
  int max_sweeps = 24;
};

/// Distance sandwich from frame data only (the fiber form depends on heights,
/// never on which edge carries the path).
Interval certified_distance_frame(const FiberForms& forms, const PairFrame& fr, const Vec& w1,
                                  const Vec& w2, const DistParams& par);

Interval distance_bounds(const FieldDescriptor& f, const FiberForms& forms, const ModelPoint& p,
                         const ModelPoint& q, const DistParams& par);

// ---------------------------------------------------------------------------
// Polylines

/// Breakpoints along a tree path; consecutive points must lie on a common
/// tree edge or vertex (heights move monotonically within a segment).
using PathPolyline = std::vector<ModelPoint>;

/// Midpoint-rule length with `subdivisions` samples per integer-height piece;
/// an upper bound of the true path length, non-increasing in `subdivisions`.
double path_length(const FieldDescriptor& f, const FiberForms& forms, const PathPolyline& p,
                   int subdivisions);

// ---------------------------------------------------------------------------
// Probes

struct VlReport {
  long threshold_n = 0;  // smallest sampled N with D_n < eps for all n > N
  double worst_tail = 0;
  bool monotone_ok = false;
  bool achieved = false;
};

/// D_n = upper distance of (z0, w1/n), (z0, w2/n); finds the eps-threshold.
VlReport probe_vl(const FiberForms& forms, double z0_height, const Vec& w1, const Vec& w2,
                  double eps, long n_max, const DistParams& par);

struct ControlReport {
  double beta_hat = 1.0;
  double beta_half_sample = 1.0;  // at half the sample count, for stability
  std::size_t used = 0, skipped = 0;
  bool stable = false;
};

/// Sampled version of the arc-control constant: z1 on the base edge, z on the
/// descending arc of length <= T toward the end, ratios of fiber distances.
ControlReport probe_control(const FiberForms& forms, int T, std::size_t samples, Rng& rng,
                            const DistParams& par, double stability_factor = 1.05);

struct RadsReport {
  double eps_prime = 0;       // positive sampled minimum of the lower bound
  double eps_prime_half = 0;  // at half samples
  bool stable = false;
};

/// Separation probe: lower bounds of d((z,w0),(z,w1)) for ||w0-w1|| > eps0.
RadsReport probe_rads(const FiberForms& forms, double eps0, std::size_t samples, Rng& rng,
                      const DistParams& par, double stability_factor = 1.05);

}  // namespace horolab
