#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "contractio/conditions.hpp"
#include "contractio/metric.hpp"
#include "contractio/orbit.hpp"

namespace contractio::fractal {

/// A finite point cloud in R^d standing in for a compact set.
///
/// Coordinates are snapped to the nearest multiple of the resolution ε
/// (ε = 0 disables snapping), deduplicated and stored in lexicographic
/// order, so equal sets compare equal coordinate-for-coordinate.
class CompactSet {
 public:
  CompactSet() = default;
  /// `coords` holds points back to back, `dim` values each. Throws
  /// std::invalid_argument on non-finite coordinates, ragged input, dim = 0
  /// or ε < 0.
  CompactSet(std::size_t dim, double eps, std::vector<double> coords);
  static CompactSet from_points(std::size_t dim, double eps, const std::vector<std::vector<double>>& points);

  std::size_t dim() const { return dim_; }
  double resolution() const { return eps_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  const std::vector<double>& coords() const { return coords_; }

  /// Union, snapped to this set's resolution.
  CompactSet united(const CompactSet& other) const;

  bool operator==(const CompactSet& o) const {
    return dim_ == o.dim_ && eps_ == o.eps_ && coords_ == o.coords_;
  }

 private:
  std::size_t dim_ = 0;
  double eps_ = 0.0;
  std::vector<double> coords_;
};

class AffineMap {
 public:
  /// x -> A·x + b. Records the spectral norm of A as the Lipschitz estimate.
  AffineMap(Eigen::MatrixXd A, Eigen::VectorXd b);
  /// x -> ratio·x + translation.
  static AffineMap similarity(double ratio, std::vector<double> translation);

  std::size_t dim() const { return static_cast<std::size_t>(b_.size()); }
  double lipschitz() const { return lipschitz_; }
  const Eigen::MatrixXd& matrix() const { return A_; }
  const Eigen::VectorXd& offset() const { return b_; }

  void apply(std::span<const double> x, std::span<double> out) const;
  /// Solution of x = A·x + b; requires I - A invertible.
  Eigen::VectorXd fixed_point() const;

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  double lipschitz_;
};

class IFS {
 public:
  /// Throws std::invalid_argument for an empty list, mixed dimensions, or a
  /// map whose Lipschitz estimate is >= 1.
  explicit IFS(std::vector<AffineMap> maps);
  /// Same, without the contraction check.
  static IFS unchecked(std::vector<AffineMap> maps);
  /// Three ratio-1/2 maps translated by (0,0), (1/2,0), (0,1/2).
  static IFS sierpinski();

  std::size_t dim() const { return maps_.front().dim(); }
  const std::vector<AffineMap>& maps() const { return maps_; }
  double max_lipschitz() const;

  /// Diameter bound of the attractor: with c the centroid of the map fixed
  /// points, R0 their max distance to c and s the max Lipschitz estimate,
  /// the attractor lies in the ball of radius (1+s)·R0/(1-s) around c.
  double bounding_diameter() const;
  /// 2^-9 of bounding_diameter(), or 2^-9 when that is zero.
  double default_resolution() const;

 private:
  IFS(std::vector<AffineMap> maps, bool check);
  std::vector<AffineMap> maps_;
};

enum class HausdorffMethod { Auto, BruteForce, Indexed };

/// Above this |A|·|B| the Auto method switches to the grid index.
inline constexpr std::size_t kIndexedThreshold = 1'000'000;

/// max_{a in A} min_{b in B} |a - b|. Both methods return bit-identical
/// results; the index only prunes.
double directed_hausdorff(const CompactSet& from, const CompactSet& to,
                          HausdorffMethod method = HausdorffMethod::Auto);

/// Throws DomainError for an empty set, std::invalid_argument for mismatched
/// dimensions.
Scalar hausdorff_distance(const CompactSet& a, const CompactSet& b,
                          HausdorffMethod method = HausdorffMethod::Auto);

/// F(S) = union of w_i(S), snapped to S's resolution.
CompactSet hutchinson(const IFS& ifs, const CompactSet& s);

MetricSpace<CompactSet> hyperspace();
SelfMap<CompactSet> hutchinson_map(const IFS& ifs);

struct AttractorResult {
  CompactSet set;
  OrbitVerdict<CompactSet> verdict;
  std::vector<Scalar> step_distances;
  std::size_t iterations = 0;

  bool converged() const { return std::holds_alternative<Converged<CompactSet>>(verdict); }
};

/// Picard iteration of the Hutchinson operator in the hyperspace. The
/// resolution of `seed` fixes the grid, which has finitely many sets, so the
/// orbit either reaches a fixed set or repeats; a repeat ends the run as
/// Undetermined with the cycle period in the reason.
AttractorResult attractor(const IFS& ifs, const CompactSet& seed, const StoppingPolicy& policy = {});

struct HutchinsonContractionReport {
  bool phi_nondecreasing_asserted = false;
  std::size_t pairs_checked = 0;
  std::size_t passes = 0;
  std::size_t degenerate = 0;
  std::vector<ViolationWitness<CompactSet>> violations;
};

/// Ri condition for the Hutchinson operator on sampled pairs of sets.
/// Requires φ declared nondecreasing (std::invalid_argument otherwise).
HutchinsonContractionReport verify_hutchinson_contraction(
    const IFS& ifs, const ControlFunction& phi,
    const std::vector<std::pair<CompactSet, CompactSet>>& pair_samples);

/// Least-squares slope of log2 N(s) against log2(1/s) over the box sizes
/// s = base·2^k, k = 0..levels-1.
double box_count_slope(const CompactSet& set, double base, std::size_t levels);

// ---------------------------------------------------------------------------
// Serialization

/// "# dim=<d> eps=<ε>" then one point per line, %.17g, comma separated.
void write_csv(std::ostream& os, const CompactSet& set);
/// Throws std::runtime_error on malformed input.
CompactSet read_csv(std::istream& is);

struct Viewport {
  std::size_t width = 512;
  std::size_t height = 512;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

  /// Bounding box of the set (first two coordinates).
  static Viewport fit(const CompactSet& set, std::size_t width, std::size_t height);
};

/// Binary PGM (P5), one byte per pixel, 255 = occupied, row 0 at ymax.
/// One-dimensional sets are drawn on the middle row.
void write_pgm(std::ostream& os, const CompactSet& set, const Viewport& view);

/// JSON: {"dim": d, "maps": [{"A": [row-major], "b": [...]}, ...]}.
IFS parse_ifs_json(const std::string& text);
std::string ifs_to_json(const IFS& ifs);

}  // namespace contractio::fractal
