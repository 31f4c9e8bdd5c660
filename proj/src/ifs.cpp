#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "contractio/fractal.hpp"
#include "contractio/parallel.hpp"

namespace contractio::fractal {

AffineMap::AffineMap(Eigen::MatrixXd A, Eigen::VectorXd b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != A_.cols() || A_.rows() != b_.size() || b_.size() == 0) {
    throw std::invalid_argument("AffineMap: A must be d x d and b of length d >= 1");
  }
  if (!A_.allFinite() || !b_.allFinite()) throw std::invalid_argument("AffineMap: non-finite entry");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A_);
  lipschitz_ = svd.singularValues()(0);
}

AffineMap AffineMap::similarity(double ratio, std::vector<double> translation) {
  const auto d = static_cast<Eigen::Index>(translation.size());
  Eigen::MatrixXd A = ratio * Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(translation.data(), d);
  return AffineMap(std::move(A), std::move(b));
}

void AffineMap::apply(std::span<const double> x, std::span<double> out) const {
  const std::size_t d = dim();
  for (std::size_t i = 0; i < d; ++i) {
    double s = b_(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < d; ++j) s += A_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * x[j];
    out[i] = s;
  }
}

Eigen::VectorXd AffineMap::fixed_point() const {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(A_.rows(), A_.cols());
  return (I - A_).fullPivLu().solve(b_);
}

IFS::IFS(std::vector<AffineMap> maps) : IFS(std::move(maps), true) {}

IFS IFS::unchecked(std::vector<AffineMap> maps) { return IFS(std::move(maps), false); }

IFS::IFS(std::vector<AffineMap> maps, bool check) : maps_(std::move(maps)) {
  if (maps_.empty()) throw std::invalid_argument("IFS: no maps");
  for (const auto& m : maps_) {
    if (m.dim() != maps_.front().dim()) throw std::invalid_argument("IFS: maps of different dimension");
    if (check && !(m.lipschitz() < 1.0)) {
      throw std::invalid_argument("IFS: map with Lipschitz estimate " + std::to_string(m.lipschitz()) +
                                  " is not a contraction");
    }
  }
}

IFS IFS::sierpinski() {
  return IFS({AffineMap::similarity(0.5, {0.0, 0.0}), AffineMap::similarity(0.5, {0.5, 0.0}),
              AffineMap::similarity(0.5, {0.0, 0.5})});
}

double IFS::max_lipschitz() const {
  double s = 0.0;
  for (const auto& m : maps_) s = std::max(s, m.lipschitz());
  return s;
}

double IFS::bounding_diameter() const {
  const double s = max_lipschitz();
  if (!(s < 1.0)) throw std::invalid_argument("IFS::bounding_diameter: not a contraction");
  std::vector<Eigen::VectorXd> fixed;
  Eigen::VectorXd centre = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
  for (const auto& m : maps_) {
    fixed.push_back(m.fixed_point());
    centre += fixed.back();
  }
  centre /= static_cast<double>(fixed.size());
  double r0 = 0.0;
  for (const auto& p : fixed) r0 = std::max(r0, (p - centre).norm());
  return 2.0 * (1.0 + s) * r0 / (1.0 - s);
}

double IFS::default_resolution() const {
  const double diameter = bounding_diameter();
  return std::ldexp(diameter > 0.0 ? diameter : 1.0, -9);
}

namespace {

std::size_t set_hash(const CompactSet& s) {
  const auto& c = s.coords();
  return std::hash<std::string_view>{}(
      std::string_view(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(double)));
}

}  // namespace

CompactSet hutchinson(const IFS& ifs, const CompactSet& s) {
  if (s.dim() != ifs.dim()) throw std::invalid_argument("hutchinson: dimension mismatch");
  const std::size_t d = s.dim();
  const std::size_t n = s.size();
  const auto& maps = ifs.maps();
  std::vector<double> coords(maps.size() * n * d);
  parallel_for(maps.size() * n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t m = k / n;
      const std::size_t p = k % n;
      maps[m].apply(s.point(p), std::span<double>(coords.data() + k * d, d));
    }
  }, 1024);
  return CompactSet(d, s.resolution(), std::move(coords));
}

MetricSpace<CompactSet> hyperspace() {
  return {"hyperspace", [](const CompactSet& a, const CompactSet& b) { return hausdorff_distance(a, b); }, {}};
}

SelfMap<CompactSet> hutchinson_map(const IFS& ifs) {
  return {hyperspace(), "hutchinson", [ifs](const CompactSet& s) { return hutchinson(ifs, s); }};
}

AttractorResult attractor(const IFS& ifs, const CompactSet& seed, const StoppingPolicy& policy) {
  if (seed.empty()) throw DomainError("attractor: empty seed");
  if (seed.dim() != ifs.dim()) throw std::invalid_argument("attractor: seed dimension mismatch");
  if (!(ifs.max_lipschitz() < 1.0)) throw std::invalid_argument("attractor: IFS maps must be contractions");
  std::unordered_multimap<std::size_t, std::size_t> seen;
  auto cycle = [&seen](const std::vector<CompactSet>& sets) -> std::optional<std::string> {
    const std::size_t n = sets.size() - 1;
    if (seen.empty()) seen.emplace(set_hash(sets[0]), 0);
    const std::size_t h = set_hash(sets[n]);
    const auto [lo, hi] = seen.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      if (sets[it->second] == sets[n]) {
        return "grid-level cycle of period " + std::to_string(n - it->second);
      }
    }
    seen.emplace(h, n);
    return std::nullopt;
  };

  auto run = iterate(hutchinson_map(ifs), seed, policy, cycle);
  AttractorResult result{run.orbit.last(), run.verdict, run.orbit.step_distances, run.orbit.steps()};
  return result;
}

HutchinsonContractionReport verify_hutchinson_contraction(
    const IFS& ifs, const ControlFunction& phi,
    const std::vector<std::pair<CompactSet, CompactSet>>& pair_samples) {
  if (!phi.nondecreasing()) {
    throw std::invalid_argument("verify_hutchinson_contraction: phi must be declared nondecreasing");
  }
  const auto f = hutchinson_map(ifs);
  const auto kind = ConditionKind::ri();
  HutchinsonContractionReport report;
  report.phi_nondecreasing_asserted = true;
  for (const auto& [a, b] : pair_samples) {
    if (a == b) {
      ++report.degenerate;
      continue;
    }
    try {
      auto outcome = check_pair(f, phi, kind, a, b);
      ++report.pairs_checked;
      if (auto* w = std::get_if<ViolationWitness<CompactSet>>(&outcome)) {
        report.violations.push_back(std::move(*w));
      } else {
        ++report.passes;
      }
    } catch (const DegeneratePair&) {
      ++report.degenerate;
    }
  }
  return report;
}

double box_count_slope(const CompactSet& set, double base, std::size_t levels) {
  if (levels < 2) throw std::invalid_argument("box_count_slope: need at least two scales");
  if (!(base > 0.0)) throw std::invalid_argument("box_count_slope: base must be > 0");
  if (set.empty()) throw DomainError("box_count_slope: empty set");
  const std::size_t d = set.dim();
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < levels; ++k) {
    const double size = std::ldexp(base, static_cast<int>(k));
    std::vector<long> boxes;
    boxes.reserve(set.size() * d);
    for (std::size_t p = 0; p < set.size(); ++p) {
      for (double v : set.point(p)) boxes.push_back(static_cast<long>(std::floor(v / size)));
    }
    std::vector<std::vector<long>> keys;
    keys.reserve(set.size());
    for (std::size_t p = 0; p < set.size(); ++p) {
      keys.emplace_back(boxes.begin() + static_cast<std::ptrdiff_t>(p * d),
                        boxes.begin() + static_cast<std::ptrdiff_t>((p + 1) * d));
    }
    std::sort(keys.begin(), keys.end());
    const auto count = std::unique(keys.begin(), keys.end()) - keys.begin();
    xs.push_back(-std::log2(size));
    ys.push_back(std::log2(static_cast<double>(count)));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace contractio::fractal
