#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "contractio/fractal.hpp"

namespace contractio::fractal {

CompactSet::CompactSet(std::size_t dim, double eps, std::vector<double> coords) : dim_(dim), eps_(eps) {
  if (dim == 0) throw std::invalid_argument("CompactSet: dimension must be >= 1");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("CompactSet: resolution must be >= 0");
  if (coords.size() % dim != 0) throw std::invalid_argument("CompactSet: coordinate count not a multiple of dim");
  for (double& v : coords) {
    if (!std::isfinite(v)) throw std::invalid_argument("CompactSet: non-finite coordinate");
    if (eps > 0.0) v = std::nearbyint(v / eps) * eps;
    v += 0.0;  // -0.0 -> +0.0
  }

  const std::size_t n = coords.size() / dim;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto at = [&](std::size_t i) { return coords.begin() + static_cast<std::ptrdiff_t>(i * dim); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(at(a), at(a) + static_cast<std::ptrdiff_t>(dim), at(b),
                                        at(b) + static_cast<std::ptrdiff_t>(dim));
  });

  coords_.reserve(coords.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto p = at(order[k]);
    if (k > 0 && std::equal(p, p + static_cast<std::ptrdiff_t>(dim), coords_.end() - static_cast<std::ptrdiff_t>(dim))) {
      continue;
    }
    coords_.insert(coords_.end(), p, p + static_cast<std::ptrdiff_t>(dim));
  }
}

CompactSet CompactSet::from_points(std::size_t dim, double eps, const std::vector<std::vector<double>>& points) {
  std::vector<double> coords;
  coords.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.size() != dim) throw std::invalid_argument("CompactSet: point of wrong dimension");
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return CompactSet(dim, eps, std::move(coords));
}

CompactSet CompactSet::united(const CompactSet& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("CompactSet::united: dimension mismatch");
  std::vector<double> coords = coords_;
  coords.insert(coords.end(), other.coords_.begin(), other.coords_.end());
  return CompactSet(dim_, eps_, std::move(coords));
}

}  // namespace contractio::fractal
