#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "contractio/fractal.hpp"
#include "contractio/parallel.hpp"

namespace contractio::fractal {

namespace {

inline double squared_distance(const double* a, const double* b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

/// Uniform grid over a point set, bucketed in CSR form.
class GridIndex {
 public:
  explicit GridIndex(const CompactSet& set) : set_(set), dim_(set.dim()) {
    const std::size_t n = set.size();
    lo_.assign(dim_, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dim_, -std::numeric_limits<double>::infinity());
    for (std::size_t p = 0; p < n; ++p) {
      const auto x = set.point(p);
      for (std::size_t i = 0; i < dim_; ++i) {
        lo_[i] = std::min(lo_[i], x[i]);
        hi[i] = std::max(hi[i], x[i]);
      }
    }
    double extent = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) extent = std::max(extent, hi[i] - lo_[i]);
    const double per_axis = std::ceil(std::pow(std::max(1.0, n / 2.0), 1.0 / static_cast<double>(dim_)));
    cell_ = extent > 0.0 ? extent / per_axis : 1.0;

    const std::size_t cell_budget = 8 * n + 64;
    for (;;) {
      std::size_t total = 1;
      bool fits = true;
      dims_.assign(dim_, 1);
      for (std::size_t i = 0; i < dim_; ++i) {
        dims_[i] = static_cast<long>(std::floor((hi[i] - lo_[i]) / cell_)) + 1;
        if (total > cell_budget / static_cast<std::size_t>(dims_[i])) fits = false;
        total *= static_cast<std::size_t>(dims_[i]);
      }
      if (fits && total <= cell_budget) break;
      cell_ *= 2.0;
    }

    strides_.assign(dim_, 1);
    for (std::size_t i = 1; i < dim_; ++i) strides_[i] = strides_[i - 1] * static_cast<std::size_t>(dims_[i - 1]);
    const std::size_t cells = strides_.back() * static_cast<std::size_t>(dims_.back());

    std::vector<std::size_t> cell_of(n);
    start_.assign(cells + 1, 0);
    for (std::size_t p = 0; p < n; ++p) {
      cell_of[p] = linear(clamped_cell(set.point(p).data()));
      ++start_[cell_of[p] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
    members_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t p = 0; p < n; ++p) members_[fill[cell_of[p]]++] = p;
  }

  /// Exact min squared distance from q to the set, except that the search
  /// may return early with any value <= stop_at.
  double nearest(const double* q, double stop_at) const {
    std::vector<long> qc(dim_);
    long first_ring = 0, last_ring = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      qc[i] = static_cast<long>(std::floor((q[i] - lo_[i]) / cell_));
      const long below = -qc[i];                   // > 0 when q is left of the grid
      const long above = qc[i] - (dims_[i] - 1);   // > 0 when q is right of the grid
      first_ring = std::max(first_ring, std::max(below, above));
      last_ring = std::max(last_ring, std::max(std::abs(qc[i]), std::abs(dims_[i] - 1 - qc[i])));
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<long> lo(dim_), hi(dim_), c(dim_);
    for (long r = first_ring; r <= last_ring; ++r) {
      // Unvisited points lie more than (r - 1)·cell away; one extra ring of
      // margin absorbs floor() rounding at cell borders.
      const double reach = static_cast<double>(r - 2) * cell_;
      if (reach > 0.0 && reach * reach > best) break;

      bool empty_ring = false;
      for (std::size_t i = 0; i < dim_; ++i) {
        lo[i] = std::max(0L, qc[i] - r);
        hi[i] = std::min(dims_[i] - 1, qc[i] + r);
        empty_ring = empty_ring || lo[i] > hi[i];
        c[i] = lo[i];
      }
      while (!empty_ring) {
        long cheb = 0;
        for (std::size_t i = 0; i < dim_; ++i) cheb = std::max(cheb, std::abs(c[i] - qc[i]));
        if (cheb == r) {
          std::size_t idx = 0;
          for (std::size_t i = 0; i < dim_; ++i) idx += static_cast<std::size_t>(c[i]) * strides_[i];
          for (std::size_t k = start_[idx]; k < start_[idx + 1]; ++k) {
            const double d = squared_distance(q, set_.point(members_[k]).data(), dim_);
            if (d < best) {
              best = d;
              if (best <= stop_at) return best;
            }
          }
        }
        std::size_t i = 0;
        while (i < dim_ && ++c[i] > hi[i]) {
          c[i] = lo[i];
          ++i;
        }
        if (i == dim_) break;
      }
    }
    return best;
  }

 private:
  std::vector<long> clamped_cell(const double* x) const {
    std::vector<long> c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      c[i] = std::clamp(static_cast<long>(std::floor((x[i] - lo_[i]) / cell_)), 0L, dims_[i] - 1);
    }
    return c;
  }
  std::size_t linear(const std::vector<long>& c) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dim_; ++i) idx += static_cast<std::size_t>(c[i]) * strides_[i];
    return idx;
  }

  const CompactSet& set_;
  std::size_t dim_;
  double cell_ = 1.0;
  std::vector<double> lo_;
  std::vector<long> dims_;
  std::vector<std::size_t> strides_;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> members_;
};

double directed_squared(const CompactSet& from, const CompactSet& to, bool indexed) {
  const std::size_t dim = from.dim();
  std::optional<GridIndex> index;
  if (indexed) index.emplace(to);

  const std::size_t n = from.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min(thread_count(), n / 256 + 1));
  std::vector<double> partial(workers, 0.0);
  const std::size_t chunk = (n + workers - 1) / workers;
  parallel_for(workers, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      double local = 0.0;
      const std::size_t end = std::min(n, (w + 1) * chunk);
      for (std::size_t a = w * chunk; a < end; ++a) {
        const double* q = from.point(a).data();
        double best;
        if (index) {
          best = index->nearest(q, local);
        } else {
          best = std::numeric_limits<double>::infinity();
          for (std::size_t b = 0; b < to.size(); ++b) {
            const double d = squared_distance(q, to.point(b).data(), dim);
            if (d < best) {
              best = d;
              // This point cannot raise the running max any more.
              if (best <= local) break;
            }
          }
        }
        local = std::max(local, best);
      }
      partial[w] = local;
    }
  }, 1);
  return *std::max_element(partial.begin(), partial.end());
}

void check_operands(const CompactSet& a, const CompactSet& b) {
  if (a.empty() || b.empty()) throw DomainError("hausdorff_distance: empty set");
  if (a.dim() != b.dim()) throw std::invalid_argument("hausdorff_distance: dimension mismatch");
}

bool use_index(const CompactSet& a, const CompactSet& b, HausdorffMethod method) {
  switch (method) {
    case HausdorffMethod::BruteForce: return false;
    case HausdorffMethod::Indexed: return true;
    case HausdorffMethod::Auto: return a.size() * b.size() > kIndexedThreshold;
  }
  return false;
}

}  // namespace

double directed_hausdorff(const CompactSet& from, const CompactSet& to, HausdorffMethod method) {
  check_operands(from, to);
  return std::sqrt(directed_squared(from, to, use_index(from, to, method)));
}

Scalar hausdorff_distance(const CompactSet& a, const CompactSet& b, HausdorffMethod method) {
  check_operands(a, b);
  if (a == b) return Scalar::real(0.0);
  const bool indexed = use_index(a, b, method);
  const double sq = std::max(directed_squared(a, b, indexed), directed_squared(b, a, indexed));
  return Scalar::real(std::sqrt(sq));
}

}  // namespace contractio::fractal
