#include "contractio/conditions.hpp"

namespace contractio {

ConditionKind ConditionKind::bisht_weighted(const Scalar& a) {
  if (!(a.sign() > 0 && a < Scalar(1))) {
    throw std::invalid_argument("bisht-weighted requires 0 < a < 1, got a = " + a.to_string());
  }
  return ConditionKind(Variant::BishtWeighted, a);
}

std::string ConditionKind::name() const {
  switch (variant_) {
    case Variant::Ri: return "ri";
    case Variant::BishtMax: return "bisht-max";
    case Variant::BishtWeighted: return "bisht-weighted(a=" + weight_.to_string() + ")";
  }
  return "?";
}

Scalar condition_argument(const ConditionKind& kind, const Scalar& d_xy, const Scalar& d_xfx,
                          const Scalar& d_yfy) {
  switch (kind.variant()) {
    case ConditionKind::Variant::Ri:
      return d_xy;
    case ConditionKind::Variant::BishtMax:
      return max(d_xy, max(d_xfx, d_yfy));
    case ConditionKind::Variant::BishtWeighted: {
      const Scalar& a = kind.weight();
      const Scalar b = Scalar(1) - a;
      // A convex combination never exceeds the larger term; the clamp removes
      // Float64 rounding overshoot so the max-kind argument always dominates.
      const Scalar cap = max(d_xfx, d_yfy);
      const Scalar first = min(a * d_xfx + b * d_yfy, cap);
      const Scalar second = min(b * d_xfx + a * d_yfy, cap);
      return max(d_xy, max(first, second));
    }
  }
  return d_xy;
}

}  // namespace contractio
