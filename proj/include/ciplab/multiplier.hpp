#pragma once

#include <map>
#include <string>

#include "ciplab/errors.hpp"

namespace cip {

/// Finite-support nonnegative weight map over the family index set T.
/// Stored weights are strictly positive: a zero weight means the term is
/// structurally absent, which is the sum convention that keeps 0 * (+inf)
/// from ever being formed. The empty map is lambda = 0.
class Multiplier {
 public:
  Multiplier() = default;

  Multiplier& set(long t, double weight) {
    if (!(weight > 0.0)) throw NonPositiveScale(weight);
    support_[t] = weight;
    return *this;
  }

  static Multiplier single(long t, double weight) { return Multiplier().set(t, weight); }

  bool empty() const { return support_.empty(); }
  std::size_t size() const { return support_.size(); }
  const std::map<long, double>& support() const { return support_; }

  double weight(long t) const {
    auto it = support_.find(t);
    return it == support_.end() ? 0.0 : it->second;
  }

  std::string str() const {
    if (support_.empty()) return "{}";
    std::string out = "{";
    bool first = true;
    for (const auto& [t, w] : support_) {
      if (!first) out += ", ";
      first = false;
      out += "t" + std::to_string(t) + ": " + std::to_string(w);
    }
    return out + "}";
  }

  friend bool operator==(const Multiplier&, const Multiplier&) = default;

 private:
  std::map<long, double> support_;
};

}  // namespace cip
