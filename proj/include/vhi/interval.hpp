#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vhi {

/// Closed interval [lo, hi] on the real line; lo == hi is a single point.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double x, double tol = 0.0) const {
    return x >= lo - tol && x <= hi + tol;
  }
  [[nodiscard]] double length() const { return hi - lo; }
  [[nodiscard]] bool is_point() const { return lo == hi; }
};

/// Finite union of closed intervals, kept sorted and merged.
class IntervalSet {
public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> parts);

  static IntervalSet point(double x) { return IntervalSet({{x, x}}); }

  void add(Interval iv);

  [[nodiscard]] const std::vector<Interval>& parts() const { return parts_; }
  [[nodiscard]] bool empty() const { return parts_.empty(); }
  [[nodiscard]] bool contains(double x, double tol = 0.0) const;
  /// sup |a - b| over the set; 0 for empty sets.
  [[nodiscard]] double diameter() const;
  [[nodiscard]] std::optional<double> min() const;
  [[nodiscard]] std::optional<double> max() const;
  /// Interval endpoints in increasing order.
  [[nodiscard]] std::vector<double> endpoints() const;
  [[nodiscard]] std::string to_string() const;

private:
  std::vector<Interval> parts_;
};

}  // namespace vhi
