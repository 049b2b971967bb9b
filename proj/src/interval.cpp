#include "vhi/interval.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace vhi {

IntervalSet::IntervalSet(std::vector<Interval> parts) {
  for (const auto& iv : parts) add(iv);
}

void IntervalSet::add(Interval iv) {
  if (iv.lo > iv.hi) throw std::invalid_argument("IntervalSet::add: lo > hi");
  parts_.push_back(iv);
  std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (const auto& p : parts_) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, p.hi);
    } else {
      merged.push_back(p);
    }
  }
  parts_ = std::move(merged);
}

bool IntervalSet::contains(double x, double tol) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& p) { return p.contains(x, tol); });
}

double IntervalSet::diameter() const {
  if (parts_.empty()) return 0.0;
  return parts_.back().hi - parts_.front().lo;
}

std::optional<double> IntervalSet::min() const {
  if (parts_.empty()) return std::nullopt;
  return parts_.front().lo;
}

std::optional<double> IntervalSet::max() const {
  if (parts_.empty()) return std::nullopt;
  return parts_.back().hi;
}

std::vector<double> IntervalSet::endpoints() const {
  std::vector<double> out;
  for (const auto& p : parts_) {
    out.push_back(p.lo);
    if (p.hi != p.lo) out.push_back(p.hi);
  }
  return out;
}

std::string IntervalSet::to_string() const {
  if (parts_.empty()) return "{}";
  std::string s;
  for (const auto& p : parts_) {
    if (!s.empty()) s += " u ";
    s += p.is_point() ? fmt::format("{{{}}}", p.lo) : fmt::format("[{}, {}]", p.lo, p.hi);
  }
  return s;
}

}  // namespace vhi
