#include "vhi/space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace vhi {

SpaceDescriptor::SpaceDescriptor(int d) : dim(d) {
  if (d < 1) throw DimensionError(fmt::format("space dimension must be >= 1, got {}", d));
}

Vector SpaceDescriptor::unit(int i) const {
  if (i < 0 || i >= dim) throw DimensionError(fmt::format("unit index {} out of range for dim {}", i, dim));
  Vector e = Vector::Zero(dim);
  e(i) = 1.0;
  return e;
}

Vector make_vector(std::initializer_list<double> entries) {
  return make_vector(std::span<const double>(entries.begin(), entries.size()));
}

Vector make_vector(std::span<const double> entries) {
  Vector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  require_finite(v, "make_vector");
  return v;
}

void require_same_dim(const Vector& u, const Vector& v, const char* where) {
  if (u.size() != v.size())
    throw DimensionError(fmt::format("{}: dimension mismatch ({} vs {})", where, u.size(), v.size()));
}

bool all_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Vector& v, const char* where) {
  if (!v.allFinite()) throw NonFiniteError(fmt::format("{}: non-finite entry", where));
}

double inner(const Vector& u, const Vector& v) {
  require_same_dim(u, v, "inner");
  return u.dot(v);
}

double norm(const Vector& v) { return v.norm(); }

double distance(const Vector& u, const Vector& v) {
  require_same_dim(u, v, "distance");
  return (u - v).norm();
}

Vector project_interval_box(const Vector& v, std::span<const double> lo,
                            std::span<const double> hi) {
  const auto n = static_cast<std::size_t>(v.size());
  if (lo.size() != n || hi.size() != n)
    throw DimensionError(fmt::format("project_interval_box: bounds of size {}/{} for dim {}",
                                     lo.size(), hi.size(), n));
  Vector out = v;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i])
      throw std::invalid_argument(
          fmt::format("project_interval_box: inconsistent bounds [{}, {}] at {}", lo[i], hi[i], i));
    const auto k = static_cast<Eigen::Index>(i);
    out(k) = std::clamp(v(k), lo[i], hi[i]);
  }
  return out;
}

Vector project_ball(const Vector& v, const Vector& center, double radius) {
  require_same_dim(v, center, "project_ball");
  if (!(radius >= 0.0)) throw std::invalid_argument("project_ball: negative radius");
  const Vector d = v - center;
  const double r = d.norm();
  if (r <= radius) return v;
  return center + (radius / r) * d;
}

namespace {

constexpr std::array<int, 32> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                         37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                                         83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f /= base;
  }
  return result;
}

}  // namespace

Vector halton_point(int dim, std::uint64_t index) {
  if (dim < 1 || dim > static_cast<int>(kPrimes.size()))
    throw DimensionError(fmt::format("halton_point: unsupported dimension {}", dim));
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x(i) = radical_inverse(index, kPrimes[static_cast<std::size_t>(i)]);
  return x;
}

std::vector<Vector> unit_directions(int dim, std::size_t count, std::uint64_t seed) {
  if (dim < 1) throw DimensionError("unit_directions: dim must be >= 1");
  std::vector<Vector> dirs;
  if (dim == 1) {
    dirs.push_back(make_vector({1.0}));
    dirs.push_back(make_vector({-1.0}));
    return dirs;
  }
  dirs.reserve(count);
  const double shift = radical_inverse(seed + 1, 7);
  if (dim == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * (static_cast<double>(i) + shift) / static_cast<double>(count);
      dirs.push_back(make_vector({std::cos(a), std::sin(a)}));
    }
    return dirs;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * static_cast<double>(i) + 2.0 * std::numbers::pi * shift;
      dirs.push_back(make_vector({r * std::cos(a), r * std::sin(a), z}));
    }
    return dirs;
  }
  // Box-Muller over a 2*ceil(dim/2)-dimensional Halton stream.
  const int pairs = (dim + 1) / 2;
  for (std::size_t i = 0; i < count; ++i) {
    const Vector h = halton_point(2 * pairs, seed * 7919 + i + 1);
    Vector g(dim);
    for (int k = 0; k < pairs; ++k) {
      const double u1 = std::max(h(2 * k), 1e-300);
      const double u2 = h(2 * k + 1);
      const double rad = std::sqrt(-2.0 * std::log(u1));
      g(2 * k) = rad * std::cos(2.0 * std::numbers::pi * u2);
      if (2 * k + 1 < dim) g(2 * k + 1) = rad * std::sin(2.0 * std::numbers::pi * u2);
    }
    const double n = g.norm();
    if (n > 0.0) dirs.push_back(g / n);
  }
  return dirs;
}

}  // namespace vhi
