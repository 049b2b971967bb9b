#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vhi {

/// Element of a finite-dimensional Euclidean space. The dual pairing is the
/// inner product, so loads and residuals live in the same type.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct SpaceDescriptor {
  int dim = 1;

  explicit SpaceDescriptor(int d);
  [[nodiscard]] Vector zero() const { return Vector::Zero(dim); }
  [[nodiscard]] Vector unit(int i) const;
};

Vector make_vector(std::initializer_list<double> entries);
Vector make_vector(std::span<const double> entries);

void require_same_dim(const Vector& u, const Vector& v, const char* where);
void require_finite(const Vector& v, const char* where);
[[nodiscard]] bool all_finite(const Vector& v);

double inner(const Vector& u, const Vector& v);
double norm(const Vector& v);
double distance(const Vector& u, const Vector& v);

/// Componentwise clamp onto [lo, hi]. Infinite bounds mean "absent".
Vector project_interval_box(const Vector& v, std::span<const double> lo,
                            std::span<const double> hi);

/// Projection onto the closed ball of the given radius around center.
Vector project_ball(const Vector& v, const Vector& center, double radius);

/// Deterministic unit directions for probing a space of dimension `dim`.
///
/// dim 1 yields {+1, -1}; dim 2 an equiangular fan; dim 3 a Fibonacci sphere;
/// higher dimensions a Halton stream pushed through Box-Muller. The seed
/// shifts the low-discrepancy streams and is ignored for dim 1.
std::vector<Vector> unit_directions(int dim, std::size_t count, std::uint64_t seed);

/// i-th point of the Halton sequence in [0,1)^dim (prime bases 2, 3, 5, ...).
Vector halton_point(int dim, std::uint64_t index);

}  // namespace vhi
