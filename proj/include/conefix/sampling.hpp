#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "conefix/errors.hpp"

namespace conefix {

/// Seeded source of doubles in [0, 1).
///
/// The 53-bit mantissa is filled straight from mt19937_64 so the sequence is
/// identical across standard library implementations.
class UnitSource {
 public:
  explicit UnitSource(std::uint64_t seed) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return next() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Draws points from a closed box [lower, upper].
///
/// Each coordinate independently snaps to the lower bound with probability
/// 1/8, to the upper bound with probability 1/8, and is uniform otherwise.
/// Contraction and axiom inequalities are usually tightest on faces and
/// corners of the box, which a purely uniform draw almost never reaches.
template <typename Scalar = double>
class BoxSampler {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr double snap_probability = 0.125;

  BoxSampler(Vector lower, Vector upper, std::uint64_t seed)
      : lower_(std::move(lower)), upper_(std::move(upper)), source_(seed) {
    if (lower_.size() != upper_.size() || lower_.size() < 1) {
      throw StructuralError("sampling box bounds must be nonempty and of equal length");
    }
    if (!(lower_.array() <= upper_.array()).all()) {
      throw StructuralError("sampling box has lower > upper in some coordinate");
    }
  }

  Vector draw() {
    Vector out(lower_.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      const double u = source_.next();
      if (u < snap_probability) {
        out[i] = lower_[i];
      } else if (u < 2 * snap_probability) {
        out[i] = upper_[i];
      } else {
        out[i] = lower_[i] + Scalar(source_.next()) * (upper_[i] - lower_[i]);
      }
    }
    return out;
  }

  bool coin(double p) { return source_.coin(p); }

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  Vector lower_;
  Vector upper_;
  UnitSource source_;
};

}  // namespace conefix
