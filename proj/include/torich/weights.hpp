#pragma once

// Summation of per-weight contributions over boxes in M, with the
// box-doubling stabilization certificate.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "torich/fan.hpp"

namespace torich {

enum class ExecutionMode { kSerial, kParallel };

using WeightFunction = std::function<std::vector<Int>(const MVector&)>;

struct WeightSum {
  std::vector<Int> totals;
  std::size_t support = 0;  // weights with a nonzero contribution
  std::size_t visited = 0;
  friend bool operator==(const WeightSum&, const WeightSum&) = default;
};

/// Reference loop.
WeightSum sum_over_weights_serial(std::span<const MVector> weights, std::size_t width, const WeightFunction& f);
/// OpenMP kernel; identical result to the serial loop. An exception thrown by
/// f on any thread is rethrown after the parallel region.
WeightSum sum_over_weights_parallel(std::span<const MVector> weights, std::size_t width, const WeightFunction& f);
WeightSum sum_over_weights(std::span<const MVector> weights, std::size_t width, const WeightFunction& f,
                           ExecutionMode mode);

/// Weights with r_inner < |m|_inf <= r_outer; r_inner < 0 gives the full box.
std::vector<MVector> box_shell(std::size_t rank, Int r_inner, Int r_outer);

struct BoxPolicy {
  std::optional<Int> initial_radius;  // default: 1 + max|Cartier coord| + max|ray coord|
  std::size_t max_doublings = 4;
  std::optional<Int> explicit_radius;  // one pass over this box, no stabilization
  ExecutionMode mode = ExecutionMode::kParallel;
};

struct WeightCertificate {
  Int radius = 0;            // box whose sum is reported
  Int confirmed_radius = 0;  // larger box that reproduced it (= radius for explicit boxes)
  std::size_t doublings = 0;
  bool explicit_box = false;
  std::size_t visited = 0;
  std::size_t support = 0;
  friend bool operator==(const WeightCertificate&, const WeightCertificate&) = default;
};

struct StabilizedSum {
  std::vector<Int> totals;
  WeightCertificate certificate;
};

Int default_initial_radius(const Fan& fan, const std::optional<CartierData>& twist);

/// Sums f over boxes R, 2R+1, ... until a shell contributes nothing.
/// Throws Error(kNoStabilize) after policy.max_doublings doublings.
StabilizedSum stabilized_sum(std::size_t rank, Int initial_radius, const BoxPolicy& policy, std::size_t width,
                             const WeightFunction& f);

}  // namespace torich
