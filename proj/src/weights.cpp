#include "torich/weights.hpp"

#include <exception>

#include <omp.h>

#include "torich/error.hpp"

namespace torich {

namespace {

bool any_nonzero(const std::vector<Int>& v) {
  for (Int x : v)
    if (x != 0) return true;
  return false;
}

void accumulate(std::vector<Int>& acc, const std::vector<Int>& v) {
  if (v.size() != acc.size()) throw std::logic_error("weight contribution has the wrong width");
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] = checked_add(acc[i], v[i]);
}

}  // namespace

WeightSum sum_over_weights_serial(std::span<const MVector> weights, std::size_t width, const WeightFunction& f) {
  WeightSum out{std::vector<Int>(width, 0), 0, weights.size()};
  for (const auto& m : weights) {
    const auto v = f(m);
    accumulate(out.totals, v);
    if (any_nonzero(v)) ++out.support;
  }
  return out;
}

WeightSum sum_over_weights_parallel(std::span<const MVector> weights, std::size_t width, const WeightFunction& f) {
  WeightSum out{std::vector<Int>(width, 0), 0, weights.size()};
  std::exception_ptr failure;
  const long count = static_cast<long>(weights.size());
#pragma omp parallel
  {
    std::vector<Int> local(width, 0);
    std::size_t local_support = 0;
#pragma omp for schedule(dynamic, 32) nowait
    for (long i = 0; i < count; ++i) {
      try {
        const auto v = f(weights[i]);
        accumulate(local, v);
        if (any_nonzero(v)) ++local_support;
      } catch (...) {
#pragma omp critical(torich_weight_failure)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(torich_weight_reduce)
    {
      try {
        accumulate(out.totals, local);
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
      out.support += local_support;
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

WeightSum sum_over_weights(std::span<const MVector> weights, std::size_t width, const WeightFunction& f,
                           ExecutionMode mode) {
  return mode == ExecutionMode::kParallel ? sum_over_weights_parallel(weights, width, f)
                                          : sum_over_weights_serial(weights, width, f);
}

std::vector<MVector> box_shell(std::size_t rank, Int r_inner, Int r_outer) {
  std::vector<MVector> out;
  if (r_outer < 0 || r_outer <= r_inner) return out;
  MVector m(rank);
  for (std::size_t j = 0; j < rank; ++j) m[j] = -r_outer;
  while (true) {
    Int norm = 0;
    for (std::size_t j = 0; j < rank; ++j) norm = std::max(norm, m[j] < 0 ? -m[j] : m[j]);
    if (norm > r_inner) out.push_back(m);
    std::size_t j = 0;
    while (j < rank && m[j] == r_outer) {
      m[j] = -r_outer;
      ++j;
    }
    if (j == rank) break;
    ++m[j];
  }
  return out;
}

Int default_initial_radius(const Fan& fan, const std::optional<CartierData>& twist) {
  Int ray_max = 0;
  for (const auto& v : fan.rays())
    for (Int c : v.coords()) ray_max = std::max(ray_max, c < 0 ? -c : c);
  return 1 + (twist ? twist->max_abs_coordinate() : 0) + ray_max;
}

StabilizedSum stabilized_sum(std::size_t rank, Int initial_radius, const BoxPolicy& policy, std::size_t width,
                             const WeightFunction& f) {
  StabilizedSum out;
  if (policy.explicit_radius) {
    const auto box = box_shell(rank, -1, *policy.explicit_radius);
    const WeightSum s = sum_over_weights(box, width, f, policy.mode);
    out.totals = s.totals;
    out.certificate = WeightCertificate{*policy.explicit_radius, *policy.explicit_radius, 0, true, s.visited, s.support};
    return out;
  }
  Int r = policy.initial_radius.value_or(initial_radius);
  if (r < 0) throw Error(ErrorCode::kNoStabilize, "negative initial radius");
  const auto first = box_shell(rank, -1, r);
  WeightSum total = sum_over_weights(first, width, f, policy.mode);
  for (std::size_t doublings = 0; doublings < policy.max_doublings; ++doublings) {
    const Int next = checked_add(checked_mul(2, r), 1);
    const auto shell = box_shell(rank, r, next);
    const WeightSum s = sum_over_weights(shell, width, f, policy.mode);
    total.visited += s.visited;
    if (s.support == 0) {
      out.totals = total.totals;
      out.certificate = WeightCertificate{r, next, doublings + 1, false, total.visited, total.support};
      return out;
    }
    accumulate(total.totals, s.totals);
    total.support += s.support;
    r = next;
  }
  throw Error(ErrorCode::kNoStabilize, "weight sums still changing at box radius " + std::to_string(r) + " after " +
                                           std::to_string(policy.max_doublings) + " doublings");
}

}  // namespace torich
