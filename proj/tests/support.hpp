#pragma once

#include <cmath>
#include <vector>

#include "doctest.h"

namespace kcut::testing {

struct Sample {
  double mean = 0.0, stderr_ = 0.0;
};

inline Sample summarize(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  const double m = s / xs.size();
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  return {m, std::sqrt(v / (xs.size() - 1) / xs.size())};
}

inline double rel_err(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

}  // namespace kcut::testing

// |got - want| <= z * err, reported with the z-score on failure.
#define CHECK_WITHIN_SIGMA(got, want, err, z)                                          \
  do {                                                                                 \
    const double got_ = (got), want_ = (want), err_ = (err);                           \
    INFO("got " << got_ << " want " << want_ << " stderr " << err_ << " z "         \
                << (got_ - want_) / err_);                                             \
    CHECK(std::fabs(got_ - want_) <= (z) * err_);                                      \
  } while (0)
