#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace frde {

struct AitkenResult {
  double value = std::numeric_limits<double>::quiet_NaN();
  double correction = std::numeric_limits<double>::infinity();
  bool usable = false;
};

// One Aitken delta-squared pass; returns the last accelerated value.
// Degenerate second differences fall back to the raw sequence value.
inline AitkenResult aitken_extrapolate(std::span<const double> seq) {
  AitkenResult out;
  if (seq.size() < 3) {
    if (!seq.empty()) out.value = seq.back();
    return out;
  }
  double last = seq.back();
  for (std::size_t i = 0; i + 2 < seq.size(); ++i) {
    const double d1 = seq[i + 1] - seq[i];
    const double d2 = seq[i + 2] - seq[i + 1];
    const double dd = d2 - d1;
    if (std::abs(dd) <= 1e-14 * (std::abs(d1) + std::abs(d2)) || dd == 0.0)
      last = seq[i + 2];
    else
      last = seq[i] - d1 * d1 / dd;
  }
  out.value = last;
  out.correction = std::abs(last - seq.back());
  out.usable = true;
  return out;
}

// Two chained passes when the sequence is long enough; kills the two leading
// algebraic tail modes of a geometrically sampled sequence.
inline AitkenResult aitken_extrapolate_twice(std::span<const double> seq) {
  AitkenResult first = aitken_extrapolate(seq);
  if (seq.size() < 5 || !first.usable) return first;
  std::vector<double> accelerated;
  accelerated.reserve(seq.size() - 2);
  for (std::size_t i = 0; i + 2 < seq.size(); ++i) {
    const double d1 = seq[i + 1] - seq[i];
    const double d2 = seq[i + 2] - seq[i + 1];
    const double dd = d2 - d1;
    if (std::abs(dd) <= 1e-14 * (std::abs(d1) + std::abs(d2)) || dd == 0.0)
      accelerated.push_back(seq[i + 2]);
    else
      accelerated.push_back(seq[i] - d1 * d1 / dd);
  }
  AitkenResult second = aitken_extrapolate(accelerated);
  if (!second.usable || !std::isfinite(second.value)) return first;
  second.correction = std::abs(second.value - first.value);
  return second;
}

}  // namespace frde
