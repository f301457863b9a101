#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace sharesim {

// Balanced binary-tree summation. The reduction tree depends only on the
// element count, so summing a sequence concatenated with itself yields
// exactly twice the original sum; the estimators rely on that to keep
// "duplicate every trajectory" a bit-exact no-op.
template <typename Term>
double pairwise_sum(std::size_t begin, std::size_t end, const Term& term) {
  const std::size_t n = end - begin;
  if (n == 0) return 0.0;
  if (n == 1) return term(begin);
  if (n == 2) return term(begin) + term(begin + 1);
  const std::size_t mid = begin + n / 2;
  return pairwise_sum(begin, mid, term) + pairwise_sum(mid, end, term);
}

inline double pairwise_sum(std::span<const double> values) {
  return pairwise_sum(std::size_t{0}, values.size(),
                      [&](std::size_t i) { return values[i]; });
}

inline double pairwise_mean(std::span<const double> values) {
  return pairwise_sum(values) / static_cast<double>(values.size());
}

// Neumaier-compensated accumulator for long streaming sums.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1 denominator)
};

inline MeanSd mean_and_sample_sd(std::span<const double> values) {
  MeanSd out;
  out.mean = pairwise_mean(values);
  if (values.size() < 2) return out;
  const double ss = pairwise_sum(std::size_t{0}, values.size(), [&](std::size_t i) {
    const double d = values[i] - out.mean;
    return d * d;
  });
  out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return out;
}

}  // namespace sharesim
