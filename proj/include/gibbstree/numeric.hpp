#ifndef GIBBSTREE_NUMERIC_HPP_
#define GIBBSTREE_NUMERIC_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace gibbstree {

template <typename Scalar>
inline constexpr Scalar neg_infinity = -std::numeric_limits<Scalar>::infinity();

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
template <typename Scalar>
Scalar log_add(Scalar a, Scalar b) {
  if (a == neg_infinity<Scalar>) return b;
  if (b == neg_infinity<Scalar>) return a;
  const Scalar hi = std::max(a, b);
  const Scalar lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

template <typename Scalar>
Scalar log_sum_exp(std::span<const Scalar> xs) {
  Scalar hi = neg_infinity<Scalar>;
  for (Scalar x : xs) hi = std::max(hi, x);
  if (hi == neg_infinity<Scalar>) return hi;
  Scalar acc = 0;
  for (Scalar x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

// Neumaier-compensated running sum.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar x) {
    const Scalar t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum &operator+=(Scalar x) {
    add(x);
    return *this;
  }
  Scalar value() const { return sum_ + carry_; }

 private:
  Scalar sum_ = 0;
  Scalar carry_ = 0;
};

template <typename Scalar>
Scalar compensated_sum(std::span<const Scalar> xs) {
  CompensatedSum<Scalar> acc;
  for (Scalar x : xs) acc += x;
  return acc.value();
}

}  // namespace gibbstree

#endif  // GIBBSTREE_NUMERIC_HPP_
