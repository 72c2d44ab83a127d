#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "urnflow/rng.hpp"

namespace urnflow {

// Probability mass function on a contiguous block of integers
// [offset, offset + mass.size()). The scalar type is either double or an
// exact rational; everything downstream is written against both.
template <class T>
struct BasicPmf {
  std::int64_t offset = 0;
  std::vector<T> mass;

  std::int64_t size() const { return static_cast<std::int64_t>(mass.size()); }
  std::int64_t min_support() const { return offset; }
  std::int64_t max_support() const { return offset + size() - 1; }

  bool contains(std::int64_t x) const {
    return x >= offset && x < offset + size();
  }

  T prob(std::int64_t x) const {
    return contains(x) ? mass[static_cast<std::size_t>(x - offset)] : T(0);
  }

  // P[X <= x]
  T cdf(std::int64_t x) const {
    T acc(0);
    std::int64_t hi = std::min(x, max_support());
    for (std::int64_t v = offset; v <= hi; ++v)
      acc += mass[static_cast<std::size_t>(v - offset)];
    return acc;
  }

  T total() const {
    T acc(0);
    for (const T& m : mass) acc += m;
    return acc;
  }

  // Drop zero mass at either end of the support.
  void trim() {
    std::size_t lo = 0, hi = mass.size();
    while (hi > lo && mass[hi - 1] == T(0)) --hi;
    while (lo < hi && mass[lo] == T(0)) ++lo;
    if (lo > 0) mass.erase(mass.begin(), mass.begin() + static_cast<std::ptrdiff_t>(lo));
    mass.resize(hi - lo);
    offset += static_cast<std::int64_t>(lo);
  }

  void normalize() {
    T t = total();
    if (t == T(0)) throw std::domain_error("BasicPmf::normalize: zero mass");
    for (T& m : mass) m /= t;
  }
};

using Pmf = BasicPmf<double>;

template <class T>
double as_double(const T& v) {
  return static_cast<double>(v);
}

template <class T>
Pmf to_double_pmf(const BasicPmf<T>& p) {
  Pmf out;
  out.offset = p.offset;
  out.mass.reserve(p.mass.size());
  for (const T& m : p.mass) out.mass.push_back(as_double(m));
  return out;
}

template <class T>
BasicPmf<T> shifted(BasicPmf<T> p, std::int64_t s) {
  p.offset += s;
  return p;
}

// max_x |p(x) - q(x)|
template <class T>
T sup_diff(const BasicPmf<T>& p, const BasicPmf<T>& q) {
  std::int64_t lo = std::min(p.min_support(), q.min_support());
  std::int64_t hi = std::max(p.max_support(), q.max_support());
  T best(0);
  for (std::int64_t x = lo; x <= hi; ++x) {
    T d = p.prob(x) - q.prob(x);
    if (d < T(0)) d = -d;
    if (d > best) best = d;
  }
  return best;
}

template <class T>
T tv_distance(const BasicPmf<T>& p, const BasicPmf<T>& q) {
  std::int64_t lo = std::min(p.min_support(), q.min_support());
  std::int64_t hi = std::max(p.max_support(), q.max_support());
  T acc(0);
  for (std::int64_t x = lo; x <= hi; ++x) {
    T d = p.prob(x) - q.prob(x);
    if (d < T(0)) d = -d;
    acc += d;
  }
  return acc / T(2);
}

template <class T>
T mean(const BasicPmf<T>& p) {
  T acc(0);
  for (std::int64_t x = p.min_support(); x <= p.max_support(); ++x)
    acc += p.prob(x) * T(x);
  return acc;
}

// E X^m
template <class T>
T power_moment(const BasicPmf<T>& p, int m) {
  T acc(0);
  for (std::int64_t x = p.min_support(); x <= p.max_support(); ++x) {
    T term = p.prob(x);
    for (int i = 0; i < m; ++i) term *= T(x);
    acc += term;
  }
  return acc;
}

// E X (X+1) ... (X+m-1)
template <class T>
T rising_factorial_moment(const BasicPmf<T>& p, int m) {
  T acc(0);
  for (std::int64_t x = p.min_support(); x <= p.max_support(); ++x) {
    T term = p.prob(x);
    for (int i = 0; i < m; ++i) term *= T(x + i);
    acc += term;
  }
  return acc;
}

// Reweight by a nonnegative weight function of the support point, then
// renormalize.
template <class T, class WeightFn>
BasicPmf<T> reweighted(const BasicPmf<T>& p, WeightFn&& w) {
  BasicPmf<T> out;
  out.offset = p.offset;
  out.mass.resize(p.mass.size());
  for (std::int64_t x = p.min_support(); x <= p.max_support(); ++x)
    out.mass[static_cast<std::size_t>(x - out.offset)] = p.prob(x) * w(x);
  out.normalize();
  out.trim();
  return out;
}

// Weighted mixture of component pmfs, accumulated incrementally.
template <class T>
class MixtureBuilder {
 public:
  void add(const T& weight, const BasicPmf<T>& component) {
    if (component.size() == 0) return;
    std::int64_t lo = component.min_support();
    std::int64_t hi = component.max_support();
    if (acc_.mass.empty()) {
      acc_.offset = lo;
      acc_.mass.assign(static_cast<std::size_t>(hi - lo + 1), T(0));
    } else {
      std::int64_t cur_lo = acc_.min_support(), cur_hi = acc_.max_support();
      std::int64_t new_lo = std::min(cur_lo, lo), new_hi = std::max(cur_hi, hi);
      if (new_lo != cur_lo || new_hi != cur_hi) {
        std::vector<T> grown(static_cast<std::size_t>(new_hi - new_lo + 1), T(0));
        for (std::int64_t x = cur_lo; x <= cur_hi; ++x)
          grown[static_cast<std::size_t>(x - new_lo)] = acc_.prob(x);
        acc_.offset = new_lo;
        acc_.mass = std::move(grown);
      }
    }
    for (std::int64_t x = lo; x <= hi; ++x)
      acc_.mass[static_cast<std::size_t>(x - acc_.offset)] += weight * component.prob(x);
  }

  BasicPmf<T> done() {
    acc_.trim();
    return std::move(acc_);
  }

 private:
  BasicPmf<T> acc_;
};

// Inverse-CDF sampler over a double pmf; construction is O(n), draws are
// O(log n).
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const Pmf& p) : offset_(p.offset), cum_(p.mass) {
    double acc = 0.0;
    for (double& c : cum_) {
      acc += c;
      c = acc;
    }
    if (!cum_.empty()) cum_.back() = std::max(cum_.back(), 1.0);
  }

  std::int64_t sample(RngStream& rng) const {
    double u = rng.uniform();
    auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) --it;
    return offset_ + static_cast<std::int64_t>(it - cum_.begin());
  }

 private:
  std::int64_t offset_ = 0;
  std::vector<double> cum_;
};

}  // namespace urnflow
