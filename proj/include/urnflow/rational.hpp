#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "urnflow/pmf.hpp"

namespace urnflow {

// Exact arithmetic scalar for the rational pmf mode.
using BigRat = boost::multiprecision::cpp_rational;
using RatPmf = BasicPmf<BigRat>;

template <>
inline double as_double<BigRat>(const BigRat& v) {
  return v.template convert_to<double>();
}

}  // namespace urnflow
