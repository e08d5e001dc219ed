#pragma once

#include <doctest.h>

#include "spinsq/ensemble.hpp"
#include "spinsq/half_int.hpp"
#include "spinsq/types.hpp"

namespace spinsq::testing {

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline EnsembleShape shape(int n, const char* j) {
  return EnsembleShape::make(n, HalfInt::parse(j));
}

// For closed-form moments only; no state of this shape is ever built.
inline EnsembleShape closed_form_shape(int n, const char* j) {
  Capacity cap;
  cap.max_dim = Index{1} << 62;
  return EnsembleShape::make(n, HalfInt::parse(j), cap);
}

}  // namespace spinsq::testing
