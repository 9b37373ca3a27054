#ifndef MAP2FIT_TESTS_FIXTURES_HPP
#define MAP2FIT_TESTS_FIXTURES_HPP

#include "map2fit/model.hpp"
#include "oracles.hpp"

namespace fixtures {

using map2fit::CanonicalMap2;
using map2fit::Form;
using map2fit::RateMatrixPair;

// D0 = [[-20, 6], [0, -0.5]], D1 = [[14, 0], [0.0426, 0.4574]]
inline CanonicalMap2 example1() { return {Form::One, -20.0, 6.0, -0.5, 0.0426}; }

// D0 = [[-1, 0.001], [0, -0.005]], D1 = [[0.999, 0], [1e-5, 0.005 - 1e-5]];
// interarrival variance about 2.2e4.
inline CanonicalMap2 example3() { return {Form::One, -1.0, 0.001, -0.005, 1e-5}; }

// Poisson process with rate 1 written in FormOne.
inline CanonicalMap2 poisson1() { return {Form::One, -1.0, 0.0, -1.0, 1.0}; }

// Strongly negatively correlated: fast and slow phases alternate.
inline CanonicalMap2 alternating() { return {Form::Two, -10.0, 1.0, -0.2, 0.02}; }

inline RateMatrixPair matrices(const CanonicalMap2 &c) {
  return map2fit::canonical_to_matrices(c);
}

inline oracle::LMat to_long(const map2fit::Matrix2 &m) {
  return {{{m.a11, m.a12}, {m.a21, m.a22}}};
}

} // namespace fixtures

#endif
