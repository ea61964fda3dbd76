#pragma once

#include "momentlab/modforms.hpp"
#include "momentlab/symsq.hpp"

namespace testing {

// sym^2 Delta with A(n, 1) for n <= 2e5, built once per process.
inline const momentlab::SymSquareForm& sym2_delta() {
  static const momentlab::SymSquareForm F = [] {
    auto d = momentlab::eigenforms(12, 200000, momentlab::EigenformOptions{std::nullopt, false});
    return momentlab::make_symsq(d.at(0), 200000);
  }();
  return F;
}

inline const momentlab::Newform& delta() {
  static const momentlab::Newform f = momentlab::eigenforms(12, 5000).at(0);
  return f;
}

}  // namespace testing
