#pragma once

#include "pxbih/problem.hpp"

namespace support {

inline pxbih::ProblemSpec make_spec(const pxbih::GridPtr& g, const pxbih::ScalarField& p,
                                    const pxbih::ScalarField& q, const pxbih::ScalarField& r,
                                    double lambda, pxbih::PhiTag tag = pxbih::PhiTag::kPower,
                                    double c = 1.0) {
  (void)g;
  return pxbih::ProblemSpec{pxbih::ExponentTriple(p, q, r), pxbih::PhiModel::single(tag, p, c), lambda};
}

inline pxbih::ProblemSpec constant_spec(const pxbih::GridPtr& g, double p, double q, double r,
                                        double lambda, pxbih::PhiTag tag = pxbih::PhiTag::kPower,
                                        double c = 1.0) {
  using pxbih::ScalarField;
  return make_spec(g, ScalarField::constant(g, p), ScalarField::constant(g, q),
                   ScalarField::constant(g, r), lambda, tag, c);
}

}  // namespace support
