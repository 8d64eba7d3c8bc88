#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "fracwos/sampler.hpp"
#include "fracwos/wos.hpp"

namespace fwos {

using ScalarField = std::function<double(std::span<const double>)>;

// Dirichlet problem (-Delta)^{alpha/2} u = f in D, u = g outside D.
struct ProblemSpec {
  int id = 0;
  std::string name;
  ScalarField source;    // f, evaluated inside D
  ScalarField boundary;  // g, evaluated outside D
  std::shared_ptr<const Domain> domain;
  std::optional<ScalarField> exact;
  bool radial = false;
};

// f = 2^a G(a/2 + d/2) G(a/2 + 1) / G(d/2), g = 0, u = (1 - |x|^2)_+^{a/2}.
double example1_source_constant(const FractionalParams& p);
// b_{a,d} = 2^a G(a/2 + d/2) G(a/2 + 2) / G(d/2).
double example2_source_scale(const FractionalParams& p);
// G(d/2 - a/2) / (2^a pi^{d/2} G(a/2)).
double example3_kernel_constant(const FractionalParams& p);

ProblemSpec example1(const FractionalParams& p);
ProblemSpec example2(const FractionalParams& p);
// Boundary datum is the fundamental solution translated to y = (2, 0, ..., 0).
ProblemSpec example3(const FractionalParams& p);
// Linear, hence alpha-harmonic: u(x) = sum_i x_i everywhere.
ProblemSpec example4(const FractionalParams& p);

ProblemSpec make_example(int id, const FractionalParams& p);

}  // namespace fwos
