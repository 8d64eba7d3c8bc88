#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fracwos/errors.hpp"
#include "fracwos/rng.hpp"
#include "fracwos/sampler.hpp"

namespace fwos {

// Convex bounded domain. boundary_distance(x) > 0 exactly when contains(x).
class Domain {
 public:
  virtual ~Domain() = default;
  virtual int dim() const = 0;
  virtual bool contains(std::span<const double> x) const = 0;
  virtual double boundary_distance(std::span<const double> x) const = 0;
  // Radius of the smallest origin-centred ball containing the domain.
  virtual double circumradius() const = 0;
};

class Ball final : public Domain {
 public:
  Ball(std::vector<double> center, double radius);
  static Ball unit(int d) { return Ball(std::vector<double>(static_cast<std::size_t>(d), 0.0), 1.0); }

  int dim() const override { return static_cast<int>(center_.size()); }
  bool contains(std::span<const double> x) const override;
  double boundary_distance(std::span<const double> x) const override;
  double circumradius() const override;

  const std::vector<double>& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  double distance_to_center(std::span<const double> x) const;

  std::vector<double> center_;
  double radius_;
};

double boundary_distance(const Domain& dom, std::span<const double> x);

// Points rho_0..rho_N stored row-major (N+1 rows of length d), radii r_1..r_N.
struct WosPath {
  int d = 0;
  std::vector<double> points;
  std::vector<double> radii;

  std::size_t exit_step() const { return radii.size(); }
  std::span<const double> point(std::size_t n) const {
    return {points.data() + n * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
  std::span<const double> exit_point() const { return point(exit_step()); }
  void clear(int dim) {
    d = dim;
    points.clear();
    radii.clear();
  }
};

inline constexpr std::size_t kDefaultStepCap = 1'000'000;

class StepCapExceeded : public NumericalError {
 public:
  StepCapExceeded(const std::string& what, WosPath partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const WosPath& partial_path() const { return partial_; }

 private:
  WosPath partial_;
};

// Fills `path` in place (buffers are reused). Throws StepCapExceeded with the
// partial path if the walk has not left the domain after `step_cap` jumps.
void simulate_wos_path_into(WosPath& path, const Domain& dom, std::span<const double> x0,
                            const FractionalParams& p, DirectionMode mode, RngStream& rng,
                            std::size_t step_cap = kDefaultStepCap);

WosPath simulate_wos_path(const Domain& dom, std::span<const double> x0, const FractionalParams& p,
                          DirectionMode mode, RngStream& rng, std::size_t step_cap = kDefaultStepCap);

// Columns: step, x_1..x_d, r (empty at step 0).
void write_path_csv(std::ostream& os, const WosPath& path);

}  // namespace fwos
