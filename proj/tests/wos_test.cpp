#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "fracwos/errors.hpp"
#include "fracwos/rng.hpp"
#include "fracwos/wos.hpp"

using fwos::Ball;
using fwos::DirectionMode;
using fwos::FractionalParams;
using fwos::RngStream;

namespace {

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct StepStats {
  double mean;
  double std_error;
};

StepStats exit_steps(double alpha, int paths) {
  const Ball ball = Ball::unit(2);
  const FractionalParams p(2, alpha);
  const std::vector<double> x0{0.5, 0.0};
  double sum = 0.0;
  double sum2 = 0.0;
  fwos::WosPath path;
  for (int i = 0; i < paths; ++i) {
    RngStream rng(17, fwos::path_stream_id(0, static_cast<std::uint64_t>(i)));
    fwos::simulate_wos_path_into(path, ball, x0, p, DirectionMode::Isotropic, rng);
    const double n = static_cast<double>(path.exit_step());
    sum += n;
    sum2 += n * n;
  }
  const double mean = sum / paths;
  const double var = (sum2 - paths * mean * mean) / (paths - 1);
  return {mean, std::sqrt(var / paths)};
}

}  // namespace

TEST(Ball, BoundaryDistanceExamples) {
  const Ball ball = Ball::unit(2);
  EXPECT_EQ(fwos::boundary_distance(ball, std::vector<double>{0.0, 0.0}), 1.0);
  EXPECT_EQ(fwos::boundary_distance(ball, std::vector<double>{0.5, 0.0}), 0.5);
  EXPECT_EQ(fwos::boundary_distance(ball, std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_EQ(fwos::boundary_distance(ball, std::vector<double>{0.0, -2.0}), 1.0);
}

TEST(Ball, MembershipIsStrict) {
  const Ball ball(std::vector<double>{1.0, -1.0, 0.5}, 2.0);
  EXPECT_TRUE(ball.contains(std::vector<double>{1.0, -1.0, 0.5}));
  EXPECT_FALSE(ball.contains(std::vector<double>{3.0, -1.0, 0.5}));
  EXPECT_TRUE(ball.contains(std::vector<double>{2.9, -1.0, 0.5}));
  EXPECT_NEAR(ball.boundary_distance(std::vector<double>{2.0, -1.0, 0.5}), 1.0, 1e-15);
  EXPECT_NEAR(ball.circumradius(), 1.5 + 2.0, 1e-15);
}

TEST(Ball, PositiveDistanceIffInside) {
  const Ball ball = Ball::unit(3);
  RngStream rng(1, 0);
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> x{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    if (ball.contains(x)) EXPECT_GT(ball.boundary_distance(x), 0.0);
  }
}

TEST(Ball, RejectsBadInput) {
  EXPECT_THROW(Ball({}, 1.0), fwos::DomainError);
  EXPECT_THROW(Ball({0.0, 0.0}, 0.0), fwos::DomainError);
  EXPECT_THROW(Ball({0.0, 0.0}, -1.0), fwos::DomainError);
  const Ball ball = Ball::unit(2);
  EXPECT_THROW(ball.contains(std::vector<double>{0.0, 0.0, 0.0}), fwos::DomainError);
}

TEST(Wos, OneStepFromCentre) {
  for (int d : {2, 5, 15}) {
    const Ball ball = Ball::unit(d);
    const std::vector<double> x0(static_cast<std::size_t>(d), 0.0);
    for (double alpha : {0.1, 0.5, 1.0, 1.5, 1.9}) {
      const FractionalParams p(d, alpha);
      for (int i = 0; i < 2000; ++i) {
        RngStream rng(3, static_cast<std::uint64_t>(i));
        const auto path = fwos::simulate_wos_path(ball, x0, p, DirectionMode::Isotropic, rng);
        ASSERT_EQ(path.exit_step(), 1u) << "d=" << d << " alpha=" << alpha << " i=" << i;
        EXPECT_EQ(path.radii[0], 1.0);
      }
    }
  }
}

TEST(Wos, PathInvariants) {
  for (auto mode : {DirectionMode::Isotropic, DirectionMode::PaperAngles}) {
    for (double alpha : {0.3, 1.0, 1.9}) {
      const Ball ball(std::vector<double>{0.2, -0.1, 0.0}, 1.3);
      const FractionalParams p(3, alpha);
      const std::vector<double> x0{0.9, 0.3, -0.4};
      for (int i = 0; i < 500; ++i) {
        RngStream rng(4, static_cast<std::uint64_t>(i));
        const auto path = fwos::simulate_wos_path(ball, x0, p, mode, rng);
        const std::size_t n_exit = path.exit_step();
        ASSERT_GE(n_exit, 1u);
        ASSERT_EQ(path.points.size(), (n_exit + 1) * 3);
        for (std::size_t n = 0; n < n_exit; ++n) EXPECT_TRUE(ball.contains(path.point(n)));
        EXPECT_FALSE(ball.contains(path.exit_point()));
        for (std::size_t n = 1; n <= n_exit; ++n) {
          const double r = path.radii[n - 1];
          EXPECT_GT(r, 0.0);
          EXPECT_NEAR(r + dist(path.point(n - 1), ball.center()), 1.3, 1e-12);
          // Differences of O(1) coordinates carry ~1e-16 absolute rounding,
          // which dominates once the walk hugs the boundary near alpha = 2.
          EXPECT_GT(dist(path.point(n), path.point(n - 1)), r * (1.0 - 1e-12) - 1e-15);
        }
      }
    }
  }
}

TEST(Wos, ReplayIsBitIdentical) {
  const Ball ball = Ball::unit(5);
  const FractionalParams p(5, 1.2);
  const std::vector<double> x0{0.1, 0.2, -0.3, 0.4, 0.0};
  for (int i = 0; i < 50; ++i) {
    RngStream a(9, static_cast<std::uint64_t>(i));
    RngStream b(9, static_cast<std::uint64_t>(i));
    const auto pa = fwos::simulate_wos_path(ball, x0, p, DirectionMode::Isotropic, a);
    const auto pb = fwos::simulate_wos_path(ball, x0, p, DirectionMode::Isotropic, b);
    EXPECT_EQ(pa.points, pb.points);
    EXPECT_EQ(pa.radii, pb.radii);
  }
}

TEST(Wos, ReusedBufferMatchesFreshPath) {
  const Ball ball = Ball::unit(2);
  const FractionalParams p(2, 1.7);
  const std::vector<double> x0{0.6, 0.1};
  fwos::WosPath reused;
  for (int i = 0; i < 50; ++i) {
    RngStream a(10, static_cast<std::uint64_t>(i));
    RngStream b(10, static_cast<std::uint64_t>(i));
    fwos::simulate_wos_path_into(reused, ball, x0, p, DirectionMode::Isotropic, a);
    const auto fresh = fwos::simulate_wos_path(ball, x0, p, DirectionMode::Isotropic, b);
    EXPECT_EQ(reused.points, fresh.points);
  }
}

TEST(Wos, MoreStepsNearAlphaTwo) {
  const auto low = exit_steps(0.5, 10000);
  const auto high = exit_steps(1.9, 10000);
  const double sigma = std::sqrt(low.std_error * low.std_error + high.std_error * high.std_error);
  EXPECT_GT(high.mean - low.mean, 3.0 * sigma) << "mean N: " << low.mean << " vs " << high.mean;
}

TEST(Wos, LinearBoundaryDatumIsHarmonic) {
  const Ball ball = Ball::unit(2);
  const FractionalParams p(2, 1.5);
  const std::vector<double> x0{0.3, -0.2};
  constexpr int paths = 100000;
  double sum = 0.0;
  double sum2 = 0.0;
  fwos::WosPath path;
  for (int i = 0; i < paths; ++i) {
    RngStream rng(12, static_cast<std::uint64_t>(i));
    fwos::simulate_wos_path_into(path, ball, x0, p, DirectionMode::Isotropic, rng);
    const auto y = path.exit_point();
    const double g = y[0] + y[1];
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / paths;
  const double se = std::sqrt((sum2 / paths - mean * mean) / (paths - 1));
  EXPECT_LT(std::fabs(mean - 0.1), 3.0 * se) << "mean=" << mean << " se=" << se;
}

TEST(Wos, StartOutsideIsRejected) {
  const Ball ball = Ball::unit(2);
  const FractionalParams p(2, 1.0);
  RngStream rng(1, 1);
  EXPECT_THROW(fwos::simulate_wos_path(ball, std::vector<double>{1.0, 0.0}, p, DirectionMode::Isotropic, rng),
               fwos::DomainError);
  EXPECT_THROW(fwos::simulate_wos_path(ball, std::vector<double>{0.0, 0.0, 0.0}, p, DirectionMode::Isotropic, rng),
               fwos::DomainError);
}

TEST(Wos, StepCapCarriesPartialPath) {
  const Ball ball = Ball::unit(2);
  const FractionalParams p(2, 1.95);
  const std::vector<double> x0{0.5, 0.0};
  bool hit = false;
  for (int i = 0; i < 100 && !hit; ++i) {
    RngStream rng(13, static_cast<std::uint64_t>(i));
    try {
      fwos::simulate_wos_path(ball, x0, p, DirectionMode::Isotropic, rng, 1);
    } catch (const fwos::StepCapExceeded& e) {
      hit = true;
      EXPECT_EQ(e.partial_path().exit_step(), 1u);
      EXPECT_TRUE(ball.contains(e.partial_path().exit_point()));
      EXPECT_NE(std::string(e.what()).find("step cap"), std::string::npos);
    }
  }
  EXPECT_TRUE(hit);
}

TEST(Wos, PathCsvLayout) {
  fwos::WosPath path;
  path.d = 2;
  path.points = {0.5, 0.0, 0.25, 0.75, 1.5, -0.125};
  path.radii = {0.5, 0.25};
  std::ostringstream os;
  fwos::write_path_csv(os, path);
  EXPECT_EQ(os.str(), "step,x_1,x_2,r\n0,0.5,0,\n1,0.25,0.75,0.5\n2,1.5,-0.125,0.25\n");
}
