#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ssam/numcore/synthetic.hpp"
#include "ssam/optim/optimizer.hpp"

namespace ssam {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

OptimizerConfig cfg(OptimizerKind kind, double eta, double rho = 0.0) {
  OptimizerConfig c;
  c.kind = kind;
  c.eta0 = eta;
  c.rho0 = rho;
  return c;
}

bool same_trajectory_state(const OptimizerState& a, const OptimizerState& b) {
  return a.t == b.t && a.w == b.w && a.velocity == b.velocity;
}

TEST(Perturbation, Examples) {
  EXPECT_TRUE(compute_perturbation(ParamVector(vec({3, 4})), 1.0).values().isApprox(vec({0.6, 0.8}), 1e-15));
  EXPECT_EQ(compute_perturbation(ParamVector(vec({3, 4})), 0.0).values(), vec({0, 0}));
  Eigen::VectorXd axis = Eigen::VectorXd::Zero(6);
  axis[0] = 1.0;
  Eigen::VectorXd expect = Eigen::VectorXd::Zero(6);
  expect[0] = 0.05;
  EXPECT_EQ(compute_perturbation(ParamVector(axis), 0.05).values(), expect);
}

TEST(Perturbation, DegenerateGradientGivesZero) {
  const auto p = compute_perturbation(Eigen::VectorXd::Constant(3, 1e-14).eval(), 0.5);
  EXPECT_TRUE(p.degenerate);
  EXPECT_EQ(p.epsilon, Eigen::VectorXd::Zero(3));
  EXPECT_THROW(compute_perturbation(vec({1.0}), -1.0), InvalidArgument);
}

TEST(Perturbation, NormAndScaleEquivariance) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd g = standard_normal(rng, 1 + trial % 17);
    const double rho = 0.01 + 0.01 * trial;
    const Eigen::VectorXd e = compute_perturbation(g, rho).epsilon;
    EXPECT_NEAR(e.norm(), rho, 1e-12 * rho);
    // powers of two scale exactly
    const Eigen::VectorXd e2 = compute_perturbation(Eigen::VectorXd(g * 8.0), rho).epsilon;
    EXPECT_EQ(e, e2);
    // arbitrary positive scales agree to rounding
    const Eigen::VectorXd e3 = compute_perturbation(Eigen::VectorXd(g * 3.7), rho).epsilon;
    EXPECT_LE((e - e3).cwiseAbs().maxCoeff(), 4 * std::numeric_limits<double>::epsilon() * rho);
  }
}

TEST(Schedule, Values) {
  EXPECT_DOUBLE_EQ(schedule_at({0.5, ScheduleRule::InverseSqrt}, 4), 0.25);
  EXPECT_DOUBLE_EQ(schedule_at({0.5, ScheduleRule::InverseSqrt}, 1), 0.5);
  for (long t : {1L, 7L, 1000L}) EXPECT_DOUBLE_EQ(schedule_at({0.1, ScheduleRule::Constant}, t), 0.1);
  EXPECT_THROW(schedule_at({0.1, ScheduleRule::Constant}, 0), InvalidArgument);
}

class IdentityQuadratic : public ::testing::Test {
 protected:
  NoisyQuadratic q = NoisyQuadratic::diagonal(Eigen::VectorXd::Ones(2), 0.0);
  Batch batch = noiseless_batch(2);
};

TEST_F(IdentityQuadratic, SgdStep) {
  const auto s = sgd_step(make_state(ParamVector(vec({1, 0}))), q, batch, cfg(OptimizerKind::Sgd, 0.5));
  EXPECT_EQ(s.w.values(), vec({0.5, 0}));
  EXPECT_EQ(s.t, 2);
  EXPECT_EQ(s.last.grad_evals, 1);
}

TEST_F(IdentityQuadratic, SgdWeightDecay) {
  auto c = cfg(OptimizerKind::Sgd, 1.0);
  c.weight_decay = 0.1;
  // zero-Hessian quadratic: the gradient vanishes everywhere
  NoisyQuadratic flat = NoisyQuadratic::diagonal(Eigen::VectorXd::Zero(2), 0.0);
  const auto s = sgd_step(make_state(ParamVector(vec({2, -3}))), flat, batch, c);
  EXPECT_EQ(s.w.values(), (0.9 * vec({2, -3})).eval());
}

TEST_F(IdentityQuadratic, SgdMomentumTwoStepRecursion) {
  // constant gradient u from a linear objective: the flat quadratic plus a fixed noise row
  NoisyQuadratic flat = NoisyQuadratic::diagonal(Eigen::VectorXd::Zero(2), 1.0);
  Batch b;
  b.inputs = (Eigen::MatrixXd(1, 2) << 1.0, -2.0).finished();
  const Eigen::VectorXd u = flat.noise_of(b);
  auto c = cfg(OptimizerKind::Sgd, 0.1);
  c.momentum = 0.9;
  const auto s0 = make_state(ParamVector(vec({0, 0})));
  const auto s1 = sgd_step(s0, flat, b, c);
  const auto s2 = sgd_step(s1, flat, b, c);
  // v1 = u, v2 = 0.9 u + u; displacements eta u then eta 1.9 u
  EXPECT_LT(((s1.w.values() - s0.w.values()) + 0.1 * u).norm(), 1e-15);
  EXPECT_LT(((s2.w.values() - s1.w.values()) + 0.1 * 1.9 * u).norm(), 1e-15);
}

TEST_F(IdentityQuadratic, SamClosedForm) {
  const auto s = sam_step(make_state(ParamVector(vec({1, 0}))), q, batch, cfg(OptimizerKind::Sam, 1.0, 0.5));
  EXPECT_EQ(s.w.values(), vec({-0.5, 0}));
  EXPECT_EQ(s.last.grad_evals, 2);
}

TEST_F(IdentityQuadratic, SsamHandExample) {
  const auto mask = SparseMask(2, 0.5, {0});
  const auto s = ssam_step(make_state(ParamVector(vec({1, 1})), 0, mask), q, batch,
                           cfg(OptimizerKind::Ssam, 1.0, std::sqrt(2.0)));
  EXPECT_LT((s.w.values() - vec({-1, 0})).norm(), 1e-15);
  EXPECT_EQ(s.mask, mask);
  EXPECT_NEAR(s.last.masked_out_sq, 1.0, 1e-15);
}

TEST_F(IdentityQuadratic, WrongKindOrMaskLength) {
  const auto st = make_state(ParamVector(vec({1, 1})));
  EXPECT_THROW(sam_step(st, q, batch, cfg(OptimizerKind::Sgd, 1.0)), ConfigError);
  auto bad = st;
  bad.mask = SparseMask::ones(3);
  EXPECT_THROW(ssam_step(bad, q, batch, cfg(OptimizerKind::Ssam, 1.0, 0.1)), ConfigError);
}

TEST(Steps, OverflowIsNumericalError) {
  NoisyQuadratic q = NoisyQuadratic::diagonal(Eigen::VectorXd::Constant(2, 1e300), 0.0);
  EXPECT_THROW(sgd_step(make_state(ParamVector(vec({1e300, 1}))), q, noiseless_batch(2), cfg(OptimizerKind::Sgd, 1e10)),
               NumericalError);
}

// Recovery identities over random states on a noisy non-convex problem.
TEST(Steps, RecoveryIdentitiesAreBitwise) {
  TrigNonconvex f(12, 0.5, 2.0, 0.3);
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    auto st = make_state(f.initial_point(rng), 7);
    st.t = 1 + trial;
    const Batch b = noise_batch(rng, 12);
    auto sam = cfg(OptimizerKind::Sam, 0.1, 0.05);
    sam.momentum = 0.5;
    sam.weight_decay = 0.01;
    sam.schedule = trial % 2 ? ScheduleRule::InverseSqrt : ScheduleRule::Constant;
    auto ssam = sam;
    ssam.kind = OptimizerKind::Ssam;
    EXPECT_TRUE(same_trajectory_state(ssam_step(st, f, b, ssam), sam_step(st, f, b, sam)));

    auto sam0 = sam;
    sam0.rho0 = 0.0;
    auto sgd = sam0;
    sgd.kind = OptimizerKind::Sgd;
    EXPECT_TRUE(same_trajectory_state(sam_step(st, f, b, sam0), sgd_step(st, f, b, sgd)));

    auto zero_masked = st;
    zero_masked.mask = SparseMask(12, 0.99, {});
    EXPECT_TRUE(same_trajectory_state(ssam_step(zero_masked, f, b, ssam), sgd_step(st, f, b, sgd)));
  }
}

TEST(Steps, DeterministicGivenSeedAndData) {
  TrigNonconvex f(6, 0.5, 2.0, 0.3);
  auto run = [&] {
    Rng rng(5);
    auto st = make_state(f.initial_point(rng));
    for (int i = 0; i < 50; ++i) st = sam_step(st, f, noise_batch(rng, 6), cfg(OptimizerKind::Sam, 0.1, 0.05));
    return st;
  };
  EXPECT_TRUE(same_trajectory_state(run(), run()));
}

TEST(Steps, AllOptimizersConvergeOnStronglyConvexQuadratic) {
  NoisyQuadratic q = NoisyQuadratic::diagonal(Eigen::VectorXd::LinSpaced(8, 0.5, 1.0), 0.0);
  const double L = q.known_constants()->L;
  for (auto kind : {OptimizerKind::Sgd, OptimizerKind::Sam, OptimizerKind::Ssam}) {
    auto c = cfg(kind, 1.0 / L, kind == OptimizerKind::Sgd ? 0.0 : 0.05);
    c.schedule = ScheduleRule::InverseSqrt;
    Rng rng(8);
    auto st = make_state(q.initial_point(rng), 0, kind == OptimizerKind::Ssam ? SparseMask(8, 0.5, {0, 2, 4, 6})
                                                                               : SparseMask::ones(8));
    for (int t = 0; t < 1000; ++t) st = optimizer_step(st, q, noiseless_batch(8), c);
    EXPECT_LT(true_grad(q, st.w).norm(), 1e-3) << to_string(kind);
  }
}

TEST(Steps, SamReachesLowerLossThanSgdOnTrig) {
  // median over 5 seeds of the final population loss; eta = 0.1 sits near the
  // SGD stability edge (L = 26) where the perturbation moves iterates to wider basins
  TrigNonconvex f(10, 1.0, 5.0, 0.5);
  auto final_loss = [&](OptimizerKind kind, std::uint64_t seed) {
    Rng rng(seed);
    auto st = make_state(f.initial_point(rng));
    const auto c = cfg(kind, 0.1, kind == OptimizerKind::Sam ? 0.3 : 0.0);
    for (int t = 0; t < 1000; ++t) st = optimizer_step(st, f, noise_batch(rng, 10), c);
    return true_loss(f, st.w);
  };
  std::vector<double> sam, sgd;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    sam.push_back(final_loss(OptimizerKind::Sam, seed));
    sgd.push_back(final_loss(OptimizerKind::Sgd, seed));
  }
  std::sort(sam.begin(), sam.end());
  std::sort(sgd.begin(), sgd.end());
  EXPECT_LE(sam[2], sgd[2]);
}

TEST(OptimizerConfig, Validation) {
  EXPECT_THROW(cfg(OptimizerKind::Sgd, 0.0).validate(), ConfigError);
  EXPECT_THROW(cfg(OptimizerKind::Sam, 0.1, 0.0).validate(), ConfigError);
  EXPECT_THROW(cfg(OptimizerKind::Sgd, 0.1, 0.1).validate(), ConfigError);
  EXPECT_NO_THROW(cfg(OptimizerKind::Sam, 0.1, 0.05).validate());
  auto m = cfg(OptimizerKind::Sam, 0.1, 0.05);
  m.momentum = 1.0;
  EXPECT_THROW(m.validate(), ConfigError);
  auto th = cfg(OptimizerKind::Ssam, 0.5, 0.05);
  th.schedule = ScheduleRule::InverseSqrt;
  EXPECT_NO_THROW(th.validate_theory(10.0));
  th.rho0 = 3.0;
  EXPECT_THROW(th.validate_theory(10.0), ConfigError);
  th.kind = OptimizerKind::Sam;
  EXPECT_NO_THROW(th.validate_theory(10.0));
}

}  // namespace
}  // namespace ssam
