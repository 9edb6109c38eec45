#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "oracles.hpp"
#include "ssam/masks/mask_io.hpp"
#include "ssam/masks/policy.hpp"
#include "ssam/masks/topk.hpp"
#include "ssam/numcore/mlp.hpp"

namespace ssam {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

/// Classifier stand-in whose per-sample log-probability gradient is the sample's input row.
class FixedScoreClassifier : public StochasticObjective {
 public:
  explicit FixedScoreClassifier(Index d) : partition_(Partition::single(d)) {}
  Family family() const override { return Family::MlpClassifier; }
  Index dimension() const override { return partition_->dimension(); }
  const PartitionPtr& partition() const override { return partition_; }
  double loss_kernel(const Eigen::VectorXd&, const Batch&) const override { return 0.0; }
  Eigen::VectorXd grad_kernel(const Eigen::VectorXd& w, const Batch&) const override {
    return Eigen::VectorXd::Zero(w.size());
  }
  Eigen::VectorXd log_prob_grad_kernel(const Eigen::VectorXd&, const Eigen::RowVectorXd& x, int) const override {
    return x.transpose();
  }
  void check_batch(const Batch&) const override {}
  ParamVector initial_point(Rng&) const override { return ParamVector::zeros(partition_); }

 private:
  PartitionPtr partition_;
};

Batch rows(const Eigen::MatrixXd& m) {
  Batch b;
  b.inputs = m;
  b.targets.assign(static_cast<std::size_t>(m.rows()), 0);
  b.num_classes = 1;
  return b;
}

TEST(ArgTopK, Examples) {
  EXPECT_EQ(arg_topk(vec({0.1, 0.5, 0.3, 0.2}), 2), (std::vector<Index>{1, 2}));
  EXPECT_TRUE(arg_topk(vec({0.1, 0.5}), 0).empty());
  EXPECT_EQ(arg_topk(Eigen::VectorXd::Constant(6, 2.0), 3), (std::vector<Index>{0, 1, 2}));
  EXPECT_THROW(arg_topk(vec({1, 2}), 3), InvalidArgument);
}

TEST(ArgTopK, MatchesFullSortOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd v = standard_normal(rng, 40);
    for (Index i = 0; i < 40; i += 7) v[i] = v[0];  // force ties
    const Index k = trial % 41;
    EXPECT_EQ(arg_topk(v, k), oracle::full_sort_topk(v, k));
  }
}

TEST(EmpiricalFisher, ElementwiseSquares) {
  FixedScoreClassifier obj(2);
  const auto f1 = empirical_fisher(obj, ParamVector::zeros(obj.partition()), rows((Eigen::MatrixXd(1, 2) << 0.5, -0.2).finished()));
  EXPECT_NEAR(f1.values[0], 0.25, 1e-16);
  EXPECT_NEAR(f1.values[1], 0.04, 1e-16);
  FixedScoreClassifier one(1);
  const auto f2 = empirical_fisher(one, ParamVector::zeros(one.partition()), rows((Eigen::MatrixXd(2, 1) << 0.3, 0.5).finished()));
  EXPECT_NEAR(f2.values[0], 0.17, 1e-16);
  EXPECT_EQ(f2.n_samples, 2);
}

TEST(EmpiricalFisher, MatchesFiniteDifferenceOracle) {
  MlpClassifier mlp(5, 6, 2);
  ASSERT_EQ(mlp.dimension(), 50);
  Rng rng(17);
  const ParamVector w = mlp.initial_point(rng);
  Batch data;
  data.num_classes = 2;
  data.inputs = Eigen::MatrixXd::Random(32, 5);
  for (int i = 0; i < 32; ++i) data.targets.push_back(i % 2);
  Eigen::VectorXd brute = Eigen::VectorXd::Zero(50);
  for (Index i = 0; i < 32; ++i) {
    Batch single;
    single.inputs = data.inputs.row(i);
    single.targets = {data.targets[static_cast<std::size_t>(i)]};
    single.num_classes = 2;
    const auto g = oracle::fd_gradient(
        [&](const Eigen::VectorXd& x) { return -eval_loss(mlp, w.like(x), single); }, w.values());
    brute += g.array().square().matrix();
  }
  brute /= 32.0;
  const auto fisher = empirical_fisher(mlp, w, data);
  for (Index j = 0; j < 50; ++j) {
    EXPECT_LT(std::abs(fisher.values[j] - brute[j]) / std::max(brute[j], 1e-12), 1e-4) << j;
  }
}

TEST(EmpiricalFisher, SyntheticIsUnsupported) {
  struct Synthetic : FixedScoreClassifier {
    using FixedScoreClassifier::FixedScoreClassifier;
    Family family() const override { return Family::TrigNonconvex; }
  } obj(2);
  EXPECT_THROW(empirical_fisher(obj, ParamVector::zeros(obj.partition()), rows(Eigen::MatrixXd::Ones(1, 2))),
               UnsupportedOperation);
}

TEST(FisherMask, Examples) {
  const FisherEstimate f{vec({0.1, 0.5, 0.3, 0.2}), 1};
  EXPECT_EQ(fisher_mask(f, 0.5).bits(), (std::vector<std::uint8_t>{0, 1, 1, 0}));
  EXPECT_EQ(fisher_mask(f, 0.0).popcount(), 4);
}

TEST(FisherMask, MatchesFullSortOracle) {
  Rng rng(8);
  const Eigen::VectorXd v = standard_normal(rng, 1000).cwiseAbs();
  const auto m = fisher_mask({v, 1}, 0.9);
  EXPECT_EQ(m.active_indices(), oracle::full_sort_topk(v, 100));
}

TEST(FisherMask, MonotoneAndScaleInvariant) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v = standard_normal(rng, 101).cwiseAbs();
    const auto m = fisher_mask({v, 1}, 0.8);
    for (Index i = 0; i < 101; ++i)
      for (Index j = 0; j < 101; ++j)
        if (v[i] > v[j] && m.active(j)) EXPECT_TRUE(m.active(i));
    EXPECT_EQ(fisher_mask({Eigen::VectorXd(v * 3.3), 1}, 0.8), m);
  }
}

TEST(RandomMask, Examples) {
  EXPECT_EQ(random_mask(7, 0.0, 1).popcount(), 7);
  EXPECT_EQ(random_mask(10, 0.5, 42).popcount(), 5);
  EXPECT_EQ(random_mask(10, 0.5, 42), random_mask(10, 0.5, 42));
}

TEST(RandomMask, UniformInclusionFrequency) {
  std::vector<int> hits(20, 0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const auto m = random_mask(20, 0.5, derive_seed(123, static_cast<std::uint64_t>(i)));
    for (Index j = 0; j < 20; ++j) hits[static_cast<std::size_t>(j)] += m.active(j);
  }
  for (int h : hits) EXPECT_NEAR(h / double(draws), 0.5, 0.02);
}

TEST(CosineDecay, Values) {
  EXPECT_DOUBLE_EQ(cosine_decay(0, 10, 0.4), 0.4);
  EXPECT_NEAR(cosine_decay(10, 10, 0.4), 0.0, 1e-17);
  EXPECT_NEAR(cosine_decay(5, 10, 0.4), 0.2, 1e-16);
  EXPECT_THROW(cosine_decay(11, 10, 0.4), InvalidArgument);
}

MaskPolicy dynamic_policy(double alpha, DropCriterion c = DropCriterion::Flattest) {
  MaskPolicy p;
  p.kind = MaskKind::Dynamic;
  p.alpha = alpha;
  p.drop_criterion = c;
  return p;
}

TEST(DropGrow, NoOpCases) {
  const auto m = SparseMask(4, 0.5, {0, 1});
  const Eigen::VectorXd g = vec({0.9, 0.1, 0.5, 0.7});
  EXPECT_EQ(drop_grow_update(m, g, 3, 10, dynamic_policy(0.0), 1).mask, m);
  EXPECT_EQ(drop_grow_update(m, g, 10, 10, dynamic_policy(0.5), 1).mask, m);
}

TEST(DropGrow, HandEnumeratedExample) {
  // alpha = 0.5 at t = 0: N_drop = round(0.5 * 0.5 * 4) = 1; index 1 has the
  // smallest active |g|; growth draws from {2, 3}. Seed 2 draws index 3.
  const auto m = SparseMask(4, 0.5, {0, 1});
  const auto r = drop_grow_update(m, vec({0.9, 0.1, 0.5, 0.7}), 0, 10, dynamic_policy(0.5), 2);
  EXPECT_EQ(r.dropped, 1);
  EXPECT_EQ(r.mask.bits(), (std::vector<std::uint8_t>{1, 0, 0, 1}));
}

TEST(DropGrow, FlattestDropsOnlySmallGradients) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 101;
    const auto m = random_mask(d, 0.5, derive_seed(1, trial));
    const Eigen::VectorXd g = standard_normal(rng, d);
    const auto r = drop_grow_update(m, g, 0, 10, dynamic_policy(0.6), derive_seed(2, trial));
    ASSERT_FALSE(r.clamped);
    EXPECT_EQ(r.mask.popcount(), m.popcount());
    double max_dropped = 0.0, min_retained = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < d; ++i) {
      if (!m.active(i)) continue;
      if (r.mask.active(i)) min_retained = std::min(min_retained, std::abs(g[i]));
      else max_dropped = std::max(max_dropped, std::abs(g[i]));
    }
    EXPECT_LE(max_dropped, min_retained);
  }
}

TEST(DropGrow, SharpestDropsLargeGradients) {
  const auto m = SparseMask(6, 0.5, {0, 1, 2});
  const auto r = drop_grow_update(m, vec({5, 1, 2, 0, 0, 0}), 0, 10, dynamic_policy(0.67, DropCriterion::Sharpest), 4);
  EXPECT_EQ(r.dropped, 2);
  EXPECT_FALSE(r.mask.active(0));
  EXPECT_FALSE(r.mask.active(2));
  EXPECT_TRUE(r.mask.active(1));
}

TEST(DropGrow, ClampsWhenInactiveSetIsSmall) {
  const auto m = SparseMask(10, 0.1, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  const auto r = drop_grow_update(m, Eigen::VectorXd::LinSpaced(10, 1, 10), 0, 10, dynamic_policy(1.0), 3);
  EXPECT_TRUE(r.clamped);
  EXPECT_EQ(r.dropped, 1);
  EXPECT_EQ(r.mask.popcount(), 9);
}

TEST(MaybeRegenerate, Cadence) {
  MaskPolicy fixed;
  fixed.kind = MaskKind::Fixed;
  MaskContext ctx;
  ctx.dimension = 20;
  ctx.sparsity = 0.5;
  ctx.total_epochs = 20;
  for (int e = 1; e <= 20; ++e) EXPECT_FALSE(maybe_regenerate(e, fixed, ctx).has_value());

  MaskPolicy every;
  every.kind = MaskKind::Random;
  for (int e = 1; e <= 20; ++e) EXPECT_TRUE(maybe_regenerate(e, every, ctx).has_value());

  MaskPolicy five = every;
  five.update_interval = 5;
  std::vector<int> epochs;
  for (int e = 1; e <= 20; ++e)
    if (maybe_regenerate(e, five, ctx)) epochs.push_back(e);
  EXPECT_EQ(epochs, (std::vector<int>{5, 10, 15, 20}));
  EXPECT_THROW(maybe_regenerate(0, five, ctx), InvalidArgument);
}

TEST(MaybeRegenerate, FisherDrawsSamples) {
  MlpClassifier mlp(3, 2, 2);
  Rng rng(4);
  const ParamVector w = mlp.initial_point(rng);
  Batch data;
  data.num_classes = 2;
  data.inputs = Eigen::MatrixXd::Random(50, 3);
  for (int i = 0; i < 50; ++i) data.targets.push_back(i % 2);
  MaskPolicy p;
  p.kind = MaskKind::Fisher;
  p.fisher_samples = 16;
  MaskContext ctx{&mlp, &w, &data, nullptr, nullptr, mlp.dimension(), 0.5, 10, 77};
  const auto m = maybe_regenerate(1, p, ctx);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->popcount(), active_count(mlp.dimension(), 0.5));
  EXPECT_EQ(*m, *maybe_regenerate(1, p, ctx));
}

// popcount = round((1 - s) d) for every generator and after many drop/grow updates.
TEST(SparsityInvariant, AllPoliciesAllSizes) {
  Rng rng(5);
  for (Index d : {Index{10}, Index{101}, Index{10000}}) {
    for (double s : {0.0, 0.5, 0.8, 0.9, 0.95, 0.98, 0.99}) {
      const Index want = active_count(d, s);
      EXPECT_EQ(random_mask(d, s, 1).popcount(), want);
      EXPECT_EQ(fisher_mask({standard_normal(rng, d).cwiseAbs(), 1}, s).popcount(), want);
      auto m = random_mask(d, s, 2);
      const int updates = d == 10000 ? 20 : 200;
      for (int u = 0; u < updates; ++u) {
        const Eigen::VectorXd g = standard_normal(rng, d);
        m = drop_grow_update(m, g, u % 10, 10, dynamic_policy(0.5, static_cast<DropCriterion>(u % 3)), u).mask;
        ASSERT_EQ(m.popcount(), want);
      }
    }
  }
}

TEST(SparseMask, RejectsWrongCardinality) {
  EXPECT_THROW(SparseMask(4, 0.5, {0}), InvalidArgument);
  EXPECT_THROW(SparseMask(4, 0.5, {0, 0}), InvalidArgument);
  EXPECT_THROW(SparseMask(4, 1.0, {}), InvalidArgument);
  EXPECT_EQ(active_count(101, 0.5), 51);  // half away from zero
}

TEST(MaskIo, BinaryLayout) {
  const auto m = SparseMask(10, 0.5, {0, 3, 8, 9, 5});
  const auto bytes = encode_mask(m);
  ASSERT_EQ(bytes.size(), 24u + 2u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "SSMK");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 10);
  EXPECT_EQ(bytes[24], 0b00101001);
  EXPECT_EQ(bytes[25], 0b00000011);
  EXPECT_EQ(decode_mask(bytes), m);
}

TEST(MaskIo, RoundTripProperty) {
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 1 + trial * 37;
    const auto m = random_mask(d, 0.1 * (trial % 10), trial);
    EXPECT_EQ(decode_mask(encode_mask(m)), m);
    EXPECT_EQ(mask_from_json(mask_to_json(m)), m);
  }
  const auto path = std::filesystem::temp_directory_path() / "ssam_mask_test.ssm";
  const auto m = random_mask(33, 0.5, 4);
  write_mask(m, path);
  EXPECT_EQ(read_mask(path), m);
  std::filesystem::remove(path);
}

TEST(MaskIo, MalformedInput) {
  auto bytes = encode_mask(SparseMask(10, 0.5, {0, 1, 2, 3, 4}));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_mask(bad_magic), FormatError);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(decode_mask(truncated), FormatError);
  auto padding = bytes;
  padding.back() |= 0x80;
  EXPECT_THROW(decode_mask(padding), FormatError);
  auto wrong_count = bytes;
  wrong_count[24] ^= 0x01;
  EXPECT_THROW(decode_mask(wrong_count), FormatError);
}

}  // namespace
}  // namespace ssam
