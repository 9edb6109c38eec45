#include "ssam/numcore/mlp.hpp"

#include <cmath>

namespace ssam {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

struct Layout {
  Index w1 = 0, b1 = 0, w2 = 0, b2 = 0;
};

Layout layout_of(Index n, Index h, Index c) {
  Layout l;
  if (h > 0) {
    l.w1 = 0;
    l.b1 = h * n;
    l.w2 = l.b1 + h;
    l.b2 = l.w2 + c * h;
  } else {
    l.w2 = 0;
    l.b2 = c * n;
  }
  return l;
}

}  // namespace

MlpClassifier::MlpClassifier(Index n_features, Index hidden_units, int num_classes)
    : n_in_(n_features), hidden_(hidden_units), classes_(num_classes) {
  if (n_features < 1) throw ConfigError("n_features", "need at least one input feature");
  if (hidden_units < 0) throw ConfigError("hidden", "hidden width must be nonnegative");
  if (num_classes < 2) throw ConfigError("num_classes", "need at least two classes");
  std::vector<std::pair<std::string, Index>> groups;
  if (hidden_ > 0) {
    groups = {{"hidden.weight", hidden_ * n_in_},
              {"hidden.bias", hidden_},
              {"output.weight", classes_ * hidden_},
              {"output.bias", classes_}};
  } else {
    groups = {{"output.weight", classes_ * n_in_}, {"output.bias", classes_}};
  }
  partition_ = Partition::from_lengths(groups);
  if (partition_->dimension() > kMaxParameters) {
    throw ConfigError("hidden", "classifier has " + std::to_string(partition_->dimension()) +
                                    " parameters, limit is " + std::to_string(kMaxParameters));
  }
}

MlpClassifier::Forward MlpClassifier::forward(const Eigen::VectorXd& w, const Eigen::MatrixXd& x) const {
  const Layout l = layout_of(n_in_, hidden_, classes_);
  Forward fw;
  const Index last_in = hidden_ > 0 ? hidden_ : n_in_;
  ConstMap W2(w.data() + l.w2, classes_, last_in);
  Eigen::Map<const Eigen::RowVectorXd> b2(w.data() + l.b2, classes_);
  Eigen::MatrixXd logits;
  if (hidden_ > 0) {
    ConstMap W1(w.data() + l.w1, hidden_, n_in_);
    Eigen::Map<const Eigen::RowVectorXd> b1(w.data() + l.b1, hidden_);
    fw.hidden = ((x * W1.transpose()).rowwise() + b1).array().tanh().matrix();
    logits = (fw.hidden * W2.transpose()).rowwise() + b2;
  } else {
    logits = (x * W2.transpose()).rowwise() + b2;
  }
  // log-softmax, shifted by the row max for stability
  const Eigen::VectorXd mx = logits.rowwise().maxCoeff();
  Eigen::MatrixXd shifted = logits.colwise() - mx;
  const Eigen::VectorXd lse = shifted.array().exp().rowwise().sum().log().matrix();
  fw.logp = shifted.colwise() - lse;
  return fw;
}

Eigen::VectorXd MlpClassifier::backward(const Eigen::VectorXd& w, const Eigen::MatrixXd& x, const Forward& fw,
                                        const Eigen::MatrixXd& dlogits) const {
  const Layout l = layout_of(n_in_, hidden_, classes_);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(w.size());
  const Index last_in = hidden_ > 0 ? hidden_ : n_in_;
  const Eigen::MatrixXd& act = hidden_ > 0 ? fw.hidden : x;
  MutMap(g.data() + l.w2, classes_, last_in) = dlogits.transpose() * act;
  Eigen::Map<Eigen::RowVectorXd>(g.data() + l.b2, classes_) = dlogits.colwise().sum();
  if (hidden_ > 0) {
    ConstMap W2(w.data() + l.w2, classes_, hidden_);
    const Eigen::MatrixXd dpre = ((dlogits * W2).array() * (1.0 - fw.hidden.array().square())).matrix();
    MutMap(g.data() + l.w1, hidden_, n_in_) = dpre.transpose() * x;
    Eigen::Map<Eigen::RowVectorXd>(g.data() + l.b1, hidden_) = dpre.colwise().sum();
  }
  return g;
}

double MlpClassifier::loss_kernel(const Eigen::VectorXd& w, const Batch& batch) const {
  const Forward fw = forward(w, batch.inputs);
  double total = 0.0;
  for (Index i = 0; i < batch.samples(); ++i) total -= fw.logp(i, batch.targets[static_cast<std::size_t>(i)]);
  return total / static_cast<double>(batch.samples());
}

Eigen::VectorXd MlpClassifier::grad_kernel(const Eigen::VectorXd& w, const Batch& batch) const {
  const Forward fw = forward(w, batch.inputs);
  // d(mean CE)/dlogits = (softmax - onehot) / n
  Eigen::MatrixXd dlogits = fw.logp.array().exp().matrix();
  for (Index i = 0; i < batch.samples(); ++i) dlogits(i, batch.targets[static_cast<std::size_t>(i)]) -= 1.0;
  dlogits /= static_cast<double>(batch.samples());
  return backward(w, batch.inputs, fw, dlogits);
}

Eigen::VectorXd MlpClassifier::log_prob_grad_kernel(const Eigen::VectorXd& w, const Eigen::RowVectorXd& x,
                                                    int y) const {
  const Eigen::MatrixXd xm = x;
  const Forward fw = forward(w, xm);
  // d log p_y / dlogits = onehot - softmax
  Eigen::MatrixXd dlogits = -fw.logp.array().exp().matrix();
  dlogits(0, y) += 1.0;
  return backward(w, xm, fw, dlogits);
}

void MlpClassifier::check_batch(const Batch& batch) const {
  if (batch.features() != n_in_) {
    throw ConfigError("batch", "inputs have " + std::to_string(batch.features()) + " features, expected " +
                                   std::to_string(n_in_));
  }
  if (static_cast<Index>(batch.targets.size()) != batch.samples()) {
    throw ConfigError("batch", "classifier batch needs one label per sample");
  }
  for (int y : batch.targets) {
    if (y < 0 || y >= classes_) {
      throw ConfigError("batch", "label " + std::to_string(y) + " outside [0, " + std::to_string(classes_) + ")");
    }
  }
}

ParamVector MlpClassifier::initial_point(Rng& rng) const {
  Eigen::VectorXd w(dimension());
  for (const auto& seg : partition_->segments()) {
    const bool hidden_group = seg.name.rfind("hidden.", 0) == 0;
    const Index fan_in = hidden_group || hidden_ == 0 ? n_in_ : hidden_;
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (Index i = 0; i < seg.length; ++i) w[seg.offset + i] = u(rng);
  }
  return ParamVector(std::move(w), partition_);
}

Eigen::MatrixXd MlpClassifier::predict_proba(const Eigen::VectorXd& w, const Eigen::MatrixXd& inputs) const {
  return forward(w, inputs).logp.array().exp().matrix();
}

double MlpClassifier::accuracy(const Eigen::VectorXd& w, const Batch& batch) const {
  if (batch.samples() == 0) return 0.0;
  const Forward fw = forward(w, batch.inputs);
  Index correct = 0;
  for (Index i = 0; i < batch.samples(); ++i) {
    Index arg = 0;
    fw.logp.row(i).maxCoeff(&arg);
    if (arg == batch.targets[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(batch.samples());
}

}  // namespace ssam
