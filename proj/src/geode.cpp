#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "hybefs/error.hpp"
#include "hybefs/rankers.hpp"

namespace hybefs {

// Characteristic direction: the unit normal of a shrunk linear discriminant
// fitted in principal-component space, mapped back to feature space.
FeatureRanking geode_rank(const ExpressionMatrix& m, double gamma, double var_fraction) {
  require_both_classes(m, 2);
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail(ErrorKind::config, "GeoDE gamma must lie in [0, 1]");
  if (!(var_fraction > 0.0 && var_fraction <= 1.0)) {
    fail(ErrorKind::config, "GeoDE var_fraction must lie in (0, 1]");
  }
  const std::size_t n = m.n_samples();
  const std::size_t p = m.n_features();
  const auto order = canonical_feature_order(m);

  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = m.column(order[j]);
    for (std::size_t s = 0; s < n; ++s) x(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = col[s];
  }
  x.rowwise() -= x.colwise().mean();

  std::vector<double> scores(p, 0.0);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double total = sv.squaredNorm();
  if (total == 0.0) return FeatureRanking::from_scores(std::move(scores));

  const auto max_d = std::min<Eigen::Index>(static_cast<Eigen::Index>(n) - 1, sv.size());
  Eigen::Index d = 0;
  double cumulative = 0.0;
  while (d < max_d) {
    cumulative += sv(d) * sv(d);
    ++d;
    if (cumulative >= var_fraction * total) break;
  }
  while (d > 1 && sv(d - 1) == 0.0) --d;

  const Eigen::MatrixXd z = svd.matrixU().leftCols(d) * sv.head(d).asDiagonal();
  const auto labels = m.labels();
  Eigen::VectorXd mean[2] = {Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d)};
  double count[2] = {0.0, 0.0};
  for (std::size_t s = 0; s < n; ++s) {
    mean[labels[s]] += z.row(static_cast<Eigen::Index>(s)).transpose();
    count[labels[s]] += 1.0;
  }
  mean[0] /= count[0];
  mean[1] /= count[1];
  const Eigen::VectorXd delta = mean[1] - mean[0];

  Eigen::MatrixXd within = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t s = 0; s < n; ++s) {
    const Eigen::VectorXd c = z.row(static_cast<Eigen::Index>(s)).transpose() - mean[labels[s]];
    within.noalias() += c * c.transpose();
  }
  within /= static_cast<double>(n - 2);
  const double mean_var = within.trace() / static_cast<double>(d);
  Eigen::MatrixXd shrunk = (1.0 - gamma) * within;
  shrunk.diagonal().array() += gamma * mean_var;

  Eigen::LLT<Eigen::MatrixXd> llt(shrunk);
  const double floor = 1e-12 * std::max(mean_var, 1e-300);
  if (llt.info() != Eigen::Success || (llt.matrixL().toDenseMatrix().diagonal().array().square() <= floor).any()) {
    fail(ErrorKind::runtime,
         "GeoDE: within-class covariance is singular; use a shrinkage gamma > 0");
  }
  const Eigen::VectorXd a = llt.solve(delta);
  Eigen::VectorXd b = svd.matrixV().leftCols(d) * a;
  const double norm = b.norm();
  if (norm == 0.0 || !std::isfinite(norm)) return FeatureRanking::from_scores(std::move(scores));
  b /= norm;
  for (std::size_t j = 0; j < p; ++j) scores[order[j]] = b(static_cast<Eigen::Index>(j)) * b(static_cast<Eigen::Index>(j));
  return FeatureRanking::from_scores(std::move(scores));
}

}  // namespace hybefs
