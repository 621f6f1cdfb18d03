#include "expfunc/smoothing_spline.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace expfunc {
namespace {

struct Operators {
  Eigen::MatrixXd hat;    // fitted = hat * y
  Eigen::MatrixXd gamma;  // interior second derivatives = gamma * y
};

Operators smoother(const Eigen::MatrixXd& q, const Eigen::MatrixXd& r, const Eigen::VectorXd& winv, double lambda) {
  const Eigen::MatrixXd winv_q = winv.asDiagonal() * q;
  const Eigen::MatrixXd m = r + lambda * q.transpose() * winv_q;
  Operators ops;
  ops.gamma = m.ldlt().solve(q.transpose());
  ops.hat = Eigen::MatrixXd::Identity(q.rows(), q.rows()) - lambda * winv_q * ops.gamma;
  return ops;
}

}  // namespace

SplineFit fit_smoothing_spline(const std::vector<double>& x, const std::vector<double>& y,
                               const std::vector<double>& se, std::optional<double> lambda) {
  const int n = static_cast<int>(x.size());
  if (n < 4 || static_cast<int>(y.size()) != n) throw std::invalid_argument("smoothing spline: need >= 4 points");
  if (!se.empty() && static_cast<int>(se.size()) != n) throw std::invalid_argument("smoothing spline: se size");
  std::vector<double> h(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    if (!(h[i] > 0.0)) throw std::invalid_argument("smoothing spline: knots must be strictly increasing");
  }

  bool weighted = !se.empty();
  for (double e : se)
    if (!(e > 0.0)) weighted = false;
  Eigen::VectorXd winv = Eigen::VectorXd::Ones(n);
  if (weighted) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += se[i] * se[i];
    mean /= n;
    for (int i = 0; i < n; ++i) winv(i) = se[i] * se[i] / mean;
  }

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n - 2);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n - 2, n - 2);
  for (int j = 0; j < n - 2; ++j) {
    q(j, j) = 1.0 / h[j];
    q(j + 1, j) = -1.0 / h[j] - 1.0 / h[j + 1];
    q(j + 2, j) = 1.0 / h[j + 1];
    r(j, j) = (h[j] + h[j + 1]) / 3.0;
    if (j + 1 < n - 2) r(j, j + 1) = r(j + 1, j) = h[j + 1] / 6.0;
  }
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

  auto cv = [&](const Operators& ops) {
    const Eigen::VectorXd fit = ops.hat * yv;
    double score = 0.0;
    for (int i = 0; i < n; ++i) {
      const double resid = (yv(i) - fit(i)) / (1.0 - ops.hat(i, i));
      score += resid * resid / winv(i);
    }
    return score / n;
  };

  double best_lambda = 0.0;
  Operators best;
  double best_score = std::numeric_limits<double>::infinity();
  if (lambda) {
    best_lambda = *lambda;
    best = smoother(q, r, winv, best_lambda);
    best_score = cv(best);
  } else {
    const double scale = r.trace() / (q.transpose() * winv.asDiagonal() * q).trace();
    for (double p = -10.0; p <= 4.0; p += 0.25) {
      const double lam = scale * std::pow(10.0, p);
      Operators ops = smoother(q, r, winv, lam);
      const double score = cv(ops);
      if (score < best_score) {
        best_score = score;
        best_lambda = lam;
        best = std::move(ops);
      }
    }
  }

  // Derivative at the knots as a linear map of y.
  Eigen::MatrixXd gfull = Eigen::MatrixXd::Zero(n, n);
  gfull.middleRows(1, n - 2) = best.gamma;
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i + 1 < n; ++i)
    d.row(i) = (best.hat.row(i + 1) - best.hat.row(i)) / h[i] - h[i] * (2.0 * gfull.row(i) + gfull.row(i + 1)) / 6.0;
  {
    const int i = n - 1;
    const double hl = h[n - 2];
    d.row(i) = (best.hat.row(i) - best.hat.row(i - 1)) / hl + hl * (gfull.row(i - 1) + 2.0 * gfull.row(i)) / 6.0;
  }

  SplineFit fit;
  fit.lambda = best_lambda;
  fit.cv_score = best_score;
  const Eigen::VectorXd f = best.hat * yv;
  const Eigen::VectorXd df = d * yv;
  fit.fitted.assign(f.data(), f.data() + n);
  fit.derivative.assign(df.data(), df.data() + n);
  fit.derivative_std.assign(n, 0.0);
  if (weighted) {
    for (int i = 0; i < n; ++i) {
      double var = 0.0;
      for (int j = 0; j < n; ++j) var += d(i, j) * d(i, j) * se[j] * se[j];
      fit.derivative_std[i] = std::sqrt(var);
    }
  }
  return fit;
}

}  // namespace expfunc
