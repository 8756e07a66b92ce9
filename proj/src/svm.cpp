#include "sulfex/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sulfex {

LinearBoundary::LinearBoundary(std::array<std::string, 2> feature_names, std::array<double, 2> weights, double bias,
                               double box_constraint)
    : names_(std::move(feature_names)), weights_(weights), bias_(bias), box_constraint_(box_constraint) {
  if (!std::isfinite(weights[0]) || !std::isfinite(weights[1]) || !std::isfinite(bias) ||
      !std::isfinite(box_constraint))
    throw Error(ErrorCode::NonFiniteValue, "boundary coefficients must be finite");
  const double norm = std::hypot(weights[0], weights[1]);
  if (norm == 0.0) throw Error(ErrorCode::InvalidArgument, "boundary weights are both zero");
  unit_weights_ = {weights[0] / norm, weights[1] / norm};
  unit_bias_ = bias / norm;
}

double LinearBoundary::decision_value(std::span<const double> point) const {
  if (point.size() != 2) throw Error(ErrorCode::DimensionMismatch, "boundary expects a 2-D point");
  return weights_[0] * point[0] + weights_[1] * point[1] + bias_;
}

std::optional<std::pair<std::size_t, double>> LinearBoundary::axis_threshold() const {
  if (weights_[1] == 0.0) return std::pair<std::size_t, double>{0, -bias_ / weights_[0]};
  if (weights_[0] == 0.0) return std::pair<std::size_t, double>{1, -bias_ / weights_[1]};
  return std::nullopt;
}

std::string LinearBoundary::equation() const {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  auto term = [&](double w, const std::string& name) {
    if (w == 0.0) return;
    if (!first) os << (w < 0 ? " - " : " + ");
    else if (w < 0) os << "-";
    if (std::abs(w) != 1.0) os << std::abs(w) << "*";
    os << name;
    first = false;
  };
  term(weights_[0], names_[0]);
  term(weights_[1], names_[1]);
  if (bias_ != 0.0) os << (bias_ < 0 ? " - " : " + ") << std::abs(bias_);
  os << " = 0";
  return os.str();
}

namespace svm {

int classify(const LinearBoundary& boundary, std::span<const double> point) {
  return boundary.decision_value(point) >= 0.0 ? 1 : -1;
}

double primal_objective(const Matrix& points, std::span<const int> labels, std::span<const double> weights,
                        double bias, double c) {
  double obj = 0.5 * num::dot(weights, weights);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const double m = labels[i] * (num::dot(points.row(i), weights) + bias);
    obj += c * std::max(0.0, 1.0 - m);
  }
  return obj;
}

namespace {

// Parameters θ = (β₀ … β_{d−1}, b).
struct Problem {
  const Matrix& x;
  std::span<const int> y;
  double c;

  std::size_t dim() const { return x.cols(); }

  double margin(std::span<const double> theta, std::size_t i) const {
    double f = theta[dim()];
    for (std::size_t j = 0; j < dim(); ++j) f += x(i, j) * theta[j];
    return y[i] * f;
  }

  double exact(std::span<const double> theta) const {
    return primal_objective(x, y, theta.first(dim()), theta[dim()], c);
  }

  // Softplus-smoothed objective; optionally gradient and Hessian.
  double smoothed(std::span<const double> theta, double tau, Vector* grad, Matrix* hess) const {
    const std::size_t d = dim();
    const std::size_t q = d + 1;
    double f = 0.0;
    for (std::size_t j = 0; j < d; ++j) f += 0.5 * theta[j] * theta[j];
    if (grad) {
      grad->assign(q, 0.0);
      for (std::size_t j = 0; j < d; ++j) (*grad)[j] = theta[j];
    }
    if (hess) {
      *hess = Matrix(q, q);
      for (std::size_t j = 0; j < d; ++j) (*hess)(j, j) = 1.0;
    }
    Vector xt(q);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double u = (1.0 - margin(theta, i)) / tau;
      const double e = std::exp(-std::abs(u));
      const double softplus = std::max(u, 0.0) + std::log1p(e);
      f += c * tau * softplus;
      if (!grad && !hess) continue;
      const double sig = u >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
      for (std::size_t j = 0; j < d; ++j) xt[j] = y[i] * x(i, j);
      xt[d] = y[i];
      if (grad)
        for (std::size_t j = 0; j < q; ++j) (*grad)[j] -= c * sig * xt[j];
      if (hess) {
        const double h = c * (e / ((1.0 + e) * (1.0 + e))) / tau;
        if (h > 0.0)
          for (std::size_t a = 0; a < q; ++a)
            for (std::size_t b = 0; b < q; ++b) (*hess)(a, b) += h * xt[a] * xt[b];
      }
    }
    return f;
  }
};

// Cholesky solve of (H + shift I) z = rhs; H symmetric PSD.
bool cholesky_solve(Matrix h, double shift, Vector rhs, Vector& out) {
  const std::size_t n = h.rows();
  for (std::size_t i = 0; i < n; ++i) h(i, i) += shift;
  for (std::size_t j = 0; j < n; ++j) {
    double s = h(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= h(j, k) * h(j, k);
    if (!(s > 0.0)) return false;
    h(j, j) = std::sqrt(s);
    for (std::size_t i = j + 1; i < n; ++i) {
      double t = h(i, j);
      for (std::size_t k = 0; k < j; ++k) t -= h(i, k) * h(j, k);
      h(i, j) = t / h(j, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) rhs[i] -= h(i, k) * rhs[k];
    rhs[i] /= h(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) rhs[i] -= h(k, i) * rhs[k];
    rhs[i] /= h(i, i);
  }
  out = std::move(rhs);
  return true;
}

std::size_t newton_stage(const Problem& prob, Vector& theta, double tau) {
  const std::size_t q = theta.size();
  std::size_t iters = 0;
  Vector grad;
  Matrix hess;
  for (; iters < 200; ++iters) {
    const double f = prob.smoothed(theta, tau, &grad, &hess);
    Vector neg(q);
    for (std::size_t j = 0; j < q; ++j) neg[j] = -grad[j];
    Vector step;
    double shift = 1e-12 * std::max(1.0, hess.max_abs());
    while (!cholesky_solve(hess, shift, neg, step)) shift *= 10.0;
    const double decrement = -num::dot(grad, step);
    if (!(decrement > 1e-22 * (1.0 + std::abs(f)))) break;
    double t = 1.0;
    Vector trial(q);
    bool moved = false;
    while (t > 1e-14) {
      for (std::size_t j = 0; j < q; ++j) trial[j] = theta[j] + t * step[j];
      if (prob.smoothed(trial, tau, nullptr, nullptr) <= f - 1e-4 * t * decrement) {
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
    theta = trial;
  }
  return iters;
}

struct Candidate {
  Vector theta;
  bool certified = false;
};

// Solves the equality-constrained QP defined by margin set `on` and violator
// set `viol`, then checks that it is a KKT point of the full problem.
std::optional<Candidate> active_set_solution(const Problem& prob, const std::vector<std::size_t>& on,
                                             const std::vector<std::size_t>& viol) {
  const std::size_t d = prob.dim();
  const std::size_t q = d + 1;
  const std::size_t s = on.size();
  if (s > q) return std::nullopt;
  Matrix k(q + s, q + s);
  Vector rhs(q + s, 0.0);
  for (std::size_t j = 0; j < d; ++j) k(j, j) = 1.0;
  for (std::size_t i : viol) {
    for (std::size_t j = 0; j < d; ++j) rhs[j] += prob.c * prob.y[i] * prob.x(i, j);
    rhs[d] += prob.c * prob.y[i];
  }
  for (std::size_t r = 0; r < s; ++r) {
    const std::size_t i = on[r];
    for (std::size_t j = 0; j < d; ++j) k(q + r, j) = k(j, q + r) = prob.y[i] * prob.x(i, j);
    k(q + r, d) = k(d, q + r) = prob.y[i];
    rhs[q + r] = 1.0;
  }
  Vector sol;
  try {
    sol = num::solve_symmetric(k, rhs);
  } catch (const Error&) {
    return std::nullopt;
  }
  Candidate cand{Vector(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(q)), true};

  const double tol = 1e-7;
  for (std::size_t r = 0; r < s; ++r) {
    const double mu = -sol[q + r];
    if (mu < -1e-9 * prob.c || mu > prob.c * (1.0 + 1e-9)) cand.certified = false;
  }
  std::vector<char> in_on(prob.x.rows(), 0), in_viol(prob.x.rows(), 0);
  for (std::size_t i : on) in_on[i] = 1;
  for (std::size_t i : viol) in_viol[i] = 1;
  for (std::size_t i = 0; i < prob.x.rows(); ++i) {
    if (in_on[i]) continue;
    const double m = prob.margin(cand.theta, i);
    if (in_viol[i] ? m > 1.0 + tol : m < 1.0 - tol) cand.certified = false;
  }
  return cand;
}

SvmFit solve(const Matrix& x, std::span<const int> y, double c, Vector& theta_out) {
  const Problem prob{x, y, c};
  const std::size_t q = x.cols() + 1;
  Vector theta(q, 0.0);
  SvmFit out;
  for (double tau = 1.0; tau >= 1e-10; tau *= 0.1) out.newton_iterations += newton_stage(prob, theta, tau);
  if (!num::all_finite(theta)) throw Error(ErrorCode::NoConvergence, "SVM iterate became non-finite");

  Vector best = theta;
  double best_obj = prob.exact(theta);
  for (double delta : {1e-3, 1e-5, 1e-7, 1e-9}) {
    std::vector<std::size_t> on, viol;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double m = prob.margin(theta, i);
      if (std::abs(m - 1.0) <= delta) on.push_back(i);
      else if (m < 1.0) viol.push_back(i);
    }
    const auto cand = active_set_solution(prob, on, viol);
    if (!cand || !num::all_finite(cand->theta)) continue;
    const double obj = prob.exact(cand->theta);
    if (obj <= best_obj * (1.0 + 1e-12) + 1e-300) {
      if (cand->certified || obj < best_obj) {
        best = cand->theta;
        best_obj = obj;
        out.certified = cand->certified;
      }
    }
  }
  out.objective = best_obj;
  out.slacks.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out.slacks[i] = std::max(0.0, 1.0 - prob.margin(best, i));
  theta_out = best;
  return out;
}

}  // namespace

SvmFit train(const Matrix& points, std::span<const int> labels, const SvmOptions& options) {
  if (points.cols() != 2) throw Error(ErrorCode::InvalidArgument, "SVM boundaries are 2-D");
  if (labels.size() != points.rows()) throw Error(ErrorCode::DimensionMismatch, "one label per point required");
  if (!(options.box_constraint > 0.0)) throw Error(ErrorCode::InvalidArgument, "box constraint must be positive");
  if (!points.all_finite()) throw Error(ErrorCode::NonFiniteValue, "SVM points must be finite");
  bool pos = false, neg = false;
  for (int l : labels) {
    if (l == 1) pos = true;
    else if (l == -1) neg = true;
    else throw Error(ErrorCode::InvalidArgument, "labels must be +1 or -1");
  }
  if (!pos || !neg) throw Error(ErrorCode::SingleClass, "training data contains a single class");

  Matrix x = points;
  Vector means(2, 0.0), scales(2, 1.0);
  if (options.standardize) {
    for (std::size_t c = 0; c < 2; ++c) {
      const Vector col = points.column(c);
      means[c] = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
      double ss = 0.0;
      for (double v : col) ss += (v - means[c]) * (v - means[c]);
      const double sd = col.size() > 1 ? std::sqrt(ss / static_cast<double>(col.size() - 1)) : 0.0;
      scales[c] = sd > 0.0 ? sd : 1.0;
      for (std::size_t i = 0; i < x.rows(); ++i) x(i, c) = (x(i, c) - means[c]) / scales[c];
    }
  }

  Vector theta;
  SvmFit fit = solve(x, labels, options.box_constraint, theta);
  std::array<double, 2> w{theta[0], theta[1]};
  double b = theta[2];
  if (options.standardize) {
    for (std::size_t c = 0; c < 2; ++c) {
      w[c] /= scales[c];
      b -= w[c] * means[c];
    }
  }
  fit.weights = w;
  fit.bias = b;
  if (w[0] != 0.0 || w[1] != 0.0) fit.boundary = LinearBoundary(options.feature_names, w, b, options.box_constraint);
  return fit;
}

LinearBoundary simplify_axis_parallel(const LinearBoundary& boundary, const Matrix& points,
                                      std::span<const int> labels) {
  if (boundary.axis_threshold()) return boundary;
  if (points.rows() != labels.size()) throw Error(ErrorCode::DimensionMismatch, "one label per point required");
  if (points.rows() > 0 && points.cols() != 2) throw Error(ErrorCode::DimensionMismatch, "2-D points required");

  const auto& w = boundary.weights();
  std::array<double, 2> range{1.0, 1.0}, mean{0.0, 0.0};
  if (points.rows() > 0) {
    for (std::size_t c = 0; c < 2; ++c) {
      const Vector col = points.column(c);
      const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
      range[c] = *hi - *lo;
      mean[c] = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
    }
  }
  const std::size_t axis = std::abs(w[0]) * range[0] >= std::abs(w[1]) * range[1] ? 0 : 1;
  const std::size_t other = 1 - axis;
  const double sign = w[axis] > 0.0 ? 1.0 : -1.0;
  // where the original line crosses the axis at the mean of the other feature
  const double crossing = -(boundary.bias() + w[other] * mean[other]) / w[axis];

  auto make = [&](double threshold) {
    std::array<double, 2> nw{0.0, 0.0};
    nw[axis] = sign;
    return LinearBoundary(boundary.feature_names(), nw, -sign * threshold, boundary.box_constraint());
  };

  std::vector<std::size_t> order(points.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points(a, axis) < points(b, axis); });
  std::vector<double> candidates;
  for (std::size_t r = 1; r < order.size(); ++r) {
    const double lo = points(order[r - 1], axis);
    const double hi = points(order[r], axis);
    if (hi > lo && labels[order[r - 1]] != labels[order[r]]) candidates.push_back(0.5 * (lo + hi));
  }
  if (candidates.empty()) return make(crossing);

  auto errors = [&](double threshold) {
    const LinearBoundary cand = make(threshold);
    std::size_t e = 0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      const double p[2] = {points(i, 0), points(i, 1)};
      if (classify(cand, p) != labels[i]) ++e;
    }
    return e;
  };
  double best = candidates.front();
  std::size_t best_err = errors(best);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const std::size_t e = errors(candidates[i]);
    if (e < best_err || (e == best_err && std::abs(candidates[i] - crossing) < std::abs(best - crossing))) {
      best = candidates[i];
      best_err = e;
    }
  }
  return make(best);
}

}  // namespace svm
}  // namespace sulfex
