#include "sulfex/regression.hpp"

#include <cmath>
#include <limits>

namespace sulfex {
namespace ols {

OLSFit fit(const Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n)
    throw Error(ErrorCode::DimensionMismatch,
                "response has " + std::to_string(y.size()) + " values for " + std::to_string(n) + " rows");
  if (n <= p)
    throw Error(ErrorCode::TooFewRows,
                std::to_string(n) + " observations for " + std::to_string(p) + " coefficients");
  if (!x.all_finite() || !num::all_finite(y)) throw Error(ErrorCode::NonFiniteValue, "OLS input not finite");

  const Matrix xtx = num::gram(x);
  const Vector xty = num::transpose_matvec(x, y);

  // Equilibrate so that the pivot test in solve_symmetric sees unit diagonals.
  Vector d(p);
  for (std::size_t j = 0; j < p; ++j) {
    if (!(xtx(j, j) > 0.0)) throw Error(ErrorCode::RankDeficient, "regressor column " + std::to_string(j) + " is zero");
    d[j] = 1.0 / std::sqrt(xtx(j, j));
  }
  Matrix a(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) a(i, j) = d[i] * xtx(i, j) * d[j];

  auto solve_scaled = [&](const Vector& rhs) {
    Vector scaled(p);
    for (std::size_t j = 0; j < p; ++j) scaled[j] = d[j] * rhs[j];
    try {
      Vector z = num::solve_symmetric(a, scaled);
      for (std::size_t j = 0; j < p; ++j) z[j] *= d[j];
      return z;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SingularMatrix)
        throw Error(ErrorCode::RankDeficient, "XᵀX numerically singular (" + e.detail() + ")");
      throw;
    }
  };

  OLSFit out;
  out.n_observations = n;
  out.coefficients = solve_scaled(xty);
  for (int step = 0; step < 2; ++step) {
    Vector r(y.begin(), y.end());
    const Vector fitted = num::matvec(x, out.coefficients);
    for (std::size_t i = 0; i < n; ++i) r[i] -= fitted[i];
    const Vector delta = solve_scaled(num::transpose_matvec(x, r));
    for (std::size_t j = 0; j < p; ++j) out.coefficients[j] += delta[j];
  }

  const Vector fitted = num::matvec(x, out.coefficients);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double rss = 0.0, tss = 0.0, ess = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rss += (y[i] - fitted[i]) * (y[i] - fitted[i]);
    tss += (y[i] - mean) * (y[i] - mean);
    ess += (fitted[i] - mean) * (fitted[i] - mean);
    yy += y[i] * y[i];
  }
  if (tss == 0.0) {
    if (rss > 1e-24 * (1.0 + yy)) throw Error(ErrorCode::ConstantResponse, "constant response not reproduced by model");
    out.r_squared = 1.0;
  } else {
    out.r_squared = ess / tss;
  }
  const double s2 = rss / static_cast<double>(n - p);
  out.residual_std = std::sqrt(s2);

  out.t_statistics.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    Vector e(p, 0.0);
    e[j] = 1.0;
    const double inv_jj = solve_scaled(e)[j];
    const double se = std::sqrt(s2 * inv_jj);
    out.t_statistics[j] = out.coefficients[j] / se;
  }
  return out;
}

Vector predict(const OLSFit& fit, const Matrix& x) {
  if (x.rows() == 0) return {};
  if (x.cols() != fit.coefficients.size())
    throw Error(ErrorCode::DimensionMismatch, "model has " + std::to_string(fit.coefficients.size()) +
                                                  " coefficients, input " + std::to_string(x.cols()) + " columns");
  return num::matvec(x, fit.coefficients);
}

}  // namespace ols

std::string_view to_string(ModelForm f) { return f == ModelForm::Linear ? "linear" : "log-linear"; }

std::optional<ModelForm> parse_model_form(std::string_view text) {
  if (text == "linear") return ModelForm::Linear;
  if (text == "log-linear") return ModelForm::LogLinear;
  return std::nullopt;
}

std::string Term::name() const {
  switch (kind) {
    case Kind::VarTime: return std::string(symbol(var)) + "*T";
    case Kind::Time: return "T";
    case Kind::Constant: return "1";
  }
  return "?";
}

std::optional<Term> Term::parse(std::string_view text) {
  if (text == "T") return time();
  if (text == "1") return constant();
  if (text.size() > 2 && text.substr(text.size() - 2) == "*T")
    if (auto v = parse_mix_var(text.substr(0, text.size() - 2))) return var_time(*v);
  return std::nullopt;
}

std::vector<Term> default_terms(GroupLabel g) {
  switch (g) {
    case GroupLabel::ML: return {Term::var_time(MixVar::WC), Term::var_time(MixVar::C3A), Term::constant()};
    case GroupLabel::LL: return {Term::var_time(MixVar::WC), Term::constant()};
    case GroupLabel::HN: return {Term::var_time(MixVar::CC), Term::time(), Term::constant()};
  }
  return {};
}

double term_value(const Term& term, const Mixture& mix, double t) {
  switch (term.kind) {
    case Term::Kind::VarTime: return mix.require(term.var) * t;
    case Term::Kind::Time: return t;
    case Term::Kind::Constant: return 1.0;
  }
  return 0.0;
}

AffineResponse affine_response(const GroupModel& model, const Mixture& mix) {
  if (model.terms.size() != model.coefficients.size())
    throw Error(ErrorCode::DimensionMismatch, "group model has mismatched terms and coefficients");
  AffineResponse r;
  for (std::size_t j = 0; j < model.terms.size(); ++j) {
    const Term& term = model.terms[j];
    const double c = model.coefficients[j];
    switch (term.kind) {
      case Term::Kind::VarTime: r.rate += c * mix.require(term.var); break;
      case Term::Kind::Time: r.rate += c; break;
      case Term::Kind::Constant: r.intercept += c; break;
    }
  }
  return r;
}

PooledDesign pooled_design(std::span<const MixtureRecord> records, std::span<const Term> terms, ModelForm form) {
  PooledDesign out;
  std::size_t rows = 0;
  for (const auto& rec : records) rows += rec.series.size();
  std::vector<double> entries;
  entries.reserve(rows * terms.size());
  for (const auto& rec : records) {
    for (const Sample& s : rec.series.samples) {
      double response = s.exp;
      if (form == ModelForm::LogLinear) {
        if (!(s.exp > 0.0)) {
          ++out.dropped_nonpositive;
          continue;
        }
        response = std::log(s.exp);
      }
      for (const Term& term : terms) entries.push_back(term_value(term, rec.mixture, s.t));
      out.y.push_back(response);
    }
  }
  out.x = Matrix(out.y.size(), terms.size(), std::move(entries));
  return out;
}

GroupFit fit_group_model(std::span<const MixtureRecord> records, GroupLabel group, std::span<const Term> terms,
                         ModelForm form) {
  if (records.size() < 2)
    throw Error(ErrorCode::EmptyGroup, "group " + std::string(to_string(group)) + " has " +
                                           std::to_string(records.size()) + " mixtures; at least 2 needed");
  PooledDesign design = pooled_design(records, terms, form);
  GroupFit out;
  out.dropped_nonpositive = design.dropped_nonpositive;
  OLSFit f = ols::fit(design.x, design.y);
  out.model.group = group;
  out.model.form = form;
  out.model.terms.assign(terms.begin(), terms.end());
  out.model.coefficients = f.coefficients;
  out.model.fit = std::move(f);
  return out;
}

}  // namespace sulfex
