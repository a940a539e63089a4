#pragma once

#include "partrec/rational.hpp"
#include "partrec/rng.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace partrec {

/// A continuous density on [0, M] (or [0, inf)) with its CDF, derivative and
/// inverse CDF. Families with polynomial pieces also expose exact rational
/// evaluation, which the discrete model uses to stay in exact arithmetic.
///
/// Immutable and cheap to copy.
class Density {
 public:
  struct Functions {
    std::function<double(double)> pdf;
    /// Optional; falls back to adaptive quadrature of pdf.
    std::function<double(double)> cdf;
    /// Optional f'; falls back to a central difference.
    std::function<double(double)> pdf_derivative;
    /// Optional; falls back to safeguarded Newton on cdf.
    std::function<double(double)> inverse_cdf;
    std::function<Rational(const Rational&)> pdf_exact;
    std::function<Rational(const Rational&)> cdf_exact;
  };

  static constexpr double unbounded = std::numeric_limits<double>::infinity();

  /// `upper` is M, or Density::unbounded. `smoothness_bound` is C with
  /// max(|f|, |f'|) <= C on the support, flagged approximate when estimated.
  Density(std::string name, double upper, Functions fns, std::optional<double> smoothness_bound,
          bool smoothness_is_estimate, bool continuously_differentiable);

  const std::string& name() const { return name_; }
  double upper() const { return upper_; }
  bool bounded() const { return upper_ < unbounded; }

  double pdf(double x) const;
  double pdf_derivative(double x) const;
  double cdf(double x) const;
  /// u in (0, 1). Throws Error(InversionFailure) when numeric inversion does
  /// not reach |F(x) - u| <= 1e-10.
  double inverse_cdf(double u) const;

  bool has_exact() const { return static_cast<bool>(fns_->pdf_exact) && static_cast<bool>(fns_->cdf_exact); }
  Rational pdf_exact(const Rational& x) const;
  Rational cdf_exact(const Rational& x) const;

  const std::optional<double>& smoothness_bound() const { return smoothness_; }
  bool smoothness_is_estimate() const { return smoothness_estimate_; }
  bool continuously_differentiable() const { return c1_; }

 private:
  double numeric_inverse(double u) const;

  std::string name_;
  double upper_;
  std::shared_ptr<const Functions> fns_;
  std::optional<double> smoothness_;
  bool smoothness_estimate_;
  bool c1_;
};

/// Built-in families, all on [0, 1]:
///   uniform01
///   power(k)             f = k x^(k-1), integer k >= 1
///   smoothstep           f = 6 x (1 - x)
///   triangular(c)        mode c in [0, 1], default 0.5
///   truncated_ramp(b)    f proportional to min(x, b), b in (0, 1], default 0.5
/// Throws Error(UnknownFamily) or Error(BadParams).
Density builtin(std::string_view name, std::span<const double> params = {});

/// Parses "name" or "name(p1,p2,...)", e.g. "power(2)".
Density builtin_from_spec(std::string_view spec);

std::vector<std::string> builtin_names();

/// Density from tabulated (x, f(x)) with x strictly increasing from 0 to M.
/// The CDF is a monotone cubic Hermite through the trapezoid integrals with
/// slopes f(x_i); it is renormalized to end at 1. The smoothness bound is a
/// finite-difference estimate.
Density tabulated(std::vector<double> xs, std::vector<double> fs, std::string name = "tabulated");

/// i.i.d. draws by inverse-CDF transform; deterministic given the stream state.
std::vector<double> sample(const Density& density, RngStream& stream, std::size_t count);

}  // namespace partrec
