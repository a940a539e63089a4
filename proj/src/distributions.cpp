#include "partrec/distributions.hpp"

#include "partrec/error.hpp"
#include "partrec/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace partrec {

Density::Density(std::string name, double upper, Functions fns, std::optional<double> smoothness_bound,
                 bool smoothness_is_estimate, bool continuously_differentiable)
    : name_(std::move(name)),
      upper_(upper),
      fns_(std::make_shared<const Functions>(std::move(fns))),
      smoothness_(smoothness_bound),
      smoothness_estimate_(smoothness_is_estimate),
      c1_(continuously_differentiable) {
  if (!(upper_ > 0.0)) throw Error(ErrorCode::BadParams, "support bound must be positive");
  if (!fns_->pdf) throw Error(ErrorCode::BadParams, "density needs a pdf");
}

double Density::pdf(double x) const {
  if (x < 0.0 || x > upper_) return 0.0;
  return fns_->pdf(x);
}

double Density::pdf_derivative(double x) const {
  if (x < 0.0 || x > upper_) return 0.0;
  if (fns_->pdf_derivative) return fns_->pdf_derivative(x);
  const double h = 1e-6;
  const double lo = std::max(0.0, x - h);
  const double hi = std::min(upper_, x + h);
  return (fns_->pdf(hi) - fns_->pdf(lo)) / (hi - lo);
}

double Density::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (bounded() && x >= upper_) return 1.0;
  if (fns_->cdf) return std::clamp(fns_->cdf(x), 0.0, 1.0);
  const double value = adaptive_simpson([this](double z) { return fns_->pdf(z); }, 0.0, x, 1e-10);
  return std::clamp(value, 0.0, 1.0);
}

double Density::inverse_cdf(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::BadParams, "inverse_cdf needs u in (0, 1)");
  if (fns_->inverse_cdf) return fns_->inverse_cdf(u);
  return numeric_inverse(u);
}

double Density::numeric_inverse(double u) const {
  double lo = 0.0;
  double hi = bounded() ? upper_ : 1.0;
  if (!bounded()) {
    int guard = 0;
    while (cdf(hi) < u) {
      lo = hi;
      hi *= 2.0;
      if (++guard > 1100) throw Error(ErrorCode::InversionFailure, "could not bracket quantile");
    }
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = cdf(x) - u;
    if (std::abs(fx) <= 1e-14) return x;
    if (fx < 0.0) lo = x; else hi = x;
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(x))) break;
    const double d = pdf(x);
    double next = (d > 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  if (std::abs(cdf(x) - u) > 1e-10) {
    std::ostringstream os;
    os << "no quantile within 1e-10 for u=" << u << " in " << name_;
    throw Error(ErrorCode::InversionFailure, os.str());
  }
  return x;
}

Rational Density::pdf_exact(const Rational& x) const {
  if (!has_exact()) throw Error(ErrorCode::BadParams, name_ + " has no exact evaluation");
  if (x < 0 || (bounded() && x > from_double(upper_))) return 0;
  return fns_->pdf_exact(x);
}

Rational Density::cdf_exact(const Rational& x) const {
  if (!has_exact()) throw Error(ErrorCode::BadParams, name_ + " has no exact evaluation");
  if (x <= 0) return 0;
  if (bounded() && x >= from_double(upper_)) return 1;
  return fns_->cdf_exact(x);
}

// ---------------------------------------------------------------------------
// Built-in families

namespace {

template <typename T>
T ipow(T base, int k) {
  T out = 1;
  for (int i = 0; i < k; ++i) out *= base;
  return out;
}

Density make_uniform() {
  Density::Functions fns;
  fns.pdf = [](double) { return 1.0; };
  fns.pdf_derivative = [](double) { return 0.0; };
  fns.cdf = [](double x) { return x; };
  fns.inverse_cdf = [](double u) { return u; };
  fns.pdf_exact = [](const Rational&) { return Rational(1); };
  fns.cdf_exact = [](const Rational& x) { return x; };
  return Density("uniform01", 1.0, std::move(fns), 1.0, false, true);
}

Density make_power(double kd) {
  if (!(kd >= 1.0) || std::floor(kd) != kd || kd > 64) {
    throw Error(ErrorCode::BadParams, "power(k) needs an integer 1 <= k <= 64");
  }
  const int k = static_cast<int>(kd);
  Density::Functions fns;
  fns.pdf = [k](double x) { return k * ipow(x, k - 1); };
  fns.pdf_derivative = [k](double x) { return k > 1 ? double(k) * (k - 1) * ipow(x, k - 2) : 0.0; };
  fns.cdf = [k](double x) { return ipow(x, k); };
  fns.inverse_cdf = [k](double u) { return std::pow(u, 1.0 / k); };
  fns.pdf_exact = [k](const Rational& x) { return Rational(k) * ipow(x, k - 1); };
  fns.cdf_exact = [k](const Rational& x) { return ipow(x, k); };
  const double bound = std::max<double>(k, double(k) * (k - 1));
  return Density("power(" + std::to_string(k) + ")", 1.0, std::move(fns), bound, false, true);
}

Density make_smoothstep() {
  Density::Functions fns;
  fns.pdf = [](double x) { return 6.0 * x * (1.0 - x); };
  fns.pdf_derivative = [](double x) { return 6.0 - 12.0 * x; };
  fns.cdf = [](double x) { return x * x * (3.0 - 2.0 * x); };
  fns.inverse_cdf = [](double u) {
    return 0.5 - std::sin(std::asin(1.0 - 2.0 * u) / 3.0);
  };
  fns.pdf_exact = [](const Rational& x) { return 6 * x * (1 - x); };
  fns.cdf_exact = [](const Rational& x) { return x * x * (3 - 2 * x); };
  return Density("smoothstep", 1.0, std::move(fns), 6.0, false, true);
}

Density make_triangular(double c) {
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::BadParams, "triangular(c) needs c in [0, 1]");
  const Rational cr = from_double(c);
  // Rising branch; at c = 1 it covers the closed interval.
  auto rising = [c](double x) { return x < c || c >= 1.0; };
  Density::Functions fns;
  fns.pdf = [c, rising](double x) { return rising(x) ? 2.0 * x / c : 2.0 * (1.0 - x) / (1.0 - c); };
  fns.pdf_derivative = [c, rising](double x) { return rising(x) ? 2.0 / c : -2.0 / (1.0 - c); };
  fns.cdf = [c, rising](double x) {
    return rising(x) ? x * x / c : 1.0 - (1.0 - x) * (1.0 - x) / (1.0 - c);
  };
  fns.inverse_cdf = [c](double u) {
    return u < c ? std::sqrt(u * c) : 1.0 - std::sqrt((1.0 - u) * (1.0 - c));
  };
  fns.pdf_exact = [cr](const Rational& x) -> Rational {
    return (x < cr || cr == 1) ? Rational(2 * x / cr) : Rational(2 * (1 - x) / (1 - cr));
  };
  fns.cdf_exact = [cr](const Rational& x) -> Rational {
    return (x < cr || cr == 1) ? Rational(x * x / cr) : Rational(1 - (1 - x) * (1 - x) / (1 - cr));
  };
  const double bound = std::max({2.0, c > 0 ? 2.0 / c : 0.0, c < 1 ? 2.0 / (1.0 - c) : 0.0});
  std::ostringstream name;
  name << "triangular(" << c << ")";
  return Density(name.str(), 1.0, std::move(fns), bound, false, false);
}

Density make_truncated_ramp(double b) {
  if (!(b > 0.0 && b <= 1.0)) throw Error(ErrorCode::BadParams, "truncated_ramp(b) needs b in (0, 1]");
  const double z = b - 0.5 * b * b;
  const Rational br = from_double(b);
  const Rational zr = br - br * br / 2;
  Density::Functions fns;
  fns.pdf = [b, z](double x) { return std::min(x, b) / z; };
  fns.pdf_derivative = [b, z](double x) { return x < b ? 1.0 / z : 0.0; };
  fns.cdf = [b, z](double x) { return x < b ? 0.5 * x * x / z : (0.5 * b * b + b * (x - b)) / z; };
  fns.inverse_cdf = [b, z](double u) {
    const double knee = 0.5 * b * b / z;
    return u < knee ? std::sqrt(2.0 * z * u) : (u * z - 0.5 * b * b) / b + b;
  };
  fns.pdf_exact = [br, zr](const Rational& x) -> Rational { return (x < br ? x : br) / zr; };
  fns.cdf_exact = [br, zr](const Rational& x) -> Rational {
    return x < br ? Rational(x * x / (2 * zr)) : Rational((br * br / 2 + br * (x - br)) / zr);
  };
  std::ostringstream name;
  name << "truncated_ramp(" << b << ")";
  return Density(name.str(), 1.0, std::move(fns), std::max(b, 1.0) / z, false, false);
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"uniform01", "power", "smoothstep", "triangular", "truncated_ramp"};
}

Density builtin(std::string_view name, std::span<const double> params) {
  auto want = [&](std::size_t max_count) {
    if (params.size() > max_count) {
      throw Error(ErrorCode::BadParams, std::string(name) + " takes at most " +
                                            std::to_string(max_count) + " parameter(s)");
    }
  };
  if (name == "uniform01") {
    want(0);
    return make_uniform();
  }
  if (name == "power") {
    if (params.size() != 1) throw Error(ErrorCode::BadParams, "power needs exactly one parameter k");
    return make_power(params[0]);
  }
  if (name == "smoothstep") {
    want(0);
    return make_smoothstep();
  }
  if (name == "triangular") {
    want(1);
    return make_triangular(params.empty() ? 0.5 : params[0]);
  }
  if (name == "truncated_ramp") {
    want(1);
    return make_truncated_ramp(params.empty() ? 0.5 : params[0]);
  }
  throw Error(ErrorCode::UnknownFamily, "unknown density family '" + std::string(name) + "'");
}

Density builtin_from_spec(std::string_view spec) {
  const auto open = spec.find('(');
  if (open == std::string_view::npos) return builtin(spec);
  if (spec.back() != ')') throw Error(ErrorCode::BadParams, "malformed density '" + std::string(spec) + "'");
  const std::string_view name = spec.substr(0, open);
  std::string inner(spec.substr(open + 1, spec.size() - open - 2));
  std::vector<double> params;
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      params.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::BadParams, "bad parameter '" + item + "' in '" + std::string(spec) + "'");
    }
  }
  return builtin(name, params);
}

// ---------------------------------------------------------------------------
// Tabulated densities

Density tabulated(std::vector<double> xs, std::vector<double> fs, std::string name) {
  if (xs.size() < 2 || xs.size() != fs.size()) {
    throw Error(ErrorCode::BadParams, "tabulated density needs >= 2 matching (x, f) rows");
  }
  if (xs.front() != 0.0) throw Error(ErrorCode::BadParams, "tabulated density must start at x = 0");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(fs[i]) || fs[i] < 0.0) {
      throw Error(ErrorCode::BadParams, "tabulated values must be finite with f >= 0");
    }
    if (i > 0 && !(xs[i] > xs[i - 1])) throw Error(ErrorCode::BadParams, "x must be strictly increasing");
  }
  std::vector<double> cum(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    cum[i] = cum[i - 1] + 0.5 * (fs[i] + fs[i - 1]) * (xs[i] - xs[i - 1]);
  }
  const double total = cum.back();
  if (!(total > 0.0)) throw Error(ErrorCode::BadParams, "tabulated density has zero mass");
  std::vector<double> slopes(fs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cum[i] /= total;
    slopes[i] = fs[i] / total;
  }
  cum.back() = 1.0;
  const double upper = xs.back();
  auto interp = std::make_shared<const MonotoneCubic>(xs, cum, slopes);

  // |f| and |f'| maxima on a fine grid; an estimate, not a certified bound.
  double bound = 0.0;
  const int probes = 64 * static_cast<int>(xs.size());
  for (int i = 0; i <= probes; ++i) {
    const double x = upper * i / probes;
    bound = std::max({bound, std::abs(interp->derivative(x)), std::abs(interp->second_derivative(x))});
  }

  Density::Functions fns;
  fns.pdf = [interp](double x) { return std::max(0.0, interp->derivative(x)); };
  fns.pdf_derivative = [interp](double x) { return interp->second_derivative(x); };
  fns.cdf = [interp](double x) { return (*interp)(x); };
  return Density(std::move(name), upper, std::move(fns), bound, true, false);
}

std::vector<double> sample(const Density& density, RngStream& stream, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(density.inverse_cdf(stream.uniform()));
  return out;
}

}  // namespace partrec
