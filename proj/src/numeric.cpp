#include "partrec/numeric.hpp"

#include "partrec/error.hpp"

#include <algorithm>
#include <cmath>

namespace partrec {

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    comp_ += (sum_ - t) + v;
  } else {
    comp_ += (v - t) + sum_;
  }
  sum_ = t;
}

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys,
                             std::vector<double> slopes)
    : xs_(std::move(xs)), ys_(std::move(ys)), slopes_(std::move(slopes)) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n || (!slopes_.empty() && slopes_.size() != n)) {
    throw Error(ErrorCode::BadParams, "monotone cubic needs >= 2 matching nodes");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xs_[i] > xs_[i - 1])) throw Error(ErrorCode::BadParams, "nodes must be strictly increasing");
  }
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);

  if (slopes_.empty()) {
    slopes_.resize(n);
    slopes_[0] = secant[0];
    slopes_[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      slopes_[i] = (secant[i - 1] * secant[i] <= 0.0) ? 0.0 : 0.5 * (secant[i - 1] + secant[i]);
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (secant[i] == 0.0) {
      slopes_[i] = 0.0;
      slopes_[i + 1] = 0.0;
      continue;
    }
    const double a = slopes_[i] / secant[i];
    const double b = slopes_[i + 1] / secant[i];
    if (a < 0.0) slopes_[i] = 0.0;
    if (b < 0.0) slopes_[i + 1] = 0.0;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      slopes_[i] = tau * a * secant[i];
      slopes_[i + 1] = tau * b * secant[i];
    }
  }
}

std::size_t MonotoneCubic::segment(double x) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
  return std::min(i, xs_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  const std::size_t i = segment(x);
  const double h = xs_[i + 1] - xs_[i];
  const double s = (x - xs_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * ys_[i] + (s3 - 2 * s2 + s) * h * slopes_[i] +
         (-2 * s3 + 3 * s2) * ys_[i + 1] + (s3 - s2) * h * slopes_[i + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x < xs_.front() || x > xs_.back()) return 0.0;
  const std::size_t i = segment(x);
  const double h = xs_[i + 1] - xs_[i];
  const double s = (x - xs_[i]) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * ys_[i] + (-6 * s2 + 6 * s) * ys_[i + 1]) / h +
         (3 * s2 - 4 * s + 1) * slopes_[i] + (3 * s2 - 2 * s) * slopes_[i + 1];
}

double MonotoneCubic::second_derivative(double x) const {
  if (x < xs_.front() || x > xs_.back()) return 0.0;
  const std::size_t i = segment(x);
  const double h = xs_[i + 1] - xs_[i];
  const double s = (x - xs_[i]) / h;
  return ((12 * s - 6) * ys_[i] + (-12 * s + 6) * ys_[i + 1]) / (h * h) +
         ((6 * s - 4) * slopes_[i] + (6 * s - 2) * slopes_[i + 1]) / h;
}

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  bool failed = false;
};

double simpson_step(SimpsonState& st, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.f(lm), frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    st.failed = true;
    return left + right + delta / 15.0;
  }
  return simpson_step(st, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(st, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, tol, max_depth);
  SimpsonState st{f};
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  // One forced split guards against a lucky first estimate on symmetric integrands.
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double value = simpson_step(st, a, fa, m, fm, lm, flm, left, 0.5 * tol, max_depth) +
                       simpson_step(st, m, fm, b, fb, rm, frm, right, 0.5 * tol, max_depth);
  if (st.failed || !std::isfinite(value)) {
    throw Error(ErrorCode::QuadratureFailure, "adaptive Simpson did not reach tolerance");
  }
  return value;
}

}  // namespace partrec
