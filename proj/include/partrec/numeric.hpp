#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace partrec {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Piecewise cubic Hermite interpolant that preserves monotonicity of the data
/// (Fritsch-Carlson slope limiting). Optional caller slopes are limited the
/// same way.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys,
                std::vector<double> slopes = {});

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  double front() const { return xs_.front(); }
  double back() const { return xs_.back(); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

 private:
  std::size_t segment(double x) const;

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> slopes_;
};

/// Adaptive Simpson quadrature to absolute tolerance `tol`. Throws
/// Error(QuadratureFailure) if the recursion depth is exhausted before the
/// local error estimate drops below tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 50);

}  // namespace partrec
