#pragma once

#include <string>
#include <vector>

namespace vqsim {

struct ExtrapolationPoint {
  double r = 1.0;
  double x = 0.0;
  double std_error = 0.0;  // 0 when the value is exact
};

struct ExtrapolationFit {
  int order = 1;
  bool weighted = false;
  std::vector<double> coefficients;  // x(r) = c0 + c1 r (+ c2 r^2)
  double intercept = 0.0;
  double std_error = 0.0;
  std::vector<double> residuals;
};

// Least-squares polynomial fit in r, evaluated at r = 0. Weights 1/std_error^2 when
// every point carries a positive std_error, unweighted otherwise.
ExtrapolationFit extrapolate_zero_noise(const std::vector<ExtrapolationPoint>& points, int order);

// [x - (p1 - p0)] / (1 - p0 - p1)
double correct_measurement_bias(double x, double p0, double p1);

std::string extrapolation_report_json(const std::vector<std::string>& labels,
                                      const std::vector<std::vector<ExtrapolationPoint>>& points,
                                      const std::vector<ExtrapolationFit>& fits);

}  // namespace vqsim
