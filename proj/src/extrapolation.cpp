#include "vqsim/extrapolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

namespace vqsim {

ExtrapolationFit extrapolate_zero_noise(const std::vector<ExtrapolationPoint>& points, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("extrapolation order must be 1 or 2");
  const auto np = static_cast<Eigen::Index>(order + 1);
  std::vector<double> rs;
  for (const auto& p : points) {
    if (!std::isfinite(p.r) || !std::isfinite(p.x)) throw std::invalid_argument("non-finite extrapolation point");
    if (std::none_of(rs.begin(), rs.end(), [&](double r) { return std::abs(r - p.r) < 1e-12; })) rs.push_back(p.r);
  }
  if (static_cast<Eigen::Index>(points.size()) < np) throw std::invalid_argument("need at least order + 1 points");
  if (static_cast<Eigen::Index>(rs.size()) < np) throw std::invalid_argument("need order + 1 distinct r values");

  const bool weighted = std::all_of(points.begin(), points.end(), [](const auto& p) { return p.std_error > 0.0; });
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(n, np);
  Eigen::VectorXd y(n), w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < np; ++c) a(i, c) = std::pow(p.r, static_cast<double>(c));
    y(i) = p.x;
    w(i) = weighted ? 1.0 / (p.std_error * p.std_error) : 1.0;
  }
  const Eigen::MatrixXd ata = a.transpose() * w.asDiagonal() * a;
  const Eigen::VectorXd aty = a.transpose() * w.asDiagonal() * y;
  const auto ldlt = ata.ldlt();
  const Eigen::VectorXd coef = ldlt.solve(aty);
  const Eigen::MatrixXd cov_unit = ldlt.solve(Eigen::MatrixXd::Identity(np, np));

  ExtrapolationFit fit;
  fit.order = order;
  fit.weighted = weighted;
  fit.coefficients.assign(coef.data(), coef.data() + np);
  fit.intercept = coef(0);
  const Eigen::VectorXd res = y - a * coef;
  fit.residuals.assign(res.data(), res.data() + n);
  if (weighted) {
    fit.std_error = std::sqrt(std::max(0.0, cov_unit(0, 0)));
  } else if (n > np) {
    const double s2 = res.squaredNorm() / static_cast<double>(n - np);
    fit.std_error = std::sqrt(std::max(0.0, s2 * cov_unit(0, 0)));
  }
  return fit;
}

double correct_measurement_bias(double x, double p0, double p1) {
  if (p0 < 0.0 || p1 < 0.0) throw std::invalid_argument("readout error probabilities must be >= 0");
  if (p0 + p1 >= 1.0) throw std::invalid_argument("readout map is not invertible for p0 + p1 >= 1");
  return (x - (p1 - p0)) / (1.0 - p0 - p1);
}

std::string extrapolation_report_json(const std::vector<std::string>& labels,
                                      const std::vector<std::vector<ExtrapolationPoint>>& points,
                                      const std::vector<ExtrapolationFit>& fits) {
  if (labels.size() != points.size() || labels.size() != fits.size()) {
    throw std::invalid_argument("extrapolation report inputs differ in length");
  }
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    nlohmann::json q;
    q["quantity"] = labels[i];
    for (const auto& p : points[i]) {
      q["r"].push_back(p.r);
      q["raw"].push_back(p.x);
      q["raw_stderr"].push_back(p.std_error);
    }
    q["order"] = fits[i].order;
    q["weighted"] = fits[i].weighted;
    q["coefficients"] = fits[i].coefficients;
    q["intercept"] = fits[i].intercept;
    q["intercept_stderr"] = fits[i].std_error;
    q["residuals"] = fits[i].residuals;
    out.push_back(std::move(q));
  }
  return out.dump(2);
}

}  // namespace vqsim
