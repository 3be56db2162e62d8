#ifndef SUITA_EXTENSION_OPTIMAL_HPP
#define SUITA_EXTENSION_OPTIMAL_HPP

#include "suita/bergman/kernel.hpp"
#include "suita/report.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <sstream>
#include <vector>

namespace suita {

/// int_{|z| < R} density dlambda for a radial weight, by adaptive quadrature
/// of the density itself: in s below the first kink, in log s above it.
inline double radial_mass_quadrature(const WeightSpec& w, double R) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> kinks;
  for (double k : w.radial_kinks()) {
    if (k > 0.0 && k < R) kinks.push_back(k);
  }
  const double first = kinks.empty() ? R : kinks.front();
  const auto inner = [&](double s) { return kTwoPi * s * w.density({s, 0.0}); };
  double total = gauss_kronrod<double, 61>::integrate(inner, 0.0, first, 10, 1e-13);
  kinks.push_back(R);
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
    const auto outer = [&](double x) {
      const double s = std::exp(x);
      return kTwoPi * s * s * w.density({s, 0.0});
    };
    total += gauss_kronrod<double, 61>::integrate(outer, std::log(kinks[i]), std::log(kinks[i + 1]), 10, 1e-13);
  }
  return total;
}

struct OptimalRow {
  double a = 0.0;
  double min_closed = 0.0;  // least-norm value from the Gram pipeline
  double min_quad = 0.0;    // direct radial quadrature of the weight
  double rel_diff = 0.0;
  double ratio = 0.0;       // min / (a^{-2 delta} e^{eps})
};

struct OptimalExperiment {
  double delta = 0.0;
  double eps = 0.0;
  std::vector<OptimalRow> rows;
  double target = 0.0;        // (1 + 1/delta) pi e^{-eps}
  double extrapolated = 0.0;  // Richardson on the two smallest a, exponent 2 delta
  bool monotone = true;       // ratio increases as a decreases
  double larger_disc_min = 0.0;  // min over the disc of radius 2 at the smallest a
  std::vector<ReportRecord> records;
};

/// Ratios min int |F|^2 e^{-phi} / (a^{-2 delta} e^{eps} |F(0)|^2) for the max
/// piece weight along a decreasing a-sequence, cross-checked against direct
/// quadrature, with the extrapolated a -> 0 limit.
inline OptimalExperiment optimal_constant_experiment(double delta, double eps, const std::vector<double>& a_seq,
                                                     double cross_tol = 1e-6, double limit_tol_rel = 0.01) {
  if (!(delta > 0.0) || !(eps >= 0.0)) throw Error(ErrorKind::Parameter, "need delta > 0 and eps >= 0");
  if (a_seq.empty()) throw Error(ErrorKind::Parameter, "empty a sequence");
  OptimalExperiment ex;
  ex.delta = delta;
  ex.eps = eps;
  ex.target = (1.0 + 1.0 / delta) * kPi * std::exp(-eps);
  std::ostringstream id;
  id.precision(6);
  id << "delta=" << delta << ",eps=" << eps;

  for (std::size_t k = 0; k < a_seq.size(); ++k) {
    const double a = a_seq[k];
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::Parameter, "a must lie in (0, 1)");
    if (k > 0 && !(a < a_seq[k - 1])) throw Error(ErrorKind::Parameter, "a sequence must decrease");
    const WeightSpec w(MaxPiece{delta, a});
    OptimalRow row;
    row.a = a;
    row.min_closed = least_norm_extension(PlanarDomain::disc(), w, {0.0, 0.0}, {1.0, 0.0}).min_norm;
    row.min_quad = radial_mass_quadrature(w, 1.0);
    row.rel_diff = std::abs(row.min_closed - row.min_quad) / row.min_quad;
    row.ratio = row.min_closed / (std::exp(-2.0 * delta * std::log(a) + eps));
    if (k > 0 && !(row.ratio >= ex.rows.back().ratio - 1e-9 * row.ratio)) ex.monotone = false;
    ex.rows.push_back(row);

    ReportRecord rec;
    rec.command = "optimal-constant";
    std::ostringstream rid;
    rid.precision(6);
    rid << id.str() << ",a=" << a;
    rec.input_id = rid.str();
    rec.inputs = {{"delta", delta}, {"eps", eps}, {"a", a}};
    rec.add("min_closed_form", row.min_closed, "bergman.least_norm_extension");
    rec.add("min_quadrature", row.min_quad, "extension.radial_mass_quadrature");
    rec.add("ratio", row.ratio, "extension.optimal_constant_experiment");
    rec.decide(-row.rel_diff, cross_tol);
    ex.records.push_back(rec);
  }

  const auto& last = ex.rows.back();
  if (ex.rows.size() >= 2) {
    const auto& prev = ex.rows[ex.rows.size() - 2];
    ex.extrapolated = richardson_power(prev.a, prev.ratio, last.a, last.ratio, 2.0 * delta);
  } else {
    ex.extrapolated = last.ratio;
  }
  // Omega = disc of radius 2 contains the unit disc: its minimum can only be larger.
  ex.larger_disc_min =
      least_norm_extension(PlanarDomain::disc(2.0), WeightSpec(MaxPiece{delta, last.a}), {0.0, 0.0}, {1.0, 0.0})
          .min_norm;

  ReportRecord lim;
  lim.command = "optimal-constant";
  lim.input_id = id.str() + ",limit";
  lim.inputs = {{"delta", delta}, {"eps", eps}, {"a", a_seq}};
  lim.add("target", ex.target, "extension.optimal_constant_experiment");
  lim.add("ratio_at_smallest_a", last.ratio, "extension.optimal_constant_experiment");
  lim.add("extrapolated_limit", ex.extrapolated, "extension.optimal_constant_experiment");
  lim.add("extrapolated_rel_distance", std::abs(ex.extrapolated - ex.target) / ex.target,
          "extension.optimal_constant_experiment");
  lim.add("larger_disc_min_minus_disc_min", ex.larger_disc_min - last.min_closed, "bergman.least_norm_extension");
  if (!ex.monotone) lim.warnings.push_back("ratio is not monotone in a");
  const double rel = std::abs(last.ratio - ex.target) / ex.target;
  double margin = limit_tol_rel - rel;
  if (!ex.monotone || ex.larger_disc_min < last.min_closed) margin = -std::numeric_limits<double>::infinity();
  lim.decide(margin, 0.0);
  ex.records.push_back(lim);
  return ex;
}

}  // namespace suita

#endif  // SUITA_EXTENSION_OPTIMAL_HPP
