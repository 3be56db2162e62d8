#ifndef SUITA_SQUEEZING_SQUEEZE_HPP
#define SUITA_SQUEEZING_SQUEEZE_HPP

#include "suita/bergman/annulus_series.hpp"
#include "suita/bergman/suita.hpp"
#include "suita/report.hpp"
#include "suita/squeezing/moebius.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <vector>

namespace suita {

/// Lower bound for the squeezing function of A(r, 1) at p: the largest disc
/// about 0 inside normalizer(p)(A), i.e. |c'| - rho' for the image c', rho' of
/// the inner circle.
inline double squeeze_lower(double r, Complex p) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::Parameter, "annulus needs 0 < r < 1");
  if (!(std::abs(p) > r && std::abs(p) < 1.0)) throw Error(ErrorKind::Parameter, "p must lie in the annulus");
  const Circle hole = image_circle(normalizer(p), {{0.0, 0.0}, r});
  const double gap = std::abs(hole.center) - hole.radius;
  if (!(gap > 0.0)) throw Error(ErrorKind::Geometry, "origin lies in the image of the hole");
  return std::min(gap, 1.0);
}

/// s_low for any supported domain: 1 on a disc (the normalized identity).
inline double squeeze_lower(const PlanarDomain& domain, Complex p) {
  if (domain.is_disc()) {
    if (!domain.contains(p)) throw Error(ErrorKind::Parameter, "p must lie in the disc");
    return 1.0;
  }
  if (domain.is_annulus()) return squeeze_lower(domain.as_annulus().r_inner, p);
  throw Error(ErrorKind::Parameter, "squeezing bound needs a disc or an annulus");
}

/// s_low^2 <= C(Omega, p) <= 1.
inline ReportRecord sandwich_check(const PlanarDomain& domain, Complex p, const SuitaOptions& options = SuitaOptions()) {
  ReportRecord rec;
  rec.command = "squeeze-check";
  rec.input_id = domain.describe() + "@" + point_id(p);
  rec.inputs = {{"domain", domain.describe()}, {"p", {p.real(), p.imag()}}};
  try {
    const double s = squeeze_lower(domain, p);
    const auto c = suita_ratio(domain, p, options);
    rec.add("s_low", s, "squeezing.squeeze_lower");
    rec.add("s_low_sq", s * s, "squeezing.squeeze_lower");
    rec.add("suita_ratio", c.ratio, "bergman.suita_ratio");
    rec.decide(std::min(c.ratio - s * s, 1.0 - c.ratio), options.tol.sandwich_tol);
  } catch (const Error& e) {
    rec.fail_with(e.what());
  }
  return rec;
}

struct TrendPoint {
  double distance = 0.0;     // 1 - |p|
  double ratio = 0.0;        // C from the double-precision pipeline
  double deficit = 0.0;      // 1 - C from the 50-digit series
  double series_ratio = 0.0;
};

/// C(A(r, 1), p) along |p| = 1 - 10^{-k}. The deficits fall below double
/// precision for k >= 3, so monotonicity is decided on the 50-digit series;
/// the pipeline value is recorded and required to agree within ratio_tol.
inline ReportRecord boundary_trend(double r, int kmax, std::vector<TrendPoint>* points = nullptr,
                                   const SuitaOptions& options = SuitaOptions()) {
  using F50 = boost::multiprecision::cpp_bin_float_50;
  ReportRecord rec;
  rec.command = "squeeze-check";
  rec.input_id = "trend:annulus:" + std::to_string(r);
  rec.inputs = {{"r", r}, {"kmax", kmax}};
  try {
    if (kmax < 2) throw Error(ErrorKind::Parameter, "trend needs at least two points");
    const auto domain = PlanarDomain::annulus(r);
    F50 previous = 2;
    double worst_step = std::numeric_limits<double>::infinity();
    double worst_agreement = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      const F50 s = 1 - pow(F50(10), -k);
      const auto series = annulus_suita_series<F50>(F50(r), s);
      const double sd = static_cast<double>(s);
      const auto pipe = suita_ratio(domain, sd, options);
      TrendPoint tp{std::pow(10.0, -k), pipe.ratio, static_cast<double>(series.deficit),
                    static_cast<double>(series.ratio)};
      if (points) points->push_back(tp);
      const std::string tag = "k=" + std::to_string(k);
      rec.add("ratio_" + tag, tp.ratio, "bergman.suita_ratio");
      rec.add("deficit_" + tag, tp.deficit, "bergman.annulus_suita_series");
      // Relative decrease of the deficit; must be positive.
      if (k > 1) worst_step = std::min(worst_step, static_cast<double>((previous - series.deficit) / previous));
      if (!(series.deficit > 0)) worst_step = -1.0;
      previous = series.deficit;
      worst_agreement = std::max(worst_agreement, std::abs(pipe.ratio - tp.series_ratio));
    }
    rec.add("min_relative_deficit_drop", worst_step, "squeezing.boundary_trend");
    rec.add("max_pipeline_series_gap", worst_agreement, "squeezing.boundary_trend");
    double margin = worst_step;
    if (worst_agreement > options.tol.ratio_tol) margin = -worst_agreement;
    rec.decide(margin, 0.0);
  } catch (const Error& e) {
    rec.fail_with(e.what());
  }
  return rec;
}

/// Eight sample points on A(r, 1): |p_k| = r^{(8-k)/9}, arg p_k = 2 pi k / 8.
inline std::vector<Complex> annulus_sample_points(double r, int count = 8) {
  std::vector<Complex> pts;
  for (int k = 0; k < count; ++k) {
    const double s = std::pow(r, static_cast<double>(count - k) / (count + 1));
    pts.push_back(std::polar(s, kTwoPi * k / count));
  }
  return pts;
}

}  // namespace suita

#endif  // SUITA_SQUEEZING_SQUEEZE_HPP
