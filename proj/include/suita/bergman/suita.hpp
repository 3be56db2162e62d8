#ifndef SUITA_BERGMAN_SUITA_HPP
#define SUITA_BERGMAN_SUITA_HPP

#include "suita/bergman/kernel.hpp"
#include "suita/domains/green.hpp"
#include "suita/report.hpp"

#include <sstream>

namespace suita {

struct SuitaOptions {
  Tolerances tol{};
  int annulus_modes = 64;
  int quad_points = 256;
  std::optional<BasisRange> range;
  GramOptions gram{};
};

/// Robin constant H(z, z) with the annulus mode count doubled until the tail
/// bound is met.
inline double robin_for(const PlanarDomain& domain, Complex z, const SuitaOptions& options) {
  GreenEvaluator::Options g;
  g.annulus_modes = options.annulus_modes;
  g.quad_points = options.quad_points;
  g.tol = options.tol;
  for (int attempt = 0;; ++attempt) {
    try {
      return robin_constant(GreenEvaluator(domain, g), z).value;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonConvergence || attempt >= 6 || !domain.is_annulus()) throw;
      g.annulus_modes *= 2;
    }
  }
}

struct SuitaResult {
  double ratio = 0.0;
  double capacity = 0.0;
  KernelEstimate kernel;
  bool violation = false;
};

/// C(Omega, z) = c(z)^2 / (pi K(z, z)) with ||f||^2 = int |f|^2 dlambda.
/// Ratios above 1 + ratio_tol are flagged, never clipped.
inline SuitaResult suita_ratio(const PlanarDomain& domain, Complex z, const SuitaOptions& options = SuitaOptions()) {
  SuitaResult r;
  r.capacity = std::exp(robin_for(domain, z, options));
  KernelOptions k;
  k.range = options.range;
  k.tol = options.tol;
  k.gram = options.gram;
  r.kernel = kernel_diag(domain, WeightSpec(), z, k);
  r.ratio = r.capacity * r.capacity / (kPi * r.kernel.value);
  r.violation = r.ratio > 1.0 + options.tol.ratio_tol;
  return r;
}

/// Disc closed forms: c = 1 / (1 - |z|^2), K = 1 / (pi (1 - |z|^2)^2).
inline double suita_ratio_disc_closed_form(Complex z) {
  const double s = 1.0 - std::norm(z);
  const double c = 1.0 / s;
  const double k = 1.0 / (kPi * s * s);
  return c * c / (kPi * k);
}

inline std::string point_id(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << z.real() << "," << z.imag() << ")";
  return os.str();
}

inline ReportRecord suita_record(const PlanarDomain& domain, Complex z, const SuitaOptions& options = SuitaOptions()) {
  ReportRecord rec;
  rec.command = "suita-check";
  rec.input_id = domain.describe() + "@" + point_id(z);
  rec.inputs = {{"domain", domain.describe()}, {"z", {z.real(), z.imag()}}};
  try {
    const auto r = suita_ratio(domain, z, options);
    rec.add("capacity", r.capacity, "domains.capacity");
    rec.add("kernel", r.kernel.value, "bergman.kernel_diag");
    rec.add("ratio", r.ratio, "bergman.suita_ratio");
    rec.add("gram_condition", r.kernel.gram_condition, "bergman.kernel_diag");
    rec.add("truncation_error_estimate", r.kernel.truncation_error_estimate, "bergman.kernel_diag");
    if (r.kernel.ill_conditioned) rec.warnings.push_back("ill-conditioned Gram");
    rec.decide(1.0 - r.ratio, options.tol.ratio_tol);
  } catch (const Error& e) {
    rec.fail_with(e.what());
  }
  return rec;
}

/// Extended Suita check c(z)^2 <= pi rho(z) K_rho(z, z) for a harmonic weight
/// rho = e^{-2h}.
inline ReportRecord extended_suita_check(const PlanarDomain& domain, const WeightSpec& weight, Complex z,
                                         const SuitaOptions& options = SuitaOptions()) {
  ReportRecord rec;
  rec.command = "extended-suita-check";
  rec.input_id = domain.describe() + "|" + weight.describe() + "@" + point_id(z);
  rec.inputs = {{"domain", domain.describe()}, {"weight", weight.describe()}, {"z", {z.real(), z.imag()}}};
  try {
    if (!weight.is_harmonic()) throw Error(ErrorKind::Parameter, "extended Suita check needs a harmonic weight");
    if (weight.singular_at_origin() && domain.contains({0.0, 0.0})) {
      throw Error(ErrorKind::Parameter, "log-harmonic weight is singular inside the domain");
    }
    const double c = std::exp(robin_for(domain, z, options));
    KernelOptions k;
    k.range = options.range;
    k.tol = options.tol;
    k.gram = options.gram;
    const auto kernel = kernel_diag(domain, weight, z, k);
    const double rho = weight.density(z);
    const double lhs = kPi * rho * kernel.value;
    rec.add("capacity_sq", c * c, "domains.capacity");
    rec.add("rho", rho, "bergman.WeightSpec");
    rec.add("kernel", kernel.value, "bergman.kernel_diag");
    rec.add("pi_rho_kernel", lhs, "bergman.extended_suita_check");
    rec.add("gram_condition", kernel.gram_condition, "bergman.kernel_diag");
    if (kernel.ill_conditioned) rec.warnings.push_back("ill-conditioned Gram");
    rec.decide(lhs - c * c, options.tol.margin_tol);
  } catch (const Error& e) {
    rec.fail_with(e.what());
  }
  return rec;
}

}  // namespace suita

#endif  // SUITA_BERGMAN_SUITA_HPP
