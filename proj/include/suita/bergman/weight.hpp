#ifndef SUITA_BERGMAN_WEIGHT_HPP
#define SUITA_BERGMAN_WEIGHT_HPP

#include "suita/core.hpp"

#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace suita {

struct Unweighted {};

/// h = alpha log|z|, density |z|^{-2 alpha}.
struct HarmonicLog {
  double alpha = 0.0;
};

/// phi = (1 + delta) max{log|z|^2, log a^2}, density e^{-phi}.
struct MaxPiece {
  double delta = 1.0;
  double a = 0.5;
};

/// h = c Re z, density e^{-2 c Re z}.
struct HarmonicRe {
  double c = 0.0;
};

/// Log-weight entering every L^2 norm: ||f||^2 = int |f|^2 density dlambda.
class WeightSpec {
 public:
  using Variant = std::variant<Unweighted, HarmonicLog, MaxPiece, HarmonicRe>;

  WeightSpec() = default;
  WeightSpec(Unweighted w) : v_(w) {}
  WeightSpec(HarmonicLog w) : v_(w) {}
  WeightSpec(HarmonicRe w) : v_(w) {}
  WeightSpec(MaxPiece w) : v_(w) {
    if (!(w.delta > 0.0)) throw Error(ErrorKind::Parameter, "MaxPiece needs delta > 0");
    if (!(w.a > 0.0 && w.a < 1.0)) throw Error(ErrorKind::Parameter, "MaxPiece needs 0 < a < 1");
  }

  const Variant& variant() const { return v_; }

  bool is_radial() const { return !std::holds_alternative<HarmonicRe>(v_); }

  bool is_harmonic() const { return !std::holds_alternative<MaxPiece>(v_); }

  bool is_unweighted() const { return std::holds_alternative<Unweighted>(v_) && log_factor_ == 0.0; }

  /// Same weight with the density multiplied by lambda > 0.
  WeightSpec scaled(double lambda) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::Parameter, "weight scale must be positive");
    WeightSpec w = *this;
    w.log_factor_ += std::log(lambda);
    return w;
  }

  double log_factor() const { return log_factor_; }

  /// True when the log-weight is singular at the origin.
  bool singular_at_origin() const {
    if (const auto* h = std::get_if<HarmonicLog>(&v_)) return h->alpha != 0.0;
    return false;
  }

  /// log of the density.
  double log_density(Complex z) const {
    return log_factor_ + std::visit(
        [&](const auto& w) -> double {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, Unweighted>) {
            return 0.0;
          } else if constexpr (std::is_same_v<T, HarmonicLog>) {
            return -2.0 * w.alpha * std::log(std::abs(z));
          } else if constexpr (std::is_same_v<T, MaxPiece>) {
            return -(1.0 + w.delta) * std::max(std::log(std::norm(z)), 2.0 * std::log(w.a));
          } else {
            return -2.0 * w.c * z.real();
          }
        },
        v_);
  }

  double density(Complex z) const { return std::exp(log_density(z)); }

  /// Radii where a radial density is not smooth; quadrature panels split there.
  std::vector<double> radial_kinks() const {
    if (const auto* m = std::get_if<MaxPiece>(&v_)) return {m->a};
    return {};
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& w) {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, Unweighted>) {
            os << "unweighted";
          } else if constexpr (std::is_same_v<T, HarmonicLog>) {
            os << "harmonic_log:" << w.alpha;
          } else if constexpr (std::is_same_v<T, MaxPiece>) {
            os << "max_piece:" << w.delta << ":" << w.a;
          } else {
            os << "harmonic_re:" << w.c;
          }
        },
        v_);
    if (log_factor_ != 0.0) os << "*" << std::exp(log_factor_);
    return os.str();
  }

 private:
  Variant v_{Unweighted{}};
  double log_factor_ = 0.0;
};

}  // namespace suita

#endif  // SUITA_BERGMAN_WEIGHT_HPP
