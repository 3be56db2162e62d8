#ifndef SUITA_DOMAINS_PLANAR_DOMAIN_HPP
#define SUITA_DOMAINS_PLANAR_DOMAIN_HPP

#include "suita/core.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace suita {

struct Disc {
  double radius = 1.0;
};

/// r_inner < |z| < 1.
struct Annulus {
  double r_inner = 0.5;
};

struct FourierTerm {
  int index = 0;
  Complex coefficient;
};

/// Smooth Jordan curve zeta(t) = sum_k c_k e^{ikt}, t in [0, 2pi), positively
/// oriented.
class JordanCurve {
 public:
  explicit JordanCurve(std::vector<FourierTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw Error(ErrorKind::Geometry, "Jordan curve needs at least one Fourier term");
    validate();
  }

  Complex point(double t) const { return eval(t, 0); }
  Complex derivative(double t) const { return eval(t, 1); }
  Complex second_derivative(double t) const { return eval(t, 2); }

  const std::vector<FourierTerm>& terms() const { return terms_; }

  int max_frequency() const {
    int k = 0;
    for (const auto& term : terms_) k = std::max(k, std::abs(term.index));
    return k;
  }

  double diameter() const { return diameter_; }

  /// Polygonal sample of the boundary used for geometry queries.
  const std::vector<Complex>& sample() const { return sample_; }

  /// Winding number of the sampled boundary around z.
  bool contains(Complex z) const {
    double angle = 0.0;
    for (std::size_t i = 0; i < sample_.size(); ++i) {
      const Complex a = sample_[i] - z;
      const Complex b = sample_[(i + 1) % sample_.size()] - z;
      angle += std::arg(b / a);
    }
    return std::abs(angle) > kPi;
  }

  double distance_to_boundary(Complex z) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sample_.size(); ++i) {
      best = std::min(best, segment_distance(z, sample_[i], sample_[(i + 1) % sample_.size()]));
    }
    return best;
  }

 private:
  static constexpr int kSample = 1024;

  Complex eval(double t, int order) const {
    Complex sum{0.0, 0.0};
    for (const auto& term : terms_) {
      Complex factor{1.0, 0.0};
      for (int i = 0; i < order; ++i) factor *= Complex(0.0, term.index);
      sum += factor * term.coefficient * std::polar(1.0, term.index * t);
    }
    return sum;
  }

  static double segment_distance(Complex z, Complex a, Complex b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double s = len2 > 0 ? std::real((z - a) * std::conj(ab)) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return std::abs(z - (a + s * ab));
  }

  static double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

  static bool segments_intersect(Complex p1, Complex p2, Complex q1, Complex q2) {
    const double d1 = cross(q2 - q1, p1 - q1);
    const double d2 = cross(q2 - q1, p2 - q1);
    const double d3 = cross(p2 - p1, q1 - p1);
    const double d4 = cross(p2 - p1, q2 - p1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
  }

  void validate() {
    sample_.resize(kSample);
    double min_speed = std::numeric_limits<double>::infinity();
    double max_speed = 0.0;
    for (int i = 0; i < kSample; ++i) {
      const double t = kTwoPi * i / kSample;
      sample_[i] = point(t);
      const double speed = std::abs(derivative(t));
      min_speed = std::min(min_speed, speed);
      max_speed = std::max(max_speed, speed);
    }
    if (!(min_speed > 1e-8 * std::max(max_speed, 1e-300))) {
      throw Error(ErrorKind::Geometry, "parameterization derivative vanishes on the boundary sample");
    }
    double area2 = 0.0;
    for (int i = 0; i < kSample; ++i) area2 += cross(sample_[i], sample_[(i + 1) % kSample]);
    if (!(area2 > 0.0)) throw Error(ErrorKind::Geometry, "boundary must wind positively");
    for (int i = 0; i < kSample; ++i) {
      for (int j = i + 2; j < kSample; ++j) {
        if (i == 0 && j == kSample - 1) continue;
        if (segments_intersect(sample_[i], sample_[i + 1], sample_[j], sample_[(j + 1) % kSample])) {
          throw Error(ErrorKind::Geometry, "boundary self-intersects");
        }
      }
    }
    diameter_ = 0.0;
    for (int i = 0; i < kSample; i += 4) {
      for (int j = i + 1; j < kSample; j += 4) diameter_ = std::max(diameter_, std::abs(sample_[i] - sample_[j]));
    }
  }

  std::vector<FourierTerm> terms_;
  std::vector<Complex> sample_;
  double diameter_ = 0.0;
};

/// Planar model domain: disc, annulus with outer radius 1, or smooth Jordan domain.
class PlanarDomain {
 public:
  using Variant = std::variant<Disc, Annulus, JordanCurve>;

  static PlanarDomain disc(double radius = 1.0) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorKind::Parameter, "disc radius must be positive");
    return PlanarDomain(Disc{radius});
  }

  static PlanarDomain annulus(double r_inner) {
    if (!(r_inner > 0.0 && r_inner < 1.0)) throw Error(ErrorKind::Parameter, "annulus needs 0 < r_inner < 1");
    return PlanarDomain(Annulus{r_inner});
  }

  static PlanarDomain jordan(std::vector<FourierTerm> terms) { return PlanarDomain(JordanCurve(std::move(terms))); }

  /// Circle of the given radius and center as Fourier data.
  static PlanarDomain jordan_circle(double radius = 1.0, Complex center = {0.0, 0.0}) {
    return jordan({{0, center}, {1, Complex(radius, 0.0)}});
  }

  /// Axis-aligned ellipse with semi-axes a (real) and b (imaginary).
  static PlanarDomain jordan_ellipse(double a, double b) {
    return jordan({{1, Complex(0.5 * (a + b), 0.0)}, {-1, Complex(0.5 * (a - b), 0.0)}});
  }

  const Variant& variant() const { return variant_; }

  bool is_disc() const { return std::holds_alternative<Disc>(variant_); }
  bool is_annulus() const { return std::holds_alternative<Annulus>(variant_); }
  bool is_jordan() const { return std::holds_alternative<JordanCurve>(variant_); }

  const Disc& as_disc() const { return std::get<Disc>(variant_); }
  const Annulus& as_annulus() const { return std::get<Annulus>(variant_); }
  const JordanCurve& as_jordan() const { return std::get<JordanCurve>(variant_); }

  bool contains(Complex z) const {
    if (is_disc()) return std::abs(z) < as_disc().radius;
    if (is_annulus()) return std::abs(z) > as_annulus().r_inner && std::abs(z) < 1.0;
    return as_jordan().contains(z);
  }

  double distance_to_boundary(Complex z) const {
    if (is_disc()) return as_disc().radius - std::abs(z);
    if (is_annulus()) return std::min(1.0 - std::abs(z), std::abs(z) - as_annulus().r_inner);
    return as_jordan().distance_to_boundary(z);
  }

  double diameter() const {
    if (is_disc()) return 2.0 * as_disc().radius;
    if (is_annulus()) return 2.0;
    return as_jordan().diameter();
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    if (is_disc()) {
      os << "disc:" << as_disc().radius;
    } else if (is_annulus()) {
      os << "annulus:" << as_annulus().r_inner;
    } else {
      os << "jordan:" << as_jordan().terms().size() << "terms";
    }
    return os.str();
  }

 private:
  explicit PlanarDomain(Variant v) : variant_(std::move(v)) {}

  Variant variant_;
};

/// Parses a Jordan boundary file: a JSON array of {"index": k, "re": x, "im": y}
/// objects, or an object with that array under "fourier".
inline std::vector<FourierTerm> parse_fourier_terms(const nlohmann::json& doc) {
  const nlohmann::json& arr = doc.is_object() ? doc.at("fourier") : doc;
  if (!arr.is_array()) throw Error(ErrorKind::Config, "Fourier data must be an array");
  std::vector<FourierTerm> terms;
  for (const auto& item : arr) {
    FourierTerm term;
    if (item.is_array()) {
      term.index = item.at(0).get<int>();
      term.coefficient = Complex(item.at(1).get<double>(), item.at(2).get<double>());
    } else {
      term.index = item.at("index").get<int>();
      term.coefficient = Complex(item.at("re").get<double>(), item.value("im", 0.0));
    }
    terms.push_back(term);
  }
  return terms;
}

inline PlanarDomain load_jordan_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open boundary file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, "boundary file " + path + ": " + e.what());
  }
  return PlanarDomain::jordan(parse_fourier_terms(doc));
}

}  // namespace suita

#endif  // SUITA_DOMAINS_PLANAR_DOMAIN_HPP
