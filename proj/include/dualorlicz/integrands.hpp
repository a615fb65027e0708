#pragma once

#include "dualorlicz/detail/pchip.hpp"
#include "dualorlicz/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dualorlicz {

/// Strictly positive direction weight w(u): a constant, or samples on a symmetric geodesic grid
/// interpolated by a normalized kernel exp(kappa (<u,g> - 1)).
class DirectionWeight {
 public:
  DirectionWeight() = default;
  static DirectionWeight constant(double c);
  /// If even is set the grid must be closed under negation with equal values, and evaluation
  /// is done on a canonical representative so that w(u) == w(-u) bit for bit.
  static DirectionWeight tabulated(Directions grid, Vector values, double kappa, bool even);

  double operator()(const Vector& u) const;
  bool is_constant() const { return grid_.cols() == 0; }
  double constant_value() const { return c_; }
  bool is_even() const { return even_; }
  double min_value() const;
  /// int_S w(u) du.
  double sphere_integral(int dim) const;

  const Directions& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  double kappa() const { return kappa_; }

 private:
  double c_ = 1.0;
  Directions grid_;
  Vector values_;
  double kappa_ = 0.0;
  bool even_ = true;
};

enum class GFamily { Power, LogOffset, Custom };

/// G(t,u) = w(u) g(t) with g one of: scale * t^q, log(1+t), or a monotone tabulated profile.
class GSpec {
 public:
  static GSpec power(double q, double scale = 1.0, DirectionWeight w = {});
  static GSpec log_offset(DirectionWeight w = {});
  /// Monotone-cubic interpolation of (t_k, g_k), t_0 >= 0, with power-law tails fitted to the end segments.
  static GSpec custom(std::vector<double> t, std::vector<double> g, DirectionWeight w = {});

  GFamily family() const { return family_; }
  double q() const { return q_; }
  double scale() const { return scale_; }
  const DirectionWeight& weight() const { return weight_; }
  const std::vector<double>& table_t() const { return tab_t_; }
  const std::vector<double>& table_g() const { return tab_g_; }

  /// Radial profile g and derivative; throws DomainError where undefined.
  double radial(double t) const;
  double radial_dt(double t) const;
  /// +1 if G_t > 0, -1 if G_t < 0.
  int sign_class() const { return sign_; }
  /// g(0) if G extends continuously to t = 0.
  std::optional<double> radial_at_zero() const;
  /// Exponent a with g(t) ~ t^a as t -> 0+ and as t -> infinity.
  double lower_exponent() const;
  double upper_exponent() const;

  /// h * int_h^R g(r) r^{-2} dr for the closed-form families; nullopt otherwise.
  std::optional<double> polar_primitive(double h, double R) const;
  /// h * int_h^R g'(r) r^{-1} dr for the closed-form families; nullopt otherwise.
  std::optional<double> polar_primitive_dt(double h, double R) const;

  std::string describe() const;

 private:
  GFamily family_ = GFamily::Power;
  double q_ = 1.0;
  double scale_ = 1.0;
  DirectionWeight weight_;
  int sign_ = 1;
  std::vector<double> tab_t_, tab_g_;
  detail::Pchip<double> pchip_;
  double a_lo_ = 0.0, a_hi_ = 0.0;
};

double g_eval(const GSpec& G, double t, const Vector& u);
double g_t_eval(const GSpec& G, double t, const Vector& u);

/// psi: (0, inf) -> (0, inf); a power t^p or a tabulated profile interpolated in log-log space.
class PsiSpec {
 public:
  static PsiSpec power(double p);
  static PsiSpec one() { return power(0.0); }
  static PsiSpec custom(std::vector<double> t, std::vector<double> psi);

  bool is_power() const { return power_; }
  double p() const { return p_; }
  double operator()(double t) const;
  /// psi(t) ~ t^a as t -> 0+ / t -> infinity.
  double lower_exponent() const { return power_ ? p_ : p_lo_; }
  double upper_exponent() const { return power_ ? p_ : p_hi_; }
  const std::vector<double>& table_t() const { return tab_t_; }
  const std::vector<double>& table_psi() const { return tab_psi_; }
  std::string describe() const;

  /// int_a^b psi(s)/s ds for 0 < a <= b within the tabulated range.
  double log_integral(double a, double b) const;

 private:
  bool power_ = true;
  double p_ = 0.0;
  std::vector<double> tab_t_, tab_psi_;
  detail::Pchip<double> loglog_;
  double p_lo_ = 0.0, p_hi_ = 0.0;
};

enum class PhiKind { Increasing, Decreasing };

/// phi(t) = int_0^t psi(s)/s ds (increasing) or phibar(t) = int_t^inf psi(s)/s ds (decreasing).
class PhiSpec {
 public:
  /// Throws DivergentPhi if the defining integral diverges.
  static PhiSpec increasing(const PsiSpec& psi);
  static PhiSpec decreasing(const PsiSpec& psi);

  PhiKind kind() const { return kind_; }
  bool closed_form() const { return psi_.is_power(); }
  const PsiSpec& psi() const { return psi_; }

  double operator()(double t) const;
  /// phi'(t) = psi(t)/t, or -psi(t)/t for phibar.
  double derivative(double t) const;
  double inverse(double y) const;
  /// Supremum of phi over (0, inf) (infinity when it grows without bound); for phibar its value as t -> 0+.
  double range_limit() const;

 private:
  PhiKind kind_ = PhiKind::Increasing;
  PsiSpec psi_;
  std::vector<double> cum_;  // cumulative values at table knots (custom psi)
};

double phi_eval(const PhiSpec& phi, double t);
double phi_inverse(const PhiSpec& phi, double y);

enum class Theorem { T4_3, T4_4, T6_2, T6_4, T7_1, T7_3, T7_5 };

std::string to_string(Theorem t);
/// Accepts "T4.3", "T4.4", "T6.2", "T6.4" (and suffixed forms of it), "T7.1", "T7.3", "T7.5".
Theorem parse_theorem(const std::string& s);

enum class Verdict { Pass, Fail, Indeterminate };
std::string to_string(Verdict v);

struct Condition {
  std::string name;
  Verdict verdict = Verdict::Indeterminate;
  std::string evidence;
  bool heuristic = false;
  std::optional<ErrorCode> error;
};

struct HypothesisReport {
  Theorem theorem = Theorem::T4_3;
  std::vector<Condition> conditions;

  bool passed() const;
  bool any_failed() const;
  const Condition* first_failure() const;
  const Condition* find(const std::string& name) const;
};

/// Condition names used in reports.
namespace cond {
inline const std::string kGtPositive = "G_t > 0";
inline const std::string kGtNegative = "G_t < 0";
inline const std::string kGContinuousAtZero = "G continuous on [0,∞)";
inline const std::string kPsiPositive = "ψ > 0 and continuous on (0,∞)";
inline const std::string kPsiOverT = "lim ψ(t)/t = 0";
inline const std::string kJune22 = "∫_1^∞ ψ(s)/s ds = ∞";
inline const std::string kPhiFinite = "φ finite";
inline const std::string kPhiBarFinite = "φ̄ finite";
inline const std::string kTGtVanishes = "t G_t(t,u) → 0 as t → 0+";
inline const std::string kGtEven = "G_t(t,u) = G_t(t,-u)";
inline const std::string kCondE2 = "lim_{t→0+} ∫_{Σ_ε0(v)} G(t,u) du = ∞";
}  // namespace cond

HypothesisReport validate_hypotheses(const GSpec& G, const PsiSpec& psi, Theorem theorem, int dim = 3,
                                     double eps0 = 0.5);

}  // namespace dualorlicz
