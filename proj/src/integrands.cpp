#include "dualorlicz/integrands.hpp"

#include "dualorlicz/detail/icosphere.hpp"
#include "dualorlicz/detail/quadrature.hpp"
#include "dualorlicz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dualorlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Canonical representative of {u, -u}: first nonzero coordinate positive.
Vector canonical(const Vector& u) {
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (u[k] > 0.0) return u;
    if (u[k] < 0.0) return -u;
  }
  return u;
}

}  // namespace

// ---------------------------------------------------------------- DirectionWeight

DirectionWeight DirectionWeight::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::DegenerateInput, "direction weight must be positive");
  DirectionWeight w;
  w.c_ = c;
  return w;
}

DirectionWeight DirectionWeight::tabulated(Directions grid, Vector values, double kappa, bool even) {
  if (grid.cols() == 0 || grid.cols() != values.size()) throw Error(ErrorCode::DegenerateInput, "weight grid and values differ");
  if (!(kappa > 0.0)) throw Error(ErrorCode::DegenerateInput, "weight kernel concentration must be positive");
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!(values[k] > 0.0) || !std::isfinite(values[k])) throw Error(ErrorCode::DegenerateInput, "weights must be positive");
    grid.col(k).normalize();
  }
  if (even) {
    const auto anti = antipodes(grid);
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      const int j = anti[static_cast<size_t>(k)];
      if (j < 0 || values[k] != values[j]) throw Error(ErrorCode::DegenerateInput, "even weight needs a symmetric grid with equal values");
    }
  }
  DirectionWeight w;
  w.grid_ = std::move(grid);
  w.values_ = std::move(values);
  w.kappa_ = kappa;
  w.even_ = even;
  w.c_ = w.values_.mean();
  return w;
}

double DirectionWeight::operator()(const Vector& u) const {
  if (is_constant()) return c_;
  const Vector v = even_ ? canonical(u) : u;
  double num = 0.0, den = 0.0;
  for (Eigen::Index k = 0; k < grid_.cols(); ++k) {
    const double kern = std::exp(kappa_ * (grid_.col(k).dot(v) - 1.0));
    num += kern * values_[k];
    den += kern;
  }
  return num / den;
}

double DirectionWeight::min_value() const { return is_constant() ? c_ : values_.minCoeff(); }

double DirectionWeight::sphere_integral(int dim) const {
  if (is_constant()) return c_ * sphere_area(dim);
  if (dim == 2) {
    const int N = 4096;
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
      const double a = 2.0 * std::numbers::pi * (k + 0.5) / N;
      Vector u(2);
      u << std::cos(a), std::sin(a);
      s += (*this)(u);
    }
    return s * 2.0 * std::numbers::pi / N;
  }
  const auto ico = detail::make_icosphere(5);
  double s = 0.0;
  for (const auto& f : ico.faces) {
    const auto& a = ico.vertices[static_cast<size_t>(f[0])];
    const auto& b = ico.vertices[static_cast<size_t>(f[1])];
    const auto& c = ico.vertices[static_cast<size_t>(f[2])];
    const Vector m = (a + b + c).normalized();
    s += detail::spherical_triangle_area(a, b, c) * (*this)(m);
  }
  return s;
}

// ---------------------------------------------------------------- GSpec

GSpec GSpec::power(double q, double scale, DirectionWeight w) {
  if (q == 0.0 || !std::isfinite(q)) throw Error(ErrorCode::DegenerateInput, "power exponent q must be nonzero");
  if (!(scale > 0.0)) throw Error(ErrorCode::DegenerateInput, "power scale must be positive");
  GSpec G;
  G.family_ = GFamily::Power;
  G.q_ = q;
  G.scale_ = scale;
  G.weight_ = std::move(w);
  G.sign_ = q > 0.0 ? 1 : -1;
  return G;
}

GSpec GSpec::log_offset(DirectionWeight w) {
  GSpec G;
  G.family_ = GFamily::LogOffset;
  G.weight_ = std::move(w);
  G.sign_ = 1;
  return G;
}

GSpec GSpec::custom(std::vector<double> t, std::vector<double> g, DirectionWeight w) {
  const size_t K = t.size();
  if (K < 2 || g.size() != K) throw Error(ErrorCode::DegenerateInput, "custom G needs at least two (t, g) samples");
  if (t.front() < 0.0) throw Error(ErrorCode::DegenerateInput, "custom G knots must be >= 0");
  const bool inc = g.back() > g.front();
  for (size_t k = 0; k + 1 < K; ++k) {
    if (!(t[k + 1] > t[k])) throw Error(ErrorCode::DegenerateInput, "custom G knots must increase");
    if (inc ? !(g[k + 1] > g[k]) : !(g[k + 1] < g[k])) {
      throw Error(ErrorCode::DegenerateInput, "custom G must be strictly monotone so that G_t has constant sign");
    }
  }
  for (double v : g) {
    if (v < 0.0 || !std::isfinite(v)) throw Error(ErrorCode::DegenerateInput, "custom G must be >= 0");
  }
  if (g.back() <= 0.0 || g[K - 2] <= 0.0) throw Error(ErrorCode::DegenerateInput, "custom G must be positive at the upper end");
  GSpec G;
  G.family_ = GFamily::Custom;
  G.weight_ = std::move(w);
  G.sign_ = inc ? 1 : -1;
  G.a_hi_ = std::log(g[K - 1] / g[K - 2]) / std::log(t[K - 1] / t[K - 2]);
  double left = (g[1] - g[0]) / (t[1] - t[0]);
  if (t[0] > 0.0) {
    if (!(g[0] > 0.0)) throw Error(ErrorCode::DegenerateInput, "custom G with t_0 > 0 needs g_0 > 0");
    G.a_lo_ = std::log(g[1] / g[0]) / std::log(t[1] / t[0]);
    left = G.a_lo_ * g[0] / t[0];
  }
  const double right = G.a_hi_ * g[K - 1] / t[K - 1];
  G.tab_t_ = t;
  G.tab_g_ = g;
  G.pchip_ = detail::Pchip<double>(std::move(t), std::move(g), left, right);
  return G;
}

double GSpec::radial(double t) const {
  if (!(t >= 0.0)) throw Error(ErrorCode::DomainError, "G evaluated at negative t");
  switch (family_) {
    case GFamily::Power:
      if (t == 0.0) {
        if (q_ < 0.0) throw Error(ErrorCode::DomainError, "G = t^q with q < 0 is undefined at t = 0");
        return 0.0;
      }
      return scale_ * std::pow(t, q_);
    case GFamily::LogOffset:
      return std::log1p(t);
    case GFamily::Custom: {
      const double t0 = tab_t_.front(), tK = tab_t_.back();
      if (t < t0) {
        if (t == 0.0) {
          if (a_lo_ < 0.0) throw Error(ErrorCode::DomainError, "custom G diverges at t = 0");
          return a_lo_ > 0.0 ? 0.0 : tab_g_.front();
        }
        return tab_g_.front() * std::pow(t / t0, a_lo_);
      }
      if (t > tK) return tab_g_.back() * std::pow(t / tK, a_hi_);
      return pchip_(t);
    }
  }
  return 0.0;
}

double GSpec::radial_dt(double t) const {
  if (!(t > 0.0)) throw Error(ErrorCode::DomainError, "G_t needs t > 0");
  switch (family_) {
    case GFamily::Power:
      return scale_ * q_ * std::pow(t, q_ - 1.0);
    case GFamily::LogOffset:
      return 1.0 / (1.0 + t);
    case GFamily::Custom: {
      const double t0 = tab_t_.front(), tK = tab_t_.back();
      if (t < t0) return a_lo_ * tab_g_.front() * std::pow(t / t0, a_lo_) / t;
      if (t > tK) return a_hi_ * tab_g_.back() * std::pow(t / tK, a_hi_) / t;
      double d = 0.0;
      pchip_(t, &d);
      return d;
    }
  }
  return 0.0;
}

std::optional<double> GSpec::radial_at_zero() const {
  switch (family_) {
    case GFamily::Power:
      if (q_ > 0.0) return 0.0;
      return std::nullopt;
    case GFamily::LogOffset:
      return 0.0;
    case GFamily::Custom:
      if (tab_t_.front() == 0.0) return tab_g_.front();
      if (a_lo_ > 0.0) return 0.0;
      if (a_lo_ == 0.0) return tab_g_.front();
      return std::nullopt;
  }
  return std::nullopt;
}

double GSpec::lower_exponent() const {
  switch (family_) {
    case GFamily::Power: return q_;
    case GFamily::LogOffset: return 1.0;
    case GFamily::Custom:
      if (tab_t_.front() == 0.0) return tab_g_.front() > 0.0 ? 0.0 : 1.0;
      return a_lo_;
  }
  return 0.0;
}

double GSpec::upper_exponent() const {
  switch (family_) {
    case GFamily::Power: return q_;
    case GFamily::LogOffset: return 0.0;
    case GFamily::Custom: return a_hi_;
  }
  return 0.0;
}

std::optional<double> GSpec::polar_primitive(double h, double R) const {
  const double L = std::log(R / h);
  switch (family_) {
    case GFamily::Power: {
      const double x = (q_ - 1.0) * L;
      const double base = scale_ * std::pow(h, q_);
      if (std::abs(x) < 1e-8) return base * L * (1.0 + x / 2.0);
      return base * std::expm1(x) / (q_ - 1.0);
    }
    case GFamily::LogOffset: {
      const double a = std::log1p(h) / h - std::log1p(R) / R;
      const double b = L - std::log1p((R - h) / (1.0 + h));
      return h * (a + b);
    }
    case GFamily::Custom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> GSpec::polar_primitive_dt(double h, double R) const {
  switch (family_) {
    case GFamily::Power:
      return q_ * *polar_primitive(h, R);
    case GFamily::LogOffset: {
      const double L = std::log(R / h);
      return h * (L - std::log1p((R - h) / (1.0 + h)));
    }
    case GFamily::Custom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string GSpec::describe() const {
  std::ostringstream os;
  switch (family_) {
    case GFamily::Power: os << "power(q=" << q_ << ", scale=" << scale_ << ")"; break;
    case GFamily::LogOffset: os << "log_offset"; break;
    case GFamily::Custom: os << "custom(" << tab_t_.size() << " knots)"; break;
  }
  if (!weight_.is_constant()) os << " * tabulated weight";
  else if (weight_.constant_value() != 1.0) os << " * " << weight_.constant_value();
  return os.str();
}

double g_eval(const GSpec& G, double t, const Vector& u) { return G.weight()(u) * G.radial(t); }

double g_t_eval(const GSpec& G, double t, const Vector& u) { return G.weight()(u) * G.radial_dt(t); }

// ---------------------------------------------------------------- PsiSpec

PsiSpec PsiSpec::power(double p) {
  if (!std::isfinite(p)) throw Error(ErrorCode::DegenerateInput, "psi exponent must be finite");
  PsiSpec s;
  s.power_ = true;
  s.p_ = p;
  return s;
}

PsiSpec PsiSpec::custom(std::vector<double> t, std::vector<double> psi) {
  const size_t K = t.size();
  if (K < 2 || psi.size() != K) throw Error(ErrorCode::DegenerateInput, "custom psi needs at least two samples");
  std::vector<double> x(K), y(K);
  for (size_t k = 0; k < K; ++k) {
    if (!(t[k] > 0.0) || !(psi[k] > 0.0)) throw Error(ErrorCode::DegenerateInput, "custom psi needs t > 0 and psi > 0");
    x[k] = std::log(t[k]);
    y[k] = std::log(psi[k]);
  }
  PsiSpec s;
  s.power_ = false;
  s.p_lo_ = (y[1] - y[0]) / (x[1] - x[0]);
  s.p_hi_ = (y[K - 1] - y[K - 2]) / (x[K - 1] - x[K - 2]);
  s.tab_t_ = std::move(t);
  s.tab_psi_ = std::move(psi);
  s.loglog_ = detail::Pchip<double>(std::move(x), std::move(y), s.p_lo_, s.p_hi_);
  return s;
}

double PsiSpec::operator()(double t) const {
  if (!(t > 0.0)) throw Error(ErrorCode::DomainError, "psi is defined on (0, inf)");
  if (power_) return std::pow(t, p_);
  const double t0 = tab_t_.front(), tK = tab_t_.back();
  if (t < t0) return tab_psi_.front() * std::pow(t / t0, p_lo_);
  if (t > tK) return tab_psi_.back() * std::pow(t / tK, p_hi_);
  return std::exp(loglog_(std::log(t)));
}

std::string PsiSpec::describe() const {
  std::ostringstream os;
  if (power_) os << "power(p=" << p_ << ")";
  else os << "custom(" << tab_t_.size() << " knots)";
  return os.str();
}

double PsiSpec::log_integral(double a, double b) const {
  if (!(a > 0.0) || b < a) throw Error(ErrorCode::DomainError, "log_integral needs 0 < a <= b");
  if (a == b) return 0.0;
  if (power_) {
    if (p_ == 0.0) return std::log(b / a);
    return (std::pow(b, p_) - std::pow(a, p_)) / p_;
  }
  const double xa = std::log(a), xb = std::log(b);
  const auto& knots = loglog_.knots();
  const double x0 = knots.front(), xK = knots.back();
  auto tail = [](double psi_ref, double x_ref, double e, double lo, double hi) {
    if (e == 0.0) return psi_ref * (hi - lo);
    return psi_ref * (std::exp(e * (hi - x_ref)) - std::exp(e * (lo - x_ref))) / e;
  };
  double total = 0.0;
  if (xa < x0) total += tail(tab_psi_.front(), x0, p_lo_, xa, std::min(xb, x0));
  if (xb > xK) total += tail(tab_psi_.back(), xK, p_hi_, std::max(xa, xK), xb);
  const double lo = std::max(xa, x0), hi = std::min(xb, xK);
  if (hi > lo) {
    auto f = [&](double x) { return std::exp(loglog_(x)); };
    // Integrate knot by knot so that each piece is a single smooth cubic.
    double cur = lo;
    for (size_t k = 0; k < knots.size() && cur < hi; ++k) {
      if (knots[k] <= cur) continue;
      const double next = std::min(knots[k], hi);
      total += detail::integrate<double>(f, cur, next, 1e-13).value;
      cur = next;
    }
  }
  return total;
}

// ---------------------------------------------------------------- PhiSpec

PhiSpec PhiSpec::increasing(const PsiSpec& psi) {
  const double a = psi.lower_exponent();
  if (!(a > 0.0)) {
    throw Error(ErrorCode::DivergentPhi, "phi(t) = int_0^t psi(s)/s ds diverges at 0 (psi(s)/s ~ s^" + fmt(a - 1.0) + ")");
  }
  PhiSpec f;
  f.kind_ = PhiKind::Increasing;
  f.psi_ = psi;
  if (!psi.is_power()) {
    const auto& t = psi.table_t();
    f.cum_.resize(t.size());
    f.cum_[0] = psi.table_psi().front() / a;
    for (size_t k = 0; k + 1 < t.size(); ++k) f.cum_[k + 1] = f.cum_[k] + psi.log_integral(t[k], t[k + 1]);
  }
  return f;
}

PhiSpec PhiSpec::decreasing(const PsiSpec& psi) {
  const double a = psi.upper_exponent();
  if (!(a < 0.0)) {
    throw Error(ErrorCode::DivergentPhi, "phibar(t) = int_t^inf psi(s)/s ds diverges at infinity (psi(s)/s ~ s^" + fmt(a - 1.0) + ")");
  }
  PhiSpec f;
  f.kind_ = PhiKind::Decreasing;
  f.psi_ = psi;
  if (!psi.is_power()) {
    const auto& t = psi.table_t();
    const size_t K = t.size();
    f.cum_.resize(K);
    f.cum_[K - 1] = psi.table_psi().back() / (-a);
    for (size_t k = K - 1; k-- > 0;) f.cum_[k] = f.cum_[k + 1] + psi.log_integral(t[k], t[k + 1]);
  }
  return f;
}

double PhiSpec::operator()(double t) const {
  if (kind_ == PhiKind::Increasing) {
    if (t < 0.0) throw Error(ErrorCode::DomainError, "phi needs t >= 0");
    if (t == 0.0) return 0.0;
    if (psi_.is_power()) return std::pow(t, psi_.p()) / psi_.p();
    const auto& knots = psi_.table_t();
    if (t <= knots.front()) return cum_.front() * std::pow(t / knots.front(), psi_.lower_exponent());
    if (t >= knots.back()) return cum_.back() + psi_.log_integral(knots.back(), t);
    const size_t k = static_cast<size_t>(std::upper_bound(knots.begin(), knots.end(), t) - knots.begin()) - 1;
    return cum_[k] + psi_.log_integral(knots[k], t);
  }
  if (!(t > 0.0)) throw Error(ErrorCode::DomainError, "phibar needs t > 0");
  if (psi_.is_power()) return std::pow(t, psi_.p()) / (-psi_.p());
  const auto& knots = psi_.table_t();
  if (t >= knots.back()) return cum_.back() * std::pow(t / knots.back(), psi_.upper_exponent());
  if (t <= knots.front()) return cum_.front() + psi_.log_integral(t, knots.front());
  const size_t k = static_cast<size_t>(std::upper_bound(knots.begin(), knots.end(), t) - knots.begin());
  return cum_[k] + psi_.log_integral(t, knots[k]);
}

double PhiSpec::derivative(double t) const {
  const double d = psi_(t) / t;
  return kind_ == PhiKind::Increasing ? d : -d;
}

double PhiSpec::range_limit() const {
  if (kind_ == PhiKind::Increasing) {
    const double a = psi_.upper_exponent();
    if (psi_.is_power() || a >= 0.0) return kInf;
    return cum_.back() + psi_.table_psi().back() / (-a);
  }
  const double a = psi_.lower_exponent();
  if (psi_.is_power() || a <= 0.0) return kInf;
  return cum_.front() + psi_.table_psi().front() / a;
}

double PhiSpec::inverse(double y) const {
  if (kind_ == PhiKind::Increasing) {
    if (y < 0.0) throw Error(ErrorCode::DomainError, "phi inverse needs y >= 0");
    if (y == 0.0) return 0.0;
  } else if (!(y > 0.0)) {
    throw Error(ErrorCode::DomainError, "phibar inverse needs y > 0");
  }
  if (!(y < range_limit())) throw Error(ErrorCode::DomainError, "value outside the range of phi");
  if (psi_.is_power()) {
    const double p = psi_.p();
    return std::pow(kind_ == PhiKind::Increasing ? p * y : -p * y, 1.0 / p);
  }
  const bool inc = kind_ == PhiKind::Increasing;
  // Bracket in log t, then bisect.
  double lo = 0.0, hi = 0.0;
  auto below = [&](double x) { return inc ? (*this)(std::exp(x)) < y : (*this)(std::exp(x)) > y; };
  double step = 1.0;
  if (below(0.0)) {
    while (below(hi)) {
      lo = hi;
      hi += step;
      step *= 2.0;
      if (hi > 700.0) throw Error(ErrorCode::DomainError, "phi inverse bracket failed");
    }
  } else {
    while (!below(lo)) {
      hi = lo;
      lo -= step;
      step *= 2.0;
      if (lo < -700.0) throw Error(ErrorCode::DomainError, "phi inverse bracket failed");
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (below(mid)) lo = mid;
    else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

double phi_eval(const PhiSpec& phi, double t) { return phi(t); }

double phi_inverse(const PhiSpec& phi, double y) { return phi.inverse(y); }

// ---------------------------------------------------------------- hypotheses

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::T4_3: return "T4.3";
    case Theorem::T4_4: return "T4.4";
    case Theorem::T6_2: return "T6.2";
    case Theorem::T6_4: return "T6.4";
    case Theorem::T7_1: return "T7.1";
    case Theorem::T7_3: return "T7.3";
    case Theorem::T7_5: return "T7.5";
  }
  return "?";
}

Theorem parse_theorem(const std::string& s) {
  if (s == "T4.3") return Theorem::T4_3;
  if (s == "T4.4") return Theorem::T4_4;
  if (s == "T6.2") return Theorem::T6_2;
  if (s.rfind("T6.4", 0) == 0) return Theorem::T6_4;  // suffixed variants name the same result
  if (s == "T7.1") return Theorem::T7_1;
  if (s == "T7.3") return Theorem::T7_3;
  if (s == "T7.5") return Theorem::T7_5;
  throw Error(ErrorCode::ParseError, "unknown theorem '" + s + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

bool HypothesisReport::passed() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.verdict == Verdict::Pass; });
}

bool HypothesisReport::any_failed() const { return first_failure() != nullptr; }

const Condition* HypothesisReport::first_failure() const {
  for (const auto& c : conditions) {
    if (c.verdict == Verdict::Fail) return &c;
  }
  return nullptr;
}

const Condition* HypothesisReport::find(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

Verdict from_bool(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

// Direction sample used by the heuristic checks.
std::vector<Vector> probe_directions(int dim) { return sphere_sample(dim, dim == 2 ? 0 : 2); }

Condition check_sign(const GSpec& G, int dim, int want) {
  Condition c;
  c.name = want > 0 ? cond::kGtPositive : cond::kGtNegative;
  if (G.family() == GFamily::Power) {
    c.verdict = from_bool((G.q() > 0.0) == (want > 0));
    c.evidence = "closed form: G_t = w(u) q t^(q-1) with q = " + fmt(G.q()) + ", w > 0";
    return c;
  }
  if (G.family() == GFamily::LogOffset) {
    c.verdict = from_bool(want > 0);
    c.evidence = "closed form: G_t = w(u)/(1+t) > 0";
    return c;
  }
  // 64 x 64 grid: log-spaced t in [1e-4, 1e4] times a direction sample.
  const auto dirs = sphere_sample(dim, dim == 2 ? 0 : 1);
  double lo = kInf, hi = -kInf;
  for (int a = 0; a < 64; ++a) {
    const double t = std::pow(10.0, -4.0 + 8.0 * a / 63.0);
    for (int b = 0; b < 64; ++b) {
      const double v = g_t_eval(G, t, dirs[static_cast<size_t>(b) % dirs.size()]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  c.verdict = from_bool(want > 0 ? lo > 0.0 : hi < 0.0);
  c.heuristic = true;
  c.evidence = "64x64 grid t in [1e-4,1e4]: min G_t = " + fmt(lo) + ", max G_t = " + fmt(hi);
  return c;
}

Condition check_continuous_at_zero(const GSpec& G) {
  Condition c;
  c.name = cond::kGContinuousAtZero;
  const auto g0 = G.radial_at_zero();
  c.verdict = from_bool(g0.has_value());
  c.evidence = g0 ? "G(0,u) = " + fmt(*g0) + " * w(u)" : "G(t,u) ~ t^" + fmt(G.lower_exponent()) + " is unbounded as t -> 0+";
  return c;
}

Condition check_psi_positive(const PsiSpec& psi) {
  Condition c;
  c.name = cond::kPsiPositive;
  c.verdict = Verdict::Pass;
  c.evidence = psi.is_power() ? "closed form t^p > 0" : "tabulated values positive; log-log interpolation keeps psi > 0";
  return c;
}

Condition check_psi_over_t(const PsiSpec& psi) {
  Condition c;
  c.name = cond::kPsiOverT;
  const double a = psi.lower_exponent();
  c.verdict = from_bool(a > 1.0);
  const std::string limit = a > 1.0 ? "0" : (a == 1.0 ? "a positive constant" : "∞");
  c.evidence = "ψ(t)/t ~ t^" + fmt(a - 1.0) + " as t -> 0+, limit = " + limit;
  c.heuristic = !psi.is_power();
  return c;
}

Condition check_june22(const PsiSpec& psi) {
  Condition c;
  c.name = cond::kJune22;
  const double a = psi.upper_exponent();
  c.verdict = from_bool(a >= 0.0);
  c.evidence = "tail exponent of ψ(s)/s is " + fmt(a - 1.0) + (a >= 0.0 ? " >= -1: diverges" : " < -1: converges");
  c.heuristic = !psi.is_power();
  return c;
}

Condition check_phi_finite(const PsiSpec& psi) {
  Condition c;
  c.name = cond::kPhiFinite;
  try {
    const PhiSpec phi = PhiSpec::increasing(psi);
    c.verdict = Verdict::Pass;
    c.evidence = "φ(1) = " + fmt(phi(1.0));
  } catch (const Error& e) {
    c.verdict = Verdict::Fail;
    c.error = ErrorCode::DivergentPhi;
    c.evidence = e.what();
  }
  c.heuristic = !psi.is_power();
  return c;
}

Condition check_phibar_finite(const PsiSpec& psi) {
  Condition c;
  c.name = cond::kPhiBarFinite;
  try {
    const PhiSpec phi = PhiSpec::decreasing(psi);
    c.verdict = Verdict::Pass;
    c.evidence = "φ̄(1) = " + fmt(phi(1.0));
  } catch (const Error& e) {
    c.verdict = Verdict::Fail;
    c.error = ErrorCode::DivergentPhi;
    c.evidence = e.what();
  }
  c.heuristic = !psi.is_power();
  return c;
}

Condition check_tgt(const GSpec& G) {
  Condition c;
  c.name = cond::kTGtVanishes;
  switch (G.family()) {
    case GFamily::Power:
      c.verdict = from_bool(G.q() > 0.0);
      c.evidence = "t G_t = q t^q w(u) with q = " + fmt(G.q());
      return c;
    case GFamily::LogOffset:
      c.verdict = Verdict::Pass;
      c.evidence = "t G_t = t/(1+t) w(u) -> 0";
      return c;
    case GFamily::Custom: {
      const double a = G.lower_exponent();
      const bool ok = G.table_t().front() == 0.0 || a > 0.0;
      c.verdict = from_bool(ok);
      c.evidence = "t G_t ~ t^" + fmt(G.table_t().front() == 0.0 ? 1.0 : a) + " near 0";
      c.heuristic = true;
      return c;
    }
  }
  return c;
}

Condition check_even(const GSpec& G) {
  Condition c;
  c.name = cond::kGtEven;
  c.verdict = from_bool(G.weight().is_constant() || G.weight().is_even());
  c.evidence = G.weight().is_constant() ? "direction weight is constant" : (G.weight().is_even() ? "weight declared even on a symmetric grid" : "weight not declared even");
  return c;
}

Condition check_cond_e2(const GSpec& G, int dim, double eps0) {
  Condition c;
  c.name = cond::kCondE2;
  if (G.family() == GFamily::Power) {
    c.verdict = from_bool(G.q() < 0.0);
    c.evidence = "closed form: ∫_{Σ_ε0(v)} G(t,u) du = t^q ∫ w, q = " + fmt(G.q()) + (G.q() < 0.0 ? " -> ∞" : " -> 0");
    return c;
  }
  if (G.family() == GFamily::LogOffset) {
    c.verdict = Verdict::Fail;
    c.evidence = "closed form: log(1+t) -> 0 as t -> 0+";
    return c;
  }
  // Grid evidence: I_v(t) = int over {<u,v> >= eps0} of G(t,u), t = 1e-1, ..., 1e-6.
  c.heuristic = true;
  const auto dirs = sphere_sample(dim, dim == 2 ? 4 : 3);
  const double cell = sphere_area(dim) / static_cast<double>(dirs.size());
  double worst_last_ratio = kInf;
  bool monotone = true;
  std::ostringstream ev;
  ev << "eps0=" << eps0 << ";";
  for (const auto& v : probe_directions(dim)) {
    double prev = -1.0;
    double last_ratio = 1.0;
    for (int e = 1; e <= 6; ++e) {
      const double t = std::pow(10.0, -e);
      double I = 0.0;
      for (const auto& u : dirs) {
        if (u.dot(v) >= eps0) I += g_eval(G, t, u) * cell;
      }
      if (prev >= 0.0) {
        if (!(I > prev)) monotone = false;
        last_ratio = prev > 0.0 ? I / prev : kInf;
      }
      prev = I;
    }
    worst_last_ratio = std::min(worst_last_ratio, last_ratio);
  }
  ev << " monotone growth: " << (monotone ? "yes" : "no") << "; min ratio I(1e-6)/I(1e-5) = " << fmt(worst_last_ratio);
  c.evidence = ev.str();
  if (monotone && worst_last_ratio >= 1.2) c.verdict = Verdict::Pass;
  else if (!monotone || worst_last_ratio < 1.01) c.verdict = Verdict::Fail;
  else c.verdict = Verdict::Indeterminate;
  return c;
}

}  // namespace

HypothesisReport validate_hypotheses(const GSpec& G, const PsiSpec& psi, Theorem theorem, int dim, double eps0) {
  HypothesisReport r;
  r.theorem = theorem;
  auto& cs = r.conditions;
  switch (theorem) {
    case Theorem::T4_3:
      cs = {check_sign(G, dim, +1), check_continuous_at_zero(G), check_psi_positive(psi), check_psi_over_t(psi),
            check_june22(psi)};
      break;
    case Theorem::T6_2:
      cs = {check_sign(G, dim, +1), check_continuous_at_zero(G), check_tgt(G), check_psi_positive(psi),
            check_psi_over_t(psi), check_june22(psi)};
      break;
    case Theorem::T4_4:
    case Theorem::T6_4:
      cs = {check_sign(G, dim, -1), check_cond_e2(G, dim, eps0), check_psi_positive(psi), check_june22(psi),
            check_phi_finite(psi)};
      break;
    case Theorem::T7_1:
      cs = {check_sign(G, dim, +1), check_continuous_at_zero(G), check_even(G), check_psi_positive(psi),
            check_june22(psi), check_phi_finite(psi)};
      break;
    case Theorem::T7_3:
      cs = {check_sign(G, dim, -1), check_cond_e2(G, dim, eps0), check_even(G), check_psi_positive(psi),
            check_june22(psi), check_phi_finite(psi)};
      break;
    case Theorem::T7_5:
      cs = {check_sign(G, dim, -1), check_even(G), check_cond_e2(G, dim, eps0), check_psi_positive(psi),
            check_phibar_finite(psi)};
      break;
  }
  return r;
}

}  // namespace dualorlicz
