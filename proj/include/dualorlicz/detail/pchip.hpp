#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dualorlicz::detail {

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Carlson) on strictly increasing knots.
/// End slopes may be prescribed; they are limited like interior slopes to keep monotonicity.
template <typename Scalar>
class Pchip {
 public:
  Pchip() = default;

  Pchip(std::vector<Scalar> x, std::vector<Scalar> y, Scalar left_slope, Scalar right_slope)
      : x_(std::move(x)), y_(std::move(y)), d_(x_.size(), Scalar(0)) {
    const size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("pchip needs at least two matching samples");
    for (size_t k = 0; k + 1 < n; ++k) {
      if (!(x_[k + 1] > x_[k])) throw std::invalid_argument("pchip knots must increase strictly");
    }
    std::vector<Scalar> delta(n - 1);
    for (size_t k = 0; k + 1 < n; ++k) delta[k] = (y_[k + 1] - y_[k]) / (x_[k + 1] - x_[k]);
    for (size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0) {
        d_[k] = 0;
      } else {
        const Scalar h0 = x_[k] - x_[k - 1], h1 = x_[k + 1] - x_[k];
        const Scalar w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
        d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
      }
    }
    d_[0] = left_slope;
    d_[n - 1] = right_slope;
    for (size_t k = 0; k + 1 < n; ++k) {
      if (delta[k] == 0) {
        d_[k] = d_[k + 1] = 0;
        continue;
      }
      Scalar a = d_[k] / delta[k];
      Scalar b = d_[k + 1] / delta[k];
      if (a < 0) d_[k] = 0, a = 0;
      if (b < 0) d_[k + 1] = 0, b = 0;
      const Scalar s = a * a + b * b;
      if (s > 9) {
        const Scalar tau = 3 / std::sqrt(s);
        d_[k] = tau * a * delta[k];
        d_[k + 1] = tau * b * delta[k];
      }
    }
  }

  Scalar front() const { return x_.front(); }
  Scalar back() const { return x_.back(); }
  const std::vector<Scalar>& knots() const { return x_; }
  const std::vector<Scalar>& values() const { return y_; }

  /// Value (and derivative if requested); x must lie in [front, back].
  Scalar operator()(Scalar x, Scalar* deriv = nullptr) const {
    size_t k = static_cast<size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
    k = std::clamp<size_t>(k, 1, x_.size() - 1) - 1;
    const Scalar h = x_[k + 1] - x_[k];
    const Scalar t = (x - x_[k]) / h;
    const Scalar t2 = t * t, t3 = t2 * t;
    const Scalar h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const Scalar h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    if (deriv) {
      const Scalar d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1;
      const Scalar d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
      *deriv = (d00 * y_[k] + d01 * y_[k + 1]) / h + d10 * d_[k] + d11 * d_[k + 1];
    }
    return h00 * y_[k] + h10 * h * d_[k] + h01 * y_[k + 1] + h11 * h * d_[k + 1];
  }

 private:
  std::vector<Scalar> x_, y_, d_;
};

}  // namespace dualorlicz::detail
