#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace dualorlicz::detail {

template <typename Scalar>
struct QuadResult {
  Scalar value{};
  Scalar error{};
  bool ok = true;
  int evaluations = 0;
};

// Gauss-Kronrod 7-15 nodes on [-1, 1] (positive half, center last).
template <typename Scalar>
struct GK15 {
  static constexpr std::array<Scalar, 8> xk = {
      Scalar(0.991455371120812639206854697526329), Scalar(0.949107912342758524526189684047851),
      Scalar(0.864864423359769072789712788640926), Scalar(0.741531185599394439863864773280788),
      Scalar(0.586087235467691130294144845693013), Scalar(0.405845151377397166906606412076961),
      Scalar(0.207784955007898467600689403773245), Scalar(0.0)};
  static constexpr std::array<Scalar, 8> wk = {
      Scalar(0.022935322010529224963732008058970), Scalar(0.063092092629978553290700663189204),
      Scalar(0.104790010322250183839876322541518), Scalar(0.140653259715525918745189590510238),
      Scalar(0.169004726639267902826583426598550), Scalar(0.190350578064785409913256402421014),
      Scalar(0.204432940075298892414161999234649), Scalar(0.209482141084727828012999174891714)};
  // Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the center.
  static constexpr std::array<Scalar, 4> wg = {
      Scalar(0.129484966168869693270611432679082), Scalar(0.279705391489276667901467771423780),
      Scalar(0.381830050505118944950369775488975), Scalar(0.417959183673469387755102040816327)};
};

template <typename Scalar, typename F>
void gk15_rule(F& f, Scalar a, Scalar b, Scalar& kronrod, Scalar& error) {
  using R = GK15<Scalar>;
  const Scalar c = (a + b) / 2;
  const Scalar hw = (b - a) / 2;
  const Scalar fc = f(c);
  Scalar k = fc * R::wk[7];
  Scalar g = fc * R::wg[3];
  for (int j = 0; j < 7; ++j) {
    const Scalar dx = hw * R::xk[j];
    const Scalar f1 = f(c - dx);
    const Scalar f2 = f(c + dx);
    k += R::wk[j] * (f1 + f2);
    if (j % 2 == 1) g += R::wg[j / 2] * (f1 + f2);
  }
  kronrod = k * hw;
  error = std::abs((k - g) * hw);
}

/// Globally adaptive Gauss-Kronrod 7-15 on [a, b]. Bisects the interval with the
/// largest error estimate until the total estimate meets max(abs_tol, rel_tol*|I|).
/// Reports ok=false if an interval would need more than max_depth bisections.
template <typename Scalar, typename F>
QuadResult<Scalar> integrate(F&& f, Scalar a, Scalar b, Scalar rel_tol, Scalar abs_tol = Scalar(0),
                             int max_depth = 12) {
  struct Piece {
    Scalar a, b, value, error;
    int depth;
  };
  QuadResult<Scalar> out;
  if (a == b) return out;
  std::vector<Piece> pieces;
  Piece first{a, b, Scalar(0), Scalar(0), 0};
  gk15_rule<Scalar>(f, a, b, first.value, first.error);
  out.evaluations = 15;
  pieces.push_back(first);
  Scalar total = first.value;
  Scalar total_err = first.error;
  auto worse = [](const Piece& x, const Piece& y) { return x.error < y.error; };
  const Scalar tiny = std::numeric_limits<Scalar>::epsilon() * 50;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         total_err > tiny * std::abs(total)) {
    std::pop_heap(pieces.begin(), pieces.end(), worse);
    Piece p = pieces.back();
    pieces.pop_back();
    if (p.depth >= max_depth) {
      pieces.push_back(p);
      std::push_heap(pieces.begin(), pieces.end(), worse);
      out.ok = false;
      break;
    }
    const Scalar m = (p.a + p.b) / 2;
    Piece l{p.a, m, Scalar(0), Scalar(0), p.depth + 1};
    Piece r{m, p.b, Scalar(0), Scalar(0), p.depth + 1};
    gk15_rule<Scalar>(f, l.a, l.b, l.value, l.error);
    gk15_rule<Scalar>(f, r.a, r.b, r.value, r.error);
    out.evaluations += 30;
    total += l.value + r.value - p.value;
    total_err += l.error + r.error - p.error;
    pieces.push_back(l);
    std::push_heap(pieces.begin(), pieces.end(), worse);
    pieces.push_back(r);
    std::push_heap(pieces.begin(), pieces.end(), worse);
  }
  // Re-sum to avoid drift from the running updates.
  total = Scalar(0);
  total_err = Scalar(0);
  for (const auto& p : pieces) {
    total += p.value;
    total_err += p.error;
  }
  out.value = total;
  out.error = total_err;
  return out;
}

}  // namespace dualorlicz::detail
