#pragma once

// Independent brute-force reference computations. Nothing here calls into
// the library's evaluation paths; inputs are plain numbers.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline double sq_euclid(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline double gaussian(double alpha, const Vec& a, const Vec& b) {
  return std::exp(-alpha * sq_euclid(a, b));
}

// sum_ij c_i c_j k(z_i, z_j) with a caller-supplied kernel on raw vectors.
inline double double_sum(const std::vector<Vec>& z, const Vec& c,
                         const std::function<double(const Vec&, const Vec&)>& k) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) s += c[i] * c[j] * k(z[i], z[j]);
  }
  return s;
}

// Q(h) = sum_ij lambda_i lambda_j k1(x_i, x_j) h_i h_j by direct loops.
inline double lp_quadratic_form(const Vec& nodes, const Vec& weights, const Vec& h,
                                const std::function<double(double, double)>& k1) {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      s += weights[i] * weights[j] * k1(nodes[i], nodes[j]) * h[i] * h[j];
    }
  }
  return s;
}

// |mu^ - nu^|^2 at frequency s via sum_ij c_i c_j cos((x_i - x_j) . s) over
// the signed measure mu - nu.
inline double fourier_trig(const std::vector<Vec>& z, const Vec& c, const Vec& s) {
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      double phase = 0.0;
      for (std::size_t d = 0; d < s.size(); ++d) phase += (z[i][d] - z[j][d]) * s[d];
      total += c[i] * c[j] * std::cos(phase);
    }
  }
  return total;
}

// W_2 between equal-weight samples on R via the sorted coupling.
inline double sorted_w2(Vec a, Vec b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

// det(M) by cofactor expansion (m <= 4).
inline double det(const Mat& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  double s = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    Mat minor;
    for (std::size_t r = 1; r < n; ++r) {
      Vec row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(row);
    }
    s += ((c % 2 == 0) ? 1.0 : -1.0) * m[0][c] * det(minor);
  }
  return s;
}

// Smallest eigenvalue of a symmetric m x m matrix (m <= 4, simple smallest
// root) from the first sign change of det(t I - M), refined by bisection.
inline double min_eig_charpoly(const Mat& m) {
  const std::size_t n = m.size();
  double bound = 1.0;
  for (const auto& r : m) {
    for (double v : r) bound += std::abs(v);
  }
  auto p = [&](double t) {
    Mat a = m;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? t : 0.0) - m[i][j];
    }
    return det(a);
  };
  const double below_sign = (n % 2 == 0) ? 1.0 : -1.0;
  const int steps = 200000;
  double lo = -bound;
  double hi = lo;
  for (int s = 1; s <= steps; ++s) {
    hi = -bound + 2.0 * bound * s / steps;
    if (p(hi) * below_sign <= 0.0) break;
    lo = hi;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (p(mid) * below_sign > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
