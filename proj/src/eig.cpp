#include "mrgan/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrgan/error.hpp"

namespace mrgan {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Matrix = std::vector<std::vector<double>>;

// Diagonal similarity scaling by powers of two so that row and column norms
// are comparable. Exact in floating point and eigenvalue-preserving; without
// it badly scaled matrices lose accuracy in the QR sweeps.
void balance_in_place(Matrix& a) {
  const std::size_t n = a.size();
  const double radix = 2.0;
  const double sq = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a[j][i]);
        r += std::abs(a[i][j]);
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sq;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        const double inv = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a[i][j] *= inv;
        for (std::size_t j = 0; j < n; ++j) a[j][i] *= f;
      }
    }
  }
}

// Householder similarity reduction to upper Hessenberg form. Entries below
// the first subdiagonal are set to exact zeros, which the QR stage assumes.
void hessenberg_in_place(Matrix& a) {
  const std::size_t n = a.size();
  if (n < 3) return;
  std::vector<double> v(n, 0.0);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm2 += a[i][k] * a[i][k];
    if (norm2 == 0.0) continue;
    const double norm = std::sqrt(norm2);
    const double alpha = a[k + 1][k] >= 0.0 ? -norm : norm;

    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a[i][k];
      if (i == k + 1) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    // A <- H A with H = I - beta v v^T (columns k+1 onward; column k is
    // written directly below).
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * a[i][j];
      const double scale = beta * dot;
      for (std::size_t i = k + 1; i < n; ++i) a[i][j] -= scale * v[i];
    }
    // A <- A H (column k has no overlap with v's support).
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) dot += a[i][j] * v[j];
      const double scale = beta * dot;
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= scale * v[j];
    }
    a[k + 1][k] = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a[i][k] = 0.0;
  }
}

double take_sign(double magnitude, double sign_of) {
  return sign_of >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Implicit double-shift QR on an upper Hessenberg matrix with deflation.
// Returns false when a block refuses to deflate within the iteration cap.
bool hqr_eigenvalues(Matrix& a, std::vector<std::complex<double>>& out) {
  const int n = static_cast<int>(a.size());
  constexpr int kMaxItersPerBlock = 60;

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a[i][j]);
  if (anorm == 0.0) anorm = 1.0;

  out.assign(static_cast<std::size_t>(n), {0.0, 0.0});
  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(a[l - 1][l - 1]) + std::abs(a[l][l]);
        if (s == 0.0) s = anorm;
        if (std::abs(a[l][l - 1]) <= kEps * s) {
          a[l][l - 1] = 0.0;
          break;
        }
      }
      double x = a[nn][nn];
      if (l == nn) {
        out[static_cast<std::size_t>(nn--)] = {x + t, 0.0};
      } else {
        double y = a[nn - 1][nn - 1];
        double w = a[nn][nn - 1] * a[nn - 1][nn];
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + take_sign(z, p);
            out[static_cast<std::size_t>(nn - 1)] = {x + z, 0.0};
            out[static_cast<std::size_t>(nn)] = {z != 0.0 ? x - w / z : x + z, 0.0};
          } else {
            out[static_cast<std::size_t>(nn - 1)] = {x + p, z};
            out[static_cast<std::size_t>(nn)] = {x + p, -z};
          }
          nn -= 2;
        } else {
          if (its == kMaxItersPerBlock) return false;
          if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
            // Exceptional shift to break symmetric stalls.
            t += x;
            for (int i = 0; i <= nn; ++i) a[i][i] -= x;
            const double s = std::abs(a[nn][nn - 1]) + std::abs(a[nn - 1][nn - 2]);
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;

          double p = 0.0;
          double q = 0.0;
          double r = 0.0;
          int m = 0;
          for (m = nn - 2; m >= l; --m) {
            const double z = a[m][m];
            const double rr = x - z;
            const double ss = y - z;
            p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
            q = a[m + 1][m + 1] - z - rr - ss;
            r = a[m + 2][m + 1];
            const double scale = std::abs(p) + std::abs(q) + std::abs(r);
            p /= scale;
            q /= scale;
            r /= scale;
            if (m == l) break;
            const double u = std::abs(a[m][m - 1]) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) *
                             (std::abs(a[m - 1][m - 1]) + std::abs(z) + std::abs(a[m + 1][m + 1]));
            if (u <= kEps * v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a[i][i - 2] = 0.0;
            if (i != m + 2) a[i][i - 3] = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a[k][k - 1];
              q = a[k + 1][k - 1];
              r = k + 1 != nn ? a[k + 2][k - 1] : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = take_sign(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a[k][k - 1] = -a[k][k - 1];
            } else {
              a[k][k - 1] = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            const double z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = a[k][j] + q * a[k + 1][j];
              if (k + 1 != nn) {
                p += r * a[k + 2][j];
                a[k + 2][j] -= p * z;
              }
              a[k + 1][j] -= p * y;
              a[k][j] -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * a[i][k] + y * a[i][k + 1];
              if (k + 1 != nn) {
                p += z * a[i][k + 2];
                a[i][k + 2] -= p * r;
              }
              a[i][k + 1] -= p * q;
              a[i][k] -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return true;
}

bool complex_less(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

EigenResult eigenvalues_dense(const Tensor& a) {
  require(a.rank() == 2, "eigenvalues_dense: matrix must be rank 2");
  require(a.rows() == a.cols(), "eigenvalues_dense: matrix must be square");
  require(a.all_finite(), "eigenvalues_dense: matrix has non-finite entries");

  const std::size_t n = a.rows();
  EigenResult result;
  if (n == 0) return result;
  if (n == 1) {
    result.eigenvalues = {{a.at(0, 0), 0.0}};
    return result;
  }

  Matrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a.at(i, j);

  balance_in_place(m);
  hessenberg_in_place(m);
  result.converged = hqr_eigenvalues(m, result.eigenvalues);
  if (!result.converged) {
    result.eigenvalues.clear();
    return result;
  }
  std::sort(result.eigenvalues.begin(), result.eigenvalues.end(), complex_less);
  return result;
}

HurwitzReport hurwitz_check(const Tensor& jacobian, double tolerance) {
  EigenResult eig = eigenvalues_dense(jacobian);
  HurwitzReport report;
  report.converged = eig.converged;
  report.spectrum = eig.eigenvalues;
  if (!eig.converged) {
    report.is_hurwitz = false;
    return report;
  }
  report.is_hurwitz = !eig.eigenvalues.empty();
  for (const auto& lambda : eig.eigenvalues)
    if (!(lambda.real() < -tolerance)) report.is_hurwitz = false;
  return report;
}

}  // namespace mrgan
