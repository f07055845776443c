#include "coupled/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "coupled/errors.hpp"

namespace coupled {

namespace {

constexpr double kJacobiTolerance = 1e-12;
constexpr int kJacobiMaxSweeps = 30;
constexpr double kSymmetryTolerance = 1e-10;
constexpr double kSignThreshold = 1e-12;
constexpr double kDeflationTolerance = 1e-12;

double off_diagonal_norm(const Mat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

void jacobi_sweep(Mat& a, Mat& v) {
  const std::size_t n = a.rows();
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      double apq = a(p, q);
      if (apq == 0.0) continue;
      double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
      double t = std::abs(theta) > 1e150
                     ? 0.5 / theta
                     : std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      double c = 1.0 / std::sqrt(t * t + 1.0);
      double s = t * c;
      a(p, p) -= t * apq;
      a(q, q) += t * apq;
      a(p, q) = a(q, p) = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        double akp = a(k, p);
        double akq = a(k, q);
        a(k, p) = a(p, k) = c * akp - s * akq;
        a(k, q) = a(q, k) = s * akp + c * akq;
      }
      for (std::size_t k = 0; k < n; ++k) {
        double vkp = v(k, p);
        double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
      }
    }
  }
}

void orient(Vec& x) {
  for (double c : x) {
    if (std::abs(c) > kSignThreshold) {
      if (c < 0.0) x *= -1.0;
      return;
    }
  }
}

// Orthonormal completion of the first `have` columns of q.
void complete_basis(Mat& q, std::size_t have) {
  const std::size_t m = q.rows();
  for (std::size_t col = have; col < q.cols(); ++col) {
    Vec best;
    double best_norm = -1.0;
    for (std::size_t k = 0; k < m; ++k) {
      Vec x = Vec::unit(m, k);
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < col; ++j) {
          Vec qj = q.col(j);
          x -= dot(qj, x) * qj;
        }
      double nx = norm(x);
      if (nx > best_norm) {
        best_norm = nx;
        best = std::move(x);
      }
    }
    q.set_col(col, best / best_norm);
  }
}

void balance(Mat& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const std::size_t n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void to_hessenberg(Mat& a) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    Vec x(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i) x[i - k - 1] = a(i, k);
    double alpha = norm(x);
    if (alpha == 0.0) continue;
    if (x[0] > 0.0) alpha = -alpha;
    Vec v = x;
    v[0] -= alpha;
    double nv = norm(v);
    if (nv == 0.0) continue;
    v /= nv;
    // Left: rows k+1.. of A minus 2 v (vᵀ A).
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i - k - 1] * a(i, j);
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= 2.0 * v[i - k - 1] * s;
    }
    // Right: columns k+1.. of A minus 2 (A v) vᵀ.
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j - k - 1];
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= 2.0 * s * v[j - k - 1];
    }
    a(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (after the EISPACK
// hqr scheme). Eigenvalues are written to wr/wi.
void hessenberg_qr(Mat& a, std::vector<double>& wr, std::vector<double>& wi) {
  const int n = static_cast<int>(a.rows());
  const int max_sweeps = 100 * n;
  int sweeps = 0;
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

  int nn = n - 1;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0, w = 0.0, x = 0.0, y = 0.0, z = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 1; --l) {
        s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= kDeflationTolerance * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      if (l < 0) l = 0;
      x = a(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn] = 0.0;
        --nn;
      } else {
        y = a(nn - 1, nn - 1);
        w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + std::copysign(z, p);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn - 1] = -z;
            wi[nn] = z;
          }
          nn -= 2;
        } else {
          if (++sweeps > max_sweeps) {
            std::ostringstream os;
            os << "gen_eig: QR iteration did not converge after " << max_sweeps
               << " sweeps; unreduced block rows/cols [" << l << ", " << nn << "]";
            throw ConvergenceError(os.str());
          }
          if (its == 10 || its == 20) {
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
            if (u + v == v) break;
          }
          for (int i = m + 2; i <= nn; ++i) {
            a(i, i - 2) = 0.0;
            if (i != m + 2) a(i, i - 3) = 0.0;
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) r = a(k + 2, k - 1);
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = std::copysign(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k != nn - 1) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k != nn - 1) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l < nn - 1);
  }
}

}  // namespace

Spectrum sym_eig(const Mat& c) {
  if (!c.square()) throw DimensionError("sym_eig: matrix is not square");
  if (c.rows() == 0) throw DimensionError("sym_eig: empty matrix");
  if (!c.all_finite()) throw DimensionError("sym_eig: non-finite entry");
  if (asymmetry(c) > kSymmetryTolerance) throw SymmetryError("sym_eig: matrix is not symmetric");

  const std::size_t n = c.rows();
  Mat a = c;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (c(i, j) + c(j, i));
  Mat v = Mat::identity(n);
  const double scale = frobenius_norm(a);
  const double threshold = kJacobiTolerance * scale;

  int sweep = 0;
  while (off_diagonal_norm(a) > threshold) {
    if (++sweep > kJacobiMaxSweeps)
      throw ConvergenceError("sym_eig: Jacobi did not converge in 30 sweeps");
    jacobi_sweep(a, v);
  }
  // One polishing sweep; convergence is quadratic so this is essentially free.
  if (scale > 0.0) jacobi_sweep(a, v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  Spectrum out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    Vec col = v.col(order[k]);
    orient(col);
    out.vectors.set_col(k, col);
  }
  return out;
}

SvdResult svd_factor(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) throw DimensionError("svd_factor: empty matrix");
  if (!a.all_finite()) throw DimensionError("svd_factor: non-finite entry");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t k = std::min(m, n);

  Mat gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += a(r, i) * a(r, j);
      gram(i, j) = gram(j, i) = s;
    }
  Spectrum eig = sym_eig(gram);

  std::vector<double> sv(n);
  for (std::size_t i = 0; i < n; ++i) sv[i] = norm(a * eig.vector(i));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sv[i] > sv[j]; });

  SvdResult out;
  out.right = Mat(n, n);
  for (std::size_t i = 0; i < n; ++i) out.right.set_col(i, eig.vector(order[i]));
  out.singular_values.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.singular_values[i] = sv[order[i]];

  const double tol = 1e-12 * frobenius_norm(a);
  out.left = Mat(m, m);
  std::size_t have = 0;
  for (; have < k; ++have) {
    double s = out.singular_values[have];
    if (s <= tol) break;
    out.left.set_col(have, a * out.right.col(have) / s);
  }
  complete_basis(out.left, have);
  return out;
}

std::vector<std::complex<double>> gen_eig(const Mat& m) {
  if (!m.square()) throw DimensionError("gen_eig: matrix is not square");
  if (m.rows() == 0) throw DimensionError("gen_eig: empty matrix");
  if (!m.all_finite()) throw DimensionError("gen_eig: non-finite entry");
  const std::size_t n = m.rows();
  Mat h = m;
  balance(h);
  to_hessenberg(h);
  std::vector<double> wr(n), wi(n);
  hessenberg_qr(h, wr, wi);

  std::vector<std::complex<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {wr[i], wi[i]};
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return out;
}

}  // namespace coupled
