#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  // Split into pieces first so narrow features are not missed.
  const int pieces = 64;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + (b - a) * k / pieces;
    const double hi = a + (b - a) * (k + 1) / pieces;
    const double flo = f(lo), fhi = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / pieces, 40);
  }
  return total;
}

double expected_max_abs_normal(int n) {
  return integrate([n](double x) { return 1.0 - std::pow(2.0 * normal_cdf(x) - 1.0, n); }, 0.0, 12.0);
}

double soft_moment(double sigma, double t) {
  return 2.0 * integrate(
                   [&](double x) {
                     const double v = x - t;
                     return v * v * normal_pdf(x / sigma) / sigma;
                   },
                   t, t + 40.0 * sigma);
}

std::optional<double> lp_by_vertices(const Vec& c, const Mat& a, const Vec& b, const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  // All inequalities as G x <= h.
  Mat g(m + 2 * n, n);
  Vec h(m + 2 * n);
  g.topRows(m) = a;
  h.head(m) = b;
  for (int j = 0; j < n; ++j) {
    g.row(m + 2 * j).setZero();
    g(m + 2 * j, j) = 1.0;
    h(m + 2 * j) = hi(j);
    g.row(m + 2 * j + 1).setZero();
    g(m + 2 * j + 1, j) = -1.0;
    h(m + 2 * j + 1) = -lo(j);
  }
  const int rows = m + 2 * n;
  std::optional<double> best;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Mat sub(n, n);
      Vec rhs(n);
      for (int k = 0; k < n; ++k) {
        sub.row(k) = g.row(pick[k]);
        rhs(k) = h(pick[k]);
      }
      Eigen::FullPivLU<Mat> lu(sub);
      if (!lu.isInvertible()) return;
      const Vec x = lu.solve(rhs);
      if (((g * x) - h).maxCoeff() > 1e-9) return;
      const double v = c.dot(x);
      if (!best || v > *best) best = v;
      return;
    }
    for (int r = start; r < rows; ++r) {
      pick[depth] = r;
      rec(r + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

Mat kernel(const Mat& a) {
  const int n = static_cast<int>(a.cols());
  Eigen::FullPivLU<Mat> lu(a);
  lu.setThreshold(1e-10);
  if (lu.dimensionOfKernel() == 0) return Mat(n, 0);
  const Mat raw = lu.kernel();
  Eigen::HouseholderQR<Mat> qr(raw);
  return qr.householderQ() * Mat::Identity(n, raw.cols());
}

namespace {

// ||x_T||_1 / ||x_{T^c}||_1 with T the s largest entries.
double best_ratio(const double* x, int n, int s, double* scratch) {
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    scratch[i] = std::abs(x[i]);
    total += scratch[i];
  }
  std::partial_sort(scratch, scratch + s, scratch + n, std::greater<>());
  double head = 0.0;
  for (int i = 0; i < s; ++i) head += scratch[i];
  const double tail = total - head;
  if (tail <= 0.0) return head > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return head / tail;
}

}  // namespace

double nsp_ratio_by_sampling(const Mat& a, int s, std::int64_t samples, std::mt19937_64& gen) {
  const Mat basis = kernel(a);
  const int n = static_cast<int>(a.cols());
  const int k = static_cast<int>(basis.cols());
  if (k == 0) return 0.0;
  std::normal_distribution<double> normal;
  std::vector<double> c(k), best_c(k), x(n), scratch(n);
  double best = 0.0;
  auto evaluate = [&](const std::vector<double>& coef) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += basis(i, j) * coef[j];
      x[i] = acc;
    }
    return best_ratio(x.data(), n, s, scratch.data());
  };
  const std::int64_t uniform_phase = samples / 2;
  for (std::int64_t t = 0; t < uniform_phase; ++t) {
    for (int j = 0; j < k; ++j) c[j] = normal(gen);
    const double r = evaluate(c);
    if (r > best) {
      best = r;
      best_c = c;
    }
  }
  if (best == 0.0) return best;
  // Local refinement: step size shrinks geometrically from 0.3 to 1e-8 relative.
  const std::int64_t local_phase = samples - uniform_phase;
  double norm = 0.0;
  for (double v : best_c) norm += v * v;
  norm = std::sqrt(norm);
  for (std::int64_t t = 0; t < local_phase; ++t) {
    const double frac = static_cast<double>(t) / static_cast<double>(local_phase);
    const double step = norm * 0.3 * std::pow(1e-8 / 0.3, frac);
    for (int j = 0; j < k; ++j) c[j] = best_c[j] + step * normal(gen);
    const double r = evaluate(c);
    if (r > best) {
      best = r;
      best_c = c;
    }
  }
  return best;
}

bool in_S_gamma_bruteforce(const Vec& x, double gamma, int s, double tol) {
  const int n = static_cast<int>(x.size());
  if (std::abs(x.norm() - 1.0) > 1e-9) return false;
  const double total = x.cwiseAbs().sum();
  // Enumerate subsets by bitmask (n is tiny in tests).
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    if (__builtin_popcount(mask) > s) continue;
    double head = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1U << i)) head += std::abs(x(i));
    if (head >= gamma * (total - head) - tol) return true;
  }
  return false;
}

double eta_by_grid(const Mat& d, double gamma, int s, int resolution) {
  const int n = static_cast<int>(d.cols());
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec& x) {
    if (in_S_gamma_bruteforce(x, gamma, s)) best = std::min(best, (d * x).norm());
  };
  if (n == 1) {
    consider(Vec::Ones(1));
  } else if (n == 2) {
    for (int i = 0; i < resolution; ++i) {
      const double th = 2.0 * M_PI * i / resolution;
      Vec x(2);
      x << std::cos(th), std::sin(th);
      consider(x);
    }
  } else if (n == 3) {
    for (int i = 0; i <= resolution; ++i) {
      const double th = M_PI * i / resolution;
      for (int j = 0; j < 2 * resolution; ++j) {
        const double ph = M_PI * j / resolution;
        Vec x(3);
        x << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
        consider(x);
      }
    }
  }
  return best;
}

double cone_sup_by_sampling(const Vec& h, double gamma, int s, std::int64_t samples, std::mt19937_64& gen) {
  const int n = static_cast<int>(h.size());
  std::normal_distribution<double> normal;
  std::bernoulli_distribution keep(0.6);
  double best = -std::numeric_limits<double>::infinity();
  Vec u(n);
  for (std::int64_t t = 0; t < samples; ++t) {
    for (int i = 0; i < n; ++i) u(i) = keep(gen) ? std::abs(normal(gen)) : 0.0;
    double head = u.head(s).sum();
    const double tail = u.tail(n - s).sum();
    if (head == 0.0) {
      u(0) = 1.0;
      head = 1.0;
    }
    if (head < gamma * tail) u.tail(n - s) *= head / (gamma * tail);
    u.normalize();
    best = std::max(best, h.dot(u));
  }
  return best;
}

std::optional<double> basis_pursuit_by_enumeration(const Mat& b, const Vec& y) {
  const int m = static_cast<int>(b.rows());
  const int n = static_cast<int>(b.cols());
  std::optional<double> best;
  if (y.norm() == 0.0) return 0.0;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size > m) continue;
    Mat sub(m, size);
    int k = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1U << i)) sub.col(k++) = b.col(i);
    Eigen::FullPivHouseholderQR<Mat> qr(sub);
    if (qr.rank() < size) continue;
    const Vec coef = qr.solve(y);
    if ((sub * coef - y).norm() > 1e-9 * std::max(1.0, y.norm())) continue;
    const double v = coef.cwiseAbs().sum();
    if (!best || v < *best) best = v;
  }
  return best;
}

}  // namespace oracle
