#include "sproc/symeig/symeig.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "sproc/error.hpp"

namespace sproc {

SymMatrix::SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

SymMatrix::SymMatrix(std::size_t n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
  if (a_.size() != n * n) throw InputError("symmetric matrix: expected n*n entries");
  for (double v : a_) {
    if (!std::isfinite(v)) throw InputError("symmetric matrix: non-finite entry");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a_[i * n + j] + a_[j * n + i]);
      a_[i * n + j] = m;
      a_[j * n + i] = m;
    }
  }
}

SymMatrix SymMatrix::from_rows(const std::vector<DVec>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> e;
  e.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw InputError("symmetric matrix: rows must be square");
    e.insert(e.end(), r.begin(), r.end());
  }
  return SymMatrix(n, std::move(e));
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) s.a_[i * n + i] = 1.0;
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  if (!std::isfinite(v)) throw InputError("symmetric matrix: non-finite entry");
  a_[i * n_ + j] = v;
  a_[j * n_ + i] = v;
}

DVec SymMatrix::apply(const DVec& x) const {
  if (x.size() != n_) throw InputError("symmetric matrix: vector length mismatch");
  DVec y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) y[i] += a_[i * n_ + j] * x[j];
  }
  return y;
}

double SymMatrix::quad(const DVec& x) const {
  DVec y = apply(x);
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double SymMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += std::abs(a_[i * n_ + j]);
    best = std::max(best, s);
  }
  return best;
}

double SymMatrix::norm_fro() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double norm2(const DVec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf(const DVec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

EigResult eigh_sym(const SymMatrix& s) {
  const std::size_t n = s.n();
  if (n == 0) throw InputError("eigh_sym: empty matrix");
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = s(i, j);
      if (!std::isfinite(a[i * n + j])) throw InputError("eigh_sym: non-finite entry");
    }
  }
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off = [&] {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) t += a[i * n + j] * a[i * n + j];
      }
    }
    return std::sqrt(t);
  };

  const double target = 1e-14 * s.norm_fro();
  int sweeps = 0;
  while (off() > target && sweeps < 100) {
    ++sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double kp = a[k * n + p];
          const double kq = a[k * n + q];
          a[k * n + p] = c * kp - sn * kq;
          a[k * n + q] = sn * kp + c * kq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double pk = a[p * n + k];
          const double qk = a[q * n + k];
          a[p * n + k] = c * pk - sn * qk;
          a[q * n + k] = sn * pk + c * qk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double kp = v[k * n + p];
          const double kq = v[k * n + q];
          v[k * n + p] = c * kp - sn * kq;
          v[k * n + q] = sn * kp + c * kq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });
  EigResult out;
  out.sweeps = sweeps;
  for (auto k : order) {
    out.values.push_back(a[k * n + k]);
    DVec col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v[i * n + k];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

namespace {
std::atomic<double> g_psd_tol{kEpsPsd};
}  // namespace

double psd_tolerance() { return g_psd_tol.load(std::memory_order_relaxed); }

void set_psd_tolerance(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InputError("psd tolerance must be positive");
  g_psd_tol.store(tol, std::memory_order_relaxed);
}

double lambda_min(const SymMatrix& s) { return eigh_sym(s).values.front(); }

QuadInf quad_inf_detail(const SymMatrix& q, const DVec& a, double c) {
  const std::size_t n = q.n();
  if (a.size() != n) throw InputError("quad_inf: linear term length mismatch");
  QuadInf out;
  EigResult e = eigh_sym(q);
  if (e.values.front() < -psd_tolerance()) {
    out.value = ExtReal::neg_inf();
    out.descent = e.vectors.front();
    return out;
  }
  double lmax = 0.0;
  for (double l : e.values) lmax = std::max(lmax, std::abs(l));
  const double thresh = 1e-9 * lmax;

  DVec null_part(n, 0.0);
  DVec x(n, 0.0);
  double val = c;
  for (std::size_t k = 0; k < n; ++k) {
    const DVec& vk = e.vectors[k];
    const double ak = std::inner_product(vk.begin(), vk.end(), a.begin(), 0.0);
    if (e.values[k] > thresh) {
      val -= 0.25 * ak * ak / e.values[k];
      for (std::size_t i = 0; i < n; ++i) x[i] -= 0.5 * ak / e.values[k] * vk[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) null_part[i] += ak * vk[i];
    }
  }
  if (norm2(null_part) > kNullTol * (1.0 + norm2(a))) {
    out.value = ExtReal::neg_inf();
    for (auto& v : null_part) v = -v;
    out.descent = std::move(null_part);
    return out;
  }
  out.value = ExtReal(val);
  out.argmin = std::move(x);
  return out;
}

ExtReal quad_inf(const SymMatrix& q, const DVec& a, double c) { return quad_inf_detail(q, a, c).value; }

SymMatrix homogenize(const SymMatrix& q, const DVec& a, double c) {
  const std::size_t n = q.n();
  if (a.size() != n) throw InputError("homogenize: linear term length mismatch");
  SymMatrix m(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) m.set(i, j, q(i, j));
    m.set(i, n, 0.5 * a[i]);
  }
  m.set(n, n, c);
  return m;
}

}  // namespace sproc
