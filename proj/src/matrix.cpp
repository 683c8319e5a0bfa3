#include "lorentz/matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "lorentz/error.hpp"

namespace lorentz {

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::size_t cap) : n_(n), a_(n * n, 0.0) {
  if (n == 0) throw Error(ErrorKind::domain, "matrix order must be positive");
  if (n > cap) throw Error(ErrorKind::domain, "matrix order " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1.0;
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(const std::vector<double>& d) {
  SymmetricMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.a_[i * d.size() + i] = d[i];
  return m;
}

SymmetricMatrix SymmetricMatrix::from_dense(std::size_t n, std::vector<double> data) {
  if (data.size() != n * n) throw Error(ErrorKind::domain, "dense data has the wrong size");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (data[i * n + j] != data[j * n + i]) throw Error(ErrorKind::domain, "matrix is not symmetric");
  SymmetricMatrix m(n);
  m.a_ = std::move(data);
  return m;
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double v) {
  a_[i * n_ + j] = v;
  a_[j * n_ + i] = v;
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i];
  return t;
}

double SymmetricMatrix::frobenius() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return std::sqrt(s);
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& o) const {
  if (o.n_ != n_) throw Error(ErrorKind::domain, "order mismatch");
  SymmetricMatrix m(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
  return m;
}

SymmetricMatrix SymmetricMatrix::operator-(const SymmetricMatrix& o) const {
  if (o.n_ != n_) throw Error(ErrorKind::domain, "order mismatch");
  SymmetricMatrix m(*this);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
  return m;
}

SymmetricMatrix SymmetricMatrix::scaled(double c) const {
  SymmetricMatrix m(*this);
  for (auto& x : m.a_) x *= c;
  return m;
}

// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::next_u64() { return splitmix64(seed_ + 0x9e3779b97f4a7c15ULL * counter_++); }

double CounterRng::uniform() {
  // 53 random bits, shifted off zero
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  const double u1 = uniform(), u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Orthogonal Orthogonal::identity(std::size_t n) {
  Orthogonal o{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) o.q[i * n + i] = 1.0;
  return o;
}

Orthogonal Orthogonal::permutation(const std::vector<std::size_t>& perm) {
  const std::size_t n = perm.size();
  Orthogonal o{n, std::vector<double>(n * n, 0.0)};
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n || seen[perm[i]]) throw Error(ErrorKind::domain, "not a permutation");
    seen[perm[i]] = true;
    o.q[i * n + perm[i]] = 1.0;
  }
  return o;
}

Orthogonal Orthogonal::random(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  // Column-major working copy so Householder columns are contiguous.
  std::vector<double> a(n * n);
  for (auto& x : a) x = rng.normal();
  auto col = [&](std::size_t j) { return a.data() + j * n; };

  std::vector<std::vector<double>> reflectors;
  std::vector<double> rdiag_sign(n, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    double* c = col(k);
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += c[i] * c[i];
    norm = std::sqrt(norm);
    std::vector<double> v(n - k);
    const double alpha = c[k] >= 0 ? -norm : norm;  // R_kk
    rdiag_sign[k] = alpha >= 0 ? 1.0 : -1.0;
    for (std::size_t i = k; i < n; ++i) v[i - k] = c[i];
    v[0] -= alpha;
    double vn = 0.0;
    for (double x : v) vn += x * x;
    if (vn > 0.0) {
      const double inv = 1.0 / std::sqrt(vn);
      for (auto& x : v) x *= inv;
      for (std::size_t j = k; j < n; ++j) {
        double* cj = col(j);
        double dot = 0.0;
        for (std::size_t i = k; i < n; ++i) dot += v[i - k] * cj[i];
        for (std::size_t i = k; i < n; ++i) cj[i] -= 2.0 * dot * v[i - k];
      }
    }
    reflectors.push_back(std::move(v));
  }
  // Q = H_0 H_1 ... H_{n-1}; accumulate onto the identity (column-major).
  std::vector<double> qm(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) qm[i * n + i] = 1.0;
  for (std::size_t kk = n; kk-- > 0;) {
    const auto& v = reflectors[kk];
    for (std::size_t j = 0; j < n; ++j) {
      double* cj = qm.data() + j * n;
      double dot = 0.0;
      for (std::size_t i = kk; i < n; ++i) dot += v[i - kk] * cj[i];
      if (dot == 0.0) continue;
      for (std::size_t i = kk; i < n; ++i) cj[i] -= 2.0 * dot * v[i - kk];
    }
  }
  // Haar normalization: Q diag(sign R_kk); then to row-major.
  Orthogonal o{n, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) o.q[i * n + j] = qm[j * n + i] * rdiag_sign[j];
  return o;
}

SymmetricMatrix conjugate(const Orthogonal& q, const SymmetricMatrix& a) {
  const std::size_t n = a.order();
  if (q.n != n) throw Error(ErrorKind::domain, "order mismatch");
  // B = Q A, then C = B Q^T with C_ij = sum_k B_ik Q_jk (rows of both).
  std::vector<double> b(n * n, 0.0);
  const auto& ad = a.data();
  for (std::size_t i = 0; i < n; ++i) {
    double* bi = b.data() + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double qik = q.q[i * n + k];
      if (qik == 0.0) continue;
      const double* ak = ad.data() + k * n;
      for (std::size_t j = 0; j < n; ++j) bi[j] += qik * ak[j];
    }
  }
  SymmetricMatrix c(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* bi = b.data() + i * n;
    for (std::size_t j = i; j < n; ++j) {
      const double* qj = q.q.data() + j * n;
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += bi[k] * qj[k];
      c.set(i, j, s);
    }
  }
  // C_ij and C_ji differ by rounding; the upper triangle is mirrored, which
  // is the symmetric part up to that rounding.
  return c;
}

// ---------------------------------------------------------------------------

EigenResult jacobi_eigen(const SymmetricMatrix& m, bool want_vectors, int max_sweeps) {
  const std::size_t n = m.order();
  std::vector<double> a = m.data();
  std::vector<double> v;
  if (want_vectors) {
    v.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  }
  const double fro = m.frobenius();
  const double target = 1e-12 * fro;
  const double skip = 0.5 * target / static_cast<double>(n);

  auto off = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
  };

  // Round-robin (tournament) ordering: each round pairs every index once, so
  // the n/2 rotations of a round are disjoint and commute. They are applied as
  // one pass over the rows of the pairs and one row-by-row pass for the
  // columns, keeping every access contiguous. A sweep is n-1 rounds and
  // rotates every (p, q) exactly once, as in the row-cyclic order.
  const std::size_t players = n + (n % 2);
  std::vector<std::size_t> ring(players);
  for (std::size_t i = 0; i < players; ++i) ring[i] = i;
  struct Rot {
    std::size_t p, q;
    double c, s;
  };
  std::vector<Rot> rots;
  rots.reserve(players / 2);

  EigenResult out;
  int sweep = 0;
  while (n > 1 && off() > target) {
    if (sweep == max_sweeps)
      throw Error(ErrorKind::no_convergence, "Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
    ++sweep;
    for (std::size_t round = 0; round + 1 < players; ++round) {
      rots.clear();
      for (std::size_t i = 0; i < players / 2; ++i) {
        std::size_t p = ring[i], q = ring[players - 1 - i];
        if (p >= n || q >= n) continue;  // bye
        if (p > q) std::swap(p, q);
        const double apq = a[p * n + q];
        // Entries this small cannot keep the off-diagonal mass above target
        // even all together (n of them per row), so they are left alone.
        if (apq == 0.0 || std::abs(apq) < skip) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        rots.push_back({p, q, c, t * c});
      }
      // next pairing: keep ring[0], rotate the rest
      std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
      if (rots.empty()) continue;

      for (const auto& r : rots) {
        double* rp = a.data() + r.p * n;
        double* rq = a.data() + r.q * n;
        for (std::size_t k = 0; k < n; ++k) {
          const double xp = rp[k], xq = rq[k];
          rp[k] = r.c * xp - r.s * xq;
          rq[k] = r.s * xp + r.c * xq;
        }
      }
      auto column_pass = [&](std::vector<double>& m) {
        for (std::size_t k = 0; k < n; ++k) {
          double* row = m.data() + k * n;
          for (const auto& r : rots) {
            const double xp = row[r.p], xq = row[r.q];
            row[r.p] = r.c * xp - r.s * xq;
            row[r.q] = r.s * xp + r.c * xq;
          }
        }
      };
      column_pass(a);
      for (const auto& r : rots) a[r.p * n + r.q] = a[r.q * n + r.p] = 0.0;
      if (want_vectors) column_pass(v);
    }
    // Rounding in the two passes can leave a ~1 ulp asymmetry; restore it.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) a[j * n + i] = a[i * n + j] = 0.5 * (a[i * n + j] + a[j * n + i]);
  }
  out.sweeps = sweep;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.eigenvalues[k] = a[order[k] * n + order[k]];
  if (want_vectors) {
    out.vectors.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) out.vectors[i * n + k] = v[i * n + order[k]];
  }

  std::vector<double> plus, minus, mod;
  for (double x : out.eigenvalues) {
    if (x > 0) plus.push_back(x);
    mod.push_back(std::abs(x));
  }
  for (auto it = out.eigenvalues.rbegin(); it != out.eigenvalues.rend(); ++it)
    if (*it < 0) minus.push_back(-*it);
  std::sort(mod.begin(), mod.end(), std::greater<>());
  out.signed_spectrum = SpectralSequence::signed_eigen(std::move(plus), std::move(minus));
  out.singular = SpectralSequence::singular(std::move(mod));
  return out;
}

double reconstruction_residual(const SymmetricMatrix& a, const EigenResult& e) {
  const std::size_t n = a.order();
  if (e.vectors.size() != n * n) throw Error(ErrorKind::domain, "eigenvectors were not computed");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double r = 0.0;
      for (std::size_t k = 0; k < n; ++k) r += e.vectors[i * n + k] * e.eigenvalues[k] * e.vectors[j * n + k];
      const double d = a(i, j) - r;
      s += d * d;
    }
  return std::sqrt(s);
}

double inverse_iteration(const SymmetricMatrix& a, double shift, int iterations) {
  const std::size_t n = a.order();
  // LU with partial pivoting of A - shift I.
  std::vector<double> lu(a.data());
  for (std::size_t i = 0; i < n; ++i) lu[i * n + i] -= shift;
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu[i * n + k]) > std::abs(lu[best * n + k])) best = i;
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[best * n + j]);
      std::swap(piv[k], piv[best]);
    }
    if (lu[k * n + k] == 0.0) lu[k * n + k] = 1e-300;  // shift is an exact eigenvalue
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu[i * n + k] /= lu[k * n + k];
      for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= f * lu[k * n + j];
    }
  }
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[piv[i]];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) y[i] -= lu[i * n + j] * y[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) y[i] -= lu[i * n + j] * y[j];
      y[i] /= lu[i * n + i];
    }
    double norm = 0.0;
    for (double z : y) norm += z * z;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
  }
  double num = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) ax += a(i, j) * x[j];
    num += x[i] * ax;
  }
  return num;
}

SymmetricMatrix plant_profile(const RegVarFunction& g, std::size_t n, double c_plus, double c_minus, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorKind::domain, "plant_profile needs n >= 2");
  if (!(c_plus >= 0) || !(c_minus >= 0)) throw Error(ErrorKind::domain, "profile constants must be non-negative");
  std::vector<double> d(n);
  if (c_minus == 0.0) {
    for (std::size_t j = 0; j < n; ++j) d[j] = c_plus * g(static_cast<double>(j));
  } else if (c_plus == 0.0) {
    for (std::size_t j = 0; j < n; ++j) d[j] = -c_minus * g(static_cast<double>(j));
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      const double gi = g(static_cast<double>(j / 2));
      d[j] = (j % 2 == 0) ? c_plus * gi : -c_minus * gi;
    }
  }
  return conjugate(Orthogonal::random(n, seed), SymmetricMatrix::diagonal(d));
}

SpectralSequence commutator_test(const SymmetricMatrix& t, const Orthogonal& q) {
  return jacobi_eigen(conjugate(q, t) - t).signed_spectrum;
}

void dump_matrix(const std::string& path, const SymmetricMatrix& a) {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
  const std::uint64_t n = a.order();
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(a.data().data()), static_cast<std::streamsize>(a.data().size() * sizeof(double)));
  if (!out) throw Error(ErrorKind::io, "short write to '" + path + "'");
}

SymmetricMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || n == 0 || n > SymmetricMatrix::default_cap) throw Error(ErrorKind::parse, path + ": bad matrix order");
  std::vector<double> data(n * n);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!in) throw Error(ErrorKind::parse, path + ": truncated matrix data");
  return SymmetricMatrix::from_dense(n, std::move(data));
}

}  // namespace lorentz
