#pragma once

// Dense real symmetric matrices, a cyclic Jacobi eigensolver and seeded random
// orthogonal conjugations for testing operator inequalities on actual sums.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lorentz/rv.hpp"
#include "lorentz/spectra.hpp"

namespace lorentz {

class SymmetricMatrix {
 public:
  static constexpr std::size_t default_cap = 512;

  explicit SymmetricMatrix(std::size_t n, std::size_t cap = default_cap);
  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix diagonal(const std::vector<double>& d);
  /// Row-major n x n data; throws unless exactly symmetric.
  static SymmetricMatrix from_dense(std::size_t n, std::vector<double> data);

  std::size_t order() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  /// Sets A[i][j] and A[j][i].
  void set(std::size_t i, std::size_t j, double v);
  const std::vector<double>& data() const noexcept { return a_; }

  double trace() const;
  double frobenius() const;

  SymmetricMatrix operator+(const SymmetricMatrix& o) const;
  SymmetricMatrix operator-(const SymmetricMatrix& o) const;
  SymmetricMatrix scaled(double c) const;

  bool operator==(const SymmetricMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

/// Counter-based generator: the k-th draw is splitmix64(seed + k * golden), so
/// any stream position can be reproduced from (seed, k) alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}
  std::uint64_t next_u64();
  double uniform();  // (0, 1)
  double normal();   // Box-Muller, no cached second variate

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Row-major orthogonal n x n matrix.
struct Orthogonal {
  std::size_t n = 0;
  std::vector<double> q;

  static Orthogonal identity(std::size_t n);
  /// Q from the Householder QR of an n x n Gaussian matrix, signs fixed so that
  /// R has a positive diagonal.
  static Orthogonal random(std::size_t n, std::uint64_t seed);
  /// A permutation matrix: row i has its 1 in column perm[i].
  static Orthogonal permutation(const std::vector<std::size_t>& perm);
};

/// Q A Q^T, symmetrized exactly.
SymmetricMatrix conjugate(const Orthogonal& q, const SymmetricMatrix& a);

struct EigenResult {
  std::vector<double> eigenvalues;  // descending
  std::vector<double> vectors;      // row-major; column k belongs to eigenvalues[k]; empty unless requested
  SpectralSequence signed_spectrum = SpectralSequence::signed_eigen({}, {});
  SpectralSequence singular = SpectralSequence::singular({});
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass is at most
/// 1e-12 ||A||_F. Exact zeros belong to neither signed part.
EigenResult jacobi_eigen(const SymmetricMatrix& a, bool want_vectors = false, int max_sweeps = 100);

/// ||A - V diag(lambda) V^T||_F for a result computed with vectors.
double reconstruction_residual(const SymmetricMatrix& a, const EigenResult& e);

/// Shifted inverse iteration from a fixed start vector; returns the Rayleigh
/// quotient of the converged vector. Independent of the Jacobi code path.
double inverse_iteration(const SymmetricMatrix& a, double shift, int iterations = 50);

/// Q diag(d) Q^T where d interleaves +c_plus g(i) and -c_minus g(i) (all of one
/// sign when the other constant is zero) and Q = Orthogonal::random(n, seed).
SymmetricMatrix plant_profile(const RegVarFunction& g, std::size_t n, double c_plus, double c_minus, std::uint64_t seed);

/// Signed spectrum of Q T Q^T - T.
SpectralSequence commutator_test(const SymmetricMatrix& t, const Orthogonal& q);

/// n as a little-endian uint64, then n^2 little-endian doubles.
void dump_matrix(const std::string& path, const SymmetricMatrix& a);
SymmetricMatrix load_matrix(const std::string& path);

}  // namespace lorentz
