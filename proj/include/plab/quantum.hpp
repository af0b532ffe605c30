// Copyright 2026 The plab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file quantum.hpp
/// Finite-dimensional quantum environments under d-copy access.
///
/// A learner that receives d copies of an unknown state rho_theta is a POVM
/// {M_h} on the d-fold tensor power, and its output law is the Born kernel
/// Q(h | theta) = tr(M_h rho_theta^{(x)d}). For two candidate states the
/// best simultaneous success is 1 + ||Delta||_1 / 2 with
/// Delta = rho_0^{(x)d} - rho_1^{(x)d}, attained by projecting onto the
/// positive part of Delta.

#ifndef PLAB_QUANTUM_HPP
#define PLAB_QUANTUM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "plab/kernel.hpp"
#include "plab/random.hpp"

namespace plab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultDimCap = 1024;

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor dimension cap: PLAB_DIM_CAP when set, else 2^10. A value that is
/// not a positive integer is an error.
inline std::size_t dim_cap_from_env() {
  const char* v = std::getenv("PLAB_DIM_CAP");
  if (v == nullptr || *v == '\0') return kDefaultDimCap;
  char* end = nullptr;
  const unsigned long long cap = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0' || cap == 0 || *v == '-')
    throw std::invalid_argument(std::string("PLAB_DIM_CAP must be a positive integer, got '") + v + "'");
  return static_cast<std::size_t>(cap);
}

namespace detail {

inline double hermitian_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Largest |eigenvalue| of a Hermitian matrix.
inline double hermitian_op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return hermitian_eigenvalues(m).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Hermitian (1e-12), eigenvalues >= -1e-10, unit trace (1e-12).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    if (detail::hermitian_defect(m_) > 1e-12)
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(m_.trace() - Complex(1.0)) > 1e-12)
      throw std::invalid_argument("DensityMatrix: trace differs from 1");
    if (detail::hermitian_eigenvalues(m_).minCoeff() < -1e-10)
      throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }

  /// |psi><psi| for a vector normalized here.
  static DensityMatrix pure(const CVector& psi) {
    const double n = psi.norm();
    if (!(n > 0)) throw std::invalid_argument("DensityMatrix::pure: zero vector");
    CVector u = psi / n;
    CMatrix m = u * u.adjoint();
    m = (m + m.adjoint()) * 0.5;
    return DensityMatrix(Trusted{}, std::move(m));
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, CMatrix m) : m_(std::move(m)) {}

  friend DensityMatrix tensor_power(const DensityMatrix&, std::size_t, std::size_t);

  CMatrix m_;
};

/// Two-or-more outcome measurement. Elements are Hermitian PSD (1e-10) and
/// sum to the identity within 1e-10 in operator norm.
class Povm {
 public:
  explicit Povm(std::vector<CMatrix> elements, std::vector<std::string> labels = {})
      : elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty()) throw std::invalid_argument("Povm: no elements");
    if (labels_.empty())
      for (std::size_t i = 0; i < elements_.size(); ++i) labels_.push_back(std::to_string(i));
    if (labels_.size() != elements_.size())
      throw std::invalid_argument("Povm: label count differs from element count");
    const auto n = elements_.front().rows();
    CMatrix total = CMatrix::Zero(n, n);
    for (const auto& e : elements_) {
      if (e.rows() != n || e.cols() != n) throw std::invalid_argument("Povm: element dimension mismatch");
      if (detail::hermitian_defect(e) > 1e-10) throw std::invalid_argument("Povm: element not Hermitian");
      if (detail::hermitian_eigenvalues(e).minCoeff() < -1e-10)
        throw std::invalid_argument("Povm: element not positive semidefinite");
      total += e;
    }
    if (detail::hermitian_op_norm(total - CMatrix::Identity(n, n)) > 1e-10)
      throw std::invalid_argument("Povm: elements do not sum to identity");
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(elements_.front().rows()); }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<CMatrix>& elements() const noexcept { return elements_; }
  const CMatrix& operator[](std::size_t h) const { return elements_.at(h); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<CMatrix> elements_;
  std::vector<std::string> labels_;
};

/// Kronecker power rho^{(x)d}; throws ResourceError when dim^d exceeds cap.
inline DensityMatrix tensor_power(const DensityMatrix& rho, std::size_t d,
                                  std::size_t cap = kDefaultDimCap) {
  if (d == 0) throw std::invalid_argument("tensor_power: d must be >= 1");
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    total *= rho.dim();
    if (total > cap)
      throw ResourceError("tensor_power: dimension " + std::to_string(rho.dim()) + "^" +
                          std::to_string(d) + " exceeds cap " + std::to_string(cap));
  }
  CMatrix out = rho.matrix();
  for (std::size_t i = 1; i < d; ++i) {
    CMatrix next = Eigen::kroneckerProduct(out, rho.matrix()).eval();
    out.swap(next);
  }
  return DensityMatrix(DensityMatrix::Trusted{}, std::move(out));
}

/// ||rho - sigma||_1: sum of absolute eigenvalues of the difference.
inline double trace_norm(const CMatrix& delta) {
  return detail::hermitian_eigenvalues(delta).cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  return trace_norm(rho.matrix() - sigma.matrix());
}

/// 2 sqrt(1 - gamma^{2d}) for pure states with overlap gamma.
inline double pure_distance_formula(double gamma, std::size_t d) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("pure_distance_formula: gamma outside [0,1]");
  if (d == 0) throw std::domain_error("pure_distance_formula: d must be >= 1");
  return 2.0 * std::sqrt(std::max(0.0, 1.0 - std::pow(gamma, 2.0 * static_cast<double>(d))));
}

struct HelstromResult {
  Povm povm;
  /// tr(M0 rho0^d) + tr(M1 rho1^d).
  double success_sum = 0;
  /// 1 + ||Delta||_1 / 2.
  double bound = 0;
  double trace_norm = 0;
  /// 1 - tr(M_theta rho_theta^d) for theta = 0, 1.
  double error0 = 0;
  double error1 = 0;
};

inline constexpr double kSpectrumTolerance = 1e-10;

/// M0 projects onto eigenvectors of Delta with eigenvalue > 1e-10; M1 = I - M0.
inline HelstromResult helstrom_povm(const DensityMatrix& rho0, const DensityMatrix& rho1,
                                    std::size_t d, std::size_t cap = kDefaultDimCap) {
  if (rho0.dim() != rho1.dim()) throw std::invalid_argument("helstrom_povm: dimension mismatch");
  const auto a = tensor_power(rho0, d, cap);
  const auto b = tensor_power(rho1, d, cap);
  const CMatrix delta = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(delta);
  const auto n = delta.rows();
  CMatrix m0 = CMatrix::Zero(n, n);
  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = es.eigenvalues()(i);
    norm += std::abs(lambda);
    if (lambda > kSpectrumTolerance) {
      const CVector v = es.eigenvectors().col(i);
      m0 += v * v.adjoint();
    }
  }
  m0 = (m0 + m0.adjoint()) * 0.5;
  CMatrix m1 = CMatrix::Identity(n, n) - m0;
  const double p0 = (m0 * a.matrix()).trace().real();
  const double p1 = (m1 * b.matrix()).trace().real();
  return HelstromResult{Povm({std::move(m0), std::move(m1)}, {"0", "1"}),
                        p0 + p1,
                        1.0 + 0.5 * norm,
                        norm,
                        1.0 - p0,
                        1.0 - p1};
}

/// Q(h | theta) = Re tr(M_h rho_theta^{(x)d}).
inline Kernel born_kernel(const Povm& povm, const std::vector<DensityMatrix>& states,
                          std::size_t d, std::size_t cap = kDefaultDimCap) {
  if (states.empty()) throw std::invalid_argument("born_kernel: no states");
  std::vector<double> q;
  q.reserve(states.size() * povm.size());
  for (const auto& rho : states) {
    const auto power = tensor_power(rho, d, cap);
    if (power.dim() != povm.dim()) throw std::invalid_argument("born_kernel: POVM dimension differs from dim^d");
    for (const auto& m : povm.elements()) q.push_back((m * power.matrix()).trace().real());
  }
  return Kernel(states.size(), povm.size(), std::move(q), 1e-10);
}

/// Smallest per-side error any d-copy measurement can guarantee for two pure
/// states with overlap gamma: (1 - sqrt(1 - gamma^{2d})) / 2.
inline double delta_min(double gamma, std::size_t d) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("delta_min: gamma outside [0,1]");
  if (d == 0) throw std::domain_error("delta_min: d must be >= 1");
  return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - std::pow(gamma, 2.0 * static_cast<double>(d)))));
}

/// Fewest copies compatible with per-side error delta < 1/2:
/// smallest d >= ln(1/(4 delta (1-delta))) / (-2 ln gamma).
inline std::size_t d_min(double gamma, double delta) {
  if (gamma == 0.0) throw std::domain_error("d_min: orthogonal states (gamma = 0) need no copies");
  if (gamma == 1.0) throw std::domain_error("d_min: identical states (gamma = 1) are never distinguishable");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("d_min: gamma outside (0,1)");
  if (!(delta > 0.0 && delta < 0.5)) throw std::domain_error("d_min: delta outside (0,1/2)");
  const double ratio = std::log(1.0 / (4.0 * delta * (1.0 - delta))) / (-2.0 * std::log(gamma));
  const double d = std::ceil(ratio * (1.0 - 1e-12));
  return d < 1.0 ? 1 : static_cast<std::size_t>(d);
}

struct DiscriminationBounds {
  double delta_min = 0;
  std::size_t d_min = 0;
};

inline DiscriminationBounds discrimination_bounds(double gamma, std::size_t d, double delta) {
  return {delta_min(gamma, d), d_min(gamma, delta)};
}

/// p(a,b | x,y) over finite alphabets, each (x,y) slice a distribution.
class CorrelationTable {
 public:
  CorrelationTable(std::size_t a, std::size_t b, std::size_t x, std::size_t y,
                   std::vector<double> p, double tol = 1e-12)
      : na_(a), nb_(b), nx_(x), ny_(y), p_(std::move(p)) {
    if (a == 0 || b == 0 || x == 0 || y == 0) throw std::invalid_argument("CorrelationTable: empty alphabet");
    if (p_.size() != a * b * x * y) throw std::invalid_argument("CorrelationTable: wrong entry count");
    for (std::size_t xi = 0; xi < nx_; ++xi)
      for (std::size_t yi = 0; yi < ny_; ++yi) {
        double s = 0;
        for (std::size_t ai = 0; ai < na_; ++ai)
          for (std::size_t bi = 0; bi < nb_; ++bi) {
            const double v = (*this)(ai, bi, xi, yi);
            if (v < -tol) throw std::invalid_argument("CorrelationTable: negative probability");
            s += v;
          }
        if (std::abs(s - 1.0) > tol) throw std::invalid_argument("CorrelationTable: slice not normalized");
      }
  }

  std::size_t outputs_a() const noexcept { return na_; }
  std::size_t outputs_b() const noexcept { return nb_; }
  std::size_t inputs_x() const noexcept { return nx_; }
  std::size_t inputs_y() const noexcept { return ny_; }

  double operator()(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
    return p_[((a * nb_ + b) * nx_ + x) * ny_ + y];
  }
  const std::vector<double>& entries() const noexcept { return p_; }

 private:
  std::size_t na_, nb_, nx_, ny_;
  std::vector<double> p_;
};

/// p(a,b|x,y) = tr((M_a^x (x) N_b^y) rho_AB).
inline CorrelationTable quantum_correlation(const DensityMatrix& rho_ab, const std::vector<Povm>& alice,
                                            const std::vector<Povm>& bob) {
  if (alice.empty() || bob.empty()) throw std::invalid_argument("quantum_correlation: no measurement settings");
  const auto da = alice.front().dim();
  const auto db = bob.front().dim();
  const auto na = alice.front().size();
  const auto nb = bob.front().size();
  for (const auto& m : alice)
    if (m.dim() != da || m.size() != na) throw std::invalid_argument("quantum_correlation: Alice's settings differ in shape");
  for (const auto& m : bob)
    if (m.dim() != db || m.size() != nb) throw std::invalid_argument("quantum_correlation: Bob's settings differ in shape");
  if (rho_ab.dim() != da * db) throw std::invalid_argument("quantum_correlation: state dimension is not dA * dB");

  const auto nx = alice.size();
  const auto ny = bob.size();
  std::vector<double> p(na * nb * nx * ny);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
          const CMatrix op = Eigen::kroneckerProduct(alice[x][a], bob[y][b]).eval();
          p[((a * nb + b) * nx + x) * ny + y] = (op * rho_ab.matrix()).trace().real();
        }
  return CorrelationTable(na, nb, nx, ny, std::move(p), 1e-10);
}

struct NoSignalingVerdict {
  bool passes = false;
  /// Largest spread of a marginal across the other party's inputs.
  double max_violation = 0;
};

inline NoSignalingVerdict check_no_signaling(const CorrelationTable& t, double tol) {
  double worst = 0;
  // Bob's marginal p(b|x,y) must not depend on x.
  for (std::size_t b = 0; b < t.outputs_b(); ++b)
    for (std::size_t y = 0; y < t.inputs_y(); ++y) {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t x = 0; x < t.inputs_x(); ++x) {
        double s = 0;
        for (std::size_t a = 0; a < t.outputs_a(); ++a) s += t(a, b, x, y);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      worst = std::max(worst, hi - lo);
    }
  // Alice's marginal p(a|x,y) must not depend on y.
  for (std::size_t a = 0; a < t.outputs_a(); ++a)
    for (std::size_t x = 0; x < t.inputs_x(); ++x) {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t y = 0; y < t.inputs_y(); ++y) {
        double s = 0;
        for (std::size_t b = 0; b < t.outputs_b(); ++b) s += t(a, b, x, y);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      worst = std::max(worst, hi - lo);
    }
  return {worst <= tol, worst};
}

// Random instances. Haar pure states from normalized complex Gaussian
// vectors; mixed states from the Ginibre ensemble G G^dag / tr(G G^dag);
// POVMs by normalizing random PSD blocks A_i with S^{-1/2} A_i S^{-1/2}.

template <class Rng>
CMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  return g;
}

template <class Rng>
CVector random_pure_vector(std::size_t dim, Rng& rng) {
  CVector v = random_ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

template <class Rng>
DensityMatrix random_pure_state(std::size_t dim, Rng& rng) {
  return DensityMatrix::pure(random_pure_vector(dim, rng));
}

template <class Rng>
DensityMatrix random_density(std::size_t dim, Rng& rng, std::size_t rank = 0) {
  if (rank == 0) rank = dim;
  const CMatrix g = random_ginibre(dim, rank, rng);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = (m + m.adjoint()) * 0.5;
  return DensityMatrix(std::move(m));
}

namespace detail {

inline CMatrix inverse_sqrt_psd(const CMatrix& s) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  Eigen::VectorXd inv = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

template <class Rng>
Povm random_povm(std::size_t dim, std::size_t outcomes, Rng& rng) {
  if (outcomes == 0) throw std::invalid_argument("random_povm: need at least one outcome");
  std::vector<CMatrix> blocks;
  CMatrix total = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < outcomes; ++i) {
    const CMatrix g = random_ginibre(dim, dim, rng);
    blocks.push_back(g * g.adjoint());
    total += blocks.back();
  }
  const CMatrix w = detail::inverse_sqrt_psd(total);
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (auto& b : blocks) {
    b = w * b * w;
    b = (b + b.adjoint()) * 0.5;
    sum += b;
  }
  // Fold the residual of the completeness relation into the last element.
  blocks.back() += CMatrix::Identity(dim, dim) - sum;
  blocks.back() = (blocks.back() + blocks.back().adjoint()) * 0.5;
  return Povm(std::move(blocks));
}

/// Projective measurement in the columns of a unitary (computational basis
/// when the identity is passed).
inline Povm projective_povm(const CMatrix& basis) {
  std::vector<CMatrix> el;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    const CVector v = basis.col(i);
    el.push_back(v * v.adjoint());
  }
  return Povm(std::move(el));
}

/// Two unit vectors in C^dim with |<psi|phi>| = gamma: psi is Haar random
/// and phi = gamma psi + sqrt(1-gamma^2) psi_perp.
template <class Rng>
std::pair<CVector, CVector> pure_pair_with_overlap(double gamma, std::size_t dim, Rng& rng) {
  if (dim < 2) throw std::invalid_argument("pure_pair_with_overlap: dim must be >= 2");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("pure_pair_with_overlap: gamma outside [0,1]");
  const CVector psi = random_pure_vector(dim, rng);
  CVector r = random_pure_vector(dim, rng);
  r -= psi * psi.dot(r);
  r /= r.norm();
  const CVector phi = gamma * psi + std::sqrt(1.0 - gamma * gamma) * r;
  return {psi, phi};
}

/// |0> and gamma|0> + sqrt(1-gamma^2)|1> on a qubit.
inline std::pair<DensityMatrix, DensityMatrix> qubit_pair_with_overlap(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("qubit_pair_with_overlap: gamma outside [0,1]");
  CVector psi(2), phi(2);
  psi << 1.0, 0.0;
  phi << gamma, std::sqrt(1.0 - gamma * gamma);
  return {DensityMatrix::pure(psi), DensityMatrix::pure(phi)};
}

}  // namespace plab

#endif  // PLAB_QUANTUM_HPP
