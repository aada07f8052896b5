// Copyright 2026 The cvcluster Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Gaussian states in the covariance-matrix picture: quadrature orderings,
// symplectic forms, squeezed vacuum preparation and symplectic propagation.
//
// Convention: vacuum quadrature variance is 1/2, so a pure state has a
// covariance V with 2V symplectic and det(V) = 4^-N.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cvcluster {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-9;

/// Block is (x_1..x_N, p_1..p_N); Interleaved is (x_1, p_1, ..., x_N, p_N).
enum class QuadratureOrdering { Block, Interleaved };

inline std::string_view to_string(QuadratureOrdering ordering) {
    return ordering == QuadratureOrdering::Block ? "block" : "interleaved";
}

inline QuadratureOrdering parse_ordering(std::string_view text) {
    if (text == "block") {
        return QuadratureOrdering::Block;
    }
    if (text == "interleaved") {
        return QuadratureOrdering::Interleaved;
    }
    throw std::invalid_argument("unknown quadrature ordering '" + std::string(text) + "'");
}

/// Index of x_k in a phase-space vector of n_modes modes.
inline std::size_t x_index(std::size_t k, [[maybe_unused]] std::size_t n_modes, QuadratureOrdering ordering) {
    return ordering == QuadratureOrdering::Block ? k : 2 * k;
}

/// Index of p_k in a phase-space vector of n_modes modes.
inline std::size_t p_index(std::size_t k, std::size_t n_modes, QuadratureOrdering ordering) {
    return ordering == QuadratureOrdering::Block ? n_modes + k : 2 * k + 1;
}

/// Permutation taking `from`-ordered coordinates to `to`-ordered ones:
/// result[i] is the `from` index that lands at position i of `to`.
inline std::vector<std::size_t> ordering_permutation(
    std::size_t n_modes, QuadratureOrdering from, QuadratureOrdering to) {
    std::vector<std::size_t> perm(2 * n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        perm[x_index(k, n_modes, to)] = x_index(k, n_modes, from);
        perm[p_index(k, n_modes, to)] = p_index(k, n_modes, from);
    }
    return perm;
}

inline Vector permute(const Vector &v, const std::vector<std::size_t> &perm) {
    Vector out(v.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(perm[i]));
    }
    return out;
}

/// P M P^T for the permutation matrix P encoded by `perm`.
inline Matrix conjugate(const Matrix &m, const std::vector<std::size_t> &perm) {
    const auto n = static_cast<Eigen::Index>(perm.size());
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = m(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j]));
        }
    }
    return out;
}

inline std::size_t modes_from_dimension(Eigen::Index rows, Eigen::Index cols) {
    if (rows != cols) {
        throw std::invalid_argument("phase-space matrix must be square");
    }
    if (rows == 0 || rows % 2 != 0) {
        throw std::invalid_argument(
            "phase-space matrix must have positive even dimension, got " + std::to_string(rows));
    }
    return static_cast<std::size_t>(rows / 2);
}

/// Largest absolute entry, 0 for an empty matrix.
inline double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// log|det(m)| via partial-pivot LU; -inf for a singular matrix.
inline double log_abs_determinant(const Matrix &m) {
    Eigen::PartialPivLU<Matrix> lu(m);
    const Matrix &packed = lu.matrixLU();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        acc += std::log(std::abs(packed(i, i)));
    }
    return acc;
}

inline double determinant(const Matrix &m) {
    return Eigen::PartialPivLU<Matrix>(m).determinant();
}

// ---------------------------------------------------------------------------
// Squeezing

/// Converts a squeezing level in decibels to the squeezing parameter r, so
/// that e^{-2r}/2 sits `db` decibels below the vacuum variance.
inline double db_to_r(double db) {
    if (!std::isfinite(db) || db < 0.0) {
        throw std::invalid_argument("squeezing level must be a finite non-negative dB value");
    }
    return db * std::numbers::ln10 / 20.0;
}

inline double r_to_db(double r) {
    if (!std::isfinite(r) || r < 0.0) {
        throw std::invalid_argument("squeezing parameter r must be finite and non-negative");
    }
    return 20.0 * r / std::numbers::ln10;
}

class SqueezingSpec {
   public:
    static SqueezingSpec from_db(double db) {
        return SqueezingSpec(db_to_r(db), db);
    }
    static SqueezingSpec from_r(double r) {
        return SqueezingSpec(r, r_to_db(r));
    }

    double r() const {
        return r_;
    }
    double db() const {
        return db_;
    }
    /// Anti-squeezed (x) variance e^{2r}/2.
    double anti_squeezed_variance() const {
        return 0.5 * std::exp(2.0 * r_);
    }
    /// Squeezed (p) variance e^{-2r}/2.
    double squeezed_variance() const {
        return 0.5 * std::exp(-2.0 * r_);
    }

   private:
    SqueezingSpec(double r, double db) : r_(r), db_(db) {
    }
    double r_;
    double db_;
};

// ---------------------------------------------------------------------------
// Symplectic structure

struct SymplecticForm {
    std::size_t n_modes;
    QuadratureOrdering ordering;
    Matrix matrix;
};

/// The canonical form Omega: direct sum of [[0,1],[-1,0]] when interleaved,
/// [[0, I],[-I, 0]] in block ordering.
inline SymplecticForm symplectic_form(std::size_t n_modes, QuadratureOrdering ordering) {
    if (n_modes == 0) {
        throw std::invalid_argument("symplectic form needs at least one mode");
    }
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    Matrix omega = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < n_modes; ++k) {
        const auto x = static_cast<Eigen::Index>(x_index(k, n_modes, ordering));
        const auto p = static_cast<Eigen::Index>(p_index(k, n_modes, ordering));
        omega(x, p) = 1.0;
        omega(p, x) = -1.0;
    }
    return {n_modes, ordering, std::move(omega)};
}

/// max|S^T Omega S - Omega| in the given ordering.
inline double symplectic_residual(const Matrix &s, QuadratureOrdering ordering) {
    const std::size_t n = modes_from_dimension(s.rows(), s.cols());
    const Matrix omega = symplectic_form(n, ordering).matrix;
    return max_abs(s.transpose() * omega * s - omega);
}

inline bool is_symplectic(const Matrix &s, QuadratureOrdering ordering, double tolerance = kDefaultTolerance) {
    return symplectic_residual(s, ordering) <= tolerance;
}

/// A real 2N x 2N matrix S with S^T Omega S = Omega, checked on construction.
class SymplecticTransform {
   public:
    SymplecticTransform(Matrix matrix, QuadratureOrdering ordering, double tolerance = kDefaultTolerance)
        : n_modes_(modes_from_dimension(matrix.rows(), matrix.cols())),
          ordering_(ordering),
          matrix_(std::move(matrix)) {
        const double residual = symplectic_residual(matrix_, ordering_);
        if (!(residual <= tolerance)) {
            throw std::invalid_argument(
                "matrix is not symplectic: max|S^T Omega S - Omega| = " + std::to_string(residual));
        }
    }

    static SymplecticTransform identity(std::size_t n_modes, QuadratureOrdering ordering) {
        const auto dim = static_cast<Eigen::Index>(2 * n_modes);
        return SymplecticTransform(Matrix::Identity(dim, dim), ordering, 0.0);
    }

    std::size_t n_modes() const {
        return n_modes_;
    }
    QuadratureOrdering ordering() const {
        return ordering_;
    }
    const Matrix &matrix() const {
        return matrix_;
    }

    SymplecticTransform reordered(QuadratureOrdering target) const {
        if (target == ordering_) {
            return *this;
        }
        return SymplecticTransform(
            conjugate(matrix_, ordering_permutation(n_modes_, ordering_, target)), target, 0.0);
    }

    /// Composition: (a * b) acts as b first, then a.
    friend SymplecticTransform operator*(const SymplecticTransform &a, const SymplecticTransform &b) {
        if (a.n_modes_ != b.n_modes_ || a.ordering_ != b.ordering_) {
            throw std::invalid_argument("cannot compose symplectic transforms of different shape or ordering");
        }
        SymplecticTransform out = a;
        out.matrix_ = a.matrix_ * b.matrix_;
        return out;
    }

   private:
    std::size_t n_modes_;
    QuadratureOrdering ordering_;
    Matrix matrix_;
};

inline bool is_symplectic(const SymplecticTransform &s, double tolerance = kDefaultTolerance) {
    return is_symplectic(s.matrix(), s.ordering(), tolerance);
}

// ---------------------------------------------------------------------------
// Gaussian states

/// Covariance matrix plus mean vector of an N-mode Gaussian state.
///
/// The covariance must be exactly symmetric with positive, finite diagonal and
/// det(V) >= 4^-N (the uncertainty-principle floor, checked in log space).
class GaussianState {
   public:
    explicit GaussianState(Matrix covariance, QuadratureOrdering ordering = QuadratureOrdering::Block)
        : n_modes_(modes_from_dimension(covariance.rows(), covariance.cols())),
          ordering_(ordering),
          covariance_(std::move(covariance)),
          mean_(Vector::Zero(covariance_.rows())) {
        validate();
    }

    GaussianState(Vector mean, Matrix covariance, QuadratureOrdering ordering)
        : n_modes_(modes_from_dimension(covariance.rows(), covariance.cols())),
          ordering_(ordering),
          covariance_(std::move(covariance)),
          mean_(std::move(mean)) {
        validate();
    }

    std::size_t n_modes() const {
        return n_modes_;
    }
    QuadratureOrdering ordering() const {
        return ordering_;
    }
    const Matrix &covariance() const {
        return covariance_;
    }
    const Vector &mean() const {
        return mean_;
    }

   private:
    void validate() const {
        if (mean_.size() != covariance_.rows()) {
            throw std::invalid_argument("mean vector length does not match covariance dimension");
        }
        if (!covariance_.allFinite() || !mean_.allFinite()) {
            throw std::invalid_argument("covariance and mean must be finite");
        }
        for (Eigen::Index i = 0; i < covariance_.rows(); ++i) {
            if (!(covariance_(i, i) > 0.0)) {
                throw std::invalid_argument("covariance diagonal must be positive");
            }
            for (Eigen::Index j = i + 1; j < covariance_.cols(); ++j) {
                if (covariance_(i, j) != covariance_(j, i)) {
                    throw std::invalid_argument("covariance must be exactly symmetric");
                }
            }
        }
        const double floor = -static_cast<double>(n_modes_) * std::log(4.0);
        const double log_det = log_abs_determinant(covariance_);
        // Relative slack on det(V) of 1e-6 absorbs LU round-off on pure states.
        if (!(log_det >= floor - 1e-6)) {
            throw std::invalid_argument("covariance violates det(V) >= 4^-N");
        }
    }

    std::size_t n_modes_;
    QuadratureOrdering ordering_;
    Matrix covariance_;
    Vector mean_;
};

/// N momentum-squeezed vacua: x variance e^{2r}/2, p variance e^{-2r}/2.
inline GaussianState squeezed_vacuum_covariance(
    std::size_t n_modes, const SqueezingSpec &squeezing,
    QuadratureOrdering ordering = QuadratureOrdering::Block) {
    if (n_modes == 0) {
        throw std::invalid_argument("squeezed vacuum needs at least one mode");
    }
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    Matrix v = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < n_modes; ++k) {
        const auto x = static_cast<Eigen::Index>(x_index(k, n_modes, ordering));
        const auto p = static_cast<Eigen::Index>(p_index(k, n_modes, ordering));
        v(x, x) = squeezing.anti_squeezed_variance();
        v(p, p) = squeezing.squeezed_variance();
    }
    return GaussianState(std::move(v), ordering);
}

/// V' = S V S^T, d' = S d + displacement. The result is symmetrized so that
/// V' is exactly symmetric regardless of product summation order.
inline GaussianState apply_symplectic(
    const GaussianState &state, const SymplecticTransform &s,
    const std::optional<Vector> &displacement = std::nullopt) {
    if (state.n_modes() != s.n_modes()) {
        throw std::invalid_argument(
            "mode count mismatch: state has " + std::to_string(state.n_modes()) + ", transform has " +
            std::to_string(s.n_modes()));
    }
    if (state.ordering() != s.ordering()) {
        throw std::invalid_argument("quadrature ordering mismatch between state and transform");
    }
    const Matrix product = s.matrix() * state.covariance() * s.matrix().transpose();
    Matrix symmetric = 0.5 * (product + product.transpose());
    Vector mean = s.matrix() * state.mean();
    if (displacement) {
        if (displacement->size() != mean.size()) {
            throw std::invalid_argument("displacement length does not match state dimension");
        }
        mean += *displacement;
    }
    return GaussianState(std::move(mean), std::move(symmetric), state.ordering());
}

/// max|(2V) Omega (2V)^T - Omega|; zero exactly for pure states.
inline double purity_residual(const GaussianState &state) {
    const Matrix omega = symplectic_form(state.n_modes(), state.ordering()).matrix;
    const Matrix twice = 2.0 * state.covariance();
    return max_abs(twice * omega * twice.transpose() - omega);
}

inline bool is_pure(const GaussianState &state, double tolerance = kDefaultTolerance) {
    return purity_residual(state) <= tolerance;
}

inline GaussianState reorder_state(const GaussianState &state, QuadratureOrdering target) {
    if (target == state.ordering()) {
        return state;
    }
    const auto perm = ordering_permutation(state.n_modes(), state.ordering(), target);
    return GaussianState(permute(state.mean(), perm), conjugate(state.covariance(), perm), target);
}

}  // namespace cvcluster
