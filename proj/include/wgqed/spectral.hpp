// spectral.hpp: Biorthogonal eigen-analysis of M and M_tot and bound-state classification

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/spin_model.hpp"

namespace wgqed {

// Eigenvector matrices with condition number above this are treated as defective.
inline constexpr double kDefectThreshold = 1e-8;

struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix right;  // columns e_alpha, unit norm
    Matrix left;   // columns ebar_alpha with <ebar_alpha|e_beta> = delta
    bool diagonalizable{true};
    double defect_measure{1.0};  // sigma_min / sigma_max of `right`

    Eigen::Index size() const noexcept { return eigenvalues.size(); }

    // max |<ebar_a|e_b> - delta_ab|
    double biorthogonality_error() const {
        const Matrix overlap = left.adjoint() * right;
        return (overlap - Matrix::Identity(size(), size())).cwiseAbs().maxCoeff();
    }

    // max |sum_a e_a ebar_a^dagger - 1|
    double completeness_error() const {
        const Matrix sum = right * left.adjoint();
        return (sum - Matrix::Identity(size(), size())).cwiseAbs().maxCoeff();
    }
};

// Right eigenpairs sorted by (Re, Im); left vectors are the rows of the inverse eigenvector
// matrix, so biorthonormality holds by construction, degenerate clusters included.
inline SpectralDecomposition eigendecompose(const Matrix& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "eigendecompose needs a square matrix");
    }
    if (!matrix.allFinite()) {
        throw Error(ErrorCode::InvalidConfig, "eigendecompose: non-finite matrix entries");
    }
    const auto n = matrix.rows();
    Eigen::ComplexEigenSolver<Matrix> solver(matrix, true);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "complex Schur iteration did not converge");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto& vals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (vals(a).real() != vals(b).real()) return vals(a).real() < vals(b).real();
        return vals(a).imag() < vals(b).imag();
    });

    SpectralDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.right.resize(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const auto src = order[static_cast<std::size_t>(c)];
        dec.eigenvalues(c) = vals(src);
        Vector col = solver.eigenvectors().col(src);
        const double nrm = col.norm();
        dec.right.col(c) = nrm > 0.0 ? Vector(col / nrm) : col;
    }

    Eigen::JacobiSVD<Matrix> svd(dec.right);
    const auto& sv = svd.singularValues();
    dec.defect_measure = sv(0) > 0.0 ? sv(n - 1) / sv(0) : 0.0;
    dec.diagonalizable = dec.defect_measure >= kDefectThreshold;

    if (dec.diagonalizable) {
        dec.left = dec.right.partialPivLu().inverse().adjoint();
    } else {
        dec.left = dec.right.completeOrthogonalDecomposition().pseudoInverse().adjoint();
    }
    return dec;
}

// max_alpha ||A e_alpha - E_alpha e_alpha||
inline double eigen_residual(const Matrix& matrix, const SpectralDecomposition& dec) {
    double worst = 0.0;
    for (Eigen::Index a = 0; a < dec.size(); ++a) {
        const Vector r = matrix * dec.right.col(a) - dec.eigenvalues(a) * dec.right.col(a);
        worst = std::max(worst, r.norm());
    }
    return worst;
}

// ----------------------------------------------------------------------------- classification

enum class StateClass { Bound, TransmissionZero, BicCandidate };

constexpr std::string_view to_string(StateClass c) noexcept {
    switch (c) {
    case StateClass::Bound: return "BOUND";
    case StateClass::TransmissionZero: return "TRANSMISSION_ZERO";
    case StateClass::BicCandidate: return "BIC_CANDIDATE";
    }
    return "UNKNOWN";
}

struct Tolerances {
    double tol_real{0.0};   // |Im E| below this counts as real
    double tol_match{0.0};  // distance at which an M eigenvalue matches an M_tot eigenvalue
};

inline Tolerances default_tolerances(const Matrix& M) {
    const double n = frobenius_norm(M);
    return {1e-9 * n, 1e-7 * n};
}

struct BoundEntry {
    cplx energy;
    Vector right;  // e_{j,alpha}
    Vector left;   // ebar_{j,alpha}
    StateClass cls{StateClass::Bound};
};

struct BoundStateSet {
    std::vector<BoundEntry> entries;
    std::size_t n_bound{0};
    std::size_t n_zero{0};
    std::size_t n_bic{0};
    bool include_bic{true};
    bool defective{false};  // M or M_tot failed the diagonalizability test

    // Bound-state count entering the Levinson relation.
    std::size_t n_b() const noexcept { return n_bound + (include_bic ? n_bic : 0); }
};

inline BoundStateSet classify(const SpectralDecomposition& m_dec, const SpectralDecomposition& mtot_dec,
                              const Tolerances& tol, bool include_bic = true) {
    if (m_dec.size() != mtot_dec.size()) {
        throw Error(ErrorCode::DimensionMismatch, "classify: decompositions differ in dimension");
    }
    BoundStateSet set;
    set.include_bic = include_bic;
    set.defective = !m_dec.diagonalizable || !mtot_dec.diagonalizable;
    // One-to-one matching: a real eigenvalue of M with higher multiplicity than in M_tot is
    // still a zero of t_k.
    std::vector<bool> used(static_cast<std::size_t>(mtot_dec.size()), false);
    for (Eigen::Index a = 0; a < m_dec.size(); ++a) {
        const cplx e = m_dec.eigenvalues(a);
        StateClass cls;
        if (e.imag() < -tol.tol_real) {
            cls = StateClass::Bound;
            ++set.n_bound;
        } else if (std::abs(e.imag()) <= tol.tol_real) {
            bool matched = false;
            for (Eigen::Index b = 0; b < mtot_dec.size() && !matched; ++b) {
                if (used[std::size_t(b)] || std::abs(e - mtot_dec.eigenvalues(b)) > tol.tol_match) continue;
                used[std::size_t(b)] = matched = true;
            }
            cls = matched ? StateClass::BicCandidate : StateClass::TransmissionZero;
            ++(matched ? set.n_bic : set.n_zero);
        } else {
            continue;
        }
        set.entries.push_back(BoundEntry{e, m_dec.right.col(a), m_dec.left.col(a), cls});
    }
    return set;
}

struct SpinSpectrum {
    SpectralDecomposition m;
    SpectralDecomposition m_tot;
    Tolerances tolerances;
    BoundStateSet states;
};

inline SpinSpectrum analyze(const SpinModel& model, std::optional<Tolerances> tol = std::nullopt,
                            bool include_bic = true) {
    SpinSpectrum out{eigendecompose(model.M), eigendecompose(model.M_tot),
                     tol.value_or(default_tolerances(model.M)), {}};
    out.states = classify(out.m, out.m_tot, out.tolerances, include_bic);
    return out;
}

// ----------------------------------------------------------------------------- thresholds

// Number of eigenvalues strictly below the real axis (no tolerance band).
inline std::size_t count_below_axis(const Matrix& M) {
    Eigen::ComplexEigenSolver<Matrix> solver(M, false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "complex Schur iteration did not converge");
    }
    const auto& vals = solver.eigenvalues();
    return static_cast<std::size_t>(std::count_if(vals.begin(), vals.end(),
                                                  [](const cplx& e) { return e.imag() < 0.0; }));
}

struct Threshold {
    double parameter{0.0};
    cplx crossing;  // eigenvalue of M closest to the real axis at `parameter`
    std::size_t count_below{0};
    std::size_t count_above{0};
};

using ModelFamily = std::function<SpinModel(double)>;

// Locates the parameter at which an eigenvalue of M crosses the real axis by bisection on
// the number of eigenvalues below the axis.
inline Threshold bound_state_threshold(const ModelFamily& family, double lo, double hi,
                                       double tol = 1e-9) {
    std::size_t n_lo = count_below_axis(family(lo).M);
    const std::size_t n_hi = count_below_axis(family(hi).M);
    if (n_lo == n_hi) {
        throw Error(ErrorCode::NoBracket, "bound-state count is " + std::to_string(n_lo) +
                                              " at both ends of the bracket");
    }
    const std::size_t n_start = n_lo;
    while (std::abs(hi - lo) > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (count_below_axis(family(mid).M) == n_start) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double at = 0.5 * (lo + hi);
    Eigen::ComplexEigenSolver<Matrix> solver(family(at).M, false);
    const auto& vals = solver.eigenvalues();
    cplx crossing = vals(0);
    for (Eigen::Index i = 1; i < vals.size(); ++i) {
        if (std::abs(vals(i).imag()) < std::abs(crossing.imag())) crossing = vals(i);
    }
    return Threshold{at, crossing, n_start, n_hi};
}

// Preset family parametrized by Gamma / Gamma_tot.
inline ModelFamily preset_ratio_family(PresetFamily family, double omega_eg, double gamma_total = 1.0) {
    return [=](double ratio) {
        auto p = make_preset_from_ratio(family, ratio, omega_eg, gamma_total);
        return build_spin_model(p.config, p.reservoir);
    };
}

} // namespace wgqed
