// scattering.hpp: Single-photon transmission, scattering and bound-state wavefunctions,
// and the winding-number check of the dissipative Levinson relation.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string_view>
#include <utility>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/parallel.hpp"
#include "wgqed/spectral.hpp"
#include "wgqed/spin_model.hpp"

namespace wgqed {

enum class Mode { Markov, Exact };

constexpr std::string_view to_string(Mode m) noexcept { return m == Mode::Markov ? "markov" : "exact"; }

// omega + i0 (retarded) or omega - i0 (advanced) on the real axis.
enum class Branch { Retarded, Advanced };

// ----------------------------------------------------------------------------- propagator

namespace detail {
inline cplx propagator(double eta, cplx omega, double z) {
    return -eta * I * step(eta * z) * std::exp(I * omega * z);
}
} // namespace detail

// Free-photon propagator G_omega(z) = -eta i Theta(eta z) exp(i omega z), eta = sign Im(omega).
inline cplx propagator_G(cplx omega, double z) {
    if (omega.imag() == 0.0) {
        throw Error(ErrorCode::OnRealAxis, "propagator on the real axis needs an explicit branch");
    }
    return detail::propagator(omega.imag() > 0.0 ? 1.0 : -1.0, omega, z);
}

inline cplx propagator_G(double omega, Branch branch, double z) {
    return detail::propagator(branch == Branch::Retarded ? 1.0 : -1.0, cplx{omega, 0.0}, z);
}

// ----------------------------------------------------------------------------- transmission

inline constexpr double kPoleDistance = 1e-12;

inline cplx pole_sentinel() noexcept {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, inf};
}

inline bool is_pole_sentinel(cplx t) noexcept { return std::isinf(t.real()) || std::isinf(t.imag()); }

namespace detail {

// det(a) / det(b) from LU pivots, multiplied pairwise so large k does not overflow.
inline cplx determinant_ratio(const Matrix& a, const Matrix& b) {
    Eigen::PartialPivLU<Matrix> lua(a);
    Eigen::PartialPivLU<Matrix> lub(b);
    cplx ratio = static_cast<double>(lua.permutationP().determinant() * lub.permutationP().determinant());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        ratio *= lua.matrixLU()(i, i) / lub.matrixLU()(i, i);
    }
    return ratio;
}

inline bool near_eigenvalue(double k, const Vector& eigs) {
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        if (std::abs(cplx{k, 0.0} - eigs(i)) <= kPoleDistance) return true;
    }
    return false;
}

inline Vector eigenvalues_only(const Matrix& m) {
    Eigen::ComplexEigenSolver<Matrix> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "complex Schur iteration did not converge");
    }
    return solver.eigenvalues();
}

} // namespace detail

// Evaluates t_k = det(k - M) / det(k - M_tot). Markov mode reuses the model's matrices; exact
// mode rebuilds M(k), M_tot(k) with the propagation phase taken at k.
class TransmissionEvaluator {
public:
    TransmissionEvaluator(const SpinModel& model, Mode mode) : model_(&model), mode_(mode) {
        if (mode_ == Mode::Markov) mtot_eigs_ = detail::eigenvalues_only(model.M_tot);
    }

    cplx operator()(double k) const {
        const auto n = model_->size();
        const Matrix id = Matrix::Identity(n, n);
        if (mode_ == Mode::Markov) {
            if (detail::near_eigenvalue(k, mtot_eigs_)) return pole_sentinel();
            return detail::determinant_ratio(k * id - model_->M, k * id - model_->M_tot);
        }
        const auto mats = detail::assemble(model_->config, model_->reservoir.matrix(), k);
        if (detail::near_eigenvalue(k, detail::eigenvalues_only(mats.M_tot))) return pole_sentinel();
        return detail::determinant_ratio(k * id - mats.M, k * id - mats.M_tot);
    }

    Mode mode() const noexcept { return mode_; }

private:
    const SpinModel* model_;
    Mode mode_;
    Vector mtot_eigs_;
};

// Returns pole_sentinel() when k sits within 1e-12 of an eigenvalue of M_tot.
inline cplx transmission_det(const SpinModel& model, double k, Mode mode = Mode::Markov) {
    if (!std::isfinite(k)) throw Error(ErrorCode::InvalidConfig, "k is not finite");
    return TransmissionEvaluator(model, mode)(k);
}

inline cplx transmission_product(const SpectralDecomposition& m_dec, const SpectralDecomposition& mtot_dec,
                                 double k) {
    if (!m_dec.diagonalizable || !mtot_dec.diagonalizable) {
        throw Error(ErrorCode::Defective, "product form needs diagonalizable M and M_tot");
    }
    if (m_dec.size() != mtot_dec.size()) {
        throw Error(ErrorCode::DimensionMismatch, "transmission_product: dimension mismatch");
    }
    cplx t{1.0, 0.0};
    for (Eigen::Index a = 0; a < m_dec.size(); ++a) {
        t *= (k - m_dec.eigenvalues(a)) / (k - mtot_dec.eigenvalues(a));
    }
    return t;
}

struct ScatteringSolution {
    Vector amplitudes;  // e_{j,k}
    cplx t;
};

// Solves (k - M_tot) e = v and returns t = 1 - i <v|e>. In exact mode M_tot and v carry the
// phase exp(i k z); in Markov mode both use omega_eg.
inline ScatteringSolution scattering_solve(const SpinModel& model, double k, Mode mode = Mode::Exact) {
    const double phase_k = mode == Mode::Exact ? k : model.phase_frequency();
    const Matrix m_tot = mode == Mode::Exact
                             ? detail::assemble(model.config, model.reservoir.matrix(), k).M_tot
                             : model.M_tot;
    if (detail::near_eigenvalue(k, detail::eigenvalues_only(m_tot))) {
        throw Error(ErrorCode::SingularSystem, "k coincides with an eigenvalue of M_tot");
    }
    const auto n = model.size();
    const Vector v = channel_vector(model.config, phase_k);
    Eigen::PartialPivLU<Matrix> lu(k * Matrix::Identity(n, n) - m_tot);
    ScatteringSolution sol;
    sol.amplitudes = lu.solve(v);
    sol.t = cplx{1.0, 0.0} - I * v.dot(sol.amplitudes);
    return sol;
}

// ----------------------------------------------------------------------------- wavefunctions

enum class WavefunctionKind { Scattering, BoundRight, BoundLeft };

struct WavefunctionSample {
    std::vector<double> z;
    std::vector<cplx> photon;
    Vector atomic;
    cplx energy;
    WavefunctionKind kind{WavefunctionKind::Scattering};
};

inline WavefunctionSample scattering_wavefunction(const SpinModel& model, double k, const std::vector<double>& z_grid) {
    const auto sol = scattering_solve(model, k, Mode::Exact);
    WavefunctionSample out{z_grid, {}, sol.amplitudes, cplx{k, 0.0}, WavefunctionKind::Scattering};
    out.photon.reserve(z_grid.size());
    for (double z : z_grid) {
        cplx phi = std::exp(I * (k * z));
        for (std::size_t j = 0; j < model.config.size(); ++j) {
            const auto& a = model.config.atoms[j];
            const double th = step(z - a.z);
            if (th == 0.0) continue;
            phi -= I * sol.amplitudes(static_cast<Eigen::Index>(j)) * std::conj(a.coupling) *
                   std::exp(I * (k * (z - a.z))) * th;
        }
        out.photon.push_back(phi);
    }
    return out;
}

enum class Side { Right, Left };

// Right state: phi(z) = sum_j e_j V_j^* G_E(z - z_j). Left state uses ebar_j and G_{E^*}.
inline WavefunctionSample bound_wavefunction(const SpinModel& model, const BoundEntry& entry, Side side,
                                             const std::vector<double>& z_grid) {
    if (entry.cls != StateClass::Bound || !(entry.energy.imag() < 0.0)) {
        throw Error(ErrorCode::NotABoundState, "entry is not below the real axis");
    }
    const bool right = side == Side::Right;
    const Vector& amps = right ? entry.right : entry.left;
    if (amps.size() != static_cast<Eigen::Index>(model.config.size())) {
        throw Error(ErrorCode::DimensionMismatch, "bound entry does not match the ensemble size");
    }
    const cplx energy = right ? entry.energy : std::conj(entry.energy);
    WavefunctionSample out{z_grid, {}, amps, entry.energy,
                           right ? WavefunctionKind::BoundRight : WavefunctionKind::BoundLeft};
    out.photon.reserve(z_grid.size());
    for (double z : z_grid) {
        cplx phi{0.0, 0.0};
        for (std::size_t j = 0; j < model.config.size(); ++j) {
            const auto& a = model.config.atoms[j];
            phi += amps(static_cast<Eigen::Index>(j)) * std::conj(a.coupling) * propagator_G(energy, z - a.z);
        }
        out.photon.push_back(phi);
    }
    return out;
}

inline std::vector<double> find_transmission_zeros(const BoundStateSet& set) {
    std::vector<double> zeros;
    for (const auto& e : set.entries) {
        if (e.cls == StateClass::TransmissionZero) zeros.push_back(e.energy.real());
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

// ----------------------------------------------------------------------------- winding

struct TraceOptions {
    std::optional<std::pair<double, double>> k_span;
    std::size_t initial_points{2048};
    std::size_t max_points{std::size_t{1} << 20};
    double max_phase_step{std::numbers::pi / 4.0};
    Mode mode{Mode::Markov};
    std::optional<Tolerances> tolerances;
};

struct TransmissionTrace {
    std::vector<double> k;
    std::vector<cplx> t;
    std::vector<double> phase;  // continuous arg t_k
    double tail_phase{0.0};     // analytic contribution from outside the span
    double total_phase{0.0};    // phase.back() - phase.front() + tail_phase
    int winding{0};
    double residual{0.0};       // |total_phase / 2pi - winding|
    std::size_t unresolved{0};  // intervals touching an exact zero or pole, or at minimum width
};

// Span centred on Re tr(M)/N that covers every eigenvalue of M and M_tot with a margin of
// 100 times the largest |Im|.
inline std::pair<double, double> default_k_span(const SpinModel& model, const Vector& m_eigs, const Vector& mtot_eigs) {
    const double centre = model.M.trace().real() / static_cast<double>(model.size());
    double reach = 0.0;
    double max_im = 0.0;
    for (const Vector* eigs : {&m_eigs, &mtot_eigs}) {
        for (Eigen::Index i = 0; i < eigs->size(); ++i) {
            reach = std::max(reach, std::abs((*eigs)(i).real() - centre));
            max_im = std::max(max_im, std::abs((*eigs)(i).imag()));
        }
    }
    const double margin = max_im > 0.0 ? 100.0 * max_im : 1.0;
    return {centre - reach - margin, centre + reach + margin};
}

namespace detail {

inline std::vector<double> seed_grid(double lo, double hi, std::size_t points, const Vector& m_eigs,
                                     const Vector& mtot_eigs) {
    std::vector<double> grid;
    grid.reserve(points + 40 * static_cast<std::size_t>(m_eigs.size() + mtot_eigs.size()));
    for (std::size_t i = 0; i < points; ++i) {
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    // Resonances narrower than the uniform spacing get their own points.
    static constexpr double offsets[] = {0.0, 0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    for (const Vector* eigs : {&m_eigs, &mtot_eigs}) {
        for (Eigen::Index i = 0; i < eigs->size(); ++i) {
            const double re = (*eigs)(i).real();
            const double width = std::abs((*eigs)(i).imag());
            for (double s : offsets) {
                for (double sign : {-1.0, 1.0}) {
                    const double k = re + sign * s * width;
                    if (k > lo && k < hi) grid.push_back(k);
                }
            }
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

inline bool usable(cplx t) { return !is_pole_sentinel(t) && std::abs(t) > 0.0; }

} // namespace detail

// Adaptive, phase-unwrapped sampling of t_k over a finite span, plus the analytic tails.
inline TransmissionTrace transmission_trace(const SpinModel& model, const TraceOptions& opt = {}) {
    if (opt.initial_points < 2) throw Error(ErrorCode::InvalidConfig, "trace needs at least 2 points");
    const Vector m_eigs = detail::eigenvalues_only(model.M);
    const Vector mtot_eigs = detail::eigenvalues_only(model.M_tot);
    const auto [lo, hi] = opt.k_span.value_or(default_k_span(model, m_eigs, mtot_eigs));
    if (!(hi > lo)) throw Error(ErrorCode::InvalidConfig, "k span is empty");

    const TransmissionEvaluator eval(model, opt.mode);
    TransmissionTrace tr;
    tr.k = detail::seed_grid(lo, hi, opt.initial_points, m_eigs, mtot_eigs);
    if (tr.k.size() > opt.max_points) {
        throw Error(ErrorCode::RefinementCap, "initial k grid exceeds " + std::to_string(opt.max_points) + " points");
    }
    tr.t = parallel_map(tr.k.size(), [&](std::size_t i) { return eval(tr.k[i]); });

    const double min_width = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
    for (;;) {
        std::vector<double> mids;
        for (std::size_t i = 0; i + 1 < tr.k.size(); ++i) {
            if (!detail::usable(tr.t[i]) || !detail::usable(tr.t[i + 1])) continue;
            if (tr.k[i + 1] - tr.k[i] <= min_width) continue;
            if (std::abs(std::arg(tr.t[i + 1] / tr.t[i])) > opt.max_phase_step) {
                mids.push_back(0.5 * (tr.k[i] + tr.k[i + 1]));
            }
        }
        if (mids.empty()) break;
        if (tr.k.size() + mids.size() > opt.max_points) {
            throw Error(ErrorCode::RefinementCap, "adaptive k grid exceeded " + std::to_string(opt.max_points) + " points");
        }
        const auto mid_t = parallel_map(mids.size(), [&](std::size_t i) { return eval(mids[i]); });
        std::vector<double> k;
        std::vector<cplx> t;
        k.reserve(tr.k.size() + mids.size());
        t.reserve(k.capacity());
        std::size_t m = 0;
        for (std::size_t i = 0; i < tr.k.size(); ++i) {
            k.push_back(tr.k[i]);
            t.push_back(tr.t[i]);
            if (m < mids.size() && i + 1 < tr.k.size() && mids[m] < tr.k[i + 1] && mids[m] > tr.k[i]) {
                k.push_back(mids[m]);
                t.push_back(mid_t[m]);
                ++m;
            }
        }
        tr.k = std::move(k);
        tr.t = std::move(t);
    }

    tr.phase.resize(tr.k.size());
    std::size_t last = 0;  // last sample with a usable value
    tr.phase[0] = detail::usable(tr.t[0]) ? std::arg(tr.t[0]) : 0.0;
    for (std::size_t i = 1; i < tr.k.size(); ++i) {
        if (!detail::usable(tr.t[i]) || !detail::usable(tr.t[last])) {
            tr.phase[i] = tr.phase[i - 1];
            if (detail::usable(tr.t[i])) last = i;
            ++tr.unresolved;
            continue;
        }
        const double d = std::arg(tr.t[i] / tr.t[last]);
        if (std::abs(d) > opt.max_phase_step) ++tr.unresolved;
        tr.phase[i] = tr.phase[last] + d;
        last = i;
    }

    // Beyond the span arg t_k ~ S / (k - c) with S = Im tr(M_tot - M) = -|v|^2.
    const double centre = model.M.trace().real() / static_cast<double>(model.size());
    const double s = (model.M_tot.trace() - model.M.trace()).imag();
    tr.tail_phase = s / (lo - centre) - s / (hi - centre);
    tr.total_phase = tr.phase.back() - tr.phase.front() + tr.tail_phase;
    const double turns = tr.total_phase / (2.0 * std::numbers::pi);
    tr.winding = static_cast<int>(std::lround(turns));
    tr.residual = std::abs(turns - tr.winding);
    return tr;
}

inline constexpr double kWindingResidualLimit = 0.01;

// Winding of t_k around the origin for real k. Fails with ZeroOnContour when M has a real
// eigenvalue that is a transmission zero, and with PoleOnGrid for an unmatched real pole.
inline TransmissionTrace winding_number(const SpinModel& model, const TraceOptions& opt = {}) {
    const auto spec = analyze(model, opt.tolerances);
    const auto zeros = find_transmission_zeros(spec.states);
    if (!zeros.empty()) {
        std::ostringstream os;
        os << "transmission zero on the real axis at k = " << zeros.front();
        throw Error(ErrorCode::ZeroOnContour, os.str());
    }
    for (Eigen::Index b = 0; b < spec.m_tot.size(); ++b) {
        const cplx p = spec.m_tot.eigenvalues(b);
        if (std::abs(p.imag()) > spec.tolerances.tol_real) continue;
        bool matched = false;
        for (Eigen::Index a = 0; a < spec.m.size() && !matched; ++a) {
            matched = std::abs(p - spec.m.eigenvalues(a)) <= spec.tolerances.tol_match;
        }
        if (!matched) {
            std::ostringstream os;
            os << "transmission pole on the real axis at k = " << p.real();
            throw Error(ErrorCode::PoleOnGrid, os.str());
        }
    }
    TraceOptions markov = opt;
    markov.mode = Mode::Markov;
    auto tr = transmission_trace(model, markov);
    if (tr.residual >= kWindingResidualLimit) {
        std::ostringstream os;
        os << "winding residual " << tr.residual << " exceeds " << kWindingResidualLimit;
        throw Error(ErrorCode::ConvergenceFailure, os.str());
    }
    return tr;
}

struct LevinsonCheck {
    int winding{0};
    std::size_t n{0};
    std::size_t n_b{0};  // BOUND + BIC_CANDIDATE
    bool consistent{false};
    TransmissionTrace trace;
};

inline LevinsonCheck verify_levinson(const SpinModel& model, const TraceOptions& opt = {}) {
    auto tr = winding_number(model, opt);
    const auto spec = analyze(model, opt.tolerances, true);
    LevinsonCheck out;
    out.winding = tr.winding;
    out.n = static_cast<std::size_t>(model.size());
    out.n_b = spec.states.n_b();
    out.consistent = static_cast<long>(out.winding) == static_cast<long>(out.n) - static_cast<long>(out.n_b);
    out.trace = std::move(tr);
    return out;
}

// Continuous phase of a sampled sequence (no refinement); zeros and poles hold the last value.
inline std::vector<double> unwrap_phase(const std::vector<cplx>& t) {
    std::vector<double> phase(t.size(), 0.0);
    std::size_t last = t.size();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!detail::usable(t[i])) {
            phase[i] = i > 0 ? phase[i - 1] : 0.0;
            continue;
        }
        phase[i] = last == t.size() ? std::arg(t[i]) : phase[last] + std::arg(t[i] / t[last]);
        last = i;
    }
    return phase;
}

} // namespace wgqed
