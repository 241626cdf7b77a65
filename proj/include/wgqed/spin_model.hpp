// spin_model.hpp: Emitter ensembles, reservoir couplings and the effective spin matrices
//
// Units are c = 1 with a user-chosen frequency unit. Atom i sits at z_i and couples to the
// right-moving channel with complex amplitude V_i; its channel decay rate is |V_i|^2 / 2.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wgqed/errors.hpp"

namespace wgqed {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};

struct Atom {
    double z{0.0};
    cplx coupling{0.0, 0.0};

    double gamma() const noexcept { return std::norm(coupling) / 2.0; }
};

// Above this value of max(Gamma_i) * (z_max - z_min) the Markov approximation is suspect.
inline constexpr double kMarkovWarningThreshold = 0.1;

struct EnsembleConfig {
    double omega_eg{0.0};
    std::vector<Atom> atoms;

    std::size_t size() const noexcept { return atoms.size(); }

    void validate() const {
        if (atoms.empty()) {
            throw Error(ErrorCode::InvalidConfig, "ensemble has no atoms");
        }
        if (!std::isfinite(omega_eg)) {
            throw Error(ErrorCode::InvalidConfig, "omega_eg is not finite");
        }
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const auto& a = atoms[i];
            if (!std::isfinite(a.z) || !std::isfinite(a.coupling.real()) ||
                !std::isfinite(a.coupling.imag())) {
                throw Error(ErrorCode::InvalidConfig,
                            "atom " + std::to_string(i) + " has a non-finite position or coupling");
            }
        }
    }

    double length() const noexcept {
        if (atoms.empty()) return 0.0;
        double lo = atoms.front().z;
        double hi = lo;
        for (const auto& a : atoms) {
            lo = std::min(lo, a.z);
            hi = std::max(hi, a.z);
        }
        return hi - lo;
    }

    double max_gamma() const noexcept {
        double g = 0.0;
        for (const auto& a : atoms) g = std::max(g, a.gamma());
        return g;
    }

    double markov_figure_of_merit() const noexcept { return max_gamma() * length(); }

    std::vector<std::string> warnings() const {
        std::vector<std::string> out;
        const double fom = markov_figure_of_merit();
        if (fom >= kMarkovWarningThreshold) {
            std::ostringstream os;
            os << "Markov figure of merit max(Gamma)*L = " << fom << " >= " << kMarkovWarningThreshold
               << "; Markov-mode results may be inaccurate";
            out.push_back(os.str());
        }
        return out;
    }
};

inline double frobenius_norm(const Matrix& m) { return m.norm(); }

// Reservoir-mediated interaction K'. Construction enforces that -i(K' - K'^dagger) is
// negative semidefinite up to 1e-10 * ||K'||.
class ReservoirCoupling {
public:
    explicit ReservoirCoupling(Matrix matrix) : matrix_(std::move(matrix)) {
        if (matrix_.rows() != matrix_.cols()) {
            throw Error(ErrorCode::DimensionMismatch, "reservoir coupling must be square");
        }
        if (!matrix_.allFinite()) {
            throw Error(ErrorCode::InvalidConfig, "reservoir coupling has non-finite entries");
        }
        const auto eig = dissipation_spectrum(matrix_);
        const double tol = tolerance(matrix_);
        for (Eigen::Index i = 0; i < eig.size(); ++i) {
            if (eig(i) > tol) {
                std::ostringstream os;
                os << "eigenvalue " << eig(i) << " of -i(K' - K'^dagger) is positive (tolerance " << tol
                   << ")";
                throw Error(ErrorCode::NonDissipativeReservoir, os.str());
            }
        }
    }

    const Matrix& matrix() const noexcept { return matrix_; }
    Eigen::Index size() const noexcept { return matrix_.rows(); }

    static Eigen::VectorXd dissipation_spectrum(const Matrix& m) {
        const Matrix h = -I * (m - m.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
        return solver.eigenvalues();
    }

    static double tolerance(const Matrix& m) { return 1e-10 * frobenius_norm(m); }

private:
    Matrix matrix_;
};

// Heaviside step with the half-maximum convention at zero.
inline double step(double x) noexcept { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); }

// v_i = V_i exp(i k z_i)
inline Vector channel_vector(const EnsembleConfig& config, double k) {
    Vector v(static_cast<Eigen::Index>(config.size()));
    for (std::size_t i = 0; i < config.size(); ++i) {
        const auto& a = config.atoms[i];
        v(static_cast<Eigen::Index>(i)) = a.coupling * std::exp(I * (k * a.z));
    }
    return v;
}

// Channel-mediated coupling with the propagation phase evaluated at frequency k:
// K_ij(k) = -i V_i V_j^* exp(i k (z_i - z_j)) Theta(z_i - z_j).
inline Matrix build_K_of_k(const EnsembleConfig& config, double k) {
    config.validate();
    const auto n = static_cast<Eigen::Index>(config.size());
    Matrix K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& ai = config.atoms[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& aj = config.atoms[static_cast<std::size_t>(j)];
            const double dz = ai.z - aj.z;
            const double theta = step(dz);
            K(i, j) = theta == 0.0
                          ? cplx{0.0, 0.0}
                          : -I * ai.coupling * std::conj(aj.coupling) * std::exp(I * (k * dz)) * theta;
        }
    }
    return K;
}

// Markovian channel coupling: phase frozen at the transition frequency.
inline Matrix build_K(const EnsembleConfig& config) { return build_K_of_k(config, config.omega_eg); }

struct SpinModel {
    EnsembleConfig config;
    ReservoirCoupling reservoir;
    std::optional<double> k;  // set for the frequency-dependent (non-Markovian) variant
    Matrix K;
    Matrix M;      // omega_eg + K' + K^dagger
    Matrix M_tot;  // omega_eg + K' + K

    Eigen::Index size() const noexcept { return M.rows(); }
    double phase_frequency() const noexcept { return k.value_or(config.omega_eg); }
};

namespace detail {

struct SpinMatrices {
    Matrix K, M, M_tot;
};

inline SpinMatrices assemble(const EnsembleConfig& config, const Matrix& reservoir, double phase_k) {
    SpinMatrices out;
    out.K = build_K_of_k(config, phase_k);
    const auto n = out.K.rows();
    const Matrix base = config.omega_eg * Matrix::Identity(n, n) + reservoir;
    out.M = base + out.K.adjoint();
    out.M_tot = base + out.K;
    return out;
}

} // namespace detail

inline SpinModel build_spin_model(const EnsembleConfig& config, const ReservoirCoupling& reservoir,
                                  std::optional<double> k = std::nullopt) {
    config.validate();
    if (reservoir.size() != static_cast<Eigen::Index>(config.size())) {
        throw Error(ErrorCode::DimensionMismatch,
                    "reservoir is " + std::to_string(reservoir.size()) + "x" +
                        std::to_string(reservoir.size()) + " but the ensemble has " +
                        std::to_string(config.size()) + " atoms");
    }
    if (k && !std::isfinite(*k)) {
        throw Error(ErrorCode::InvalidConfig, "frequency k is not finite");
    }
    auto mats = detail::assemble(config, reservoir.matrix(), k.value_or(config.omega_eg));
    return SpinModel{config, reservoir, k, std::move(mats.K), std::move(mats.M), std::move(mats.M_tot)};
}

// ----------------------------------------------------------------------------- presets

inline ReservoirCoupling independent_reservoir(const std::vector<double>& gamma_prime) {
    const auto n = static_cast<Eigen::Index>(gamma_prime.size());
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (gamma_prime[static_cast<std::size_t>(i)] < 0.0) {
            throw Error(ErrorCode::NegativeRate, "reservoir decay rate must be non-negative");
        }
        m(i, i) = -I * gamma_prime[static_cast<std::size_t>(i)];
    }
    return ReservoirCoupling(std::move(m));
}

// Both atoms decay at Gamma' and exchange coherently with strength -Gamma'.
inline ReservoirCoupling shared_pair_reservoir(double gamma_prime) {
    if (gamma_prime < 0.0) {
        throw Error(ErrorCode::NegativeRate, "reservoir decay rate must be non-negative");
    }
    Matrix m(2, 2);
    m << -I, cplx{-1.0, 0.0}, cplx{-1.0, 0.0}, -I;
    return ReservoirCoupling(gamma_prime * m);
}

struct Preset {
    EnsembleConfig config;
    ReservoirCoupling reservoir;
};

inline void check_rates(double gamma, double gamma_prime) {
    if (!(gamma >= 0.0) || !(gamma_prime >= 0.0)) {
        throw Error(ErrorCode::NegativeRate, "decay rates must be non-negative");
    }
}

inline Preset preset_single_atom(double gamma, double gamma_prime, double omega_eg) {
    check_rates(gamma, gamma_prime);
    EnsembleConfig config{omega_eg, {Atom{0.0, cplx{std::sqrt(2.0 * gamma), 0.0}}}};
    return Preset{std::move(config), independent_reservoir({gamma_prime})};
}

// Two atoms one wavelength apart. The downstream atom is listed first so that
// K = Gamma [[-i, -2i], [0, -i]].
inline Preset preset_two_atom(double gamma, double gamma_prime, double omega_eg) {
    check_rates(gamma, gamma_prime);
    if (!(omega_eg > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "two-atom preset needs omega_eg > 0");
    }
    const cplx v{std::sqrt(2.0 * gamma), 0.0};
    const double separation = 2.0 * std::numbers::pi / omega_eg;
    EnsembleConfig config{omega_eg, {Atom{separation, v}, Atom{0.0, v}}};
    return Preset{std::move(config), shared_pair_reservoir(gamma_prime)};
}

enum class PresetFamily { SingleAtom, TwoAtom };

inline Preset make_preset(PresetFamily family, double gamma, double gamma_prime, double omega_eg) {
    return family == PresetFamily::SingleAtom ? preset_single_atom(gamma, gamma_prime, omega_eg)
                                              : preset_two_atom(gamma, gamma_prime, omega_eg);
}

// Gamma = ratio * gamma_total, Gamma' = (1 - ratio) * gamma_total.
inline Preset make_preset_from_ratio(PresetFamily family, double ratio, double omega_eg,
                                     double gamma_total = 1.0) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, "gamma ratio must lie in [0, 1]");
    }
    return make_preset(family, ratio * gamma_total, (1.0 - ratio) * gamma_total, omega_eg);
}

} // namespace wgqed
