// two_photon.hpp: Two-photon output wavefunction and g2(tau) for a single emitter
// driven on resonance in the weak-coherent-drive limit.

#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string_view>
#include <vector>

#include "wgqed/errors.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/spin_model.hpp"

namespace wgqed {

struct EmitterRates {
    double gamma{0.0};        // decay into the channel
    double gamma_prime{0.0};  // decay into the reservoir
    double omega_eg{0.0};

    double total() const noexcept { return gamma + gamma_prime; }

    void validate() const {
        if (!(gamma >= 0.0) || !(gamma_prime >= 0.0)) {
            throw Error(ErrorCode::NegativeRate, "decay rates must be non-negative");
        }
        if (!(total() > 0.0)) {
            throw Error(ErrorCode::InvalidConfig, "Gamma + Gamma' must be positive");
        }
        if (!std::isfinite(omega_eg)) throw Error(ErrorCode::InvalidConfig, "omega_eg is not finite");
    }

    // Resonant single-photon transmission (Gamma' - Gamma) / Gamma_tot.
    double resonant_transmission() const noexcept { return (gamma_prime - gamma) / total(); }
};

// Two-photon T-matrix in centre-of-mass variables (E, q) -> (E', q'). The amplitude is
// independent of E' because energy conservation is carried by delta(E - E').
inline cplx t_matrix(double /*E_out*/, double q_out, double E, double q, const EmitterRates& rates) {
    if (!(rates.gamma >= 0.0) || !(rates.gamma_prime >= 0.0)) {
        throw Error(ErrorCode::NegativeRate, "decay rates must be non-negative");
    }
    if (rates.gamma == 0.0) return {0.0, 0.0};
    const cplx a{E - 2.0 * rates.omega_eg, 2.0 * rates.total()};
    const cplx den = (4.0 * q * q - a * a) * (4.0 * q_out * q_out - a * a);
    if (std::abs(den) < 1e-14) throw Error(ErrorCode::PoleHit, "T-matrix denominator vanishes");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    return -(16.0 * rates.gamma * rates.gamma / pi2) * a / den;
}

// Closed-form output wavefunction psi2(r, R) for a resonant drive (q = 0).
inline cplx psi2_closed(double r, double R, const EmitterRates& rates) {
    rates.validate();
    const double gt = rates.total();
    const double d = rates.gamma_prime - rates.gamma;
    const double pi = std::numbers::pi;
    const double bunching = std::exp(gt * r) * step(-r) + std::exp(-gt * r) * step(r);
    const double amp = d * d / (pi * gt * gt) - 4.0 * rates.gamma * rates.gamma / (pi * gt * gt) * bunching;
    return amp * std::exp(I * (2.0 * rates.omega_eg * R));
}

struct QuadratureOptions {
    double window{200.0};          // finite window Q in units of Gamma_tot
    double abs_tolerance{1e-8};
    unsigned max_depth{20};
};

// Fourier transform of the two-photon S-matrix at E = 2 omega_eg, q = 0 over (E', q').
// The delta-function terms are done analytically; the T-matrix term is integrated over q'
// numerically: adaptive Gauss-Kronrod on [0, Q] plus a double-exponential tail on [Q, inf).
inline cplx psi2_numeric(double r, const EmitterRates& rates, double R = 0.0, const QuadratureOptions& opt = {}) {
    rates.validate();
    namespace bq = boost::math::quadrature;
    const double pi = std::numbers::pi;
    const double E = 2.0 * rates.omega_eg;

    // Single-photon transmission at k = omega_eg from the spin model.
    const auto preset = preset_single_atom(rates.gamma, rates.gamma_prime, rates.omega_eg);
    const cplx t = transmission_det(build_spin_model(preset.config, preset.reservoir), rates.omega_eg);

    const double Q = opt.window * rates.total();
    auto t_re = [&](double qp) { return t_matrix(E, qp, E, 0.0, rates).real(); };
    auto t_im = [&](double qp) { return t_matrix(E, qp, E, 0.0, rates).imag(); };

    // Integral of cos(q' r) T(q') over [0, inf); T is even in q'.
    auto half_line = [&](auto&& part) -> double {
        double err = 0.0;
        double l1 = 0.0;
        const double body = bq::gauss_kronrod<double, 61>::integrate(
            [&](double qp) { return part(qp) * std::cos(qp * r); }, 0.0, Q, opt.max_depth, 1e-12, &err, &l1);
        if (!(err <= 0.25 * opt.abs_tolerance || err <= 1e-12 * l1)) {
            throw Error(ErrorCode::QuadratureFailure, "Gauss-Kronrod error estimate too large");
        }
        double tail = 0.0;
        if (r == 0.0) {
            bq::exp_sinh<double> es;
            double terr = 0.0;
            tail = es.integrate([&](double s) { return part(Q + s); }, 0.0, std::numeric_limits<double>::infinity(),
                                1e-12, &terr);
            if (!(terr <= 0.25 * opt.abs_tolerance)) {
                throw Error(ErrorCode::QuadratureFailure, "tail quadrature error estimate too large");
            }
        } else {
            // cos((Q + s) r) = cos(Q r) cos(s r) - sin(Q r) sin(s r)
            const double w = std::abs(r);
            bq::ooura_fourier_cos<double> fc(1e-10);
            bq::ooura_fourier_sin<double> fs(1e-10);
            const auto c = fc.integrate([&](double s) { return part(Q + s); }, w);
            const auto sn = fs.integrate([&](double s) { return part(Q + s); }, w);
            // Ooura reports a relative error, NaN for an identically zero integrand.
            auto abs_err = [](const std::pair<double, double>& res) {
                return res.first == 0.0 ? 0.0 : res.second * std::abs(res.first);
            };
            if (!(abs_err(c) <= 0.25 * opt.abs_tolerance && abs_err(sn) <= 0.25 * opt.abs_tolerance)) {
                throw Error(ErrorCode::QuadratureFailure, "oscillatory tail quadrature did not converge");
            }
            tail = std::cos(Q * w) * c.first - std::sin(Q * w) * sn.first;
        }
        return body + tail;
    };
    const cplx t_integral = 2.0 * cplx{half_line(t_re), half_line(t_im)};

    const cplx phase = std::exp(I * (E * R));
    return (2.0 * t * t - 4.0 * pi * I * t_integral) * phase / (2.0 * pi);
}

enum class Normalization { Raw, AsymptoticUnit };

constexpr std::string_view to_string(Normalization n) noexcept {
    return n == Normalization::Raw ? "raw" : "asymptotic_unit";
}

struct TwoPhotonCorrelation {
    std::vector<double> tau;
    std::vector<double> g2;         // +inf when the resonant transmission vanishes
    std::vector<cplx> psi2;
    std::vector<double> numerator;  // |psi2|^2 with the same normalization factor as g2
    Normalization normalization{Normalization::AsymptoticUnit};
    EmitterRates rates;
    bool divergent{false};
};

// g2 diverges iff |Gamma' - Gamma| is below this fraction of Gamma_tot.
inline constexpr double kDivergenceRidge = 1e-12;

inline TwoPhotonCorrelation g2(const std::vector<double>& tau_grid, const EmitterRates& rates,
                               Normalization normalization = Normalization::AsymptoticUnit) {
    rates.validate();
    TwoPhotonCorrelation out;
    out.tau = tau_grid;
    out.normalization = normalization;
    out.rates = rates;
    out.divergent = std::abs(rates.gamma_prime - rates.gamma) < kDivergenceRidge * rates.total();
    // Literal |psi2|^2 / |t|^4 tends to 1/pi^2 at large delay; the unit mode rescales it to 1.
    const double scale = normalization == Normalization::AsymptoticUnit ? std::numbers::pi * std::numbers::pi : 1.0;
    const double t = rates.resonant_transmission();
    const double t4 = t * t * t * t;
    for (double tau : tau_grid) {
        if (!std::isfinite(tau)) throw Error(ErrorCode::InvalidConfig, "tau grid must be finite");
        const cplx psi = psi2_closed(tau, 0.0, rates);
        const double num = scale * std::norm(psi);
        out.psi2.push_back(psi);
        out.numerator.push_back(num);
        out.g2.push_back(out.divergent ? std::numeric_limits<double>::infinity() : num / t4);
    }
    return out;
}

} // namespace wgqed
