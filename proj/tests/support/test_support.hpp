// test_support.hpp: Independent oracles, frozen reference values and random ensembles for tests

#pragma once

#include <algorithm>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "wgqed/spin_model.hpp"

namespace wgqed::oracle {

// Frozen high-precision values (tests/oracles/gen_values.py, 40-digit mpmath). Two-atom
// eigenvalues are relative to omega_eg with Gamma_tot = 1.
namespace frozen {
inline const cplx two_atom_eig_a{0.823268410909, -0.794347308703};
inline const cplx two_atom_eig_b{-0.823268410909, -0.405652691297};
inline constexpr double threshold_2_to_1 = 0.3444228072197642593;
inline constexpr double threshold_1_to_0 = 0.70547842478388261016;
inline constexpr double crossing_2_to_1 = -0.725671073797991;
inline constexpr double crossing_1_to_0 = 0.505597162249202;
inline const cplx t_matrix_symmetric{0.0, -0.01823781305562079886};  // Gamma=0.3, Gamma'=0.7
inline constexpr double psi2_r0 = -0.0636619772367581;
inline constexpr double psi2_r05 = -0.0185737121042323;
inline constexpr double psi2_r2 = 0.0354213006920755;
} // namespace frozen

// Determinant by the Leibniz permutation sum; no factorization involved.
inline cplx leibniz_det(const Matrix& a) {
    const auto n = static_cast<int>(a.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    cplx total{0.0, 0.0};
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) inversions += perm[std::size_t(i)] > perm[std::size_t(j)] ? 1 : 0;
        }
        cplx term = inversions % 2 == 0 ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) term *= a(i, perm[std::size_t(i)]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Roots of x^2 - tr x + det for a 2x2 matrix.
inline std::pair<cplx, cplx> eig2(const Matrix& a) {
    const cplx tr = a(0, 0) + a(1, 1);
    const cplx det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const cplx s = std::sqrt(tr * tr / 4.0 - det);
    return {tr / 2.0 + s, tr / 2.0 - s};
}

// Two-atom preset eigenvalues of M - omega_eg in closed form.
inline std::pair<cplx, cplx> two_atom_eigs(double ratio) {
    const double g = ratio;
    const double gp = 1.0 - ratio;
    const cplx s = std::sqrt(cplx{gp * gp, -2.0 * g * gp});
    const cplx base{0.0, g - gp};
    return {base + s, base - s};
}

inline int two_atom_n_below(double ratio) {
    const auto [a, b] = two_atom_eigs(ratio);
    return (a.imag() < 0.0 ? 1 : 0) + (b.imag() < 0.0 ? 1 : 0);
}

struct RandomEnsemble {
    EnsembleConfig config;
    Matrix reservoir;
};

// Random positions inside the Markov bound (max Gamma * L < 0.08) and a random dissipative
// K' = H - i A A^dagger. `lossless` drops the anti-Hermitian part.
inline RandomEnsemble random_ensemble(std::mt19937_64& rng, std::size_t n, bool lossless = false,
                                      double omega_eg = 10.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g(0.0, 1.0);
    RandomEnsemble out;
    out.config.omega_eg = omega_eg;
    double max_gamma = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = 0.3 + 1.2 * u(rng);
        const double phase = 2.0 * std::numbers::pi * u(rng);
        out.config.atoms.push_back(Atom{0.0, std::polar(mag, phase)});
        max_gamma = std::max(max_gamma, mag * mag / 2.0);
    }
    const double length = 0.08 / max_gamma;
    for (auto& a : out.config.atoms) a.z = length * u(rng);

    const auto m = static_cast<Eigen::Index>(n);
    Matrix h(m, m);
    Matrix a(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            h(i, j) = cplx{g(rng), g(rng)} * 0.2;
            a(i, j) = cplx{g(rng), g(rng)} * 0.4;
        }
    }
    out.reservoir = 0.5 * (h + h.adjoint());
    if (!lossless) out.reservoir -= I * (a * a.adjoint());
    return out;
}

} // namespace wgqed::oracle
