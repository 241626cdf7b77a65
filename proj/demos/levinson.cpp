// levinson.cpp: Scan the two-atom preset and print bound states against the winding of t_k

#include <iostream>

#include "wgqed/scattering.hpp"
#include "wgqed/spectral.hpp"

int main() {
    using namespace wgqed;
    std::cout << "ratio  N_B  winding  bound energies (relative to omega_eg)\n";
    for (double ratio : {0.1, 0.2, 0.5, 0.65, 0.75, 0.9}) {
        const auto p = make_preset_from_ratio(PresetFamily::TwoAtom, ratio, 100.0);
        const auto model = build_spin_model(p.config, p.reservoir);
        const auto check = verify_levinson(model);
        std::cout << ratio << "    " << check.n_b << "    " << check.winding << "       ";
        for (const auto& e : analyze(model).states.entries) std::cout << (e.energy - 100.0) << " ";
        std::cout << "\n";
    }
    const auto fam = preset_ratio_family(PresetFamily::TwoAtom, 100.0);
    for (auto [lo, hi] : {std::pair{0.2, 0.65}, std::pair{0.65, 0.75}}) {
        const auto th = bound_state_threshold(fam, lo, hi);
        std::cout << "threshold " << th.count_below << " -> " << th.count_above << " at ratio " << th.parameter
                  << ", transmission zero at k - omega_eg = " << th.crossing.real() - 100.0 << "\n";
    }
}
