// Propagates the standing wave to t = 20 in one step and prints the error and
// energy drift.

#include <cstdio>

#include "fmx/fmx.hpp"

int main() {
    const auto wave = fmx::AnalyticCase::standing(1, 2, -3);
    const auto grid = fmx::build_grid(wave.default_domain(), 8);

    const auto initial = fmx::sample_initial(wave, grid);
    const auto final_state = fmx::propagate(initial, 20.0);

    const auto err = fmx::error_norms(final_state, wave);
    const auto drift = fmx::relative_change(fmx::invariants(initial), fmx::invariants(final_state));
    std::printf("t = %g  L2 = %.3e  Linf = %.3e  Re(E1) = %.3e  div = %.3e\n", final_state.time, err.l2, err.linf,
                drift.drift.e1.value, drift.div_e);
}
