// Compares the serial reference scan kernel against the OpenMP one on the
// bundled magic-trap preset and reports the speedup.

#include <chrono>
#include <cstdio>
#include <string>

#include <omp.h>

#include "nanotrap/atomic_data.hpp"
#include "nanotrap/run_config.hpp"
#include "nanotrap/trap_analysis.hpp"

using namespace nanotrap;

int main(int argc, char** argv) {
    int n_points = 2000;
    if (argc > 1) n_points = std::stoi(argv[1]);

    const auto rc = run_config::RunConfig::load(std::string(NANOTRAP_CONFIG_DIR) +
                                                "/magic.config");
    const auto db = atomic::load_atom_data(NANOTRAP_DATA_FILE);
    trap::PreparedTrap prepared(rc.trap, db);

    std::vector<trap::Manifold> manifolds;
    for (const auto& [level, F] : rc.trap.manifolds)
        manifolds.push_back(prepared.manifold(level, F));

    trap_analysis::ScanGrid grid;
    grid.axis = trap_analysis::ScanAxis::radial;
    grid.lo = rc.trap.fiber.radius + 50e-9;
    grid.hi = rc.trap.fiber.radius + 600e-9;
    grid.n = n_points;

    auto time_run = [&](trap_analysis::ExecutionMode mode) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rows = trap_analysis::scan_potential(prepared, manifolds, grid, mode);
        const auto t1 = std::chrono::steady_clock::now();
        return std::make_pair(std::chrono::duration<double>(t1 - t0).count(), rows);
    };

    const auto [t_serial, rows_serial] = time_run(trap_analysis::ExecutionMode::serial);
    const auto [t_parallel, rows_parallel] = time_run(trap_analysis::ExecutionMode::parallel);

    bool identical = rows_serial.size() == rows_parallel.size();
    for (size_t i = 0; identical && i < rows_serial.size(); ++i)
        identical = rows_serial[i].energy_hz == rows_parallel[i].energy_hz &&
                    rows_serial[i].coord == rows_parallel[i].coord;

    std::printf("grid points:        %d (%zu rows)\n", n_points, rows_serial.size());
    std::printf("serial reference:   %.3f s\n", t_serial);
    std::printf("openmp (%d threads): %.3f s\n", omp_get_max_threads(), t_parallel);
    std::printf("speedup:            %.2fx\n", t_serial / t_parallel);
    std::printf("results identical:  %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
