#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ringmap/domain.hpp"

namespace ringmap {

enum class CellRole : std::uint8_t { Interior, Dirichlet0, Dirichlet1, Outside };

/// Cell-centred potential on a tensor grid. Cells inside the core box
/// [core_i0, core_i0 + core_nx) x [core_j0, core_j0 + core_ny) have the uniform size
/// `spacing`; cells outside it grow geometrically towards the far boundary.
struct PotentialGrid {
    Complex origin;  ///< lower-left corner of the uniform core
    double spacing = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> xf, yf;  ///< cell faces, nx + 1 and ny + 1 entries
    std::vector<double> values;  ///< row-major, nx * ny
    std::vector<CellRole> mask;
    int core_i0 = 0, core_j0 = 0, core_nx = 0, core_ny = 0;

    std::size_t at(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    Complex center(int i, int j) const {
        return {0.5 * (xf[i] + xf[i + 1]), 0.5 * (yf[j] + yf[j + 1])};
    }
};

struct SolverOptions {
    int levels = 3;
    /// Spacing at the finest level; 0 picks min(feature, separation) / cells_per_feature
    /// at the coarsest level.
    double finest_spacing = 0.0;
    int cells_per_feature = 8;
    /// Upper bound on uniform core cells along either axis at the coarsest level.
    int max_core_cells = 320;
    /// Far boundary distance in units of the core scale, for unbounded domains.
    double far_factor = 500.0;
    double grading = 1.15;
    double tolerance = 1e-10;
    int max_iterations = 1000;
};

struct CapacityEstimate {
    double cap = 0.0;
    double modulus = 0.0;
    double abs_error = 0.0;  ///< modulus units
    std::vector<std::pair<double, double>> grid_levels;  ///< (spacing, cap)
    bool extrapolated = false;
    std::vector<int> iterations;
};

/// Mask and boundary values only; interior values are left at 0.
PotentialGrid rasterize(const RingDomain& d, double spacing,
                        const SolverOptions& opts = SolverOptions{});

/// Solves the discrete Dirichlet problem on one grid. Returns the capacity.
double solve_potential(const RingDomain& d, double spacing, const SolverOptions& opts,
                       PotentialGrid* out, int* iterations = nullptr);

CapacityEstimate solve_capacity(const RingDomain& d, int levels);
CapacityEstimate solve_capacity(const RingDomain& d, const SolverOptions& opts);

/// Closed form when one exists, otherwise the grid solver.
ExtendedModulus modulus_best(const RingDomain& d);
ExtendedModulus modulus_best(const RingDomain& d, const SolverOptions& opts);
/// Always the grid solver, even where a closed form exists.
ExtendedModulus modulus_grid(const RingDomain& d, const SolverOptions& opts = SolverOptions{});

/// Writes the uniform core of the grid as "RINGPOT1", uint64 nx, uint64 ny, f64 spacing,
/// f64 origin re, f64 origin im, then nx*ny row-major f64 values, little-endian.
void dump_potential(const PotentialGrid& g, const std::string& path);
PotentialGrid load_potential(const std::string& path);

}  // namespace ringmap
