#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hybridbec/condensate.hpp"
#include "hybridbec/radial_grid.hpp"
#include "hybridbec/units.hpp"

namespace hybridbec {

enum class Species { atom, molecule };
enum class BdgMethod { paper_literal, block_2x2, direct_grid };

/// Energies assigned to the auxiliary states |j>:
///   paper:      hbar omega (j + 1/2)
///   oscillator: hbar omega (2 j + 3/2), the exact s-wave level of |j>
enum class LevelConvention { paper, oscillator };

/// How the r-dependent literal eigenvalue is reduced to a constant.
enum class Averaging { density, volume };

std::string_view to_string(Species s);
std::string_view to_string(BdgMethod m);
std::string_view to_string(LevelConvention c);
std::string_view to_string(Averaging a);
/// Accepts "paper"/"paper-literal", "block"/"block-2x2", "grid"/"direct-grid".
BdgMethod parse_method(std::string_view name);
LevelConvention parse_levels(std::string_view name);
Averaging parse_averaging(std::string_view name);

/// One quasiparticle mode. For atoms (u, v, A, B); for molecules the same
/// slots hold (x, y, C, D).
///
/// u and v are stored as spherically averaged radial profiles: the mode
/// contributes degeneracy * |u(r)|^2 to the m-summed density, and
/// \int 4 pi r^2 (u^2 - v^2) dr = 1 after normalization.
struct Mode {
    int j = 0;
    int l = 0;
    int branch = +1;
    std::complex<double> energy;
    std::vector<double> u;
    std::vector<double> v;
    std::complex<double> coeff_a{1.0, 0.0};
    std::complex<double> coeff_b{0.0, 0.0};
    double norm = 1.0;        ///< \int (|u|^2 - |v|^2) d^3r as stored
    bool normalizable = true;
    bool unstable = false;    ///< complex energy or negative discriminant
    bool zero_mode = false;   ///< |E| below zero_energy_tol (condensate phase mode)
    int degeneracy = 1;
};

struct ModeSet {
    Species species = Species::atom;
    BdgMethod method = BdgMethod::block_2x2;
    std::vector<Mode> modes;
    std::size_t skipped = 0;  ///< grid eigenpairs dropped as zero-norm or complex
    std::size_t sweeps = 0;   ///< largest fixed-point sweep count (paper-literal)
};

struct BdgOptions {
    LevelConvention levels = LevelConvention::paper;
    Averaging averaging = Averaging::density;
    /// Drop lambda |phi_a|^2 from the literal molecule bracket, exactly as printed.
    bool strict_literal = false;
    double fixed_point_tol = 1e-8;
    std::size_t max_sweeps = 10000;
    /// Grid eigenpairs with |\int(u^2 - v^2)| / \int(u^2 + v^2) below this are skipped.
    double zero_norm_tol = 1e-10;
    /// Grid modes with |E| below this (energy units) are flagged zero_mode.
    double zero_energy_tol = 1e-6;
};

/// hbar omega (j + 1/2) (paper) or hbar omega (2j + 3/2) (oscillator), j = 0..j_max-1.
std::vector<double> basis_levels(Species species, const PhysicalParams& p, std::size_t j_max,
                                 LevelConvention levels = LevelConvention::paper);

/// s-wave oscillator eigenfunction with j radial nodes for the species' trap,
/// normalized on the grid (\int 4 pi r^2 |j>^2 dr = 1).
std::vector<double> basis_function(Species species, const PhysicalParams& p, const RadialGrid& grid, int j);

/// Pointwise closed form of the paper's eigenvalue expression iterated to an
/// r-independent constant by averaging, with coefficients from the f/g ratios.
std::pair<ModeSet, ModeSet> paper_literal_spectrum(const CondensateState& state, const PhysicalParams& p,
                                                   const RadialGrid& grid, std::size_t j_max,
                                                   const BdgOptions& opts = {});

/// Per-basis-state 2x2 symplectic eigenproblem [[h, -Delta], [Delta, -h]].
std::pair<ModeSet, ModeSet> block_2x2_spectrum(const CondensateState& state, const PhysicalParams& p,
                                               const RadialGrid& grid, std::size_t j_max,
                                               const BdgOptions& opts = {});

/// Full finite-difference BdG matrix in angular channel l, dense non-symmetric
/// eigensolve; positive-norm modes, normalized, lowest n_modes.
std::pair<ModeSet, ModeSet> direct_grid_spectrum(const CondensateState& state, const PhysicalParams& p,
                                                 const RadialGrid& grid, int l, std::size_t n_modes,
                                                 const BdgOptions& opts = {});

/// The 2n x 2n matrix [[L, -Delta], [Delta, -L]] acting on reduced (chi_u, chi_v).
Eigen::MatrixXd bdg_matrix(const CondensateState& state, const PhysicalParams& p, const RadialGrid& grid,
                           Species species, int l);

/// One species of direct_grid_spectrum.
ModeSet direct_grid_modes(const CondensateState& state, const PhysicalParams& p, const RadialGrid& grid,
                          Species species, int l, std::size_t n_modes, const BdgOptions& opts = {});

/// 2x2 block solution for given diagonal h and coupling Delta.
Mode solve_block(double h, double delta);

/// \int 4 pi r^2 (u^2 - v^2) dr
double mode_norm(const Mode& m, const RadialGrid& grid);

}  // namespace hybridbec
