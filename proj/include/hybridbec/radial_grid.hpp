#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hybridbec {

/// Uniform radial mesh r_i = i h, i = 1..n, h = r_max / n.
///
/// Functions live on the nodes as plain 3D values f(r_i); `integrate` applies
/// the spherical measure 4 pi r^2 h. Reduced functions chi = r f are used only
/// inside the finite-difference operators.
class RadialGrid {
public:
    RadialGrid(double r_max, std::size_t n_points);

    double r_max() const { return r_max_; }
    double spacing() const { return h_; }
    std::size_t size() const { return r_.size(); }
    std::span<const double> nodes() const { return r_; }
    std::span<const double> weights() const { return w_; }
    double r(std::size_t i) const { return r_[i]; }
    double weight(std::size_t i) const { return w_[i]; }

    /// sum_i w_i f_i  ~  \int 4 pi r^2 f(r) dr
    double integrate(std::span<const double> f) const;
    /// \int 4 pi r^2 f g dr
    double inner(std::span<const double> f, std::span<const double> g) const;
    /// \int 4 pi r^2 f^2 dr
    double norm2(std::span<const double> f) const { return inner(f, f); }

    std::vector<double> evaluate(double (*fn)(double)) const;

    template <class F>
    std::vector<double> map(F&& fn) const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < size(); ++i) out[i] = fn(r_[i]);
        return out;
    }

private:
    double r_max_;
    double h_;
    std::vector<double> r_;
    std::vector<double> w_;
};

/// Checked factory: r_max > 0, n_points >= 16.
RadialGrid build_grid(double r_max, std::size_t n_points);

/// Symmetric tridiagonal matrix, stored by diagonals.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  ///< size n - 1; A(i, i+1) = A(i+1, i) = off[i]

    std::size_t size() const { return diag.size(); }
    std::vector<double> apply(std::span<const double> x) const;
};

/// Solves (A) x = b for a diagonally dominant tridiagonal A (Thomas algorithm).
std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> b);

/// Radial Hamiltonian for angular channel l acting on reduced functions chi = r R:
///   -(hbar^2 / 2 m) chi'' + [l(l+1) hbar^2 / (2 m r^2) + V(r)] chi
/// with chi = 0 at r = 0 and one step beyond r_max. Three-point Laplacian.
class RadialOperator {
public:
    RadialOperator(const RadialGrid& grid, double mass, int l, std::vector<double> potential, double hbar = 1.0);

    const RadialGrid& grid() const { return *grid_; }
    double mass() const { return mass_; }
    int l() const { return l_; }
    std::span<const double> potential() const { return potential_; }

    /// Kinetic + centrifugal + potential as a tridiagonal matrix.
    Tridiagonal matrix() const;
    /// Same without the potential (kinetic + centrifugal only).
    Tridiagonal kinetic() const;

private:
    const RadialGrid* grid_;
    double mass_;
    int l_;
    double hbar_;
    std::vector<double> potential_;
};

/// H chi. Throws DimensionMismatch when chi.size() != grid size.
std::vector<double> apply_hamiltonian(const RadialOperator& op, std::span<const double> chi);

/// Harmonic potential (1/2) m omega^2 r^2 on the grid nodes.
std::vector<double> harmonic_potential(const RadialGrid& grid, double mass, double omega);

/// Reduced <-> 3D value conversion: chi_i = r_i f_i.
std::vector<double> to_reduced(const RadialGrid& grid, std::span<const double> f);
std::vector<double> from_reduced(const RadialGrid& grid, std::span<const double> chi);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> xs);

class CompensatedAccumulator {
public:
    void add(double x);
    double value() const { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

}  // namespace hybridbec
