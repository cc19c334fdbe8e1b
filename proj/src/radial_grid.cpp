#include "hybridbec/radial_grid.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "hybridbec/errors.hpp"

namespace hybridbec {

RadialGrid::RadialGrid(double r_max, std::size_t n_points)
    : r_max_(r_max), h_(r_max / static_cast<double>(n_points)), r_(n_points), w_(n_points) {
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw DomainError("RadialGrid: r_max must be finite and > 0");
    if (n_points < 16) throw DomainError(fmt::format("RadialGrid: n_points must be >= 16 (got {})", n_points));
    const double four_pi_h = 4.0 * std::numbers::pi * h_;
    for (std::size_t i = 0; i < n_points; ++i) {
        r_[i] = static_cast<double>(i + 1) * h_;
        w_[i] = four_pi_h * r_[i] * r_[i];
    }
}

double RadialGrid::integrate(std::span<const double> f) const {
    if (f.size() != size()) throw DimensionMismatch("RadialGrid::integrate: length mismatch");
    CompensatedAccumulator acc;
    for (std::size_t i = 0; i < size(); ++i) acc.add(w_[i] * f[i]);
    return acc.value();
}

double RadialGrid::inner(std::span<const double> f, std::span<const double> g) const {
    if (f.size() != size() || g.size() != size()) throw DimensionMismatch("RadialGrid::inner: length mismatch");
    CompensatedAccumulator acc;
    for (std::size_t i = 0; i < size(); ++i) acc.add(w_[i] * f[i] * g[i]);
    return acc.value();
}

std::vector<double> RadialGrid::evaluate(double (*fn)(double)) const { return map(fn); }

RadialGrid build_grid(double r_max, std::size_t n_points) { return RadialGrid(r_max, n_points); }

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
    const std::size_t n = size();
    if (x.size() != n) throw DimensionMismatch("Tridiagonal::apply: length mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += off[i - 1] * x[i - 1];
        if (i + 1 < n) s += off[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw DimensionMismatch("solve_tridiagonal: length mismatch");
    std::vector<double> c(n), d(n);
    double denom = a.diag[0];
    c[0] = n > 1 ? a.off[0] / denom : 0.0;
    d[0] = b[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = a.diag[i] - a.off[i - 1] * c[i - 1];
        c[i] = i + 1 < n ? a.off[i] / denom : 0.0;
        d[i] = (b[i] - a.off[i - 1] * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

RadialOperator::RadialOperator(const RadialGrid& grid, double mass, int l, std::vector<double> potential,
                               double hbar)
    : grid_(&grid), mass_(mass), l_(l), hbar_(hbar), potential_(std::move(potential)) {
    if (potential_.size() != grid.size()) throw DimensionMismatch("RadialOperator: potential length mismatch");
    if (!(mass > 0.0)) throw DomainError("RadialOperator: mass must be > 0");
    if (l < 0) throw DomainError("RadialOperator: l must be >= 0");
}

Tridiagonal RadialOperator::kinetic() const {
    const std::size_t n = grid_->size();
    const double h = grid_->spacing();
    const double t = hbar_ * hbar_ / (2.0 * mass_ * h * h);
    const double centrifugal = static_cast<double>(l_ * (l_ + 1)) * hbar_ * hbar_ / (2.0 * mass_);
    Tridiagonal k;
    k.diag.resize(n);
    k.off.assign(n - 1, -t);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid_->r(i);
        k.diag[i] = 2.0 * t + centrifugal / (r * r);
    }
    return k;
}

Tridiagonal RadialOperator::matrix() const {
    Tridiagonal m = kinetic();
    for (std::size_t i = 0; i < m.size(); ++i) m.diag[i] += potential_[i];
    return m;
}

std::vector<double> apply_hamiltonian(const RadialOperator& op, std::span<const double> chi) {
    if (chi.size() != op.grid().size())
        throw DimensionMismatch(
            fmt::format("apply_hamiltonian: vector has {} entries, grid has {}", chi.size(), op.grid().size()));
    return op.matrix().apply(chi);
}

std::vector<double> harmonic_potential(const RadialGrid& grid, double mass, double omega) {
    return grid.map([&](double r) { return 0.5 * mass * omega * omega * r * r; });
}

std::vector<double> to_reduced(const RadialGrid& grid, std::span<const double> f) {
    std::vector<double> chi(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) chi[i] = grid.r(i) * f[i];
    return chi;
}

std::vector<double> from_reduced(const RadialGrid& grid, std::span<const double> chi) {
    std::vector<double> f(chi.size());
    for (std::size_t i = 0; i < chi.size(); ++i) f[i] = chi[i] / grid.r(i);
    return f;
}

void CompensatedAccumulator::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        c_ += (sum_ - t) + x;
    else
        c_ += (x - t) + sum_;
    sum_ = t;
}

double compensated_sum(std::span<const double> xs) {
    CompensatedAccumulator acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

}  // namespace hybridbec
