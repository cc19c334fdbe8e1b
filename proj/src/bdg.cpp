#include "hybridbec/bdg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "hybridbec/errors.hpp"

namespace hybridbec {

std::string_view to_string(Species s) { return s == Species::atom ? "atom" : "molecule"; }

std::string_view to_string(BdgMethod m) {
    switch (m) {
        case BdgMethod::paper_literal: return "paper-literal";
        case BdgMethod::block_2x2: return "block-2x2";
        case BdgMethod::direct_grid: return "direct-grid";
    }
    return "?";
}

std::string_view to_string(LevelConvention c) { return c == LevelConvention::paper ? "paper" : "oscillator"; }
std::string_view to_string(Averaging a) { return a == Averaging::density ? "density" : "volume"; }

BdgMethod parse_method(std::string_view name) {
    if (name == "paper" || name == "paper-literal") return BdgMethod::paper_literal;
    if (name == "block" || name == "block-2x2") return BdgMethod::block_2x2;
    if (name == "grid" || name == "direct-grid") return BdgMethod::direct_grid;
    throw ConfigError(fmt::format("unknown BdG method '{}' (expected paper|block|grid)", name));
}

LevelConvention parse_levels(std::string_view name) {
    if (name == "paper") return LevelConvention::paper;
    if (name == "oscillator") return LevelConvention::oscillator;
    throw ConfigError(fmt::format("unknown level convention '{}' (expected paper|oscillator)", name));
}

Averaging parse_averaging(std::string_view name) {
    if (name == "density") return Averaging::density;
    if (name == "volume") return Averaging::volume;
    throw ConfigError(fmt::format("unknown averaging '{}' (expected density|volume)", name));
}

namespace {

struct SpeciesTrap {
    double mass;
    double omega;
};

SpeciesTrap trap_of(Species s, const PhysicalParams& p) {
    return s == Species::atom ? SpeciesTrap{p.mass, p.omega_a} : SpeciesTrap{2.0 * p.mass, p.omega_m};
}

// Pointwise diagonal (without the basis level and -mu) and off-diagonal coupling.
struct LocalTerms {
    std::vector<double> diag;
    std::vector<double> delta;
};

LocalTerms local_terms(Species s, const CondensateState& st, const PhysicalParams& p, bool drop_cross) {
    const std::size_t n = st.phi_a.size();
    LocalTerms t{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double na = st.phi_a[i] * st.phi_a[i];
        const double nm = st.phi_m[i] * st.phi_m[i];
        if (s == Species::atom) {
            t.diag[i] = p.lambda_am * nm + 2.0 * p.lambda_a * na;
            t.delta[i] = p.lambda_a * na + 2.0 * p.alpha * st.phi_m[i];
        } else {
            t.diag[i] = p.epsilon + (drop_cross ? 0.0 : p.lambda_am * na) + 2.0 * p.lambda_m * nm;
            t.delta[i] = p.lambda_m * nm;
        }
    }
    return t;
}

double chemical_potential(Species s, const CondensateState& st) { return s == Species::atom ? st.mu_a : st.mu_m; }

void check_state(const CondensateState& st, const RadialGrid& grid) {
    if (st.phi_a.size() != grid.size() || st.phi_m.size() != grid.size())
        throw DimensionMismatch(fmt::format("BdG: condensate has {}/{} points, grid has {}", st.phi_a.size(),
                                            st.phi_m.size(), grid.size()));
}

double laguerre_half(int n, double x) {
    constexpr double a = 0.5;
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + a - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> scaled(const std::vector<double>& f, double c) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = c * f[i];
    return out;
}

// Weighted mean used to collapse the r-dependent literal eigenvalue.
class Averager {
public:
    Averager(const RadialGrid& grid, std::span<const double> phi, Averaging mode) : grid_(grid), w_(grid.size()) {
        double total = 0.0;
        if (mode == Averaging::density) {
            for (std::size_t i = 0; i < w_.size(); ++i) w_[i] = phi[i] * phi[i];
            total = grid.integrate(w_);
        }
        if (!(total > 0.0)) {
            std::fill(w_.begin(), w_.end(), 1.0);
            total = grid.integrate(w_);
        }
        for (double& x : w_) x /= total;
    }

    double operator()(std::span<const double> f) const { return grid_.inner(w_, f); }

private:
    const RadialGrid& grid_;
    std::vector<double> w_;
};

Mode literal_mode(int j, int branch, const std::vector<double>& h, const std::vector<double>& delta,
                  const std::vector<double>& basis, const Averager& avg, const BdgOptions& opts, std::size_t& sweeps) {
    const std::size_t n = h.size();
    const double sgn = static_cast<double>(branch);
    const double h_bar = avg(h);
    const double d_bar = avg(delta);
    std::vector<double> e(n);
    double mean = std::numeric_limits<double>::quiet_NaN();
    double f_star = 0.0;

    std::size_t sweep = 0;
    for (;;) {
        if (++sweep > opts.max_sweeps)
            throw FixedPointDivergence(fmt::format("paper-literal: j={} branch {} not converged after {} sweeps", j,
                                                   branch > 0 ? '+' : '-', opts.max_sweeps));
        for (std::size_t i = 0; i < n; ++i) e[i] = sgn * (delta[i] - h[i]);
        const double next = avg(e);
        if (!std::isfinite(next))
            throw FixedPointDivergence(
                fmt::format("paper-literal: non-finite eigenvalue average for j={} branch {}", j, branch > 0 ? '+' : '-'));
        f_star = d_bar == 0.0 ? 0.0 : d_bar / (h_bar - next * next);
        const bool done = std::isfinite(mean) && std::abs(next - mean) < opts.fixed_point_tol;
        mean = next;
        if (done) break;
    }
    sweeps = std::max(sweeps, sweep);

    Mode m;
    m.j = j;
    m.branch = branch;
    m.energy = {mean, 0.0};

    const std::complex<double> b = 1.0 / std::sqrt(std::complex<double>(f_star - 1.0, 0.0));
    const std::complex<double> a = f_star * b;
    m.coeff_a = a;
    m.coeff_b = b;
    m.unstable = f_star - 1.0 < 0.0;

    const double a2 = std::norm(a);
    const double b2 = std::norm(b);
    const double diff = a2 - b2;
    if (diff > 0.0 && std::isfinite(diff)) {
        const double s = 1.0 / std::sqrt(diff);
        m.u = scaled(basis, std::sqrt(a2) * s);
        m.v = scaled(basis, (a.real() * b.real() + a.imag() * b.imag() < 0.0 ? -1.0 : 1.0) * std::sqrt(b2) * s);
        m.norm = 1.0;
    } else {
        m.normalizable = false;
        m.u = scaled(basis, std::isfinite(a2) ? std::sqrt(a2) : 0.0);
        m.v = scaled(basis, std::isfinite(b2) ? std::sqrt(b2) : 0.0);
        m.norm = diff;
    }
    return m;
}

template <class PerSpecies>
std::pair<ModeSet, ModeSet> both_species(BdgMethod method, PerSpecies&& fn) {
    ModeSet atoms;
    atoms.species = Species::atom;
    atoms.method = method;
    ModeSet molecules;
    molecules.species = Species::molecule;
    molecules.method = method;
    fn(atoms);
    fn(molecules);
    return {std::move(atoms), std::move(molecules)};
}

}  // namespace

std::vector<double> basis_levels(Species species, const PhysicalParams& p, std::size_t j_max, LevelConvention levels) {
    const double hw = p.hbar * trap_of(species, p).omega;
    std::vector<double> out(j_max);
    for (std::size_t j = 0; j < j_max; ++j) {
        const double jj = static_cast<double>(j);
        out[j] = levels == LevelConvention::paper ? hw * (jj + 0.5) : hw * (2.0 * jj + 1.5);
    }
    return out;
}

std::vector<double> basis_function(Species species, const PhysicalParams& p, const RadialGrid& grid, int j) {
    if (j < 0) throw DomainError("basis_function: j must be >= 0");
    const auto [mass, omega] = trap_of(species, p);
    const double k = mass * omega / p.hbar;
    auto f = grid.map([&](double r) {
        const double x = k * r * r;
        return laguerre_half(j, x) * std::exp(-0.5 * x);
    });
    const double nrm = grid.norm2(f);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw DomainError(fmt::format("basis_function: state j={} not resolved on the grid", j));
    const double s = 1.0 / std::sqrt(nrm);
    for (double& x : f) x *= s;
    return f;
}

Mode solve_block(double h, double delta) {
    Mode m;
    m.branch = h < 0.0 ? -1 : +1;
    const double disc = h * h - delta * delta;
    if (disc < 0.0) {
        m.energy = {0.0, std::sqrt(-disc)};
        m.unstable = true;
        m.normalizable = false;
        m.norm = 0.0;
        m.coeff_a = {std::nan(""), 0.0};
        m.coeff_b = {std::nan(""), 0.0};
        return m;
    }
    const double e = std::sqrt(disc);
    m.energy = {e, 0.0};
    if (e == 0.0) {
        m.normalizable = false;
        m.norm = 0.0;
        m.coeff_a = {std::numeric_limits<double>::infinity(), 0.0};
        m.coeff_b = {std::numeric_limits<double>::infinity(), 0.0};
        return m;
    }
    const double a = std::sqrt((std::abs(h) + e) / (2.0 * e));
    double b = std::sqrt(std::max(0.0, (std::abs(h) - e) / (2.0 * e)));
    // Positive-norm eigenvector: B has the sign of Delta on the normal branch,
    // the opposite sign on the anomalous one.
    if ((delta < 0.0) != (h < 0.0)) b = -b;
    m.coeff_a = {a, 0.0};
    m.coeff_b = {b, 0.0};
    m.norm = 1.0;
    return m;
}

double mode_norm(const Mode& m, const RadialGrid& grid) { return grid.norm2(m.u) - grid.norm2(m.v); }

std::pair<ModeSet, ModeSet> paper_literal_spectrum(const CondensateState& state, const PhysicalParams& p,
                                                   const RadialGrid& grid, std::size_t j_max,
                                                   const BdgOptions& opts) {
    check_state(state, grid);
    return both_species(BdgMethod::paper_literal, [&](ModeSet& set) {
        const Species s = set.species;
        const auto terms = local_terms(s, state, p, opts.strict_literal);
        const auto levels = basis_levels(s, p, j_max, opts.levels);
        const Averager avg(grid, s == Species::atom ? state.phi_a : state.phi_m, opts.averaging);
        const double mu = chemical_potential(s, state);
        std::vector<double> h(grid.size());
        for (std::size_t j = 0; j < j_max; ++j) {
            for (std::size_t i = 0; i < grid.size(); ++i) h[i] = levels[j] - mu + terms.diag[i];
            const auto basis = basis_function(s, p, grid, static_cast<int>(j));
            for (int branch : {+1, -1})
                set.modes.push_back(literal_mode(static_cast<int>(j), branch, h, terms.delta, basis, avg, opts, set.sweeps));
        }
    });
}

std::pair<ModeSet, ModeSet> block_2x2_spectrum(const CondensateState& state, const PhysicalParams& p,
                                               const RadialGrid& grid, std::size_t j_max, const BdgOptions& opts) {
    check_state(state, grid);
    return both_species(BdgMethod::block_2x2, [&](ModeSet& set) {
        const Species s = set.species;
        const auto terms = local_terms(s, state, p, false);
        const auto levels = basis_levels(s, p, j_max, opts.levels);
        const double mu = chemical_potential(s, state);
        for (std::size_t j = 0; j < j_max; ++j) {
            const auto basis = basis_function(s, p, grid, static_cast<int>(j));
            std::vector<double> b2(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) b2[i] = basis[i] * basis[i];
            const double h = levels[j] - mu + grid.inner(b2, terms.diag);
            const double delta = grid.inner(b2, terms.delta);
            Mode m = solve_block(h, delta);
            m.j = static_cast<int>(j);
            const double a = std::isfinite(m.coeff_a.real()) ? m.coeff_a.real() : 0.0;
            const double b = std::isfinite(m.coeff_b.real()) ? m.coeff_b.real() : 0.0;
            m.u = scaled(basis, a);
            m.v = scaled(basis, b);
            set.modes.push_back(std::move(m));
        }
    });
}

Eigen::MatrixXd bdg_matrix(const CondensateState& state, const PhysicalParams& p, const RadialGrid& grid,
                           Species species, int l) {
    check_state(state, grid);
    const std::size_t n = grid.size();
    const auto terms = local_terms(species, state, p, false);
    const double mu = chemical_potential(species, state);
    auto pot = species == Species::atom ? atom_trap(p, grid) : molecule_trap(p, grid);
    for (std::size_t i = 0; i < n; ++i) pot[i] += terms.diag[i] - mu;
    const Tridiagonal lmat = RadialOperator(grid, trap_of(species, p).mass, l, pot, p.hbar).matrix();

    const auto nn = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * nn, 2 * nn);
    for (Eigen::Index i = 0; i < nn; ++i) {
        const auto k = static_cast<std::size_t>(i);
        m(i, i) = lmat.diag[k];
        m(nn + i, nn + i) = -lmat.diag[k];
        if (i + 1 < nn) {
            m(i, i + 1) = m(i + 1, i) = lmat.off[k];
            m(nn + i, nn + i + 1) = m(nn + i + 1, nn + i) = -lmat.off[k];
        }
        m(i, nn + i) = -terms.delta[k];
        m(nn + i, i) = terms.delta[k];
    }
    return m;
}

ModeSet direct_grid_modes(const CondensateState& state, const PhysicalParams& p, const RadialGrid& grid,
                          Species s, int l, std::size_t n_modes, const BdgOptions& opts) {
    check_state(state, grid);
    if (l < 0) throw DomainError("direct_grid_spectrum: l must be >= 0");
    const std::size_t n = grid.size();
    const double four_pi_sqrt = std::sqrt(4.0 * std::numbers::pi);
    const double h = grid.spacing();

    ModeSet set;
    set.species = s;
    set.method = BdgMethod::direct_grid;
    const Eigen::MatrixXd m = bdg_matrix(state, p, grid, s, l);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
    if (es.info() != Eigen::Success)
        throw EigensolverFailure(fmt::format("direct-grid: eigensolver failed for {} l={}", to_string(s), l));

    const auto& values = es.eigenvalues();
    const auto& vectors = es.eigenvectors();
    std::vector<Mode> kept;
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        const std::complex<double> ev = values[k];
        if (!std::isfinite(ev.real()) || !std::isfinite(ev.imag()))
            throw EigensolverFailure(fmt::format("direct-grid: non-finite eigenvalue for {} l={}", to_string(s), l));
        auto vec = vectors.col(k);
        // Rotate to a real vector (phase of the largest component).
        Eigen::Index imax = 0;
        vec.cwiseAbs().maxCoeff(&imax);
        const std::complex<double> phase = std::conj(vec[imax]) / std::abs(vec[imax]);
        Eigen::VectorXd re = (vec * phase).real();
        const double imag_rest = (vec * phase).imag().norm();
        const bool complex_mode = std::abs(ev.imag()) > 1e-9 * std::max(1.0, std::abs(ev.real())) ||
                                  imag_rest > 1e-6 * re.norm();
        double su = 0.0, sv = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            su += re[static_cast<Eigen::Index>(i)] * re[static_cast<Eigen::Index>(i)];
            sv += re[static_cast<Eigen::Index>(n + i)] * re[static_cast<Eigen::Index>(n + i)];
        }
        const double sigma = h * (su - sv);
        const double euclid = h * (su + sv);
        if (complex_mode || std::abs(sigma) < opts.zero_norm_tol * euclid) {
            ++set.skipped;
            continue;
        }
        if (sigma < 0.0) continue;  // negative-norm partner of a kept mode
        const double scale = 1.0 / std::sqrt(sigma);
        Mode md;
        md.l = l;
        md.degeneracy = 2 * l + 1;
        md.branch = ev.real() < 0.0 ? -1 : +1;
        md.energy = {ev.real(), 0.0};
        md.zero_mode = std::abs(ev.real()) < opts.zero_energy_tol;
        md.u.resize(n);
        md.v.resize(n);
        // Overall sign: u positive near the origin.
        double sgn = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = re[static_cast<Eigen::Index>(i)];
            if (std::abs(x) > 1e-8 * re.norm()) {
                sgn = x < 0.0 ? -1.0 : 1.0;
                break;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double denom = grid.r(i) * four_pi_sqrt;
            md.u[i] = sgn * scale * re[static_cast<Eigen::Index>(i)] / denom;
            md.v[i] = sgn * scale * re[static_cast<Eigen::Index>(n + i)] / denom;
        }
        md.coeff_a = {std::sqrt(grid.norm2(md.u)), 0.0};
        md.coeff_b = {std::sqrt(grid.norm2(md.v)), 0.0};
        md.norm = 1.0;
        kept.push_back(std::move(md));
    }
    std::sort(kept.begin(), kept.end(),
              [](const Mode& a, const Mode& b) { return a.energy.real() < b.energy.real(); });
    if (set.skipped > 0)
        spdlog::warn("direct-grid {} l={}: skipped {} zero-norm or complex eigenpairs", to_string(s), l, set.skipped);
    if (kept.size() > n_modes) kept.resize(n_modes);
    for (std::size_t k = 0; k < kept.size(); ++k) kept[k].j = static_cast<int>(k);
    set.modes = std::move(kept);
    return set;
}

std::pair<ModeSet, ModeSet> direct_grid_spectrum(const CondensateState& state, const PhysicalParams& p,
                                                 const RadialGrid& grid, int l, std::size_t n_modes,
                                                 const BdgOptions& opts) {
    return {direct_grid_modes(state, p, grid, Species::atom, l, n_modes, opts),
            direct_grid_modes(state, p, grid, Species::molecule, l, n_modes, opts)};
}

}  // namespace hybridbec
