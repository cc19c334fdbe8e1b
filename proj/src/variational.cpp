#include "hybridbec/variational.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>
#include <gsl/gsl_multimin.h>

#include "hybridbec/errors.hpp"

namespace hybridbec {

std::string_view to_string(TrialMode m) { return m == TrialMode::m010 ? "010" : "100"; }

TrialMode parse_trial_mode(std::string_view s) {
    if (s == "010" || s == "0,1,0" || s == "(0,1,0)") return TrialMode::m010;
    if (s == "100" || s == "1,0,0" || s == "(1,0,0)") return TrialMode::m100;
    throw ConfigError(fmt::format("unknown trial mode '{}' (expected 010|100)", s));
}

MoleculeCount parse_molecule_count(std::string_view s) {
    if (s == "equal") return MoleculeCount::equal;
    if (s == "fixed") return MoleculeCount::fixed;
    throw ConfigError(fmt::format("unknown n_m_mode '{}' (expected equal|fixed)", s));
}

double shape_factor(double x, double y) {
    const double s = x / (x + y);
    return 1.5 * std::pow(s, 1.5) - 3.0 * std::pow(s, 2.5) + 2.5 * std::pow(s, 3.5);
}

namespace {

// Shared structure of both functionals; `overlap(x, y)` is the mode-specific
// factor ([x/(x+y)]^{5/2} or the shape factor).
template <class Overlap>
double trial_functional(double prefactor, double v, double omega, const PhysicalParams& p, Overlap overlap) {
    if (!(omega > 0.0)) throw DomainError(fmt::format("trial functional: omega must be > 0 (got {})", omega));
    const double pi = std::numbers::pi;
    const double hb = p.hbar;
    const double w = omega;
    const double v2 = 1.0 + 2.0 * v * v;
    const double vc = v * std::sqrt(1.0 + v * v);
    const double pair_mass = 2.0 * p.mass / (pi * hb);
    const double atom_mass = p.mass / (pi * hb);

    const double osc = v2 * prefactor * (hb * w + hb * p.omega_a * p.omega_a / w);
    const double cross = p.lambda_am * v2 * p.N_m * std::pow(p.omega_m, 1.5) * std::pow(pair_mass, 1.5) *
                         overlap(w, 2.0 * p.omega_m);
    const double self = (2.0 * p.lambda_a * v2 - 2.0 * p.lambda_a * vc) * p.N_a * std::pow(p.omega_a, 1.5) *
                        std::pow(atom_mass, 1.5) * overlap(w, p.omega_a);
    const double conv = -4.0 * p.alpha * vc * overlap(w, p.omega_m) * std::sqrt(p.N_m) * std::pow(p.omega_m, 0.75) *
                        std::pow(pair_mass, 0.75);
    return osc + cross + self + conv;
}

double power_overlap(double x, double y) { return std::pow(x / (x + y), 2.5); }

struct Objective {
    TrialMode mode;
    const PhysicalParams* p;
};

// Polish coordinates: (t, log omega) with v = |t|.
double polish_f(const gsl_vector* x, void* data) {
    const auto* obj = static_cast<const Objective*>(data);
    const double v = std::abs(gsl_vector_get(x, 0));
    const double w = std::exp(gsl_vector_get(x, 1));
    if (!std::isfinite(w) || w <= 0.0) return std::numeric_limits<double>::infinity();
    return trial_energy(obj->mode, v, w, *obj->p);
}

struct Polished {
    double v;
    double w;
    double e;
};

Polished nelder_mead(const Objective& obj, double v0, double w0, double dv, double dlogw, double tol) {
    gsl_multimin_function fn{&polish_f, 2, const_cast<Objective*>(&obj)};
    gsl_vector* x = gsl_vector_alloc(2);
    gsl_vector* step = gsl_vector_alloc(2);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    Polished out{v0, w0, 0.0};
    // A restart from the converged point guards against simplex collapse.
    for (int pass = 0; pass < 3; ++pass) {
        gsl_vector_set(x, 0, out.v);
        gsl_vector_set(x, 1, std::log(out.w));
        gsl_vector_set(step, 0, pass == 0 ? dv : dv * 0.1);
        gsl_vector_set(step, 1, pass == 0 ? dlogw : dlogw * 0.1);
        gsl_multimin_fminimizer_set(s, &fn, x, step);
        for (int it = 0; it < 20000; ++it) {
            if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), tol) == GSL_SUCCESS) break;
        }
        out.v = std::abs(gsl_vector_get(s->x, 0));
        out.w = std::exp(gsl_vector_get(s->x, 1));
        out.e = s->fval;
    }
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
    return out;
}

}  // namespace

double energy_010(double v, double omega, const PhysicalParams& p) {
    return trial_functional(1.25, v, omega, p, power_overlap);
}

double energy_100(double v, double omega, const PhysicalParams& p) {
    return trial_functional(1.75, v, omega, p, shape_factor);
}

double trial_energy(TrialMode mode, double v, double omega, const PhysicalParams& p) {
    return mode == TrialMode::m010 ? energy_010(v, omega, p) : energy_100(v, omega, p);
}

PhysicalParams nonresonant(const PhysicalParams& p) {
    PhysicalParams q = p;
    q.alpha = 0.0;
    q.lambda_am = 0.0;
    return q;
}

VariationalResult minimize_mode(TrialMode mode, const PhysicalParams& p, double n_atoms,
                                const VariationalOptions& opts) {
    if (!(n_atoms > 0.0)) throw DomainError(fmt::format("minimize_mode: n_atoms must be > 0 (got {})", n_atoms));
    if (!(opts.v_max > 0.0) || !(opts.omega_lo > 0.0) || !(opts.omega_hi > opts.omega_lo) || opts.coarse < 2)
        throw ConfigError("variational: need v_max > 0, 0 < omega_lo < omega_hi, coarse >= 2");

    PhysicalParams q = p;
    q.N_a = n_atoms;
    if (opts.molecules == MoleculeCount::equal) q.N_m = n_atoms;

    const double wa = q.omega_a;
    const double lo = std::log(opts.omega_lo * wa);
    const double hi = std::log(opts.omega_hi * wa);
    const int n = opts.coarse;
    const double dv = opts.v_max / (n - 1);
    const double dl = (hi - lo) / (n - 1);

    double best = std::numeric_limits<double>::infinity();
    double bv = 0.0, bw = wa;
    for (int i = 0; i < n; ++i) {
        const double v = i * dv;
        for (int k = 0; k < n; ++k) {
            const double w = std::exp(lo + k * dl);
            const double e = trial_energy(mode, v, w, q);
            if (e < best) {
                best = e;
                bv = v;
                bw = w;
            }
        }
    }

    const Objective obj{mode, &q};
    const Polished pol = nelder_mead(obj, bv, bw, dv, dl, opts.polish_tol);

    VariationalResult r;
    r.mode = mode;
    r.n_atoms = n_atoms;
    r.resonant = p.alpha != 0.0 || p.lambda_am != 0.0;
    r.v_opt = pol.v;
    r.omega_opt = pol.w;
    r.energy = pol.e;

    const double w_lo = opts.omega_lo * wa;
    const double w_hi = opts.omega_hi * wa;
    if (!std::isfinite(r.energy) || r.v_opt >= opts.v_max || r.omega_opt <= w_lo || r.omega_opt >= w_hi)
        throw NoInteriorMinimum(fmt::format(
            "mode {} N={}: optimum (v={:.6g}, omega={:.6g}, E={:.6g}) outside search box v<{}, {}<omega<{}",
            to_string(mode), n_atoms, r.v_opt, r.omega_opt, r.energy, opts.v_max, w_lo, w_hi));

    const double hv = 1e-5 * std::max(1.0, r.v_opt);
    const double hw = 1e-5 * r.omega_opt;
    if (r.v_opt >= hv)
        r.grad_v = (trial_energy(mode, r.v_opt + hv, r.omega_opt, q) - trial_energy(mode, r.v_opt - hv, r.omega_opt, q)) /
                   (2.0 * hv);
    else
        r.grad_v = (trial_energy(mode, r.v_opt + hv, r.omega_opt, q) - r.energy) / hv;
    r.grad_omega = (trial_energy(mode, r.v_opt, r.omega_opt + hw, q) - trial_energy(mode, r.v_opt, r.omega_opt - hw, q)) /
                   (2.0 * hw);
    return r;
}

std::vector<VariationalResult> sweep_spectrum(TrialMode mode, const PhysicalParams& p,
                                              const std::vector<double>& n_list, const VariationalOptions& opts) {
    if (n_list.empty()) throw ConfigError("sweep_spectrum: empty atom-number list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (!(n_list[i] > n_list[i - 1])) throw ConfigError("sweep_spectrum: atom numbers must be strictly ascending");
    const PhysicalParams off = nonresonant(p);
    std::vector<VariationalResult> out;
    out.reserve(2 * n_list.size());
    for (double n : n_list) {
        out.push_back(minimize_mode(mode, p, n, opts));
        auto r = minimize_mode(mode, off, n, opts);
        r.resonant = false;
        out.push_back(r);
    }
    return out;
}

}  // namespace hybridbec
