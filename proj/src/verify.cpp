#include "tblandscape/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tblandscape/kernels.hpp"

namespace tbl {

double CheckResult::scale() const { return std::max({std::abs(lhs), std::abs(rhs), 1.0}); }

double CheckResult::relative_error() const { return std::abs(lhs - rhs) / scale(); }

CheckResult identity_check(std::string name, double lhs, double rhs, double tolerance) {
    CheckResult r;
    r.name = std::move(name);
    r.kind = CheckKind::Identity;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = std::abs(lhs - rhs);
    r.tolerance = tolerance;
    r.passed = r.slack <= tolerance * r.scale();
    return r;
}

CheckResult inequality_check(std::string name, double lhs, double rhs, double tolerance) {
    CheckResult r;
    r.name = std::move(name);
    r.kind = CheckKind::Inequality;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.tolerance = tolerance;
    r.passed = lhs <= rhs + tolerance * r.scale();
    return r;
}

void sort_checks(std::vector<CheckResult>& checks) {
    std::stable_sort(checks.begin(), checks.end(), [](const CheckResult& a, const CheckResult& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.ordinal.value_or(0) < b.ordinal.value_or(0);
    });
}

CheckResult check_green(const Lattice& lat, std::span<const double> f, std::span<const double> g, double tol) {
    require_size(f.size(), lat.size(), "f");
    require_size(g.size(), lat.size(), "g");
    const std::vector<double> zero(lat.size(), 0.0);
    std::vector<double> lap(lat.size());
    kernels::stencil_apply(lat, zero, f, lap);
    const double lhs = kernels::dot_serial(g, lap);

    // Sum over every edge (n, n + e_i) with at least one endpoint in the lattice,
    // values outside a Dirichlet cube taken as zero.
    double rhs = 0.0;
    for (std::size_t n = 0; n < lat.size(); ++n) {
        for (int i = 0; i < lat.dim(); ++i) {
            const std::size_t m = lat.step(n, i, +1);
            const double gf = m == kNoSite ? 0.0 : g[m];
            const double ff = m == kNoSite ? 0.0 : f[m];
            rhs += (gf - g[n]) * (ff - f[n]);
            if (!lat.periodic() && lat.coord(n, i) == 1) rhs += g[n] * f[n];
        }
    }
    return identity_check("green_identity", lhs, rhs, tol);
}

CheckResult check_max_principle(const Hamiltonian& h, std::span<const double> f, double tol) {
    require_size(f.size(), h.size(), "f");
    const std::vector<double> hf = h.apply(f);
    return check_max_principle(f, hf, tol);
}

CheckResult check_max_principle(std::span<const double> f, std::span<const double> hf, double tol) {
    require_size(hf.size(), f.size(), "Hf");
    const auto fmin = std::min_element(f.begin(), f.end());
    const double hmin = *std::min_element(hf.begin(), hf.end());
    CheckResult r = inequality_check("max_principle", -*fmin, 0.0, tol);
    r.extras = {{"min_f", *fmin}, {"min_Hf", hmin}};
    if (hmin < -tol) {
        r.passed = true;
        r.note = "premise min(Hf) >= 0 not met; vacuous";
    } else if (!r.passed) {
        r.witness = static_cast<std::size_t>(fmin - f.begin());
        std::ostringstream os;
        os << "Hf >= 0 but f[" << *r.witness << "] = " << *fmin;
        r.note = os.str();
    }
    return r;
}

CheckResult check_landscape_bound(const LandscapeField& landscape, double tol) {
    const auto it = std::min_element(landscape.u.begin(), landscape.u.end());
    CheckResult r = inequality_check(landscape.is_dual ? "dual_landscape_lower_bound" : "landscape_lower_bound",
                                     landscape.lower_bound, *it, tol);
    if (!r.passed) r.witness = static_cast<std::size_t>(it - landscape.u.begin());
    r.extras = {{"residual_inf", landscape.residual_inf}};
    return r;
}

namespace {

template <typename EdgeFn>
void for_each_edge(const Lattice& lat, EdgeFn&& fn) {
    for (std::size_t n = 0; n < lat.size(); ++n) {
        for (int i = 0; i < lat.dim(); ++i) {
            const std::size_t m = lat.step(n, i, +1);
            if (m != kNoSite) fn(n, m);
        }
    }
}

}  // namespace

std::vector<CheckResult> check_uncertainty(const Hamiltonian& h, const LandscapeField& landscape,
                                           std::span<const double> f, std::span<const double> g, double tol) {
    const Lattice& lat = h.lattice();
    require_size(f.size(), lat.size(), "f");
    require_size(g.size(), lat.size(), "g");
    require_size(landscape.u.size(), lat.size(), "landscape");
    const auto& u = landscape.u;
    const auto& w = landscape.w_eff;

    const std::vector<double> hf = h.apply(f);
    const double lhs = kernels::dot_serial(g, hf);
    double grad = 0.0;
    double grad_ff = 0.0;
    for_each_edge(lat, [&](std::size_t n, std::size_t m) {
        const double dg = g[m] / u[m] - g[n] / u[n];
        const double df = f[m] / u[m] - f[n] / u[n];
        grad += u[m] * u[n] * dg * df;
        grad_ff += u[m] * u[n] * df * df;
    });
    double mass_gf = 0.0, mass_ff = 0.0, abs_gf = 0.0;
    for (std::size_t n = 0; n < lat.size(); ++n) {
        mass_gf += w[n] * g[n] * f[n];
        mass_ff += w[n] * f[n] * f[n];
        abs_gf += w[n] * std::abs(g[n] * f[n]);
    }
    // The identity needs H u = 1 exactly; the solver residual enters linearly.
    const double drift_gf = landscape.residual_inf * abs_gf;
    const double drift_ff = landscape.residual_inf * mass_ff;

    CheckResult id = identity_check("uncertainty_identity", lhs, grad + mass_gf, 0.0);
    id.tolerance = tol + drift_gf / id.scale();
    id.passed = id.slack <= id.tolerance * id.scale();
    id.extras = {{"gradient_term", grad}, {"potential_term", mass_gf}};

    const double ff = kernels::dot_serial(f, hf);
    CheckResult ineq = inequality_check("uncertainty_inequality", mass_ff, ff, 0.0);
    ineq.tolerance = tol + drift_ff / ineq.scale();
    ineq.passed = ineq.lhs <= ineq.rhs + ineq.tolerance * ineq.scale();
    ineq.extras = {{"gradient_term", grad_ff}};
    return {id, ineq};
}

std::vector<CheckResult> check_eigen_identity(const Hamiltonian& h, const LandscapeField& landscape,
                                              const Eigenpair& pair, std::span<const double> g, double tol) {
    const Lattice& lat = h.lattice();
    require_size(g.size(), lat.size(), "g");
    require_size(pair.phi.size(), lat.size(), "eigenvector");
    const auto& u = landscape.u;
    const auto& w = landscape.w_eff;
    const auto& phi = pair.phi;
    const double mu = pair.mu;

    double mass = 0.0, mass_abs = 0.0, g2phi_sq = 0.0;
    for (std::size_t n = 0; n < lat.size(); ++n) {
        const double p2g2 = phi[n] * phi[n] * g[n] * g[n];
        mass += (w[n] - mu) * p2g2;
        mass_abs += w[n] * p2g2;
        g2phi_sq += g[n] * g[n] * p2g2;
    }
    double weighted = 0.0, hopping = 0.0;
    for_each_edge(lat, [&](std::size_t n, std::size_t m) {
        const double d = g[m] * phi[m] / u[m] - g[n] * phi[n] / u[n];
        weighted += u[m] * u[n] * d * d;
        const double dg = g[m] - g[n];
        hopping += phi[m] * phi[n] * dg * dg;
    });
    double spread = 0.0;
    for (std::size_t n = 0; n < lat.size(); ++n) {
        double s = 0.0;
        for (std::size_t m : lat.neighbors(n)) s += (g[m] - g[n]) * (g[m] - g[n]);
        spread += phi[n] * phi[n] * s;
    }
    spread *= 0.5;

    // Exact only for exact eigenpairs and an exact landscape.
    const double drift = std::sqrt(g2phi_sq) * pair.residual + landscape.residual_inf * mass_abs;

    CheckResult id = identity_check("eigen_identity", mass + weighted, hopping, 0.0);
    id.ordinal = pair.ordinal;
    id.tolerance = tol + drift / id.scale();
    id.passed = id.slack <= id.tolerance * id.scale();
    id.extras = {{"mu", mu}, {"weighted_gradient_term", weighted}};

    CheckResult ineq = inequality_check("eigen_inequality", mass, spread, 0.0);
    ineq.ordinal = pair.ordinal;
    ineq.tolerance = tol + drift / ineq.scale();
    ineq.passed = ineq.lhs <= ineq.rhs + ineq.tolerance * ineq.scale();
    ineq.extras = {{"mu", mu}};
    return {id, ineq};
}

std::vector<double> decay_test_function(std::span<const double> h, double alpha) {
    std::vector<double> g(h.size());
    for (std::size_t n = 0; n < h.size(); ++n) {
        const double e = std::exp(alpha * h[n]);
        g[n] = h[n] < 1.0 ? h[n] * e : e;
    }
    return g;
}

CheckResult check_lipschitz(std::span<const double> w, std::span<const double> h, const Lattice& lat, double tol) {
    require_size(w.size(), lat.size(), "weight");
    require_size(h.size(), lat.size(), "distance");
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t witness = 0;
    std::size_t violations = 0;
    for_each_edge(lat, [&](std::size_t n, std::size_t m) {
        const double excess = std::abs(h[m] - h[n]) - step_cost(w[n], w[m]);
        if (excess > tol) ++violations;
        if (excess > worst) {
            worst = excess;
            witness = n;
        }
    });
    CheckResult r = inequality_check("agmon_lipschitz", worst, 0.0, tol);
    // Absolute slack on the edge excess; no rescaling by the magnitude.
    r.passed = worst <= tol;
    r.extras = {{"violating_edges", static_cast<double>(violations)}};
    if (!r.passed) {
        r.witness = witness;
        r.note = "edge starting at site " + std::to_string(witness) + " exceeds its step cost";
    }
    return r;
}

CheckResult check_lipschitz(const AgmonField& agmon, const Lattice& lat, double tol) {
    CheckResult r = check_lipschitz(agmon.w, agmon.h, lat, tol);
    if (agmon.is_dual) r.name = "dual_agmon_lipschitz";
    return r;
}

CEstimate estimate_C_abs(const AgmonField& agmon, double alpha, const Lattice& lat) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidAlpha, "alpha must be positive");
    CEstimate est;
    const auto visit = [&](std::size_t n, std::size_t m) {
        const double x = alpha * (agmon.h[m] - agmon.h[n]);
        const double up = std::expm1(x);
        const double down = std::expm1(-x);
        const double lhs = std::max(up * up, down * down);
        ++est.edges;
        if (agmon.w[n] > 0.0) {
            est.c_abs = std::max(est.c_abs, lhs / (alpha * alpha * agmon.w[n]));
        } else if (lhs > 0.0) {
            ++est.excluded;
        }
    };
    for_each_edge(lat, [&](std::size_t n, std::size_t m) {
        visit(n, m);
        visit(m, n);
    });
    return est;
}

DecayBoundParams make_decay_params(double alpha, double delta, double c_abs, int dim, double v_max, Boundary bc) {
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidConfig, "delta must be positive");
    const double denom = 1.0 - c_abs * dim * alpha * alpha;
    if (!(alpha > 0.0) || !(denom > 0.0)) {
        std::ostringstream os;
        os << "alpha = " << alpha << " must lie in (0, 1/sqrt(C d)) with C = " << c_abs;
        throw Error(ErrorCode::InvalidAlpha, os.str());
    }
    const double strength = bc == Boundary::Periodic ? v_max : v_max + dim;
    const double e2a = std::exp(2.0 * alpha);
    DecayBoundParams p;
    p.alpha = alpha;
    p.delta = delta;
    p.c_abs = c_abs;
    p.c0 = (4.0 * e2a * dim + (2.0 + 6.0 * c_abs * alpha * alpha) * e2a * dim * strength) / denom;
    return p;
}

DecayBoundParams calibrate_decay_params(const AgmonField& agmon, const Lattice& lat, double v_max) {
    const int d = lat.dim();
    const auto excess = [&](double a) { return a * std::sqrt(estimate_C_abs(agmon, a, lat).c_abs * d) - 0.9; };
    double lo = 0.0;
    double hi = 0.1;
    int grow = 0;
    while (excess(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 60) {
            // h has no variation at all: C = 0 and every alpha is admissible.
            return make_decay_params(1.0, agmon.delta, 0.0, d, v_max, lat.boundary());
        }
    }
    for (int it = 0; it < 80 && hi - lo > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    const double alpha = lo > 0.0 ? lo : 0.5 * hi;
    return make_decay_params(alpha, agmon.delta, estimate_C_abs(agmon, alpha, lat).c_abs, d, v_max,
                             lat.boundary());
}

bool decay_hypothesis_met(const Hamiltonian& h, double mu, double delta, bool dual) {
    const double top = h.spectral_bound();
    if (dual) return mu >= top - h.v_max() + delta && mu < top;
    return mu > 0.0 && mu <= h.v_max() - delta;
}

CheckResult check_decay_bound(const Hamiltonian& h, const Eigenpair& pair, const AgmonField& agmon,
                              const DecayBoundParams& params) {
    const double delta = agmon.delta;
    if (!decay_hypothesis_met(h, pair.mu, delta, agmon.is_dual)) {
        std::ostringstream os;
        os << "mu = " << pair.mu << " outside the " << (agmon.is_dual ? "dual" : "primal") << " admissible band";
        throw Error(ErrorCode::HypothesisNotMet, os.str());
    }
    const double expected_mu = agmon.is_dual ? h.spectral_bound() - pair.mu : pair.mu;
    if (std::abs(expected_mu - agmon.mu) > 1e-12 * std::max(1.0, std::abs(expected_mu))) {
        throw Error(ErrorCode::NotApplicable, "Agmon field was built for a different energy");
    }
    if (std::abs(params.delta - delta) > 0.0) {
        throw Error(ErrorCode::NotApplicable, "decay parameters were built for a different delta");
    }
    // Re-validates alpha against the constant carried by the parameters.
    make_decay_params(params.alpha, params.delta, params.c_abs, h.lattice().dim(), h.v_max(), h.lattice().boundary());

    double lhs = 0.0, mass = 0.0;
    for (std::size_t n = 0; n < pair.phi.size(); ++n) {
        const double p2 = pair.phi[n] * pair.phi[n];
        mass += p2;
        if (agmon.h[n] >= 1.0) lhs += std::exp(2.0 * params.alpha * agmon.h[n]) * p2;
    }
    CheckResult r = inequality_check(agmon.is_dual ? "dual_decay_bound" : "decay_bound", lhs,
                                     params.c0 / delta * mass, 1e-9);
    r.ordinal = pair.ordinal;
    const int d = h.lattice().dim();
    r.extras = {{"mu", pair.mu},
                {"alpha", params.alpha},
                {"c_abs", params.c_abs},
                {"c0", params.c0},
                {"tightness", lhs * delta / mass},
                {"c1_sqrt_d", 2.0 * params.alpha * std::sqrt(static_cast<double>(d))},
                {"c0_over_d_vmax_plus_d", params.c0 / (d * (h.v_max() + d))}};
    return r;
}

DecayProfile decay_profile(const Eigenpair& pair, const AgmonField& agmon) {
    DecayProfile prof;
    for (std::size_t n = 0; n < pair.phi.size(); ++n) {
        const double a = std::abs(pair.phi[n]);
        if (a > 1e-30) prof.points.emplace_back(agmon.h[n], std::log10(a));
    }
    const auto count = static_cast<double>(prof.points.size());
    if (prof.points.size() < 2) return prof;
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : prof.points) {
        mx += x;
        my += y;
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : prof.points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx > 0.0) prof.slope = sxy / sxx;
    return prof;
}

AgmonField host_well_field(const Eigenpair& pair, const AgmonField& agmon, const Lattice& lat) {
    if (agmon.wells.components <= 1) return agmon;
    std::vector<double> mass(static_cast<std::size_t>(agmon.wells.components), 0.0);
    for (std::size_t n : agmon.wells.sites) {
        mass[static_cast<std::size_t>(agmon.wells.label[n])] += pair.phi[n] * pair.phi[n];
    }
    const int host = static_cast<int>(std::max_element(mass.begin(), mass.end()) - mass.begin());
    AgmonField f = agmon;
    f.wells.sites.clear();
    for (std::size_t n = 0; n < f.wells.label.size(); ++n) {
        if (f.wells.label[n] == host) {
            f.wells.sites.push_back(n);
            f.wells.label[n] = 0;
        } else {
            f.wells.label[n] = -1;
        }
    }
    f.wells.components = 1;
    f.h = agmon_distance_field(f.w, f.wells.sites, lat);
    return f;
}

double well_containment(const Eigenpair& pair, const AgmonField& agmon) {
    double inside = 0.0, total = 0.0;
    for (std::size_t n = 0; n < pair.phi.size(); ++n) {
        const double p2 = pair.phi[n] * pair.phi[n];
        total += p2;
        if (agmon.wells.label[n] >= 0 || agmon.h[n] < 1.0) inside += p2;
    }
    return total > 0.0 ? inside / total : 0.0;
}

}  // namespace tbl
