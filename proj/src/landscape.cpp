#include "tblandscape/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tblandscape/kernels.hpp"

namespace tbl {

double LandscapeField::min_u() const { return *std::min_element(u.begin(), u.end()); }

double landscape_lower_bound(const Hamiltonian& h) {
    const double beta = h.lattice().periodic() ? h.v_max() : h.v_max() + h.lattice().dim();
    return 1.0 / beta;
}

namespace {

void true_residual(const Hamiltonian& h, std::span<const double> b, std::span<const double> x,
                   std::span<double> r, bool parallel) {
    if (parallel) {
        h.apply(x, r);
    } else {
        h.apply_serial(x, r);
    }
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

}  // namespace

CgReport conjugate_gradient(const Hamiltonian& h, std::span<const double> b, std::span<double> x,
                            const CgOptions& options) {
    const std::size_t n = h.size();
    require_size(b.size(), n, "right-hand side");
    require_size(x.size(), n, "solution vector");
    const std::size_t cap = options.max_iterations != 0
                                ? options.max_iterations
                                : static_cast<std::size_t>(std::ceil(50.0 * std::sqrt(static_cast<double>(n))));
    const auto dot = options.parallel ? kernels::dot : kernels::dot_serial;
    const auto axpy = options.parallel ? kernels::axpy : kernels::axpy_serial;

    std::vector<double> r(n), p(n), q(n);
    CgReport report;
    true_residual(h, b, x, r, options.parallel);
    report.residual_inf = kernels::norm_inf(r);

    // The recurrence residual drifts from b - Hx; each time it claims convergence
    // the true residual is recomputed and the iteration restarts from it if needed.
    while (report.residual_inf > options.tol && report.iterations < cap) {
        std::copy(r.begin(), r.end(), p.begin());
        double rr = dot(r, r);
        while (report.iterations < cap) {
            if (options.parallel) {
                h.apply(p, q);
            } else {
                h.apply_serial(p, q);
            }
            const double pq = dot(p, q);
            if (!(pq > 0.0)) break;
            const double step = rr / pq;
            axpy(step, p, x);
            axpy(-step, q, r);
            ++report.iterations;
            if (kernels::norm_inf(r) <= 0.5 * options.tol) break;
            const double rr_next = dot(r, r);
            kernels::xpby(r, rr_next / rr, p);
            rr = rr_next;
        }
        true_residual(h, b, x, r, options.parallel);
        report.residual_inf = kernels::norm_inf(r);
    }
    report.converged = report.residual_inf <= options.tol;
    return report;
}

LandscapeField solve_landscape(const Hamiltonian& h, double tol,
                               std::optional<std::span<const double>> initial_guess) {
    const std::size_t n = h.size();
    LandscapeField field;
    field.is_dual = h.is_dual();
    field.lower_bound = landscape_lower_bound(h);
    if (initial_guess) {
        require_size(initial_guess->size(), n, "initial guess");
        field.u.assign(initial_guess->begin(), initial_guess->end());
    } else {
        field.u.assign(n, 0.0);
    }
    const std::vector<double> ones(n, 1.0);
    const CgReport rep = conjugate_gradient(h, ones, field.u, CgOptions{.tol = tol});
    field.residual_inf = rep.residual_inf;
    field.iterations = rep.iterations;
    if (!rep.converged) {
        std::ostringstream os;
        os << "landscape solve stopped after " << rep.iterations << " iterations with residual "
           << rep.residual_inf << " > " << tol;
        throw Error(ErrorCode::SolverDiverged, os.str());
    }
    field.w_eff.resize(n);
    for (std::size_t i = 0; i < n; ++i) field.w_eff[i] = 1.0 / field.u[i];
    return field;
}

LandscapeField dual_landscape(const Hamiltonian& h, double tol) {
    return solve_landscape(dual_operator(h), tol);
}

}  // namespace tbl
