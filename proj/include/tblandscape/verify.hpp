#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tblandscape/agmon.hpp"
#include "tblandscape/landscape.hpp"
#include "tblandscape/operators.hpp"
#include "tblandscape/spectral.hpp"

namespace tbl {

enum class CheckKind { Identity, Inequality };

/// Outcome of one numerical certification.
///
/// Identity passes iff |lhs - rhs| <= tolerance * scale; Inequality passes iff
/// lhs <= rhs + tolerance * scale, where scale = max(|lhs|, |rhs|, 1).
struct CheckResult {
    std::string name;
    std::optional<std::size_t> ordinal;
    CheckKind kind = CheckKind::Identity;
    double lhs = 0.0;
    double rhs = 0.0;
    /// rhs - lhs for inequalities, |lhs - rhs| for identities.
    double slack = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    /// Diagnostics are reported but never gate an exit status.
    bool hard = true;
    std::optional<std::size_t> witness;
    std::string note;
    std::vector<std::pair<std::string, double>> extras;

    double scale() const;
    /// |lhs - rhs| / scale
    double relative_error() const;
};

CheckResult identity_check(std::string name, double lhs, double rhs, double tolerance);
CheckResult inequality_check(std::string name, double lhs, double rhs, double tolerance);

/// Sorts by name, then ordinal (report order).
void sort_checks(std::vector<CheckResult>& checks);

/// <g, -Lap f> against the forward-difference sum, with zero extension on a Dirichlet cube.
CheckResult check_green(const Lattice& lat, std::span<const double> f, std::span<const double> g,
                        double tol = 1e-12);

/// If min (Hf) >= -tol then min f >= -tol must hold; vacuous otherwise.
CheckResult check_max_principle(const Hamiltonian& h, std::span<const double> f, double tol = 1e-12);
/// Same check with a precomputed image `hf` (used for operators outside Hamiltonian).
CheckResult check_max_principle(std::span<const double> f, std::span<const double> hf, double tol = 1e-12);

/// min u >= theoretical lower bound.
CheckResult check_landscape_bound(const LandscapeField& landscape, double tol = 1e-9);

/// Conjugated quadratic-form identity for <g, H f> and the inequality <f, H f> >= sum f^2 / u.
std::vector<CheckResult> check_uncertainty(const Hamiltonian& h, const LandscapeField& landscape,
                                           std::span<const double> f, std::span<const double> g,
                                           double tol = 1e-9);

/// Eigenpair identity with test function g and the inequality obtained by
/// dropping the landscape-weighted gradient term.
std::vector<CheckResult> check_eigen_identity(const Hamiltonian& h, const LandscapeField& landscape,
                                              const Eigenpair& pair, std::span<const double> g,
                                              double tol = 1e-9);

/// g = h e^{alpha h} where h < 1, e^{alpha h} where h >= 1.
std::vector<double> decay_test_function(std::span<const double> h, double alpha);

/// |h_m - h_n| <= ln(1 + sqrt(min(w_n, w_m))) on every lattice edge.
CheckResult check_lipschitz(const AgmonField& agmon, const Lattice& lat, double tol = 1e-12);
/// Same check for an arbitrary distance field `h` with weights `w`.
CheckResult check_lipschitz(std::span<const double> w, std::span<const double> h, const Lattice& lat,
                            double tol = 1e-12);

struct CEstimate {
    /// Smallest C with (e^{+-alpha (h_m - h_n)} - 1)^2 <= C alpha^2 w(n) on all directed edges.
    double c_abs = 0.0;
    std::size_t edges = 0;
    /// Edges with w(n) = 0 but a nonzero left side; excluded from the estimate.
    std::size_t excluded = 0;
};

CEstimate estimate_C_abs(const AgmonField& agmon, double alpha, const Lattice& lat);

struct DecayBoundParams {
    double alpha = 0.0;
    double delta = 0.0;
    double c_abs = 0.0;
    /// Bound constant; on a Dirichlet cube V_max is replaced by V_max + d.
    double c0 = 0.0;
};

/// Throws InvalidAlpha unless 0 < alpha and 1 - C d alpha^2 > 0.
DecayBoundParams make_decay_params(double alpha, double delta, double c_abs, int dim, double v_max, Boundary bc);

/// Solves alpha * sqrt(C(alpha) * d) = 0.9 for the instance-measured C(alpha).
/// Returns alpha = 1 when the field has no gradient at all (C = 0).
DecayBoundParams calibrate_decay_params(const AgmonField& agmon, const Lattice& lat, double v_max);

/// sum_{h >= 1} e^{2 alpha h} phi^2 <= (C0 / delta) sum phi^2, for the primal or dual field.
/// Throws HypothesisNotMet outside 0 < mu <= V_max - delta (primal) or mu >= 4d + delta (dual).
CheckResult check_decay_bound(const Hamiltonian& h, const Eigenpair& pair, const AgmonField& agmon,
                              const DecayBoundParams& params);

/// True when `mu` lies in the energy band where the decay estimate applies for this field type.
bool decay_hypothesis_met(const Hamiltonian& h, double mu, double delta, bool dual);

struct DecayProfile {
    std::vector<std::pair<double, double>> points;  // (h_n, log10 |phi_n|)
    std::optional<double> slope;                    // empty when all h_n coincide
};

DecayProfile decay_profile(const Eigenpair& pair, const AgmonField& agmon);

/// The field restricted to the well component carrying the most of phi^2, with
/// h recomputed as the distance to that component alone.
AgmonField host_well_field(const Eigenpair& pair, const AgmonField& agmon, const Lattice& lat);

/// Fraction of sum phi^2 carried by the wells together with {h < 1}.
double well_containment(const Eigenpair& pair, const AgmonField& agmon);

}  // namespace tbl
