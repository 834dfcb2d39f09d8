#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "tblandscape/landscape.hpp"
#include "tblandscape/lattice.hpp"

namespace tbl {

/// Threshold set {n : W_n <= mu + delta} split into lattice-connected components.
struct WellSet {
    /// Ascending linear indices.
    std::vector<std::size_t> sites;
    /// Component id per site, -1 outside the wells. Components are numbered
    /// 0, 1, ... in the order of their smallest linear index.
    std::vector<int> label;
    int components = 0;
};

/// Agmon data for one energy: weight, wells and distance to the wells.
struct AgmonField {
    double mu = 0.0;
    double delta = 0.0;
    std::vector<double> w;
    WellSet wells;
    std::vector<double> h;
    bool is_dual = false;
};

/// (W_n - mu)_+
std::vector<double> weight_field(std::span<const double> w_eff, double mu);

/// Throws EmptyWells when no site satisfies the threshold.
WellSet wells(std::span<const double> w_eff, double mu, double delta, const Lattice& lat);

/// Multi-source shortest-path distance from every site to `sources`.
std::vector<double> agmon_distance_field(std::span<const double> w, std::span<const std::size_t> sources,
                                         const Lattice& lat);

/// Agmon semi-metric between two sites (single-source shortest path).
double agmon_metric(std::span<const double> w, std::size_t from, std::size_t to, const Lattice& lat);

/// Exhaustive minimum over simple paths; reference for agmon_metric. N <= 64.
double brute_force_metric(std::span<const double> w, std::size_t from, std::size_t to, const Lattice& lat);

/// Builds the field from a landscape's stored W = 1/u at energy mu.
AgmonField build_agmon(const LandscapeField& landscape, double mu, double delta, const Lattice& lat);

/// Dual field for an eigenvalue mu of H: uses the dual landscape at 4d + V_max - mu.
AgmonField build_dual_agmon(const LandscapeField& dual_landscape, double mu, double delta, const Lattice& lat,
                            double v_max);

/// Cost of a unit step between sites with weights a and b: ln(1 + sqrt(min(a, b))).
inline double step_cost(double a, double b) {
    const double m = a < b ? a : b;
    return std::log1p(std::sqrt(m));
}

}  // namespace tbl

