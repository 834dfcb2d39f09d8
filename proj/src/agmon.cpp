#include "tblandscape/agmon.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

namespace tbl {

std::vector<double> weight_field(std::span<const double> w_eff, double mu) {
    std::vector<double> w(w_eff.size());
    std::transform(w_eff.begin(), w_eff.end(), w.begin(), [mu](double x) { return std::max(x - mu, 0.0); });
    return w;
}

WellSet wells(std::span<const double> w_eff, double mu, double delta, const Lattice& lat) {
    require_size(w_eff.size(), lat.size(), "effective potential");
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidConfig, "delta must be positive");
    const double threshold = mu + delta;
    WellSet ws;
    ws.label.assign(lat.size(), -1);
    for (std::size_t n = 0; n < lat.size(); ++n) {
        if (w_eff[n] <= threshold) ws.sites.push_back(n);
    }
    if (ws.sites.empty()) {
        throw Error(ErrorCode::EmptyWells, "no site has W <= mu + delta = " + std::to_string(threshold));
    }
    std::vector<std::size_t> stack;
    for (std::size_t seed : ws.sites) {
        if (ws.label[seed] >= 0) continue;
        const int id = ws.components++;
        ws.label[seed] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t n = stack.back();
            stack.pop_back();
            for (std::size_t m : lat.neighbors(n)) {
                if (ws.label[m] < 0 && w_eff[m] <= threshold) {
                    ws.label[m] = id;
                    stack.push_back(m);
                }
            }
        }
    }
    return ws;
}

namespace {

std::vector<double> dijkstra(std::span<const double> w, std::span<const std::size_t> sources, const Lattice& lat) {
    require_size(w.size(), lat.size(), "Agmon weight");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(lat.size(), inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (std::size_t s : sources) {
        lat.check_site(s);
        dist[s] = 0.0;
        queue.emplace(0.0, s);
    }
    while (!queue.empty()) {
        const auto [d, n] = queue.top();
        queue.pop();
        if (d > dist[n]) continue;
        for (std::size_t m : lat.neighbors(n)) {
            const double cand = d + step_cost(w[n], w[m]);
            if (cand < dist[m]) {
                dist[m] = cand;
                queue.emplace(cand, m);
            }
        }
    }
    return dist;
}

}  // namespace

std::vector<double> agmon_distance_field(std::span<const double> w, std::span<const std::size_t> sources,
                                         const Lattice& lat) {
    if (sources.empty()) throw Error(ErrorCode::EmptyWells, "distance to an empty well set is infinite");
    return dijkstra(w, sources, lat);
}

double agmon_metric(std::span<const double> w, std::size_t from, std::size_t to, const Lattice& lat) {
    lat.check_site(to);
    const std::size_t src[] = {from};
    return dijkstra(w, src, lat)[to];
}

double brute_force_metric(std::span<const double> w, std::size_t from, std::size_t to, const Lattice& lat) {
    if (lat.size() > 64) {
        throw Error(ErrorCode::TooLargeForOracle, "path enumeration is limited to 64 sites");
    }
    require_size(w.size(), lat.size(), "Agmon weight");
    lat.check_site(from);
    lat.check_site(to);
    if (from == to) return 0.0;

    std::vector<std::vector<std::size_t>> adj(lat.size());
    for (std::size_t n = 0; n < lat.size(); ++n) adj[n] = lat.neighbors(n);

    double best = std::numeric_limits<double>::infinity();
    // Depth-first enumeration of simple paths; costs are nonnegative so a
    // partial path already at `best` cannot improve it.
    std::function<void(std::size_t, std::uint64_t, double)> walk = [&](std::size_t n, std::uint64_t visited,
                                                                       double cost) {
        if (n == to) {
            best = std::min(best, cost);
            return;
        }
        for (std::size_t m : adj[n]) {
            const std::uint64_t bit = std::uint64_t{1} << m;
            if (visited & bit) continue;
            const double next = cost + step_cost(w[n], w[m]);
            if (next >= best) continue;
            walk(m, visited | bit, next);
        }
    };
    walk(from, std::uint64_t{1} << from, 0.0);
    return best;
}

AgmonField build_agmon(const LandscapeField& landscape, double mu, double delta, const Lattice& lat) {
    AgmonField f;
    f.mu = mu;
    f.delta = delta;
    f.is_dual = landscape.is_dual;
    f.w = weight_field(landscape.w_eff, mu);
    f.wells = wells(landscape.w_eff, mu, delta, lat);
    f.h = agmon_distance_field(f.w, f.wells.sites, lat);
    return f;
}

AgmonField build_dual_agmon(const LandscapeField& dual_landscape, double mu, double delta, const Lattice& lat,
                            double v_max) {
    if (!dual_landscape.is_dual) throw Error(ErrorCode::NotApplicable, "expected a dual landscape");
    return build_agmon(dual_landscape, 4.0 * lat.dim() + v_max - mu, delta, lat);
}

}  // namespace tbl
