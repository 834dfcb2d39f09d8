#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tblandscape/operators.hpp"

namespace tbl {

/// Two-valued i.i.d. disorder: `low` with probability p_low, else `high`. V_max = high.
struct Bernoulli {
    double low = 0.0;
    double high = 5.0;
    double p_low = 0.7;
};

/// i.i.d. uniform on [0, v_max].
struct Uniform {
    double v_max = 5.0;
};

struct Constant {
    double c = 1.0;
};

/// Plain text (one value per line, linear-index order) or a field CSV with a `v` column.
struct FromFile {
    std::filesystem::path path;
};

using PotentialKind = std::variant<Bernoulli, Uniform, Constant, FromFile>;

struct PotentialSpec {
    PotentialKind kind = Bernoulli{};
    std::uint64_t seed = 0;
    /// Recorded V_max for Constant / FromFile fields (defaults to the field maximum).
    std::optional<double> v_max;
};

/// Parses "bernoulli:LOW,HIGH,P_LOW", "uniform:VMAX", "constant:C" or "file:PATH".
PotentialKind parse_potential_kind(const std::string& text);
std::string describe(const PotentialKind& kind);

/// Deterministic uniform draw in [0, 1) keyed by (seed, stream, index).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

Potential generate(const PotentialSpec& spec, const Lattice& lat);

std::vector<double> read_potential_file(const std::filesystem::path& path);

}  // namespace tbl
