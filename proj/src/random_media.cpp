#include "tblandscape/random_media.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace tbl {

namespace {

std::string shortest(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double parse_double(std::string_view s, const std::string& context) {
    std::string tmp(s);
    try {
        std::size_t used = 0;
        const double v = std::stod(tmp, &used);
        if (used != tmp.size()) throw std::invalid_argument(tmp);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, context + ": cannot parse number '" + tmp + "'");
    }
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

void validate(const Bernoulli& b) {
    if (!(b.low >= 0.0 && b.low < b.high)) {
        throw Error(ErrorCode::InvalidPotential, "bernoulli needs 0 <= low < high");
    }
    if (!(b.p_low >= 0.0 && b.p_low <= 1.0)) {
        throw Error(ErrorCode::InvalidPotential, "bernoulli needs 0 <= p_low <= 1");
    }
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    const std::uint64_t key = mix64(mix64(seed ^ mix64(stream)) + index);
    return static_cast<double>(key >> 11) * 0x1.0p-53;
}

PotentialKind parse_potential_kind(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    const auto nums = [&](std::size_t expected) {
        std::vector<double> v;
        if (!args.empty()) {
            for (const auto& part : split(args, ',')) v.push_back(parse_double(trim(part), name));
        }
        if (v.size() != expected && !(v.empty())) {
            throw Error(ErrorCode::InvalidConfig, name + " expects " + std::to_string(expected) + " parameters");
        }
        return v;
    };
    if (name == "bernoulli") {
        const auto v = nums(3);
        Bernoulli b;
        if (!v.empty()) b = {v[0], v[1], v[2]};
        validate(b);
        return b;
    }
    if (name == "uniform") {
        const auto v = nums(1);
        return Uniform{v.empty() ? 5.0 : v[0]};
    }
    if (name == "constant") {
        const auto v = nums(1);
        return Constant{v.empty() ? 1.0 : v[0]};
    }
    if (name == "file") {
        if (args.empty()) throw Error(ErrorCode::InvalidConfig, "file potential needs a path");
        return FromFile{args};
    }
    throw Error(ErrorCode::InvalidConfig, "unknown potential kind '" + name + "'");
}

std::string describe(const PotentialKind& kind) {
    std::ostringstream os;
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                os << "bernoulli:" << shortest(k.low) << ',' << shortest(k.high) << ',' << shortest(k.p_low);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                os << "uniform:" << shortest(k.v_max);
            } else if constexpr (std::is_same_v<T, Constant>) {
                os << "constant:" << shortest(k.c);
            } else {
                os << "file:" << k.path.string();
            }
        },
        kind);
    return os.str();
}

std::vector<double> read_potential_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open potential file " + path.string());
    std::vector<double> values;
    std::string line;
    std::optional<std::size_t> v_column;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;
            if (line.find(',') != std::string::npos) {
                const auto header = split(line, ',');
                const auto it = std::find(header.begin(), header.end(), "v");
                if (it == header.end()) throw Error(ErrorCode::Io, "CSV field file has no 'v' column");
                v_column = static_cast<std::size_t>(it - header.begin());
                continue;
            }
        }
        if (v_column) {
            const auto cells = split(line, ',');
            if (*v_column >= cells.size()) throw Error(ErrorCode::Io, "short CSV row in " + path.string());
            values.push_back(parse_double(trim(cells[*v_column]), path.string()));
        } else {
            values.push_back(parse_double(line, path.string()));
        }
    }
    return values;
}

Potential generate(const PotentialSpec& spec, const Lattice& lat) {
    const std::size_t n = lat.size();
    std::vector<double> v(n);
    double v_max = 0.0;

    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Bernoulli>) {
                validate(k);
                for (std::size_t i = 0; i < n; ++i) {
                    v[i] = counter_uniform(spec.seed, 0, i) < k.p_low ? k.low : k.high;
                }
                v_max = k.high;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (!(k.v_max > 0.0)) throw Error(ErrorCode::InvalidPotential, "uniform needs v_max > 0");
                for (std::size_t i = 0; i < n; ++i) v[i] = k.v_max * counter_uniform(spec.seed, 0, i);
                v_max = k.v_max;
            } else if constexpr (std::is_same_v<T, Constant>) {
                if (k.c < 0.0) throw Error(ErrorCode::InvalidPotential, "constant potential must be >= 0");
                if (k.c == 0.0 && lat.periodic()) {
                    throw Error(ErrorCode::InvalidPotential, "constant zero potential on a torus is singular");
                }
                std::fill(v.begin(), v.end(), k.c);
                v_max = spec.v_max.value_or(k.c);
            } else {
                v = read_potential_file(k.path);
                require_size(v.size(), n, "potential file " + k.path.string());
                v_max = spec.v_max.value_or(v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()));
            }
        },
        spec.kind);

    if (v_max <= 0.0) {
        // Constant{0} on a Dirichlet cube; any positive V_max is admissible.
        v_max = spec.v_max.value_or(1.0);
    }

    const bool random = std::holds_alternative<Bernoulli>(spec.kind) || std::holds_alternative<Uniform>(spec.kind);
    if (random && lat.periodic() && std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
        const auto site = static_cast<std::size_t>(counter_uniform(spec.seed, 1, 0) * static_cast<double>(n));
        v[std::min(site, n - 1)] = v_max;
    }
    return Potential(lat, std::move(v), v_max);
}

}  // namespace tbl
