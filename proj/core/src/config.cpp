#include "ujel/config.hpp"

#include "ujel/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ujel {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::string without_spaces(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c != ' ' && c != '\t') out.push_back(c);
    }
    return out;
}

template <class T>
T parse_count(std::string_view text, const std::string& path) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw InputError(path + ": expected a nonnegative integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::vector<double>> parse_param_groups(std::string_view text, const std::string& path) {
    std::vector<std::vector<double>> groups;
    const auto parts = split(text, ';');
    for (std::size_t g = 0; g < parts.size(); ++g) {
        std::vector<double> values;
        const auto fields = split(parts[g], ',');
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const auto v = parse_number(fields[j]);
            if (!v) {
                throw InputError(path + ".group[" + std::to_string(g + 1) + "][" +
                                 std::to_string(j + 1) + "]: expected a number, got '" +
                                 std::string(fields[j]) + "'");
            }
            values.push_back(*v);
        }
        groups.push_back(std::move(values));
    }
    return groups;
}

ModelSpec build_model(const std::string& family, const std::vector<std::vector<double>>& groups,
                      const std::string& path) {
    ModelSpec spec;
    const std::size_t arity = family == "mobve" ? 3 : 5;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& p = groups[g];
        const std::string gpath = path + ".group[" + std::to_string(g + 1) + "]";
        if (p.size() != arity) {
            throw InputError(gpath + ": " + family + " takes " + std::to_string(arity) +
                             " parameters, got " + std::to_string(p.size()));
        }
        GroupModel model;
        if (family == "mobve") {
            model = MobveParams{p[0], p[1], p[2]};
        } else {
            model = FgmParetoParams{p[0], p[1], p[2], p[3], p[4]};
        }
        try {
            std::visit([](const auto& m) { m.validate(); }, model);
        } catch (const InputError& e) {
            throw InputError(gpath + ": " + e.what());
        }
        spec.groups.push_back(model);
    }
    if (spec.groups.size() < 2) throw InputError(path + ": a model needs at least 2 groups");
    return spec;
}

std::string size_key(const std::vector<std::size_t>& sizes) {
    std::string out = "(";
    for (std::size_t g = 0; g < sizes.size(); ++g) {
        if (g) out += ",";
        out += std::to_string(sizes[g]);
    }
    return out + ")";
}

}  // namespace

std::optional<double> parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        const auto num = parse_number(text.substr(0, slash));
        const auto den = parse_number(text.substr(slash + 1));
        if (!num || !den || *den == 0.0) return std::nullopt;
        return *num / *den;
    }
    double value = 0.0;
    const char* begin = text.data();
    if (*begin == '+') ++begin;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

SimulationConfig parse_simulation_config(std::string_view text) {
    SimulationConfig cfg;
    ScenarioBlock* block = nullptr;
    bool block_has_params = false;
    std::string block_params;
    auto finish_block = [&] {
        if (!block) return;
        const std::string path = "scenario[" + std::to_string(cfg.blocks.size()) + "]";
        if (block->family.empty()) throw InputError(path + ".model: missing");
        if (!block_has_params) throw InputError(path + ".params: missing");
        if (block->sizes.empty()) throw InputError(path + ".sizes: missing");
        block->model = build_model(block->family, parse_param_groups(block_params, path + ".params"),
                                   path + ".params");
        for (std::size_t s = 0; s < block->sizes.size(); ++s) {
            if (block->sizes[s].size() != block->model.k()) {
                throw InputError(path + ".sizes[" + std::to_string(s + 1) + "]: " +
                                 std::to_string(block->sizes[s].size()) + " sizes for a " +
                                 std::to_string(block->model.k()) + "-group model");
            }
        }
        if (block->id.empty()) block->id = "scenario-" + std::to_string(cfg.blocks.size());
    };

    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line == "[scenario]") {
            finish_block();
            cfg.blocks.emplace_back();
            block = &cfg.blocks.back();
            block_has_params = false;
            block_params.clear();
            continue;
        }
        if (line.front() == '[') {
            throw InputError("line " + std::to_string(line_no) + ": unknown section " +
                             std::string(line));
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InputError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));

        if (!block) {
            if (key == "seed") {
                cfg.seed = parse_count<std::uint64_t>(value, "seed");
            } else if (key == "reps") {
                cfg.reps = parse_count<std::size_t>(value, "reps");
                if (*cfg.reps < 1) throw InputError("reps: must be at least 1");
            } else if (key == "boot_B") {
                cfg.boot_B = parse_count<std::size_t>(value, "boot_B");
                if (*cfg.boot_B < 2) throw InputError("boot_B: must be at least 2");
            } else if (key == "level") {
                const auto v = parse_number(value);
                if (!v || !(*v > 0.0 && *v < 1.0)) {
                    throw InputError("level: expected a number in (0,1), got '" + std::string(value) + "'");
                }
                cfg.level = *v;
            } else if (key == "methods") {
                cfg.methods.clear();
                const auto names = split(value, ',');
                for (std::size_t i = 0; i < names.size(); ++i) {
                    const auto m = parse_ci_method(names[i]);
                    if (!m) {
                        throw InputError("methods[" + std::to_string(i + 1) + "]: unknown method '" +
                                         std::string(names[i]) + "' (jel, normal, kernel-boot)");
                    }
                    cfg.methods.push_back(*m);
                }
            } else {
                throw InputError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            }
            continue;
        }

        const std::string path = "scenario[" + std::to_string(cfg.blocks.size()) + "]." + key;
        if (key == "id") {
            block->id = std::string(value);
        } else if (key == "model") {
            if (value != "mobve" && value != "fgm-pareto") {
                throw InputError(path + ": unknown model '" + std::string(value) +
                                 "' (mobve, fgm-pareto)");
            }
            block->family = std::string(value);
        } else if (key == "params") {
            block_params = std::string(value);
            block->params_text = without_spaces(value);
            block_has_params = true;
        } else if (key == "sizes") {
            block->sizes.clear();
            const auto vectors = split(value, ';');
            for (std::size_t s = 0; s < vectors.size(); ++s) {
                std::vector<std::size_t> sizes;
                const auto fields = split(vectors[s], ',');
                for (std::size_t g = 0; g < fields.size(); ++g) {
                    const std::string fpath =
                        path + "[" + std::to_string(s + 1) + "][" + std::to_string(g + 1) + "]";
                    const auto n = parse_count<std::size_t>(fields[g], fpath);
                    if (n < 2) throw InputError(fpath + ": group size must be at least 2");
                    sizes.push_back(n);
                }
                block->sizes.push_back(std::move(sizes));
            }
        } else {
            throw InputError(path + ": unknown key");
        }
    }
    finish_block();
    if (cfg.blocks.empty()) throw InputError("no [scenario] blocks");
    return cfg;
}

SimulationConfig load_simulation_config(const std::string& path) {
    return parse_simulation_config(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Scenario> SimulationConfig::expand() const {
    std::vector<Scenario> out;
    for (const auto& b : blocks) {
        for (const auto& sizes : b.sizes) {
            out.push_back({b.id, b.model, sizes, "(" + b.params_text + ")", size_key(sizes)});
        }
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

}  // namespace ujel
