#pragma once

// Flat-file formats. Tables are comma-separated with '#'-prefixed header
// comments and 17-significant-digit floats, so every double round-trips
// losslessly. Configs are `key = value` lines. Readers keep raw cell strings,
// which makes re-emission byte-identical.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "spdcbs/analytic.hpp"
#include "spdcbs/distribution.hpp"
#include "spdcbs/montecarlo.hpp"

#include "json.hpp"

namespace spdcbs {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& field) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError("field '" + field + "': cannot parse '" + std::string(text) +
                          "' as a number");
    }
    return value;
}

inline long long parse_integer(std::string_view text, const std::string& field) {
    long long value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError("field '" + field + "': cannot parse '" + std::string(text) +
                          "' as an integer");
    }
    return value;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Ordered key-value store backing both config files and '#' table headers.
class KeyValueConfig {
public:
    bool has(const std::string& key) const { return find(key) != entries_.end(); }

    void set(const std::string& key, const std::string& value) {
        auto it = find(key);
        if (it != entries_.end()) {
            it->second = value;
        } else {
            entries_.emplace_back(key, value);
        }
    }
    void set_double(const std::string& key, double value) { set(key, format_double(value)); }
    void set_integer(const std::string& key, long long value) { set(key, std::to_string(value)); }

    const std::string& get(const std::string& key) const {
        auto it = find(key);
        if (it == entries_.end()) throw ConfigError("missing required field '" + key + "'");
        return it->second;
    }
    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = find(key);
        return it == entries_.end() ? fallback : it->second;
    }
    double get_double(const std::string& key) const { return parse_double(get(key), key); }
    long long get_integer(const std::string& key) const { return parse_integer(get(key), key); }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    static KeyValueConfig parse(std::istream& in) {
        KeyValueConfig cfg;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string_view stripped = trim(line);
            if (stripped.empty() || stripped.front() == '#') continue;
            const auto eq = stripped.find('=');
            if (eq == std::string_view::npos) {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + std::string(stripped) + "'");
            }
            const std::string key{trim(stripped.substr(0, eq))};
            const std::string value{trim(stripped.substr(eq + 1))};
            if (key.empty()) {
                throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
            }
            cfg.set(key, value);
        }
        return cfg;
    }

    static KeyValueConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        return parse(in);
    }

    std::string to_string() const {
        std::string out;
        for (const auto& [key, value] : entries_) {
            out += key;
            out += " = ";
            out += value;
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;

    std::vector<std::pair<std::string, std::string>>::const_iterator find(
        const std::string& key) const {
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->first == key) return it;
        }
        return entries_.end();
    }
    std::vector<std::pair<std::string, std::string>>::iterator find(const std::string& key) {
        for (auto it = entries_.begin(); it != entries_.end(); ++it) {
            if (it->first == key) return it;
        }
        return entries_.end();
    }
};

// Delimited table: '# key = value' metadata lines, one column-name row, then
// data rows. Cells are stored as raw strings.
struct DataTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_metadata(const std::string& key, const std::string& value) {
        metadata.emplace_back(key, value);
    }

    std::string to_string() const {
        std::string out;
        for (const auto& [key, value] : metadata) {
            out += "# ";
            out += key;
            out += " = ";
            out += value;
            out += '\n';
        }
        out += join(columns);
        out += '\n';
        for (const auto& row : rows) {
            out += join(row);
            out += '\n';
        }
        return out;
    }

    static DataTable parse(std::istream& in) {
        DataTable table;
        std::string line;
        bool have_columns = false;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (line.front() == '#') {
                std::string_view body = trim(std::string_view(line).substr(1));
                const auto eq = body.find('=');
                if (eq != std::string_view::npos) {
                    table.metadata.emplace_back(std::string(trim(body.substr(0, eq))),
                                                std::string(trim(body.substr(eq + 1))));
                }
                continue;
            }
            std::vector<std::string> cells = split(line);
            if (!have_columns) {
                table.columns = std::move(cells);
                have_columns = true;
            } else {
                table.rows.push_back(std::move(cells));
            }
        }
        return table;
    }

    static DataTable parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open table file '" + path + "'");
        return parse(in);
    }

private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ',';
            out += cells[i];
        }
        return out;
    }

    static std::vector<std::string> split(const std::string& line) {
        std::vector<std::string> cells;
        std::string cell;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(std::move(cell));
                cell.clear();
            } else {
                cell += c;
            }
        }
        cells.push_back(std::move(cell));
        return cells;
    }
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << content;
}

// Distribution table: one row per configuration, occupation columns n1..nm
// followed by the probability.
inline DataTable distribution_to_table(const OutputDistribution& dist) {
    DataTable table;
    const int modes = dist.input.mode_count();
    table.add_metadata("format", "distribution");
    table.add_metadata("modes", std::to_string(modes));
    table.add_metadata("photons", std::to_string(dist.input.total_photons()));
    table.add_metadata("entries", std::to_string(dist.size()));
    for (int j = 0; j < modes; ++j) table.columns.push_back("n" + std::to_string(j + 1));
    table.columns.push_back("probability");
    for (std::size_t i = 0; i < dist.size(); ++i) {
        std::vector<std::string> row;
        row.reserve(modes + 1);
        for (int occ : dist.configurations[i].occupations) row.push_back(std::to_string(occ));
        row.push_back(format_double(dist.probabilities[i]));
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline DataTable samples_to_table(const std::vector<FockState>& samples, int modes) {
    DataTable table;
    table.add_metadata("format", "samples");
    table.add_metadata("modes", std::to_string(modes));
    table.add_metadata("entries", std::to_string(samples.size()));
    for (int j = 0; j < modes; ++j) table.columns.push_back("n" + std::to_string(j + 1));
    for (const FockState& s : samples) {
        std::vector<std::string> row;
        row.reserve(modes);
        for (int occ : s.occupations) row.push_back(std::to_string(occ));
        table.rows.push_back(std::move(row));
    }
    return table;
}

// Side-by-side empirical/analytic report for a simulation run. The z-score
// uses the binomial standard error under the analytic rate; a rate that
// matches its prediction exactly scores zero even when that error is zero.
struct RateComparison {
    std::string name;
    double empirical = 0.0;
    double analytic = 0.0;
    double stderr_empirical = 0.0;
    long long denominator = 0;
    double z_score = 0.0;
};

inline RateComparison compare_rate(const std::string& name, double empirical, double analytic,
                                   double stderr_empirical, long long denominator) {
    RateComparison cmp{name, empirical, analytic, stderr_empirical, denominator, 0.0};
    if (denominator > 0) {
        const double se = std::sqrt(analytic * (1.0 - analytic) / denominator);
        if (se > 0.0) {
            cmp.z_score = (empirical - analytic) / se;
        } else {
            cmp.z_score = (empirical == analytic)
                              ? 0.0
                              : std::numeric_limits<double>::infinity();
        }
    }
    return cmp;
}

inline std::vector<RateComparison> compare_to_analytic(const EnsembleStats& stats,
                                                       const ArchitectureParams& arch) {
    std::vector<RateComparison> out;
    out.push_back(compare_rate("prep", stats.prep_rate(), prep_prob(arch),
                               stats.prep_rate_stderr(), stats.trials));
    out.push_back(compare_rate("par_correct", stats.par_correct_rate(),
                               par_prob(arch.photons, arch.spdc, arch.herald_detector),
                               stats.par_correct_rate_stderr(), stats.prepared));
    out.push_back(compare_rate("post_select", stats.post_select_rate(),
                               post_select_prob(arch.photons, arch.output_detector),
                               stats.post_select_rate_stderr(), stats.correct_input));
    return out;
}

inline nlohmann::json simulation_report_json(const ArchitectureParams& arch,
                                             const EnsembleStats& stats, std::uint64_t seed) {
    nlohmann::json report;
    report["seed"] = seed;
    report["trials"] = stats.trials;
    report["architecture"] = {
        {"photons", arch.photons},
        {"sources", arch.sources},
        {"modes", arch.modes},
        {"squeezing", arch.spdc.r},
        {"series_truncation", arch.spdc.s_max},
        {"eta_herald", arch.herald_detector.eta},
        {"eta_output", arch.output_detector.eta},
    };
    report["counts"] = {
        {"prepared", stats.prepared},
        {"correct_input", stats.correct_input},
        {"post_selected_any", stats.post_selected_any},
        {"post_selected_correct", stats.post_selected_correct},
    };
    nlohmann::json rates = nlohmann::json::array();
    for (const RateComparison& cmp : compare_to_analytic(stats, arch)) {
        rates.push_back({
            {"rate", cmp.name},
            {"empirical", cmp.empirical},
            {"analytic", cmp.analytic},
            {"stderr", cmp.stderr_empirical},
            {"denominator", cmp.denominator},
            {"z_score", cmp.z_score},
        });
    }
    report["rates"] = rates;
    report["conditional"] = {
        {"post_any_rate", stats.post_any_rate()},
        {"correct_given_post_rate", stats.correct_given_post_rate()},
    };
    return report;
}

inline nlohmann::json trial_record_json(long long index, const TrialRecord& rec) {
    return nlohmann::json{
        {"trial", index},
        {"true_counts", rec.true_counts},
        {"herald_counts", rec.herald_counts},
        {"heralded_indices", rec.heralded_indices},
        {"routed_sources", rec.routed_sources},
        {"input_config", rec.input_config.occupations},
        {"output_config", rec.output_config.occupations},
        {"prepared", rec.prepared},
        {"input_correct", rec.input_correct},
        {"post_selected", rec.post_selected},
    };
}

}  // namespace spdcbs
