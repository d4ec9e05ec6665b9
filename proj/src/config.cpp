#include "jch/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "jch/emit.hpp"

namespace jch {

namespace {

struct RawEntry {
    std::string value;
    int line{0};
    int column{0};
    bool consumed{false};
};

using EntryMap = std::map<std::string, RawEntry>;

EntryMap tokenize(std::string_view text) {
    EntryMap entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string_view::npos) continue;
        const std::size_t end = line.find_last_not_of(" \t\r") + 1;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw config_error("expected 'key = value'", line_no,
                               static_cast<int>(end) + 1);

        std::string_view key = line.substr(begin, eq - begin);
        const std::size_t key_end = key.find_last_not_of(" \t");
        if (key_end == std::string_view::npos)
            throw config_error("missing key before '='", line_no,
                               static_cast<int>(begin) + 1);
        key = key.substr(0, key_end + 1);

        std::size_t val_begin = line.find_first_not_of(" \t", eq + 1);
        if (val_begin == std::string_view::npos || val_begin >= end)
            throw config_error("missing value for key '" + std::string(key) + "'",
                               line_no, static_cast<int>(eq) + 2);
        std::string value(line.substr(val_begin, end - val_begin));

        auto [it, inserted] = entries.emplace(
            std::string(key),
            RawEntry{std::move(value), line_no, static_cast<int>(val_begin) + 1});
        if (!inserted)
            throw config_error("duplicate key '" + std::string(key) + "' (first on line " +
                                   std::to_string(it->second.line) + ")",
                               line_no, static_cast<int>(begin) + 1);
    }
    return entries;
}

class Reader {
public:
    explicit Reader(EntryMap entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    double number(const std::string& key, double fallback) {
        const RawEntry* e = take(key);
        if (!e) return fallback;
        double out = 0.0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        const auto res = std::from_chars(first, last, out);
        if (res.ec != std::errc{} || res.ptr != last)
            throw config_error("value for '" + key + "' is not a number", e->line,
                               e->column);
        return out;
    }

    int integer(const std::string& key, int fallback) {
        const RawEntry* e = take(key);
        if (!e) return fallback;
        int out = 0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        const auto res = std::from_chars(first, last, out);
        if (res.ec != std::errc{} || res.ptr != last)
            throw config_error("value for '" + key + "' is not an integer", e->line,
                               e->column);
        return out;
    }

    std::string word(const std::string& key, std::string fallback) {
        const RawEntry* e = take(key);
        return e ? e->value : fallback;
    }

    void reject_unknown() const {
        const RawEntry* first = nullptr;
        std::string name;
        for (const auto& [key, entry] : entries_) {
            if (entry.consumed) continue;
            if (!first || entry.line < first->line) {
                first = &entry;
                name = key;
            }
        }
        if (first)
            throw config_error("unknown key '" + name + "'", first->line, 1);
    }

private:
    const RawEntry* take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        it->second.consumed = true;
        return &it->second;
    }

    EntryMap entries_;
};

void validate_positive(double v, const char* what) {
    if (!(v > 0.0)) throw config_error(std::string(what) + " must be positive");
}

} // namespace

std::vector<double> GridSpec::expand() const {
    std::vector<double> grid;
    grid.reserve(points);
    if (points == 1) {
        grid.push_back(min);
        return grid;
    }
    const double step = (max - min) / static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) grid.push_back(min + i * step);
    return grid;
}

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    if (n_max < 1) throw config_error("solver.n_max must be at least 1");
    validate_positive(solver.tol, "solver.tol");
    if (solver.max_iter < 1) throw config_error("solver.max_iter must be at least 1");
    if (!(solver.mixing > 0.0 && solver.mixing <= 1.0))
        throw config_error("solver.mixing must lie in (0, 1]");
    if (solver.psi0 < 0.0) throw config_error("solver.psi0 must be non-negative");
    if (mu_grid.min > mu_grid.max) throw config_error("scan.mu_min exceeds scan.mu_max");
    if (mu_grid.points < 1) throw config_error("scan.mu_points must be at least 1");
    if (t_grid.min > t_grid.max) throw config_error("evolve.t_min exceeds evolve.t_max");
    if (t_grid.points < 1) throw config_error("evolve.t_points must be at least 1");
    if (t_grid.min < 0.0) throw config_error("evolve.t_min must be non-negative");
    if (scan_t < 0.0) throw config_error("scan.t must be non-negative");
    try {
        ramp.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    validate_positive(validate_bound, "validate.bound");
    if (spectrum_levels < 1) throw config_error("spectrum.levels must be at least 1");
}

RunConfig::Resolved RunConfig::resolved() const {
    Resolved res;
    res.params = params;
    res.ramp = ramp;
    res.scan_t = scan_t;
    GridSpec mu = mu_grid;
    GridSpec tg = t_grid;
    if (units == Units::beta_normalized) {
        const double b = params.beta;
        res.params.omega_a *= b;
        res.params.omega_c *= b;
        res.params.gamma_a *= b;
        res.params.gamma_c *= b;
        res.params.mu *= b;
        res.params.kappa *= b;
        mu.min *= b;
        mu.max *= b;
        tg.min /= b;
        tg.max /= b;
        res.scan_t /= b;
        res.ramp.kappa0 *= b;
        res.ramp.rate *= b * b;
        res.ramp.t_end /= b;
    }
    res.mu_grid = mu.expand();
    res.t_grid = tg.expand();
    return res;
}

RunConfig parse_config(std::string_view text) {
    Reader reader(tokenize(text));
    RunConfig cfg;

    const std::string units = reader.word("units", "beta");
    if (units == "beta" || units == "beta-normalized")
        cfg.units = Units::beta_normalized;
    else if (units == "raw")
        cfg.units = Units::raw;
    else
        throw config_error("units must be 'beta' or 'raw', got '" + units + "'");

    cfg.params.omega_c = reader.number("model.omega_c", 1.0);
    cfg.params.omega_a = reader.number("model.omega_a", cfg.params.omega_c);
    cfg.params.beta = reader.number("model.beta", 1.0);
    cfg.params.gamma_a = reader.number("model.gamma_a", 0.0);
    cfg.params.gamma_c = reader.number("model.gamma_c", 0.0);
    // Default mu sits at the tip of the n=1 lobe.
    cfg.params.mu =
        reader.number("model.mu", cfg.params.omega_c - 0.785 * cfg.params.beta);
    cfg.params.z = reader.integer("model.z", 4);
    cfg.params.kappa = reader.number("model.kappa", 0.05);

    cfg.n_max = reader.integer("solver.n_max", 8);
    cfg.solver.tol = reader.number("solver.tol", 1e-10);
    cfg.solver.max_iter = reader.integer("solver.max_iter", 10000);
    cfg.solver.mixing = reader.number("solver.mixing", 0.5);
    cfg.solver.psi0 = reader.number("solver.psi0", 0.1);

    // Default mu grid spans the n=1 lobe, inset from the edges where the
    // boundary collapses to zero.
    const double lobe_lo = cfg.params.omega_c - cfg.params.beta;
    const double lobe_hi =
        cfg.params.omega_c - (std::sqrt(2.0) - 1.0) * cfg.params.beta;
    const double inset = 0.02 * cfg.params.beta;
    cfg.mu_grid.min = reader.number("scan.mu_min", lobe_lo + inset);
    cfg.mu_grid.max = reader.number("scan.mu_max", lobe_hi - inset);
    cfg.mu_grid.points = reader.integer("scan.mu_points", 30);
    cfg.scan_t = reader.number("scan.t", 0.0);

    cfg.t_grid.min = reader.number("evolve.t_min", 0.0);
    cfg.t_grid.max = reader.number("evolve.t_max", 3.0);
    cfg.t_grid.points = reader.integer("evolve.t_points", 61);

    cfg.ramp.kappa0 = reader.number("ramp.kappa0", 0.0);
    cfg.ramp.rate = reader.number("ramp.rate", 0.01);
    cfg.ramp.t_end = reader.number("ramp.t_end", 20.0);
    cfg.ramp.samples = reader.integer("ramp.samples", 101);

    cfg.validate_bound = reader.number("validate.bound", 0.15);
    cfg.spectrum_levels = reader.integer("spectrum.levels", cfg.n_max);

    reader.reject_unknown();
    cfg.validate();
    return cfg;
}

std::string render_config(const RunConfig& config) {
    std::ostringstream out;
    auto put = [&](const char* key, const auto& value) {
        using T = std::decay_t<decltype(value)>;
        out << key << " = ";
        if constexpr (std::is_same_v<T, double>)
            out << format_number(value);
        else
            out << value;
        out << '\n';
    };
    put("units", config.units == Units::raw ? "raw" : "beta");
    put("model.omega_a", config.params.omega_a);
    put("model.omega_c", config.params.omega_c);
    put("model.beta", config.params.beta);
    put("model.gamma_a", config.params.gamma_a);
    put("model.gamma_c", config.params.gamma_c);
    put("model.mu", config.params.mu);
    put("model.z", config.params.z);
    put("model.kappa", config.params.kappa);
    put("solver.n_max", config.n_max);
    put("solver.tol", config.solver.tol);
    put("solver.max_iter", config.solver.max_iter);
    put("solver.mixing", config.solver.mixing);
    put("solver.psi0", config.solver.psi0);
    put("scan.mu_min", config.mu_grid.min);
    put("scan.mu_max", config.mu_grid.max);
    put("scan.mu_points", config.mu_grid.points);
    put("scan.t", config.scan_t);
    put("evolve.t_min", config.t_grid.min);
    put("evolve.t_max", config.t_grid.max);
    put("evolve.t_points", config.t_grid.points);
    put("ramp.kappa0", config.ramp.kappa0);
    put("ramp.rate", config.ramp.rate);
    put("ramp.t_end", config.ramp.t_end);
    put("ramp.samples", config.ramp.samples);
    put("validate.bound", config.validate_bound);
    put("spectrum.levels", config.spectrum_levels);
    return out.str();
}

} // namespace jch
