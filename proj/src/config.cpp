#include "sshbp/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "sshbp/errors.hpp"

namespace sshbp {
namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& value)
{
    double x = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, x);
    if (ec != std::errc() || ptr != end)
        throw ValidationError(key, "expected a number, got '" + value + "'");
    return x;
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& value)
{
    Int x = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, x);
    if (ec != std::errc() || ptr != end)
        throw ValidationError(key, "expected an integer, got '" + value + "'");
    return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& value)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    if (out.empty())
        throw ValidationError(key, "expected a comma-separated list of numbers");
    return out;
}

std::string format_list(const std::vector<double>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += format_double(xs[i]);
    }
    return out;
}

struct Key {
    std::string name;
    bool lattice;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

#define SSHBP_DOUBLE_KEY(NAME, LATTICE, FIELD)                                                            \
    Key{NAME, LATTICE, [](const RunConfig& c) { return format_double(c.FIELD); },                        \
        [](RunConfig& c, const std::string& v) { c.FIELD = parse_double(NAME, v); }}
#define SSHBP_INT_KEY(NAME, LATTICE, FIELD)                                                               \
    Key{NAME, LATTICE, [](const RunConfig& c) { return std::to_string(c.FIELD); },                       \
        [](RunConfig& c, const std::string& v) { c.FIELD = parse_integer<int>(NAME, v); }}
#define SSHBP_LIST_KEY(NAME, FIELD)                                                                       \
    Key{NAME, false, [](const RunConfig& c) { return format_list(c.FIELD); },                            \
        [](RunConfig& c, const std::string& v) { c.FIELD = parse_list(NAME, v); }}

const std::vector<Key>& key_table()
{
    static const std::vector<Key> table = {
        SSHBP_INT_KEY("n_sites", true, lattice.n_sites),
        SSHBP_INT_KEY("defect_index", true, lattice.defect_index),
        SSHBP_DOUBLE_KEY("length_m", true, lattice.length_m),
        SSHBP_DOUBLE_KEY("couplings.pump.t_short", true, lattice.couplings[0].t_short),
        SSHBP_DOUBLE_KEY("couplings.pump.t_long", true, lattice.couplings[0].t_long),
        SSHBP_DOUBLE_KEY("couplings.signal.t_short", true, lattice.couplings[1].t_short),
        SSHBP_DOUBLE_KEY("couplings.signal.t_long", true, lattice.couplings[1].t_long),
        SSHBP_DOUBLE_KEY("couplings.idler.t_short", true, lattice.couplings[2].t_short),
        SSHBP_DOUBLE_KEY("couplings.idler.t_long", true, lattice.couplings[2].t_long),
        SSHBP_DOUBLE_KEY("gamma", true, lattice.gamma),
        SSHBP_DOUBLE_KEY("pump_power_w", true, lattice.pump_power_w),
        SSHBP_DOUBLE_KEY("gap_short_m", true, lattice.gap_short_m),
        SSHBP_DOUBLE_KEY("gap_long_m", true, lattice.gap_long_m),
        SSHBP_INT_KEY("z_panels", false, z_panels),
        SSHBP_INT_KEY("nodes_per_panel", false, nodes_per_panel),
        SSHBP_DOUBLE_KEY("quadrature_tolerance", false, quadrature_tolerance),
        SSHBP_INT_KEY("pump_steps", false, pump_steps),
        SSHBP_LIST_KEY("checkpoint_fractions", checkpoint_fractions),
        SSHBP_INT_KEY("population_steps", false, population_steps),
        SSHBP_INT_KEY("window_half_width", false, window_half_width),
        Key{"band", false, [](const RunConfig& c) { return std::string(to_string(c.band)); },
            [](RunConfig& c, const std::string& v) { c.band = parse_band(v); }},
        SSHBP_DOUBLE_KEY("delta", false, delta),
        SSHBP_LIST_KEY("delta_grid", delta_grid),
        SSHBP_LIST_KEY("sweep_delta_grid", sweep_delta_grid),
        SSHBP_INT_KEY("n_realizations", false, n_realizations),
        SSHBP_INT_KEY("sweep_realizations", false, sweep_realizations),
        Key{"master_seed", false, [](const RunConfig& c) { return std::to_string(c.master_seed); },
            [](RunConfig& c, const std::string& v) { c.master_seed = parse_integer<std::uint64_t>("master_seed", v); }},
        Key{"disorder_model", false, [](const RunConfig& c) { return std::string(to_string(c.disorder_model)); },
            [](RunConfig& c, const std::string& v) { c.disorder_model = parse_disorder_model(v); }},
        Key{"mode_basis", false, [](const RunConfig& c) { return std::string(to_string(c.mode_basis)); },
            [](RunConfig& c, const std::string& v) { c.mode_basis = parse_mode_basis(v); }},
    };
    return table;
}

#undef SSHBP_DOUBLE_KEY
#undef SSHBP_INT_KEY
#undef SSHBP_LIST_KEY

const Key* find_key(const std::string& name)
{
    for (const auto& k : key_table())
        if (k.name == name)
            return &k;
    return nullptr;
}

} // namespace

std::string format_double(double x)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, ptr) : std::to_string(x);
}

ConfigText ConfigText::parse(std::string_view text, const std::string& source)
{
    ConfigText cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(std::string_view(line).substr(0, line.find('#')));
        if (stripped.empty())
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ValidationError(source + ":" + std::to_string(lineno), "expected 'key = value'");
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty())
            throw ValidationError(source + ":" + std::to_string(lineno), "missing key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

ConfigText ConfigText::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config", "cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

const std::string& ConfigText::get(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ValidationError(key, "missing");
    return it->second;
}

BiphotonOptions RunConfig::biphoton_options() const
{
    BiphotonOptions o;
    o.panels = z_panels;
    o.nodes_per_panel = nodes_per_panel;
    o.tolerance = quadrature_tolerance;
    return o;
}

void RunConfig::validate() const
{
    lattice.validate();
    if (z_panels < 0)
        throw ValidationError("z_panels", "must be >= 0 (0 selects automatically)");
    if (nodes_per_panel < 2 || nodes_per_panel > 64)
        throw ValidationError("nodes_per_panel", "must lie in [2, 64]");
    if (!(quadrature_tolerance > 0.0))
        throw ValidationError("quadrature_tolerance", "must be positive");
    if (pump_steps < 2)
        throw ValidationError("pump_steps", "must be at least 2");
    for (double f : checkpoint_fractions)
        if (!(f > 0.0 && f <= 1.0))
            throw ValidationError("checkpoint_fractions", "fractions must lie in (0, 1]");
    if (population_steps < 1)
        throw ValidationError("population_steps", "must be at least 1");
    if (window_half_width < 0 || 2 * window_half_width + 1 > lattice.n_sites)
        throw ValidationError("window_half_width", "window does not fit inside the lattice");
    if (!(delta >= 0.0 && delta <= 0.5))
        throw ValidationError("delta", "must lie in [0, 0.5]");
    for (double d : delta_grid)
        if (!(d >= 0.0 && d <= 0.5))
            throw ValidationError("delta_grid", "every delta must lie in [0, 0.5]");
    for (double d : sweep_delta_grid)
        if (!(d >= 0.0 && d <= 0.5))
            throw ValidationError("sweep_delta_grid", "every delta must lie in [0, 0.5]");
    if (n_realizations < 1)
        throw ValidationError("n_realizations", "must be at least 1");
    if (sweep_realizations < 1)
        throw ValidationError("sweep_realizations", "must be at least 1");
}

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& key : key_table())
            k.push_back(key.name);
        return k;
    }();
    return keys;
}

RunConfig apply_config(const ConfigText& text, RunConfig base)
{
    for (const auto& [key, value] : text.entries()) {
        const Key* k = find_key(key);
        if (k == nullptr)
            throw ValidationError(key, "unknown configuration key");
        k->set(base, value);
    }
    return base;
}

std::string serialize(const RunConfig& config)
{
    std::string out;
    for (const auto& k : key_table())
        out += k.name + " = " + k.get(config) + "\n";
    return out;
}

std::string serialize(const LatticeSpec& spec)
{
    RunConfig c;
    c.lattice = spec;
    std::string out;
    for (const auto& k : key_table())
        if (k.lattice)
            out += k.name + " = " + k.get(c) + "\n";
    return out;
}

LatticeSpec lattice_from_config(const ConfigText& text)
{
    RunConfig c;
    for (const auto& [key, value] : text.entries()) {
        const Key* k = find_key(key);
        if (k == nullptr || !k->lattice)
            throw ValidationError(key, "not a lattice key");
        k->set(c, value);
    }
    c.lattice.validate();
    return c.lattice;
}

std::string config_hash(const RunConfig& config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace sshbp
