#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sshbp/analysis.hpp"
#include "sshbp/lattice.hpp"

namespace sshbp {

/// Flat `key = value` text. Lines starting with '#' are comments; list
/// values are comma separated. Keys mirror the field names of LatticeSpec
/// and RunConfig, with nested fields joined by '.'
/// (e.g. couplings.signal.t_long).
class ConfigText {
public:
    static ConfigText parse(std::string_view text, const std::string& source = "<config>");
    static ConfigText load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

/// Everything a CLI run needs besides the subcommand. `threads` and the
/// output directory are execution details and live outside this struct so
/// they never reach the provenance hash.
struct RunConfig {
    LatticeSpec lattice;

    // z quadrature
    int z_panels = 0; ///< 0 = automatic
    int nodes_per_panel = 16;
    double quadrature_tolerance = 1e-12;

    int pump_steps = 512;
    std::vector<double> checkpoint_fractions = {1.0 / 6.0, 0.5, 1.0};
    int population_steps = 64;
    int window_half_width = 2;
    Band band = Band::pump;

    double delta = 0.0;
    std::vector<double> delta_grid = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    std::vector<double> sweep_delta_grid = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
    int n_realizations = 400;
    int sweep_realizations = 100;
    std::uint64_t master_seed = 20220101;
    DisorderModel disorder_model = DisorderModel::coupling_multiplicative;
    ModeBasis mode_basis = ModeBasis::clean;

    BiphotonOptions biphoton_options() const;
    void validate() const;
};

/// Every recognised key, in canonical order.
const std::vector<std::string>& config_keys();

/// Applies the entries of `text` on top of `base`. Unknown keys and
/// unparsable values throw ValidationError naming the key.
RunConfig apply_config(const ConfigText& text, RunConfig base = {});

/// Canonical serialization: every key in config_keys() order, one per line,
/// doubles in shortest round-trip form.
std::string serialize(const RunConfig& config);

std::string serialize(const LatticeSpec& spec);
LatticeSpec lattice_from_config(const ConfigText& text);

/// FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const RunConfig& config);

std::string format_double(double x);

} // namespace sshbp
