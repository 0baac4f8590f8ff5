#include "sshbp/lattice.hpp"

#include <cmath>
#include <string>

#include "sshbp/errors.hpp"
#include "sshbp/rng.hpp"

namespace sshbp {

std::string_view to_string(Band band)
{
    switch (band) {
    case Band::pump: return "pump";
    case Band::signal: return "signal";
    case Band::idler: return "idler";
    }
    return "unknown";
}

Band parse_band(std::string_view text)
{
    for (Band b : kAllBands)
        if (to_string(b) == text)
            return b;
    throw ValidationError("band", "expected pump, signal or idler, got '" + std::string(text) + "'");
}

std::string_view to_string(DisorderModel model)
{
    switch (model) {
    case DisorderModel::coupling_multiplicative: return "coupling_multiplicative";
    case DisorderModel::position_shift: return "position_shift";
    }
    return "unknown";
}

DisorderModel parse_disorder_model(std::string_view text)
{
    if (text == "coupling_multiplicative")
        return DisorderModel::coupling_multiplicative;
    if (text == "position_shift")
        return DisorderModel::position_shift;
    throw ValidationError("disorder_model", "expected coupling_multiplicative or position_shift, got '" +
                                                std::string(text) + "'");
}

void LatticeSpec::validate() const
{
    if (n_sites < 3 || n_sites % 2 == 0)
        throw ValidationError("n_sites", "must be an odd integer >= 3, got " + std::to_string(n_sites));
    if (defect_index != 0)
        throw ValidationError("defect_index", "the defect must be the middle site (label 0)");
    if (!(length_m > 0.0) || !std::isfinite(length_m))
        throw ValidationError("length_m", "must be positive");
    for (Band b : kAllBands) {
        const auto& c = band(b);
        const std::string prefix = "couplings." + std::string(to_string(b));
        if (!(c.t_short > 0.0) || !std::isfinite(c.t_short))
            throw ValidationError(prefix + ".t_short", "must be positive");
        if (!(c.t_long > 0.0) || !std::isfinite(c.t_long))
            throw ValidationError(prefix + ".t_long", "must be positive");
        if (!(c.t_short > c.t_long))
            throw ValidationError(prefix + ".t_short", "must exceed t_long");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw ValidationError("gamma", "must be non-negative");
    if (!(pump_power_w > 0.0) || !std::isfinite(pump_power_w))
        throw ValidationError("pump_power_w", "must be positive");
    if (!(gap_short_m > 0.0) || !(gap_long_m > gap_short_m))
        throw ValidationError("gap_long_m", "gaps must satisfy 0 < gap_short_m < gap_long_m");
}

void CouplingProfile::validate() const
{
    for (std::size_t k = 0; k < t.size(); ++k)
        if (!(t[k] > 0.0) || !std::isfinite(t[k]))
            throw ValidationError("t", "bond " + std::to_string(k) + " is not strictly positive");
}

Eigen::MatrixXd SymmetricTridiagonal::dense() const
{
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        m(i, i) = diagonal[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        m(i, i + 1) = off_diagonal[static_cast<std::size_t>(i)];
        m(i + 1, i) = off_diagonal[static_cast<std::size_t>(i)];
    }
    return m;
}

CouplingProfile build_couplings(const LatticeSpec& spec, Band band)
{
    spec.validate();
    const auto& base = spec.band(band);
    const int c = spec.center();

    CouplingProfile profile;
    profile.band = band;
    profile.base = base;
    profile.t.resize(static_cast<std::size_t>(spec.n_sites - 1));
    for (int k = 0; k < spec.n_sites - 1; ++k) {
        // Distance (in bonds) from the nearer of the two defect bonds c-1, c.
        const int d = k >= c ? k - c : c - 1 - k;
        profile.t[static_cast<std::size_t>(k)] = d % 2 == 0 ? base.t_short : base.t_long;
    }
    return profile;
}

DisorderRealization draw_disorder(double delta, std::uint64_t seed, DisorderModel model, int n_sites,
                                  double gap_short_m, double gap_long_m)
{
    if (!(delta >= 0.0 && delta <= 0.5))
        throw ValidationError("delta", "must lie in [0, 0.5], got " + std::to_string(delta));
    if (n_sites < 1)
        throw ValidationError("n_sites", "must be positive");

    DisorderRealization real;
    real.delta = delta;
    real.seed = seed;
    real.model = model;
    real.gap_short_m = gap_short_m;
    real.gap_long_m = gap_long_m;

    UniformStream stream(seed);
    if (model == DisorderModel::coupling_multiplicative) {
        real.draws.resize(static_cast<std::size_t>(n_sites - 1));
        for (auto& u : real.draws) {
            u = stream.next(-delta, delta);
            // Multiplier 1+u must stay positive; redraw rather than clamp.
            while (1.0 + u <= 0.0) {
                u = stream.next(-delta, delta);
                ++real.resample_count;
            }
        }
    } else {
        real.draws.resize(static_cast<std::size_t>(n_sites));
        for (auto& s : real.draws)
            s = stream.next(-0.5 * delta, 0.5 * delta);
    }
    return real;
}

DisorderRealization draw_disorder(const LatticeSpec& spec, double delta, std::uint64_t seed,
                                  DisorderModel model)
{
    return draw_disorder(delta, seed, model, spec.n_sites, spec.gap_short_m, spec.gap_long_m);
}

CouplingProfile apply_disorder(const CouplingProfile& profile, const DisorderRealization& real)
{
    profile.validate();
    if (!(real.delta >= 0.0 && real.delta <= 0.5))
        throw ValidationError("delta", "must lie in [0, 0.5], got " + std::to_string(real.delta));

    CouplingProfile out = profile;
    if (real.delta == 0.0)
        return out;

    const std::size_t n_bonds = profile.t.size();
    if (real.model == DisorderModel::coupling_multiplicative) {
        if (real.draws.size() != n_bonds)
            throw ValidationError("draws", "expected one draw per bond");
        for (std::size_t k = 0; k < n_bonds; ++k)
            out.t[k] *= 1.0 + real.draws[k];
    } else {
        if (real.draws.size() != n_bonds + 1)
            throw ValidationError("draws", "expected one draw per site");
        // t(g) = t0 exp(-kappa g) with kappa fixed by t(g_s)/t(g_l) of this band.
        const double kappa = std::log(profile.base.t_short / profile.base.t_long) /
                             (real.gap_long_m - real.gap_short_m);
        for (std::size_t k = 0; k < n_bonds; ++k) {
            const double dgap = (real.draws[k + 1] - real.draws[k]) * real.gap_short_m;
            out.t[k] *= std::exp(-kappa * dgap);
        }
    }
    out.validate();
    return out;
}

SymmetricTridiagonal hamiltonian(const CouplingProfile& profile)
{
    profile.validate();
    SymmetricTridiagonal h;
    h.diagonal.assign(profile.n_sites(), 0.0);
    h.off_diagonal = profile.t;
    return h;
}

} // namespace sshbp
