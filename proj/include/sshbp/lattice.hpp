#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sshbp {

enum class Band { pump = 0, signal = 1, idler = 2 };

inline constexpr std::array<Band, 3> kAllBands = {Band::pump, Band::signal, Band::idler};

std::string_view to_string(Band band);
Band parse_band(std::string_view text);

struct BandCouplings {
    double t_short = 0.0; ///< m^-1, bond across a short gap
    double t_long = 0.0;  ///< m^-1, bond across a long gap
};

/// Device description. Sites are labelled -(n-1)/2 ... +(n-1)/2 with the
/// short-short defect on label 0; internally they are stored at array
/// indices 0 ... n-1, so label 0 lives at array index n/2.
struct LatticeSpec {
    int n_sites = 203;
    int defect_index = 0;
    double length_m = 381e-6;
    std::array<BandCouplings, 3> couplings = {{
        {45044.0, 14372.0}, // pump
        {43896.0, 13892.0}, // signal
        {46219.0, 14868.0}, // idler
    }};
    double gamma = 120.0;       ///< W^-1 m^-1
    double pump_power_w = 1.0;  ///< W, injected at the defect
    // Gap geometry. Only the position_shift disorder model reads these.
    double gap_short_m = 173e-9;
    double gap_long_m = 307e-9;

    const BandCouplings& band(Band b) const { return couplings[static_cast<std::size_t>(b)]; }
    BandCouplings& band(Band b) { return couplings[static_cast<std::size_t>(b)]; }

    /// Array index of the defect (centre) waveguide.
    int center() const { return n_sites / 2; }
    int array_index(int site_label) const { return site_label + center(); }
    int site_label(int array_index) const { return array_index - center(); }

    /// Throws ValidationError naming the first offending field.
    void validate() const;
};

/// Bond strengths of one band. t[k] couples array sites k and k+1.
struct CouplingProfile {
    Band band = Band::pump;
    BandCouplings base;       ///< the band's clean short/long pair
    std::vector<double> t;

    std::size_t n_sites() const { return t.size() + 1; }
    void validate() const;
};

enum class DisorderModel { coupling_multiplicative, position_shift };

std::string_view to_string(DisorderModel model);
DisorderModel parse_disorder_model(std::string_view text);

/// One random geometry. The draws are dimensionless and band independent:
///  - coupling_multiplicative: one u_k in [-delta, delta] per bond;
///  - position_shift: one s_n in [-delta/2, delta/2] per site, the site moves
///    by s_n * gap_short_m.
/// Each band turns the same draws into its own multipliers.
struct DisorderRealization {
    double delta = 0.0;
    std::uint64_t seed = 0;
    DisorderModel model = DisorderModel::coupling_multiplicative;
    std::vector<double> draws;
    int resample_count = 0;
    double gap_short_m = 173e-9;
    double gap_long_m = 307e-9;
};

/// Real symmetric tridiagonal matrix stored by its two diagonals.
struct SymmetricTridiagonal {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;

    std::size_t size() const { return diagonal.size(); }
    Eigen::MatrixXd dense() const;
};

/// Clean alternating profile; both bonds touching the defect are short and
/// the pattern is mirror symmetric about it.
CouplingProfile build_couplings(const LatticeSpec& spec, Band band);

/// Draws a reproducible realization for a lattice of `n_sites` sites.
/// `delta` must lie in [0, 0.5].
DisorderRealization draw_disorder(double delta, std::uint64_t seed, DisorderModel model,
                                  int n_sites, double gap_short_m = 173e-9,
                                  double gap_long_m = 307e-9);

/// Convenience overload taking the geometry from `spec`.
DisorderRealization draw_disorder(const LatticeSpec& spec, double delta, std::uint64_t seed,
                                  DisorderModel model);

CouplingProfile apply_disorder(const CouplingProfile& profile, const DisorderRealization& real);

SymmetricTridiagonal hamiltonian(const CouplingProfile& profile);

} // namespace sshbp
