#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sshbp/biphoton.hpp"
#include "sshbp/lattice.hpp"
#include "sshbp/spectral.hpp"

namespace sshbp {

// ---------------------------------------------------------------------------
// Schmidt decomposition
// ---------------------------------------------------------------------------

enum class SchmidtSource { amplitude, sqrt_counts };
std::string_view to_string(SchmidtSource s);

struct SchmidtSpectrum {
    std::vector<double> coefficients;  ///< nonincreasing, largest = 1
    std::vector<double> raw_singulars; ///< unnormalized singular values
    SchmidtSource source = SchmidtSource::amplitude;

    int count_above(double threshold) const;
    /// K = 1 / sum p_k^2 with p_k = s_k^2 / sum s^2.
    double schmidt_number() const;
};

/// Singular values of `m`. With sqrt_counts, `m` must be a real,
/// entrywise non-negative count matrix; its entrywise square root is
/// decomposed (flat-phase assumption).
SchmidtSpectrum schmidt(const Eigen::MatrixXcd& m, SchmidtSource source);
SchmidtSpectrum schmidt(const Eigen::MatrixXd& m, SchmidtSource source);

// ---------------------------------------------------------------------------
// Per-realization pipeline
// ---------------------------------------------------------------------------

struct BandSystems {
    EigenSystem pump;
    EigenSystem signal;
    EigenSystem idler;

    const EigenSystem& operator[](Band b) const;
};

/// Eigensystems of all three bands for one geometry (clean when `real` is null).
BandSystems solve_bands(const LatticeSpec& spec, const DisorderRealization* real = nullptr);

/// Which vectors the ensemble projects onto.
///  - clean: the defect modes of the delta = 0 lattice, fixed for all realizations;
///  - disordered: the defect modes tracked in each realization's own spectrum.
enum class ModeBasis { clean, disordered };
std::string_view to_string(ModeBasis b);
ModeBasis parse_mode_basis(std::string_view text);

struct RealizationResult {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    ModePopulations populations;
    double zero_mode_energy = 0.0; ///< min |Omega| of the pump band
    int resample_count = 0;
};

struct EnsembleOptions {
    int n_realizations = 400;
    std::uint64_t master_seed = 20220101;
    DisorderModel model = DisorderModel::coupling_multiplicative;
    ModeBasis basis = ModeBasis::clean;
    int threads = 0; ///< 0 = hardware concurrency
    BiphotonOptions biphoton;
};

struct Moment {
    double mean = 0.0;
    double std_error = 0.0; ///< sample std / sqrt(n)
};

struct EnsembleStats {
    double delta = 0.0;
    int n_realizations = 0; ///< requested
    int n_failed = 0;
    std::uint64_t master_seed = 0;
    DisorderModel model = DisorderModel::coupling_multiplicative;
    ModeBasis basis = ModeBasis::clean;

    Moment p_TpTp, p_Tr1Tr2, p_Tr2Tr1, p_Tr1Tr1, p_Tr2Tr2, p_TpTr_any, residual;
    int missing_mode_count = 0;

    std::vector<RealizationResult> realizations; ///< in realization-index order
    std::vector<double> zero_mode_energies;      ///< successful realizations only
};

/// Runs `fn(i)` for i in [0, n) on up to `threads` workers. Work items are
/// claimed dynamically; callers store results by index.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

/// Disorder -> three band eigensystems -> pump -> biphoton at z = length_m ->
/// mode populations, for every realization seed_k = realization_seed(master, k).
/// The same k draws the same unit variates at every delta.
EnsembleStats ensemble_run(const LatticeSpec& spec, double delta, const EnsembleOptions& options);

EnsembleStats ensemble_run(const LatticeSpec& spec, double delta, int n_realizations, std::uint64_t master_seed,
                           DisorderModel model);

// ---------------------------------------------------------------------------
// Energy vs disorder
// ---------------------------------------------------------------------------

struct SweepEntry {
    double delta = 0.0;
    int realization = 0;
    std::uint64_t seed = 0;
    Eigen::VectorXd energies;
    std::vector<ModeClass> classes;
    std::vector<double> ipr;
    double zero_mode_energy = 0.0;
    /// Smallest distance from a tracked trivial defect mode to any other
    /// non-topological eigenvalue; 0 when no trivial defect mode survives.
    double trivial_gap = 0.0;
};

struct SweepTable {
    Band band = Band::pump;
    std::vector<double> delta_grid;
    std::vector<SweepEntry> entries; ///< delta-major, realization-minor
    std::vector<double> median_gap;  ///< one per delta
    std::vector<double> max_zero_energy;
};

SweepTable energy_sweep(const LatticeSpec& spec, const std::vector<double>& delta_grid, int n_per_delta,
                        std::uint64_t master_seed, DisorderModel model = DisorderModel::coupling_multiplicative,
                        int threads = 0, Band band = Band::pump);

/// Gap statistic of one spectrum (see SweepEntry::trivial_gap).
double trivial_gap(const EigenSystem& es, const ModeClassification& cls);

} // namespace sshbp
