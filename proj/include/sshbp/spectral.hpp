#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sshbp/lattice.hpp"

namespace sshbp {

/// Full spectrum of one band. values ascending; vectors column j is mode j,
/// orthonormal, and the largest-magnitude entry of every column is positive
/// (the lowest site index wins near-ties).
struct EigenSystem {
    Band band = Band::pump;
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;

    Eigen::Index size() const { return values.size(); }
    /// max |Omega_j|, the spectral radius.
    double spectral_radius() const;
};

EigenSystem eigendecompose(const SymmetricTridiagonal& h, Band band = Band::pump);

/// Inverse participation ratio sum_n v_n^4 of a unit vector.
double ipr(const Eigen::Ref<const Eigen::VectorXd>& v);

enum class Parity { even, odd, none };
std::string_view to_string(Parity p);

/// Mirror parity about array index `center`, tolerance 1e-8.
Parity parity(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::Index center);

/// Rotates every degenerate cluster (|dOmega| <= rel_tol * spectral radius)
/// into mirror-even and mirror-odd combinations about `center`.
EigenSystem symmetrize_degenerate(const EigenSystem& es, Eigen::Index center, double rel_tol = 1e-12);

/// Probability weight of `v` within +-half_width sites of `center`.
double defect_weight(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::Index center, int half_width = 3);

enum class ModeClass { topological, trivial_defect, extended, emergent_localized };
std::string_view to_string(ModeClass c);

struct ClassificationThresholds {
    double ipr_factor = 4.0;      ///< localized if IPR > ipr_factor / n_sites
    int defect_half_width = 3;    ///< defect window, in sites either side
    double defect_mass = 0.5;     ///< weight inside the window to count as a defect mode
    double zero_rel_tol = 1e-12;  ///< two |Omega| this close to 0 flag a degenerate zero mode
};

struct ModeClassification {
    int topological = -1;
    std::vector<int> trivial_defect;
    std::vector<int> extended;
    std::vector<int> emergent_localized;
    /// More than one eigenvalue within the zero tolerance; all are listed in
    /// zero_candidates and `topological` is the one of smallest |Omega|.
    bool degenerate_zero = false;
    std::vector<int> zero_candidates;
    std::vector<double> ipr;
    std::vector<double> defect_weight;

    ModeClass class_of(int mode) const;
};

ModeClassification classify_modes(const EigenSystem& es, Eigen::Index center,
                                  const ClassificationThresholds& thresholds = {});

inline ModeClassification classify_modes(const EigenSystem& es, const LatticeSpec& spec,
                                         const ClassificationThresholds& thresholds = {})
{
    return classify_modes(es, spec.center(), thresholds);
}

/// The three co-localized defect modes of one band: topological, plus the
/// lower (Tr1) and upper (Tr2) trivial defect modes. A trivial slot is empty
/// when classification found no such mode.
struct DefectTriplet {
    int topological = -1;
    std::optional<int> trivial_lower;
    std::optional<int> trivial_upper;
};

/// Tr1/Tr2 are the two trivial_defect modes of largest defect weight,
/// ordered by energy.
DefectTriplet defect_triplet(const EigenSystem& es, const ModeClassification& cls);

} // namespace sshbp
