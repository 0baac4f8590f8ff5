#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sshbp/propagation.hpp"
#include "sshbp/spectral.hpp"

namespace sshbp {

/// Joint signal-idler amplitude psi(s, i) in the site basis at distance z_m.
struct BiphotonAmplitude {
    double z_m = 0.0;
    Eigen::MatrixXcd psi;
};

/// The same state in the signal/idler eigenbases:
/// phi(l, m) = sum_{s,i} f^s_{l,s} psi(s, i) f^i_{m,i}.
struct ModalBiphoton {
    double z_m = 0.0;
    Eigen::MatrixXcd phi;
};

BiphotonAmplitude to_site_basis(const ModalBiphoton& modal, const EigenSystem& es_s, const EigenSystem& es_i);

/// z-quadrature controls. The source integral is split into panels of
/// `nodes_per_panel` Gauss-Legendre nodes; with panels = 0 the panel count
/// is the smallest that keeps the estimated relative error below
/// `tolerance`. An explicit panel count that is too coarse is rejected.
struct BiphotonOptions {
    int nodes_per_panel = 16;
    int panels = 0;
    double tolerance = 1e-12;
    /// Sites whose peak |a_n|^2 stays below this fraction of the global peak
    /// are dropped from the source (they sit outside the pump's light cone).
    double support_cutoff = 1e-18;
};

/// Number of panels over [0, z] that `options` resolves to for these bands.
int required_panels(const EigenSystem& es_p, const EigenSystem& es_s, const EigenSystem& es_i, double z,
                    const BiphotonOptions& options = {});

/// First-order biphoton amplitude sourced by the undepleted pump,
///   psi(z) = i gamma int_0^z U_s(z-z') diag(a(z')^2) U_i^T(z-z') dz',
/// evaluated in the signal/idler eigenbases at every distance in `z_out`
/// (ascending, >= 0).
std::vector<ModalBiphoton> evolve_biphoton_modal(const EigenSystem& es_p, const PumpField& input,
                                                 const EigenSystem& es_s, const EigenSystem& es_i, double gamma,
                                                 const std::vector<double>& z_out,
                                                 const BiphotonOptions& options = {});

std::vector<BiphotonAmplitude> evolve_biphoton(const EigenSystem& es_p, const PumpField& input,
                                               const EigenSystem& es_s, const EigenSystem& es_i, double gamma,
                                               const std::vector<double>& z_out,
                                               const BiphotonOptions& options = {});

/// |psi|^2 normalized to unit sum. Throws on an all-zero amplitude.
Eigen::MatrixXd correlation_map(const BiphotonAmplitude& bp);

/// (2 half_width + 1)^2 block of `m` centred on (center, center).
Eigen::MatrixXd central_window(const Eigen::MatrixXd& m, Eigen::Index center, int half_width = 2);

/// Gamma_{jklm} = gamma sum_n f^p_{j,n} f^p_{k,n} conj(f^s_{l,n}) conj(f^i_{m,n})
/// over the requested mode subsets.
class GammaTensor {
public:
    GammaTensor(std::vector<int> pump_modes, std::vector<int> signal_modes, std::vector<int> idler_modes);

    const std::vector<int>& pump_modes() const { return pump_; }
    const std::vector<int>& signal_modes() const { return signal_; }
    const std::vector<int>& idler_modes() const { return idler_; }

    /// Positions are indices into the subsets, not mode numbers.
    std::complex<double>& at(std::size_t j, std::size_t k, std::size_t l, std::size_t m);
    const std::complex<double>& at(std::size_t j, std::size_t k, std::size_t l, std::size_t m) const;

private:
    std::size_t offset(std::size_t j, std::size_t k, std::size_t l, std::size_t m) const;

    std::vector<int> pump_;
    std::vector<int> signal_;
    std::vector<int> idler_;
    std::vector<std::complex<double>> values_;
};

GammaTensor gamma_tensor(const EigenSystem& es_p, const EigenSystem& es_s, const EigenSystem& es_i, double gamma,
                         const std::vector<int>& pump_modes, const std::vector<int>& signal_modes,
                         const std::vector<int>& idler_modes);

/// Site-basis profiles of the three defect modes used as projection targets.
struct DefectModeVectors {
    std::optional<Eigen::VectorXd> topological;
    std::optional<Eigen::VectorXd> trivial_lower; ///< Tr1
    std::optional<Eigen::VectorXd> trivial_upper; ///< Tr2
};

DefectModeVectors defect_mode_vectors(const EigenSystem& es, const DefectTriplet& triplet);

struct ModePopulations {
    double p_TpTp = 0.0;
    double p_Tr1Tr2 = 0.0;
    double p_Tr2Tr1 = 0.0;
    double p_Tr1Tr1 = 0.0;
    double p_Tr2Tr2 = 0.0;
    double p_TpTr_any = 0.0; ///< Tp x Tr1, Tp x Tr2, Tr1 x Tp, Tr2 x Tp together
    double residual = 0.0;   ///< weight outside the nine defect-mode products
    bool missing_modes = false;
};

/// p_lm = |f_l^T psi f_m|^2 / ||psi||_F^2 (first label signal, second idler).
ModePopulations mode_populations(const BiphotonAmplitude& bp, const DefectModeVectors& signal,
                                 const DefectModeVectors& idler);

/// Same projection evaluated directly from the modal amplitude.
ModePopulations mode_populations(const ModalBiphoton& bp, const EigenSystem& es_s, const EigenSystem& es_i,
                                 const DefectModeVectors& signal, const DefectModeVectors& idler);

ModePopulations mode_populations(const BiphotonAmplitude& bp, const EigenSystem& es_s, const EigenSystem& es_i,
                                 const ModeClassification& cls_s, const ModeClassification& cls_i);

} // namespace sshbp
