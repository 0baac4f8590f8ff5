#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sshbp/lattice.hpp"
#include "sshbp/spectral.hpp"

namespace sshbp {

/// Classical pump amplitudes (sqrt(W)) across the waveguides at distance z_m.
struct PumpField {
    double z_m = 0.0;
    Eigen::VectorXcd amplitudes;

    /// Total power sum |a_n|^2 in W.
    double power() const { return amplitudes.squaredNorm(); }
};

struct PumpTrajectory {
    std::vector<double> z_grid;
    std::vector<PumpField> fields;
};

/// sqrt(pump_power_w) in the defect waveguide, zero elsewhere.
PumpField center_input(const LatticeSpec& spec);

/// Exact pump evolution a(z) = V exp(i Omega z) V^T a(0) for a fixed input.
/// Modal coefficients are computed once, so each evaluation costs O(N^2).
class PumpPropagator {
public:
    PumpPropagator(const EigenSystem& es, const PumpField& input);

    Eigen::VectorXcd amplitudes_at(double z) const;
    /// Modal coefficients c_j = <f_j, a(0)>; |c_j| does not depend on z.
    const Eigen::VectorXcd& modal_coefficients() const { return modal_; }
    const EigenSystem& eigensystem() const { return es_; }
    double input_z() const { return z0_; }

private:
    EigenSystem es_;
    Eigen::VectorXcd modal_;
    double z0_;
};

/// Field after propagating `a0` over an additional distance `z` (>= 0).
PumpField evolve_pump(const EigenSystem& es, const PumpField& a0, double z);

/// n_steps + 1 uniformly spaced fields from z = 0 to `length`, each evaluated
/// exactly from the input.
PumpTrajectory pump_trajectory(const EigenSystem& es, const PumpField& a0, int n_steps, double length);

} // namespace sshbp
