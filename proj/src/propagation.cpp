#include "sshbp/propagation.hpp"

#include <cmath>
#include <complex>

#include "sshbp/errors.hpp"

namespace sshbp {

PumpField center_input(const LatticeSpec& spec)
{
    spec.validate();
    PumpField f;
    f.amplitudes = Eigen::VectorXcd::Zero(spec.n_sites);
    f.amplitudes(spec.center()) = std::sqrt(spec.pump_power_w);
    return f;
}

PumpPropagator::PumpPropagator(const EigenSystem& es, const PumpField& input)
    : es_(es), z0_(input.z_m)
{
    if (input.amplitudes.size() != es.size())
        throw ValidationError("a0", "input length does not match the lattice");
    if (!(input.amplitudes.norm() > 0.0))
        throw ValidationError("a0", "input field is identically zero");
    modal_ = es.vectors.transpose().cast<std::complex<double>>() * input.amplitudes;
}

Eigen::VectorXcd PumpPropagator::amplitudes_at(double z) const
{
    const Eigen::VectorXcd phased =
        (es_.values.cast<std::complex<double>>() * std::complex<double>(0.0, z)).array().exp() *
        modal_.array();
    return es_.vectors.cast<std::complex<double>>() * phased;
}

PumpField evolve_pump(const EigenSystem& es, const PumpField& a0, double z)
{
    if (!(z >= 0.0))
        throw ValidationError("z", "propagation distance must be non-negative");
    const PumpPropagator prop(es, a0);
    PumpField out;
    out.z_m = a0.z_m + z;
    out.amplitudes = z == 0.0 ? a0.amplitudes : prop.amplitudes_at(z);
    return out;
}

PumpTrajectory pump_trajectory(const EigenSystem& es, const PumpField& a0, int n_steps, double length)
{
    if (n_steps < 2)
        throw ValidationError("n_steps", "need at least 2 steps");
    if (!(length > 0.0))
        throw ValidationError("length", "must be positive");
    const PumpPropagator prop(es, a0);

    PumpTrajectory traj;
    traj.z_grid.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.fields.reserve(static_cast<std::size_t>(n_steps) + 1);
    for (int k = 0; k <= n_steps; ++k) {
        const double z = length * static_cast<double>(k) / static_cast<double>(n_steps);
        PumpField f;
        f.z_m = a0.z_m + z;
        f.amplitudes = k == 0 ? a0.amplitudes : prop.amplitudes_at(z);
        traj.z_grid.push_back(z);
        traj.fields.push_back(std::move(f));
    }
    return traj;
}

} // namespace sshbp
