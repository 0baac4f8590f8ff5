#include "sshbp/biphoton.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "sshbp/errors.hpp"
#include "sshbp/quadrature.hpp"

namespace sshbp {
namespace {

using cplx = std::complex<double>;

void check_bands(const EigenSystem& es_p, const EigenSystem& es_s, const EigenSystem& es_i)
{
    if (es_p.size() != es_s.size() || es_p.size() != es_i.size())
        throw ValidationError("eigensystem", "pump, signal and idler lattices differ in size");
}

double max_source_frequency(const EigenSystem& es_p, const EigenSystem& es_s, const EigenSystem& es_i)
{
    // The integrand carries exp(i (Omega_j + Omega_k - Omega_l - Omega_m) z').
    return 2.0 * es_p.spectral_radius() + es_s.spectral_radius() + es_i.spectral_radius();
}

struct Node {
    double z;
    double weight;
};

Eigen::VectorXcd phases(const Eigen::VectorXd& values, double z)
{
    return (values.cast<cplx>() * cplx(0.0, z)).array().exp();
}

} // namespace

BiphotonAmplitude to_site_basis(const ModalBiphoton& modal, const EigenSystem& es_s, const EigenSystem& es_i)
{
    BiphotonAmplitude bp;
    bp.z_m = modal.z_m;
    bp.psi = es_s.vectors.cast<cplx>() * modal.phi * es_i.vectors.transpose().cast<cplx>();
    return bp;
}

int required_panels(const EigenSystem& es_p, const EigenSystem& es_s, const EigenSystem& es_i, double z,
                    const BiphotonOptions& options)
{
    if (!(z > 0.0))
        return 0;
    const QuadratureRule rule = gauss_legendre(options.nodes_per_panel);
    const double theta_max = max_panel_phase(rule, options.tolerance);
    const double omega = max_source_frequency(es_p, es_s, es_i);
    const int minimum = std::max(1, static_cast<int>(std::ceil(omega * z / (2.0 * theta_max))));
    if (options.panels <= 0)
        return minimum;
    if (options.panels < minimum) {
        const double err = oscillatory_error(rule, omega * z / (2.0 * options.panels));
        throw QuadratureError("z quadrature too coarse: " + std::to_string(options.panels) +
                              " panels give an estimated relative error of " + std::to_string(err) +
                              "; use at least " + std::to_string(minimum) + " panels");
    }
    return options.panels;
}

std::vector<ModalBiphoton> evolve_biphoton_modal(const EigenSystem& es_p, const PumpField& input,
                                                 const EigenSystem& es_s, const EigenSystem& es_i, double gamma,
                                                 const std::vector<double>& z_out, const BiphotonOptions& options)
{
    check_bands(es_p, es_s, es_i);
    if (!(gamma >= 0.0))
        throw ValidationError("gamma", "must be non-negative");
    for (std::size_t k = 0; k < z_out.size(); ++k) {
        if (!(z_out[k] >= 0.0) || !std::isfinite(z_out[k]))
            throw ValidationError("z_out", "distances must be finite and non-negative");
        if (k > 0 && z_out[k] < z_out[k - 1])
            throw ValidationError("z_out", "distances must be ascending");
    }

    const Eigen::Index n = es_s.size();
    std::vector<ModalBiphoton> out;
    out.reserve(z_out.size());
    if (z_out.empty())
        return out;

    const double z_max = z_out.back();
    if (gamma == 0.0 || z_max == 0.0) {
        for (double z : z_out)
            out.push_back({z, Eigen::MatrixXcd::Zero(n, n)});
        return out;
    }

    const PumpPropagator pump(es_p, input);
    const QuadratureRule rule = gauss_legendre(options.nodes_per_panel);
    const double panel_length = z_max / required_panels(es_p, es_s, es_i, z_max, options);

    // Panels never straddle an output distance, so every output closes a
    // prefix of the node list.
    std::vector<Node> nodes;
    std::vector<std::size_t> segment_end;
    double prev = 0.0;
    for (double z : z_out) {
        const double seg = z - prev;
        if (seg > 0.0) {
            const int panels = std::max(1, static_cast<int>(std::ceil(seg / panel_length - 1e-9)));
            const double h = seg / panels;
            for (int p = 0; p < panels; ++p) {
                const double mid = prev + (p + 0.5) * h;
                for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                    nodes.push_back({mid + 0.5 * h * rule.nodes[q], 0.5 * h * rule.weights[q]});
            }
        }
        segment_end.push_back(nodes.size());
        prev = z;
    }

    // Source a_n(z')^2 at every node, and the sites it ever reaches.
    const auto n_nodes = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXcd source(n, n_nodes);
    for (Eigen::Index t = 0; t < n_nodes; ++t)
        source.col(t) = pump.amplitudes_at(nodes[static_cast<std::size_t>(t)].z).array().square();
    const Eigen::VectorXd site_peak = source.cwiseAbs().rowwise().maxCoeff();
    const double peak = site_peak.maxCoeff();
    std::vector<Eigen::Index> support;
    for (Eigen::Index s = 0; s < n; ++s)
        if (site_peak(s) > options.support_cutoff * peak)
            support.push_back(s);
    const auto k = static_cast<Eigen::Index>(support.size());

    Eigen::MatrixXd vs_t(n, k); // V_s restricted to the support, transposed
    Eigen::MatrixXd vi(k, n);
    for (Eigen::Index r = 0; r < k; ++r) {
        vs_t.col(r) = es_s.vectors.row(support[static_cast<std::size_t>(r)]).transpose();
        vi.row(r) = es_i.vectors.row(support[static_cast<std::size_t>(r)]);
    }

    Eigen::MatrixXcd accum = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXd scaled(2 * n, k);
    Eigen::MatrixXd product(2 * n, n);
    Eigen::VectorXd w_re(k);
    Eigen::VectorXd w_im(k);
    std::size_t t = 0;
    for (std::size_t seg = 0; seg < z_out.size(); ++seg) {
        for (; t < segment_end[seg]; ++t) {
            const Node& node = nodes[t];
            for (Eigen::Index r = 0; r < k; ++r) {
                const cplx w = source(support[static_cast<std::size_t>(r)], static_cast<Eigen::Index>(t));
                w_re(r) = w.real();
                w_im(r) = w.imag();
            }
            // Mode-basis source V_s^T diag(a^2) V_i as two real products.
            scaled.topRows(n).noalias() = vs_t * w_re.asDiagonal();
            scaled.bottomRows(n).noalias() = vs_t * w_im.asDiagonal();
            product.noalias() = scaled * vi;

            const Eigen::VectorXcd ps = phases(es_s.values, -node.z);
            const Eigen::VectorXcd pi = phases(es_i.values, -node.z) * node.weight;
            for (Eigen::Index m = 0; m < n; ++m) {
                const cplx cm = pi(m);
                for (Eigen::Index l = 0; l < n; ++l)
                    accum(l, m) += cm * ps(l) * cplx(product(l, m), product(n + l, m));
            }
        }
        const double z = z_out[seg];
        const Eigen::VectorXcd ps = phases(es_s.values, z) * cplx(0.0, gamma);
        const Eigen::VectorXcd pi = phases(es_i.values, z);
        ModalBiphoton bp;
        bp.z_m = z;
        bp.phi = ps.asDiagonal() * accum * pi.asDiagonal();
        out.push_back(std::move(bp));
    }
    return out;
}

std::vector<BiphotonAmplitude> evolve_biphoton(const EigenSystem& es_p, const PumpField& input,
                                               const EigenSystem& es_s, const EigenSystem& es_i, double gamma,
                                               const std::vector<double>& z_out, const BiphotonOptions& options)
{
    const auto modal = evolve_biphoton_modal(es_p, input, es_s, es_i, gamma, z_out, options);
    std::vector<BiphotonAmplitude> out;
    out.reserve(modal.size());
    for (const auto& m : modal)
        out.push_back(to_site_basis(m, es_s, es_i));
    return out;
}

Eigen::MatrixXd correlation_map(const BiphotonAmplitude& bp)
{
    Eigen::MatrixXd map = bp.psi.cwiseAbs2();
    const double total = map.sum();
    if (!(total > 0.0))
        throw ValidationError("psi", "biphoton amplitude is identically zero");
    return map / total;
}

Eigen::MatrixXd central_window(const Eigen::MatrixXd& m, Eigen::Index center, int half_width)
{
    const Eigen::Index size = 2 * half_width + 1;
    if (half_width < 0 || center - half_width < 0 || center + half_width >= std::min(m.rows(), m.cols()))
        throw ValidationError("window", "window does not fit inside the lattice");
    return m.block(center - half_width, center - half_width, size, size);
}

GammaTensor::GammaTensor(std::vector<int> pump_modes, std::vector<int> signal_modes, std::vector<int> idler_modes)
    : pump_(std::move(pump_modes)), signal_(std::move(signal_modes)), idler_(std::move(idler_modes)),
      values_(pump_.size() * pump_.size() * signal_.size() * idler_.size())
{
}

std::size_t GammaTensor::offset(std::size_t j, std::size_t k, std::size_t l, std::size_t m) const
{
    return ((j * pump_.size() + k) * signal_.size() + l) * idler_.size() + m;
}

std::complex<double>& GammaTensor::at(std::size_t j, std::size_t k, std::size_t l, std::size_t m)
{
    return values_.at(offset(j, k, l, m));
}

const std::complex<double>& GammaTensor::at(std::size_t j, std::size_t k, std::size_t l, std::size_t m) const
{
    return values_.at(offset(j, k, l, m));
}

GammaTensor gamma_tensor(const EigenSystem& es_p, const EigenSystem& es_s, const EigenSystem& es_i, double gamma,
                         const std::vector<int>& pump_modes, const std::vector<int>& signal_modes,
                         const std::vector<int>& idler_modes)
{
    check_bands(es_p, es_s, es_i);
    const auto check = [&](const std::vector<int>& modes, const char* field) {
        for (int j : modes)
            if (j < 0 || j >= es_p.size())
                throw ValidationError(field, "mode index " + std::to_string(j) + " out of range");
    };
    check(pump_modes, "pump_modes");
    check(signal_modes, "signal_modes");
    check(idler_modes, "idler_modes");

    GammaTensor g(pump_modes, signal_modes, idler_modes);
    for (std::size_t j = 0; j < pump_modes.size(); ++j)
        for (std::size_t k = 0; k < pump_modes.size(); ++k) {
            const Eigen::VectorXd pp =
                es_p.vectors.col(pump_modes[j]).cwiseProduct(es_p.vectors.col(pump_modes[k]));
            for (std::size_t l = 0; l < signal_modes.size(); ++l) {
                const Eigen::VectorXd pps = pp.cwiseProduct(es_s.vectors.col(signal_modes[l]));
                for (std::size_t m = 0; m < idler_modes.size(); ++m)
                    g.at(j, k, l, m) = gamma * pps.dot(es_i.vectors.col(idler_modes[m]));
            }
        }
    return g;
}

DefectModeVectors defect_mode_vectors(const EigenSystem& es, const DefectTriplet& triplet)
{
    DefectModeVectors v;
    if (triplet.topological >= 0)
        v.topological = es.vectors.col(triplet.topological);
    if (triplet.trivial_lower)
        v.trivial_lower = es.vectors.col(*triplet.trivial_lower);
    if (triplet.trivial_upper)
        v.trivial_upper = es.vectors.col(*triplet.trivial_upper);
    return v;
}

namespace {

// amp(u, v) = u^T psi v for site-basis vectors; norm2 = ||psi||_F^2.
template <class Amplitude>
ModePopulations project(const DefectModeVectors& signal, const DefectModeVectors& idler, double norm2,
                        Amplitude&& amp)
{
    if (!(norm2 > 0.0))
        throw ValidationError("psi", "biphoton amplitude is identically zero");
    const std::array<const std::optional<Eigen::VectorXd>*, 3> s = {&signal.topological, &signal.trivial_lower,
                                                                     &signal.trivial_upper};
    const std::array<const std::optional<Eigen::VectorXd>*, 3> i = {&idler.topological, &idler.trivial_lower,
                                                                     &idler.trivial_upper};
    ModePopulations pop;
    std::array<std::array<double, 3>, 3> p{};
    double total = 0.0;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            if (!s[a]->has_value() || !i[b]->has_value()) {
                pop.missing_modes = true;
                continue;
            }
            p[a][b] = std::norm(amp(**s[a], **i[b])) / norm2;
            total += p[a][b];
        }
    pop.p_TpTp = p[0][0];
    pop.p_Tr1Tr1 = p[1][1];
    pop.p_Tr1Tr2 = p[1][2];
    pop.p_Tr2Tr1 = p[2][1];
    pop.p_Tr2Tr2 = p[2][2];
    pop.p_TpTr_any = p[0][1] + p[0][2] + p[1][0] + p[2][0];
    pop.residual = std::max(0.0, 1.0 - total);
    return pop;
}

} // namespace

ModePopulations mode_populations(const BiphotonAmplitude& bp, const DefectModeVectors& signal,
                                 const DefectModeVectors& idler)
{
    return project(signal, idler, bp.psi.squaredNorm(), [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        return (u.cast<cplx>().transpose() * bp.psi * v.cast<cplx>())(0, 0);
    });
}

ModePopulations mode_populations(const ModalBiphoton& bp, const EigenSystem& es_s, const EigenSystem& es_i,
                                 const DefectModeVectors& signal, const DefectModeVectors& idler)
{
    return project(signal, idler, bp.phi.squaredNorm(), [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        const Eigen::VectorXcd um = (es_s.vectors.transpose() * u).cast<cplx>();
        const Eigen::VectorXcd vm = (es_i.vectors.transpose() * v).cast<cplx>();
        return (um.transpose() * bp.phi * vm)(0, 0);
    });
}

ModePopulations mode_populations(const BiphotonAmplitude& bp, const EigenSystem& es_s, const EigenSystem& es_i,
                                 const ModeClassification& cls_s, const ModeClassification& cls_i)
{
    return mode_populations(bp, defect_mode_vectors(es_s, defect_triplet(es_s, cls_s)),
                            defect_mode_vectors(es_i, defect_triplet(es_i, cls_i)));
}

} // namespace sshbp
