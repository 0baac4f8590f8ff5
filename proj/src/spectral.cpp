#include "sshbp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sshbp/errors.hpp"

namespace sshbp {
namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v)
{
    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= peak * (1.0 - 1e-9)) {
            if (v(i) < 0.0)
                v = -v;
            return;
        }
    }
}

// Orthonormal basis of the column space of `m`, discarding directions whose
// singular value is below `cutoff`.
Eigen::MatrixXd column_basis(const Eigen::MatrixXd& m, double cutoff)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > cutoff)
            ++rank;
    return svd.matrixU().leftCols(rank);
}

} // namespace

double EigenSystem::spectral_radius() const
{
    return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

EigenSystem eigendecompose(const SymmetricTridiagonal& h, Band band)
{
    const auto n = static_cast<Eigen::Index>(h.size());
    if (n == 0)
        throw ValidationError("hamiltonian", "empty matrix");
    if (h.off_diagonal.size() + 1 != h.size())
        throw ValidationError("hamiltonian", "off-diagonal length must be size - 1");

    EigenSystem es;
    es.band = band;
    if (n == 1) {
        es.values = Eigen::VectorXd::Constant(1, h.diagonal[0]);
        es.vectors = Eigen::MatrixXd::Identity(1, 1);
        return es;
    }

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(h.diagonal.data(), n);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(h.off_diagonal.data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        const double scale = std::max(diag.cwiseAbs().maxCoeff(), sub.cwiseAbs().maxCoeff());
        throw NumericalError("tridiagonal eigensolver did not converge (n=" + std::to_string(n) +
                             ", max |entry|=" + std::to_string(scale) + ")");
    }
    es.values = solver.eigenvalues();
    es.vectors = solver.eigenvectors();
    for (Eigen::Index j = 0; j < n; ++j)
        fix_sign(es.vectors.col(j));
    return es;
}

double ipr(const Eigen::Ref<const Eigen::VectorXd>& v)
{
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > 1e-8)
        throw ValidationError("v", "mode vector is not normalized (norm " + std::to_string(norm) + ")");
    return v.array().square().square().sum();
}

std::string_view to_string(Parity p)
{
    switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::none: return "none";
    }
    return "none";
}

Parity parity(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::Index center)
{
    constexpr double tol = 1e-8;
    bool even = true;
    bool odd = true;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const Eigen::Index mirror = 2 * center - i;
        const double partner = (mirror >= 0 && mirror < v.size()) ? v(mirror) : 0.0;
        if (std::abs(v(i) - partner) > tol)
            even = false;
        if (std::abs(v(i) + partner) > tol)
            odd = false;
    }
    if (even && !odd)
        return Parity::even;
    if (odd && !even)
        return Parity::odd;
    return Parity::none;
}

EigenSystem symmetrize_degenerate(const EigenSystem& es, Eigen::Index center, double rel_tol)
{
    EigenSystem out = es;
    const Eigen::Index n = es.size();
    const double tol = rel_tol * std::max(es.spectral_radius(), 1.0);

    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && es.values(end) - es.values(end - 1) <= tol)
            ++end;
        const Eigen::Index m = end - start;
        if (m > 1) {
            const Eigen::MatrixXd block = es.vectors.middleCols(start, m);
            Eigen::MatrixXd reflected = Eigen::MatrixXd::Zero(n, m);
            for (Eigen::Index i = 0; i < n; ++i) {
                const Eigen::Index mirror = 2 * center - i;
                if (mirror >= 0 && mirror < n)
                    reflected.row(i) = block.row(mirror);
            }
            const Eigen::MatrixXd even = column_basis(0.5 * (block + reflected), 1e-6);
            const Eigen::MatrixXd odd = column_basis(0.5 * (block - reflected), 1e-6);
            if (even.cols() + odd.cols() == m) {
                out.vectors.middleCols(start, even.cols()) = even;
                out.vectors.middleCols(start + even.cols(), odd.cols()) = odd;
                for (Eigen::Index j = start; j < end; ++j)
                    fix_sign(out.vectors.col(j));
            }
        }
        start = end;
    }
    return out;
}

double defect_weight(const Eigen::Ref<const Eigen::VectorXd>& v, Eigen::Index center, int half_width)
{
    const Eigen::Index lo = std::max<Eigen::Index>(0, center - half_width);
    const Eigen::Index hi = std::min<Eigen::Index>(v.size() - 1, center + half_width);
    return v.segment(lo, hi - lo + 1).squaredNorm();
}

std::string_view to_string(ModeClass c)
{
    switch (c) {
    case ModeClass::topological: return "topological";
    case ModeClass::trivial_defect: return "trivial_defect";
    case ModeClass::extended: return "extended";
    case ModeClass::emergent_localized: return "emergent_localized";
    }
    return "extended";
}

ModeClass ModeClassification::class_of(int mode) const
{
    if (mode == topological)
        return ModeClass::topological;
    if (std::find(trivial_defect.begin(), trivial_defect.end(), mode) != trivial_defect.end())
        return ModeClass::trivial_defect;
    if (std::find(emergent_localized.begin(), emergent_localized.end(), mode) != emergent_localized.end())
        return ModeClass::emergent_localized;
    return ModeClass::extended;
}

ModeClassification classify_modes(const EigenSystem& es, Eigen::Index center,
                                  const ClassificationThresholds& thresholds)
{
    const Eigen::Index n = es.size();
    ModeClassification cls;
    cls.ipr.resize(static_cast<std::size_t>(n));
    cls.defect_weight.resize(static_cast<std::size_t>(n));

    Eigen::Index zero = 0;
    es.values.cwiseAbs().minCoeff(&zero);
    cls.topological = static_cast<int>(zero);

    const double zero_tol = thresholds.zero_rel_tol * std::max(es.spectral_radius(), 1.0);
    for (Eigen::Index j = 0; j < n; ++j)
        if (std::abs(es.values(j)) <= zero_tol)
            cls.zero_candidates.push_back(static_cast<int>(j));
    if (cls.zero_candidates.empty())
        cls.zero_candidates.push_back(cls.topological);
    cls.degenerate_zero = cls.zero_candidates.size() > 1;

    const double ipr_cut = thresholds.ipr_factor / static_cast<double>(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto v = es.vectors.col(j);
        const double p = v.array().square().square().sum();
        const double w = defect_weight(v, center, thresholds.defect_half_width);
        cls.ipr[static_cast<std::size_t>(j)] = p;
        cls.defect_weight[static_cast<std::size_t>(j)] = w;
        if (j == zero)
            continue;
        if (p > ipr_cut) {
            if (w > thresholds.defect_mass)
                cls.trivial_defect.push_back(static_cast<int>(j));
            else
                cls.emergent_localized.push_back(static_cast<int>(j));
        } else {
            cls.extended.push_back(static_cast<int>(j));
        }
    }
    return cls;
}

DefectTriplet defect_triplet(const EigenSystem& es, const ModeClassification& cls)
{
    DefectTriplet t;
    t.topological = cls.topological;

    std::vector<int> candidates = cls.trivial_defect;
    std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        return cls.defect_weight[static_cast<std::size_t>(a)] > cls.defect_weight[static_cast<std::size_t>(b)];
    });
    if (candidates.size() > 2)
        candidates.resize(2);

    if (candidates.size() == 2) {
        if (es.values(candidates[0]) > es.values(candidates[1]))
            std::swap(candidates[0], candidates[1]);
        t.trivial_lower = candidates[0];
        t.trivial_upper = candidates[1];
    } else if (candidates.size() == 1) {
        if (es.values(candidates[0]) < 0.0)
            t.trivial_lower = candidates[0];
        else
            t.trivial_upper = candidates[0];
    }
    return t;
}

} // namespace sshbp
