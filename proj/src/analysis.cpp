#include "sshbp/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "sshbp/errors.hpp"
#include "sshbp/propagation.hpp"
#include "sshbp/rng.hpp"

namespace sshbp {

std::string_view to_string(SchmidtSource s)
{
    return s == SchmidtSource::amplitude ? "amplitude" : "sqrt_counts";
}

int SchmidtSpectrum::count_above(double threshold) const
{
    return static_cast<int>(std::count_if(coefficients.begin(), coefficients.end(),
                                          [&](double c) { return c > threshold; }));
}

double SchmidtSpectrum::schmidt_number() const
{
    double total = 0.0;
    for (double s : raw_singulars)
        total += s * s;
    double purity = 0.0;
    for (double s : raw_singulars) {
        const double p = s * s / total;
        purity += p * p;
    }
    return 1.0 / purity;
}

SchmidtSpectrum schmidt(const Eigen::MatrixXcd& m, SchmidtSource source)
{
    if (m.size() == 0 || !(m.cwiseAbs().maxCoeff() > 0.0))
        throw ValidationError("matrix", "Schmidt decomposition of a zero matrix");

    Eigen::MatrixXcd work = m;
    if (source == SchmidtSource::sqrt_counts) {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                const auto c = m(i, j);
                if (c.imag() != 0.0 || c.real() < 0.0)
                    throw ValidationError("counts", "count matrices must be real and non-negative");
                work(i, j) = std::sqrt(c.real());
            }
    }

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(work);
    const Eigen::VectorXd& s = svd.singularValues();

    SchmidtSpectrum out;
    out.source = source;
    out.raw_singulars.assign(s.data(), s.data() + s.size());
    const double top = s(0);
    out.coefficients.reserve(out.raw_singulars.size());
    for (double v : out.raw_singulars)
        out.coefficients.push_back(v / top);
    return out;
}

SchmidtSpectrum schmidt(const Eigen::MatrixXd& m, SchmidtSource source)
{
    return schmidt(Eigen::MatrixXcd(m.cast<std::complex<double>>()), source);
}

const EigenSystem& BandSystems::operator[](Band b) const
{
    switch (b) {
    case Band::pump: return pump;
    case Band::signal: return signal;
    case Band::idler: return idler;
    }
    return pump;
}

BandSystems solve_bands(const LatticeSpec& spec, const DisorderRealization* real)
{
    const auto solve = [&](Band b) {
        CouplingProfile profile = build_couplings(spec, b);
        if (real != nullptr)
            profile = apply_disorder(profile, *real);
        return eigendecompose(hamiltonian(profile), b);
    };
    return {solve(Band::pump), solve(Band::signal), solve(Band::idler)};
}

std::string_view to_string(ModeBasis b)
{
    return b == ModeBasis::clean ? "clean" : "disordered";
}

ModeBasis parse_mode_basis(std::string_view text)
{
    if (text == "clean")
        return ModeBasis::clean;
    if (text == "disordered")
        return ModeBasis::disordered;
    throw ValidationError("mode_basis", "expected clean or disordered, got '" + std::string(text) + "'");
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn)
{
    if (n <= 0)
        return;
    if (threads <= 0)
        threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    threads = std::min(threads, n);
    if (threads == 1) {
        for (int i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

namespace {

Moment moment(const std::vector<double>& xs)
{
    Moment m;
    if (xs.empty())
        return m;
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs)
            ss += (x - m.mean) * (x - m.mean);
        const double n = static_cast<double>(xs.size());
        m.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return m;
}

} // namespace

EnsembleStats ensemble_run(const LatticeSpec& spec, double delta, const EnsembleOptions& options)
{
    spec.validate();
    if (options.n_realizations < 1)
        throw ValidationError("n_realizations", "must be at least 1");
    if (!(delta >= 0.0 && delta <= 0.5))
        throw ValidationError("delta", "must lie in [0, 0.5]");

    std::optional<DefectModeVectors> clean_s;
    std::optional<DefectModeVectors> clean_i;
    if (options.basis == ModeBasis::clean) {
        const BandSystems clean = solve_bands(spec);
        clean_s = defect_mode_vectors(clean.signal, defect_triplet(clean.signal, classify_modes(clean.signal, spec)));
        clean_i = defect_mode_vectors(clean.idler, defect_triplet(clean.idler, classify_modes(clean.idler, spec)));
    }
    const PumpField input = center_input(spec);

    std::vector<RealizationResult> results(static_cast<std::size_t>(options.n_realizations));
    parallel_for(options.n_realizations, options.threads, [&](int k) {
        RealizationResult& r = results[static_cast<std::size_t>(k)];
        r.seed = realization_seed(options.master_seed, static_cast<std::uint64_t>(k));
        try {
            const DisorderRealization real = draw_disorder(spec, delta, r.seed, options.model);
            r.resample_count = real.resample_count;
            const BandSystems bands = solve_bands(spec, &real);
            const auto modal = evolve_biphoton_modal(bands.pump, input, bands.signal, bands.idler, spec.gamma,
                                                     {spec.length_m}, options.biphoton);
            if (options.basis == ModeBasis::clean) {
                r.populations = mode_populations(modal.front(), bands.signal, bands.idler, *clean_s, *clean_i);
            } else {
                const auto vs = defect_mode_vectors(bands.signal,
                                                    defect_triplet(bands.signal, classify_modes(bands.signal, spec)));
                const auto vi = defect_mode_vectors(bands.idler,
                                                    defect_triplet(bands.idler, classify_modes(bands.idler, spec)));
                r.populations = mode_populations(modal.front(), bands.signal, bands.idler, vs, vi);
            }
            r.zero_mode_energy = bands.pump.values.cwiseAbs().minCoeff();
            r.ok = true;
        } catch (const std::exception& e) {
            r.ok = false;
            r.error = e.what();
        }
    });

    EnsembleStats stats;
    stats.delta = delta;
    stats.n_realizations = options.n_realizations;
    stats.master_seed = options.master_seed;
    stats.model = options.model;
    stats.basis = options.basis;

    std::vector<double> tp, t12, t21, t11, t22, mixed, resid;
    for (const auto& r : results) {
        if (!r.ok) {
            ++stats.n_failed;
            continue;
        }
        const auto& p = r.populations;
        tp.push_back(p.p_TpTp);
        t12.push_back(p.p_Tr1Tr2);
        t21.push_back(p.p_Tr2Tr1);
        t11.push_back(p.p_Tr1Tr1);
        t22.push_back(p.p_Tr2Tr2);
        mixed.push_back(p.p_TpTr_any);
        resid.push_back(p.residual);
        if (p.missing_modes)
            ++stats.missing_mode_count;
        stats.zero_mode_energies.push_back(r.zero_mode_energy);
    }
    if (static_cast<double>(stats.n_failed) > 0.01 * options.n_realizations) {
        std::string first;
        for (const auto& r : results)
            if (!r.ok) {
                first = r.error;
                break;
            }
        throw std::runtime_error("ensemble aborted: " + std::to_string(stats.n_failed) + " of " +
                                 std::to_string(options.n_realizations) + " realizations failed (first: " + first +
                                 ")");
    }
    stats.p_TpTp = moment(tp);
    stats.p_Tr1Tr2 = moment(t12);
    stats.p_Tr2Tr1 = moment(t21);
    stats.p_Tr1Tr1 = moment(t11);
    stats.p_Tr2Tr2 = moment(t22);
    stats.p_TpTr_any = moment(mixed);
    stats.residual = moment(resid);
    stats.realizations = std::move(results);
    return stats;
}

EnsembleStats ensemble_run(const LatticeSpec& spec, double delta, int n_realizations, std::uint64_t master_seed,
                           DisorderModel model)
{
    EnsembleOptions options;
    options.n_realizations = n_realizations;
    options.master_seed = master_seed;
    options.model = model;
    return ensemble_run(spec, delta, options);
}

double trivial_gap(const EigenSystem& es, const ModeClassification& cls)
{
    const DefectTriplet triplet = defect_triplet(es, cls);
    double gap = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& tr : {triplet.trivial_lower, triplet.trivial_upper}) {
        if (!tr)
            continue;
        any = true;
        for (Eigen::Index j = 0; j < es.size(); ++j) {
            if (j == *tr || j == cls.topological)
                continue;
            gap = std::min(gap, std::abs(es.values(j) - es.values(*tr)));
        }
    }
    return any && std::isfinite(gap) ? gap : 0.0;
}

SweepTable energy_sweep(const LatticeSpec& spec, const std::vector<double>& delta_grid, int n_per_delta,
                        std::uint64_t master_seed, DisorderModel model, int threads, Band band)
{
    spec.validate();
    if (n_per_delta < 1)
        throw ValidationError("n_realizations", "must be at least 1");
    for (double d : delta_grid)
        if (!(d >= 0.0 && d <= 0.5))
            throw ValidationError("delta_grid", "every delta must lie in [0, 0.5]");

    SweepTable table;
    table.band = band;
    table.delta_grid = delta_grid;
    const int per = n_per_delta;
    const int total = static_cast<int>(delta_grid.size()) * per;
    table.entries.resize(static_cast<std::size_t>(total));

    parallel_for(total, threads, [&](int idx) {
        SweepEntry& e = table.entries[static_cast<std::size_t>(idx)];
        e.delta = delta_grid[static_cast<std::size_t>(idx / per)];
        e.realization = idx % per;
        e.seed = realization_seed(master_seed, static_cast<std::uint64_t>(e.realization));
        const DisorderRealization real = draw_disorder(spec, e.delta, e.seed, model);
        const EigenSystem es =
            eigendecompose(hamiltonian(apply_disorder(build_couplings(spec, band), real)), band);
        const ModeClassification cls = classify_modes(es, spec);
        e.energies = es.values;
        e.ipr = cls.ipr;
        e.classes.resize(static_cast<std::size_t>(es.size()));
        for (Eigen::Index j = 0; j < es.size(); ++j)
            e.classes[static_cast<std::size_t>(j)] = cls.class_of(static_cast<int>(j));
        e.zero_mode_energy = std::abs(es.values(cls.topological));
        e.trivial_gap = trivial_gap(es, cls);
    });

    for (std::size_t d = 0; d < delta_grid.size(); ++d) {
        std::vector<double> gaps;
        double zmax = 0.0;
        for (int k = 0; k < per; ++k) {
            const auto& e = table.entries[d * static_cast<std::size_t>(per) + static_cast<std::size_t>(k)];
            gaps.push_back(e.trivial_gap);
            zmax = std::max(zmax, e.zero_mode_energy);
        }
        std::sort(gaps.begin(), gaps.end());
        const std::size_t mid = gaps.size() / 2;
        table.median_gap.push_back(gaps.size() % 2 == 1 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]));
        table.max_zero_energy.push_back(zmax);
    }
    return table;
}

} // namespace sshbp
