#include "sshbp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sshbp/analysis.hpp"
#include "sshbp/config.hpp"
#include "sshbp/errors.hpp"
#include "sshbp/output.hpp"
#include "sshbp/rng.hpp"

#ifndef SSHBP_VERSION
#define SSHBP_VERSION "0.0.0"
#endif

namespace sshbp::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Context {
    std::string subcommand;
    RunConfig cfg;
    std::string hash;
    int threads = 0;
    bool delta_given = false;
    std::string counts_path;
    std::ostream* log = nullptr;
};

std::string header(const Context& ctx)
{
    return "# sshbp " SSHBP_VERSION "\n# subcommand: " + ctx.subcommand + "\n# config_hash: " + ctx.hash +
           "\n# master_seed: " + std::to_string(ctx.cfg.master_seed) + "\n";
}

json json_header(const Context& ctx)
{
    json j;
    j["version"] = SSHBP_VERSION;
    j["subcommand"] = ctx.subcommand;
    j["config_hash"] = ctx.hash;
    j["master_seed"] = ctx.cfg.master_seed;
    return j;
}

std::string fmt(double x) { return format_double(x); }

std::string delta_tag(double delta) { return "d" + fmt(delta); }

// Geometry used by single-lattice subcommands: clean at delta = 0, otherwise
// realization 0 of the master seed.
std::optional<DisorderRealization> single_realization(const RunConfig& cfg, double delta)
{
    if (delta == 0.0)
        return std::nullopt;
    return draw_disorder(cfg.lattice, delta, realization_seed(cfg.master_seed, 0), cfg.disorder_model);
}

BandSystems bands_for(const RunConfig& cfg, double delta)
{
    const auto real = single_realization(cfg, delta);
    return solve_bands(cfg.lattice, real ? &*real : nullptr);
}

// ---------------------------------------------------------------------------

void write_eigenmodes(const Context& ctx, OutputSet& out)
{
    const auto& spec = ctx.cfg.lattice;
    const BandSystems bands = bands_for(ctx.cfg, ctx.cfg.delta);
    const EigenSystem es = symmetrize_degenerate(bands[ctx.cfg.band], spec.center());
    const ModeClassification cls = classify_modes(es, spec);
    const DefectTriplet triplet = defect_triplet(es, cls);

    std::string csv = header(ctx) + "# band: " + std::string(to_string(ctx.cfg.band)) + "\n# delta: " +
                      fmt(ctx.cfg.delta) + "\nindex,energy,class,ipr,parity\n";
    for (Eigen::Index j = 0; j < es.size(); ++j) {
        csv += std::to_string(j) + "," + fmt(es.values(j)) + "," +
               std::string(to_string(cls.class_of(static_cast<int>(j)))) + "," +
               fmt(cls.ipr[static_cast<std::size_t>(j)]) + "," +
               std::string(to_string(parity(es.vectors.col(j), spec.center()))) + "\n";
    }
    out.write("eigenmodes.csv", csv);

    std::string modes = header(ctx) + "# topological mode: " + std::to_string(triplet.topological) +
                        "\n# trivial_lower mode: " +
                        (triplet.trivial_lower ? std::to_string(*triplet.trivial_lower) : "missing") +
                        "\n# trivial_upper mode: " +
                        (triplet.trivial_upper ? std::to_string(*triplet.trivial_upper) : "missing") +
                        "\nsite,topological,trivial_lower,trivial_upper\n";
    const auto cell = [&](const std::optional<int>& j, Eigen::Index n) {
        return j ? fmt(es.vectors(n, *j)) : std::string();
    };
    for (Eigen::Index n = 0; n < es.size(); ++n) {
        modes += std::to_string(spec.site_label(static_cast<int>(n))) + "," +
                 fmt(es.vectors(n, triplet.topological)) + "," + cell(triplet.trivial_lower, n) + "," +
                 cell(triplet.trivial_upper, n) + "\n";
    }
    out.write("localized_modes.csv", modes);
}

void write_pump(const Context& ctx, OutputSet& out)
{
    const auto& spec = ctx.cfg.lattice;
    const BandSystems bands = bands_for(ctx.cfg, ctx.cfg.delta);
    const PumpTrajectory traj = pump_trajectory(bands.pump, center_input(spec), ctx.cfg.pump_steps, spec.length_m);
    double peak = 0.0;
    for (const auto& f : traj.fields)
        peak = std::max(peak, f.amplitudes.cwiseAbs2().maxCoeff());

    std::string csv = header(ctx) + "# delta: " + fmt(ctx.cfg.delta) + "\n# intensity normalized to max 1\n" +
                      "z_m,site,intensity\n";
    for (std::size_t k = 0; k < traj.fields.size(); ++k) {
        const auto& a = traj.fields[k].amplitudes;
        for (Eigen::Index n = 0; n < a.size(); ++n)
            csv += fmt(traj.z_grid[k]) + "," + std::to_string(spec.site_label(static_cast<int>(n))) + "," +
                   fmt(std::norm(a(n)) / peak) + "\n";
    }
    out.write("pump.csv", csv);
}

std::string map_csv(const Context& ctx, const Eigen::MatrixXd& map, int first_label, const std::string& note)
{
    std::string csv = header(ctx) + note + "signal_site,idler_site,probability\n";
    for (Eigen::Index s = 0; s < map.rows(); ++s)
        for (Eigen::Index i = 0; i < map.cols(); ++i)
            csv += std::to_string(first_label + s) + "," + std::to_string(first_label + i) + "," + fmt(map(s, i)) +
                   "\n";
    return csv;
}

struct SingleRun {
    BandSystems bands;
    BiphotonAmplitude output; ///< at z = length_m
};

SingleRun simulate_output(const RunConfig& cfg, double delta)
{
    SingleRun run{bands_for(cfg, delta), {}};
    const auto bp = evolve_biphoton(run.bands.pump, center_input(cfg.lattice), run.bands.signal, run.bands.idler,
                                    cfg.lattice.gamma, {cfg.lattice.length_m}, cfg.biphoton_options());
    run.output = bp.front();
    return run;
}

void write_correlation(const Context& ctx, OutputSet& out, double delta, const BiphotonAmplitude& bp)
{
    const auto& spec = ctx.cfg.lattice;
    const int hw = ctx.cfg.window_half_width;
    const Eigen::MatrixXd map = correlation_map(bp);
    const std::string note = "# delta: " + fmt(delta) + "\n# z_m: " + fmt(bp.z_m) + "\n";
    out.write("correlation_" + delta_tag(delta) + ".csv", map_csv(ctx, map, spec.site_label(0), note));
    out.write("correlation_window_" + delta_tag(delta) + ".csv",
              map_csv(ctx, central_window(map, spec.center(), hw), -hw, note));
}

json populations_json(const ModePopulations& p)
{
    json j;
    j["p_TpTp"] = p.p_TpTp;
    j["p_Tr1Tr2"] = p.p_Tr1Tr2;
    j["p_Tr2Tr1"] = p.p_Tr2Tr1;
    j["p_Tr1Tr1"] = p.p_Tr1Tr1;
    j["p_Tr2Tr2"] = p.p_Tr2Tr2;
    j["p_TpTr_any"] = p.p_TpTr_any;
    j["residual"] = p.residual;
    j["missing_modes"] = p.missing_modes;
    return j;
}

void write_biphoton(const Context& ctx, OutputSet& out)
{
    const auto& cfg = ctx.cfg;
    const auto& spec = cfg.lattice;
    const double delta = cfg.delta;
    const BandSystems bands = bands_for(cfg, delta);

    std::vector<double> checkpoints;
    for (double f : cfg.checkpoint_fractions)
        checkpoints.push_back(f * spec.length_m);
    std::vector<double> grid = checkpoints;
    for (int k = 1; k <= cfg.population_steps; ++k)
        grid.push_back(spec.length_m * k / cfg.population_steps);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [&](double a, double b) { return std::abs(a - b) <= 1e-12 * spec.length_m; }),
               grid.end());

    const auto modal = evolve_biphoton_modal(bands.pump, center_input(spec), bands.signal, bands.idler, spec.gamma,
                                             grid, cfg.biphoton_options());

    const BandSystems reference = cfg.mode_basis == ModeBasis::clean ? solve_bands(spec) : bands;
    const auto tri_s = defect_triplet(reference.signal, classify_modes(reference.signal, spec));
    const auto tri_i = defect_triplet(reference.idler, classify_modes(reference.idler, spec));
    const auto vec_s = defect_mode_vectors(reference.signal, tri_s);
    const auto vec_i = defect_mode_vectors(reference.idler, tri_i);

    const auto index_of = [&](double z) {
        std::size_t best = 0;
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (std::abs(grid[k] - z) < std::abs(grid[best] - z))
                best = k;
        return best;
    };

    std::string pops = header(ctx) + "# delta: " + fmt(delta) + "\n# mode_basis: " +
                       std::string(to_string(cfg.mode_basis)) +
                       "\nz_m,p_TpTp,p_Tr1Tr2,p_Tr2Tr1,p_Tr1Tr1,p_Tr2Tr2,p_TpTr_any,residual\n";
    for (const auto& m : modal) {
        const auto p = mode_populations(m, bands.signal, bands.idler, vec_s, vec_i);
        pops += fmt(m.z_m) + "," + fmt(p.p_TpTp) + "," + fmt(p.p_Tr1Tr2) + "," + fmt(p.p_Tr2Tr1) + "," +
                fmt(p.p_Tr1Tr1) + "," + fmt(p.p_Tr2Tr2) + "," + fmt(p.p_TpTr_any) + "," + fmt(p.residual) + "\n";
    }
    out.write("populations.csv", pops);

    json summary = json_header(ctx);
    summary["delta"] = delta;
    summary["mode_basis"] = to_string(cfg.mode_basis);
    const auto energy = [](const EigenSystem& es, const std::optional<int>& j) {
        return j ? json(es.values(*j)) : json(nullptr);
    };
    summary["labels"] = {
        {"Tr1", "lower-energy trivial defect mode"},
        {"Tr2", "higher-energy trivial defect mode"},
        {"Tp", "zero-energy topological mode"},
        {"signal_Tr1_energy", energy(reference.signal, tri_s.trivial_lower)},
        {"signal_Tr2_energy", energy(reference.signal, tri_s.trivial_upper)},
        {"idler_Tr1_energy", energy(reference.idler, tri_i.trivial_lower)},
        {"idler_Tr2_energy", energy(reference.idler, tri_i.trivial_upper)},
    };
    json cps = json::array();
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        const std::string label(1, static_cast<char>('A' + static_cast<int>(c % 26)));
        const auto& m = modal[index_of(checkpoints[c])];
        const BiphotonAmplitude bp = to_site_basis(m, bands.signal, bands.idler);
        const Eigen::MatrixXd map = correlation_map(bp);

        std::string csv = header(ctx) + "# checkpoint: " + label + "\n# delta: " + fmt(delta) + "\n# z_m: " +
                          fmt(m.z_m) + "\n# probability = |psi|^2 normalized to unit sum\n" +
                          "signal_site,idler_site,re,im,probability\n";
        for (Eigen::Index s = 0; s < bp.psi.rows(); ++s)
            for (Eigen::Index i = 0; i < bp.psi.cols(); ++i)
                csv += std::to_string(spec.site_label(static_cast<int>(s))) + "," +
                       std::to_string(spec.site_label(static_cast<int>(i))) + "," + fmt(bp.psi(s, i).real()) +
                       "," + fmt(bp.psi(s, i).imag()) + "," + fmt(map(s, i)) + "\n";
        out.write("biphoton_" + label + ".csv", csv);

        json cp = populations_json(mode_populations(m, bands.signal, bands.idler, vec_s, vec_i));
        cp["label"] = label;
        cp["z_m"] = m.z_m;
        cp["norm"] = m.phi.norm();
        cps.push_back(cp);
    }
    summary["checkpoints"] = cps;
    out.write("populations.json", summary.dump(2) + "\n");

    write_correlation(ctx, out, delta, to_site_basis(modal[index_of(spec.length_m)], bands.signal, bands.idler));
}

Eigen::MatrixXd load_counts(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("counts", "cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError("counts", "non-numeric entry '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ValidationError("counts", "rows have different lengths");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ValidationError("counts", "empty count matrix");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

void write_schmidt(const Context& ctx, OutputSet& out)
{
    std::vector<std::pair<std::string, SchmidtSpectrum>> spectra;
    if (!ctx.counts_path.empty()) {
        spectra.emplace_back("counts", schmidt(load_counts(ctx.counts_path), SchmidtSource::sqrt_counts));
    } else {
        const SingleRun run = simulate_output(ctx.cfg, ctx.cfg.delta);
        const Eigen::MatrixXd map = correlation_map(run.output);
        spectra.emplace_back(
            "window",
            schmidt(central_window(map, ctx.cfg.lattice.center(), ctx.cfg.window_half_width),
                    SchmidtSource::sqrt_counts));
        spectra.emplace_back("full", schmidt(run.output.psi, SchmidtSource::amplitude));
    }

    std::string csv = header(ctx) + "# delta: " + fmt(ctx.cfg.delta) + "\nscope,source,index,coefficient,raw_singular\n";
    json summary = json_header(ctx);
    summary["delta"] = ctx.cfg.delta;
    for (const auto& [scope, s] : spectra) {
        for (std::size_t k = 0; k < s.coefficients.size(); ++k)
            csv += scope + "," + std::string(to_string(s.source)) + "," + std::to_string(k) + "," +
                   fmt(s.coefficients[k]) + "," + fmt(s.raw_singulars[k]) + "\n";
        json j;
        j["source"] = to_string(s.source);
        j["leading"] = std::vector<double>(s.coefficients.begin(),
                                           s.coefficients.begin() + std::min<std::size_t>(5, s.coefficients.size()));
        j["count_above_0.1"] = s.count_above(0.1);
        j["schmidt_number"] = s.schmidt_number();
        summary[scope] = j;
    }
    out.write("schmidt.csv", csv);
    out.write("schmidt.json", summary.dump(2) + "\n");
}

json moment_json(const Moment& m) { return {{"mean", m.mean}, {"stderr", m.std_error}}; }

void write_ensemble(const Context& ctx, OutputSet& out)
{
    const auto& cfg = ctx.cfg;
    const std::vector<double> deltas = ctx.delta_given ? std::vector<double>{cfg.delta} : cfg.delta_grid;

    EnsembleOptions opts;
    opts.n_realizations = cfg.n_realizations;
    opts.master_seed = cfg.master_seed;
    opts.model = cfg.disorder_model;
    opts.basis = cfg.mode_basis;
    opts.threads = ctx.threads;
    opts.biphoton = cfg.biphoton_options();

    std::string csv = header(ctx) + "# disorder_model: " + std::string(to_string(cfg.disorder_model)) +
                      "\n# mode_basis: " + std::string(to_string(cfg.mode_basis)) +
                      "\ndelta,realization,observable,value\n";
    json summary = json_header(ctx);
    summary["disorder_model"] = to_string(cfg.disorder_model);
    summary["mode_basis"] = to_string(cfg.mode_basis);
    summary["n_realizations"] = cfg.n_realizations;
    json rows = json::array();

    for (double delta : deltas) {
        const auto t0 = std::chrono::steady_clock::now();
        const EnsembleStats stats = ensemble_run(cfg.lattice, delta, opts);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ctx.log != nullptr)
            *ctx.log << "ensemble delta=" << fmt(delta) << " TpTp=" << stats.p_TpTp.mean
                     << " Tr1Tr2=" << stats.p_Tr1Tr2.mean << " Tr2Tr1=" << stats.p_Tr2Tr1.mean << " (" << secs
                     << " s)\n";

        for (std::size_t k = 0; k < stats.realizations.size(); ++k) {
            const auto& r = stats.realizations[k];
            const std::string prefix = fmt(delta) + "," + std::to_string(k) + ",";
            csv += prefix + "seed," + std::to_string(r.seed) + "\n";
            if (!r.ok) {
                csv += prefix + "failed,1\n";
                continue;
            }
            const auto& p = r.populations;
            csv += prefix + "p_TpTp," + fmt(p.p_TpTp) + "\n";
            csv += prefix + "p_Tr1Tr2," + fmt(p.p_Tr1Tr2) + "\n";
            csv += prefix + "p_Tr2Tr1," + fmt(p.p_Tr2Tr1) + "\n";
            csv += prefix + "p_Tr1Tr1," + fmt(p.p_Tr1Tr1) + "\n";
            csv += prefix + "p_Tr2Tr2," + fmt(p.p_Tr2Tr2) + "\n";
            csv += prefix + "p_TpTr_any," + fmt(p.p_TpTr_any) + "\n";
            csv += prefix + "residual," + fmt(p.residual) + "\n";
            csv += prefix + "zero_mode_energy," + fmt(r.zero_mode_energy) + "\n";
        }

        json row;
        row["delta"] = delta;
        row["n_failed"] = stats.n_failed;
        row["missing_mode_count"] = stats.missing_mode_count;
        row["p_TpTp"] = moment_json(stats.p_TpTp);
        row["p_Tr1Tr2"] = moment_json(stats.p_Tr1Tr2);
        row["p_Tr2Tr1"] = moment_json(stats.p_Tr2Tr1);
        row["p_Tr1Tr1"] = moment_json(stats.p_Tr1Tr1);
        row["p_Tr2Tr2"] = moment_json(stats.p_Tr2Tr2);
        row["p_TpTr_any"] = moment_json(stats.p_TpTr_any);
        row["residual"] = moment_json(stats.residual);
        row["max_zero_mode_energy"] =
            stats.zero_mode_energies.empty()
                ? 0.0
                : *std::max_element(stats.zero_mode_energies.begin(), stats.zero_mode_energies.end());
        rows.push_back(row);
    }
    summary["deltas"] = rows;
    out.write("ensemble.csv", csv);
    out.write("ensemble_summary.json", summary.dump(2) + "\n");
}

void write_sweep(const Context& ctx, OutputSet& out)
{
    const auto& cfg = ctx.cfg;
    const SweepTable table = energy_sweep(cfg.lattice, cfg.sweep_delta_grid, cfg.sweep_realizations, cfg.master_seed,
                                          cfg.disorder_model, ctx.threads, cfg.band);
    std::string csv = header(ctx) + "# band: " + std::string(to_string(cfg.band)) +
                      "\ndelta,realization,mode,energy,class,ipr\n";
    for (const auto& e : table.entries)
        for (Eigen::Index j = 0; j < e.energies.size(); ++j)
            csv += fmt(e.delta) + "," + std::to_string(e.realization) + "," + std::to_string(j) + "," +
                   fmt(e.energies(j)) + "," + std::string(to_string(e.classes[static_cast<std::size_t>(j)])) + "," +
                   fmt(e.ipr[static_cast<std::size_t>(j)]) + "\n";
    out.write("sweep.csv", csv);

    json summary = json_header(ctx);
    summary["band"] = to_string(cfg.band);
    json rows = json::array();
    for (std::size_t d = 0; d < table.delta_grid.size(); ++d)
        rows.push_back({{"delta", table.delta_grid[d]},
                        {"median_trivial_gap", table.median_gap[d]},
                        {"max_zero_mode_energy", table.max_zero_energy[d]}});
    summary["deltas"] = rows;
    out.write("sweep_summary.json", summary.dump(2) + "\n");
}

void write_paper_repro(Context& ctx, OutputSet& out)
{
    const double saved = ctx.cfg.delta;
    ctx.cfg.delta = 0.0;
    write_eigenmodes(ctx, out);
    write_pump(ctx, out);
    write_biphoton(ctx, out);
    write_schmidt(ctx, out);
    for (double delta : {0.2, 0.4})
        write_correlation(ctx, out, delta, simulate_output(ctx.cfg, delta).output);
    ctx.cfg.delta = saved;
    ctx.delta_given = false;
    write_ensemble(ctx, out);
    write_sweep(ctx, out);
}

const std::vector<std::pair<std::string, std::string>>& subcommands()
{
    static const std::vector<std::pair<std::string, std::string>> subs = {
        {"eigenmodes", "band spectrum, mode classes and defect-mode profiles"},
        {"pump", "classical pump intensity along z"},
        {"biphoton", "biphoton checkpoints, correlation maps and mode populations"},
        {"schmidt", "Schmidt coefficients of the output state or of a count matrix"},
        {"ensemble", "disorder-averaged biphoton mode populations"},
        {"sweep", "eigen-energies versus disorder strength"},
        {"paper-repro", "every dataset of the default device in one directory"},
    };
    return subs;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Biphoton generation in disordered SSH waveguide lattices", "sshbp"};
    app.require_subcommand(1, 1);

    struct Flags {
        std::string config;
        std::string out_dir;
        int threads = 0;
        std::string counts;
        std::string n;
        std::map<std::string, std::string> keys;
    };
    Flags flags;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : subcommands()) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", flags.config, "configuration file (key = value)");
        sub->add_option("--out", flags.out_dir,
                        std::string("output directory (default $") + kOutputRootEnv + "/<subcommand>)");
        sub->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
        for (const auto& key : config_keys())
            sub->add_option("--" + key, flags.keys[key], "override config key " + key);
        if (name == "ensemble" || name == "sweep")
            sub->add_option("--n", flags.n, "realizations per delta");
        if (name == "schmidt")
            sub->add_option("--counts", flags.counts, "CSV count matrix to decompose instead of simulating");
        subs[name] = sub;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    Context ctx;
    for (const auto& [name, sub] : subs)
        if (sub->parsed())
            ctx.subcommand = name;
    CLI::App* sub = subs[ctx.subcommand];

    try {
        ConfigText overrides;
        for (const auto& key : config_keys())
            if (sub->count("--" + key) > 0)
                overrides.set(key, flags.keys[key]);
        if (const CLI::Option* n_opt = sub->get_option_no_throw("--n"); n_opt != nullptr && n_opt->count() > 0) {
            overrides.set(ctx.subcommand == "sweep" ? "sweep_realizations" : "n_realizations", flags.n);
        }

        RunConfig cfg;
        if (!flags.config.empty())
            cfg = apply_config(ConfigText::load(flags.config), cfg);
        cfg = apply_config(overrides, cfg);
        cfg.validate();

        ctx.cfg = cfg;
        ctx.hash = config_hash(cfg);
        ctx.threads = flags.threads;
        ctx.delta_given = sub->count("--delta") > 0;
        ctx.counts_path = flags.counts;
        ctx.log = &out;

        fs::path dir = flags.out_dir;
        if (dir.empty()) {
            const char* root = std::getenv(kOutputRootEnv);
            dir = fs::path(root != nullptr && *root != '\0' ? root : "sshbp_out") / ctx.subcommand;
        }

        OutputSet files(dir);
        files.write(ctx.subcommand + ".resolved.config",
                    "# sshbp " SSHBP_VERSION "\n# config_hash: " + ctx.hash + "\n" + serialize(cfg));
        if (ctx.subcommand == "eigenmodes")
            write_eigenmodes(ctx, files);
        else if (ctx.subcommand == "pump")
            write_pump(ctx, files);
        else if (ctx.subcommand == "biphoton")
            write_biphoton(ctx, files);
        else if (ctx.subcommand == "schmidt")
            write_schmidt(ctx, files);
        else if (ctx.subcommand == "ensemble")
            write_ensemble(ctx, files);
        else if (ctx.subcommand == "sweep")
            write_sweep(ctx, files);
        else
            write_paper_repro(ctx, files);
        files.commit();
        out << "wrote " << files.written().size() << " files to " << dir.string() << "\n";
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace sshbp::cli
