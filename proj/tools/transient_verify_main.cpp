// transient-verify: integrate the Lorenz system under controlled floating-point
// precision and decide whether the computed destiny can be trusted.
//
// Exit codes: 0 success/Validated, 1 usage error, 2 divergence, 3 not validated.

#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "tverify/report_io.hpp"
#include "tverify/svg_plot.hpp"
#include "tverify/version.hpp"

namespace tv = tverify;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitNotValidated = 3;

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

tv::State3 parse_ic(const std::string& text) {
    tv::State3 ic;
    double* fields[3] = {&ic.x, &ic.y, &ic.z};
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t comma = text.find(',', pos);
        const std::string cell = comma == std::string::npos ? text.substr(pos)
                                                            : text.substr(pos, comma - pos);
        try {
            *fields[i] = std::stod(cell);
        } catch (const std::exception&) {
            throw tv::DomainError("--ic expects x,y,z (got '" + text + "')");
        }
        if (i < 2) {
            if (comma == std::string::npos) throw tv::DomainError("--ic expects three comma-separated values");
            pos = comma + 1;
        } else if (comma != std::string::npos) {
            throw tv::DomainError("--ic expects exactly three values");
        }
    }
    return ic;
}

struct SimulateArgs {
    double sigma = 10.0, r = 20.0, b = 8.0 / 3.0;
    std::string ic = "2,1,5.42857";
    double dt = 1e-3, t_max = 60.0;
    std::int64_t stride = 100;
    std::string precision = "p32";
    std::string variant = "ya";
    double eps_settle = 1.0, t_hold = 5.0;
    bool stop_on_settle = false;
    std::string out = "trajectory.csv";
    std::string manifest_in;
};

int cmd_simulate(SimulateArgs a) {
    if (!a.manifest_in.empty()) {
        const auto j = nlohmann::json::parse(tv::read_file(a.manifest_in));
        const auto& c = j.at("config");
        a.sigma = c.at("sigma").get<double>();
        a.r = c.at("r").get<double>();
        a.b = c.at("b").get<double>();
        a.ic = c.at("ic").get<std::string>();
        a.dt = c.at("dt").get<double>();
        a.t_max = c.at("t_max").get<double>();
        a.stride = c.at("record_stride").get<std::int64_t>();
        a.precision = c.at("precision").get<std::string>();
        a.variant = c.at("variant").get<std::string>();
        a.eps_settle = c.at("eps_settle").get<double>();
        a.t_hold = c.at("t_hold").get<double>();
        a.stop_on_settle = c.at("stop_on_settle").get<bool>();
    }

    const auto mode = tv::precision_from_name(a.precision);
    if (!mode) throw tv::DomainError("--precision must be one of p32|p64|pdd");
    const auto variant = tv::variant_from_name(a.variant);
    if (!variant) throw tv::DomainError("--variant must be one of ya|yb|yc");
    const tv::State3 ic = parse_ic(a.ic);
    const tv::LorenzParams params{a.sigma, a.r, a.b};
    tv::validate_params(params);
    const tv::IntegrationSpec spec{a.dt, a.t_max, a.stride, a.stop_on_settle, a.eps_settle, a.t_hold};
    tv::validate_spec(spec);
    if (!tv::in_transient_window(params))
        std::cerr << "warning: r=" << params.r << " is outside the transient-chaos window (13.926, 24.06)\n";

    const tv::FixedPoints fps = tv::fixed_points(params);
    nlohmann::ordered_json manifest;
    manifest["command"] = "simulate";
    manifest["version"] = tv::kVersion;
    manifest["timestamp"] = timestamp_utc();
    manifest["config"] = {{"sigma", a.sigma}, {"r", a.r}, {"b", a.b}, {"ic", a.ic},
                          {"dt", a.dt}, {"t_max", a.t_max}, {"record_stride", a.stride},
                          {"precision", a.precision}, {"variant", a.variant},
                          {"eps_settle", a.eps_settle}, {"t_hold", a.t_hold},
                          {"stop_on_settle", a.stop_on_settle}};
    const std::string manifest_path = a.out + ".manifest.json";
    manifest["outputs"] = {{"trajectory_csv", a.out}, {"manifest", manifest_path}};

    int exit_code = kExitOk;
    try {
        const tv::Trajectory traj = tv::integrate(params, ic, spec, *variant, *mode, fps);
        tv::write_file_atomic(a.out, tv::trajectory_to_csv(traj));
        manifest["divergence"] = {{"occurred", false}};
        const tv::Classification cls = tv::classify_destiny(traj, fps, a.eps_settle, a.t_hold);
        manifest["result"] = {{"destiny", std::string(tv::destiny_name(cls.destiny))},
                              {"settle_time", cls.settle_time},
                              {"recorded_samples", traj.times.size()}};
        std::cout << "destiny=" << tv::destiny_name(cls.destiny)
                  << " settle_time=" << tv::format_double(cls.settle_time) << " samples="
                  << traj.times.size() << "\n";
    } catch (const tv::DivergenceError& e) {
        tv::write_file_atomic(a.out, tv::trajectory_to_csv(e.partial()));
        manifest["divergence"] = {{"occurred", true}, {"step_index", e.step_index()}, {"message", e.what()}};
        std::cerr << "divergence: " << e.what() << "\n";
        exit_code = kExitDivergence;
    }
    tv::write_file_atomic(manifest_path, manifest.dump(2) + "\n");
    return exit_code;
}

int cmd_check(const std::string& config_path, const std::string& out_path) {
    tv::PipelineConfig cfg;
    if (!config_path.empty())
        cfg = tv::config_from_json(nlohmann::json::parse(tv::read_file(config_path)));
    const tv::ValidityReport report = tv::run_validity_test(cfg);
    tv::write_file_atomic(out_path, tv::report_to_json(report).dump(2) + "\n");
    for (const auto& rung : report.per_rung) {
        std::cout << tv::precision_name(rung.mode) << ": verdict=" << tv::verdict_name(rung.budget.verdict)
                  << " delta=" << tv::format_double(rung.budget.delta_final)
                  << " extent=" << tv::format_double(rung.budget.attractor_diagonal)
                  << " agree=" << (rung.variants_agree ? "yes" : "no") << "\n";
    }
    std::cout << "conclusion=" << tv::conclusion_name(report.conclusion);
    if (report.final_rung) std::cout << " final_rung=" << tv::precision_name(*report.final_rung);
    std::cout << "\n";
    return report.conclusion == tv::Conclusion::Validated ? kExitOk : kExitNotValidated;
}

struct SweepArgs {
    int n = 100;
    std::string mode = "p32";
    std::uint64_t seed = 7;
    double sigma = 10.0, r = 20.0, b = 8.0 / 3.0;
    double dt = 1e-3, t_max = 60.0;
    double min_lifetime = 20.0;
    std::string variants = "ya,yb";
    std::string out_csv = "sweep.csv";
    std::string out_summary = "sweep_summary.json";
};

int cmd_sweep(const SweepArgs& a) {
    if (a.n <= 0) throw tv::DomainError("--n must be > 0");
    const auto mode = tv::precision_from_name(a.mode);
    if (!mode) throw tv::DomainError("--mode must be one of p32|p64|pdd");

    tv::PipelineConfig cfg;
    cfg.params = {a.sigma, a.r, a.b};
    cfg.dt = a.dt;
    cfg.t_max = a.t_max;
    cfg.variants.clear();
    std::size_t pos = 0;
    const std::string& vs = a.variants;
    while (pos <= vs.size()) {
        std::size_t comma = vs.find(',', pos);
        const std::string name = comma == std::string::npos ? vs.substr(pos) : vs.substr(pos, comma - pos);
        const auto v = tv::variant_from_name(name);
        if (!v) throw tv::DomainError("--variants: unknown variant '" + name + "'");
        cfg.variants.push_back(*v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (cfg.variants.size() < 2) throw tv::DomainError("--variants needs at least two entries");

    const tv::IntegrationSpec spec{cfg.dt, cfg.t_max, cfg.record_stride, true, cfg.eps_settle, cfg.t_hold};
    const auto samples = tv::sample_transient_ics(cfg.params, spec, cfg.variants.front(), a.n, a.seed,
                                                  a.min_lifetime, cfg.box);
    std::vector<tv::State3> ics;
    ics.reserve(samples.size());
    for (const auto& s : samples) ics.push_back(s.ic);

    const tv::SweepResult result = tv::disagreement_sweep(cfg, ics, *mode);

    std::string csv = "ic_x,ic_y,ic_z,variant,mode,destiny,settle_time\n";
    for (const auto& row : result.rows) {
        csv += tv::format_double(row.ic.x) + "," + tv::format_double(row.ic.y) + "," +
               tv::format_double(row.ic.z) + "," + std::string(tv::variant_name(row.variant)) + "," +
               std::string(tv::precision_name(*mode)) + "," + std::string(tv::destiny_name(row.destiny)) +
               "," + tv::format_double(row.settle_time) + "\n";
    }
    tv::write_file_atomic(a.out_csv, csv);

    nlohmann::ordered_json summary;
    summary["command"] = "sweep";
    summary["version"] = tv::kVersion;
    summary["mode"] = std::string(tv::precision_name(*mode));
    summary["seed"] = a.seed;
    summary["min_lifetime"] = a.min_lifetime;
    summary["n_total"] = result.n_total;
    summary["n_disagree"] = result.n_disagree;
    summary["fraction"] = result.fraction;
    tv::write_file_atomic(a.out_summary, summary.dump(2) + "\n");
    std::cout << "mode=" << tv::precision_name(*mode) << " n=" << result.n_total
              << " disagree=" << result.n_disagree << " fraction=" << tv::format_double(result.fraction)
              << "\n";
    return kExitOk;
}

struct LyapArgs {
    double sigma = 10.0, r = 20.0, b = 8.0 / 3.0;
    double dt = 1e-3, t_max = 60.0;
    double d0 = 1e-9, renorm_interval = 0.5;
    int ensemble = 10;
    std::uint64_t seed = 1234;
    double min_wander = 0.0;
    std::string out;
};

int cmd_lyapunov(const LyapArgs& a) {
    const tv::LorenzParams params{a.sigma, a.r, a.b};
    tv::validate_params(params);
    const tv::IntegrationSpec spec{a.dt, a.t_max, 100, true, 1.0, 5.0};
    const tv::LyapunovEnsemble ens = tv::lyapunov_ensemble(params, spec, tv::RhsVariant::YA, a.d0,
                                                           a.renorm_interval, a.ensemble, a.seed,
                                                           a.min_wander);
    std::cout << "lambda=" << tv::format_double(ens.aggregate.lambda)
              << " stderr=" << tv::format_double(ens.aggregate.stderr_)
              << " members=" << ens.members.size() << " min_renorms=" << ens.aggregate.n_renorms << "\n";
    if (!a.out.empty()) {
        nlohmann::ordered_json j;
        j["lambda"] = ens.aggregate.lambda;
        j["stderr"] = ens.aggregate.stderr_;
        j["n_renorms_min"] = ens.aggregate.n_renorms;
        j["renorm_interval"] = ens.aggregate.renorm_interval;
        j["d0"] = ens.aggregate.d0;
        nlohmann::ordered_json members = nlohmann::ordered_json::array();
        for (const auto& m : ens.members) {
            members.push_back({{"ic", {m.sample.ic.x, m.sample.ic.y, m.sample.ic.z}},
                               {"settle_time", m.sample.cls.settle_time},
                               {"wandering_end", m.sample.wandering_end},
                               {"lambda", m.estimate.lambda},
                               {"stderr", m.estimate.stderr_},
                               {"n_renorms", m.estimate.n_renorms}});
        }
        j["members"] = members;
        tv::write_file_atomic(a.out, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_plot(const std::vector<std::string>& files, const std::string& out) {
    std::vector<tv::PlotSeries> series;
    for (const auto& f : files) {
        tv::PlotSeries s;
        s.label = f;
        s.data = tv::trajectory_from_csv(tv::read_file(f));
        series.push_back(std::move(s));
    }
    const std::string title = series.size() == 1 ? "X(t) and Z(t)" : "X(t) and Z(t), variant comparison";
    tv::write_file_atomic(out, tv::render_xz_svg(series, title));
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Audits the reliability of transient-chaos Lorenz simulations under controlled "
                 "floating-point precision"};
    app.set_version_flag("--version", tv::kVersion);
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory and write CSV + manifest");
    simulate->add_option("--sigma", sim.sigma, "Lorenz sigma");
    simulate->add_option("--r", sim.r, "Lorenz r");
    simulate->add_option("--b", sim.b, "Lorenz b");
    simulate->add_option("--ic", sim.ic, "initial condition x,y,z");
    simulate->add_option("--dt", sim.dt, "time step");
    simulate->add_option("--t-max", sim.t_max, "integration horizon");
    simulate->add_option("--stride", sim.stride, "record every k-th step");
    simulate->add_option("--precision", sim.precision, "p32|p64|pdd");
    simulate->add_option("--variant", sim.variant, "ya|yb|yc");
    simulate->add_option("--eps-settle", sim.eps_settle, "settling ball radius");
    simulate->add_option("--t-hold", sim.t_hold, "settling hold time");
    simulate->add_flag("--stop-on-settle", sim.stop_on_settle, "halt once settled");
    simulate->add_option("--out", sim.out, "output CSV path");
    simulate->add_option("--from-manifest", sim.manifest_in, "rerun the configuration of a manifest");

    std::string check_config, check_out = "validity_report.json";
    auto* check = app.add_subcommand("check", "Run the full validity test from a JSON config");
    check->add_option("--config", check_config, "pipeline config JSON (defaults when omitted)");
    check->add_option("--out", check_out, "report output path");

    SweepArgs sweep;
    auto* sweepc = app.add_subcommand("sweep", "Cross-variant destiny sweep over sampled transients");
    sweepc->add_option("--n", sweep.n, "number of initial conditions");
    sweepc->add_option("--mode", sweep.mode, "p32|p64|pdd");
    sweepc->add_option("--seed", sweep.seed, "sampling seed");
    sweepc->add_option("--sigma", sweep.sigma, "Lorenz sigma");
    sweepc->add_option("--r", sweep.r, "Lorenz r");
    sweepc->add_option("--b", sweep.b, "Lorenz b");
    sweepc->add_option("--dt", sweep.dt, "time step");
    sweepc->add_option("--t-max", sweep.t_max, "integration horizon");
    sweepc->add_option("--min-lifetime", sweep.min_lifetime, "minimum chaotic wandering time");
    sweepc->add_option("--variants", sweep.variants, "comma-separated variant list");
    sweepc->add_option("--out-csv", sweep.out_csv, "per-IC CSV path");
    sweepc->add_option("--out-summary", sweep.out_summary, "summary JSON path");

    LyapArgs lyap;
    auto* lyapc = app.add_subcommand("lyapunov", "Ensemble largest-Lyapunov estimate");
    lyapc->add_option("--sigma", lyap.sigma, "Lorenz sigma");
    lyapc->add_option("--r", lyap.r, "Lorenz r");
    lyapc->add_option("--b", lyap.b, "Lorenz b");
    lyapc->add_option("--dt", lyap.dt, "time step");
    lyapc->add_option("--t-max", lyap.t_max, "integration horizon");
    lyapc->add_option("--d0", lyap.d0, "initial separation");
    lyapc->add_option("--renorm-interval", lyap.renorm_interval, "renormalization interval");
    lyapc->add_option("--ensemble", lyap.ensemble, "ensemble size");
    lyapc->add_option("--seed", lyap.seed, "sampling seed");
    lyapc->add_option("--min-wander", lyap.min_wander, "minimum member wandering time (0 = default)");
    lyapc->add_option("--out", lyap.out, "JSON output path");

    std::vector<std::string> plot_files;
    std::string plot_out = "plot.svg";
    auto* plot = app.add_subcommand("plot", "Render x(t)/z(t) SVG charts from trajectory CSVs");
    plot->add_option("files", plot_files, "1 or 2 trajectory CSV files")->required()->expected(1, 2);
    plot->add_option("--out", plot_out, "SVG output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (check->parsed()) return cmd_check(check_config, check_out);
        if (sweepc->parsed()) return cmd_sweep(sweep);
        if (lyapc->parsed()) return cmd_lyapunov(lyap);
        if (plot->parsed()) return cmd_plot(plot_files, plot_out);
    } catch (const tv::CsvError& e) {
        std::cerr << "error: " << e.what() << " (row " << e.row() << ")\n";
        return kExitUsage;
    } catch (const tv::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const tv::SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
