#include "tverify/report_io.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <system_error>

namespace tverify {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::size_t row) {
    // Leading whitespace tolerated; the value must consume the rest.
    std::size_t begin = text.find_first_not_of(" \t");
    if (begin == std::string_view::npos) throw CsvError("empty numeric field", row);
    std::size_t end = text.find_last_not_of(" \t\r");
    text = text.substr(begin, end - begin + 1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        // from_chars does not accept "inf"/"nan" spellings everywhere.
        if (text == "inf") return std::numeric_limits<double>::infinity();
        if (text == "-inf") return -std::numeric_limits<double>::infinity();
        throw CsvError("malformed numeric field '" + std::string(text) + "'", row);
    }
    return value;
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "t,x,y,z\n";
    out.reserve(out.size() + traj.times.size() * 64);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out += format_double(traj.times[i]);
        out += ',';
        out += format_double(traj.states[i].x);
        out += ',';
        out += format_double(traj.states[i].y);
        out += ',';
        out += format_double(traj.states[i].z);
        out += '\n';
    }
    return out;
}

ParsedTrajectory trajectory_from_csv(std::string_view text) {
    ParsedTrajectory out;
    std::size_t row = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++row;
        if (row == 1) {
            if (line != "t,x,y,z") throw CsvError("expected header 't,x,y,z'", row);
            continue;
        }
        if (line.empty()) continue;
        double vals[4];
        std::size_t field = 0, fpos = 0;
        while (field < 4) {
            std::size_t comma = line.find(',', fpos);
            std::string_view cell = comma == std::string_view::npos ? line.substr(fpos)
                                                                    : line.substr(fpos, comma - fpos);
            vals[field++] = parse_double(cell, row);
            if (comma == std::string_view::npos) break;
            fpos = comma + 1;
        }
        if (field != 4) throw CsvError("expected 4 fields", row);
        out.times.push_back(vals[0]);
        out.states.push_back({vals[1], vals[2], vals[3]});
    }
    if (out.times.empty()) throw CsvError("no data rows", out.times.size() + 1);
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::random_device rd;
    fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(rd()));
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw SimError("cannot open temp file for " + path.string());
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw SimError("short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw SimError("cannot rename temp file onto " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SimError("cannot open " + path.string());
    std::string out((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return out;
}

std::string_view accumulation_name(Accumulation a) {
    switch (a) {
        case Accumulation::None: return "none";
        case Accumulation::SqrtSteps: return "sqrt_steps";
        case Accumulation::Steps: return "steps";
    }
    return "?";
}

std::optional<Accumulation> accumulation_from_name(std::string_view name) {
    if (name == "none") return Accumulation::None;
    if (name == "sqrt_steps") return Accumulation::SqrtSteps;
    if (name == "steps") return Accumulation::Steps;
    return std::nullopt;
}

nlohmann::ordered_json config_to_json(const PipelineConfig& cfg) {
    nlohmann::ordered_json j;
    j["params"] = {{"sigma", cfg.params.sigma}, {"r", cfg.params.r}, {"b", cfg.params.b}};
    j["ic"] = {cfg.ic.x, cfg.ic.y, cfg.ic.z};
    j["dt"] = cfg.dt;
    j["t_max"] = cfg.t_max;
    j["eps_settle"] = cfg.eps_settle;
    j["t_hold"] = cfg.t_hold;
    j["margin_eta"] = cfg.margin_eta;
    nlohmann::ordered_json ladder = nlohmann::ordered_json::array();
    for (Precision m : cfg.ladder) ladder.push_back(std::string(precision_name(m)));
    j["ladder"] = ladder;
    nlohmann::ordered_json variants = nlohmann::ordered_json::array();
    for (RhsVariant v : cfg.variants) variants.push_back(std::string(variant_name(v)));
    j["variants"] = variants;
    j["lyapunov"] = {{"d0", cfg.lyapunov.d0},
                     {"renorm_interval", cfg.lyapunov.renorm_interval},
                     {"ensemble_size", cfg.lyapunov.ensemble_size},
                     {"seed", cfg.lyapunov.seed},
                     {"min_wander", cfg.lyapunov.min_wander}};
    j["record_stride"] = cfg.record_stride;
    j["accumulation"] = std::string(accumulation_name(cfg.accumulation));
    j["box"] = {{"x_min", cfg.box.x_min}, {"x_max", cfg.box.x_max}, {"y_min", cfg.box.y_min},
                {"y_max", cfg.box.y_max}, {"z_min", cfg.box.z_min}, {"z_max", cfg.box.z_max}};
    return j;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
    PipelineConfig cfg;
    if (j.contains("params")) {
        const auto& p = j.at("params");
        cfg.params.sigma = p.value("sigma", cfg.params.sigma);
        cfg.params.r = p.value("r", cfg.params.r);
        cfg.params.b = p.value("b", cfg.params.b);
    }
    if (j.contains("ic")) {
        const auto& ic = j.at("ic");
        if (!ic.is_array() || ic.size() != 3) throw DomainError("config: ic must be [x, y, z]");
        cfg.ic = {ic[0].get<double>(), ic[1].get<double>(), ic[2].get<double>()};
    }
    cfg.dt = j.value("dt", cfg.dt);
    cfg.t_max = j.value("t_max", cfg.t_max);
    cfg.eps_settle = j.value("eps_settle", cfg.eps_settle);
    cfg.t_hold = j.value("t_hold", cfg.t_hold);
    cfg.margin_eta = j.value("margin_eta", cfg.margin_eta);
    if (j.contains("ladder")) {
        cfg.ladder.clear();
        for (const auto& m : j.at("ladder")) {
            const auto mode = precision_from_name(m.get<std::string>());
            if (!mode) throw DomainError("config: unknown precision '" + m.get<std::string>() + "'");
            cfg.ladder.push_back(*mode);
        }
    }
    if (j.contains("variants")) {
        cfg.variants.clear();
        for (const auto& v : j.at("variants")) {
            const auto var = variant_from_name(v.get<std::string>());
            if (!var) throw DomainError("config: unknown variant '" + v.get<std::string>() + "'");
            cfg.variants.push_back(*var);
        }
    }
    if (j.contains("lyapunov")) {
        const auto& l = j.at("lyapunov");
        cfg.lyapunov.d0 = l.value("d0", cfg.lyapunov.d0);
        cfg.lyapunov.renorm_interval = l.value("renorm_interval", cfg.lyapunov.renorm_interval);
        cfg.lyapunov.ensemble_size = l.value("ensemble_size", cfg.lyapunov.ensemble_size);
        cfg.lyapunov.seed = l.value("seed", cfg.lyapunov.seed);
        cfg.lyapunov.min_wander = l.value("min_wander", cfg.lyapunov.min_wander);
    }
    cfg.record_stride = j.value("record_stride", cfg.record_stride);
    if (j.contains("accumulation")) {
        const auto acc = accumulation_from_name(j.at("accumulation").get<std::string>());
        if (!acc) throw DomainError("config: unknown accumulation mode");
        cfg.accumulation = *acc;
    }
    if (j.contains("box")) {
        const auto& b = j.at("box");
        cfg.box.x_min = b.value("x_min", cfg.box.x_min);
        cfg.box.x_max = b.value("x_max", cfg.box.x_max);
        cfg.box.y_min = b.value("y_min", cfg.box.y_min);
        cfg.box.y_max = b.value("y_max", cfg.box.y_max);
        cfg.box.z_min = b.value("z_min", cfg.box.z_min);
        cfg.box.z_max = b.value("z_max", cfg.box.z_max);
    }
    return cfg;
}

nlohmann::ordered_json report_to_json(const ValidityReport& report) {
    nlohmann::ordered_json j;
    j["conclusion"] = std::string(conclusion_name(report.conclusion));
    if (report.final_rung)
        j["final_rung"] = std::string(precision_name(*report.final_rung));
    else
        j["final_rung"] = nullptr;
    nlohmann::ordered_json rungs = nlohmann::ordered_json::array();
    for (const RungReport& r : report.per_rung) {
        nlohmann::ordered_json jr;
        jr["mode"] = std::string(precision_name(r.mode));
        jr["budget"] = {{"delta0_roundoff", r.budget.delta0_roundoff},
                        {"delta0_truncation", r.budget.delta0_truncation},
                        {"dominant", std::string(dominant_name(r.budget.dominant))},
                        {"lambda", r.budget.lambda},
                        {"delta_t", r.budget.delta_t},
                        {"delta_final", r.budget.delta_final},
                        {"attractor_diagonal", r.budget.attractor_diagonal},
                        {"margin_eta", r.budget.margin_eta},
                        {"verdict", std::string(verdict_name(r.budget.verdict))}};
        nlohmann::ordered_json vars = nlohmann::ordered_json::array();
        for (const VariantOutcome& v : r.variants) {
            vars.push_back({{"variant", std::string(variant_name(v.variant))},
                            {"destiny", std::string(destiny_name(v.destiny))},
                            {"settle_time", v.settle_time}});
        }
        jr["variants"] = vars;
        jr["variants_agree"] = r.variants_agree;
        rungs.push_back(jr);
    }
    j["per_rung"] = rungs;
    j["notes"] = report.notes;
    return j;
}

} // namespace tverify
