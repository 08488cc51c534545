#include "gi_channel/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include <fmt/format.h>

#include "gi_channel/errors.hpp"

namespace gi_channel {

std::string format_number(double v) { return fmt::format("{}", v); }

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    return out;
}

struct FieldUnits {
    ConcentrationUnit starch;
    ConcentrationUnit glucose;
    const char* starch_col;
    const char* glucose_col;
};

FieldUnits field_units(OutputUnits u) {
    if (u == OutputUnits::paper) {
        return {ConcentrationUnit::g_per_l, ConcentrationUnit::mg_per_dl, "starch_g_l", "glucose_mg_dl"};
    }
    return {ConcentrationUnit::kg_per_m3, ConcentrationUnit::kg_per_m3, "starch_kg_m3", "glucose_kg_m3"};
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::filesystem::path& file) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}: malformed number '{}'", file.string(), s));
    }
}

}  // namespace

void write_fields_csv(const std::filesystem::path& path, const RunResult& run, OutputUnits units,
                      const std::optional<AnalyticChannelParams>& analytic, bool clamp_analytic) {
    auto out = open_out(path);
    const FieldUnits fu = field_units(units);
    out << "time_s,x_m," << fu.starch_col << ',' << fu.glucose_col << ",mode\n";
    const auto centers = run.grid.centers();
    for (const auto& s : run.snapshots) {
        const std::string t = format_number(s.time);
        for (std::size_t i = 0; i < centers.size(); ++i) {
            out << t << ',' << format_number(centers[i]) << ','
                << format_number(convert_concentration(s.starch.values[i], ConcentrationUnit::kg_per_m3, fu.starch))
                << ','
                << format_number(convert_concentration(s.glucose.values[i], ConcentrationUnit::kg_per_m3, fu.glucose))
                << ",numeric\n";
        }
    }
    if (analytic) {
        for (const auto& s : run.snapshots) {
            if (s.time <= 0.0) continue;
            const AnalyticProfile prof = analytic_profile(run.grid, s.time, *analytic, clamp_analytic);
            const std::string t = format_number(s.time);
            for (std::size_t i = 0; i < centers.size(); ++i) {
                out << t << ',' << format_number(centers[i]) << ','
                    << format_number(convert_concentration(prof.starch[i], ConcentrationUnit::kg_per_m3, fu.starch))
                    << ','
                    << format_number(convert_concentration(prof.glucose[i], ConcentrationUnit::kg_per_m3, fu.glucose))
                    << ",analytic\n";
            }
        }
    }
}

void write_series_csv(const std::filesystem::path& path, const RunResult& run) {
    auto out = open_out(path);
    out << "time_s,gastric_g,absorbed_g,outflow_g,blood_glucose_mg_dl,produced_g\n";
    for (const auto& s : run.snapshots) {
        out << format_number(s.time) << ',' << format_number(s.gastric.mass * 1e3) << ','
            << format_number(s.absorbed_mass * 1e3) << ',' << format_number(s.outflow_mass * 1e3) << ','
            << format_number(s.blood.G) << ',' << format_number(s.produced_glucose_mass * 1e3) << '\n';
    }
}

nlohmann::json to_json(const ChannelReport& r) {
    const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["path_loss_starch_db"] = opt(r.path_loss_starch_db);
    j["path_loss_glucose_db"] = opt(r.path_loss_glucose_db);
    j["t50"] = opt(r.t50);
    j["delay"] = opt(r.delay);
    j["benchmark"] = r.benchmark;
    j["peak_si_glucose"] = r.peak_si_glucose;
    j["peak_blood_glucose"] = r.peak_blood_glucose;
    j["time_to_blood_peak"] = r.time_to_blood_peak;
    j["time_to_blood_restabilize"] = opt(r.time_to_blood_restabilize);
    j["mass_audit_residual"] = r.mass_audit_residual;
    j["x1"] = r.x1;
    j["x2"] = r.x2;
    j["t_eval"] = r.t_eval;
    j["absorbed_fraction"] = r.absorbed_fraction;
    j["digested_fraction"] = r.digested_fraction;
    j["notes"] = r.notes;
    return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot open '{}' for hashing", path.string()));
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
    std::array<char, 1 << 14> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json make_manifest(std::string_view command, const nlohmann::json& parameters,
                             const std::vector<std::filesystem::path>& inputs) {
    nlohmann::json m;
    m["tool"] = std::string(tool_name);
    m["version"] = std::string(tool_version);
    m["command"] = std::string(command);
    m["timestamp"] = utc_timestamp();
    m["parameters"] = parameters;
    nlohmann::json hashes = nlohmann::json::object();
    for (const auto& p : inputs) hashes[p.string()] = sha256_file(p);
    m["input_files"] = hashes;
    return m;
}

RunResult read_run_directory(const std::filesystem::path& dir, RunSetup* setup_out) {
    const nlohmann::json manifest = read_json(dir / manifest_file);
    if (!manifest.contains("parameters")) throw ConfigError("manifest has no 'parameters' block");
    RunSetup setup;
    apply_resolved_parameters(setup, manifest.at("parameters"));
    validate(setup);

    RunResult run{.grid = Grid1D(setup.physiology.si_length, setup.solver.cell_count),
                  .area = setup.physiology.cross_section_area(),
                  .meal_mass = setup.meal.carb_mass,
                  .bergman = setup.bergman,
                  .transport = transport_coefficients(setup.physiology, setup.radius),
                  .dt = 0.0,
                  .steps = 0,
                  .snapshots = {}};

    const auto series_path = dir / series_file;
    std::ifstream series(series_path);
    if (!series) throw ConfigError(fmt::format("cannot open '{}'", series_path.string()));
    std::string line;
    std::getline(series, line);
    while (std::getline(series, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() < 6) throw ConfigError(fmt::format("{}: short row", series_path.string()));
        SimulationState s;
        s.time = parse_double(cols[0], series_path);
        s.gastric.mass = parse_double(cols[1], series_path) * 1e-3;
        s.gastric.rate_gamma = gamma_from_half_time(setup.meal.half_emptying_time);
        s.gastric.emptied_cumulative = setup.meal.carb_mass - s.gastric.mass;
        s.absorbed_mass = parse_double(cols[2], series_path) * 1e-3;
        s.outflow_mass = parse_double(cols[3], series_path) * 1e-3;
        s.blood = BloodState{.G = parse_double(cols[4], series_path), .X = 0.0, .I = 0.0, .time = s.time};
        s.produced_glucose_mass = parse_double(cols[5], series_path) * 1e-3;
        run.snapshots.push_back(std::move(s));
    }

    const auto fields_path = dir / fields_file;
    std::ifstream fields(fields_path);
    if (!fields) throw ConfigError(fmt::format("cannot open '{}'", fields_path.string()));
    std::getline(fields, line);
    const auto header = split_csv(line);
    if (header.size() != 5) throw ConfigError(fmt::format("{}: unexpected header", fields_path.string()));
    const OutputUnits units = header[2] == "starch_g_l" ? OutputUnits::paper : OutputUnits::si;
    const FieldUnits fu = field_units(units);
    const std::size_t n = run.grid.cell_count();
    std::size_t row = 0;
    while (std::getline(fields, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv(line);
        if (cols.size() != 5) throw ConfigError(fmt::format("{}: malformed row", fields_path.string()));
        if (cols[4] != "numeric") continue;
        const std::size_t snap = row / n;
        if (snap >= run.snapshots.size()) throw ConfigError("fields.csv has more snapshots than series.csv");
        auto& s = run.snapshots[snap];
        if (s.starch.values.empty()) {
            s.starch.values.resize(n);
            s.glucose.values.resize(n);
        }
        s.starch.values[row % n] =
            convert_concentration(parse_double(cols[2], fields_path), fu.starch, ConcentrationUnit::kg_per_m3);
        s.glucose.values[row % n] =
            convert_concentration(parse_double(cols[3], fields_path), fu.glucose, ConcentrationUnit::kg_per_m3);
        ++row;
    }
    if (row != n * run.snapshots.size()) {
        throw ConfigError(fmt::format("fields.csv has {} numeric rows, expected {}", row, n * run.snapshots.size()));
    }
    if (setup_out) *setup_out = setup;
    return run;
}

}  // namespace gi_channel
