// qle: batch driver for the fluctuation/dissipation toolkit.
//
// Every run reads a flat key-value parameter set (config file sections are
// flattened to "section.key"), applies --set overrides, validates against the
// command's schema, computes everything in memory, and only then writes CSV +
// JSON results plus a manifest.json capturing all resolved parameters and
// input hashes.  Re-running from a manifest reproduces outputs byte-for-byte.
//
// Exit codes: 0 success, 1 numeric failure, 2 validation failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qle/applications.hpp"
#include "qle/correlations.hpp"
#include "qle/errors.hpp"
#include "qle/io.hpp"
#include "qle/simulate.hpp"
#include "qle/thermo.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Typed parameter store with schema validation and default recording.
class Params {
  public:
    void set(const std::string& key, const std::string& value) {
        provided_[key] = value;
    }

    double get_double(const std::string& key, double def) {
        allowed_.insert(key);
        auto it = provided_.find(key);
        double v = it == provided_.end() ? def : parse_double(key, it->second);
        resolved_[key] = fmt_double(v);
        return v;
    }
    double require_double(const std::string& key) {
        allowed_.insert(key);
        auto it = provided_.find(key);
        if (it == provided_.end())
            throw qle::ValidationError("missing required parameter '" + key + "'");
        double v = parse_double(key, it->second);
        resolved_[key] = fmt_double(v);
        return v;
    }
    long long get_int(const std::string& key, long long def) {
        allowed_.insert(key);
        auto it = provided_.find(key);
        long long v = def;
        if (it != provided_.end()) {
            try {
                size_t pos = 0;
                v = std::stoll(it->second, &pos);
                if (pos != it->second.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw qle::ValidationError("parameter '" + key + "': not an integer: '" +
                                           it->second + "'");
            }
        }
        resolved_[key] = std::to_string(v);
        return v;
    }
    bool get_bool(const std::string& key, bool def) {
        allowed_.insert(key);
        auto it = provided_.find(key);
        bool v = def;
        if (it != provided_.end()) {
            if (it->second == "true" || it->second == "1") v = true;
            else if (it->second == "false" || it->second == "0") v = false;
            else throw qle::ValidationError("parameter '" + key + "': expected bool, got '" +
                                            it->second + "'");
        }
        resolved_[key] = v ? "true" : "false";
        return v;
    }
    std::string get_string(const std::string& key, const std::string& def) {
        allowed_.insert(key);
        auto it = provided_.find(key);
        std::string v = it == provided_.end() ? def : it->second;
        resolved_[key] = v;
        return v;
    }
    std::string require_string(const std::string& key) {
        allowed_.insert(key);
        auto it = provided_.find(key);
        if (it == provided_.end())
            throw qle::ValidationError("missing required parameter '" + key + "'");
        resolved_[key] = it->second;
        return it->second;
    }
    bool has(const std::string& key) {
        allowed_.insert(key);
        return provided_.count(key) != 0;
    }

    // Reject keys the command never consulted.
    void check_unknown() const {
        for (const auto& [k, v] : provided_)
            if (!allowed_.count(k))
                throw qle::ValidationError("unknown parameter '" + k + "'");
    }

    const std::map<std::string, std::string>& resolved() const { return resolved_; }

  private:
    static double parse_double(const std::string& key, const std::string& s) {
        try {
            size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw qle::ValidationError("parameter '" + key + "': not a number: '" + s + "'");
        }
    }

    std::map<std::string, std::string> provided_;
    std::map<std::string, std::string> resolved_;
    std::set<std::string> allowed_;
};

void load_config(const std::string& file, Params& p) {
    std::ifstream in(file);
    if (!in) throw qle::ValidationError("cannot open config file " + file);
    std::string line, section;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t a = line.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        size_t b = line.find_last_not_of(" \t");
        line = line.substr(a, b - a + 1);
        if (line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw qle::ValidationError(file + ":" + std::to_string(lineno) +
                                       ": expected key = value");
        auto trim = [](std::string s) {
            size_t i = s.find_first_not_of(" \t");
            if (i == std::string::npos) return std::string();
            size_t j = s.find_last_not_of(" \t");
            return s.substr(i, j - i + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw qle::ValidationError(file + ":" + std::to_string(lineno) +
                                                    ": empty key");
        if (!section.empty()) key = section + "." + key;
        p.set(key, val);
    }
}

// A run accumulates outputs in memory and flushes them only on success.
struct RunOutput {
    std::map<std::string, std::string> text_files;  // name -> contents
    std::map<std::string, std::string> input_hashes;
    json results = json::object();
};

std::string csv_text(const std::vector<std::string>& comments,
                     const std::vector<std::pair<std::string, const std::vector<double>*>>& cols) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& c : comments) out << "# " << c << '\n';
    std::string head;
    for (const auto& [name, v] : cols) {
        if (!head.empty()) head += ", ";
        head += name;
    }
    out << "# " << head << '\n';
    size_t rows = cols.empty() ? 0 : cols[0].second->size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols.size(); ++c) {
            if (c) out << ',';
            out << (*cols[c].second)[r];
        }
        out << '\n';
    }
    return out.str();
}

// --- parameter-block builders ---------------------------------------------

qle::UnitSystem make_units(Params& p) {
    std::string mode = p.get_string("units.mode", "reduced");
    if (mode == "cgs") return qle::UnitSystem::gaussian_cgs();
    if (mode == "reduced") {
        double e = p.get_double("units.charge", 1.0);
        return qle::UnitSystem::reduced(e);
    }
    throw qle::ValidationError("units.mode: expected 'cgs' or 'reduced', got '" + mode + "'");
}

qle::QuadratureSpec make_quad(Params& p) {
    qle::QuadratureSpec q;
    q.rel_tol = p.get_double("quad.rel_tol", q.rel_tol);
    q.abs_tol = p.get_double("quad.abs_tol", q.abs_tol);
    q.max_panels = static_cast<int>(p.get_int("quad.max_panels", q.max_panels));
    q.omega_break = p.get_double("quad.omega_break", 0.0);
    q.truncate_at = p.get_double("quad.omega_max", 0.0);
    return q;
}

qle::SystemConfig make_system(Params& p, const qle::UnitSystem& units) {
    return {p.require_double("system.mass"), p.get_double("system.stiffness", 0.0), units};
}

qle::BathModel make_bath(Params& p, const qle::UnitSystem& units, RunOutput& out) {
    std::string model = p.require_string("bath.model");
    if (model == "ohmic") return qle::BathModel::ohmic(p.require_double("bath.zeta"));
    if (model == "single_relaxation")
        return qle::BathModel::single_relaxation(p.require_double("bath.zeta"),
                                                 p.require_double("bath.omega_r"));
    if (model == "blackbody")
        return qle::BathModel::blackbody(p.require_double("system.mass"),
                                         p.require_double("bath.cutoff"), units);
    if (model == "tabulated") {
        std::string file = p.require_string("bath.table");
        out.input_hashes[file] = qle::sha256_file(file);
        return qle::BathModel::tabulated(qle::read_xy_csv(file));
    }
    throw qle::ValidationError("bath.model: unknown model '" + model + "'");
}

qle::ThermalState make_state(Params& p) {
    return {p.require_double("state.temperature"), p.get_bool("state.classical", false)};
}

std::vector<double> make_grid(Params& p, const std::string& prefix) {
    double lo = p.require_double(prefix + ".min");
    double hi = p.require_double(prefix + ".max");
    long long n = p.get_int(prefix + ".n", 200);
    std::string scale = p.get_string(prefix + ".scale", "linear");
    if (n < 1) throw qle::ValidationError(prefix + ".n: must be >= 1");
    if (!(hi > lo) && n > 1)
        throw qle::ValidationError(prefix + ": max must exceed min");
    if (scale == "linear") return qle::linspace(lo, hi, static_cast<size_t>(n));
    if (scale == "log") return qle::logspace(lo, hi, static_cast<size_t>(n));
    throw qle::ValidationError(prefix + ".scale: expected 'linear' or 'log'");
}

// --- commands --------------------------------------------------------------

void cmd_bath(Params& p, RunOutput& out) {
    auto units = make_units(p);
    auto bath = make_bath(p, units, out);
    auto grid = make_grid(p, "grid");
    std::vector<double> re(grid.size()), im(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        auto mu = bath.memory_fourier({grid[i], 0.0});
        re[i] = mu.real();
        im[i] = mu.imag();
    }
    out.text_files["bath.csv"] =
        csv_text({bath.describe()}, {{"omega", &grid}, {"re_mu", &re}, {"im_mu", &im}});
    out.results["omega"] = grid;
    out.results["re_mu"] = re;
    out.results["im_mu"] = im;
}

void cmd_response(Params& p, RunOutput& out) {
    auto units = make_units(p);
    auto quad = make_quad(p);
    qle::ResponseFunction resp(make_system(p, units), make_bath(p, units, out));
    auto grid = make_grid(p, "grid");
    std::vector<double> g(grid.size()), gd(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        g[i] = resp.green_function(grid[i], quad);
        gd[i] = resp.green_function_derivative(grid[i], quad);
    }
    out.text_files["response.csv"] =
        csv_text({}, {{"t", &grid}, {"green", &g}, {"m_dgreen_dt", &gd}});
    out.results["t"] = grid;
    out.results["green"] = g;
    out.results["m_dgreen_dt"] = gd;
}

void cmd_correlate(Params& p, RunOutput& out) {
    auto units = make_units(p);
    qle::ResponseFunction resp(make_system(p, units), make_bath(p, units, out));
    qle::CorrelationRequest req{resp, make_state(p), make_quad(p)};
    auto grid = make_grid(p, "grid");
    std::vector<double> c(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        c[i] = qle::position_autocorrelation(req, grid[i]);
    out.text_files["correlate.csv"] = csv_text({}, {{"t", &grid}, {"C", &c}});
    out.results["t"] = grid;
    out.results["C"] = c;
}

void cmd_msd(Params& p, RunOutput& out) {
    auto units = make_units(p);
    qle::ResponseFunction resp(make_system(p, units), make_bath(p, units, out));
    qle::CorrelationRequest req{resp, make_state(p), make_quad(p)};
    auto grid = make_grid(p, "grid");
    std::vector<double> s(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        s[i] = qle::mean_square_displacement(req, grid[i]);
    out.text_files["msd.csv"] = csv_text({}, {{"t", &grid}, {"s", &s}});
    out.results["t"] = grid;
    out.results["s"] = s;
}

void cmd_spectrum(Params& p, RunOutput& out) {
    auto units = make_units(p);
    qle::ResponseFunction resp(make_system(p, units), make_bath(p, units, out));
    qle::CorrelationRequest req{resp, make_state(p), make_quad(p)};
    auto grid = make_grid(p, "grid");
    std::vector<double> pw(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) pw[i] = qle::power_spectrum(req, grid[i]);
    out.text_files["spectrum.csv"] = csv_text({}, {{"omega", &grid}, {"P", &pw}});
    out.results["omega"] = grid;
    out.results["P"] = pw;
}

void cmd_free_energy(Params& p, RunOutput& out) {
    auto units = make_units(p);
    auto quad = make_quad(p);
    qle::ResponseFunction resp(make_system(p, units), make_bath(p, units, out));
    auto grid = make_grid(p, "sweep");  // temperatures
    bool classical = p.get_bool("state.classical", false);
    std::vector<double> F(grid.size()), U(grid.size()), S(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        qle::FreeEnergyRequest req{resp, {grid[i], classical}, quad};
        F[i] = qle::oscillator_free_energy(req);
        auto es = qle::energy_and_entropy(req);
        U[i] = es.internal_energy;
        S[i] = es.entropy;
    }
    out.text_files["free_energy.csv"] =
        csv_text({}, {{"T", &grid}, {"F", &F}, {"U", &U}, {"S", &S}});
    out.results["T"] = grid;
    out.results["F"] = F;
    out.results["U"] = U;
    out.results["S"] = S;
}

void cmd_josephson(Params& p, RunOutput& out) {
    auto units = make_units(p);
    qle::JosephsonJunction jj{p.require_double("jj.capacitance"),
                              p.require_double("jj.resistance"),
                              p.get_double("jj.bias_current", 0.0),
                              p.require_double("jj.critical_current"), units};
    auto state = make_state(p);
    auto map = qle::josephson_map(jj);
    double var = qle::josephson_phase_variance(jj, state, make_quad(p));
    out.results["phase_variance"] = var;
    out.results["omega0"] = map.omega0;
    out.results["mass"] = map.system.mass;
    out.results["zeta"] = map.bath.zeta();
    std::vector<double> v{var}, w{map.omega0};
    out.text_files["josephson.csv"] =
        csv_text({}, {{"phase_variance", &v}, {"omega0", &w}});
}

void cmd_junction(Params& p, RunOutput& out) {
    auto units = make_units(p);
    qle::TunnelJunction tj;
    tj.capacitance = p.require_double("tj.capacitance");
    tj.units = units;
    if (p.has("tj.impedance")) {
        std::string file = p.require_string("tj.impedance");
        out.input_hashes[file] = qle::sha256_file(file);
        qle::CsvTable t = qle::read_csv(file);
        if (t.columns.size() != 3)
            throw qle::ValidationError("tj.impedance: expected 3 columns (omega, reZ, imZ)");
        qle::ComplexSampledFunction z;
        z.x = t.columns[0];
        z.y.resize(t.rows());
        for (size_t i = 0; i < t.rows(); ++i)
            z.y[i] = {t.columns[1][i], t.columns[2][i]};
        tj.impedance = std::move(z);
    } else if (p.has("tj.resistance")) {
        tj.resistance = p.require_double("tj.resistance");
    } else {
        throw qle::ValidationError("junction: need tj.resistance or tj.impedance");
    }
    double var = qle::junction_charge_variance(tj, make_state(p), make_quad(p));
    out.results["charge_variance"] = var;
    std::vector<double> v{var};
    out.text_files["junction.csv"] = csv_text({}, {{"charge_variance", &v}});
}

void cmd_detector(Params& p, RunOutput& out) {
    auto units = make_units(p);
    qle::ResponseFunction resp(make_system(p, units), make_bath(p, units, out));
    qle::CorrelationRequest req{resp, make_state(p), make_quad(p)};
    auto grid = make_grid(p, "grid");
    auto noise = qle::detector_noise(req, grid);
    out.text_files["detector.csv"] =
        csv_text({"mean_square = " + fmt_double(noise.mean_square)},
                 {{"omega", &noise.spectrum.x}, {"P", &noise.spectrum.y}});
    out.results["omega"] = noise.spectrum.x;
    out.results["P"] = noise.spectrum.y;
    out.results["mean_square"] = noise.mean_square;
}

void cmd_radiate(Params& p, RunOutput& out) {
    auto units = make_units(p);
    double M = p.require_double("system.mass");
    double cutoff = p.require_double("bath.cutoff");
    auto state = make_state(p);
    auto quad = make_quad(p);
    double closed = qle::rydberg_blackbody_shift(state, M, units);
    double numeric = qle::rydberg_blackbody_shift_numeric(state, M, cutoff, units, quad);
    out.results["shift_closed_form"] = closed;
    out.results["shift_numeric"] = numeric;
    std::vector<double> a{closed}, b{numeric};
    out.text_files["radiate.csv"] =
        csv_text({}, {{"shift_closed_form", &a}, {"shift_numeric", &b}});
}

void cmd_simulate(Params& p, RunOutput& out, const fs::path& outdir) {
    auto units = make_units(p);
    qle::SimulationPlan plan{make_system(p, units), make_bath(p, units, out),
                             make_state(p)};
    plan.dt = p.require_double("sim.dt");
    plan.steps = static_cast<int>(p.get_int("sim.steps", 0));
    plan.n_paths = static_cast<int>(p.get_int("sim.n_paths", 0));
    plan.seed = static_cast<std::uint64_t>(p.get_int("sim.seed", 0));
    std::string scheme = p.get_string("sim.scheme", "euler");
    if (scheme == "euler") plan.scheme = qle::Scheme::EulerMaruyama;
    else if (scheme == "heun") plan.scheme = qle::Scheme::StrongOrder1;
    else throw qle::ValidationError("sim.scheme: expected 'euler' or 'heun'");
    plan.x0 = p.get_double("sim.x0", 0.0);
    plan.v0 = p.get_double("sim.v0", 0.0);
    bool dump = p.get_bool("sim.dump_paths", false);
    long long stride = p.get_int("sim.output_stride", 1);
    if (stride < 1) throw qle::ValidationError("sim.output_stride: must be >= 1");
    plan.validate();

    auto ens = qle::integrate_langevin(plan);
    auto msd = qle::ensemble_msd(ens);
    std::vector<double> t, s, se;
    for (size_t k = 0; k < msd.t.size(); k += static_cast<size_t>(stride)) {
        t.push_back(msd.t[k]);
        s.push_back(msd.s[k]);
        se.push_back(msd.se[k]);
    }
    out.text_files["simulate.csv"] = csv_text({}, {{"t", &t}, {"s", &s}, {"se", &se}});
    out.results["t"] = t;
    out.results["s"] = s;
    out.results["se"] = se;
    if (dump) qle::write_paths((outdir / "paths.bin").string(), ens);
}

int run_command(const std::string& command, Params& p, const fs::path& outdir) {
    RunOutput out;
    long long workers = p.get_int("workers", 0);
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(static_cast<int>(workers));
#else
    (void)workers;
#endif

    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec) {
        std::fprintf(stderr, "error: cannot create output directory %s\n",
                     outdir.string().c_str());
        return 2;
    }

    try {
        if (command == "bath") cmd_bath(p, out);
        else if (command == "response") cmd_response(p, out);
        else if (command == "correlate") cmd_correlate(p, out);
        else if (command == "msd") cmd_msd(p, out);
        else if (command == "spectrum") cmd_spectrum(p, out);
        else if (command == "free-energy") cmd_free_energy(p, out);
        else if (command == "josephson") cmd_josephson(p, out);
        else if (command == "junction") cmd_junction(p, out);
        else if (command == "detector") cmd_detector(p, out);
        else if (command == "radiate") cmd_radiate(p, out);
        else if (command == "simulate") cmd_simulate(p, out, outdir);
        else throw qle::ValidationError("unknown command '" + command + "'");
        p.check_unknown();
    } catch (const qle::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const qle::Error& e) {
        // typed numeric failure from a module
        std::string name = "Error";
        if (dynamic_cast<const qle::DomainError*>(&e)) name = "DomainError";
        else if (dynamic_cast<const qle::DivergenceError*>(&e)) name = "DivergenceError";
        else if (dynamic_cast<const qle::UnsupportedError*>(&e)) name = "UnsupportedError";
        else if (dynamic_cast<const qle::CausalityError*>(&e)) name = "CausalityError";
        else if (dynamic_cast<const qle::ConvergenceError*>(&e)) name = "ConvergenceError";
        else if (dynamic_cast<const qle::CoverageError*>(&e)) name = "CoverageError";
        else if (dynamic_cast<const qle::BlowUpError*>(&e)) name = "BlowUpError";
        std::fprintf(stderr, "%s: %s\n", name.c_str(), e.what());
        return 1;
    }

    // flush artifacts, then the manifest
    json manifest;
    manifest["tool"] = "qle";
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["parameters"] = json::object();
    for (const auto& [k, v] : p.resolved()) manifest["parameters"][k] = v;
    manifest["inputs"] = json::object();
    for (const auto& [f, h] : out.input_hashes) manifest["inputs"][f] = h;
    manifest["outputs"] = json::array();

    for (const auto& [name, text] : out.text_files) {
        std::ofstream f(outdir / name, std::ios::binary);
        f << text;
        if (!f) {
            std::fprintf(stderr, "error: write failed for %s\n", name.c_str());
            return 1;
        }
        manifest["outputs"].push_back(name);
    }
    {
        std::ofstream f(outdir / "results.json");
        f << out.results.dump(2) << '\n';
        manifest["outputs"].push_back("results.json");
    }
    {
        std::ofstream f(outdir / "manifest.json");
        f << manifest.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fluctuation/dissipation toolkit"};
    app.require_subcommand(0, 1);

    std::string config_file, outdir, from_manifest;
    std::vector<std::string> overrides;
    app.add_option("--from-manifest", from_manifest,
                   "re-run a previous run from its manifest.json");
    app.add_option("-o,--out", outdir, "output directory");
    app.set_version_flag("--version", kVersion);

    static const char* kCommands[] = {"bath",       "response", "correlate",
                                      "msd",        "spectrum", "free-energy",
                                      "josephson",  "junction", "detector",
                                      "radiate",    "simulate"};
    std::string command;
    for (const char* name : kCommands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", config_file, "key = value config file");
        sub->add_option("-o,--out", outdir, "output directory");
        sub->add_option("-s,--set", overrides, "override: key=value");
        sub->callback([&command, name] { command = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Params p;
        if (!from_manifest.empty()) {
            if (!command.empty())
                throw qle::ValidationError("--from-manifest excludes a command");
            std::ifstream in(from_manifest);
            if (!in) throw qle::ValidationError("cannot open manifest " + from_manifest);
            json m = json::parse(in, nullptr, false);
            if (m.is_discarded() || !m.contains("command") || !m.contains("parameters"))
                throw qle::ValidationError("malformed manifest " + from_manifest);
            command = m["command"].get<std::string>();
            for (const auto& [k, v] : m["parameters"].items())
                p.set(k, v.get<std::string>());
        } else {
            if (command.empty())
                throw qle::ValidationError("no command given (see --help)");
            if (!config_file.empty()) load_config(config_file, p);
            for (const auto& kv : overrides) {
                size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    throw qle::ValidationError("--set expects key=value, got '" + kv + "'");
                p.set(kv.substr(0, eq), kv.substr(eq + 1));
            }
        }
        if (outdir.empty())
            throw qle::ValidationError("no output directory (--out)");
        return run_command(command, p, outdir);
    } catch (const qle::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
