// diracres: resonance/scattering/determinant computations for the half-line
// Dirac operator with compactly supported potentials.
//
//   diracres states|counting|scattering|det|verify --config cfg.json --out DIR

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "diracres/fredholm.hpp"
#include "diracres/io.hpp"
#include "diracres/jost.hpp"
#include "diracres/scattering.hpp"
#include "diracres/states.hpp"
#include "diracres/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace diracres;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    json j;
    in >> j;
    return j;
}

Potential load_potential(const json& cfg, const std::string& cfg_dir) {
    if (!cfg.contains("potential"))
        throw std::invalid_argument("config: field 'potential' (path) required");
    fs::path p = cfg["potential"].get<std::string>();
    if (p.is_relative()) p = fs::path(cfg_dir) / p;
    return Potential::load(p.string());
}

json run_meta(const Potential& P, const json& cfg) {
    json meta;
    meta["potential_hash"] = P.content_hash();
    meta["m"] = P.mass();
    meta["gamma"] = P.gamma();
    meta["smooth"] = P.smooth();
    meta["config"] = cfg;
    return meta;
}

int cmd_states(const json& cfg, const std::string& cfg_dir, const std::string& out,
               int threads) {
    Potential P = load_potential(cfg, cfg_dir);
    Rect region{cfg.value("re_min", -3.0), cfg.value("re_max", 3.0),
                cfg.value("im_min", -3.0), cfg.value("im_max", 0.5)};
    FindOptions opt;
    opt.newton_tol = cfg.value("newton_tol", 1e-11);
    opt.ode_tol = cfg.value("ode_tol", 1e-11);
    (void)threads;  // the subdivision walk is sequential by construction
    std::vector<StateRecord> st = find_states(P, region, opt);
    write_text_file(out + "/states.csv", states_csv(st));
    json j;
    j["meta"] = run_meta(P, cfg);
    j["states"] = json::array();
    long counts[4] = {0, 0, 0, 0};
    for (const auto& s : st) {
        json e;
        e["re_lambda"] = s.lambda.real();
        e["im_lambda"] = s.lambda.imag();
        e["re_k"] = s.k.real();
        e["im_k"] = s.k.imag();
        e["class"] = to_string(s.cls);
        e["multiplicity"] = s.multiplicity;
        e["residual"] = s.residual;
        j["states"].push_back(e);
        counts[static_cast<int>(s.cls)] += s.multiplicity;
    }
    j["summary"] = {{"eigenvalues", counts[0]},
                    {"resonances", counts[1]},
                    {"antibound", counts[2]},
                    {"virtual", counts[3]}};
    write_text_file(out + "/states.json", j.dump(2));
    std::cout << "states: " << st.size() << " records -> " << out << "\n";
    return 0;
}

int cmd_counting(const json& cfg, const std::string& cfg_dir, const std::string& out,
                 int threads) {
    Potential P = load_potential(cfg, cfg_dir);
    std::vector<double> radii = cfg.value("radii", std::vector<double>{50.0, 100.0});
    double delta = cfg.value("delta", 0.2);
    double tol = cfg.value("ode_tol", 1e-9);
    (void)threads;
    CountingReport rep = counting_report(P, radii, delta, tol);
    write_text_file(out + "/counting.csv", counting_csv(rep));
    json j;
    j["meta"] = run_meta(P, cfg);
    j["delta"] = delta;
    j["rows"] = json::array();
    for (size_t i = 0; i < rep.radii.size(); ++i)
        j["rows"].push_back({{"r", rep.radii[i]},
                             {"count", rep.counts[i]},
                             {"predicted", rep.predicted[i]},
                             {"sector_count", rep.sector_counts[i]},
                             {"sector_outliers", rep.sector_outliers[i]}});
    write_text_file(out + "/counting.json", j.dump(2));
    std::cout << "counting: " << rep.radii.size() << " radii -> " << out << "\n";
    return 0;
}

int cmd_scattering(const json& cfg, const std::string& cfg_dir,
                   const std::string& out, int threads) {
    Potential P = load_potential(cfg, cfg_dir);
    double lo = cfg.value("lambda_min", P.mass() * 1.1);
    double hi = cfg.value("lambda_max", 40.0);
    int n = cfg.value("points", 200);
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * i / (n - 1);
    (void)threads;  // the unwrap pass is ordered; evaluations dominate anyway
    PhaseTrace tr = scattering_phase(grid, P, cfg.value("ode_tol", 1e-11));
    write_text_file(out + "/scattering.csv", phase_trace_csv(tr));
    json j;
    j["meta"] = run_meta(P, cfg);
    j["omega0"] = P.derived().omega0;
    write_text_file(out + "/scattering.json", j.dump(2));
    std::cout << "scattering: " << n << " grid points -> " << out << "\n";
    return 0;
}

int cmd_det(const json& cfg, const std::string& cfg_dir, const std::string& out,
            int threads) {
    Potential P = load_potential(cfg, cfg_dir);
    int N = cfg.value("N", 200);
    double re0 = cfg.value("re_min", -5.0), re1 = cfg.value("re_max", 5.0);
    double im = cfg.value("im", 2.0);
    int n = cfg.value("points", 41);
    std::vector<DetEvaluation> evs(n);
    parallel_for(n, threads, [&](size_t i) {
        Cplx l(re0 + (re1 - re0) * static_cast<double>(i) / (n - 1), im);
        evs[i] = det2(l, P, N);
    });
    write_text_file(out + "/det.csv", det_grid_csv(evs));
    json j;
    j["meta"] = run_meta(P, cfg);
    j["N"] = N;
    write_text_file(out + "/det.json", j.dump(2));
    std::cout << "det: " << n << " evaluations -> " << out << "\n";
    return 0;
}

int cmd_verify(const json& cfg, const std::string& out, int threads) {
    std::vector<verify::CriterionResult> rs;
    if (cfg.contains("criteria")) {
        for (int id : cfg["criteria"].get<std::vector<int>>())
            rs.push_back(verify::run_criterion(id, threads));
    } else {
        rs = verify::run_acceptance(threads);
    }
    std::string text = verify::report_text(rs);
    std::cout << text;
    write_text_file(out + "/verify.txt", text);
    write_text_file(out + "/verify.json", verify::report_json(rs));
    for (const auto& r : rs)
        if (!r.pass) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"half-line Dirac resonances, scattering and determinants"};
    app.require_subcommand(1);

    std::string config, out = ".";
    int threads = 1;
    for (const char* name :
         {"states", "counting", "scattering", "det", "verify"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON config file")
            ->required(name != std::string("verify"));
        sub->add_option("--out", out, "output directory");
        sub->add_option("--threads", threads, "worker threads");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        fs::create_directories(out);
        json cfg;
        std::string cfg_dir = ".";
        if (!config.empty()) {
            cfg = load_json(config);
            cfg_dir = fs::path(config).parent_path().string();
            if (cfg_dir.empty()) cfg_dir = ".";
        }
        if (app.got_subcommand("states")) return cmd_states(cfg, cfg_dir, out, threads);
        if (app.got_subcommand("counting"))
            return cmd_counting(cfg, cfg_dir, out, threads);
        if (app.got_subcommand("scattering"))
            return cmd_scattering(cfg, cfg_dir, out, threads);
        if (app.got_subcommand("det")) return cmd_det(cfg, cfg_dir, out, threads);
        if (app.got_subcommand("verify")) return cmd_verify(cfg, out, threads);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
