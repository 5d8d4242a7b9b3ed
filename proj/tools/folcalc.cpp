// folcalc command-line interface.
//
// exit 0: no unexpected verdicts; 1: computation failure (failing id on
// stderr); 2: usage error.

#include "folcalc/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace folcalc;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// catalogue lookup errors are the user's fault
bool is_usage(const FolcalcError& e) {
    return e.code == "UnknownModel" || e.code == "UnknownSuite" || e.code == "BadConfig" || e.code == "UnknownDuality" ||
           e.code == "BandLimitInvalid" || e.code == "BandwidthTooLarge";
}

void write_json(const std::string& path, const nlohmann::json& j) {
    if (path.empty()) return;
    if (path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    for (std::string x; std::getline(ss, x, ',');)
        if (!x.empty()) v.push_back(x);
    return v;
}

ModelPtr load(const std::string& name, int band) { return resolve_model(name, band); }

int cmd_models(const std::string& json_out) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : model_catalogue()) {
        std::cout << std::left << std::setw(10) << e.name << "band " << std::setw(4) << e.default_band << e.summary
                  << "\n";
        j.push_back({{"name", e.name}, {"default_band", e.default_band}, {"summary", e.summary}});
    }
    write_json(json_out, {{"schema", "folcalc.models/1"}, {"models", j}});
    return 0;
}

int cmd_betti(const std::string& model, int band, bool audit, const std::string& json_out) {
    const auto m = load(model, band);
    const auto t = betti_table(m, 1e-8, audit);
    std::cout << to_text(t);
    write_json(json_out, to_json(t));
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& models, std::uint64_t seed, int ensemble, int threads,
               bool timings, bool audit, const std::string& json_out) {
    const auto names = split_csv(models);
    if (names.empty()) throw UsageError("--models needs at least one model");
    std::vector<ModelPtr> ms;
    for (const auto& n : names) ms.push_back(load(n, -1));
    const auto reports = run_suite(ms, suite, seed, ensemble, threads);
    std::cout << report_text(reports);
    auto j = report_json(reports, suite, timings);
    j["models"] = names;
    j["seed"] = seed;
    j["ensemble"] = ensemble;
    int rc = 0;
    if (audit) {
        nlohmann::json a = nlohmann::json::object();
        for (const auto& m : ms) {
            try {
                const auto t = betti_table(m, 1e-8, true);
                a[m->name] = {{"band", t.band}, {"audit_band", *t.audit_band}, {"stable", true}};
            } catch (const FolcalcError& e) {
                a[m->name] = {{"stable", false}, {"error", e.what()}};
                std::cerr << "audit:" << m->name << ": " << e.what() << "\n";
                rc = 1;
            }
        }
        j["audit"] = a;
    }
    write_json(json_out, j);
    for (const auto& r : reports)
        if (unexpected(r)) {
            std::cerr << r.id << " [" << r.model << "]: " << r.verdict << " residual " << r.residual
                      << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
            rc = 1;
        }
    return rc;
}

int cmd_duality(const std::string& model, const std::string& kind, int band, bool audit, const std::string& json_out) {
    const auto m = load(model, band);
    std::vector<DualityKind> kinds;
    if (kind == "all")
        kinds = {DualityKind::twisted_de_rham, DualityKind::twisted_serre, DualityKind::kodaira_serre};
    else
        kinds = {duality_kind_from(kind)};
    if (audit) betti_table(m, 1e-8, true);
    nlohmann::json j = nlohmann::json::array();
    int rc = 0;
    for (auto k : kinds) {
        const auto r = duality_check(m, k);
        std::cout << to_text(r) << "\n";
        j.push_back(to_json(r));
        if (r.verdict == "fail") {
            std::cerr << to_string(k) << " [" << m->name << "]: fail\n";
            rc = 1;
        }
    }
    write_json(json_out, {{"schema", "folcalc.dualities/1"}, {"model", m->name}, {"reports", j}});
    return rc;
}

int cmd_obstruction(const std::string& model, int samples, std::uint64_t seed, int band, const std::string& json_out) {
    const auto m = load(model, band);
    const auto r = mean_curvature_obstruction(m, samples, seed);
    std::cout << "model " << r.model << "  (log lambda)^2 = " << std::setprecision(12) << r.c2 << "\n"
              << "samples " << r.samples.size() << "\n"
              << "max |t-average - (log lambda)^2|  " << std::scientific << std::setprecision(3) << r.max_mean_deviation
              << "\n"
              << "max coefficient mismatch          " << r.max_coefficient_mismatch << "\n"
              << "min |dbar kappa'^{1,0}|           " << r.min_dbar_norm << "\n"
              << (r.pass ? "pass" : "fail") << "\n";
    write_json(json_out, to_json(r));
    if (!r.pass) {
        std::cerr << "KaehlerExactMeanCurv [" << r.model << "]: fail\n";
        return 1;
    }
    return 0;
}

int cmd_report(const std::string& dir, const std::string& json_out) {
    if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<IdentityReport> all;
    for (const auto& f : files) {
        std::ifstream in(f);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const std::exception&) {
            continue;
        }
        if (!j.is_object() || j.value("schema", "") != "folcalc.verify/1") continue;
        for (const auto& e : j.at("entries")) {
            IdentityReport r;
            r.id = e.at("id");
            r.refs = e.at("refs").get<std::vector<std::string>>();
            r.model = e.at("model");
            r.statement = e.at("statement");
            r.ensemble = e.at("ensemble");
            r.seed = e.at("seed");
            r.residual = e.at("residual");
            r.abs_residual = e.at("abs_residual");
            r.threshold = e.at("threshold");
            r.verdict = e.at("verdict");
            r.note = e.at("note");
            all.push_back(std::move(r));
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    std::cout << report_text(all);
    std::map<std::string, int> counts;
    for (const auto& r : all) ++counts[r.verdict];
    std::cout << "\n";
    for (const auto& [k, v] : counts) std::cout << k << ": " << v << "\n";
    write_json(json_out, report_json(all, "report"));
    int rc = 0;
    for (const auto& r : all)
        if (unexpected(r)) {
            std::cerr << r.id << " [" << r.model << "]: fail\n";
            rc = 1;
        }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"folcalc: basic Dolbeault calculus of transversely Kaehler foliations"};
    app.require_subcommand(1);
    bool audit = false;
    app.add_flag("--audit", audit, "double the band limit and re-check Betti stability");

    std::string json_out, model, suite, models = "carriere,flat1,flat2,hopf", kind = "all", dir;
    int band = -1, ensemble = 100, samples = 50, threads = 0;
    std::uint64_t seed = 1;
    bool timings = false;

    auto* mod = app.add_subcommand("models", "model catalogue");
    auto* mod_list = mod->add_subcommand("list", "list catalogue models");
    mod->require_subcommand(1);
    mod_list->add_option("--json", json_out, "write JSON to a file ('-' for stdout)");

    auto* betti = app.add_subcommand("betti", "basic and Dolbeault Betti numbers");
    betti->add_option("model", model, "catalogue name or model JSON file")->required();
    betti->add_option("--band", band, "band limit");
    betti->add_option("--json", json_out, "write JSON to a file ('-' for stdout)");

    auto* verify = app.add_subcommand("verify", "run an identity suite");
    verify->add_option("suite", suite, "structure|commutators|laplacians|weitzenboeck|dualities|cohomology|all")->required();
    verify->add_option("--models", models, "comma-separated models");
    verify->add_option("--seed", seed, "seed");
    verify->add_option("--ensemble", ensemble, "random forms per identity and model")->check(CLI::PositiveNumber);
    verify->add_option("--threads", threads, "worker threads (0: hardware)");
    verify->add_flag("--timings", timings, "include wall times in JSON");
    verify->add_option("--json", json_out, "write JSON to a file ('-' for stdout)");

    auto* duality = app.add_subcommand("duality", "duality checks on one model");
    duality->add_option("model", model, "catalogue name or model JSON file")->required();
    duality->add_option("--kind", kind, "twisted-deRham|twisted-Serre|Kodaira-Serre|all");
    duality->add_option("--band", band, "band limit");
    duality->add_option("--json", json_out, "write JSON to a file ('-' for stdout)");

    auto* obstruction = app.add_subcommand("obstruction", "mean-curvature obstruction on a Carriere model");
    obstruction->add_option("model", model, "Carriere model")->required();
    obstruction->add_option("--samples", samples, "random periodic functions")->check(CLI::PositiveNumber);
    obstruction->add_option("--seed", seed, "seed");
    obstruction->add_option("--band", band, "band limit");
    obstruction->add_option("--json", json_out, "write JSON to a file ('-' for stdout)");

    auto* report = app.add_subcommand("report", "aggregate verify JSON reports into one table");
    report->add_option("--dir", dir, "directory of JSON reports")->required();
    report->add_option("--json", json_out, "write JSON to a file ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (mod_list->parsed()) return cmd_models(json_out);
        if (betti->parsed()) return cmd_betti(model, band, audit, json_out);
        if (verify->parsed()) return cmd_verify(suite, models, seed, ensemble, threads, timings, audit, json_out);
        if (duality->parsed()) return cmd_duality(model, kind, band, audit, json_out);
        if (obstruction->parsed()) return cmd_obstruction(model, samples, seed, band, json_out);
        if (report->parsed()) return cmd_report(dir, json_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const FolcalcError& e) {
        if (is_usage(e)) {
            std::cerr << "usage error: " << e.what() << "\n" << app.help();
            return 2;
        }
        std::cerr << e.code << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
