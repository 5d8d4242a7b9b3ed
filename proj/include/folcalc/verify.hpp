#pragma once

// Suite runner, verdicts, reports and the coverage ledger.

#include "folcalc/catalogue_cohomology.hpp"
#include "folcalc/config.hpp"

#include <atomic>
#include <iomanip>
#include <thread>

namespace folcalc {

inline constexpr double kExpectedFailFloor = 0.1;

inline bool model_is_taut(const ModelPtr& m) { return ModelContext::of(m)->frame().kappa_form().norm() < 1e-14; }

/// Verdict of one evaluated entry on one model.
inline void decide(const IdentitySpec& s, const ModelPtr& m, const CustomOutcome& o, IdentityReport& r) {
    r.residual = o.residual;
    r.abs_residual = o.abs_residual;
    r.note = o.note;
    if (!o.applicable) {
        r.verdict = "not-applicable";
        return;
    }
    const bool ok = o.residual <= s.threshold;
    if (s.expected_fail_nontaut && !model_is_taut(m)) {
        if (ok) {
            r.verdict = "fail";
            r.note += (r.note.empty() ? "" : "; ") + std::string("expected failure did not occur");
        } else if (o.abs_residual > kExpectedFailFloor) {
            r.verdict = "expected-fail";
        } else {
            r.verdict = "fail";
            r.note += (r.note.empty() ? "" : "; ") + std::string("discrepancy below the expected-fail floor");
        }
        return;
    }
    r.verdict = ok ? "pass" : "fail";
}

inline IdentityReport run_entry(const IdentitySpec& s, const ModelPtr& m, std::uint64_t seed, int ensemble) {
    IdentityReport r;
    r.id = s.id;
    r.refs = s.refs;
    r.model = m->name;
    r.statement = s.statement;
    r.ensemble = ensemble;
    r.seed = seed;
    r.threshold = s.threshold;
    const auto t0 = std::chrono::steady_clock::now();
    if (!applies_to(s.applies, m)) {
        r.verdict = "not-applicable";
        r.note = "requires " + to_string(s.applies) + " model";
    } else {
        try {
            const CustomOutcome o = s.custom ? s.custom(m, seed, ensemble) : evaluate_operator_identity(s, m, seed, ensemble);
            decide(s, m, o, r);
        } catch (const std::exception& e) {
            r.verdict = "fail";
            r.note = e.what();
        }
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Catalogue entries of one suite ("all" selects every entry).
inline std::vector<const IdentitySpec*> suite_entries(const std::string& suite) {
    const auto& names = cat::suite_names();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
        throw FolcalcError("UnknownSuite", "unknown suite '" + suite + "'");
    std::vector<const IdentitySpec*> out;
    for (const auto& s : cat::catalogue())
        if (suite == "all" || s.suite == suite) out.push_back(&s);
    return out;
}

/// Runs a suite over models, parallel over (entry, model) pairs. Output is
/// ordered by catalogue id, then by the order of the model list.
inline std::vector<IdentityReport> run_suite(const std::vector<ModelPtr>& models, const std::string& suite,
                                             std::uint64_t seed, int ensemble, int threads = 0) {
    const auto entries = suite_entries(suite);
    for (const auto& m : models)
        for (const auto* s : entries) type_check(*s, m->n);
    for (const auto& m : models) ModelContext::of(m);  // rejects unsupported models up front

    std::vector<std::pair<const IdentitySpec*, ModelPtr>> jobs;
    for (const auto* s : entries)
        for (const auto& m : models) jobs.emplace_back(s, m);
    std::vector<IdentityReport> out(jobs.size());
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<size_t> next{0};
    std::vector<std::future<void>> workers;
    for (int t = 0; t < threads; ++t)
        workers.push_back(std::async(std::launch::async, [&] {
            for (size_t j = next++; j < jobs.size(); j = next++)
                out[j] = run_entry(*jobs[j].first, jobs[j].second, seed, ensemble);
        }));
    for (auto& w : workers) w.get();
    return out;
}

inline std::vector<IdentityReport> run_suite(const std::vector<std::string>& model_names, const std::string& suite,
                                             std::uint64_t seed, int ensemble, int threads = 0) {
    std::vector<ModelPtr> models;
    for (const auto& n : model_names) models.push_back(resolve_model(n));
    return run_suite(models, suite, seed, ensemble, threads);
}

inline bool unexpected(const IdentityReport& r) { return r.verdict == "fail"; }

inline bool all_expected(const std::vector<IdentityReport>& v) {
    return std::none_of(v.begin(), v.end(), unexpected);
}

inline nlohmann::json to_json(const IdentityReport& r, bool timings) {
    nlohmann::json j = {{"id", r.id},
                        {"refs", r.refs},
                        {"model", r.model},
                        {"statement", r.statement},
                        {"ensemble", r.ensemble},
                        {"seed", r.seed},
                        {"residual", r.residual},
                        {"abs_residual", r.abs_residual},
                        {"threshold", r.threshold},
                        {"verdict", r.verdict},
                        {"note", r.note}};
    if (timings) j["wall_ms"] = r.wall_ms;
    return j;
}

/// Versioned report; wall times only when asked, so default output is byte-stable.
inline nlohmann::json report_json(const std::vector<IdentityReport>& v, const std::string& suite, bool timings = false) {
    nlohmann::json entries = nlohmann::json::array();
    std::map<std::string, int> counts;
    for (const auto& r : v) {
        entries.push_back(to_json(r, timings));
        ++counts[r.verdict];
    }
    return {{"schema", "folcalc.verify/1"}, {"suite", suite}, {"counts", counts}, {"entries", entries}};
}

inline std::string report_text(const std::vector<IdentityReport>& v) {
    std::ostringstream os;
    os << std::left << std::setw(34) << "identity" << std::setw(10) << "model" << std::setw(11) << "residual"
       << std::setw(11) << "abs" << std::setw(15) << "verdict"
       << "note\n";
    for (const auto& r : v) {
        std::ostringstream res, ab;
        res << std::scientific << std::setprecision(2) << r.residual;
        ab << std::scientific << std::setprecision(2) << r.abs_residual;
        os << std::left << std::setw(34) << r.id << std::setw(10) << r.model << std::setw(11) << res.str()
           << std::setw(11) << ab.str() << std::setw(15) << r.verdict << r.note << "\n";
    }
    return os.str();
}

// ------------------------------------------------------------------ coverage

/// Equation labels the catalogue must cover.
inline const std::vector<std::string>& in_scope_labels() {
    static const std::vector<std::string> v = {
        "dBdTFormulas",     "deltab",           "deltabtformulas",       "WeitzThm",
        "eq1-19",           "eq1-22",           "TransDivThm",           "KaehlerExact",
        "partialBForm",     "kappaComponents",  "starBarDeltaForm1",     "starBarDeltaForm2",
        "H10Defn",          "cpxIntProd",       "starBarIntProd",        "partialBadjointFormulasProp",
        "JonForms",         "LComm1",           "LProp",                 "LCor",
        "boxLaplaceDef",    "LaplaceForm1",     "LaplaceForm2",          "realop",
        "LaplaceBoxLaplaceForm", "CorLaplaceType", "FirstCorForm",       "2CorForm",
        "neededCorForm",    "3CorForm",         "Laplacefcns",           "transholoLem",
        "kappaHoloProp",    "KaehlerExactMeanCurv", "(r,0)Prop",         "basicholo(r,0)",
        "DolbeaultDecomp",  "starBarLaplaceForm", "SerreForm",           "SerreCor",
        "KSerreForm",       "SerreFails",       "DeltaTSquareForm",      "WeitzenbockKahler",
        "boxBar",           "boxAfterBoxBar",   "boxBarT",               "conjBoxBarT",
        "boxBarrn1",        "boxBarrn2",        "boxBarrn2Conj",         "RQForm",
        "LaplaceBDeltaTProp", "Laplacer0Cor",   "Laplacer0Cor2",         "10Remark",
        "AnotherLaplaceCor", "VanishingThm",    "VanishingCor",
        // artifact-level keys
        "LaplaceDefs",      "TwistedDuality",   "KaehlerLocal",          "ComplexFrames",
        "RoughDefs",        "RoughSelfAdjoint"};
    return v;
}

/// label -> ids of the entries citing it.
inline std::map<std::string, std::vector<std::string>> coverage_ledger() {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& l : in_scope_labels()) out[l];
    for (const auto& s : cat::catalogue())
        for (const auto& r : s.refs) out[r].push_back(s.id);
    return out;
}

inline std::vector<std::string> uncovered_labels() {
    const auto led = coverage_ledger();
    std::vector<std::string> out;
    for (const auto& l : in_scope_labels())
        if (led.at(l).empty()) out.push_back(l);
    return out;
}

}  // namespace folcalc
