#pragma once

// Named model catalogue and JSON model configuration.

#include "folcalc/geometry.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace folcalc {

struct ModelEntry {
    std::string name;
    std::string summary;
    int default_band;
};

inline const std::vector<ModelEntry>& model_catalogue() {
    static const std::vector<ModelEntry> c = {
        {"carriere", "Carriere flow on the hyperbolic torus, A = [[2,1],[1,1]], n = 1, nontaut", 64},
        {"flat1", "flat torus T^2, n = 1, taut", 8},
        {"flat2", "flat torus T^4, n = 2, taut", 2},
        {"hopf", "Hopf fibration of S^3 over CP^1 (curvature 4), n = 1, taut", 6},
    };
    return c;
}

inline const ModelEntry& model_entry(const std::string& name) {
    for (const auto& e : model_catalogue())
        if (e.name == name) return e;
    throw FolcalcError("UnknownModel", "unknown model '" + name + "'");
}

/// band < 0 selects the catalogue default.
inline ModelPtr make_model(const std::string& name, int band = -1) {
    const auto& e = model_entry(name);
    const int b = band < 0 ? e.default_band : band;
    if (name == "carriere") return build_carriere({{{2, 1}, {1, 1}}}, b);
    if (name == "flat1") return build_flat_product(1, b);
    if (name == "flat2") return build_flat_product(2, b);
    return build_hopf_transverse(b);
}

/// {"family": "carriere" | "flat" | "hopf", "band": N, "matrix": [[a,b],[c,d]], "n": k}
inline ModelPtr model_from_json(const nlohmann::json& j) {
    const std::string fam = j.at("family").get<std::string>();
    const int band = j.value("band", -1);
    if (fam == "carriere") {
        std::array<std::array<long, 2>, 2> A{{{2, 1}, {1, 1}}};
        if (j.contains("matrix")) {
            const auto M = j.at("matrix").get<std::vector<std::vector<long>>>();
            if (M.size() != 2 || M[0].size() != 2 || M[1].size() != 2)
                throw FolcalcError("BadConfig", "matrix must be 2x2");
            A = {{{M[0][0], M[0][1]}, {M[1][0], M[1][1]}}};
        }
        return build_carriere(A, band < 0 ? 64 : band);
    }
    if (fam == "flat") {
        const int n = j.value("n", 1);
        return build_flat_product(n, band < 0 ? (n == 1 ? 8 : 2) : band);
    }
    if (fam == "hopf") return build_hopf_transverse(band < 0 ? 6 : band);
    throw FolcalcError("UnknownModel", "unknown family '" + fam + "'");
}

/// A catalogue name or a path to a JSON model file.
inline ModelPtr resolve_model(const std::string& spec, int band = -1) {
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        std::ifstream in(spec);
        if (!in) throw FolcalcError("UnknownModel", "cannot read model file " + spec);
        nlohmann::json j = nlohmann::json::parse(in);
        if (band >= 0) j["band"] = band;
        return model_from_json(j);
    }
    return make_model(spec, band);
}

}  // namespace folcalc
