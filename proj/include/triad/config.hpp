#pragma once
#include <json.hpp>

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "triad/masses.hpp"
#include "triad/rps_pi.hpp"

namespace triad {

// Full run configuration loaded from a single JSON document.  Defaults are
// chosen so that the domain inequalities validated below all hold.
struct RunConfig {
    MassConfig masses{1.0, 1.0, 0.05, 1e-3};
    DomainParams domain{};
    double G = 0.7;          // vertical angular-momentum parameter of scans
    int n_lambda = 16;       // quadrature nodes per fast angle
    int n_points = 1000;     // Monte-Carlo points per chart
    int n_grid = 40;         // grid resolution per scan axis
    unsigned seed = 2024;
    std::string output_dir = ".";
    bool has_initial = false;
    std::array<double, 12> initial{};  // optional integration start, chart order
    nlohmann::json raw;      // canonical form, used for the report hash
};

// FNV-1a over the canonical serialized configuration.
inline std::string config_hash(const nlohmann::json& j) {
    std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig rc;
    double m0 = j.value("m0", 1.0), m1 = j.value("m1", 1.0);
    double m2 = j.value("m2", 0.05), mu = j.value("mu", 1e-3);
    rc.masses = MassConfig(m0, m1, m2, mu);  // throws if any is non-positive
    rc.domain.chi = j.value("chi", 2.0);
    rc.domain.alpha_minus = j.value("alpha_minus", 0.05);
    rc.domain.alpha_plus = j.value("alpha_plus", 0.2);
    rc.domain.Lambda_minus = j.value("Lambda_minus", 0.5);
    rc.domain.Lambda_plus = j.value("Lambda_plus", 2.0);
    rc.domain.eps0 = j.value("eps0", 0.0);
    rc.domain.c = j.value("c", 0.5);
    rc.domain.validate(rc.masses);  // throws naming the violated inequality
    rc.G = j.value("G", 0.7);
    rc.n_lambda = j.value("n_lambda", 16);
    rc.n_points = j.value("n_points", 1000);
    rc.n_grid = j.value("n_grid", 40);
    rc.seed = j.value("seed", 2024u);
    rc.output_dir = j.value("output_dir", std::string("."));
    if (rc.n_lambda < 4 || rc.n_points < 1 || rc.n_grid < 2)
        throw std::domain_error("RunConfig: n_lambda >= 4, n_points >= 1, n_grid >= 2 violated");
    // canonical form: defaults filled in, so equivalent configs hash equally
    rc.raw = {{"m0", m0}, {"m1", m1}, {"m2", m2}, {"mu", mu},
              {"chi", rc.domain.chi}, {"alpha_minus", rc.domain.alpha_minus},
              {"alpha_plus", rc.domain.alpha_plus}, {"Lambda_minus", rc.domain.Lambda_minus},
              {"Lambda_plus", rc.domain.Lambda_plus}, {"eps0", rc.domain.eps0},
              {"c", rc.domain.c}, {"G", rc.G}, {"n_lambda", rc.n_lambda},
              {"n_points", rc.n_points}, {"n_grid", rc.n_grid}, {"seed", rc.seed},
              {"output_dir", rc.output_dir}};
    if (j.contains("initial")) {
        const auto& a = j.at("initial");
        if (!a.is_array() || a.size() != 12)
            throw std::domain_error("RunConfig: initial must be an array of 12 numbers");
        for (int k = 0; k < 12; ++k) rc.initial[k] = a[k].get<double>();
        rc.has_initial = true;
        rc.raw["initial"] = a;
    }
    return rc;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    return parse_config(j);
}

}  // namespace triad
