#include "bphi/tolerances.hpp"

#include <fstream>
#include <stdexcept>

namespace bphi {

Tolerances Tolerances::defaults() {
    Tolerances t;
    t.base_ = {
        {"eta_modularity", 1e-10},
        {"level_relation", 1e-6},
        {"level_cutoff", 30},
        {"theta_numeric", 1e-10},
        {"minor_numeric", 1e-10},
        {"norm_identity", 1e-6},
        {"monte_carlo_rel", 5e-3},
        {"monte_carlo_samples", 4000},
        {"runtime_boundary", 1},
        {"runtime_level_relation", 30},
        {"runtime_resultant", 10},
        {"runtime_expansion", 300},
        {"runtime_norm_identity", 120},
        {"order_product", 10},
        {"order_jacobian", 6},
    };
    return t;
}

Tolerances Tolerances::from_json(const nlohmann::json& j) {
    Tolerances t = defaults();
    if (j.contains("defaults")) {
        for (const auto& [k, v] : j.at("defaults").items()) {
            if (!t.base_.count(k)) throw std::invalid_argument("unknown tolerance key: " + k);
            t.base_[k] = v.get<double>();
        }
    }
    if (j.contains("checks")) {
        for (const auto& [id, obj] : j.at("checks").items())
            for (const auto& [k, v] : obj.items()) {
                if (!t.base_.count(k)) throw std::invalid_argument("unknown tolerance key: " + k);
                t.per_check_[id][k] = v.get<double>();
            }
    }
    return t;
}

Tolerances Tolerances::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tolerance file " + path);
    return from_json(nlohmann::json::parse(in));
}

double Tolerances::get(const std::string& check, const std::string& key) const {
    auto it = per_check_.find(check);
    if (it != per_check_.end()) {
        auto jt = it->second.find(key);
        if (jt != it->second.end()) return jt->second;
    }
    auto bt = base_.find(key);
    if (bt == base_.end()) throw std::invalid_argument("unknown tolerance key: " + key);
    return bt->second;
}

nlohmann::json Tolerances::to_json() const {
    nlohmann::json j;
    j["defaults"] = base_;
    j["checks"] = nlohmann::json::object();
    for (const auto& [id, m] : per_check_) j["checks"][id] = m;
    return j;
}

}  // namespace bphi
