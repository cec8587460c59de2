#pragma once

#include <map>
#include <string>

#include "json.hpp"

namespace bphi {

// Named numeric thresholds. Defaults are compiled in; a JSON file may override
// them globally ("defaults") or per check id ("checks": {id: {...}}).
class Tolerances {
public:
    static Tolerances defaults();
    static Tolerances from_json(const nlohmann::json& j);
    static Tolerances load(const std::string& path);

    double get(const std::string& check, const std::string& key) const;
    const std::map<std::string, double>& base() const { return base_; }
    nlohmann::json to_json() const;

private:
    std::map<std::string, double> base_;
    std::map<std::string, std::map<std::string, double>> per_check_;
};

}  // namespace bphi
