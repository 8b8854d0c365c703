#include "qrr/report.hpp"

#include <cmath>

namespace qrr {

static double round_us(double ms) { return std::round(ms * 1000.0) / 1000.0; }

Json SolverReport::to_json(bool with_assignment) const {
    Json j;
    j["solver"] = solver;
    j["params"] = params;
    j["seed"] = seed;
    j["cut"] = cut;
    if (alpha) j["alpha"] = *alpha;
    j["time_ms"] = round_us(time_ms);
    Json st = Json::object();
    for (const auto& [k, v] : stage_times) st[k] = round_us(v);
    j["stage_times"] = st;
    if (!extra.empty()) j["extra"] = extra;
    if (with_assignment) {
        std::string s;
        s.reserve(z.size());
        for (int x : z) s.push_back(x > 0 ? '+' : '-');
        j["assignment"] = s;
    }
    return j;
}

}  // namespace qrr
