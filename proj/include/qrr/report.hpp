#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qrr/graph.hpp"

namespace qrr {

using Json = nlohmann::ordered_json;

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double ms() const { return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count(); }
    void reset() { t0_ = std::chrono::steady_clock::now(); }

private:
    std::chrono::steady_clock::time_point t0_;
};

struct SolverReport {
    std::string solver;
    Json params = Json::object();
    std::uint64_t seed = 0;
    Assignment z;
    int cut = 0;
    std::optional<double> alpha;
    double time_ms = 0.0;
    std::vector<std::pair<std::string, double>> stage_times;
    Json extra = Json::object();

    // {solver, params, seed, cut, alpha?, time_ms, stage_times, ...}. Times are rounded
    // to microseconds.
    Json to_json(bool with_assignment = true) const;
};

}  // namespace qrr
