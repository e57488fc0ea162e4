#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "nil/nil.hpp"

namespace nil {

int exit_code(NilStatus s);
std::string outcome_string(NilStatus s);

// Machine-readable run record: outcome, interpolant in canonical printing,
// certification box, budgets, and the full per-iteration history. The
// "wall_ms" field is the only part two identical runs may disagree on.
nlohmann::json report_json(const Problem& prob, const std::string& name,
                           const std::string& mode, const NilResult& r,
                           double wall_ms, std::uint64_t seed);

// Few-line human summary of the same record.
std::string report_text(const Problem& prob, const std::string& name,
                        const std::string& mode, const NilResult& r,
                        double wall_ms, std::uint64_t seed);

}  // namespace nil
