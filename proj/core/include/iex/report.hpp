#pragma once

#include <string>
#include <vector>

#include "iex/verification.hpp"

namespace iex {

inline constexpr const char* kVersion = "0.1.0";

/// {"config_hash": ..., "version": ..., "reports": [...]} with the fixed
/// per-test schema {"test_name","n","statistic","threshold","pass","seed",
/// "notes"}.  Output is deterministic (stable key order, 17 significant
/// digits).
std::string gof_reports_to_json(const std::vector<GofReport>& reports,
                                const std::string& config_hash);

/// One-line JSON diagnostic for standard error.
std::string json_diagnostic(const std::string& kind, const std::string& message, int exit_code);

}  // namespace iex
