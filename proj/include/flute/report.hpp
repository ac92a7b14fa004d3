#pragma once
#include <string>

#include <json.hpp>

#include "flute/config.hpp"
#include "flute/criterion.hpp"

namespace flute {

/// Deterministic JSON form of a classification report (ordered keys; the
/// timestamp is the only non-reproducible field and is optional).
nlohmann::ordered_json report_to_json(const CriterionReport& report, const RunConfig& config,
                                      bool include_timestamp);

nlohmann::ordered_json sequence_to_json(const SequenceSpec& spec);

/// Process exit status encoding of the classification:
/// 0 first kind, 1 not first kind, 2 inconclusive.
int exit_status_of(const CriterionReport& report);

void write_text_file(const std::string& path, const std::string& content);

} // namespace flute
