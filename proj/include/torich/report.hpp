#pragma once

// Suite reports and their serializations.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torich/weights.hpp"

namespace torich {

enum class Verdict { kPass, kFail, kSkip };

std::string_view verdict_name(Verdict v);

struct TaskResult {
  std::string theorem;
  std::string sheaf;
  std::string bundle;  // empty when untwisted
  std::string field;
  Verdict verdict = Verdict::kPass;
  std::string witness;  // reproduction hint for FAIL, reason for SKIP
  std::map<std::string, std::vector<std::vector<Int>>> tables;
  std::map<std::string, Int> values;
  std::optional<WeightCertificate> certificate;
  friend bool operator==(const TaskResult&, const TaskResult&) = default;
};

struct Report {
  std::string scene;
  std::string digest;
  std::string suite;
  std::vector<TaskResult> tasks;
  bool any_fail() const;
  friend bool operator==(const Report&, const Report&) = default;
};

enum class ReportFormat { kJson, kCsv, kText };

/// Throws Error(kParse) for anything but "json", "csv", "text".
ReportFormat parse_report_format(std::string_view name);

/// Deterministic: sorted keys, integers only, no timings.
std::string emit_report(const Report& report, ReportFormat format);
/// Inverse of the JSON emitter. Throws Error(kParse).
Report parse_report_json(std::string_view text);

}  // namespace torich
