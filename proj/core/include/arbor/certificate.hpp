#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace arbor {

enum class Verdict { TypeI, NonamenableLvN, Inconclusive };

std::string verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& name);

// One audited step of a decision: the result it invokes (a stable id), a
// human-readable statement of that result, and the data making the step
// checkable by independent recomputation.
struct CertStep {
  std::string result;
  std::string citation;
  nlohmann::ordered_json witness;
};

// A machine-checkable verdict: the conclusion, the caller-supplied
// assumptions it depends on, and the steps justifying it.
struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> assumptions;
  std::vector<CertStep> steps;
};

// Fixed field order: schema, verdict, assumptions, steps; each step:
// result, citation, witness.  Identical certificates serialize to identical
// bytes.
nlohmann::ordered_json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::ordered_json& j);

// Canonical dump of any JSON value: 2-space indentation plus final newline.
std::string dump_json(const nlohmann::ordered_json& j);

// Plain-text rendering of the same content (verdict, assumptions, steps).
std::string certificate_to_text(const Certificate& cert);

}  // namespace arbor
