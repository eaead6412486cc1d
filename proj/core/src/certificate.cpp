#include "arbor/certificate.hpp"

#include <sstream>

#include "arbor/error.hpp"

namespace arbor {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::TypeI:
      return "TypeI";
    case Verdict::NonamenableLvN:
      return "NonamenableLvN";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  throw_invalid("unknown verdict value");
}

Verdict verdict_from_name(const std::string& name) {
  if (name == "TypeI") return Verdict::TypeI;
  if (name == "NonamenableLvN") return Verdict::NonamenableLvN;
  if (name == "Inconclusive") return Verdict::Inconclusive;
  throw_invalid("unknown verdict name: " + name);
}

nlohmann::ordered_json certificate_to_json(const Certificate& cert) {
  nlohmann::ordered_json j;
  j["schema"] = "certificate/1";
  j["verdict"] = verdict_name(cert.verdict);
  j["assumptions"] = cert.assumptions;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const CertStep& step : cert.steps) {
    nlohmann::ordered_json s;
    s["result"] = step.result;
    s["citation"] = step.citation;
    s["witness"] = step.witness;
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  return j;
}

Certificate certificate_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw_invalid("certificate must be a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "schema" && key != "verdict" && key != "assumptions" && key != "steps") {
      throw_invalid("unknown certificate field: " + key);
    }
  }
  if (j.value("schema", "") != "certificate/1") {
    throw_invalid("unsupported certificate schema");
  }
  for (const char* field : {"verdict", "assumptions", "steps"}) {
    if (!j.contains(field)) {
      throw_invalid(std::string("missing certificate field: ") + field);
    }
  }
  if (!j.at("assumptions").is_array()) throw_invalid("assumptions must be an array");
  if (!j.at("steps").is_array()) throw_invalid("steps must be an array");
  Certificate cert;
  cert.verdict = verdict_from_name(j.at("verdict").get<std::string>());
  for (const auto& a : j.at("assumptions")) {
    if (!a.is_string()) throw_invalid("assumptions must be strings");
    cert.assumptions.push_back(a.get<std::string>());
  }
  for (const auto& s : j.at("steps")) {
    if (!s.is_object()) throw_invalid("certificate step must be an object");
    for (const auto& item : s.items()) {
      const std::string& key = item.key();
      if (key != "result" && key != "citation" && key != "witness") {
        throw_invalid("unknown certificate step field: " + key);
      }
    }
    for (const char* field : {"result", "citation", "witness"}) {
      if (!s.contains(field)) {
        throw_invalid(std::string("missing certificate step field: ") + field);
      }
    }
    if (!s.at("result").is_string() || !s.at("citation").is_string()) {
      throw_invalid("step result and citation must be strings");
    }
    CertStep step;
    step.result = s.at("result").get<std::string>();
    step.citation = s.at("citation").get<std::string>();
    step.witness = s.at("witness");
    cert.steps.push_back(std::move(step));
  }
  return cert;
}

std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

std::string certificate_to_text(const Certificate& cert) {
  std::ostringstream out;
  out << "verdict: " << verdict_name(cert.verdict) << "\n";
  out << "assumptions:";
  if (cert.assumptions.empty()) {
    out << " (none)\n";
  } else {
    out << "\n";
    for (const std::string& a : cert.assumptions) out << "  - " << a << "\n";
  }
  out << "steps:\n";
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const CertStep& step = cert.steps[i];
    out << "  " << (i + 1) << ". [" << step.result << "] " << step.citation << "\n";
    out << "     witness: " << step.witness.dump() << "\n";
  }
  return out.str();
}

}  // namespace arbor
