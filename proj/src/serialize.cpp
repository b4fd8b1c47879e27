#include "abt/serialize.hpp"

#include <json.hpp>

namespace abt {

namespace {

using nlohmann::json;

json parse(const std::string& text, const char* what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw DomainError(std::string("malformed ") + what + " JSON");
  }
  return doc;
}

void reject_unknown_keys(const json& doc, std::initializer_list<const char*> allowed,
                         const char* what) {
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw DomainError(std::string("unknown key \"") + item.key() + "\" in " + what +
                        " JSON");
    }
  }
}

}  // namespace

std::string sequence_to_json(const PhaseSequence& seq) {
  json doc;
  json& phases = doc["phases"] = json::array();
  for (const auto& entry : seq.phases) {
    if (entry.has_value()) {
      phases.push_back(entry->radians());
    } else {
      phases.push_back(nullptr);
    }
  }
  return doc.dump(2) + "\n";
}

PhaseSequence sequence_from_json(const std::string& text) {
  const json doc = parse(text, "phase sequence");
  if (!doc.is_object() || !doc.contains("phases") || !doc["phases"].is_array()) {
    throw DomainError("phase sequence JSON needs a \"phases\" array");
  }
  reject_unknown_keys(doc, {"phases"}, "phase sequence");
  PhaseSequence seq;
  for (const json& entry : doc["phases"]) {
    if (entry.is_null()) {
      seq.phases.emplace_back(std::nullopt);
    } else if (entry.is_number()) {
      seq.phases.emplace_back(ABPhase{entry.get<double>()});
    } else {
      throw DomainError("phase entries must be numbers or null");
    }
  }
  return seq;
}

std::string register_to_json(const EncodedRegister& reg) {
  json doc;
  doc["slot_phases"] = reg.slot_phases;
  doc["basis"] = reg.basis == RegisterBasis::Cat ? "cat" : "abstract";
  doc["alpha"] = {reg.alpha.real(), reg.alpha.imag()};
  return doc.dump(2) + "\n";
}

EncodedRegister register_from_json(const std::string& text) {
  const json doc = parse(text, "register");
  if (!doc.is_object()) throw DomainError("register JSON must be an object");
  reject_unknown_keys(doc, {"slot_phases", "basis", "alpha"}, "register");
  if (!doc.contains("slot_phases") || !doc["slot_phases"].is_array()) {
    throw DomainError("register JSON needs a \"slot_phases\" array");
  }

  EncodedRegister reg;
  for (const json& entry : doc["slot_phases"]) {
    if (!entry.is_number()) throw DomainError("slot phases must be numbers");
    reg.slot_phases.push_back(entry.get<double>());
  }
  if (doc.contains("basis")) {
    const std::string basis = doc["basis"].get<std::string>();
    if (basis == "cat") {
      reg.basis = RegisterBasis::Cat;
    } else if (basis == "abstract") {
      reg.basis = RegisterBasis::Abstract;
    } else {
      throw DomainError("register basis must be \"abstract\" or \"cat\"");
    }
  }
  if (doc.contains("alpha")) {
    const json& a = doc["alpha"];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
      throw DomainError("alpha must be a [re, im] pair");
    }
    reg.alpha = Complex(a[0].get<double>(), a[1].get<double>());
  }
  return reg;
}

}  // namespace abt
