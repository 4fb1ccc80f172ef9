#include "mkg/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "mkg/error.hpp"

namespace mkg {

bool is_core(Label label) {
  return std::find(kCoreLabels.begin(), kCoreLabels.end(), label) !=
         kCoreLabels.end();
}

bool is_strict(Label label) {
  return std::find(kStrictLabels.begin(), kStrictLabels.end(), label) !=
         kStrictLabels.end();
}

bool is_loose(Label label) {
  return std::find(kLooseLabels.begin(), kLooseLabels.end(), label) !=
         kLooseLabels.end();
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Formula: return "Formula";
    case Label::Name: return "Name";
    case Label::Acronym: return "Acronym";
    case Label::Descriptor: return "Descriptor";
    case Label::Property: return "Property";
    case Label::Application: return "Application";
    case Label::StructurePhase: return "Structure/Phase";
    case Label::Synthesis: return "Synthesis";
    case Label::Characterization: return "Characterization";
    case Label::Domain: return "Domain";
    case Label::DOI: return "DOI";
  }
  return "";
}

namespace {
std::string squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '/' || c == '_' || c == '-' || c == ' ' || c == '\t') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}
}  // namespace

std::optional<Label> try_label_of(std::string_view name) {
  const std::string key = squash(name);
  for (Label label : kAllLabels) {
    if (squash(to_string(label)) == key) return label;
  }
  return std::nullopt;
}

Label label_of(std::string_view name) {
  if (auto label = try_label_of(name)) return *label;
  throw Error(ErrorKind::UnknownLabel, std::string(name));
}

Label core_priority(const std::set<Label>& present) {
  for (Label label : kCoreLabels) {
    if (present.count(label)) return label;
  }
  throw Error(ErrorKind::NoCoreLabel, "no Formula, Name or Acronym present");
}

std::string_view to_string(RelationKind rel) {
  switch (rel) {
    case RelationKind::HAS_NAME: return "HAS_NAME";
    case RelationKind::HAS_ACRONYM: return "HAS_ACRONYM";
    case RelationKind::HAS_PROPERTY: return "HAS_PROPERTY";
    case RelationKind::HAS_DESCRIPTOR: return "HAS_DESCRIPTOR";
    case RelationKind::HAS_APPLICATION: return "HAS_APPLICATION";
    case RelationKind::HAS_STRUCTURE_PHASE: return "HAS_STRUCTURE_PHASE";
    case RelationKind::SYNTHESIZED_BY: return "SYNTHESIZED_BY";
    case RelationKind::CHARACTERIZED_BY: return "CHARACTERIZED_BY";
    case RelationKind::HAS_DOMAIN: return "HAS_DOMAIN";
    case RelationKind::MENTIONED_IN: return "MENTIONED_IN";
  }
  return "";
}

std::optional<RelationKind> try_relation_of(std::string_view name) {
  for (RelationKind rel : kAllRelations) {
    if (to_string(rel) == name) return rel;
  }
  return std::nullopt;
}

RelationSignature signature(RelationKind rel) {
  switch (rel) {
    case RelationKind::HAS_NAME: return {SourceClass::Formula, Label::Name};
    case RelationKind::HAS_ACRONYM: return {SourceClass::Core, Label::Acronym};
    case RelationKind::HAS_PROPERTY:
      return {SourceClass::CoreOrApplication, Label::Property};
    case RelationKind::HAS_DESCRIPTOR:
      return {SourceClass::CoreOrApplication, Label::Descriptor};
    case RelationKind::HAS_APPLICATION:
      return {SourceClass::Core, Label::Application};
    case RelationKind::HAS_STRUCTURE_PHASE:
      return {SourceClass::Core, Label::StructurePhase};
    case RelationKind::SYNTHESIZED_BY:
      return {SourceClass::Core, Label::Synthesis};
    case RelationKind::CHARACTERIZED_BY:
      return {SourceClass::Core, Label::Characterization};
    case RelationKind::HAS_DOMAIN:
      return {SourceClass::Application, Label::Domain};
    case RelationKind::MENTIONED_IN:
      return {SourceClass::AnyEntity, Label::DOI};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown relation");
}

bool source_allowed(RelationKind rel, Label source) {
  switch (signature(rel).source) {
    case SourceClass::Formula: return source == Label::Formula;
    case SourceClass::Core: return is_core(source);
    case SourceClass::CoreOrApplication:
      return is_core(source) || source == Label::Application;
    case SourceClass::Application: return source == Label::Application;
    case SourceClass::AnyEntity: return source != Label::DOI;
  }
  return false;
}

RelationKind relation_for(Label target) {
  for (RelationKind rel : kAllRelations) {
    if (signature(rel).target == target) return rel;
  }
  throw Error(ErrorKind::InvalidArgument,
              std::string(to_string(target)) + " is never a relation target");
}

}  // namespace mkg
