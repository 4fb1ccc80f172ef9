#pragma once

// Closed label set and relation vocabulary of the materials graph.
//
// Formula, Name and Acronym are the core labels: they identify a material
// and are the only labels allowed as the head of an attribute triple.
// Application nodes carry their own Property / Descriptor / Domain edges.

#include <array>
#include <optional>
#include <set>
#include <string_view>

namespace mkg {

enum class Label {
  Formula,
  Name,
  Acronym,
  Descriptor,
  Property,
  Application,
  StructurePhase,
  Synthesis,
  Characterization,
  Domain,
  DOI,
};

inline constexpr std::array<Label, 11> kAllLabels = {
    Label::Formula,     Label::Name,           Label::Acronym,
    Label::Descriptor,  Label::Property,       Label::Application,
    Label::StructurePhase, Label::Synthesis,   Label::Characterization,
    Label::Domain,      Label::DOI,
};

// Core labels in decreasing priority.
inline constexpr std::array<Label, 3> kCoreLabels = {Label::Formula, Label::Name,
                                                     Label::Acronym};
// Dictionary-normalized labels; misses are dropped.
inline constexpr std::array<Label, 4> kStrictLabels = {
    Label::Application, Label::StructurePhase, Label::Synthesis,
    Label::Characterization};
// Loosely normalized labels; misses are kept in folded form.
inline constexpr std::array<Label, 2> kLooseLabels = {Label::Property,
                                                      Label::Descriptor};
// Material attributes compared by the weighted Jaccard score.
inline constexpr std::array<Label, 5> kAttributeLabels = {
    Label::Property, Label::Descriptor, Label::StructurePhase,
    Label::Synthesis, Label::Characterization};

bool is_core(Label label);
bool is_strict(Label label);
bool is_loose(Label label);

// Bit-exact spelling used in files ("Structure/Phase" for StructurePhase).
std::string_view to_string(Label label);

// Case-insensitive; ignores '/', '_', '-' and spaces. Throws
// Error(UnknownLabel).
Label label_of(std::string_view name);
std::optional<Label> try_label_of(std::string_view name);

// Formula > Name > Acronym. Throws Error(NoCoreLabel).
Label core_priority(const std::set<Label>& present);

enum class RelationKind {
  HAS_NAME,
  HAS_ACRONYM,
  HAS_PROPERTY,
  HAS_DESCRIPTOR,
  HAS_APPLICATION,
  HAS_STRUCTURE_PHASE,
  SYNTHESIZED_BY,
  CHARACTERIZED_BY,
  HAS_DOMAIN,
  MENTIONED_IN,
};

inline constexpr std::array<RelationKind, 10> kAllRelations = {
    RelationKind::HAS_NAME,          RelationKind::HAS_ACRONYM,
    RelationKind::HAS_PROPERTY,      RelationKind::HAS_DESCRIPTOR,
    RelationKind::HAS_APPLICATION,   RelationKind::HAS_STRUCTURE_PHASE,
    RelationKind::SYNTHESIZED_BY,    RelationKind::CHARACTERIZED_BY,
    RelationKind::HAS_DOMAIN,        RelationKind::MENTIONED_IN,
};

std::string_view to_string(RelationKind rel);
std::optional<RelationKind> try_relation_of(std::string_view name);

// Which nodes may originate an edge of a given kind.
enum class SourceClass {
  Formula,            // HAS_NAME
  Core,               // HAS_ACRONYM, HAS_APPLICATION, HAS_STRUCTURE_PHASE, ...
  CoreOrApplication,  // HAS_PROPERTY, HAS_DESCRIPTOR
  Application,        // HAS_DOMAIN
  AnyEntity,          // MENTIONED_IN
};

struct RelationSignature {
  SourceClass source;
  Label target;
};

RelationSignature signature(RelationKind rel);
bool source_allowed(RelationKind rel, Label source);

// Relation that links a material (or application) to a node of `target`.
// Throws Error(InvalidArgument) for Formula, which is never a tail.
RelationKind relation_for(Label target);

}  // namespace mkg
