#pragma once

// The demonstration grammar used by tests, the CLI examples and the
// benchmark generator: abstract-syntax-tree models (class declarations with
// typed fields) on the source side, class diagrams (classes and
// associations) on the target side.
//
//   ClassDecl --declaration--> FieldDecl --access--> TypeAccess --type--> ClassDecl
//   Class <--sourceEnd-- Association --targetEnd--> Class
//
// ClassToClass is the axiom (empty left side): it translates one class
// declaration into a class. FieldToAssociation translates a field plus its
// type reference into an association between the owning and the referenced
// class.

#include "mvtgg/history.hpp"
#include "mvtgg/tgg.hpp"
#include "mvtgg/triple_type_graph.hpp"

#include <memory>
#include <vector>

namespace mvtgg::ast2cd {

inline constexpr const char* kClassDecl = "ClassDecl";
inline constexpr const char* kFieldDecl = "FieldDecl";
inline constexpr const char* kTypeAccess = "TypeAccess";
inline constexpr const char* kDeclaration = "declaration";
inline constexpr const char* kAccess = "access";
inline constexpr const char* kTypeRef = "type";
inline constexpr const char* kClass = "Class";
inline constexpr const char* kAssociation = "Association";
inline constexpr const char* kSourceEnd = "sourceEnd";
inline constexpr const char* kTargetEnd = "targetEnd";

std::shared_ptr<const TripleTypeGraph> type_graph();

std::vector<TGGRule> grammar(std::shared_ptr<const TripleTypeGraph> types);

// Two class declarations, one field in the first class typed by the second.
TypedGraph example_model(const std::shared_ptr<const TripleTypeGraph>& types);

// Two versions: the example model, then a second field in the opposite
// direction added on top of it.
VersionHistory example_history(const std::shared_ptr<const TripleTypeGraph>& types);

} // namespace mvtgg::ast2cd
