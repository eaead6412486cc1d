#pragma once

#include <string>

#include <json.hpp>

#include "arbor/graph_of_groups.hpp"
#include "arbor/group_ref.hpp"
#include "arbor/perm_group.hpp"
#include "arbor/permutation.hpp"
#include "arbor/serre_graph.hpp"

namespace arbor {

// JSON forms.  Parsing is strict: unknown fields, missing fields and type
// mismatches all raise invalid-input errors.  Serialization is
// deterministic (fixed field order, sorted collections), so equal values
// produce byte-identical dumps.
//
//   Permutation    {"degree": n, "images": [...]}   (0-based image table)
//                  — parsers also accept a 1-based cycle string such as
//                    "(1 2 3)(4 5)" wherever the degree is known from
//                    context.
//   PermGroup      {"degree": n, "generators": [Permutation, ...]}
//   SerreGraph     {"vertices": [{"id": ..., "boundary": bool}],
//                   "edges": [{"id", "origin", "target", "reverse"}]}
//                  — "boundary" may be omitted and defaults to false.
//   GraphOfGroups  the graph fields plus
//                  {"vertex_groups": {vertex: PermGroup | group-ref},
//                   "edge_groups": {geometric key: PermGroup},
//                   "inclusions": {directed edge: [Permutation, ...]
//                                  | {"leaf": ..., "images": [...]}}}
//                  — a bare PermGroup as a vertex group is a finite group
//                    whose leaf is the vertex itself; amalgams use the
//                    explicit {"kind": "amalgam", ...} reference form.  A
//                    bare image list maps the edge group onto the finite
//                    vertex group's generators; the object form names the
//                    leaf of an amalgam vertex group.

nlohmann::ordered_json permutation_to_json(const Permutation& p);
// `degree_hint` supplies the degree for cycle-string input and is checked
// against object input; pass -1 when context gives no degree.
Permutation permutation_from_json(const nlohmann::ordered_json& j, int degree_hint = -1);

nlohmann::ordered_json group_to_json(const PermGroup& group);
PermGroup group_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json graph_to_json(const SerreGraph& graph);
SerreGraph graph_from_json(const nlohmann::ordered_json& j);

// Group references use {"kind": "finite", "leaf": ..., "group": {...}} or
// {"kind": "amalgam", "label": ..., "left": ..., "right": ...,
//  "edge_group": {...}, "left_leaf": ..., "left_images": [...],
//  "right_leaf": ..., "right_images": [...]}.  `implicit_leaf` names the
// leaf a bare PermGroup object stands for (empty forbids the bare form).
nlohmann::ordered_json group_ref_to_json(const GroupRef& ref,
                                         const std::string& implicit_leaf = "");
GroupRef group_ref_from_json(const nlohmann::ordered_json& j,
                             const std::string& implicit_leaf = "");

nlohmann::ordered_json gog_to_json(const GraphOfGroups& gog);
GraphOfGroups gog_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json reduction_to_json(const ReductionResult& reduction);
ReductionResult reduction_from_json(const nlohmann::ordered_json& j);

// Reads and parses a JSON file; raises invalid-input errors with a
// "malformed JSON" message for unreadable or unparsable files.
nlohmann::ordered_json load_json_file(const std::string& path);

}  // namespace arbor
