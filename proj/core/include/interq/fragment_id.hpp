#pragma once

// Fragment naming:
//   uncut job            "{job}"
//   LO part n            "{job}-LO-{n}"
//   LOCC cut pair n      "{job}-U-{n}" / "{job}-D-{n}"
//   QComm parts          "{job}_P" (first part), "{job}_X{n}" (the others)
// Job ids are restricted to [A-Za-z0-9.] so the forms above never collide.

#include <optional>
#include <string>
#include <string_view>

#include "interq/model.hpp"

namespace interq {

bool is_valid_job_id(std::string_view id);

std::string lo_fragment_id(std::string_view job, int n);
std::string upstream_fragment_id(std::string_view job, int n);
std::string downstream_fragment_id(std::string_view job, int n);
std::string remote_fragment_id(std::string_view job, int part_index);

struct ParsedFragmentId {
    std::optional<std::string> parent;
    Stage stage = Stage::FLAT;
    /// Subcircuit number; 0 for uncut jobs and the QComm primary part.
    int index = 0;

    friend bool operator==(const ParsedFragmentId&, const ParsedFragmentId&) = default;
};

/// Recovers parent and stage from a generated id. Throws Error(InvalidFragmentId).
ParsedFragmentId parse_fragment_id(std::string_view id);

} // namespace interq
