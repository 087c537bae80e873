#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "interq/model.hpp"

namespace interq {

/// Checks every Platform invariant and returns a copy with link budgets
/// resolved and the module -> incident-link map filled in.
///
/// Errors: EmptyPlatform, DanglingLinkEndpoint, InvalidFidelity,
/// ClassicalLinkWithQuantumFields, InvalidPlatform (any other violated bound).
Platform validate_platform(Platform p);

/// Ids of the links with `module` as an endpoint, in ascending order.
/// Throws Error(UnknownModule) if the module does not exist.
std::vector<std::string> incident_links(const Platform& p, std::string_view module);

/// Classical link with the smallest feed-forward delay, or nullptr.
const LinkProfile* fastest_classical_link(const Platform& p);

} // namespace interq
