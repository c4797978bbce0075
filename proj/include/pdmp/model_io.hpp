#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "pdmp/periodic_dmp.hpp"
#include "pdmp/qp_dmp.hpp"
#include "pdmp/rmp_dmp.hpp"

namespace pdmp {

using AnyModel = std::variant<PeriodicDmpModel, rmp::RmpDmpModel, qp::QpDmpModel>;

/// Current model document version.
inline constexpr int kModelFormatVersion = 1;

/// JSON document with a "format"/"version"/"kind" envelope. Doubles are
/// written in shortest round-trip form, so save -> load is bit exact.
std::string dump_model(const AnyModel& model);

/// Throws ParseError on malformed documents or unknown versions, and
/// DomainError when the decoded model breaks an invariant.
AnyModel parse_model(std::string_view text);

void save_model(const std::filesystem::path& path, const AnyModel& model);
AnyModel load_model(const std::filesystem::path& path);

}  // namespace pdmp
