#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdmp/trajectory.hpp"

namespace pdmp {

/// Rows further than this from unit norm are rejected; closer rows are
/// renormalized.
inline constexpr double kCsvNormTolerance = 1e-3;

/// Numeric table read from a CSV with a mandatory header row. Lines starting
/// with '#' and blank lines are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in, std::span<const std::string_view> expected,
                  const std::string& source);

/// Opens `path`; a missing or unreadable file is a ParseError naming it.
CsvTable read_csv(const std::filesystem::path& path,
                  std::span<const std::string_view> expected);

/// Parses `t,qw,qx,qy,qz` into a validated trajectory.
QuatTrajectory read_quat_csv(std::istream& in, const std::string& source);
QuatTrajectory read_quat_csv(const std::filesystem::path& path);

struct ScalarSignal {
  std::vector<double> timestamps;
  std::vector<double> values;
};

/// Parses `t,u`.
ScalarSignal read_signal_csv(const std::filesystem::path& path);

/// 17 significant digits, round-trip exact.
std::string format_double(double v);

void write_csv_header(std::ostream& out,
                      std::span<const std::string_view> columns);
void write_csv_row(std::ostream& out, std::span<const double> values);

void write_quat_csv(std::ostream& out, const QuatTrajectory& traj);

}  // namespace pdmp
