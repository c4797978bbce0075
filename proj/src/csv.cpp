#include "pdmp/csv.hpp"

#include <fmt/format.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "pdmp/error.hpp"

namespace pdmp {
namespace {

constexpr std::array<std::string_view, 5> kQuatColumns{"t", "qw", "qx", "qy",
                                                       "qz"};
constexpr std::array<std::string_view, 2> kSignalColumns{"t", "u"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, const std::string& where) {
  double v = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(v)) {
    throw ParseError(where + ": not a finite number: '" + std::string(field) +
                     "'");
  }
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& in, std::span<const std::string_view> expected,
                  const std::string& source) {
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split(view);
    const std::string where = source + ":" + std::to_string(lineno);
    if (!have_header) {
      if (fields.size() != expected.size() ||
          !std::equal(fields.begin(), fields.end(), expected.begin())) {
        std::string want;
        for (const auto& e : expected) want += (want.empty() ? "" : ",") + std::string(e);
        throw ParseError(where + ": expected header '" + want + "'");
      }
      table.header.assign(fields.begin(), fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != expected.size()) {
      throw ParseError(where + ": expected " + std::to_string(expected.size()) +
                       " columns, got " + std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_number(f, where));
    table.rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw ParseError(source + ": missing header row");
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path,
                  std::span<const std::string_view> expected) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open '" + path.string() + "'");
  }
  return read_csv(in, expected, path.string());
}

namespace {

QuatTrajectory to_trajectory(const CsvTable& table, const std::string& source) {
  std::vector<double> t;
  std::vector<UnitQuaternion> q;
  t.reserve(table.rows.size());
  q.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const Eigen::Vector4d c(r[1], r[2], r[3], r[4]);
    if (std::abs(c.norm() - 1.0) > kCsvNormTolerance) {
      throw ParseError(source + ": data row " + std::to_string(i + 1) +
                       " has quaternion norm " + format_double(c.norm()));
    }
    t.push_back(r[0]);
    q.push_back(UnitQuaternion::normalized(c));
  }
  try {
    return QuatTrajectory::from_samples(std::move(t), std::move(q));
  } catch (const DegenerateInput& e) {
    throw ParseError(source + ": " + e.what());
  }
}

}  // namespace

QuatTrajectory read_quat_csv(std::istream& in, const std::string& source) {
  return to_trajectory(read_csv(in, kQuatColumns, source), source);
}

QuatTrajectory read_quat_csv(const std::filesystem::path& path) {
  return to_trajectory(read_csv(path, kQuatColumns), path.string());
}

ScalarSignal read_signal_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path, kSignalColumns);
  ScalarSignal s;
  for (const auto& r : table.rows) {
    s.timestamps.push_back(r[0]);
    s.values.push_back(r[1]);
  }
  if (s.values.size() < 3) {
    throw ParseError(path.string() + ": a signal needs at least 3 rows");
  }
  return s;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

void write_csv_header(std::ostream& out,
                      std::span<const std::string_view> columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << '\n';
}

void write_csv_row(std::ostream& out, std::span<const double> values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_double(values[i]);
  }
  line += '\n';
  out << line;
}

void write_quat_csv(std::ostream& out, const QuatTrajectory& traj) {
  write_csv_header(out, kQuatColumns);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto c = traj[i].coeffs();
    const std::array<double, 5> row{traj.timestamps()[i], c[0], c[1], c[2],
                                    c[3]};
    write_csv_row(out, row);
  }
}

}  // namespace pdmp
