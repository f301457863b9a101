#include "sharesim/session_log.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string_view>

#include "sharesim/errors.hpp"

namespace sharesim {

void write_session_log(std::ostream& out, const Dataset& dataset,
                       std::span<const std::string> comment_lines) {
  for (const std::string& line : comment_lines) {
    out << "# " << line << '\n';
  }
  out << kSessionLogHeader << '\n';
  char buffer[96];
  for (const Trajectory& t : dataset.trajectories) {
    for (const SessionRecord& s : t.sessions) {
      const int len = std::snprintf(buffer, sizeof buffer, "%lld,%d,%d,%d\n",
                                    static_cast<long long>(s.trajectory_id), s.position,
                                    s.variant.index, s.reward);
      out.write(buffer, len);
    }
  }
}

void write_session_log_file(const std::filesystem::path& path, const Dataset& dataset,
                            std::span<const std::string> comment_lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_session_log(out, dataset, comment_lines);
  out.flush();
  if (!out) throw IoError("failed while writing " + path.string());
}

namespace {

std::int64_t parse_int_field(std::string_view field, std::size_t line, const char* name) {
  std::int64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw ParseError(line, std::string(name) + " is not an integer: '" + std::string(field) + "'");
  }
  return value;
}

struct ParsedRow {
  std::int64_t trajectory_id;
  std::int64_t position;
  std::int64_t variant;
  std::int64_t reward;
};

ParsedRow parse_row(std::string_view text, std::size_t line) {
  std::array<std::string_view, 4> fields;
  std::size_t count = 0;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= text.size(); ++k) {
    if (k == text.size() || text[k] == ',') {
      if (count == 4) throw ParseError(line, "expected 4 comma-separated fields");
      fields[count++] = text.substr(start, k - start);
      start = k + 1;
    }
  }
  if (count != 4) throw ParseError(line, "expected 4 comma-separated fields");
  return ParsedRow{parse_int_field(fields[0], line, "trajectory_id"),
                   parse_int_field(fields[1], line, "position"),
                   parse_int_field(fields[2], line, "variant"),
                   parse_int_field(fields[3], line, "reward")};
}

}  // namespace

Dataset parse_session_log(std::istream& in, ProductionPolicy logging_policy) {
  const auto variants = static_cast<std::int64_t>(logging_policy.variant_count());
  Dataset dataset;
  dataset.logging_policy = std::move(logging_policy);

  Trajectory current;
  bool seen_header = false;
  std::string raw;
  std::size_t line = 0;

  auto finish_trajectory = [&](std::size_t at_line) {
    if (current.sessions.empty()) return;
    if (current.sessions.back().reward != 0) {
      throw ParseError(at_line, "trajectory " + std::to_string(current.sessions.back().trajectory_id) +
                                    " does not end with a reward-0 session");
    }
    dataset.trajectories.push_back(std::move(current));
    current = Trajectory{};
  };

  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (text.empty()) continue;
    if (text.front() == '#') continue;
    if (!seen_header && text == kSessionLogHeader) {
      seen_header = true;
      continue;
    }
    seen_header = true;

    const ParsedRow row = parse_row(text, line);
    if (row.reward != 0 && row.reward != 1) {
      throw ParseError(line, "reward must be 0 or 1, got " + std::to_string(row.reward));
    }
    if (row.variant < 0 || row.variant >= variants) {
      throw ParseError(line, "variant " + std::to_string(row.variant) + " is outside the policy's " +
                                 std::to_string(variants) + " variants");
    }
    if (row.position < 0 || row.position > std::numeric_limits<std::int32_t>::max()) {
      throw ParseError(line, "position " + std::to_string(row.position) + " is out of range");
    }

    const bool starts_new = current.sessions.empty() ||
                            current.sessions.back().trajectory_id != row.trajectory_id;
    if (starts_new) {
      finish_trajectory(line);
      if (row.position != 0) {
        throw ParseError(line, "trajectory " + std::to_string(row.trajectory_id) +
                                   " starts at position " + std::to_string(row.position) +
                                   ", expected 0");
      }
    } else {
      const SessionRecord& previous = current.sessions.back();
      if (previous.reward == 0) {
        throw ParseError(line, "trajectory " + std::to_string(row.trajectory_id) +
                                   " continues past a reward-0 session");
      }
      if (row.position != previous.position + 1) {
        throw ParseError(line, "position " + std::to_string(row.position) +
                                   " does not follow position " + std::to_string(previous.position));
      }
    }
    current.sessions.push_back(SessionRecord{row.trajectory_id,
                                             static_cast<std::int32_t>(row.position),
                                             VariantId{static_cast<std::int32_t>(row.variant)},
                                             static_cast<std::int32_t>(row.reward)});
  }
  finish_trajectory(line == 0 ? 1 : line);
  return dataset;
}

Dataset parse_session_log_file(const std::filesystem::path& path, ProductionPolicy logging_policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_session_log(in, std::move(logging_policy));
}

}  // namespace sharesim
