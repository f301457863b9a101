#include "sharesim/sweep_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string_view>

#include "sharesim/errors.hpp"

namespace sharesim {

namespace {

constexpr const char* kCurveHeader = "sample_size,mse,ci_low,ci_high,failures";
constexpr const char* kCombinedHeader =
    "estimator,variant_i,variant_j,sample_size,mse,ci_low,ci_high,failures";

// Shortest round-trip decimal form, stable across runs.
std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string curve_file_name(EstimatorKind kind, std::int32_t i, std::int32_t j) {
  return std::string("mse_") + to_string(kind) + "_pair_" + std::to_string(i) + "_" +
         std::to_string(j) + ".csv";
}

SweepOutputFiles write_sweep_outputs(const std::filesystem::path& out_dir,
                                     const SweepResult& result, const RunManifest& manifest) {
  std::filesystem::create_directories(out_dir);
  SweepOutputFiles files;
  files.manifest = out_dir / kSweepManifestFile;
  write_manifest_file(files.manifest, manifest);

  files.combined = out_dir / kCombinedSweepFile;
  std::ofstream combined = open_for_write(files.combined);
  combined << "# see " << kSweepManifestFile << " for the generating run\n"
           << kCombinedHeader << '\n';

  const auto variants = static_cast<std::int32_t>(result.plan.config.variant_count());
  for (EstimatorKind kind : result.plan.estimators) {
    for (std::int32_t i = 0; i < variants; ++i) {
      for (std::int32_t j = i + 1; j < variants; ++j) {
        const std::filesystem::path path = out_dir / curve_file_name(kind, i, j);
        std::ofstream curve = open_for_write(path);
        curve << "# estimator=" << to_string(kind) << " pair=(" << i << "," << j << ")\n"
              << "# see " << kSweepManifestFile << " for the generating run\n"
              << kCurveHeader << '\n';
        for (std::int64_t n : result.plan.sample_sizes) {
          const SweepCell* cell = result.find(kind, i, j, n);
          if (cell == nullptr) continue;
          const std::string row = std::to_string(n) + "," + format_double(cell->mse) + "," +
                                  format_double(cell->ci_low) + "," +
                                  format_double(cell->ci_high) + "," +
                                  std::to_string(cell->failure_count);
          curve << row << '\n';
          combined << to_string(kind) << ',' << i << ',' << j << ',' << row << '\n';
        }
        curve.flush();
        if (!curve) throw IoError("failed while writing " + path.string());
        files.curves.push_back(path);
      }
    }
  }
  combined.flush();
  if (!combined) throw IoError("failed while writing " + files.combined.string());
  return files;
}

namespace {

double parse_double_field(std::string_view field, std::size_t line, const char* name) {
  // std::from_chars for doubles is incomplete in some standard libraries;
  // strtod on a NUL-terminated copy is portable and accepts nan/inf.
  const std::string copy(field);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) {
    throw ParseError(line, std::string(name) + " is not a number: '" + copy + "'");
  }
  return value;
}

std::int64_t parse_int_field(std::string_view field, std::size_t line, const char* name) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, std::string(name) + " is not an integer: '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::vector<CurvePoint> read_combined_sweep(const std::filesystem::path& combined_csv) {
  std::ifstream in(combined_csv, std::ios::binary);
  if (!in) throw IoError("cannot open " + combined_csv.string());

  std::vector<CurvePoint> points;
  std::string raw;
  std::size_t line = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (text.empty() || text.front() == '#') continue;
    if (!seen_header) {
      if (text != kCombinedHeader) {
        throw ParseError(line, "unexpected header; is this " + std::string(kCombinedSweepFile) + "?");
      }
      seen_header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= text.size(); ++k) {
      if (k == text.size() || text[k] == ',') {
        fields.push_back(text.substr(start, k - start));
        start = k + 1;
      }
    }
    if (fields.size() != 8) throw ParseError(line, "expected 8 comma-separated fields");
    CurvePoint p;
    p.estimator = std::string(fields[0]);
    if (!parse_estimator_kind(p.estimator)) {
      throw ParseError(line, "unknown estimator '" + p.estimator + "'");
    }
    p.variant_i = static_cast<std::int32_t>(parse_int_field(fields[1], line, "variant_i"));
    p.variant_j = static_cast<std::int32_t>(parse_int_field(fields[2], line, "variant_j"));
    p.sample_size = parse_int_field(fields[3], line, "sample_size");
    p.mse = parse_double_field(fields[4], line, "mse");
    p.ci_low = parse_double_field(fields[5], line, "ci_low");
    p.ci_high = parse_double_field(fields[6], line, "ci_high");
    p.failures = static_cast<std::int32_t>(parse_int_field(fields[7], line, "failures"));
    points.push_back(std::move(p));
  }
  if (!seen_header) throw ParseError(1, "empty combined sweep table");
  return points;
}

}  // namespace sharesim
