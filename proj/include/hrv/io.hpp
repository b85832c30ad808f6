#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrv/ecg.hpp"
#include "hrv/rr.hpp"
#include "hrv/spectral.hpp"
#include "hrv/windowing.hpp"

namespace hrv::io {

namespace fs = std::filesystem;

/// 9 significant digits; undefined values become an empty string.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header; ///< empty for headerless files
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines; ///< 1-based source line of each row
};

/// Comma-separated, no quoting. When `expected_header` is given the first
/// line must match it exactly.
CsvTable read_csv(const fs::path &path, std::optional<std::string_view> expected_header = std::nullopt);

/// Parses a decimal number; empty fields parse as undefined when `allow_empty`.
double parse_number(std::string_view field, const fs::path &path, std::size_t line, bool allow_empty = false);

/// `t_s,mv` with a header (rate inferred from the time column unless given) or
/// a headerless voltage column at `rate_hz`.
EcgRecording read_ecg_csv(const fs::path &path, std::optional<double> rate_hz = std::nullopt);
void write_ecg_csv(const fs::path &path, const EcgRecording &rec);

RrSeries read_rr_csv(const fs::path &path);
void write_rr_csv(const fs::path &path, const RrSeries &rr);

/// True when the file starts with the `t_s,rr_ms` header.
bool looks_like_rr_csv(const fs::path &path);

struct Track {
  std::vector<IndexVector> rows;
  std::string label;
};

void write_track_csv(const fs::path &path, const std::vector<IndexVector> &track, std::string_view label);
Track read_track_csv(const fs::path &path);

void write_periodogram_csv(const fs::path &path, const Periodogram &p);

struct ManifestEntry {
  fs::path path;
  std::string label;
  std::string subject; ///< empty when the manifest has no subject column
};

/// `path,label` with an optional third `subject` column. Relative paths are
/// resolved against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const fs::path &path);
/// Paths are written relative to the manifest's directory when possible.
void write_manifest(const fs::path &path, const std::vector<ManifestEntry> &entries);

} // namespace hrv::io
