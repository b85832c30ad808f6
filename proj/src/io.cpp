#include "hrv/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hrv/error.hpp"

namespace hrv::io {

namespace {

constexpr std::string_view kEcgHeader = "t_s,mv";
constexpr std::string_view kRrHeader = "t_s,rr_ms";
constexpr std::string_view kPeriodogramHeader = "f_hz,power";

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

std::ofstream open_out(const fs::path &path) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::io_error, "cannot write " + path.string());
  return out;
}

std::string where(const fs::path &path, std::size_t line) {
  return path.string() + " line " + std::to_string(line);
}

std::string track_header() {
  std::string h = "window_start_s,window_end_s";
  for (auto name : kFeatureNames) {
    h += ',';
    h += name;
  }
  h += ",label";
  return h;
}

} // namespace

std::string format_number(double v) {
  if (is_undefined(v))
    return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

CsvTable read_csv(const fs::path &path, std::optional<std::string_view> expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::io_error, "cannot read " + path.string());
  CsvTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (number == 1 && expected_header) {
      if (line != *expected_header)
        throw Error(ErrorKind::parse_error, where(path, 1) + ": expected header '" +
                                                std::string(*expected_header) + "'");
      table.header = split(line);
      continue;
    }
    if (line.empty())
      continue;
    table.rows.push_back(split(line));
    table.lines.push_back(number);
  }
  if (expected_header && number == 0)
    throw Error(ErrorKind::parse_error, where(path, 1) + ": missing header");
  return table;
}

double parse_number(std::string_view field, const fs::path &path, std::size_t line, bool allow_empty) {
  if (field.empty()) {
    if (allow_empty)
      return kUndefined;
    throw Error(ErrorKind::parse_error, where(path, line) + ": empty field");
  }
  double v = 0.0;
  const auto *first = field.data();
  const auto *last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw Error(ErrorKind::parse_error, where(path, line) + ": not a number: '" + std::string(field) + "'");
  return v;
}

EcgRecording read_ecg_csv(const fs::path &path, std::optional<double> rate_hz) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe)
    throw Error(ErrorKind::io_error, "cannot read " + path.string());
  std::string first;
  std::getline(probe, first);
  if (!first.empty() && first.back() == '\r')
    first.pop_back();
  probe.close();

  if (first == kEcgHeader) {
    const auto table = read_csv(path, kEcgHeader);
    std::vector<double> t, mv;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto &row = table.rows[r];
      if (row.size() != 2)
        throw Error(ErrorKind::parse_error, where(path, table.lines[r]) + ": expected 2 fields");
      t.push_back(parse_number(row[0], path, table.lines[r]));
      mv.push_back(parse_number(row[1], path, table.lines[r]));
    }
    double rate = 0.0;
    if (rate_hz) {
      rate = *rate_hz;
    } else {
      if (t.size() < 2 || !(t.back() > t.front()))
        throw Error(ErrorKind::parse_error, path.string() + ": cannot infer the sampling rate");
      rate = static_cast<double>(t.size() - 1) / (t.back() - t.front());
    }
    return EcgRecording(std::move(mv), rate);
  }

  if (!rate_hz)
    throw Error(ErrorKind::invalid_argument,
                path.string() + ": headerless ECG needs an explicit sampling rate");
  const auto table = read_csv(path);
  std::vector<double> mv;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto &row = table.rows[r];
    if (row.size() != 1)
      throw Error(ErrorKind::parse_error, where(path, table.lines[r]) + ": expected 1 field");
    mv.push_back(parse_number(row[0], path, table.lines[r]));
  }
  return EcgRecording(std::move(mv), *rate_hz);
}

void write_ecg_csv(const fs::path &path, const EcgRecording &rec) {
  auto out = open_out(path);
  out << kEcgHeader << '\n';
  const auto x = rec.samples();
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_number(static_cast<double>(i) / rec.sampling_rate()) << ',' << format_number(x[i]) << '\n';
}

RrSeries read_rr_csv(const fs::path &path) {
  const auto table = read_csv(path, kRrHeader);
  std::vector<double> t, rr;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto &row = table.rows[r];
    if (row.size() != 2)
      throw Error(ErrorKind::parse_error, where(path, table.lines[r]) + ": expected 2 fields");
    t.push_back(parse_number(row[0], path, table.lines[r]));
    rr.push_back(parse_number(row[1], path, table.lines[r]));
  }
  try {
    return RrSeries(std::move(rr), std::move(t));
  } catch (const Error &e) {
    throw Error(ErrorKind::parse_error, path.string() + ": " + e.what());
  }
}

void write_rr_csv(const fs::path &path, const RrSeries &rr) {
  auto out = open_out(path);
  out << kRrHeader << '\n';
  for (std::size_t i = 0; i < rr.size(); ++i)
    out << format_number(rr.onsets()[i]) << ',' << format_number(rr.intervals()[i]) << '\n';
}

bool looks_like_rr_csv(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::string first;
  std::getline(in, first);
  if (!first.empty() && first.back() == '\r')
    first.pop_back();
  return first == kRrHeader;
}

void write_track_csv(const fs::path &path, const std::vector<IndexVector> &track, std::string_view label) {
  auto out = open_out(path);
  out << track_header() << '\n';
  for (const auto &iv : track) {
    out << format_number(iv.window_start_s) << ',' << format_number(iv.window_end_s);
    for (double v : iv.values)
      out << ',' << format_number(v);
    out << ',' << label << '\n';
  }
}

Track read_track_csv(const fs::path &path) {
  const auto header = track_header();
  const auto table = read_csv(path, header);
  Track track;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto &row = table.rows[r];
    const std::size_t line = table.lines[r];
    if (row.size() != kFeatureCount + 3)
      throw Error(ErrorKind::parse_error, where(path, line) + ": expected " +
                                              std::to_string(kFeatureCount + 3) + " fields");
    IndexVector iv;
    iv.window_start_s = parse_number(row[0], path, line);
    iv.window_end_s = parse_number(row[1], path, line);
    bool any = false;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      iv.values[f] = parse_number(row[f + 2], path, line, true);
      any = any || !is_undefined(iv.values[f]);
    }
    iv.low_density = !any;
    if (r == 0)
      track.label = row.back();
    else if (row.back() != track.label)
      throw Error(ErrorKind::parse_error, where(path, line) + ": label differs from earlier rows");
    track.rows.push_back(iv);
  }
  return track;
}

void write_periodogram_csv(const fs::path &path, const Periodogram &p) {
  auto out = open_out(path);
  out << kPeriodogramHeader << '\n';
  for (std::size_t k = 0; k < p.freqs.size(); ++k)
    out << format_number(p.freqs[k]) << ',' << format_number(p.power[k]) << '\n';
}

std::vector<ManifestEntry> read_manifest(const fs::path &path) {
  const auto table = read_csv(path);
  if (table.rows.empty())
    throw Error(ErrorKind::parse_error, path.string() + ": empty manifest");
  const auto &head = table.rows.front();
  const bool with_subject = head.size() == 3;
  if (!((head.size() == 2 && head[0] == "path" && head[1] == "label") ||
        (with_subject && head[0] == "path" && head[1] == "label" && head[2] == "subject")))
    throw Error(ErrorKind::parse_error, where(path, table.lines.front()) +
                                            ": expected header 'path,label' or 'path,label,subject'");
  std::vector<ManifestEntry> out;
  const auto base = path.parent_path();
  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const auto &row = table.rows[r];
    if (row.size() != head.size())
      throw Error(ErrorKind::parse_error, where(path, table.lines[r]) + ": wrong field count");
    ManifestEntry e;
    e.path = fs::path(row[0]).is_absolute() ? fs::path(row[0]) : base / row[0];
    e.label = row[1];
    if (with_subject)
      e.subject = row[2];
    out.push_back(std::move(e));
  }
  return out;
}

void write_manifest(const fs::path &path, const std::vector<ManifestEntry> &entries) {
  auto out = open_out(path);
  const bool with_subject =
      std::any_of(entries.begin(), entries.end(), [](const auto &e) { return !e.subject.empty(); });
  out << (with_subject ? "path,label,subject" : "path,label") << '\n';
  const auto base = path.parent_path();
  for (const auto &e : entries) {
    auto p = e.path;
    if (!base.empty() && p.is_absolute() == fs::path(base).is_absolute()) {
      const auto rel = p.lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..")
        p = rel;
    }
    out << p.generic_string() << ',' << e.label;
    if (with_subject)
      out << ',' << e.subject;
    out << '\n';
  }
}

} // namespace hrv::io
