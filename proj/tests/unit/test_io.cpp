#include <doctest.h>

#include <fstream>
#include <random>

#include "hrv/error.hpp"
#include "hrv/io.hpp"
#include "hrv/synth.hpp"
#include "oracles.hpp"

using namespace hrv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hrv_io_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string &name) const { return path / name; }
};

void write_text(const fs::path &p, const std::string &text) { std::ofstream(p, std::ios::binary) << text; }

std::string error_text(auto &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("format_number") {
  CHECK(io::format_number(800.0) == "800");
  CHECK(io::format_number(0.123456789012) == "0.123456789");
  CHECK(io::format_number(kUndefined).empty());
}

TEST_CASE("RR CSV round trip") {
  TempDir dir;
  RrModel m;
  m.hf_amp = 20;
  m.noise_sd = 10;
  m.duration_s = 60;
  const auto rr = synth_rr(m);
  io::write_rr_csv(dir / "rr.csv", rr);
  CHECK(io::looks_like_rr_csv(dir / "rr.csv"));
  const auto back = io::read_rr_csv(dir / "rr.csv");
  REQUIRE(back.size() == rr.size());
  for (std::size_t i = 0; i < rr.size(); ++i) {
    CHECK(back.intervals()[i] == doctest::Approx(rr.intervals()[i]).epsilon(1e-8));
    CHECK(back.onsets()[i] == doctest::Approx(rr.onsets()[i]).epsilon(1e-8));
  }
}

TEST_CASE("ECG CSV round trip and rate inference") {
  TempDir dir;
  const auto ecg = synth_ecg({1.0, 2.0}, EcgSynthOptions{500.0, std::nullopt, 0, std::nullopt});
  io::write_ecg_csv(dir / "ecg.csv", ecg.recording);
  const auto back = io::read_ecg_csv(dir / "ecg.csv");
  CHECK(back.sampling_rate() == doctest::Approx(500.0));
  CHECK(back.size() == ecg.recording.size());
  CHECK_FALSE(io::looks_like_rr_csv(dir / "ecg.csv"));

  write_text(dir / "raw.csv", "0.1\n0.2\n0.3\n");
  CHECK_THROWS_AS(io::read_ecg_csv(dir / "raw.csv"), Error);
  const auto raw = io::read_ecg_csv(dir / "raw.csv", 250.0);
  CHECK(raw.size() == 3);
  CHECK(raw.sampling_rate() == 250.0);
}

TEST_CASE("parse errors name the file line") {
  TempDir dir;
  write_text(dir / "bad.csv", "t_s,rr_ms\n0.8,800\n1.6,abc\n");
  const auto msg = error_text([&] { io::read_rr_csv(dir / "bad.csv"); });
  CHECK(msg.find("line 3") != std::string::npos);

  write_text(dir / "fields.csv", "t_s,rr_ms\n0.8,800,1\n");
  CHECK(error_text([&] { io::read_rr_csv(dir / "fields.csv"); }).find("line 2") != std::string::npos);

  write_text(dir / "header.csv", "time,rr\n0.8,800\n");
  CHECK(error_text([&] { io::read_rr_csv(dir / "header.csv"); }).find("line 1") != std::string::npos);

  write_text(dir / "order.csv", "t_s,rr_ms\n1.6,800\n0.8,800\n");
  try {
    io::read_rr_csv(dir / "order.csv");
    FAIL("expected ParseError");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::parse_error);
  }
  write_text(dir / "ecg_bad.csv", "t_s,mv\n0,0.1\n0.001,x\n");
  CHECK(error_text([&] { io::read_ecg_csv(dir / "ecg_bad.csv"); }).find("line 3") != std::string::npos);

  try {
    io::read_rr_csv(dir / "missing.csv");
    FAIL("expected IoError");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::io_error);
  }
}

TEST_CASE("track CSV round trip keeps undefined values") {
  TempDir dir;
  std::vector<IndexVector> track(3);
  for (std::size_t r = 0; r < 2; ++r) {
    track[r].window_start_s = 15.0 * static_cast<double>(r);
    track[r].window_end_s = track[r].window_start_s + 300.0;
    for (std::size_t f = 0; f < kFeatureCount; ++f)
      track[r].values[f] = 1.5 * static_cast<double>(f + r);
  }
  track[1][Feature::lf_hf] = kUndefined;
  track[2].window_start_s = 30;
  track[2].window_end_s = 330;
  track[2].low_density = true;
  io::write_track_csv(dir / "t.csv", track, "hot");
  const auto back = io::read_track_csv(dir / "t.csv");
  CHECK(back.label == "hot");
  REQUIRE(back.rows.size() == 3);
  CHECK(back.rows[0].values == track[0].values);
  CHECK(is_undefined(back.rows[1][Feature::lf_hf]));
  CHECK(back.rows[1][Feature::sdrr] == track[1][Feature::sdrr]);
  CHECK(back.rows[2].low_density);
  CHECK_FALSE(back.rows[0].low_density);

  std::ifstream in(dir / "t.csv");
  std::string head;
  std::getline(in, head);
  CHECK(head.rfind("window_start_s,window_end_s,mean_rr,", 0) == 0);
  CHECK(head.substr(head.size() - 6) == ",label");
}

TEST_CASE("manifests resolve relative paths") {
  TempDir dir;
  write_text(dir / "m.csv", "path,label\na.csv,cold\n/abs/b.csv,hot\n");
  const auto m = io::read_manifest(dir / "m.csv");
  REQUIRE(m.size() == 2);
  CHECK(m[0].path == dir / "a.csv");
  CHECK(m[0].label == "cold");
  CHECK(m[0].subject.empty());
  CHECK(m[1].path == fs::path("/abs/b.csv"));

  io::write_manifest(dir / "out.csv", {{dir / "x" / "r.csv", "neutral", "s01"}});
  std::ifstream in(dir / "out.csv");
  std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text == "path,label,subject\nx/r.csv,neutral,s01\n");
  const auto back = io::read_manifest(dir / "out.csv");
  CHECK(back[0].path == dir / "x/r.csv");
  CHECK(back[0].subject == "s01");

  write_text(dir / "bad.csv", "file,class\na.csv,cold\n");
  CHECK_THROWS_AS(io::read_manifest(dir / "bad.csv"), Error);
  write_text(dir / "ragged.csv", "path,label\na.csv\n");
  CHECK(error_text([&] { io::read_manifest(dir / "ragged.csv"); }).find("line 2") != std::string::npos);
}

TEST_CASE("thermal labels") {
  for (auto s : kThermalStates)
    CHECK(thermal_state_from_string(to_string(s)) == s);
  CHECK_FALSE(thermal_state_from_string("warm").has_value());
}
