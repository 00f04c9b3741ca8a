// Runs the bundled fixture twice at one thread and once at four threads and
// requires byte-identical artifacts (the manifest carries timings and the
// thread setting, so it is excluded).
#include <doctest.h>

#include "sdg/report/artifacts.hpp"
#include "sdg/report/pipeline.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

TEST_SUITE("determinism") {
  TEST_CASE("fixture artifacts are byte-identical across runs and thread counts") {
    testutil::TempDir a("det"), b("det"), c("det");
    auto cfg = [](const fs::path& out, int threads) {
      sdg::report::PipelineConfig p;
      p.input = testutil::source_dir() / "data" / "fixture_panel.csv";
      p.gdp = testutil::source_dir() / "data" / "fixture_gdp.csv";
      p.output_dir = out;
      p.threads = threads;
      return p;
    };
    sdg::report::run_pipeline(cfg(a.path(), 1));
    sdg::report::run_pipeline(cfg(b.path(), 1));
    sdg::report::run_pipeline(cfg(c.path(), 4));
    std::size_t compared = 0;
    for (const auto& e : fs::directory_iterator(a.path())) {
      const auto name = e.path().filename().string();
      if (name == sdg::report::files::kManifest) continue;
      CAPTURE(name);
      const auto bytes = testutil::read_text(e.path());
      CHECK(bytes == testutil::read_text(b / name));
      CHECK(bytes == testutil::read_text(c / name));
      ++compared;
    }
    CHECK(compared > 30);
  }
}
