#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "nctgabor/error.hpp"
#include "nctgabor/run.hpp"

using namespace nct;

namespace {

KeyValues parse(const std::string& text) {
  std::istringstream is(text);
  return parse_key_values(is, "test");
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("nctgabor_" + name)).string();
}

int count_fields(const std::string& row) { return static_cast<int>(std::count(row.begin(), row.end(), ',')) + 1; }

}  // namespace

TEST(KeyValues, ParsesCommentsAndRepeats) {
  KeyValues kv = parse("# header\nalpha = 0.25   # trailing\n\n weight = 1\nweight=0.5i\n");
  EXPECT_EQ(kv.last("alpha"), "0.25");
  EXPECT_EQ(kv.all("weight"), (std::vector<std::string>{"1", "0.5i"}));
  EXPECT_FALSE(kv.has("beta"));
  EXPECT_EQ(kv.entries().size(), 3u);
}

TEST(KeyValues, MalformedLineNamesItsOrigin) {
  try {
    parse("alpha = 1\njust words\n");
    FAIL() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
    EXPECT_NE(std::string(e.what()).find("test:2"), std::string::npos);
  }
  EXPECT_THROW(parse("= 3\n"), Error);
}

TEST(Scalars, Complex) {
  EXPECT_EQ(parse_complex("1"), cplx(1.0, 0.0));
  EXPECT_EQ(parse_complex("-0.5i"), cplx(0.0, -0.5));
  EXPECT_EQ(parse_complex("1+2i"), cplx(1.0, 2.0));
  EXPECT_EQ(parse_complex("0.3-1e-2i"), cplx(0.3, -0.01));
  EXPECT_EQ(parse_complex("2e+1-i"), cplx(20.0, -1.0));
  EXPECT_EQ(parse_complex("i"), cplx(0.0, 1.0));
  for (const char* bad : {"", "1+", "x", "1+2j", "1 2"}) EXPECT_THROW(parse_complex(bad), Error) << bad;
}

TEST(Scalars, RangesAndNumbers) {
  EXPECT_EQ(parse_range("0.5"), std::vector<double>{0.5});
  auto r = parse_range("0.3:0.5:0.1");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r.back(), 0.5, 1e-12);
  EXPECT_THROW(parse_range("1:0:0.1"), Error);
  EXPECT_THROW(parse_range("0:1:0"), Error);
  EXPECT_EQ(parse_int("12", "n"), 12);
  EXPECT_THROW(parse_int("1.5", "n"), Error);
  EXPECT_THROW(parse_real("abc", "x"), Error);
}

TEST(Tasks, NamesAndOrdering) {
  for (Task t : {Task::Axioms, Task::Frame, Task::WexlerRaz, Task::Chern, Task::Energy, Task::Soliton, Task::Moyal})
    EXPECT_EQ(parse_task(to_string(t)), t);
  EXPECT_THROW(parse_task("everything"), Error);
  auto ordered = ordered_tasks({Task::Soliton, Task::Frame, Task::Soliton, Task::Axioms});
  EXPECT_EQ(ordered, (std::vector<Task>{Task::Axioms, Task::Frame, Task::Soliton}));
}

TEST(Config, ApplyKeysOverridesBase) {
  ExperimentConfig base;
  base.radius = 4.0;
  KeyValues kv = parse(
      "alpha = 0.5\nbeta = 0.3333333333333333\nr = 1\ns = 1\nq = 2\nN = 256\nL = 12\n"
      "window = perturbed\norder = 2\neps = 0.1\nlam = 0.5-0.25i\nweight = 1\nweight = 0.5\n"
      "task = chern\ntask = frame\nseed = 9\nworkers = 2\n");
  ExperimentConfig c = apply_keys(kv, base);
  EXPECT_EQ(c.params.q, 2);
  EXPECT_EQ(c.params.r, 1);
  EXPECT_EQ(c.grid.samples, 256);
  EXPECT_EQ(c.grid.period, 12.0);
  EXPECT_EQ(c.radius, 4.0);
  EXPECT_EQ(c.window.kind, WindowKind::Perturbed);
  EXPECT_EQ(c.window.order, 2);
  EXPECT_EQ(c.window.lam, cplx(0.5, -0.25));
  EXPECT_EQ(c.window.weights.size(), 2u);
  EXPECT_EQ(c.tasks, (std::vector<Task>{Task::Frame, Task::Chern}));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.signal_grid().channels, 2);
  EXPECT_EQ(c.ladder().chern(), 1e3 * c.eps0);
}

TEST(Config, Rejections) {
  EXPECT_THROW(apply_keys(parse("colour = red\n")), Error);
  EXPECT_THROW(apply_keys(parse("window = circle\n")), Error);
  EXPECT_THROW(apply_keys(parse("q = two\n")), Error);
  for (const char* bad : {"q = 2\nr = 2\n", "radius = -1\n", "probes = 3\n", "q = 2\nweight = 1\n", "eps0 = 0\n",
                          "L = -2\n", "workers = 0\n"})
    EXPECT_THROW(apply_keys(parse(std::string(bad) + "task = axioms\n")).validate(), Error) << bad;
  try {
    apply_keys(parse("q = 4\nr = 2\ns = 1\ntask = axioms\n")).validate();
    FAIL() << "expected NotCoprime";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCoprime);
  }
  EXPECT_NO_THROW(apply_keys(parse("q = 3\nr = 2\ns = 1\ntask = axioms\n")).validate());
}

TEST(Config, LoadFromFile) {
  const std::string path = temp_path("config.cfg");
  {
    std::ofstream out(path);
    out << "# scalar run\nalpha = 0.5\nbeta = 0.5\ntask = axioms\n";
  }
  ExperimentConfig c = load_config(path);
  EXPECT_EQ(c.params.alpha, 0.5);
  EXPECT_EQ(c.tasks, std::vector<Task>{Task::Axioms});
  std::remove(path.c_str());
  try {
    load_config(path);
    FAIL() << "expected an io error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(Report, FieldsAndDeterminism) {
  ExperimentConfig c;
  c.tasks = {Task::Chern, Task::Energy, Task::Soliton, Task::Axioms};
  RunResult a = run_experiment(c);
  RunResult b = run_experiment(c);
  EXPECT_TRUE(a.passed());
  for (const char* key : {"version", "config", "ladder", "radius", "seed", "results", "checks", "passed", "timing"})
    EXPECT_TRUE(a.report.contains(key)) << key;
  EXPECT_EQ(a.report["version"], kLibraryVersion);
  EXPECT_TRUE(a.report["results"].contains("chern_report"));
  json ja = a.report, jb = b.report;
  ja.erase("timing");
  jb.erase("timing");
  EXPECT_EQ(ja.dump(), jb.dump());
  ASSERT_TRUE(a.chern.has_value());
  EXPECT_EQ(a.chern->c1_rounded, 1);
}

TEST(Report, CsvSchema) {
  EXPECT_EQ(count_fields(csv_header()), 17);
  ExperimentConfig c;
  c.tasks = {Task::Energy};
  RunResult r = run_experiment(c);
  ASSERT_FALSE(r.csv_rows.empty());
  EXPECT_EQ(count_fields(r.csv_rows.front()), 17);
  std::string cont = csv_row_continuous(2, 2.0, 2.0, GridSpec{16.0, 512, 2});
  EXPECT_EQ(count_fields(cont), 17);
  EXPECT_EQ(cont.substr(0, 4), ",,,,");
}

TEST(Report, WritersAndFailures) {
  const std::string path = temp_path("columns.txt");
  write_columns(path, {"a", "b"}, {{1.0, 2.0}, {3.0, 0.5}});
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "# a b");
  EXPECT_EQ(row, "1 2");
  std::remove(path.c_str());
  EXPECT_THROW(write_text("/nonexistent/dir/file.txt", "x"), Error);
}

TEST(Report, FrameTaskWritesWindows) {
  ExperimentConfig c;
  c.tasks = {Task::Frame, Task::WexlerRaz};
  RunOutputs out{temp_path("dual.txt"), temp_path("tight.txt"), temp_path("symbol.txt")};
  RunResult r = run_experiment(c, out);
  EXPECT_TRUE(r.passed());
  GridSignal h = load_signal(out.dual_path);
  GridSignal t = load_signal(out.tight_path);
  EXPECT_EQ(h.samples(), 512);
  EXPECT_NEAR(norm(t), std::sqrt(c.params.density()), 1e-6);
  EXPECT_TRUE(std::filesystem::exists(out.symbol_path));
  for (const auto& p : {out.dual_path, out.tight_path, out.symbol_path}) std::remove(p.c_str());
}
