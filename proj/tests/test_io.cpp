#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dilated/io.hpp"
#include "dilated/runner.hpp"

using namespace dilated;

TEST(Csv, RoundTripIsLossless) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  Table t{"t", {"x", "k", "label"}, {}};
  for (int i = 0; i < 500; ++i)
    t.add({u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20), static_cast<std::int64_t>(rng() % 100000),
           std::string(i % 3 == 0 ? "a,\"b\"" : "plain")});
  const auto rows = parse_csv(to_csv(t));
  ASSERT_EQ(rows.size(), t.rows.size() + 1);
  EXPECT_EQ(rows[0], t.columns);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(std::stod(rows[i + 1][0]), std::get<double>(t.rows[i][0]));
    EXPECT_EQ(std::stoll(rows[i + 1][1]), std::get<std::int64_t>(t.rows[i][1]));
    EXPECT_EQ(rows[i + 1][2], std::get<std::string>(t.rows[i][2]));
  }
}

TEST(Csv, RowWidthChecked) {
  Table t{"t", {"a", "b"}, {}};
  EXPECT_THROW(t.add({1.0}), Error);
}

TEST(PlotData, BlocksSeparatedByTwoBlankLines) {
  const auto s = to_plotdata({{"a", {1, 2}, {3, 4}}, {"b", {5}, {6}}});
  EXPECT_NE(s.find("# a\n"), std::string::npos);
  EXPECT_NE(s.find("\n\n\n# b\n"), std::string::npos);
}

TEST(Config, JsonRoundTrip) {
  RunConfig c;
  c.command = "series";
  c.estar = {0.25, 0.25, 0.5};
  c.n = 128;
  c.resolve();
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, UnknownKeyRejected) {
  auto j = to_json(RunConfig{});
  j["bogus"] = 1;
  EXPECT_THROW(config_from_json(j), Error);
}

TEST(Runner, ExitCodes) {
  std::ostringstream out, err;
  RunConfig ok;
  ok.command = "analyze1d";
  ok.coeffs = {2.0, -1.0};
  EXPECT_EQ(run(ok, out, err), 0);

  RunConfig bad = ok;
  bad.coeffs = {0.0, 1.0};
  EXPECT_EQ(run(bad, out, err), 2);

  RunConfig big;
  big.command = "analyze1d";
  big.coeffs = {2.0, -1.0};
  big.n = 100000;
  EXPECT_EQ(run(big, out, err), 4);

  RunConfig bounded;
  bounded.command = "duals";
  bounded.coeffs = {2.0, -1.0};
  std::ostringstream o2;
  EXPECT_EQ(run(bounded, o2, err), 0);
}

TEST(Runner, IntegralCsvRow) {
  std::ostringstream out, err;
  RunConfig c;
  c.command = "integral";
  c.m = 4;
  c.delta = 0.5;
  ASSERT_EQ(run(c, out, err), 0);
  const auto rows = parse_csv(out.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][3], "reduced");
  EXPECT_EQ(std::stod(rows[1][3]), std::acos(-1.0) / 8);
}

TEST(Runner, EveryCommandProducesTables) {
  for (const auto& name : command_names()) {
    RunConfig c;
    c.command = name;
    if (name == "analyze1d" || name == "duals") c.coeffs = {1.0, -1.0};
    if (name == "duals") c.tau_max = 2000;
    if (name == "witness") c.coeffs = {1.0, -2.0};
    if (name == "series" || name == "riesz" || name == "sigma-norms" || name == "qm" || name == "weighted-sections")
      c.m = 2;
    if (name == "series") c.n = 64;
    if (name == "a2") {
      c.m = 2;
      c.s_max = 3;
    }
    if (name == "integral") c.m = 4;
    c.resolve();
    const auto r = execute(c);
    EXPECT_FALSE(r.tables.empty()) << name;
    EXPECT_FALSE(r.records.empty()) << name;
  }
}
