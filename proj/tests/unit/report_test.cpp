#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qrlab/errors.hpp"
#include "qrlab/report.hpp"

using namespace qrlab;

TEST(Report, AggregatesAreSerial) {
  RatioReport r;
  r.name = "t";
  r.add("a", 1.0, 2.0);
  r.add("b", 3.0, 2.0);
  r.add("c", 0.0, 1.0);
  r.finalize();
  EXPECT_DOUBLE_EQ(r.max_ratio, 1.5);
  EXPECT_DOUBLE_EQ(r.min_ratio, 0.0);
  EXPECT_EQ(r.argmax, "b");
  EXPECT_EQ(r.per_entry[0].id, "a");
}

TEST(Report, GuardsRejectDegenerateEntries) {
  RatioReport r;
  EXPECT_THROW(r.add("x", 1.0, 0.0), GuardError);
  EXPECT_THROW(r.add("x", -1.0, 1.0), GuardError);
  EXPECT_THROW(r.add("x", std::numeric_limits<double>::infinity(), 1.0), GuardError);
  EXPECT_THROW(r.add("x", std::nan(""), 1.0), GuardError);
  EXPECT_THROW(r.finalize(), GuardError);
}

TEST(Report, JsonCarriesConfigAndVersion) {
  RatioReport r;
  r.name = "check_x";
  r.add("e0", 0.1, 0.3);
  r.finalize();
  r.metrics["spread"] = 2.0;
  r.params["q"] = "inf";
  const auto j = nlohmann::json::parse(to_json(r, R"({"experiment":"check_x","grid":{"n":64}})"));
  EXPECT_EQ(j["name"], "check_x");
  EXPECT_EQ(j["version"], version());
  EXPECT_EQ(j["config"]["grid"]["n"], 64);
  EXPECT_DOUBLE_EQ(j["metrics"]["spread"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(j["per_entry"][0]["ratio"].get<double>(), 0.1 / 0.3);
}

TEST(Report, CsvRoundTripsDoubles) {
  RatioReport r;
  r.add("e0", 0.1, 0.3);
  r.add("e1", 1.0 / 3.0, 7.0);
  r.finalize();
  std::ostringstream os;
  write_csv(os, r);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "entry_id,lhs,rhs,ratio");
  for (const auto& e : r.per_entry) {
    std::getline(in, line);
    std::istringstream row(line);
    std::string id, lhs, rhs, ratio;
    std::getline(row, id, ',');
    std::getline(row, lhs, ',');
    std::getline(row, rhs, ',');
    std::getline(row, ratio, ',');
    EXPECT_EQ(id, e.id);
    EXPECT_EQ(std::stod(lhs), e.lhs);
    EXPECT_EQ(std::stod(ratio), e.ratio);
  }
}

TEST(Report, ConvergenceCsv) {
  ConvergenceReport c;
  c.name = "conv";
  c.t_values = {1.0, 2.0};
  c.sup_errors = {0.5, 0.25};
  std::ostringstream os;
  write_csv(os, c);
  EXPECT_EQ(os.str(), "t,sup_error\n1,0.5\n2,0.25\n");
  const auto j = nlohmann::json::parse(to_json(c));
  EXPECT_EQ(j["sup_errors"].size(), 2u);
}
