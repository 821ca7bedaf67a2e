#include <besovlab/config.hpp>
#include <besovlab/errors.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace besovlab;

TEST(Config, MinimalFileFillsDefaults) {
  const RunConfig c = parse_config(R"({"command":"lemmas","p":2})");
  EXPECT_EQ(c.command, "lemmas");
  EXPECT_EQ(c.idx.p, 2.0);
  EXPECT_EQ(c.idx.s, 1.2);
  EXPECT_EQ(c.resolved_n_list(), (std::vector<int>{3, 4, 5, 6}));
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, RegularityBelowOneRejected) {
  const RunConfig c = parse_config(R"({"s":0.9})");
  try {
    c.validate();
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("s must exceed 1"), std::string::npos) << e.what();
  }
}

TEST(Config, InfiniteSummabilityOutOfScope) {
  const RunConfig c = parse_config(R"({"command":"gap","r":"inf"})");
  try {
    c.validate();
    FAIL() << "expected UnsupportedConfiguration";
  } catch (const UnsupportedConfiguration& e) {
    EXPECT_NE(std::string(e.what()).find("r=∞ out of scope"), std::string::npos);
  }
}

TEST(Config, ParseErrorsNameTheProblem) {
  try {
    parse_config("{\n  \"s\": 1.2,\n  \"p\": \n}", "cfg.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  try {
    parse_config(R"({"colour":"red"})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
  try {
    parse_config(R"({"n":"three"})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("'n'"), std::string::npos);
  }
  EXPECT_THROW(parse_config("[1, 2]"), ParseError);
  EXPECT_THROW(parse_config(R"({"mode":"huge"})"), ParseError);
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/besovlab.json"), NotFoundError); }

TEST(Config, ImpliedModes) {
  const RunConfig a = parse_config(R"({"command":"solve","dt":0.001})");
  EXPECT_EQ(a.step_mode, StepMode::Fixed);
  const RunConfig b = parse_config(R"({"command":"solve","constant":0.3,"T":0.5})");
  EXPECT_EQ(b.initial, InitialData::Constant);
  const SolveConfig sc = b.solve_config();
  EXPECT_EQ(sc.final_time, 0.5);
  EXPECT_EQ(sc.snapshot_times.back(), 0.5);
  const RunConfig c = parse_config(R"({"mode":"large"})");
  EXPECT_EQ(c.resolved_n_list(), (std::vector<int>{3, 4, 5, 6, 7}));
  EXPECT_GT(c.grid_cap(), RunConfig{}.grid_cap());
}

TEST(Config, SemanticChecks) {
  EXPECT_THROW(parse_config(R"({"n":[2,3]})").validate(), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"tail_tol":1e-3})").validate(), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"refinement":3})").validate(), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"command":"solve","T":2})").validate(), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"command":"report"})").validate(), InvalidArgument);
  EXPECT_THROW(parse_config(R"({"p":0.5})").validate(), InvalidArgument);
}

TEST(Config, EchoRoundTrips) {
  RunConfig c = parse_config(R"({"command":"gap","s":2,"n":[3,4],"t":[0.05,0.1],"refinement":2})");
  const RunConfig back = parse_config(config_to_json(c));
  EXPECT_EQ(back.idx.s, 2.0);
  EXPECT_EQ(back.resolved_n_list(), (std::vector<int>{3, 4}));
  EXPECT_EQ(back.t_list, (std::vector<double>{0.05, 0.1}));
  EXPECT_EQ(back.refinement, 2u);
}
