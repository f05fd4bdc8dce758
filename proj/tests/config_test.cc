// Copyright 2026 The regen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "regen/config.hpp"

#include <sstream>

#include <gtest/gtest.h>

namespace regen {
namespace {

const std::string kDir = REGEN_CONFIG_DIR;

int error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_config(in);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

TEST(ConfigTest, PresetTable) {
  const ExperimentConfig c = load_config(kDir + "/table1.cfg");
  EXPECT_DOUBLE_EQ(c.cavity.f_res.hz(), 9.590e9);
  EXPECT_DOUBLE_EQ(c.cavity.beta1, 0.89);
  EXPECT_DOUBLE_EQ(c.cavity.beta2, 0.94);
  EXPECT_DOUBLE_EQ(c.env.temp_k, 305.4);
  EXPECT_EQ(c.sweep.points, 201);
  EXPECT_EQ(c.sweep.mode, SweepMode::kStochastic);
  ASSERT_EQ(c.table1.powers_dbm.size(), 4u);
  EXPECT_DOUBLE_EQ(c.table1.powers_dbm[3], -145.0);
  EXPECT_DOUBLE_EQ(c.row_q(2), 7100.0);
  EXPECT_DOUBLE_EQ(c.table1.q_uncertainty, 1000.0);
}

TEST(ConfigTest, PresetNoise) {
  const ExperimentConfig c = load_config(kDir + "/fig5.cfg");
  EXPECT_DOUBLE_EQ(c.noise.rbw_hz, 625.0);
  EXPECT_EQ(c.noise.window, Window::kHann);
  EXPECT_TRUE(c.table1.q_loaded.empty());
  EXPECT_DOUBLE_EQ(c.row_q(3), 8800.0);
}

TEST(ConfigTest, DefaultsWhenEmpty) {
  std::istringstream in("# nothing but a comment\n\n");
  const ExperimentConfig c = parse_config(in);
  EXPECT_DOUBLE_EQ(c.cavity.q_loaded, 8800.0);
  EXPECT_DOUBLE_EQ(c.sweep.f_start_hz, 9.588e9);
  EXPECT_DOUBLE_EQ(c.sweep.f_stop_hz, 9.593e9);
  EXPECT_EQ(c.sweep.mode, SweepMode::kAnalytic);
}

TEST(ConfigTest, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("cavity.q_loaded = 8800\n\nbogus.key = 1\n"), 3);
  EXPECT_EQ(error_line("cavity.q_loaded = lots\n"), 1);
  EXPECT_EQ(error_line("\n\ncavity.beta1 0.9\n"), 3);
  EXPECT_EQ(error_line("sweep.points = 10\nsweep.points = 11\n"), 2);
  EXPECT_EQ(error_line("sweep.mode = fast\n"), 1);
  EXPECT_EQ(error_line("sweep.points = 3.5\n"), 1);
  EXPECT_EQ(error_line("env.temp_k =\n"), 1);
  EXPECT_EQ(error_line("sweep.master_seed = -4\n"), 1);
}

TEST(ConfigTest, UnknownKeyMessageNamesTheKey) {
  std::istringstream in("cavity.qq = 3\n");
  try {
    parse_config(in);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cavity.qq"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(ConfigTest, CrossFieldValidation) {
  std::istringstream inverted("sweep.f_start_hz = 9.593e9\nsweep.f_stop_hz = 9.588e9\n");
  EXPECT_THROW(parse_config(inverted), ConfigError);
  std::istringstream few("sweep.points = 4\n");
  EXPECT_THROW(parse_config(few), ConfigError);
  std::istringstream mismatch("table1.q_loaded = 8800, 8900\n");
  EXPECT_THROW(parse_config(mismatch), ConfigError);
  std::istringstream alias("sweep.f_stop_hz = 9.6e9\n");
  EXPECT_THROW(parse_config(alias), ConfigError);
  std::istringstream bad_cavity("cavity.beta1 = -1\n");
  EXPECT_THROW(parse_config(bad_cavity), std::invalid_argument);
}

TEST(ConfigTest, WriteThenParseRoundTrips) {
  ExperimentConfig c = load_config(kDir + "/table1.cfg");
  c.sweep.master_seed = 18446744073709551615ull;
  c.chain.post_gain_db = 27.125;
  std::stringstream io;
  write_config(io, c);
  const ExperimentConfig r = parse_config(io);
  EXPECT_EQ(r.sweep.master_seed, c.sweep.master_seed);
  EXPECT_DOUBLE_EQ(r.chain.post_gain_db, 27.125);
  EXPECT_EQ(r.table1.q_loaded, c.table1.q_loaded);
  EXPECT_EQ(r.sweep.engine, c.sweep.engine);
  EXPECT_DOUBLE_EQ(r.cavity.f_res.hz(), c.cavity.f_res.hz());
}

TEST(ConfigTest, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/none.cfg"), std::runtime_error);
}

}  // namespace
}  // namespace regen
