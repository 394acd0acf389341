// Copyright 2026 The pushid Authors
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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pushid/data/dataset_io.hpp"

namespace pushid::data {
namespace {

namespace fs = std::filesystem;

std::vector<PushRecord> synthetic(std::size_t n, std::uint64_t seed = 1) {
  const sim::ObjectModel gt{0.7, 0.42, 0.35, sim::Rectangle{}};
  return generate_synthetic_dataset(gt, n, {}, seed, sim::SimConfig{});
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pushid_io_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& body) const {
    std::ofstream(path(name), std::ios::binary) << body;
  }
  fs::path dir_;
};

TEST(FormatRecord, FixedKeyOrderAndNineDigits) {
  PushRecord r;
  r.id = "a";
  r.x_before = {0.1, 0.2, 1.0 / 3.0};
  r.action.contact_point = {-0.05, 0.0};
  r.action.direction = {1.0, 0.0};
  r.action.speed = 0.25;
  r.action.duration = 0.1;
  r.x_after = {0.3, 0.2, 0.0};
  r.surface_tag = "abs";
  r.shape_tag = "rect1";
  EXPECT_EQ(format_record(r),
            "{\"id\":\"a\",\"x_before\":[0.1,0.2,0.333333333],\"contact\":[-0.05,0],"
            "\"dir\":[1,0],\"speed\":0.25,\"duration\":0.1,\"x_after\":[0.3,0.2,0],"
            "\"surface\":\"abs\",\"shape\":\"rect1\"}");
}

TEST(ReadRecords, EmptyInput) {
  std::istringstream in("");
  EXPECT_TRUE(read_push_records(in).empty());
  std::istringstream blank("\n  \n");
  EXPECT_TRUE(read_push_records(blank).empty());
}

TEST(ReadRecords, RoundTripIsStableAfterOneWrite) {
  const auto recs = synthetic(5);
  std::ostringstream out1;
  write_push_records(out1, recs);
  std::istringstream in1(out1.str());
  const auto back = read_push_records(in1);
  ASSERT_EQ(back.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].id, recs[i].id);
    EXPECT_NEAR(back[i].x_after.x, recs[i].x_after.x, 1e-8);
    EXPECT_NEAR(back[i].action.speed, recs[i].action.speed, 1e-9);
    EXPECT_EQ(back[i].surface_tag, recs[i].surface_tag);
  }
  std::ostringstream out2;
  write_push_records(out2, back);
  EXPECT_EQ(out1.str(), out2.str());
  std::istringstream in2(out2.str());
  const auto again = read_push_records(in2);
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(again[i].x_before, back[i].x_before);
    EXPECT_EQ(again[i].x_after, back[i].x_after);
    EXPECT_EQ(again[i].action.contact_point, back[i].action.contact_point);
  }
}

TEST(ReadRecords, ErrorsNameTheLine) {
  const std::string good = format_record(synthetic(1)[0]);
  std::string bad = good;
  bad.replace(bad.find("\"speed\":") + 8, 1, "N");
  std::istringstream in(good + "\n\n" + "{\"id\":\"x\",\"x_before\":[NaN,0,0]}\n");
  try {
    read_push_records(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream missing(good + "\n{\"id\":\"y\"}\n");
  EXPECT_THROW(read_push_records(missing), ParseError);
  std::istringstream malformed(bad + "\n");
  EXPECT_THROW(read_push_records(malformed), ParseError);
}

TEST(ParseRecord, RejectsNonUnitDirection) {
  std::string s = format_record(synthetic(1)[0]);
  const auto p = s.find("\"dir\":[");
  const auto q = s.find(']', p);
  s.replace(p, q - p + 1, "\"dir\":[2,0]");
  EXPECT_THROW(parse_record(s, 1), ParseError);
}

TEST_F(TempDir, SaveAndLoadFile) {
  const auto recs = synthetic(4);
  save_push_records(path("d.jsonl"), recs);
  const auto back = load_push_records(path("d.jsonl"));
  EXPECT_EQ(back.size(), 4u);
  write("empty.jsonl", "");
  EXPECT_TRUE(load_push_records(path("empty.jsonl")).empty());
  EXPECT_THROW(load_push_records(path("missing.jsonl")), InputError);
}

TEST_F(TempDir, ImportCsv) {
  write("push.csv",
        "x_before,y_before,yaw_before,contact_x,contact_y,dir_x,dir_y,speed,duration,"
        "x_after,y_after,yaw_after\n"
        "0.5,0.5,0,0.45,0.5,2,0,0.1,0.2,0.52,0.5,0.01\n");
  const auto recs = import_planar_push_csv(path("push.csv"), sim::Rectangle{}, "abs", "rect1");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_NEAR(recs[0].action.contact_point.x(), -0.05, 1e-12);
  EXPECT_EQ(recs[0].action.direction, Eigen::Vector2d(1.0, 0.0));
  EXPECT_EQ(recs[0].shape_tag, "rect1");
  write("bad.csv", "x_before,y_before\n1,2\n");
  EXPECT_THROW(import_planar_push_csv(path("bad.csv"), sim::Rectangle{}, "", ""), ParseError);
}

TEST(Split, NineRecordsSixThree) {
  const auto recs = synthetic(15);
  const std::vector<PushRecord> usable(recs.begin(), recs.begin() + 9);
  const auto s = split_train_test(usable, 6, 3, 11);
  EXPECT_EQ(s.train.size(), 6u);
  EXPECT_EQ(s.test.size(), 3u);
  std::set<std::string> ids;
  for (const auto& r : s.train) ids.insert(r.id);
  for (const auto& r : s.test) EXPECT_FALSE(ids.count(r.id));
  const auto again = split_train_test(usable, 6, 3, 11);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(again.test[i].id, s.test[i].id);
  EXPECT_THROW(split_train_test(usable, 7, 3, 0), InputError);
}

TEST(Split, TenFoldsOfTwoHundred) {
  std::vector<PushRecord> recs(250);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].id = std::to_string(i);
  const auto folds = k_folds(recs, 10, 3, 200);
  ASSERT_EQ(folds.size(), 10u);
  std::set<std::string> ids;
  for (const auto& f : folds) {
    EXPECT_EQ(f.size(), 20u);
    for (const auto& r : f) EXPECT_TRUE(ids.insert(r.id).second);
  }
  EXPECT_EQ(ids.size(), 200u);
}

TEST(Split, FoldSizesDifferByAtMostOne) {
  std::vector<PushRecord> recs(23);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].id = std::to_string(i);
  const auto folds = k_folds(recs, 4, 0);
  std::size_t lo = 100, hi = 0, total = 0;
  for (const auto& f : folds) {
    lo = std::min(lo, f.size());
    hi = std::max(hi, f.size());
    total += f.size();
  }
  EXPECT_LE(hi - lo, 1u);
  EXPECT_EQ(total, 23u);
  const auto two = k_folds(std::vector<PushRecord>(recs.begin(), recs.begin() + 2), 2, 5);
  EXPECT_EQ(two[0].size(), 1u);
  EXPECT_EQ(two[1].size(), 1u);
  EXPECT_THROW(k_folds(recs, 1, 0), InputError);
}

TEST(Synthetic, FifteenPushesNoiseFreeAreSelfConsistent) {
  const sim::ObjectModel gt{0.7, 0.42, 0.35, sim::Rectangle{}};
  const sim::SimConfig cfg;
  const auto recs = generate_synthetic_dataset(gt, 15, {}, 21, cfg);
  ASSERT_EQ(recs.size(), 15u);
  // Discarding six leaves the nine records used for a 6/3 split.
  const std::vector<PushRecord> kept(recs.begin() + 6, recs.end());
  EXPECT_EQ(kept.size(), 9u);
  for (const auto& r : recs) {
    EXPECT_LE(ident::sim_error(r.observation(), gt, cfg), 1e-9);
    EXPECT_EQ(r.source, Source::Synthetic);
    EXPECT_TRUE(cfg.table.contains(r.x_after.x, r.x_after.y));
  }
}

TEST(Synthetic, DeterministicAndNoiseAffectsOnlyAfterPose) {
  const sim::ObjectModel gt{0.7, 0.42, 0.35, sim::Rectangle{}};
  const sim::SimConfig cfg;
  const auto a = generate_synthetic_dataset(gt, 6, {0.005, 0.01}, 8, cfg);
  const auto b = generate_synthetic_dataset(gt, 6, {0.005, 0.01}, 8, cfg);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(format_record(a[i]), format_record(b[i]));
  double err = 0.0;
  for (const auto& r : a) err += ident::sim_error(r.observation(), gt, cfg);
  EXPECT_GT(err, 0.0);
}

}  // namespace
}  // namespace pushid::data
