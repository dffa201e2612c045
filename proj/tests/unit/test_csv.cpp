#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "rblab/csv.hpp"

using namespace rblab;

TEST(Csv, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int k = 0; k < 2000; ++k) {
    const double x = u(rng) * std::pow(10.0, ex(rng));
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  for (double x : {0.0, 1.0, 0.1, 1e-300, std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max()})
    EXPECT_EQ(parse_double(format_double(x)), x);
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_THROW(parse_double("abc"), DomainError);
  EXPECT_THROW(parse_double("1.0x"), DomainError);
}

TEST(Csv, StringRoundTrip) {
  CsvTable t;
  t.header = {"a", "b"};
  t.add_row({"1", "x"});
  t.add_row({"2.5", "y"});
  const std::string s = to_csv_string(t);
  EXPECT_EQ(s, "a,b\n1,x\n2.5,y\n");
  const auto back = parse_csv_string(s);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.column("b"), 1u);
  EXPECT_THROW(back.column("c"), DomainError);
}

TEST(Csv, RejectsUnsafeCellsAndRaggedRows) {
  CsvTable t;
  t.header = {"a", "b"};
  EXPECT_THROW(t.add_row({"1"}), DomainError);
  t.rows.push_back({"1,2", "3"});
  EXPECT_THROW(to_csv_string(t), DomainError);
  EXPECT_THROW(parse_csv_string("a,b\n1\n"), DomainError);
}

TEST(Csv, DatasetTableRoundTrip) {
  RBDataset d;
  d.seed = 5;
  d.rows.push_back({0, 1, 0, 0.123456789012345678, 100, 10});
  d.rows.push_back({1, 7, 3, 1.0 / 3.0, 200, 20});
  const auto back = dataset_from_table(parse_csv_string(to_csv_string(dataset_table(d))));
  ASSERT_EQ(back.rows.size(), d.rows.size());
  for (size_t k = 0; k < d.rows.size(); ++k) {
    EXPECT_EQ(back.rows[k].povm_index, d.rows[k].povm_index);
    EXPECT_EQ(back.rows[k].m, d.rows[k].m);
    EXPECT_EQ(back.rows[k].g_end, d.rows[k].g_end);
    EXPECT_EQ(back.rows[k].p_hat, d.rows[k].p_hat);
    EXPECT_EQ(back.rows[k].shots, d.rows[k].shots);
    EXPECT_EQ(back.rows[k].sequences, d.rows[k].sequences);
  }
}

TEST(Csv, FileAndSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "rblab_csv_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  CsvTable t;
  t.header = {"m", "p"};
  t.add_row({"1", format_double(0.25)});
  write_csv(dir / "data.csv", t, {{"seed", 9}});
  EXPECT_EQ(read_csv(dir / "data.csv").rows, t.rows);
  const auto meta = read_sidecar(dir / "data.csv");
  EXPECT_EQ(meta.at("seed").get<int>(), 9);
  std::filesystem::remove_all(dir);
}
