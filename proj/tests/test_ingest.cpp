#include "catch2/catch_amalgamated.hpp"

#include <zlib.h>

#include <filesystem>
#include <string>

#include "bayesdec/csv.hpp"
#include "bayesdec/ingest.hpp"

using Catch::Matchers::ContainsSubstring;
using namespace bayesdec;

namespace {

std::string scratch_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::path("ingest_scratch");
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  csv::write_file(path, content);
  return path;
}

const char* kSmall =
    "y,d,x1\n"
    "0,0,1.5\n"
    "1,1,2.5\n"
    "0,1,3.5\n";

}  // namespace

TEST_CASE("load a small dataset", "[ingest]") {
  const std::string path = scratch_file("small.csv", kSmall);
  const Dataset data = load_dataset(path, "y", "d");
  REQUIRE(data.n_rows() == 3);
  REQUIRE(data.outcome == std::vector<double>{0.0, 1.0, 0.0});
  REQUIRE(data.treatment == std::vector<double>{0.0, 1.0, 1.0});
  REQUIRE(data.covariate_names == std::vector<std::string>{"x1"});
  REQUIRE(data.column("x1") == std::vector<double>{1.5, 2.5, 3.5});
}

TEST_CASE("gzipped datasets load transparently", "[ingest]") {
  const auto dir = std::filesystem::path("ingest_scratch");
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "small.csv.gz").string();
  gzFile gz = gzopen(path.c_str(), "wb");
  REQUIRE(gz != nullptr);
  gzwrite(gz, kSmall, static_cast<unsigned>(std::string(kSmall).size()));
  gzclose(gz);

  const Dataset data = load_dataset(path, "y", "d");
  REQUIRE(data.n_rows() == 3);
  REQUIRE(data.column("x1") == std::vector<double>{1.5, 2.5, 3.5});
}

TEST_CASE("non-binary outcome values are rejected", "[ingest]") {
  const std::string path = scratch_file("badout.csv",
                                        "y,d\n"
                                        "0,0\n"
                                        "2,1\n");
  REQUIRE_THROWS_AS(load_dataset(path, "y", "d"), ValidationError);
}

TEST_CASE("missing columns are reported by name", "[ingest]") {
  const std::string path = scratch_file("small2.csv", kSmall);
  REQUIRE_THROWS_WITH(load_dataset(path, "nope", "d"), ContainsSubstring("nope"));
  REQUIRE_THROWS_WITH(load_dataset(path, "y", "miss"), ContainsSubstring("miss"));
  REQUIRE_THROWS_AS(load_dataset(path, "y", "y"), ValidationError);
}

TEST_CASE("drop removes covariates but never key columns", "[ingest]") {
  const std::string path = scratch_file("drop.csv",
                                        "y,d,x1,x2\n"
                                        "0,0,1,4\n"
                                        "1,1,2,5\n");
  const Dataset data = load_dataset(path, "y", "d", {"x2"});
  REQUIRE(data.covariate_names == std::vector<std::string>{"x1"});
  REQUIRE_THROWS_AS(load_dataset(path, "y", "d", {"d"}), ValidationError);
  REQUIRE_THROWS_WITH(load_dataset(path, "y", "d", {"ghost"}),
                      ContainsSubstring("ghost"));
}

TEST_CASE("rows with missing or non-numeric cells are listed by line", "[ingest]") {
  const std::string path = scratch_file("holes.csv",
                                        "y,d,x1\n"
                                        "0,0,1.0\n"
                                        "1,oops,2.0\n"
                                        "0,1,3.0\n"
                                        "1,1,\n");
  REQUIRE_THROWS_WITH(load_dataset(path, "y", "d"),
                      ContainsSubstring("rows 3, 5"));
}

TEST_CASE("ragged rows are rejected with their line number", "[ingest]") {
  const std::string path = scratch_file("ragged.csv",
                                        "y,d,x1\n"
                                        "0,0,1.0\n"
                                        "1,1\n");
  REQUIRE_THROWS_WITH(load_dataset(path, "y", "d"), ContainsSubstring("row 3"));
}

TEST_CASE("comment lines are skipped", "[ingest]") {
  const std::string path = scratch_file("comments.csv",
                                        "# exported by hand\n"
                                        "y,d\n"
                                        "0,0\n"
                                        "# a note\n"
                                        "1,1\n");
  REQUIRE(load_dataset(path, "y", "d").n_rows() == 2);
}

TEST_CASE("flip_binary inverts a column and documents it", "[ingest]") {
  const std::string path = scratch_file("flip.csv", kSmall);
  const Dataset data = load_dataset(path, "y", "d");

  const auto [flipped, report] = flip_binary(data, "d");
  REQUIRE(flipped.treatment == std::vector<double>{1.0, 0.0, 0.0});
  REQUIRE(report.recodes_applied.size() == 1);
  REQUIRE(report.recodes_applied[0].column == "d");

  const auto [restored, report2] = flip_binary(flipped, "d");
  REQUIRE(restored.treatment == data.treatment);

  REQUIRE_THROWS_AS(flip_binary(data, "x1"), ValidationError);  // not binary
  REQUIRE_THROWS_WITH(flip_binary(data, "ghost"), ContainsSubstring("ghost"));
}

TEST_CASE("coding validation flags single-class outcomes", "[ingest]") {
  const std::string path = scratch_file("oneclass.csv",
                                        "y,d\n"
                                        "0,0\n"
                                        "0,1\n");
  const Dataset data = load_dataset(path, "y", "d");
  REQUIRE_THROWS_WITH(validate_coding(data), ContainsSubstring("single class"));
}

TEST_CASE("coding validation explains what must be confirmed", "[ingest]") {
  const std::string binary_path = scratch_file("bin.csv", kSmall);
  const CodingReport bin = validate_coding(load_dataset(binary_path, "y", "d"));
  REQUIRE(bin.outcome_ok);
  REQUIRE_THAT(bin.treatment_direction_note, ContainsSubstring("undesirable"));
  REQUIRE_THAT(bin.treatment_direction_note,
               !ContainsSubstring("unit change"));

  const std::string cont_path = scratch_file("cont.csv",
                                             "y,dose\n"
                                             "0,0.1\n"
                                             "1,0.9\n"
                                             "0,1.7\n");
  const CodingReport cont = validate_coding(load_dataset(cont_path, "y", "dose"));
  REQUIRE_THAT(cont.treatment_direction_note, ContainsSubstring("--unit-change"));
}

TEST_CASE("unreadable files raise an I/O error", "[ingest]") {
  REQUIRE_THROWS_AS(load_dataset("ingest_scratch/absent.csv", "y", "d"), IoError);
}
