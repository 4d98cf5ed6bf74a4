#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "euq/errors.hpp"
#include "euq/report/report.hpp"
#include "test_helpers.hpp"

using namespace euq::report;
using euq::search::CatalogRecord;

namespace {

CatalogRecord rec(std::uint64_t id, double nll, bool failed = false) {
  CatalogRecord r;
  r.id = id;
  r.valid_nll = nll;
  r.failed = failed;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("csv writer enforces the column count") {
  const auto dir = euq_test::temp_dir("csv");
  CsvWriter csv(dir / "t.csv", {"a", "b"});
  csv.row({"1", "2"});
  CHECK_THROWS_AS(csv.row({"1"}), euq::ValidationError);
  CHECK(slurp(dir / "t.csv") == "a,b\n1,2\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("the moving average of a constant series is that constant") {
  euq::search::Catalog catalog;
  for (int i = 1; i <= 40; ++i) catalog.push_back(rec(static_cast<std::uint64_t>(i), -1.5));
  const auto series = convergence_series(catalog, 25);
  REQUIRE(series.size() == 40);
  for (const auto& p : series) CHECK(p.moving_average == doctest::Approx(1.5));
}

TEST_CASE("a monotone-improving catalog yields a nondecreasing moving average") {
  euq::search::Catalog catalog;
  for (int i = 1; i <= 60; ++i) {
    catalog.push_back(rec(static_cast<std::uint64_t>(i), 2.0 - 0.03 * i));
  }
  const auto series = convergence_series(catalog, 25);
  for (std::size_t i = 1; i < series.size(); ++i) {
    CHECK(series[i].moving_average >= series[i - 1].moving_average - 1e-12);
  }
}

TEST_CASE("the moving average window drops old entries") {
  euq::search::Catalog catalog;
  catalog.push_back(rec(1, -10.0));
  catalog.push_back(rec(2, -2.0));
  catalog.push_back(rec(3, -4.0));
  const auto series = convergence_series(catalog, 2);
  CHECK(series[0].moving_average == doctest::Approx(10.0));
  CHECK(series[1].moving_average == doctest::Approx(6.0));
  CHECK(series[2].moving_average == doctest::Approx(3.0));  // last two only
}

TEST_CASE("failed records are invisible to convergence and spectrum") {
  euq::search::Catalog catalog = {rec(1, 0.3), rec(2, 0.0, true), rec(3, 0.1), rec(4, 0.2)};
  CHECK(convergence_series(catalog).size() == 3);
  const auto spectrum = model_spectrum(catalog);
  REQUIRE(spectrum.size() == 3);
  CHECK(spectrum[0].id == 3);
  CHECK(spectrum[1].id == 4);
  CHECK(spectrum[2].id == 1);
}

TEST_CASE("population fill index counts usable completions") {
  euq::search::Catalog catalog = {rec(1, 0.3), rec(2, 0.0, true), rec(3, 0.1), rec(4, 0.2)};
  CHECK(population_fill_index(catalog, 2) == 3);
  CHECK(population_fill_index(catalog, 3) == 4);
  CHECK(population_fill_index(catalog, 4) == 0);  // never filled
}

TEST_CASE("pgm heatmaps carry a 16-bit payload and a scale sidecar") {
  euq::sst::GriddedSnapshot field;
  field.shape = {2, 3};
  field.values.resize(6);
  // Row h=1 is rendered first (north); land cell stays NaN.
  field.values << 0.0, 1.0, 2.0, 3.0, euq::sst::land_sentinel(), 5.0;

  const auto dir = euq_test::temp_dir("pgm");
  write_pgm16(dir / "f.pgm", field);

  std::ifstream is(dir / "f.pgm", std::ios::binary);
  std::string magic, dims1, dims2, maxval;
  is >> magic >> dims1 >> dims2 >> maxval;
  CHECK(magic == "P5");
  CHECK(dims1 == "3");
  CHECK(dims2 == "2");
  CHECK(maxval == "65535");
  is.get();  // single whitespace after header
  std::vector<unsigned char> payload(12);
  is.read(reinterpret_cast<char*>(payload.data()), 12);
  CHECK(is.gcount() == 12);
  const auto pixel = [&](int i) {
    return (static_cast<int>(payload[static_cast<std::size_t>(2 * i)]) << 8) |
           payload[static_cast<std::size_t>(2 * i + 1)];
  };
  // First row = grid row h=1: values 3, NaN, 5 -> scaled, 0, 65535.
  CHECK(pixel(1) == 0);      // land renders as 0
  CHECK(pixel(2) == 65535);  // max value
  CHECK(pixel(3) == 1);      // min value (grid row h=0 starts at the minimum)

  const std::string scale = slurp(dir / "f.pgm.scale");
  CHECK(scale.find("min 0") != std::string::npos);
  CHECK(scale.find("max 5") != std::string::npos);
  std::filesystem::remove_all(dir);
}
