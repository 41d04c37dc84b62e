#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "entkit/io.hpp"

using namespace entkit;

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(std::log2(3.0) - 1.0) == "0.584962500721");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(json_number(std::numeric_limits<double>::infinity()) == Json("inf"));
  CHECK(json_number(1.25) == Json(1.25));
}

TEST_CASE("state round trip") {
  Rng rng(1);
  const DensityMatrix rho = random_density({2, 3}, 4, rng);
  const Json j = state_to_json(rho);
  const DensityMatrix back = state_from_json(Json::parse(j.dump()));
  CHECK(back.dims() == rho.dims());
  CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix parsing errors") {
  CHECK_THROWS_AS(matrix_from_json(Json::array()), ParseError);
  CHECK_THROWS_AS(matrix_from_json(Json{{"re", Json::array()}}), ParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dims":[2],"re":[[1,0]]})")), ParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dims":[2],"re":[[1,0],[0]]})")), ParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dims":[2],"re":[[1,"x"],[0,0]]})")), ParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dims":[0],"re":[]})")), ParseError);
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"dims":[4097],"re":[]})")), DimensionCapError);

  const ParsedMatrix real_only = matrix_from_json(Json::parse(R"({"dims":[2],"re":[[0.5,0],[0,0.5]]})"));
  CHECK(real_only.matrix.imag().cwiseAbs().maxCoeff() == 0.0);

  try {
    state_from_json(Json::parse(R"({"dims":[2],"re":[[1,0],[0,1]]})"));
    FAIL("expected an invariant error");
  } catch (const InvariantError& e) {
    REQUIRE(e.failed().size() == 1);
    CHECK(e.failed()[0].find("trace") != std::string::npos);
  }
}

TEST_CASE("povm round trip") {
  const Povm iso = iso_two_outcome_povm(3);
  const ParsedPovm back = povm_from_json(Json::parse(povm_to_json(iso).dump()));
  CHECK_FALSE(back.one_way.has_value());
  CHECK(back.povm.tag() == MeasurementClass::PPT);
  CHECK(back.povm.size() == 2);
  CHECK((back.povm.elements()[1] - iso.elements()[1]).cwiseAbs().maxCoeff() == 0.0);

  const OneWayLoccPovm m = random_onelocc_povm(2, 3, 2, 3, 5);
  const Json j = povm_to_json(m);
  CHECK(j["class"] == "ONE_LOCC");
  const ParsedPovm pm = povm_from_json(Json::parse(j.dump()));
  REQUIRE(pm.one_way.has_value());
  CHECK(pm.one_way->alphabet_size() == 6);
  CHECK(pm.povm.dims() == Dims{2, 3});
  CHECK((pm.one_way->bob()[1][2] - m.bob()[1][2]).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(povm_from_json(Json::parse(R"({"elements":[]})")), ParseError);
  CHECK_THROWS_AS(povm_from_json(Json::parse(R"({"class":"SEP","elements":[]})")), ParseError);
  CHECK_THROWS_AS(povm_from_json(Json::parse(R"({"class":"GENERIC","elements":[]})")), ParseError);
  CHECK_THROWS_AS(povm_from_json(Json::parse(R"({"class":"GENERIC","elements":[{"dims":[2],"re":[[0.5,0],[0,0.5]]}]})")),
                  InvariantError);
}

TEST_CASE("solver report") {
  FwOptions o;
  o.tol_gap = 1e-3;
  o.seed = 2;
  const FwResult r = fw_ree(max_entangled(2), o);
  const Json j = fw_result_to_json(r);
  for (const char* key : {"value", "gap", "lower", "upper", "iterations", "converged", "flags", "sigma", "trace"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["trace"].size() == r.trace.size());
  CHECK(j["trace"][0].size() == 3);
  CHECK(state_from_json(j["sigma"]).dims() == Dims{2, 2});
}

TEST_CASE("json files") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/entkit.json"), Error);
  const std::string path = "test_io_malformed.json";
  {
    std::ofstream f(path);
    f << "{\"dims\": [2], ";
  }
  CHECK_THROWS_AS(read_json_file(path), ParseError);
  std::remove(path.c_str());
}
