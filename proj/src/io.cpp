#include "entkit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace entkit {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json matrix_to_json(const CMatrix& m, const Dims& dims) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return Json{{"dims", dims}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Json state_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix(), rho.dims()); }

namespace {

Eigen::MatrixXd real_block(const Json& j, const char* key, Eigen::Index n) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ParseError(std::string("matrix: missing array '") + key + "'");
  }
  const Json& rows = j[key];
  if (static_cast<Eigen::Index>(rows.size()) != n) {
    throw ParseError(std::string("matrix: '") + key + "' has the wrong number of rows");
  }
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Json& row = rows[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError(std::string("matrix: '") + key + "' row " + std::to_string(r) +
                       " has the wrong length");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      if (!row[c].is_number()) throw ParseError(std::string("matrix: non-numeric entry in '") + key + "'");
      out(r, c) = row[c].get<double>();
    }
  }
  return out;
}

}  // namespace

ParsedMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("matrix: expected an object");
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
    throw ParseError("matrix: missing 'dims'");
  }
  ParsedMatrix out;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 1) throw ParseError("matrix: dims must be positive integers");
    out.dims.push_back(d.get<int>());
  }
  const std::size_t n = total_dim(out.dims);
  if (n > kDimensionCap) throw DimensionCapError("matrix: side exceeds the dimension cap");
  const auto side = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd re = real_block(j, "re", side);
  const Eigen::MatrixXd im = j.contains("im") ? real_block(j, "im", side) : Eigen::MatrixXd::Zero(side, side);
  out.matrix = CMatrix(side, side);
  out.matrix.real() = re;
  out.matrix.imag() = im;
  return out;
}

DensityMatrix state_from_json(const Json& j) {
  ParsedMatrix m = matrix_from_json(j);
  return DensityMatrix(std::move(m.dims), std::move(m.matrix));
}

Json povm_to_json(const Povm& m) {
  Json elems = Json::array();
  for (const auto& e : m.elements()) elems.push_back(matrix_to_json(e, m.dims()));
  Json out{{"class", to_string(m.tag())}, {"elements", std::move(elems)}};
  if (!m.labels().empty()) out["labels"] = m.labels();
  return out;
}

Json povm_to_json(const OneWayLoccPovm& m) {
  Json alice = Json::array();
  for (const auto& r : m.alice()) alice.push_back(matrix_to_json(r, {m.dim_a()}));
  Json bob = Json::array();
  for (const auto& sk : m.bob()) {
    Json row = Json::array();
    for (const auto& s : sk) row.push_back(matrix_to_json(s, {m.dim_b()}));
    bob.push_back(std::move(row));
  }
  return Json{{"class", "ONE_LOCC"}, {"alice", std::move(alice)}, {"bob", std::move(bob)}};
}

ParsedPovm povm_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("class") || !j["class"].is_string()) {
    throw ParseError("povm: missing 'class'");
  }
  const MeasurementClass cls = measurement_class_from_string(j["class"].get<std::string>());
  if (cls == MeasurementClass::OneWayLocc && j.contains("alice")) {
    if (!j["alice"].is_array() || !j.contains("bob") || !j["bob"].is_array()) {
      throw ParseError("povm: ONE_LOCC needs 'alice' and 'bob' arrays");
    }
    std::vector<CMatrix> alice;
    int da = 0;
    for (const auto& r : j["alice"]) {
      ParsedMatrix pm = matrix_from_json(r);
      da = static_cast<int>(pm.matrix.rows());
      alice.push_back(std::move(pm.matrix));
    }
    std::vector<std::vector<CMatrix>> bob;
    int db = 0;
    for (const auto& row : j["bob"]) {
      if (!row.is_array()) throw ParseError("povm: 'bob' must be an array of arrays");
      std::vector<CMatrix> sk;
      for (const auto& s : row) {
        ParsedMatrix pm = matrix_from_json(s);
        db = static_cast<int>(pm.matrix.rows());
        sk.push_back(std::move(pm.matrix));
      }
      bob.push_back(std::move(sk));
    }
    OneWayLoccPovm one_way(da, db, std::move(alice), std::move(bob));
    return {onelocc_to_povm(one_way), std::move(one_way)};
  }
  if (!j.contains("elements") || !j["elements"].is_array() || j["elements"].empty()) {
    throw ParseError("povm: missing 'elements'");
  }
  Dims dims;
  std::vector<CMatrix> elems;
  for (const auto& e : j["elements"]) {
    ParsedMatrix pm = matrix_from_json(e);
    if (!dims.empty() && pm.dims != dims) throw ParseError("povm: elements disagree on dims");
    dims = pm.dims;
    elems.push_back(std::move(pm.matrix));
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  return {Povm(std::move(dims), std::move(elems), cls, std::move(labels)), std::nullopt};
}

Json fw_result_to_json(const FwResult& r) {
  Json trace = Json::array();
  for (const auto& t : r.trace) {
    trace.push_back(Json::array({t.iteration, json_number(t.value), json_number(t.gap)}));
  }
  Json weights = Json::array();
  for (double w : r.sigma.weights()) weights.push_back(w);
  return Json{{"value", json_number(r.value)},
              {"gap", json_number(r.duality_gap)},
              {"lower", json_number(r.lower_bound())},
              {"upper", json_number(r.value)},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"flags", r.flags},
              {"support_size", r.sigma.weights().size()},
              {"sigma", state_to_json(r.sigma.state())},
              {"trace", std::move(trace)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace entkit
