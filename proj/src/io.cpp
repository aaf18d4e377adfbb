#include "pptlab/io.hpp"

#include <fstream>
#include <sstream>

namespace pptlab {

namespace {

cplx complex_from_json(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    throw InputError("complex entries must be [re, im]");
  }
  return {e[0].get<double>(), e[1].get<double>()};
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

int positive_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<int>() < 1) {
    throw InputError(std::string("field '") + key + "' must be a positive integer");
  }
  return j[key].get<int>();
}

}  // namespace

json to_json(const Matrix& x) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back(complex_to_json(x(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError("matrix must be a list of rows");
  const auto rows = j.size(), cols = j[0].size();
  Matrix x(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError("matrix rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) x(r, c) = complex_from_json(j[r][c]);
  }
  return x;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("vector must be a nonempty list");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

json state_to_json(const BipartiteState& state) {
  return {{"m", state.dims().m}, {"n", state.dims().n}, {"matrix", to_json(state.matrix())}};
}

json blocks_to_json(const BlockFactor& f) {
  f.validate();
  json blocks = json::array();
  for (const auto& c : f.blocks) blocks.push_back(to_json(c));
  return {{"m", f.dims.m}, {"n", f.dims.n}, {"r", f.r_rows}, {"blocks", blocks}};
}

BlockFactor blocks_from_json(const json& j) {
  const BipartiteDims dims(positive_int(j, "m"), positive_int(j, "n"));
  BlockFactor f{dims, positive_int(j, "r"), {}};
  if (!j["blocks"].is_array()) throw InputError("'blocks' must be a list");
  for (const auto& b : j["blocks"]) f.blocks.push_back(matrix_from_json(b));
  f.validate();
  return f;
}

BipartiteState state_from_json(const json& j, double psd_tol) {
  if (!j.is_object()) throw InputError("state file must hold a JSON object");
  if (j.contains("blocks")) return from_blocks(blocks_from_json(j));
  if (!j.contains("matrix")) throw InputError("state needs 'matrix' or 'blocks'");
  const BipartiteDims dims(positive_int(j, "m"), positive_int(j, "n"));
  return BipartiteState(HermitianOperator(dims, matrix_from_json(j["matrix"])), psd_tol);
}

json upb_to_json(const UpbFamily& upb) {
  json vecs = json::array();
  for (const auto& pv : upb.vectors) vecs.push_back({{"a", to_json(pv.a)}, {"b", to_json(pv.b)}});
  return {{"family", upb.family_name}, {"m", upb.dims.m}, {"n", upb.dims.n}, {"count", upb.vectors.size()},
          {"vectors", vecs}};
}

UpbFamily upb_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vectors")) throw InputError("UPB file needs 'vectors'");
  UpbFamily upb{BipartiteDims(positive_int(j, "m"), positive_int(j, "n")), {},
                j.value("family", std::string("custom"))};
  for (const auto& v : j["vectors"]) {
    upb.vectors.push_back(ProductVector::make(vector_from_json(v.at("a")), vector_from_json(v.at("b"))));
  }
  return upb;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

}  // namespace pptlab
