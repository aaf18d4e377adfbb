#pragma once

// JSON state files: {"m","n","matrix":[[[re,im],...],...]} or
// {"m","n","r","blocks":[block_0, ..., block_{m-1}]}, complex entries as [re, im].

#include <string>

#include <json.hpp>

#include "pptlab/qstate.hpp"
#include "pptlab/zoo.hpp"

namespace pptlab {

using json = nlohmann::json;

json to_json(const Matrix& x);
Matrix matrix_from_json(const json& j);
json to_json(const Vector& v);
Vector vector_from_json(const json& j);

json state_to_json(const BipartiteState& state);
json blocks_to_json(const BlockFactor& factor);
/// Parses either layout; throws InputError on malformed content.
BipartiteState state_from_json(const json& j, double psd_tol = kPsdTol);
BlockFactor blocks_from_json(const json& j);

json upb_to_json(const UpbFamily& upb);
UpbFamily upb_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pptlab
