#pragma once

// Full analysis pipeline for one state, serialized as a "pptlab-report/1" JSON object.

#include <string>
#include <vector>

#include "pptlab/certify.hpp"
#include "pptlab/io.hpp"

namespace pptlab {

inline constexpr const char* kReportSchema = "pptlab-report/1";

struct AnalysisOptions {
  EnumOptions enumeration;
  double tol_rank = kRankTol;
  double tol_psd = kPsdTol;
  double extremality_cutoff = 1e-8;
  /// adds wall-clock timings to the report
  bool timings = false;
  bool range_search = true;
  bool edge = true;
  /// points are listed individually up to this many
  int max_listed_points = 64;
};

/// Runs ranks, PPT, kernel enumeration, range CES, goodness, extremality (for rho
/// and rho^Gamma), edge and decomposition checks. Anomalies land in report["anomalies"].
json analyze_state(const BipartiteState& state, const json& descriptor, const AnalysisOptions& opts = {});

bool has_anomalies(const json& report);

std::string render_markdown(const json& report);

/// Serialized certificate pieces, also used by the Python bindings.
json to_json(const ProductVector& pv);
json to_json(const EnumerationResult& result, int max_listed_points = 64);
json to_json(const ExtremalityCert& cert);
json to_json(const GoodnessVerdict& g);
json to_json(const RankProfile& r);

}  // namespace pptlab
