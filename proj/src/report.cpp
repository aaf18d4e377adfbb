#include "pptlab/report.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "pptlab/zoo.hpp"

namespace pptlab {

namespace {

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

json anomaly(const std::string& stage, const std::string& message) {
  return {{"stage", stage}, {"message", message}};
}

EnumerationResult trivially_empty(BipartiteDims dims) {
  EnumerationResult r;
  r.classification = Classification::Empty;
  r.evidence.delta = delta(dims.m, dims.n);
  r.evidence.stop_reason = "trivial-subspace";
  r.evidence.stable = true;
  r.evidence.best_residual = std::numeric_limits<double>::infinity();
  return r;
}

EnumerationResult enumerate_or_empty(const SubspaceBasis& k, BipartiteDims dims, const EnumOptions& o) {
  if (k.dim() == 0) return trivially_empty(dims);
  return enumerate_product_vectors(k, dims, o);
}

}  // namespace

json to_json(const ProductVector& pv) { return {{"a", to_json(pv.a)}, {"b", to_json(pv.b)}}; }

json to_json(const RankProfile& r) {
  return {{"rank", r.rank},
          {"rank_gamma", r.rank_gamma},
          {"rank_a", r.rank_a},
          {"rank_b", r.rank_b},
          {"birank", json::array({r.rank, r.rank_gamma})},
          {"singular_gaps",
           {{"rho", number(r.singular_gaps[0])},
            {"rho_gamma", number(r.singular_gaps[1])},
            {"rho_a", number(r.singular_gaps[2])},
            {"rho_b", number(r.singular_gaps[3])}}}};
}

json to_json(const EnumerationResult& res, int max_listed_points) {
  const auto& ev = res.evidence;
  json subspaces = json::array();
  for (const auto& s : ev.subspaces) {
    subspaces.push_back({{"side", s.a_side ? "a-fixed" : "b-fixed"},
                         {"fixed", to_json(s.fixed)},
                         {"dim", s.span.cols()},
                         {"residual", number(s.residual)}});
  }
  json out = {{"classification", to_string(res.classification)},
              {"count", res.count()},
              {"delta", ev.delta},
              {"starts_used", ev.starts_used},
              {"round_starts", ev.round_starts},
              {"round_counts", ev.round_counts},
              {"stable", ev.stable},
              {"stop_reason", ev.stop_reason},
              {"best_residual", number(ev.best_residual)},
              {"non_isolated", ev.non_isolated},
              {"non_transversal", ev.non_transversal},
              {"full_space", ev.full_space},
              {"subspaces", subspaces},
              {"algebraic",
               {{"status", ev.algebraic.status},
                {"candidates", ev.algebraic.candidates},
                {"roots", ev.algebraic.roots},
                {"matched", ev.algebraic.matched},
                {"added", ev.algebraic.added}}}};
  if (res.count() <= max_listed_points) {
    json pts = json::array();
    for (int i = 0; i < res.count(); ++i) {
      json p = to_json(res.points[i]);
      p["residual"] = number(res.residuals[i]);
      if (i < static_cast<int>(res.diagnostics.size())) {
        const auto& d = res.diagnostics[i];
        p["jacobian_rank"] = d.jacobian_rank;
        p["jacobian_cond"] = number(d.jacobian_cond);
        p["isolated"] = d.isolated;
        p["transversal"] = d.transversal;
      }
      pts.push_back(std::move(p));
    }
    out["points"] = pts;
  }
  return out;
}

json to_json(const GoodnessVerdict& g) {
  json out = {{"verdict", to_string(g.verdict)}, {"reason", to_string(g.reason)}, {"anomaly", g.anomaly}};
  out["count"] = g.count ? json(*g.count) : json(nullptr);
  if (!g.note.empty()) out["note"] = g.note;
  return out;
}

json to_json(const ExtremalityCert& c) {
  json out = {{"verdict", to_string(c.verdict)},
              {"nullity", c.nullity},
              {"gap", number(c.gap)},
              {"ppt", c.ppt},
              {"rank", c.rank},
              {"rank_gamma", c.rank_gamma},
              {"singular_spectrum", numbers(c.singular_spectrum)}};
  if (c.witness && c.witness->rho1.size() > 0) {
    const auto& w = *c.witness;
    out["witness"] = {{"epsilon", number(w.epsilon)},
                      {"h", to_json(w.h)},
                      {"rho1", to_json(w.rho1)},
                      {"rho2", to_json(w.rho2)}};
  }
  return out;
}

bool has_anomalies(const json& report) {
  return report.contains("anomalies") && !report["anomalies"].empty();
}

json analyze_state(const BipartiteState& state, const json& descriptor, const AnalysisOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto dims = state.dims();
  const auto& eo = opts.enumeration;
  json rep;
  json anomalies = json::array();
  json timings = json::object();

  rep["schema"] = kReportSchema;
  rep["input"] = descriptor;
  rep["input"]["m"] = dims.m;
  rep["input"]["n"] = dims.n;
  rep["input"]["trace"] = state.trace();
  rep["tolerances"] = {{"rank", opts.tol_rank},
                       {"psd", opts.tol_psd},
                       {"hermiticity", kHermiticityTol},
                       {"residual", eo.residual_tol},
                       {"dedup", eo.dedup_tol},
                       {"jacobian", eo.jacobian_tol},
                       {"empty_threshold", eo.empty_threshold},
                       {"extremality_cutoff", opts.extremality_cutoff},
                       {"starts", eo.start_count > 0 ? json(eo.start_count) : json("40*delta")},
                       {"seed", eo.seed},
                       {"max_rounds", eo.max_rounds}};

  auto stage = [&](const std::string& name, const std::function<void()>& body) {
    const auto t0 = clock::now();
    try {
      body();
    } catch (const NumericalError& e) {
      anomalies.push_back(anomaly(name, e.what()));
    }
    timings[name] = std::chrono::duration<double>(clock::now() - t0).count();
  };

  const HermitianOperator gamma = partial_transpose(state.op());
  RankProfile rp;
  PptVerdict ppt;
  stage("ranks", [&] {
    rp = rank_profile(state, opts.tol_rank);
    ppt = is_ppt(state, opts.tol_psd);
    rep["ranks"] = to_json(rp);
    rep["ppt"] = {{"ppt", ppt.ppt}, {"min_eig", ppt.min_eig}, {"max_eig", ppt.max_eig}};
    rep["gamma_invariance"] = max_abs(state.matrix() - gamma.matrix());
  });
  const bool gamma_exact = max_abs(state.matrix() - gamma.matrix()) == 0.0;

  EnumerationResult kernel;
  stage("kernel", [&] {
    kernel = enumerate_or_empty(kernel_basis(state, opts.tol_rank), dims, eo);
    rep["kernel"] = to_json(kernel, opts.max_listed_points);
    rep["kernel"]["dim"] = dims.total() - rp.rank;
    if (kernel.classification == Classification::Finite && kernel.count() > 0) {
      rep["kernel"]["general_position"] = general_position(kernel.points, dims);
    } else {
      rep["kernel"]["general_position"] = nullptr;
    }
  });

  GoodnessVerdict good;
  stage("goodness", [&] {
    good = classify_goodness(state, kernel, eo);
    rep["goodness"] = to_json(good);
    if (good.anomaly) anomalies.push_back(anomaly("goodness", good.note));
    if (good.verdict == Goodness::Good && rp.rank == dims.m + dims.n - 2 &&
        kernel.count() != delta(dims.m, dims.n)) {
      anomalies.push_back(anomaly("goodness", "Good at borderline rank without delta kernel points"));
    }
  });

  if (ppt.ppt) {
    stage("gamma_kernel", [&] {
      const EnumerationResult kg =
          gamma_exact ? kernel : enumerate_or_empty(kernel_basis(gamma, opts.tol_rank), dims, eo);
      const int matched = match_partial_conjugates(kernel.points, kg.points, eo.dedup_tol);
      rep["gamma_kernel"] = {{"classification", to_string(kg.classification)},
                             {"count", kg.count()},
                             {"matched_partial_conjugates", matched},
                             {"reused_kernel", gamma_exact}};
      if (kernel.classification == Classification::Finite && kg.classification == Classification::Finite &&
          (kg.count() != kernel.count() || matched != kernel.count())) {
        anomalies.push_back(anomaly("gamma_kernel", "partial conjugation does not biject the kernel points"));
      }
    });
  }

  std::optional<EnumerationResult> range_points;
  if (opts.range_search) {
    stage("range", [&] {
      auto ces = ces_check(range_basis(state, opts.tol_rank), dims, eo);
      if (!ces.by_dimension) range_points = std::move(ces.enumeration);
      rep["range"] = {{"ces", ces.ces},
                      {"by_dimension", ces.by_dimension},
                      {"classification", to_string(ces.classification)},
                      {"starts", ces.starts},
                      {"best_residual", number(ces.best_residual)},
                      {"certificate", "numerical"}};
    });
  }

  ExtremalityCert cert;
  stage("extremality", [&] {
    cert = extremality_nullity(state, opts.extremality_cutoff);
    rep["extremality"] = to_json(cert);
    const bool bound = necessary_bound(cert.rank, cert.rank_gamma, dims.m, dims.n);
    rep["extremality"]["necessary_bound"] = bound;
    if (!bound && cert.verdict == ExtremalityVerdict::Extreme) {
      anomalies.push_back(anomaly("extremality", "Extreme verdict violates the rank bound"));
    }
    if (cert.witness && cert.witness->rho1.size() > 0) {
      const double recon = max_abs(state.matrix() - 0.5 * (cert.witness->rho1 + cert.witness->rho2));
      rep["extremality"]["witness"]["reconstruction_residual"] = recon;
      if (recon > 1e-10) anomalies.push_back(anomaly("extremality", "witness does not reconstruct rho"));
    }
    rep["strongly_extreme"] = to_string(strongly_extreme_by_theorem(state, good, cert));
  });

  if (ppt.ppt) {
    stage("extremality_gamma", [&] {
      rep["extremality_gamma"] = to_json(extremality_nullity(BipartiteState(gamma, opts.tol_psd),
                                                             opts.extremality_cutoff));
    });
    if (opts.edge) {
      stage("edge", [&] {
        const auto e = range_points ? edge_check(state, *range_points, eo) : edge_check(state, eo);
        rep["edge"] = {{"is_edge", e.is_edge},
                       {"starts", e.starts},
                       {"best_residual", number(e.best_residual)},
                       {"certificate", e.certificate}};
        rep["edge"]["violating"] = e.violating ? to_json(*e.violating) : json(nullptr);
      });
    }
    if (rp.rank == dims.n && rp.rank_b == dims.n && rp.rank_a <= dims.n) {
      stage("separable_decomposition", [&] {
        const auto dec = rank_n_separable_decomposition(state, eo.seed);
        json terms = json::array();
        for (const auto& t : dec.terms) {
          json j = to_json(t.pv);
          j["weight"] = t.weight;
          terms.push_back(std::move(j));
        }
        rep["separable_decomposition"] = {{"terms", terms},
                                          {"reconstruction_residual", dec.reconstruction_residual}};
      });
    }
  }

  stage("rank1_compression", [&] {
    const auto rc = find_rank1_compression(state, eo);
    rep["rank1_compression"] = rc ? json{{"a", to_json(rc->a)}, {"residual", number(rc->residual)}}
                                  : json(nullptr);
  });

  rep["anomalies"] = anomalies;
  if (opts.timings) rep["timings"] = timings;
  return rep;
}

namespace {

std::string show(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "n/a";
  if (j.is_number_float()) {
    std::ostringstream os;
    os.precision(4);
    os << j.get<double>();
    return os.str();
  }
  return j.dump();
}

std::string field(const json& j, const char* key) { return j.contains(key) ? show(j[key]) : "n/a"; }

}  // namespace

std::string render_markdown(const json& r) {
  std::ostringstream os;
  const auto& in = r["input"];
  os << "# pptlab report\n\n";
  os << "- source: " << field(in, "source") << "\n";
  os << "- dims: " << field(in, "m") << " x " << field(in, "n") << "\n\n";
  os << "## Ranks\n\n| quantity | value |\n|---|---|\n";
  if (r.contains("ranks")) {
    const auto& k = r["ranks"];
    os << "| birank | (" << field(k, "rank") << ", " << field(k, "rank_gamma") << ") |\n";
    os << "| local ranks | (" << field(k, "rank_a") << ", " << field(k, "rank_b") << ") |\n";
  }
  if (r.contains("ppt")) {
    os << "| PPT | " << field(r["ppt"], "ppt") << " |\n";
    os << "| min eig of rho^Gamma | " << field(r["ppt"], "min_eig") << " |\n";
  }
  os << "| max abs(rho - rho^Gamma) | " << field(r, "gamma_invariance") << " |\n\n";
  if (r.contains("kernel")) {
    const auto& k = r["kernel"];
    os << "## Kernel product vectors\n\n";
    os << "- classification: " << field(k, "classification") << "\n";
    os << "- count: " << field(k, "count") << " (delta " << field(k, "delta") << ")\n";
    os << "- starts: " << field(k, "starts_used") << ", stop: " << field(k, "stop_reason") << "\n";
    os << "- line subspaces: " << (k.contains("subspaces") ? k["subspaces"].size() : 0) << "\n";
    os << "- general position: " << field(k, "general_position") << "\n";
    os << "- algebraic check: " << field(k["algebraic"], "status") << "\n\n";
  }
  if (r.contains("range")) {
    os << "## Range\n\n- CES: " << field(r["range"], "ces") << " (numerical certificate, "
       << field(r["range"], "starts") << " starts, best residual " << field(r["range"], "best_residual")
       << ")\n\n";
  }
  if (r.contains("goodness")) {
    os << "## Goodness\n\n- " << field(r["goodness"], "verdict") << " (" << field(r["goodness"], "reason")
       << ")\n\n";
  }
  os << "## Extremality\n\n| state | verdict | nullity | gap |\n|---|---|---|---|\n";
  for (const char* key : {"extremality", "extremality_gamma"}) {
    if (!r.contains(key)) continue;
    const auto& e = r[key];
    os << "| " << (std::string(key) == "extremality" ? "rho" : "rho^Gamma") << " | " << field(e, "verdict")
       << " | " << field(e, "nullity") << " | " << field(e, "gap") << " |\n";
  }
  os << "\n- strongly extreme by theorem: " << field(r, "strongly_extreme") << "\n";
  if (r.contains("edge")) {
    os << "- edge state: " << field(r["edge"], "is_edge") << " (numerical certificate)\n";
  }
  if (r.contains("separable_decomposition")) {
    os << "- separable decomposition: " << r["separable_decomposition"]["terms"].size() << " terms\n";
  }
  os << "- rank-one compression: " << (r.contains("rank1_compression") && !r["rank1_compression"].is_null()
                                            ? "found"
                                            : "none found")
     << "\n\n## Anomalies\n\n";
  if (!has_anomalies(r)) {
    os << "none\n";
  } else {
    for (const auto& a : r["anomalies"]) os << "- " << field(a, "stage") << ": " << field(a, "message") << "\n";
  }
  if (r.contains("timings")) {
    os << "\n## Timings (s)\n\n";
    for (const auto& [k, v] : r["timings"].items()) os << "- " << k << ": " << show(v) << "\n";
  }
  return os.str();
}

}  // namespace pptlab
