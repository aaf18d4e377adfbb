// pptlab: construct zoo states, analyze state files, run sweeps, check identities.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "pptlab/io.hpp"
#include "pptlab/report.hpp"
#include "pptlab/zoo.hpp"

using namespace pptlab;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitAnomaly = 3;

struct ConstructArgs {
  std::string family;
  int m = 0;
  int n = 0;
  std::vector<double> b;
  std::vector<double> params;
  std::vector<double> c;
  std::string upb_path;
  bool tiles = false;
  std::string out;
};

struct AnalyzeArgs {
  double tol_rank = kRankTol;
  double tol_psd = kPsdTol;
  int starts = 0;
  std::uint64_t seed = 1;
  int parallel = 0;
  int max_rounds = 5;
  bool json = false;
  bool md = false;
  bool timings = false;
  bool no_range = false;
  bool no_edge = false;
  std::string out;

  AnalysisOptions options() const {
    AnalysisOptions o;
    o.tol_rank = tol_rank;
    o.tol_psd = tol_psd;
    o.timings = timings;
    o.range_search = !no_range;
    o.edge = !no_edge;
    o.enumeration.start_count = starts;
    o.enumeration.seed = seed;
    o.enumeration.threads = parallel;
    o.enumeration.max_rounds = max_rounds;
    return o;
  }
};

void add_analysis_flags(CLI::App* cmd, AnalyzeArgs& a) {
  cmd->add_option("--tol-rank", a.tol_rank, "relative SVD rank cutoff");
  cmd->add_option("--tol-psd", a.tol_psd, "PSD eigenvalue tolerance");
  cmd->add_option("--starts", a.starts, "first-round start count (default 40*delta)");
  cmd->add_option("--seed", a.seed, "seed for start points and random draws");
  cmd->add_option("--parallel", a.parallel, "worker threads");
  cmd->add_option("--max-rounds", a.max_rounds, "multistart rounds");
  cmd->add_flag("--timings", a.timings, "record wall-clock timings in the report");
  cmd->add_flag("--no-range", a.no_range, "skip the range CES search");
  cmd->add_flag("--no-edge", a.no_edge, "skip the edge check");
}

FamilyVariant variant_of(const std::string& name) {
  static const std::map<std::string, FamilyVariant> table = {
      {"good-3x4", FamilyVariant::Good3x4Fixed}, {"good-3xN", FamilyVariant::Good3xN},
      {"bad-3x4", FamilyVariant::Bad3x4},        {"bad-3xN", FamilyVariant::Bad3xN},
      {"bad-MxN", FamilyVariant::BadMxN}};
  const auto it = table.find(name);
  if (it == table.end()) throw InputError("unknown family '" + name + "'");
  return it->second;
}

struct Built {
  json file;
  std::optional<BipartiteState> state;
  std::string summary;
};

Built build(const ConstructArgs& a) {
  Built out;
  if (a.family == "gentiles2") {
    const auto upb = gentiles2_upb(a.m ? a.m : 3, a.n ? a.n : 4);
    out.file = upb_to_json(upb);
    std::ostringstream os;
    os << upb.dims.m << "x" << upb.dims.n << " UPB, " << upb.vectors.size() << " vectors, orthonormality defect "
       << upb.orthonormality_defect();
    out.summary = os.str();
    return out;
  }
  if (a.family == "kon-mnogo") {
    out.state = kon_mnogo().state;
  } else if (a.family == "upb-complement") {
    UpbFamily upb = !a.upb_path.empty() ? upb_from_json(read_json_file(a.upb_path))
                    : a.tiles           ? tiles_upb()
                                        : gentiles2_upb(a.m ? a.m : 3, a.n ? a.n : 4);
    out.state = upb_complement_state(upb);
  } else {
    FamilyParams p;
    p.variant = variant_of(a.family);
    int m = a.m, n = a.n;
    switch (p.variant) {
      case FamilyVariant::Good3x4Fixed:
      case FamilyVariant::Bad3x4:
        if (!m) m = 3;
        if (!n) n = 4;
        break;
      case FamilyVariant::Good3xN:
      case FamilyVariant::Bad3xN:
        if (!m) m = 3;
        if (!n) n = a.b.empty() ? 4 : static_cast<int>(a.b.size()) + 3;
        break;
      case FamilyVariant::BadMxN:
        if (!m) m = 4;
        if (!n) n = 4;
        break;
    }
    p.b = a.b;
    p.c = a.c;
    if (!a.params.empty()) {
      if (a.params.size() != 7) throw InputError("--params takes a,b,c,d,e,f,g");
      std::copy(a.params.begin(), a.params.end(), p.abcdefg.begin());
    }
    out.state = make_family(p, m, n);
  }
  out.file = state_to_json(*out.state);
  const auto rp = rank_profile(*out.state);
  std::ostringstream os;
  os << out.state->dims().m << "x" << out.state->dims().n << " state, rank " << rp.rank << ", trace "
     << out.state->trace();
  out.summary = os.str();
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

int cmd_construct(const ConstructArgs& a) {
  const Built b = build(a);
  if (a.out.empty()) {
    std::cout << b.file.dump(2) << "\n";
    std::cerr << b.summary << "\n";
  } else {
    write_text_file(a.out, b.file.dump(2) + "\n");
    std::cout << b.summary << "\n";
  }
  return 0;
}

BipartiteState load_state(const std::string& path, double tol_psd, json& descriptor) {
  if (!std::filesystem::exists(path)) {
    ConstructArgs c;
    c.family = path;
    try {
      auto b = build(c);
      if (b.state) {
        descriptor = {{"source", "family"}, {"family", path}};
        return *b.state;
      }
    } catch (const InputError&) {
    }
    throw InputError("no such state file: " + path);
  }
  descriptor = {{"source", "file"}, {"path", std::filesystem::path(path).filename().string()}};
  return state_from_json(read_json_file(path), tol_psd);
}

int cmd_analyze(const std::string& path, const AnalyzeArgs& a) {
  json descriptor;
  const BipartiteState state = load_state(path, a.tol_psd, descriptor);
  const json rep = analyze_state(state, descriptor, a.options());
  emit(a.md ? render_markdown(rep) : rep.dump(2) + "\n", a.out);
  return has_anomalies(rep) ? kExitAnomaly : 0;
}

struct SweepArgs {
  std::string family;
  int draws = 0;
  int n_min = 4;
  int n_max = 8;
  int m_min = 4;
  int max_sum = 14;
  std::vector<std::string> shapes;
};

struct SweepPoint {
  json params;
  std::function<BipartiteState()> make;
};

std::vector<double> draw_b(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> b;
  while (static_cast<int>(b.size()) < count) {
    const double x = u(rng);
    bool ok = std::abs(x) > 0.2 && std::abs(x * x - 1.0) > 0.2;
    for (double y : b) ok = ok && std::abs(x * x - y * y) > 0.2;
    if (ok) b.push_back(x);
  }
  return b;
}

std::vector<SweepPoint> sweep_points(const SweepArgs& s, std::uint64_t seed) {
  std::vector<SweepPoint> pts;
  std::mt19937_64 rng(seed);
  if (s.family == "bad-MxN") {
    for (int m = s.m_min; 2 * m <= s.max_sum; ++m) {
      for (int n = m; m + n <= s.max_sum; ++n) {
        FamilyParams p;
        p.variant = FamilyVariant::BadMxN;
        pts.push_back({{{"m", m}, {"n", n}}, [p, m, n] { return make_family(p, m, n); }});
      }
    }
  } else if (s.family == "good-3xN") {
    const int draws = s.draws > 0 ? s.draws : 5;
    for (int n = s.n_min; n <= s.n_max; ++n) {
      for (int d = 0; d < draws; ++d) {
        FamilyParams p;
        p.variant = FamilyVariant::Good3xN;
        p.b = draw_b(rng, n - 3);
        pts.push_back({{{"m", 3}, {"n", n}, {"b", p.b}}, [p, n] { return make_family(p, 3, n); }});
      }
    }
  } else if (s.family == "bad-3x4") {
    const int draws = s.draws > 0 ? s.draws : 10;
    std::uniform_real_distribution<double> mag(0.5, 2.0), u(-1.0, 1.0);
    std::bernoulli_distribution sign(0.5);
    for (int d = 0; d < draws; ++d) {
      FamilyParams p;
      p.variant = FamilyVariant::Bad3x4;
      for (int i = 0; i < 5; ++i) p.abcdefg[i] = (sign(rng) ? -1.0 : 1.0) * mag(rng);
      p.abcdefg[5] = u(rng);
      p.abcdefg[6] = u(rng);
      const std::vector<double> v(p.abcdefg.begin(), p.abcdefg.end());
      pts.push_back({{{"m", 3}, {"n", 4}, {"abcdefg", v}}, [p] { return make_family(p, 3, 4); }});
    }
  } else if (s.family == "bad-3xN") {
    for (int n = s.n_min; n <= s.n_max; ++n) {
      FamilyParams p;
      p.variant = FamilyVariant::Bad3xN;
      pts.push_back({{{"m", 3}, {"n", n}}, [p, n] { return make_family(p, 3, n); }});
    }
  } else if (s.family == "gentiles2") {
    const std::vector<std::string> shapes =
        s.shapes.empty() ? std::vector<std::string>{"3x4", "3x5", "4x5", "4x6"} : s.shapes;
    for (const auto& sh : shapes) {
      int m = 0, n = 0;
      char x = 0;
      std::istringstream is(sh);
      if (!(is >> m >> x >> n) || x != 'x') throw InputError("shape must look like 3x4, got " + sh);
      pts.push_back({{{"m", m}, {"n", n}}, [m, n] { return upb_complement_state(gentiles2_upb(m, n)); }});
    }
  } else {
    throw InputError("sweep supports bad-MxN, good-3xN, bad-3x4, bad-3xN and gentiles2");
  }
  return pts;
}

int cmd_sweep(const SweepArgs& s, const AnalyzeArgs& a) {
  const auto pts = sweep_points(s, a.seed);
  const int workers = std::max(1, std::min<int>(a.parallel > 0 ? a.parallel : 1, static_cast<int>(pts.size())));
  AnalysisOptions opts = a.options();
  if (workers > 1) opts.enumeration.threads = 1;

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw InputError("cannot write " + a.out);
  }
  std::ostream& os = a.out.empty() ? std::cout : file;

  std::vector<std::optional<json>> lines(pts.size());
  std::mutex mu;
  std::size_t written = 0;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pts.size(); i = next++) {
      json line = {{"index", i}, {"family", s.family}, {"point", pts[i].params}};
      try {
        const auto state = pts[i].make();
        line["report"] = analyze_state(state, {{"source", "sweep"}, {"family", s.family}, {"params", pts[i].params}},
                                       opts);
      } catch (const std::exception& e) {
        line["error"] = e.what();
      }
      std::lock_guard<std::mutex> lock(mu);
      lines[i] = std::move(line);
      while (written < lines.size() && lines[written]) {
        os << lines[written]->dump() << "\n" << std::flush;
        ++written;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::map<std::string, int> extremality, goodness, kernel;
  int errors = 0, anomalous = 0;
  for (const auto& l : lines) {
    if (l->contains("error")) {
      ++errors;
      continue;
    }
    const auto& r = (*l)["report"];
    if (has_anomalies(r)) ++anomalous;
    if (r.contains("extremality")) ++extremality[r["extremality"]["verdict"].get<std::string>()];
    if (r.contains("goodness")) ++goodness[r["goodness"]["verdict"].get<std::string>()];
    if (r.contains("kernel")) ++kernel[r["kernel"]["classification"].get<std::string>()];
  }
  const json summary = {{"summary",
                         {{"family", s.family},
                          {"points", pts.size()},
                          {"errors", errors},
                          {"anomalies", anomalous},
                          {"extremality", extremality},
                          {"goodness", goodness},
                          {"kernel", kernel}}}};
  os << summary.dump() << "\n";
  return errors + anomalous > 0 ? kExitAnomaly : 0;
}

int cmd_verify(int max_mn, const std::string& out) {
  if (max_mn < 1 || max_mn > 12) throw InputError("--max-mn must lie in [1, 12]");
  int checked = 0;
  json failures = json::array();
  for (int m = 1; m <= max_mn; ++m) {
    for (int n = 1; n <= max_mn; ++n) {
      for (int r = 1; r <= m + n - 2; ++r) {
        ++checked;
        if (degree_sum(m, n, r) != delta(m, n)) failures.push_back({{"m", m}, {"n", n}, {"r", r}});
      }
    }
  }
  json circ = json::array();
  bool circ_ok = true;
  for (int m = 3; m <= max_mn; ++m) {
    const auto row = gentiles2_z_row(m);
    const cplx f = circulant_det(row);
    const double dense = circulant_matrix(row).determinant();
    double f1 = 0.0;
    for (double x : row) f1 += x;
    const double rel = std::abs(f - dense) / std::max(1.0, std::abs(dense));
    const bool ok = rel < 1e-9 && f1 == 4.0 * m;
    circ_ok = circ_ok && ok;
    circ.push_back({{"m", m}, {"first_row", row}, {"product_over_roots", f.real()},
                    {"dense_determinant", dense}, {"relative_difference", rel}, {"f_at_1", f1}, {"pass", ok}});
  }
  const bool pass = failures.empty() && circ_ok;
  const json rep = {{"max_mn", max_mn},
                    {"binomial_identity", {{"checked", checked}, {"failures", failures}}},
                    {"circulant", circ},
                    {"pass", pass}};
  emit(rep.dump(2) + "\n", out);
  return pass ? 0 : kExitAnomaly;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PPT state construction, product-vector enumeration and extremality certificates"};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "write a zoo state (or UPB) as JSON");
  construct->add_option("family", ca.family, "gentiles2, kon-mnogo, good-3x4, good-3xN, bad-3x4, bad-3xN, bad-MxN, upb-complement")
      ->required();
  construct->add_option("--m", ca.m, "local dimension of A");
  construct->add_option("--n", ca.n, "local dimension of B");
  construct->add_option("--b", ca.b, "good-3xN parameters b_1..b_{n-3}")->delimiter(',');
  construct->add_option("--params", ca.params, "bad-3x4 parameters a,b,c,d,e,f,g")->delimiter(',');
  construct->add_option("--c", ca.c, "bad-MxN parameters c_3..c_{m-1}")->delimiter(',');
  construct->add_option("--upb", ca.upb_path, "UPB JSON file for upb-complement");
  construct->add_flag("--tiles", ca.tiles, "use the 3x3 Tiles UPB for upb-complement");
  construct->add_option("--out", ca.out, "output file");

  std::string state_path;
  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "full analysis report for a state file");
  analyze->add_option("state", state_path, "state JSON file (or a family name with default parameters)")
      ->required();
  add_analysis_flags(analyze, aa);
  analyze->add_flag("--json", aa.json, "JSON report (default)");
  analyze->add_flag("--md", aa.md, "markdown report");
  analyze->add_option("--out", aa.out, "output file");

  SweepArgs sa;
  AnalyzeArgs sw;
  auto* sweep = app.add_subcommand("sweep", "JSONL reports over a parameter family");
  sweep->add_option("family", sa.family, "bad-MxN, good-3xN, bad-3x4, bad-3xN, gentiles2")->required();
  sweep->add_option("--draws", sa.draws, "random parameter draws per shape");
  sweep->add_option("--n-min", sa.n_min, "smallest n");
  sweep->add_option("--n-max", sa.n_max, "largest n");
  sweep->add_option("--m-min", sa.m_min, "smallest m for bad-MxN");
  sweep->add_option("--max-sum", sa.max_sum, "largest m+n for bad-MxN");
  sweep->add_option("--shapes", sa.shapes, "gentiles2 shapes such as 3x4,4x5")->delimiter(',');
  add_analysis_flags(sweep, sw);
  sweep->add_option("--out", sw.out, "output JSONL file");

  int max_mn = 8;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify-identities", "binomial degree identity and circulant determinants");
  verify->add_option("--max-mn", max_mn, "largest local dimension (<= 12)");
  verify->add_option("--out", verify_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    if (*construct) return cmd_construct(ca);
    if (*analyze) return cmd_analyze(state_path, aa);
    if (*sweep) return cmd_sweep(sa, sw);
    if (*verify) return cmd_verify(max_mn, verify_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitAnomaly;
  }
  return 0;
}
