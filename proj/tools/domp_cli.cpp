// domp: command-line front end for the ordered median library.

#include <algorithm>
#include <filesystem>
#include <limits>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "domp/bench_io.hpp"
#include "domp/certificates.hpp"
#include "domp/clusterability.hpp"
#include "domp/error.hpp"
#include "domp/exact.hpp"
#include "domp/formulations.hpp"
#include "domp/instance.hpp"
#include "domp/lp.hpp"
#include "domp/ordered_median.hpp"

namespace {

using domp::format_number;
using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to the file named by `path`, or stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

struct InstanceArgs {
  std::string path;
  std::string weights;
  std::optional<std::size_t> p;
};

void add_instance_options(CLI::App* app, InstanceArgs& args) {
  app->add_option("-i,--instance", args.path, "Instance file (matrix or coordinate format)")->required();
  app->add_option("-w,--weights", args.weights,
                  "Weights: median | center | ksum:K | ksum:Fm | centdian:G | file:PATH "
                  "(default: the weights stored in the instance file)");
  app->add_option("-p,--p", args.p, "Number of centers (default: the value in the instance file)");
}

domp::WeightSpec parse_spec(const std::string& text) {
  try {
    return domp::parse_weight_spec(text);
  } catch (const domp::ParameterError& e) {
    throw UsageError(e.what());
  }
}

domp::Instance load_instance(const InstanceArgs& args) {
  std::optional<domp::WeightSpec> spec;
  if (!args.weights.empty()) spec = parse_spec(args.weights);
  domp::InstanceFile file = domp::read_instance_file(args.path);
  const std::size_t m = file.dist.size();
  std::optional<domp::WeightVector> w;
  if (spec) w = domp::make_weights(*spec, m);
  else if (file.weights) w = domp::WeightVector(*file.weights);
  else throw UsageError(args.path + " carries no weights; pass --weights");
  return domp::Instance(std::move(file.dist), std::move(*w), args.p.value_or(file.p), std::move(file.points));
}

std::string join_one_based(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + std::to_string(v[k] + 1);
  return s;
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& v) {
  std::vector<std::size_t> out(v);
  for (auto& x : out) ++x;
  return out;
}

// Emits key/value records as `key=value` lines or as one JSON object.
class Record {
 public:
  void put(const std::string& key, const std::string& text, Json value) {
    keys_.push_back(key);
    text_.push_back(text);
    json_[key] = std::move(value);
  }
  void num(const std::string& key, double v) { put(key, format_number(v), std::stod(format_number(v))); }
  void flag(const std::string& key, bool b) { put(key, b ? "true" : "false", b); }
  void str(const std::string& key, const std::string& s) { put(key, s, s); }
  void count(const std::string& key, std::size_t n) { put(key, std::to_string(n), n); }
  void list(const std::string& key, const std::vector<std::size_t>& v) { put(key, join_one_based(v), one_based(v)); }

  void write(std::ostream& out, bool json) const {
    if (json) {
      out << json_.dump() << '\n';
      return;
    }
    for (std::size_t k = 0; k < keys_.size(); ++k) out << keys_[k] << '=' << text_[k] << '\n';
  }

 private:
  std::vector<std::string> keys_;
  std::vector<std::string> text_;
  Json json_ = Json::object();
};

// ---------------------------------------------------------------- solve

struct SolveArgs {
  InstanceArgs inst;
  std::string output;
  bool json = false;
  unsigned jobs = 1;
};

int run_solve(const SolveArgs& a) {
  const domp::Instance inst = load_instance(a.inst);
  domp::EnumerationOptions opt;
  opt.jobs = a.jobs;
  const domp::CenterSolution sol = domp::solve_enumeration(inst, opt);
  Record r;
  r.count("m", inst.size());
  r.count("p", inst.p());
  r.num("v_ip", sol.value);
  r.list("centers", sol.centers);
  std::vector<std::size_t> assign(sol.assignment);
  r.list("assignment", assign);
  Output out(a.output);
  r.write(out.stream(), a.json);
  std::cerr << "optimal value " << format_number(sol.value) << " with centers " << join_one_based(sol.centers)
            << '\n';
  return kOk;
}

// ---------------------------------------------------------------- relax

struct RelaxArgs {
  InstanceArgs inst;
  std::string output;
  std::string formulation = "bep";
  std::string write_lp;
  bool closest = false;
  bool json = false;
};

int run_relax(const RelaxArgs& a) {
  const domp::Instance inst = load_instance(a.inst);
  Record r;
  r.count("m", inst.size());
  r.count("p", inst.p());
  r.str("formulation", a.formulation);
  if (a.formulation == "ot") {
    const domp::DompModel model = domp::build_ot(inst, a.closest);
    const domp::LpSolution lp = domp::solve_lp(model.lp);
    if (!a.write_lp.empty()) {
      std::ofstream f(a.write_lp);
      domp::write_lp_text(f, model.lp, "ot");
    }
    if (lp.status != domp::LpStatus::Optimal)
      throw domp::InternalError("relaxation ended with status " + domp::to_string(lp.status));
    const domp::CenterSolution best = domp::solve_enumeration(inst);
    const double gap = domp::lp_gap(best.value, lp.objective);
    const auto frac = domp::fractionality_report(model, lp);
    r.num("v_lp", lp.objective);
    r.num("v_ip", best.value);
    r.num("gap_lp", domp::values_match(best.value, lp.objective) ? 0.0 : gap);
    r.flag("recovered", domp::values_match(best.value, lp.objective));
    r.flag("vertex_integral", frac.integral);
    r.list("best_centers", best.centers);
    Output out(a.output);
    r.write(out.stream(), a.json);
    std::cerr << "OT relaxation " << format_number(lp.objective) << " vs integral " << format_number(best.value)
              << '\n';
    return kOk;
  }
  domp::RecoveryOptions opt;
  opt.bep.closest_assignment = a.closest;
  const domp::RecoveryReport rep = domp::recovery_status(inst, opt);
  if (!a.write_lp.empty()) {
    domp::BepOptions b;
    b.closest_assignment = a.closest;
    std::ofstream f(a.write_lp);
    domp::write_lp_text(f, domp::build_bep(inst, b).lp, "bep");
  }
  r.num("v_lp", rep.v_lp);
  r.num("v_ip", rep.v_ip);
  r.num("gap_lp", rep.gap_lp);
  r.flag("recovered", rep.recovered);
  r.flag("vertex_integral", rep.vertex_integral);
  r.list("best_centers", rep.best_solution.centers);
  r.count("lp_iterations", rep.lp_iterations);
  Output out(a.output);
  r.write(out.stream(), a.json);
  std::cerr << "LP " << format_number(rep.v_lp) << ", integral " << format_number(rep.v_ip) << ", gap "
            << format_number(rep.gap_lp) << (rep.recovered ? ", recovered" : ", not recovered") << " ("
            << rep.seconds_lp << " s LP, " << rep.seconds_enumeration << " s enumeration)\n";
  return kOk;
}

// ---------------------------------------------------------------- certify

struct CertifyArgs {
  InstanceArgs inst;
  std::string output;
  std::vector<std::size_t> centers;
  double epsilon = 0.0;
  bool strict = false;
  bool alpha = false;
  bool json = false;
};

int run_certify(const CertifyArgs& a) {
  const domp::Instance inst = load_instance(a.inst);
  domp::CenterSolution sol;
  if (a.centers.empty()) {
    sol = domp::solve_enumeration(inst);
  } else {
    std::vector<std::size_t> c;
    for (std::size_t j : a.centers) {
      if (j < 1 || j > inst.size()) throw UsageError("center " + std::to_string(j) + " out of range");
      c.push_back(j - 1);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.size() != inst.p()) throw UsageError("--centers must list exactly p distinct points");
    sol = domp::closest_allocation(inst.dist(), c, inst.weights().values());
  }
  const double margin = a.strict ? (a.epsilon > 0.0 ? a.epsilon : domp::certificate_margin(inst)) : a.epsilon;
  const domp::CertificateSearch cs = domp::search_certificate(inst, sol, margin);
  const domp::Prediction pred = domp::predict_non_recovery(inst);

  Output out(a.output);
  std::ostream& os = out.stream();
  auto slack = [&](double v) -> std::string {
    if (!cs.certificate) return "n/a";
    if (v == std::numeric_limits<double>::infinity()) return "vacuous";
    return format_number(v);
  };
  if (a.json) {
    Json j;
    j["centers"] = one_based(sol.centers);
    j["value"] = std::stod(format_number(sol.value));
    j["margin"] = std::stod(format_number(margin));
    j["certificate"] = cs.feasible ? "feasible" : "infeasible";
    j["lp_status"] = domp::to_string(cs.lp_status);
    j["strict"] = cs.verdict.strict;
    Json cond = Json::object();
    cond["equal_contribution"] = slack(cs.verdict.equal_contribution);
    cond["noncenter_bound"] = slack(cs.verdict.noncenter_bound);
    cond["assigned_cover"] = slack(cs.verdict.assigned_cover);
    cond["unassigned_cap"] = slack(cs.verdict.unassigned_cap);
    j["conditions"] = cond;
    j["prediction"] = domp::to_string(pred.kind);
    j["prediction_items"] = pred.items;
    if (a.alpha && cs.certificate) {
      Json al = Json::array();
      for (double v : cs.certificate->alpha) al.push_back(std::stod(format_number(v)));
      j["alpha"] = al;
      j["omega"] = std::stod(format_number(cs.certificate->omega));
    }
    os << j.dump() << '\n';
  } else {
    os << "centers=" << join_one_based(sol.centers) << '\n';
    os << "value=" << format_number(sol.value) << '\n';
    os << "margin=" << format_number(margin) << '\n';
    os << "certificate=" << (cs.feasible ? "feasible" : "infeasible") << '\n';
    os << "lp_status=" << domp::to_string(cs.lp_status) << '\n';
    os << "strict=" << (cs.verdict.strict ? "true" : "false") << '\n';
    os << "\n[equal contribution at centers]\nworst_slack=" << slack(cs.verdict.equal_contribution) << '\n';
    os << "\n[non-center contribution bound]\nworst_slack=" << slack(cs.verdict.noncenter_bound) << '\n';
    os << "\n[assigned points covered]\nworst_slack=" << slack(cs.verdict.assigned_cover) << '\n';
    os << "\n[unassigned points capped]\nworst_slack=" << slack(cs.verdict.unassigned_cap) << '\n';
    os << "\n[prediction]\nkind=" << domp::to_string(pred.kind) << "\nitems=";
    for (std::size_t k = 0; k < pred.items.size(); ++k) os << (k ? " " : "") << pred.items[k];
    os << '\n';
    if (a.alpha && cs.certificate) {
      os << "\n[alpha]\n";
      for (std::size_t i = 0; i < cs.certificate->alpha.size(); ++i)
        os << "alpha_" << i + 1 << '=' << format_number(cs.certificate->alpha[i]) << '\n';
      os << "omega=" << format_number(cs.certificate->omega) << '\n';
    }
  }
  std::cerr << "certificate " << (cs.feasible ? "found" : "not found") << " for centers "
            << join_one_based(sol.centers) << "; prediction: " << pred.reason << '\n';
  return kOk;
}

// ---------------------------------------------------------------- clusterability

struct ClusterArgs {
  std::vector<std::string> instances;
  std::string output;
  std::string mode = "auto";
  std::size_t bootstrap = 1000;
  std::uint64_t seed = 1;
  std::size_t mds_threshold = 60;
  unsigned jobs = 1;
  bool json = false;
};

int run_clusterability(const ClusterArgs& a) {
  domp::SampleMode mode;
  try {
    mode = domp::parse_sample_mode(a.mode);
  } catch (const domp::ParameterError& e) {
    throw UsageError(e.what());
  }
  std::vector<domp::DipEntry> entries;
  std::vector<std::size_t> sizes;
  for (std::size_t k = 0; k < a.instances.size(); ++k) {
    const domp::InstanceFile file = domp::read_instance_file(a.instances[k]);
    const auto sample = domp::clusterability_sample(file.dist, mode, a.mds_threshold);
    const double dip = domp::dip_statistic(sample).dip;
    const double pv = domp::dip_pvalue(sample, a.bootstrap, a.seed + k, a.jobs);
    entries.push_back({a.instances[k], dip, pv});
    sizes.push_back(sample.size());
  }
  const bool collection = entries.size() >= 2;
  std::vector<domp::ClusterLabel> ld, lp;
  if (collection) {
    ld = domp::classify_collection(entries, domp::LabelBasis::DipStatistic);
    lp = domp::classify_collection(entries, domp::LabelBasis::DipPvalue);
  }
  Output out(a.output);
  std::ostream& os = out.stream();
  if (!a.json) {
    os << "instance,n,mode,dip,pvalue";
    if (collection) os << ",label_dip,label_pvalue";
    os << '\n';
  }
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (a.json) {
      Json j;
      j["instance"] = entries[k].id;
      j["n"] = sizes[k];
      j["mode"] = a.mode;
      j["dip"] = std::stod(format_number(entries[k].dip));
      j["pvalue"] = std::stod(format_number(entries[k].pvalue));
      if (collection) {
        j["label_dip"] = domp::to_string(ld[k]);
        j["label_pvalue"] = domp::to_string(lp[k]);
      }
      os << j.dump() << '\n';
    } else {
      os << entries[k].id << ',' << sizes[k] << ',' << a.mode << ',' << format_number(entries[k].dip) << ','
         << format_number(entries[k].pvalue);
      if (collection) os << ',' << domp::to_string(ld[k]) << ',' << domp::to_string(lp[k]);
      os << '\n';
    }
  }
  std::cerr << entries.size() << " instance(s), " << a.bootstrap << " bootstrap replicates\n";
  return kOk;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  domp::BallParams ball;
  std::size_t m = 12;
  std::size_t dim = 2;
  std::uint64_t seed = 1;
  std::optional<std::size_t> p;
  std::string output;
};

int run_generate(const std::string& model, const GenerateArgs& a) {
  domp::GeneratedInstance g;
  std::size_t p = 1;
  if (model == "ball") {
    domp::BallParams b = a.ball;
    b.m = a.m;
    b.dim = a.dim;
    b.seed = a.seed;
    g = domp::generate_ball(b);
    p = a.p.value_or(b.clusters);
  } else {
    g = domp::generate_uniform(a.m, a.dim, a.seed);
    p = a.p.value_or(1);
  }
  if (p < 1 || p > a.m) throw UsageError("--p must lie in 1..m");
  Output out(a.output);
  domp::write_instance_points(out.stream(), g.points, p);
  std::cerr << "generated " << model << " instance with m = " << a.m << " in dimension " << a.dim << '\n';
  return kOk;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
  std::vector<std::string> instances;
  std::vector<std::string> pmed;
  std::size_t m_prime = 20;
  std::size_t balls = 0;
  std::size_t uniforms = 0;
  std::size_t gen_m = 14;
  std::size_t clusters = 3;
  double radius = 1.0;
  double separation = 8.0;
  std::size_t dim = 2;
  std::vector<std::string> weights{"median", "center"};
  std::vector<std::size_t> p_values{2, 3};
  std::size_t bootstrap = 200;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  bool no_timings = false;
  bool closest = false;
  std::string mode = "auto";
  std::size_t mds_threshold = 60;
  bool json = false;
  std::string output;
  std::string profile_dir;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  domp::ExperimentConfig cfg;
  for (const auto& w : a.weights) cfg.weights.push_back(parse_spec(w));
  cfg.p_values = a.p_values;
  cfg.bootstrap = a.bootstrap;
  cfg.seed = a.seed;
  cfg.timings = !a.no_timings;
  cfg.jobs = a.jobs;
  cfg.mds_threshold = a.mds_threshold;
  cfg.recovery.bep.closest_assignment = a.closest;
  try {
    cfg.sample_mode = domp::parse_sample_mode(a.mode);
  } catch (const domp::ParameterError& e) {
    throw UsageError(e.what());
  }
  if (a.m_prime < 2) throw UsageError("--m-prime must be at least 2");

  std::vector<domp::ExperimentInstance> batch;
  for (const auto& path : a.instances) {
    domp::InstanceFile f = domp::read_instance_file(path);
    domp::ExperimentInstance e;
    e.id = std::filesystem::path(path).stem().string();
    e.dist = std::move(f.dist);
    e.points = std::move(f.points);
    e.family = "file";
    e.m_full = e.dist.size();
    batch.push_back(std::move(e));
  }
  for (const auto& path : a.pmed) {
    const domp::EdgeGraph g = domp::parse_pmed_file(path);
    batch.push_back(domp::pmed_instance(std::filesystem::path(path).stem().string(), g, a.m_prime));
  }
  for (std::size_t k = 0; k < a.balls; ++k) {
    domp::BallParams b;
    b.m = a.gen_m;
    b.clusters = a.clusters;
    b.radius = a.radius;
    b.separation = a.separation;
    b.dim = a.dim;
    b.seed = a.seed * 1000003 + k;
    domp::GeneratedInstance g = domp::generate_ball(b);
    domp::ExperimentInstance e;
    e.id = "ball" + std::to_string(k + 1);
    e.dist = std::move(g.dist);
    e.points = std::move(g.points);
    e.family = "ball";
    e.param = a.radius > 0.0 ? a.separation / a.radius : 0.0;
    e.m_full = a.gen_m;
    batch.push_back(std::move(e));
  }
  for (std::size_t k = 0; k < a.uniforms; ++k) {
    domp::GeneratedInstance g = domp::generate_uniform(a.gen_m, a.dim, a.seed * 2000003 + k);
    domp::ExperimentInstance e;
    e.id = "uniform" + std::to_string(k + 1);
    e.dist = std::move(g.dist);
    e.points = std::move(g.points);
    e.family = "uniform";
    e.m_full = a.gen_m;
    batch.push_back(std::move(e));
  }
  if (batch.empty()) throw UsageError("no instances: pass --instance, --pmed, --balls or --uniforms");

  const domp::ExperimentResult res = domp::run_experiment(batch, cfg);
  Output out(a.output);
  if (a.json) domp::write_experiment_json(out.stream(), res.rows);
  else domp::write_experiment_csv(out.stream(), res.rows);

  if (!a.profile_dir.empty()) {
    std::filesystem::create_directories(a.profile_dir);
    for (const auto& s : res.profiles) {
      std::string name = s.family;
      std::replace(name.begin(), name.end(), ':', '_');
      std::ofstream f(std::filesystem::path(a.profile_dir) / ("profile_" + name + ".csv"));
      domp::write_profile(f, s);
    }
  }
  std::size_t failed = 0, recovered = 0;
  for (const auto& r : res.rows) {
    if (!r.error.empty()) ++failed;
    else if (r.recovered) ++recovered;
  }
  std::cerr << res.rows.size() << " rows, " << recovered << " recovered, " << failed << " failed\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete ordered median problem: exact solutions, LP relaxations, recovery certificates"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Exact optimum by enumeration of center sets");
  add_instance_options(c_solve, solve.inst);
  c_solve->add_option("-o,--output", solve.output, "Output file (default stdout)");
  c_solve->add_option("--jobs", solve.jobs, "Worker threads")->check(CLI::PositiveNumber);
  c_solve->add_flag("--json", solve.json, "Emit JSON");

  RelaxArgs relax;
  auto* c_relax = app.add_subcommand("relax", "Solve the LP relaxation and compare with the exact optimum");
  add_instance_options(c_relax, relax.inst);
  c_relax->add_option("-o,--output", relax.output, "Output file (default stdout)");
  c_relax->add_option("--formulation", relax.formulation, "bep or ot")
      ->check(CLI::IsMember({"bep", "ot"}));
  c_relax->add_flag("--closest-assignment", relax.closest, "Add closest-assignment rows");
  c_relax->add_option("--write-lp", relax.write_lp, "Write the LP in text form to this file");
  c_relax->add_flag("--json", relax.json, "Emit JSON");

  CertifyArgs certify;
  auto* c_cert = app.add_subcommand("certify", "Search for an ordered-contribution dual certificate");
  add_instance_options(c_cert, certify.inst);
  c_cert->add_option("-o,--output", certify.output, "Output file (default stdout)");
  c_cert->add_option("--centers", certify.centers, "Centers to certify, 1-based (default: the exact optimum)");
  c_cert->add_option("--epsilon", certify.epsilon, "Strictness margin for the certificate inequalities")
      ->check(CLI::NonNegativeNumber);
  c_cert->add_flag("--strict", certify.strict, "Require a strict certificate (default margin scales with d)");
  c_cert->add_flag("--alpha", certify.alpha, "Print the alpha vector");
  c_cert->add_flag("--json", certify.json, "Emit JSON");

  ClusterArgs cluster;
  auto* c_clu = app.add_subcommand("clusterability", "Dip statistic, bootstrap p-value and labels");
  c_clu->add_option("-i,--instance", cluster.instances, "Instance file(s); two or more enable labels")
      ->required();
  c_clu->add_option("-o,--output", cluster.output, "Output file (default stdout)");
  c_clu->add_option("--sample-mode", cluster.mode, "auto | distances | mds");
  c_clu->add_option("--bootstrap", cluster.bootstrap, "Bootstrap replicates B");
  c_clu->add_option("--seed", cluster.seed, "Random seed");
  c_clu->add_option("--mds-threshold", cluster.mds_threshold, "Auto mode switches to MDS above this many points");
  c_clu->add_option("--jobs", cluster.jobs, "Worker threads")->check(CLI::PositiveNumber);
  c_clu->add_flag("--json", cluster.json, "Emit JSON");

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Write a synthetic coordinate instance");
  c_gen->require_subcommand(1);
  auto* c_ball = c_gen->add_subcommand("ball", "Points uniform in separated balls");
  auto* c_unif = c_gen->add_subcommand("uniform", "Points uniform in the unit cube");
  for (auto* c : {c_ball, c_unif}) {
    c->add_option("--m", gen.m, "Number of points")->check(CLI::PositiveNumber);
    c->add_option("--dim", gen.dim, "Dimension")->check(CLI::PositiveNumber);
    c->add_option("--seed", gen.seed, "Random seed");
    c->add_option("-p,--p", gen.p, "Number of centers written to the file");
    c->add_option("-o,--output", gen.output, "Output file (default stdout)");
  }
  c_ball->add_option("--clusters", gen.ball.clusters, "Number of balls")->check(CLI::PositiveNumber);
  c_ball->add_option("--radius", gen.ball.radius, "Ball radius")->check(CLI::NonNegativeNumber);
  c_ball->add_option("--sep", gen.ball.separation, "Minimum distance between ball centers")
      ->check(CLI::NonNegativeNumber);

  ExperimentArgs exp;
  auto* c_exp = app.add_subcommand("experiment", "Batch recovery and clusterability report");
  c_exp->add_option("-i,--instance", exp.instances, "Instance file(s)");
  c_exp->add_option("--pmed", exp.pmed, "ORLIB pmed file(s)");
  c_exp->add_option("--m-prime", exp.m_prime, "Vertex prefix taken from each pmed graph");
  c_exp->add_option("--balls", exp.balls, "Number of generated ball instances");
  c_exp->add_option("--uniforms", exp.uniforms, "Number of generated uniform instances");
  c_exp->add_option("--m", exp.gen_m, "Points per generated instance");
  c_exp->add_option("--clusters", exp.clusters, "Balls per generated instance");
  c_exp->add_option("--radius", exp.radius, "Ball radius");
  c_exp->add_option("--sep", exp.separation, "Ball separation");
  c_exp->add_option("--dim", exp.dim, "Dimension of generated instances");
  c_exp->add_option("-w,--weights", exp.weights, "Weight specs (repeatable)");
  c_exp->add_option("-p,--p", exp.p_values, "Center counts (repeatable)");
  c_exp->add_option("--bootstrap", exp.bootstrap, "Bootstrap replicates B");
  c_exp->add_option("--seed", exp.seed, "Random seed");
  c_exp->add_option("--jobs", exp.jobs, "Worker threads")->check(CLI::PositiveNumber);
  c_exp->add_flag("--no-timings", exp.no_timings, "Report zero cpu times so output is reproducible");
  c_exp->add_flag("--closest-assignment", exp.closest, "Add closest-assignment rows");
  c_exp->add_option("--sample-mode", exp.mode, "auto | distances | mds");
  c_exp->add_option("--mds-threshold", exp.mds_threshold, "Auto mode switches to MDS above this many points");
  c_exp->add_option("--profile-dir", exp.profile_dir, "Directory for per-family performance profiles");
  c_exp->add_flag("--json", exp.json, "Emit one JSON object per row");
  c_exp->add_option("-o,--output", exp.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_solve->parsed()) return run_solve(solve);
    if (c_relax->parsed()) return run_relax(relax);
    if (c_cert->parsed()) return run_certify(certify);
    if (c_clu->parsed()) return run_clusterability(cluster);
    if (c_ball->parsed()) return run_generate("ball", gen);
    if (c_unif->parsed()) return run_generate("uniform", gen);
    if (c_exp->parsed()) return run_experiment_cmd(exp);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}
