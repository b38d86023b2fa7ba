#include "domp/bench_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "domp/error.hpp"

namespace domp {

namespace {

// Whitespace tokenizer that remembers the line of the last token.
class Tokens {
 public:
  Tokens(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string& tok) {
    while (pos_ >= toks_.size()) {
      std::string line;
      if (!std::getline(in_, line)) return false;
      ++line_;
      std::istringstream is(line);
      toks_.clear();
      pos_ = 0;
      std::string t;
      while (is >> t) toks_.push_back(t);
    }
    tok = toks_[pos_++];
    return true;
  }

  long long integer(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(source_, line_, std::string("unexpected end of file reading ") + what);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty()) throw ParseError(source_, line_, std::string("expected an integer ") + what + ", got '" + tok + "'");
    return v;
  }

  std::size_t line() const { return line_; }
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

EdgeGraph parse_pmed(std::istream& in, const std::string& source) {
  Tokens tok(in, source);
  EdgeGraph g;
  const long long n = tok.integer("vertex count");
  const long long e = tok.integer("edge count");
  const long long p = tok.integer("p");
  if (n < 1 || e < 0 || p < 1 || p > n) throw ParseError(source, tok.line(), "header must satisfy n >= 1, edges >= 0, 1 <= p <= n");
  g.n = static_cast<std::size_t>(n);
  g.p = static_cast<std::size_t>(p);
  g.declared_edges = static_cast<std::size_t>(e);

  std::map<std::pair<std::size_t, std::size_t>, double> best;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (long long k = 0; k < e; ++k) {
    const long long a = tok.integer("edge endpoint");
    const long long b = tok.integer("edge endpoint");
    const long long c = tok.integer("edge cost");
    if (a < 1 || a > n || b < 1 || b > n)
      throw ParseError(source, tok.line(), "vertex out of range 1.." + std::to_string(n));
    if (c <= 0) throw ParseError(source, tok.line(), "edge cost must be a positive integer");
    if (a == b) continue;
    const std::pair<std::size_t, std::size_t> key = std::minmax(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(key, static_cast<double>(c));
      order.push_back(key);
    } else {
      it->second = std::min(it->second, static_cast<double>(c));
    }
  }
  std::string extra;
  if (tok.next(extra)) throw ParseError(source, tok.line(), "more edges than the declared " + std::to_string(e));
  for (const auto& key : order) g.edges.push_back({key.first, key.second, best[key]});
  return g;
}

EdgeGraph parse_pmed_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_pmed(in, path);
}

DistanceMatrix floyd_warshall(const EdgeGraph& g) {
  const std::size_t n = g.n;
  std::vector<double> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (const auto& e : g.edges) {
    d[e.a * n + e.b] = std::min(d[e.a * n + e.b], e.cost);
    d[e.b * n + e.a] = std::min(d[e.b * n + e.a], e.cost);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d[i * n + k];
      if (dik == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double via = dik + d[k * n + j];
        if (via < d[i * n + j]) d[i * n + j] = via;
      }
    }
  }
  for (std::size_t j = 1; j < n; ++j)
    if (d[j] == kInf) throw StructuralError("graph is disconnected: vertex " + std::to_string(j + 1) + " is unreachable from vertex 1");
  return DistanceMatrix(n, std::move(d));
}

namespace {

std::vector<double> uniform_in_ball(std::mt19937_64& rng, std::size_t dim, double radius) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : v) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
  for (double& x : v) x *= r / norm;
  return v;
}

}  // namespace

GeneratedInstance generate_ball(const BallParams& params) {
  if (params.m < 1 || params.clusters < 1 || params.clusters > params.m)
    throw ParameterError("ball model needs 1 <= clusters <= m");
  if (params.dim < 1) throw ParameterError("dimension must be positive");
  if (!(params.radius >= 0.0) || !(params.separation >= 0.0))
    throw ParameterError("radius and separation must be nonnegative");

  std::mt19937_64 rng(params.seed);
  const std::size_t k = params.clusters;
  const double side = 2.0 * params.separation * std::pow(static_cast<double>(k), 1.0 / static_cast<double>(params.dim));
  std::uniform_real_distribution<double> box(0.0, 1.0);
  std::vector<std::vector<double>> centers;
  std::size_t tries = 0;
  while (centers.size() < k) {
    if (++tries > 100000) {
      throw ParameterError("could not place " + std::to_string(k) + " cluster centers at separation " +
                           std::to_string(params.separation) + "; use a smaller separation or a higher dimension");
    }
    std::vector<double> c(params.dim);
    for (double& x : c) x = side * box(rng);
    bool ok = true;
    for (const auto& o : centers) {
      double s = 0.0;
      for (std::size_t t = 0; t < params.dim; ++t) s += (c[t] - o[t]) * (c[t] - o[t]);
      if (std::sqrt(s) < params.separation) {
        ok = false;
        break;
      }
    }
    if (ok) centers.push_back(std::move(c));
  }

  GeneratedInstance out;
  std::vector<double> coords;
  coords.reserve(params.m * params.dim);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t count = params.m / k + (c < params.m % k ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i) {
      const auto off = uniform_in_ball(rng, params.dim, params.radius);
      for (std::size_t t = 0; t < params.dim; ++t) coords.push_back(centers[c][t] + off[t]);
      out.cluster.push_back(c);
    }
  }
  out.points = PointSet(params.dim, std::move(coords));
  out.dist = out.points.euclidean();
  return out;
}

GeneratedInstance generate_uniform(std::size_t m, std::size_t dim, std::uint64_t seed) {
  if (m < 2) throw ParameterError("uniform generator needs m >= 2");
  if (dim < 1) throw ParameterError("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> coords(m * dim);
  for (double& x : coords) x = unif(rng);
  GeneratedInstance out;
  out.points = PointSet(dim, std::move(coords));
  out.dist = out.points.euclidean();
  out.cluster.assign(m, 0);
  return out;
}

ExperimentInstance pmed_instance(const std::string& id, const EdgeGraph& g, std::size_t m_prime) {
  const DistanceMatrix full = floyd_warshall(g);
  const std::size_t m = std::min(m_prime, g.n);
  if (m < 1) throw ParameterError("sub-sample size must be positive");
  std::vector<std::size_t> prefix(m);
  for (std::size_t i = 0; i < m; ++i) prefix[i] = i;
  ExperimentInstance inst;
  inst.id = id;
  inst.dist = full.submatrix(prefix);
  inst.family = "pmed";
  inst.m_full = g.n;
  return inst;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string weight_param(const WeightSpec& spec, std::size_t m) {
  switch (spec.family) {
    case WeightFamily::KSum: return std::to_string(spec.resolve_k(m));
    case WeightFamily::Centdian: return format_number(spec.gamma);
    default: return "";
  }
}

struct InstanceStats {
  double dip = 0.0;
  double pvalue = 0.0;
  bool free_of_equidistance = false;
  std::string error;
};

}  // namespace

ExperimentResult run_experiment(const std::vector<ExperimentInstance>& instances, const ExperimentConfig& config) {
  ExperimentResult result;
  const std::size_t ni = instances.size();

  std::vector<InstanceStats> stats(ni);
  for (std::size_t k = 0; k < ni; ++k) {
    try {
      const auto sample = clusterability_sample(instances[k].dist, config.sample_mode, config.mds_threshold);
      stats[k].dip = dip_statistic(sample).dip;
      stats[k].pvalue = dip_pvalue(sample, config.bootstrap, config.seed + k, config.jobs);
      stats[k].free_of_equidistance = is_free_of_equidistance(instances[k].dist);
    } catch (const std::exception& e) {
      stats[k].error = e.what();
      stats[k].dip = stats[k].pvalue = std::nan("");
    }
  }
  std::vector<std::string> label_dip(ni, "middle"), label_p(ni, "middle");
  {
    std::vector<DipEntry> entries;
    std::vector<std::size_t> which;
    for (std::size_t k = 0; k < ni; ++k) {
      if (!stats[k].error.empty()) continue;
      entries.push_back({instances[k].id, stats[k].dip, stats[k].pvalue});
      which.push_back(k);
    }
    if (entries.size() >= 2) {
      const auto ld = classify_collection(entries, LabelBasis::DipStatistic);
      const auto lp = classify_collection(entries, LabelBasis::DipPvalue);
      for (std::size_t e = 0; e < which.size(); ++e) {
        label_dip[which[e]] = to_string(ld[e]);
        label_p[which[e]] = to_string(lp[e]);
      }
    }
  }

  struct Job {
    std::size_t inst, weight, p;
  };
  std::vector<Job> jobs;
  for (std::size_t k = 0; k < ni; ++k)
    for (std::size_t w = 0; w < config.weights.size(); ++w)
      for (std::size_t q = 0; q < config.p_values.size(); ++q) jobs.push_back({k, w, q});

  result.rows.resize(jobs.size());
  auto run_one = [&](std::size_t idx) {
    const Job& job = jobs[idx];
    const ExperimentInstance& src = instances[job.inst];
    const WeightSpec& spec = config.weights[job.weight];
    ExperimentRow& row = result.rows[idx];
    row.id = src.id;
    row.m = src.dist.size();
    row.p = config.p_values[job.p];
    row.family = to_string(spec.family);
    row.instance_family = src.family;
    row.m_full = src.m_full ? src.m_full : row.m;
    row.dip = stats[job.inst].dip;
    row.dip_pvalue = stats[job.inst].pvalue;
    row.label_dip = label_dip[job.inst];
    row.label_pvalue = label_p[job.inst];
    row.free_of_equidistance = stats[job.inst].free_of_equidistance;
    try {
      row.param = weight_param(spec, row.m);
      Instance inst(src.dist, make_weights(spec, row.m), row.p, src.points);
      const RecoveryReport rep = recovery_status(inst, config.recovery);
      row.v_ip = rep.v_ip;
      row.v_lp = rep.v_lp;
      row.gap_lp = rep.gap_lp;
      row.gap_lp_root = rep.gap_lp;
      row.recovered = rep.recovered;
      row.vertex_integral = rep.vertex_integral;
      if (config.timings) {
        row.cpu_enum = rep.seconds_enumeration;
        row.cpu_lp = rep.seconds_lp;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.v_ip = row.v_lp = row.gap_lp = row.gap_lp_root = std::nan("");
    }
  };

  const unsigned workers = std::max(1u, config.jobs);
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < jobs.size(); i += workers) run_one(i);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<double> grid;
  for (int e = -8; e <= 8; ++e) grid.push_back(std::pow(10.0, 0.5 * e));
  for (const WeightSpec& spec : config.weights) {
    ProfileSeries s;
    s.family = spec.label();
    if (std::any_of(result.profiles.begin(), result.profiles.end(), [&](const ProfileSeries& o) { return o.family == s.family; }))
      continue;
    s.thresholds = grid;
    std::vector<double> times;
    std::size_t total = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (config.weights[jobs[i].weight].label() != s.family) continue;
      ++total;
      if (result.rows[i].error.empty()) times.push_back(result.rows[i].cpu_enum + result.rows[i].cpu_lp);
    }
    for (double t : grid) {
      const auto solved = std::count_if(times.begin(), times.end(), [&](double x) { return x <= t; });
      s.fraction.push_back(total ? static_cast<double>(solved) / static_cast<double>(total) : 0.0);
    }
    result.profiles.push_back(std::move(s));
  }
  return result;
}

const std::vector<std::string>& experiment_columns() {
  static const std::vector<std::string> cols = {
      "id",       "m",          "p",           "family",          "param",     "instance_family",
      "v_ip",     "v_lp",       "gap_lp",      "gap_lp_root",     "recovered", "vertex_integral",
      "cpu_enum", "cpu_lp",     "dip",         "dip_pvalue",      "label_dip", "label_pvalue",
      "free_of_equidistance", "m_full", "error"};
  return cols;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string num_or_empty(double v) { return std::isnan(v) ? "" : format_number(v); }

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  const auto& cols = experiment_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    out << csv_field(r.id) << ',' << r.m << ',' << r.p << ',' << r.family << ',' << r.param << ','
        << r.instance_family << ',' << num_or_empty(r.v_ip) << ',' << num_or_empty(r.v_lp) << ','
        << num_or_empty(r.gap_lp) << ',' << num_or_empty(r.gap_lp_root) << ',' << (ok ? flag(r.recovered) : "")
        << ',' << (ok ? flag(r.vertex_integral) : "") << ',' << format_number(r.cpu_enum) << ','
        << format_number(r.cpu_lp) << ',' << num_or_empty(r.dip) << ',' << num_or_empty(r.dip_pvalue) << ','
        << r.label_dip << ',' << r.label_pvalue << ',' << flag(r.free_of_equidistance) << ',' << r.m_full << ','
        << csv_field(r.error) << '\n';
  }
}

void write_experiment_json(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    return std::stod(format_number(v));
  };
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["m"] = r.m;
    j["p"] = r.p;
    j["family"] = r.family;
    j["param"] = r.param;
    j["instance_family"] = r.instance_family;
    j["v_ip"] = num(r.v_ip);
    j["v_lp"] = num(r.v_lp);
    j["gap_lp"] = num(r.gap_lp);
    j["gap_lp_root"] = num(r.gap_lp_root);
    j["recovered"] = ok ? nlohmann::json(r.recovered) : nlohmann::json(nullptr);
    j["vertex_integral"] = ok ? nlohmann::json(r.vertex_integral) : nlohmann::json(nullptr);
    j["cpu_enum"] = num(r.cpu_enum);
    j["cpu_lp"] = num(r.cpu_lp);
    j["dip"] = num(r.dip);
    j["dip_pvalue"] = num(r.dip_pvalue);
    j["label_dip"] = r.label_dip;
    j["label_pvalue"] = r.label_pvalue;
    j["free_of_equidistance"] = r.free_of_equidistance;
    j["m_full"] = r.m_full;
    j["error"] = r.error;
    out << j.dump() << '\n';
  }
}

void write_profile(std::ostream& out, const ProfileSeries& series) {
  out << "threshold_seconds,fraction_solved\n";
  for (std::size_t k = 0; k < series.thresholds.size(); ++k)
    out << format_number(series.thresholds[k]) << ',' << format_number(series.fraction[k]) << '\n';
}

}  // namespace domp
